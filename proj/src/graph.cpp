#include "twvrp/graph.hpp"

namespace twvrp {

void Graph::validate(bool allow_loops) const {
  if (n < 0)
    throw ValidationError("n: must be nonnegative");
  for (size_t i = 0; i < edges.size(); ++i) {
    const EdgeRec &e = edges[i];
    const std::string path = "edges[" + std::to_string(i) + "]";
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw ValidationError(path + ": vertex id out of range [0," + std::to_string(n) + ")");
    if (e.u == e.v && !allow_loops)
      throw ValidationError(path + ": self-loops are not allowed");
    if (e.w < 0)
      throw ValidationError(path + ": weight must be nonnegative");
    if (e.mult < 1)
      throw ValidationError(path + ": multiplicity must be positive");
  }
}

long long Graph::edge_copy_count() const {
  long long total = 0;
  for (const EdgeRec &e : edges)
    total += e.mult;
  return total;
}

std::vector<std::vector<std::pair<Vertex, int>>> Graph::adjacency() const {
  std::vector<std::vector<std::pair<Vertex, int>>> adj(n);
  for (size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].u].push_back({edges[i].v, static_cast<int>(i)});
    adj[edges[i].v].push_back({edges[i].u, static_cast<int>(i)});
  }
  return adj;
}

Weight checked_add(Weight a, Weight b) {
  if (a > kInfWeight - b)
    throw std::overflow_error("weight overflow");
  return a + b;
}

} // namespace twvrp
