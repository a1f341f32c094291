#ifndef TWVRP_GRAPH_HPP
#define TWVRP_GRAPH_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace twvrp {

using Vertex = int;
using Weight = long long;

constexpr Weight kInfWeight = std::numeric_limits<Weight>::max() / 4;

// Input errors (schema violations, bad ids, variant/field mismatches).
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string &msg) : std::runtime_error(msg) {}
};

// Raised when an exact solver refuses an instance above its size caps.
class ScaleGuardError : public std::runtime_error {
public:
  explicit ScaleGuardError(const std::string &msg) : std::runtime_error(msg) {}
};

// One edge entry of the instance file. Parallel edges are expressed via
// mult; weights are nonnegative integers.
struct EdgeRec {
  Vertex u = 0;
  Vertex v = 0;
  Weight w = 0;
  int mult = 1;
};

struct Graph {
  int n = 0;
  std::vector<EdgeRec> edges;

  void validate(bool allow_loops = false) const;

  // Total number of parallel edges (sum of multiplicities).
  long long edge_copy_count() const;

  // Simple-graph adjacency (one neighbor entry per edge record).
  std::vector<std::vector<std::pair<Vertex, int>>> adjacency() const;
};

// A multigraph whose edges are individually addressable copies, as consumed
// by the tree-decomposition dynamic programs. orig_edge points back to the
// instance edge record that spawned the copy.
struct EdgeCopy {
  Vertex u = 0;
  Vertex v = 0;
  Weight w = 0;
  int orig_edge = -1;
};

struct Multigraph {
  int n = 0;
  std::vector<EdgeCopy> copies;
};

Weight checked_add(Weight a, Weight b);

} // namespace twvrp

#endif
