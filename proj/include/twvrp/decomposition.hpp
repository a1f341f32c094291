#ifndef TWVRP_DECOMPOSITION_HPP
#define TWVRP_DECOMPOSITION_HPP

#include <string>
#include <vector>

#include "twvrp/graph.hpp"

namespace twvrp {

struct TreeDecomposition {
  int graph_n = 0;
  std::vector<std::vector<Vertex>> bags; // sorted vertex sets
  std::vector<std::pair<int, int>> tree_edges;

  int width() const;
};

struct DecompositionCheck {
  bool valid = false;
  std::vector<std::string> violations;
};

DecompositionCheck validate_decomposition(const TreeDecomposition &td, const Graph &g);

// Min-fill elimination ordering; handles disconnected graphs by chaining
// component decompositions under an empty bag.
TreeDecomposition heuristic_decompose(const Graph &g);

// PACE-style .td format: "s td <#bags> <width+1> <n>", "b <id> <vertices>"
// lines and tree edge lines. Files are 1-based, internal ids 0-based.
TreeDecomposition parse_td(const std::string &text);
std::string emit_td(const TreeDecomposition &td);

enum class NodeKind { Leaf, IntroduceVertex, IntroduceEdge, Forget, Join };

struct NiceNode {
  NodeKind kind = NodeKind::Leaf;
  std::vector<Vertex> bag; // sorted
  Vertex vertex = -1;      // IntroduceVertex / Forget
  int edge_copy = -1;      // IntroduceEdge: index into Multigraph::copies
  int child1 = -1;
  int child2 = -1;
};

// Rooted nice tree decomposition in postorder (children precede parents,
// node order is a valid evaluation order). Every edge copy of the given
// multigraph has exactly one IntroduceEdge node.
struct NiceDecomposition {
  std::vector<NiceNode> nodes;
  int root = -1;

  int width() const;
};

NiceDecomposition nicify(const TreeDecomposition &td, const Multigraph &g);

DecompositionCheck validate_nice(const NiceDecomposition &nd, const Multigraph &g);

} // namespace twvrp

#endif
