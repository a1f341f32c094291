#ifndef TWVRP_BINPACKING_HPP
#define TWVRP_BINPACKING_HPP

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "twvrp/graph.hpp"

namespace twvrp {

struct BinPackingInstance {
  std::vector<Weight> sizes; // all positive, each <= capacity
  Weight capacity = 0;
  int bins = 0;
};

// Heterogeneous multidimensional fingerprint bin packing. Items carry a
// d-dimensional size and a fingerprint id; bins come in kinds with
// capacities, counts, and a validity predicate over the multiset of
// fingerprints placed in one bin. Every available bin exists in the
// partition, so a kind whose predicate rejects the empty multiset cannot
// have unused bins.
using FingerprintId = int;
using FingerprintMultiset = std::map<FingerprintId, int>;

struct HetItem {
  std::vector<Weight> size; // nonzero vector, dimension d
  FingerprintId fingerprint = 0;
};

struct HetBinKind {
  std::vector<Weight> capacity;
  int count = 0;
  std::function<bool(const FingerprintMultiset &)> valid;
};

struct HetInstance {
  int dims = 1;
  std::vector<HetItem> items;
  std::vector<HetBinKind> kinds;

  void validate() const;
};

// A configuration counts items per key (distinct size/fingerprint combo).
struct ItemKey {
  std::vector<Weight> size;
  FingerprintId fingerprint;

  bool operator<(const ItemKey &o) const {
    return std::tie(size, fingerprint) < std::tie(o.size, o.fingerprint);
  }
  bool operator==(const ItemKey &o) const {
    return size == o.size && fingerprint == o.fingerprint;
  }
};

using Configuration = std::map<ItemKey, int>;

// All feasible configurations of one bin kind: within capacity in every
// dimension and accepted by the kind's predicate. Count functions are
// bounded by the item census. The output size is asserted against the
// (\|B1\|_1^d + 1)^{|K|} bound.
std::vector<Configuration> enumerate_configurations(const HetInstance &inst, int kind);

struct HetSolution {
  // bins[i][j] = item indices placed into the j-th bin of kind i
  std::vector<std::vector<std::vector<int>>> bins;
};

// Exact search over per-kind configuration counts with memoization on the
// residual item census, in place of the ILP step.
std::optional<HetSolution> solve_het(const HetInstance &inst);

struct PlainSolution {
  std::vector<std::vector<int>> bins; // item indices per bin
};

std::optional<PlainSolution> solve_plain(const BinPackingInstance &inst);

// One walk endpoint pair with its depot bit.
struct EndpointPair {
  Vertex a = 0;
  Vertex b = 0;
  bool depot = false;
};

// True iff the multigraph with one edge per pair admits an Eulerian trail
// from u to v ((a,a) pairs are self-loops), the edges form one component
// touching u, and the depot-bit disjunction equals require_depot. The
// empty multiset is rejected: no walk can be merged out of nothing.
bool eulerian_trail_predicate(const std::vector<EndpointPair> &pairs, Vertex u, Vertex v,
                              bool require_depot);

} // namespace twvrp

#endif
