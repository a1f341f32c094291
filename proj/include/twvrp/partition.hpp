#ifndef TWVRP_PARTITION_HPP
#define TWVRP_PARTITION_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "twvrp/graph.hpp"

namespace twvrp {

// A partition of a small ordered universe of vertices. Canonical form maps
// each universe position to the position of the minimum element of its
// block, which makes equality and hashing cheap.
class Partition {
public:
  Partition() = default;
  explicit Partition(std::vector<Vertex> universe); // all singletons

  // U[V]: one block V, singletons elsewhere.
  static Partition singleton_except(std::vector<Vertex> universe, const std::vector<Vertex> &v);

  static Partition from_blocks(std::vector<Vertex> universe,
                               const std::vector<std::vector<Vertex>> &blocks);

  const std::vector<Vertex> &universe() const { return universe_; }
  const std::vector<int> &reps() const { return rep_; }
  size_t size() const { return universe_.size(); }

  int position_of(Vertex v) const; // -1 when absent

  bool same_block(Vertex u, Vertex v) const;
  int block_count() const;
  std::vector<std::vector<Vertex>> blocks() const;

  // Finest common coarsening (requires equal universes).
  Partition coarsen_join(const Partition &other) const;

  // Merge the blocks containing u and v; returns the new block's rep position.
  Partition merge(Vertex u, Vertex v) const;

  Partition restrict_to(const std::vector<Vertex> &v) const;
  Partition extend_to(const std::vector<Vertex> &v) const;

  bool finer_than(const Partition &other) const; // P ⊑ Q

  bool operator==(const Partition &o) const { return universe_ == o.universe_ && rep_ == o.rep_; }

private:
  std::vector<Vertex> universe_; // sorted ascending
  std::vector<int> rep_;         // rep_[i] = position of min element of i's block

  void canonicalize(std::vector<int> &parent);
};

// A marked partition (P, B, w): partition of a bag subset, the set of
// depot-connected blocks, and the weight of a witnessing partial solution.
// Blocks are identified by the universe position of their minimum element,
// so the mark set is a bitmask over positions.
struct MarkedPartition {
  Partition partition;
  uint64_t marked = 0; // bits only at block rep positions
  Weight weight = 0;
};

// A set of marked partitions over a common universe, deduplicated per
// (partition, marked) key keeping the minimum weight.
class MarkedPartitionSet {
public:
  MarkedPartitionSet() = default;
  explicit MarkedPartitionSet(std::vector<Vertex> universe) : universe_(std::move(universe)) {}

  const std::vector<Vertex> &universe() const { return universe_; }
  const std::vector<MarkedPartition> &entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }

  // Inserts keeping the minimum weight per key (the rmc discipline).
  void insert_min(MarkedPartition mp);

  std::optional<Weight> weight_of(const Partition &p, uint64_t marked) const;

private:
  std::vector<Vertex> universe_;
  std::vector<MarkedPartition> entries_;
  std::unordered_map<uint64_t, int> index_;

  static uint64_t key_hash(const Partition &p, uint64_t marked);
  friend MarkedPartitionSet rmc(const MarkedPartitionSet &);
};

// The seven operations on sets of marked partitions.
MarkedPartitionSet rmc(const MarkedPartitionSet &a);
MarkedPartitionSet union_min(const MarkedPartitionSet &a, const MarkedPartitionSet &c);
MarkedPartitionSet shift(Weight w, const MarkedPartitionSet &a);
MarkedPartitionSet glue(Vertex u, Vertex v, const MarkedPartitionSet &a,
                        std::optional<Weight> edge_weight = std::nullopt);
MarkedPartitionSet insert_vertices(const std::vector<Vertex> &v, const std::vector<Vertex> &depots,
                                   const MarkedPartitionSet &a);
MarkedPartitionSet project(const std::vector<Vertex> &v, const MarkedPartitionSet &a);
MarkedPartitionSet detach(const std::vector<Vertex> &v, const MarkedPartitionSet &a);
MarkedPartitionSet join_sets(const MarkedPartitionSet &a, const MarkedPartitionSet &c);

} // namespace twvrp

#endif
