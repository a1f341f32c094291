#include "twvrp/partition.hpp"

#include <algorithm>
#include <cassert>

namespace twvrp {

namespace {

int uf_find(std::vector<int> &parent, int x) {
  while (parent[x] != x)
    x = parent[x] = parent[parent[x]];
  return x;
}

} // namespace

Partition::Partition(std::vector<Vertex> universe) : universe_(std::move(universe)) {
  assert(std::is_sorted(universe_.begin(), universe_.end()));
  rep_.resize(universe_.size());
  for (size_t i = 0; i < rep_.size(); ++i)
    rep_[i] = static_cast<int>(i);
}

void Partition::canonicalize(std::vector<int> &parent) {
  rep_.assign(universe_.size(), 0);
  for (size_t i = 0; i < universe_.size(); ++i)
    rep_[i] = uf_find(parent, static_cast<int>(i));
  // parent roots are arbitrary; remap to the minimum position per block
  std::vector<int> min_pos(universe_.size(), -1);
  for (size_t i = 0; i < universe_.size(); ++i)
    if (min_pos[rep_[i]] < 0)
      min_pos[rep_[i]] = static_cast<int>(i);
  for (size_t i = 0; i < universe_.size(); ++i)
    rep_[i] = min_pos[rep_[i]];
}

Partition Partition::singleton_except(std::vector<Vertex> universe, const std::vector<Vertex> &v) {
  Partition p(std::move(universe));
  if (v.empty())
    return p;
  std::vector<int> parent(p.universe_.size());
  for (size_t i = 0; i < parent.size(); ++i)
    parent[i] = static_cast<int>(i);
  int first = p.position_of(v[0]);
  if (first < 0)
    throw ValidationError("singleton_except: element not in universe");
  for (size_t i = 1; i < v.size(); ++i) {
    int pos = p.position_of(v[i]);
    if (pos < 0)
      throw ValidationError("singleton_except: element not in universe");
    parent[uf_find(parent, pos)] = uf_find(parent, first);
  }
  p.canonicalize(parent);
  return p;
}

Partition Partition::from_blocks(std::vector<Vertex> universe,
                                 const std::vector<std::vector<Vertex>> &blocks) {
  Partition p(std::move(universe));
  std::vector<int> parent(p.universe_.size());
  for (size_t i = 0; i < parent.size(); ++i)
    parent[i] = static_cast<int>(i);
  std::vector<bool> seen(p.universe_.size(), false);
  for (const auto &block : blocks) {
    if (block.empty())
      throw ValidationError("from_blocks: empty block");
    int first = p.position_of(block[0]);
    for (Vertex x : block) {
      int pos = p.position_of(x);
      if (pos < 0)
        throw ValidationError("from_blocks: element not in universe");
      if (seen[pos])
        throw ValidationError("from_blocks: blocks are not disjoint");
      seen[pos] = true;
      parent[uf_find(parent, pos)] = uf_find(parent, first);
    }
  }
  for (bool s : seen)
    if (!s)
      throw ValidationError("from_blocks: blocks do not cover the universe");
  p.canonicalize(parent);
  return p;
}

int Partition::position_of(Vertex v) const {
  auto it = std::lower_bound(universe_.begin(), universe_.end(), v);
  if (it == universe_.end() || *it != v)
    return -1;
  return static_cast<int>(it - universe_.begin());
}

bool Partition::same_block(Vertex u, Vertex v) const {
  int a = position_of(u), b = position_of(v);
  if (a < 0 || b < 0)
    throw ValidationError("same_block: vertex not in universe");
  return rep_[a] == rep_[b];
}

int Partition::block_count() const {
  int count = 0;
  for (size_t i = 0; i < rep_.size(); ++i)
    if (rep_[i] == static_cast<int>(i))
      ++count;
  return count;
}

std::vector<std::vector<Vertex>> Partition::blocks() const {
  std::vector<std::vector<Vertex>> out;
  std::vector<int> block_of(rep_.size(), -1);
  for (size_t i = 0; i < rep_.size(); ++i) {
    if (block_of[rep_[i]] < 0) {
      block_of[rep_[i]] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[block_of[rep_[i]]].push_back(universe_[i]);
  }
  return out;
}

Partition Partition::coarsen_join(const Partition &other) const {
  if (universe_ != other.universe_)
    throw ValidationError("coarsen_join: universe mismatch");
  Partition out(universe_);
  std::vector<int> parent(universe_.size());
  for (size_t i = 0; i < parent.size(); ++i)
    parent[i] = static_cast<int>(i);
  for (size_t i = 0; i < universe_.size(); ++i) {
    parent[uf_find(parent, static_cast<int>(i))] = uf_find(parent, rep_[i]);
    parent[uf_find(parent, static_cast<int>(i))] = uf_find(parent, other.rep_[i]);
  }
  out.canonicalize(parent);
  return out;
}

Partition Partition::merge(Vertex u, Vertex v) const {
  int a = position_of(u), b = position_of(v);
  if (a < 0 || b < 0)
    throw ValidationError("merge: vertex not in universe");
  Partition out(universe_);
  std::vector<int> parent = rep_;
  parent[uf_find(parent, a)] = uf_find(parent, b);
  out.canonicalize(parent);
  return out;
}

Partition Partition::restrict_to(const std::vector<Vertex> &v) const {
  std::vector<Vertex> sub = v;
  std::sort(sub.begin(), sub.end());
  for (Vertex x : sub)
    if (position_of(x) < 0)
      throw ValidationError("restrict: element not in universe");
  Partition out(sub);
  std::vector<int> parent(sub.size());
  for (size_t i = 0; i < sub.size(); ++i)
    parent[i] = static_cast<int>(i);
  // connect positions of sub that share a block here
  std::unordered_map<int, int> first_by_rep;
  for (size_t i = 0; i < sub.size(); ++i) {
    int pos = position_of(sub[i]);
    auto [it, fresh] = first_by_rep.try_emplace(rep_[pos], static_cast<int>(i));
    if (!fresh)
      parent[uf_find(parent, static_cast<int>(i))] = uf_find(parent, it->second);
  }
  out.canonicalize(parent);
  return out;
}

Partition Partition::extend_to(const std::vector<Vertex> &v) const {
  std::vector<Vertex> sup = v;
  std::sort(sup.begin(), sup.end());
  for (Vertex x : universe_)
    if (!std::binary_search(sup.begin(), sup.end(), x))
      throw ValidationError("extend: target universe does not contain the current one");
  Partition out(sup);
  std::vector<int> parent(sup.size());
  for (size_t i = 0; i < sup.size(); ++i)
    parent[i] = static_cast<int>(i);
  std::unordered_map<int, int> first_by_rep;
  for (size_t i = 0; i < sup.size(); ++i) {
    int pos = position_of(sup[i]);
    if (pos < 0)
      continue;
    auto [it, fresh] = first_by_rep.try_emplace(rep_[pos], static_cast<int>(i));
    if (!fresh)
      parent[uf_find(parent, static_cast<int>(i))] = uf_find(parent, it->second);
  }
  out.canonicalize(parent);
  return out;
}

bool Partition::finer_than(const Partition &other) const {
  if (universe_ != other.universe_)
    throw ValidationError("finer_than: universe mismatch");
  for (size_t i = 0; i < rep_.size(); ++i)
    if (other.rep_[i] != other.rep_[rep_[i]])
      return false;
  return true;
}

uint64_t MarkedPartitionSet::key_hash(const Partition &p, uint64_t marked) {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  for (int r : p.reps())
    mix(static_cast<uint64_t>(r) + 1);
  mix(marked * 2 + 1);
  return h;
}

void MarkedPartitionSet::insert_min(MarkedPartition mp) {
  assert(mp.partition.universe() == universe_);
  uint64_t h = key_hash(mp.partition, mp.marked);
  auto it = index_.find(h);
  while (it != index_.end()) {
    MarkedPartition &existing = entries_[it->second];
    if (existing.partition == mp.partition && existing.marked == mp.marked) {
      if (mp.weight < existing.weight)
        existing.weight = mp.weight;
      return;
    }
    // hash collision: fall through to linear handling
    ++h;
    it = index_.find(h);
  }
  index_[h] = static_cast<int>(entries_.size());
  entries_.push_back(std::move(mp));
}

std::optional<Weight> MarkedPartitionSet::weight_of(const Partition &p, uint64_t marked) const {
  uint64_t h = key_hash(p, marked);
  auto it = index_.find(h);
  while (it != index_.end()) {
    const MarkedPartition &e = entries_[it->second];
    if (e.partition == p && e.marked == marked)
      return e.weight;
    ++h;
    it = index_.find(h);
  }
  return std::nullopt;
}

MarkedPartitionSet rmc(const MarkedPartitionSet &a) {
  MarkedPartitionSet out(a.universe());
  for (const MarkedPartition &mp : a.entries())
    out.insert_min(mp);
  return out;
}

MarkedPartitionSet union_min(const MarkedPartitionSet &a, const MarkedPartitionSet &c) {
  if (!a.entries().empty() && !c.entries().empty() && a.universe() != c.universe())
    throw ValidationError("union_min: universe mismatch");
  MarkedPartitionSet out(a.entries().empty() ? c.universe() : a.universe());
  for (const MarkedPartition &mp : a.entries())
    out.insert_min(mp);
  for (const MarkedPartition &mp : c.entries())
    out.insert_min(mp);
  return out;
}

MarkedPartitionSet shift(Weight w, const MarkedPartitionSet &a) {
  MarkedPartitionSet out(a.universe());
  for (const MarkedPartition &mp : a.entries()) {
    MarkedPartition next = mp;
    next.weight = checked_add(next.weight, w);
    out.insert_min(std::move(next));
  }
  return out;
}

namespace {

// Remaps a block-rep bitmask after the partition changed, marking every new
// block that contains at least one previously marked block (the blockwise
// Sup(B) filter).
uint64_t remap_marks(const Partition &before, uint64_t marked, const Partition &after) {
  uint64_t out = 0;
  for (size_t i = 0; i < before.size(); ++i) {
    if (!(marked >> i & 1))
      continue;
    // position i is a rep of a marked block; find the containing block now
    int pos = after.position_of(before.universe()[i]);
    assert(pos >= 0);
    out |= 1ull << after.reps()[pos];
  }
  return out;
}

} // namespace

MarkedPartitionSet glue(Vertex u, Vertex v, const MarkedPartitionSet &a,
                        std::optional<Weight> edge_weight) {
  MarkedPartitionSet out(a.universe());
  for (const MarkedPartition &mp : a.entries()) {
    if (mp.partition.position_of(u) < 0 || mp.partition.position_of(v) < 0)
      throw ValidationError("glue: vertex not in universe");
    MarkedPartition next;
    next.partition = mp.partition.merge(u, v);
    next.marked = remap_marks(mp.partition, mp.marked, next.partition);
    next.weight = edge_weight ? checked_add(mp.weight, *edge_weight) : mp.weight;
    out.insert_min(std::move(next));
  }
  return out;
}

MarkedPartitionSet insert_vertices(const std::vector<Vertex> &v, const std::vector<Vertex> &depots,
                                   const MarkedPartitionSet &a) {
  std::vector<Vertex> universe = a.universe();
  universe.insert(universe.end(), v.begin(), v.end());
  std::sort(universe.begin(), universe.end());
  if (std::adjacent_find(universe.begin(), universe.end()) != universe.end())
    throw ValidationError("insert: vertex already in universe");

  MarkedPartitionSet out(universe);
  for (const MarkedPartition &mp : a.entries()) {
    MarkedPartition next;
    next.partition = mp.partition.extend_to(universe);
    next.marked = remap_marks(mp.partition, mp.marked, next.partition);
    for (Vertex x : v)
      if (std::binary_search(depots.begin(), depots.end(), x)) {
        int pos = next.partition.position_of(x);
        next.marked |= 1ull << next.partition.reps()[pos];
      }
    next.weight = mp.weight;
    out.insert_min(std::move(next));
  }
  return out;
}

namespace {

std::vector<Vertex> universe_minus(const std::vector<Vertex> &universe,
                                   const std::vector<Vertex> &v) {
  std::vector<Vertex> rest;
  for (Vertex x : universe)
    if (std::find(v.begin(), v.end(), x) == v.end())
      rest.push_back(x);
  return rest;
}

} // namespace

MarkedPartitionSet project(const std::vector<Vertex> &v, const MarkedPartitionSet &a) {
  std::vector<Vertex> rest = universe_minus(a.universe(), v);
  MarkedPartitionSet out(rest);
  for (const MarkedPartition &mp : a.entries()) {
    // every removed vertex needs a surviving co-block partner
    bool ok = true;
    for (Vertex x : v) {
      int pos = mp.partition.position_of(x);
      if (pos < 0)
        throw ValidationError("project: vertex not in universe");
      bool partner = false;
      for (Vertex y : rest)
        if (mp.partition.same_block(x, y)) {
          partner = true;
          break;
        }
      if (!partner) {
        ok = false;
        break;
      }
    }
    if (!ok)
      continue;
    MarkedPartition next;
    next.partition = mp.partition.restrict_to(rest);
    next.marked = 0;
    for (size_t i = 0; i < mp.partition.size(); ++i) {
      if (!(mp.marked >> i & 1))
        continue;
      Vertex member = mp.partition.universe()[i];
      // the mark survives on the shrunken block; find any surviving member
      for (Vertex y : rest)
        if (mp.partition.same_block(member, y)) {
          int pos = next.partition.position_of(y);
          next.marked |= 1ull << next.partition.reps()[pos];
          break;
        }
    }
    next.weight = mp.weight;
    out.insert_min(std::move(next));
  }
  return out;
}

MarkedPartitionSet detach(const std::vector<Vertex> &v, const MarkedPartitionSet &a) {
  std::vector<Vertex> rest = universe_minus(a.universe(), v);
  MarkedPartitionSet out(rest);
  for (const MarkedPartition &mp : a.entries()) {
    bool ok = true;
    for (const auto &block : mp.partition.blocks()) {
      bool meets = false, inside = true;
      for (Vertex x : block) {
        if (std::find(v.begin(), v.end(), x) != v.end())
          meets = true;
        else
          inside = false;
      }
      if (!meets)
        continue;
      int rep_pos = mp.partition.position_of(block[0]);
      bool marked = mp.marked >> mp.partition.reps()[rep_pos] & 1;
      if (!inside || !marked) {
        ok = false;
        break;
      }
    }
    if (!ok)
      continue;
    MarkedPartition next;
    next.partition = mp.partition.restrict_to(rest);
    next.marked = 0;
    for (size_t i = 0; i < mp.partition.size(); ++i) {
      if (!(mp.marked >> i & 1))
        continue;
      Vertex member = mp.partition.universe()[i];
      if (std::find(v.begin(), v.end(), member) != v.end())
        continue; // fully detached block, mark disappears with it
      int pos = next.partition.position_of(member);
      next.marked |= 1ull << next.partition.reps()[pos];
    }
    next.weight = mp.weight;
    out.insert_min(std::move(next));
  }
  return out;
}

MarkedPartitionSet join_sets(const MarkedPartitionSet &a, const MarkedPartitionSet &c) {
  if (!a.entries().empty() && !c.entries().empty() && a.universe() != c.universe())
    throw ValidationError("join: universe mismatch");
  MarkedPartitionSet out(a.universe());
  for (const MarkedPartition &x : a.entries())
    for (const MarkedPartition &y : c.entries()) {
      MarkedPartition next;
      next.partition = x.partition.coarsen_join(y.partition);
      next.marked = remap_marks(x.partition, x.marked, next.partition) |
                    remap_marks(y.partition, y.marked, next.partition);
      next.weight = checked_add(x.weight, y.weight);
      out.insert_min(std::move(next));
    }
  return out;
}

} // namespace twvrp
