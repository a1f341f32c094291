#ifndef TWVRP_NAIVE_PARTITION_HPP
#define TWVRP_NAIVE_PARTITION_HPP

// Literal set-comprehension reference for the marked-partition operations,
// used as the oracle for the partition_algebra module. Kept deliberately
// naive: partitions are sets of sets, everything is recomputed from the
// definitions.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "twvrp/graph.hpp"

namespace twvrp::naive {

using Block = std::set<Vertex>;
using Blocks = std::set<Block>;

struct Entry {
  Blocks partition;
  Blocks marked;
  Weight weight;
};

// key (partition, marked) -> min weight
using Set = std::map<std::pair<Blocks, Blocks>, Weight>;

inline Blocks singletons(const std::set<Vertex> &universe) {
  Blocks out;
  for (Vertex v : universe)
    out.insert({v});
  return out;
}

// U[V]
inline Blocks singleton_except(const std::set<Vertex> &universe, const Block &v) {
  Blocks out;
  if (!v.empty())
    out.insert(v);
  for (Vertex x : universe)
    if (!v.count(x))
      out.insert({x});
  return out;
}

inline bool finer(const Blocks &p, const Blocks &q) {
  for (const Block &x : p) {
    bool inside = false;
    for (const Block &y : q)
      if (std::includes(y.begin(), y.end(), x.begin(), x.end()))
        inside = true;
    if (!inside)
      return false;
  }
  return true;
}

inline std::set<Vertex> universe_of(const Blocks &p) {
  std::set<Vertex> u;
  for (const Block &x : p)
    u.insert(x.begin(), x.end());
  return u;
}

// all partitions of the universe (Bell enumeration)
inline std::vector<Blocks> all_partitions(const std::vector<Vertex> &universe) {
  std::vector<Blocks> out;
  std::vector<std::vector<Vertex>> blocks;
  auto rec = [&](auto &&self, size_t i) -> void {
    if (i == universe.size()) {
      Blocks b;
      for (const auto &x : blocks)
        b.insert(Block(x.begin(), x.end()));
      out.push_back(b);
      return;
    }
    size_t count = blocks.size();
    for (size_t b = 0; b < count; ++b) {
      blocks[b].push_back(universe[i]);
      self(self, i + 1);
      blocks[b].pop_back();
    }
    blocks.push_back({universe[i]});
    self(self, i + 1);
    blocks.pop_back();
  };
  rec(rec, 0);
  return out;
}

// finest common coarsening by scanning all partitions
inline Blocks coarsen_join(const Blocks &p, const Blocks &q) {
  std::set<Vertex> u = universe_of(p);
  std::vector<Vertex> uv(u.begin(), u.end());
  Blocks best;
  bool have = false;
  for (const Blocks &r : all_partitions(uv)) {
    if (!finer(p, r) || !finer(q, r))
      continue;
    if (!have || finer(r, best)) {
      best = r;
      have = true;
    }
  }
  return best;
}

inline Set rmc(const std::vector<Entry> &entries) {
  Set out;
  for (const Entry &e : entries) {
    auto key = std::make_pair(e.partition, e.marked);
    auto it = out.find(key);
    if (it == out.end() || e.weight < it->second)
      out[key] = e.weight;
  }
  return out;
}

inline std::vector<Entry> to_entries(const Set &s) {
  std::vector<Entry> out;
  for (const auto &[key, w] : s)
    out.push_back({key.first, key.second, w});
  return out;
}

inline Set union_min(const Set &a, const Set &c) {
  std::vector<Entry> all = to_entries(a);
  for (const Entry &e : to_entries(c))
    all.push_back(e);
  return rmc(all);
}

inline Set shift(Weight w, const Set &a) {
  std::vector<Entry> out;
  for (const Entry &e : to_entries(a))
    out.push_back({e.partition, e.marked, e.weight + w});
  return rmc(out);
}

// P' ∩ Sup(B): blocks of p2 that contain some block of marked
inline Blocks sup_filter(const Blocks &p2, const Blocks &marked) {
  Blocks out;
  for (const Block &y : p2)
    for (const Block &x : marked)
      if (std::includes(y.begin(), y.end(), x.begin(), x.end())) {
        out.insert(y);
        break;
      }
  return out;
}

inline Set glue(Vertex u, Vertex v, const Set &a, Weight edge_weight) {
  std::vector<Entry> out;
  for (const Entry &e : to_entries(a)) {
    Blocks merged = coarsen_join(e.partition, singleton_except(universe_of(e.partition), {u, v}));
    out.push_back({merged, sup_filter(merged, e.marked), e.weight + edge_weight});
  }
  return rmc(out);
}

inline Set ins(const std::set<Vertex> &v, const std::set<Vertex> &depots, const Set &a) {
  std::vector<Entry> out;
  for (const Entry &e : to_entries(a)) {
    Entry next = e;
    for (Vertex x : v) {
      next.partition.insert({x});
      if (depots.count(x))
        next.marked.insert({x});
    }
    out.push_back(next);
  }
  return rmc(out);
}

inline Blocks restrict_blocks(const Blocks &p, const std::set<Vertex> &keep) {
  Blocks out;
  for (const Block &x : p) {
    Block nx;
    for (Vertex y : x)
      if (keep.count(y))
        nx.insert(y);
    if (!nx.empty())
      out.insert(nx);
  }
  return out;
}

inline Set proj(const std::set<Vertex> &v, const Set &a) {
  std::vector<Entry> out;
  for (const Entry &e : to_entries(a)) {
    std::set<Vertex> universe = universe_of(e.partition);
    std::set<Vertex> keep;
    for (Vertex x : universe)
      if (!v.count(x))
        keep.insert(x);
    bool ok = true;
    for (Vertex x : v) {
      bool partner = false;
      for (Vertex y : keep)
        if (finer(singleton_except(universe, {x, y}), e.partition))
          partner = true;
      if (!partner)
        ok = false;
    }
    if (!ok)
      continue;
    out.push_back({restrict_blocks(e.partition, keep), restrict_blocks(e.marked, keep), e.weight});
  }
  return rmc(out);
}

inline Set detach(const std::set<Vertex> &v, const Set &a) {
  std::vector<Entry> out;
  for (const Entry &e : to_entries(a)) {
    std::set<Vertex> universe = universe_of(e.partition);
    std::set<Vertex> keep;
    for (Vertex x : universe)
      if (!v.count(x))
        keep.insert(x);
    bool ok = true;
    for (const Block &x : e.partition) {
      bool meets = false;
      for (Vertex y : x)
        if (v.count(y))
          meets = true;
      if (!meets)
        continue;
      bool inside = std::all_of(x.begin(), x.end(), [&](Vertex y) { return v.count(y) > 0; });
      if (!inside || !e.marked.count(x))
        ok = false;
    }
    if (!ok)
      continue;
    out.push_back({restrict_blocks(e.partition, keep), restrict_blocks(e.marked, keep), e.weight});
  }
  return rmc(out);
}

inline Set join(const Set &a, const Set &c) {
  std::vector<Entry> out;
  for (const Entry &x : to_entries(a))
    for (const Entry &y : to_entries(c)) {
      Blocks merged = coarsen_join(x.partition, y.partition);
      Blocks marks = x.marked;
      marks.insert(y.marked.begin(), y.marked.end());
      out.push_back({merged, sup_filter(merged, marks), x.weight + y.weight});
    }
  return rmc(out);
}

} // namespace twvrp::naive

#endif
