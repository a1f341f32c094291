#include <doctest.h>

#include <random>

#include "naive_partition.hpp"
#include "twvrp/partition.hpp"

using namespace twvrp;

namespace {

naive::Blocks to_naive(const Partition &p) {
  naive::Blocks out;
  for (const auto &block : p.blocks())
    out.insert(naive::Block(block.begin(), block.end()));
  return out;
}

naive::Set to_naive(const MarkedPartitionSet &s) {
  naive::Set out;
  for (const MarkedPartition &mp : s.entries()) {
    naive::Blocks marks;
    auto blocks = mp.partition.blocks();
    for (const auto &block : blocks) {
      int rep = mp.partition.reps()[mp.partition.position_of(block.front())];
      if (mp.marked >> rep & 1)
        marks.insert(naive::Block(block.begin(), block.end()));
    }
    out[{to_naive(mp.partition), marks}] = mp.weight;
  }
  return out;
}

Partition from_naive(const std::vector<Vertex> &universe, const naive::Blocks &blocks) {
  std::vector<std::vector<Vertex>> bs;
  for (const auto &b : blocks)
    bs.push_back(std::vector<Vertex>(b.begin(), b.end()));
  return Partition::from_blocks(universe, bs);
}

MarkedPartition from_naive_entry(const std::vector<Vertex> &universe, const naive::Entry &e) {
  MarkedPartition mp;
  mp.partition = from_naive(universe, e.partition);
  mp.marked = 0;
  for (const auto &b : e.marked) {
    int pos = mp.partition.position_of(*b.begin());
    mp.marked |= 1ull << mp.partition.reps()[pos];
  }
  mp.weight = e.weight;
  return mp;
}

// all marked partitions of the universe with a fixed weight
std::vector<naive::Entry> all_marked(const std::vector<Vertex> &universe, Weight w) {
  std::vector<naive::Entry> out;
  for (const naive::Blocks &p : naive::all_partitions(universe)) {
    std::vector<naive::Block> blocks(p.begin(), p.end());
    for (uint32_t mask = 0; mask < (1u << blocks.size()); ++mask) {
      naive::Blocks marks;
      for (size_t i = 0; i < blocks.size(); ++i)
        if (mask >> i & 1)
          marks.insert(blocks[i]);
      out.push_back({p, marks, w});
    }
  }
  return out;
}

} // namespace

TEST_CASE("paper coarsening example") {
  std::vector<Vertex> u = {1, 2, 3, 4, 5, 6};
  Partition p = Partition::from_blocks(u, {{1, 2}, {3, 4}, {5, 6}});
  Partition q = Partition::from_blocks(u, {{1}, {2, 3}, {4}, {5}, {6}});
  Partition r = p.coarsen_join(q);
  CHECK(to_naive(r) == naive::Blocks{{1, 2, 3, 4}, {5, 6}});
}

TEST_CASE("coarsen_join algebraic laws on random partitions") {
  std::mt19937 rng(7);
  for (int round = 0; round < 200; ++round) {
    int n = std::uniform_int_distribution<int>(1, 8)(rng);
    std::vector<Vertex> u(n);
    for (int i = 0; i < n; ++i)
      u[i] = i * 2; // non-contiguous ids
    auto random_partition = [&]() {
      std::vector<std::vector<Vertex>> blocks;
      for (Vertex v : u) {
        int where = std::uniform_int_distribution<int>(0, static_cast<int>(blocks.size()))(rng);
        if (where == static_cast<int>(blocks.size()))
          blocks.push_back({v});
        else
          blocks[where].push_back(v);
      }
      return Partition::from_blocks(u, blocks);
    };
    Partition p = random_partition(), q = random_partition(), r = random_partition();
    CHECK(p.coarsen_join(q) == q.coarsen_join(p));
    CHECK(p.coarsen_join(q).coarsen_join(r) == p.coarsen_join(q.coarsen_join(r)));
    CHECK(p.coarsen_join(p) == p);
    CHECK(p.finer_than(p.coarsen_join(q)));
    CHECK(Partition(u).coarsen_join(q) == q); // singletons are neutral
  }
}

TEST_CASE("restrict, extend, singleton_except basics") {
  std::vector<Vertex> u = {1, 2, 3};
  Partition p = Partition::from_blocks(u, {{1, 2}, {3}});
  CHECK(to_naive(p.restrict_to({1, 3})) == naive::Blocks{{1}, {3}});
  Partition single = Partition::from_blocks({1}, {{1}});
  CHECK(to_naive(single.extend_to({1, 2})) == naive::Blocks{{1}, {2}});
  CHECK(to_naive(Partition::singleton_except({1, 2, 3}, {1, 2})) == naive::Blocks{{1, 2}, {3}});
  CHECK(p.restrict_to({1, 2}).extend_to({1, 2, 3}).restrict_to({1, 2}) == p.restrict_to({1, 2}));
}

TEST_CASE("rmc keeps the minimum weight per key") {
  std::vector<Vertex> u = {1, 2};
  MarkedPartitionSet s(u);
  Partition p = Partition::from_blocks(u, {{1, 2}});
  s.insert_min({p, 1, 3});
  s.insert_min({p, 1, 5});
  CHECK(s.size() == 1);
  CHECK(s.entries()[0].weight == 3);
  s.insert_min({p, 0, 5}); // distinct mark set is a distinct key
  CHECK(s.size() == 2);
}

TEST_CASE("spec glue example: mark propagates to the merged block") {
  std::vector<Vertex> u = {1, 2};
  MarkedPartitionSet a(u);
  Partition p = Partition::from_blocks(u, {{1}, {2}});
  a.insert_min({p, 1ull << p.reps()[p.position_of(1)], 0});
  MarkedPartitionSet res = glue(1, 2, a);
  REQUIRE(res.size() == 1);
  CHECK(to_naive(res.entries()[0].partition) == naive::Blocks{{1, 2}});
  CHECK(res.entries()[0].marked != 0);
  CHECK(res.entries()[0].weight == 0);
}

TEST_CASE("spec detach examples") {
  std::vector<Vertex> u = {1, 2}; // 1 = v, 2 = u
  Partition p = Partition::from_blocks(u, {{1}, {2}});
  uint64_t mark_v = 1ull << p.reps()[p.position_of(1)];
  {
    MarkedPartitionSet a(u);
    a.insert_min({p, mark_v, 2});
    MarkedPartitionSet res = detach({1}, a);
    REQUIRE(res.size() == 1);
    CHECK(to_naive(res.entries()[0].partition) == naive::Blocks{{2}});
    CHECK(res.entries()[0].marked == 0);
    CHECK(res.entries()[0].weight == 2);
  }
  {
    MarkedPartitionSet a(u);
    a.insert_min({p, 0, 2}); // unmarked singleton is rejected
    CHECK(detach({1}, a).empty());
  }
  {
    MarkedPartitionSet a(u);
    a.insert_min({Partition::from_blocks(u, {{1, 2}}), 0, 2}); // partially deleted block
    CHECK(detach({1}, a).empty());
  }
}

TEST_CASE("spec project examples") {
  std::vector<Vertex> u = {1, 2}; // 2 = v
  {
    MarkedPartitionSet a(u);
    a.insert_min({Partition::from_blocks(u, {{1, 2}}), 0, 1});
    MarkedPartitionSet res = project({2}, a);
    REQUIRE(res.size() == 1);
    CHECK(to_naive(res.entries()[0].partition) == naive::Blocks{{1}});
  }
  {
    MarkedPartitionSet a(u);
    a.insert_min({Partition::from_blocks(u, {{1}, {2}}), 0, 1});
    CHECK(project({2}, a).empty());
  }
}

TEST_CASE("exhaustive agreement with the naive reference on universes up to 4") {
  for (int n = 1; n <= 4; ++n) {
    std::vector<Vertex> u;
    for (int i = 1; i <= n; ++i)
      u.push_back(i);
    std::vector<naive::Entry> entries = all_marked(u, 1);

    // unary operations, entry by entry
    for (const naive::Entry &e : entries) {
      MarkedPartitionSet a(u);
      a.insert_min(from_naive_entry(u, e));
      naive::Set na = naive::rmc({e});

      CHECK(to_naive(shift(5, a)) == naive::shift(5, na));
      CHECK(to_naive(glue(1, n, a, 7)) == naive::glue(1, n, na, 7));
      CHECK(to_naive(insert_vertices({99}, {99}, a)) == naive::ins({99}, {99}, na));
      CHECK(to_naive(insert_vertices({99}, {}, a)) == naive::ins({99}, {}, na));
      CHECK(to_naive(project({1}, a)) == naive::proj({1}, na));
      CHECK(to_naive(detach({1}, a)) == naive::detach({1}, na));
      if (n >= 2) {
        CHECK(to_naive(project({1, 2}, a)) == naive::proj({1, 2}, na));
        CHECK(to_naive(detach({1, 2}, a)) == naive::detach({1, 2}, na));
      }
    }

    // binary operations over pairs (weights chosen to exercise rmc)
    if (n <= 3) {
      for (size_t i = 0; i < entries.size(); ++i)
        for (size_t j = 0; j < entries.size(); ++j) {
          naive::Entry e1 = entries[i], e2 = entries[j];
          e1.weight = static_cast<Weight>(i % 3);
          e2.weight = static_cast<Weight>(j % 4);
          MarkedPartitionSet a(u), c(u);
          a.insert_min(from_naive_entry(u, e1));
          c.insert_min(from_naive_entry(u, e2));
          CHECK(to_naive(join_sets(a, c)) == naive::join(naive::rmc({e1}), naive::rmc({e2})));
          CHECK(to_naive(union_min(a, c)) ==
                naive::union_min(naive::rmc({e1}), naive::rmc({e2})));
        }
    }
  }
}

TEST_CASE("union_min laws and rmc idempotence") {
  std::vector<Vertex> u = {1, 2, 3};
  std::mt19937 rng(11);
  auto random_set = [&]() {
    MarkedPartitionSet s(u);
    auto entries = all_marked(u, 0);
    for (int i = 0; i < 5; ++i) {
      naive::Entry e = entries[std::uniform_int_distribution<size_t>(0, entries.size() - 1)(rng)];
      e.weight = std::uniform_int_distribution<int>(0, 6)(rng);
      s.insert_min(from_naive_entry(u, e));
    }
    return s;
  };
  for (int round = 0; round < 50; ++round) {
    MarkedPartitionSet a = random_set(), b = random_set(), c = random_set();
    CHECK(to_naive(union_min(a, b)) == to_naive(union_min(b, a)));
    CHECK(to_naive(union_min(union_min(a, b), c)) == to_naive(union_min(a, union_min(b, c))));
    CHECK(to_naive(rmc(a)) == to_naive(a));
  }
}
