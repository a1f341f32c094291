#include "twvrp/binpacking.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <set>

namespace twvrp {

void HetInstance::validate() const {
  if (dims < 1)
    throw ValidationError("het: dimension must be positive");
  if (kinds.empty())
    throw ValidationError("het: needs at least one bin kind");
  Weight max_norm = 0;
  for (const HetBinKind &kind : kinds) {
    if (static_cast<int>(kind.capacity.size()) != dims)
      throw ValidationError("het: capacity dimension mismatch");
    Weight norm = 0;
    for (Weight c : kind.capacity) {
      if (c < 0)
        throw ValidationError("het: negative capacity");
      norm += c;
    }
    max_norm = std::max(max_norm, norm);
    if (kind.count < 0)
      throw ValidationError("het: negative bin count");
  }
  for (const HetItem &item : items) {
    if (static_cast<int>(item.size.size()) != dims)
      throw ValidationError("het: item dimension mismatch");
    Weight norm = 0;
    for (Weight s : item.size) {
      if (s < 0)
        throw ValidationError("het: negative item size");
      norm += s;
    }
    if (norm == 0)
      throw ValidationError("het: zero-size item");
    if (norm > max_norm)
      throw ValidationError("het: item larger than every bin");
  }
}

namespace {

struct Census {
  std::vector<ItemKey> keys;    // sorted
  std::vector<int> counts;      // aligned with keys
  std::vector<std::vector<int>> members; // item indices per key
};

Census build_census(const HetInstance &inst) {
  Census census;
  std::map<ItemKey, std::vector<int>> grouped;
  for (size_t i = 0; i < inst.items.size(); ++i)
    grouped[{inst.items[i].size, inst.items[i].fingerprint}].push_back(static_cast<int>(i));
  for (auto &[key, members] : grouped) {
    census.keys.push_back(key);
    census.counts.push_back(static_cast<int>(members.size()));
    census.members.push_back(members);
  }
  return census;
}

FingerprintMultiset config_fingerprints(const Census &census, const std::vector<int> &config) {
  FingerprintMultiset fps;
  for (size_t k = 0; k < config.size(); ++k)
    if (config[k] > 0)
      fps[census.keys[k].fingerprint] += config[k];
  return fps;
}

// configurations as count vectors aligned with the census keys
std::vector<std::vector<int>> enumerate_config_vectors(const HetInstance &inst,
                                                       const Census &census, int kind) {
  const HetBinKind &bin = inst.kinds[kind];
  std::vector<std::vector<int>> out;
  std::vector<int> config(census.keys.size(), 0);
  std::vector<Weight> used(inst.dims, 0);
  auto fits = [&](const ItemKey &key) {
    for (int d = 0; d < inst.dims; ++d)
      if (used[d] + key.size[d] > bin.capacity[d])
        return false;
    return true;
  };
  auto rec = [&](auto &&self, size_t k) -> void {
    if (k == census.keys.size()) {
      if (bin.valid(config_fingerprints(census, config)))
        out.push_back(config);
      return;
    }
    self(self, k + 1);
    for (int c = 1; c <= census.counts[k]; ++c) {
      if (!fits(census.keys[k]))
        break;
      for (int d = 0; d < inst.dims; ++d)
        used[d] += census.keys[k].size[d];
      config[k] = c;
      self(self, k + 1);
    }
    if (config[k] > 0) {
      for (int d = 0; d < inst.dims; ++d)
        used[d] -= census.keys[k].size[d] * config[k];
      config[k] = 0;
    }
  };
  rec(rec, 0);
  return out;
}

} // namespace

std::vector<Configuration> enumerate_configurations(const HetInstance &inst, int kind) {
  inst.validate();
  Census census = build_census(inst);
  std::vector<std::vector<int>> vectors = enumerate_config_vectors(inst, census, kind);

  // paper bound |C_i| <= (\|B1\|_1^d + 1)^{|K|}
  Weight max_norm = 0;
  for (const HetBinKind &k : inst.kinds) {
    Weight norm = std::accumulate(k.capacity.begin(), k.capacity.end(), Weight{0});
    max_norm = std::max(max_norm, norm);
  }
  long double bound = std::pow(static_cast<long double>(std::pow((long double)max_norm, inst.dims)) + 1.0L,
                               static_cast<long double>(census.keys.size()));
  if (static_cast<long double>(vectors.size()) > std::max(bound, 1.0L))
    throw std::logic_error("enumerate_configurations: configuration-count bound violated");

  std::vector<Configuration> out;
  for (const auto &vec : vectors) {
    Configuration c;
    for (size_t k = 0; k < vec.size(); ++k)
      if (vec[k] > 0)
        c[census.keys[k]] = vec[k];
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

struct SearchState {
  std::vector<int> residual;
  int kind;
  int bins_left;
  int min_config; // canonical: configuration indices non-increasing per kind

  bool operator<(const SearchState &o) const {
    return std::tie(residual, kind, bins_left, min_config) <
           std::tie(o.residual, o.kind, o.bins_left, o.min_config);
  }
};

} // namespace

std::optional<HetSolution> solve_het(const HetInstance &inst) {
  inst.validate();
  Census census = build_census(inst);
  size_t key_count = census.keys.size();

  std::vector<std::vector<std::vector<int>>> configs(inst.kinds.size());
  std::vector<bool> empty_ok(inst.kinds.size());
  for (size_t i = 0; i < inst.kinds.size(); ++i) {
    configs[i] = enumerate_config_vectors(inst, census, static_cast<int>(i));
    empty_ok[i] = inst.kinds[i].valid({});
    // order configurations by descending total count so full bins are tried
    // first; the all-zero configuration is equivalent to leaving a bin empty
    std::sort(configs[i].begin(), configs[i].end(),
              [](const std::vector<int> &a, const std::vector<int> &b) {
                int sa = std::accumulate(a.begin(), a.end(), 0);
                int sb = std::accumulate(b.begin(), b.end(), 0);
                return std::tie(sa, a) > std::tie(sb, b);
              });
    // drop the all-zero configuration; empty bins are handled by empty_ok
    configs[i].erase(std::remove_if(configs[i].begin(), configs[i].end(),
                                    [](const std::vector<int> &c) {
                                      return std::all_of(c.begin(), c.end(),
                                                         [](int x) { return x == 0; });
                                    }),
                     configs[i].end());
  }

  std::map<SearchState, bool> memo;
  std::vector<std::pair<int, int>> chosen; // (kind, config index) per used bin

  std::function<bool(std::vector<int> &, int, int, int)> search =
      [&](std::vector<int> &residual, int kind, int bins_left, int min_config) -> bool {
    bool done = std::all_of(residual.begin(), residual.end(), [](int x) { return x == 0; });
    if (kind == static_cast<int>(inst.kinds.size()))
      return done;
    if (done) {
      // leftover bins of every remaining kind must accept the empty multiset
      for (int i = kind; i < static_cast<int>(inst.kinds.size()); ++i) {
        int left = i == kind ? bins_left : inst.kinds[i].count;
        if (left > 0 && !empty_ok[i])
          return false;
      }
      return true;
    }
    // memo holds failures only; the first success unwinds the whole search,
    // so the winning path records its choices exactly once
    SearchState state{residual, kind, bins_left, min_config};
    if (memo.count(state))
      return false;

    bool ok = false;
    if (bins_left == 0) {
      ok = search(residual, kind + 1, kind + 1 < static_cast<int>(inst.kinds.size())
                                          ? inst.kinds[kind + 1].count
                                          : 0,
                  0);
    } else {
      // stop using this kind (remaining bins stay empty)
      if (empty_ok[kind]) {
        ok = search(residual, kind + 1,
                    kind + 1 < static_cast<int>(inst.kinds.size()) ? inst.kinds[kind + 1].count
                                                                   : 0,
                    0);
        if (ok)
          chosen.push_back({-1, -1}); // marker: no more bins of this kind
      }
      if (!ok) {
        for (int c = min_config; c < static_cast<int>(configs[kind].size()) && !ok; ++c) {
          const std::vector<int> &config = configs[kind][c];
          bool fits = true;
          for (size_t k = 0; k < key_count; ++k)
            if (config[k] > residual[k]) {
              fits = false;
              break;
            }
          if (!fits)
            continue;
          for (size_t k = 0; k < key_count; ++k)
            residual[k] -= config[k];
          ok = search(residual, kind, bins_left - 1, c);
          for (size_t k = 0; k < key_count; ++k)
            residual[k] += config[k];
          if (ok)
            chosen.push_back({kind, c});
        }
      }
    }
    if (!ok)
      memo[state] = false;
    return ok;
  };

  std::vector<int> residual = census.counts;
  int first_bins = inst.kinds.empty() ? 0 : inst.kinds[0].count;
  if (!search(residual, 0, first_bins, 0))
    return std::nullopt;

  // materialize the witness: chosen was filled bottom-up
  HetSolution sol;
  sol.bins.resize(inst.kinds.size());
  std::vector<std::vector<int>> pool = census.members;
  std::reverse(chosen.begin(), chosen.end());
  for (auto [kind, config_idx] : chosen) {
    if (kind < 0)
      continue;
    const std::vector<int> &config = configs[kind][config_idx];
    std::vector<int> bin;
    for (size_t k = 0; k < key_count; ++k)
      for (int c = 0; c < config[k]; ++c) {
        bin.push_back(pool[k].back());
        pool[k].pop_back();
      }
    std::sort(bin.begin(), bin.end());
    sol.bins[kind].push_back(std::move(bin));
  }
  // pad unused bins as empty
  for (size_t i = 0; i < inst.kinds.size(); ++i)
    while (static_cast<int>(sol.bins[i].size()) < inst.kinds[i].count)
      sol.bins[i].push_back({});
  return sol;
}

std::optional<PlainSolution> solve_plain(const BinPackingInstance &inst) {
  for (Weight s : inst.sizes) {
    if (s < 1)
      throw ValidationError("binpacking: sizes must be positive");
    if (s > inst.capacity)
      return std::nullopt; // oversize item can never be packed
  }
  if (inst.bins < 0 || inst.capacity < 0)
    throw ValidationError("binpacking: negative capacity or bin count");

  HetInstance het;
  het.dims = 1;
  for (Weight s : inst.sizes)
    het.items.push_back({{s}, 0});
  HetBinKind kind;
  kind.capacity = {inst.capacity};
  kind.count = inst.bins;
  kind.valid = [](const FingerprintMultiset &) { return true; };
  het.kinds.push_back(std::move(kind));

  auto sol = solve_het(het);
  if (!sol)
    return std::nullopt;
  PlainSolution out;
  out.bins = sol->bins[0];
  return out;
}

bool eulerian_trail_predicate(const std::vector<EndpointPair> &pairs, Vertex u, Vertex v,
                              bool require_depot) {
  if (pairs.empty())
    return false;
  bool any_depot = false;
  std::map<Vertex, int> degree;
  for (const EndpointPair &p : pairs) {
    degree[p.a] += 1;
    degree[p.b] += 1; // (a,a) self-loops contribute 2 to a
    any_depot = any_depot || p.depot;
  }
  if (any_depot != require_depot)
    return false;
  if (!degree.count(u) || !degree.count(v))
    return false;
  for (const auto &[vertex, deg] : degree) {
    bool endpoint_odd = (u != v) && (vertex == u || vertex == v);
    if (endpoint_odd ? deg % 2 == 0 : deg % 2 != 0)
      return false;
  }
  // connectivity over touched vertices
  std::map<Vertex, Vertex> parent;
  for (const auto &[vertex, deg] : degree)
    parent[vertex] = vertex;
  std::function<Vertex(Vertex)> find = [&](Vertex x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const EndpointPair &p : pairs)
    parent[find(p.a)] = find(p.b);
  Vertex root = find(u);
  for (const auto &[vertex, deg] : degree)
    if (find(vertex) != root)
      return false;
  return true;
}

} // namespace twvrp
