#include "twvrp/cvrp_dp.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>

#include "twvrp/routing_tools.hpp"

namespace twvrp {

void CounterPair::add(const WalkClass &cls, int count) {
  if (count == 0)
    return;
  auto it = std::lower_bound(classes.begin(), classes.end(), cls,
                             [](const auto &entry, const WalkClass &key) {
                               return entry.first < key;
                             });
  if (it != classes.end() && it->first == cls)
    it->second += count;
  else
    classes.insert(it, {cls, count});
}

Weight CounterPair::lambda_total() const {
  Weight total = 0;
  for (const auto &[cls, count] : classes)
    total += cls.lambda * count;
  return total;
}

Weight CounterPair::weight_total() const {
  Weight total = 0;
  for (const auto &[cls, count] : classes)
    total += cls.w * count;
  return total;
}

int CounterPair::walk_total() const {
  int total = 0;
  for (const auto &[cls, count] : classes)
    total += count;
  return total;
}

CvrpParams make_cvrp_params(const VrpInstance &inst) {
  if (inst.variant != Variant::LoadCVRP && inst.variant != Variant::GasCVRP &&
      inst.variant != Variant::LoadGasCVRP)
    throw ValidationError("cvrp solver: variant must be LoadCVRP, GasCVRP or LoadGasCVRP");
  CvrpParams params;
  params.track_gas = has_gas(inst.variant);
  params.gas = params.track_gas ? *inst.gas_cap : 0;
  params.k = inst.k;
  params.demand.assign(inst.graph.n, 0);
  params.depot.assign(inst.graph.n, false);
  params.client.assign(inst.graph.n, false);
  for (Vertex d : inst.depots)
    params.depot[d] = true;
  for (Vertex c : inst.clients) {
    params.client[c] = true;
    // GasCVRP has no demands; unit demands make client coverage flow
    // through the load dimension with a vacuous cap
    params.demand[c] = has_load(inst.variant) ? inst.demand_of(c) : 1;
    params.total_demand += params.demand[c];
  }
  params.ell = has_load(inst.variant)
                   ? *inst.load_cap
                   : std::max<Weight>(1, static_cast<Weight>(inst.clients.size()));
  return params;
}

Multigraph instance_multigraph(const VrpInstance &inst) {
  Multigraph g;
  g.n = inst.graph.n;
  for (size_t e = 0; e < inst.graph.edges.size(); ++e)
    for (int m = 0; m < inst.graph.edges[e].mult; ++m)
      g.copies.push_back({inst.graph.edges[e].u, inst.graph.edges[e].v, inst.graph.edges[e].w,
                          static_cast<int>(e)});
  return g;
}

namespace {

// A zero-lambda class whose per-walk weight is known to be zero can be
// duplicated for free; a gas-tracked zero-lambda class costs its weight per
// copy. Positive-weight classes without a tracked weight cannot be
// duplicated at all.
bool inflatable(const WalkClass &cls, const CvrpParams &params) {
  if (cls.lambda != 0)
    return false;
  if (params.track_gas)
    return true;
  return cls.w == 0;
}

Weight inflation_cost(const WalkClass &cls, const CvrpParams &params) {
  return params.track_gas ? cls.w : 0;
}

// ---------------------------------------------------------------------
// merge enumeration

struct MergeItemType {
  WalkClass cls;
  bool current_edge = false; // at most two per group
  int mandatory = 0;
  int max_extra = 0;
  Weight extra_cost = 0;
};

struct MergeGroup {
  std::vector<std::pair<int, int>> take; // (type index, count)
  WalkClass target;
};

struct MergeOutcome {
  std::vector<std::pair<WalkClass, int>> targets;
  Weight extra_cost = 0;
  std::vector<MergeGroup> groups;
};

struct MergeLimits {
  Weight ell;
  bool track_gas;
  Weight gas;
  int max_items;
  long long step_budget;
};

// Closes one group: Eulerian-trail analysis of the endpoint multigraph.
// Returns candidate target classes (one per legal endpoint choice).
std::vector<WalkClass> close_group(const std::vector<std::pair<int, int>> &take,
                                   const std::vector<MergeItemType> &types,
                                   const MergeLimits &limits) {
  std::map<Vertex, int> degree;
  std::map<Vertex, Vertex> parent;
  std::function<Vertex(Vertex)> find = [&](Vertex x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  };
  Weight lambda = 0, weight = 0;
  bool depot = false, weight_known_zero = true;
  for (auto [ti, count] : take) {
    const WalkClass &cls = types[ti].cls;
    degree[cls.a] += count;
    degree[cls.b] += count;
    lambda += cls.lambda * count;
    if (limits.track_gas)
      weight += cls.w * count;
    else if (cls.w != 0)
      weight_known_zero = false;
    depot = depot || cls.depot;
    parent.try_emplace(cls.a, cls.a);
    parent.try_emplace(cls.b, cls.b);
    parent[find(cls.a)] = find(cls.b);
  }
  if (lambda > limits.ell)
    return {};
  if (limits.track_gas && weight > limits.gas)
    return {};
  // connectivity
  Vertex root = find(degree.begin()->first);
  for (const auto &[v, d] : degree)
    if (find(v) != root)
      return {};
  std::vector<Vertex> odd;
  for (const auto &[v, d] : degree)
    if (d % 2 != 0)
      odd.push_back(v);
  Weight w_field = limits.track_gas ? weight : (weight_known_zero ? 0 : kUntrackedPos);
  std::vector<WalkClass> out;
  if (odd.empty()) {
    for (const auto &[v, d] : degree)
      out.push_back({v, v, lambda, w_field, depot});
  } else if (odd.size() == 2) {
    out.push_back({std::min(odd[0], odd[1]), std::max(odd[0], odd[1]), lambda, w_field, depot});
  }
  return out;
}

class MergeEnumerator {
public:
  MergeEnumerator(std::vector<MergeItemType> types, const MergeLimits &limits)
      : types_(std::move(types)), limits_(limits) {
    remaining_.resize(types_.size());
    extras_left_.resize(types_.size());
    int total = 0;
    for (size_t i = 0; i < types_.size(); ++i) {
      remaining_[i] = types_[i].mandatory;
      extras_left_[i] = types_[i].max_extra;
      total += types_[i].mandatory;
    }
    item_budget_ = limits_.max_items - total;
  }

  // Enumerates every partition of the items (plus optional extras) into
  // mergeable groups. Returns outcomes deduplicated by target multiset,
  // keeping the cheapest extra cost. Returns false when the step budget is
  // exhausted.
  bool run(std::vector<MergeOutcome> &out) {
    if (item_budget_ < 0)
      return false;
    ok_ = true;
    recurse();
    std::map<std::vector<std::pair<WalkClass, int>>, size_t> dedup;
    for (MergeOutcome &o : collected_) {
      auto it = dedup.find(o.targets);
      if (it == dedup.end()) {
        dedup[o.targets] = out.size();
        out.push_back(std::move(o));
      } else if (o.extra_cost < out[it->second].extra_cost) {
        out[it->second] = std::move(o);
      }
    }
    return ok_;
  }

private:
  std::vector<MergeItemType> types_;
  MergeLimits limits_;
  std::vector<int> remaining_;
  std::vector<int> extras_left_;
  int item_budget_ = 0;
  long long steps_ = 0;
  bool ok_ = true;

  std::vector<MergeGroup> groups_;
  Weight extra_cost_ = 0;
  std::vector<MergeOutcome> collected_;

  bool step() {
    if (++steps_ > limits_.step_budget) {
      ok_ = false;
      return false;
    }
    return true;
  }

  void emit() {
    MergeOutcome o;
    o.groups = groups_;
    o.extra_cost = extra_cost_;
    CounterPair targets;
    for (const MergeGroup &grp : groups_)
      targets.add(grp.target, 1);
    o.targets = targets.classes;
    collected_.push_back(std::move(o));
  }

  void recurse() {
    if (!step())
      return;
    int anchor = -1;
    for (size_t i = 0; i < types_.size(); ++i)
      if (remaining_[i] > 0) {
        anchor = static_cast<int>(i);
        break;
      }
    if (anchor < 0) {
      emit();
      return;
    }
    // the next group takes one mandatory item of the anchor type plus any
    // extension; anchoring on the smallest open type makes each partition
    // appear exactly once
    std::vector<std::pair<int, int>> take;
    remaining_[anchor]--;
    take.push_back({anchor, 1});
    extend_group(take, anchor, types_[anchor].current_edge ? 1 : 0,
                 types_[anchor].cls.lambda, limits_.track_gas ? types_[anchor].cls.w : 0);
    remaining_[anchor]++;
  }

  void extend_group(std::vector<std::pair<int, int>> &take, int min_type, int edge_copies_in,
                    Weight lambda_sum, Weight weight_sum) {
    if (!step())
      return;
    // close the group here
    for (const WalkClass &target : close_group(take, types_, limits_)) {
      groups_.push_back({take, target});
      recurse();
      groups_.pop_back();
    }
    // or grow it: types >= min_type keep the extension canonical within the
    // group (take counts are per type, so order inside a type is moot)
    for (size_t i = static_cast<size_t>(min_type); i < types_.size(); ++i) {
      int avail_mand = remaining_[i];
      bool can_extra = extras_left_[i] > 0 && item_budget_ > 0;
      if (avail_mand == 0 && !can_extra)
        continue;
      if (types_[i].current_edge && edge_copies_in >= 2)
        continue;
      Weight next_lambda = lambda_sum + types_[i].cls.lambda;
      if (next_lambda > limits_.ell)
        continue;
      Weight next_weight = weight_sum + (limits_.track_gas ? types_[i].cls.w : 0);
      if (limits_.track_gas && next_weight > limits_.gas)
        continue;
      bool used_extra = avail_mand == 0;
      if (used_extra) {
        extras_left_[i]--;
        item_budget_--;
        extra_cost_ += types_[i].extra_cost;
      } else {
        remaining_[i]--;
      }
      bool same_as_last = !take.empty() && take.back().first == static_cast<int>(i);
      if (same_as_last)
        take.back().second++;
      else
        take.push_back({static_cast<int>(i), 1});
      extend_group(take, static_cast<int>(i), edge_copies_in + (types_[i].current_edge ? 1 : 0),
                   next_lambda, next_weight);
      if (same_as_last)
        take.back().second--;
      else
        take.pop_back();
      if (used_extra) {
        extras_left_[i]++;
        item_budget_++;
        extra_cost_ -= types_[i].extra_cost;
      } else {
        remaining_[i]++;
      }
    }
  }
};

// ---------------------------------------------------------------------
// cells and witnesses

struct ConcreteWalk {
  WalkClass cls;
  std::map<int, int> edge_use;  // instance edge record -> count
  std::vector<Vertex> clients;  // clients assigned to this walk
  Weight weight = 0;            // actual weight (known even when untracked)
};

struct CellValue {
  Weight weight = 0;
  // attached walks sorted by class, aligned with the signature counters
  std::vector<ConcreteWalk> attached;
  std::vector<ConcreteWalk> detached;
};

using SigKey = std::vector<long long>;

SigKey make_key(uint32_t x_mask, int c, const CounterPair &counters) {
  SigKey key;
  key.push_back(x_mask);
  key.push_back(c);
  for (const auto &[cls, count] : counters.classes) {
    key.push_back(cls.a);
    key.push_back(cls.b);
    key.push_back(cls.lambda);
    key.push_back(cls.w);
    key.push_back(cls.depot);
    key.push_back(count);
  }
  return key;
}

CounterPair counters_of_key(const SigKey &key) {
  CounterPair out;
  for (size_t i = 2; i + 6 <= key.size(); i += 6) {
    WalkClass cls{static_cast<Vertex>(key[i]), static_cast<Vertex>(key[i + 1]), key[i + 2],
                  key[i + 3], key[i + 4] != 0};
    out.add(cls, static_cast<int>(key[i + 5]));
  }
  return out;
}

struct CellMap {
  std::map<SigKey, CellValue> cells;
};

// deterministic tie-break: fewer edge copies, then lexicographic walks
long long witness_bulk(const CellValue &value) {
  long long bulk = 0;
  for (const auto &w : value.attached)
    for (const auto &[e, c] : w.edge_use)
      bulk += c;
  for (const auto &w : value.detached)
    for (const auto &[e, c] : w.edge_use)
      bulk += c;
  return bulk;
}

// ---------------------------------------------------------------------

struct DpContext {
  const VrpInstance &inst;
  const Multigraph &g;
  const NiceDecomposition &nd;
  const CvrpParams &params;
  const CvrpDpOptions &opts;
  CvrpStats stats;

  std::map<std::pair<SigKey, SigKey>, bool> reducible_memo;

  bool check_reducible(const CounterPair &from, const CounterPair &to) {
    auto key = std::make_pair(make_key(0, 0, from), make_key(0, 0, to));
    auto it = reducible_memo.find(key);
    if (it != reducible_memo.end())
      return it->second;
    stats.reducible_calls++;
    bool ok = reducible(from, to, params);
    reducible_memo[key] = ok;
    return ok;
  }
};

void validate_witness(const DpContext &ctx, const SigKey &key, const CellValue &value) {
  CounterPair counters = counters_of_key(key);
  CounterPair from_walks;
  Weight total = 0;
  for (const ConcreteWalk &w : value.attached) {
    from_walks.add(w.cls, 1);
    total += w.weight;
    // class consistency
    Weight lam = 0;
    for (Vertex c : w.clients)
      lam += ctx.params.demand[c];
    if (lam != w.cls.lambda)
      throw std::logic_error("cvrp witness: lambda mismatch");
    Weight wt = 0;
    for (const auto &[e, cnt] : w.edge_use)
      wt += ctx.inst.graph.edges[e].w * cnt;
    if (wt != w.weight || (ctx.params.track_gas && wt != w.cls.w))
      throw std::logic_error("cvrp witness: weight mismatch");
    if (!ctx.params.track_gas && w.cls.w == 0 && wt != 0)
      throw std::logic_error("cvrp witness: zero-weight marker mismatch");
  }
  for (const ConcreteWalk &w : value.detached)
    total += w.weight;
  if (!(from_walks == counters))
    throw std::logic_error("cvrp witness: counters mismatch");
  if (total != value.weight)
    throw std::logic_error("cvrp witness: total weight mismatch");
}

// insert keeping the minimum; canonicalizes inflatable zero classes down to
// count one and enforces the untracked-zero count cap
void insert_cell(DpContext &ctx, CellMap &map, uint32_t x_mask, int c, CounterPair counters,
                 CellValue value) {
  // canonical multiplicity reduction
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto &[cls, count] : counters.classes) {
      if (count > 1 && inflatable(cls, ctx.params)) {
        Weight unit = inflation_cost(cls, ctx.params);
        value.weight -= unit * (count - 1);
        // drop surplus concrete walks of this class
        int surplus = count - 1;
        for (auto it = value.attached.begin(); it != value.attached.end() && surplus > 0;) {
          if (it->cls == cls) {
            it = value.attached.erase(it);
            surplus--;
          } else {
            ++it;
          }
        }
        count = 1;
        changed = true;
      }
      if (cls.lambda == 0 && !inflatable(cls, ctx.params) && count > ctx.opts.zero_count_cap) {
        ctx.stats.guard_hit = true;
        ctx.stats.guard_reason = "zero-class count cap";
        return;
      }
    }
  }
  if (counters.lambda_total() > ctx.params.total_demand)
    return;

  if (ctx.opts.validate_witnesses)
    validate_witness(ctx, make_key(x_mask, c, counters), value);

  SigKey key = make_key(x_mask, c, counters);
  auto it = map.cells.find(key);
  if (it == map.cells.end()) {
    map.cells.emplace(std::move(key), std::move(value));
    return;
  }
  CellValue &existing = it->second;
  if (value.weight < existing.weight ||
      (value.weight == existing.weight && witness_bulk(value) < witness_bulk(existing)))
    existing = std::move(value);
}

// pulls one concrete walk of the given class out of a pool
ConcreteWalk take_walk(std::vector<ConcreteWalk> &pool, const WalkClass &cls) {
  for (auto it = pool.begin(); it != pool.end(); ++it)
    if (it->cls == cls) {
      ConcreteWalk walk = std::move(*it);
      pool.erase(it);
      return walk;
    }
  throw std::logic_error("cvrp witness: pool is missing a walk");
}

uint32_t translate_introduce(uint32_t mask, size_t v_pos, bool with_v) {
  uint32_t low = mask & ((1u << v_pos) - 1);
  uint32_t high = mask & ~((1u << v_pos) - 1);
  return low | (high << 1) | (with_v ? (1u << v_pos) : 0);
}

uint32_t translate_forget(uint32_t mask, size_t v_pos) {
  uint32_t low = mask & ((1u << v_pos) - 1);
  uint32_t high = mask >> (v_pos + 1);
  return low | (high << v_pos);
}

// Runs one merge enumeration and feeds the resulting candidates into the
// parent cell. base_* describe the child cell; the edge fields are set for
// introduce-edge transitions.
void apply_merges(DpContext &ctx, CellMap &parent, uint32_t x_mask, int c,
                  const CounterPair &mandatory, const std::vector<ConcreteWalk> &walk_pool,
                  const std::vector<ConcreteWalk> &detached, Weight base_weight,
                  const WalkClass *edge_cls, int edge_copies, int edge_record, Weight edge_weight) {
  std::vector<MergeItemType> types;
  for (const auto &[cls, count] : mandatory.classes) {
    MergeItemType t;
    t.cls = cls;
    t.mandatory = count;
    if (inflatable(cls, ctx.params)) {
      t.max_extra = ctx.opts.max_merge_items;
      t.extra_cost = inflation_cost(cls, ctx.params);
    }
    types.push_back(t);
  }
  if (edge_cls) {
    MergeItemType t;
    t.cls = *edge_cls;
    t.current_edge = true;
    t.mandatory = edge_copies;
    types.push_back(t);
  }

  MergeLimits limits{ctx.params.ell, ctx.params.track_gas, ctx.params.gas,
                     ctx.opts.max_merge_items, ctx.opts.merge_step_budget};
  ctx.stats.merge_calls++;
  MergeEnumerator enumerator(types, limits);
  std::vector<MergeOutcome> outcomes;
  if (!enumerator.run(outcomes)) {
    ctx.stats.guard_hit = true;
    ctx.stats.guard_reason = "merge enumeration budget";
    return;
  }

  for (const MergeOutcome &outcome : outcomes) {
    CounterPair targets;
    for (const auto &[cls, count] : outcome.targets)
      targets.add(cls, count);

    if (ctx.opts.cross_check_reducibility) {
      // assemble the actually consumed item multiset (mandatory + extras)
      CounterPair from;
      std::vector<int> consumed(types.size(), 0);
      for (const MergeGroup &grp : outcome.groups)
        for (auto [ti, count] : grp.take)
          consumed[ti] += count;
      for (size_t i = 0; i < types.size(); ++i)
        if (consumed[i] > 0)
          from.add(types[i].cls, consumed[i]);
      if (!ctx.check_reducible(from, targets))
        throw std::logic_error("cvrp dp: merge candidate rejected by reducibility");
    }

    // witness construction
    CellValue value;
    value.weight = base_weight + outcome.extra_cost + edge_copies * edge_weight;
    value.detached = detached;
    std::vector<ConcreteWalk> pool = walk_pool;
    // virtual copies of inflatable classes duplicate a stored walk
    std::vector<int> consumed(types.size(), 0);
    for (const MergeGroup &grp : outcome.groups)
      for (auto [ti, count] : grp.take)
        consumed[ti] += count;
    for (size_t i = 0; i < types.size(); ++i) {
      if (types[i].current_edge)
        continue;
      int extra = consumed[i] - types[i].mandatory;
      for (int e = 0; e < extra; ++e) {
        // find a template walk of this class
        const ConcreteWalk *tmpl = nullptr;
        for (const ConcreteWalk &w : pool)
          if (w.cls == types[i].cls) {
            tmpl = &w;
            break;
          }
        if (!tmpl)
          throw std::logic_error("cvrp dp: no template for inflated walk");
        pool.push_back(*tmpl);
      }
    }
    for (const MergeGroup &grp : outcome.groups) {
      ConcreteWalk merged;
      merged.cls = grp.target;
      for (auto [ti, count] : grp.take) {
        if (types[ti].current_edge) {
          merged.edge_use[edge_record] += count;
          merged.weight += edge_weight * count;
          continue;
        }
        for (int n = 0; n < count; ++n) {
          ConcreteWalk piece = take_walk(pool, types[ti].cls);
          for (const auto &[e, cnt] : piece.edge_use)
            merged.edge_use[e] += cnt;
          merged.clients.insert(merged.clients.end(), piece.clients.begin(), piece.clients.end());
          merged.weight += piece.weight;
        }
      }
      value.attached.push_back(std::move(merged));
    }
    insert_cell(ctx, parent, x_mask, c, targets, std::move(value));
  }
}

} // namespace

// ---------------------------------------------------------------------
// reducibility via generalized bin packing

bool reducible(const CounterPair &from, const CounterPair &to, const CvrpParams &params) {
  if (from.lambda_total() != to.lambda_total())
    return false;
  if (params.track_gas && from.weight_total() != to.weight_total())
    return false;
  if (from.classes.empty() || to.classes.empty())
    return from.classes.empty() && to.classes.empty();

  // fingerprint: endpoints, depot bit, and (for untracked weights) whether
  // the walk weighs anything; encoded densely
  std::map<std::tuple<Vertex, Vertex, bool, bool>, FingerprintId> fp_ids;
  auto fingerprint = [&](const WalkClass &cls) {
    bool pos = !params.track_gas && cls.w != 0;
    auto key = std::make_tuple(cls.a, cls.b, cls.depot, pos);
    auto [it, fresh] = fp_ids.try_emplace(key, static_cast<FingerprintId>(fp_ids.size()));
    return it->second;
  };

  HetInstance het;
  het.dims = params.track_gas ? 3 : 2;

  Weight zero_items = 0;
  for (const auto &[cls, count] : from.classes) {
    bool all_zero = cls.lambda == 0 && (params.track_gas ? cls.w == 0 : cls.w == 0);
    if (all_zero)
      zero_items += count;
  }

  std::vector<std::tuple<Vertex, Vertex, bool, bool>> fp_decode;
  for (const auto &[cls, count] : from.classes) {
    HetItem item;
    bool all_zero = cls.lambda == 0 && cls.w == 0;
    if (params.track_gas)
      item.size = {cls.lambda, cls.w, all_zero ? 1 : 0};
    else
      item.size = {cls.lambda, cls.lambda == 0 ? 1 : 0};
    item.fingerprint = fingerprint(cls);
    for (int i = 0; i < count; ++i)
      het.items.push_back(item);
  }
  fp_decode.resize(fp_ids.size());
  for (const auto &[key, id] : fp_ids)
    fp_decode[id] = key;

  Weight zero_cap = params.track_gas ? zero_items : 0;
  for (const auto &[cls, count] : to.classes) {
    HetBinKind kind;
    if (params.track_gas)
      kind.capacity = {cls.lambda, cls.w, zero_cap};
    else
      kind.capacity = {cls.lambda, static_cast<Weight>(from.walk_total())};
    kind.count = count;
    WalkClass target = cls;
    bool track = params.track_gas;
    kind.valid = [target, track, &fp_decode](const FingerprintMultiset &fps) {
      std::vector<EndpointPair> pairs;
      bool any_pos = false;
      for (const auto &[fp, count] : fps) {
        auto [a, b, depot, pos] = fp_decode[fp];
        any_pos = any_pos || pos;
        for (int i = 0; i < count; ++i)
          pairs.push_back({a, b, depot});
      }
      if (!eulerian_trail_predicate(pairs, target.a, target.b, target.depot))
        return false;
      if (!track) {
        bool target_pos = target.w != 0;
        if (any_pos != target_pos)
          return false;
      }
      return true;
    };
    het.kinds.push_back(std::move(kind));
  }

  // the decode table is captured by reference; keep the call inside scope
  auto sol = solve_het(het);
  return sol.has_value();
}

// ---------------------------------------------------------------------
// node transitions

CvrpResult solve_cvrp_tw(const VrpInstance &inst, const NiceDecomposition &nd,
                         const Multigraph &g, const CvrpDpOptions &opts) {
  CvrpParams params = make_cvrp_params(inst);
  {
    DecompositionCheck check = validate_nice(nd, g);
    if (!check.valid)
      throw ValidationError("cvrp dp: invalid nice decomposition: " + check.violations.front());
  }
  DpContext ctx{inst, g, nd, params, opts, {}, {}};

  std::vector<CellMap> tables(nd.nodes.size());
  for (size_t t = 0; t < nd.nodes.size(); ++t) {
    const NiceNode &node = nd.nodes[t];
    CellMap &cell = tables[t];

    switch (node.kind) {
    case NodeKind::Leaf: {
      insert_cell(ctx, cell, 0, 0, CounterPair{}, CellValue{});
      break;
    }

    case NodeKind::IntroduceVertex: {
      const CellMap &child = tables[node.child1];
      Vertex v = node.vertex;
      size_t v_pos = std::find(node.bag.begin(), node.bag.end(), v) - node.bag.begin();
      bool servable = params.client[v] && params.demand[v] <= params.ell;
      for (const auto &[key, value] : child.cells) {
        uint32_t cx = static_cast<uint32_t>(key[0]);
        int c = static_cast<int>(key[1]);
        CounterPair counters = counters_of_key(key);
        // serve = 0 stays legal for clients: a join sibling may serve them
        for (int serve = 0; serve <= (servable ? 1 : 0); ++serve) {
          for (int zero = 0; zero <= 1; ++zero) {
            CounterPair next = counters;
            CellValue next_value = value;
            if (serve) {
              WalkClass cls{v, v, params.demand[v], 0, params.depot[v]};
              next.add(cls, 1);
              ConcreteWalk w;
              w.cls = cls;
              w.clients = {v};
              next_value.attached.push_back(std::move(w));
            }
            if (zero) {
              WalkClass cls{v, v, 0, 0, params.depot[v]};
              next.add(cls, 1);
              ConcreteWalk w;
              w.cls = cls;
              next_value.attached.push_back(std::move(w));
            }
            insert_cell(ctx, cell, translate_introduce(cx, v_pos, serve != 0), c, next,
                        std::move(next_value));
          }
        }
      }
      break;
    }

    case NodeKind::IntroduceEdge: {
      const CellMap &child = tables[node.child1];
      const EdgeCopy &copy = g.copies[node.edge_copy];
      WalkClass edge_cls{std::min(copy.u, copy.v), std::max(copy.u, copy.v), 0,
                         params.track_gas ? copy.w : (copy.w == 0 ? 0 : kUntrackedPos),
                         params.depot[copy.u] || params.depot[copy.v]};
      // every vehicle uses an edge at most twice in some optimum, and at
      // most gas/w times under a tracked weight cap
      long long max_copies = 2LL * params.k;
      if (params.track_gas && copy.w > 0)
        max_copies = std::min(max_copies, params.k * std::min<long long>(2, params.gas / copy.w));
      for (const auto &[key, value] : child.cells) {
        uint32_t cx = static_cast<uint32_t>(key[0]);
        int c = static_cast<int>(key[1]);
        CounterPair counters = counters_of_key(key);
        for (long long ce = 0; ce <= max_copies; ++ce) {
          if (params.track_gas && copy.w * ce > params.gas * params.k)
            break;
          if (ce == 0) {
            // unchanged cell flows through
            insert_cell(ctx, cell, cx, c, counters, value);
            continue;
          }
          apply_merges(ctx, cell, cx, c, counters, value.attached, value.detached, value.weight,
                       &edge_cls, static_cast<int>(ce), copy.orig_edge, copy.w);
        }
      }
      break;
    }

    case NodeKind::Forget: {
      const CellMap &child = tables[node.child1];
      Vertex v = node.vertex;
      const std::vector<Vertex> &child_bag = nd.nodes[node.child1].bag;
      size_t v_pos = std::find(child_bag.begin(), child_bag.end(), v) - child_bag.begin();
      for (const auto &[key, value] : child.cells) {
        uint32_t cx = static_cast<uint32_t>(key[0]);
        int c = static_cast<int>(key[1]);
        if (params.client[v] && !(cx >> v_pos & 1))
          continue; // forgotten clients must be served
        CounterPair counters = counters_of_key(key);
        bool dead = false;
        int detaching = 0;
        CounterPair rest;
        for (const auto &[cls, count] : counters.classes) {
          bool a_is_v = cls.a == v, b_is_v = cls.b == v;
          if (a_is_v != b_is_v) {
            dead = true; // walk pinned to the bag through its other endpoint
            break;
          }
          if (a_is_v && b_is_v) {
            if (!cls.depot) {
              dead = true; // a depot-free walk cannot detach
              break;
            }
            detaching += count;
          } else {
            rest.add(cls, count);
          }
        }
        if (dead || c + detaching > params.k)
          continue;
        CellValue next_value;
        next_value.weight = value.weight;
        next_value.detached = value.detached;
        std::vector<ConcreteWalk> pool = value.attached;
        for (const auto &[cls, count] : counters.classes) {
          if (cls.a != v)
            continue;
          for (int i = 0; i < count; ++i)
            next_value.detached.push_back(take_walk(pool, cls));
        }
        next_value.attached = std::move(pool);
        insert_cell(ctx, cell, translate_forget(cx, v_pos), c + detaching, rest,
                    std::move(next_value));
      }
      break;
    }

    case NodeKind::Join: {
      const CellMap &left = tables[node.child1];
      const CellMap &right = tables[node.child2];
      for (const auto &[key1, value1] : left.cells) {
        uint32_t x1 = static_cast<uint32_t>(key1[0]);
        int c1 = static_cast<int>(key1[1]);
        CounterPair counters1 = counters_of_key(key1);
        for (const auto &[key2, value2] : right.cells) {
          uint32_t x2 = static_cast<uint32_t>(key2[0]);
          int c2 = static_cast<int>(key2[1]);
          if ((x1 & x2) != 0 || c1 + c2 > params.k)
            continue;
          CounterPair counters2 = counters_of_key(key2);
          if (counters1.lambda_total() + counters2.lambda_total() > params.total_demand)
            continue;
          CounterPair combined = counters1;
          for (const auto &[cls, count] : counters2.classes)
            combined.add(cls, count);
          std::vector<ConcreteWalk> pool = value1.attached;
          pool.insert(pool.end(), value2.attached.begin(), value2.attached.end());
          std::vector<ConcreteWalk> detached = value1.detached;
          detached.insert(detached.end(), value2.detached.begin(), value2.detached.end());
          apply_merges(ctx, cell, x1 | x2, c1 + c2, combined, pool, detached,
                       value1.weight + value2.weight, nullptr, 0, -1, 0);
        }
      }
      break;
    }
    }
    ctx.stats.peak_cells = std::max(ctx.stats.peak_cells, cell.cells.size());
  }

  // root: empty bag, empty counters, any c <= k
  const CellMap &root = tables[nd.root];
  const CellValue *best = nullptr;
  for (const auto &[key, value] : root.cells) {
    if (key.size() != 2 || key[0] != 0)
      continue;
    if (!best || value.weight < best->weight)
      best = &value;
  }

  CvrpResult result;
  result.stats = ctx.stats;
  if (!best)
    return result;

  CvrpSolution sol;
  sol.weight = best->weight;
  // detached walks become the vehicles
  for (const ConcreteWalk &w : best->detached) {
    std::vector<int> edge_use(inst.graph.edges.size(), 0);
    bool any = false;
    for (const auto &[e, count] : w.edge_use) {
      edge_use[e] = count;
      any = any || count > 0;
    }
    Walk walk;
    if (!any) {
      // zero-length walk at a depot (serving a depot client or idle)
      Vertex at = w.clients.empty() ? -1 : w.clients.front();
      if (at < 0)
        continue; // an idle empty vehicle adds nothing
      walk.vertices = {at};
    } else {
      // single-component Eulerian circuit through the minimum depot
      VrpInstance shadow = inst;
      shadow.k = 1;
      shadow.clients.clear();
      Routing r = extract_walks(edge_use, shadow);
      if (r.walks.size() != 1)
        throw std::logic_error("cvrp dp: witness walk is not one component");
      walk = r.walks[0];
    }
    int index = static_cast<int>(sol.routing.walks.size());
    sol.routing.walks.push_back(walk);
    for (Vertex c : w.clients)
      sol.routing.assignment[c] = index;
  }
  result.solution = std::move(sol);
  return result;
}

CvrpResult solve_cvrp_tw(const VrpInstance &inst, const CvrpDpOptions &opts) {
  Multigraph g = instance_multigraph(inst);
  TreeDecomposition td = heuristic_decompose(inst.graph);
  NiceDecomposition nd = nicify(td, g);
  return solve_cvrp_tw(inst, nd, g, opts);
}

} // namespace twvrp
