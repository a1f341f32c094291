#include "twvrp/decomposition.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace twvrp {

int TreeDecomposition::width() const {
  int w = -1;
  for (const auto &bag : bags)
    w = std::max(w, static_cast<int>(bag.size()) - 1);
  return w;
}

int NiceDecomposition::width() const {
  int w = -1;
  for (const auto &node : nodes)
    w = std::max(w, static_cast<int>(node.bag.size()) - 1);
  return w;
}

DecompositionCheck validate_decomposition(const TreeDecomposition &td, const Graph &g) {
  DecompositionCheck check;
  auto violate = [&check](const std::string &msg) { check.violations.push_back(msg); };

  if (td.bags.empty()) {
    violate("decomposition has no bags");
    check.valid = false;
    return check;
  }
  // tree structure: connected, |E| = |V| - 1
  size_t b = td.bags.size();
  if (td.tree_edges.size() + 1 != b && !(b == 1 && td.tree_edges.empty()))
    violate("decomposition tree has wrong edge count");
  std::vector<std::vector<int>> adj(b);
  for (auto [x, y] : td.tree_edges) {
    if (x < 0 || y < 0 || x >= static_cast<int>(b) || y >= static_cast<int>(b)) {
      violate("tree edge references missing bag");
      check.valid = false;
      return check;
    }
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  std::vector<bool> seen(b, false);
  std::queue<int> queue;
  queue.push(0);
  seen[0] = true;
  while (!queue.empty()) {
    int t = queue.front();
    queue.pop();
    for (int u : adj[t])
      if (!seen[u]) {
        seen[u] = true;
        queue.push(u);
      }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    violate("decomposition tree is disconnected");

  // condition 1: bags cover V(G)
  std::vector<bool> covered(g.n, false);
  for (const auto &bag : td.bags)
    for (Vertex v : bag) {
      if (v < 0 || v >= g.n) {
        violate("bag contains out-of-range vertex " + std::to_string(v));
        continue;
      }
      covered[v] = true;
    }
  for (Vertex v = 0; v < g.n; ++v)
    if (!covered[v])
      violate("vertex " + std::to_string(v) + " appears in no bag");

  // condition 2: every edge inside some bag
  for (size_t e = 0; e < g.edges.size(); ++e) {
    bool found = false;
    for (const auto &bag : td.bags)
      if (std::binary_search(bag.begin(), bag.end(), g.edges[e].u) &&
          std::binary_search(bag.begin(), bag.end(), g.edges[e].v)) {
        found = true;
        break;
      }
    if (!found)
      violate("edge " + std::to_string(e) + " (" + std::to_string(g.edges[e].u) + "," +
              std::to_string(g.edges[e].v) + ") has no bag containing both endpoints");
  }

  // condition 3: per-vertex bags form a connected subtree
  for (Vertex v = 0; v < g.n; ++v) {
    std::vector<int> holding;
    for (size_t t = 0; t < b; ++t)
      if (std::binary_search(td.bags[t].begin(), td.bags[t].end(), v))
        holding.push_back(static_cast<int>(t));
    if (holding.size() <= 1)
      continue;
    std::set<int> in_tree(holding.begin(), holding.end());
    std::set<int> reached;
    std::queue<int> bfs;
    bfs.push(holding[0]);
    reached.insert(holding[0]);
    while (!bfs.empty()) {
      int t = bfs.front();
      bfs.pop();
      for (int u : adj[t])
        if (in_tree.count(u) && !reached.count(u)) {
          reached.insert(u);
          bfs.push(u);
        }
    }
    if (reached.size() != in_tree.size())
      violate("vertex " + std::to_string(v) + " appears in disconnected bags");
  }

  check.valid = check.violations.empty();
  return check;
}

TreeDecomposition heuristic_decompose(const Graph &g) {
  TreeDecomposition td;
  td.graph_n = g.n;
  if (g.n == 0) {
    td.bags.push_back({});
    return td;
  }

  // simple adjacency sets, parallel edges collapsed
  std::vector<std::set<Vertex>> adj(g.n);
  for (const EdgeRec &e : g.edges) {
    adj[e.u].insert(e.v);
    adj[e.v].insert(e.u);
  }

  // min-fill elimination: repeatedly remove the vertex whose neighborhood
  // needs the fewest fill edges, ties by lowest id
  std::vector<bool> gone(g.n, false);
  std::vector<Vertex> order;
  std::vector<std::vector<Vertex>> elim_bag(g.n);
  for (int step = 0; step < g.n; ++step) {
    int best = -1;
    long long best_fill = -1;
    for (Vertex v = 0; v < g.n; ++v) {
      if (gone[v])
        continue;
      long long fill = 0;
      std::vector<Vertex> nb(adj[v].begin(), adj[v].end());
      for (size_t i = 0; i < nb.size(); ++i)
        for (size_t j = i + 1; j < nb.size(); ++j)
          if (!adj[nb[i]].count(nb[j]))
            ++fill;
      if (best < 0 || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    Vertex v = best;
    std::vector<Vertex> nb(adj[v].begin(), adj[v].end());
    elim_bag[v].push_back(v);
    for (Vertex u : nb)
      elim_bag[v].push_back(u);
    std::sort(elim_bag[v].begin(), elim_bag[v].end());
    for (size_t i = 0; i < nb.size(); ++i)
      for (size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    for (Vertex u : nb)
      adj[u].erase(v);
    adj[v].clear();
    gone[v] = true;
    order.push_back(v);
  }

  // bag per eliminated vertex; parent = first neighbor eliminated later
  std::vector<int> elim_index(g.n);
  for (int i = 0; i < g.n; ++i)
    elim_index[order[i]] = i;
  std::vector<int> bag_id(g.n);
  for (int i = 0; i < g.n; ++i) {
    bag_id[order[i]] = static_cast<int>(td.bags.size());
    td.bags.push_back(elim_bag[order[i]]);
  }
  int chain_tail = -1; // links components
  for (int i = 0; i < g.n; ++i) {
    Vertex v = order[i];
    int next = -1;
    for (Vertex u : elim_bag[v])
      if (u != v && (next < 0 || elim_index[u] < elim_index[next]))
        next = u;
    if (next >= 0) {
      td.tree_edges.push_back({bag_id[v], bag_id[next]});
    } else {
      // isolated at elimination time: component root, chain via empty bag
      if (chain_tail >= 0) {
        int link = static_cast<int>(td.bags.size());
        td.bags.push_back({});
        td.tree_edges.push_back({chain_tail, link});
        td.tree_edges.push_back({link, bag_id[v]});
      }
      chain_tail = bag_id[v];
    }
  }
  return td;
}

TreeDecomposition parse_td(const std::string &text) {
  TreeDecomposition td;
  std::istringstream in(text);
  std::string line;
  int bag_count = -1, header_width = -1;
  std::map<int, std::vector<Vertex>> bags;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c')
      continue;
    std::istringstream ls(line);
    if (line[0] == 's') {
      std::string s, tag;
      if (!(ls >> s >> tag >> bag_count >> header_width >> td.graph_n) || tag != "td")
        throw ValidationError("td: malformed header line '" + line + "'");
    } else if (line[0] == 'b') {
      char b;
      int id;
      if (!(ls >> b >> id))
        throw ValidationError("td: malformed bag line '" + line + "'");
      std::vector<Vertex> bag;
      Vertex v;
      while (ls >> v)
        bag.push_back(v - 1);
      std::sort(bag.begin(), bag.end());
      if (bags.count(id - 1))
        throw ValidationError("td: duplicate bag id " + std::to_string(id));
      bags[id - 1] = bag;
    } else {
      int x, y;
      std::istringstream es(line);
      if (!(es >> x >> y))
        throw ValidationError("td: malformed edge line '" + line + "'");
      edges.push_back({x - 1, y - 1});
    }
  }
  if (bag_count < 0)
    throw ValidationError("td: missing header");
  if (static_cast<int>(bags.size()) != bag_count)
    throw ValidationError("td: header bag count does not match bag lines");
  td.bags.resize(bag_count);
  int max_size = 0;
  for (auto &[id, bag] : bags) {
    if (id < 0 || id >= bag_count)
      throw ValidationError("td: bag id out of range");
    max_size = std::max(max_size, static_cast<int>(bag.size()));
    for (Vertex v : bag)
      if (v < 0 || v >= td.graph_n)
        throw ValidationError("td: bag vertex out of range");
    td.bags[id] = std::move(bag);
  }
  if (max_size != header_width && !(bag_count == 1 && td.bags[0].empty() && header_width <= 1))
    throw ValidationError("td: header width " + std::to_string(header_width) +
                          " inconsistent with largest bag " + std::to_string(max_size));
  td.tree_edges = std::move(edges);
  return td;
}

std::string emit_td(const TreeDecomposition &td) {
  std::ostringstream out;
  int max_size = 0;
  for (const auto &bag : td.bags)
    max_size = std::max(max_size, static_cast<int>(bag.size()));
  out << "s td " << td.bags.size() << " " << max_size << " " << td.graph_n << "\n";
  for (size_t i = 0; i < td.bags.size(); ++i) {
    out << "b " << (i + 1);
    for (Vertex v : td.bags[i])
      out << " " << (v + 1);
    out << "\n";
  }
  std::vector<std::pair<int, int>> edges = td.tree_edges;
  for (auto &[x, y] : edges)
    if (x > y)
      std::swap(x, y);
  std::sort(edges.begin(), edges.end());
  for (auto [x, y] : edges)
    out << (x + 1) << " " << (y + 1) << "\n";
  return out.str();
}

namespace {

// Builder for the nice decomposition; emits nodes in postorder.
struct NiceBuilder {
  std::vector<NiceNode> nodes;

  int add(NiceNode node) {
    nodes.push_back(std::move(node));
    return static_cast<int>(nodes.size()) - 1;
  }

  int leaf() { return add({NodeKind::Leaf, {}, -1, -1, -1, -1}); }

  int introduce(int child, Vertex v) {
    std::vector<Vertex> bag = nodes[child].bag;
    bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
    return add({NodeKind::IntroduceVertex, std::move(bag), v, -1, child, -1});
  }

  int forget(int child, Vertex v) {
    std::vector<Vertex> bag = nodes[child].bag;
    bag.erase(std::find(bag.begin(), bag.end(), v));
    return add({NodeKind::Forget, std::move(bag), v, -1, child, -1});
  }

  int introduce_edge(int child, int copy) {
    return add({NodeKind::IntroduceEdge, nodes[child].bag, -1, copy, child, -1});
  }

  int join(int c1, int c2) {
    assert(nodes[c1].bag == nodes[c2].bag);
    return add({NodeKind::Join, nodes[c1].bag, -1, -1, c1, c2});
  }

  // Chain from the child's bag to the target bag: forget what the target
  // lacks, then introduce what it adds.
  int lift(int child, const std::vector<Vertex> &target) {
    int cur = child;
    for (Vertex v : nodes[child].bag)
      if (!std::binary_search(target.begin(), target.end(), v))
        cur = forget(cur, v);
    for (Vertex v : target)
      if (!std::binary_search(nodes[child].bag.begin(), nodes[child].bag.end(), v))
        cur = introduce(cur, v);
    return cur;
  }
};

} // namespace

NiceDecomposition nicify(const TreeDecomposition &td, const Multigraph &g) {
  {
    Graph skeleton;
    skeleton.n = g.n;
    for (const EdgeCopy &c : g.copies)
      skeleton.edges.push_back({c.u, c.v, c.w, 1});
    DecompositionCheck check = validate_decomposition(td, skeleton);
    if (!check.valid)
      throw ValidationError("nicify: invalid tree decomposition: " + check.violations.front());
  }

  // root the decomposition tree at bag 0
  size_t b = td.bags.size();
  std::vector<std::vector<int>> adj(b);
  for (auto [x, y] : td.tree_edges) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  for (auto &nb : adj)
    std::sort(nb.begin(), nb.end());

  NiceBuilder builder;
  // Recursive construction: returns a nice node whose bag equals td bag t.
  std::function<int(int, int)> build = [&](int t, int parent) -> int {
    std::vector<int> children;
    for (int u : adj[t])
      if (u != parent)
        children.push_back(u);
    if (children.empty()) {
      int leaf = builder.leaf();
      return builder.lift(leaf, td.bags[t]);
    }
    std::vector<int> lifted;
    for (int u : children)
      lifted.push_back(builder.lift(build(u, t), td.bags[t]));
    int cur = lifted[0];
    for (size_t i = 1; i < lifted.size(); ++i)
      cur = builder.join(cur, lifted[i]);
    return cur;
  };
  int top = build(0, -1);
  // forget everything on the way to the empty root bag
  std::vector<Vertex> top_bag = builder.nodes[top].bag;
  for (Vertex v : top_bag)
    top = builder.forget(top, v);

  NiceDecomposition nd;
  nd.nodes = std::move(builder.nodes);
  nd.root = top;

  // Place every edge copy: the topmost node whose bag contains both
  // endpoints and that lies below both forget points. With parent links,
  // this is the unique top of the subtree where u and v coexist.
  size_t base_count = nd.nodes.size();
  std::vector<int> parent(base_count, -1);
  for (size_t i = 0; i < base_count; ++i) {
    if (nd.nodes[i].child1 >= 0)
      parent[nd.nodes[i].child1] = static_cast<int>(i);
    if (nd.nodes[i].child2 >= 0)
      parent[nd.nodes[i].child2] = static_cast<int>(i);
  }
  auto bag_has = [&nd](int t, Vertex v) {
    const auto &bag = nd.nodes[t].bag;
    return std::binary_search(bag.begin(), bag.end(), v);
  };
  // host node per edge copy, then insert IntroduceEdge chains above hosts
  std::vector<std::vector<int>> copies_at(base_count);
  for (size_t c = 0; c < g.copies.size(); ++c) {
    Vertex u = g.copies[c].u, v = g.copies[c].v;
    int host = -1;
    for (size_t t = 0; t < base_count; ++t) {
      if (!bag_has(static_cast<int>(t), u) || !bag_has(static_cast<int>(t), v))
        continue;
      int p = parent[t];
      bool topmost = p < 0 || !bag_has(p, u) || !bag_has(p, v);
      if (topmost) {
        host = static_cast<int>(t);
        break; // connectivity of T_u ∩ T_v makes this unique
      }
    }
    if (host < 0)
      throw ValidationError("nicify: no bag contains edge copy " + std::to_string(c));
    copies_at[host].push_back(static_cast<int>(c));
  }

  // rebuild node list with chains spliced in, children-before-parents order
  std::vector<NiceNode> final_nodes;
  std::function<int(int)> emit = [&](int t) -> int {
    NiceNode node = nd.nodes[t];
    if (node.child1 >= 0)
      node.child1 = emit(node.child1);
    if (node.child2 >= 0)
      node.child2 = emit(node.child2);
    final_nodes.push_back(node);
    int cur = static_cast<int>(final_nodes.size()) - 1;
    for (int c : copies_at[t]) {
      NiceNode ie{NodeKind::IntroduceEdge, final_nodes[cur].bag, -1, c, cur, -1};
      final_nodes.push_back(std::move(ie));
      cur = static_cast<int>(final_nodes.size()) - 1;
    }
    return cur;
  };
  nd.root = emit(nd.root);
  nd.nodes = std::move(final_nodes);
  return nd;
}

DecompositionCheck validate_nice(const NiceDecomposition &nd, const Multigraph &g) {
  DecompositionCheck check;
  auto violate = [&check](const std::string &msg) { check.violations.push_back(msg); };

  if (nd.root != static_cast<int>(nd.nodes.size()) - 1)
    violate("root is not the last node");
  if (!nd.nodes.empty() && !nd.nodes[nd.root].bag.empty())
    violate("root bag is not empty");

  std::vector<int> copy_seen(g.copies.size(), 0);
  for (size_t i = 0; i < nd.nodes.size(); ++i) {
    const NiceNode &node = nd.nodes[i];
    if (node.child1 >= static_cast<int>(i) || node.child2 >= static_cast<int>(i))
      violate("node " + std::to_string(i) + " is not in postorder");
    switch (node.kind) {
    case NodeKind::Leaf:
      if (!node.bag.empty())
        violate("leaf bag not empty at node " + std::to_string(i));
      if (node.child1 >= 0)
        violate("leaf with child at node " + std::to_string(i));
      break;
    case NodeKind::IntroduceVertex: {
      const auto &child = nd.nodes[node.child1].bag;
      std::vector<Vertex> expect = child;
      expect.insert(std::lower_bound(expect.begin(), expect.end(), node.vertex), node.vertex);
      if (std::binary_search(child.begin(), child.end(), node.vertex) || node.bag != expect)
        violate("introduce-vertex bag relation broken at node " + std::to_string(i));
      break;
    }
    case NodeKind::Forget: {
      const auto &child = nd.nodes[node.child1].bag;
      std::vector<Vertex> expect = node.bag;
      expect.insert(std::lower_bound(expect.begin(), expect.end(), node.vertex), node.vertex);
      if (!std::binary_search(child.begin(), child.end(), node.vertex) || expect != child)
        violate("forget bag relation broken at node " + std::to_string(i));
      break;
    }
    case NodeKind::IntroduceEdge: {
      if (node.bag != nd.nodes[node.child1].bag)
        violate("introduce-edge bag changed at node " + std::to_string(i));
      if (node.edge_copy < 0 || node.edge_copy >= static_cast<int>(g.copies.size())) {
        violate("introduce-edge with bad copy id at node " + std::to_string(i));
        break;
      }
      copy_seen[node.edge_copy]++;
      const EdgeCopy &c = g.copies[node.edge_copy];
      if (!std::binary_search(node.bag.begin(), node.bag.end(), c.u) ||
          !std::binary_search(node.bag.begin(), node.bag.end(), c.v))
        violate("introduce-edge endpoints not in bag at node " + std::to_string(i));
      break;
    }
    case NodeKind::Join:
      if (node.child1 < 0 || node.child2 < 0 || node.bag != nd.nodes[node.child1].bag ||
          node.bag != nd.nodes[node.child2].bag)
        violate("join bag relation broken at node " + std::to_string(i));
      break;
    }
  }
  for (size_t c = 0; c < copy_seen.size(); ++c)
    if (copy_seen[c] != 1)
      violate("edge copy " + std::to_string(c) + " introduced " + std::to_string(copy_seen[c]) +
              " times");

  // every vertex introduced below its forgets; union of introduced = V
  std::vector<bool> vertex_seen(g.n, false);
  for (const NiceNode &node : nd.nodes)
    for (Vertex v : node.bag)
      vertex_seen[v] = true;
  for (Vertex v = 0; v < g.n; ++v)
    if (!vertex_seen[v])
      violate("vertex " + std::to_string(v) + " never appears");

  check.valid = check.violations.empty();
  return check;
}

} // namespace twvrp
