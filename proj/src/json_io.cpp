#include "twvrp/json_io.hpp"

#include <json.hpp>

namespace twvrp {

using json = nlohmann::ordered_json;

namespace {

json parse_text(const std::string &text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw ValidationError(std::string("document: ") + e.what());
  }
}

long long get_int(const json &j, const std::string &path) {
  if (!j.is_number_integer())
    throw ValidationError(path + ": expected an integer");
  return j.get<long long>();
}

std::vector<Vertex> get_vertex_list(const json &j, const std::string &path) {
  if (!j.is_array())
    throw ValidationError(path + ": expected an array");
  std::vector<Vertex> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(static_cast<Vertex>(get_int(j[i], path + "[" + std::to_string(i) + "]")));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

} // namespace

VrpInstance parse_instance(const std::string &text) {
  json doc = parse_text(text);
  if (!doc.is_object())
    throw ValidationError("document: expected an object");

  static const char *known[] = {"n",   "edges",   "depots", "clients", "k",
                                "variant", "kappa", "ell",    "demands", "g",
                                "r",   "names"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char *f : known)
      if (it.key() == f)
        ok = true;
    if (!ok)
      throw ValidationError(it.key() + ": unknown field");
  }
  for (const char *f : {"n", "edges", "depots", "clients", "k", "variant"})
    if (!doc.contains(f))
      throw ValidationError(std::string(f) + ": required field missing");

  VrpInstance inst;
  inst.graph.n = static_cast<int>(get_int(doc["n"], "n"));

  const json &edges = doc["edges"];
  if (!edges.is_array())
    throw ValidationError("edges: expected an array");
  for (size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "edges[" + std::to_string(i) + "]";
    const json &e = edges[i];
    if (!e.is_array() || (e.size() != 3 && e.size() != 4))
      throw ValidationError(path + ": expected [u,v,w] or [u,v,w,mult]");
    EdgeRec rec;
    rec.u = static_cast<Vertex>(get_int(e[0], path + "[0]"));
    rec.v = static_cast<Vertex>(get_int(e[1], path + "[1]"));
    rec.w = get_int(e[2], path + "[2]");
    rec.mult = e.size() == 4 ? static_cast<int>(get_int(e[3], path + "[3]")) : 1;
    inst.graph.edges.push_back(rec);
  }

  inst.depots = get_vertex_list(doc["depots"], "depots");
  inst.clients = get_vertex_list(doc["clients"], "clients");
  inst.k = static_cast<int>(get_int(doc["k"], "k"));

  std::string vname = doc["variant"].is_string() ? doc["variant"].get<std::string>() : "";
  auto variant = variant_from_name(vname);
  if (!variant)
    throw ValidationError("variant: unknown variant '" + vname + "'");
  inst.variant = *variant;

  if (doc.contains("kappa")) {
    const json &kap = doc["kappa"];
    if (!kap.is_array())
      throw ValidationError("kappa: expected an array");
    std::vector<Weight> caps;
    for (size_t i = 0; i < kap.size(); ++i)
      caps.push_back(get_int(kap[i], "kappa[" + std::to_string(i) + "]"));
    inst.edge_caps = std::move(caps);
  }
  if (doc.contains("ell"))
    inst.load_cap = get_int(doc["ell"], "ell");
  if (doc.contains("demands")) {
    const json &dem = doc["demands"];
    if (!dem.is_object())
      throw ValidationError("demands: expected an object mapping client to demand");
    std::map<Vertex, Weight> demands;
    for (auto it = dem.begin(); it != dem.end(); ++it) {
      Vertex c;
      try {
        c = std::stoi(it.key());
      } catch (...) {
        throw ValidationError("demands: key '" + it.key() + "' is not a vertex id");
      }
      demands[c] = get_int(it.value(), "demands[" + it.key() + "]");
    }
    inst.demands = std::move(demands);
  }
  if (doc.contains("g"))
    inst.gas_cap = get_int(doc["g"], "g");
  if (doc.contains("r"))
    inst.weight_bound = get_int(doc["r"], "r");
  if (doc.contains("names")) {
    const json &names = doc["names"];
    if (!names.is_array())
      throw ValidationError("names: expected an array");
    for (const auto &s : names) {
      if (!s.is_string())
        throw ValidationError("names: expected strings");
      inst.names.push_back(s.get<std::string>());
    }
  }

  inst.validate();
  return inst;
}

std::string emit_instance(const VrpInstance &inst) {
  json doc;
  doc["n"] = inst.graph.n;
  json edges = json::array();
  for (const EdgeRec &e : inst.graph.edges) {
    if (e.mult == 1)
      edges.push_back({e.u, e.v, e.w});
    else
      edges.push_back({e.u, e.v, e.w, e.mult});
  }
  doc["edges"] = std::move(edges);
  doc["depots"] = inst.depots;
  doc["clients"] = inst.clients;
  doc["k"] = inst.k;
  doc["variant"] = variant_name(inst.variant);
  if (inst.edge_caps)
    doc["kappa"] = *inst.edge_caps;
  if (inst.load_cap)
    doc["ell"] = *inst.load_cap;
  if (inst.demands) {
    json dem = json::object();
    for (const auto &[c, d] : *inst.demands)
      dem[std::to_string(c)] = d;
    doc["demands"] = std::move(dem);
  }
  if (inst.gas_cap)
    doc["g"] = *inst.gas_cap;
  if (inst.weight_bound)
    doc["r"] = *inst.weight_bound;
  if (!inst.names.empty())
    doc["names"] = inst.names;
  return doc.dump(2) + "\n";
}

Routing parse_routing(const std::string &text, const VrpInstance &inst) {
  json doc = parse_text(text);
  if (!doc.is_object() || !doc.contains("walks") || !doc.contains("assignment"))
    throw ValidationError("routing document: requires fields walks and assignment");

  Routing routing;
  const json &walks = doc["walks"];
  if (!walks.is_array())
    throw ValidationError("walks: expected an array");
  for (size_t wi = 0; wi < walks.size(); ++wi) {
    const std::string path = "walks[" + std::to_string(wi) + "]";
    const json &w = walks[wi];
    Walk walk;
    if (w.is_array()) {
      // Plain vertex array; each step must resolve to a unique edge record.
      for (size_t i = 0; i < w.size(); ++i)
        walk.vertices.push_back(static_cast<Vertex>(get_int(w[i], path)));
      for (size_t i = 0; i + 1 < walk.vertices.size(); ++i) {
        Vertex a = walk.vertices[i], b = walk.vertices[i + 1];
        int found = -1;
        for (size_t e = 0; e < inst.graph.edges.size(); ++e) {
          const EdgeRec &rec = inst.graph.edges[e];
          if ((rec.u == a && rec.v == b) || (rec.u == b && rec.v == a)) {
            if (found >= 0)
              throw ValidationError(path + ": ambiguous parallel edge between " +
                                    std::to_string(a) + " and " + std::to_string(b) +
                                    "; use edge_ids");
            found = static_cast<int>(e);
          }
        }
        if (found < 0)
          throw ValidationError(path + ": no edge between " + std::to_string(a) + " and " +
                                std::to_string(b));
        walk.edge_ids.push_back(found);
      }
    } else if (w.is_object() && w.contains("vertices")) {
      for (const auto &v : w["vertices"])
        walk.vertices.push_back(static_cast<Vertex>(get_int(v, path + ".vertices")));
      if (w.contains("edge_ids"))
        for (const auto &e : w["edge_ids"])
          walk.edge_ids.push_back(static_cast<int>(get_int(e, path + ".edge_ids")));
      if (walk.edge_ids.empty() && walk.vertices.size() > 1) {
        json arr = w["vertices"];
        // Re-run the plain-array resolution.
        json tmp;
        tmp["walks"] = json::array({arr});
        tmp["assignment"] = json::object();
        Routing r = parse_routing(tmp.dump(), inst);
        walk = r.walks[0];
      }
    } else {
      throw ValidationError(path + ": expected a vertex array or {vertices, edge_ids}");
    }
    routing.walks.push_back(std::move(walk));
  }

  const json &assignment = doc["assignment"];
  if (!assignment.is_object())
    throw ValidationError("assignment: expected an object mapping client to walk index");
  for (auto it = assignment.begin(); it != assignment.end(); ++it) {
    Vertex c;
    try {
      c = std::stoi(it.key());
    } catch (...) {
      throw ValidationError("assignment: key '" + it.key() + "' is not a vertex id");
    }
    routing.assignment[c] = static_cast<int>(get_int(it.value(), "assignment[" + it.key() + "]"));
  }
  return routing;
}

std::string emit_routing(const Routing &routing) {
  json doc;
  json walks = json::array();
  for (const Walk &w : routing.walks) {
    json jw;
    jw["vertices"] = w.vertices;
    jw["edge_ids"] = w.edge_ids;
    walks.push_back(std::move(jw));
  }
  doc["walks"] = std::move(walks);
  json assignment = json::object();
  for (const auto &[c, wi] : routing.assignment)
    assignment[std::to_string(c)] = wi;
  doc["assignment"] = std::move(assignment);
  return doc.dump(2) + "\n";
}

} // namespace twvrp
