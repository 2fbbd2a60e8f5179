#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rfdg/error.hpp"

namespace rfdg {

using ordered_json = nlohmann::ordered_json;

struct Edge {
  std::string id;
  std::string src;
  std::string rng;

  bool operator==(const Edge&) const = default;
};

// Finite directed multigraph. Vertices and edges are kept sorted by id, so
// integer indices order exactly like the lexicographic order of the ids.
class Graph {
 public:
  Graph() = default;

  // Validates ids and endpoints. An empty vertex set is allowed here (it is
  // rejected by parse_graph); subgraphs produced by decompositions may be empty.
  static Graph make(std::vector<std::string> vertices, std::vector<Edge> edges) {
    Graph g;
    std::sort(vertices.begin(), vertices.end());
    if (auto dup = std::adjacent_find(vertices.begin(), vertices.end()); dup != vertices.end())
      throw Error(ErrorCode::DuplicateId, "vertex '" + *dup + "' listed twice");
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < edges.size(); ++i)
      if (edges[i].id == edges[i - 1].id)
        throw Error(ErrorCode::DuplicateId, "edge '" + edges[i].id + "' listed twice");

    g.vertices_ = std::move(vertices);
    for (std::size_t i = 0; i < g.vertices_.size(); ++i)
      g.vertex_index_.emplace(g.vertices_[i], static_cast<int>(i));
    for (std::size_t i = 0; i < edges.size(); ++i)
      g.edge_index_.emplace(edges[i].id, static_cast<int>(i));

    g.in_.assign(g.vertices_.size(), {});
    g.out_.assign(g.vertices_.size(), {});
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      auto s = g.find_vertex(e.src);
      auto r = g.find_vertex(e.rng);
      if (!s) throw Error(ErrorCode::DanglingEndpoint, "edge '" + e.id + "' has unknown src '" + e.src + "'");
      if (!r) throw Error(ErrorCode::DanglingEndpoint, "edge '" + e.id + "' has unknown rng '" + e.rng + "'");
      g.src_.push_back(*s);
      g.rng_.push_back(*r);
      g.out_[*s].push_back(static_cast<int>(i));
      g.in_[*r].push_back(static_cast<int>(i));
    }
    g.edges_ = std::move(edges);
    return g;
  }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const std::string& vertex_id(int v) const { return vertices_.at(v); }
  const std::string& edge_id(int e) const { return edges_.at(e).id; }

  int src(int e) const { return src_[e]; }
  int rng(int e) const { return rng_[e]; }

  // Edge indices, ascending (hence lexicographic by id).
  const std::vector<int>& in_edges(int v) const { return in_[v]; }
  const std::vector<int>& out_edges(int v) const { return out_[v]; }

  std::optional<int> find_vertex(std::string_view id) const {
    auto it = vertex_index_.find(std::string(id));
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> find_edge(std::string_view id) const {
    auto it = edge_index_.find(std::string(id));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
  }

  int vertex(std::string_view id) const {
    if (auto v = find_vertex(id)) return *v;
    throw Error(ErrorCode::UnknownId, "no vertex '" + std::string(id) + "'");
  }
  int edge(std::string_view id) const {
    if (auto e = find_edge(id)) return *e;
    throw Error(ErrorCode::UnknownId, "no edge '" + std::string(id) + "'");
  }

  bool operator==(const Graph& o) const { return vertices_ == o.vertices_ && edges_ == o.edges_; }

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::map<std::string, int, std::less<>> vertex_index_;
  std::map<std::string, int, std::less<>> edge_index_;
  std::vector<int> src_, rng_;
  std::vector<std::vector<int>> in_, out_;
};

// A path e_1 .. e_n listed in traversal order: s(e_{i+1}) = r(e_i). `base` is
// the source vertex s(e_1), or the vertex itself for a trivial path.
struct Path {
  int base = 0;
  std::vector<int> edges;

  bool trivial() const { return edges.empty(); }
  std::size_t length() const { return edges.size(); }

  auto operator<=>(const Path&) const = default;
  bool operator==(const Path&) const = default;
};

inline Path trivial_path(int v) { return Path{v, {}}; }

inline int source(const Path& p) { return p.base; }

inline int range(const Graph& g, const Path& p) {
  return p.edges.empty() ? p.base : g.rng(p.edges.back());
}

inline bool is_path(const Graph& g, const Path& p) {
  if (p.base < 0 || p.base >= g.num_vertices()) return false;
  int at = p.base;
  for (int e : p.edges) {
    if (e < 0 || e >= g.num_edges() || g.src(e) != at) return false;
    at = g.rng(e);
  }
  return true;
}

inline Path make_path(const Graph& g, std::string_view base, const std::vector<std::string>& edge_ids) {
  Path p{g.vertex(base), {}};
  for (const auto& id : edge_ids) p.edges.push_back(g.edge(id));
  if (!is_path(g, p)) throw Error(ErrorCode::InvalidPath, "edges do not compose from '" + std::string(base) + "'");
  return p;
}

inline Path make_path(const Graph& g, const std::vector<std::string>& edge_ids) {
  if (edge_ids.empty()) throw Error(ErrorCode::InvalidPath, "a trivial path needs a base vertex");
  return make_path(g, g.vertex_id(g.src(g.edge(edge_ids.front()))), edge_ids);
}

// Simple cycle: edges in traversal order starting at the lexicographically
// least vertex on it, so the last edge is the one whose range is `base`.
struct Cycle {
  int base = 0;
  std::vector<int> edges;

  std::size_t length() const { return edges.size(); }
  Path as_path() const { return Path{base, edges}; }
  bool operator==(const Cycle&) const = default;
};

// Vertices v_1 = base, v_2, ..., v_N in traversal order.
inline std::vector<int> cycle_vertex_order(const Graph& g, const Cycle& c) {
  std::vector<int> out;
  out.reserve(c.edges.size());
  for (int e : c.edges) out.push_back(g.src(e));
  return out;
}

inline std::vector<std::string> edge_ids(const Graph& g, const std::vector<int>& edges) {
  std::vector<std::string> out;
  out.reserve(edges.size());
  for (int e : edges) out.push_back(g.edge_id(e));
  return out;
}

inline ordered_json path_to_json(const Graph& g, const Path& p) {
  ordered_json j;
  j["base"] = g.vertex_id(p.base);
  j["edges"] = edge_ids(g, p.edges);
  return j;
}

inline Path path_from_json(const Graph& g, const ordered_json& j) {
  return make_path(g, j.at("base").get<std::string>(), j.at("edges").get<std::vector<std::string>>());
}

// ---- JSON schema -----------------------------------------------------------

inline Graph graph_from_json(const ordered_json& doc) {
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges") ||
      !doc["vertices"].is_array() || !doc["edges"].is_array())
    throw Error(ErrorCode::SchemaViolation, "expected {\"vertices\": [...], \"edges\": [...]}");
  std::vector<std::string> vertices;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_string()) throw Error(ErrorCode::SchemaViolation, "vertex ids must be strings");
    vertices.push_back(v.get<std::string>());
  }
  std::vector<Edge> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_object()) throw Error(ErrorCode::SchemaViolation, "edges must be objects");
    for (const char* key : {"id", "src", "rng"})
      if (!e.contains(key) || !e[key].is_string())
        throw Error(ErrorCode::SchemaViolation, std::string("edge field '") + key + "' must be a string");
    edges.push_back({e["id"].get<std::string>(), e["src"].get<std::string>(), e["rng"].get<std::string>()});
  }
  if (vertices.empty()) throw Error(ErrorCode::EmptyGraph, "graph has no vertices");
  return Graph::make(std::move(vertices), std::move(edges));
}

inline Graph parse_graph(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson, e.what());
  }
  return graph_from_json(doc);
}

inline ordered_json graph_to_json(const Graph& g) {
  ordered_json doc;
  doc["vertices"] = g.vertices();
  doc["edges"] = ordered_json::array();
  for (const auto& e : g.edges()) {
    ordered_json je;
    je["id"] = e.id;
    je["src"] = e.src;
    je["rng"] = e.rng;
    doc["edges"].push_back(std::move(je));
  }
  return doc;
}

inline std::string serialize_graph(const Graph& g) { return graph_to_json(g).dump(); }

// Subgraph on the given edges plus any extra vertices, ids taken from `g`.
inline Graph subgraph(const Graph& g, const std::vector<int>& edges, const std::vector<int>& extra_vertices = {}) {
  std::vector<char> keep(g.num_vertices(), 0);
  for (int v : extra_vertices) keep[v] = 1;
  std::vector<Edge> es;
  for (int e : edges) {
    keep[g.src(e)] = keep[g.rng(e)] = 1;
    es.push_back(g.edges()[e]);
  }
  std::vector<std::string> vs;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (keep[v]) vs.push_back(g.vertex_id(v));
  return Graph::make(std::move(vs), std::move(es));
}

}  // namespace rfdg
