#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "rfdg/error.hpp"
#include "rfdg/graph.hpp"

namespace rfdg {

// Vertices with r^{-1}(v) empty.
inline std::vector<int> sources(const Graph& g) {
  std::vector<int> out;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.in_edges(v).empty()) out.push_back(v);
  return out;
}

// Strongly connected components (Tarjan, iterative). comp[v] is the component id.
inline std::vector<int> strongly_connected_components(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;

  struct Frame { int v; std::size_t child; };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& outs = g.out_edges(f.v);
      if (f.child < outs.size()) {
        int w = g.rng(outs[f.child++]);
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      int v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
    }
  }
  return comp;
}

// Edges lying on at least one cycle: both endpoints in one component and that
// component is cyclic (a self-loop, or more than one vertex).
inline std::vector<char> cycle_edge_mask(const Graph& g) {
  auto comp = strongly_connected_components(g);
  std::vector<char> mask(g.num_edges(), 0);
  for (int e = 0; e < g.num_edges(); ++e)
    mask[e] = comp[g.src(e)] == comp[g.rng(e)];
  return mask;
}

// Vertices that reach themselves through at least one edge.
inline std::vector<int> cycle_vertices(const Graph& g) {
  auto mask = cycle_edge_mask(g);
  std::vector<char> on(g.num_vertices(), 0);
  for (int e = 0; e < g.num_edges(); ++e)
    if (mask[e]) on[g.src(e)] = 1;
  std::vector<int> out;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (on[v]) out.push_back(v);
  return out;
}

// Rotates a closed simple walk so it starts at its least vertex.
inline Cycle canonical_cycle(const Graph& g, std::vector<int> edges) {
  auto least = std::min_element(edges.begin(), edges.end(),
                                [&](int a, int b) { return g.src(a) < g.src(b); });
  std::rotate(edges.begin(), least, edges.end());
  return Cycle{g.src(edges.front()), std::move(edges)};
}

// Shortest simple cycle through v (BFS, out-edges in id order).
inline std::optional<Cycle> shortest_cycle_through(const Graph& g, int v) {
  std::vector<int> parent_edge(g.num_vertices(), -1);
  std::vector<char> seen(g.num_vertices(), 0);
  std::queue<int> frontier;
  frontier.push(v);
  seen[v] = 1;
  while (!frontier.empty()) {
    int u = frontier.front();
    frontier.pop();
    for (int e : g.out_edges(u)) {
      int w = g.rng(e);
      if (w == v) {
        std::vector<int> edges{e};
        for (int x = u; x != v; x = g.src(parent_edge[x])) edges.push_back(parent_edge[x]);
        std::reverse(edges.begin(), edges.end());
        return canonical_cycle(g, std::move(edges));
      }
      if (!seen[w]) {
        seen[w] = 1;
        parent_edge[w] = e;
        frontier.push(w);
      }
    }
  }
  return std::nullopt;
}

struct EntryCheck {
  bool holds = true;
  std::optional<int> witness;      // entry edge
  std::optional<Cycle> host;       // a cycle the witness enters
};

// A cycle vertex with in-degree >= 2 receives an edge that is not on a given
// cycle through it, and every entry raises the in-degree of its range to >= 2.
inline EntryCheck no_cycle_has_entry(const Graph& g) {
  for (int v : cycle_vertices(g)) {
    if (g.in_edges(v).size() < 2) continue;
    auto host = shortest_cycle_through(g, v);
    std::set<int> on_host(host->edges.begin(), host->edges.end());
    for (int e : g.in_edges(v))
      if (!on_host.count(e)) return EntryCheck{false, e, host};
  }
  return {};
}

// All edges not on `c` whose range lies on `c`.
inline std::vector<int> entries_of(const Graph& g, const Cycle& c) {
  std::set<int> on(c.edges.begin(), c.edges.end());
  std::vector<int> out;
  for (int v : cycle_vertex_order(g, c))
    for (int e : g.in_edges(v))
      if (!on.count(e)) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

// Complete list of simple cycles of a graph in which no cycle has an entry.
// Every cycle vertex then has a unique incoming edge, so each cycle is traced
// backwards from its least vertex.
inline std::vector<Cycle> find_cycles(const Graph& g) {
  if (!no_cycle_has_entry(g).holds) throw Error(ErrorCode::EntryPresent, "find_cycles needs an entry-free graph");
  std::vector<char> done(g.num_vertices(), 0);
  std::vector<Cycle> out;
  for (int v : cycle_vertices(g)) {
    if (done[v]) continue;
    std::vector<int> edges;
    int u = v;
    do {
      int e = g.in_edges(u).front();
      edges.push_back(e);
      done[u] = 1;
      u = g.src(e);
    } while (u != v);
    std::reverse(edges.begin(), edges.end());
    out.push_back(Cycle{v, std::move(edges)});
  }
  return out;
}

// n(t): number of paths starting at t, the trivial path included.
inline std::uint64_t count_paths_from(const Graph& g, int t) {
  std::vector<char> cyclic(g.num_vertices(), 0);
  for (int v : cycle_vertices(g)) cyclic[v] = 1;
  std::vector<std::optional<std::uint64_t>> memo(g.num_vertices());
  std::function<std::uint64_t(int)> count = [&](int v) -> std::uint64_t {
    if (cyclic[v])
      throw Error(ErrorCode::InfinitePathCount, "cycle through '" + g.vertex_id(v) + "' reachable from '" + g.vertex_id(t) + "'");
    if (memo[v]) return *memo[v];
    std::uint64_t n = 1;
    for (int e : g.out_edges(v))
      if (__builtin_add_overflow(n, count(g.rng(e)), &n))
        throw Error(ErrorCode::CountOverflow, "path count from '" + g.vertex_id(t) + "' exceeds 64 bits");
    memo[v] = n;
    return n;
  };
  return count(t);
}

inline std::uint64_t count_paths_from(const Graph& g, std::string_view t) { return count_paths_from(g, g.vertex(t)); }

// ---- G1 / G2 decomposition ---------------------------------------------------

enum class DecompositionCase { SameVertexSet, ProperSubset };

inline const char* to_string(DecompositionCase c) {
  return c == DecompositionCase::SameVertexSet ? "SameVertexSet" : "ProperSubset";
}

struct Decomposition {
  Graph g1;                          // union of all cycles
  Graph g2;                          // remaining edges, endpoints, and off-cycle vertices
  std::vector<Cycle> cycles;         // indexed in the original graph
  std::vector<std::string> shared;   // p_1..p_n: grouped by cycle, traversal order
  std::vector<std::string> alphas;   // G1 \ G2, sorted
  std::vector<std::string> betas;    // G2 \ G1, sorted
  DecompositionCase case_flag = DecompositionCase::SameVertexSet;
};

// The split behind decompose, without its non-degeneracy guard. G2 keeps every
// vertex that is not on a cycle, so isolated vertices are not lost.
inline Decomposition split_cycles_and_forest(const Graph& g) {
  Decomposition d;
  d.cycles = find_cycles(g);
  auto mask = cycle_edge_mask(g);
  std::vector<int> e1, e2;
  for (int e = 0; e < g.num_edges(); ++e) (mask[e] ? e1 : e2).push_back(e);
  std::vector<char> cyclic(g.num_vertices(), 0);
  for (const auto& c : d.cycles)
    for (int v : cycle_vertex_order(g, c)) cyclic[v] = 1;
  std::vector<int> off_cycle;
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!cyclic[v]) off_cycle.push_back(v);

  d.g1 = subgraph(g, e1);
  d.g2 = subgraph(g, e2, off_cycle);

  for (const auto& c : d.cycles)
    for (int v : cycle_vertex_order(g, c)) {
      if (d.g2.find_vertex(g.vertex_id(v))) d.shared.push_back(g.vertex_id(v));
      else d.alphas.push_back(g.vertex_id(v));
    }
  std::sort(d.alphas.begin(), d.alphas.end());
  for (const auto& v : d.g2.vertices())
    if (!d.g1.find_vertex(v)) d.betas.push_back(v);
  d.case_flag = d.g2.num_vertices() == g.num_vertices() ? DecompositionCase::SameVertexSet
                                                         : DecompositionCase::ProperSubset;
  return d;
}

inline Decomposition decompose(const Graph& g) {
  if (!no_cycle_has_entry(g).holds) throw Error(ErrorCode::EntryPresent, "decompose needs an entry-free graph");
  auto d = split_cycles_and_forest(g);
  if (d.cycles.empty()) throw Error(ErrorCode::TrivialDecomposition, "graph has no cycles");
  if (d.g2.num_edges() == 0) throw Error(ErrorCode::TrivialDecomposition, "every edge lies on a cycle");
  return d;
}

// Relation descriptors: (1) per vertex, (3) per edge with its source, (4) per
// regular vertex with its incoming edges. Orthogonality (2) between G1-only and
// G2-only vertices belongs to neither factor; unitality of the amalgam supplies it.
using RelationDescriptor = std::tuple<int, std::vector<std::string>>;

inline std::set<RelationDescriptor> ck_descriptors(const Graph& h) {
  std::set<RelationDescriptor> out;
  for (int v = 0; v < h.num_vertices(); ++v) {
    out.insert({1, {h.vertex_id(v)}});
    if (!h.in_edges(v).empty()) {
      std::vector<std::string> ids{h.vertex_id(v)};
      for (int e : h.in_edges(v)) ids.push_back(h.edge_id(e));
      out.insert({4, std::move(ids)});
    }
  }
  for (int e = 0; e < h.num_edges(); ++e) out.insert({3, {h.edge_id(e), h.vertex_id(h.src(e))}});
  return out;
}

inline bool relation_partition_check(const Graph& g, const Decomposition& d) {
  // edges partitioned, vertices covered
  std::vector<Edge> both = d.g1.edges();
  both.insert(both.end(), d.g2.edges().begin(), d.g2.edges().end());
  std::sort(both.begin(), both.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
  if (both != g.edges()) return false;
  std::set<std::string> vs(d.g1.vertices().begin(), d.g1.vertices().end());
  vs.insert(d.g2.vertices().begin(), d.g2.vertices().end());
  if (std::vector<std::string>(vs.begin(), vs.end()) != g.vertices()) return false;

  std::set<std::string> shared;
  for (const auto& v : d.g1.vertices())
    if (d.g2.find_vertex(v)) shared.insert(v);
  if (shared != std::set<std::string>(d.shared.begin(), d.shared.end())) return false;
  for (const auto& p : shared)
    for (int e : g.in_edges(g.vertex(p)))
      if (!d.g1.find_edge(g.edge_id(e))) return false;

  auto whole = ck_descriptors(g);
  auto parts = ck_descriptors(d.g1);
  auto second = ck_descriptors(d.g2);
  parts.insert(second.begin(), second.end());
  return whole == parts;
}

}  // namespace rfdg
