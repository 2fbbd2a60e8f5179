#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rfdg/analysis.hpp"
#include "rfdg/error.hpp"
#include "rfdg/repr.hpp"

namespace rfdg {

// Case1: amalgam over C^{n+1} (G2 holds every vertex); Case2: over C^{n+2}.
enum class AmalgamCase { Case1, Case2 };

inline const char* to_string(AmalgamCase c) { return c == AmalgamCase::Case1 ? "Case1" : "Case2"; }

// Image of one minimal projection delta_i of the base algebra in one factor:
// a sum of vertex projections of that factor, or its adjoined unit.
struct CoordinateImage {
  std::vector<std::string> projections;
  bool adjoined_unit = false;

  bool operator==(const CoordinateImage&) const = default;
};

struct AmalgamSpec {
  int n = 0;
  AmalgamCase kase = AmalgamCase::Case1;
  std::vector<CoordinateImage> theta1;   // into C*(G1) + C
  std::vector<CoordinateImage> theta2;   // into C*(G2), or C*(G2) + C in Case2

  std::size_t base_dim() const { return theta1.size(); }
};

inline void require_nontrivial(const Decomposition& d) {
  if (d.cycles.empty() || d.g2.num_edges() == 0)
    throw Error(ErrorCode::TrivialDecomposition, "amalgam data needs cycles and forest edges");
}

inline AmalgamSpec amalgam_data(const Graph& /*g*/, const Decomposition& d) {
  require_nontrivial(d);
  if (d.betas.empty()) throw Error(ErrorCode::InconsistentDecomposition, "no G2-only vertices");
  AmalgamSpec s;
  s.n = static_cast<int>(d.shared.size());
  s.kase = d.case_flag == DecompositionCase::SameVertexSet ? AmalgamCase::Case1 : AmalgamCase::Case2;
  if (s.kase == AmalgamCase::Case2 && d.alphas.empty())
    throw Error(ErrorCode::InconsistentDecomposition, "G2 misses a vertex yet no G1-only vertex exists");
  if (s.kase == AmalgamCase::Case1 && !d.alphas.empty())
    throw Error(ErrorCode::InconsistentDecomposition, "G2 holds every vertex yet G1-only vertices exist");

  for (const auto& p : d.shared) {
    s.theta1.push_back({{p}, false});
    s.theta2.push_back({{p}, false});
  }
  if (s.kase == AmalgamCase::Case1) {
    s.theta1.push_back({{}, true});
    s.theta2.push_back({d.betas, false});
  } else {
    s.theta1.push_back({d.alphas, false});
    s.theta2.push_back({{}, true});
    s.theta1.push_back({{}, true});
    s.theta2.push_back({d.betas, false});
  }
  return s;
}

// Generator-image tables of the two factors on the common D-dimensional space.
struct FactorImages {
  int dim = 0;
  AmalgamCase kase = AmalgamCase::Case1;
  Complex z{1.0, 0.0};
  std::map<std::string, Matrix> g1_vertices, g1_edges;
  Matrix g1_unit;                       // (0, 1) in C*(G1) + C
  std::map<std::string, Matrix> g2_vertices, g2_edges;
  std::optional<Matrix> g2_unit;        // (0, 1) in C*(G2) + C, Case2 only
};

inline Matrix slot_projection(const std::vector<int>& slots, int dim) {
  Matrix m = Matrix::Zero(dim, dim);
  for (int s : slots) m(s, s) = 1.0;
  return m;
}

// pi_{1,z}: cycle reps routed through the layout, adjoined unit -> 1_{k-I}.
// pi~_2: forest rep routed through the layout, Case2 unit -> 1_{sum N - I}.
inline FactorImages build_factor_reps(const Graph& g, const Decomposition& d, Complex z) {
  if (!no_cycle_has_entry(g).holds) throw Error(ErrorCode::EntryPresent, "factor images need an entry-free graph");
  require_nontrivial(d);
  auto lay = no_entry_layout(g, d);
  FactorImages f;
  f.dim = lay.dim;
  f.z = z;
  f.kase = d.case_flag == DecompositionCase::SameVertexSet ? AmalgamCase::Case1 : AmalgamCase::Case2;

  for (std::size_t ci = 0; ci < d.cycles.size(); ++ci) {
    Rep cr = cycle_rep(g, d.cycles[ci], z);
    for (int v = 0; v < cr.graph.num_vertices(); ++v)
      f.g1_vertices[cr.graph.vertex_id(v)] = embed(cr.vertex_mats[v], lay.cycle_slots[ci], lay.dim);
    for (int e = 0; e < cr.graph.num_edges(); ++e)
      f.g1_edges[cr.graph.edge_id(e)] = embed(cr.edge_mats[e], lay.cycle_slots[ci], lay.dim);
  }
  std::vector<int> head(lay.k - lay.shared);
  for (int i = 0; i < lay.k - lay.shared; ++i) head[i] = i;
  f.g1_unit = slot_projection(head, lay.dim);

  const Graph& h = d.g2;
  for (int v = 0; v < h.num_vertices(); ++v)
    f.g2_vertices[h.vertex_id(v)] = embed(lay.forest.vertex_mats[v], lay.forest_slot, lay.dim);
  for (int e = 0; e < h.num_edges(); ++e)
    f.g2_edges[h.edge_id(e)] = embed(lay.forest.edge_mats[e], lay.forest_slot, lay.dim);
  if (f.kase == AmalgamCase::Case2) {
    std::vector<int> tail;
    for (int i = lay.k; i < lay.dim; ++i) tail.push_back(i);
    f.g2_unit = slot_projection(tail, lay.dim);
  }
  return f;
}

inline Matrix coordinate_image(const CoordinateImage& c, const std::map<std::string, Matrix>& vertices,
                               const Matrix* unit, int dim) {
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& p : c.projections) {
    auto it = vertices.find(p);
    if (it == vertices.end()) throw Error(ErrorCode::LayoutMismatch, "factor has no projection '" + p + "'");
    m += it->second;
  }
  if (c.adjoined_unit) {
    if (!unit) throw Error(ErrorCode::LayoutMismatch, "factor has no adjoined unit");
    m += *unit;
  }
  return m;
}

struct CompatibilityReport {
  double max_residual = 0.0;             // max_{i,z} ||pi1(theta1(d_i)) - pi2(theta2(d_i))||
  std::vector<double> per_z;
  double unitality_residual = 0.0;       // both sides: sum_i theta(d_i) -> identity
  bool coordinates_nonzero = true;       // injectivity on the base algebra
};

inline CompatibilityReport check_compatibility(const AmalgamSpec& spec, const std::vector<FactorImages>& factors) {
  if (spec.theta1.size() != spec.theta2.size()) throw Error(ErrorCode::LayoutMismatch, "theta maps of different size");
  CompatibilityReport rpt;
  for (const auto& f : factors) {
    if (f.kase != spec.kase) throw Error(ErrorCode::LayoutMismatch, "factor built for the other case");
    if (f.g1_unit.rows() != f.dim) throw Error(ErrorCode::LayoutMismatch, "factor unit has the wrong size");
    const Matrix* u2 = f.g2_unit ? &*f.g2_unit : nullptr;
    double worst = 0.0;
    Matrix sum1 = Matrix::Zero(f.dim, f.dim), sum2 = Matrix::Zero(f.dim, f.dim);
    for (std::size_t i = 0; i < spec.base_dim(); ++i) {
      Matrix a = coordinate_image(spec.theta1[i], f.g1_vertices, &f.g1_unit, f.dim);
      Matrix b = coordinate_image(spec.theta2[i], f.g2_vertices, u2, f.dim);
      worst = std::max(worst, op_norm(a - b));
      if (op_norm(a) == 0.0 || op_norm(b) == 0.0) rpt.coordinates_nonzero = false;
      sum1 += a;
      sum2 += b;
    }
    const Matrix id = Matrix::Identity(f.dim, f.dim);
    rpt.unitality_residual = std::max({rpt.unitality_residual, op_norm(sum1 - id), op_norm(sum2 - id)});
    rpt.per_z.push_back(worst);
    rpt.max_residual = std::max(rpt.max_residual, worst);
  }
  return rpt;
}

// ---- JSON ---------------------------------------------------------------------------

inline ordered_json amalgam_to_json(const AmalgamSpec& s) {
  auto side = [](const std::vector<CoordinateImage>& t) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : t) {
      ordered_json cj;
      cj["projections"] = c.projections;
      cj["adjoined_unit"] = c.adjoined_unit;
      arr.push_back(std::move(cj));
    }
    return arr;
  };
  ordered_json j;
  j["case"] = to_string(s.kase);
  j["n"] = s.n;
  j["base_dim"] = s.base_dim();
  j["theta1"] = side(s.theta1);
  j["theta2"] = side(s.theta2);
  return j;
}

inline AmalgamSpec amalgam_from_json(const ordered_json& j) {
  auto side = [](const ordered_json& arr) {
    std::vector<CoordinateImage> out;
    for (const auto& c : arr)
      out.push_back({c.at("projections").get<std::vector<std::string>>(), c.at("adjoined_unit").get<bool>()});
    return out;
  };
  AmalgamSpec s;
  s.kase = j.at("case").get<std::string>() == "Case1" ? AmalgamCase::Case1 : AmalgamCase::Case2;
  s.n = j.at("n").get<int>();
  s.theta1 = side(j.at("theta1"));
  s.theta2 = side(j.at("theta2"));
  return s;
}

}  // namespace rfdg
