#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rfdg/analysis.hpp"
#include "rfdg/error.hpp"
#include "rfdg/graph.hpp"
#include "rfdg/symbolic.hpp"

namespace rfdg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kUnitModulusTolerance = 1e-12;

// Largest singular value; exact zero short-circuits the SVD.
inline double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.cwiseAbs2().sum() == 0.0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline Matrix matrix_unit(int dim, int row, int col, Complex value = 1.0) {
  Matrix m = Matrix::Zero(dim, dim);
  m(row, col) = value;
  return m;
}

// Semantic label of one basis coordinate.
struct BasisLabel {
  enum class Kind { Path, Shared, CycleSlot };
  Kind kind = Kind::Path;
  std::string vertex;               // vertex whose projection contains the slot
  std::string base;                 // path source, or the cycle's base vertex
  std::vector<std::string> edges;   // path edges (Kind::Path only)

  bool operator==(const BasisLabel&) const = default;
};

struct ZParam {
  std::string cycle_base;
  Complex z;

  bool operator==(const ZParam&) const = default;
};

// Matrices for every generator of C*(graph) on a common space of size `dim`.
struct Rep {
  Graph graph;
  int dim = 0;
  std::vector<Matrix> vertex_mats;  // by vertex index
  std::vector<Matrix> edge_mats;    // by edge index
  std::vector<ZParam> z_params;
  std::vector<BasisLabel> basis_labels;
  std::vector<int> block_dims;      // direct-sum block sizes

  const Matrix& vertex_mat(std::string_view v) const { return vertex_mats.at(graph.vertex(v)); }
  const Matrix& edge_mat(std::string_view e) const { return edge_mats.at(graph.edge(e)); }
};

inline Rep empty_rep(const Graph& g, int dim) {
  Rep r;
  r.graph = g;
  r.dim = dim;
  r.vertex_mats.assign(g.num_vertices(), Matrix::Zero(dim, dim));
  r.edge_mats.assign(g.num_edges(), Matrix::Zero(dim, dim));
  r.basis_labels.resize(dim);
  r.block_dims = {dim};
  return r;
}

// ---- finite graphs without cycles -------------------------------------------------

// Path basis: block i spans the paths leaving the i-th source; p_w is the
// projection onto paths ending at w and s_e extends a path by e.
inline Rep acyclic_rep(const Graph& g) {
  if (!cycle_vertices(g).empty()) throw Error(ErrorCode::CyclePresent, "acyclic_rep needs a graph without cycles");
  std::vector<Path> basis;
  std::vector<int> blocks;
  for (int t : sources(g)) {
    auto ps = paths_from(g, t, static_cast<std::size_t>(g.num_vertices()));
    blocks.push_back(static_cast<int>(ps.size()));
    basis.insert(basis.end(), ps.begin(), ps.end());
  }
  const int dim = static_cast<int>(basis.size());
  std::map<Path, int> index;
  for (int i = 0; i < dim; ++i) index.emplace(basis[i], i);

  Rep r = empty_rep(g, dim);
  r.block_dims = blocks;
  for (int i = 0; i < dim; ++i) {
    const Path& p = basis[i];
    r.vertex_mats[range(g, p)](i, i) = 1.0;
    r.basis_labels[i] = {BasisLabel::Kind::Path, g.vertex_id(range(g, p)), g.vertex_id(p.base), edge_ids(g, p.edges)};
    for (int e : g.out_edges(range(g, p))) {
      Path q = p;
      q.edges.push_back(e);
      r.edge_mats[e](index.at(q), i) = 1.0;
    }
  }
  return r;
}

// n(t) for each source, in source order.
inline std::vector<int> acyclic_block_dims(const Graph& g) {
  std::vector<int> out;
  for (int t : sources(g)) out.push_back(static_cast<int>(count_paths_from(g, t)));
  return out;
}

// ---- single cycles ----------------------------------------------------------------

inline void require_unit_modulus(Complex z) {
  if (std::abs(std::abs(z) - 1.0) > kUnitModulusTolerance)
    throw Error(ErrorCode::NotUnitModulus, "|z| = " + std::to_string(std::abs(z)));
}

// rho_z on the cycle's own graph: p_{v_i} -> E_ii, s_{e_i} -> E_{(i+1)i} for
// i < N, and the edge returning to the base vertex -> z E_{1N}.
inline Rep cycle_rep(const Graph& g, const Cycle& c, Complex z) {
  require_unit_modulus(z);
  Graph cg = subgraph(g, c.edges);
  const int n = static_cast<int>(c.length());
  Rep r = empty_rep(cg, n);
  auto order = cycle_vertex_order(g, c);
  for (int i = 0; i < n; ++i) {
    int v = cg.vertex(g.vertex_id(order[i]));
    r.vertex_mats[v](i, i) = 1.0;
    r.basis_labels[i] = {BasisLabel::Kind::CycleSlot, g.vertex_id(order[i]), g.vertex_id(c.base), {}};
    int e = cg.edge(g.edge_id(c.edges[i]));
    if (i + 1 < n) r.edge_mats[e](i + 1, i) = 1.0;
    else r.edge_mats[e](0, n - 1) = z;
  }
  r.z_params = {{g.vertex_id(c.base), z}};
  return r;
}

// ---- glued construction for entry-free graphs -----------------------------------

// Coordinates: [0, k-I) forest paths not ending at a shared vertex, then I
// shared slots grouped by cycle, then the off-forest cycle slots.
struct NoEntryLayout {
  int k = 0;
  int shared = 0;
  int cycle_total = 0;
  int dim = 0;
  Rep forest;                                   // acyclic_rep of G2
  std::vector<int> forest_slot;                 // forest coordinate -> slot
  std::vector<std::vector<int>> cycle_slots;    // per cycle, per traversal position
};

inline NoEntryLayout no_entry_layout(const Graph& g, const Decomposition& d) {
  NoEntryLayout lay;
  lay.forest = acyclic_rep(d.g2);
  lay.k = lay.forest.dim;
  lay.shared = static_cast<int>(d.shared.size());
  for (const auto& c : d.cycles) lay.cycle_total += static_cast<int>(c.length());
  lay.dim = lay.k + lay.cycle_total - lay.shared;

  std::map<std::string, int> shared_slot;
  int next_shared = lay.k - lay.shared;
  int next_alpha = lay.k;
  for (const auto& c : d.cycles) {
    std::vector<int> slots;
    for (int v : cycle_vertex_order(g, c)) {
      if (d.g2.find_vertex(g.vertex_id(v))) {
        shared_slot[g.vertex_id(v)] = next_shared;
        slots.push_back(next_shared++);
      } else {
        slots.push_back(-1);
      }
    }
    lay.cycle_slots.push_back(std::move(slots));
  }
  for (auto& slots : lay.cycle_slots)
    for (int& s : slots)
      if (s < 0) s = next_alpha++;

  int next_forest = 0;
  lay.forest_slot.resize(lay.k);
  for (int i = 0; i < lay.k; ++i) {
    const auto& label = lay.forest.basis_labels[i];
    auto it = shared_slot.find(label.vertex);
    bool trivial_at_shared = label.edges.empty() && it != shared_slot.end();
    lay.forest_slot[i] = trivial_at_shared ? it->second : next_forest++;
  }
  return lay;
}

// Places local(i, j) at (slots[i], slots[j]).
inline Matrix embed(const Matrix& local, const std::vector<int>& slots, int dim) {
  Matrix out = Matrix::Zero(dim, dim);
  for (int j = 0; j < local.cols(); ++j)
    for (int i = 0; i < local.rows(); ++i)
      if (local(i, j) != Complex(0.0)) out(slots[i], slots[j]) = local(i, j);
  return out;
}

inline Complex z_for(const std::map<std::string, Complex>& z_assign, const std::string& base) {
  auto it = z_assign.find(base);
  if (it == z_assign.end()) throw Error(ErrorCode::InvalidArgument, "no z assigned to cycle at '" + base + "'");
  return it->second;
}

// Glued representation without the non-degeneracy guard; covers all-cycle
// graphs (k may be 0) and forests with isolated vertices.
inline Rep glued_rep(const Graph& g, const Decomposition& d, const std::map<std::string, Complex>& z_assign) {
  auto lay = no_entry_layout(g, d);
  Rep r = empty_rep(g, lay.dim);

  const Graph& f = d.g2;
  for (int v = 0; v < f.num_vertices(); ++v)
    r.vertex_mats[g.vertex(f.vertex_id(v))] = embed(lay.forest.vertex_mats[v], lay.forest_slot, lay.dim);
  for (int e = 0; e < f.num_edges(); ++e)
    r.edge_mats[g.edge(f.edge_id(e))] = embed(lay.forest.edge_mats[e], lay.forest_slot, lay.dim);
  for (int i = 0; i < lay.k; ++i) {
    BasisLabel label = lay.forest.basis_labels[i];
    if (label.edges.empty() && std::find(d.shared.begin(), d.shared.end(), label.vertex) != d.shared.end())
      label.kind = BasisLabel::Kind::Shared;
    r.basis_labels[lay.forest_slot[i]] = std::move(label);
  }

  for (std::size_t ci = 0; ci < d.cycles.size(); ++ci) {
    const Cycle& c = d.cycles[ci];
    const std::string base = g.vertex_id(c.base);
    Rep cr = cycle_rep(g, c, z_for(z_assign, base));
    const auto& slots = lay.cycle_slots[ci];
    for (int v = 0; v < cr.graph.num_vertices(); ++v) {
      int gv = g.vertex(cr.graph.vertex_id(v));
      if (!f.find_vertex(g.vertex_id(gv))) r.vertex_mats[gv] = embed(cr.vertex_mats[v], slots, lay.dim);
    }
    for (int e = 0; e < cr.graph.num_edges(); ++e)
      r.edge_mats[g.edge(cr.graph.edge_id(e))] = embed(cr.edge_mats[e], slots, lay.dim);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (r.basis_labels[slots[i]].vertex.empty()) r.basis_labels[slots[i]] = cr.basis_labels[i];
    r.z_params.push_back(cr.z_params.front());
  }
  return r;
}

inline Rep no_entry_rep(const Graph& g, const Decomposition& d, const std::map<std::string, Complex>& z_assign) {
  if (!no_cycle_has_entry(g).holds) throw Error(ErrorCode::EntryPresent, "no_entry_rep needs an entry-free graph");
  if (d.cycles.empty() || d.g2.num_edges() == 0)
    throw Error(ErrorCode::TrivialDecomposition, "use acyclic_rep or a pure cycle sum");
  return glued_rep(g, d, z_assign);
}

inline std::map<std::string, Complex> uniform_z(const Graph& g, const std::vector<Cycle>& cycles, Complex z) {
  std::map<std::string, Complex> out;
  for (const auto& c : cycles) out[g.vertex_id(c.base)] = z;
  return out;
}

// Dispatcher: acyclic graphs use the path basis, everything else the glued form.
inline Rep synthesize_rep(const Graph& g, Complex z) {
  if (cycle_vertices(g).empty()) return acyclic_rep(g);
  auto d = split_cycles_and_forest(g);
  return glued_rep(g, d, uniform_z(g, d.cycles, z));
}

// ---- families ------------------------------------------------------------------------

inline Rep rep_direct_sum(const std::vector<Rep>& reps) {
  if (reps.empty()) throw Error(ErrorCode::EmptyFamily, "direct sum of no representations");
  int dim = 0;
  for (const auto& r : reps) {
    if (!(r.graph == reps.front().graph)) throw Error(ErrorCode::GraphMismatch, "representations of different graphs");
    dim += r.dim;
  }
  const Graph& g = reps.front().graph;
  Rep out = empty_rep(g, dim);
  out.basis_labels.clear();
  out.block_dims.clear();
  int offset = 0;
  for (const auto& r : reps) {
    for (int v = 0; v < g.num_vertices(); ++v) out.vertex_mats[v].block(offset, offset, r.dim, r.dim) = r.vertex_mats[v];
    for (int e = 0; e < g.num_edges(); ++e) out.edge_mats[e].block(offset, offset, r.dim, r.dim) = r.edge_mats[e];
    out.z_params.insert(out.z_params.end(), r.z_params.begin(), r.z_params.end());
    out.basis_labels.insert(out.basis_labels.end(), r.basis_labels.begin(), r.basis_labels.end());
    out.block_dims.insert(out.block_dims.end(), r.block_dims.begin(), r.block_dims.end());
    offset += r.dim;
  }
  return out;
}

// ---- evaluation -----------------------------------------------------------------------

// rho(s_p) = M_{e_n} ... M_{e_1}; a trivial path maps to its vertex projection.
inline Matrix path_matrix(const Rep& rep, const Path& p) {
  if (p.trivial()) return rep.vertex_mats.at(p.base);
  Matrix m = rep.edge_mats.at(p.edges.front());
  for (std::size_t i = 1; i < p.edges.size(); ++i) m = rep.edge_mats.at(p.edges[i]) * m;
  return m;
}

inline Matrix evaluate(const Rep& rep, const Monomial& m) {
  return path_matrix(rep, m.mu) * path_matrix(rep, m.nu).adjoint();
}

inline Matrix evaluate(const Rep& rep, const SymElement& x) {
  Matrix out = Matrix::Zero(rep.dim, rep.dim);
  std::map<Path, Matrix> cache;
  auto get = [&](const Path& p) -> const Matrix& {
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, path_matrix(rep, p)).first;
    return it->second;
  };
  for (const auto& [m, c] : x.terms()) {
    if (m.mu.base >= rep.graph.num_vertices()) throw Error(ErrorCode::UnknownId, "monomial outside the graph");
    out += c.to_complex() * (get(m.mu) * get(m.nu).adjoint());
  }
  return out;
}

// ---- Cuntz-Krieger relations ------------------------------------------------------------

struct Residual {
  std::string relation;
  double value = 0.0;
};

struct CKReport {
  std::vector<Residual> residuals;
  double max_residual = 0.0;      // relations (1)-(4)
  double unitality_residual = 0.0;
  double tolerance = 1e-12;
  bool pass = true;

  std::string worst() const {
    auto it = std::max_element(residuals.begin(), residuals.end(),
                               [](const Residual& a, const Residual& b) { return a.value < b.value; });
    return it == residuals.end() ? std::string() : it->relation;
  }
};

inline CKReport check_ck(const Rep& rep, double tolerance = 1e-12) {
  const Graph& g = rep.graph;
  CKReport rpt;
  rpt.tolerance = tolerance;
  auto record = [&](std::string name, double value) {
    rpt.max_residual = std::max(rpt.max_residual, value);
    rpt.residuals.push_back({std::move(name), value});
  };
  for (int v = 0; v < g.num_vertices(); ++v) {
    const Matrix& p = rep.vertex_mats[v];
    record("(1) p_" + g.vertex_id(v), std::max(op_norm(p * p - p), op_norm(p - p.adjoint())));
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    for (int w = v + 1; w < g.num_vertices(); ++w)
      record("(2) p_" + g.vertex_id(v) + " p_" + g.vertex_id(w), op_norm(rep.vertex_mats[v] * rep.vertex_mats[w]));
  for (int e = 0; e < g.num_edges(); ++e) {
    const Matrix& s = rep.edge_mats[e];
    record("(3) s_" + g.edge_id(e), op_norm(s.adjoint() * s - rep.vertex_mats[g.src(e)]));
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (g.in_edges(v).empty()) continue;
    Matrix sum = Matrix::Zero(rep.dim, rep.dim);
    for (int e : g.in_edges(v)) sum += rep.edge_mats[e] * rep.edge_mats[e].adjoint();
    record("(4) p_" + g.vertex_id(v), op_norm(rep.vertex_mats[v] - sum));
  }
  Matrix unit = -Matrix::Identity(rep.dim, rep.dim);
  for (const auto& p : rep.vertex_mats) unit += p;
  rpt.unitality_residual = op_norm(unit);
  rpt.residuals.push_back({"unit", rpt.unitality_residual});
  rpt.pass = rpt.max_residual <= tolerance && rpt.unitality_residual <= tolerance;
  return rpt;
}

// ---- separation -----------------------------------------------------------------------

struct SeparationReport {
  std::size_t rank = 0;
  std::size_t expected = 0;
  bool separated = false;
  double relative_threshold = 1e-8;
  double largest_singular_value = 0.0;
};

// Numerical rank of the images of `monomials` under the family, one row per
// monomial; singular values below rel_tol * sigma_max are discarded.
inline SeparationReport separation_rank(const std::vector<Rep>& family, const std::vector<Monomial>& monomials,
                                        double rel_tol = 1e-8) {
  SeparationReport rpt;
  rpt.expected = monomials.size();
  rpt.relative_threshold = rel_tol;
  if (monomials.empty()) {
    rpt.separated = true;
    return rpt;
  }
  std::vector<std::vector<Complex>> rows(monomials.size());
  for (const auto& rep : family) {
    std::map<Path, Matrix> cache;
    auto get = [&](const Path& p) -> const Matrix& {
      auto it = cache.find(p);
      if (it == cache.end()) it = cache.emplace(p, path_matrix(rep, p)).first;
      return it->second;
    };
    for (std::size_t i = 0; i < monomials.size(); ++i) {
      Matrix img = get(monomials[i].mu) * get(monomials[i].nu).adjoint();
      rows[i].insert(rows[i].end(), img.data(), img.data() + img.size());
    }
  }
  const std::size_t width = rows.front().size();
  std::vector<std::size_t> live;
  for (std::size_t c = 0; c < width; ++c)
    for (const auto& row : rows)
      if (row[c] != Complex(0.0)) {
        live.push_back(c);
        break;
      }
  if (live.empty()) return rpt;
  Matrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(live.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < live.size(); ++j) a(i, j) = rows[i][live[j]];
  Eigen::BDCSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  rpt.largest_singular_value = sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rpt.rank;
  rpt.separated = rpt.rank == rpt.expected;
  return rpt;
}

inline std::vector<Complex> roots_of_unity(std::size_t m) {
  std::vector<Complex> out;
  for (std::size_t j = 0; j < m; ++j)
    out.push_back(j == 0 ? Complex(1.0, 0.0) : std::polar(1.0, 2.0 * std::numbers::pi * double(j) / double(m)));
  return out;
}

// Images of length-<=L monomials carry Laurent polynomials in z of degree <= L,
// hence the 2L+1 point requirement. Acyclic graphs do not depend on z at all.
inline SeparationReport separation_check(const Graph& g, std::size_t trunc, const std::vector<Complex>& zs,
                                         double rel_tol = 1e-8) {
  if (!no_cycle_has_entry(g).holds) throw Error(ErrorCode::EntryPresent, "separation_check needs an entry-free graph");
  const bool acyclic = cycle_vertices(g).empty();
  if (zs.empty()) throw Error(ErrorCode::TooFewPoints, "no evaluation points");
  if (!acyclic && zs.size() < 2 * trunc + 1)
    throw Error(ErrorCode::TooFewPoints, "need at least 2L+1 = " + std::to_string(2 * trunc + 1) + " points");
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t j = i + 1; j < zs.size(); ++j)
      if (std::abs(zs[i] - zs[j]) < kUnitModulusTolerance) throw Error(ErrorCode::InvalidArgument, "points must be distinct");
  std::vector<Rep> family;
  if (acyclic) family.push_back(acyclic_rep(g));
  else
    for (Complex z : zs) family.push_back(synthesize_rep(g, z));
  return separation_rank(family, basis_monomials(g, trunc), rel_tol);
}

// ---- JSON ------------------------------------------------------------------------------

inline ordered_json matrix_to_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const ordered_json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw Error(ErrorCode::SchemaViolation, "matrix must have " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) throw Error(ErrorCode::SchemaViolation, "ragged matrix");
    for (int c = 0; c < dim; ++c) {
      const auto& z = row[c];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw Error(ErrorCode::SchemaViolation, "matrix entries are [re, im] pairs");
      m(i, c) = Complex(z[0].get<double>(), z[1].get<double>());
      if (!std::isfinite(m(i, c).real()) || !std::isfinite(m(i, c).imag()))
        throw Error(ErrorCode::SchemaViolation, "non-finite matrix entry");
    }
  }
  return m;
}

inline const char* to_string(BasisLabel::Kind k) {
  switch (k) {
    case BasisLabel::Kind::Path: return "path";
    case BasisLabel::Kind::Shared: return "shared";
    case BasisLabel::Kind::CycleSlot: return "cycle";
  }
  return "path";
}

inline ordered_json rep_to_json(const Rep& r) {
  ordered_json j;
  j["dim"] = r.dim;
  j["blocks"] = r.block_dims;
  j["z_params"] = ordered_json::array();
  for (const auto& zp : r.z_params) j["z_params"].push_back({{"cycle", zp.cycle_base}, {"z", {zp.z.real(), zp.z.imag()}}});
  j["basis_labels"] = ordered_json::array();
  for (const auto& l : r.basis_labels) {
    ordered_json lj;
    lj["kind"] = to_string(l.kind);
    lj["vertex"] = l.vertex;
    lj["base"] = l.base;
    if (l.kind == BasisLabel::Kind::Path) lj["edges"] = l.edges;
    j["basis_labels"].push_back(std::move(lj));
  }
  j["vertex_mats"] = ordered_json::object();
  for (int v = 0; v < r.graph.num_vertices(); ++v) j["vertex_mats"][r.graph.vertex_id(v)] = matrix_to_json(r.vertex_mats[v]);
  j["edge_mats"] = ordered_json::object();
  for (int e = 0; e < r.graph.num_edges(); ++e) j["edge_mats"][r.graph.edge_id(e)] = matrix_to_json(r.edge_mats[e]);
  return j;
}

inline Rep rep_from_json(const Graph& g, const ordered_json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    if (dim <= 0) throw Error(ErrorCode::SchemaViolation, "dimension must be positive");
    Rep r = empty_rep(g, dim);
    r.block_dims = j.at("blocks").get<std::vector<int>>();
    for (const auto& zp : j.at("z_params"))
      r.z_params.push_back({zp.at("cycle").get<std::string>(), Complex(zp.at("z")[0].get<double>(), zp.at("z")[1].get<double>())});
    const auto& labels = j.at("basis_labels");
    if (static_cast<int>(labels.size()) != dim) throw Error(ErrorCode::SchemaViolation, "one basis label per coordinate");
    for (int i = 0; i < dim; ++i) {
      const auto& lj = labels[i];
      const auto kind = lj.at("kind").get<std::string>();
      BasisLabel& l = r.basis_labels[i];
      l.kind = kind == "shared" ? BasisLabel::Kind::Shared : kind == "cycle" ? BasisLabel::Kind::CycleSlot : BasisLabel::Kind::Path;
      l.vertex = lj.at("vertex").get<std::string>();
      l.base = lj.at("base").get<std::string>();
      if (lj.contains("edges")) l.edges = lj["edges"].get<std::vector<std::string>>();
    }
    const auto& vm = j.at("vertex_mats");
    const auto& em = j.at("edge_mats");
    if (static_cast<int>(vm.size()) != g.num_vertices() || static_cast<int>(em.size()) != g.num_edges())
      throw Error(ErrorCode::GraphMismatch, "generator tables do not match the graph");
    for (int v = 0; v < g.num_vertices(); ++v) r.vertex_mats[v] = matrix_from_json(vm.at(g.vertex_id(v)), dim);
    for (int e = 0; e < g.num_edges(); ++e) r.edge_mats[e] = matrix_from_json(em.at(g.edge_id(e)), dim);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, e.what());
  }
}

}  // namespace rfdg
