#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rfdg/amalgam.hpp"
#include "rfdg/analysis.hpp"
#include "rfdg/digest.hpp"
#include "rfdg/error.hpp"
#include "rfdg/repr.hpp"
#include "rfdg/symbolic.hpp"

namespace rfdg {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr const char* kCertificateFormat = "rfdg-certificate/1";

struct Tolerances {
  double ck = 1e-12;        // construction exactness
  double oracle = 1e-9;     // numeric vs symbolic agreement
  double rank = 1e-8;       // relative singular-value threshold
  double compat = 1e-15;    // amalgam compatibility
};

struct Params {
  std::size_t trunc = 2;    // L
  std::size_t zcount = 5;   // m
  Tolerances tol;
  bool search_min_zcount = false;
};

enum class Verdict { RFD, NotRFD };

inline const char* to_string(Verdict v) { return v == Verdict::RFD ? "RFD" : "NotRFD"; }

// Summing the CK relations around a cycle with an entry gives
//   sum_i s_{e_i}^* s_{e_i} = sum_i s_{e_i} s_{e_i}^* + sum_{entries f} s_f s_f^*.
struct Obstruction {
  int witness = -1;
  Cycle host;
  std::vector<int> entries;
  SymElement identity;        // sum_i e_i^* e_i - sum_i e_i e_i^* - sum_f f f^*, reduces to 0
  SymElement entry_term;      // sum_f f f^*
  SymElement entry_term_nf;   // its normal form, nonzero
};

inline SymElement cycle_obstruction_identity(const Graph& g, const Cycle& host, const std::vector<int>& entries) {
  SymElement out;
  for (int e : host.edges) {
    auto s = gen_edge(g, e);
    out += multiply(g, adjoint(s), s);
    out -= multiply(g, s, adjoint(s));
  }
  for (int f : entries) {
    auto s = gen_edge(g, f);
    out -= multiply(g, s, adjoint(s));
  }
  return out;
}

inline SymElement entry_term(const Graph& g, const std::vector<int>& entries) {
  SymElement out;
  for (int f : entries) {
    auto s = gen_edge(g, f);
    out += multiply(g, s, adjoint(s));
  }
  return out;
}

inline Obstruction build_obstruction(const Graph& g, const EntryCheck& chk) {
  Obstruction o;
  o.witness = *chk.witness;
  o.host = *chk.host;
  o.entries = entries_of(g, o.host);
  o.identity = cycle_obstruction_identity(g, o.host, o.entries);
  o.entry_term = entry_term(g, o.entries);
  o.entry_term_nf = normal_form(g, o.entry_term);
  return o;
}

// ---- separating families ------------------------------------------------------------

struct SeparatingFamily {
  std::string construction;       // "acyclic" | "cycles" | "glued"
  std::vector<Complex> zs;
  std::vector<Rep> reps;
  SeparationReport separation;
  bool z_independent = false;
};

inline std::string construction_kind(const Graph& /*g*/, const Decomposition& d) {
  if (d.cycles.empty()) return "acyclic";
  return d.g2.num_edges() == 0 ? "cycles" : "glued";
}

inline std::vector<Rep> family_at(const Graph& g, const std::vector<Complex>& zs) {
  std::vector<Rep> reps;
  if (cycle_vertices(g).empty()) reps.push_back(acyclic_rep(g));
  else
    for (Complex z : zs) reps.push_back(synthesize_rep(g, z));
  return reps;
}

inline SeparatingFamily build_separating_family(const Graph& g, std::size_t trunc, std::size_t zcount,
                                                double rank_tol = 1e-8) {
  if (!no_cycle_has_entry(g).holds) throw Error(ErrorCode::EntryPresent, "separating families need an entry-free graph");
  if (zcount < 2 * trunc + 1) throw Error(ErrorCode::TooFewPoints, "m must be at least 2L+1");
  SeparatingFamily fam;
  fam.construction = construction_kind(g, split_cycles_and_forest(g));
  fam.zs = roots_of_unity(zcount);
  fam.z_independent = fam.construction == "acyclic";
  fam.reps = family_at(g, fam.zs);
  fam.separation = separation_rank(fam.reps, basis_monomials(g, trunc), rank_tol);
  return fam;
}

// Smallest m <= max_m whose roots of unity already give full rank; no
// optimality claim beyond this scan.
inline std::optional<std::size_t> minimal_separating_zcount(const Graph& g, std::size_t trunc, std::size_t max_m,
                                                            double rank_tol = 1e-8) {
  auto monomials = basis_monomials(g, trunc);
  for (std::size_t m = 1; m <= max_m; ++m)
    if (separation_rank(family_at(g, roots_of_unity(m)), monomials, rank_tol).separated) return m;
  return std::nullopt;
}

// ---- entry audit ------------------------------------------------------------------------

// Edges entering some cycle: f with r(f) on a cycle and another incoming edge
// of r(f) lying on a cycle.
inline std::vector<int> entry_edges(const Graph& g) {
  auto on_cycle = cycle_edge_mask(g);
  std::vector<int> out;
  for (int f = 0; f < g.num_edges(); ++f) {
    int v = g.rng(f);
    for (int e : g.in_edges(v))
      if (e != f && on_cycle[e]) {
        out.push_back(f);
        break;
      }
  }
  return out;
}

struct EntryAudit {
  std::map<std::string, double> traces;   // |tr rho(s_f s_f^*)|
  double ck_residual = 0.0;
  // Telescoping the relations around a cycle of length N bounds each trace
  // by 2 N dim eps; N <= |V| is used.
  double bound = 0.0;
};

inline EntryAudit entry_vanishing_audit(const Rep& rep) {
  const Graph& g = rep.graph;
  auto entries = entry_edges(g);
  if (entries.empty()) throw Error(ErrorCode::NoEntries, "no edge enters a cycle");
  EntryAudit a;
  auto ck = check_ck(rep);
  a.ck_residual = std::max(ck.max_residual, ck.unitality_residual);
  a.bound = 2.0 * g.num_vertices() * rep.dim * a.ck_residual;
  for (int f : entries) {
    const Matrix& s = rep.edge_mats[f];
    a.traces[g.edge_id(f)] = std::abs((s * s.adjoint()).trace());
  }
  return a;
}

// ---- decision + certificate --------------------------------------------------------------

struct DimensionLaw {
  int k = 0;
  int shared = 0;
  int cycle_total = 0;
  int dim() const { return k + cycle_total - shared; }
};

inline DimensionLaw dimension_law(const Graph& g, const Decomposition& d) {
  DimensionLaw law;
  for (int t : sources(d.g2)) law.k += static_cast<int>(count_paths_from(d.g2, t));
  law.shared = static_cast<int>(d.shared.size());
  for (const auto& c : d.cycles) law.cycle_total += static_cast<int>(c.length());
  (void)g;
  return law;
}

struct RfdEvidence {
  Decomposition split;
  std::optional<AmalgamSpec> amalgam;
  SeparatingFamily family;
  DimensionLaw law;
  double max_ck_residual = 0.0;
  double max_unitality_residual = 0.0;
  bool ck_pass = true;
  std::optional<CompatibilityReport> compat;
  std::optional<std::size_t> min_zcount;
};

struct Certificate {
  Graph graph;
  Params params;
  Verdict verdict = Verdict::RFD;
  std::optional<Obstruction> obstruction;
  std::optional<RfdEvidence> evidence;
};

inline Certificate decide_rfd(const Graph& g, const Params& params = {}) {
  if (params.zcount < 2 * params.trunc + 1) throw Error(ErrorCode::TooFewPoints, "m must be at least 2L+1");
  Certificate cert;
  cert.graph = g;
  cert.params = params;
  auto chk = no_cycle_has_entry(g);
  if (!chk.holds) {
    cert.verdict = Verdict::NotRFD;
    cert.obstruction = build_obstruction(g, chk);
    return cert;
  }

  RfdEvidence ev;
  ev.split = split_cycles_and_forest(g);
  ev.law = dimension_law(g, ev.split);
  ev.family = build_separating_family(g, params.trunc, params.zcount, params.tol.rank);
  for (const auto& rep : ev.family.reps) {
    auto ck = check_ck(rep, params.tol.ck);
    ev.max_ck_residual = std::max(ev.max_ck_residual, ck.max_residual);
    ev.max_unitality_residual = std::max(ev.max_unitality_residual, ck.unitality_residual);
    ev.ck_pass = ev.ck_pass && ck.pass;
  }
  if (ev.family.construction == "glued") {
    ev.amalgam = amalgam_data(g, ev.split);
    std::vector<FactorImages> factors;
    for (Complex z : ev.family.zs) factors.push_back(build_factor_reps(g, ev.split, z));
    ev.compat = check_compatibility(*ev.amalgam, factors);
  }
  if (params.search_min_zcount)
    ev.min_zcount = minimal_separating_zcount(g, params.trunc, params.zcount, params.tol.rank);
  cert.evidence = std::move(ev);
  return cert;
}

// ---- JSON ------------------------------------------------------------------------------------

inline ordered_json cycle_to_json(const Graph& g, const Cycle& c) {
  ordered_json j;
  j["base"] = g.vertex_id(c.base);
  j["edges"] = edge_ids(g, c.edges);
  return j;
}

inline ordered_json decomposition_to_json(const Graph& g, const Decomposition& d) {
  ordered_json j;
  j["case"] = to_string(d.case_flag);
  j["cycles"] = ordered_json::array();
  for (const auto& c : d.cycles) j["cycles"].push_back(cycle_to_json(g, c));
  j["shared"] = d.shared;
  j["alphas"] = d.alphas;
  j["betas"] = d.betas;
  j["g1"] = graph_to_json(d.g1);
  j["g2"] = graph_to_json(d.g2);
  return j;
}

inline ordered_json complex_list(const std::vector<Complex>& zs) {
  ordered_json arr = ordered_json::array();
  for (Complex z : zs) arr.push_back({z.real(), z.imag()});
  return arr;
}

inline ordered_json family_to_json(const std::vector<Rep>& reps) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : reps) arr.push_back(rep_to_json(r));
  return arr;
}

inline ordered_json certificate_to_json(const Certificate& c) {
  const Graph& g = c.graph;
  ordered_json j;
  j["format"] = kCertificateFormat;
  j["version"] = kToolkitVersion;
  j["verdict"] = to_string(c.verdict);
  j["graph_digest"] = sha256_hex(serialize_graph(g));
  j["params"] = {{"trunc", c.params.trunc}, {"zcount", c.params.zcount}};

  if (c.verdict == Verdict::NotRFD) {
    const auto& o = *c.obstruction;
    j["witness"] = {{"edge", g.edge_id(o.witness)}, {"range", g.vertex_id(g.rng(o.witness))}};
    j["host_cycle"] = cycle_to_json(g, o.host);
    j["entries"] = edge_ids(g, o.entries);
    j["obstruction"] = sym_to_json(g, o.identity);
    j["entry_term"] = sym_to_json(g, o.entry_term);
    j["entry_term_normal_form"] = sym_to_json(g, o.entry_term_nf);
    return j;
  }

  const auto& ev = *c.evidence;
  j["params"]["tolerances"] = {{"ck", c.params.tol.ck},
                               {"oracle", c.params.tol.oracle},
                               {"rank", c.params.tol.rank},
                               {"compat", c.params.tol.compat}};
  j["params"]["k_convention"] = "sum of n(t) over sources of G2";
  j["construction"] = ev.family.construction;
  j["decomposition"] = decomposition_to_json(g, ev.split);
  j["amalgam"] = ev.amalgam ? amalgam_to_json(*ev.amalgam) : ordered_json(nullptr);
  j["zs"] = complex_list(ev.family.zs);
  j["z_independent"] = ev.family.z_independent;
  j["dimension"] = ev.family.reps.front().dim;
  j["dimension_law"] = {{"k", ev.law.k}, {"I", ev.law.shared}, {"sum_N", ev.law.cycle_total}, {"D", ev.law.dim()}};
  j["family"] = family_to_json(ev.family.reps);
  j["family_digest"] = sha256_hex(j["family"].dump());
  ordered_json reports;
  reports["ck"] = {{"max_residual", ev.max_ck_residual},
                   {"unitality_residual", ev.max_unitality_residual},
                   {"pass", ev.ck_pass}};
  reports["separation"] = {{"rank", ev.family.separation.rank},
                           {"expected", ev.family.separation.expected},
                           {"separated", ev.family.separation.separated},
                           {"relative_threshold", ev.family.separation.relative_threshold}};
  if (ev.compat)
    reports["compatibility"] = {{"max_residual", ev.compat->max_residual},
                                {"unitality_residual", ev.compat->unitality_residual},
                                {"coordinates_nonzero", ev.compat->coordinates_nonzero}};
  if (c.params.search_min_zcount)
    reports["min_zcount"] = ev.min_zcount ? ordered_json(*ev.min_zcount) : ordered_json(nullptr);
  j["reports"] = std::move(reports);
  return j;
}

inline bool contains_float(const ordered_json& j) {
  if (j.is_number_float()) return true;
  if (j.is_structured())
    for (const auto& item : j)
      if (contains_float(item)) return true;
  return false;
}

// ---- verification -------------------------------------------------------------------------------

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  bool pass = false;
  bool digest_mismatch = false;
  std::vector<CheckResult> checks;

  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(c.name);
    return out;
  }
};

namespace detail {

inline Cycle cycle_from_json(const Graph& g, const ordered_json& j) {
  Path p = make_path(g, j.at("base").get<std::string>(), j.at("edges").get<std::vector<std::string>>());
  if (p.trivial() || range(g, p) != p.base) throw Error(ErrorCode::InvalidPath, "host cycle is not closed");
  std::set<int> seen;
  for (int e : p.edges)
    if (!seen.insert(g.src(e)).second) throw Error(ErrorCode::InvalidPath, "host cycle repeats a vertex");
  return canonical_cycle(g, p.edges);
}

inline void verify_not_rfd(const Graph& g, const ordered_json& j, VerifyReport& rpt) {
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    rpt.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  add("exactness", !contains_float(j), "no floating-point values in the certificate");
  Cycle host = cycle_from_json(g, j.at("host_cycle"));
  int witness = g.edge(j.at("witness").at("edge").get<std::string>());
  auto entries = entries_of(g, host);
  add("witness", std::find(entries.begin(), entries.end(), witness) != entries.end(),
      "witness enters the host cycle");
  std::vector<std::string> listed = j.at("entries").get<std::vector<std::string>>();
  add("entries", listed == edge_ids(g, entries), "entry list matches the graph");
  SymElement identity = sym_from_json(g, j.at("obstruction"));
  add("obstruction_form", identity == cycle_obstruction_identity(g, host, entries),
      "obstruction is the summed relation identity of the host cycle");
  add("obstruction_zero", is_zero(g, identity), "identity reduces to zero");
  SymElement term = sym_from_json(g, j.at("entry_term"));
  SymElement term_nf = normal_form(g, term);
  add("entry_term_nonzero", term == entry_term(g, entries) && !term_nf.empty() &&
                                term_nf == sym_from_json(g, j.at("entry_term_normal_form")),
      "entry term is nonzero in normal form");
}

inline void verify_rfd(const Graph& g, const ordered_json& j, std::uint64_t seed, VerifyReport& rpt) {
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    rpt.checks.push_back({std::move(name), ok, std::move(detail)});
  };
  const auto& tj = j.at("params").at("tolerances");
  Tolerances tol{tj.at("ck").get<double>(), tj.at("oracle").get<double>(), tj.at("rank").get<double>(),
                 tj.at("compat").get<double>()};
  const std::size_t trunc = j.at("params").at("trunc").get<std::size_t>();

  add("family_digest", sha256_hex(j.at("family").dump()) == j.at("family_digest").get<std::string>(),
      "family payload matches its digest");

  std::vector<Rep> reps;
  for (const auto& rj : j.at("family")) reps.push_back(rep_from_json(g, rj));
  if (reps.empty()) throw Error(ErrorCode::EmptyFamily, "certificate carries no representations");

  double worst_ck = 0.0;
  std::string worst_rel;
  bool ck_ok = true;
  for (const auto& r : reps) {
    auto ck = check_ck(r, tol.ck);
    if (!ck.pass) {
      ck_ok = false;
      worst_rel = ck.worst();
    }
    worst_ck = std::max({worst_ck, ck.max_residual, ck.unitality_residual});
  }
  add("ck", ck_ok, ck_ok ? "max residual " + std::to_string(worst_ck) : "failing relation " + worst_rel);

  auto split = split_cycles_and_forest(g);
  auto law = dimension_law(g, split);
  bool dims_ok = j.at("dimension").get<int>() == law.dim();
  for (const auto& r : reps) dims_ok = dims_ok && r.dim == law.dim();
  add("dimension", dims_ok, "D = k + sum N - I = " + std::to_string(law.dim()));

  auto sep = separation_rank(reps, basis_monomials(g, trunc), tol.rank);
  const auto& sj = j.at("reports").at("separation");
  add("separation", sep.separated && sep.rank == sj.at("rank").get<std::size_t>(),
      "rank " + std::to_string(sep.rank) + " of " + std::to_string(sep.expected));

  if (!j.at("amalgam").is_null()) {
    AmalgamSpec spec = amalgam_from_json(j.at("amalgam"));
    AmalgamSpec expect = amalgam_data(g, split);
    bool ok = spec.kase == expect.kase && spec.n == expect.n && spec.theta1 == expect.theta1 &&
              spec.theta2 == expect.theta2;
    double worst = 0.0;
    for (const auto& r : reps) {
      std::map<std::string, Matrix> side1, side2;
      Matrix unit1 = Matrix::Identity(r.dim, r.dim), unit2 = Matrix::Identity(r.dim, r.dim);
      for (const auto& v : split.g1.vertices()) {
        side1[v] = r.vertex_mat(v);
        unit1 -= side1[v];
      }
      for (const auto& v : split.g2.vertices()) {
        side2[v] = r.vertex_mat(v);
        unit2 -= side2[v];
      }
      for (std::size_t i = 0; i < spec.base_dim(); ++i) {
        Matrix a = coordinate_image(spec.theta1[i], side1, &unit1, r.dim);
        Matrix b = coordinate_image(spec.theta2[i], side2, &unit2, r.dim);
        worst = std::max(worst, op_norm(a - b));
        ok = ok && op_norm(a) > 0.0;
      }
    }
    add("compatibility", ok && worst <= tol.compat, "max residual " + std::to_string(worst));
  }

  std::mt19937_64 rng(seed);
  double worst_oracle = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    SymElement x = random_element(g, rng);
    SymElement nf = normal_form(g, x);
    for (const auto& r : reps) worst_oracle = std::max(worst_oracle, op_norm(evaluate(r, x) - evaluate(r, nf)));
  }
  add("oracle", worst_oracle <= tol.oracle, "max deviation " + std::to_string(worst_oracle));
}

}  // namespace detail

inline VerifyReport verify_certificate(const Graph& g, const ordered_json& cert, std::uint64_t seed = 0) {
  VerifyReport rpt;
  try {
    if (cert.at("graph_digest").get<std::string>() != sha256_hex(serialize_graph(g))) {
      rpt.digest_mismatch = true;
      rpt.checks.push_back({"graph_digest", false, "certificate was issued for a different graph"});
      return rpt;
    }
    const std::string verdict = cert.at("verdict").get<std::string>();
    const bool holds = no_cycle_has_entry(g).holds;
    rpt.checks.push_back({"verdict", (verdict == "RFD") == holds && (verdict == "RFD" || verdict == "NotRFD"),
                          "verdict agrees with the entry criterion"});
    if (verdict == "NotRFD") detail::verify_not_rfd(g, cert, rpt);
    else if (verdict == "RFD") detail::verify_rfd(g, cert, seed, rpt);
  } catch (const Error& e) {
    rpt.checks.push_back({"structure", false, e.what()});
  } catch (const nlohmann::json::exception& e) {
    rpt.checks.push_back({"structure", false, e.what()});
  }
  rpt.pass = !rpt.checks.empty();
  for (const auto& c : rpt.checks) rpt.pass = rpt.pass && c.pass;
  return rpt;
}

}  // namespace rfdg
