#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rfdg/amalgam.hpp"
#include "rfdg/analysis.hpp"
#include "rfdg/error.hpp"
#include "rfdg/graph.hpp"
#include "rfdg/repr.hpp"
#include "rfdg/rfd.hpp"

namespace rfdg::cli {

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitPrecondition = 3;
inline constexpr int kExitDigestMismatch = 4;
inline constexpr int kExitVerifyFailed = 5;
inline constexpr int kExitNotRfd = 10;

struct CliConfig {
  std::string subcommand;
  std::string input;
  std::string output;        // empty: standard output
  std::string certificate;   // verify only
  std::size_t trunc = 2;
  std::optional<std::size_t> zcount;
  double tol_ck = 1e-12;
  double tol_rank = 1e-8;
  std::uint64_t seed = 0;
  bool search_min_zcount = false;

  std::size_t effective_zcount() const { return zcount.value_or(2 * trunc + 1); }
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedJson:
    case ErrorCode::SchemaViolation:
    case ErrorCode::DuplicateId:
    case ErrorCode::DanglingEndpoint:
    case ErrorCode::EmptyGraph:
      return kExitParse;
    default:
      return kExitPrecondition;
  }
}

inline Params params_of(const CliConfig& cfg) {
  Params p;
  p.trunc = cfg.trunc;
  p.zcount = cfg.effective_zcount();
  p.tol.ck = cfg.tol_ck;
  p.tol.rank = cfg.tol_rank;
  p.search_min_zcount = cfg.search_min_zcount;
  return p;
}

inline ordered_json run_analyze(const Graph& g) {
  ordered_json r;
  r["vertices"] = g.num_vertices();
  r["edges"] = g.num_edges();
  r["sources"] = ordered_json::array();
  for (int v : sources(g)) r["sources"].push_back(g.vertex_id(v));
  r["cycle_vertices"] = ordered_json::array();
  for (int v : cycle_vertices(g)) r["cycle_vertices"].push_back(g.vertex_id(v));

  auto chk = no_cycle_has_entry(g);
  r["no_cycle_has_entry"] = chk.holds;
  if (!chk.holds) {
    r["witness"] = g.edge_id(*chk.witness);
    r["host_cycle"] = cycle_to_json(g, *chk.host);
    r["cycles"] = nullptr;
  } else {
    auto cycles = find_cycles(g);
    r["cycles"] = cycles.size();
    r["cycle_list"] = ordered_json::array();
    for (const auto& c : cycles) r["cycle_list"].push_back(cycle_to_json(g, c));
  }

  ordered_json counts = ordered_json::object();
  for (int v = 0; v < g.num_vertices(); ++v) {
    try {
      counts[g.vertex_id(v)] = count_paths_from(g, v);
    } catch (const Error&) {
      counts[g.vertex_id(v)] = nullptr;
    }
  }
  r["path_counts"] = std::move(counts);

  r["case"] = nullptr;
  r["decomposition"] = nullptr;
  if (chk.holds) {
    try {
      auto d = decompose(g);
      r["case"] = to_string(d.case_flag);
      r["decomposition"] = {{"shared", d.shared}, {"alphas", d.alphas}, {"betas", d.betas},
                            {"g1_edges", d.g1.num_edges()}, {"g2_edges", d.g2.num_edges()}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TrivialDecomposition) throw;
    }
  }
  return r;
}

inline ordered_json run_decompose(const Graph& g) {
  auto d = decompose(g);
  auto law = dimension_law(g, d);
  ordered_json r;
  r["decomposition"] = decomposition_to_json(g, d);
  r["relation_partition"] = relation_partition_check(g, d);
  r["amalgam"] = amalgam_to_json(amalgam_data(g, d));
  r["dimension_law"] = {{"k", law.k}, {"I", law.shared}, {"sum_N", law.cycle_total}, {"D", law.dim()}};
  return r;
}

inline ordered_json run_synthesize(const Graph& g, const Params& p) {
  auto fam = build_separating_family(g, p.trunc, p.zcount, p.tol.rank);
  ordered_json r;
  r["construction"] = fam.construction;
  r["zs"] = complex_list(fam.zs);
  r["z_independent"] = fam.z_independent;
  ordered_json ck = ordered_json::array();
  for (const auto& rep : fam.reps) {
    auto rpt = check_ck(rep, p.tol.ck);
    ck.push_back({{"max_residual", rpt.max_residual}, {"unitality_residual", rpt.unitality_residual}, {"pass", rpt.pass}});
  }
  r["ck"] = std::move(ck);
  r["separation"] = {{"rank", fam.separation.rank}, {"expected", fam.separation.expected},
                     {"separated", fam.separation.separated}};
  r["family"] = family_to_json(fam.reps);
  return r;
}

inline void emit(const CliConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text << '\n';
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw IoError("cannot write '" + cfg.output + "'");
  f << text << '\n';
  if (!f) throw IoError("write to '" + cfg.output + "' failed");
}

inline int execute(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.zcount && *cfg.zcount < 2 * cfg.trunc + 1) {
      err << "error: --zcount must be at least 2*--trunc+1 = " << 2 * cfg.trunc + 1 << '\n';
      return kExitPrecondition;
    }
    if (!(cfg.tol_ck > 0.0) || !(cfg.tol_rank > 0.0)) {
      err << "error: tolerances must be positive\n";
      return kExitPrecondition;
    }
    const Graph g = parse_graph(read_file(cfg.input));

    if (cfg.subcommand == "analyze") {
      emit(cfg, run_analyze(g).dump(2), out);
    } else if (cfg.subcommand == "decompose") {
      emit(cfg, run_decompose(g).dump(2), out);
    } else if (cfg.subcommand == "synthesize") {
      emit(cfg, run_synthesize(g, params_of(cfg)).dump(), out);
    } else if (cfg.subcommand == "certify") {
      auto cert = decide_rfd(g, params_of(cfg));
      emit(cfg, certificate_to_json(cert).dump(), out);
      return cert.verdict == Verdict::RFD ? kExitOk : kExitNotRfd;
    } else if (cfg.subcommand == "verify") {
      ordered_json cj;
      try {
        cj = ordered_json::parse(read_file(cfg.certificate));
      } catch (const nlohmann::json::parse_error& e) {
        err << "error: certificate is not valid JSON: " << e.what() << '\n';
        return kExitParse;
      }
      auto rpt = verify_certificate(g, cj, cfg.seed);
      ordered_json r;
      r["pass"] = rpt.pass;
      r["checks"] = ordered_json::array();
      for (const auto& c : rpt.checks) r["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      emit(cfg, r.dump(2), out);
      if (rpt.digest_mismatch) return kExitDigestMismatch;
      return rpt.pass ? kExitOk : kExitVerifyFailed;
    } else {
      err << "error: unknown subcommand '" << cfg.subcommand << "'\n";
      return kExitPrecondition;
    }
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

// Parses argv (program name first) and runs the selected subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Residual finite-dimensionality toolkit for graph C*-algebras", "rfdg"};
  app.require_subcommand(1);
  CliConfig cfg;
  std::size_t zcount = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", cfg.input, "Graph JSON file")->required();
    sub->add_option("--output,-o", cfg.output, "Write to this file instead of standard output");
    sub->add_option("--seed", cfg.seed, "Seed for randomized replay checks");
  };
  auto add_family = [&](CLI::App* sub) {
    sub->add_option("--trunc,-L", cfg.trunc, "Monomial length bound L");
    sub->add_option("--zcount,-m", zcount, "Number of roots of unity (default 2L+1)");
    sub->add_option("--tol-ck", cfg.tol_ck, "Cuntz-Krieger residual tolerance");
    sub->add_option("--tol-rank", cfg.tol_rank, "Relative singular-value threshold");
  };

  auto* analyze = app.add_subcommand("analyze", "Sources, cycles, entries, path counts");
  add_common(analyze);
  auto* decomp = app.add_subcommand("decompose", "Cycle/forest decomposition and amalgam data");
  add_common(decomp);
  auto* synth = app.add_subcommand("synthesize", "Finite-dimensional representation family");
  add_common(synth);
  add_family(synth);
  auto* certify = app.add_subcommand("certify", "Decide RFD and emit a certificate");
  add_common(certify);
  add_family(certify);
  certify->add_flag("--search-min-m", cfg.search_min_zcount, "Report the least m that already separates");
  auto* verify = app.add_subcommand("verify", "Replay the checks of a certificate");
  add_common(verify);
  verify->add_option("--certificate,-c", cfg.certificate, "Certificate JSON file")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kExitPrecondition;
  }
  for (auto* sub : {analyze, decomp, synth, certify, verify})
    if (sub->parsed()) {
      cfg.subcommand = sub->get_name();
      if (auto* opt = sub->get_option_no_throw("--zcount"); opt && opt->count() > 0) cfg.zcount = zcount;
    }
  return execute(cfg, out, err);
}

}  // namespace rfdg::cli
