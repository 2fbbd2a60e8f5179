// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <bit>
#include <chrono>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include "rfdg/rfdg.hpp"
#include "support/oracles.hpp"

using namespace rfdg;

namespace {

// Pinned tolerances.
constexpr double kCkTol = 1e-12;
constexpr double kUnitTol = 1e-12;
constexpr double kHolonomyTol = 1e-12;
constexpr double kRankRelTol = 1e-8;
constexpr double kCompatTol = 1e-15;
constexpr double kOracleTol = 1e-9;

constexpr std::uint64_t kSeed = 20240601;
constexpr std::uint64_t kMaxCorpusDim = 64;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Graph load(const std::string& name) {
  std::ifstream in(std::string(RFDG_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

const std::vector<std::string> kSamples = {"loop.json",       "edge.json",       "entry.json", "fig1_left.json",
                                           "fig1_right.json", "two_cycles.json", "tree.json",  "double_loop.json"};

struct Corpus {
  std::vector<Graph> no_entry;   // samples + random, glued dimension capped
  std::vector<Graph> with_entry;
};

const Corpus& corpus() {
  static Corpus c = [] {
    Corpus c;
    for (const auto& s : kSamples) {
      Graph g = load(s);
      (oracle::no_entry(g) ? c.no_entry : c.with_entry).push_back(g);
    }
    oracle::Rng rng(kSeed);
    while (c.no_entry.size() < 120) {
      Graph g = oracle::random_no_entry(rng, 10, 14);
      if (oracle::dimension_oracle(g).dim() <= kMaxCorpusDim) c.no_entry.push_back(g);
    }
    for (int i = 0; i < 40; ++i) c.no_entry.push_back(oracle::random_glued(rng, 10, 14, kMaxCorpusDim));
    while (c.with_entry.size() < 200) c.with_entry.push_back(oracle::random_with_entry(rng, 8, 12));
    return c;
  }();
  return c;
}

Params quick() {
  Params p;
  p.trunc = 0;
  p.zcount = 1;
  return p;
}

// ---- 1 ----------------------------------------------------------------------------

// Simple digraphs (loops allowed) as n*n adjacency bitmasks; a mask is kept
// iff it is the least mask in its orbit under vertex permutations.
std::vector<std::uint32_t> orbit_representatives(int n, int max_arcs) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  const int bits = n * n;
  std::vector<std::uint32_t> reps;
  auto consider = [&](std::uint32_t mask) {
    for (const auto& q : perms) {
      std::uint32_t img = 0;
      for (int b = 0; b < bits; ++b)
        if (mask >> b & 1u) img |= 1u << (q[b / n] * n + q[b % n]);
      if (img < mask) return;
    }
    reps.push_back(mask);
  };
  for (int k = 0; k <= std::min(max_arcs, bits); ++k) {
    if (k == 0) {
      consider(0);
      continue;
    }
    std::uint32_t mask = (1u << k) - 1u;
    const std::uint32_t limit = 1u << bits;
    while (mask < limit) {
      consider(mask);
      std::uint32_t c = mask & -mask, r = mask + c;  // next mask with the same popcount
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
  return reps;
}

Graph from_mask(int n, std::uint32_t mask) {
  std::vector<oracle::Arc> arcs;
  for (int b = 0; b < n * n; ++b)
    if (mask >> b & 1u) arcs.push_back({b / n, b % n});
  return oracle::make_graph(n, arcs);
}

Outcome decision_equivalence() {
  // enumerator self-check: unlabeled digraphs with loops on 0..4 nodes (OEIS A000595)
  const std::size_t known[] = {2, 10, 104, 3044};
  for (int n = 1; n <= 4; ++n)
    if (orbit_representatives(n, n * n).size() != known[n - 1])
      return {false, "orbit enumerator miscounts on " + std::to_string(n) + " vertices"};
  std::size_t classes = 0, disagree = 0;
  for (int n = 1; n <= 5; ++n)
    for (auto mask : orbit_representatives(n, 7)) {
      Graph g = from_mask(n, mask);
      ++classes;
      disagree += (decide_rfd(g, quick()).verdict == Verdict::RFD) != oracle::no_entry(g);
    }
  oracle::Rng rng(kSeed + 1);
  std::size_t random = 0;
  for (; random < 500; ++random) {
    Graph g = oracle::random_graph(rng, 8, 12);
    disagree += (decide_rfd(g, quick()).verdict == Verdict::RFD) != oracle::no_entry(g);
  }
  return {disagree == 0, std::to_string(classes) + " isomorphism classes + " + std::to_string(random) +
                             " random multigraphs, " + std::to_string(disagree) + " disagreements"};
}

// ---- 2 ----------------------------------------------------------------------------

Outcome construction_exactness() {
  oracle::Rng rng(kSeed + 2);
  double worst = 0.0, worst_unit = 0.0;
  std::size_t graphs = 0, reps = 0, max_dim = 0;
  while (graphs < 200) {
    Graph g = oracle::random_no_entry(rng, 12, 20);
    ++graphs;
    for (const auto& r : family_at(g, roots_of_unity(5))) {
      auto ck = check_ck(r, kCkTol);
      worst = std::max(worst, ck.max_residual);
      worst_unit = std::max(worst_unit, ck.unitality_residual);
      max_dim = std::max<std::size_t>(max_dim, r.dim);
      ++reps;
    }
  }
  std::ostringstream d;
  d << graphs << " graphs, " << reps << " reps (dim <= " << max_dim << "), max CK residual " << worst
    << ", max unitality residual " << worst_unit;
  return {worst <= kCkTol && worst_unit <= kUnitTol, d.str()};
}

// ---- 3 ----------------------------------------------------------------------------

Outcome dimension_law_check() {
  std::size_t checked = 0, bad = 0;
  for (const auto& g : corpus().no_entry) {
    auto law = dimension_law(g, split_cycles_and_forest(g));
    int dim = synthesize_rep(g, Complex(0.0, 1.0)).dim;
    bad += dim != law.dim() || static_cast<std::uint64_t>(dim) != oracle::dimension_oracle(g).dim();
    ++checked;
  }
  int left = synthesize_rep(load("fig1_left.json"), 1.0).dim;
  int right = synthesize_rep(load("fig1_right.json"), 1.0).dim;
  Graph l = load("fig1_left.json");
  auto ll = dimension_law(l, decompose(l));
  bool ok = bad == 0 && left == 4 && ll.dim() == ll.k && right == 10;
  return {ok, std::to_string(checked) + " graphs, " + std::to_string(bad) + " mismatches; figure 1 left D = " +
                  std::to_string(left) + " (k = " + std::to_string(ll.k) + "), right D = " + std::to_string(right)};
}

// ---- 4 ----------------------------------------------------------------------------

Outcome cycle_facts() {
  double worst = 0.0;
  bool z_free = true;
  for (int n = 1; n <= 12; ++n) {
    std::vector<oracle::Arc> arcs;
    for (int i = 0; i < n; ++i) arcs.push_back({i, (i + 1) % n});
    Graph g = oracle::make_graph(n, arcs);
    Cycle c = find_cycles(g)[0];
    Rep ref = cycle_rep(g, c, 1.0);
    for (Complex z : roots_of_unity(8)) {
      Rep r = cycle_rep(g, c, z);
      worst = std::max(worst, op_norm(evaluate(r, path_element(c.as_path())) - matrix_unit(n, 0, 0, z)));
      for (int v = 0; v < n; ++v) {
        const Matrix &a = r.vertex_mats[v], &b = ref.vertex_mats[v];
        z_free = z_free && std::memcmp(a.data(), b.data(), sizeof(Complex) * a.size()) == 0;
      }
    }
  }
  std::ostringstream d;
  d << "N = 1..12, 8th roots: max holonomy error " << worst << ", vertex images bitwise z-independent: "
    << (z_free ? "yes" : "no");
  return {worst <= kHolonomyTol && z_free, d.str()};
}

// ---- 5 ----------------------------------------------------------------------------

Outcome acyclic_facts() {
  Graph e = load("edge.json");
  Rep r = acyclic_rep(e);
  Eigen::BDCSVD<Matrix> svd(r.vertex_mat("v"));
  int src_rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) src_rank += svd.singularValues()(i) > 0.5;
  bool edge_ok = r.block_dims == std::vector<int>{2} && src_rank == 1;

  oracle::Rng rng(kSeed + 5);
  std::size_t bad = 0;
  for (int t = 0; t < 100; ++t) {
    Graph g = oracle::random_acyclic(rng, 7, 9);
    std::uint64_t expect = 0;
    std::size_t longest = 0;
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (g.in_edges(v).empty()) {
        auto n = *oracle::enumerate_paths(g, v);
        expect += n * n;
      }
      for (const auto& p : oracle::list_paths(g, v, g.num_vertices())) longest = std::max(longest, p.size());
    }
    bad += basis_monomials(g, longest).size() != expect;
  }
  return {edge_ok && bad == 0, std::string("EDGE dims [2], source rank ") + std::to_string(src_rank) +
                                   "; 100 random DAGs, " + std::to_string(bad) + " basis-count mismatches"};
}

// ---- 6 ----------------------------------------------------------------------------

Outcome separation() {
  std::size_t checked = 0, bad = 0, biggest = 0;
  for (const auto& g : corpus().no_entry) {
    auto rpt = separation_check(g, 2, roots_of_unity(5), kRankRelTol);
    bad += !(rpt.separated && rpt.rank == basis_monomials(g, 2).size());
    biggest = std::max(biggest, rpt.expected);
    ++checked;
  }
  return {bad == 0, std::to_string(checked) + " graphs at L = 2, m = 5 (up to " + std::to_string(biggest) +
                        " monomials), " + std::to_string(bad) + " rank deficits"};
}

// ---- 7 ----------------------------------------------------------------------------

Outcome obstruction_exactness() {
  std::size_t checked = 0, bad = 0;
  for (const auto& g : corpus().with_entry) {
    auto cert = decide_rfd(g);
    bool ok = cert.verdict == Verdict::NotRFD && is_zero(g, cert.obstruction->identity) &&
              !normal_form(g, cert.obstruction->entry_term).empty() && !contains_float(certificate_to_json(cert));
    bad += !ok;
    ++checked;
  }
  return {bad == 0, std::to_string(checked) + " graphs with entries, " + std::to_string(bad) +
                        " failures (identity zero, entry term nonzero, no floats)"};
}

// ---- 8 ----------------------------------------------------------------------------

Outcome amalgam_compatibility() {
  std::size_t graphs = 0;
  double worst = 0.0, worst_unit = 0.0;
  bool nonzero = true;
  std::vector<Complex> zs = roots_of_unity(5);
  zs.push_back(std::polar(1.0, 0.5));
  zs.push_back(std::polar(1.0, std::sqrt(2.0)));
  for (const auto& g : corpus().no_entry) {
    auto d = split_cycles_and_forest(g);
    if (d.cycles.empty() || d.g2.num_edges() == 0) continue;
    ++graphs;
    std::vector<FactorImages> fs;
    for (Complex z : zs) fs.push_back(build_factor_reps(g, d, z));
    auto rpt = check_compatibility(amalgam_data(g, d), fs);
    worst = std::max(worst, rpt.max_residual);
    worst_unit = std::max(worst_unit, rpt.unitality_residual);
    nonzero = nonzero && rpt.coordinates_nonzero;
  }
  std::ostringstream d;
  d << graphs << " decomposable graphs x " << zs.size() << " z values, max residual " << worst
    << ", theta unitality residual " << worst_unit;
  return {graphs > 0 && worst <= kCompatTol && worst_unit <= kCompatTol && nonzero, d.str()};
}

// ---- 9 ----------------------------------------------------------------------------

Outcome symbolic_health() {
  oracle::Rng rng(kSeed + 9);
  std::size_t triples = 0, bad = 0;
  while (triples < 1000) {
    Graph g = oracle::random_graph(rng, 6, 8);
    for (int r = 0; r < 5; ++r, ++triples) {
      auto x = random_element(g, rng), y = random_element(g, rng), z = random_element(g, rng);
      auto nf = normal_form(g, x);
      bool ok = normal_form_random_order(g, x, rng) == nf && adjoint(adjoint(x)) == x &&
                normal_form(g, adjoint(x)) == adjoint(nf) &&
                normal_form(g, multiply(g, multiply(g, x, y), z)) == normal_form(g, multiply(g, x, multiply(g, y, z))) &&
                adjoint(multiply(g, x, y)) == multiply(g, adjoint(y), adjoint(x));
      bad += !ok;
    }
  }
  double worst = 0.0;
  std::size_t evaluated = 0;
  for (const auto& g : corpus().no_entry) {
    for (const auto& rep : family_at(g, roots_of_unity(3))) {
      for (int t = 0; t < 4; ++t) {
        auto x = random_element(g, rng, 5, 4);
        worst = std::max(worst, op_norm(evaluate(rep, x) - evaluate(rep, normal_form(g, x))));
        ++evaluated;
      }
    }
  }
  std::ostringstream d;
  d << triples << " triples, " << bad << " failures (confluence, involution, associativity); " << evaluated
    << " oracle evaluations, max deviation " << worst;
  return {bad == 0 && worst <= kOracleTol, d.str()};
}

// ---- 10 ---------------------------------------------------------------------------

Outcome round_trip() {
  std::size_t certs = 0, verify_fail = 0, flips = 0, undetected = 0;
  oracle::Rng rng(kSeed + 10);
  auto all = corpus().no_entry;
  all.insert(all.end(), corpus().with_entry.begin(), corpus().with_entry.end());
  for (const auto& g : all) {
    auto j = ordered_json::parse(certificate_to_json(decide_rfd(g)).dump());
    ++certs;
    if (!verify_certificate(g, j, kSeed).pass) ++verify_fail;
    if (j["verdict"] != "RFD") continue;
    // Corrupt one bit of one matrix entry, a few times per certificate.
    for (int t = 0; t < 3; ++t) {
      auto k = j;
      auto& fam = k["family"];
      auto& rep = fam[oracle::uniform(rng, 0, int(fam.size()) - 1)];
      auto& table = oracle::uniform(rng, 0, 1) || rep["edge_mats"].empty() ? rep["vertex_mats"] : rep["edge_mats"];
      auto it = table.begin();
      std::advance(it, oracle::uniform(rng, 0, int(table.size()) - 1));
      auto& row = (*it)[oracle::uniform(rng, 0, int(it->size()) - 1)];
      auto& cell = row[oracle::uniform(rng, 0, int(row.size()) - 1)][oracle::uniform(rng, 0, 1)];
      double x = cell.get<double>();
      auto bits = std::bit_cast<std::uint64_t>(x) ^ (1ull << oracle::uniform(rng, 0, 63));
      cell = std::bit_cast<double>(bits);
      ++flips;
      if (verify_certificate(g, ordered_json::parse(k.dump()), kSeed).pass) ++undetected;
    }
  }
  return {verify_fail == 0 && undetected == 0,
          std::to_string(certs) + " certificates, " + std::to_string(verify_fail) + " failed verification; " +
              std::to_string(flips) + " single-bit flips, " + std::to_string(undetected) + " undetected"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "decision equivalence", decision_equivalence},
      {2, "construction exactness", construction_exactness},
      {3, "dimension law", dimension_law_check},
      {4, "cycle facts", cycle_facts},
      {5, "acyclic facts", acyclic_facts},
      {6, "separation", separation},
      {7, "obstruction exactness", obstruction_exactness},
      {8, "amalgam compatibility", amalgam_compatibility},
      {9, "symbolic engine health", symbolic_health},
      {10, "round-trip", round_trip},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.detail << " ["
              << std::fixed << std::setprecision(1) << secs << "s]" << std::defaultfloat << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
