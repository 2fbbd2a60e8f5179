#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "rfdg/rfdg.hpp"
#include "support/oracles.hpp"

using namespace rfdg;

namespace {

Graph load(const std::string& name) {
  std::ifstream in(std::string(RFDG_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph(ss.str());
}

Graph ring(int n) {
  std::vector<oracle::Arc> arcs;
  for (int i = 0; i < n; ++i) arcs.push_back({i, (i + 1) % n});
  return oracle::make_graph(n, arcs);
}

double residual_of(const CKReport& r, const std::string& name) {
  for (const auto& x : r.residuals)
    if (x.relation == name) return x.value;
  ADD_FAILURE() << "no residual " << name;
  return -1.0;
}

int rank_of(const Matrix& m) {
  Eigen::BDCSVD<Matrix> svd(m);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) r += svd.singularValues()(i) > 1e-9;
  return r;
}

const Complex kI{0.0, 1.0};

}  // namespace

TEST(AcyclicRep, EdgeGraphIsMatrixUnits) {
  Graph g = load("edge.json");
  Rep r = acyclic_rep(g);
  ASSERT_EQ(r.dim, 2);
  EXPECT_EQ(r.vertex_mat("v"), matrix_unit(2, 0, 0));
  EXPECT_EQ(r.vertex_mat("w"), matrix_unit(2, 1, 1));
  EXPECT_EQ(r.edge_mat("e"), matrix_unit(2, 1, 0));
  auto ck = check_ck(r);
  EXPECT_EQ(ck.max_residual, 0.0);
  EXPECT_EQ(ck.unitality_residual, 0.0);
  EXPECT_EQ(r.block_dims, std::vector<int>{2});
}

TEST(AcyclicRep, IsolatedVertexAndGuard) {
  Rep r = acyclic_rep(parse_graph(R"({"vertices":["x"],"edges":[]})"));
  ASSERT_EQ(r.dim, 1);
  EXPECT_EQ(r.vertex_mats[0](0, 0), Complex(1.0));
  try {
    acyclic_rep(load("loop.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CyclePresent);
  }
}

TEST(AcyclicRep, FigureOneRightForestBlocks) {
  auto d = decompose(load("fig1_right.json"));
  Rep r = acyclic_rep(d.g2);
  EXPECT_EQ(r.block_dims, (std::vector<int>{4, 2}));
  EXPECT_EQ(rank_of(r.vertex_mat("P3")), 1);
  EXPECT_EQ(rank_of(r.vertex_mat("P4")), 1);
  EXPECT_EQ(check_ck(r).max_residual, 0.0);
}

TEST(AcyclicRep, SourcesAreRankOneOnRandomDags) {
  oracle::Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    Graph g = oracle::random_acyclic(rng, 7, 9);
    Rep r = acyclic_rep(g);
    std::uint64_t total = 0;
    for (int v : sources(g)) {
      EXPECT_EQ(rank_of(r.vertex_mats[v]), 1);
      total += *oracle::enumerate_paths(g, v);
    }
    ASSERT_EQ(static_cast<std::uint64_t>(r.dim), total);
    auto ck = check_ck(r);
    ASSERT_EQ(ck.max_residual, 0.0);
    ASSERT_EQ(ck.unitality_residual, 0.0);
  }
}

TEST(CycleRep, LoopAndThreeCycle) {
  Graph loop = load("loop.json");
  Complex z = std::polar(1.0, 0.7);
  Rep r = cycle_rep(loop, find_cycles(loop)[0], z);
  ASSERT_EQ(r.dim, 1);
  EXPECT_EQ(r.vertex_mat("v")(0, 0), Complex(1.0));
  EXPECT_EQ(r.edge_mat("e")(0, 0), z);

  Graph tri = ring(3);
  Rep t = cycle_rep(tri, find_cycles(tri)[0], 1.0);
  EXPECT_EQ(t.edge_mat("e00"), matrix_unit(3, 1, 0));
  EXPECT_EQ(t.edge_mat("e01"), matrix_unit(3, 2, 1));
  EXPECT_EQ(t.edge_mat("e02"), matrix_unit(3, 0, 2));
}

TEST(CycleRep, GuardsUnitModulus) {
  Graph loop = load("loop.json");
  try {
    cycle_rep(loop, find_cycles(loop)[0], 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUnitModulus);
  }
}

TEST(CycleRep, HolonomyAndZIndependence) {
  for (int n = 1; n <= 12; ++n) {
    Graph g = ring(n);
    Cycle c = find_cycles(g)[0];
    Rep base = cycle_rep(g, c, 1.0);
    for (Complex z : roots_of_unity(8)) {
      Rep r = cycle_rep(g, c, z);
      Matrix loop = evaluate(r, path_element(c.as_path()));
      EXPECT_LE(op_norm(loop - matrix_unit(n, 0, 0, z)), 1e-12) << n;
      for (int v = 0; v < g.num_vertices(); ++v) EXPECT_EQ(r.vertex_mats[v], base.vertex_mats[v]);
    }
  }
}

TEST(NoEntryRep, FigureOneDimensions) {
  for (Complex z : roots_of_unity(4)) {
    Graph l = load("fig1_left.json");
    auto dl = decompose(l);
    Rep rl = no_entry_rep(l, dl, uniform_z(l, dl.cycles, z));
    EXPECT_EQ(rl.dim, 4);
    Graph r = load("fig1_right.json");
    auto dr = decompose(r);
    Rep rr = no_entry_rep(r, dr, uniform_z(r, dr.cycles, z));
    EXPECT_EQ(rr.dim, 10);
    for (const Rep* p : {&rl, &rr}) {
      auto ck = check_ck(*p);
      EXPECT_LE(ck.max_residual, 1e-12);
      EXPECT_LE(ck.unitality_residual, 1e-12);
    }
  }
}

TEST(NoEntryRep, Guards) {
  Graph entry = load("entry.json");
  EXPECT_THROW(no_entry_rep(entry, split_cycles_and_forest(entry), {}), Error);
  Graph loop = load("loop.json");
  try {
    no_entry_rep(loop, split_cycles_and_forest(loop), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TrivialDecomposition);
  }
}

TEST(NoEntryRep, ExactAndDimensionLawOnRandomGraphs) {
  oracle::Rng rng(77);
  for (int t = 0; t < 60; ++t) {
    Graph g = oracle::random_no_entry(rng, 10, 14);
    auto expect = oracle::dimension_oracle(g);
    if (expect.dim() > 64) continue;
    Complex z = std::polar(1.0, 0.3 * t);
    Rep r = synthesize_rep(g, z);
    ASSERT_EQ(static_cast<std::uint64_t>(r.dim), expect.dim()) << serialize_graph(g);
    auto ck = check_ck(r);
    ASSERT_LE(ck.max_residual, 1e-12) << ck.worst() << " " << serialize_graph(g);
    ASSERT_LE(ck.unitality_residual, 1e-12);
  }
}

TEST(DirectSum, Examples) {
  Graph loop = load("loop.json");
  Cycle c = find_cycles(loop)[0];
  Rep s = rep_direct_sum({cycle_rep(loop, c, 1.0), cycle_rep(loop, c, kI)});
  ASSERT_EQ(s.dim, 2);
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  expect(1, 1) = kI;
  EXPECT_EQ(s.edge_mat("e"), expect);

  try {
    rep_direct_sum({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyFamily);
  }

  Rep one = acyclic_rep(load("edge.json"));
  Rep same = rep_direct_sum({one});
  EXPECT_EQ(same.dim, one.dim);
  EXPECT_EQ(same.vertex_mats, one.vertex_mats);
  EXPECT_EQ(same.edge_mats, one.edge_mats);

  try {
    rep_direct_sum({one, cycle_rep(loop, c, 1.0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GraphMismatch);
  }
}

TEST(Evaluate, GeneratorsAndOracle) {
  Graph g = load("fig1_right.json");
  Rep r = synthesize_rep(g, kI);
  EXPECT_EQ(evaluate(r, gen_vertex(g, "P6")), r.vertex_mat("P6"));
  EXPECT_EQ(evaluate(r, gen_edge(g, "f3")), r.edge_mat("f3"));
  oracle::Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    auto x = random_element(g, rng, 5, 4);
    EXPECT_LE(op_norm(evaluate(r, x) - evaluate(r, normal_form(g, x))), 1e-9);
  }
}

TEST(CheckCk, DetectsCorruption) {
  Graph g = load("edge.json");
  Rep r = acyclic_rep(g);
  r.edge_mats[g.edge("e")].setZero();
  auto ck = check_ck(r);
  EXPECT_FALSE(ck.pass);
  EXPECT_DOUBLE_EQ(residual_of(ck, "(4) p_w"), 1.0);

  Graph tri = ring(3);
  Cycle c = find_cycles(tri)[0];
  Rep t = cycle_rep(tri, c, 1.0);
  t.edge_mats[t.graph.edge("e02")] *= 2.0;  // the edge closing the cycle carries z
  EXPECT_NEAR(residual_of(check_ck(t), "(3) s_e02"), 3.0, 1e-12);
}

TEST(Separation, Examples) {
  Graph loop = load("loop.json");
  auto s1 = separation_check(loop, 1, roots_of_unity(3));
  EXPECT_EQ(s1.rank, 3u);
  EXPECT_EQ(s1.expected, 3u);
  EXPECT_TRUE(s1.separated);

  auto s2 = separation_check(load("edge.json"), 1, {Complex(1.0)});
  EXPECT_EQ(s2.rank, 4u);
  EXPECT_TRUE(s2.separated);

  auto s3 = separation_check(loop, 2, roots_of_unity(5));
  EXPECT_EQ(s3.rank, 5u);
  EXPECT_TRUE(s3.separated);
}

TEST(Separation, Guards) {
  Graph loop = load("loop.json");
  try {
    separation_check(loop, 2, roots_of_unity(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewPoints);
  }
  EXPECT_THROW(separation_check(load("entry.json"), 1, roots_of_unity(3)), Error);
  EXPECT_THROW(separation_check(loop, 1, {Complex(1.0), Complex(1.0), kI}), Error);
}

TEST(Separation, TooFewPointsLoseRank) {
  // One point cannot tell z^-1, 1, z apart on the loop.
  Graph loop = load("loop.json");
  auto rpt = separation_rank({synthesize_rep(loop, 1.0)}, basis_monomials(loop, 1));
  EXPECT_EQ(rpt.rank, 1u);
  EXPECT_FALSE(rpt.separated);
}

TEST(Separation, MonotoneInPoints) {
  oracle::Rng rng(5);
  for (int t = 0; t < 25; ++t) {
    Graph g = oracle::random_no_entry(rng, 6, 8);
    if (oracle::dimension_oracle(g).dim() > 24) continue;
    auto zs = roots_of_unity(5);
    auto base = separation_check(g, 2, zs);
    zs.push_back(std::polar(1.0, 0.123));
    auto more = separation_check(g, 2, zs);
    if (base.separated) {
      EXPECT_TRUE(more.separated) << serialize_graph(g);
    }
    EXPECT_GE(more.rank, base.rank);
  }
}

TEST(TraceObstruction, ExactRepsKillEntryTerms) {
  // ENTRY graph: the 2-cycle via cycle_rep and f -> 0 on an extra summand for w.
  Graph g = load("entry.json");
  Rep r = empty_rep(g, 3);
  r.vertex_mats[g.vertex("v1")](0, 0) = 1.0;
  r.vertex_mats[g.vertex("v2")](1, 1) = 1.0;
  r.vertex_mats[g.vertex("w")](2, 2) = 1.0;
  r.edge_mats[g.edge("a")](1, 0) = 1.0;
  r.edge_mats[g.edge("b")](0, 1) = 1.0;
  // f = 0 violates s_f^* s_f = p_w; the audit reports both trace and residual.
  auto audit = entry_vanishing_audit(r);
  EXPECT_EQ(audit.traces.at("f"), 0.0);
  EXPECT_GE(audit.ck_residual, 1.0);
}

TEST(TraceObstruction, NonzeroTraceOnlyWithResidual) {
  oracle::Rng rng(19);
  for (int t = 0; t < 40; ++t) {
    Graph g = oracle::random_with_entry(rng, 6, 8);
    // Representation built for the graph without its entries: cycles exact,
    // entry edges forced onto something; the trace bound must still hold.
    int dim = g.num_vertices();
    Rep r = empty_rep(g, dim);
    for (int v = 0; v < dim; ++v) r.vertex_mats[v](v, v) = 1.0;
    for (int e = 0; e < g.num_edges(); ++e) r.edge_mats[e](g.rng(e), g.src(e)) = 1.0;
    auto audit = entry_vanishing_audit(r);
    for (const auto& [f, tr] : audit.traces) EXPECT_LE(tr, audit.bound + 1e-12) << f << " " << serialize_graph(g);
  }
}

TEST(TraceObstruction, NoEntriesIsAnError) {
  try {
    entry_vanishing_audit(acyclic_rep(load("edge.json")));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoEntries);
  }
}

TEST(RepJson, RoundTrip) {
  Graph g = load("fig1_right.json");
  Rep r = synthesize_rep(g, std::polar(1.0, 1.1));
  auto j = rep_to_json(r);
  Rep back = rep_from_json(g, j);
  EXPECT_EQ(back.dim, r.dim);
  EXPECT_EQ(back.vertex_mats, r.vertex_mats);
  EXPECT_EQ(back.edge_mats, r.edge_mats);
  EXPECT_EQ(rep_to_json(back).dump(), j.dump());
  EXPECT_EQ(j["basis_labels"].size(), static_cast<std::size_t>(r.dim));
}
