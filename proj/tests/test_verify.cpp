#include <catch_amalgamated.hpp>

#include "gis/verify.hpp"

using namespace gis;

TEST_CASE("tail classification", "[verify]") {
  CHECK(classify_tails({0.1, 0.1, 0.1}) == Verdict::Diverges);
  CHECK(classify_tails({0.1, 1e-5, 1e-12}) == Verdict::Converges);
  CHECK(classify_tails({0.1, 0.05, 0.02}) == Verdict::Inconclusive);
  CHECK(classify_tails({1e-7, 1e-7, 1e-7}) == Verdict::Inconclusive);
}

TEST_CASE("no eigenstates on the imaginary axis", "[verify]") {
  for (double k : {0.25, 1.0})
    for (double r : {0.3, 3.0}) CHECK(axis_divergence_probe(k, r, {128, 256, 512}).verdict == Verdict::Diverges);
  CHECK(divergence_probe(0.5, 2.0, 1.0, {128, 256, 512}).verdict == Verdict::Converges);
  CHECK_THROWS_AS(divergence_probe(0.5, 2.0, 1.0, {128, 64, 512}), Error);
  CHECK_THROWS_AS(divergence_probe(0.5, 2.0, 1.0, {128, 256}), Error);
}

TEST_CASE("su2 multiplicities", "[verify]") {
  const Representation rep = build_su2_rep(2.0);
  const cplx lambda(1.7, 0.4);
  const cplx s = std::sqrt(lambda * lambda - 1.0);
  const MultiplicityReport r = multiplicity_probe(rep, lambda, 1.0 * s);
  CHECK(r.algebraic_count == 1);
  CHECK(r.geometric_count == 1);
  const MultiplicityReport d = multiplicity_probe(rep, 1.0, 0.0);
  CHECK(d.algebraic_count == 5);
  CHECK(d.geometric_count == 1);
  CHECK(multiplicity_probe(rep, lambda, 0.123).algebraic_count == 0);
}

TEST_CASE("su11 eigenvalues are simple", "[verify]") {
  const Representation rep = build_su11_rep(0.5, 64);
  for (const cplx lambda : {cplx(0.5, 0.3), cplx(1.5, -0.5)}) {
    const cplx zp = 0.5 * std::sqrt(1.0 - lambda * lambda);
    const MultiplicityReport r = multiplicity_probe(rep, lambda, zp);
    CHECK(r.geometric_count == 1);
    CHECK(r.algebraic_count == 1);
    CHECK(r.truncations.size() == 3);
  }
  CHECK_THROWS_AS(multiplicity_probe(build_qp_realization(32).canonical, 1.0, 0.0), Error);
}

TEST_CASE("GIS at z' = k sqrt(1-lambda^2) is a Perelomov state", "[verify]") {
  for (double k : {0.25, 2.0}) {
    const PerelomovEmbeddingCheck c = perelomov_embedding_check(k, cplx(0.6, 0.4));
    CHECK(c.fidelity_plus > 1 - 1e-10);
    CHECK(c.fidelity_minus > 1 - 1e-10);
    CHECK(c.zeta_sign_plus == -c.zeta_sign_minus);
  }
}

TEST_CASE("k = 1/4 squeezing families", "[verify]") {
  std::vector<cplx> grid;
  for (int i = 0; i <= 40; ++i) grid.emplace_back(-1.0 + 0.05 * i, 0.0);
  const auto bg = qp_squeezing_scan(QpFamily::BG_k14, grid, 256);
  const SqueezeRow& best = max_squeeze(bg);
  CHECK(best.percent_squeeze > 50.0);
  CHECK(best.percent_squeeze < 60.0);
  // the vacuum is not squeezed
  const auto vac = qp_squeezing_scan(QpFamily::BG_k14, {cplx(0.0)}, 256);
  CHECK(std::abs(vac[0].var_q - 0.5) < 1e-12);
  const auto per = qp_squeezing_scan(QpFamily::Perelomov_k14, {cplx(0.95, 0.0)}, 512);
  CHECK(per[0].percent_squeeze > 90.0);
  CHECK_THROWS_AS(qp_squeezing_scan(QpFamily::BG_k14, grid, 100), Error);
  CHECK_THROWS_AS(qp_squeezing_scan(QpFamily::Perelomov_k14, {cplx(1.1)}, 256), Error);
}
