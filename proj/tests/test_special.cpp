#include <catch_amalgamated.hpp>

#include <random>

#include "gis/special.hpp"

using namespace gis;
using namespace gis::special;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}

TEST_CASE("hyp1f1 reference values", "[special]") {
  CHECK(rel(hyp1f1(1.0, 1.0, 1.0).value, std::exp(1.0)) < 1e-14);
  CHECK(rel(hyp1f1(1.0, 2.0, 2.0).value, (std::exp(2.0) - 1.0) / 2.0) < 1e-14);
  // M(a, a, z) = e^z for complex z
  const cplx z(0.7, -1.3);
  CHECK(rel(hyp1f1(cplx(0.3, 0.2), cplx(0.3, 0.2), z).value, std::exp(z)) < 1e-14);
  // M(1/2, 3/2, -x^2) = sqrt(pi) erf(x) / (2x)
  const double x = 1.2;
  CHECK(rel(hyp1f1(0.5, 1.5, -x * x).value, std::sqrt(M_PI) * std::erf(x) / (2 * x)) < 1e-14);
  CHECK(hyp1f1(2.0, 3.0, 0.0).value == cplx(1.0));
}

TEST_CASE("hyp1f1 polynomial case", "[special]") {
  // M(-2, b, z) = 1 - 2z/b + z^2/(b(b+1))
  const double b = 0.5;
  const cplx z(0.4, 0.1);
  const cplx expect = 1.0 - 2.0 * z / b + z * z / (b * (b + 1.0));
  CHECK(rel(hyp1f1(-2.0, b, z).value, expect) < 1e-15);
  CHECK(rel(hyp1f1(-2.0, -3.0, z).value, 1.0 - 2.0 * z / -3.0 + z * z / (-3.0 * -2.0)) < 1e-15);
}

TEST_CASE("hyp1f1 pole at b", "[special]") {
  try {
    hyp1f1(0.5, -2.0, 1.0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PoleAtB);
  }
  CHECK_THROWS_AS(hyp0f1(0.0, 1.0), Error);
}

TEST_CASE("Kummer transformation M(a,b,z) = e^z M(b-a,b,-z)", "[special][property]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const cplx a(2 * u(rng), 2 * u(rng));
    const cplx b(0.3 + 2.5 * (u(rng) + 1.0), u(rng));
    const cplx z(3 * u(rng), 3 * u(rng));
    const SeriesResult lhs = hyp1f1(a, b, z);
    const SeriesResult rhs = hyp1f1(b - a, b, -z);
    const cplx r = std::exp(z) * rhs.value;
    const double tol = 1e-10 * std::max({1.0, std::abs(lhs.value), std::abs(r)});
    CHECK(std::abs(lhs.value - r) < tol);
  }
}

TEST_CASE("contiguous relation", "[special][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const cplx a(1.5 * u(rng), u(rng));
    const cplx b(1.0 + 2 * (u(rng) + 1.0), 0.5 * u(rng));
    const cplx z(2 * u(rng), 2 * u(rng));
    const cplx m0 = hyp1f1(a, b, z).value, mm = hyp1f1(a - 1.0, b, z).value, mp = hyp1f1(a + 1.0, b, z).value;
    const cplx lhs = (b - a) * mm + (2.0 * a - b + z) * m0 - a * mp;
    const double scale = std::abs(b - a) * std::abs(mm) + std::abs(2.0 * a - b + z) * std::abs(m0) + std::abs(a) * std::abs(mp);
    CHECK(std::abs(lhs) < 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("reported error bound covers the actual error", "[special]") {
  // exp(z) as M(b, b, z)
  for (const cplx z : {cplx(5.0, 0.0), cplx(-3.0, 4.0), cplx(0.1, 0.1), cplx(10.0, -2.0)}) {
    const SeriesResult r = hyp1f1(1.0, 1.0, z);
    CHECK(std::abs(r.value - std::exp(z)) <= 10.0 * r.bound + 1e-15 * std::abs(std::exp(z)));
    CHECK(r.terms_used > 0);
  }
}

TEST_CASE("hyp0f1 against Bessel", "[special]") {
  // 0F1(; 1; -x^2/4) = J0(x); 0F1(; 1; x^2/4) = I0(x)
  for (double x : {0.5, 1.0, 3.0, 7.5}) {
    CHECK(std::abs(hyp0f1(1.0, -x * x / 4).value - std::cyl_bessel_j(0.0, x)) < 1e-13);
    CHECK(rel(hyp0f1(1.0, x * x / 4).value, std::cyl_bessel_i(0.0, x)) < 1e-13);
  }
}
