#include "plq/io.hpp"
#include "plq/oracle.hpp"
#include "plq/spectral.hpp"
#include "support/random_plq.hpp"

#include <doctest.h>

#include <cmath>

using namespace plq;

namespace {

std::string fixture(const std::string& name) { return std::string(PLQ_FIXTURES) + "/" + name; }

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

PLQFunction neg_square() {
  Matrix A(1, 1);
  A << -2;
  return PLQFunction(1, {Piece{QuadraticFunction(A, vec({0}), 0), PolyhedralSet::full_space(1)}});
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("negative square at its threshold") {
    const OracleVerdict at0 = envelope_numeric(neg_square(), 2.0, vec({0}));
    CHECK(at0.kind == VerdictKind::Finite);
    CHECK(at0.value == doctest::Approx(0).epsilon(1e-6));
    const OracleVerdict at1 = envelope_numeric(neg_square(), 2.0, vec({1}));
    CHECK(at1.kind == VerdictKind::DivergentNegInf);
    CHECK(std::abs(at1.ray(0)) == doctest::Approx(1));
  }

  TEST_CASE("affine domain value matches the closed form") {
    const PLQFunction f = load_plq(fixture("example51.json"));
    const Vector x = vec({0, 1.0 / 6});
    const OracleVerdict v = envelope_numeric(f, 3.0, x);
    CHECK(v.kind == VerdictKind::Finite);
    CHECK(v.value == doctest::Approx(11.0 / 12).epsilon(1e-3));
    CHECK(envelope_value_full(f.pieces()[0].fn, 3.0, x) == doctest::Approx(11.0 / 12).epsilon(1e-9));
  }

  TEST_CASE("threshold brackets") {
    const ThresholdBracket neg = threshold_bracket(neg_square(), vec({0}), 1e-2);
    CHECK(neg.contains(2.0, 1e-9));
    CHECK(neg.hi - neg.lo <= 1e-2 + 1e-12);

    Matrix A(1, 1);
    A << 2;
    const PLQFunction sq(1, {Piece{QuadraticFunction(A, vec({0}), 0), PolyhedralSet::full_space(1)}});
    const ThresholdBracket pos = threshold_bracket(sq, vec({0}), 1e-2);
    CHECK(pos.found);
    CHECK(pos.lo == 0);
    CHECK(pos.hi == 0);

    const ThresholdBracket six = threshold_bracket(load_plq(fixture("example54.json")), vec({0, 0}), 1e-2);
    CHECK(six.contains(1 + std::sqrt(5.0), 1e-9));
    CHECK_FALSE(six.contains((1 + std::sqrt(5.0)) / 2, 1e-9));
  }

  TEST_CASE("argument checks") {
    CHECK_THROWS_AS(envelope_numeric(neg_square(), -1.0, vec({0})), std::invalid_argument);
    CHECK_THROWS_AS(threshold_bracket(neg_square(), vec({0}), 0.0), std::invalid_argument);
  }

  TEST_CASE("finite envelopes are non-decreasing in r") {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 6; ++k) {
      const PLQFunction f = testing::random_plq(rng);
      const Vector x = testing::random_vector(rng, 2, 2.0);
      const OracleVerdict lo = envelope_numeric(f, 12.0, x);
      const OracleVerdict hi = envelope_numeric(f, 16.0, x);
      if (lo.kind != VerdictKind::Finite || hi.kind != VerdictKind::Finite) continue;
      CHECK(lo.value <= hi.value + 1e-6 * (1 + std::abs(hi.value)));
    }
  }

  TEST_CASE("diverges below the threshold") {
    const OracleVerdict v = envelope_numeric(neg_square(), 2.0 - 0.05, vec({0}));
    CHECK(v.kind == VerdictKind::DivergentNegInf);
    const OracleVerdict w = envelope_numeric(load_plq(fixture("example54.json")), 1 + std::sqrt(5.0) - 0.05, vec({0, 0}));
    CHECK(w.kind == VerdictKind::DivergentNegInf);
  }
}
