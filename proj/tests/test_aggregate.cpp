#include "plq/aggregate.hpp"
#include "plq/io.hpp"
#include "plq/oracle.hpp"
#include "support/random_plq.hpp"

#include <doctest.h>

#include <algorithm>
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

PLQFunction one_piece_1d(double a, double b) {
  Matrix A(1, 1);
  A << a;
  return PLQFunction(1, {Piece{QuadraticFunction(A, vec({b}), 0), PolyhedralSet::full_space(1)}});
}

}  // namespace

TEST_SUITE("aggregate") {
  TEST_CASE("six-piece example") {
    const ThresholdReport rep = threshold_plq(load_plq(fixture("example54.json")));
    REQUIRE(rep.pieces.size() == 6);
    CHECK(rep.pieces[0].r_bar == doctest::Approx(0));
    CHECK(rep.pieces[1].r_bar == doctest::Approx(0));
    CHECK(rep.pieces[2].r_bar == doctest::Approx(0));
    CHECK(rep.pieces[3].r_bar == doctest::Approx(std::sqrt(85.0) - 6).epsilon(1e-9));
    CHECK(rep.pieces[4].r_bar == doctest::Approx(1).epsilon(1e-9));
    CHECK(rep.pieces[5].r_bar == doctest::Approx(1 + std::sqrt(5.0)).epsilon(1e-9));
    CHECK(rep.r_bar == doctest::Approx(1 + std::sqrt(5.0)).epsilon(1e-9));
    CHECK(rep.active_set == std::vector<int>{6});
    CHECK(rep.pieces[0].domain == "empty");
    CHECK(rep.pieces[1].domain == "empty");
    CHECK(rep.pieces[2].domain == "full");
    CHECK_FALSE(rep.pieces[2].G.has_value());
    CHECK(rep.overall_domain == "pointwise");
    CHECK_FALSE(bounded_below_shortcut(rep));
  }

  TEST_CASE("active piece witness is a member") {
    const PLQFunction f = load_plq(fixture("example54.json"));
    const ThresholdReport rep = threshold_plq(f);
    const Vector w = f.pieces()[5].fn.b() / rep.r_bar;
    CHECK(classify_point_plq(rep, f, w) == Membership::Member);
    CHECK(classify_point_plq(rep, f, vec({0, 0})) == Membership::NonMember);
  }

  TEST_CASE("two-piece examples") {
    const PLQFunction F = load_plq(fixture("example53F.json"));
    const PLQFunction G = load_plq(fixture("example53G.json"));
    const ThresholdReport rf = threshold_plq(F);
    const ThresholdReport rg = threshold_plq(G);
    CHECK(rf.r_bar == doctest::Approx(2));
    CHECK(rg.r_bar == doctest::Approx(2));
    CHECK(rf.active_set == std::vector<int>{1, 2});
    CHECK(rg.active_set == std::vector<int>{1, 2});

    CHECK(classify_point_plq(rf, F, vec({0})) == Membership::Member);
    for (double x : {-1.0, 0.5, 2.0}) CHECK(classify_point_plq(rf, F, vec({x})) == Membership::NonMember);

    for (double x : {-1.0, 0.0, 0.1, 1.0}) CHECK(classify_point_plq(rg, G, vec({x})) == Membership::Member);
    for (double x : {-2.0, 1.5}) CHECK(classify_point_plq(rg, G, vec({x})) == Membership::NonMember);

    const std::vector<PieceVerdict> v = classify_active_pieces(rg, G, vec({1.5}));
    REQUIRE(v.size() == 2);
    CHECK(v[0].membership == Membership::Member);
    CHECK(v[1].membership == Membership::NonMember);
  }

  TEST_CASE("bounded-below shortcut") {
    const ThresholdReport sq = threshold_plq(one_piece_1d(2, 0));
    CHECK(bounded_below_shortcut(sq));
    CHECK(sq.overall_domain == "full");
    const ThresholdReport lin = threshold_plq(one_piece_1d(0, 1));
    CHECK_FALSE(bounded_below_shortcut(lin));
    CHECK(lin.overall_domain == "empty");
    const ThresholdReport neg = threshold_plq(one_piece_1d(-2, 0));
    CHECK_FALSE(bounded_below_shortcut(neg));
    CHECK(neg.overall_domain == "affine");
  }

  TEST_CASE("single full-space piece recovers the affine domain") {
    const PLQFunction f = load_plq(fixture("example51.json"));
    const ThresholdReport rep = threshold_plq(f);
    CHECK(rep.r_bar == doctest::Approx(3));
    const EnvelopeDomain dom = overall_domain(rep, f);
    REQUIRE(std::holds_alternative<AffineSubspace>(dom));
    for (double x : {-2.0, 0.0, 3.0}) {
      CHECK(classify(dom, vec({x, x / 2 + 1.0 / 6})) == Membership::Member);
      CHECK(classify(dom, vec({x, x / 2})) == Membership::NonMember);
    }
  }

  TEST_CASE("invalid functions are rejected") {
    const PLQFunction f = load_plq(fixture("broken_continuity.json"));
    CHECK_THROWS_AS(threshold_plq(f), ValidationFailure);
    try {
      threshold_plq(f);
    } catch (const ValidationFailure& e) {
      CHECK_FALSE(e.report().ok());
    }
  }

  TEST_CASE("threshold is the maximum over pieces") {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 40; ++k) {
      const PLQFunction f = testing::random_plq(rng);
      const ThresholdReport rep = threshold_plq(f);
      double m = 0;
      for (const PieceSummary& p : rep.pieces) m = std::max(m, p.r_bar);
      CHECK(rep.r_bar == doctest::Approx(m));
      for (int i : rep.active_set) CHECK(rep.pieces[i - 1].r_bar == doctest::Approx(rep.r_bar));
    }
  }

  TEST_CASE("restricting a piece's region never raises its threshold") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 40; ++k) {
      const QuadraticFunction q = testing::random_quadratic(rng, 2);
      const PolyhedralSet S = testing::random_cone(rng, 2);
      const PolyhedralSet T = S.intersect(testing::random_cone(rng, 2));
      const double rs = threshold_plq_unchecked(PLQFunction(2, {Piece{q, S}})).r_bar;
      if (is_empty(T) || !chebyshev_center(T) || chebyshev_center(T)->radius < 1e-6) continue;
      const double rt = threshold_plq_unchecked(PLQFunction(2, {Piece{q, T}})).r_bar;
      CHECK(rt <= rs + 1e-9);
    }
  }

  TEST_CASE("point verdict combines active piece verdicts") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 30; ++k) {
      const PLQFunction f = testing::random_plq(rng);
      const ThresholdReport rep = threshold_plq(f);
      for (int j = 0; j < 4; ++j) {
        const Vector x = testing::random_vector(rng, 2, 4.0);
        const auto verdicts = classify_active_pieces(rep, f, x);
        const bool any_non = std::any_of(verdicts.begin(), verdicts.end(),
                                         [](const PieceVerdict& v) { return v.membership == Membership::NonMember; });
        const bool all_in = std::all_of(verdicts.begin(), verdicts.end(),
                                        [](const PieceVerdict& v) { return v.membership == Membership::Member; });
        const Membership m = classify_point_plq(rep, f, x);
        if (any_non) CHECK(m == Membership::NonMember);
        else if (all_in) CHECK(m == Membership::Member);
        else CHECK(m == Membership::Indeterminate);
      }
    }
  }
}
