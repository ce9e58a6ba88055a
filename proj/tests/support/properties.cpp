#include "support/properties.hpp"

#include "plq/aggregate.hpp"
#include "plq/conic.hpp"
#include "plq/oracle.hpp"
#include "plq/recession.hpp"
#include "plq/spectral.hpp"
#include "support/random_plq.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace plq::testing {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector random_angles(std::mt19937_64& rng, int n) {
  Vector phi(n - 1);
  for (int i = 0; i < n - 1; ++i) phi(i) = uniform(rng, 0.0, i == 0 ? 2.0 * std::numbers::pi : std::numbers::pi);
  return phi;
}

PropertyResult result(std::string name, bool ok, const std::ostringstream& detail) {
  return {std::move(name), ok, detail.str()};
}

// Every piece plus the same affine term stays continuous.
PLQFunction add_affine(const PLQFunction& f, const Vector& g, double h) {
  std::vector<Piece> pieces;
  for (const auto& p : f.pieces()) pieces.push_back({QuadraticFunction(p.fn.A(), p.fn.b() + g, p.fn.c() + h), p.region});
  return PLQFunction(f.dim(), std::move(pieces));
}

}  // namespace

PropertyResult coordinate_identities(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + trial % 3;
    const QuadraticFunction q = random_quadratic(rng, n, 5.0);
    const Vector phi = random_angles(rng, n);
    const Vector xbar = random_vector(rng, n, 3.0);
    const double r = uniform(rng, 0.0, 5.0);
    const Vector u = unit_direction(phi);
    const double scale = 1.0 + q.A().cwiseAbs().maxCoeff();
    worst = std::max(worst, std::abs(g_of_phi(q.A(), phi) - u.dot(q.A() * u)) / scale);
    worst = std::max(worst, std::abs(h_r(q.b(), r, xbar, phi) - (q.b() - r * xbar).dot(u)) /
                                (1.0 + q.b().norm() + r * xbar.norm()));
    worst = std::max(worst, std::abs(k_r(q.c(), r, xbar) - (q.c() + 0.5 * r * xbar.squaredNorm())) /
                                (1.0 + std::abs(q.c()) + r * xbar.squaredNorm()));
  }
  std::ostringstream d;
  d << "worst scaled deviation " << worst << " over 10^4 samples";
  return result("coordinate identities (g, h, k)", worst <= 1e-12, d);
}

PropertyResult eigen_invariants(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  bool sorted = true;
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + trial % 4;
    const Matrix A = random_quadratic(rng, n, 5.0).A();
    const auto s = eig_decompose_sym(A);
    worst = std::max(worst, (s.Q.transpose() * s.lambdas.asDiagonal() * s.Q - A).cwiseAbs().maxCoeff());
    worst = std::max(worst, (s.Q * s.Q.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
    for (int i = 1; i < n; ++i) sorted = sorted && s.lambdas(i - 1) >= s.lambdas(i);
  }
  std::ostringstream d;
  d << "max reconstruction/orthogonality error " << worst << (sorted ? ", eigenvalues sorted" : ", UNSORTED");
  return result("eigen-decomposition invariants", worst <= 1e-9 && sorted, d);
}

PropertyResult envelope_monotone_in_r(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int violations = 0, checked = 0;
  // Closed form on full-domain quadratics.
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 3;
    const QuadraticFunction q = random_quadratic(rng, n, 5.0);
    const double rbar = threshold_full_domain(q);
    const Vector x = random_vector(rng, n, 3.0);
    double prev = -kInf;
    for (double r = rbar + 0.05; r < rbar + 10.0; r *= 1.5) {
      const double v = envelope_value_full(q, r, x);
      if (v < prev - 1e-9 * (1.0 + std::abs(prev))) ++violations;
      prev = v;
      ++checked;
    }
  }
  // Oracle on random PLQ functions.
  for (int trial = 0; trial < 6; ++trial) {
    const PLQFunction f = random_plq(rng);
    const double rbar = threshold_plq_unchecked(f).r_bar;
    const Vector x = random_vector(rng, 2, 2.0);
    double prev = -kInf;
    for (double r : {rbar + 0.2, rbar + 0.5, rbar + 1.5, rbar + 4.0}) {
      const OracleVerdict v = envelope_numeric(f, r, x);
      if (v.kind != VerdictKind::Finite) continue;
      if (v.value < prev - 1e-6) ++violations;
      prev = v.value;
      ++checked;
    }
  }
  std::ostringstream d;
  d << violations << " violations in " << checked << " comparisons";
  return result("envelope monotone in r", violations == 0, d);
}

PropertyResult threshold_bc_invariance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    const QuadraticFunction q = random_quadratic(rng, n, 5.0);
    const QuadraticFunction q2(q.A(), random_vector(rng, n, 5.0), uniform(rng, -5.0, 5.0));
    worst = std::max(worst, std::abs(threshold_full_domain(q) - threshold_full_domain(q2)));
  }
  for (int trial = 0; trial < 60; ++trial) {
    const PLQFunction f = random_plq(rng);
    const PLQFunction g = add_affine(f, random_vector(rng, 2, 5.0), uniform(rng, -5.0, 5.0));
    worst = std::max(worst, std::abs(threshold_plq_unchecked(f).r_bar - threshold_plq_unchecked(g).r_bar));
  }
  std::ostringstream d;
  d << "max threshold change " << worst;
  return result("threshold b/c-invariance", worst <= 1e-9, d);
}

PropertyResult recession_anchor_independence(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int mismatches = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const PolyhedralSet S = random_polyhedron(rng);
    const PolyhedralSet T = S.translated(random_vector(rng, 2, 10.0));
    const PolyhedralSet a = recession_cone(S), b = recession_cone(T);
    if (a.halfspaces().size() != b.halfspaces().size()) {
      ++mismatches;
      continue;
    }
    for (std::size_t i = 0; i < a.halfspaces().size(); ++i) {
      if ((a.halfspaces()[i].a - b.halfspaces()[i].a).norm() > 0.0 || a.halfspaces()[i].beta != b.halfspaces()[i].beta) {
        ++mismatches;
        break;
      }
    }
  }
  std::ostringstream d;
  d << mismatches << " of 300 translated sets changed their recession cone";
  return result("recession-cone anchor independence", mismatches == 0, d);
}

PropertyResult witness_membership(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int tested = 0, failures = 0, oracle_failures = 0;
  for (int trial = 0; trial < 400 && tested < 150; ++trial) {
    const int n = 2 + trial % 2;
    const PolyhedralSet cone = random_cone(rng, n);
    const QuadraticFunction q = random_quadratic(rng, n, 5.0);
    const ConicAnalysis a = threshold_conic(q, cone);
    if (!(a.G < 0.0)) continue;
    ++tested;
    const Vector w = q.b() / a.r_bar;
    if (classify_point_conic(a, q, w) != Membership::Member) ++failures;
    if (n == 2 && tested % 10 == 0) {
      const PLQFunction f(n, {Piece{q, cone}});
      const OracleVerdict v = envelope_numeric(f, a.r_bar, w);
      if (v.kind == VerdictKind::DivergentNegInf) ++oracle_failures;
    }
  }
  std::ostringstream d;
  d << tested << " cones with G < 0; " << failures << " witnesses not Member; " << oracle_failures
    << " oracle divergences at the witness";
  return result("witness point b/r_bar", tested > 50 && failures == 0 && oracle_failures == 0, d);
}

PropertyResult piecewise_min_identity(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int compared = 0, skipped = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const PLQFunction f = random_plq(rng);
    const double r = threshold_plq_unchecked(f).r_bar + 0.1;
    const Vector x = random_vector(rng, 2, 2.0);
    const OracleVerdict whole = envelope_numeric(f, r, x);
    double piece_min = kInf;
    bool all_finite = whole.kind == VerdictKind::Finite;
    for (const auto& p : f.pieces()) {
      const OracleVerdict v = envelope_numeric(PLQFunction(2, {p}), r, x);
      if (v.kind != VerdictKind::Finite) all_finite = false;
      piece_min = std::min(piece_min, v.value);
    }
    if (!all_finite) {
      ++skipped;
      continue;
    }
    ++compared;
    worst = std::max(worst, std::abs(whole.value - piece_min) / (1.0 + std::abs(piece_min)));
  }
  std::ostringstream d;
  d << "max relative gap " << worst << " over " << compared << " instances (" << skipped << " inconclusive)";
  return result("piecewise-min identity at r_bar + 0.1", compared >= 8 && worst <= 1e-4, d);
}

std::vector<PropertyResult> all_properties(std::uint64_t seed) {
  return {coordinate_identities(seed),         eigen_invariants(seed + 1),   envelope_monotone_in_r(seed + 2),
          threshold_bc_invariance(seed + 3),   recession_anchor_independence(seed + 4),
          witness_membership(seed + 5),         piecewise_min_identity(seed + 6)};
}

}  // namespace plq::testing
