#include "plq/conic.hpp"

#include "plq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace plq {

// ---------------------------------------------------------------------------
// Coordinates

double sin_k(const Vector& phi, int k) {
  if (k < 0 || k > phi.size()) throw std::out_of_range("sin_k: k out of range");
  double prod = 1.0;
  for (int i = 0; i < k; ++i) prod *= std::sin(phi(i));
  return prod;
}

namespace {

// cos φᵢ with the convention φₙ = 0 (1-based i).
double cos_phi(const Vector& phi, int i) { return i <= phi.size() ? std::cos(phi(i - 1)) : 1.0; }

// Sin_{i-1}φ cos φᵢ (1-based i).
double chart_component(const Vector& phi, int i) { return sin_k(phi, i - 1) * cos_phi(phi, i); }

double wrap_two_pi(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a = 0.0;
  return a;
}

}  // namespace

Vector unit_direction(const Vector& phi) {
  const int n = static_cast<int>(phi.size()) + 1;
  Vector u(n);
  for (int i = 1; i <= n; ++i) u(i - 1) = chart_component(phi, i);
  return u;
}

SphericalPoint from_cartesian(const Vector& x) {
  const auto n = x.size();
  if (n < 2) throw DimensionError("from_cartesian: spherical coordinates need n >= 2");
  SphericalPoint p{x.norm(), Vector::Zero(n - 1)};
  if (p.rho == 0.0) return p;
  if (n == 2) {
    p.phi(0) = wrap_two_pi(std::atan2(x(1), x(0)));
    return p;
  }
  // φ₂..φₙ₋₁ live in [0, π], so the trailing block (x₂..xₙ) is written as
  // sin φ₁ · v with vₙ₋₁ >= 0; the sign goes into φ₁ ∈ [0, 2π).
  const double sigma = x(n - 1) < 0.0 ? -1.0 : 1.0;
  const Vector tail = x.tail(n - 1);
  const double s = tail.norm();
  p.phi(0) = wrap_two_pi(std::atan2(sigma * s, x(0)));
  if (s == 0.0) return p;
  const Vector v = sigma * tail / s;
  const auto m = v.size();
  for (Eigen::Index j = 1; j < m; ++j) {
    p.phi(j) = std::atan2(v.tail(m - j).norm(), v(j - 1));
  }
  return p;
}

Vector to_cartesian(const SphericalPoint& p) { return p.rho * unit_direction(p.phi); }

double g_of_phi(const Matrix& A, const Vector& phi) {
  const int n = static_cast<int>(phi.size()) + 1;
  if (A.rows() != n || A.cols() != n) throw DimensionError("g_of_phi: dimension mismatch");
  double sum = 0.0;
  for (int j = 1; j <= n; ++j) {
    const double uj = chart_component(phi, j);
    for (int i = 1; i <= n; ++i) sum += A(i - 1, j - 1) * chart_component(phi, i) * uj;
  }
  return sum;
}

namespace {

// (ρ̄, φ̄) of x̄; the 1-D chart only has the direction +1, so x̄ is used directly there.
struct BarCoordinates {
  Vector components;  // ρ̄ Sin_{i-1}φ̄ cos φ̄ᵢ
  double rho_sq_weight = 0.0;  // ρ̄² Σ Sin²_{i-1}φ̄ cos² φ̄ᵢ
};

BarCoordinates bar_coordinates(const Vector& xbar) {
  if (xbar.size() < 2) return {xbar, xbar.squaredNorm()};
  const SphericalPoint sp = from_cartesian(xbar);
  const int n = static_cast<int>(xbar.size());
  BarCoordinates out{Vector(n), 0.0};
  double weight = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double comp = chart_component(sp.phi, i);
    out.components(i - 1) = sp.rho * comp;
    weight += comp * comp;
  }
  out.rho_sq_weight = sp.rho * sp.rho * weight;
  return out;
}

}  // namespace

double h_r(const Vector& b, double r, const Vector& xbar, const Vector& phi) {
  const int n = static_cast<int>(phi.size()) + 1;
  if (b.size() != n || xbar.size() != n) throw DimensionError("h_r: dimension mismatch");
  const BarCoordinates bar = bar_coordinates(xbar);
  double sum = 0.0;
  for (int i = 1; i <= n; ++i) {
    sum += (b(i - 1) - r * bar.components(i - 1)) * chart_component(phi, i);
  }
  return sum;
}

double k_r(double c, double r, const Vector& xbar) {
  return c + 0.5 * r * bar_coordinates(xbar).rho_sq_weight;
}

// ---------------------------------------------------------------------------
// Minimizing the form over a cone

namespace {

constexpr double kConeTol = 1e-10;

bool in_cone(const PolyhedralSet& cone, const Vector& u) {
  return std::all_of(cone.halfspaces().begin(), cone.halfspaces().end(),
                     [&](const HalfSpace& h) { return h.a.dot(u) <= kConeTol * h.a.norm(); });
}

struct Candidate {
  Vector u;
  double value;
  bool continuum;
};

// Directions of the eigenspace `basis` (columns, orthonormal) that lie in the
// cone. Returns samples when the intersection has relative interior.
std::vector<Vector> sample_eigenspace_in_cone(const Matrix& basis, const PolyhedralSet& cone,
                                              std::mt19937_64& rng, bool& has_interior) {
  const auto d = basis.cols();
  std::vector<Vector> out;
  has_interior = false;
  std::vector<Vector> rows;
  for (const auto& h : cone.halfspaces()) {
    Vector a = basis.transpose() * h.a;
    if (a.norm() > 1e-12 * h.a.norm()) rows.push_back(a / a.norm());
  }
  // maximize t : rowsᵀz + t <= 0, -1 <= z <= 1, t <= 1
  const auto m = static_cast<Eigen::Index>(rows.size());
  Matrix A = Matrix::Zero(m + 2 * d + 1, d + 1);
  Vector b = Vector::Zero(m + 2 * d + 1);
  for (Eigen::Index k = 0; k < m; ++k) {
    A.block(k, 0, 1, d) = rows[static_cast<std::size_t>(k)].transpose();
    A(k, d) = 1.0;
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    A(m + 2 * j, j) = 1.0;
    b(m + 2 * j) = 1.0;
    A(m + 2 * j + 1, j) = -1.0;
    b(m + 2 * j + 1) = 1.0;
  }
  A(m + 2 * d, d) = 1.0;
  b(m + 2 * d) = 1.0;
  Vector c = Vector::Zero(d + 1);
  c(d) = 1.0;
  auto res = lp::maximize(c, A, b);
  if (res.status != lp::Status::Optimal || res.objective <= 1e-9) return out;
  has_interior = true;

  const Vector zc = res.x.head(d);
  const double radius = res.objective;
  out.push_back((basis * zc).normalized());
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < 32; ++s) {
    Vector dir(d);
    for (Eigen::Index j = 0; j < d; ++j) dir(j) = gauss(rng);
    Vector z = zc + unif(rng) * radius * dir.normalized();
    Vector u = (basis * z).normalized();
    if (in_cone(cone, u)) out.push_back(u);
  }
  return out;
}

void add_unique(std::vector<Vector>& dirs, const Vector& u) {
  for (const auto& v : dirs) {
    if ((v - u).norm() < 1e-6) return;
  }
  dirs.push_back(u);
}

double form(const Matrix& A, const Vector& u) { return u.dot(A * u); }

// Local pattern search for min uᵀAu on cone ∩ sphere, starting at u.
Vector refine_direction(const Matrix& A, const PolyhedralSet& cone, Vector u, double step) {
  const auto n = u.size();
  double best = form(A, u);
  while (step > 1e-12) {
    // Coordinate moves, plus moves tangent to the sphere along the facets
    // that are nearly active; the latter keep the search from stalling on
    // the boundary.
    std::vector<Vector> moves;
    for (Eigen::Index j = 0; j < n; ++j) moves.push_back(Vector::Unit(n, j));
    std::vector<Eigen::Index> near;
    for (std::size_t k = 0; k < cone.halfspaces().size(); ++k) {
      const auto& h = cone.halfspaces()[k];
      if (h.a.dot(u) >= -2.0 * step * h.a.norm()) near.push_back(static_cast<Eigen::Index>(k));
    }
    if (!near.empty()) {
      Matrix N(static_cast<Eigen::Index>(near.size()) + 1, n);
      for (std::size_t r = 0; r < near.size(); ++r) {
        N.row(static_cast<Eigen::Index>(r)) = cone.halfspaces()[static_cast<std::size_t>(near[r])].a.transpose();
      }
      N.row(N.rows() - 1) = u.transpose();
      const Matrix T = null_space(N);
      for (Eigen::Index c = 0; c < T.cols(); ++c) moves.push_back(T.col(c));
    }
    bool improved = false;
    for (const Vector& d : moves) {
      for (double sign : {1.0, -1.0}) {
        const Vector cand = (u + sign * step * d).normalized();
        if (!in_cone(cone, cand)) continue;
        const double v = form(A, cand);
        if (v < best) {
          best = v;
          u = cand;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return u;
}

}  // namespace

double grid_min_form_over_cone(const Matrix& A, const PolyhedralSet& cone, int samples_per_angle) {
  const auto n = A.rows();
  double best = kInf;
  Vector best_u;
  auto consider = [&](const Vector& u) {
    if (!in_cone(cone, u)) return;
    const double v = form(A, u);
    if (v < best) {
      best = v;
      best_u = u;
    }
  };
  double spacing = 0.0;
  if (n == 1) {
    consider(Vector::Constant(1, 1.0));
    consider(Vector::Constant(1, -1.0));
    return best;
  }
  if (n == 2) {
    const int count = 4 * samples_per_angle;
    spacing = 2.0 * std::numbers::pi / count;
    for (int k = 0; k < count; ++k) {
      Vector phi(1);
      phi(0) = k * spacing;
      consider(unit_direction(phi));
    }
  } else if (n == 3) {
    const int outer = samples_per_angle;
    const int inner = samples_per_angle / 2 + 1;
    spacing = 2.0 * std::numbers::pi / outer;
    for (int a = 0; a < outer; ++a) {
      for (int b = 0; b < inner; ++b) {
        Vector phi(2);
        phi(0) = a * spacing;
        phi(1) = std::numbers::pi * b / (inner - 1);
        consider(unit_direction(phi));
      }
    }
  } else {
    std::mt19937_64 rng(0xc0ffee);
    std::normal_distribution<double> gauss;
    spacing = 0.05;
    for (int s = 0; s < 200000; ++s) {
      Vector u(n);
      for (Eigen::Index j = 0; j < n; ++j) u(j) = gauss(rng);
      consider(u.normalized());
    }
  }
  if (!std::isfinite(best)) return best;
  return form(A, refine_direction(A, cone, best_u, spacing));
}

ConeMinimum min_form_over_cone(const Matrix& A, const PolyhedralSet& cone) {
  const int n = cone.dim();
  if (A.rows() != n || A.cols() != n) throw DimensionError("min_form_over_cone: dimension mismatch");
  if (!cone.is_cone()) throw std::invalid_argument("min_form_over_cone: set is not a cone");
  if (is_bounded(cone)) throw std::invalid_argument("min_form_over_cone: cone is {0}");

  const Matrix As = 0.5 * (A + A.transpose());
  const double scale = 1.0 + As.cwiseAbs().maxCoeff();
  ConeMinimum out;
  std::vector<Candidate> cands;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);

  const auto& hs = cone.halfspaces();
  const int m = static_cast<int>(hs.size());

  auto consider_face = [&](const std::vector<int>& active) {
    Matrix N(static_cast<Eigen::Index>(active.size()), n);
    for (std::size_t r = 0; r < active.size(); ++r) N.row(static_cast<Eigen::Index>(r)) = hs[active[r]].a.transpose();
    const Matrix span = null_space(N);
    if (span.cols() == 0) return;
    const Matrix restricted = span.transpose() * As * span;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (restricted + restricted.transpose()));
    const double mu = es.eigenvalues()(0);
    Eigen::Index mult = 1;
    while (mult < es.eigenvalues().size() && es.eigenvalues()(mult) - mu <= 1e-9 * scale) ++mult;
    const Matrix eig_basis = span * es.eigenvectors().leftCols(mult);
    if (mult == 1) {
      const Vector e = eig_basis.col(0).normalized();
      for (double sign : {1.0, -1.0}) {
        const Vector u = sign * e;
        if (in_cone(cone, u)) cands.push_back({u, form(As, u), false});
      }
      return;
    }
    bool interior = false;
    auto samples = sample_eigenspace_in_cone(eig_basis, cone, rng, interior);
    for (const auto& u : samples) cands.push_back({u, form(As, u), interior});
  };

  if (n <= 4) {
    // Every face: subsets of constraints of size 0..n-1 taken as equalities.
    std::vector<int> active;
    auto recurse = [&](auto&& self, int start) -> void {
      consider_face(active);
      if (static_cast<int>(active.size()) == n - 1) return;
      for (int k = start; k < m; ++k) {
        active.push_back(k);
        self(self, k + 1);
        active.pop_back();
      }
    };
    recurse(recurse, 0);
  } else {
    out.flags.push_back("faces_not_enumerated");
  }

  out.grid_G = grid_min_form_over_cone(As, cone);

  double G = kInf;
  for (const auto& c : cands) G = std::min(G, c.value);
  if (std::isfinite(out.grid_G) && out.grid_G < G - 1e-6 * scale) {
    out.flags.push_back("grid_below_faces");
    // Fall back on the refined grid minimizer.
    G = out.grid_G;
  }
  if (!std::isfinite(G)) throw std::runtime_error("min_form_over_cone: no feasible direction found");

  const double band = 1e-9 * scale;
  bool continuum = false;
  for (const auto& c : cands) {
    if (c.value <= G + band) {
      add_unique(out.Phi.directions, c.u);
      continuum = continuum || c.continuum;
    }
  }
  if (out.Phi.directions.empty()) {
    // Only reachable through the grid fallback.
    std::vector<Vector> seeds;
    for (int j = 0; j < n; ++j) {
      Vector e = Vector::Zero(n);
      e(j) = 1.0;
      seeds.push_back(e);
      seeds.push_back(-e);
    }
    for (const auto& s : seeds) {
      if (!in_cone(cone, s)) continue;
      Vector u = refine_direction(As, cone, s, 0.1);
      if (form(As, u) <= G + 1e-6 * scale) add_unique(out.Phi.directions, u);
    }
    continuum = true;
  }
  out.G = G;
  out.Phi.kind = continuum ? DirectionKind::NonIsolated : DirectionKind::Isolated;
  return out;
}

// ---------------------------------------------------------------------------
// Threshold and classification

bool ConicAnalysis::all_interior() const {
  return std::all_of(interior_flags.begin(), interior_flags.end(), [](bool b) { return b; });
}

ConicAnalysis threshold_conic(const QuadraticFunction& f, const PolyhedralSet& cone) {
  if (cone.dim() != f.dim()) throw DimensionError("threshold_conic: dimension mismatch");
  ConicAnalysis out{0.0, 0.0, {}, {}, cone, std::nullopt, false, {}};

  if (cone.is_full_space()) {
    FullDomainAnalysis full = analyze_full_domain(f);
    const auto& spec = full.spectrum;
    const auto n = spec.lambdas.size();
    const double lmin = spec.smallest();
    std::vector<int> cluster;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(spec.lambdas(i) - lmin) <= tol::kEigCluster * (1.0 + std::abs(lmin))) {
        cluster.push_back(static_cast<int>(i));
      }
    }
    for (int i : cluster) {
      out.Phi.directions.push_back(spec.eigenvector(i));
      out.Phi.directions.push_back(-spec.eigenvector(i));
    }
    if (cluster.size() > 1) {
      out.Phi.kind = DirectionKind::NonIsolated;
      const Vector mix = (spec.eigenvector(cluster[0]) + spec.eigenvector(cluster[1])).normalized();
      out.Phi.directions.push_back(mix);
      out.Phi.directions.push_back(-mix);
    }
    out.G = std::abs(lmin) <= tol::kEigCluster ? 0.0 : lmin;
    out.r_bar = full.r_bar;
    out.flags = full.warnings;
    out.full = std::move(full);
    out.interior_flags.assign(out.Phi.directions.size(), true);
    return out;
  }

  ConeMinimum cm = min_form_over_cone(f.A(), cone);
  out.flags = cm.flags;
  double G = cm.G;
  if (std::abs(G) <= tol::kEigCluster) {
    if (G < 0.0) {
      std::ostringstream msg;
      msg << "cone minimum " << G << " is within " << tol::kEigCluster << " of zero; treated as 0";
      out.flags.push_back(msg.str());
    }
    G = 0.0;
  }
  out.G = G;
  out.r_bar = std::max(0.0, -G);
  out.Phi = std::move(cm.Phi);
  for (const auto& u : out.Phi.directions) {
    bool interior = std::all_of(cone.halfspaces().begin(), cone.halfspaces().end(),
                                [&](const HalfSpace& h) { return h.a.dot(u) < -tol::kSign; });
    out.interior_flags.push_back(interior);
  }
  return out;
}

Membership classify_direction_signs(const ConicAnalysis& analysis, const Vector& b, const Vector& xbar) {
  if (analysis.G > 0.0) return Membership::Member;
  const Vector coeff = b - analysis.r_bar * xbar;
  // H vanishes identically: the objective is ρ²(G(φ)+r̄)/2 + K >= K.
  if (analysis.G < 0.0 && coeff.norm() <= tol::kSign * (1.0 + b.norm())) return Membership::Member;

  bool all_positive = true;
  for (const auto& u : analysis.Phi.directions) {
    const double h = coeff.dot(u);
    if (h < -tol::kSign) return Membership::NonMember;
    if (h <= tol::kSign) all_positive = false;
  }
  if (all_positive && analysis.Phi.isolated()) return Membership::Member;
  return Membership::Indeterminate;
}

Membership classify_point_conic(const ConicAnalysis& analysis, const QuadraticFunction& f, const Vector& xbar) {
  if (xbar.size() != f.dim()) throw DimensionError("classify_point_conic: point has wrong dimension");
  if (analysis.bounded_region) return Membership::Member;
  if (analysis.full) return classify(analysis.full->domain, xbar);
  return classify_direction_signs(analysis, f.b(), xbar);
}

DomainSplit nonempty_nontrivial_check(const ConicAnalysis& analysis, const QuadraticFunction& f) {
  if (!(analysis.G < 0.0)) throw std::invalid_argument("nonempty_nontrivial_check: requires G < 0");
  DomainSplit out;
  out.witness = f.b() / analysis.r_bar;
  out.dom_nonempty = classify_point_conic(analysis, f, out.witness) == Membership::Member;
  // Moving from the witness along a minimizing direction makes H strictly negative there.
  const Vector& u = analysis.Phi.directions.front();
  out.outside = out.witness + u;
  out.dom_proper = classify_point_conic(analysis, f, out.outside) == Membership::NonMember;
  return out;
}

}  // namespace plq
