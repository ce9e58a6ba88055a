#include "plq/plq_core.hpp"

#include "plq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace plq {

QuadraticFunction::QuadraticFunction(Matrix A, Vector b, double c) : b_(std::move(b)), c_(c) {
  const auto n = b_.size();
  if (n < 1) throw DimensionError("quadratic: dimension must be at least 1");
  if (A.rows() != n || A.cols() != n) {
    std::ostringstream msg;
    msg << "quadratic: A is " << A.rows() << "x" << A.cols() << " but b has length " << n;
    throw DimensionError(msg.str());
  }
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol::kSymmetry) {
    throw std::invalid_argument("quadratic: A is not symmetric");
  }
  A_ = 0.5 * (A + A.transpose());
}

double QuadraticFunction::operator()(const Vector& x) const {
  if (x.size() != b_.size()) throw DimensionError("quadratic: point has wrong dimension");
  return 0.5 * x.dot(A_ * x) + b_.dot(x) + c_;
}

HalfSpace::HalfSpace(Vector normal, double offset) : a(std::move(normal)), beta(offset) {
  if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0) {
    throw std::invalid_argument("halfspace: zero normal vector");
  }
}

PolyhedralSet::PolyhedralSet(int dim, std::vector<HalfSpace> halfspaces)
    : dim_(dim), halfspaces_(std::move(halfspaces)) {
  if (dim_ < 1) throw DimensionError("polyhedral set: dimension must be at least 1");
  for (const auto& h : halfspaces_) {
    if (h.a.size() != dim_) throw DimensionError("polyhedral set: halfspace normal has wrong length");
  }
}

bool PolyhedralSet::is_cone() const {
  return std::all_of(halfspaces_.begin(), halfspaces_.end(),
                     [](const HalfSpace& h) { return h.beta == 0.0; });
}

bool PolyhedralSet::contains(const Vector& x, double tolerance) const {
  if (x.size() != dim_) throw DimensionError("polyhedral set: point has wrong dimension");
  return std::all_of(halfspaces_.begin(), halfspaces_.end(),
                     [&](const HalfSpace& h) { return h.slack(x) >= -tolerance; });
}

PolyhedralSet PolyhedralSet::intersect(const PolyhedralSet& other) const {
  if (other.dim_ != dim_) throw DimensionError("intersect: dimension mismatch");
  std::vector<HalfSpace> all = halfspaces_;
  all.insert(all.end(), other.halfspaces_.begin(), other.halfspaces_.end());
  return PolyhedralSet(dim_, std::move(all));
}

PolyhedralSet PolyhedralSet::translated(const Vector& shift) const {
  std::vector<HalfSpace> moved;
  moved.reserve(halfspaces_.size());
  for (const auto& h : halfspaces_) moved.emplace_back(h.a, h.beta + h.a.dot(shift));
  return PolyhedralSet(dim_, std::move(moved));
}

Matrix PolyhedralSet::normals() const {
  Matrix N(static_cast<Eigen::Index>(halfspaces_.size()), dim_);
  for (std::size_t i = 0; i < halfspaces_.size(); ++i) N.row(static_cast<Eigen::Index>(i)) = halfspaces_[i].a.transpose();
  return N;
}

Vector PolyhedralSet::offsets() const {
  Vector beta(static_cast<Eigen::Index>(halfspaces_.size()));
  for (std::size_t i = 0; i < halfspaces_.size(); ++i) beta(static_cast<Eigen::Index>(i)) = halfspaces_[i].beta;
  return beta;
}

PLQFunction::PLQFunction(int dim, std::vector<Piece> pieces) : dim_(dim), pieces_(std::move(pieces)) {
  if (dim_ < 1) throw DimensionError("plq: dimension must be at least 1");
  if (pieces_.empty()) throw std::invalid_argument("plq: at least one piece is required");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].fn.dim() != dim_ || pieces_[i].region.dim() != dim_) {
      std::ostringstream msg;
      msg << "plq: piece " << i + 1 << " does not have dimension " << dim_;
      throw DimensionError(msg.str());
    }
  }
}

bool AffineSubspace::contains(const Vector& x, double tolerance) const {
  return std::all_of(equations.begin(), equations.end(), [&](const Equation& e) {
    return std::abs(e.normal.dot(x) - e.rhs) <= tolerance * (1.0 + std::abs(e.rhs));
  });
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Member:
      return "Member";
    case Membership::NonMember:
      return "NonMember";
    case Membership::Indeterminate:
      return "Indeterminate";
  }
  return "Indeterminate";
}

Membership classify(const EnvelopeDomain& domain, const Vector& x) {
  struct Visitor {
    const Vector& x;
    Membership operator()(const FullSpace&) const { return Membership::Member; }
    Membership operator()(const EmptyDomain&) const { return Membership::NonMember; }
    Membership operator()(const AffineSubspace& s) const {
      return s.contains(x) ? Membership::Member : Membership::NonMember;
    }
    Membership operator()(const PointwiseDomain& p) const { return p.classify(x); }
  };
  return std::visit(Visitor{x}, domain);
}

std::string domain_kind(const EnvelopeDomain& domain) {
  static const char* names[] = {"full", "empty", "affine", "pointwise"};
  return names[domain.index()];
}

double evaluate(const PLQFunction& f, const Vector& x) {
  if (x.size() != f.dim()) throw DimensionError("evaluate: point has wrong dimension");
  for (const auto& piece : f.pieces()) {
    if (piece.region.contains(x)) return piece.fn(x);
  }
  return kInf;
}

// ---------------------------------------------------------------------------
// Polyhedral geometry

namespace {

lp::Result solve_over(const PolyhedralSet& S, const Vector& objective, bool maximize) {
  return maximize ? lp::maximize(objective, S.normals(), S.offsets())
                  : lp::minimize(objective, S.normals(), S.offsets());
}

PolyhedralSet with_box(const PolyhedralSet& S, const Vector& center, double half_width) {
  std::vector<HalfSpace> hs = S.halfspaces();
  for (int j = 0; j < S.dim(); ++j) {
    Vector e = Vector::Zero(S.dim());
    e(j) = 1.0;
    hs.emplace_back(e, center(j) + half_width);
    hs.emplace_back(-e, -(center(j) - half_width));
  }
  return PolyhedralSet(S.dim(), std::move(hs));
}

// Interior-overlap LP: maximize t with x in `inner` and a ball of radius t
// around x inside every halfspace of `outer`.
std::optional<Vector> interior_overlap(const PolyhedralSet& inner, const PolyhedralSet& outer) {
  const int n = inner.dim();
  const auto m1 = static_cast<Eigen::Index>(inner.halfspaces().size());
  const auto m2 = static_cast<Eigen::Index>(outer.halfspaces().size());
  Matrix A = Matrix::Zero(m1 + m2 + 1, n + 1);
  Vector b = Vector::Zero(m1 + m2 + 1);
  if (m1 > 0) {
    A.topLeftCorner(m1, n) = inner.normals();
    b.head(m1) = inner.offsets();
  }
  for (Eigen::Index k = 0; k < m2; ++k) {
    const auto& h = outer.halfspaces()[static_cast<std::size_t>(k)];
    A.block(m1 + k, 0, 1, n) = h.a.transpose();
    A(m1 + k, n) = h.a.norm();
    b(m1 + k) = h.beta;
  }
  A(m1 + m2, n) = 1.0;
  b(m1 + m2) = 1.0;
  Vector c = Vector::Zero(n + 1);
  c(n) = 1.0;
  auto res = lp::maximize(c, A, b);
  if (res.status != lp::Status::Optimal || res.objective <= 1e-9) return std::nullopt;
  return Vector(res.x.head(n));
}

}  // namespace

bool is_empty(const PolyhedralSet& S) {
  if (S.halfspaces().empty()) return false;
  auto res = solve_over(S, Vector::Zero(S.dim()), false);
  return res.status == lp::Status::Infeasible;
}

std::optional<Vector> feasible_point(const PolyhedralSet& S) {
  if (S.halfspaces().empty()) return Vector(Vector::Zero(S.dim()));
  auto res = solve_over(S, Vector::Zero(S.dim()), false);
  if (res.status == lp::Status::Infeasible) return std::nullopt;
  return res.x;
}

bool is_bounded(const PolyhedralSet& S) {
  if (is_empty(S)) throw std::invalid_argument("is_bounded: set is empty");
  if (S.halfspaces().empty()) return false;
  const int n = S.dim();
  std::vector<HalfSpace> cone;
  for (const auto& h : S.halfspaces()) cone.emplace_back(h.a, 0.0);
  PolyhedralSet unit = with_box(PolyhedralSet(n, std::move(cone)), Vector::Zero(n), 1.0);
  for (int j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e(j) = 1.0;
    for (double sign : {1.0, -1.0}) {
      auto res = solve_over(unit, sign * e, true);
      if (res.status != lp::Status::Optimal || res.objective > 1e-9) return false;
    }
  }
  return true;
}

std::optional<ChebyshevBall> chebyshev_center(const PolyhedralSet& S, double radius_cap) {
  const int n = S.dim();
  if (S.halfspaces().empty()) return ChebyshevBall{Vector::Zero(n), radius_cap};
  const auto m = static_cast<Eigen::Index>(S.halfspaces().size());
  Matrix A = Matrix::Zero(m + 1, n + 1);
  Vector b = Vector::Zero(m + 1);
  A.topLeftCorner(m, n) = S.normals();
  b.head(m) = S.offsets();
  for (Eigen::Index k = 0; k < m; ++k) A(k, n) = A.row(k).head(n).norm();
  A(m, n) = 1.0;
  b(m) = radius_cap;
  Vector c = Vector::Zero(n + 1);
  c(n) = 1.0;
  auto res = lp::maximize(c, A, b);
  if (res.status != lp::Status::Optimal || res.objective < -1e-9) return std::nullopt;
  return ChebyshevBall{res.x.head(n), std::max(0.0, res.objective)};
}

Matrix null_space(const Matrix& N, double rank_tol) {
  const auto n = N.cols();
  if (N.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(N, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cutoff = rank_tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

std::vector<Vector> vertices(const PolyhedralSet& S) {
  const int n = S.dim();
  const auto& hs = S.halfspaces();
  const int m = static_cast<int>(hs.size());
  std::vector<Vector> out;
  if (m < n) return out;

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  long budget = 20000;
  while (budget-- > 0) {
    Matrix M(n, n);
    Vector rhs(n);
    for (int r = 0; r < n; ++r) {
      M.row(r) = hs[idx[r]].a.transpose();
      rhs(r) = hs[idx[r]].beta;
    }
    Eigen::FullPivLU<Matrix> lu(M);
    if (lu.rank() == n) {
      Vector v = lu.solve(rhs);
      if (S.contains(v, 1e-9 * (1.0 + v.cwiseAbs().maxCoeff()))) {
        bool dup = std::any_of(out.begin(), out.end(),
                               [&](const Vector& w) { return (w - v).norm() <= 1e-9 * (1.0 + v.norm()); });
        if (!dup) out.push_back(v);
      }
    }
    // next combination
    int k = n - 1;
    while (k >= 0 && idx[k] == m - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::vector<Vector> sample_points(const PolyhedralSet& S, int count, std::uint64_t seed, double box) {
  std::vector<Vector> out;
  auto start = feasible_point(S);
  if (!start) return out;
  const int n = S.dim();
  PolyhedralSet boxed = with_box(S, *start, box);

  // Constraints tight everywhere on S span the normal space of its affine hull.
  std::vector<Vector> eq_rows;
  std::vector<const HalfSpace*> free_rows;
  for (const auto& h : S.halfspaces()) {
    auto res = solve_over(boxed, h.a, false);
    if (res.status == lp::Status::Optimal && res.objective >= h.beta - 1e-9 * (1.0 + std::abs(h.beta))) {
      eq_rows.push_back(h.a);
    } else {
      free_rows.push_back(&h);
    }
  }
  Matrix E(static_cast<Eigen::Index>(eq_rows.size()), n);
  for (std::size_t i = 0; i < eq_rows.size(); ++i) E.row(static_cast<Eigen::Index>(i)) = eq_rows[i].transpose();
  Matrix basis = null_space(E);
  const auto k = basis.cols();
  if (k == 0) {
    out.push_back(*start);
    return out;
  }

  // Relative problem in hull coordinates z, x = start + basis z.
  std::vector<HalfSpace> rel;
  for (const HalfSpace* h : free_rows) {
    Vector a = basis.transpose() * h->a;
    if (a.norm() <= 1e-12 * h->a.norm()) continue;
    rel.emplace_back(a, h->beta - h->a.dot(*start));
  }
  PolyhedralSet hull_set(static_cast<int>(k), std::move(rel));
  PolyhedralSet hull_boxed = with_box(hull_set, Vector::Zero(k), box);
  auto centre = chebyshev_center(hull_boxed, box);
  Vector zc = centre ? centre->center : Vector(Vector::Zero(k));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  auto lift = [&](const Vector& z) { return Vector(*start + basis * z); };

  out.push_back(lift(zc));
  for (int i = 0; i < count; ++i) {
    Vector d(k);
    for (Eigen::Index j = 0; j < k; ++j) d(j) = gauss(rng);
    auto res = solve_over(hull_boxed, d, true);
    if (res.status != lp::Status::Optimal) continue;
    Vector z = zc + unif(rng) * (res.x - zc);
    out.push_back(lift(z));
    if (i % 3 == 0) out.push_back(lift(res.x));
  }
  return out;
}

ValidationReport validate(const PLQFunction& f, std::uint64_t seed) {
  ValidationReport report;
  const auto& pieces = f.pieces();
  const int m = static_cast<int>(pieces.size());
  for (int i = 0; i < m; ++i) {
    if (is_empty(pieces[i].region)) {
      std::ostringstream msg;
      msg << "piece " << i + 1 << " has an empty region";
      report.structural.push_back(msg.str());
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const auto& Si = pieces[i].region;
      const auto& Sj = pieces[j].region;
      PolyhedralSet both = Si.intersect(Sj);
      if (is_empty(both)) continue;

      if (auto w = interior_overlap(Si, Sj)) {
        report.overlaps.push_back({i + 1, j + 1, *w});
      } else if (auto w2 = interior_overlap(Sj, Si)) {
        report.overlaps.push_back({i + 1, j + 1, *w2});
      }

      const int n = f.dim();
      const int count = std::max(2 * n, (n + 1) * (n + 2) / 2) + 2;
      auto points = sample_points(both, count, seed + 7919u * static_cast<std::uint64_t>(i * m + j));
      ContinuityViolation worst;
      double worst_ratio = 1.0;
      for (const auto& x : points) {
        double fi = pieces[i].fn(x);
        double fj = pieces[j].fn(x);
        double gap = std::abs(fi - fj);
        double ratio = gap / (tol::kContinuity * (1.0 + std::abs(fi)));
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst = {i + 1, j + 1, x, gap};
        }
      }
      if (worst_ratio > 1.0) report.continuity.push_back(worst);
    }
  }
  return report;
}

}  // namespace plq
