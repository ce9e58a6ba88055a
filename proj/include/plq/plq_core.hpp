#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace plq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Numeric tolerances shared across modules.
namespace tol {
inline constexpr double kSymmetry = 1e-12;    // per-entry |A - A^T|
inline constexpr double kMembership = 1e-9;   // halfspace slack
inline constexpr double kContinuity = 1e-7;   // relative gap between pieces
inline constexpr double kEigCluster = 1e-9;   // eigenvalue equality / zero test
inline constexpr double kSign = 1e-9;         // strict sign band for H
}  // namespace tol

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// ½ xᵀAx + bᵀx + c with A symmetric.
class QuadraticFunction {
 public:
  QuadraticFunction(Matrix A, Vector b, double c);

  int dim() const { return static_cast<int>(b_.size()); }
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  double c() const { return c_; }

  double operator()(const Vector& x) const;

 private:
  Matrix A_;
  Vector b_;
  double c_;
};

/// {x : aᵀx <= beta}
struct HalfSpace {
  Vector a;
  double beta = 0.0;

  HalfSpace(Vector normal, double offset);
  double slack(const Vector& x) const { return beta - a.dot(x); }
};

class PolyhedralSet {
 public:
  explicit PolyhedralSet(int dim, std::vector<HalfSpace> halfspaces = {});

  static PolyhedralSet full_space(int dim) { return PolyhedralSet(dim); }

  int dim() const { return dim_; }
  const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
  bool is_cone() const;
  bool is_full_space() const { return halfspaces_.empty(); }
  bool contains(const Vector& x, double tolerance = tol::kMembership) const;

  /// Constraints of both sets, in order.
  PolyhedralSet intersect(const PolyhedralSet& other) const;
  PolyhedralSet translated(const Vector& shift) const;

  /// Stacked normals (rows) and offsets.
  Matrix normals() const;
  Vector offsets() const;

 private:
  int dim_;
  std::vector<HalfSpace> halfspaces_;
};

struct Piece {
  QuadraticFunction fn;
  PolyhedralSet region;
};

class PLQFunction {
 public:
  PLQFunction(int dim, std::vector<Piece> pieces);

  int dim() const { return dim_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }

 private:
  int dim_;
  std::vector<Piece> pieces_;
};

/// {x : qᵢᵀx = rhsᵢ for every equation}; no equations means ℝⁿ.
struct AffineSubspace {
  struct Equation {
    Vector normal;
    double rhs = 0.0;
  };
  Vector basepoint;
  std::vector<Equation> equations;

  bool contains(const Vector& x, double tolerance = 1e-9) const;
};

enum class Membership { Member, NonMember, Indeterminate };

std::string to_string(Membership m);

struct FullSpace {};
struct EmptyDomain {};
struct PointwiseDomain {
  std::function<Membership(const Vector&)> classify;
};

using EnvelopeDomain = std::variant<FullSpace, EmptyDomain, AffineSubspace, PointwiseDomain>;

Membership classify(const EnvelopeDomain& domain, const Vector& x);

/// "full" | "empty" | "affine" | "pointwise"
std::string domain_kind(const EnvelopeDomain& domain);

// ---------------------------------------------------------------------------
// Operations

/// Value of the first piece whose region contains x; +inf when none does.
double evaluate(const PLQFunction& f, const Vector& x);

// Piece indices in violations are 1-based.
struct ContinuityViolation {
  int first = 0;
  int second = 0;
  Vector witness;
  double gap = 0.0;
};

struct OverlapViolation {
  int first = 0;
  int second = 0;
  Vector witness;
};

struct ValidationReport {
  std::vector<ContinuityViolation> continuity;
  std::vector<OverlapViolation> overlaps;
  std::vector<std::string> structural;

  bool ok() const { return continuity.empty() && overlaps.empty() && structural.empty(); }
};

ValidationReport validate(const PLQFunction& f, std::uint64_t seed = 0x5eed);

bool is_empty(const PolyhedralSet& S);

/// Throws std::invalid_argument on an empty set.
bool is_bounded(const PolyhedralSet& S);

/// Any point of S; nullopt when S is empty.
std::optional<Vector> feasible_point(const PolyhedralSet& S);

struct ChebyshevBall {
  Vector center;
  double radius = 0.0;
};

/// Largest inscribed ball, radius capped at `radius_cap` so unbounded sets stay well posed.
std::optional<ChebyshevBall> chebyshev_center(const PolyhedralSet& S, double radius_cap = 1.0);

/// Vertices of S (dim <= 4 or few constraints); empty when S has no vertices.
std::vector<Vector> vertices(const PolyhedralSet& S);

/// Points of a nonempty S spread over its affine hull: the relative Chebyshev
/// centre, extreme points in random directions (clipped to a box of
/// half-width `box` around the centre) and random convex combinations.
std::vector<Vector> sample_points(const PolyhedralSet& S, int count, std::uint64_t seed,
                                  double box = 10.0);

/// Orthonormal basis (columns) of {d : Nd = 0} for the rows of N.
Matrix null_space(const Matrix& N, double rank_tol = 1e-10);

}  // namespace plq
