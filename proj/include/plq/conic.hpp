#pragma once

#include "plq/plq_core.hpp"
#include "plq/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plq {

// ---------------------------------------------------------------------------
// n-spherical coordinates
//
//   x₁ = ρ cos φ₁,  xᵢ = ρ Sin_{i-1}φ cos φᵢ,  xₙ = ρ Sin_{n-1}φ
//
// with φ₁ ∈ [0, 2π), φ₂..φₙ₋₁ ∈ [0, π] and the convention φₙ = 0.

struct SphericalPoint {
  double rho = 0.0;
  Vector phi;  // n-1 angles
};

/// Requires n >= 2.
SphericalPoint from_cartesian(const Vector& x);
Vector to_cartesian(const SphericalPoint& p);

/// Unit vector u(φ) with uᵢ = Sin_{i-1}φ cos φᵢ.
Vector unit_direction(const Vector& phi);

/// ∏_{i<=k} sin φᵢ; Sin₀ = 1. Throws std::out_of_range unless 0 <= k <= phi.size().
double sin_k(const Vector& phi, int k);

/// G(φ) = Σᵢⱼ aᵢⱼ Sin_{i-1}φ cos φᵢ Sin_{j-1}φ cos φⱼ  (= u(φ)ᵀ A u(φ)).
double g_of_phi(const Matrix& A, const Vector& phi);

/// H_r(ρ̄, φ̄; φ) with (ρ̄, φ̄) the spherical coordinates of x̄  (= (b − r x̄)ᵀ u(φ)).
double h_r(const Vector& b, double r, const Vector& xbar, const Vector& phi);

/// K_r(ρ̄, φ̄) = c + (ρ̄² r / 2) Σ Sin²_{i-1}φ̄ cos² φ̄ᵢ  (= c + r/2 ‖x̄‖²).
double k_r(double c, double r, const Vector& xbar);

// ---------------------------------------------------------------------------
// Minimizing directions of a quadratic form over a cone

enum class DirectionKind { Isolated, NonIsolated };

struct DirectionSet {
  DirectionKind kind = DirectionKind::Isolated;
  std::vector<Vector> directions;  // unit vectors inside the cone

  bool isolated() const { return kind == DirectionKind::Isolated; }
};

struct ConeMinimum {
  double G = 0.0;
  DirectionSet Phi;
  double grid_G = 0.0;  // independent angular-grid estimate
  std::vector<std::string> flags;
};

/// G = min{uᵀAu : u ∈ cone, ‖u‖ = 1} and all minimizers.
/// Throws std::invalid_argument for non-cone input or the trivial cone {0}.
ConeMinimum min_form_over_cone(const Matrix& A, const PolyhedralSet& cone);

/// Dense angular scan of uᵀAu over the cone (plus local refinement).
/// Returns +inf when no sampled direction lies in the cone.
double grid_min_form_over_cone(const Matrix& A, const PolyhedralSet& cone, int samples_per_angle = 720);

struct ConicAnalysis {
  double G = 0.0;
  double r_bar = 0.0;
  DirectionSet Phi;
  std::vector<bool> interior_flags;
  PolyhedralSet cone;
  std::optional<FullDomainAnalysis> full;  // set when the cone is all of ℝⁿ
  bool bounded_region = false;             // set by the recession reduction for bounded regions
  std::vector<std::string> flags;

  bool full_space() const { return full.has_value(); }
  bool all_interior() const;
};

ConicAnalysis threshold_conic(const QuadraticFunction& f, const PolyhedralSet& cone);

/// Sign test of H = (b − r̄x̄)ᵀu over the minimizing directions.
Membership classify_direction_signs(const ConicAnalysis& analysis, const Vector& b, const Vector& xbar);

Membership classify_point_conic(const ConicAnalysis& analysis, const QuadraticFunction& f, const Vector& xbar);

struct DomainSplit {
  bool dom_nonempty = false;
  bool dom_proper = false;
  Vector witness;   // b / r̄, inside the envelope domain
  Vector outside;   // a point shown to lie outside it
};

/// Requires G < 0; throws std::invalid_argument otherwise.
DomainSplit nonempty_nontrivial_check(const ConicAnalysis& analysis, const QuadraticFunction& f);

}  // namespace plq
