#pragma once

#include "plq/conic.hpp"
#include "plq/plq_core.hpp"

#include <string>

namespace plq {

struct RecessionReduction {
  PolyhedralSet original;
  PolyhedralSet cone;  // {d : aᵢᵀd <= 0}
  Vector anchor;       // a point of `original`
};

/// {d : aᵢᵀd <= 0 for every halfspace of S}. Throws std::invalid_argument on empty S.
PolyhedralSet recession_cone(const PolyhedralSet& S);

RecessionReduction reduce(const PolyhedralSet& S);

/// Threshold of f restricted to S. Bounded S gives r̄ = 0 with the "bounded" flag.
ConicAnalysis threshold_polyhedral(const QuadraticFunction& f, const PolyhedralSet& S);

/// Membership of x̄ in dom e_r̄(f + δ_S).
///
/// A minimizing direction u with (∇f(x̂) + r̄(x̂ − x̄))ᵀu < 0 at a point x̂ of S
/// proves divergence along x̂ + tu, so vertices of S and its Chebyshev centre
/// are tried as anchors.
Membership classify_point_polyhedral(const QuadraticFunction& f, const PolyhedralSet& S,
                                     const ConicAnalysis& analysis, const Vector& xbar);

/// "full" | "empty" | "affine" | "pointwise" for the piece on its own.
std::string piece_domain_class(const QuadraticFunction& f, const PolyhedralSet& S,
                               const ConicAnalysis& analysis);

}  // namespace plq
