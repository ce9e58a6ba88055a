#include "plq/recession.hpp"

namespace plq {

PolyhedralSet recession_cone(const PolyhedralSet& S) {
  if (is_empty(S)) throw std::invalid_argument("recession_cone: empty set");
  std::vector<HalfSpace> hs;
  hs.reserve(S.halfspaces().size());
  for (const auto& h : S.halfspaces()) hs.emplace_back(h.a, 0.0);
  return PolyhedralSet(S.dim(), std::move(hs));
}

RecessionReduction reduce(const PolyhedralSet& S) {
  PolyhedralSet cone = recession_cone(S);
  auto ball = chebyshev_center(S);
  Vector anchor = ball ? ball->center : *feasible_point(S);
  return {S, std::move(cone), std::move(anchor)};
}

ConicAnalysis threshold_polyhedral(const QuadraticFunction& f, const PolyhedralSet& S) {
  if (S.dim() != f.dim()) throw DimensionError("threshold_polyhedral: dimension mismatch");
  if (is_empty(S)) throw std::invalid_argument("threshold_polyhedral: empty region");
  if (is_bounded(S)) {
    ConicAnalysis out{0.0, 0.0, {}, {}, recession_cone(S), std::nullopt, true, {"bounded"}};
    return out;
  }
  return threshold_conic(f, recession_cone(S));
}

namespace {

std::vector<Vector> anchors(const PolyhedralSet& S) {
  std::vector<Vector> out = vertices(S);
  if (auto ball = chebyshev_center(S)) out.push_back(ball->center);
  return out;
}

bool anchored_witness(const QuadraticFunction& f, const PolyhedralSet& S, const ConicAnalysis& analysis,
                      const Vector& xbar) {
  for (const auto& xh : anchors(S)) {
    const Vector coeff = f.b() + f.A() * xh - analysis.r_bar * (xbar - xh);
    for (const auto& u : analysis.Phi.directions) {
      if (coeff.dot(u) < -tol::kSign) return true;
    }
  }
  return false;
}

}  // namespace

Membership classify_point_polyhedral(const QuadraticFunction& f, const PolyhedralSet& S,
                                     const ConicAnalysis& analysis, const Vector& xbar) {
  if (xbar.size() != f.dim()) throw DimensionError("classify_point_polyhedral: point has wrong dimension");
  if (analysis.bounded_region) return Membership::Member;
  if (analysis.full) return classify(analysis.full->domain, xbar);
  if (analysis.G > 0.0) return Membership::Member;
  // A cone through the origin is its own recession cone.
  if (S.is_cone()) return classify_direction_signs(analysis, f.b(), xbar);

  if (anchored_witness(f, S, analysis, xbar)) return Membership::NonMember;
  // Interior minimizers are eigenvectors of A + r̄I with eigenvalue 0, so the
  // anchored coefficient equals b − r̄x̄ and the cone verdict carries over.
  if (analysis.all_interior()) return classify_direction_signs(analysis, f.b(), xbar);
  return Membership::Indeterminate;
}

std::string piece_domain_class(const QuadraticFunction& f, const PolyhedralSet& S,
                               const ConicAnalysis& analysis) {
  if (analysis.bounded_region || analysis.G > 0.0) return "full";
  if (analysis.full) return domain_kind(analysis.full->domain);
  if (analysis.r_bar > 0.0) return "pointwise";
  // With r̄ = 0 none of the tests depend on x̄.
  switch (classify_point_polyhedral(f, S, analysis, Vector::Zero(f.dim()))) {
    case Membership::Member: return "full";
    case Membership::NonMember: return "empty";
    case Membership::Indeterminate: break;
  }
  return "pointwise";
}

}  // namespace plq
