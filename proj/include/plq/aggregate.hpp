#pragma once

#include "plq/conic.hpp"
#include "plq/plq_core.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plq {

struct PieceSummary {
  int index = 0;  // 1-based
  double r_bar = 0.0;
  std::optional<double> G;  // absent for bounded regions
  std::string domain;       // "full" | "empty" | "affine" | "pointwise"
  std::optional<std::vector<Vector>> phi;

  bool operator==(const PieceSummary&) const = default;
};

struct ThresholdReport {
  double r_bar = 0.0;
  std::vector<PieceSummary> pieces;
  std::vector<int> active_set;  // 1-based piece indices
  std::string overall_domain;
  std::vector<std::string> warnings;

  // Full per-piece analyses; not serialized.
  std::vector<ConicAnalysis> analyses;

  bool is_active(int index) const;
};

/// Serialized fields only.
bool same_summary(const ThresholdReport& a, const ThresholdReport& b);

class ValidationFailure : public std::runtime_error {
 public:
  explicit ValidationFailure(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Throws ValidationFailure when f does not validate.
ThresholdReport threshold_plq(const PLQFunction& f);

/// Same analysis without running validation first.
ThresholdReport threshold_plq_unchecked(const PLQFunction& f);

struct PieceVerdict {
  int index = 0;
  Membership membership = Membership::Indeterminate;
};

/// Verdicts of the active pieces, in index order.
std::vector<PieceVerdict> classify_active_pieces(const ThresholdReport& report, const PLQFunction& f,
                                                 const Vector& xbar);

Membership classify_point_plq(const ThresholdReport& report, const PLQFunction& f, const Vector& xbar);

/// r̄ = 0 and every active piece has a full domain.
bool bounded_below_shortcut(const ThresholdReport& report);

EnvelopeDomain overall_domain(const ThresholdReport& report, const PLQFunction& f);

}  // namespace plq
