#include "plq/aggregate.hpp"

#include "plq/recession.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

namespace plq {

namespace {

std::string describe(const ValidationReport& r) {
  std::ostringstream os;
  os << "invalid PLQ function:";
  for (const auto& s : r.structural) os << ' ' << s << ';';
  for (const auto& v : r.overlaps) os << " pieces " << v.first << " and " << v.second << " overlap;";
  for (const auto& v : r.continuity) {
    os << " pieces " << v.first << " and " << v.second << " disagree by " << v.gap << ';';
  }
  return os.str();
}

}  // namespace

ValidationFailure::ValidationFailure(ValidationReport report)
    : std::runtime_error(describe(report)), report_(std::move(report)) {}

bool ThresholdReport::is_active(int index) const {
  return std::find(active_set.begin(), active_set.end(), index) != active_set.end();
}

bool same_summary(const ThresholdReport& a, const ThresholdReport& b) {
  return a.r_bar == b.r_bar && a.pieces == b.pieces && a.active_set == b.active_set &&
         a.overall_domain == b.overall_domain && a.warnings == b.warnings;
}

ThresholdReport threshold_plq(const PLQFunction& f) {
  ValidationReport v = validate(f);
  if (!v.ok()) throw ValidationFailure(std::move(v));
  return threshold_plq_unchecked(f);
}

ThresholdReport threshold_plq_unchecked(const PLQFunction& f) {
  ThresholdReport report;
  const auto& pieces = f.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const int index = static_cast<int>(i) + 1;
    ConicAnalysis a = threshold_polyhedral(pieces[i].fn, pieces[i].region);
    PieceSummary s;
    s.index = index;
    s.r_bar = a.r_bar;
    if (!a.bounded_region) {
      s.G = a.G;
      s.phi = a.Phi.directions;
    }
    s.domain = piece_domain_class(pieces[i].fn, pieces[i].region, a);
    for (const auto& flag : a.flags) {
      if (flag != "bounded") report.warnings.push_back("piece " + std::to_string(index) + ": " + flag);
    }
    report.r_bar = std::max(report.r_bar, a.r_bar);
    report.pieces.push_back(std::move(s));
    report.analyses.push_back(std::move(a));
  }
  const double band = 1e-9 * (1.0 + report.r_bar);
  for (const auto& s : report.pieces) {
    if (report.r_bar - s.r_bar <= band) report.active_set.push_back(s.index);
  }
  report.overall_domain = domain_kind(overall_domain(report, f));
  if (report.r_bar > 0.0 && report.overall_domain == "full") {
    report.warnings.push_back("positive threshold with a full envelope domain; review this instance");
  }
  return report;
}

std::vector<PieceVerdict> classify_active_pieces(const ThresholdReport& report, const PLQFunction& f,
                                                 const Vector& xbar) {
  if (xbar.size() != f.dim()) throw DimensionError("classify_point_plq: point has wrong dimension");
  std::vector<PieceVerdict> out;
  for (int index : report.active_set) {
    const auto i = static_cast<std::size_t>(index - 1);
    const Piece& p = f.pieces()[i];
    out.push_back({index, classify_point_polyhedral(p.fn, p.region, report.analyses[i], xbar)});
  }
  return out;
}

Membership classify_point_plq(const ThresholdReport& report, const PLQFunction& f, const Vector& xbar) {
  bool all_member = true;
  for (const auto& v : classify_active_pieces(report, f, xbar)) {
    if (v.membership == Membership::NonMember) return Membership::NonMember;
    if (v.membership != Membership::Member) all_member = false;
  }
  return all_member ? Membership::Member : Membership::Indeterminate;
}

bool bounded_below_shortcut(const ThresholdReport& report) {
  if (report.r_bar != 0.0) return false;
  return std::all_of(report.active_set.begin(), report.active_set.end(),
                     [&](int i) { return report.pieces[static_cast<std::size_t>(i - 1)].domain == "full"; });
}

EnvelopeDomain overall_domain(const ThresholdReport& report, const PLQFunction& f) {
  for (int i : report.active_set) {
    if (report.pieces[static_cast<std::size_t>(i - 1)].domain == "empty") return EmptyDomain{};
  }
  if (bounded_below_shortcut(report)) return FullSpace{};
  if (report.active_set.size() == 1) {
    const auto& a = report.analyses[static_cast<std::size_t>(report.active_set.front() - 1)];
    if (a.full && std::holds_alternative<AffineSubspace>(a.full->domain) && f.size() == 1) {
      return a.full->domain;
    }
  }
  auto shared = std::make_shared<std::pair<ThresholdReport, PLQFunction>>(report, f);
  return PointwiseDomain{[shared](const Vector& x) { return classify_point_plq(shared->first, shared->second, x); }};
}

}  // namespace plq
