#pragma once

#include "plq/plq_core.hpp"

#include <string>
#include <vector>

namespace plq {

/// Brute-force envelope evaluation over nested boxes centred at x̄.
struct OracleConfig {
  double base_radius = 4.0;
  double growth = 2.0;
  int rounds = 16;
  int grid_density = 0;  // points per axis; 0 picks 64 (n <= 2), 16 (n = 3) or 8
  // Rounds run before any verdict; 0 means all of them. Near the threshold the
  // quadratic term only dominates the linear one at radius ~|H|/|G + r|, so an
  // early verdict can go either way.
  int min_rounds = 0;
};

enum class VerdictKind { Finite, DivergentNegInf, Inconclusive };

std::string to_string(VerdictKind kind);

struct OracleVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  double value = 0.0;  // best objective found
  Vector argmin;
  Vector ray;  // unit direction from x̄ to the last minimizer, for divergent verdicts
  double radius_used = 0.0;
  std::vector<double> history;  // best value per round
};

/// Throws std::invalid_argument for r < 0.
OracleVerdict envelope_numeric(const PLQFunction& f, double r, const Vector& xbar, const OracleConfig& cfg = {});

struct ThresholdBracket {
  double lo = 0.0;
  double hi = 0.0;
  bool found = false;         // a finite probe was located below 2^10
  bool inconclusive = false;  // bisection stopped on inconclusive probes
  int probes = 0;

  bool contains(double r, double slack = 0.0) const { return found && r >= lo - slack && r <= hi + slack; }
};

ThresholdBracket threshold_bracket(const PLQFunction& f, const Vector& xbar, double tol,
                                   const OracleConfig& cfg = {});

}  // namespace plq
