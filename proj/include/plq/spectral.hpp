#pragma once

#include "plq/plq_core.hpp"

#include <string>
#include <vector>

namespace plq {

/// A = Qᵀ diag(lambdas) Q with the rows of Q orthonormal eigenvectors and
/// lambdas sorted non-increasing.
struct SpectralDecomposition {
  Matrix Q;
  Vector lambdas;

  Vector eigenvector(int i) const { return Q.row(i).transpose(); }
  double smallest() const { return lambdas(lambdas.size() - 1); }
};

/// Throws std::invalid_argument on a non-symmetric or non-square matrix.
SpectralDecomposition eig_decompose_sym(const Matrix& A);

struct FullDomainOptions {
  double eig_cluster_tol = tol::kEigCluster;
};

/// Threshold and envelope domain of a quadratic on all of ℝⁿ.
struct FullDomainAnalysis {
  SpectralDecomposition spectrum;
  double r_bar = 0.0;
  EnvelopeDomain domain;
  std::vector<std::string> warnings;
};

FullDomainAnalysis analyze_full_domain(const QuadraticFunction& f, const FullDomainOptions& opts = {});

/// max{0, -λₙ}; independent of b and c.
double threshold_full_domain(const QuadraticFunction& f, const FullDomainOptions& opts = {});

EnvelopeDomain envelope_domain_full(const QuadraticFunction& f, const FullDomainOptions& opts = {});

/// Exact e_r f(x̄) for f on ℝⁿ, -inf where the infimum diverges.
double envelope_value_full(const QuadraticFunction& f, double r, const Vector& xbar,
                           const FullDomainOptions& opts = {});

}  // namespace plq
