#include "plq/spectral.hpp"

#include <cmath>
#include <sstream>

namespace plq {

SpectralDecomposition eig_decompose_sym(const Matrix& A) {
  if (A.rows() != A.cols() || A.rows() == 0) {
    throw DimensionError("eig_decompose_sym: matrix must be square and nonempty");
  }
  const double scale = 1.0 + A.cwiseAbs().maxCoeff();
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol::kSymmetry * scale) {
    throw std::invalid_argument("eig_decompose_sym: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (A + A.transpose()));
  if (solver.info() != Eigen::Success) throw std::runtime_error("eig_decompose_sym: solver failed");

  // Eigen returns ascending eigenvalues with eigenvectors as columns.
  const auto n = A.rows();
  SpectralDecomposition out{Matrix(n, n), Vector(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.lambdas(i) = solver.eigenvalues()(n - 1 - i);
    out.Q.row(i) = solver.eigenvectors().col(n - 1 - i).transpose();
  }
  return out;
}

FullDomainAnalysis analyze_full_domain(const QuadraticFunction& f, const FullDomainOptions& opts) {
  FullDomainAnalysis out{eig_decompose_sym(f.A()), 0.0, FullSpace{}, {}};
  const auto& spec = out.spectrum;
  const double tol = opts.eig_cluster_tol;
  const double lmin = spec.smallest();
  const auto n = spec.lambdas.size();
  const Vector qb = spec.Q * f.b();

  if (lmin > tol) {
    out.domain = FullSpace{};
    return out;
  }

  if (lmin < -tol) {
    out.r_bar = -lmin;
    AffineSubspace aff{Vector::Zero(n), {}};
    for (Eigen::Index i = 0; i < n; ++i) {
      const double li = spec.lambdas(i);
      if (std::abs(li - lmin) > tol * (1.0 + std::abs(lmin))) continue;
      const double rhs = -qb(i) / li;
      aff.equations.push_back({spec.eigenvector(static_cast<int>(i)), rhs});
      aff.basepoint += rhs * spec.eigenvector(static_cast<int>(i));
    }
    out.domain = std::move(aff);
    return out;
  }

  if (lmin < 0.0) {
    std::ostringstream msg;
    msg << "smallest eigenvalue " << lmin << " is within " << tol << " of zero; treated as 0";
    out.warnings.push_back(msg.str());
  }
  const double btol = tol * (1.0 + f.b().norm());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(spec.lambdas(i)) <= tol && std::abs(qb(i)) > btol) {
      out.domain = EmptyDomain{};
      return out;
    }
  }
  out.domain = FullSpace{};
  return out;
}

double threshold_full_domain(const QuadraticFunction& f, const FullDomainOptions& opts) {
  return analyze_full_domain(f, opts).r_bar;
}

EnvelopeDomain envelope_domain_full(const QuadraticFunction& f, const FullDomainOptions& opts) {
  return analyze_full_domain(f, opts).domain;
}

double envelope_value_full(const QuadraticFunction& f, double r, const Vector& xbar,
                           const FullDomainOptions& opts) {
  if (r < 0.0) throw std::invalid_argument("envelope_value_full: negative prox-parameter");
  if (xbar.size() != f.dim()) throw DimensionError("envelope_value_full: point has wrong dimension");
  const auto spec = eig_decompose_sym(f.A());
  const Vector ybar = spec.Q * xbar;
  const Vector qb = spec.Q * f.b();

  // In eigen-coordinates the objective separates into n one-dimensional problems
  //   (λᵢ + r)/2 yᵢ² + (b̃ᵢ − r ȳᵢ) yᵢ + r/2 ȳᵢ².
  double value = f.c();
  for (Eigen::Index i = 0; i < ybar.size(); ++i) {
    const double curv = spec.lambdas(i) + r;
    const double lin = qb(i) - r * ybar(i);
    const double curv_tol = opts.eig_cluster_tol * (1.0 + std::abs(spec.lambdas(i)));
    const double constant = 0.5 * r * ybar(i) * ybar(i);
    if (curv > curv_tol) {
      value += constant - lin * lin / (2.0 * curv);
    } else if (curv >= -curv_tol) {
      if (std::abs(lin) > 1e-9 * (1.0 + std::abs(qb(i)) + r * std::abs(ybar(i)))) return -kInf;
      value += constant;
    } else {
      return -kInf;
    }
  }
  return value;
}

}  // namespace plq
