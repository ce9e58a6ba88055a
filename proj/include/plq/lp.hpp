#pragma once

#include <Eigen/Dense>

namespace plq::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// Dense two-phase simplex with Bland's rule for
///   minimize cᵀx  subject to  A x <= b,  x free.
/// Intended for the small systems that arise here (tens of rows, a few columns).
Result minimize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

inline Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                       const Eigen::VectorXd& b) {
  Result r = minimize(-c, A, b);
  r.objective = -r.objective;
  return r;
}

}  // namespace plq::lp
