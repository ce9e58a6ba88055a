#include "plq/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace plq::lp {
namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  Eigen::MatrixXd T;  // rows 0..m-1 constraints, row m objective; last column rhs
  std::vector<int> basis;
  int rows = 0;
  int cols = 0;  // structural columns (without rhs)

  double& rhs(int i) { return T(i, cols); }

  void pivot(int r, int c) {
    T.row(r) /= T(r, c);
    for (int i = 0; i <= rows; ++i) {
      if (i != r && T(i, c) != 0.0) T.row(i) -= T(i, c) * T.row(r);
    }
    basis[r] = c;
  }

  void set_objective(const Eigen::VectorXd& cost) {
    T.row(rows).setZero();
    T.row(rows).head(cols) = cost.transpose();
    for (int i = 0; i < rows; ++i) {
      double cb = cost(basis[i]);
      if (cb != 0.0) T.row(rows) -= cb * T.row(i);
    }
  }

  // Returns false when the objective is unbounded below over the allowed columns.
  bool run(int allowed_cols) {
    const int max_iter = 50 * (rows + cols + 10);
    for (int iter = 0; iter < max_iter; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (T(rows, j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows; ++i) {
        double a = T(i, enter);
        if (a > kPivotTol) {
          double ratio = T(i, cols) / a;
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

Result minimize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  Result result;
  result.x = Eigen::VectorXd::Zero(n);

  if (m == 0) {
    if (c.cwiseAbs().maxCoeff() > 0.0) {
      result.status = Status::Unbounded;
    } else {
      result.status = Status::Optimal;
    }
    return result;
  }

  // Columns: p (n), q (n), slack (m), artificial (one per row with negative rhs).
  std::vector<int> art_row;
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0.0) art_row.push_back(i);
  }
  const int n_art = static_cast<int>(art_row.size());
  const int structural = 2 * n + m;

  Tableau tab;
  tab.rows = m;
  tab.cols = structural + n_art;
  tab.T = Eigen::MatrixXd::Zero(m + 1, tab.cols + 1);
  tab.basis.assign(m, -1);

  int next_art = structural;
  for (int i = 0; i < m; ++i) {
    double sign = b(i) < 0.0 ? -1.0 : 1.0;
    tab.T.row(i).segment(0, n) = sign * A.row(i);
    tab.T.row(i).segment(n, n) = -sign * A.row(i);
    tab.T(i, 2 * n + i) = sign;
    tab.T(i, tab.cols) = sign * b(i);
    if (sign < 0.0) {
      tab.T(i, next_art) = 1.0;
      tab.basis[i] = next_art++;
    } else {
      tab.basis[i] = 2 * n + i;
    }
  }

  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(tab.cols);
    phase1.tail(n_art).setOnes();
    tab.set_objective(phase1);
    tab.run(tab.cols);
    double infeasibility = -tab.T(m, tab.cols);
    if (infeasibility > 1e-9 * scale) {
      result.status = Status::Infeasible;
      return result;
    }
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < structural) continue;
      for (int j = 0; j < structural; ++j) {
        if (std::abs(tab.T(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(tab.cols);
  phase2.head(n) = c;
  phase2.segment(n, n) = -c;
  tab.set_objective(phase2);
  if (!tab.run(structural)) {
    result.status = Status::Unbounded;
    return result;
  }

  Eigen::VectorXd values = Eigen::VectorXd::Zero(tab.cols);
  for (int i = 0; i < m; ++i) values(tab.basis[i]) = tab.T(i, tab.cols);
  result.x = values.head(n) - values.segment(n, n);
  result.objective = c.dot(result.x);
  result.status = Status::Optimal;
  return result;
}

}  // namespace plq::lp
