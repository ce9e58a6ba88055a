#include "plq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace plq {

std::string to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Finite: return "Finite";
    case VerdictKind::DivergentNegInf: return "DivergentNegInf";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

struct Objective {
  const QuadraticFunction& fn;
  double r;
  const Vector& xbar;

  double operator()(const Vector& y) const { return fn(y) + 0.5 * r * (y - xbar).squaredNorm(); }
};

PolyhedralSet boxed(const PolyhedralSet& S, const Vector& center, double R) {
  std::vector<HalfSpace> hs = S.halfspaces();
  const auto n = center.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector e = Vector::Zero(n);
    e(j) = 1.0;
    hs.emplace_back(e, center(j) + R);
    hs.emplace_back(-e, R - center(j));
  }
  return PolyhedralSet(static_cast<int>(n), std::move(hs));
}

struct Best {
  double value = kInf;
  Vector point;

  void offer(double v, const Vector& y) {
    if (v < value) {
      value = v;
      point = y;
    }
  }
};

// Stationary points of the objective on every face of the boxed region that is
// cut out by at most n active constraints.
void face_candidates(const Objective& obj, const PolyhedralSet& set, double feas_tol, Best& best) {
  const int n = set.dim();
  const Matrix H = obj.fn.A() + obj.r * Matrix::Identity(n, n);
  const Vector g = obj.fn.b() - obj.r * obj.xbar;
  const auto& hs = set.halfspaces();
  const int m = static_cast<int>(hs.size());
  std::vector<int> active;

  auto solve_face = [&]() {
    const auto k = static_cast<Eigen::Index>(active.size());
    Vector y0 = Vector::Zero(n);
    Matrix N = Matrix::Identity(n, n);
    if (k > 0) {
      Matrix M(k, n);
      Vector beta(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        M.row(i) = hs[static_cast<std::size_t>(active[static_cast<std::size_t>(i)])].a.transpose();
        beta(i) = hs[static_cast<std::size_t>(active[static_cast<std::size_t>(i)])].beta;
      }
      y0 = M.completeOrthogonalDecomposition().solve(beta);
      if ((M * y0 - beta).norm() > 1e-9 * (1.0 + beta.norm())) return;
      N = null_space(M);
    }
    Vector y = y0;
    if (N.cols() > 0) {
      const Matrix Hz = N.transpose() * H * N;
      const Vector gz = N.transpose() * (H * y0 + g);
      y = y0 - N * Hz.completeOrthogonalDecomposition().solve(gz);
    }
    if (set.contains(y, feas_tol)) best.offer(obj(y), y);
  };

  auto recurse = [&](auto&& self, int start) -> void {
    solve_face();
    if (static_cast<int>(active.size()) == n) return;
    for (int i = start; i < m; ++i) {
      active.push_back(i);
      self(self, i + 1);
      active.pop_back();
    }
  };
  recurse(recurse, 0);
}

std::vector<Vector> search_directions(const PolyhedralSet& region) {
  const int n = region.dim();
  std::vector<Vector> dirs;
  auto add = [&](Vector d) {
    if (d.norm() < 1e-12) return;
    d.normalize();
    dirs.push_back(d);
    dirs.push_back(-d);
  };
  for (int j = 0; j < n; ++j) add(Vector::Unit(n, j));
  for (const auto& h : region.halfspaces()) {
    const Vector a = h.a.normalized();
    for (int j = 0; j < n; ++j) add(Vector::Unit(n, j) - a(j) * a);
  }
  return dirs;
}

Vector pattern_search(const Objective& obj, const PolyhedralSet& set, const std::vector<Vector>& dirs,
                      Vector y, double step, double min_step, double feas_tol) {
  double fy = obj(y);
  for (int iter = 0; iter < 4000 && step > min_step; ++iter) {
    bool improved = false;
    for (const auto& d : dirs) {
      const Vector cand = y + step * d;
      if (!set.contains(cand, feas_tol)) continue;
      const double fc = obj(cand);
      if (fc < fy) {
        y = cand;
        fy = fc;
        improved = true;
        break;
      }
    }
    step = improved ? step * 2.0 : step * 0.5;
  }
  return y;
}

double structure_radius(const PLQFunction& f, const Vector& xbar) {
  double R = 0.0;
  for (const auto& p : f.pieces()) {
    for (const auto& v : vertices(p.region)) R = std::max(R, (v - xbar).lpNorm<Eigen::Infinity>());
    if (auto ball = chebyshev_center(p.region)) {
      R = std::max(R, (ball->center - xbar).lpNorm<Eigen::Infinity>());
    }
  }
  return R;
}

// noise: rounding error of evaluating the objective at the minimizers compared.
bool stable(double prev, double cur, double noise) {
  return std::abs(cur - prev) <= 1e-6 * std::max(1.0, std::abs(cur)) + noise;
}

// Terms of size ~(‖A‖ + r)‖y‖² cancel in the objective, so values far from
// the origin carry absolute error proportional to that size.
double evaluation_noise(const PLQFunction& f, double r, const Vector& y) {
  double a = 0.0, b = 0.0;
  for (const auto& p : f.pieces()) {
    a = std::max(a, p.fn.A().cwiseAbs().maxCoeff());
    b = std::max(b, p.fn.b().cwiseAbs().maxCoeff());
  }
  const double t = 1.0 + y.norm();
  const double n = static_cast<double>(f.dim());
  return 64.0 * std::numeric_limits<double>::epsilon() * ((n * a + r) * t * t + n * b * t);
}

bool big_drop(double prev, double cur) { return prev - cur > std::max(10.0, 0.5 * std::abs(prev)); }

}  // namespace

OracleVerdict envelope_numeric(const PLQFunction& f, double r, const Vector& xbar, const OracleConfig& cfg) {
  if (r < 0.0) throw std::invalid_argument("envelope_numeric: negative prox-parameter");
  const int n = f.dim();
  if (xbar.size() != n) throw DimensionError("envelope_numeric: point has wrong dimension");
  const int density = cfg.grid_density > 0 ? cfg.grid_density : (n <= 2 ? 64 : n == 3 ? 16 : 8);
  const double finite_radius = 2.0 * structure_radius(f, xbar);
  const int min_rounds = cfg.min_rounds > 0 ? std::min(cfg.min_rounds, cfg.rounds) : cfg.rounds;

  const auto& pieces = f.pieces();
  std::vector<std::vector<Vector>> dirs;
  for (const auto& p : pieces) dirs.push_back(search_directions(p.region));
  std::vector<Best> carried(pieces.size());

  OracleVerdict out;
  std::vector<double> noise;
  double R = cfg.base_radius;
  for (int k = 0; k < cfg.rounds; ++k, R *= cfg.growth) {
    const double feas_tol = 1e-12 * std::max(1.0, R);
    Best round_best;
    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
      const Piece& p = pieces[pi];
      const Objective obj{p.fn, r, xbar};
      const PolyhedralSet set = boxed(p.region, xbar, R);
      if (is_empty(set)) continue;

      // Grid scan; keep the three best points as polish starts.
      std::vector<std::pair<double, Vector>> top;
      std::vector<int> idx(static_cast<std::size_t>(n), 0);
      const double h = 2.0 * R / (density - 1);
      while (true) {
        Vector y(n);
        for (int j = 0; j < n; ++j) y(j) = xbar(j) - R + h * idx[static_cast<std::size_t>(j)];
        if (p.region.contains(y, feas_tol)) {
          const double v = obj(y);
          if (top.size() < 3 || v < top.back().first) {
            top.emplace_back(v, y);
            std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            if (top.size() > 3) top.pop_back();
          }
        }
        int j = 0;
        while (j < n && ++idx[static_cast<std::size_t>(j)] == density) idx[static_cast<std::size_t>(j++)] = 0;
        if (j == n) break;
      }

      Best piece_best;
      std::vector<Vector> starts;
      for (const auto& [v, y] : top) starts.push_back(y);
      if (std::isfinite(carried[pi].value)) starts.push_back(carried[pi].point);
      if (auto ball = chebyshev_center(set)) starts.push_back(ball->center);
      for (const auto& s : starts) {
        if (!set.contains(s, feas_tol)) continue;
        const Vector y = pattern_search(obj, set, dirs[pi], s, h, 1e-10 * std::max(1.0, R), feas_tol);
        piece_best.offer(obj(y), y);
      }
      if (n <= 3) face_candidates(obj, set, feas_tol, piece_best);

      if (std::isfinite(piece_best.value)) {
        carried[pi] = piece_best;
        round_best.offer(piece_best.value, piece_best.point);
      }
    }

    out.history.push_back(round_best.value);
    noise.push_back(std::isfinite(round_best.value) ? evaluation_noise(f, r, round_best.point) : 0.0);
    out.value = round_best.value;
    out.argmin = round_best.point;
    out.radius_used = R;

    const auto& hist = out.history;
    const std::size_t m = hist.size();
    if (static_cast<int>(m) < min_rounds) continue;
    if (m >= 4 && big_drop(hist[m - 4], hist[m - 3]) && big_drop(hist[m - 3], hist[m - 2]) &&
        big_drop(hist[m - 2], hist[m - 1])) {
      out.kind = VerdictKind::DivergentNegInf;
      const Vector d = out.argmin - xbar;
      out.ray = d.norm() > 0.0 ? Vector(d.normalized()) : d;
      return out;
    }
    if (m >= 3 && R >= finite_radius && stable(hist[m - 2], hist[m - 1], std::max(noise[m - 2], noise[m - 1])) &&
        stable(hist[m - 3], hist[m - 2], std::max(noise[m - 3], noise[m - 2]))) {
      out.kind = VerdictKind::Finite;
      return out;
    }
  }
  out.kind = VerdictKind::Inconclusive;
  return out;
}

ThresholdBracket threshold_bracket(const PLQFunction& f, const Vector& xbar, double tol, const OracleConfig& cfg) {
  if (!(tol > 0.0)) throw std::invalid_argument("threshold_bracket: tolerance must be positive");
  ThresholdBracket out;
  auto probe = [&](double r) {
    ++out.probes;
    return envelope_numeric(f, r, xbar, cfg).kind;
  };

  if (probe(0.0) == VerdictKind::Finite) {
    out.found = true;
    return out;
  }
  for (int j = -6; j <= 10; ++j) {
    const double r = std::ldexp(1.0, j);
    const VerdictKind v = probe(r);
    if (v == VerdictKind::Finite) {
      out.hi = r;
      out.found = true;
      break;
    }
    if (v == VerdictKind::DivergentNegInf) out.lo = r;
  }
  if (!out.found) return out;

  while (out.hi - out.lo > tol) {
    const double mid = 0.5 * (out.lo + out.hi);
    const VerdictKind v = probe(mid);
    if (v == VerdictKind::Finite) {
      out.hi = mid;
      continue;
    }
    if (v == VerdictKind::DivergentNegInf) {
      out.lo = mid;
      continue;
    }
    // Step around the inconclusive probe before giving up.
    const double upper = 0.5 * (mid + out.hi);
    const double lower = 0.5 * (out.lo + mid);
    bool progressed = false;
    if (probe(upper) == VerdictKind::Finite) {
      out.hi = upper;
      progressed = true;
    }
    if (probe(lower) == VerdictKind::DivergentNegInf) {
      out.lo = lower;
      progressed = true;
    }
    if (!progressed) {
      out.inconclusive = true;
      break;
    }
  }
  return out;
}

}  // namespace plq
