#include "elastens/meigen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "elastens/error.hpp"

namespace elastens {

void canonicalize_signs(MEigenpair& p) {
  auto fix = [](Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > 1e-12) {
        if (v[i] < 0) v = -v;
        return;
      }
    }
  };
  fix(p.x);
  fix(p.y);
  // No negative zeros in reports.
  p.x.array() += 0.0;
  p.y.array() += 0.0;
  p.lambda += 0.0;
}

double kkt_residual(const ElasticityTensor& a, const Vector& x, const Vector& y,
                    double lambda) {
  const double rx = (contract_xyy(a, x, y) - lambda * x).norm();
  const double ry = (contract_xxy(a, x, y) - lambda * y).norm();
  return std::max(rx, ry);
}

Vector kkt_system(const ElasticityTensor& a, const Vector& x, const Vector& y) {
  const int n = a.dim();
  const Vector g = contract_xyy(a, x, y);
  const Vector h = contract_xxy(a, x, y);
  const double lambda = x.dot(g);
  Vector f(2 * n + 2);
  f.head(n) = g - lambda * x;
  f.segment(n, n) = h - lambda * y;
  f[2 * n] = 0.5 * (x.squaredNorm() - 1.0);
  f[2 * n + 1] = 0.5 * (y.squaredNorm() - 1.0);
  return f;
}

Matrix kkt_jacobian(const ElasticityTensor& a, const Vector& x, const Vector& y) {
  const int n = a.dim();
  const Matrix mx = partial_xx(a, x);
  const Matrix my = partial_yy(a, y);
  const Vector g = my * x;
  const Vector h = mx * y;
  const double lambda = x.dot(g);
  // c(i,m) = sum_jk a_ijkm x_j y_k
  Matrix c = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m) {
      double s = 0.0;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) s += a(i, j, k, m) * x[j] * y[k];
      c(i, m) = s;
    }
  const Matrix id = Matrix::Identity(n, n);
  Matrix jac = Matrix::Zero(2 * n + 2, 2 * n);
  jac.block(0, 0, n, n) = my - lambda * id - 2.0 * x * g.transpose();
  jac.block(0, n, n, n) = 2.0 * c - 2.0 * x * h.transpose();
  jac.block(n, 0, n, n) = 2.0 * c.transpose() - 2.0 * y * g.transpose();
  jac.block(n, n, n, n) = mx - lambda * id - 2.0 * y * h.transpose();
  jac.block(2 * n, 0, 1, n) = x.transpose();
  jac.block(2 * n + 1, n, 1, n) = y.transpose();
  return jac;
}

std::optional<RefineResult> refine_kkt(const ElasticityTensor& a, const Vector& x0,
                                       const Vector& y0, double tol, int max_iter) {
  const int n = a.dim();
  const double scale = std::max(1.0, a.max_abs());
  const double target = tol * scale;
  Vector x = x0.normalized();
  Vector y = y0.normalized();
  RefineResult out;
  bool converged = false;
  for (int it = 0; it <= max_iter; ++it) {
    const Vector f = kkt_system(a, x, y);
    if (!f.allFinite()) return std::nullopt;
    out.iterations = it;
    if (f.lpNorm<Eigen::Infinity>() <= target) {
      converged = true;
      break;
    }
    if (it == max_iter) break;
    const Matrix jac = kkt_jacobian(a, x, y);
    const Vector step = jac.completeOrthogonalDecomposition().solve(-f);
    if (!step.allFinite()) return std::nullopt;
    x += step.head(n);
    y += step.tail(n);
    const double nx = x.norm(), ny = y.norm();
    if (nx < 1e-3 || ny < 1e-3 || nx > 1e3 || ny > 1e3) return std::nullopt;
  }
  if (!converged) return std::nullopt;

  x.normalize();
  y.normalize();
  out.pair.x = x;
  out.pair.y = y;
  out.pair.lambda = contract_xxyy(a, x, y);
  out.pair.residual = kkt_residual(a, x, y, out.pair.lambda);
  if (out.pair.residual > 100.0 * target) return std::nullopt;
  const Eigen::JacobiSVD<Matrix> svd(kkt_jacobian(a, x, y));
  out.smallest_singular_value = svd.singularValues()[2 * n - 1];
  canonicalize_signs(out.pair);
  return out;
}

void require_nonnegative(const ElasticityTensor& b) {
  const int n = b.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (b(i, j, k, l) < -1e-14) {
            std::ostringstream os;
            os << "entry (" << i + 1 << "," << j + 1 << "," << k + 1 << "," << l + 1
               << ") = " << b(i, j, k, l) << " is negative";
            throw Error(ErrorCode::NotNonnegative, os.str());
          }
}

namespace {

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

struct Start {
  Vector x, y;
};

std::vector<Start> make_starts(int n, const PowerOptions& opts, bool nonneg) {
  std::vector<Start> starts;
  starts.push_back({Vector::Ones(n).normalized(), Vector::Ones(n).normalized()});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      starts.push_back({Vector::Unit(n, i), Vector::Unit(n, k)});
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < opts.restarts; ++r) {
    Vector x(n), y(n);
    for (int i = 0; i < n; ++i) x[i] = normal(rng);
    for (int i = 0; i < n; ++i) y[i] = normal(rng);
    if (nonneg) {
      x = x.cwiseAbs();
      y = y.cwiseAbs();
    }
    if (x.norm() < 1e-12) x = Vector::Ones(n);
    if (y.norm() < 1e-12) y = Vector::Ones(n);
    starts.push_back({x.normalized(), y.normalized()});
  }
  return starts;
}

struct RunOutcome {
  MEigenpair pair;
  int iterations = 0;
  bool converged = false;
  bool polished = false;
};

// One start of the shifted alternating power iteration; the shift enters the
// updates only, the reported lambda is that of the unshifted tensor.
RunOutcome run_start(const ElasticityTensor& a, double tau, const Start& s,
                     const PowerOptions& opts, bool nonneg) {
  const double scale = std::max(1.0, a.max_abs());
  const double res_tol = opts.tol * scale;
  Vector x = s.x, y = s.y;
  Matrix my = partial_yy(a, y);
  double lambda = contract_xxyy(a, x, y);
  RunOutcome out;
  double residual = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    x = (my * x + tau * x).normalized();
    const Matrix mx = partial_xx(a, x);
    const Vector h = mx * y + tau * y;
    y = h.normalized();
    const Vector hy = mx * y;
    const double next = y.dot(hy);
    my = partial_yy(a, y);
    const Vector g = my * x;
    residual = std::max((hy - next * y).norm(), (g - next * x).norm());
    const double change = std::abs(next - lambda);
    lambda = next;
    out.iterations = it;
    if (change <= opts.tol * std::max(1.0, std::abs(lambda)) && residual <= res_tol) {
      out.converged = true;
      break;
    }
  }
  out.pair = MEigenpair{lambda, x, y, residual, false};
  if (!out.converged) {
    if (auto r = refine_kkt(a, x, y, std::min(opts.tol, 1e-12))) {
      const bool not_worse = r->pair.lambda >= lambda - 1e-8 * std::max(1.0, std::abs(lambda));
      const bool in_orthant = !nonneg || (r->pair.x.minCoeff() >= -1e-8 &&
                                          r->pair.y.minCoeff() >= -1e-8);
      if (not_worse && in_orthant && r->pair.residual <= res_tol) {
        out.pair = r->pair;
        out.pair.on_manifold = false;
        out.converged = true;
        out.polished = true;
      }
    }
  }
  if (nonneg) {
    out.pair.x = out.pair.x.cwiseMax(0.0);
    out.pair.y = out.pair.y.cwiseMax(0.0);
  } else {
    canonicalize_signs(out.pair);
  }
  return out;
}

PowerResult power_max_impl(const ElasticityTensor& a, const PowerOptions& opts, bool nonneg) {
  if (opts.max_iter < 1 || !(opts.tol > 0.0) || opts.restarts < 0) {
    throw Error(ErrorCode::InvalidArgument, "power method needs max_iter >= 1, tol > 0, restarts >= 0");
  }
  const int n = a.dim();
  PowerResult result;
  result.shift = opts.shift.value_or(1.0 + a.abs_sum());
  const auto starts = make_starts(n, opts, nonneg);
  result.starts = static_cast<int>(starts.size());
  const double tie = 1e-12 * std::max(1.0, a.max_abs());
  bool have = false;
  for (const Start& s : starts) {
    RunOutcome r = run_start(a, result.shift, s, opts, nonneg);
    if (!r.converged) continue;
    ++result.converged_starts;
    if (r.polished) ++result.polished_starts;
    const bool better =
        !have || r.pair.lambda > result.pair.lambda + tie ||
        (std::abs(r.pair.lambda - result.pair.lambda) <= tie &&
         (lex_less(r.pair.x, result.pair.x) ||
          (r.pair.x == result.pair.x && lex_less(r.pair.y, result.pair.y))));
    if (better) {
      result.pair = r.pair;
      result.iterations = r.iterations;
      have = true;
    }
  }
  if (!have) {
    throw Error(ErrorCode::NoConvergence,
                "power iteration did not converge from any of " +
                    std::to_string(result.starts) + " starts within " +
                    std::to_string(opts.max_iter) + " iterations");
  }
  // Re-derive the residual from scratch; every returned pair must satisfy it.
  result.pair.residual = kkt_residual(a, result.pair.x, result.pair.y, result.pair.lambda);
  if (result.pair.residual > opts.tol * std::max(1.0, a.max_abs()) * 10.0) {
    throw Error(ErrorCode::NoConvergence, "best eigenpair fails the residual check");
  }
  return result;
}

}  // namespace

PowerResult power_method_max(const ElasticityTensor& a, const PowerOptions& opts) {
  return power_max_impl(a, opts, false);
}

PowerResult power_method_min(const ElasticityTensor& a, const PowerOptions& opts) {
  PowerResult r = power_max_impl(shift(a, -1.0, 0.0), opts, false);
  r.pair.lambda = 0.0 - r.pair.lambda;
  r.pair.residual = kkt_residual(a, r.pair.x, r.pair.y, r.pair.lambda);
  return r;
}

PowerResult spectral_radius_nonneg(const ElasticityTensor& b, const PowerOptions& opts) {
  require_nonnegative(b);
  return power_max_impl(b, opts, true);
}

namespace {

// Strongly connected digraph on the off-diagonal positive pattern.
bool matrix_irreducible(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  auto reach_all = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      for (int q = 0; q < n; ++q) {
        const double w = transpose ? m(q, p) : m(p, q);
        if (q != p && w > 0.0 && !seen[q]) {
          seen[q] = true;
          stack.push_back(q);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
  };
  return reach_all(false) && reach_all(true);
}

}  // namespace

Irreducibility is_irreducible(const ElasticityTensor& b) {
  require_nonnegative(b);
  const int n = b.dim();
  Matrix slice(n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) slice(i, j) = b(i, j, k, k);
    if (!matrix_irreducible(slice)) {
      return {false, "x-slice (" + std::to_string(k + 1) + "," + std::to_string(k + 1) + ")"};
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) slice(k, l) = b(i, i, k, l);
    if (!matrix_irreducible(slice)) {
      return {false, "y-slice (" + std::to_string(i + 1) + "," + std::to_string(i + 1) + ")"};
    }
  }
  return {true, ""};
}

}  // namespace elastens
