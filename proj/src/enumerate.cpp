#include <algorithm>
#include <cmath>
#include <numbers>

#include "elastens/error.hpp"
#include "elastens/meigen.hpp"

namespace elastens {

std::vector<double> MSpectrum::distinct_values(double tol) const {
  std::vector<double> out;
  for (const auto& p : pairs) {
    if (out.empty() || std::abs(out.back() - p.lambda) > tol * std::max(1.0, std::abs(p.lambda))) {
      out.push_back(p.lambda);
    }
  }
  return out;
}

double MSpectrum::min_lambda() const {
  if (pairs.empty()) throw Error(ErrorCode::InvalidArgument, "empty spectrum");
  return pairs.back().lambda;
}

double MSpectrum::max_lambda() const {
  if (pairs.empty()) throw Error(ErrorCode::InvalidArgument, "empty spectrum");
  return pairs.front().lambda;
}

namespace {

std::vector<Vector> sphere_directions(int n, int count) {
  std::vector<Vector> dirs;
  dirs.reserve(count);
  if (n == 2) {
    // x and -x give the same eigenpairs, so half a circle suffices.
    for (int m = 0; m < count; ++m) {
      const double t = std::numbers::pi * m / count;
      Vector d(2);
      d << std::cos(t), std::sin(t);
      dirs.push_back(d);
    }
    return dirs;
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int m = 0; m < count; ++m) {
    const double z = 1.0 - (2.0 * m + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * m;
    Vector d(3);
    d << r * std::cos(phi), r * std::sin(phi), z;
    dirs.push_back(d);
  }
  return dirs;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

}  // namespace

MSpectrum enumerate_spectrum(const ElasticityTensor& a, const EnumerateOptions& opts) {
  const int n = a.dim();
  if (n > 3) {
    throw Error(ErrorCode::DimensionTooLarge,
                "spectrum enumeration supports n <= 3, got n=" + std::to_string(n));
  }
  if (opts.grid_density < 0 || !(opts.refine_tol > 0.0) || !(opts.dedup_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "enumeration needs grid >= 0 and positive tolerances");
  }
  const int density = opts.grid_density > 0 ? opts.grid_density : (n == 2 ? 360 : 2000);
  const int coarse = n == 2 ? 24 : 64;
  const double scale = std::max(1.0, a.max_abs());
  const double manifold_tol = 1e-6 * scale;

  // Every KKT point (x, y) has y an eigenvector of A x^2 and x an eigenvector
  // of A y^2, so grid directions paired with those eigenvectors land close to
  // each solution. A coarse product grid backs this up.
  std::vector<std::pair<Vector, Vector>> seeds;
  for (const Vector& d : sphere_directions(n, density)) {
    const Eigen::SelfAdjointEigenSolver<Matrix> ex(partial_xx(a, d));
    const Eigen::SelfAdjointEigenSolver<Matrix> ey(partial_yy(a, d));
    for (int c = 0; c < n; ++c) {
      seeds.emplace_back(d, ex.eigenvectors().col(c));
      seeds.emplace_back(ey.eigenvectors().col(c), d);
    }
  }
  const auto grid = sphere_directions(n, coarse);
  for (const Vector& dx : grid)
    for (const Vector& dy : grid) seeds.emplace_back(dx, dy);

  MSpectrum spec;
  spec.complete = true;
  spec.seeds = static_cast<int>(seeds.size());
  for (const auto& [x0, y0] : seeds) {
    auto r = refine_kkt(a, x0, y0, opts.refine_tol);
    if (!r) {
      ++spec.diverged;
      continue;
    }
    MEigenpair p = r->pair;
    p.on_manifold = r->smallest_singular_value < manifold_tol;
    bool duplicate = false;
    for (auto& q : spec.pairs) {
      if (std::abs(q.lambda - p.lambda) > opts.dedup_tol * std::max(1.0, std::abs(p.lambda))) continue;
      if (p.on_manifold && q.on_manifold) {
        duplicate = true;
        break;
      }
      if (std::abs(q.x.dot(p.x)) > 1.0 - opts.dedup_tol &&
          std::abs(q.y.dot(p.y)) > 1.0 - opts.dedup_tol) {
        duplicate = true;
        // Keep the more accurate representative.
        if (p.residual < q.residual && p.on_manifold == q.on_manifold) q = p;
        break;
      }
    }
    if (!duplicate) spec.pairs.push_back(std::move(p));
  }

  std::sort(spec.pairs.begin(), spec.pairs.end(), [](const MEigenpair& l, const MEigenpair& r) {
    if (l.lambda != r.lambda) return l.lambda > r.lambda;
    if (l.x != r.x) return lex_less(l.x, r.x);
    return lex_less(l.y, r.y);
  });

  spec.notes.push_back("grid-seeded enumeration: completeness is heuristic");
  if (std::any_of(spec.pairs.begin(), spec.pairs.end(),
                  [](const MEigenpair& p) { return p.on_manifold; })) {
    spec.notes.push_back(
        "degenerate manifold: some eigenvalues carry a continuum of eigenvector pairs; one "
        "representative is listed");
  }
  if (spec.pairs.empty()) {
    throw Error(ErrorCode::NoConvergence, "no seed converged to an M-eigenpair");
  }
  return spec;
}

}  // namespace elastens
