#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elastens/tensor.hpp"

namespace elastens {

/// (lambda, x, y) with A x y^2 = lambda x, A x^2 y = lambda y, |x| = |y| = 1.
struct MEigenpair {
  double lambda = 0.0;
  Vector x;
  Vector y;
  /// max(|A x y^2 - lambda x|, |A x^2 y - lambda y|)
  double residual = 0.0;
  /// Set by the enumerator when the KKT Jacobian is rank deficient, i.e. the
  /// pair is one representative of a continuum of eigenpairs.
  bool on_manifold = false;
};

/// Flips x and y so that their first non-negligible component is positive.
void canonicalize_signs(MEigenpair& p);

double kkt_residual(const ElasticityTensor& a, const Vector& x, const Vector& y,
                    double lambda);

/// Residual vector of the KKT system with lambda eliminated:
/// [A x y^2 - l x; A x^2 y - l y; (x'x - 1)/2; (y'y - 1)/2], l = A x^2 y^2.
Vector kkt_system(const ElasticityTensor& a, const Vector& x, const Vector& y);

/// (2n+2) x 2n Jacobian of kkt_system with respect to (x, y).
Matrix kkt_jacobian(const ElasticityTensor& a, const Vector& x, const Vector& y);

struct RefineResult {
  MEigenpair pair;
  int iterations = 0;
  double smallest_singular_value = 0.0;
};

/// Gauss-Newton on kkt_system from (x0, y0). Converged when the residual
/// infinity norm is <= tol * max(1, max|a_ijkl|). Returns nullopt on divergence.
std::optional<RefineResult> refine_kkt(const ElasticityTensor& a, const Vector& x0,
                                       const Vector& y0, double tol = 1e-12,
                                       int max_iter = 60);

struct PowerOptions {
  /// Shift tau for A + tau E; defaults to 1 + sum |a_ijkl|.
  std::optional<double> shift;
  int max_iter = 10000;
  double tol = 1e-10;
  /// Random starts in addition to the all-ones and coordinate starts.
  int restarts = 16;
  std::uint64_t seed = 42;
};

struct PowerResult {
  MEigenpair pair;
  double shift = 0.0;
  int starts = 0;
  int converged_starts = 0;
  int polished_starts = 0;
  /// Iterations spent by the start that produced `pair`.
  int iterations = 0;
};

/// Largest M-eigenvalue by alternating shifted power iteration
///   x <- normalize((A + tau E) x y^2),  y <- normalize((A + tau E) x^2 y)
/// over several starts; the best converged start wins. Throws NoConvergence
/// when no start meets the tolerance.
PowerResult power_method_max(const ElasticityTensor& a, const PowerOptions& opts = {});

/// Smallest M-eigenvalue, computed as -lambda_max(-A).
PowerResult power_method_min(const ElasticityTensor& a, const PowerOptions& opts = {});

/// M-spectral radius of a nonnegative tensor. Iterates stay in the
/// nonnegative orthant so the returned eigenvectors are nonnegative.
/// Throws NotNonnegative if some entry is below -1e-14.
PowerResult spectral_radius_nonneg(const ElasticityTensor& b, const PowerOptions& opts = {});

struct EnumerateOptions {
  /// Directions per sphere; 0 picks 360 (n = 2) or 2000 (n = 3).
  int grid_density = 0;
  double refine_tol = 1e-12;
  double dedup_tol = 1e-6;
};

struct MSpectrum {
  /// Deduplicated, sorted by descending lambda.
  std::vector<MEigenpair> pairs;
  /// Grid completeness is heuristic; the flag only marks the enumerator path.
  bool complete = false;
  int seeds = 0;
  int diverged = 0;
  std::vector<std::string> notes;

  /// Eigenvalues with values closer than `tol` (relative to max(1,|lambda|))
  /// merged, descending.
  std::vector<double> distinct_values(double tol = 1e-6) const;
  double min_lambda() const;
  double max_lambda() const;
};

/// All isolated M-eigenpairs of a tensor with n <= 3 by seeding Newton
/// refinement of the KKT system from sphere grids. Throws DimensionTooLarge
/// for n > 3.
MSpectrum enumerate_spectrum(const ElasticityTensor& a, const EnumerateOptions& opts = {});

struct Irreducibility {
  bool irreducible = false;
  /// Names the first reducible slice, e.g. "x-slice (1,1)".
  std::string witness;
};

/// True iff every slice B(:,:,k,k) and B(i,i,:,:) is an irreducible matrix.
Irreducibility is_irreducible(const ElasticityTensor& b);

/// Throws NotNonnegative when some entry is below -1e-14.
void require_nonnegative(const ElasticityTensor& b);

}  // namespace elastens
