#pragma once

#include <optional>
#include <vector>

#include "elastens/tensor.hpp"

namespace elastens {

/// Orthogonal projection of a weakly symmetric tensor onto
///   T_A = { T : t_ijkl = t_jilk, t_ijkl + t_jikl = 2 a_ijkl }.
/// Entries with i == j or k == l are reset to a_ijkl; for the rest the skew
/// part 1/2 (t_ijkl - t_jikl) is kept on top of a_ijkl. The input is first
/// averaged onto exact weak symmetry.
GeneralTensor4 project_affine(const GeneralTensor4& t, const ElasticityTensor& a);

/// Tensor whose x-unfolding is the nearest PSD matrix to that of `t`
/// (negative eigenvalues clipped). Throws AsymmetricUnfolding if the
/// unfolding is not symmetric to 1e-10 * max(1, max|t|).
GeneralTensor4 project_psd(const GeneralTensor4& t);

struct CertificateTerm {
  double alpha = 0.0;
  /// u_ik with the unfolding vector reshaped column-major: u(i,k) = v[k*n + i].
  Matrix u;
};

/// a_ijkl = 1/2 sum_s alpha_s (u_ik u_jl + u_jk u_il) + epsilon * e_ijkl
struct PsdCertificate {
  std::vector<CertificateTerm> terms;
  double epsilon = 0.0;
  /// Largest entrywise deviation from the input tensor, set by pocs_verify.
  double reconstruction_error = 0.0;
};

/// Rank-one PSD decomposition of a tensor with PSD x-unfolding; eigenvalues
/// above 1e-9 * (largest eigenvalue) become terms. Throws NotPsd when the
/// smallest eigenvalue is below -1e-10 * max(1, largest).
PsdCertificate extract_certificate(const GeneralTensor4& astar, double epsilon);

ElasticityTensor reconstruct(const PsdCertificate& cert, int n);
double reconstruction_error(const PsdCertificate& cert, const ElasticityTensor& a);

/// Alternating-projection state: the T_A iterate, the PSD iterate and the
/// residual trace |A_t - B_t|_F.
struct PocsState {
  GeneralTensor4 affine;
  GeneralTensor4 psd;
  int iteration = 0;
  double residual = 0.0;
  std::vector<double> history;
};

/// Steps B <- P_S(A_t), A_{t+1} <- P_T(B) for the tensor A - epsilon E,
/// starting from A_0 = A - epsilon E.
class PocsIteration {
 public:
  PocsIteration(const ElasticityTensor& a, double epsilon);

  void step();

  const PocsState& state() const noexcept { return state_; }
  /// A - epsilon E
  const ElasticityTensor& target() const noexcept { return target_; }

 private:
  ElasticityTensor target_;
  PocsState state_;
};

enum class PocsStatus { CertifiedMPsd, CertifiedMPd, Inconclusive };

const char* to_string(PocsStatus s);

struct PocsOptions {
  double epsilon = 0.0;
  int max_iter = 50000;
  /// Defaults to 1e-10 * max(1, |A|_F).
  std::optional<double> residual_tol;
  int stall_window = 200;
  /// Entrywise reconstruction bound, scaled by max(1, max|a_ijkl|).
  double certificate_tol = 1e-8;
};

struct PocsOutcome {
  PocsStatus status = PocsStatus::Inconclusive;
  std::optional<PsdCertificate> certificate;
  double residual = 0.0;
  double residual_tol = 0.0;
  int iterations = 0;
  bool stalled = false;
  /// Smallest eigenvalue of the final T_A iterate's unfolding.
  double min_unfolding_eigenvalue = 0.0;
  double epsilon = 0.0;
  std::vector<double> history;
};

/// Searches T_{A - eps E} ∩ S by alternating projections. A certificate means
/// A is M-PSD (eps = 0) or M-PD (eps > 0); INCONCLUSIVE says nothing about
/// ellipticity, the condition is only sufficient.
PocsOutcome pocs_verify(const ElasticityTensor& a, const PocsOptions& opts = {});

}  // namespace elastens
