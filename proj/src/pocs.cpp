#include "elastens/pocs.hpp"

#include <algorithm>
#include <cmath>

#include "elastens/error.hpp"

namespace elastens {

const char* to_string(PocsStatus s) {
  switch (s) {
    case PocsStatus::CertifiedMPsd: return "CERTIFIED_M_PSD";
    case PocsStatus::CertifiedMPd: return "CERTIFIED_M_PD";
    case PocsStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

GeneralTensor4 project_affine(const GeneralTensor4& t, const ElasticityTensor& a) {
  const int n = a.dim();
  if (t.dim() != n) throw Error(ErrorCode::DimensionMismatch, "tensor dimensions differ");
  GeneralTensor4 w = t;
  w.enforce_weak_symmetry();
  GeneralTensor4 out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (i == j || k == l) {
            out(i, j, k, l) = a(i, j, k, l);
          } else {
            out(i, j, k, l) = a(i, j, k, l) + 0.5 * (w(i, j, k, l) - w(j, i, k, l));
          }
        }
  return out;
}

namespace {

Matrix symmetric_unfolding(const GeneralTensor4& t) {
  Matrix m = unfold(t, UnfoldMode::X).matrix;
  double scale = 1.0;
  for (double v : t.entries()) scale = std::max(scale, std::abs(v));
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw Error(ErrorCode::AsymmetricUnfolding,
                "unfolding asymmetric by " + std::to_string(asym) +
                    " (tensor lacks t_ijkl = t_jilk)");
  }
  return 0.5 * (m + m.transpose());
}

}  // namespace

GeneralTensor4 project_psd(const GeneralTensor4& t) {
  const Matrix m = symmetric_unfolding(t);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.eigenvalues().minCoeff() >= 0.0) {
    GeneralTensor4 same = fold_x(m, t.dim());
    return same;
  }
  const Vector clipped = es.eigenvalues().cwiseMax(0.0);
  Matrix p = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
  p = 0.5 * (p + p.transpose());
  return fold_x(p, t.dim());
}

PsdCertificate extract_certificate(const GeneralTensor4& astar, double epsilon) {
  const int n = astar.dim();
  const Matrix m = symmetric_unfolding(astar);
  const Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector& d = es.eigenvalues();
  const double top = std::max(0.0, d.maxCoeff());
  if (d.minCoeff() < -1e-10 * std::max(1.0, top)) {
    throw Error(ErrorCode::NotPsd,
                "unfolding has eigenvalue " + std::to_string(d.minCoeff()) + " < 0");
  }
  PsdCertificate cert;
  cert.epsilon = epsilon;
  const double rank_tol = 1e-9 * top;
  // Largest terms first.
  for (Eigen::Index s = d.size() - 1; s >= 0; --s) {
    if (!(d[s] > rank_tol)) continue;
    CertificateTerm term;
    term.alpha = d[s];
    term.u = Matrix(n, n);
    const auto v = es.eigenvectors().col(s);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) term.u(i, k) = v[k * n + i];
    cert.terms.push_back(std::move(term));
  }
  return cert;
}

ElasticityTensor reconstruct(const PsdCertificate& cert, int n) {
  std::vector<double> raw(tensor_size(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (const auto& t : cert.terms) {
            if (t.u.rows() != n || t.u.cols() != n) {
              throw Error(ErrorCode::DimensionMismatch, "certificate term is not n x n");
            }
            s += t.alpha * (t.u(i, k) * t.u(j, l) + t.u(j, k) * t.u(i, l));
          }
          raw[flat_index(n, i, j, k, l)] =
              0.5 * s + (i == j && k == l ? cert.epsilon : 0.0);
        }
  // The formula is symmetric up to rounding; snap to the exact orbit mean.
  return ElasticityTensor::from_entries(n, raw, true);
}

double reconstruction_error(const PsdCertificate& cert, const ElasticityTensor& a) {
  const ElasticityTensor r = reconstruct(cert, a.dim());
  double worst = 0.0;
  for (std::size_t p = 0; p < r.entries().size(); ++p) {
    worst = std::max(worst, std::abs(r.entries()[p] - a.entries()[p]));
  }
  return worst;
}

PocsIteration::PocsIteration(const ElasticityTensor& a, double epsilon)
    : target_(shift(a, 1.0, -epsilon)) {
  state_.affine = GeneralTensor4(target_);
  state_.psd = GeneralTensor4(target_);
}

void PocsIteration::step() {
  state_.psd = project_psd(state_.affine);
  state_.affine = project_affine(state_.psd, target_);
  state_.residual = state_.affine.distance(state_.psd);
  state_.history.push_back(state_.residual);
  ++state_.iteration;
}

PocsOutcome pocs_verify(const ElasticityTensor& a, const PocsOptions& opts) {
  if (!(opts.epsilon >= 0.0) || !std::isfinite(opts.epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be finite and >= 0");
  }
  if (opts.max_iter < 0 || opts.stall_window < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_iter >= 0 and stall_window >= 1 required");
  }
  PocsOutcome out;
  out.epsilon = opts.epsilon;
  out.residual_tol = opts.residual_tol.value_or(1e-10 * std::max(1.0, a.frobenius_norm()));

  PocsIteration pocs(a, opts.epsilon);
  const double start_min_eig =
      Eigen::SelfAdjointEigenSolver<Matrix>(unfold(pocs.target(), UnfoldMode::X).matrix,
                                            Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();

  GeneralTensor4 candidate;
  bool converged = false;
  if (start_min_eig >= 0.0) {
    // A - eps E is already S-PSD.
    candidate = pocs.state().affine;
    converged = true;
  } else {
    while (pocs.state().iteration < opts.max_iter) {
      pocs.step();
      const auto& st = pocs.state();
      if (st.residual <= out.residual_tol) {
        converged = true;
        break;
      }
      const int t = st.iteration;
      if (t > opts.stall_window) {
        const double before = st.history[t - 1 - opts.stall_window];
        if (before - st.residual < 1e-12 * before) {
          out.stalled = true;
          break;
        }
      }
    }
    candidate = pocs.state().psd;
  }

  const auto& st = pocs.state();
  out.iterations = st.iteration;
  out.residual = st.iteration == 0 ? 0.0 : st.residual;
  out.history = st.history;
  out.min_unfolding_eigenvalue =
      Eigen::SelfAdjointEigenSolver<Matrix>(unfold(st.affine, UnfoldMode::X).matrix,
                                            Eigen::EigenvaluesOnly)
          .eigenvalues()
          .minCoeff();
  if (!converged) return out;

  // Membership check: the PSD candidate must re-project onto T_A in place.
  const double membership = project_affine(candidate, pocs.target()).distance(candidate);
  if (membership > out.residual_tol) return out;

  PsdCertificate cert = extract_certificate(candidate, opts.epsilon);
  cert.reconstruction_error = reconstruction_error(cert, a);
  if (cert.reconstruction_error > opts.certificate_tol * std::max(1.0, a.max_abs())) return out;
  out.status = opts.epsilon > 0.0 ? PocsStatus::CertifiedMPd : PocsStatus::CertifiedMPsd;
  out.certificate = std::move(cert);
  return out;
}

}  // namespace elastens
