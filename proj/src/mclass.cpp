#include "elastens/mclass.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "elastens/error.hpp"

namespace elastens {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::NotZ: return "NOT_Z";
    case Verdict::NonsingularM: return "NONSINGULAR_M";
    case Verdict::SingularMBoundary: return "SINGULAR_M_BOUNDARY";
    case Verdict::NotM: return "NOT_M";
  }
  return "UNKNOWN";
}

const char* to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::Pass: return "pass";
    case ConditionStatus::Fail: return "fail";
    case ConditionStatus::Skipped: return "skipped";
  }
  return "unknown";
}

double margin_tolerance(double s) { return 1e-8 * std::max(1.0, std::abs(s)); }

ZPattern z_pattern(const ElasticityTensor& a, double z_tol) {
  const int n = a.dim();
  ZPattern z;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (ElasticityTensor::is_diagonal_index(i, j, k, l)) continue;
          const double v = a(i, j, k, l);
          if (v > z_tol) z.violations.push_back({{i, j, k, l}, v});
        }
  z.is_z = z.violations.empty();
  return z;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string format_vector(const Vector& v) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

double max_diagonal(const ElasticityTensor& a) {
  const int n = a.dim();
  double alpha = a(0, 0, 0, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) alpha = std::max(alpha, a(i, i, k, k));
  return alpha;
}

// s E - A, with entries in [-z_tol, 0) clamped so that near-Z inputs still
// give a nonnegative tensor.
ElasticityTensor nonneg_complement(const ElasticityTensor& a, double s) {
  const ElasticityTensor b = shift(a, -1.0, -s);
  std::vector<double> raw(b.entries().begin(), b.entries().end());
  for (double& v : raw) v = std::max(v, 0.0);
  return ElasticityTensor::from_entries(a.dim(), raw, false);
}

// Sign decision with a boundary band; the conditions are strict inequalities.
void decide(ConditionResult& r, double value, double tol) {
  r.value = value;
  if (value > tol) {
    r.status = ConditionStatus::Pass;
  } else {
    r.status = ConditionStatus::Fail;
    if (std::abs(value) <= tol) {
      r.boundary = true;
      r.note += (r.note.empty() ? "" : "; ");
      r.note += "boundary: |value| <= " + fmt(tol);
    }
  }
}

ConditionResult c_partition(const ElasticityTensor& a, int id, double s,
                            const PowerOptions& power) {
  ConditionResult r;
  r.id = id;
  const ElasticityTensor b = nonneg_complement(a, s);
  const PowerResult pr = spectral_radius_nonneg(b, power);
  decide(r, s - pr.pair.lambda, margin_tolerance(max_diagonal(a)));
  std::ostringstream os;
  os << "s = " << s << ", rho_M(sE - A) = " << pr.pair.lambda;
  r.witness = os.str();
  return r;
}

ConditionResult c_min_eigenvalue(const ElasticityTensor& a, int id, const ClassifyOptions& opts) {
  ConditionResult r;
  r.id = id;
  PowerResult pm = power_method_min(a, opts.power);
  MEigenpair best = pm.pair;
  if (id == 4 && opts.use_enumeration && a.dim() <= 3) {
    const MSpectrum spec = enumerate_spectrum(a, opts.enumerate);
    if (spec.min_lambda() < best.lambda) best = spec.pairs.back();
    r.note = "min over enumerated spectrum (" + std::to_string(spec.pairs.size()) +
             " pairs) and power iteration";
  } else if (id == 4) {
    r.note = "power iteration only (no enumeration)";
  } else {
    r.note = "sign of the smallest M-eigenvalue";
  }
  decide(r, best.lambda, margin_tolerance(max_diagonal(a)));
  if (r.boundary) r.note += "; smallest M-eigenvalue is zero within tolerance";
  r.witness = "lambda = " + fmt(best.lambda) + " at x = " + format_vector(best.x) +
              ", y = " + format_vector(best.y);
  if (r.status == ConditionStatus::Fail) r.witness_pair = best;
  return r;
}

ConditionResult c_orthant_min(const ElasticityTensor& a, const PowerOptions& power) {
  // min over the nonnegative orthant of A x^2 y^2 equals tau - rho_M(tau E - A)
  // for any tau >= alpha; the maximizing pair of tau E - A is nonnegative.
  ConditionResult r;
  r.id = 3;
  const double tau = 1.0 + a.abs_sum();
  const ElasticityTensor b = nonneg_complement(a, tau);
  const PowerResult pr = spectral_radius_nonneg(b, power);
  const double value = contract_xxyy(a, pr.pair.x.normalized(), pr.pair.y.normalized());
  decide(r, value, margin_tolerance(max_diagonal(a)));
  r.witness = "minimizer x = " + format_vector(pr.pair.x) + ", y = " + format_vector(pr.pair.y);
  return r;
}

struct SampleCheck {
  bool pass = true;
  std::string detail;
};

Vector solve_ones(const Matrix& m, bool& ok) {
  const Eigen::FullPivLU<Matrix> lu(m);
  ok = lu.isInvertible();
  if (!ok) return Vector();
  Vector z = lu.solve(Vector::Ones(m.rows()));
  ok = z.allFinite();
  return z;
}

SampleCheck evaluate_sample(const ElasticityTensor& a, int id, const Vector& v, double z_tol) {
  const Matrix m = id <= 9 ? partial_xx(a, v) : partial_yy(a, v);
  const int kind = (id - 6) % 4;  // 0: M-matrix, 1: y > 0, 2: y >= 0, 3: dominance
  SampleCheck out;
  if (kind == 0) {
    const MMatrixTest t = is_nonsingular_m_matrix(m, z_tol);
    out.pass = t.nonsingular_m;
    out.detail = t.witness;
    return out;
  }
  bool ok = false;
  const Vector z = solve_ones(m, ok);
  if (!ok) {
    out.pass = false;
    out.detail = "partial matrix is singular";
    return out;
  }
  const Vector mz = m * z;
  const double zs = std::max(1.0, z.cwiseAbs().maxCoeff());
  if (kind == 1 || kind == 3) {
    if (!(z.minCoeff() > 0.0)) {
      out.pass = false;
      out.detail = "solution of M y = 1 is not positive: y = " + format_vector(z);
      return out;
    }
  } else if (!(z.minCoeff() >= -1e-12 * zs) || !(mz.minCoeff() > 0.5)) {
    out.pass = false;
    out.detail = "solution of M y = 1 is not nonnegative: y = " + format_vector(z);
    return out;
  }
  if (kind == 3) {
    const Matrix dmd = z.asDiagonal() * m * z.asDiagonal();
    for (Eigen::Index i = 0; i < dmd.rows(); ++i) {
      double off = 0.0;
      for (Eigen::Index j = 0; j < dmd.cols(); ++j)
        if (j != i) off += std::abs(dmd(i, j));
      if (!(std::abs(dmd(i, i)) > off)) {
        out.pass = false;
        out.detail = "D M D not strictly diagonally dominant in row " + std::to_string(i + 1);
        return out;
      }
    }
  }
  return out;
}

ConditionResult c_sampled(const ElasticityTensor& a, int id, const ClassifyOptions& opts) {
  ConditionResult r;
  r.id = id;
  r.sampled = true;
  r.status = ConditionStatus::Pass;
  const auto samples = condition_samples(a.dim(), opts.n_samples, opts.seed);
  for (const Vector& v : samples) {
    ++r.samples_used;
    const SampleCheck c = evaluate_sample(a, id, v, opts.z_tol);
    if (!c.pass) {
      r.status = ConditionStatus::Fail;
      r.witness_vector = v;
      r.witness = std::string(id <= 9 ? "x" : "y") + " = " + format_vector(v) + ": " + c.detail;
      return r;
    }
  }
  r.note = "pass (sampled): no counterexample in " + std::to_string(r.samples_used) +
           " samples, not a proof";
  return r;
}

}  // namespace

std::vector<Vector> condition_samples(int n, int count, std::uint64_t seed) {
  std::vector<Vector> out;
  if (count <= 0) return out;
  for (int i = 0; i < n && static_cast<int>(out.size()) < count; ++i) out.push_back(Vector::Unit(n, i));
  if (static_cast<int>(out.size()) < count) out.push_back(Vector::Ones(n).normalized());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(out.size()) < count) {
    Vector v(n);
    for (int i = 0; i < n; ++i) {
      const double g = std::abs(normal(rng));
      v[i] = unit(rng) < 0.25 ? 0.0 : g;
    }
    if (v.norm() < 1e-12) continue;
    out.push_back(v.normalized());
  }
  return out;
}

bool recheck_sample(const ElasticityTensor& a, int id, const Vector& v, double z_tol) {
  if (id < 6 || id > 13) throw Error(ErrorCode::InvalidArgument, "not a sampled condition");
  if (v.size() != a.dim()) throw Error(ErrorCode::DimensionMismatch, "sample has wrong length");
  return evaluate_sample(a, id, v, z_tol).pass;
}

MMatrixTest is_nonsingular_m_matrix(const Matrix& m, double z_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "matrix must be square and nonempty");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw Error(ErrorCode::Asymmetric, "matrix asymmetric by " + fmt(asym));
  }
  MMatrixTest t;
  const Matrix s = 0.5 * (m + m.transpose());
  t.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Matrix>(s, Eigen::EigenvaluesOnly)
                         .eigenvalues()
                         .minCoeff();
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = 0; j < s.cols(); ++j)
      if (i != j && s(i, j) > z_tol) {
        t.witness = "positive off-diagonal entry (" + std::to_string(i + 1) + "," +
                    std::to_string(j + 1) + ") = " + fmt(s(i, j));
        return t;
      }
  t.nonsingular_m = t.min_eigenvalue > 0.0;
  t.witness = "min eigenvalue " + fmt(t.min_eigenvalue);
  return t;
}

ConditionResult check_condition(const ElasticityTensor& a, int id, const ClassifyOptions& opts) {
  if (id < 1 || id > 13) {
    throw Error(ErrorCode::InvalidArgument, "condition id must be 1..13, got " + std::to_string(id));
  }
  if (id == 2) return c_min_eigenvalue(a, 2, opts);
  if (id == 4) return c_min_eigenvalue(a, 4, opts);
  if (!z_pattern(a, opts.z_tol).is_z) {
    throw Error(ErrorCode::ConditionInapplicable,
                "C" + std::to_string(id) + " requires an elasticity Z-tensor");
  }
  if (id >= 6 && opts.n_samples < 1) {
    throw Error(ErrorCode::InvalidArgument, "sampled conditions need n_samples >= 1");
  }
  const double alpha = max_diagonal(a);
  ConditionResult r;
  switch (id) {
    case 1:
      r = c_partition(a, 1, alpha + 1.0, opts.power);
      r.note = "A = sE - B with s = alpha + 1" + (r.note.empty() ? "" : "; " + r.note);
      break;
    case 3:
      r = c_orthant_min(a, opts.power);
      break;
    case 5:
      r = c_partition(a, 5, alpha, opts.power);
      break;
    default:
      r = c_sampled(a, id, opts);
  }
  return r;
}

ClassificationReport classify(const ElasticityTensor& a, const ClassifyOptions& opts) {
  ClassificationReport rep;
  rep.z_pattern = z_pattern(a, opts.z_tol);
  rep.alpha = max_diagonal(a);
  rep.margin_tol = margin_tolerance(rep.alpha);
  if (rep.z_pattern.is_z) {
    const ElasticityTensor b = nonneg_complement(a, rep.alpha);
    const PowerResult pr = spectral_radius_nonneg(b, opts.power);
    rep.rho_shift = pr.pair.lambda;
    rep.perron_pair = pr.pair;
    rep.margin = rep.alpha - pr.pair.lambda;
    if (*rep.margin > rep.margin_tol) {
      rep.verdict = Verdict::NonsingularM;
    } else if (std::abs(*rep.margin) <= rep.margin_tol) {
      rep.verdict = Verdict::SingularMBoundary;
    } else {
      rep.verdict = Verdict::NotM;
    }
  }
  if (!opts.run_conditions) return rep;

  for (int id = 1; id <= 13; ++id) {
    ConditionResult r;
    try {
      r = check_condition(a, id, opts);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ConditionInapplicable) throw;
      r.id = id;
      r.status = ConditionStatus::Skipped;
      r.note = e.what();
    }
    if (id == 4 && r.value) rep.min_eigenvalue = r.value;
    rep.conditions.push_back(std::move(r));
  }

  // C1-C5 are decisive and equivalent for Z-tensors, and the sampled ones are
  // necessary: a failing sample under a passing decisive route is a defect.
  const bool expected = rep.verdict == Verdict::NonsingularM;
  for (const auto& r : rep.conditions) {
    if (r.status == ConditionStatus::Skipped) continue;
    const bool pass = r.status == ConditionStatus::Pass;
    const std::string name = "C" + std::to_string(r.id);
    if (!rep.z_pattern.is_z) {
      continue;
    } else if (!r.sampled && pass != expected) {
      rep.discrepancies.push_back(name + " " + to_string(r.status) + " disagrees with verdict " +
                                  to_string(rep.verdict));
    } else if (r.sampled && !pass && expected) {
      rep.discrepancies.push_back(name + " counterexample under verdict NONSINGULAR_M: " +
                                  r.witness);
    }
  }
  if (!rep.z_pattern.is_z) {
    // C2 and C4 still apply and must agree with each other.
    const auto& c2 = rep.conditions[1];
    const auto& c4 = rep.conditions[3];
    if (c2.status != c4.status) {
      rep.discrepancies.push_back("C2 and C4 disagree on M-positive definiteness");
    }
  }
  rep.consistent = rep.discrepancies.empty();
  return rep;
}

}  // namespace elastens
