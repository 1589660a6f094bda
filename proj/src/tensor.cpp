#include "elastens/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "elastens/error.hpp"

namespace elastens {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotNonnegative: return "NotNonnegative";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::AsymmetricUnfolding: return "AsymmetricUnfolding";
    case ErrorCode::Asymmetric: return "Asymmetric";
    case ErrorCode::ConditionInapplicable: return "ConditionInapplicable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

void require_dim(int n) {
  if (n < 2) {
    throw Error(ErrorCode::DimensionTooSmall,
                "tensor dimension must be at least 2, got " + std::to_string(n));
  }
}

void require_vector(int n, const Vector& v, const char* name) {
  if (v.size() != n) {
    std::ostringstream os;
    os << "vector " << name << " has length " << v.size() << ", expected " << n;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

ElasticityTensor ElasticityTensor::from_entries(int n, std::span<const double> raw,
                                                bool symmetrize) {
  require_dim(n);
  if (raw.size() != tensor_size(n)) {
    std::ostringstream os;
    os << "expected " << tensor_size(n) << " entries for n=" << n << ", got "
       << raw.size();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  double scale = 0.0;
  for (std::size_t p = 0; p < raw.size(); ++p) {
    if (!std::isfinite(raw[p])) {
      throw Error(ErrorCode::NonFiniteEntry,
                  "non-finite entry at flat offset " + std::to_string(p));
    }
    scale = std::max(scale, std::abs(raw[p]));
  }

  std::vector<double> a(raw.begin(), raw.end());
  if (symmetrize) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            a[flat_index(n, i, j, k, l)] =
                0.25 * ((raw[flat_index(n, i, j, k, l)] + raw[flat_index(n, j, i, l, k)]) +
                        (raw[flat_index(n, j, i, k, l)] + raw[flat_index(n, i, j, l, k)]));
          }
    // Summation order differs across orbit members; copy one value to all.
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k; l < n; ++l) {
            const double v = a[flat_index(n, i, j, k, l)];
            a[flat_index(n, j, i, k, l)] = v;
            a[flat_index(n, i, j, l, k)] = v;
            a[flat_index(n, j, i, l, k)] = v;
          }
    return ElasticityTensor(n, std::move(a));
  }

  const double tol = 1e-12 * scale;
  double worst = 0.0;
  int wi = 0, wj = 0, wk = 0, wl = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = raw[flat_index(n, i, j, k, l)];
          const double d = std::max(std::abs(v - raw[flat_index(n, j, i, k, l)]),
                                    std::abs(v - raw[flat_index(n, i, j, l, k)]));
          if (d > worst) {
            worst = d;
            wi = i, wj = j, wk = k, wl = l;
          }
        }
  if (worst > tol) {
    std::ostringstream os;
    os << "symmetry a_ijkl = a_jikl = a_ijlk violated by " << worst << " at (" << wi + 1
       << "," << wj + 1 << "," << wk + 1 << "," << wl + 1 << ")";
    throw Error(ErrorCode::SymmetryViolation, os.str());
  }
  // Within tolerance: store the exact orbit mean so the symmetry holds bitwise.
  if (worst > 0.0) return from_entries(n, raw, true);
  return ElasticityTensor(n, std::move(a));
}

ElasticityTensor ElasticityTensor::identity(int n) {
  require_dim(n);
  std::vector<double> a(tensor_size(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) a[flat_index(n, i, i, k, k)] = 1.0;
  return ElasticityTensor(n, std::move(a));
}

ElasticityTensor ElasticityTensor::zero(int n) {
  require_dim(n);
  return ElasticityTensor(n, std::vector<double>(tensor_size(n), 0.0));
}

double ElasticityTensor::max_abs() const noexcept {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double ElasticityTensor::abs_sum() const noexcept {
  double s = 0.0;
  for (double v : a_) s += std::abs(v);
  return s;
}

double ElasticityTensor::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

GeneralTensor4::GeneralTensor4(const ElasticityTensor& a)
    : n_(a.dim()), t_(a.entries().begin(), a.entries().end()) {}

double GeneralTensor4::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : t_) s += v * v;
  return std::sqrt(s);
}

double GeneralTensor4::distance(const GeneralTensor4& other) const {
  if (other.n_ != n_) {
    throw Error(ErrorCode::DimensionMismatch, "tensor dimensions differ");
  }
  double s = 0.0;
  for (std::size_t p = 0; p < t_.size(); ++p) {
    const double d = t_[p] - other.t_[p];
    s += d * d;
  }
  return std::sqrt(s);
}

double GeneralTensor4::weak_symmetry_defect() const noexcept {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l)
          worst = std::max(worst, std::abs((*this)(i, j, k, l) - (*this)(j, i, l, k)));
  return worst;
}

void GeneralTensor4::enforce_weak_symmetry() noexcept {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          double& p = (*this)(i, j, k, l);
          double& q = (*this)(j, i, l, k);
          const double m = 0.5 * (p + q);
          p = m;
          q = m;
        }
}

Matrix partial_xx(const ElasticityTensor& a, const Vector& x) {
  const int n = a.dim();
  require_vector(n, x, "x");
  Matrix m = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += a(i, j, k, l) * x[j];
        s += x[i] * row;
      }
      m(k, l) = s;
      m(l, k) = s;
    }
  return m;
}

Matrix partial_yy(const ElasticityTensor& a, const Vector& y) {
  const int n = a.dim();
  require_vector(n, y, "y");
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        double row = 0.0;
        for (int l = 0; l < n; ++l) row += a(i, j, k, l) * y[l];
        s += y[k] * row;
      }
      m(i, j) = s;
      m(j, i) = s;
    }
  return m;
}

double contract_xxyy(const ElasticityTensor& a, const Vector& x, const Vector& y) {
  require_vector(a.dim(), y, "y");
  return y.dot(partial_xx(a, x) * y);
}

double contract_xxyy(const GeneralTensor4& t, const Vector& x, const Vector& y) {
  const int n = t.dim();
  require_vector(n, x, "x");
  require_vector(n, y, "y");
  // (y kron x)^T T_x (y kron x)
  Vector w(n * n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) w[k * n + i] = y[k] * x[i];
  return w.dot(unfold(t, UnfoldMode::X).matrix * w);
}

Vector contract_xyy(const ElasticityTensor& a, const Vector& x, const Vector& y) {
  require_vector(a.dim(), x, "x");
  return partial_yy(a, y) * x;
}

Vector contract_xxy(const ElasticityTensor& a, const Vector& x, const Vector& y) {
  require_vector(a.dim(), y, "y");
  return partial_xx(a, x) * y;
}

namespace {

template <class T>
UnfoldedMatrix unfold_impl(const T& t, UnfoldMode mode) {
  const int n = t.dim();
  UnfoldedMatrix u{Matrix(n * n, n * n), mode};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (mode == UnfoldMode::X) {
            u.matrix(k * n + i, l * n + j) = t(i, j, k, l);
          } else {
            u.matrix(i * n + k, j * n + l) = t(i, j, k, l);
          }
        }
  return u;
}

}  // namespace

UnfoldedMatrix unfold(const ElasticityTensor& a, UnfoldMode mode) {
  return unfold_impl(a, mode);
}

UnfoldedMatrix unfold(const GeneralTensor4& t, UnfoldMode mode) {
  return unfold_impl(t, mode);
}

GeneralTensor4 fold_x(const Matrix& m, int n) {
  if (m.rows() != n * n || m.cols() != n * n) {
    throw Error(ErrorCode::DimensionMismatch, "matrix is not n^2 x n^2");
  }
  GeneralTensor4 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t(i, j, k, l) = m(k * n + i, l * n + j);
  return t;
}

Matrix shuffle_permutation(int n) {
  // Column (k*n + i) of P selects row (i*n + k) of the y-unfolding.
  Matrix p = Matrix::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) p(i * n + k, k * n + i) = 1.0;
  return p;
}

ElasticityTensor shift(const ElasticityTensor& a, double alpha, double beta) {
  const int n = a.dim();
  std::vector<double> out(a.entries().begin(), a.entries().end());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double& v = out[flat_index(n, i, j, k, l)];
          v = alpha * v;
          if (ElasticityTensor::is_diagonal_index(i, j, k, l)) v += alpha * beta;
        }
  return ElasticityTensor::from_entries(n, out, false);
}

}  // namespace elastens
