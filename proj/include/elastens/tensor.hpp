#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace elastens {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Row-major offset of (i,j,k,l) in a dense n^4 array, 0-based indices.
inline std::size_t flat_index(int n, int i, int j, int k, int l) noexcept {
  return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
}

inline std::size_t tensor_size(int n) noexcept {
  const auto m = static_cast<std::size_t>(n);
  return m * m * m * m;
}

/// Dense fourth-order tensor with a_ijkl = a_jikl = a_ijlk.
///
/// Immutable once built; every constructor path either validates or
/// symmetrizes, so holding an instance means the symmetry holds exactly.
class ElasticityTensor {
 public:
  /// Builds a tensor from n^4 row-major entries. With `symmetrize` off, input
  /// deviating from the symmetry by more than 1e-12 * max|entry| is rejected;
  /// with it on, each entry is replaced by the mean over its orbit
  /// {(i,j,k,l), (j,i,k,l), (i,j,l,k), (j,i,l,k)}.
  static ElasticityTensor from_entries(int n, std::span<const double> raw,
                                       bool symmetrize);

  /// e_iikk = 1, all other entries zero.
  static ElasticityTensor identity(int n);
  static ElasticityTensor zero(int n);

  int dim() const noexcept { return n_; }

  double operator()(int i, int j, int k, int l) const noexcept {
    return a_[flat_index(n_, i, j, k, l)];
  }

  std::span<const double> entries() const noexcept { return a_; }

  double max_abs() const noexcept;
  double abs_sum() const noexcept;
  double frobenius_norm() const noexcept;

  /// Diagonal entries are a_iikk; everything else is off-diagonal.
  static bool is_diagonal_index(int i, int j, int k, int l) noexcept {
    return i == j && k == l;
  }

 private:
  ElasticityTensor(int n, std::vector<double> a) : n_(n), a_(std::move(a)) {}

  int n_ = 0;
  std::vector<double> a_;
};

/// Fourth-order tensor carrying only the weak symmetry t_ijkl = t_jilk.
/// Used for alternating-projection iterates; its x-unfolding is symmetric.
class GeneralTensor4 {
 public:
  GeneralTensor4() = default;
  explicit GeneralTensor4(int n) : n_(n), t_(tensor_size(n), 0.0) {}
  explicit GeneralTensor4(const ElasticityTensor& a);

  int dim() const noexcept { return n_; }

  double operator()(int i, int j, int k, int l) const noexcept {
    return t_[flat_index(n_, i, j, k, l)];
  }
  double& operator()(int i, int j, int k, int l) noexcept {
    return t_[flat_index(n_, i, j, k, l)];
  }

  std::span<const double> entries() const noexcept { return t_; }

  double frobenius_norm() const noexcept;
  double distance(const GeneralTensor4& other) const;

  /// Largest |t_ijkl - t_jilk|.
  double weak_symmetry_defect() const noexcept;

  /// Replaces each pair {t_ijkl, t_jilk} by its mean.
  void enforce_weak_symmetry() noexcept;

 private:
  int n_ = 0;
  std::vector<double> t_;
};

enum class UnfoldMode { X, Y };

/// n^2 x n^2 matrix view of a fourth-order tensor.
///
/// X mode: block (k,l) is the slice A(:,:,k,l), i.e. entry
/// [k*n + i, l*n + j] = a_ijkl. Y mode: block (i,j) is A(i,j,:,:), i.e. entry
/// [i*n + k, j*n + l] = a_ijkl.
struct UnfoldedMatrix {
  Matrix matrix;
  UnfoldMode mode = UnfoldMode::X;
};

// Multilinear forms. All throw DimensionMismatch on vector length != n.

/// sum a_ijkl x_i x_j y_k y_l
double contract_xxyy(const ElasticityTensor& a, const Vector& x, const Vector& y);
double contract_xxyy(const GeneralTensor4& t, const Vector& x, const Vector& y);

/// (A x y^2)_i = sum_jkl a_ijkl x_j y_k y_l
Vector contract_xyy(const ElasticityTensor& a, const Vector& x, const Vector& y);

/// (A x^2 y)_l = sum_ijk a_ijkl x_i x_j y_k
Vector contract_xxy(const ElasticityTensor& a, const Vector& x, const Vector& y);

/// (A x^2)_kl = sum_ij a_ijkl x_i x_j
Matrix partial_xx(const ElasticityTensor& a, const Vector& x);

/// (A y^2)_ij = sum_kl a_ijkl y_k y_l
Matrix partial_yy(const ElasticityTensor& a, const Vector& y);

UnfoldedMatrix unfold(const ElasticityTensor& a, UnfoldMode mode);
UnfoldedMatrix unfold(const GeneralTensor4& t, UnfoldMode mode);

/// Inverse of the x-unfolding.
GeneralTensor4 fold_x(const Matrix& m, int n);

/// Perfect-shuffle permutation P with unfold(X) = P^T unfold(Y) P.
Matrix shuffle_permutation(int n);

/// alpha * (A + beta * E)
ElasticityTensor shift(const ElasticityTensor& a, double alpha, double beta);

}  // namespace elastens
