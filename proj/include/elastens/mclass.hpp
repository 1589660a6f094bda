#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elastens/meigen.hpp"
#include "elastens/tensor.hpp"

namespace elastens {

struct ZViolation {
  /// 0-based (i, j, k, l)
  std::array<int, 4> index{};
  double value = 0.0;
};

/// Diagonal entries are a_iikk; everything else is off-diagonal.
struct ZPattern {
  bool is_z = true;
  /// One entry per index quadruple (all orbit members are listed).
  std::vector<ZViolation> violations;
};

ZPattern z_pattern(const ElasticityTensor& a, double z_tol = 0.0);

enum class Verdict { NotZ, NonsingularM, SingularMBoundary, NotM };

const char* to_string(Verdict v);

enum class ConditionStatus { Pass, Fail, Skipped };

const char* to_string(ConditionStatus s);

struct ConditionResult {
  /// 1..13
  int id = 0;
  ConditionStatus status = ConditionStatus::Skipped;
  /// Sampled conditions only falsify; a pass is "pass (sampled)".
  bool sampled = false;
  int samples_used = 0;
  /// Margin or minimum the decision was taken on, when there is one.
  std::optional<double> value;
  /// Failing sample (x for C6-C9, y for C10-C13).
  std::optional<Vector> witness_vector;
  /// M-eigenpair exhibited by C2/C4 on failure.
  std::optional<MEigenpair> witness_pair;
  std::string witness;
  std::string note;
  bool boundary = false;
};

struct ClassifyOptions {
  PowerOptions power;
  EnumerateOptions enumerate;
  bool use_enumeration = true;
  int n_samples = 1000;
  std::uint64_t seed = 42;
  double z_tol = 0.0;
  /// classify() runs C1..C13 as well as the verdict when set.
  bool run_conditions = true;
};

struct ClassificationReport {
  ZPattern z_pattern;
  double alpha = 0.0;
  std::optional<double> rho_shift;
  Verdict verdict = Verdict::NotZ;
  /// alpha - rho_shift
  std::optional<double> margin;
  double margin_tol = 0.0;
  std::optional<double> min_eigenvalue;
  /// Eigenvectors of B = alpha E - A at rho_shift.
  std::optional<MEigenpair> perron_pair;
  std::vector<ConditionResult> conditions;
  bool consistent = true;
  std::vector<std::string> discrepancies;
};

/// 1e-8 * max(1, |s|)
double margin_tolerance(double s);

ClassificationReport classify(const ElasticityTensor& a, const ClassifyOptions& opts = {});

/// C2 and C4 apply to any tensor; the rest throw ConditionInapplicable unless
/// the tensor has the Z-pattern.
ConditionResult check_condition(const ElasticityTensor& a, int id,
                                const ClassifyOptions& opts = {});

/// The nonnegative unit vectors used by C6-C13: coordinate vectors, the
/// normalized all-ones vector, then |N(0,1)| draws with each component
/// zeroed with probability 1/4.
std::vector<Vector> condition_samples(int n, int count, std::uint64_t seed);

/// Evaluates a sampled condition (6..13) at a single vector. Returns true
/// when the sample passes.
bool recheck_sample(const ElasticityTensor& a, int id, const Vector& v, double z_tol = 0.0);

struct MMatrixTest {
  bool nonsingular_m = false;
  double min_eigenvalue = 0.0;
  std::string witness;
};

/// For a symmetric matrix: nonsingular M-matrix iff Z-matrix and positive
/// definite. Throws Asymmetric beyond 1e-10 * max(1, max|m|).
MMatrixTest is_nonsingular_m_matrix(const Matrix& m, double z_tol = 0.0);

}  // namespace elastens
