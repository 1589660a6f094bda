#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "elastens/error.hpp"
#include "elastens/mclass.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace elastens;
using testing_helpers::tensor;

namespace {

// Symmetric Z-tensor: |draw| + boost on a_iikk, -|draw| elsewhere.
oracle::Raw random_z(int n, std::mt19937_64& rng, double boost) {
  auto raw = oracle::random_tensor(n, rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double& v = raw[oracle::at(n, i, j, k, l)];
          v = i == j && k == l ? std::abs(v) + boost : -std::abs(v);
        }
  return raw;
}

ClassifyOptions quick() {
  ClassifyOptions o;
  o.n_samples = 100;
  return o;
}

}  // namespace

TEST(ZPattern, Examples) {
  EXPECT_TRUE(z_pattern(tensor(2, oracle::z_tensor_not_spsd())).is_z);
  EXPECT_TRUE(z_pattern(ElasticityTensor::identity(3)).is_z);
  const auto p = z_pattern(tensor(2, oracle::nonneg_irreducible()));
  EXPECT_FALSE(p.is_z);
  // Orbits (1,1,1,2), (1,2,1,1), (1,2,1,2), (1,2,2,2), (2,2,1,2): 2 + 2 + 4 + 2 + 2 members.
  EXPECT_EQ(p.violations.size(), 12u);
  // a_1212 = 0.5 is tolerated with z_tol above it, the rest are not.
  auto raw = oracle::identity(2);
  for (auto idx : {oracle::at(2, 0, 1, 0, 1), oracle::at(2, 1, 0, 0, 1), oracle::at(2, 0, 1, 1, 0),
                   oracle::at(2, 1, 0, 1, 0)})
    raw[idx] = 0.5;
  EXPECT_FALSE(z_pattern(tensor(2, raw)).is_z);
  EXPECT_TRUE(z_pattern(tensor(2, raw), 0.6).is_z);
}

TEST(MMatrix, Examples) {
  Matrix m(2, 2);
  m << 2, -1, -1, 2;
  EXPECT_TRUE(is_nonsingular_m_matrix(m).nonsingular_m);
  m << 1, -1, -1, 1;
  EXPECT_FALSE(is_nonsingular_m_matrix(m).nonsingular_m);
  m << 2, 1, 1, 2;
  const auto t = is_nonsingular_m_matrix(m);
  EXPECT_FALSE(t.nonsingular_m);
  EXPECT_NE(t.witness.find("off-diagonal"), std::string::npos);
  m << 2, -1, 0, 2;
  EXPECT_THROW((void)is_nonsingular_m_matrix(m), Error);
}

TEST(Classify, ZTensorIsNonsingularM) {
  const auto a = tensor(2, oracle::z_tensor_not_spsd());
  const auto r = classify(a);
  EXPECT_EQ(r.verdict, Verdict::NonsingularM);
  EXPECT_EQ(r.alpha, 13.0);
  ASSERT_TRUE(r.margin.has_value());
  EXPECT_NEAR(*r.margin, 0.244192, 1e-5);
  ASSERT_TRUE(r.min_eigenvalue.has_value());
  EXPECT_NEAR(*r.min_eigenvalue, *r.margin, 1e-7);
  ASSERT_EQ(r.conditions.size(), 13u);
  for (const auto& c : r.conditions) EXPECT_EQ(c.status, ConditionStatus::Pass) << "C" << c.id;
  EXPECT_TRUE(r.consistent);
}

TEST(Classify, SeparatesFromUnfoldingPositivity) {
  // Nonsingular M-tensor whose unfolding is indefinite.
  const auto a = tensor(2, oracle::z_tensor_not_spsd());
  EXPECT_EQ(classify(a, quick()).verdict, Verdict::NonsingularM);
  const double ev = Eigen::SelfAdjointEigenSolver<Matrix>(unfold(a, UnfoldMode::X).matrix)
                        .eigenvalues()
                        .minCoeff();
  EXPECT_LT(ev, 0.0);
}

TEST(Classify, IdentityAndZero) {
  const auto e = classify(ElasticityTensor::identity(3), quick());
  EXPECT_EQ(e.verdict, Verdict::NonsingularM);
  EXPECT_NEAR(*e.margin, 1.0, 1e-10);
  EXPECT_TRUE(e.consistent);

  const auto z = classify(ElasticityTensor::zero(2), quick());
  EXPECT_EQ(z.verdict, Verdict::SingularMBoundary);
  EXPECT_TRUE(z.consistent);
  for (const auto& c : z.conditions)
    if (!c.sampled) EXPECT_TRUE(c.boundary) << "C" << c.id;
}

TEST(Classify, NegatedIdentityIsNotM) {
  const auto m = shift(ElasticityTensor::identity(2), -1.0, 0.0);
  const auto r = classify(m, quick());
  EXPECT_EQ(r.verdict, Verdict::NotM);
  for (const auto& c : r.conditions) EXPECT_EQ(c.status, ConditionStatus::Fail) << "C" << c.id;
  EXPECT_TRUE(r.consistent);
  const auto c2 = check_condition(m, 2);
  ASSERT_TRUE(c2.witness_pair.has_value());
  EXPECT_NEAR(c2.witness_pair->lambda, -1.0, 1e-10);
}

TEST(Classify, NonZTensorSkipsZConditions) {
  const auto r = classify(tensor(2, oracle::nonneg_irreducible()), quick());
  EXPECT_EQ(r.verdict, Verdict::NotZ);
  EXPECT_FALSE(r.margin.has_value());
  for (const auto& c : r.conditions) {
    if (c.id == 2 || c.id == 4)
      EXPECT_EQ(c.status, ConditionStatus::Pass);
    else
      EXPECT_EQ(c.status, ConditionStatus::Skipped);
  }
  EXPECT_TRUE(r.consistent);
  try {
    (void)check_condition(tensor(2, oracle::nonneg_irreducible()), 6);
    FAIL() << "expected ConditionInapplicable";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConditionInapplicable);
  }
}

TEST(Classify, BoundaryByConstruction) {
  // Shifting the diagonal by rho - alpha puts the margin at zero.
  std::mt19937_64 rng(30);
  const auto a = tensor(2, random_z(2, rng, 0.5));
  const auto base = classify(a, quick());
  const auto b = shift(a, 1.0, -*base.margin);
  const auto r = classify(b, quick());
  EXPECT_EQ(r.verdict, Verdict::SingularMBoundary);
  EXPECT_LE(std::abs(*r.margin), r.margin_tol);
}

TEST(Conditions, SingleSampleAtCoordinateVector) {
  const auto a = tensor(2, oracle::z_tensor_not_spsd());
  // A e1^2 = [[13, -2], [-2, 2]]: Z-matrix with determinant 22.
  EXPECT_TRUE(recheck_sample(a, 6, Vector::Unit(2, 0)));
  EXPECT_THROW((void)recheck_sample(a, 5, Vector::Unit(2, 0)), Error);
  EXPECT_THROW((void)recheck_sample(a, 6, Vector::Unit(3, 0)), Error);
  EXPECT_THROW((void)check_condition(a, 14), Error);
}

TEST(Conditions, SamplesAreNonnegativeUnitAndSeeded) {
  const auto s = condition_samples(3, 200, 7);
  ASSERT_EQ(s.size(), 200u);
  EXPECT_EQ(s[0], Vector::Unit(3, 0));
  EXPECT_NEAR(s[3][0], 1.0 / std::sqrt(3.0), 1e-15);
  for (const auto& v : s) {
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_GE(v.minCoeff(), 0.0);
  }
  EXPECT_EQ(condition_samples(3, 200, 7), s);
  EXPECT_NE(condition_samples(3, 200, 8)[10], s[10]);
}

TEST(Properties, ShiftMovesMargin) {
  std::mt19937_64 rng(31);
  ClassifyOptions o = quick();
  o.run_conditions = false;
  for (int t = 0; t < 20; ++t) {
    const auto a = tensor(2, random_z(2, rng, 0.2));
    const double s = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    const auto r0 = classify(a, o);
    const auto r1 = classify(shift(a, 1.0, s), o);
    EXPECT_NEAR(*r1.margin, *r0.margin + s, 1e-8);
    EXPECT_NEAR(*r1.rho_shift, *r0.rho_shift, 1e-8);
  }
}

TEST(Properties, NonsingularMHasPositiveDiagonal) {
  std::mt19937_64 rng(32);
  ClassifyOptions o = quick();
  o.run_conditions = false;
  int hits = 0;
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 2;
    const auto a = tensor(n, random_z(n, rng, 1.0));
    if (classify(a, o).verdict != Verdict::NonsingularM) continue;
    ++hits;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) EXPECT_GT(a(i, i, k, k), 0.0);
    EXPECT_GT(power_method_min(a).pair.lambda, 0.0);
  }
  EXPECT_GT(hits, 5);
}

TEST(Properties, ConditionsAgreeOnRandomZTensors) {
  std::mt19937_64 rng(33);
  int verdicts[4] = {0, 0, 0, 0};
  for (int t = 0; t < 30; ++t) {
    const auto a = tensor(2, random_z(2, rng, 0.6));
    const auto r = classify(a, quick());
    ++verdicts[static_cast<int>(r.verdict)];
    EXPECT_TRUE(r.consistent) << (r.discrepancies.empty() ? "" : r.discrepancies.front());
    for (const auto& c : r.conditions) {
      if (!c.sampled) continue;
      // Recorded counterexamples really fail; the first samples really pass.
      if (c.status == ConditionStatus::Fail) {
        ASSERT_TRUE(c.witness_vector.has_value());
        EXPECT_FALSE(recheck_sample(a, c.id, *c.witness_vector));
      } else {
        for (const auto& v : condition_samples(2, 10, 42)) EXPECT_TRUE(recheck_sample(a, c.id, v));
      }
    }
  }
  // The generator should exercise both sides.
  EXPECT_GT(verdicts[static_cast<int>(Verdict::NonsingularM)], 0);
  EXPECT_GT(verdicts[static_cast<int>(Verdict::NotM)], 0);
}
