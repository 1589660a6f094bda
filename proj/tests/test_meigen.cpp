#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "elastens/error.hpp"
#include "elastens/meigen.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace elastens;
using testing_helpers::tensor;
using testing_helpers::vec;

namespace {

// Brute-force minimum of A x^2 y^2 over a 2000 x 2000 half-turn grid, frozen.
constexpr double kZTensorMin = 0.244192;

void expect_eigenpair(const ElasticityTensor& a, const MEigenpair& p, double tol) {
  EXPECT_NEAR(p.x.norm(), 1.0, 1e-10);
  EXPECT_NEAR(p.y.norm(), 1.0, 1e-10);
  EXPECT_LT((contract_xyy(a, p.x, p.y) - p.lambda * p.x).norm(), tol);
  EXPECT_LT((contract_xxy(a, p.x, p.y) - p.lambda * p.y).norm(), tol);
  EXPECT_NEAR(contract_xxyy(a, p.x, p.y), p.lambda, tol);
}

}  // namespace

TEST(PowerMethod, ZTensorExtremes) {
  const auto a = tensor(2, oracle::z_tensor_not_spsd());
  const auto lo = power_method_min(a);
  const auto hi = power_method_max(a);
  EXPECT_NEAR(lo.pair.lambda, kZTensorMin, 1e-5);
  EXPECT_NEAR(hi.pair.lambda, 13.4163, 1e-4);
  expect_eigenpair(a, lo.pair, 1e-8);
  expect_eigenpair(a, hi.pair, 1e-8);
  EXPECT_DOUBLE_EQ(hi.shift, 1.0 + a.abs_sum());
}

TEST(PowerMethod, MpsdTensorMinimumIsZero) {
  const auto a = tensor(3, oracle::mpsd_not_spsd_n3());
  EXPECT_NEAR(power_method_min(a).pair.lambda, 0.0, 1e-6);
  EXPECT_NEAR(power_method_max(a).pair.lambda, 2.0, 1e-8);
}

TEST(PowerMethod, IdentityAndNegatedIdentity) {
  const auto e = ElasticityTensor::identity(3);
  EXPECT_NEAR(power_method_max(e).pair.lambda, 1.0, 1e-12);
  EXPECT_NEAR(power_method_min(e).pair.lambda, 1.0, 1e-12);
  const auto m = shift(e, -1.0, 0.0);
  EXPECT_NEAR(power_method_min(m).pair.lambda, -1.0, 1e-12);
}

TEST(PowerMethod, DeterministicForFixedSeed) {
  std::mt19937_64 rng(10);
  const auto a = tensor(3, oracle::random_tensor(3, rng));
  const auto r1 = power_method_min(a);
  const auto r2 = power_method_min(a);
  EXPECT_EQ(r1.pair.lambda, r2.pair.lambda);
  EXPECT_EQ(r1.pair.x, r2.pair.x);
  EXPECT_EQ(r1.pair.y, r2.pair.y);
}

TEST(PowerMethod, InvalidOptions) {
  const auto e = ElasticityTensor::identity(2);
  PowerOptions o;
  o.max_iter = 0;
  EXPECT_THROW((void)power_method_max(e, o), Error);
  o = {};
  o.tol = -1.0;
  EXPECT_THROW((void)power_method_max(e, o), Error);
}

TEST(PowerMethod, MatchesGridExtremaOnRandomTensors) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 25; ++t) {
    const auto raw = oracle::random_tensor(2, rng);
    const auto a = tensor(2, raw);
    const auto [lo, hi] = oracle::grid_extrema_n2(raw, 720);
    // The grid only over-estimates the minimum (and under-estimates the max).
    const double lmin = power_method_min(a).pair.lambda;
    const double lmax = power_method_max(a).pair.lambda;
    EXPECT_LE(lmin, lo + 1e-9);
    EXPECT_GE(lmax, hi - 1e-9);
    EXPECT_NEAR(lmin, lo, 1e-3);
    EXPECT_NEAR(lmax, hi, 1e-3);
  }
}

TEST(PowerMethod, ShiftMovesSpectrum) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const auto a = tensor(2, oracle::random_tensor(2, rng));
    const double s = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    const double base = power_method_min(a).pair.lambda;
    EXPECT_NEAR(power_method_min(shift(a, 1.0, s)).pair.lambda, base + s, 1e-8);
    EXPECT_NEAR(power_method_max(shift(a, -1.0, 0.0)).pair.lambda, -base, 1e-8);
  }
}

TEST(Kkt, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(13);
  const int n = 3;
  const auto a = tensor(n, oracle::random_tensor(n, rng));
  const Vector x = vec(oracle::random_unit(n, rng));
  const Vector y = vec(oracle::random_unit(n, rng));
  const Matrix j = kkt_jacobian(a, x, y);
  ASSERT_EQ(j.rows(), 2 * n + 2);
  ASSERT_EQ(j.cols(), 2 * n);
  const double h = 1e-6;
  for (int c = 0; c < 2 * n; ++c) {
    Vector xp = x, xm = x, yp = y, ym = y;
    if (c < n) {
      xp[c] += h;
      xm[c] -= h;
    } else {
      yp[c - n] += h;
      ym[c - n] -= h;
    }
    const Vector fd = (kkt_system(a, xp, yp) - kkt_system(a, xm, ym)) / (2 * h);
    EXPECT_LT((fd - j.col(c)).cwiseAbs().maxCoeff(), 1e-6) << "column " << c;
  }
}

TEST(Kkt, RefineConvergesFromNearbyStart) {
  const auto a = tensor(2, oracle::nonneg_irreducible());
  Vector x(2), y(2);
  x << 0.3, 0.95;
  y << 0.95, 0.33;
  const auto r = refine_kkt(a, x.normalized(), y.normalized());
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(r->pair.lambda, 10.907536, 1e-6);
  EXPECT_LT(r->pair.residual, 1e-10);
  expect_eigenpair(a, r->pair, 1e-10);
}

TEST(Kkt, CanonicalSigns) {
  MEigenpair p;
  p.x = Vector(2);
  p.y = Vector(2);
  p.x << -0.6, 0.8;
  p.y << 0.0, -1.0;
  canonicalize_signs(p);
  EXPECT_GT(p.x[0], 0.0);
  EXPECT_GT(p.y[1], 0.0);
}

TEST(Enumerate, ZTensorRealSpectrum) {
  const auto a = tensor(2, oracle::z_tensor_not_spsd());
  const auto s = enumerate_spectrum(a);
  const auto v = s.distinct_values();
  const std::vector<double> want{13.4163, 12.1118, 11.2036, 6.1778, 0.2442};
  ASSERT_EQ(v.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(v[i], want[i], 1e-4);
  EXPECT_NEAR(s.min_lambda(), kZTensorMin, 1e-5);
  for (const auto& p : s.pairs) expect_eigenpair(a, p, 1e-9);
  // 11.2036 appears as an (x, y)-swapped pair.
  EXPECT_EQ(s.pairs.size(), 6u);
}

TEST(Enumerate, NonnegTensor) {
  const auto a = tensor(2, oracle::nonneg_irreducible());
  const auto s = enumerate_spectrum(a);
  EXPECT_NEAR(s.max_lambda(), 10.907536, 1e-6);
  bool has_half = false;
  for (const auto& p : s.pairs) {
    expect_eigenpair(a, p, 1e-9);
    if (std::abs(p.lambda - 10.5) < 1e-8) {
      has_half = true;
      EXPECT_NEAR(std::abs(p.x[0]), std::sqrt(0.5), 1e-8);
      EXPECT_NEAR(std::abs(p.y[1]), std::sqrt(0.5), 1e-8);
    }
  }
  EXPECT_TRUE(has_half);
}

TEST(Enumerate, IdentityCollapsesToManifold) {
  const auto s = enumerate_spectrum(ElasticityTensor::identity(2));
  ASSERT_EQ(s.distinct_values().size(), 1u);
  EXPECT_NEAR(s.distinct_values()[0], 1.0, 1e-12);
  for (const auto& p : s.pairs) EXPECT_TRUE(p.on_manifold);
}

TEST(Enumerate, RejectsLargeDimension) {
  try {
    (void)enumerate_spectrum(ElasticityTensor::identity(4));
    FAIL() << "expected DimensionTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionTooLarge);
  }
}

TEST(Enumerate, ExtremesAgreeWithPowerMethod) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 15; ++t) {
    const auto raw = oracle::random_tensor(2, rng);
    const auto a = tensor(2, raw);
    const auto s = enumerate_spectrum(a);
    EXPECT_NEAR(s.min_lambda(), power_method_min(a).pair.lambda, 1e-7);
    EXPECT_NEAR(s.max_lambda(), power_method_max(a).pair.lambda, 1e-7);
    for (const auto& p : s.pairs) EXPECT_LT(p.residual, 1e-9);
    // Sorted descending.
    for (std::size_t i = 1; i < s.pairs.size(); ++i) EXPECT_GE(s.pairs[i - 1].lambda, s.pairs[i].lambda);
  }
}

TEST(SpectralRadius, NonnegPerronPair) {
  const auto a = tensor(2, oracle::nonneg_irreducible());
  const auto r = spectral_radius_nonneg(a);
  EXPECT_NEAR(r.pair.lambda, 10.907536, 1e-6);
  EXPECT_TRUE((r.pair.x.array() >= 0.0).all());
  EXPECT_TRUE((r.pair.y.array() >= 0.0).all());
  expect_eigenpair(a, r.pair, 1e-8);
  // Perron pair: x = (0.2936, 0.9559) or its (x, y) swap.
  const double x0 = std::min(r.pair.x[0], r.pair.y[1]);
  EXPECT_NEAR(x0, 0.293574, 1e-5);
}

TEST(SpectralRadius, RejectsNegativeEntries) {
  const auto a = tensor(2, oracle::z_tensor_not_spsd());
  try {
    (void)spectral_radius_nonneg(a);
    FAIL() << "expected NotNonnegative";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNonnegative);
  }
}

TEST(SpectralRadius, BoundsEveryNonnegSample) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const auto raw = oracle::random_tensor(2, rng, 0.0, 1.0);
    const auto a = tensor(2, raw);
    const double rho = spectral_radius_nonneg(a).pair.lambda;
    EXPECT_NEAR(rho, power_method_max(a).pair.lambda, 1e-7);
    for (int s = 0; s < 50; ++s) {
      Vector x(2), y(2);
      x << u(rng), u(rng);
      y << u(rng), u(rng);
      EXPECT_LE(contract_xxyy(a, x.normalized(), y.normalized()), rho + 1e-9);
    }
  }
}

TEST(Irreducibility, Examples) {
  EXPECT_TRUE(is_irreducible(tensor(2, oracle::nonneg_irreducible())).irreducible);
  const auto e = is_irreducible(ElasticityTensor::identity(2));
  EXPECT_FALSE(e.irreducible);
  EXPECT_EQ(e.witness, "x-slice (1,1)");
}
