#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "elastens/elastens.h"

namespace {

const std::string kData = ELASTENS_DATA_DIR;

struct Handle {
  elt_tensor* t = nullptr;
  ~Handle() { elt_tensor_free(t); }
};

nlohmann::json take(char* s) {
  auto doc = nlohmann::json::parse(s);
  elt_string_free(s);
  return doc;
}

elt_options defaults() {
  elt_options o;
  elt_options_init(&o);
  return o;
}

}  // namespace

TEST(CApi, LoadAndInspect) {
  Handle h;
  ASSERT_EQ(elt_tensor_load_file((kData + "/z_tensor_not_spsd.json").c_str(), 0, &h.t), ELT_OK);
  EXPECT_EQ(elt_tensor_dim(h.t), 2);
  std::vector<double> e(16);
  ASSERT_EQ(elt_tensor_entries(h.t, e.data(), e.size()), ELT_OK);
  EXPECT_EQ(e[0], 13.0);
  EXPECT_EQ(elt_tensor_entries(h.t, e.data(), 3), ELT_ERR_DIMENSION_MISMATCH);

  std::vector<double> m(16);
  ASSERT_EQ(elt_unfold(h.t, ELT_UNFOLD_X, m.data(), m.size()), ELT_OK);
  EXPECT_EQ(m[3], -4.0);

  const double x[2] = {1.0, 0.0}, y[2] = {0.0, 1.0};
  double f = 0.0;
  ASSERT_EQ(elt_contract_xxyy(h.t, x, y, &f), ELT_OK);
  EXPECT_EQ(f, 2.0);
}

TEST(CApi, ErrorsMapToStatusCodes) {
  elt_tensor* t = nullptr;
  EXPECT_EQ(elt_tensor_load_file((kData + "/malformed.json").c_str(), 0, &t), ELT_ERR_PARSE);
  EXPECT_EQ(t, nullptr);
  EXPECT_NE(std::string(elt_last_error()).find("malformed JSON"), std::string::npos);
  EXPECT_EQ(elt_tensor_load_file("/nonexistent.json", 0, &t), ELT_ERR_PARSE);
  EXPECT_EQ(elt_tensor_identity(1, &t), ELT_ERR_DIMENSION_TOO_SMALL);
  const double bad[16] = {0, 1};
  EXPECT_EQ(elt_tensor_from_dense(2, bad, 0, &t), ELT_ERR_SYMMETRY_VIOLATION);
  EXPECT_EQ(elt_tensor_from_json("{}", 0, nullptr), ELT_ERR_INVALID_ARGUMENT);
  EXPECT_STREQ(elt_status_name(ELT_ERR_NOT_PSD), "NotPsd");
}

TEST(CApi, NonnegativityRequired) {
  Handle h;
  ASSERT_EQ(elt_tensor_load_file((kData + "/z_tensor_not_spsd.json").c_str(), 0, &h.t), ELT_OK);
  auto o = defaults();
  double x[2], y[2];
  elt_pair p{0, 0, x, y};
  EXPECT_EQ(elt_spectral_radius(h.t, &o, &p), ELT_ERR_NOT_NONNEGATIVE);
  ASSERT_EQ(elt_power_min(h.t, &o, &p), ELT_OK);
  EXPECT_NEAR(p.lambda, 0.244192, 1e-5);
  o.tol = 0.0;
  EXPECT_EQ(elt_power_min(h.t, &o, &p), ELT_ERR_INVALID_ARGUMENT);
}

TEST(CApi, PerronPair) {
  Handle h;
  ASSERT_EQ(elt_tensor_load_file((kData + "/nonneg_irreducible.json").c_str(), 0, &h.t), ELT_OK);
  auto o = defaults();
  double x[2], y[2];
  elt_pair p{0, 0, x, y};
  ASSERT_EQ(elt_spectral_radius(h.t, &o, &p), ELT_OK);
  EXPECT_NEAR(p.lambda, 10.907536, 1e-6);
  EXPECT_GE(x[0], 0.0);
  EXPECT_GE(y[1], 0.0);
  int irr = 0;
  ASSERT_EQ(elt_is_irreducible(h.t, &irr), ELT_OK);
  EXPECT_EQ(irr, 1);
}

TEST(CApi, ShiftAndRoundTrip) {
  Handle e, s, back;
  ASSERT_EQ(elt_tensor_identity(2, &e.t), ELT_OK);
  ASSERT_EQ(elt_shift(e.t, -1.0, 0.0, &s.t), ELT_OK);
  char* text = nullptr;
  ASSERT_EQ(elt_tensor_to_json(s.t, &text), ELT_OK);
  ASSERT_EQ(elt_tensor_from_json(text, 0, &back.t), ELT_OK);
  elt_string_free(text);
  std::vector<double> a(16), b(16);
  elt_tensor_entries(s.t, a.data(), 16);
  elt_tensor_entries(back.t, b.data(), 16);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a[0], -1.0);
}

TEST(CApi, Reports) {
  Handle h;
  ASSERT_EQ(elt_tensor_load_file((kData + "/z_tensor_not_spsd.json").c_str(), 0, &h.t), ELT_OK);
  auto o = defaults();
  o.n_samples = 100;
  char* out = nullptr;
  ASSERT_EQ(elt_report_classify(h.t, &o, &out), ELT_OK);
  const auto c = take(out);
  EXPECT_EQ(c["verdict"], "NONSINGULAR_M");
  EXPECT_EQ(c["conditions"].size(), 13u);

  ASSERT_EQ(elt_report_meig(h.t, &o, &out), ELT_OK);
  EXPECT_EQ(take(out)["verdict"], "SE_HOLDS");

  ASSERT_EQ(elt_report_check_se(h.t, &o, &out), ELT_OK);
  EXPECT_EQ(take(out)["verdict"], "CERTIFIED_M_PD");

  ASSERT_EQ(elt_report_condition(h.t, 6, &o, &out), ELT_OK);
  EXPECT_EQ(take(out)["status"], "pass");
  EXPECT_EQ(elt_report_condition(h.t, 0, &o, &out), ELT_ERR_INVALID_ARGUMENT);

  ASSERT_EQ(elt_report_unfold(h.t, ELT_UNFOLD_Y, &out), ELT_OK);
  EXPECT_EQ(take(out)["rows"], 4);
}

TEST(CApi, ConditionInapplicable) {
  Handle h;
  ASSERT_EQ(elt_tensor_load_file((kData + "/nonneg_irreducible.json").c_str(), 0, &h.t), ELT_OK);
  auto o = defaults();
  char* out = nullptr;
  EXPECT_EQ(elt_report_condition(h.t, 7, &o, &out), ELT_ERR_CONDITION_INAPPLICABLE);
  EXPECT_EQ(out, nullptr);
}
