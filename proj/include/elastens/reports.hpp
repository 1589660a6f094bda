#pragma once

#include "elastens/json.hpp"
#include "elastens/mclass.hpp"
#include "elastens/meigen.hpp"
#include "elastens/pocs.hpp"
#include "elastens/tensor.hpp"

// JSON documents behind the CLI subcommands. Everything here is deterministic
// for a fixed input and options (no timings, no addresses).
namespace elastens {

nlohmann::json pair_json(const MEigenpair& p);
nlohmann::json spectrum_json(const MSpectrum& s);
nlohmann::json certificate_json(const PsdCertificate& c);
PsdCertificate certificate_from_json(const nlohmann::json& doc);
nlohmann::json condition_json(const ConditionResult& r);
nlohmann::json matrix_json(const Matrix& m);

struct ReportOptions {
  PowerOptions power;
  EnumerateOptions enumerate;
  bool use_enumeration = true;
  /// check-se: epsilon for A - eps E; unset picks 1e-6 * max(0, max a_iikk).
  std::optional<double> epsilon;
  int pocs_max_iter = 50000;
  int n_samples = 1000;
  std::uint64_t seed = 42;
  double z_tol = 0.0;
};

/// Sign decisions on the smallest M-eigenvalue use 1e-8 * max(1, max|a|).
double eigenvalue_decision_tol(const ElasticityTensor& a);

double default_epsilon(const ElasticityTensor& a);

nlohmann::json info_report(const ElasticityTensor& a, const ReportOptions& opts = {});

/// "verdict": SE_HOLDS | SE_FAILS | UNDECIDED
nlohmann::json meig_report(const ElasticityTensor& a, const ReportOptions& opts = {});

/// "verdict": CERTIFIED_M_PD | CERTIFIED_M_PSD | SE_HOLDS | SE_FAILS | UNDECIDED
nlohmann::json check_se_report(const ElasticityTensor& a, const ReportOptions& opts = {});

/// "verdict": the classification verdict
nlohmann::json classify_report(const ElasticityTensor& a, const ReportOptions& opts = {});

nlohmann::json unfold_report(const ElasticityTensor& a, UnfoldMode mode);

ClassifyOptions classify_options(const ReportOptions& opts);

}  // namespace elastens
