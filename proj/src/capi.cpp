#include "elastens/elastens.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "elastens/error.hpp"
#include "elastens/reports.hpp"
#include "elastens/tensor_io.hpp"

struct elt_tensor {
  elastens::ElasticityTensor value;
};

namespace {

thread_local std::string last_error;

elt_status status_of(elastens::ErrorCode c) {
  using elastens::ErrorCode;
  switch (c) {
    case ErrorCode::DimensionTooSmall: return ELT_ERR_DIMENSION_TOO_SMALL;
    case ErrorCode::DimensionTooLarge: return ELT_ERR_DIMENSION_TOO_LARGE;
    case ErrorCode::DimensionMismatch: return ELT_ERR_DIMENSION_MISMATCH;
    case ErrorCode::SymmetryViolation: return ELT_ERR_SYMMETRY_VIOLATION;
    case ErrorCode::NonFiniteEntry: return ELT_ERR_NON_FINITE;
    case ErrorCode::ParseError: return ELT_ERR_PARSE;
    case ErrorCode::NoConvergence: return ELT_ERR_NO_CONVERGENCE;
    case ErrorCode::NotNonnegative: return ELT_ERR_NOT_NONNEGATIVE;
    case ErrorCode::NotPsd: return ELT_ERR_NOT_PSD;
    case ErrorCode::AsymmetricUnfolding: return ELT_ERR_ASYMMETRIC_UNFOLDING;
    case ErrorCode::Asymmetric: return ELT_ERR_ASYMMETRIC;
    case ErrorCode::ConditionInapplicable: return ELT_ERR_CONDITION_INAPPLICABLE;
    case ErrorCode::InvalidArgument: return ELT_ERR_INVALID_ARGUMENT;
  }
  return ELT_ERR_INTERNAL;
}

template <class F>
elt_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return ELT_OK;
  } catch (const elastens::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ELT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ELT_ERR_INTERNAL;
  }
}

elt_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return ELT_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

elastens::ReportOptions report_options(const elt_options* o) {
  elt_options d;
  elt_options_init(&d);
  if (!o) o = &d;
  if (!(o->tol > 0.0)) throw elastens::Error(elastens::ErrorCode::InvalidArgument, "tol must be > 0");
  if (o->max_iter < 1 || o->pocs_max_iter < 0 || o->n_samples < 1 || o->grid_density < 0) {
    throw elastens::Error(elastens::ErrorCode::InvalidArgument,
                          "max_iter >= 1, pocs_max_iter >= 0, n_samples >= 1 and grid >= 0 required");
  }
  if (!(o->z_tol >= 0.0)) throw elastens::Error(elastens::ErrorCode::InvalidArgument, "z_tol must be >= 0");
  elastens::ReportOptions r;
  r.power.tol = o->tol;
  r.power.max_iter = o->max_iter;
  r.power.seed = o->seed;
  r.enumerate.grid_density = o->grid_density;
  r.use_enumeration = o->use_enumeration != 0;
  if (o->epsilon >= 0.0) r.epsilon = o->epsilon;
  r.pocs_max_iter = o->pocs_max_iter;
  r.n_samples = o->n_samples;
  r.seed = o->seed;
  r.z_tol = o->z_tol;
  return r;
}

void fill_pair(const elastens::MEigenpair& p, elt_pair* out) {
  out->lambda = p.lambda;
  out->residual = p.residual;
  if (out->x) for (Eigen::Index i = 0; i < p.x.size(); ++i) out->x[i] = p.x[i];
  if (out->y) for (Eigen::Index i = 0; i < p.y.size(); ++i) out->y[i] = p.y[i];
}

template <class F>
elt_status report(const elt_tensor* t, char** out, F&& build) {
  if (!t) return null_argument("tensor");
  if (!out) return null_argument("out");
  return guarded([&] { *out = copy_string(build().dump(2) + "\n"); });
}

elastens::UnfoldMode mode_of(elt_unfold_mode m) {
  return m == ELT_UNFOLD_Y ? elastens::UnfoldMode::Y : elastens::UnfoldMode::X;
}

}  // namespace

extern "C" {

const char* elt_status_name(elt_status s) {
  switch (s) {
    case ELT_OK: return "OK";
    case ELT_ERR_DIMENSION_TOO_SMALL: return "DimensionTooSmall";
    case ELT_ERR_DIMENSION_TOO_LARGE: return "DimensionTooLarge";
    case ELT_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case ELT_ERR_SYMMETRY_VIOLATION: return "SymmetryViolation";
    case ELT_ERR_NON_FINITE: return "NonFiniteEntry";
    case ELT_ERR_PARSE: return "ParseError";
    case ELT_ERR_NO_CONVERGENCE: return "NoConvergence";
    case ELT_ERR_NOT_NONNEGATIVE: return "NotNonnegative";
    case ELT_ERR_NOT_PSD: return "NotPsd";
    case ELT_ERR_ASYMMETRIC_UNFOLDING: return "AsymmetricUnfolding";
    case ELT_ERR_ASYMMETRIC: return "Asymmetric";
    case ELT_ERR_CONDITION_INAPPLICABLE: return "ConditionInapplicable";
    case ELT_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case ELT_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* elt_last_error(void) { return last_error.c_str(); }

void elt_options_init(elt_options* opts) {
  if (!opts) return;
  opts->epsilon = -1.0;
  opts->tol = 1e-10;
  opts->max_iter = 10000;
  opts->pocs_max_iter = 50000;
  opts->seed = 42;
  opts->n_samples = 1000;
  opts->grid_density = 0;
  opts->use_enumeration = 1;
  opts->z_tol = 0.0;
}

elt_status elt_tensor_load_file(const char* path, int symmetrize, elt_tensor** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new elt_tensor{elastens::read_tensor_file(path, symmetrize != 0)}; });
}

elt_status elt_tensor_from_json(const char* text, int symmetrize, elt_tensor** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new elt_tensor{elastens::parse_tensor(text, symmetrize != 0)}; });
}

elt_status elt_tensor_from_dense(int n, const double* entries, int symmetrize, elt_tensor** out) {
  if (!entries) return null_argument("entries");
  if (!out) return null_argument("out");
  return guarded([&] {
    if (n < 2) throw elastens::Error(elastens::ErrorCode::DimensionTooSmall, "n must be >= 2");
    const std::span<const double> raw(entries, elastens::tensor_size(n));
    *out = new elt_tensor{elastens::ElasticityTensor::from_entries(n, raw, symmetrize != 0)};
  });
}

elt_status elt_tensor_identity(int n, elt_tensor** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new elt_tensor{elastens::ElasticityTensor::identity(n)}; });
}

void elt_tensor_free(elt_tensor* t) { delete t; }

int elt_tensor_dim(const elt_tensor* t) { return t ? t->value.dim() : 0; }

elt_status elt_tensor_entries(const elt_tensor* t, double* out, size_t len) {
  if (!t) return null_argument("tensor");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto e = t->value.entries();
    if (len < e.size()) throw elastens::Error(elastens::ErrorCode::DimensionMismatch, "buffer too small");
    std::copy(e.begin(), e.end(), out);
  });
}

elt_status elt_tensor_to_json(const elt_tensor* t, char** out) {
  return report(t, out, [&] { return elastens::tensor_to_json(t->value); });
}

elt_status elt_contract_xxyy(const elt_tensor* t, const double* x, const double* y, double* out) {
  if (!t) return null_argument("tensor");
  if (!x || !y || !out) return null_argument("x, y or out");
  return guarded([&] {
    const int n = t->value.dim();
    *out = elastens::contract_xxyy(t->value, Eigen::Map<const elastens::Vector>(x, n),
                                   Eigen::Map<const elastens::Vector>(y, n));
  });
}

elt_status elt_unfold(const elt_tensor* t, elt_unfold_mode mode, double* out, size_t len) {
  if (!t) return null_argument("tensor");
  if (!out) return null_argument("out");
  return guarded([&] {
    const elastens::Matrix m = elastens::unfold(t->value, mode_of(mode)).matrix;
    if (len < static_cast<size_t>(m.size())) {
      throw elastens::Error(elastens::ErrorCode::DimensionMismatch, "buffer too small");
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) out[r * m.cols() + c] = m(r, c);
  });
}

elt_status elt_shift(const elt_tensor* t, double alpha, double beta, elt_tensor** out) {
  if (!t) return null_argument("tensor");
  if (!out) return null_argument("out");
  return guarded([&] { *out = new elt_tensor{elastens::shift(t->value, alpha, beta)}; });
}

elt_status elt_power_max(const elt_tensor* t, const elt_options* opts, elt_pair* out) {
  if (!t) return null_argument("tensor");
  if (!out) return null_argument("out");
  return guarded([&] {
    fill_pair(elastens::power_method_max(t->value, report_options(opts).power).pair, out);
  });
}

elt_status elt_power_min(const elt_tensor* t, const elt_options* opts, elt_pair* out) {
  if (!t) return null_argument("tensor");
  if (!out) return null_argument("out");
  return guarded([&] {
    fill_pair(elastens::power_method_min(t->value, report_options(opts).power).pair, out);
  });
}

elt_status elt_spectral_radius(const elt_tensor* t, const elt_options* opts, elt_pair* out) {
  if (!t) return null_argument("tensor");
  if (!out) return null_argument("out");
  return guarded([&] {
    fill_pair(elastens::spectral_radius_nonneg(t->value, report_options(opts).power).pair, out);
  });
}

elt_status elt_is_irreducible(const elt_tensor* t, int* out) {
  if (!t) return null_argument("tensor");
  if (!out) return null_argument("out");
  return guarded([&] { *out = elastens::is_irreducible(t->value).irreducible ? 1 : 0; });
}

elt_status elt_report_info(const elt_tensor* t, const elt_options* opts, char** out) {
  return report(t, out, [&] { return elastens::info_report(t->value, report_options(opts)); });
}

elt_status elt_report_meig(const elt_tensor* t, const elt_options* opts, char** out) {
  return report(t, out, [&] { return elastens::meig_report(t->value, report_options(opts)); });
}

elt_status elt_report_check_se(const elt_tensor* t, const elt_options* opts, char** out) {
  return report(t, out, [&] { return elastens::check_se_report(t->value, report_options(opts)); });
}

elt_status elt_report_classify(const elt_tensor* t, const elt_options* opts, char** out) {
  return report(t, out, [&] { return elastens::classify_report(t->value, report_options(opts)); });
}

elt_status elt_report_condition(const elt_tensor* t, int id, const elt_options* opts, char** out) {
  return report(t, out, [&] {
    const auto r = elastens::check_condition(
        t->value, id, elastens::classify_options(report_options(opts)));
    return elastens::condition_json(r);
  });
}

elt_status elt_report_unfold(const elt_tensor* t, elt_unfold_mode mode, char** out) {
  return report(t, out, [&] { return elastens::unfold_report(t->value, mode_of(mode)); });
}

void elt_string_free(char* s) { std::free(s); }

}  // extern "C"
