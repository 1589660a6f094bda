#ifndef ELASTENS_ELASTENS_H
#define ELASTENS_ELASTENS_H

#include <stddef.h>
#include <stdint.h>

#if defined(ELASTENS_BUILDING_LIBRARY)
#define ELT_API __attribute__((visibility("default")))
#else
#define ELT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum elt_status {
  ELT_OK = 0,
  ELT_ERR_DIMENSION_TOO_SMALL,
  ELT_ERR_DIMENSION_TOO_LARGE,
  ELT_ERR_DIMENSION_MISMATCH,
  ELT_ERR_SYMMETRY_VIOLATION,
  ELT_ERR_NON_FINITE,
  ELT_ERR_PARSE,
  ELT_ERR_NO_CONVERGENCE,
  ELT_ERR_NOT_NONNEGATIVE,
  ELT_ERR_NOT_PSD,
  ELT_ERR_ASYMMETRIC_UNFOLDING,
  ELT_ERR_ASYMMETRIC,
  ELT_ERR_CONDITION_INAPPLICABLE,
  ELT_ERR_INVALID_ARGUMENT,
  ELT_ERR_INTERNAL
} elt_status;

typedef struct elt_tensor elt_tensor;

typedef enum elt_unfold_mode { ELT_UNFOLD_X = 0, ELT_UNFOLD_Y = 1 } elt_unfold_mode;

typedef struct elt_options {
  /* check-se epsilon; negative selects the default 1e-6 * max(0, max a_iikk) */
  double epsilon;
  double tol;
  int max_iter;
  int pocs_max_iter;
  uint64_t seed;
  int n_samples;
  /* enumeration directions per sphere, 0 for the default */
  int grid_density;
  int use_enumeration;
  double z_tol;
} elt_options;

typedef struct elt_pair {
  double lambda;
  double residual;
  /* caller-owned buffers of length dim */
  double* x;
  double* y;
} elt_pair;

ELT_API const char* elt_status_name(elt_status s);
/* Message of the last failing call on this thread, "" if none. */
ELT_API const char* elt_last_error(void);

ELT_API void elt_options_init(elt_options* opts);

ELT_API elt_status elt_tensor_load_file(const char* path, int symmetrize, elt_tensor** out);
ELT_API elt_status elt_tensor_from_json(const char* text, int symmetrize, elt_tensor** out);
/* n^4 entries, row-major in (i, j, k, l) */
ELT_API elt_status elt_tensor_from_dense(int n, const double* entries, int symmetrize,
                                         elt_tensor** out);
ELT_API elt_status elt_tensor_identity(int n, elt_tensor** out);
ELT_API void elt_tensor_free(elt_tensor* t);

ELT_API int elt_tensor_dim(const elt_tensor* t);
ELT_API elt_status elt_tensor_entries(const elt_tensor* t, double* out, size_t len);
ELT_API elt_status elt_tensor_to_json(const elt_tensor* t, char** out);

ELT_API elt_status elt_contract_xxyy(const elt_tensor* t, const double* x, const double* y,
                                     double* out);
/* out holds n^2 * n^2 doubles, row-major */
ELT_API elt_status elt_unfold(const elt_tensor* t, elt_unfold_mode mode, double* out, size_t len);
/* alpha * (A + beta E) */
ELT_API elt_status elt_shift(const elt_tensor* t, double alpha, double beta, elt_tensor** out);

ELT_API elt_status elt_power_max(const elt_tensor* t, const elt_options* opts, elt_pair* out);
ELT_API elt_status elt_power_min(const elt_tensor* t, const elt_options* opts, elt_pair* out);
ELT_API elt_status elt_spectral_radius(const elt_tensor* t, const elt_options* opts,
                                       elt_pair* out);
ELT_API elt_status elt_is_irreducible(const elt_tensor* t, int* out);

/* JSON reports; the returned string is released with elt_string_free. */
ELT_API elt_status elt_report_info(const elt_tensor* t, const elt_options* opts, char** out);
ELT_API elt_status elt_report_meig(const elt_tensor* t, const elt_options* opts, char** out);
ELT_API elt_status elt_report_check_se(const elt_tensor* t, const elt_options* opts, char** out);
ELT_API elt_status elt_report_classify(const elt_tensor* t, const elt_options* opts, char** out);
ELT_API elt_status elt_report_condition(const elt_tensor* t, int id, const elt_options* opts,
                                        char** out);
ELT_API elt_status elt_report_unfold(const elt_tensor* t, elt_unfold_mode mode, char** out);
ELT_API void elt_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
