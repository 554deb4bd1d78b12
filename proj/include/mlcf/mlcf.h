/* C interface to the mlcf core. Every call returns an mlcf_status; on
 * failure mlcf_last_error() holds a message for the calling thread.
 * Strings returned through char** are owned by the caller and released
 * with mlcf_string_free. Structured results are JSON documents. */
#ifndef MLCF_H
#define MLCF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MLCF_API __declspec(dllexport)
#else
#define MLCF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlcf_status {
  MLCF_OK = 0,
  MLCF_ERR_PARSE = 1,
  MLCF_ERR_UNKNOWN_SYMBOL = 2,
  MLCF_ERR_NON_POSITIVE = 3,
  MLCF_ERR_UNBOUND_VARIABLE = 4,
  MLCF_ERR_BUDGET = 5,
  MLCF_ERR_SIZE_CAP = 6,
  MLCF_ERR_UNKNOWN_NOTATION = 7,
  MLCF_ERR_ARITY = 8,
  MLCF_ERR_UNKNOWN_THEORY = 9,
  MLCF_ERR_SYMBOL_CLASH = 10,
  MLCF_ERR_INVALID_MODEL = 11,
  MLCF_ERR_INVALID_ARGUMENT = 12,
  MLCF_ERR_INTERNAL = 13
} mlcf_status;

typedef struct mlcf_model mlcf_model;
typedef struct mlcf_functor mlcf_functor;

MLCF_API const char* mlcf_version(void);
MLCF_API const char* mlcf_status_name(mlcf_status s);
MLCF_API const char* mlcf_last_error(void);
MLCF_API void mlcf_string_free(char* s);

/* models */
MLCF_API mlcf_status mlcf_model_from_json(const char* json, mlcf_model** out);
MLCF_API void mlcf_model_free(mlcf_model* m);
MLCF_API mlcf_status mlcf_model_to_json(const mlcf_model* m, char** out);
MLCF_API mlcf_status mlcf_model_size(const mlcf_model* m, size_t* out);

/* {"pattern":..., "elements":[...]}; rho is "x=e1,X={e1,e2}" or NULL */
MLCF_API mlcf_status mlcf_eval(mlcf_model* m, const char* pattern, const char* rho, char** out);
/* *out is 1 when the pattern is valid in m */
MLCF_API mlcf_status mlcf_holds(mlcf_model* m, const char* pattern, uint64_t budget, int* out);
/* {"mode":..., "iterates":[[...],...], "stabilized_at":k, "result":[...]} */
MLCF_API mlcf_status mlcf_fixpoint(mlcf_model* m, const char* var, const char* body, const char* rho,
                                   int greatest, char** out);

/* theories */
MLCF_API mlcf_status mlcf_builtin_theory(const char* name, int strict, char** out);
/* Checks the axioms of every theory in the text; theories may import the
 * builtins and earlier theories of the same text.
 * {"theories":[{"name":..., "results":[{"label","status","message"}]}]} */
MLCF_API mlcf_status mlcf_theory_check(mlcf_model* m, const char* theory_text, uint64_t budget,
                                       char** out);

/* functors */
MLCF_API mlcf_status mlcf_functor_parse(const char* spec, mlcf_functor** out);
MLCF_API void mlcf_functor_free(mlcf_functor* f);
/* {"functor", "container", "simplified", "shapes": {"shapes":[...], "fibers":{...}},
 *  "iso_verified", "fiber_profile": {"size": count}} */
MLCF_API mlcf_status mlcf_functor_describe(const mlcf_functor* f, char** out);
/* Approximants of the simplified container.
 * {"kind":"initial", "counts":[...], "levels":[[trees]], "stabilized_at":k|null} */
MLCF_API mlcf_status mlcf_functor_mu(const mlcf_functor* f, size_t depth, uint64_t cap, char** out);
MLCF_API mlcf_status mlcf_functor_nu(const mlcf_functor* f, size_t depth, uint64_t cap, char** out);
/* kind is "initial" or "final"; name defaults to "F" when NULL */
MLCF_API mlcf_status mlcf_functor_theory(const mlcf_functor* f, const char* kind, const char* name,
                                         int bounded_labels, char** out);
MLCF_API mlcf_status mlcf_functor_term_model(const mlcf_functor* f, size_t depth, const char* name,
                                             mlcf_model** out);
/* Coalgebra JSON over the simplified container; partition_json (optional)
 * receives {"classes":[[states]], "stages":k}. */
MLCF_API mlcf_status mlcf_functor_quotient_model(const mlcf_functor* f, const char* coalgebra_json,
                                                 const char* name, int phantoms, mlcf_model** out,
                                                 char** partition_json);

/* End-to-end case studies, "lists" or "moore". The JSON report carries a
 * top-level "passed" flag. */
MLCF_API mlcf_status mlcf_demo(const char* which, uint64_t seed, uint64_t budget, char** out);

#ifdef __cplusplus
}
#endif

#endif
