#ifndef LAGBASIS_H
#define LAGBASIS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define LGB_OP_OVERLAP 0

#define LGB_OP_R 1

#define LGB_OP_R2 2

#define LGB_OP_RINV 3

#define LGB_OP_RINV2 4

#define LGB_OP_RDDR 5

#define LGB_OP_DDR 6

#define LGB_OP_D2DR2 7

// Radial part of the Laplacian; accepted by `lgb_assemble` only.
#define LGB_OP_LAPLACIAN 100

typedef enum LgbStatus {
  LGB_STATUS_OK = 0,
  LGB_STATUS_NULL_POINTER = 1,
  LGB_STATUS_INVALID_ARGUMENT = 2,
  LGB_STATUS_UNSUPPORTED = 3,
  LGB_STATUS_ANNIHILATED = 4,
  LGB_STATUS_NOT_SYMMETRIC = 5,
  LGB_STATUS_CONVERGENCE = 6,
  LGB_STATUS_PARSE = 7,
  LGB_STATUS_BUFFER_TOO_SMALL = 8,
  LGB_STATUS_INTERNAL = 9,
} LgbStatus;

// A square operator block. Free with `lgb_matrix_free`.
typedef struct LgbMatrix LgbMatrix;

// A Gauss-Laguerre rule. Free with `lgb_quadrature_free`.
typedef struct LgbQuadrature LgbQuadrature;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code. Never null; do not free.
const char *lgb_status_message(int32_t status);

// Message for the last failed call on this thread, or "" after a success.
// Valid until the next library call on this thread; do not free.
const char *lgb_last_error(void);

// `<n_bra l_bra|op|n_ket l_ket>` at length scale `b`.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_me_general(uint32_t op,
                              uint32_t n_bra,
                              uint32_t l_bra,
                              uint32_t n_ket,
                              uint32_t l_ket,
                              double b,
                              double *out);

// The same element by direct numerical integration; works for any `l` pair.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_quadrature_me(uint32_t op,
                                 uint32_t n_bra,
                                 uint32_t l_bra,
                                 uint32_t n_ket,
                                 uint32_t l_ket,
                                 double b,
                                 double *out);

// Exact value at `b = 1` as `p/q*sqrt(r/1)`. Free the string with
// `lgb_string_free`.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_me_exact(uint32_t op,
                            uint32_t n_bra,
                            uint32_t l_bra,
                            uint32_t n_ket,
                            uint32_t l_ket,
                            char **out);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void lgb_string_free(char *s);

// `S_nl(r)` at length scale `b`.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_eval_s(uint32_t n, uint32_t l, double b, double r, double *out);

// Reduced element `<n_bra l||nabla^2||n_ket l>`.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_reduced_laplacian(uint32_t n_bra,
                                     uint32_t n_ket,
                                     uint32_t l,
                                     double b,
                                     double *out);

// Reduced element `<n_bra l_bra||nabla_1||n_ket l_ket>`; zero unless the
// angular momenta differ by one.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_reduced_gradient(uint32_t n_bra,
                                    uint32_t l_bra,
                                    uint32_t n_ket,
                                    uint32_t l_ket,
                                    double b,
                                    double *out);

// `<j1 m1 j2 m2|j m>` with every argument doubled, so half-integers are odd.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_clebsch_gordan(int32_t tj1,
                                  int32_t tm1,
                                  int32_t tj2,
                                  int32_t tm2,
                                  int32_t tj,
                                  int32_t tm,
                                  double *out);

// Same-`l` block of `op` (an `LGB_OP_*` code, including `LGB_OP_LAPLACIAN`)
// for `n = 0..=n_max`.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_assemble(uint32_t op,
                            uint32_t l,
                            uint32_t n_max,
                            double b,
                            struct LgbMatrix **out);

// `H = -1/2 nabla^2 - Z/r` on the `l` block, `n = 0..=n_max`.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_coulomb_hamiltonian(double z,
                                       double b,
                                       uint32_t l,
                                       uint32_t n_max,
                                       struct LgbMatrix **out);

// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_matrix_dim(const struct LgbMatrix *m, size_t *out);

// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_matrix_get(const struct LgbMatrix *m, size_t row, size_t col, double *out);

// Copies the matrix row-major into `buf`, which must hold `dim * dim` values.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_matrix_copy(const struct LgbMatrix *m, double *buf, size_t len);

// Lowest `count` eigenvalues, ascending, into `buf`; `written` receives how
// many were stored (fewer than `count` when the block is smaller).
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_matrix_eigenvalues(const struct LgbMatrix *m,
                                      size_t count,
                                      double *buf,
                                      size_t len,
                                      size_t *written);

// # Safety
// `m` must come from `lgb_assemble` or `lgb_coulomb_hamiltonian` and not
// have been freed. Null is ignored.
void lgb_matrix_free(struct LgbMatrix *m);

// `k`-point Gauss rule for the weight `x^alpha e^-x` on `(0, inf)`.
//
// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_quadrature_new(size_t k, double alpha, struct LgbQuadrature **out);

// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_quadrature_len(const struct LgbQuadrature *q, size_t *out);

// # Safety
// Out pointers must be null or valid for writes; handles must be null or live.
enum LgbStatus lgb_quadrature_get(const struct LgbQuadrature *q,
                                  size_t i,
                                  double *node,
                                  double *weight);

// # Safety
// `q` must come from `lgb_quadrature_new` and not have been freed. Null is
// ignored.
void lgb_quadrature_free(struct LgbQuadrature *q);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAGBASIS_H */
