// SPDX-License-Identifier: Apache-2.0
//
// Minimal C ABI over the Clarabel interior-point solver.
//
// Problem form:   minimize q'x   s.t.  A x + s = b,  s in K
// where K is a product of the cones listed in `cone_types` / `cone_dims`.
// A is passed as (row, col, value) triplets; duplicates are summed.

#ifndef CLARABEL_CAPI_H_
#define CLARABEL_CAPI_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum ClarabelConeType {
  CLARABEL_CONE_ZERO = 0,
  CLARABEL_CONE_NONNEG = 1,
  CLARABEL_CONE_EXP = 2,          // dim ignored (always 3)
  CLARABEL_CONE_PSD_TRIANGLE = 3  // dim = matrix side length
};

enum ClarabelStatus {
  CLARABEL_STATUS_UNSOLVED = 0,
  CLARABEL_STATUS_SOLVED = 1,
  CLARABEL_STATUS_PRIMAL_INFEASIBLE = 2,
  CLARABEL_STATUS_DUAL_INFEASIBLE = 3,
  CLARABEL_STATUS_ALMOST_SOLVED = 4,
  CLARABEL_STATUS_ALMOST_PRIMAL_INFEASIBLE = 5,
  CLARABEL_STATUS_ALMOST_DUAL_INFEASIBLE = 6,
  CLARABEL_STATUS_MAX_ITERATIONS = 7,
  CLARABEL_STATUS_MAX_TIME = 8,
  CLARABEL_STATUS_NUMERICAL_ERROR = 9,
  CLARABEL_STATUS_INSUFFICIENT_PROGRESS = 10,
  CLARABEL_STATUS_SETUP_ERROR = 100
};

typedef struct {
  double tol_gap_abs;
  double tol_gap_rel;
  double tol_feas;
  double tol_infeas_abs;
  double tol_infeas_rel;
  double static_reg; /* constant KKT regularization, Clarabel default 1e-8 */
  uint32_t max_iter;
  int32_t verbose;
} ClarabelCSettings;

typedef struct {
  int32_t status;
  uint32_t iterations;
  double obj_val;
  double obj_val_dual;
  double r_prim;
  double r_dual;
  double solve_time;
} ClarabelCInfo;

// x_out must hold n doubles, s_out m doubles (s_out may be NULL).
// Returns the status code (also stored in info->status).
int32_t clarabel_capi_solve(size_t n, size_t m, const double* q, size_t nnz,
                            const size_t* a_rows, const size_t* a_cols,
                            const double* a_vals, const double* b,
                            size_t n_cones, const int32_t* cone_types,
                            const size_t* cone_dims,
                            const ClarabelCSettings* settings, double* x_out,
                            double* s_out, ClarabelCInfo* info);

#ifdef __cplusplus
}
#endif

#endif  // CLARABEL_CAPI_H_
