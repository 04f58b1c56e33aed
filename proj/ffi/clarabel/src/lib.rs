// SPDX-License-Identifier: Apache-2.0
//
// C ABI over clarabel::solver::DefaultSolver. See include/clarabel_capi.h.

#![allow(non_snake_case)]

use clarabel::algebra::*;
use clarabel::solver::*;
use std::slice;

#[repr(C)]
pub struct ClarabelCSettings {
    tol_gap_abs: f64,
    tol_gap_rel: f64,
    tol_feas: f64,
    tol_infeas_abs: f64,
    tol_infeas_rel: f64,
    static_reg: f64,
    max_iter: u32,
    verbose: i32,
}

#[repr(C)]
pub struct ClarabelCInfo {
    status: i32,
    iterations: u32,
    obj_val: f64,
    obj_val_dual: f64,
    r_prim: f64,
    r_dual: f64,
    solve_time: f64,
}

const SETUP_ERROR: i32 = 100;

fn status_code(s: SolverStatus) -> i32 {
    match s {
        SolverStatus::Unsolved => 0,
        SolverStatus::Solved => 1,
        SolverStatus::PrimalInfeasible => 2,
        SolverStatus::DualInfeasible => 3,
        SolverStatus::AlmostSolved => 4,
        SolverStatus::AlmostPrimalInfeasible => 5,
        SolverStatus::AlmostDualInfeasible => 6,
        SolverStatus::MaxIterations => 7,
        SolverStatus::MaxTime => 8,
        SolverStatus::NumericalError => 9,
        _ => 10,
    }
}

/// # Safety
/// All pointers must reference buffers of the sizes documented in the header.
#[no_mangle]
pub unsafe extern "C" fn clarabel_capi_solve(
    n: usize,
    m: usize,
    q: *const f64,
    nnz: usize,
    a_rows: *const usize,
    a_cols: *const usize,
    a_vals: *const f64,
    b: *const f64,
    n_cones: usize,
    cone_types: *const i32,
    cone_dims: *const usize,
    settings: *const ClarabelCSettings,
    x_out: *mut f64,
    s_out: *mut f64,
    info: *mut ClarabelCInfo,
) -> i32 {
    let info = &mut *info;
    info.status = SETUP_ERROR;
    info.iterations = 0;

    let q = slice::from_raw_parts(q, n).to_vec();
    let b = slice::from_raw_parts(b, m).to_vec();
    let (rows, cols, vals) = if nnz == 0 {
        (Vec::new(), Vec::new(), Vec::new())
    } else {
        (
            slice::from_raw_parts(a_rows, nnz).to_vec(),
            slice::from_raw_parts(a_cols, nnz).to_vec(),
            slice::from_raw_parts(a_vals, nnz).to_vec(),
        )
    };
    if rows.iter().any(|&r| r >= m) || cols.iter().any(|&c| c >= n) {
        return SETUP_ERROR;
    }
    let A = CscMatrix::new_from_triplets(m, n, rows, cols, vals);
    let P = CscMatrix::<f64>::zeros((n, n));

    let types = slice::from_raw_parts(cone_types, n_cones);
    let dims = slice::from_raw_parts(cone_dims, n_cones);
    let mut cones: Vec<SupportedConeT<f64>> = Vec::with_capacity(n_cones);
    for (&t, &d) in types.iter().zip(dims.iter()) {
        let cone = match t {
            0 => ZeroConeT(d),
            1 => NonnegativeConeT(d),
            2 => ExponentialConeT(),
            3 => PSDTriangleConeT(d),
            _ => return SETUP_ERROR,
        };
        cones.push(cone);
    }

    let user = &*settings;
    let settings = DefaultSettings::<f64> {
        tol_gap_abs: user.tol_gap_abs,
        tol_gap_rel: user.tol_gap_rel,
        tol_feas: user.tol_feas,
        tol_infeas_abs: user.tol_infeas_abs,
        tol_infeas_rel: user.tol_infeas_rel,
        static_regularization_constant: user.static_reg,
        max_iter: user.max_iter,
        verbose: user.verbose != 0,
        max_threads: 1,
        ..DefaultSettings::default()
    };

    let mut solver = match DefaultSolver::new(&P, &q, &A, &b, &cones, settings) {
        Ok(s) => s,
        Err(_) => return SETUP_ERROR,
    };
    solver.solve();

    let sol = &solver.solution;
    slice::from_raw_parts_mut(x_out, n).copy_from_slice(&sol.x);
    if !s_out.is_null() {
        slice::from_raw_parts_mut(s_out, m).copy_from_slice(&sol.s);
    }
    info.status = status_code(sol.status);
    info.iterations = sol.iterations;
    info.obj_val = sol.obj_val;
    info.obj_val_dual = sol.obj_val_dual;
    info.r_prim = sol.r_prim;
    info.r_dual = sol.r_dual;
    info.solve_time = sol.solve_time;
    info.status
}
