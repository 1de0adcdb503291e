use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::linalg::{cholesky_solve, conjugate_gradient, dot};
use super::{Convergence, Family, FixedLine, GroupedDual, MaxEntModel};
use crate::error::FitError;
use crate::groups::AxisGroups;
use crate::math::abs;
use crate::matrix::Marginals;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Newton,
    /// Gradient descent scaled by the inverse Hessian diagonal.
    PreconditionedGradientDescent,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::Newton => "newton",
            Solver::PreconditionedGradientDescent => "pgd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub solver: Solver,
    /// Stop once `‖∇L‖² / (m̃ + ñ)` drops to this value.
    pub tol: f64,
    pub max_iter: usize,
    /// Above this many multipliers, Newton steps use conjugate gradient
    /// instead of a dense factorization.
    pub dense_limit: usize,
    /// Extra steps taken once `tol` is met, each kept only if it lowers the
    /// gradient norm further. For interior targets Newton is quadratic and
    /// one or two of these reach rounding level. Targets on a face of the
    /// marginal polytope force some cells to 0 or 1 without forcing a whole
    /// line; the multipliers then diverge and the error only halves per
    /// step, which is what the larger cap is for.
    pub refine: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            solver: Solver::Newton,
            tol: 1e-12,
            max_iter: 500,
            dense_limit: 4000,
            refine: 20,
        }
    }
}

/// One accepted iterate (iteration 0 is the starting point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub dual_value: f64,
    pub gradient_norm: f64,
}

const ARMIJO: f64 = 1e-4;
const SHRINK: f64 = 0.5;
const MIN_STEP: f64 = 1e-16;
const NEWTON_RIDGE: f64 = 1e-12;
const BALANCE_TOL: f64 = 1e-9;

/// Fits the maximum-entropy model whose expected marginals equal `targets`.
pub fn fit(
    targets: &Marginals,
    family: Family,
    options: &FitOptions,
) -> Result<MaxEntModel, FitError> {
    fit_traced(targets, family, options).map(|(model, _)| model)
}

/// Like [`fit`], also returning the per-iteration convergence trace.
pub fn fit_traced(
    targets: &Marginals,
    family: Family,
    options: &FitOptions,
) -> Result<(MaxEntModel, Vec<TraceEntry>), FitError> {
    validate(targets, family)?;
    let peeled = peel(targets, family)?;

    let row_groups = AxisGroups::from_subset(&peeled.row_targets, &peeled.free_rows);
    let col_groups = AxisGroups::from_subset(&peeled.col_targets, &peeled.free_cols);
    let dual = GroupedDual::new(
        family,
        row_groups
            .groups()
            .iter()
            .map(|g| (g.multiplicity() as f64, g.value)),
        col_groups
            .groups()
            .iter()
            .map(|g| (g.multiplicity() as f64, g.value)),
    );

    let init = match family {
        Family::Bernoulli => 0.0,
        Family::Geometric | Family::Exponential => -1.0,
    };
    let mut x = vec![init; dual.dim()];
    let outcome = minimize(&dual, &mut x, options);

    let n_rg = row_groups.len();
    let col_lambdas = x.split_off(n_rg);
    let model = MaxEntModel::from_parts(
        family,
        row_groups,
        col_groups,
        x,
        col_lambdas,
        peeled.fixed_rows,
        peeled.fixed_cols,
        outcome.convergence,
    )
    .expect("fitted parts are consistent");

    if outcome.convergence.converged {
        Ok((model, outcome.trace))
    } else {
        Err(FitError::NotConverged {
            iterations: outcome.convergence.iterations,
            gradient_norm: outcome.convergence.gradient_norm,
            model: Box::new(model),
            trace: outcome.trace,
        })
    }
}

fn validate(targets: &Marginals, family: Family) -> Result<(), FitError> {
    let (m, n) = targets.shape();
    let check = |line: &'static str, values: &[f64], max: f64| {
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 || value > max {
                return Err(FitError::TargetOutOfRange {
                    line,
                    index,
                    value,
                    max,
                });
            }
        }
        Ok(())
    };
    let (row_max, col_max) = match family {
        Family::Bernoulli => (n as f64, m as f64),
        _ => (f64::INFINITY, f64::INFINITY),
    };
    check("row", &targets.row_sums, row_max)?;
    check("column", &targets.col_sums, col_max)?;

    let row_total = targets.row_total();
    let col_total = targets.col_total();
    if abs(row_total - col_total) > BALANCE_TOL * row_total.max(col_total) {
        return Err(FitError::InconsistentTotals {
            row_total,
            col_total,
        });
    }
    Ok(())
}

struct Peeled {
    row_targets: Vec<f64>,
    col_targets: Vec<f64>,
    free_rows: Vec<usize>,
    free_cols: Vec<usize>,
    fixed_rows: Vec<FixedLine>,
    fixed_cols: Vec<FixedLine>,
}

/// Removes lines whose targets sit at the boundary (zero, or a binary line
/// that must be all ones), subtracting their ones from the crossing lines, and
/// repeats until no boundary line is left.
fn peel(targets: &Marginals, family: Family) -> Result<Peeled, FitError> {
    let (m, n) = targets.shape();
    let eps = 1e-12 * (m.max(n).max(1) as f64);
    let mut rows = targets.row_sums.clone();
    let mut cols = targets.col_sums.clone();
    let mut row_free = vec![true; m];
    let mut col_free = vec![true; n];
    let mut fixed_rows = Vec::new();
    let mut fixed_cols = Vec::new();
    let mut order = 0u32;

    // one pass over one axis; returns whether anything was fixed
    fn pass(
        family: Family,
        eps: f64,
        order: u32,
        own: &mut [f64],
        own_free: &mut [bool],
        other: &mut [f64],
        other_free: &[bool],
        fixed: &mut Vec<FixedLine>,
    ) -> Result<bool, FitError> {
        let n_other = other_free.iter().filter(|&&f| f).count() as f64;
        let mut newly = Vec::new();
        for i in 0..own.len() {
            if !own_free[i] {
                continue;
            }
            let t = own[i];
            if t < -eps || (family == Family::Bernoulli && t > n_other + eps) {
                return Err(FitError::Infeasible {
                    reason: "a reduced target is outside the range left by fixed lines",
                });
            }
            if t <= eps {
                newly.push((i, false));
            } else if family == Family::Bernoulli && t >= n_other - eps {
                newly.push((i, true));
            } else if n_other == 0.0 {
                return Err(FitError::Infeasible {
                    reason: "a positive target has no free cells left",
                });
            }
        }
        for &(i, value) in &newly {
            own_free[i] = false;
            if value {
                for (j, t) in other.iter_mut().enumerate() {
                    if other_free[j] {
                        *t -= 1.0;
                    }
                }
            }
            fixed.push(FixedLine {
                index: i,
                value,
                order,
            });
        }
        Ok(!newly.is_empty())
    }

    loop {
        let mut changed = false;
        if pass(
            family,
            eps,
            order,
            &mut rows,
            &mut row_free,
            &mut cols,
            &col_free,
            &mut fixed_rows,
        )? {
            order += 1;
            changed = true;
        }
        if pass(
            family,
            eps,
            order,
            &mut cols,
            &mut col_free,
            &mut rows,
            &row_free,
            &mut fixed_cols,
        )? {
            order += 1;
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let free_rows: Vec<usize> = (0..m).filter(|&i| row_free[i]).collect();
    let free_cols: Vec<usize> = (0..n).filter(|&j| col_free[j]).collect();
    let rt: f64 = free_rows.iter().map(|&i| rows[i]).sum();
    let ct: f64 = free_cols.iter().map(|&j| cols[j]).sum();
    if abs(rt - ct) > BALANCE_TOL * rt.max(ct) + eps {
        return Err(FitError::Infeasible {
            reason: "free row and column targets no longer balance after fixing lines",
        });
    }
    Ok(Peeled {
        row_targets: rows,
        col_targets: cols,
        free_rows,
        free_cols,
        fixed_rows,
        fixed_cols,
    })
}

struct Outcome {
    convergence: Convergence,
    trace: Vec<TraceEntry>,
}

fn minimize(dual: &GroupedDual, x: &mut [f64], options: &FitOptions) -> Outcome {
    let mut g = dual.gradient(x).expect("starting point is feasible");
    let mut gn = GroupedDual::normalized_gradient_norm(&g);
    let mut value = dual.value(x).expect("starting point is feasible");
    let mut trace = vec![TraceEntry {
        iteration: 0,
        dual_value: value,
        gradient_norm: gn,
    }];
    let mut iterations = 0;

    let mut refining = 0;
    while iterations < options.max_iter {
        if gn <= options.tol {
            if refining == options.refine || gn == 0.0 {
                break;
            }
            refining += 1;
        }
        let mut d = match options.solver {
            Solver::Newton => newton_direction(dual, x, &g, options.dense_limit),
            Solver::PreconditionedGradientDescent => None,
        }
        .unwrap_or_else(|| jacobi_direction(dual, x, &g));
        let mut slope = dot(&g, &d);
        if !(slope < 0.0) {
            d = jacobi_direction(dual, x, &g);
            slope = dot(&g, &d);
        }

        let Some(t) = line_search(dual, x, &d, slope) else {
            break;
        };
        let trial: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
        let trial_g = dual
            .gradient(&trial)
            .expect("line search keeps iterates feasible");
        let trial_gn = GroupedDual::normalized_gradient_norm(&trial_g);
        if refining > 0 && !(trial_gn < gn) {
            break;
        }
        x.copy_from_slice(&trial);
        iterations += 1;
        g = trial_g;
        gn = trial_gn;
        value = dual.value(x).expect("line search keeps iterates feasible");
        trace.push(TraceEntry {
            iteration: iterations,
            dual_value: value,
            gradient_norm: gn,
        });
    }

    let converged = gn <= options.tol;
    Outcome {
        convergence: Convergence {
            iterations,
            gradient_norm: gn,
            dual_value: value,
            converged,
        },
        trace,
    }
}

/// Backtracking with the Armijo condition; also backs off from steps that
/// leave the family's domain.
fn line_search(dual: &GroupedDual, x: &[f64], d: &[f64], slope: f64) -> Option<f64> {
    let mut t = 1.0;
    while t >= MIN_STEP {
        if let Ok(change) = dual.change(x, d, t) {
            if change <= ARMIJO * t * slope {
                return Some(t);
            }
        }
        t *= SHRINK;
    }
    None
}

fn jacobi_direction(dual: &GroupedDual, x: &[f64], g: &[f64]) -> Vec<f64> {
    let diag = dual.hessian_diagonal(x).expect("feasible iterate");
    g.iter()
        .zip(&diag)
        .map(|(gi, hi)| if *hi > 0.0 { -gi / hi } else { -gi })
        .collect()
}

/// Newton step. The dual is invariant under shifting all row multipliers up
/// and all column multipliers down by the same amount, so the Hessian is
/// singular along that direction; the last column multiplier is held fixed
/// to remove it.
fn newton_direction(
    dual: &GroupedDual,
    x: &[f64],
    g: &[f64],
    dense_limit: usize,
) -> Option<Vec<f64>> {
    let dim = dual.dim();
    let gauge = dual.n_row_groups() > 0 && dual.n_col_groups() > 0;
    if dim > dense_limit {
        return Some(cg_direction(dual, x, g));
    }
    let h = dual.hessian(x).ok()?;
    let reduced = if gauge { dim - 1 } else { dim };
    let mut a = vec![0.0; reduced * reduced];
    for i in 0..reduced {
        for j in 0..reduced {
            a[i * reduced + j] = h[i * dim + j];
        }
        a[i * reduced + i] += NEWTON_RIDGE * (1.0 + h[i * dim + i]);
    }
    let rhs: Vec<f64> = g[..reduced].iter().map(|v| -v).collect();
    let mut d = cholesky_solve(&a, &rhs)?;
    if gauge {
        d.push(0.0);
    }
    if d.iter().all(|v| v.is_finite()) {
        Some(d)
    } else {
        None
    }
}

fn cg_direction(dual: &GroupedDual, x: &[f64], g: &[f64]) -> Vec<f64> {
    let nr = dual.n_row_groups();
    let nc = dual.n_col_groups();
    let diag = dual.hessian_diagonal(x).expect("feasible iterate");
    // off-diagonal block W[k][l] = m̃_k ñ_l var_kl, recovered from the Hessian rows
    let h = dual.hessian(x).expect("feasible iterate");
    let dim = nr + nc;
    let mut w = vec![0.0; nr * nc];
    for k in 0..nr {
        for l in 0..nc {
            w[k * nc + l] = h[k * dim + nr + l];
        }
    }
    drop(h);
    let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
    conjugate_gradient(
        |v, out| {
            for (i, o) in out.iter_mut().enumerate() {
                *o = diag[i] * v[i];
            }
            for k in 0..nr {
                for l in 0..nc {
                    let wkl = w[k * nc + l];
                    out[k] += wkl * v[nr + l];
                    out[nr + l] += wkl * v[k];
                }
            }
        },
        &diag,
        &rhs,
        1e-10,
        dim.clamp(10, 2000),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn targets(rows: &[f64], cols: &[f64]) -> Marginals {
        Marginals::new(rows.to_vec(), cols.to_vec())
    }

    #[test]
    fn symmetric_two_by_two_is_uniform() {
        let (model, trace) = fit_traced(
            &targets(&[1.0, 1.0], &[1.0, 1.0]),
            Family::Bernoulli,
            &FitOptions::default(),
        )
        .unwrap();
        assert_eq!(trace.len(), 1);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(model.cell_param(i, j).unwrap(), 0.5);
            }
        }
    }

    #[test]
    fn inconsistent_totals_are_rejected() {
        let err = fit(
            &targets(&[1.0, 2.0], &[1.0, 1.0]),
            Family::Bernoulli,
            &FitOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, FitError::InconsistentTotals { .. }));
    }

    #[test]
    fn bernoulli_targets_must_fit_the_shape() {
        let err = fit(
            &targets(&[3.0, 0.0], &[1.5, 1.5]),
            Family::Bernoulli,
            &FitOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            FitError::TargetOutOfRange { line: "row", .. }
        ));
    }

    #[test]
    fn infeasible_after_peeling() {
        // row 0 must be full, so column 1 needs at least one; but its target is 0
        let err = fit(
            &targets(&[2.0, 0.0], &[2.0, 0.0]),
            Family::Bernoulli,
            &FitOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, FitError::Infeasible { .. }), "{err:?}");
    }

    #[test]
    fn reproduces_targets_on_three_by_three() {
        let t = targets(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
        for solver in [Solver::Newton, Solver::PreconditionedGradientDescent] {
            let opts = FitOptions {
                solver,
                ..FitOptions::default()
            };
            let model = fit(&t, Family::Bernoulli, &opts).unwrap();
            let e = model.expected_marginals();
            for (a, b) in e.row_sums.iter().zip(&t.row_sums) {
                assert!((a - b).abs() < 1e-8, "{solver:?}: {a} vs {b}");
            }
            for (a, b) in e.col_sums.iter().zip(&t.col_sums) {
                assert!((a - b).abs() < 1e-8);
            }
            assert!(model.convergence().gradient_norm <= 1e-12);
        }
    }

    #[test]
    fn valued_families_reproduce_targets() {
        let t = targets(&[3.0, 0.5, 7.25], &[2.0, 4.0, 4.75]);
        for family in [Family::Geometric, Family::Exponential] {
            let model = fit(&t, family, &FitOptions::default()).unwrap();
            let e = model.expected_marginals();
            for (a, b) in e
                .row_sums
                .iter()
                .chain(&e.col_sums)
                .zip(t.row_sums.iter().chain(&t.col_sums))
            {
                assert!((a - b).abs() < 1e-8, "{family:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn valued_zero_rows_are_fixed() {
        let t = targets(&[0.0, 4.0], &[1.0, 3.0]);
        let model = fit(&t, Family::Geometric, &FitOptions::default()).unwrap();
        assert_eq!(model.fixed_rows().len(), 1);
        assert_eq!(model.cell_param(0, 1).unwrap(), 1.0);
    }

    #[test]
    fn dual_value_never_increases() {
        let t = targets(&[4.0, 1.0, 3.0, 4.0], &[3.0, 3.0, 2.0, 1.0, 2.0, 1.0]);
        for solver in [Solver::Newton, Solver::PreconditionedGradientDescent] {
            let opts = FitOptions {
                solver,
                ..FitOptions::default()
            };
            let (_, trace) = fit_traced(&t, Family::Bernoulli, &opts).unwrap();
            for w in trace.windows(2) {
                assert!(w[1].dual_value <= w[0].dual_value + 1e-12 * w[0].dual_value.abs());
            }
        }
    }

    #[test]
    fn conjugate_gradient_path_converges() {
        let t = targets(&[4.0, 1.0, 3.0, 4.0], &[3.0, 3.0, 2.0, 1.0, 2.0, 1.0]);
        let opts = FitOptions {
            dense_limit: 0,
            ..FitOptions::default()
        };
        let model = fit(&t, Family::Bernoulli, &opts).unwrap();
        assert!(model.convergence().gradient_norm <= 1e-12);
    }

    #[test]
    fn iteration_cap_returns_partial_model() {
        let t = targets(&[4.0, 1.0, 3.0, 4.0], &[3.0, 3.0, 2.0, 1.0, 2.0, 1.0]);
        let opts = FitOptions {
            max_iter: 1,
            ..FitOptions::default()
        };
        match fit(&t, Family::Bernoulli, &opts).unwrap_err() {
            FitError::NotConverged {
                iterations, model, ..
            } => {
                assert_eq!(iterations, 1);
                assert!(!model.convergence().converged);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
