//! Deterministic bounded minimization: a rectangular grid scan followed by
//! Nelder–Mead refinement from the best grid cells.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Converged once the spread of simplex values is below this ...
    pub value_tol: f64,
    /// ... and every vertex lies this close to the best one.
    pub point_tol: f64,
    /// Iterations with value spread below `value_tol` after which a flat
    /// valley is accepted as converged even if the simplex has not shrunk.
    pub flat_patience: usize,
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_iterations: 10_000, value_tol: 1e-13, point_tol: 1e-9, flat_patience: 200, initial_step: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        Self { lower, upper }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    fn clamp(&self, x: &mut [f64]) {
        for ((v, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(*lo, *hi);
        }
    }
}

/// Minimizes `f` inside `bounds` starting at `x0`. Trial points are clamped
/// into the box.
pub fn nelder_mead<F>(f: &F, x0: &[f64], bounds: &Bounds, opts: &NelderMeadOptions) -> Result<Minimum>
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let eval = |x: &mut Vec<f64>| {
        bounds.clamp(x);
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut start = x0.to_vec();
    let v0 = eval(&mut start);
    simplex.push((start.clone(), v0));
    for i in 0..n {
        let mut p = start.clone();
        let span = bounds.upper[i] - bounds.lower[i];
        let step = opts.initial_step * span.max(1e-3);
        // step inward when sitting on the upper bound
        p[i] = if p[i] + step <= bounds.upper[i] { p[i] + step } else { p[i] - step };
        let v = eval(&mut p);
        simplex.push((p, v));
    }

    let mut flat = 0usize;
    for iter in 0..opts.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .map(|(p, _)| p.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= opts.value_tol {
            flat += 1;
            if size <= opts.point_tol || flat >= opts.flat_patience {
                return Ok(Minimum { x: simplex[0].0.clone(), value: simplex[0].1, iterations: iter });
            }
        } else {
            flat = 0;
        }

        let centroid: Vec<f64> =
            (0..n).map(|k| simplex[..n].iter().map(|(p, _)| p[k]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + t * (w - c)).collect()
        };

        let mut reflected = along(-1.0);
        let fr = eval(&mut reflected);
        if fr < simplex[0].1 {
            let mut expanded = along(-2.0);
            let fe = eval(&mut expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
            continue;
        }
        let (mut contracted, limit) = if fr < simplex[n].1 { (along(-0.5), fr) } else { (along(0.5), simplex[n].1) };
        let fc = eval(&mut contracted);
        if fc < limit {
            simplex[n] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (p, v) in simplex.iter_mut().skip(1) {
            for (x, b) in p.iter_mut().zip(&best) {
                *x = b + 0.5 * (*x - b);
            }
            *v = eval(p);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Err(Error::NonConvergence { iterations: opts.max_iterations, spread: simplex[n].1 - simplex[0].1 })
}

/// Axis of a rectangular grid. `closed` includes the upper bound; periodic
/// angles use an open axis so the seam is not sampled twice.
#[derive(Debug, Clone, Copy)]
pub struct GridAxis {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    pub closed: bool,
}

impl GridAxis {
    pub fn closed(lower: f64, upper: f64, count: usize) -> Self {
        Self { lower, upper, count, closed: true }
    }

    pub fn periodic(lower: f64, upper: f64, count: usize) -> Self {
        Self { lower, upper, count, closed: false }
    }

    pub fn point(&self, i: usize) -> f64 {
        let cells = if self.closed { self.count.saturating_sub(1).max(1) } else { self.count };
        self.lower + (self.upper - self.lower) * i as f64 / cells as f64
    }
}

/// Evaluates `f` on the grid and returns the `keep` lowest points in
/// ascending value order. Ties keep grid (row-major) order.
pub fn grid_scan<F>(f: &F, axes: &[GridAxis], keep: usize) -> Vec<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> f64,
{
    let total: usize = axes.iter().map(|a| a.count).product();
    let mut best: Vec<(Vec<f64>, f64)> = Vec::with_capacity(keep + 1);
    let mut point = vec![0.0; axes.len()];
    for flat in 0..total {
        let mut rem = flat;
        for (k, axis) in axes.iter().enumerate().rev() {
            point[k] = axis.point(rem % axis.count);
            rem /= axis.count;
        }
        let v = f(&point);
        if best.len() < keep || v < best[best.len() - 1].1 {
            let pos = best.partition_point(|(_, b)| *b <= v);
            best.insert(pos, (point.clone(), v));
            best.truncate(keep);
        }
    }
    best
}

/// Grid scan, then Nelder–Mead from each of the `seeds` best cells; the
/// lowest refined point wins (first seed on ties).
pub fn grid_then_refine<F>(f: &F, axes: &[GridAxis], seeds: usize, opts: &NelderMeadOptions) -> Result<Minimum>
where
    F: Fn(&[f64]) -> f64,
{
    let bounds = Bounds::new(axes.iter().map(|a| a.lower).collect(), axes.iter().map(|a| a.upper).collect());
    let mut winner: Option<Minimum> = None;
    for (x0, _) in grid_scan(f, axes, seeds.max(1)) {
        let m = nelder_mead(f, &x0, &bounds, opts)?;
        if winner.as_ref().is_none_or(|w| m.value < w.value) {
            winner = Some(m);
        }
    }
    Ok(winner.expect("grid has at least one point"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_shifted_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 0.3).powi(2) + 2.0 * (x[1] + 0.7).powi(2) + 1.5;
        let axes = [GridAxis::closed(-2.0, 2.0, 9), GridAxis::closed(-2.0, 2.0, 9)];
        let m = grid_then_refine(&f, &axes, 2, &NelderMeadOptions::default()).unwrap();
        assert!((m.value - 1.5).abs() < 1e-12);
        assert!((m.x[0] - 0.3).abs() < 1e-6 && (m.x[1] + 0.7).abs() < 1e-6);
    }

    #[test]
    fn respects_bounds() {
        let f = |x: &[f64]| -x[0];
        let b = Bounds::new(vec![0.0], vec![1.0]);
        let m = nelder_mead(&f, &[0.2], &b, &NelderMeadOptions::default()).unwrap();
        assert!((m.x[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rosenbrock_converges() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let b = Bounds::new(vec![-3.0, -3.0], vec![3.0, 3.0]);
        let m = nelder_mead(&f, &[-1.2, 1.0], &b, &NelderMeadOptions::default()).unwrap();
        assert!(m.value < 1e-12, "{m:?}");
    }

    #[test]
    fn flat_function_terminates() {
        let f = |_: &[f64]| 0.0;
        let b = Bounds::new(vec![0.0; 4], vec![1.0; 4]);
        let m = nelder_mead(&f, &[0.5; 4], &b, &NelderMeadOptions::default()).unwrap();
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let b = Bounds::new(vec![-3.0, -3.0], vec![3.0, 3.0]);
        let opts = NelderMeadOptions { max_iterations: 5, ..Default::default() };
        assert!(matches!(nelder_mead(&f, &[-1.2, 1.0], &b, &opts), Err(Error::NonConvergence { iterations: 5, .. })));
    }

    #[test]
    fn periodic_axis_skips_the_seam() {
        let a = GridAxis::periodic(0.0, 1.0, 4);
        assert_eq!((0..4).map(|i| a.point(i)).collect::<Vec<_>>(), vec![0.0, 0.25, 0.5, 0.75]);
        let a = GridAxis::closed(0.0, 1.0, 5);
        assert_eq!(a.point(4), 1.0);
    }
}
