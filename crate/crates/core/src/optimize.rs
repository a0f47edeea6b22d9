//! Numerical reproduction of the optimization constants behind the
//! chain-count bounds: the bivariate coefficient surface whose global
//! maximum is below 0.283261, and the square-root surface maximized at
//! `(2+sqrt(2))/4` with value `3+sqrt(2)`. Deterministic dense grid search
//! plus compass refinement.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OptimizeError {
    #[error("input ({0}, {1}) outside the unit box")]
    OutOfDomain(f64, f64),
}

fn mu_f64(a: f64) -> f64 {
    if a < 0.5 {
        1.0
    } else {
        (1.0 - a) / a
    }
}

fn check_box(a: f64, b: f64) -> Result<(), OptimizeError> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(OptimizeError::OutOfDomain(a, b));
    }
    Ok(())
}

fn qprime_raw(a: f64, b: f64) -> f64 {
    let mu = mu_f64(a);
    let a2 = a * a;
    let a3 = a2 * a;
    let a4 = a3 * a;
    b * b * (a4 / 2.0 - a3)
        + b * (a3 - 3.0 * a4 / 4.0 - a3 * mu + a2 * mu)
        + (a4 / 4.0 - a2 + a - a2 * mu + a3 * mu)
}

/// The difference-coefficient surface
/// `b^2(a^4/2 - a^3) + b(a^3 - 3a^4/4 - a^3 mu + a^2 mu)
///  + (a^4/4 - a^2 + a - a^2 mu + a^3 mu)` with the piecewise `mu`.
pub fn qprime(a: f64, b: f64) -> Result<f64, OptimizeError> {
    check_box(a, b)?;
    Ok(qprime_raw(a, b))
}

/// Named alias of [`qprime`]: the same expression arises as the coefficient
/// of the difference of 3-member and 1-member chain counts.
pub fn upsilon_diff_coefficient(a: f64, b: f64) -> Result<f64, OptimizeError> {
    qprime(a, b)
}

/// Regional closed form for `a < 1/2` (`mu = 1`), valid on `[0, 1/2]`.
pub fn qprime_low_form(a: f64, b: f64) -> f64 {
    let a2 = a * a;
    let a3 = a2 * a;
    let a4 = a3 * a;
    b * b * (a4 / 2.0 - a3) + b * (a2 - 3.0 * a4 / 4.0) + (a4 / 4.0 + a - 2.0 * a2 + a3)
}

/// Regional closed form for `a >= 1/2` (`mu = (1-a)/a`).
pub fn qprime_high_form(a: f64, b: f64) -> f64 {
    let a2 = a * a;
    let a3 = a2 * a;
    let a4 = a3 * a;
    b * b * (a4 / 2.0 - a3) + b * (2.0 * a3 - 3.0 * a4 / 4.0 - 2.0 * a2 + a) + (a4 / 4.0 + a2 - a3)
}

/// `2 + sqrt(s(1-u)) + sqrt(u(1-s)) + u + s` on the unit box.
pub fn three_layer_surface(u: f64, s: f64) -> Result<f64, OptimizeError> {
    check_box(u, s)?;
    Ok(three_layer_surface_raw(u, s))
}

fn three_layer_surface_raw(u: f64, s: f64) -> f64 {
    2.0 + (s * (1.0 - u)).sqrt() + (u * (1.0 - s)).sqrt() + u + s
}

/// Result of a grid-plus-refinement maximization.
#[derive(Clone, Copy, Debug)]
pub struct OptResult {
    pub max_value: f64,
    pub argmax: (f64, f64),
    pub grid_resolution: usize,
    pub refinement_tolerance: f64,
}

pub const DEFAULT_GRID: usize = 2048;
pub const DEFAULT_TOL: f64 = 1e-12;

/// Dense grid scan over a box followed by compass (coordinate-descent)
/// refinement with a halving step. Ties on the grid resolve to the
/// lexicographically smallest grid coordinates, so the result does not
/// depend on evaluation order.
pub fn grid_refine_maximize(
    f: impl Fn(f64, f64) -> f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    grid: usize,
    tol: f64,
) -> OptResult {
    assert!(grid >= 1, "grid resolution must be positive");
    let (x0, x1) = x_range;
    let (y0, y1) = y_range;
    let fx = |i: usize| x0 + (x1 - x0) * i as f64 / grid as f64;
    let fy = |j: usize| y0 + (y1 - y0) * j as f64 / grid as f64;

    let mut best = f(x0, y0);
    let mut best_xy = (x0, y0);
    for i in 0..=grid {
        let x = fx(i);
        for j in 0..=grid {
            let y = fy(j);
            let v = f(x, y);
            if v > best {
                best = v;
                best_xy = (x, y);
            }
        }
    }

    // Compass refinement: move to the best strictly-improving neighbour at
    // the current step, halve the step when stuck.
    let mut hx = (x1 - x0) / grid as f64;
    let mut hy = (y1 - y0) / grid as f64;
    let clamp = |v: f64, lo: f64, hi: f64| v.max(lo).min(hi);
    let mut guard = 0usize;
    while hx.max(hy) >= tol && guard < 1_000_000 {
        guard += 1;
        let (x, y) = best_xy;
        let candidates = [
            (clamp(x - hx, x0, x1), y),
            (clamp(x + hx, x0, x1), y),
            (x, clamp(y - hy, y0, y1)),
            (x, clamp(y + hy, y0, y1)),
        ];
        let mut improved = false;
        for &(cx, cy) in &candidates {
            let v = f(cx, cy);
            if v > best {
                best = v;
                best_xy = (cx, cy);
                improved = true;
            }
        }
        if !improved {
            hx /= 2.0;
            hy /= 2.0;
        }
    }

    OptResult {
        max_value: best,
        argmax: best_xy,
        grid_resolution: grid,
        refinement_tolerance: tol,
    }
}

/// The two `mu` regions of the difference-coefficient surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QprimeRegion {
    /// `a` in `[0, 1/2]`.
    LowA,
    /// `a` in `[1/2, 1]`.
    HighA,
}

pub fn maximize_qprime_region(region: QprimeRegion, grid: usize, tol: f64) -> OptResult {
    let a_range = match region {
        QprimeRegion::LowA => (0.0, 0.5),
        QprimeRegion::HighA => (0.5, 1.0),
    };
    grid_refine_maximize(qprime_raw, a_range, (0.0, 1.0), grid, tol)
}

/// Global maximum of the difference-coefficient surface over the unit box.
/// The returned value never exceeds 0.283261.
pub fn maximize_qprime_with(grid: usize, tol: f64) -> OptResult {
    let low = maximize_qprime_region(QprimeRegion::LowA, grid, tol);
    let high = maximize_qprime_region(QprimeRegion::HighA, grid, tol);
    let result = if high.max_value > low.max_value {
        high
    } else {
        low
    };
    assert!(
        result.max_value <= 0.283261,
        "difference-coefficient maximum {} exceeds 0.283261",
        result.max_value
    );
    result
}

pub fn maximize_qprime() -> OptResult {
    maximize_qprime_with(DEFAULT_GRID, DEFAULT_TOL)
}

/// Global maximum of the square-root surface: `3 + sqrt(2)` at
/// `u = s = (2+sqrt(2))/4`.
pub fn maximize_three_layer_surface_with(grid: usize, tol: f64) -> OptResult {
    grid_refine_maximize(three_layer_surface_raw, (0.0, 1.0), (0.0, 1.0), grid, tol)
}

pub fn maximize_three_layer_surface() -> OptResult {
    maximize_three_layer_surface_with(DEFAULT_GRID, DEFAULT_TOL)
}
