//! Local optimizers on the complex unit sphere and on the set of density
//! matrices.

use crate::linalg::{fix_phase, frobenius_norm, project_to_density, real, trace, CMatrix, CVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereOptions {
    pub max_iterations: usize,
    /// Stop once the Riemannian gradient norm falls below this.
    pub grad_tol: f64,
    /// Stop once an accepted step improves `f` by less than this.
    pub f_tol: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
}

impl Default for SphereOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            grad_tol: 1e-9,
            f_tol: 1e-15,
            armijo: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereMinimum {
    pub point: CVector,
    pub value: f64,
    pub grad_norm: f64,
    pub iterations: usize,
}

/// Tangent projection at unit `v`: removes the radial component
/// `Re(v^dag g) v`. The phase direction `i v` is left in place; objectives
/// here are phase invariant, so the gradient has no component along it.
pub fn tangent(v: &CVector, g: &CVector) -> CVector {
    let radial = v.dotc(g).re;
    g - v * real(radial)
}

/// Riemannian gradient descent with Barzilai-Borwein trial steps, Armijo
/// backtracking and retraction by normalization. `fg` returns the value and the ambient gradient `g`, with
/// directional derivative `Re(g^dag delta)`. The phase of the iterate is
/// fixed after each step (largest-magnitude amplitude real non-negative).
pub fn minimize_on_sphere<F>(mut fg: F, start: &CVector, opts: &SphereOptions) -> SphereMinimum
where
    F: FnMut(&CVector) -> (f64, CVector),
{
    let mut v = start.normalize();
    fix_phase(&mut v);
    let (mut f, g) = fg(&v);
    let mut rg = tangent(&v, &g);
    let mut gn = rg.norm();
    let mut step = 1.0;
    let mut it = 0;
    while it < opts.max_iterations && gn > opts.grad_tol {
        it += 1;
        let mut t = step;
        let mut accepted = None;
        for _ in 0..60 {
            let mut cand = (&v - &rg * real(t)).normalize();
            fix_phase(&mut cand);
            let (fc, gc) = fg(&cand);
            if fc <= f - opts.armijo * t * gn * gn {
                accepted = Some((cand, fc, gc));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, fc, gc)) = accepted else {
            break;
        };
        let decrease = f - fc;
        let rg_next = tangent(&cand, &gc);
        // Barzilai-Borwein length for the next trial step, from the change
        // in iterate and Riemannian gradient.
        let s = &cand - &v;
        let y = &rg_next - &rg;
        let sy = s.dotc(&y).re;
        step = if sy > 0.0 { (s.norm_squared() / sy).min(1e3) } else { (t * 2.0).min(1e3) };
        v = cand;
        f = fc;
        rg = rg_next;
        gn = rg.norm();
        if decrease < opts.f_tol {
            break;
        }
    }
    SphereMinimum {
        point: v,
        value: f,
        grad_norm: gn,
        iterations: it,
    }
}

/// Removes the trace component of a Hermitian matrix.
pub fn trace_free(g: &CMatrix) -> CMatrix {
    let d = g.nrows();
    let t = trace(g).re / d as f64;
    let mut out = g.clone();
    for i in 0..d {
        out[(i, i)] -= real(t);
    }
    out
}

/// Frank-Wolfe style stationarity residual for maximizing a function with
/// Hermitian gradient `g` over density matrices: `lambda_max(g) - Tr(rho g)`.
/// For a concave objective it bounds the distance to the optimum value.
pub fn fw_gap(rho: &CMatrix, g: &CMatrix) -> f64 {
    let lmax = *crate::linalg::eigvalsh(g).last().expect("non-empty matrix");
    (lmax - crate::linalg::trace_product(rho, g)).max(0.0)
}

/// Projected-gradient stationarity residual `|| P(rho + g) - rho ||_F`.
pub fn projected_gradient_residual(rho: &CMatrix, g: &CMatrix) -> f64 {
    frobenius_norm(&(project_to_density(&(rho + g)) - rho))
}

/// Maximizes the concave function `phi(t)` on `[0, 1]` given its derivative,
/// by bisection on the sign of `phi'`. Returns the final bracket midpoint,
/// or an endpoint when the derivative does not change sign.
pub fn bisect_concave<D>(mut dphi: D, rounds: usize) -> f64
where
    D: FnMut(f64) -> f64,
{
    if dphi(0.0) <= 0.0 {
        return 0.0;
    }
    if dphi(1.0) >= 0.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..rounds {
        let mid = 0.5 * (lo + hi);
        if dphi(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, eigh, expectation};

    #[test]
    fn rayleigh_quotient_minimum() {
        let h = CMatrix::from_row_slice(
            3,
            3,
            &[real(2.0), c(0.5, 0.5), real(0.0), c(0.5, -0.5), real(1.0), c(0.0, 0.3), real(0.0), c(0.0, -0.3), real(3.0)],
        );
        let start = CVector::from_vec(vec![real(1.0), real(1.0), real(1.0)]);
        let r = minimize_on_sphere(|v| (expectation(&h, v), &h * v * real(2.0)), &start, &SphereOptions::default());
        let e = eigh(&h);
        assert!((r.value - e.values[0]).abs() < 1e-12);
        assert!(r.grad_norm < 1e-8);
    }

    #[test]
    fn bisection_finds_interior_maximum() {
        let t = bisect_concave(|t| 0.3 - t, 40);
        assert!((t - 0.3).abs() < 1e-10);
        assert_eq!(bisect_concave(|_| -1.0, 10), 0.0);
        assert_eq!(bisect_concave(|_| 1.0, 10), 1.0);
    }
}
