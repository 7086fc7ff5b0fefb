//! One-sided (Hestenes) Jacobi SVD for small dense complex matrices.
//!
//! Orthogonalizes the columns of `A V` by plane rotations until every pair is
//! numerically orthogonal. Column norms are the singular values and the
//! normalized columns are the left singular vectors. Slower than bidiagonal
//! QR but simple and accurate to working precision for every input we see.

use crate::{CMatrix, C64};
use nalgebra::DVector;

const MAX_SWEEPS: usize = 60;

/// Singular values in descending order with the matching left vectors.
///
/// Vectors belonging to exactly zero singular values are returned as zero
/// columns, callers complete the basis themselves.
pub(crate) fn left_singular_pairs(a: &CMatrix) -> (Vec<f64>, Vec<DVector<C64>>) {
    let n = a.ncols();
    let mut w = a.clone();
    let eps = f64::EPSILON;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = w.column(p).norm_squared();
                let beta = w.column(q).norm_squared();
                let gamma = w.column(p).dotc(&w.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for r in 0..w.nrows() {
                    let wp = w[(r, p)];
                    let wq = w[(r, q)] * phase.conj();
                    w[(r, p)] = wp * c - wq * s;
                    w[(r, q)] = wp * s + wq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut pairs: Vec<(f64, DVector<C64>)> = (0..n)
        .map(|j| {
            let col = w.column(j).into_owned();
            let sigma = col.norm();
            let vec = if sigma > 0.0 {
                col.unscale(sigma)
            } else {
                DVector::zeros(w.nrows())
            };
            (sigma, vec)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    pairs.into_iter().unzip()
}
