//! Thin singular value decomposition by one-sided (Hestenes) Jacobi.
//!
//! The long side is first reduced with a Householder QR, so the Jacobi
//! sweeps run on a `k × k` triangle, `k = min(rows, cols)`. Jacobi keeps
//! small singular values accurate to working precision relative to the
//! large ones, which matters here: residual matrices of contingency tables
//! are always rank-deficient.

use nalgebra::DMatrix;

const MAX_SWEEPS: usize = 80;
const ORTHOGONALITY_TOL: f64 = 1e-15;

pub(crate) struct ThinSvd {
    /// `rows × k`.
    pub u: DMatrix<f64>,
    /// Decreasing.
    pub singular_values: Vec<f64>,
    /// `cols × k`.
    pub v: DMatrix<f64>,
}

/// `None` when the sweeps fail to converge.
pub(crate) fn thin_svd(a: &DMatrix<f64>) -> Option<ThinSvd> {
    if a.nrows() < a.ncols() {
        let t = thin_svd(&a.transpose())?;
        return Some(ThinSvd { u: t.v, singular_values: t.singular_values, v: t.u });
    }
    let k = a.ncols();
    let (q, r) = if a.nrows() > k {
        let qr = a.clone().qr();
        (Some(qr.q()), qr.r())
    } else {
        (None, a.clone())
    };

    let (mut b, mut v) = (r, DMatrix::<f64>::identity(k, k));
    jacobi_sweeps(&mut b, &mut v)?;

    let norms: Vec<f64> = b.column_iter().map(|c| c.norm()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));

    let mut u_small = DMatrix::zeros(k, k);
    let mut v_sorted = DMatrix::zeros(k, k);
    let mut singular_values = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        singular_values.push(sigma);
        if sigma > 0.0 {
            u_small.set_column(dst, &(b.column(src) / sigma));
        }
        v_sorted.set_column(dst, &v.column(src));
    }
    let u = match q {
        Some(q) => q * u_small,
        None => u_small,
    };
    Some(ThinSvd { u, singular_values, v: v_sorted })
}

/// Rotate column pairs of `b` until all are mutually orthogonal,
/// accumulating the rotations in `v`.
fn jacobi_sweeps(b: &mut DMatrix<f64>, v: &mut DMatrix<f64>) -> Option<()> {
    let k = b.ncols();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (b.column(p), b.column(q));
                    (cp.norm_squared(), cq.norm_squared(), cp.dot(&cq))
                };
                if alpha == 0.0 || beta == 0.0 || gamma.abs() <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(b, p, q, c, s);
                rotate(v, p, q, c, s);
            }
        }
        if !rotated {
            return Some(());
        }
    }
    None
}

fn rotate(m: &mut DMatrix<f64>, p: usize, q: usize, c: f64, s: f64) {
    for i in 0..m.nrows() {
        let (x, y) = (m[(i, p)], m[(i, q)]);
        m[(i, p)] = c * x - s * y;
        m[(i, q)] = s * x + c * y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &DMatrix<f64>) {
        let svd = thin_svd(a).unwrap();
        let k = a.nrows().min(a.ncols());
        assert_eq!(svd.singular_values.len(), k);
        assert!(svd.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let sigma = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(svd.singular_values.clone()));
        let rebuilt = &svd.u * sigma * svd.v.transpose();
        assert!((rebuilt - a).norm() <= 1e-13 * a.norm().max(1.0));
        let vtv = svd.v.transpose() * &svd.v;
        assert!((vtv - DMatrix::identity(k, k)).norm() < 1e-12);
    }

    #[test]
    fn reconstructs_assorted_shapes() {
        let gen = |n: usize, m: usize| {
            DMatrix::from_fn(n, m, |i, j| ((i * 7 + j * 13) % 11) as f64 - 5.0 + 0.1 * (i as f64 - j as f64).sin())
        };
        for (n, m) in [(1, 1), (3, 3), (5, 2), (2, 5), (8, 30), (30, 8)] {
            check(&gen(n, m));
        }
    }

    #[test]
    fn rank_one_tall_matrix() {
        // Outer product: singular values (|x| |y|, 0).
        let x = [0.3, -0.5, 1.2, 0.7, -0.1];
        let y = [0.9, -1.1];
        let a = DMatrix::from_fn(5, 2, |i, j| x[i] * y[j]);
        let svd = thin_svd(&a).unwrap();
        let expected = x.iter().map(|v| v * v).sum::<f64>().sqrt() * y.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((svd.singular_values[0] - expected).abs() < 1e-14);
        assert!(svd.singular_values[1] < 1e-15);
        check(&a);
    }

    #[test]
    fn zero_matrix() {
        let svd = thin_svd(&DMatrix::zeros(3, 4)).unwrap();
        assert_eq!(svd.singular_values, vec![0.0; 3]);
    }
}
