//! Symmetric tridiagonal eigensolver: implicit-shift QL with accumulated
//! rotations, so eigenvectors are orthogonal to machine precision by
//! construction.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EigenError {
    #[error("QL iteration failed to converge for eigenvalue index {index}")]
    NoConvergence { index: usize },
    #[error("off-diagonal length {off} does not match diagonal length {diag}")]
    ShapeMismatch { diag: usize, off: usize },
}

/// Eigenvalues in ascending order; `vectors[k]` is the unit eigenvector for
/// `values[k]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Full eigendecomposition of the symmetric tridiagonal matrix with the
/// given diagonal and subdiagonal, by implicit-shift QL.
pub fn symmetric_tridiagonal_eigen(
    diagonal: &[f64],
    offdiagonal: &[f64],
) -> Result<EigenDecomposition, EigenError> {
    let n = diagonal.len();
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: vec![],
        });
    }
    if offdiagonal.len() + 1 != n {
        return Err(EigenError::ShapeMismatch {
            diag: n,
            off: offdiagonal.len(),
        });
    }

    let mut d = diagonal.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(offdiagonal);

    // z is column-major: z[k][i] is component i of (eventual) eigenvector k.
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let mut col = vec![0.0; n];
            col[k] = 1.0;
            col
        })
        .collect();

    for l in 0..n {
        let mut iterations = 0;
        loop {
            // Look for a negligible subdiagonal element to split the problem.
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 50 {
                return Err(EigenError::NoConvergence { index: l });
            }

            // Wilkinson shift from the trailing 2x2 of the active block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;

            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Deflate: the rotation chain degenerated.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let (head, tail) = z.split_at_mut(i + 1);
                let lower = &mut head[i];
                let upper = &mut tail[0];
                for (lo, up) in lower.iter_mut().zip(upper.iter_mut()) {
                    f = *up;
                    *up = s * *lo + c * f;
                    *lo = c * *lo - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Sort ascending, carrying eigenvectors along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = order.iter().map(|&i| std::mem::take(&mut z[i])).collect();
    Ok(EigenDecomposition { values, vectors })
}
