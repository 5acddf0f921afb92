//! Small dense matrix helpers over [`Scalar`].

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// Gauss-Jordan inverse with partial pivoting on plain values.
///
/// Returns the inverse and the plain determinant. Exact zero pivots are
/// reported as a singular matrix; callers apply their own thresholds to
/// the returned determinant.
pub fn invert<S: Scalar>(m: &Tensor<S>) -> Result<(Tensor<S>, f64)> {
    let n = m.dim();
    let mut a: Vec<Vec<S>> = (0..n).map(|i| (0..n).map(|j| m[[i, j]].clone()).collect()).collect();
    let mut inv: Vec<Vec<S>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect()).collect();
    let mut det = 1.0;
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&r, &s| a[r][col].value().abs().total_cmp(&a[s][col].value().abs())).unwrap_or(col);
        if a[pivot][col].value() == 0.0 {
            return Err(Error::SingularMetric { det: 0.0 });
        }
        if pivot != col {
            a.swap(pivot, col);
            inv.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= p.value();
        let recip = S::one() / p;
        for j in 0..n {
            a[col][j] = a[col][j].clone() * recip.clone();
            inv[col][j] = inv[col][j].clone() * recip.clone();
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = a[r][j].clone() - f.clone() * a[col][j].clone();
                inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
            }
        }
    }
    Ok((Tensor::from_fn(n, 2, |ij| inv[ij[0]][ij[1]].clone()), det))
}

/// Plain determinant by LU with partial pivoting.
pub fn det(m: &Tensor<f64>) -> f64 {
    match invert(m) {
        Ok((_, d)) => d,
        Err(_) => 0.0,
    }
}

/// Singular values of a plain square matrix, descending.
pub fn singular_values(m: &Tensor<f64>) -> Vec<f64> {
    let n = m.dim();
    let mat = nalgebra::DMatrix::from_fn(n, n, |i, j| m[[i, j]]);
    let mut sv: Vec<f64> = mat.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Plain matrix product.
pub fn matmul(a: &Tensor<f64>, b: &Tensor<f64>) -> Tensor<f64> {
    let n = a.dim();
    Tensor::from_fn(n, 2, |ij| (0..n).map(|k| a[[ij[0], k]] * b[[k, ij[1]]]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Dual;

    #[test]
    fn inverse_of_diagonal() {
        let m = Tensor::from_fn(2, 2, |ij| if ij[0] == ij[1] { [4.0, 9.0][ij[0]] } else { 0.0 });
        let (inv, d) = invert(&m).unwrap();
        assert_eq!(d, 36.0);
        assert_eq!(inv[[0, 0]], 0.25);
        assert!((inv[[1, 1]] - 1.0 / 9.0).abs() < 1e-16);
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let m = Tensor::from_fn(2, 2, |ij| if ij[0] != ij[1] { 2.0 } else { 0.0 });
        let (inv, d) = invert(&m).unwrap();
        assert_eq!(d, -4.0);
        assert_eq!(inv[[0, 1]], 0.5);
    }

    #[test]
    fn singular_matrix_errors() {
        let m = Tensor::from_fn(2, 2, |_| 1.0);
        assert!(invert(&m).is_err());
        assert_eq!(det(&m), 0.0);
    }

    #[test]
    fn inverse_derivative_matches_identity() {
        // m(t) = [[1 + t, 2], [3, 4 - t]] at t = 0.5; d(m^-1) = -m^-1 m' m^-1.
        let t = Dual::<f64>::variable(0.5, 0);
        let c = |v: f64| Dual::<f64>::constant(v);
        let entries = [t.clone() + c(1.0), c(2.0), c(3.0), c(4.0) - t];
        let m = Tensor::from_fn(2, 2, |ij| entries[2 * ij[0] + ij[1]].clone());
        let (inv, _) = invert(&m).unwrap();
        let plain = m.values();
        let (pinv, _) = invert(&plain).unwrap();
        let dm = Tensor::from_fn(2, 2, |ij| [1.0, 0.0, 0.0, -1.0][2 * ij[0] + ij[1]]);
        let expect = matmul(&matmul(&pinv, &dm), &pinv).scaled(-1.0);
        for i in 0..2 {
            for j in 0..2 {
                assert!((inv[[i, j]].partial(0) - expect[[i, j]]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn antisymmetric_singular_values_pair_up() {
        let m = Tensor::from_fn(3, 2, |ij| match (ij[0], ij[1]) {
            (0, 1) => 2.0,
            (1, 0) => -2.0,
            _ => 0.0,
        });
        let sv = singular_values(&m);
        assert!((sv[0] - 2.0).abs() < 1e-14 && (sv[1] - 2.0).abs() < 1e-14 && sv[2].abs() < 1e-14);
    }
}
