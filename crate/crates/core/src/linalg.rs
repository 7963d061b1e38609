//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| C64::new(x, 0.0))
}

/// Projects a real symmetric matrix onto the PSD cone with unit diagonal.
///
/// Negative eigenvalues are clipped to zero and the diagonal is rescaled back
/// to one. A matrix that is already PSD is returned unchanged.
pub fn repair_psd(m: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym.clone());
    if eig.eigenvalues.iter().all(|&l| l >= 0.0) {
        return sym;
    }
    let clipped = eig.eigenvalues.map(|l| l.max(0.0));
    let rebuilt = &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
    let scale: Vec<f64> = (0..rebuilt.nrows())
        .map(|i| {
            let d = rebuilt[(i, i)];
            if d > 0.0 {
                d.sqrt().recip()
            } else {
                0.0
            }
        })
        .collect();
    let mut out = DMatrix::from_fn(rebuilt.nrows(), rebuilt.ncols(), |i, j| {
        rebuilt[(i, j)] * scale[i] * scale[j]
    });
    // A row that collapsed to zero keeps its unit variance, uncorrelated.
    for (i, &s) in scale.iter().enumerate() {
        if s == 0.0 {
            out[(i, i)] = 1.0;
        }
    }
    (&out + out.transpose()) * 0.5
}

/// Symmetric square root of a PSD matrix. Eigenvalues down to a small
/// negative round-off are treated as zero.
pub fn psd_sqrt(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs())).max(1.0);
    let mut roots = eig.eigenvalues.clone();
    for l in roots.iter_mut() {
        if *l < -1e-9 * scale {
            return Err(Error::Internal(format!(
                "square root of indefinite matrix (eigenvalue {l:e})"
            )));
        }
        *l = l.max(0.0).sqrt();
    }
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose())
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repair_keeps_psd_input() {
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.5, 0.25, 0.5, 1.0, 0.5, 0.25, 0.5, 1.0]);
        let r = repair_psd(&m);
        let before = SymmetricEigen::new(m.clone()).eigenvalues;
        let after = SymmetricEigen::new(r).eigenvalues;
        for (a, b) in before.iter().zip(after.iter()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn repair_fixes_indefinite_matrix() {
        // Correlations 0.9, 0.9, -0.9 cannot coexist.
        let m = DMatrix::from_row_slice(3, 3, &[1.0, 0.9, 0.9, 0.9, 1.0, -0.9, 0.9, -0.9, 1.0]);
        let r = repair_psd(&m);
        let ev = SymmetricEigen::new(r.clone()).eigenvalues;
        assert!(ev.iter().all(|&l| l > -1e-12));
        for i in 0..3 {
            assert!((r[(i, i)] - 1.0).abs() < 1e-12);
        }
        assert_eq!(r, r.transpose());
    }

    #[test]
    fn sqrt_squares_back() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let s = psd_sqrt(&m).unwrap();
        assert!((&s * &s - &m).amax() < 1e-14);
    }
}
