use super::qmatrix::QMatrix;
use super::roots::rational_roots;
use super::Rat;
use crate::error::{Error, Result};

/// Exact eigenvalue data of a square rational matrix whose characteristic
/// polynomial splits over Q.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// (eigenvalue, algebraic multiplicity), strictly decreasing.
    pub eigenvalues: Vec<(Rat, usize)>,
    /// Columns are a basis adapted to the generalized eigenspaces, in the
    /// order of `eigenvalues`.
    pub transform: QMatrix,
    /// Restriction of the matrix to each generalized eigenspace:
    /// transform^-1 * m * transform = blockdiag(blocks).
    pub blocks: Vec<QMatrix>,
}

/// Eigenvalues with multiplicities, strictly decreasing. Errors when the
/// characteristic polynomial has an irrational root.
pub fn rational_eigenvalues(m: &QMatrix) -> Result<Vec<(Rat, usize)>> {
    let chi = m.char_poly()?;
    let roots = rational_roots(&chi);
    let total: usize = roots.iter().map(|(_, k)| k).sum();
    if total != m.rows {
        return Err(Error::IrrationalSpectrum);
    }
    Ok(roots)
}

/// Decompose Q^n into generalized eigenspaces of `m`, ordered by decreasing
/// eigenvalue.
pub fn generalized_eigenspaces(m: &QMatrix) -> Result<EigenDecomposition> {
    assert!(m.is_square());
    let n = m.rows;
    let eigenvalues = rational_eigenvalues(m)?;
    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(n);
    for (alpha, mult) in &eigenvalues {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] = &shifted[(i, i)] - alpha;
        }
        let kernel = shifted.pow(*mult).kernel_basis();
        if kernel.len() != *mult {
            return Err(Error::Internal(
                "generalized eigenspace dimension mismatch".into(),
            ));
        }
        columns.extend(kernel);
    }
    let transform = QMatrix::from_columns(n, &columns);
    let inv = transform.inverse()?;
    let conj = &(&inv * m) * &transform;

    let mut blocks = Vec::with_capacity(eigenvalues.len());
    let mut offset = 0;
    for (_, mult) in &eigenvalues {
        let idx: Vec<usize> = (offset..offset + mult).collect();
        blocks.push(conj.submatrix(&idx, &idx));
        offset += mult;
    }
    // the conjugated matrix must be block diagonal
    let mut check = QMatrix::zero(n, n);
    let mut off = 0;
    for b in &blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                check[(off + i, off + j)] = b[(i, j)].clone();
            }
        }
        off += b.rows;
    }
    if check != conj {
        return Err(Error::Internal("eigenspace decomposition not block diagonal".into()));
    }
    Ok(EigenDecomposition {
        eigenvalues,
        transform,
        blocks,
    })
}

impl EigenDecomposition {
    /// Semisimple part minus nilpotent check helper: the nilpotent part of
    /// block i is blocks[i] - eigenvalue_i * I.
    pub fn nilpotent_part(&self, i: usize) -> QMatrix {
        let (alpha, _) = &self.eigenvalues[i];
        let mut n = self.blocks[i].clone();
        for d in 0..n.rows {
            n[(d, d)] = &n[(d, d)] - alpha;
        }
        n
    }

    pub fn is_semisimple(&self) -> bool {
        (0..self.blocks.len()).all(|i| self.nilpotent_part(i).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rat_i};

    #[test]
    fn diagonal_matrix() {
        let m = QMatrix::diagonal(&[rat(1, 2), rat(3, 2), rat(1, 2)]);
        let e = generalized_eigenspaces(&m).unwrap();
        assert_eq!(
            e.eigenvalues,
            vec![(rat(3, 2), 1), (rat(1, 2), 2)]
        );
        assert!(e.is_semisimple());
    }

    #[test]
    fn jordan_block_detected() {
        // [[1,1],[0,1]]
        let m = QMatrix::from_rows(vec![
            vec![rat_i(1), rat_i(1)],
            vec![rat_i(0), rat_i(1)],
        ]);
        let e = generalized_eigenspaces(&m).unwrap();
        assert_eq!(e.eigenvalues, vec![(rat_i(1), 2)]);
        assert!(!e.is_semisimple());
        let n = e.nilpotent_part(0);
        assert!((&n * &n).is_zero());
    }

    #[test]
    fn irrational_spectrum_rejected() {
        // rotation-like matrix with char poly x^2 - 2
        let m = QMatrix::from_rows(vec![
            vec![rat_i(0), rat_i(2)],
            vec![rat_i(1), rat_i(0)],
        ]);
        assert!(matches!(
            rational_eigenvalues(&m),
            Err(Error::IrrationalSpectrum)
        ));
    }

    #[test]
    fn conjugation_reconstructs() {
        let m = QMatrix::from_rows(vec![
            vec![rat_i(2), rat_i(1), rat_i(0)],
            vec![rat_i(0), rat_i(2), rat_i(0)],
            vec![rat_i(0), rat_i(0), rat_i(5)],
        ]);
        let e = generalized_eigenspaces(&m).unwrap();
        let mut block = QMatrix::zero(3, 3);
        let mut off = 0;
        for b in &e.blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    block[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        let u = &e.transform;
        let recon = &(u * &block) * &u.inverse().unwrap();
        assert_eq!(recon, m);
    }
}
