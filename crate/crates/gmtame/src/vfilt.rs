//! Saturation of a t-invariant lattice into a log-of-theta stable lattice
//! over Q[tau] (tau = 1/theta), followed by basis adjustments that bring the
//! residue eigenvalues into a half-open window of length one. The output
//! basis spans the canonical lattice of the filtration by order of growth.

use crate::error::{Error, Result};
use crate::exactmath::{
    ff_solve, generalized_eigenspaces, PolyMat, QMatrix, Rat, RatFn,
};
use crate::modgroebner::{self, ModVec, OrderKind};
use crate::polyring::LPoly;
use num::traits::{One, Zero};

/// Matrix with Laurent entries in theta.
pub type LMat = Vec<Vec<LPoly>>;

pub fn lmat_identity(n: usize) -> LMat {
    let mut m = vec![vec![LPoly::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = LPoly::one();
    }
    m
}

pub fn lmat_mul(a: &LMat, b: &LMat) -> LMat {
    let rows = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![LPoly::zero(); cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

pub fn lmat_from_q(q: &QMatrix) -> LMat {
    (0..q.rows)
        .map(|i| {
            (0..q.cols)
                .map(|j| LPoly::constant(q[(i, j)].clone()))
                .collect()
        })
        .collect()
}

/// Constant term (coefficient of theta^0) as a rational matrix.
pub fn lmat_coeff0(m: &LMat) -> QMatrix {
    QMatrix::from_fn(m.len(), m.first().map_or(0, |r| r.len()), |i, j| {
        m[i][j].coeff(0)
    })
}

/// V-adapted basis data: `u` transforms the input basis, `b` is the matrix
/// of -tau d/dtau on the new basis (polynomial in tau, i.e. theta exponents
/// <= 0), and `alphas` are the eigenvalues of its constant term, strictly
/// decreasing and spanning less than one.
pub struct VBasisData {
    pub u: LMat,
    pub b: LMat,
    pub alphas: Vec<(Rat, usize)>,
}

/// Engine encoding: component = row index, engine exponent = tau exponent
/// = -(theta exponent), so that reductions multiply by Q[tau].
fn to_engine(col: &[LPoly]) -> ModVec {
    let mut v = ModVec::new(OrderKind::ComponentFirst);
    for (r, e) in col.iter().enumerate() {
        for (k, c) in e.terms() {
            v.add_term(r as i64, -k, c.clone());
        }
    }
    v
}

fn from_engine(v: &ModVec, mu: usize) -> Vec<LPoly> {
    let mut col = vec![LPoly::zero(); mu];
    for (comp, tau, c) in v.terms() {
        col[comp as usize].add_term(-tau, c.clone());
    }
    col
}

/// Image of a column under tau*A - tau d/dtau, i.e. theta^-1 (A u) + the
/// entrywise theta d/dtheta of u.
fn log_image(a: &PolyMat, col: &[LPoly]) -> Vec<LPoly> {
    let mu = col.len();
    let mut out: Vec<LPoly> = (0..mu).map(|r| col[r].theta_dtheta()).collect();
    for (r, out_r) in out.iter_mut().enumerate() {
        for (c, e) in col.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let ap = LPoly::from_upoly(&a[r][c]);
            if ap.is_zero() {
                continue;
            }
            *out_r = &*out_r + &(&ap * e).shift(-1);
        }
    }
    out
}

const SATURATION_CAP: usize = 200;

/// Saturate the Q[tau]-span of the standard basis under tau*A - tau d/dtau.
/// Returns the transformation U (columns = new basis over the old) and
/// B = U^-1 (tau A - tau d/dtau)(U), polynomial in tau.
pub fn saturate(a: &PolyMat) -> Result<(LMat, LMat)> {
    let mu = a.len();
    let mut cols: Vec<Vec<LPoly>> = (0..mu)
        .map(|i| {
            let mut c = vec![LPoly::zero(); mu];
            c[i] = LPoly::one();
            c
        })
        .collect();
    for _ in 0..SATURATION_CAP {
        let basis = modgroebner::groebner(cols.iter().map(|c| to_engine(c)).collect());
        if basis.len() < mu {
            return Err(Error::RankDeficient);
        }
        let basis_cols: Vec<Vec<LPoly>> =
            basis.values().map(|v| from_engine(v, mu)).collect();
        let images: Vec<Vec<LPoly>> =
            basis_cols.iter().map(|c| log_image(a, c)).collect();
        let stable = images
            .iter()
            .all(|im| modgroebner::reduces_to_zero(to_engine(im), &basis));
        if stable {
            let u: LMat = transpose_cols(&basis_cols);
            let img: LMat = transpose_cols(&images);
            let b = solve_lmat(&u, &img)?;
            for row in &b {
                for e in row {
                    if e.max_deg().is_some_and(|d| d > 0) {
                        return Err(Error::Internal(
                            "saturated action not polynomial in tau".into(),
                        ));
                    }
                }
            }
            return Ok((u, b));
        }
        cols = basis_cols;
        cols.extend(images);
    }
    Err(Error::SaturationDiverged)
}

/// Columns-as-vectors to row-major matrix.
fn transpose_cols(cols: &[Vec<LPoly>]) -> LMat {
    let mu = cols.first().map_or(0, |c| c.len());
    (0..mu)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect()
}

/// Solve U X = V over the fraction field, requiring Laurent entries.
pub fn solve_lmat(u: &LMat, v: &LMat) -> Result<LMat> {
    let uf: Vec<Vec<RatFn>> = u
        .iter()
        .map(|row| row.iter().map(|e| e.to_ratfn()).collect())
        .collect();
    let vf: Vec<Vec<RatFn>> = v
        .iter()
        .map(|row| row.iter().map(|e| e.to_ratfn()).collect())
        .collect();
    let x = ff_solve(&uf, &vf).ok_or(Error::RankDeficient)?;
    x.iter()
        .map(|row| {
            row.iter()
                .map(|e| {
                    LPoly::from_ratfn(e).ok_or_else(|| {
                        Error::Internal("solution not Laurent in theta".into())
                    })
                })
                .collect()
        })
        .collect()
}

const WINDOW_CAP: usize = 2000;

/// Shift eigenvalue classes until the residue spectrum lies in a half-open
/// length-one window, keeping track of the basis transformation.
pub fn window_normalize(u_in: &LMat, b_in: &LMat) -> Result<VBasisData> {
    let mut u = u_in.clone();
    let mut b = b_in.clone();
    for _ in 0..WINDOW_CAP {
        let b0 = lmat_coeff0(&b);
        let eig = generalized_eigenspaces(&b0)?;
        let alphas = eig.eigenvalues.clone();
        let a1 = &alphas[0].0;
        let j = alphas.iter().filter(|(al, _)| al > &(a1 - Rat::one())).count();
        if j == alphas.len() {
            return Ok(VBasisData { u, b, alphas });
        }
        // conjugate into generalized eigenbasis (block diagonal constant term)
        let u0 = eig.transform.clone();
        let u0_inv = u0.inverse()?;
        b = lmat_mul(&lmat_from_q(&u0_inv), &lmat_mul(&b, &lmat_from_q(&u0)));
        u = lmat_mul(&u, &lmat_from_q(&u0));
        let split: usize = alphas[..j].iter().map(|(_, m)| m).sum();
        // the leading off-diagonal block must vanish at theta^0
        for row in b.iter().take(split) {
            for e in row.iter().skip(split) {
                if !e.coeff(0).is_zero() {
                    return Err(Error::DivisibilityViolation);
                }
            }
        }
        for (i, row) in b.iter_mut().enumerate() {
            for (c, e) in row.iter_mut().enumerate() {
                if i < split && c >= split {
                    *e = e.shift(1); // tau^-1 block
                } else if i >= split && c < split {
                    *e = e.shift(-1); // tau block
                } else if i >= split && c == i {
                    *e = &*e + &LPoly::one();
                }
            }
        }
        for row in u.iter_mut() {
            for e in row.iter_mut().skip(split) {
                *e = e.shift(1); // multiply trailing basis vectors by theta
            }
        }
    }
    Err(Error::IterationCapExceeded { stage: "window" })
}

/// Full stage: saturation followed by window normalization.
pub fn v_filtration(a: &PolyMat) -> Result<VBasisData> {
    let (u, b) = saturate(a)?;
    window_normalize(&u, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{rat, rat_i, UPoly};

    fn upoly(cs: &[Rat]) -> UPoly {
        UPoly::from_coeffs(cs.to_vec())
    }

    #[test]
    fn node_v_filtration() {
        // A = (theta): already saturated; B = tau*A = 1 constant
        let a: PolyMat = vec![vec![UPoly::monomial(1, Rat::one())]];
        let v = v_filtration(&a).unwrap();
        assert_eq!(v.alphas, vec![(rat_i(1), 1)]);
        assert_eq!(v.b[0][0], LPoly::one());
        assert_eq!(v.u[0][0], LPoly::one());
    }

    #[test]
    fn diagonal_spread_gets_windowed() {
        // A = diag(theta/2, 5theta/2) -> B0 = diag(1/2, 5/2): spread 2,
        // window normalization must shift the small eigenvalue up by 2
        let a: PolyMat = vec![
            vec![upoly(&[rat_i(0), rat(1, 2)]), UPoly::zero()],
            vec![UPoly::zero(), upoly(&[rat_i(0), rat(5, 2)])],
        ];
        let v = v_filtration(&a).unwrap();
        assert_eq!(v.alphas, vec![(rat(5, 2), 2)]);
    }

    #[test]
    fn nilpotent_log_part_saturates() {
        // A = [[theta, 1],[0, theta]]: tau*A = [[1, tau],[0, 1]] already
        // stable, residue is a single Jordan block at eigenvalue 1
        let a: PolyMat = vec![
            vec![UPoly::monomial(1, Rat::one()), UPoly::one()],
            vec![UPoly::zero(), UPoly::monomial(1, Rat::one())],
        ];
        let v = v_filtration(&a).unwrap();
        assert_eq!(v.alphas, vec![(rat_i(1), 2)]);
        let b0 = lmat_coeff0(&v.b);
        // eigenvalue 1 with a nontrivial nilpotent part survives
        assert_eq!(b0.char_poly().unwrap().coeffs().len(), 3);
    }
}
