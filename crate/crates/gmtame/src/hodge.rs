//! An opposite filtration: from the Gröbner basis of the lattice over the
//! eigenvalue-aligned basis, read off the induced decreasing flags on each
//! residue eigenspace, and split them into a graded basis on which the
//! nilpotent part of the residue acts by exact chains. Failure of the
//! splitting certifies that the lattice is not good.

use crate::error::{Error, Result};
use crate::exactmath::{QMatrix, Rat};
use crate::modgroebner::{self, ModVec, OrderKind};
use crate::spectrum::{comp_rank, group_of_position};
use crate::vfilt::{lmat_coeff0, LMat};
use num::traits::Zero;
use std::collections::BTreeMap;

/// Basis columns graded by eigenvalue group and filtration level.
pub struct GradedBasis {
    /// Block diagonal over the eigenvalue groups.
    pub u: QMatrix,
    /// Eigenvalue group of each column (0-based, decreasing eigenvalues).
    pub groups: Vec<usize>,
    /// Filtration level of each column.
    pub plevels: Vec<i64>,
}

fn cols_to_matrix(dim: usize, cols: &[Vec<Rat>]) -> QMatrix {
    QMatrix::from_columns(dim, cols)
}

fn in_span(w: &[Vec<Rat>], v: &[Rat], dim: usize) -> bool {
    if w.is_empty() {
        return v.iter().all(|c| c.is_zero());
    }
    let m = cols_to_matrix(dim, w);
    let rhs = QMatrix::from_columns(dim, &[v.to_vec()]);
    m.solve(&rhs).is_ok()
}

/// Basis of the intersection of two column spans.
fn intersect_spans(a: &[Vec<Rat>], b: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // x = A c = B d  <=>  (A | -B)(c,d)^T = 0
    let mut stacked = QMatrix::zero(dim, a.len() + b.len());
    for (j, col) in a.iter().enumerate() {
        for i in 0..dim {
            stacked[(i, j)] = col[i].clone();
        }
    }
    for (j, col) in b.iter().enumerate() {
        for i in 0..dim {
            stacked[(i, a.len() + j)] = -&col[i];
        }
    }
    let kernel = stacked.kernel_basis();
    let amat = cols_to_matrix(dim, a);
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for k in kernel {
        let c = QMatrix::from_columns(a.len(), &[k[..a.len()].to_vec()]);
        let x = &amat * &c;
        let v: Vec<Rat> = (0..dim).map(|i| x[(i, 0)].clone()).collect();
        if !v.iter().all(|e| e.is_zero()) {
            out.push(v);
        }
    }
    // prune to an independent set
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for v in out {
        if !in_span(&basis, &v, dim) {
            basis.push(v);
        }
    }
    basis
}

fn apply(n: &QMatrix, v: &[Rat]) -> Vec<Rat> {
    let x = n * &QMatrix::from_columns(v.len(), &[v.to_vec()]);
    (0..v.len()).map(|i| x[(i, 0)].clone()).collect()
}

/// Split a decreasing flag (level -> cumulative span generators) into graded
/// columns on which `n` acts by exact chains: each column at level p maps
/// under `n` to the column recorded at level p-1 of its chain, the last one
/// to zero, and the columns at levels >= p span exactly the flag at p.
///
/// Errors with NotGoodLattice when the required chain corrections do not
/// exist, i.e. when `n` is not strict on the flag.
pub fn strict_flag_split(
    dim: usize,
    flag: &BTreeMap<i64, Vec<Vec<Rat>>>,
    n: &QMatrix,
) -> Result<Vec<(i64, Vec<Rat>)>> {
    // cumulative flag: F[p] = span of generators at levels >= p, tracked at
    // every level in the populated range so chains cannot hide between them
    let top = *flag.keys().next_back().expect("empty flag");
    let bottom = *flag.keys().next().unwrap();
    let levels: Vec<i64> = (bottom..=top).rev().collect();
    let mut cumulative: BTreeMap<i64, Vec<Vec<Rat>>> = BTreeMap::new();
    let mut acc: Vec<Vec<Rat>> = Vec::new();
    for &p in &levels {
        for g in flag.get(&p).into_iter().flatten() {
            if !in_span(&acc, g, dim) {
                acc.push(g.clone());
            }
        }
        cumulative.insert(p, acc.clone());
    }
    if acc.len() != dim {
        return Err(Error::NotGoodLattice);
    }

    let mut cols: Vec<(i64, Vec<Rat>)> = Vec::new();
    let cap = 4 * dim + 4;
    for _ in 0..cap {
        let w: Vec<Vec<Rat>> = cols.iter().map(|(_, v)| v.clone()).collect();
        // highest level whose flag is not yet covered
        let mut target = None;
        for &p in &levels {
            if cumulative[&p].iter().any(|g| !in_span(&w, g, dim)) {
                target = Some(p);
                break;
            }
        }
        let Some(m) = target else {
            break;
        };
        let fm = &cumulative[&m];
        let s = intersect_spans(&w, fm, dim);
        // smallest chain length r with {x in F^m : n^r x in W} not inside W
        let mut chosen: Option<(usize, Vec<Rat>)> = None;
        let mut npow = QMatrix::identity(dim);
        for r in 1..=dim {
            npow = &npow * n;
            // K_r = {x in F^m : n^r x in span(w)}: coefficients c with
            // n^r F c in W
            let fmat = cols_to_matrix(dim, fm);
            let image = &npow * &fmat;
            let k_basis = {
                // kernel of image modulo W: (image | -W) kernel, c part
                let wcols = w.len();
                let mut stacked = QMatrix::zero(dim, fm.len() + wcols);
                for j in 0..fm.len() {
                    for i in 0..dim {
                        stacked[(i, j)] = image[(i, j)].clone();
                    }
                }
                for (j, col) in w.iter().enumerate() {
                    for i in 0..dim {
                        stacked[(i, fm.len() + j)] = -&col[i];
                    }
                }
                stacked.kernel_basis()
            };
            for k in k_basis {
                let c = QMatrix::from_columns(fm.len(), &[k[..fm.len()].to_vec()]);
                let x = &fmat * &c;
                let v: Vec<Rat> = (0..dim).map(|i| x[(i, 0)].clone()).collect();
                if !in_span(&w, &v, dim) {
                    chosen = Some((r, v));
                    break;
                }
            }
            if chosen.is_some() {
                break;
            }
        }
        let Some((r, h)) = chosen else {
            return Err(Error::NotGoodLattice);
        };
        // correct the head inside W ∩ F^m so its chain terminates exactly
        let rhs = {
            let mut v = h.clone();
            for _ in 0..r {
                v = apply(n, &v);
            }
            v
        };
        let h = if rhs.iter().all(|e| e.is_zero()) {
            h
        } else {
            if s.is_empty() {
                return Err(Error::NotGoodLattice);
            }
            let mut nrs: Vec<Vec<Rat>> = Vec::new();
            for z in &s {
                let mut v = z.clone();
                for _ in 0..r {
                    v = apply(n, &v);
                }
                nrs.push(v);
            }
            let nrs_mat = cols_to_matrix(dim, &nrs);
            let sol = nrs_mat
                .solve(&QMatrix::from_columns(dim, &[rhs]))
                .map_err(|_| Error::NotGoodLattice)?;
            let smat = cols_to_matrix(dim, &s);
            let z = &smat * &sol;
            let zv: Vec<Rat> = (0..dim).map(|i| z[(i, 0)].clone()).collect();
            h.iter().zip(&zv).map(|(a, b)| a - b).collect()
        };
        // exact chain h, n h, ..., n^{r-1} h at levels m, m-1, ...
        let mut v = h;
        for j in 0..r {
            debug_assert!(!v.iter().all(|e| e.is_zero()));
            cols.push((m - j as i64, v.clone()));
            v = apply(n, &v);
        }
        debug_assert!(v.iter().all(|e| e.is_zero()));
    }

    // postconditions: the columns split the flag and chain under n
    if cols.len() != dim {
        return Err(Error::NotGoodLattice);
    }
    let all: Vec<Vec<Rat>> = cols.iter().map(|(_, v)| v.clone()).collect();
    if cols_to_matrix(dim, &all).rank() != dim {
        return Err(Error::NotGoodLattice);
    }
    for &p in &levels {
        let above: Vec<Vec<Rat>> = cols
            .iter()
            .filter(|(q, _)| *q >= p)
            .map(|(_, v)| v.clone())
            .collect();
        let f = &cumulative[&p];
        let fr = cols_to_matrix(dim, f).rank();
        if above.len() != fr
            || f.iter().any(|g| !in_span(&above, g, dim))
            || above.iter().any(|v| !in_span(f, v, dim))
        {
            return Err(Error::NotGoodLattice);
        }
    }
    for (p, v) in &cols {
        let nv = apply(n, v);
        if nv.iter().all(|e| e.is_zero()) {
            continue;
        }
        if !cols.iter().any(|(q, u)| *q == p - 1 && u == &nv) {
            return Err(Error::NotGoodLattice);
        }
    }
    Ok(cols)
}

/// Build the graded basis opposite to the lattice filtration. `b_al` and
/// `m_al` are the eigenvalue-aligned connection and lattice matrices,
/// `alphas` the aligned eigenvalues, `n_coord` the top filtration index
/// (number of variables minus one).
pub fn opposite_basis(
    b_al: &LMat,
    m_al: &LMat,
    alphas: &[(Rat, usize)],
    n_coord: i64,
) -> Result<GradedBasis> {
    let mu = m_al.len();
    let groups = group_of_position(alphas);

    // Gröbner basis of the lattice columns in the theta-first order
    let mut gens = Vec::with_capacity(mu);
    for j in 0..mu {
        let mut v = ModVec::new(OrderKind::ThetaFirst);
        for (r, row) in m_al.iter().enumerate() {
            for (k, c) in row[j].terms() {
                v.add_term(comp_rank(r, &groups), k, c.clone());
            }
        }
        gens.push(v);
    }
    let basis = modgroebner::groebner(gens);
    if basis.len() != mu {
        return Err(Error::RankDeficient);
    }

    // per-group flags from the lead block coefficients
    let b0 = lmat_coeff0(b_al);
    let mut u = QMatrix::zero(mu, mu);
    let mut out_groups = Vec::with_capacity(mu);
    let mut out_plevels = Vec::with_capacity(mu);
    let mut col_cursor = 0usize;
    let mut offset = 0usize;
    for (gi, (alpha, mult)) in alphas.iter().enumerate() {
        let dim = *mult;
        let positions: Vec<usize> = (offset..offset + dim).collect();
        // flag generators: lead block coefficient vectors, at level n - q
        let mut flag: BTreeMap<i64, Vec<Vec<Rat>>> = BTreeMap::new();
        for v in basis.values() {
            let (comp, q, _) = v.lead().unwrap();
            let pos = (comp - (comp / mu as i64) * mu as i64) as usize;
            if groups[pos] != gi {
                continue;
            }
            let block: Vec<Rat> = positions
                .iter()
                .map(|&r| v.coeff(comp_rank(r, &groups), q))
                .collect();
            flag.entry(n_coord - q).or_default().push(block);
        }
        // nilpotent part of the residue on this group
        let mut n_i = b0.submatrix(&positions, &positions);
        for d in 0..dim {
            n_i[(d, d)] = &n_i[(d, d)] - alpha;
        }
        let mut cols = strict_flag_split(dim, &flag, &n_i)?;
        // order columns by decreasing level for a stable block layout
        cols.sort_by(|a, b| b.0.cmp(&a.0));
        for (p, vec) in cols {
            for (d, &r) in positions.iter().enumerate() {
                u[(r, col_cursor)] = vec[d].clone();
            }
            out_groups.push(gi);
            out_plevels.push(p);
            col_cursor += 1;
        }
        offset += dim;
    }
    debug_assert_eq!(col_cursor, mu);
    u.inverse()
        .map_err(|_| Error::Internal("graded basis is singular".into()))?;
    Ok(GradedBasis {
        u,
        groups: out_groups,
        plevels: out_plevels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat_i;

    fn v(entries: &[i64]) -> Vec<Rat> {
        entries.iter().map(|&e| rat_i(e)).collect()
    }

    #[test]
    fn trivial_flag_splits() {
        // F^1 = span(e1), F^0 = everything; N = 0
        let mut flag = BTreeMap::new();
        flag.insert(1, vec![v(&[1, 0])]);
        flag.insert(0, vec![v(&[0, 1])]);
        let n = QMatrix::zero(2, 2);
        let cols = strict_flag_split(2, &flag, &n).unwrap();
        assert_eq!(cols.len(), 2);
        assert_eq!(cols.iter().filter(|(p, _)| *p == 1).count(), 1);
    }

    #[test]
    fn jordan_chain_is_built() {
        // N = shift with N(e2) = e1, F^1 = span(e2), F^0 = all: the head
        // at level 1 chains down to e1 at level 0
        let mut n = QMatrix::zero(2, 2);
        n[(0, 1)] = rat_i(1);
        let mut flag = BTreeMap::new();
        flag.insert(1, vec![v(&[0, 1])]); // head with N-image e1
        flag.insert(0, vec![v(&[1, 0])]);
        let cols = strict_flag_split(2, &flag, &n).unwrap();
        // chain: head at level 1, image at level 0
        assert_eq!(cols.len(), 2);
        let head = cols.iter().find(|(p, _)| *p == 1).unwrap();
        let tail = cols.iter().find(|(p, _)| *p == 0).unwrap();
        assert_eq!(apply(&n, &head.1), tail.1);
    }

    #[test]
    fn non_strict_flag_rejected() {
        // N maps e1 -> e2 but F puts e1 at top level and e2 nowhere high:
        // F^2 = span(e1), F^1 = span(e1), F^0 = all. N e1 = e2 lands at
        // level 1, but F^1 = span(e1) cannot contain it: chain must leave
        // the flag -> not strict
        let mut n = QMatrix::zero(2, 2);
        n[(1, 0)] = rat_i(1);
        let mut flag = BTreeMap::new();
        flag.insert(2, vec![v(&[1, 0])]);
        flag.insert(0, vec![v(&[0, 1])]);
        let out = strict_flag_split(2, &flag, &n);
        assert!(out.is_err());
    }
}
