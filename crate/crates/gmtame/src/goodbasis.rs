//! Transform a lattice basis over a graded V-adapted frame into one whose
//! t-action matrix is affine in theta with diagonal linear part. The basis
//! columns are corrected iteratively: the image of each column under the
//! t-action is decomposed over the current basis, and any decomposition term
//! carrying a positive theta power is folded back into the source column.

use crate::error::{Error, Result};
use crate::exactmath::{rat_i, Rat};
use crate::modgroebner::{self, Basis, ModVec, OrderKind};
use crate::polyring::LPoly;
use crate::spectrum::group_of_position;
use crate::vfilt::{solve_lmat, LMat};
use num::traits::Zero;
use std::collections::BTreeMap;

/// A good basis: columns of `m` over the graded frame, the t-action matrix
/// `a` (affine in theta, linear part diagonal), and the spectral number of
/// each column, increasing.
pub struct GoodBasisData {
    pub m: LMat,
    pub a: LMat,
    pub spectral: Vec<Rat>,
}

///// Component rank: group-major (earlier group = larger eigenvalue = larger,
/// so the order refines the V-degree), within a group earlier positions
/// (larger filtration level) are larger.
fn rank_of(pos: usize, groups: &[usize]) -> i64 {
    let mu = groups.len() as i64;
    let ngroups = groups.last().map_or(0, |g| *g as i64 + 1);
    (ngroups - groups[pos] as i64) * mu + (mu - 1 - pos as i64)
}

fn pos_of(comp: i64, mu: usize) -> usize {
    (mu as i64 - 1 - comp.rem_euclid(mu as i64)) as usize
}

fn to_vec(col: &[LPoly], groups: &[usize]) -> ModVec {
    let mut v = ModVec::new(OrderKind::ThetaFirst);
    for (pos, e) in col.iter().enumerate() {
        for (k, c) in e.terms() {
            v.add_term(rank_of(pos, groups), k, c.clone());
        }
    }
    v
}

fn from_vec(v: &ModVec, mu: usize) -> Vec<LPoly> {
    let mut col = vec![LPoly::zero(); mu];
    for (comp, k, c) in v.terms() {
        col[pos_of(comp, mu)].add_term(k, c.clone());
    }
    col
}

/// theta * (B*col + theta d/dtheta(col) - shift*col).
fn t_image(b: &LMat, col: &[LPoly], shift: &Rat) -> Vec<LPoly> {
    let mut out: Vec<LPoly> = col
        .iter()
        .map(|e| &e.theta_dtheta() - &e.scale(shift))
        .collect();
    for (r, out_r) in out.iter_mut().enumerate() {
        for (c, e) in col.iter().enumerate() {
            if b[r][c].is_zero() || e.is_zero() {
                continue;
            }
            *out_r = &*out_r + &(&b[r][c] * e);
        }
    }
    out.iter().map(|e| e.shift(1)).collect()
}

struct ColMeta {
    lead_level: i64,
    spectral: Rat,
}

/// Run the correction loop. `b` is the matrix of -tau d/dtau on the graded
/// frame (polynomial in tau, constant term block diagonal with eigenvalues
/// `alphas`), `m` expresses the lattice basis over the frame, `plevels` are
/// the filtration levels of the frame positions, and `n_coord` is the top
/// level (number of variables minus one).
pub fn good_basis(
    b: &LMat,
    m: &LMat,
    alphas: &[(Rat, usize)],
    plevels: &[i64],
    n_coord: i64,
) -> Result<GoodBasisData> {
    let mu = m.len();
    let groups = group_of_position(alphas);
    assert_eq!(groups.len(), mu);
    assert_eq!(plevels.len(), mu);

    let gens: Vec<ModVec> = (0..mu)
        .map(|j| {
            let col: Vec<LPoly> = m.iter().map(|row| row[j].clone()).collect();
            to_vec(&col, &groups)
        })
        .collect();
    let mut basis: Basis = modgroebner::groebner(gens);
    if basis.len() != mu {
        return Err(Error::RankDeficient);
    }

    // each column must lead at the level complementary to its frame position
    let mut meta: BTreeMap<i64, ColMeta> = BTreeMap::new();
    for (&comp, v) in &basis {
        let (lc, k, _) = v.lead().unwrap();
        debug_assert_eq!(lc, comp);
        let pos = pos_of(comp, mu);
        if plevels[pos] != n_coord - k {
            return Err(Error::NotGoodLattice);
        }
        meta.insert(
            comp,
            ColMeta {
                lead_level: k,
                spectral: &alphas[groups[pos]].0 + rat_i(k),
            },
        );
    }

    let span = {
        let mut lo = 0i64;
        let mut hi = 0i64;
        for row in m.iter().chain(b.iter()) {
            for e in row {
                lo = lo.min(e.min_deg().unwrap_or(0));
                hi = hi.max(e.max_deg().unwrap_or(0));
            }
        }
        (hi - lo + 2) as usize
    };
    let cap = 10 * mu * span * span + 50;

    struct Cand {
        key: (i64, i64),
        tie: (i64, i64),
        src: i64,
        tgt: i64,
        s: i64,
        a: Rat,
    }
    let mut prev_key: Option<(i64, i64)> = None;
    let mut converged = false;
    for _ in 0..cap {
        let mut best: Option<Cand> = None;
        for (&src, v) in &basis {
            let col = from_vec(v, mu);
            let img = t_image(b, &col, &meta[&src].spectral);
            let tvec = to_vec(&img, &groups);
            let mut steps = Vec::new();
            let nf = modgroebner::normal_form(tvec, &basis, Some(&mut steps));
            if !nf.is_zero() {
                return Err(Error::DecompositionStall);
            }
            for st in steps {
                if st.shift < 1 || st.coeff.is_zero() {
                    continue;
                }
                let key = (st.shift + meta[&st.comp].lead_level, st.comp);
                let tie = (meta[&src].lead_level, src);
                let better = match &best {
                    None => true,
                    Some(c) => key > c.key || (key == c.key && tie > c.tie),
                };
                if better {
                    best = Some(Cand {
                        key,
                        tie,
                        src,
                        tgt: st.comp,
                        s: st.shift,
                        a: st.coeff,
                    });
                }
            }
        }
        let Some(cand) = best else {
            converged = true;
            break;
        };
        if prev_key.is_some_and(|pk| cand.key > pk) {
            return Err(Error::Internal(
                "correction measure increased".into(),
            ));
        }
        prev_key = Some(cand.key);
        // fold the offending term back into the source column
        let denom = &(&meta[&cand.src].spectral + rat_i(1 - cand.s))
            - &meta[&cand.tgt].spectral;
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let scale = &cand.a / &denom;
        let target = basis[&cand.tgt].clone();
        basis
            .get_mut(&cand.src)
            .unwrap()
            .add_scaled(&target, &scale, cand.s - 1);
    }
    if !converged {
        return Err(Error::IterationCapExceeded { stage: "good basis" });
    }

    // assemble columns by increasing spectral number, then component rank
    let mut order: Vec<i64> = basis.keys().copied().collect();
    order.sort_by(|x, y| {
        (&meta[x].spectral, x).cmp(&(&meta[y].spectral, y))
    });
    let cols: Vec<Vec<LPoly>> = order.iter().map(|c| from_vec(&basis[c], mu)).collect();
    let spectral: Vec<Rat> = order.iter().map(|c| meta[c].spectral.clone()).collect();
    let m_out: LMat = (0..mu)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let t_cols: Vec<Vec<LPoly>> = cols
        .iter()
        .map(|c| t_image(b, c, &Rat::zero()))
        .collect();
    let t_mat: LMat = (0..mu)
        .map(|r| t_cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let a = solve_lmat(&m_out, &t_mat)?;
    for (i, row) in a.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if e.min_deg().is_some_and(|d| d < 0) || e.max_deg().is_some_and(|d| d > 1) {
                return Err(Error::Internal(
                    "t-action matrix not affine in theta".into(),
                ));
            }
            let lin = e.coeff(1);
            if i == j {
                if lin != spectral[j] {
                    return Err(Error::Internal(
                        "linear part diagonal disagrees with the spectrum".into(),
                    ));
                }
            } else if !lin.is_zero() {
                return Err(Error::Internal(
                    "linear part of the t-action is not diagonal".into(),
                ));
            }
        }
    }
    Ok(GoodBasisData {
        m: m_out,
        a,
        spectral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::vfilt::lmat_identity;

    #[test]
    fn single_column_node() {
        let b = vec![vec![LPoly::one()]];
        let m = lmat_identity(1);
        let out = good_basis(&b, &m, &[(rat_i(1), 1)], &[1], 1).unwrap();
        assert_eq!(out.spectral, vec![rat_i(1)]);
        assert_eq!(out.a[0][0], LPoly::theta(1));
    }

    #[test]
    fn diagonal_sorts_by_spectral_number() {
        // frame ordered by decreasing eigenvalue; output by increasing
        // spectral number
        let mut b = lmat_identity(2);
        b[0][0] = LPoly::constant(rat(3, 2));
        b[1][1] = LPoly::constant(rat(1, 2));
        let m = lmat_identity(2);
        let alphas = vec![(rat(3, 2), 1), (rat(1, 2), 1)];
        let out = good_basis(&b, &m, &alphas, &[1, 1], 1).unwrap();
        assert_eq!(out.spectral, vec![rat(1, 2), rat(3, 2)]);
        // first output column is the second frame vector
        assert_eq!(out.m[1][0], LPoly::one());
        assert_eq!(out.m[0][1], LPoly::one());
        assert_eq!(out.a[0][0].coeff(1), rat(1, 2));
        assert_eq!(out.a[1][1].coeff(1), rat(3, 2));
    }

    #[test]
    fn positive_theta_power_is_folded_back() {
        // coupling pushes a theta^2 term into the decomposition of the
        // second column's image; one correction with scale -2 removes it
        let mut b = lmat_identity(2);
        b[0][0] = LPoly::constant(rat(3, 2));
        b[0][1] = LPoly::constant(rat_i(2));
        b[1][1] = LPoly::constant(rat(1, 2));
        let mut m = lmat_identity(2);
        m[1][1] = LPoly::theta(1);
        let alphas = vec![(rat(3, 2), 1), (rat(1, 2), 1)];
        let out = good_basis(&b, &m, &alphas, &[1, 0], 1).unwrap();
        assert_eq!(out.spectral, vec![rat(3, 2), rat(3, 2)]);
        // corrected column: theta*e2 - 2*theta*e1 (ties in the spectral
        // numbers keep the frame order, which puts it first)
        let j = out
            .m
            .iter()
            .map(|row| row[0].clone())
            .collect::<Vec<_>>();
        assert_eq!(j[0], LPoly::theta(1).scale(&rat_i(-2)));
        assert_eq!(j[1], LPoly::theta(1));
        for i in 0..2 {
            for jj in 0..2 {
                assert_eq!(out.a[i][jj].coeff(0), Rat::zero());
            }
        }
    }

    #[test]
    fn wrong_lead_level_rejected() {
        // frame level says the column should lead at theta^1 but it leads
        // at theta^0
        let b = vec![vec![LPoly::one()]];
        let m = lmat_identity(1);
        let out = good_basis(&b, &m, &[(rat_i(1), 1)], &[0], 1);
        assert!(matches!(out, Err(Error::NotGoodLattice)));
    }
}
