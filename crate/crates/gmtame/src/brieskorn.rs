//! Construction of a basis of a t-invariant Q[theta]-lattice inside the
//! quotient Q[x,theta] / (df - d theta)(Q[x,theta]^{n+1}), together with the
//! matrix of the t-action. The computation approximates the quotient by
//! degree-bounded pieces, raising the degree bounds until the piece is free
//! of the expected rank, presents no torsion, and restricts to a basis of
//! the Milnor algebra.

use crate::error::{Error, Result};
use crate::exactmath::{
    poly_mat_mul, smith_normal_form, PolyMat, Rat, UPoly,
};
use crate::milnor::MilnorData;
use crate::modgroebner::{self, Basis, ModVec, OrderKind};
use crate::polyring::{Poly, XMono};
use num::traits::{One, Zero};
use std::collections::HashMap;

/// Ranking of x-monomials by (total degree, degrevlex), growing on demand.
/// Ranks are stable under extension because degrees are enumerated in order.
pub struct MonoTable {
    nvars: usize,
    monos: Vec<XMono>,
    ranks: HashMap<XMono, i64>,
    max_deg: u32,
}

impl MonoTable {
    pub fn new(nvars: usize) -> Self {
        let mut t = MonoTable {
            nvars,
            monos: Vec::new(),
            ranks: HashMap::new(),
            max_deg: 0,
        };
        t.extend_to(0);
        t
    }

    pub fn extend_to(&mut self, deg: u32) {
        let start = if self.monos.is_empty() { 0 } else { self.max_deg + 1 };
        for d in start..=deg {
            let mut level = monomials_of_degree(self.nvars, d);
            level.sort_by(|a, b| a.degrevlex_cmp(b));
            for m in level {
                let rank = self.monos.len() as i64;
                self.ranks.insert(m.clone(), rank);
                self.monos.push(m);
            }
        }
        self.max_deg = self.max_deg.max(deg);
    }

    pub fn rank(&self, m: &XMono) -> i64 {
        *self.ranks.get(m).expect("monomial outside table range")
    }

    pub fn mono(&self, rank: i64) -> &XMono {
        &self.monos[rank as usize]
    }

    /// Number of monomials of degree <= deg; they occupy ranks 0..count.
    pub fn count_to_degree(&self, deg: u32) -> usize {
        self.monos
            .iter()
            .take_while(|m| m.total_degree() <= deg)
            .count()
    }

    pub fn to_vec(&self, p: &Poly) -> ModVec {
        let mut v = ModVec::new(OrderKind::ComponentFirst);
        for (m, t, c) in p.terms() {
            v.add_term(self.rank(m), t, c.clone());
        }
        v
    }

    pub fn to_poly(&self, v: &ModVec, nvars: usize) -> Poly {
        let mut p = Poly::zero(nvars);
        for (comp, t, c) in v.terms() {
            p.add_term(self.mono(comp).clone(), t, c.clone());
        }
        p
    }
}

fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<XMono> {
    fn rec(nvars: usize, deg: u32, idx: usize, cur: &mut Vec<u32>, out: &mut Vec<XMono>) {
        if idx == nvars - 1 {
            cur.push(deg);
            out.push(XMono(cur.clone()));
            cur.pop();
            return;
        }
        for d in 0..=deg {
            cur.push(d);
            rec(nvars, deg - d, idx + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, deg, 0, &mut Vec::new(), &mut out);
    out
}

/// The relation generators (d_i f) x^a - theta d_i(x^a) for all |a| = deg.
pub fn relation_generators(f: &Poly, deg: u32, table: &MonoTable) -> Vec<ModVec> {
    let nvars = f.nvars();
    let mut out = Vec::new();
    for a in monomials_of_degree(nvars, deg) {
        let xa = Poly::monomial(nvars, a.clone(), 0, Rat::one());
        for i in 0..nvars {
            let g = &(&f.deriv_x(i) * &xa) - &xa.deriv_x(i).theta_shift(1);
            if !g.is_zero() {
                out.push(table.to_vec(&g));
            }
        }
    }
    out
}

/// Basis of a t-invariant lattice: classes `phis` with the t-action matrix
/// `a` (columns express t*phi_j over the basis), plus the degree parameters
/// reached by the search.
pub struct LatticeBasis {
    pub phis: Vec<Poly>,
    pub a: PolyMat,
    pub mu: usize,
    pub k: u32,
    pub k0: u32,
    pub l: u32,
}

const K_GROWTH_CAP: u32 = 40;

/// Run the lattice search starting at degree bound `k_start`.
pub fn compute_lattice(f: &Poly, milnor: &MilnorData, k_start: u32) -> Result<LatticeBasis> {
    let nvars = f.nvars();
    let mu = milnor.mu;
    let deg_f = f.x_degree().unwrap_or(0);
    let mut table = MonoTable::new(nvars);
    let mut k = k_start;
    let mut l = k;
    let mut gb: Basis = Basis::new();
    let mut gens_done_to: i64 = -1; // generator degrees incorporated so far

    loop {
        l += 1;
        if k > k_start + K_GROWTH_CAP || l > 4 * k.max(1) + 4 {
            return Err(Error::IterationCapExceeded { stage: "lattice" });
        }
        table.extend_to(l + deg_f);
        let mut gens: Vec<ModVec> = gb.values().cloned().collect();
        for d in (gens_done_to + 1) as u32..=l {
            gens.extend(relation_generators(f, d, &table));
        }
        gens_done_to = l as i64;
        gb = modgroebner::reduced_groebner(gens);

        // k0: smallest bound such that every monomial of degree in (k0, k]
        // has a theta-free lead in the basis
        let mut k0 = 0u32;
        for d in (1..=k).rev() {
            let all_covered = monomials_of_degree(nvars, d).into_iter().all(|m| {
                gb.get(&table.rank(&m))
                    .is_some_and(|g| g.lead().unwrap().1 == 0)
            });
            if !all_covered {
                k0 = d;
                break;
            }
        }

        // presentation of the degree-k0 piece
        let m_count = table.count_to_degree(k0);
        let relations: Vec<&ModVec> = gb
            .values()
            .filter(|g| {
                g.terms()
                    .all(|(comp, _, _)| (comp as usize) < m_count)
            })
            .collect();
        let r_count = relations.len();
        debug_assert!(r_count <= m_count);
        let rho = m_count - r_count;

        if rho > mu {
            continue;
        }
        if rho < mu {
            k += 1;
            continue;
        }

        // rho == mu: check for torsion via the Smith normal form
        let mut rel_mat: PolyMat = vec![vec![UPoly::zero(); r_count]; m_count];
        for (j, g) in relations.iter().enumerate() {
            for (comp, theta, c) in g.terms() {
                debug_assert!(theta >= 0);
                let cell = &mut rel_mat[comp as usize][j];
                let mut coeffs = cell.coeffs().to_vec();
                if coeffs.len() <= theta as usize {
                    coeffs.resize(theta as usize + 1, Rat::zero());
                }
                coeffs[theta as usize] = c.clone();
                *cell = UPoly::from_coeffs(coeffs);
            }
        }
        let snf = smith_normal_form(&rel_mat)?;
        let is_unit = |d: &UPoly| d.degree() == Some(0);
        let gamma = (0..m_count)
            .filter(|&i| i >= snf.diagonal.len() || !is_unit(&snf.diagonal[i]))
            .count();
        if gamma > mu {
            continue;
        }
        // free generator positions: zero diagonal entries and tail positions
        let free_pos: Vec<usize> = (0..m_count)
            .filter(|&i| i >= snf.diagonal.len() || snf.diagonal[i].is_zero())
            .collect();
        debug_assert_eq!(free_pos.len(), mu);

        if k0 + deg_f > k {
            k += 1;
            continue;
        }

        // phi_j = class of the free column of the inverse coordinate change
        let phis: Vec<Poly> = free_pos
            .iter()
            .map(|&pos| {
                let mut p = Poly::zero(nvars);
                for (row, lrow) in snf.left_inv.iter().enumerate() {
                    let entry = &lrow[pos];
                    for (theta, c) in entry.coeffs().iter().enumerate() {
                        p.add_term(table.mono(row as i64).clone(), theta as i64, c.clone());
                    }
                }
                p
            })
            .collect();

        if !milnor.is_milnor_basis(&phis) {
            k += 1;
            continue;
        }

        // t-action: normal form of t*phi_j, re-expressed over the basis
        let mut a: PolyMat = vec![vec![UPoly::zero(); mu]; mu];
        for (j, phi) in phis.iter().enumerate() {
            let tphi = phi.t_action(f);
            let nf_vec = modgroebner::normal_form(table.to_vec(&tphi), &gb, None);
            let nf = table.to_poly(&nf_vec, nvars);
            if nf.x_degree().unwrap_or(0) > k0 {
                return Err(Error::Internal(
                    "normal form escaped the degree window".into(),
                ));
            }
            // coefficient vector over monomials of degree <= k0
            let mut coeff_col: PolyMat = vec![vec![UPoly::zero()]; m_count];
            for (m, theta, c) in nf.terms() {
                debug_assert!(theta >= 0);
                let row = table.rank(m) as usize;
                let cell = &mut coeff_col[row][0];
                let mut coeffs = cell.coeffs().to_vec();
                if coeffs.len() <= theta as usize {
                    coeffs.resize(theta as usize + 1, Rat::zero());
                }
                coeffs[theta as usize] = c.clone();
                *cell = UPoly::from_coeffs(coeffs);
            }
            let y = poly_mat_mul(&snf.left, &coeff_col);
            for (i, &pos) in free_pos.iter().enumerate() {
                a[i][j] = y[pos][0].clone();
            }
        }

        return Ok(LatticeBasis {
            phis,
            a,
            mu,
            k,
            k0,
            l,
        });
    }
}
