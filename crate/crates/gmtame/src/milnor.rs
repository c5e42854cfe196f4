//! The Jacobian ideal and Milnor algebra of an input polynomial: Buchberger's
//! algorithm over Q[x_0..x_n] in graded reverse lexicographic order, the
//! zero-dimensionality test, and the monomial basis of the quotient.

use crate::error::{Error, Result};
use crate::exactmath::{QMatrix, Rat};
use crate::polyring::{Poly, XMono};
use num::traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// XMono wrapper ordered by degrevlex so that BTreeMap's last entry is the
/// leading monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Drl(XMono);

impl PartialOrd for Drl {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Drl {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.degrevlex_cmp(&other.0)
    }
}

/// Polynomial in the x-variables alone, ordered for Gröbner computations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Drl, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// From a theta-free slice of the ambient ring.
    pub fn from_poly(p: &Poly) -> Self {
        let mut out = MPoly::zero(p.nvars());
        for (m, t, c) in p.terms() {
            assert_eq!(t, 0, "theta term in x-polynomial context");
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn to_poly(&self) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.0.clone(), 0, c.clone());
        }
        p
    }

    pub fn monomial(nvars: usize, m: XMono, c: Rat) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: XMono, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(Drl(m)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<(&XMono, &Rat)> {
        self.terms.iter().next_back().map(|(m, c)| (&m.0, c))
    }

    pub fn coeff(&self, m: &XMono) -> Rat {
        self.terms
            .get(&Drl(m.clone()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XMono, &Rat)> {
        self.terms.iter().map(|(m, c)| (&m.0, c))
    }

    /// self += c * x^m * other.
    fn add_scaled(&mut self, other: &MPoly, c: &Rat, m: &XMono) {
        for (om, oc) in other.terms() {
            self.add_term(om.mul(m), oc * c);
        }
    }

    fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }
}

fn divides(a: &XMono, b: &XMono) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| x <= y)
}

fn quotient(b: &XMono, a: &XMono) -> XMono {
    XMono(b.0.iter().zip(&a.0).map(|(y, x)| y - x).collect())
}

fn lcm(a: &XMono, b: &XMono) -> XMono {
    XMono(a.0.iter().zip(&b.0).map(|(x, y)| *x.max(y)).collect())
}

/// Full normal form against a list of polynomials.
pub fn mpoly_normal_form(p: &MPoly, basis: &[MPoly]) -> MPoly {
    let mut rest = p.clone();
    let mut done = MPoly::zero(p.nvars);
    'outer: while let Some((m, c)) = rest.lead() {
        let m = m.clone();
        let c = c.clone();
        for g in basis {
            let (gm, gc) = g.lead().unwrap();
            if divides(gm, &m) {
                let q = quotient(&m, gm);
                let coeff = -(&c / gc);
                rest.add_scaled(g, &coeff, &q);
                continue 'outer;
            }
        }
        done.add_term(m.clone(), c.clone());
        rest.add_term(m, -c);
    }
    done
}

/// Buchberger's algorithm; returns a reduced Gröbner basis with monic leads.
pub fn mpoly_groebner(gens: Vec<MPoly>) -> Vec<MPoly> {
    let mut basis: Vec<MPoly> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.scale(&g.lead().unwrap().1.clone().recip()));
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (lm_i, _) = basis[i].lead().unwrap();
        let (lm_j, _) = basis[j].lead().unwrap();
        // coprime leads: S-polynomial reduces to zero
        let l = lcm(lm_i, lm_j);
        if l.total_degree() == lm_i.total_degree() + lm_j.total_degree() {
            continue;
        }
        let mut s = MPoly::zero(basis[i].nvars);
        s.add_scaled(&basis[i], &Rat::one(), &quotient(&l, lm_i));
        s.add_scaled(&basis[j], &-Rat::one(), &quotient(&l, lm_j));
        let nf = mpoly_normal_form(&s, &basis);
        if nf.is_zero() {
            continue;
        }
        let monic = nf.scale(&nf.lead().unwrap().1.clone().recip());
        for k in 0..basis.len() {
            pairs.push((k, basis.len()));
        }
        basis.push(monic);
    }
    // minimalize: drop elements whose lead is divisible by another lead
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j && keep[j] {
                let (li, _) = basis[i].lead().unwrap();
                let (lj, _) = basis[j].lead().unwrap();
                if divides(lj, li) && (li != lj || j < i) {
                    keep[i] = false;
                    break;
                }
            }
        }
    }
    let minimal: Vec<MPoly> = basis
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();
    // reduce tails
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MPoly> = minimal
            .iter()
            .enumerate()
            .filter_map(|(j, g)| (j != i).then(|| g.clone()))
            .collect();
        reduced.push(mpoly_normal_form(&minimal[i], &others));
    }
    reduced
}

/// Gröbner basis of the Jacobian ideal with each element carrying cofactors
/// over the partial derivatives, so that ideal members can be expressed as
/// explicit combinations of the partials.
pub struct TracedJacobian {
    nvars: usize,
    basis: Vec<(MPoly, Vec<MPoly>)>,
}

/// Division with cofactor tracking: returns (remainder, cof) with
/// p = remainder + sum_i cof_i * basis_i-expansion over the partials.
fn traced_reduce(
    p: &MPoly,
    basis: &[(MPoly, Vec<MPoly>)],
    nvars: usize,
) -> (MPoly, Vec<MPoly>) {
    let mut rest = p.clone();
    let mut done = MPoly::zero(nvars);
    let mut cof = vec![MPoly::zero(nvars); nvars];
    'outer: while let Some((m, c)) = rest.lead() {
        let m = m.clone();
        let c = c.clone();
        for (g, gcof) in basis {
            let (gm, gc) = g.lead().unwrap();
            if divides(gm, &m) {
                let q = quotient(&m, gm);
                let factor = &c / gc;
                rest.add_scaled(g, &-factor.clone(), &q);
                for (ci, gi) in cof.iter_mut().zip(gcof) {
                    ci.add_scaled(gi, &factor, &q);
                }
                continue 'outer;
            }
        }
        done.add_term(m.clone(), c.clone());
        rest.add_term(m, -c);
    }
    (done, cof)
}

/// Buchberger's algorithm with cofactor tracking over the partials of f.
pub fn traced_jacobian(f: &Poly) -> TracedJacobian {
    let nvars = f.nvars();
    let partials: Vec<MPoly> = (0..nvars).map(|i| MPoly::from_poly(&f.deriv_x(i))).collect();
    let mut basis: Vec<(MPoly, Vec<MPoly>)> = Vec::new();
    for (i, g) in partials.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let lc = g.lead().unwrap().1.clone();
        let inv = lc.recip();
        let mut cof = vec![MPoly::zero(nvars); nvars];
        cof[i] = MPoly::monomial(nvars, XMono::one(nvars), inv.clone());
        basis.push((g.scale(&inv), cof));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (lm_i, _) = basis[i].0.lead().unwrap();
        let (lm_j, _) = basis[j].0.lead().unwrap();
        let l = lcm(lm_i, lm_j);
        if l.total_degree() == lm_i.total_degree() + lm_j.total_degree() {
            continue;
        }
        let qi = quotient(&l, lm_i);
        let qj = quotient(&l, lm_j);
        let mut s = MPoly::zero(nvars);
        s.add_scaled(&basis[i].0, &Rat::one(), &qi);
        s.add_scaled(&basis[j].0, &-Rat::one(), &qj);
        let mut scof = vec![MPoly::zero(nvars); nvars];
        for k in 0..nvars {
            scof[k].add_scaled(&basis[i].1[k], &Rat::one(), &qi);
            scof[k].add_scaled(&basis[j].1[k], &-Rat::one(), &qj);
        }
        let (nf, used) = traced_reduce(&s, &basis, nvars);
        if nf.is_zero() {
            continue;
        }
        // nf = s - sum(used * partials): cofactors of nf over the partials
        let lc = nf.lead().unwrap().1.clone();
        let inv = lc.recip();
        let mut ncof = Vec::with_capacity(nvars);
        for k in 0..nvars {
            let mut c = scof[k].clone();
            c.add_scaled(&used[k], &-Rat::one(), &XMono::one(nvars));
            ncof.push(c.scale(&inv));
        }
        for k in 0..basis.len() {
            pairs.push((k, basis.len()));
        }
        basis.push((nf.scale(&inv), ncof));
    }
    TracedJacobian { nvars, basis }
}

impl TracedJacobian {
    /// Express p as a combination of the partials; None if p is not in the
    /// Jacobian ideal.
    pub fn express(&self, p: &MPoly) -> Option<Vec<MPoly>> {
        let (rest, cof) = traced_reduce(p, &self.basis, self.nvars);
        if rest.is_zero() {
            Some(cof)
        } else {
            None
        }
    }
}

/// Gröbner data of the Jacobian ideal of f, plus the induced monomial basis
/// of the Milnor algebra.
#[derive(Clone, Debug)]
pub struct MilnorData {
    pub mu: usize,
    pub jacobian_gb: Vec<MPoly>,
    /// Monomials outside the lead ideal, sorted increasing in degrevlex.
    pub standard_monomials: Vec<XMono>,
}

/// Errors with NotIsolated when the Jacobian ideal is not zero-dimensional.
pub fn milnor_data(f: &Poly) -> Result<MilnorData> {
    let nvars = f.nvars();
    let gens: Vec<MPoly> = (0..nvars).map(|i| MPoly::from_poly(&f.deriv_x(i))).collect();
    let gb = mpoly_groebner(gens);
    if gb.iter().any(|g| g.lead().unwrap().0.is_one()) {
        // unit ideal: no critical points at all, dimension -1; still not a
        // singularity with mu >= 1
        return Err(Error::NotIsolated);
    }
    // zero-dimensional iff each variable has a pure power among the leads
    let mut bound = vec![0u32; nvars];
    for (i, b) in bound.iter_mut().enumerate() {
        let pure = gb.iter().find_map(|g| {
            let (m, _) = g.lead().unwrap();
            let deg = m.0[i];
            (deg > 0 && m.total_degree() == deg).then_some(deg)
        });
        match pure {
            Some(d) => *b = d,
            None => return Err(Error::NotIsolated),
        }
    }
    // standard monomials live below the pure-power box
    let leads: Vec<XMono> = gb.iter().map(|g| g.lead().unwrap().0.clone()).collect();
    let mut standard = Vec::new();
    let mut cursor = vec![0u32; nvars];
    'enumerate: loop {
        let m = XMono(cursor.clone());
        if !leads.iter().any(|l| divides(l, &m)) {
            standard.push(m);
        }
        for i in 0..nvars {
            cursor[i] += 1;
            if cursor[i] < bound[i] {
                continue 'enumerate;
            }
            cursor[i] = 0;
        }
        break;
    }
    standard.sort_by(|a, b| a.degrevlex_cmp(b));
    Ok(MilnorData {
        mu: standard.len(),
        jacobian_gb: gb,
        standard_monomials: standard,
    })
}

impl MilnorData {
    /// Coordinates of the residue class of p in the standard-monomial basis.
    pub fn coordinates(&self, p: &MPoly) -> Vec<Rat> {
        let nf = mpoly_normal_form(p, &self.jacobian_gb);
        self.standard_monomials
            .iter()
            .map(|m| nf.coeff(m))
            .collect()
    }

    /// Do the theta = 0 slices of the given classes form a basis of the
    /// Milnor algebra?
    pub fn is_milnor_basis(&self, phis: &[Poly]) -> bool {
        if phis.len() != self.mu {
            return false;
        }
        let cols: Vec<Vec<Rat>> = phis
            .iter()
            .map(|p| self.coordinates(&MPoly::from_poly(&p.theta_zero_part())))
            .collect();
        let m = QMatrix::from_columns(self.mu, &cols);
        m.rank() == self.mu
    }
}
