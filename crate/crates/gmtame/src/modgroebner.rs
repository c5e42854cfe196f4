//! Gröbner bases for finitely generated submodules of a free module over
//! Q[theta], where each module component carries a fixed integer rank.
//!
//! Terms are pairs (component, theta exponent); a term divides another iff
//! both sit in the same component and the divisor's theta exponent is no
//! larger. Leads in distinct components never share a multiple, so a
//! generating set whose leads occupy pairwise distinct components is already
//! a Gröbner basis of its span: no S-vector computation is needed. The
//! algorithm below therefore top-reduces each generator against the current
//! per-component table and swaps in whichever vector has the smaller lead.
//!
//! Theta exponents may be negative (the ambient module is Laurent), but
//! scalar multiplication is by Q[theta] only, i.e. reductions shift by
//! nonnegative powers.

use crate::exactmath::Rat;
use num::traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Which half of the term dominates the comparison.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrderKind {
    /// Compare component rank first, then theta exponent.
    ComponentFirst,
    /// Compare theta exponent first, then component rank.
    ThetaFirst,
}

impl OrderKind {
    fn key(self, comp: i64, theta: i64) -> (i64, i64) {
        match self {
            OrderKind::ComponentFirst => (comp, theta),
            OrderKind::ThetaFirst => (theta, comp),
        }
    }

    fn unkey(self, key: (i64, i64)) -> (i64, i64) {
        match self {
            OrderKind::ComponentFirst => (key.0, key.1),
            OrderKind::ThetaFirst => (key.1, key.0),
        }
    }
}

/// Sparse vector in the free Laurent module, keyed so that the map's last
/// entry is the leading term.
#[derive(Clone, PartialEq, Eq)]
pub struct ModVec {
    kind: OrderKind,
    terms: BTreeMap<(i64, i64), Rat>,
}

impl ModVec {
    pub fn new(kind: OrderKind) -> Self {
        ModVec {
            kind,
            terms: BTreeMap::new(),
        }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn term(kind: OrderKind, comp: i64, theta: i64, c: Rat) -> Self {
        let mut v = ModVec::new(kind);
        v.add_term(comp, theta, c);
        v
    }

    pub fn add_term(&mut self, comp: i64, theta: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(self.kind.key(comp, theta)) {
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

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term (component, theta, coefficient).
    pub fn lead(&self) -> Option<(i64, i64, &Rat)> {
        self.terms.iter().next_back().map(|(k, c)| {
            let (comp, theta) = self.kind.unkey(*k);
            (comp, theta, c)
        })
    }

    pub fn coeff(&self, comp: i64, theta: i64) -> Rat {
        self.terms
            .get(&self.kind.key(comp, theta))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, &Rat)> {
        self.terms.iter().map(|(k, c)| {
            let (comp, theta) = self.kind.unkey(*k);
            (comp, theta, c)
        })
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return ModVec::new(self.kind);
        }
        ModVec {
            kind: self.kind,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiply by theta^s (any integer s; used for construction and for
    /// re-encoding between theta- and tau-conventions).
    pub fn theta_shift(&self, s: i64) -> Self {
        let mut out = ModVec::new(self.kind);
        for (comp, theta, c) in self.terms() {
            out.terms
                .insert(self.kind.key(comp, theta + s), c.clone());
        }
        out
    }

    /// self += c * theta^s * other. Reductions use s >= 0 only.
    pub fn add_scaled(&mut self, other: &ModVec, c: &Rat, s: i64) {
        assert_eq!(self.kind, other.kind);
        for (comp, theta, v) in other.terms() {
            self.add_term(comp, theta + s, c * v);
        }
    }

    pub fn min_theta(&self) -> Option<i64> {
        self.terms.keys().map(|k| self.kind.unkey(*k).1).min()
    }

    pub fn max_theta(&self) -> Option<i64> {
        self.terms.keys().map(|k| self.kind.unkey(*k).1).max()
    }
}

impl fmt::Debug for ModVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms()
            .map(|(comp, th, c)| format!("{}·e{}t^{}", crate::exactmath::rat_str(c), comp, th))
            .collect();
        write!(f, "[{}]", parts.join(" + "))
    }
}

impl std::ops::Add for &ModVec {
    type Output = ModVec;
    fn add(self, rhs: &ModVec) -> ModVec {
        let mut v = self.clone();
        v.add_scaled(rhs, &Rat::one(), 0);
        v
    }
}

impl std::ops::Sub for &ModVec {
    type Output = ModVec;
    fn sub(self, rhs: &ModVec) -> ModVec {
        let mut v = self.clone();
        v.add_scaled(rhs, &-Rat::one(), 0);
        v
    }
}

/// Gröbner basis stored as component -> monic basis vector with lead in that
/// component.
pub type Basis = BTreeMap<i64, ModVec>;

/// Top-reduce `v` against `basis` until its lead is irreducible or v = 0.
fn top_reduce(mut v: ModVec, basis: &Basis) -> ModVec {
    while let Some((comp, theta, c)) = v.lead() {
        let Some(g) = basis.get(&comp) else {
            break;
        };
        let (gc, gt, _) = g.lead().expect("basis vectors are nonzero");
        debug_assert_eq!(gc, comp);
        if theta < gt {
            break;
        }
        let coeff = -c.clone();
        let shift = theta - gt;
        v.add_scaled(g, &coeff, shift);
    }
    v
}

/// Minimal Gröbner basis of the Q[theta]-span of `gens`: one monic vector
/// per occupied lead component. The returned vectors generate exactly the
/// input span.
pub fn groebner(gens: Vec<ModVec>) -> Basis {
    let mut basis: Basis = BTreeMap::new();
    let mut queue: Vec<ModVec> = gens;
    while let Some(v) = queue.pop() {
        let v = top_reduce(v, &basis);
        if v.is_zero() {
            continue;
        }
        let (comp, theta, c) = v.lead().unwrap();
        let monic = v.scale(&c.clone().recip());
        match basis.get(&comp) {
            None => {
                basis.insert(comp, monic);
            }
            Some(g) => {
                let (_, gt, _) = g.lead().unwrap();
                debug_assert!(theta < gt, "top_reduce left a reducible lead");
                let displaced = basis.insert(comp, monic).unwrap();
                queue.push(displaced);
            }
        }
    }
    basis
}

/// Reduced Gröbner basis: tails carry no term divisible by any lead.
pub fn reduced_groebner(gens: Vec<ModVec>) -> Basis {
    let basis = groebner(gens);
    let comps: Vec<i64> = basis.keys().copied().collect();
    let mut reduced = basis.clone();
    for comp in comps {
        let v = reduced.remove(&comp).unwrap();
        let nf = normal_form(v, &reduced, None);
        // the lead itself is untouched: it is irreducible against the others
        reduced.insert(comp, nf);
    }
    reduced
}

/// Record of a single reduction step: the basis vector used (by its lead
/// component), the theta shift applied, and the coefficient.
#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub comp: i64,
    pub shift: i64,
    pub coeff: Rat,
}

/// Full normal form: every term of the result is irreducible against
/// `basis`. When `trace` is supplied, each reduction step is recorded.
pub fn normal_form(v: ModVec, basis: &Basis, mut trace: Option<&mut Vec<ReductionStep>>) -> ModVec {
    let mut rest = v;
    let mut done = ModVec::new(rest.kind());
    while let Some((comp, theta, c)) = rest.lead() {
        let c = c.clone();
        match basis.get(&comp) {
            Some(g) if g.lead().unwrap().1 <= theta => {
                let gt = g.lead().unwrap().1;
                let shift = theta - gt;
                if let Some(t) = trace.as_deref_mut() {
                    t.push(ReductionStep {
                        comp,
                        shift,
                        coeff: c.clone(),
                    });
                }
                rest.add_scaled(g, &-c, shift);
            }
            _ => {
                // irreducible term: move it out of the working vector
                done.add_term(comp, theta, c.clone());
                rest.add_term(comp, theta, -c);
            }
        }
    }
    done
}

/// Membership of v in the span of the basis.
pub fn reduces_to_zero(v: ModVec, basis: &Basis) -> bool {
    normal_form(v, basis, None).is_zero()
}
