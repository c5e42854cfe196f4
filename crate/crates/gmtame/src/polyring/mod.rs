//! Polynomials in the coordinate variables x_0..x_n together with the
//! auxiliary variable theta, which is allowed negative exponents (Laurent in
//! theta). Coefficients are exact rationals.

pub mod parse;

use crate::exactmath::{rat_i, rat_str, Rat, RatFn, UPoly};
use num::traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector of an x-monomial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct XMono(pub Vec<u32>);

impl XMono {
    pub fn one(nvars: usize) -> Self {
        XMono(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        XMono(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &XMono) -> XMono {
        XMono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Graded reverse lexicographic comparison: higher total degree wins;
    /// at equal degree the monomial with the *smaller* exponent in the last
    /// differing variable is larger.
    pub fn degrevlex_cmp(&self, other: &XMono) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..self.0.len()).rev() {
            match self.0[i].cmp(&other.0[i]) {
                Ordering::Equal => {}
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }

    pub fn render(&self, vars: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars[i].clone()),
                _ => parts.push(format!("{}^{}", vars[i], e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Element of Q[x_0..x_n][theta, theta^-1], sparse.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<(XMono, i64), Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(XMono::one(nvars), 0, c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(XMono::var(nvars, i), 0, Rat::one());
        p
    }

    pub fn theta(nvars: usize, k: i64) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(XMono::one(nvars), k, Rat::one());
        p
    }

    pub fn monomial(nvars: usize, m: XMono, theta: i64, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(m, theta, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: XMono, theta: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((m, theta)) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&XMono, i64, &Rat)> {
        self.terms.iter().map(|((m, t), c)| (m, *t, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &XMono, theta: i64) -> Rat {
        self.terms
            .get(&(m.clone(), theta))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut p = self.clone();
        for v in p.terms.values_mut() {
            *v = &*v * c;
        }
        p
    }

    /// Multiply by theta^k (k may be negative).
    pub fn theta_shift(&self, k: i64) -> Self {
        let mut p = Poly::zero(self.nvars);
        for ((m, t), c) in &self.terms {
            p.terms.insert((m.clone(), t + k), c.clone());
        }
        p
    }

    /// Largest total x-degree among terms; None for the zero polynomial.
    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(m, _)| m.total_degree()).max()
    }

    pub fn theta_min(&self) -> Option<i64> {
        self.terms.keys().map(|(_, t)| *t).min()
    }

    pub fn theta_max(&self) -> Option<i64> {
        self.terms.keys().map(|(_, t)| *t).max()
    }

    pub fn is_theta_free(&self) -> bool {
        self.terms.keys().all(|(_, t)| *t == 0)
    }

    /// Partial derivative with respect to x_i.
    pub fn deriv_x(&self, i: usize) -> Self {
        let mut p = Poly::zero(self.nvars);
        for ((m, t), c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] = e - 1;
            p.add_term(m2, *t, c * rat_i(e as i64));
        }
        p
    }

    /// theta * d/dtheta: multiplies each term by its theta exponent.
    pub fn theta_dtheta(&self) -> Self {
        let mut p = Poly::zero(self.nvars);
        for ((m, t), c) in &self.terms {
            p.add_term(m.clone(), *t, c * rat_i(*t));
        }
        p
    }

    /// theta^2 * d/dtheta: each term x^a theta^k maps to k x^a theta^{k+1}.
    pub fn theta2_dtheta(&self) -> Self {
        self.theta_dtheta().theta_shift(1)
    }

    /// Action of t on the quotient: p -> f*p + theta^2 d/dtheta(p).
    pub fn t_action(&self, f: &Poly) -> Self {
        &(f * self) + &self.theta2_dtheta()
    }

    /// Substitute theta = 0 (keep only theta-free terms).
    pub fn theta_zero_part(&self) -> Self {
        let mut p = Poly::zero(self.nvars);
        for ((m, t), c) in &self.terms {
            if *t == 0 {
                p.terms.insert((m.clone(), 0), c.clone());
            }
        }
        p
    }

    /// Coefficient of theta^k as a polynomial in x alone.
    pub fn theta_coeff(&self, k: i64) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for ((m, t), c) in &self.terms {
            if *t == k {
                p.terms.insert((m.clone(), 0), c.clone());
            }
        }
        p
    }

    pub fn render(&self, vars: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for ((m, t), c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if !c.is_one() || (m.is_one() && *t == 0) {
                factors.push(rat_str(c));
            }
            if !m.is_one() {
                factors.push(m.render(vars));
            }
            match *t {
                0 => {}
                1 => factors.push("@".into()),
                _ => factors.push(format!("@^{}", t)),
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for ((m, t), c) in &rhs.terms {
            p.add_term(m.clone(), *t, c.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for ((m, t), c) in &rhs.terms {
            p.add_term(m.clone(), *t, -c);
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let mut p = self.clone();
        for v in p.terms.values_mut() {
            *v = -&*v;
        }
        p
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = Poly::zero(self.nvars);
        for ((m1, t1), c1) in &self.terms {
            for ((m2, t2), c2) in &rhs.terms {
                p.add_term(m1.mul(m2), t1 + t2, c1 * c2);
            }
        }
        p
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (0..self.nvars).map(|i| format!("x{}", i)).collect();
        write!(f, "{}", self.render(&vars))
    }
}

/// Univariate Laurent polynomial in theta over Q, sparse.
#[derive(Clone, PartialEq, Eq)]
pub struct LPoly {
    terms: BTreeMap<i64, Rat>,
}

impl LPoly {
    pub fn zero() -> Self {
        LPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = LPoly::zero();
        p.add_term(0, c);
        p
    }

    pub fn one() -> Self {
        LPoly::constant(Rat::one())
    }

    pub fn theta(k: i64) -> Self {
        let mut p = LPoly::zero();
        p.add_term(k, Rat::one());
        p
    }

    pub fn term(k: i64, c: Rat) -> Self {
        let mut p = LPoly::zero();
        p.add_term(k, c);
        p
    }

    pub fn add_term(&mut self, k: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
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

    pub fn coeff(&self, k: i64) -> Rat {
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn shift(&self, k: i64) -> Self {
        LPoly {
            terms: self.terms.iter().map(|(d, c)| (d + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return LPoly::zero();
        }
        LPoly {
            terms: self.terms.iter().map(|(d, v)| (*d, v * c)).collect(),
        }
    }

    /// Multiply each term theta^k by k (the theta*d/dtheta action).
    pub fn theta_dtheta(&self) -> Self {
        let mut p = LPoly::zero();
        for (k, c) in &self.terms {
            p.add_term(*k, c * rat_i(*k));
        }
        p
    }

    pub fn from_upoly(u: &UPoly) -> Self {
        let mut p = LPoly::zero();
        for (k, c) in u.coeffs().iter().enumerate() {
            p.add_term(k as i64, c.clone());
        }
        p
    }

    /// Convert to a polynomial in theta; None when a negative power occurs.
    pub fn to_upoly(&self) -> Option<UPoly> {
        if self.min_deg().is_some_and(|d| d < 0) {
            return None;
        }
        let max = self.max_deg().unwrap_or(0).max(0) as usize;
        let mut coeffs = vec![Rat::zero(); max + 1];
        for (k, c) in &self.terms {
            coeffs[*k as usize] = c.clone();
        }
        Some(UPoly::from_coeffs(coeffs))
    }

    pub fn to_ratfn(&self) -> RatFn {
        let shift = self.min_deg().unwrap_or(0).min(0);
        let shifted = self.shift(-shift).to_upoly().unwrap();
        &RatFn::from_poly(shifted) * &RatFn::theta_pow(shift)
    }

    pub fn from_ratfn(f: &RatFn) -> Option<Self> {
        let (shift, p) = if f.as_poly().is_some() {
            (0, f.as_poly().unwrap())
        } else {
            f.as_theta_laurent()?
        };
        Some(LPoly::from_upoly(&p).shift(shift))
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.terms.iter().rev() {
            let term = match *k {
                0 => rat_str(c),
                1 if c.is_one() => "@".into(),
                1 => format!("{}*@", rat_str(c)),
                _ if c.is_one() => format!("@^{}", k),
                _ => format!("{}*@^{}", rat_str(c), k),
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl Add for &LPoly {
    type Output = LPoly;
    fn add(self, rhs: &LPoly) -> LPoly {
        let mut p = self.clone();
        for (k, c) in &rhs.terms {
            p.add_term(*k, c.clone());
        }
        p
    }
}

impl Sub for &LPoly {
    type Output = LPoly;
    fn sub(self, rhs: &LPoly) -> LPoly {
        let mut p = self.clone();
        for (k, c) in &rhs.terms {
            p.add_term(*k, -c);
        }
        p
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        LPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, rhs: &LPoly) -> LPoly {
        let mut p = LPoly::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                p.add_term(k1 + k2, c1 * c2);
            }
        }
        p
    }
}

impl fmt::Debug for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}
