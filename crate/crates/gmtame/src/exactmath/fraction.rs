use super::upoly::UPoly;
use super::Rat;
use num::traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Element of the fraction field Q(theta), stored reduced with monic
/// denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    num: UPoly,
    den: UPoly,
}

impl RatFn {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in Q(theta)");
        let mut r = RatFn { num, den };
        r.normalize();
        r
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = UPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() != Some(0) {
            self.num = self.num.div_rem(&g).0;
            self.den = self.den.div_rem(&g).0;
        }
        let lc = self.den.lead_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFn {
            num: p,
            den: UPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFn::from_poly(UPoly::constant(c))
    }

    pub fn zero() -> Self {
        RatFn::from_poly(UPoly::zero())
    }

    pub fn one() -> Self {
        RatFn::from_poly(UPoly::one())
    }

    /// theta^k for any integer k, negative powers landing in the denominator.
    pub fn theta_pow(k: i64) -> Self {
        if k >= 0 {
            RatFn::from_poly(UPoly::monomial(k as usize, Rat::one()))
        } else {
            RatFn {
                num: UPoly::one(),
                den: UPoly::monomial((-k) as usize, Rat::one()),
            }
        }
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Q(theta)");
        RatFn::new(self.den.clone(), self.num.clone())
    }

    /// The underlying polynomial, if the denominator is trivial.
    pub fn as_poly(&self) -> Option<UPoly> {
        if self.den.degree() == Some(0) {
            Some(self.num.scale(&self.den.coeff(0).recip()))
        } else {
            None
        }
    }

    /// Decompose as theta^shift * p with p a polynomial and shift <= 0
    /// maximal, when the denominator is a theta power. Returns (shift, p).
    pub fn as_theta_laurent(&self) -> Option<(i64, UPoly)> {
        let d = self.den.degree()?;
        for k in 0..d {
            if !self.den.coeff(k).is_zero() {
                return None;
            }
        }
        let lc = self.den.lead_coeff();
        Some((-(d as i64), self.num.scale(&lc.recip())))
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        RatFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        RatFn::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFn {
    type Output = RatFn;
    fn div(self, rhs: &RatFn) -> RatFn {
        assert!(!rhs.is_zero(), "division by zero in Q(theta)");
        RatFn::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num.render("t"))
        } else {
            write!(f, "({})/({})", self.num.render("t"), self.den.render("t"))
        }
    }
}

/// Solve A X = B over Q(theta) by Gaussian elimination. A is square n x n,
/// B is n x m, both row-major. Returns None when A is singular.
pub fn ff_solve(a: &[Vec<RatFn>], b: &[Vec<RatFn>]) -> Option<Vec<Vec<RatFn>>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n));
    assert_eq!(b.len(), n);
    let m = b.first().map_or(0, |row| row.len());
    let mut aug: Vec<Vec<RatFn>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend(b[i].iter().cloned());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for j in col..n + m {
            aug[col][j] = &aug[col][j] * &inv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for j in col..n + m {
                let v = &aug[r][j] - &(&factor * &aug[col][j]);
                aug[r][j] = v;
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Inverse of a square matrix over Q(theta), None if singular.
pub fn ff_inverse(a: &[Vec<RatFn>]) -> Option<Vec<Vec<RatFn>>> {
    let n = a.len();
    let id: Vec<Vec<RatFn>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { RatFn::one() } else { RatFn::zero() })
                .collect()
        })
        .collect();
    ff_solve(a, &id)
}
