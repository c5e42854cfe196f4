//! Exact rational root extraction for univariate rational polynomials.
//!
//! Roots are found modulo a small prime, Hensel-lifted, and recovered by
//! rational reconstruction; every candidate is verified exactly, so the
//! routine is complete: every rational root is returned.

use super::upoly::UPoly;
use super::Rat;
use num::bigint::{BigInt, Sign};
use num::traits::{One, Signed, Zero};

const PRIMES: [u64; 6] = [99991, 100003, 100019, 100043, 100049, 100057];

/// All rational roots of `p` with multiplicities, sorted decreasing.
pub fn rational_roots(p: &UPoly) -> Vec<(Rat, usize)> {
    if p.is_zero() || p.degree() == Some(0) {
        return Vec::new();
    }
    let mut roots: Vec<Rat> = Vec::new();

    // strip the x^v factor
    let v = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    if v > 0 {
        roots.push(Rat::zero());
    }
    let stripped = UPoly::from_coeffs(p.coeffs()[v..].to_vec());

    let s = stripped.squarefree_part();
    match s.degree() {
        None | Some(0) => {}
        Some(1) => {
            let r = -(s.coeff(0) / s.coeff(1));
            if !r.is_zero() {
                roots.push(r);
            }
        }
        Some(_) => {
            for r in modular_rational_roots(&s) {
                if !r.is_zero() {
                    roots.push(r);
                }
            }
        }
    }

    let mut out = Vec::new();
    for r in roots {
        let lin = UPoly::from_coeffs(vec![-r.clone(), Rat::one()]);
        let mut q = p.clone();
        let mut mult = 0usize;
        loop {
            let (quot, rem) = q.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            mult += 1;
            q = quot;
        }
        debug_assert!(mult > 0);
        out.push((r, mult));
    }
    out.sort_by(|a, b| b.0.cmp(&a.0));
    out
}

/// Integer coefficients of `p` after clearing denominators and content.
fn integer_coeffs(p: &UPoly) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in p.coeffs() {
        let d = c.denom();
        den = &den / num::Integer::gcd(&den, d) * d;
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * &den / c.denom())
        .collect();
    let mut content = BigInt::zero();
    for c in &ints {
        content = num::Integer::gcd(&content, c);
    }
    if content.is_zero() {
        return ints;
    }
    ints.iter().map(|c| c / &content).collect()
}

fn eval_mod(coeffs: &[u64], x: u64, q: u64) -> u64 {
    let mut acc: u64 = 0;
    for c in coeffs.iter().rev() {
        acc = ((acc as u128 * x as u128 + *c as u128) % q as u128) as u64;
    }
    acc
}

fn gcd_deg_mod(a: &[u64], b: &[u64], q: u64) -> usize {
    // degree of gcd of two polynomials mod q
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let inv_mod = |a: u64| pow_mod(a, q - 2, q);
    let mut a: Vec<u64> = a.to_vec();
    let mut b: Vec<u64> = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let lb = *b.last().unwrap();
        let ilb = inv_mod(lb);
        while a.len() >= b.len() {
            let c = (*a.last().unwrap() as u128 * ilb as u128 % q as u128) as u64;
            let k = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                let sub = (c as u128 * *bc as u128) % q as u128;
                let cur = a[k + i] as u128;
                a[k + i] = ((cur + q as u128 - sub) % q as u128) as u64;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc: u64 = 1;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % q as u128) as u64;
        }
        b = (b as u128 * b as u128 % q as u128) as u64;
        e >>= 1;
    }
    acc
}

fn coeffs_mod(ints: &[BigInt], q: u64) -> Vec<u64> {
    let qb = BigInt::from(q);
    ints.iter()
        .map(|c| {
            let m = ((c % &qb) + &qb) % &qb;
            let (_, digits) = m.to_u64_digits();
            digits.first().copied().unwrap_or(0)
        })
        .collect()
}

/// Rational roots of a squarefree polynomial of degree >= 2.
fn modular_rational_roots(s: &UPoly) -> Vec<Rat> {
    let ints = integer_coeffs(s);
    let sprime: Vec<BigInt> = ints
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let lc = ints.last().unwrap().clone();
    let a0 = ints.first().unwrap().clone();
    // reconstruction bounds: numerator divides a0, denominator divides lc
    let bound_num = a0.abs();
    let bound_den = lc.abs();
    let target = BigInt::from(2) * &bound_num * &bound_den + 1;

    for &q in &PRIMES {
        let sm = coeffs_mod(&ints, q);
        if *sm.last().unwrap() == 0 {
            continue; // prime divides the leading coefficient
        }
        let dm = coeffs_mod(&sprime, q);
        if gcd_deg_mod(&sm, &dm, q) != 0 {
            continue; // not squarefree mod q
        }
        let mut out = Vec::new();
        for r in 0..q {
            if eval_mod(&sm, r, q) != 0 {
                continue;
            }
            if let Some(root) = lift_and_reconstruct(&ints, &sprime, r, q, &target, &bound_num, &bound_den) {
                if s.eval(&root).is_zero() {
                    out.push(root);
                }
            }
        }
        out.sort();
        out.dedup();
        return out;
    }
    // all probe primes were bad; extremely unlikely, treat as no rational roots
    // found (callers verify completeness and report IrrationalSpectrum)
    Vec::new()
}

fn lift_and_reconstruct(
    ints: &[BigInt],
    sprime: &[BigInt],
    r0: u64,
    q: u64,
    target: &BigInt,
    bound_num: &BigInt,
    bound_den: &BigInt,
) -> Option<Rat> {
    let eval_big = |coeffs: &[BigInt], x: &BigInt, m: &BigInt| -> BigInt {
        let mut acc = BigInt::zero();
        for c in coeffs.iter().rev() {
            acc = (&acc * x + c) % m;
        }
        ((acc % m) + m) % m
    };
    let mut m = BigInt::from(q);
    let mut r = BigInt::from(r0);
    while &m < target {
        let m2 = &m * &m;
        let fr = eval_big(ints, &r, &m2);
        let dfr = eval_big(sprime, &r, &m2);
        let inv = mod_inverse(&dfr, &m2)?;
        r = ((&r - fr * inv) % &m2 + &m2) % &m2;
        m = m2;
    }
    rational_reconstruct(&r, &m, bound_num, bound_den)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = num::Integer::extended_gcd(a, m);
    if e.gcd.is_one() {
        Some(((e.x % m) + m) % m)
    } else {
        None
    }
}

/// Find p/q with r*q = p mod m, |p| <= bound_num, 0 < q <= bound_den.
fn rational_reconstruct(r: &BigInt, m: &BigInt, bound_num: &BigInt, bound_den: &BigInt) -> Option<Rat> {
    let mut r0 = m.clone();
    let mut r1 = r.clone();
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while r1.abs() > *bound_num {
        if r1.is_zero() {
            return None;
        }
        let qq = &r0 / &r1;
        let r2 = &r0 - &qq * &r1;
        let t2 = &t0 - &qq * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > *bound_den {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    Some(Rat::new(num, den))
}
