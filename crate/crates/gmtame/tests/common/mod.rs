//! Randomized property suites shared by the `properties` and `acceptance`
//! test targets. Each suite draws its own inputs through proptest and
//! verifies a contract of one pipeline stage against an independent check.

use gmtame::brieskorn;
use gmtame::exactmath::{
    poly_mat_mul, rat, rat_i, smith_normal_form, PolyMat, QMatrix, Rat, UPoly,
};
use gmtame::hodge::strict_flag_split;
use gmtame::milnor;
use gmtame::modgroebner::{self, ModVec, OrderKind};
use gmtame::pipeline::{self, CheckLevel, RunConfig};
use gmtame::polyring::{LPoly, Poly, XMono};
use gmtame::spectrum::compute_spectrum;
use gmtame::vfilt::{self, LMat};
use num::traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use std::collections::BTreeMap;

fn run_cases<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    let mut runner = TestRunner::new(Config {
        cases,
        ..Config::default()
    });
    runner.run(&strategy, check).unwrap();
}

// ---- raw generator material for the module Gröbner engine ----

type RawTerm = (i64, i64, i64, i64); // component, theta, numerator, denominator
type RawGen = Vec<RawTerm>;

fn term_strategy() -> impl Strategy<Value = RawTerm> {
    (0..4i64, -3..=3i64, -4..=4i64, 1..=4i64)
}

fn gens_strategy() -> impl Strategy<Value = (bool, Vec<RawGen>)> {
    (
        any::<bool>(),
        prop::collection::vec(prop::collection::vec(term_strategy(), 1..=4), 1..=5),
    )
}

fn build_gens(theta_first: bool, raw: &[RawGen]) -> Vec<ModVec> {
    let kind = if theta_first {
        OrderKind::ThetaFirst
    } else {
        OrderKind::ComponentFirst
    };
    raw.iter()
        .map(|g| {
            let mut v = ModVec::new(kind);
            for &(comp, theta, num, den) in g {
                v.add_term(comp, theta, rat(num, den));
            }
            v
        })
        .filter(|v| !v.is_zero())
        .collect()
}

/// Gröbner contract: every generator, every aligned S-vector of a generator
/// pair sharing a lead component, and every random module combination of the
/// generators reduces to zero against the computed basis.
pub fn suite_gb_span(cases: u32) {
    let strat = (
        gens_strategy(),
        prop::collection::vec((-3..=3i64, 1..=3i64, 0..=2i64), 5),
    );
    run_cases(cases, strat, |((theta_first, raw), combo)| {
        let gens = build_gens(theta_first, &raw);
        if gens.is_empty() {
            return Ok(());
        }
        let basis = modgroebner::groebner(gens.clone());
        for g in &gens {
            prop_assert!(modgroebner::reduces_to_zero(g.clone(), &basis));
        }
        for (i, g1) in gens.iter().enumerate() {
            for g2 in gens.iter().skip(i + 1) {
                let (c1, t1, a1) = g1.lead().unwrap();
                let (c2, t2, a2) = g2.lead().unwrap();
                if c1 != c2 {
                    continue;
                }
                let (hi, lo, thi, tlo, ahi, alo) = if t1 >= t2 {
                    (g1, g2, t1, t2, a1.clone(), a2.clone())
                } else {
                    (g2, g1, t2, t1, a2.clone(), a1.clone())
                };
                let mut s = hi.scale(&ahi.recip());
                s.add_scaled(lo, &-alo.recip(), thi - tlo);
                prop_assert!(modgroebner::reduces_to_zero(s, &basis));
            }
        }
        let mut v = ModVec::new(gens[0].kind());
        for (g, &(num, den, shift)) in gens.iter().zip(combo.iter()) {
            v.add_scaled(g, &rat(num, den), shift);
        }
        prop_assert!(modgroebner::reduces_to_zero(v, &basis));
        Ok(())
    });
}

/// Normal forms are idempotent: reducing a normal form again changes nothing.
pub fn suite_nf_idempotent(cases: u32) {
    let strat = (gens_strategy(), prop::collection::vec(term_strategy(), 1..=5));
    run_cases(cases, strat, |((theta_first, raw), vraw)| {
        let gens = build_gens(theta_first, &raw);
        if gens.is_empty() {
            return Ok(());
        }
        let kind = gens[0].kind();
        let basis = modgroebner::groebner(gens);
        let mut v = ModVec::new(kind);
        for (comp, theta, num, den) in vraw {
            v.add_term(comp, theta, rat(num, den));
        }
        let nf = modgroebner::normal_form(v, &basis, None);
        let nf2 = modgroebner::normal_form(nf.clone(), &basis, None);
        prop_assert!((&nf - &nf2).is_zero());
        Ok(())
    });
}

// ---- a family of two-variable polynomials with controlled topology ----
//
// f = x^a + y^b + c x^i y^j with the mixed term strictly below the segment
// from (a,0) to (0,b). These have an isolated critical point at the origin,
// no critical points at infinity, and Milnor number (a-1)(b-1) regardless
// of c.

#[derive(Debug, Clone)]
pub struct FamilyPoly {
    pub a: u32,
    pub b: u32,
    pub c: Rat,
    pub i: u32,
    pub j: u32,
}

fn family_strategy() -> impl Strategy<Value = FamilyPoly> {
    (2..=4u32, 2..=4u32, -2..=2i64, 1..=2i64, 1..=3u32, 1..=3u32)
        .prop_filter("mixed term must sit below the diagram segment", |&(a, b, _, _, i, j)| {
            i * b + j * a < a * b
        })
        .prop_map(|(a, b, cn, cd, i, j)| FamilyPoly {
            a,
            b,
            c: rat(cn, cd),
            i,
            j,
        })
}

impl FamilyPoly {
    pub fn poly(&self) -> Poly {
        let mut f = Poly::monomial(2, XMono(vec![self.a, 0]), 0, Rat::one());
        f = &f + &Poly::monomial(2, XMono(vec![0, self.b]), 0, Rat::one());
        if !self.c.is_zero() {
            f = &f + &Poly::monomial(2, XMono(vec![self.i, self.j]), 0, self.c.clone());
        }
        f
    }
}

fn engine_column(col: &[LPoly]) -> ModVec {
    // tau-exponent encoding used by the saturation stage
    let mut v = ModVec::new(OrderKind::ComponentFirst);
    for (r, e) in col.iter().enumerate() {
        for (k, c) in e.terms() {
            v.add_term(r as i64, -k, c.clone());
        }
    }
    v
}

/// Saturation output is a fixed point: the logarithm-of-theta action maps
/// each basis column back into the column span, and the action matrix has
/// no positive theta powers.
pub fn suite_saturation_fixpoint(cases: u32) {
    run_cases(cases, family_strategy(), |fam| {
        let f = fam.poly();
        let milnor = milnor::milnor_data(&f).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let lattice = brieskorn::compute_lattice(&f, &milnor, f.x_degree().unwrap())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let (u, b) = vfilt::saturate(&lattice.a).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let mu = u.len();
        let cols: Vec<Vec<LPoly>> = (0..mu)
            .map(|j| (0..mu).map(|r| u[r][j].clone()).collect())
            .collect();
        let basis = modgroebner::groebner(cols.iter().map(|c| engine_column(c)).collect());
        for col in &cols {
            // image under tau*A - tau d/dtau
            let mut img: Vec<LPoly> = col.iter().map(|e| e.theta_dtheta()).collect();
            for (r, out) in img.iter_mut().enumerate() {
                for (c, e) in col.iter().enumerate() {
                    let ap = LPoly::from_upoly(&lattice.a[r][c]);
                    if !ap.is_zero() && !e.is_zero() {
                        *out = &*out + &(&ap * e).shift(-1);
                    }
                }
            }
            prop_assert!(modgroebner::reduces_to_zero(engine_column(&img), &basis));
        }
        for row in &b {
            for e in row {
                prop_assert!(e.max_deg().is_none_or(|d| d <= 0));
            }
        }
        Ok(())
    });
}

/// The normalized residue eigenvalues are strictly decreasing and span less
/// than one.
pub fn suite_window_width(cases: u32) {
    run_cases(cases, family_strategy(), |fam| {
        let f = fam.poly();
        let milnor = milnor::milnor_data(&f).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let lattice = brieskorn::compute_lattice(&f, &milnor, f.x_degree().unwrap())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let v = vfilt::v_filtration(&lattice.a).map_err(|e| TestCaseError::fail(e.to_string()))?;
        for w in v.alphas.windows(2) {
            prop_assert!(w[0].0 > w[1].0);
        }
        let first = &v.alphas.first().unwrap().0;
        let last = &v.alphas.last().unwrap().0;
        prop_assert!(&(first - last) < &rat_i(1));
        Ok(())
    });
}

// ---- synthetic eigen-aligned lattices for the spectrum stage ----

type SpectrumInput = (Vec<(Rat, usize)>, LMat, Vec<Rat>);

/// Random strictly decreasing eigenvalue groups spanning < 1, a lattice
/// matrix obtained from diag(theta^{k_i}) by unimodular column operations,
/// and the known spectrum {alpha_{group(i)} + k_i} of that lattice.
fn spectrum_strategy() -> impl Strategy<Value = (SpectrumInput, Vec<(usize, usize, i64, i64, i64)>)> {
    let dims = 1..=4usize;
    (dims, 0..24i64)
        .prop_flat_map(|(dim, top_num)| {
            (
                Just(dim),
                Just(top_num),
                prop::collection::vec(0..=11i64, dim - 1),
                prop::collection::vec(-2..=2i64, dim),
                prop::collection::vec((0..dim, 0..dim, 0..=2i64, -2..=2i64, 1..=2i64), 0..=6),
            )
        })
        .prop_map(|(dim, top_num, gaps, ks, ops)| {
            // eigenvalues alpha_pos, weakly decreasing, spread <= 11/12 < 1
            let mut vals = vec![rat(top_num, 12)];
            let mut acc = rat(top_num, 12);
            let mut total = 0i64;
            for g in gaps {
                let g = if total + g > 11 { 0 } else { g };
                total += g;
                acc = &acc - &rat(g, 12);
                vals.push(acc.clone());
            }
            let mut alphas: Vec<(Rat, usize)> = Vec::new();
            for v in &vals {
                match alphas.last_mut() {
                    Some((a, m)) if a == v => *m += 1,
                    _ => alphas.push((v.clone(), 1)),
                }
            }
            let mut m: LMat = vec![vec![LPoly::zero(); dim]; dim];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = LPoly::theta(ks[i]);
            }
            let mut expected: Vec<Rat> = (0..dim).map(|i| &vals[i] + &rat_i(ks[i])).collect();
            expected.sort();
            ((alphas, m, expected), ops)
        })
}

fn apply_col_ops(m: &mut LMat, ops: &[(usize, usize, i64, i64, i64)]) {
    let dim = m.len();
    for &(src, dst, shift, num, den) in ops {
        let (src, dst) = (src % dim, dst % dim);
        if src == dst || num == 0 {
            continue;
        }
        let c = rat(num, den);
        for r in 0..dim {
            let add = m[r][src].shift(shift).scale(&c);
            m[r][dst] = &m[r][dst] + &add;
        }
    }
}

/// Spectrum multiplicities always sum to the rank, and the computed values
/// match the diagonal oracle of the generating lattice.
pub fn suite_spectrum_count(cases: u32) {
    run_cases(cases, spectrum_strategy(), |((alphas, mut m, expected), ops)| {
        apply_col_ops(&mut m, &ops);
        let s = compute_spectrum(&m, &alphas).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(s.values.iter().map(|(_, c)| c).sum::<usize>(), m.len());
        let got: Vec<Rat> = s
            .values
            .iter()
            .flat_map(|(a, c)| std::iter::repeat(a.clone()).take(*c))
            .collect();
        prop_assert_eq!(got, expected);
        Ok(())
    });
}

/// The spectrum is an invariant of the generated module: unimodular column
/// operations on the lattice matrix do not change it.
pub fn suite_spectrum_invariance(cases: u32) {
    let strat = (
        spectrum_strategy(),
        prop::collection::vec((0..4usize, 0..4usize, 0..=2i64, -2..=2i64, 1..=2i64), 0..=6),
    );
    run_cases(cases, strat, |(((alphas, mut m, _), ops1), ops2)| {
        apply_col_ops(&mut m, &ops1);
        let s1 = compute_spectrum(&m, &alphas).map_err(|e| TestCaseError::fail(e.to_string()))?;
        apply_col_ops(&mut m, &ops2);
        let s2 = compute_spectrum(&m, &alphas).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(s1.values, s2.values);
        Ok(())
    });
}

/// End-to-end contract of the distinguished basis: the t-action matrix is
/// affine in theta with diagonal linear part equal to the sorted spectrum,
/// the multiplicities sum to the Milnor number (a-1)(b-1) of the family,
/// and the mean equals (n+1)/2 = 1.
pub fn suite_good_basis_contract(cases: u32) {
    run_cases(cases, family_strategy(), |fam| {
        let f = fam.poly();
        let out = pipeline::run(
            &f,
            &RunConfig {
                checks: CheckLevel::Fast,
                ..Default::default()
            },
        )
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let mu = out.mu;
        prop_assert_eq!(mu, ((fam.a - 1) * (fam.b - 1)) as usize);
        prop_assert_eq!(out.spectrum.values.iter().map(|(_, c)| c).sum::<usize>(), mu);
        prop_assert_eq!(&out.spectrum.mean, &rat_i(1));
        let spec_sorted: Vec<Rat> = out
            .spectrum
            .values
            .iter()
            .flat_map(|(a, c)| std::iter::repeat(a.clone()).take(*c))
            .collect();
        for i in 0..mu {
            for j in 0..mu {
                if i != j {
                    prop_assert!(out.a1[(i, j)].is_zero());
                }
            }
            prop_assert_eq!(&out.a1[(i, i)], &spec_sorted[i]);
        }
        if fam.c.is_zero() {
            // quasihomogeneous oracle: {i/a + j/b}
            let mut oracle: Vec<Rat> = (1..fam.a)
                .flat_map(|i| {
                    (1..fam.b).map(move |j| {
                        &rat(i as i64, fam.a as i64) + &rat(j as i64, fam.b as i64)
                    })
                })
                .collect();
            oracle.sort();
            prop_assert_eq!(spec_sorted, oracle);
        }
        Ok(())
    });
}

// ---- strict flag inputs built directly from chain data ----

type FlagCase = (usize, Vec<(usize, i64)>, Vec<(usize, usize, i64, i64)>);

fn flag_strategy() -> impl Strategy<Value = FlagCase> {
    (1..=6usize)
        .prop_flat_map(|dim| {
            (
                Just(dim),
                prop::collection::vec((1..=3usize, -3..=3i64), 1..=dim),
                prop::collection::vec((0..6usize, 0..6usize, -2..=2i64, 1..=2i64), 0..=8),
            )
        })
}

fn rank_of_cols(dim: usize, cols: &[Vec<Rat>]) -> usize {
    if cols.is_empty() {
        return 0;
    }
    QMatrix::from_columns(dim, &cols.to_vec()).rank()
}

fn same_span(dim: usize, a: &[Vec<Rat>], b: &[Vec<Rat>]) -> bool {
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    let r = rank_of_cols(dim, &both);
    r == rank_of_cols(dim, a) && r == rank_of_cols(dim, b)
}

/// The flag splitter returns a graded basis acting by exact chains; verified
/// here by brute-force rank computations against randomly mixed chain data.
pub fn suite_strict_flag_split(cases: u32) {
    run_cases(cases, flag_strategy(), |(dim, chains, mixes)| {
        // chain structure in a standard basis: lengths truncated to fit dim
        let mut levels: Vec<i64> = Vec::new();
        let mut succ: Vec<Option<usize>> = Vec::new();
        for &(len, top) in &chains {
            if levels.len() >= dim {
                break;
            }
            let len = len.min(dim - levels.len());
            let start = levels.len();
            for t in 0..len {
                levels.push(top - t as i64);
                succ.push(if t + 1 < len { Some(start + t + 1) } else { None });
            }
        }
        let d = levels.len();
        // mix with a random determinant-one transform
        let mut q = QMatrix::identity(d);
        for &(i, j, num, den) in &mixes {
            let (i, j) = (i % d, j % d);
            if i == j || num == 0 {
                continue;
            }
            let c = rat(num, den);
            for r in 0..d {
                let add = &q[(r, i)] * &c;
                q[(r, j)] = &q[(r, j)] + &add;
            }
        }
        let mut nstd = QMatrix::zero(d, d);
        for (t, s) in succ.iter().enumerate() {
            if let Some(s) = *s {
                nstd[(s, t)] = Rat::one();
            }
        }
        let n = &(&q * &nstd) * &q.inverse().unwrap();
        let vecs: Vec<Vec<Rat>> = (0..d).map(|t| q.column(t)).collect();
        let mut flag: BTreeMap<i64, Vec<Vec<Rat>>> = BTreeMap::new();
        for &p in levels.iter() {
            let gens: Vec<Vec<Rat>> = (0..d)
                .filter(|&t| levels[t] >= p)
                .map(|t| vecs[t].clone())
                .collect();
            flag.insert(p, gens);
        }
        let out = strict_flag_split(d, &flag, &n).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(out.len(), d);
        // span agreement at every populated level
        for (&p, gens) in &flag {
            let ours: Vec<Vec<Rat>> = out
                .iter()
                .filter(|(l, _)| *l >= p)
                .map(|(_, v)| v.clone())
                .collect();
            prop_assert!(same_span(d, gens, &ours));
        }
        // exact chains: n maps each column to another column or to zero
        for (l, v) in &out {
            let img = &n * &QMatrix::from_columns(d, &[v.clone()]);
            let img: Vec<Rat> = (0..d).map(|i| img[(i, 0)].clone()).collect();
            if img.iter().all(|e| e.is_zero()) {
                continue;
            }
            let hit = out
                .iter()
                .any(|(l2, w)| *l2 == *l - 1 && w == &img);
            prop_assert!(hit, "chain image is not a recorded column");
        }
        Ok(())
    });
}

/// Smith normal form recomposition: left * input * right equals the diagonal,
/// the transforms invert exactly, and the divisibility chain holds.
pub fn suite_smith_recomposition(cases: u32) {
    let entry = prop::collection::vec((-3..=3i64, 1..=2i64), 0..=3);
    let strat = (1..=3usize, 1..=3usize).prop_flat_map(move |(r, c)| {
        (
            Just(r),
            Just(c),
            prop::collection::vec(prop::collection::vec(entry.clone(), c), r),
        )
    });
    run_cases(cases, strat, |(_rows, _cols, raw)| {
        let a: PolyMat = raw
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cs| UPoly::from_coeffs(cs.iter().map(|&(n, d)| rat(n, d)).collect()))
                    .collect()
            })
            .collect();
        let s = smith_normal_form(&a).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let prod = poly_mat_mul(&poly_mat_mul(&s.left, &a), &s.right);
        for (i, row) in prod.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if i == j && i < s.diagonal.len() {
                    prop_assert_eq!(e, &s.diagonal[i]);
                } else {
                    prop_assert!(e.is_zero());
                }
            }
        }
        // divisibility chain, zeros last
        for w in s.diagonal.windows(2) {
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_zero() || w[0].divides(&w[1]));
            }
        }
        let check_inverse = |m: &PolyMat, inv: &PolyMat| {
            let p = poly_mat_mul(m, inv);
            for (i, row) in p.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    let expect = if i == j { UPoly::one() } else { UPoly::zero() };
                    if e != &expect {
                        return false;
                    }
                }
            }
            true
        };
        prop_assert!(check_inverse(&s.left, &s.left_inv));
        prop_assert!(check_inverse(&s.right, &s.right_inv));
        Ok(())
    });
}
