//! End-to-end driver: lattice search, V-adapted basis, spectrum with the
//! mean-value certificate, opposite filtration, good basis, and monodromy
//! data, with exact rational arithmetic throughout.

use crate::brieskorn;
use crate::error::{Error, Result};
use crate::exactmath::{nilpotent_jordan, rat_i, rat_mod1, QMatrix, Rat};
use crate::goodbasis;
use crate::hodge;
use crate::milnor::{self, MilnorData, MPoly};
use crate::polyring::{LPoly, Poly};
use crate::spectrum::{self, SpectrumData};
use crate::vfilt::{self, lmat_from_q, lmat_identity, lmat_mul, solve_lmat, LMat};
use num::traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckLevel {
    Off,
    Fast,
    Full,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Cap on the lattice approximation degree; defaults to deg(f) + 40.
    pub k_max: Option<u32>,
    pub checks: CheckLevel,
    pub verbose: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            k_max: None,
            checks: CheckLevel::Fast,
            verbose: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct StageStats {
    pub k_final: u32,
    pub k0: u32,
    pub l: u32,
    pub mean_retries: usize,
}

/// One eigenvalue class of the monodromy at infinity: the class is the
/// fractional part of the spectral numbers, the eigenvalue is exp(-2*pi*i*c)
/// for representative c, reported symbolically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyClass {
    pub class_rep: Rat,
    pub mult: usize,
    /// Jordan partition, decreasing.
    pub partition: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyData {
    pub classes: Vec<MonodromyClass>,
}

pub struct PipelineResult {
    pub f: Poly,
    pub nvars: usize,
    pub mu: usize,
    /// Good basis, polynomial representatives, ordered by increasing
    /// spectral number.
    pub phis: Vec<Poly>,
    pub a0: QMatrix,
    pub a1: QMatrix,
    pub spectrum: SpectrumData,
    pub monodromy: MonodromyData,
    pub stats: StageStats,
}

struct FrontData {
    milnor: MilnorData,
    lattice: brieskorn::LatticeBasis,
    u_v: LMat,
    aligned: spectrum::AlignedData,
    spectrum: SpectrumData,
    stats: StageStats,
}

/// Lattice search with the mean-value certificate: raise the approximation
/// degree until the spectrum mean equals (n+1)/2, certifying that the
/// computed lattice is the full one.
fn front(f: &Poly, config: &RunConfig) -> Result<FrontData> {
    let nvars = f.nvars();
    let milnor = milnor::milnor_data(f)?;
    let deg_f = f.x_degree().unwrap_or(1);
    let k_cap = config.k_max.unwrap_or(deg_f + 40);
    let mut k = deg_f;
    let mut retries = 0usize;
    loop {
        if k > k_cap {
            return Err(Error::IterationCapExceeded { stage: "mean value" });
        }
        let lattice = brieskorn::compute_lattice(f, &milnor, k)?;
        let v = vfilt::v_filtration(&lattice.a)?;
        let m0 = solve_lmat(&v.u, &lmat_identity(lattice.mu))?;
        let aligned = spectrum::eigen_align(&v.b, &m0)?;
        let spec = spectrum::compute_spectrum(&aligned.m, &aligned.alphas)?;
        if spectrum::mean_value_test(&spec, nvars)? {
            let stats = StageStats {
                k_final: lattice.k,
                k0: lattice.k0,
                l: lattice.l,
                mean_retries: retries,
            };
            return Ok(FrontData {
                milnor,
                lattice,
                u_v: v.u,
                aligned,
                spectrum: spec,
                stats,
            });
        }
        k += 1;
        retries += 1;
    }
}

/// Compute the spectrum only (certified lattice, no good basis).
pub fn run_spectrum(f: &Poly, config: &RunConfig) -> Result<(SpectrumData, StageStats)> {
    let fr = front(f, config)?;
    Ok((fr.spectrum, fr.stats))
}

fn poly_times_lpoly(p: &Poly, l: &LPoly) -> Poly {
    let mut out = Poly::zero(p.nvars());
    for (k, c) in l.terms() {
        out = &out + &p.theta_shift(k).scale(c);
    }
    out
}

/// Replace negative theta powers by polynomial representatives of the same
/// class: a theta^m coefficient with m < 0 must lie in the Jacobian ideal,
/// and theta^m * (sum h_i d_i f) is equivalent to theta^(m+1) * sum d_i h_i.
fn clear_negative_theta(p: &Poly, tj: &milnor::TracedJacobian) -> Result<Poly> {
    let mut p = p.clone();
    while let Some(m) = p.theta_min() {
        if m >= 0 {
            break;
        }
        let pm = p.theta_coeff(m);
        let cof = tj.express(&MPoly::from_poly(&pm)).ok_or_else(|| {
            Error::Internal("basis element not representable without denominators".into())
        })?;
        p = &p - &pm.theta_shift(m);
        for (i, h) in cof.iter().enumerate() {
            let dh = h.to_poly().deriv_x(i);
            p = &p + &dh.theta_shift(m + 1);
        }
    }
    Ok(p)
}

/// Entrywise filter keeping entries whose row/column spectral numbers differ
/// by exactly the given level.
pub fn graded_part(a0: &QMatrix, alphas: &[Rat], level: &Rat) -> QMatrix {
    QMatrix::from_fn(a0.rows, a0.cols, |i, j| {
        if &(&alphas[i] - &alphas[j]) == level {
            a0[(i, j)].clone()
        } else {
            Rat::zero()
        }
    })
}

/// Jordan data of the monodromy at infinity from the t-action of a good
/// basis: classes of the spectral numbers mod 1, with the Jordan partition
/// of the class-restricted level-one part of A0.
pub fn monodromy(a0: &QMatrix, alphas: &[Rat]) -> Result<MonodromyData> {
    let gr1 = graded_part(a0, alphas, &rat_i(1));
    let mut classes: BTreeMap<Rat, Vec<usize>> = BTreeMap::new();
    for (i, a) in alphas.iter().enumerate() {
        classes.entry(rat_mod1(a)).or_default().push(i);
    }
    let mut out = Vec::new();
    for (rep, idx) in classes {
        let n = gr1.submatrix(&idx, &idx);
        let partition = nilpotent_jordan(&n)?;
        debug_assert_eq!(partition.iter().sum::<usize>(), idx.len());
        out.push(MonodromyClass {
            class_rep: rep,
            mult: idx.len(),
            partition,
        });
    }
    Ok(MonodromyData { classes: out })
}

/// Verify goodness through the basis transformation: since the lattice
/// stage certifies t*phi_lat = phi_lat * A_lat and the good basis is
/// phi_lat * C, the t-action identity for the output is equivalent to
/// A_lat*C + theta^2 d/dtheta(C) = C * A_good, checked exactly.
fn verify_transform_identity(
    a_lat: &crate::exactmath::PolyMat,
    transform: &LMat,
    a_good: &LMat,
) -> Result<()> {
    let mu = transform.len();
    let a_lat_l: LMat = a_lat
        .iter()
        .map(|row| row.iter().map(LPoly::from_upoly).collect())
        .collect();
    let mut lhs = lmat_mul(&a_lat_l, transform);
    for (i, row) in lhs.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = &*e + &transform[i][j].theta_dtheta().shift(1);
        }
    }
    let rhs = lmat_mul(transform, a_good);
    for i in 0..mu {
        for j in 0..mu {
            if lhs[i][j] != rhs[i][j] {
                return Err(Error::Internal(
                    "good basis fails the t-action identity".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Full run: good basis, t-action matrices, spectrum, monodromy.
pub fn run(f: &Poly, config: &RunConfig) -> Result<PipelineResult> {
    let nvars = f.nvars();
    let n_coord = nvars as i64 - 1;
    let fr = front(f, config)?;
    let mu = fr.lattice.mu;

    let graded = hodge::opposite_basis(&fr.aligned.b, &fr.aligned.m, &fr.aligned.alphas, n_coord)?;
    let u_h = lmat_from_q(&graded.u);
    let u_h_inv = lmat_from_q(&graded.u.inverse()?);
    let b2 = lmat_mul(&u_h_inv, &lmat_mul(&fr.aligned.b, &u_h));
    let m2 = lmat_mul(&u_h_inv, &fr.aligned.m);
    let good = goodbasis::good_basis(&b2, &m2, &fr.aligned.alphas, &graded.plevels, n_coord)?;

    let a0 = QMatrix::from_fn(mu, mu, |i, j| good.a[i][j].coeff(0));
    let a1 = QMatrix::from_fn(mu, mu, |i, j| good.a[i][j].coeff(1));

    // total transform from the lattice basis to the good basis
    let transform = lmat_mul(
        &lmat_mul(&lmat_mul(&fr.u_v, &lmat_from_q(&fr.aligned.u0)), &u_h),
        &good.m,
    );
    let tj = milnor::traced_jacobian(f);
    let mut phis = Vec::with_capacity(mu);
    for j in 0..mu {
        let mut p = Poly::zero(nvars);
        for (r, phi) in fr.lattice.phis.iter().enumerate() {
            if transform[r][j].is_zero() {
                continue;
            }
            p = &p + &poly_times_lpoly(phi, &transform[r][j]);
        }
        let p = clear_negative_theta(&p, &tj)?;
        phis.push(p);
    }

    let monodromy = monodromy(&a0, &good.spectral)?;
    if config.checks != CheckLevel::Off {
        let total: usize = monodromy.classes.iter().map(|c| c.mult).sum();
        if total != mu {
            return Err(Error::Internal("monodromy class sizes do not sum".into()));
        }
        let spec_sorted: Vec<Rat> = fr
            .spectrum
            .values
            .iter()
            .flat_map(|(a, m)| std::iter::repeat(a.clone()).take(*m))
            .collect();
        if spec_sorted != good.spectral {
            return Err(Error::Internal(
                "good-basis spectral numbers disagree with the spectrum".into(),
            ));
        }
        if !fr.milnor.is_milnor_basis(&phis) {
            return Err(Error::Internal(
                "good basis does not restrict to a Milnor-algebra basis".into(),
            ));
        }
    }
    if config.checks == CheckLevel::Full {
        verify_transform_identity(&fr.lattice.a, &transform, &good.a)?;
    }

    Ok(PipelineResult {
        f: f.clone(),
        nvars,
        mu,
        phis,
        a0,
        a1,
        spectrum: fr.spectrum,
        monodromy,
        stats: fr.stats,
    })
}
