//! Executable claims. Each check takes its parameters, refuses up front
//! when they fall outside the hypotheses or the precision cap, and
//! otherwise returns a [`VerificationReport`].
//!
//! Series are drawn from a shared [`SeriesMemo`], partition statistics from
//! one [`PartitionTable`] built to [`DP_BOUND`], and `m_{i,j}` / `x̃_α` from
//! one [`MMatrix`]. With `jobs > 1` the index range of a claim is split into
//! contiguous chunks whose results are merged in index order, so reports do
//! not depend on scheduling.

pub mod arith;

use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::thread;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::etaq::{eta_quotient, t_series, u_series, z_inverse_series, z_series, EtaQuotientSpec, SeriesMemo};
use crate::mmatrix::{audit_valuations, MMatrix};
use crate::partitions::{p_of_n, PartitionTable};
use crate::report::{Modulus, ReportBuilder, VerificationReport};
use crate::series::TruncSeries;

pub use arith::{c_at, delta_ram, delta_tilde, hecke_arg, is_prime, legendre, pow5, y_of, MAX_ALPHA};

/// Largest partition size the shared rank table covers.
pub const DP_BOUND: usize = 149;

/// Default cap on any series precision a run may request.
pub const DEFAULT_PREC_CAP: i64 = 50_000;

/// One parameterized claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    Gencn {
        nmax: u64,
    },
    /// The mod-`k` alternating rank sum, `k` in {5, 7}, up to argument `max_arg`.
    Beck {
        k: u32,
        max_arg: u64,
    },
    Ramanujan {
        alpha: u32,
        nmax: u64,
    },
    Thm11 {
        alpha: u32,
        nmax: u64,
    },
    Thm11Nt {
        nmax: u64,
    },
    Thm12 {
        alpha: u32,
        nmax: u64,
    },
    Thm13 {
        alpha: u32,
        ell: u64,
        nmax: u64,
    },
    Cor14 {
        part: u8,
        alpha: u32,
        ell: u64,
        r: u64,
        s: u64,
        nmax: u64,
    },
    Lemma21 {
        imax: u32,
        prec: i64,
    },
    Lemma22 {
        imax: u32,
        prec: i64,
    },
    Lemma41 {
        alpha: u32,
        nmax: u64,
    },
    Lovejoy {
        ell: u64,
        nmax: u64,
    },
    Valuations {
        imax: usize,
        jmax: usize,
        alpha_max: u32,
    },
}

pub const SELECTORS: [&str; 12] = [
    "gencn",
    "beck",
    "ramanujan",
    "thm11",
    "thm12",
    "thm13",
    "cor14",
    "lemma21",
    "lemma22",
    "lemma41",
    "lovejoy",
    "valuations",
];

impl Claim {
    /// The CLI selector that runs this claim.
    pub fn selector(&self) -> &'static str {
        match self {
            Claim::Gencn { .. } => "gencn",
            Claim::Beck { .. } => "beck",
            Claim::Ramanujan { .. } => "ramanujan",
            Claim::Thm11 { .. } | Claim::Thm11Nt { .. } => "thm11",
            Claim::Thm12 { .. } => "thm12",
            Claim::Thm13 { .. } => "thm13",
            Claim::Cor14 { .. } => "cor14",
            Claim::Lemma21 { .. } => "lemma21",
            Claim::Lemma22 { .. } => "lemma22",
            Claim::Lemma41 { .. } => "lemma41",
            Claim::Lovejoy { .. } => "lovejoy",
            Claim::Valuations { .. } => "valuations",
        }
    }

    /// Rejects parameters outside the claim's hypotheses or guards.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Claim::Gencn { nmax } => check_dp("5*nmax+4", 5 * nmax as i128 + 4),
            Claim::Beck { k, max_arg } => {
                if k != 5 && k != 7 {
                    return Err(Error::InvalidArgument(format!("modulus k = {k}, expected 5 or 7")));
                }
                check_dp("max argument", max_arg as i128)
            }
            Claim::Ramanujan { alpha, .. } => check_alpha(alpha, 3),
            Claim::Thm11 { alpha, .. } | Claim::Thm12 { alpha, .. } | Claim::Lemma41 { alpha, .. } => {
                check_alpha(alpha, MAX_ALPHA)
            }
            Claim::Thm11Nt { nmax } => check_dp("25*nmax+24", 25 * nmax as i128 + 24),
            Claim::Thm13 { alpha, ell, .. } => {
                check_alpha(alpha, MAX_ALPHA)?;
                check_ell(ell)
            }
            Claim::Cor14 { part, alpha, ell, r, s, .. } => {
                check_alpha(alpha, MAX_ALPHA)?;
                check_ell(ell)?;
                cor14_hypotheses(part, alpha, ell, r, s)
            }
            Claim::Lemma21 { imax, prec } => {
                check_range("imax", imax as i64, 1, 10)?;
                check_prec(lemma21_required(imax), prec)
            }
            Claim::Lemma22 { imax, prec } => {
                check_range("imax", imax as i64, 1, 3)?;
                check_prec(lemma22_required(imax), prec)
            }
            Claim::Lovejoy { ell, .. } => check_ell(ell),
            Claim::Valuations { imax, jmax, alpha_max } => {
                check_range("imax", imax as i64, 1, 200)?;
                check_range("jmax", jmax as i64, 1, 200)?;
                check_range("alpha", alpha_max as i64, 1, 8)
            }
        }
    }

    /// Highest series exponent the claim needs. Assumes [`validate`](Self::validate) passed.
    pub fn budget(&self) -> i64 {
        let b: i128 = match *self {
            Claim::Gencn { nmax } => nmax as i128,
            Claim::Beck { .. } | Claim::Thm11Nt { .. } | Claim::Valuations { .. } => 0,
            Claim::Ramanujan { alpha, nmax } => p5(alpha) * nmax as i128 + delta_ram(alpha) as i128,
            Claim::Thm11 { alpha, nmax } | Claim::Thm12 { alpha, nmax } => c_progression(alpha, nmax as i128),
            Claim::Thm13 { alpha, ell, nmax } => thm13_lhs_arg(alpha, ell, nmax as i128),
            Claim::Cor14 { part, alpha, ell, r, s, nmax } => {
                thm13_lhs_arg(alpha, ell, cor14_inner(part, ell, r, s, nmax as i128))
            }
            Claim::Lemma21 { prec, .. } | Claim::Lemma22 { prec, .. } => prec as i128,
            Claim::Lemma41 { alpha, nmax } => (24 * nmax as i128 + 23).max(c_progression(alpha, nmax as i128)),
            Claim::Lovejoy { ell, nmax } => ell as i128 * ell as i128 * nmax as i128,
        };
        b.min(i64::MAX as i128) as i64
    }

    /// Highest exponent of `c(n)` the claim reads (0 when none).
    pub fn c_budget(&self) -> i64 {
        match self {
            Claim::Gencn { .. }
            | Claim::Thm11 { .. }
            | Claim::Thm12 { .. }
            | Claim::Thm13 { .. }
            | Claim::Cor14 { .. } => self.budget(),
            Claim::Lemma41 { alpha, nmax } => c_progression(*alpha, *nmax as i128).min(i64::MAX as i128) as i64,
            _ => 0,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Claim::Gencn { nmax } => write!(f, "gencn(nmax={nmax})"),
            Claim::Beck { k, max_arg } => write!(f, "beck(k={k}, max_arg={max_arg})"),
            Claim::Ramanujan { alpha, nmax } => write!(f, "ramanujan(alpha={alpha}, nmax={nmax})"),
            Claim::Thm11 { alpha, nmax } => write!(f, "thm11(alpha={alpha}, nmax={nmax})"),
            Claim::Thm11Nt { nmax } => write!(f, "thm11(route=nt, nmax={nmax})"),
            Claim::Thm12 { alpha, nmax } => write!(f, "thm12(alpha={alpha}, nmax={nmax})"),
            Claim::Thm13 { alpha, ell, nmax } => write!(f, "thm13(alpha={alpha}, ell={ell}, nmax={nmax})"),
            Claim::Cor14 { part, alpha, ell, r, s, nmax } => {
                write!(f, "cor14(part={part}, alpha={alpha}, ell={ell}, r={r}, s={s}, nmax={nmax})")
            }
            Claim::Lemma21 { imax, prec } => write!(f, "lemma21(imax={imax}, prec={prec})"),
            Claim::Lemma22 { imax, prec } => write!(f, "lemma22(imax={imax}, prec={prec})"),
            Claim::Lemma41 { alpha, nmax } => write!(f, "lemma41(alpha={alpha}, nmax={nmax})"),
            Claim::Lovejoy { ell, nmax } => write!(f, "lovejoy(ell={ell}, nmax={nmax})"),
            Claim::Valuations { imax, jmax, alpha_max } => {
                write!(f, "valuations(imax={imax}, jmax={jmax}, alpha={alpha_max})")
            }
        }
    }
}

/// The desk-scale acceptance suite, in output order.
pub fn default_suite() -> Vec<Claim> {
    vec![
        Claim::Gencn { nmax: 25 },
        Claim::Beck { k: 5, max_arg: 148 },
        Claim::Beck { k: 7, max_arg: 148 },
        Claim::Ramanujan { alpha: 1, nmax: 100 },
        Claim::Ramanujan { alpha: 2, nmax: 20 },
        Claim::Ramanujan { alpha: 3, nmax: 5 },
        Claim::Thm11 { alpha: 1, nmax: 100 },
        Claim::Thm11 { alpha: 2, nmax: 100 },
        Claim::Thm11 { alpha: 3, nmax: 100 },
        Claim::Thm11Nt { nmax: 5 },
        Claim::Thm12 { alpha: 1, nmax: 30 },
        Claim::Thm12 { alpha: 2, nmax: 30 },
        Claim::Thm12 { alpha: 3, nmax: 25 },
        Claim::Thm12 { alpha: 4, nmax: 20 },
        Claim::Thm13 { alpha: 1, ell: 7, nmax: 46 },
        Claim::Thm13 { alpha: 2, ell: 7, nmax: 20 },
        Claim::Cor14 { part: 1, alpha: 1, ell: 13, r: 1, s: 0, nmax: 3 },
        Claim::Cor14 { part: 2, alpha: 1, ell: 19, r: 3, s: 0, nmax: 0 },
        Claim::Cor14 { part: 2, alpha: 1, ell: 19, r: 3, s: 1, nmax: 0 },
        Claim::Lemma21 { imax: 8, prec: 480 },
        Claim::Lemma22 { imax: 3, prec: 840 },
        Claim::Lemma41 { alpha: 1, nmax: 50 },
        Claim::Lemma41 { alpha: 2, nmax: 50 },
        Claim::Lovejoy { ell: 7, nmax: 200 },
        Claim::Valuations { imax: 40, jmax: 40, alpha_max: 6 },
    ]
}

fn p5(alpha: u32) -> i128 {
    5i128.pow(alpha)
}

/// `5^α n + δ̃_α`.
fn c_progression(alpha: u32, n: i128) -> i128 {
    p5(alpha) * n + delta_tilde(alpha) as i128
}

/// `5^α ℓ² n + y_{α,ℓ}`.
fn thm13_lhs_arg(alpha: u32, ell: u64, n: i128) -> i128 {
    let ell = ell as i128;
    let y = (arith::parity_constant(alpha) as i128 * p5(alpha) * ell * ell - 19) / 24;
    p5(alpha) * ell * ell * n + y
}

/// The inner index `ℓn + r` (part 1) or `ℓ²n + ℓs + r` (part 2).
fn cor14_inner(part: u8, ell: u64, r: u64, s: u64, n: i128) -> i128 {
    let (ell, r, s) = (ell as i128, r as i128, s as i128);
    if part == 1 {
        ell * n + r
    } else {
        ell * ell * n + ell * s + r
    }
}

fn lemma21_required(imax: u32) -> i64 {
    60 * imax as i64
}

fn lemma22_required(imax: u32) -> i64 {
    60 * (6 * imax as i64 - 4)
}

fn check_range(what: &'static str, value: i64, lo: i64, hi: i64) -> Result<()> {
    if value < lo {
        return Err(Error::OutOfRange { what, value, limit: lo });
    }
    if value > hi {
        return Err(Error::OutOfRange { what, value, limit: hi });
    }
    Ok(())
}

fn check_alpha(alpha: u32, max: u32) -> Result<()> {
    check_range("alpha", alpha as i64, 1, max as i64)
}

fn check_dp(what: &'static str, arg: i128) -> Result<()> {
    if arg > DP_BOUND as i128 {
        return Err(Error::OutOfRange { what, value: arg.min(i64::MAX as i128) as i64, limit: DP_BOUND as i64 });
    }
    Ok(())
}

fn check_ell(ell: u64) -> Result<()> {
    if ell < 7 || !is_prime(ell) {
        return Err(Error::InvalidArgument(format!("ell = {ell} must be a prime >= 7")));
    }
    Ok(())
}

fn check_prec(required: i64, given: i64) -> Result<()> {
    if given < required {
        return Err(Error::InsufficientPrecision { required, given });
    }
    Ok(())
}

fn cor14_hypotheses(part: u8, alpha: u32, ell: u64, r: u64, s: u64) -> Result<()> {
    let fail = |msg: String| Err(Error::Hypothesis(msg));
    if r >= ell {
        return fail(format!("0 <= r <= ell-1 (r = {r}, ell = {ell})"));
    }
    let odd = alpha % 2 == 1;
    let k = arith::parity_constant(alpha);
    match part {
        1 => {
            if ell % 5 != 3 {
                return fail(format!("ell = 3 (mod 5) (ell = {ell})"));
            }
            let symbol = legendre(-24 * r as i64 - k, ell);
            let want = if odd { -1 } else { 1 };
            if symbol != want {
                return fail(format!("((-24r-{k})/ell) = {want} (got {symbol} for r = {r}, ell = {ell})"));
            }
            Ok(())
        }
        2 => {
            if s >= ell {
                return fail(format!("0 <= s <= ell-1 (s = {s}, ell = {ell})"));
            }
            if ell % 5 != 4 {
                return fail(format!("ell = 4 (mod 5) (ell = {ell})"));
            }
            let (ell, r, s) = (ell as i128, r as i128, s as i128);
            let k = k as i128;
            if (24 * r + k) % ell != 0 {
                return fail(format!("24r+{k} = 0 (mod ell) (r = {r}, ell = {ell})"));
            }
            if (24 * s * ell + 24 * r + k) % (ell * ell) == 0 {
                return fail(format!("24s*ell+24r+{k} != 0 (mod ell^2) (r = {r}, s = {s}, ell = {ell})"));
            }
            Ok(())
        }
        _ => Err(Error::InvalidArgument(format!("part = {part}, expected 1 or 2"))),
    }
}

/// Runs claims against shared series, partition and matrix caches.
#[derive(Debug)]
pub struct Verifier {
    jobs: usize,
    prec_cap: i64,
    memo: SeriesMemo,
    table: Mutex<Option<Arc<PartitionTable>>>,
    matrix: MMatrix,
}

impl Default for Verifier {
    fn default() -> Self {
        Self::new(1, DEFAULT_PREC_CAP, None)
    }
}

impl Verifier {
    pub fn new(jobs: usize, prec_cap: i64, cache_dir: Option<PathBuf>) -> Self {
        Self {
            jobs: jobs.max(1),
            prec_cap,
            memo: SeriesMemo::new(cache_dir),
            table: Mutex::new(None),
            matrix: MMatrix::new(),
        }
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn prec_cap(&self) -> i64 {
        self.prec_cap
    }

    pub fn matrix(&self) -> &MMatrix {
        &self.matrix
    }

    pub fn memo(&self) -> &SeriesMemo {
        &self.memo
    }

    /// Validates every claim and checks its budget against the cap, before
    /// anything is computed.
    pub fn admit(&self, claims: &[Claim]) -> Result<()> {
        for claim in claims {
            claim.validate()?;
            let required = claim.budget();
            if required > self.prec_cap {
                return Err(Error::BudgetExceeded { required, cap: self.prec_cap });
            }
        }
        Ok(())
    }

    /// Admits all claims, expands `c` once to the largest budget among them,
    /// then runs each in order.
    pub fn run_all(&self, claims: &[Claim]) -> Result<Vec<VerificationReport>> {
        self.admit(claims)?;
        let c_max = claims.iter().map(Claim::c_budget).max().unwrap_or(0);
        if c_max > 0 {
            self.c_series(c_max)?;
        }
        claims.iter().map(|c| self.run(c)).collect()
    }

    pub fn run(&self, claim: &Claim) -> Result<VerificationReport> {
        self.admit(std::slice::from_ref(claim))?;
        match *claim {
            Claim::Gencn { nmax } => self.gencn(nmax),
            Claim::Beck { k, max_arg } => self.beck(k, max_arg),
            Claim::Ramanujan { alpha, nmax } => self.ramanujan(alpha, nmax),
            Claim::Thm11 { alpha, nmax } => self.thm11(alpha, nmax),
            Claim::Thm11Nt { nmax } => self.thm11_nt(nmax),
            Claim::Thm12 { alpha, nmax } => self.thm12(alpha, nmax),
            Claim::Thm13 { alpha, ell, nmax } => self.thm13(alpha, ell, nmax),
            Claim::Cor14 { part, alpha, ell, r, s, nmax } => self.cor14(part, alpha, ell, r, s, nmax),
            Claim::Lemma21 { imax, prec } => self.lemma21(imax, prec),
            Claim::Lemma22 { imax, prec } => self.lemma22(imax, prec),
            Claim::Lemma41 { alpha, nmax } => self.lemma41(alpha, nmax),
            Claim::Lovejoy { ell, nmax } => self.lovejoy(ell, nmax),
            Claim::Valuations { imax, jmax, alpha_max } => Ok(audit_valuations(&self.matrix, imax, jmax, alpha_max)),
        }
    }

    /// `E_5^4/E_1` through `prec`, memoized.
    pub fn c_series(&self, prec: i64) -> Result<Arc<TruncSeries>> {
        self.series(&EtaQuotientSpec::c_series(), prec)
    }

    fn series(&self, spec: &EtaQuotientSpec, prec: i64) -> Result<Arc<TruncSeries>> {
        if prec > self.prec_cap {
            return Err(Error::BudgetExceeded { required: prec, cap: self.prec_cap });
        }
        self.memo.get(spec, prec)
    }

    /// `F = q^19 E_24^19` and `G = q^23 E_24^23`.
    fn f_and_g(&self, prec: i64) -> Result<(Arc<TruncSeries>, Arc<TruncSeries>)> {
        let f = self.series(&EtaQuotientSpec::new(19, [(24, 19)])?, prec)?;
        let g = self.series(&EtaQuotientSpec::new(23, [(24, 23)])?, prec)?;
        Ok((f, g))
    }

    /// The rank table up to [`DP_BOUND`], built on first use.
    pub fn partition_table(&self) -> Arc<PartitionTable> {
        let mut slot = self.table.lock().unwrap_or_else(|e| e.into_inner());
        Arc::clone(slot.get_or_insert_with(|| Arc::new(PartitionTable::build(DP_BOUND))))
    }

    /// Runs `check(n, chunk)` for every `n` in `range`, split over `jobs`
    /// threads in contiguous chunks, and merges the chunks in index order.
    fn for_each_index<F>(&self, report: &mut ReportBuilder, range: RangeInclusive<u64>, check: F) -> Result<()>
    where
        F: Fn(u64, &mut ReportBuilder) -> Result<()> + Sync,
    {
        let (lo, hi) = range.into_inner();
        if hi < lo {
            return Ok(());
        }
        let count = hi - lo + 1;
        let jobs = (self.jobs as u64).min(count);
        if jobs <= 1 {
            return (lo..=hi).try_for_each(|n| check(n, report));
        }
        let per = count.div_ceil(jobs);
        let check = &check;
        let chunks: Vec<Result<ReportBuilder>> = thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|k| {
                    let mut chunk = report.fork();
                    let start = lo + k * per;
                    let end = (start + per - 1).min(hi);
                    scope.spawn(move || {
                        (start..=end).try_for_each(|n| check(n, &mut chunk))?;
                        Ok(chunk)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("verification worker panicked")).collect()
        });
        for chunk in chunks {
            report.merge(chunk?);
        }
        Ok(())
    }

    /// `NT(4,5,5n+4) - NT(1,5,5n+4) = c(n)`, exactly.
    pub fn gencn(&self, nmax: u64) -> Result<VerificationReport> {
        Claim::Gencn { nmax }.validate()?;
        let table = self.partition_table();
        let c = self.c_series(nmax as i64)?;
        let mut report = ReportBuilder::new("gencn", Modulus::Exact).param("nmax", nmax).range(format!("0<=n<={nmax}"));
        self.for_each_index(&mut report, 0..=nmax, |n, rep| {
            let arg = 5 * n as usize + 4;
            let lhs = table.nt(4, 5, arg)? - table.nt(1, 5, arg)?;
            rep.compare(format!("n={n}"), &lhs, &c.coeff(n as i64)?);
            Ok(())
        })?;
        Ok(report.finish())
    }

    /// The alternating rank-class sums of parts vanish mod `k` on the
    /// progressions `5n+i`, `i` in {1, 4} (`k = 5`) and `7n+i`, `i` in {1, 5}
    /// (`k = 7`), for arguments up to `max_arg`.
    pub fn beck(&self, k: u32, max_arg: u64) -> Result<VerificationReport> {
        Claim::Beck { k, max_arg }.validate()?;
        let table = self.partition_table();
        // (residue, weight) pairs of the alternating sum
        let (residues, weights): ([u64; 2], &[(u32, i64)]) = if k == 5 {
            ([1, 4], &[(1, 1), (4, -1), (2, 2), (3, -2)])
        } else {
            ([1, 5], &[(1, 1), (6, -1), (2, 1), (5, -1), (3, -1), (4, 1)])
        };
        let mut report = ReportBuilder::new("beck", Modulus::Mod(BigInt::from(k)))
            .param("k", k)
            .param("max_arg", max_arg)
            .range(format!("{k}n+i<={max_arg}, i in {{{}, {}}}", residues[0], residues[1]));
        let zero = BigInt::zero();
        self.for_each_index(&mut report, 1..=max_arg, |arg, rep| {
            if !residues.contains(&(arg % k as u64)) {
                return Ok(());
            }
            let mut sum = BigInt::zero();
            for &(r, w) in weights {
                sum += table.nt(r, k, arg as usize)? * w;
            }
            rep.compare(format!("arg={arg}"), &sum, &zero);
            Ok(())
        })?;
        Ok(report.finish())
    }

    /// `p(5^α n + δ_α) = 0 (mod 5^α)`.
    pub fn ramanujan(&self, alpha: u32, nmax: u64) -> Result<VerificationReport> {
        let claim = Claim::Ramanujan { alpha, nmax };
        self.admit(std::slice::from_ref(&claim))?;
        let m = pow5(alpha) as u64;
        let d = delta_ram(alpha) as u64;
        let p = p_of_n(claim.budget() as usize);
        let zero = BigInt::zero();
        let mut report = ReportBuilder::new("ramanujan", Modulus::power_of_five(alpha))
            .param("alpha", alpha)
            .param("nmax", nmax)
            .range(format!("0<=n<={nmax}"));
        self.for_each_index(&mut report, 0..=nmax, |n, rep| {
            rep.compare(format!("n={n}"), &p[(m * n + d) as usize], &zero);
            Ok(())
        })?;
        Ok(report.finish())
    }

    /// `c(5^α n + δ̃_α) = 0 (mod 5^α)`.
    pub fn thm11(&self, alpha: u32, nmax: u64) -> Result<VerificationReport> {
        let claim = Claim::Thm11 { alpha, nmax };
        self.admit(std::slice::from_ref(&claim))?;
        let c = self.c_series(claim.budget())?;
        let (m, d) = (pow5(alpha) as u64, delta_tilde(alpha) as u64);
        let zero = BigInt::zero();
        let mut report = ReportBuilder::new("thm11", Modulus::power_of_five(alpha))
            .param("alpha", alpha)
            .param("nmax", nmax)
            .param("route", "series")
            .range(format!("0<=n<={nmax}"));
        self.for_each_index(&mut report, 0..=nmax, |n, rep| {
            rep.compare(format!("n={n}"), &c.coeff((m * n + d) as i64)?, &zero);
            Ok(())
        })?;
        Ok(report.finish())
    }

    /// `NT(1,5,25n+24) = NT(4,5,25n+24) (mod 5)` straight from the rank table.
    pub fn thm11_nt(&self, nmax: u64) -> Result<VerificationReport> {
        Claim::Thm11Nt { nmax }.validate()?;
        let table = self.partition_table();
        let d = 5 * delta_tilde(1) as u64 + 4;
        let mut report = ReportBuilder::new("thm11", Modulus::power_of_five(1))
            .param("alpha", 1)
            .param("nmax", nmax)
            .param("route", "nt")
            .range(format!("0<=n<={nmax}"));
        self.for_each_index(&mut report, 0..=nmax, |n, rep| {
            let arg = (25 * n + d) as usize;
            rep.compare(format!("n={n}"), &table.nt(1, 5, arg)?, &table.nt(4, 5, arg)?);
            Ok(())
        })?;
        Ok(report.finish())
    }

    /// `Σ c(5^α n + δ̃_α) q^n` against `Σ_i x̃_{α,i} q^{i-1} E_5^{6i-1}/E_1^{6i-4}`
    /// (odd `α`) or `Σ_i x̃_{α,i} q^{i-1} E_5^{6i-2}/E_1^{6i-5}` (even `α`),
    /// exactly through `q^nmax`.
    pub fn thm12(&self, alpha: u32, nmax: u64) -> Result<VerificationReport> {
        let claim = Claim::Thm12 { alpha, nmax };
        self.admit(std::slice::from_ref(&claim))?;
        let c = self.c_series(claim.budget())?;
        let prec = nmax as i64;
        let lhs = c.extract(delta_tilde(alpha) as u32, pow5(alpha) as u32).truncate(prec);
        let rhs = self.thm12_rhs(alpha, prec)?;
        let mut report = ReportBuilder::new("thm12", Modulus::Exact)
            .param("alpha", alpha)
            .param("nmax", nmax)
            .range(format!("0<=n<={nmax}"));
        self.for_each_index(&mut report, 0..=nmax, |n, rep| {
            let n = n as i64;
            rep.compare(format!("n={n}"), &lhs.coeff(n)?, &rhs.coeff(n)?);
            Ok(())
        })?;
        Ok(report.finish())
    }

    /// The right-hand side of the `x̃` expansion through `q^prec`. Terms with
    /// `i - 1 > prec` vanish at this precision.
    pub fn thm12_rhs(&self, alpha: u32, prec: i64) -> Result<TruncSeries> {
        let x = self.matrix.x_vec(alpha);
        let odd = alpha % 2 == 1;
        let top = (x.support() as i64).min(prec + 1).max(0) as usize;
        let mut acc = TruncSeries::zero(prec);
        for i in 1..=top {
            let coeff = x.get(i);
            if coeff.is_zero() {
                continue;
            }
            let k = i as i32;
            let factors = if odd { [(5, 6 * k - 1), (1, -(6 * k - 4))] } else { [(5, 6 * k - 2), (1, -(6 * k - 5))] };
            let spec = EtaQuotientSpec::new(i as i64 - 1, factors)?;
            acc = &acc + &eta_quotient(&spec, prec)?.scale(&coeff);
        }
        Ok(acc)
    }

    /// `c(5^α ℓ² n + y_{α,ℓ}) = λ(n) c(5^α n + δ̃_α) - ℓ c(hecke_arg(α, ℓ, n))
    /// (mod 5^{α+1})`, with `λ(n) = (15/ℓ)(1 + ℓ - ((-24n-23)/ℓ))` for odd
    /// `α` and `(15/ℓ)(1 + ℓ - ℓ²((-24n-19)/ℓ))` for even `α`.
    pub fn thm13(&self, alpha: u32, ell: u64, nmax: u64) -> Result<VerificationReport> {
        let claim = Claim::Thm13 { alpha, ell, nmax };
        self.admit(std::slice::from_ref(&claim))?;
        let c = self.c_series(claim.budget())?;
        let odd = alpha % 2 == 1;
        let k = arith::parity_constant(alpha);
        let (m, d) = (pow5(alpha), delta_tilde(alpha));
        let ell_i = ell as i64;
        let y = thm13_lhs_arg(alpha, ell, 0) as i64;
        let l15 = legendre(15, ell) as i64;
        let mut report = ReportBuilder::new("thm13", Modulus::power_of_five(alpha + 1))
            .param("alpha", alpha)
            .param("ell", ell)
            .param("nmax", nmax)
            .range(format!("0<=n<={nmax}"));
        self.for_each_index(&mut report, 0..=nmax, |n, rep| {
            let n_i = n as i64;
            let lhs = c.coeff(m * ell_i * ell_i * n_i + y)?;
            let symbol = legendre(-24 * n_i - k, ell) as i64;
            let factor = if odd { l15 * (1 + ell_i - symbol) } else { l15 * (1 + ell_i - ell_i * ell_i * symbol) };
            let tail = c_at(&c, &hecke_arg(alpha, ell, n))?;
            let rhs = c.coeff(m * n_i + d)? * factor - tail * ell_i;
            rep.compare(format!("n={n}"), &lhs, &rhs);
            Ok(())
        })?;
        Ok(report.finish())
    }

    /// `c(5^α ℓ²(ℓn+r) + y_{α,ℓ}) = 0` (part 1) or
    /// `c(5^α ℓ²(ℓ²n+ℓs+r) + y_{α,ℓ}) = 0` (part 2), mod `5^{α+1}`.
    pub fn cor14(&self, part: u8, alpha: u32, ell: u64, r: u64, s: u64, nmax: u64) -> Result<VerificationReport> {
        let claim = Claim::Cor14 { part, alpha, ell, r, s, nmax };
        self.admit(std::slice::from_ref(&claim))?;
        let c = self.c_series(claim.budget())?;
        let zero = BigInt::zero();
        let mut report = ReportBuilder::new("cor14", Modulus::power_of_five(alpha + 1))
            .param("part", part)
            .param("alpha", alpha)
            .param("ell", ell)
            .param("r", r);
        if part == 2 {
            report = report.param("s", s);
        }
        let mut report = report.param("nmax", nmax).range(format!("0<=n<={nmax}"));
        self.for_each_index(&mut report, 0..=nmax, |n, rep| {
            let arg = thm13_lhs_arg(alpha, ell, cor14_inner(part, ell, r, s, n as i128)) as i64;
            rep.compare(format!("n={n} (c({arg}))"), &c.coeff(arg)?, &zero);
            Ok(())
        })?;
        Ok(report.finish())
    }

    /// Laurent identities in `z = 1/(q R(q^5))` and `u`, and the `H`-images
    /// `restrict(t^i, 0, 5) = Σ_j m_{i,j} u^{i-j}` for `i <= imax`.
    pub fn lemma21(&self, imax: u32, prec: i64) -> Result<VerificationReport> {
        let claim = Claim::Lemma21 { imax, prec };
        self.admit(std::slice::from_ref(&claim))?;
        let z = z_series(prec);
        let zi = z_inverse_series(prec);
        let one = TruncSeries::one(prec);
        let eleven = one.scale(&BigInt::from(11));

        let z1 = &(&z - &one) - &zi;
        let z5 = &(&z.pow(5) - &eleven) - &zi.pow(5);
        let e1_over = eta_quotient(&EtaQuotientSpec::new(-1, [(1, 1), (25, -1)])?, prec)?;
        let u = u_series(prec)?;
        let t = t_series(prec)?;
        let t_from_z = &z5 * &z1.invert()?;

        let mut report = ReportBuilder::new("lemma21", Modulus::Exact).param("imax", imax).param("prec", prec);
        let mut through = i64::MAX;
        through = through.min(compare_series(&mut report, "z-1-1/z", &z1, &e1_over)?);
        through = through.min(compare_series(&mut report, "z^5-11-z^-5", &z5, &u)?);
        through = through.min(compare_series(&mut report, "t", &t, &t_from_z)?);
        for i in 1..=imax {
            let lhs = t.pow(i).restrict(0, 5);
            let rhs =
                self.u_polynomial(&u, (1..=i as usize).map(|j| (self.matrix.m_entry(i as usize, j), i as usize - j)));
            through = through.min(compare_series(&mut report, &format!("H(t^{i})"), &lhs, &rhs)?);
        }
        Ok(report.param("through", through).range(format!("1<=i<={imax}, exponents<={through}")).finish())
    }

    /// `restrict(t^{6i-4}, 0, 5) = Σ_j ã_{i,j} u^{5i-3-j}` and
    /// `restrict(t^{6i-5}, 0, 5) = Σ_j b̃_{i,j} u^{5i-4-j}` for `i <= imax`.
    pub fn lemma22(&self, imax: u32, prec: i64) -> Result<VerificationReport> {
        let claim = Claim::Lemma22 { imax, prec };
        self.admit(std::slice::from_ref(&claim))?;
        let u = u_series(prec)?;
        let t = t_series(prec)?;
        let mut report = ReportBuilder::new("lemma22", Modulus::Exact).param("imax", imax).param("prec", prec);
        let mut through = i64::MAX;
        for i in 1..=imax as usize {
            let lhs = t.pow(6 * i as u32 - 4).restrict(0, 5);
            let rhs = self.u_polynomial(&u, (1..=5 * i - 3).map(|j| (self.matrix.a_tilde(i, j), 5 * i - 3 - j)));
            through = through.min(compare_series(&mut report, &format!("H(t^(6i-4)) i={i}"), &lhs, &rhs)?);

            let lhs = t.pow(6 * i as u32 - 5).restrict(0, 5);
            let rhs = self.u_polynomial(&u, (1..=5 * i - 4).map(|j| (self.matrix.b_tilde(i, j), 5 * i - 4 - j)));
            through = through.min(compare_series(&mut report, &format!("H(t^(6i-5)) i={i}"), &lhs, &rhs)?);
        }
        Ok(report.param("through", through).range(format!("1<=i<={imax}, exponents<={through}")).finish())
    }

    /// `Σ coeff · u^power` over `(coeff, power)` terms.
    fn u_polynomial(&self, u: &TruncSeries, terms: impl Iterator<Item = (BigInt, usize)>) -> TruncSeries {
        let mut acc: Option<TruncSeries> = None;
        for (coeff, power) in terms {
            let term = u.pow(power as u32).scale(&coeff);
            acc = Some(match acc {
                Some(a) => &a + &term,
                None => term,
            });
        }
        acc.unwrap_or_else(|| TruncSeries::zero(u.prec()))
    }

    /// `c(5^α n + δ̃_α) = x̃_{α,1} b(24n+23)` (odd `α`) or `x̃_{α,1} a(24n+19)`
    /// (even `α`), mod `5^{α+1}`.
    pub fn lemma41(&self, alpha: u32, nmax: u64) -> Result<VerificationReport> {
        let claim = Claim::Lemma41 { alpha, nmax };
        self.admit(std::slice::from_ref(&claim))?;
        let c = self.c_series(claim.c_budget())?;
        let k = arith::parity_constant(alpha) as u64;
        let (f, g) = self.f_and_g(24 * nmax as i64 + k as i64)?;
        let ab = if alpha % 2 == 1 { g } else { f };
        let x1 = self.matrix.x_vec(alpha).get(1);
        let (m, d) = (pow5(alpha) as u64, delta_tilde(alpha) as u64);
        let mut report = ReportBuilder::new("lemma41", Modulus::power_of_five(alpha + 1))
            .param("alpha", alpha)
            .param("nmax", nmax)
            .range(format!("0<=n<={nmax}"));
        self.for_each_index(&mut report, 0..=nmax, |n, rep| {
            let lhs = c.coeff((m * n + d) as i64)?;
            let rhs = &x1 * ab.coeff((24 * n + k) as i64)?;
            rep.compare(format!("n={n}"), &lhs, &rhs);
            Ok(())
        })?;
        Ok(report.finish())
    }

    /// For `1 <= n <= nmax`, mod 5:
    /// `b(ℓ²n) = (15/ℓ)(1 + ℓ - (-n/ℓ)) b(n) - ℓ b(n/ℓ²)` and
    /// `a(ℓ²n) = (15/ℓ)(1 + ℓ - ℓ²(-n/ℓ)) a(n) - ℓ a(n/ℓ²)`,
    /// where `b(n/ℓ²) = a(n/ℓ²) = 0` unless `ℓ² | n`.
    pub fn lovejoy(&self, ell: u64, nmax: u64) -> Result<VerificationReport> {
        let claim = Claim::Lovejoy { ell, nmax };
        self.admit(std::slice::from_ref(&claim))?;
        let (f, g) = self.f_and_g(claim.budget())?;
        let ell_i = ell as i64;
        let ell2 = ell_i * ell_i;
        let l15 = legendre(15, ell) as i64;
        let mut report = ReportBuilder::new("lovejoy", Modulus::power_of_five(1))
            .param("ell", ell)
            .param("nmax", nmax)
            .range(format!("1<=n<={nmax}"));
        self.for_each_index(&mut report, 1..=nmax, |n, rep| {
            let n = n as i64;
            let symbol = legendre(-n, ell) as i64;
            let reduced = |s: &TruncSeries| -> Result<BigInt> {
                if n % ell2 == 0 {
                    s.coeff(n / ell2)
                } else {
                    Ok(BigInt::zero())
                }
            };
            let factor_b = l15 * (1 + ell_i - symbol);
            let rhs = g.coeff(n)? * factor_b - reduced(&g)? * ell_i;
            rep.compare(format!("b n={n}"), &g.coeff(ell2 * n)?, &rhs);

            let factor_a = l15 * (1 + ell_i - ell2 * symbol);
            let rhs = f.coeff(n)? * factor_a - reduced(&f)? * ell_i;
            rep.compare(format!("a n={n}"), &f.coeff(ell2 * n)?, &rhs);
            Ok(())
        })?;
        Ok(report.finish())
    }
}

/// Compares two series coefficientwise through their common precision and
/// returns that precision.
fn compare_series(report: &mut ReportBuilder, label: &str, lhs: &TruncSeries, rhs: &TruncSeries) -> Result<i64> {
    let upto = lhs.prec().min(rhs.prec());
    for e in lhs.offset().min(rhs.offset())..=upto {
        report.compare(format!("{label} q^{e}"), &lhs.coeff(e)?, &rhs.coeff(e)?);
    }
    Ok(upto)
}

/// Whether every report passed or was vacuous.
pub fn all_ok(reports: &[VerificationReport]) -> bool {
    reports.iter().all(VerificationReport::passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use num_traits::One;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn gencn_spot_values() {
        let v = Verifier::default();
        let table = v.partition_table();
        assert_eq!(table.nt(4, 5, 4).unwrap() - table.nt(1, 5, 4).unwrap(), BigInt::one());
        let r = v.gencn(10).unwrap();
        assert_eq!(r.status, Status::Pass, "{r}");
        assert!(matches!(v.gencn(30), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn beck_both_moduli() {
        let v = Verifier::default();
        assert_eq!(v.beck(5, 60).unwrap().status, Status::Pass);
        assert_eq!(v.beck(7, 60).unwrap().status, Status::Pass);
        assert!(v.beck(11, 60).is_err());
    }

    #[test]
    fn ramanujan_small() {
        let v = Verifier::default();
        assert_eq!(p_of_n(24)[24], big(1575));
        assert_eq!(v.ramanujan(1, 20).unwrap().status, Status::Pass);
        assert_eq!(v.ramanujan(2, 4).unwrap().status, Status::Pass);
        assert!(v.ramanujan(4, 1).is_err());
    }

    #[test]
    fn thm11_spot_values() {
        let v = Verifier::default();
        let c = v.c_series(20).unwrap();
        assert_eq!(c.coeff(4).unwrap(), big(5));
        assert_eq!(c.coeff(19).unwrap(), big(50));
        assert_eq!(v.thm11(1, 10).unwrap().status, Status::Pass);
        assert_eq!(v.thm11_nt(1).unwrap().status, Status::Pass);
        assert!(v.thm11_nt(6).is_err());
    }

    #[test]
    fn thm12_small() {
        let v = Verifier::default();
        let r = v.thm12(1, 8).unwrap();
        assert_eq!(r.status, Status::Pass, "{r}");
        assert_eq!(v.thm12_rhs(2, 0).unwrap().coeff(0).unwrap(), big(50));
    }

    #[test]
    fn thm13_first_terms() {
        let v = Verifier::default();
        // (15/7)(1 + 7 - ((-23)/7)) = 9
        assert_eq!(legendre(15, 7) * (8 - legendre(-23, 7)), 9);
        let r = v.thm13(1, 7, 2).unwrap();
        assert_eq!(r.status, Status::Pass, "{r}");
    }

    #[test]
    fn cor14_screening() {
        let v = Verifier::new(1, 2_000, None);
        assert!(matches!(v.cor14(1, 1, 13, 5, 0, 0), Err(Error::Hypothesis(_))));
        assert!(matches!(v.cor14(1, 1, 7, 1, 0, 0), Err(Error::Hypothesis(_))));
        assert!(matches!(v.cor14(2, 1, 19, 4, 0, 0), Err(Error::Hypothesis(_))));
        assert!(matches!(v.cor14(3, 1, 19, 3, 0, 0), Err(Error::InvalidArgument(_))));
        assert_eq!(Claim::Cor14 { part: 1, alpha: 1, ell: 13, r: 1, s: 0, nmax: 3 }.budget(), 10985 * 3 + 1654);
        assert_eq!(Claim::Cor14 { part: 2, alpha: 1, ell: 19, r: 3, s: 0, nmax: 0 }.budget(), 7144);
        assert_eq!(Claim::Cor14 { part: 2, alpha: 1, ell: 19, r: 3, s: 1, nmax: 0 }.budget(), 41439);
        assert!(matches!(v.cor14(1, 1, 13, 1, 0, 3), Err(Error::BudgetExceeded { required: 34609, cap: 2_000 })));
    }

    #[test]
    fn lemma21_small() {
        let v = Verifier::default();
        let r = v.lemma21(2, 120).unwrap();
        assert_eq!(r.status, Status::Pass, "{r}");
        assert!(matches!(v.lemma21(2, 100), Err(Error::InsufficientPrecision { required: 120, given: 100 })));
    }

    #[test]
    fn lemma22_first_index() {
        let v = Verifier::default();
        let r = v.lemma22(1, 120).unwrap();
        assert_eq!(r.status, Status::Pass, "{r}");
    }

    #[test]
    fn lemma41_and_lovejoy_small() {
        let v = Verifier::default();
        assert_eq!(v.lemma41(1, 5).unwrap().status, Status::Pass);
        assert_eq!(v.lovejoy(7, 30).unwrap().status, Status::Pass);
        assert!(v.lovejoy(9, 3).is_err());
    }

    #[test]
    fn chunked_runs_match_sequential() {
        let one = Verifier::new(1, DEFAULT_PREC_CAP, None);
        let four = Verifier::new(4, DEFAULT_PREC_CAP, None);
        for claim in [Claim::Thm11 { alpha: 2, nmax: 13 }, Claim::Beck { k: 7, max_arg: 40 }] {
            let a = one.run(&claim).unwrap().without_timing();
            let b = four.run(&claim).unwrap().without_timing();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn failing_congruence_is_reported() {
        let v = Verifier::default();
        let c = v.c_series(30).unwrap();
        let mut report = ReportBuilder::new("probe", Modulus::power_of_five(2));
        v.for_each_index(&mut report, 0..=5, |n, rep| {
            rep.compare(n, &c.coeff(5 * n as i64 + 4)?, &BigInt::zero());
            Ok(())
        })
        .unwrap();
        let r = report.finish();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.failures[0].index, "0");
    }

    #[test]
    fn budgets_refuse_before_computing() {
        let v = Verifier::new(1, 1_000, None);
        assert!(matches!(
            v.run_all(&[Claim::Thm11 { alpha: 1, nmax: 10 }, Claim::Thm11 { alpha: 3, nmax: 100 }]),
            Err(Error::BudgetExceeded { required: 12619, cap: 1_000 })
        ));
    }
}
