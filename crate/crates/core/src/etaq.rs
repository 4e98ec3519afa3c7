//! Euler products, eta-quotients and the named series built from them.
//!
//! `E_j = ∏_{n≥1} (1 - q^{jn})`. Its sparse expansion comes from the
//! pentagonal number theorem and `E_j^3` from Jacobi's identity; every
//! eta-quotient is assembled from those two sparse generators by dense
//! multiplication in the numerator and forward substitution in the
//! denominator.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{SparseSeries, TruncSeries};

/// `q^s · ∏_j E_j^{e_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EtaQuotientSpec {
    monomial_power: i64,
    factors: Vec<(u32, i32)>,
}

impl EtaQuotientSpec {
    /// Factors are merged by level, zero exponents dropped, and the result
    /// kept sorted by level.
    pub fn new(monomial_power: i64, factors: impl IntoIterator<Item = (u32, i32)>) -> Result<Self> {
        let mut merged: Vec<(u32, i32)> = Vec::new();
        for (level, exp) in factors {
            if level == 0 {
                return Err(Error::InvalidArgument("Euler product level must be positive".into()));
            }
            match merged.iter_mut().find(|(l, _)| *l == level) {
                Some((_, e)) => *e += exp,
                None => merged.push((level, exp)),
            }
        }
        merged.retain(|(_, e)| *e != 0);
        merged.sort_unstable();
        Ok(Self { monomial_power, factors: merged })
    }

    pub fn monomial_power(&self) -> i64 {
        self.monomial_power
    }

    pub fn factors(&self) -> &[(u32, i32)] {
        &self.factors
    }

    /// `E_5^4 / E_1`, the generating function of `c(n)`.
    pub fn c_series() -> Self {
        Self::new(0, [(5, 4), (1, -1)]).unwrap()
    }

    fn level_gcd(&self) -> u32 {
        self.factors.iter().fold(0u32, |g, (l, _)| g.gcd(l))
    }
}

/// Canonical text form, e.g. `q^0*E1^-1*E5^4`. Parsed back by `FromStr`.
impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{}", self.monomial_power)?;
        for (level, exp) in &self.factors {
            write!(f, "*E{level}^{exp}")?;
        }
        Ok(())
    }
}

impl FromStr for EtaQuotientSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed eta-quotient `{s}`"));
        let mut parts = s.split('*');
        let power = parts.next().and_then(|p| p.strip_prefix("q^")).and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let mut factors = Vec::new();
        for part in parts {
            let (level, exp) = part.strip_prefix('E').and_then(|p| p.split_once('^')).ok_or_else(bad)?;
            factors.push((level.parse().map_err(|_| bad())?, exp.parse().map_err(|_| bad())?));
        }
        Self::new(power, factors)
    }
}

/// `E_j` through `prec`: `Σ_k (-1)^k q^{j k(3k-1)/2}` over all integers `k`.
pub fn euler_sparse(j: u32, prec: i64) -> SparseSeries {
    assert!(j > 0, "level must be positive");
    let j = j as i64;
    let mut terms = vec![(0, BigInt::one())];
    for k in 1i64.. {
        let lo = j * k * (3 * k - 1) / 2;
        if lo > prec {
            break;
        }
        let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        terms.push((lo, sign.clone()));
        terms.push((j * k * (3 * k + 1) / 2, sign));
    }
    SparseSeries::new(terms, prec)
}

/// `E_j^3` through `prec`: `Σ_{k≥0} (-1)^k (2k+1) q^{j k(k+1)/2}`.
pub fn euler_cubed_sparse(j: u32, prec: i64) -> SparseSeries {
    assert!(j > 0, "level must be positive");
    let j = j as i64;
    let terms = (0i64..)
        .map(|k| {
            let c = BigInt::from(2 * k + 1);
            (j * k * (k + 1) / 2, if k % 2 == 0 { c } else { -c })
        })
        .take_while(|(e, _)| *e <= prec);
    SparseSeries::new(terms, prec)
}

/// Exact expansion of an eta-quotient through `prec`.
pub fn eta_quotient(spec: &EtaQuotientSpec, prec: i64) -> Result<TruncSeries> {
    let s = spec.monomial_power;
    if prec < s {
        return Ok(TruncSeries::zero(prec));
    }
    let body_prec = prec - s;
    let g = spec.level_gcd().max(1);
    let body = if g > 1 {
        // Every factor is a series in q^g: expand at level/g and inflate.
        let reduced: Vec<(u32, i32)> = spec.factors.iter().map(|&(l, e)| (l / g, e)).collect();
        product_of_powers(&reduced, Integer::div_floor(&body_prec, &(g as i64)))?.inflate(g)
    } else {
        product_of_powers(&spec.factors, body_prec)?
    };
    Ok(body.truncate(body_prec).shift(s))
}

fn product_of_powers(factors: &[(u32, i32)], prec: i64) -> Result<TruncSeries> {
    let mut acc = TruncSeries::one(prec);
    for &(level, exp) in factors.iter().filter(|(_, e)| *e > 0) {
        let exp = exp as u32;
        if exp >= 3 {
            let cube = euler_cubed_sparse(level, prec);
            acc = if exp < 6 { acc.mul_sparse(&cube) } else { &acc * &cube.densify().pow(exp / 3) };
        }
        let linear = euler_sparse(level, prec);
        for _ in 0..exp % 3 {
            acc = acc.mul_sparse(&linear);
        }
    }
    for &(level, exp) in factors.iter().filter(|(_, e)| *e < 0) {
        let exp = exp.unsigned_abs();
        let cube = euler_cubed_sparse(level, prec);
        for _ in 0..exp / 3 {
            acc = acc.div_forward(&cube)?;
        }
        let linear = euler_sparse(level, prec);
        for _ in 0..exp % 3 {
            acc = acc.div_forward(&linear)?;
        }
    }
    Ok(acc.truncate(prec))
}

/// `Σ c(n) q^n = E_5^4 / E_1` through `prec`.
pub fn c_series(prec: i64) -> Result<TruncSeries> {
    eta_quotient(&EtaQuotientSpec::c_series(), prec)
}

/// The Rogers–Ramanujan product
/// `∏ (1-q^{5n-4})(1-q^{5n-1}) / ((1-q^{5n-3})(1-q^{5n-2}))`,
/// expanded factor by factor from its definition.
pub fn rr_product(prec: i64) -> TruncSeries {
    let prec = prec.max(0);
    let len = (prec + 1) as usize;
    let mut c = vec![BigInt::zero(); len];
    c[0] = BigInt::one();
    for k in 1..len {
        match k % 5 {
            // times (1 - q^k), high to low so each source is still unmodified
            1 | 4 => {
                for e in (k..len).rev() {
                    let t = c[e - k].clone();
                    c[e] -= t;
                }
            }
            // divided by (1 - q^k): running sum with stride k
            2 | 3 => {
                for e in k..len {
                    let t = c[e - k].clone();
                    c[e] += t;
                }
            }
            _ => {}
        }
    }
    TruncSeries::new(0, prec, c).expect("length matches")
}

/// `z = (q R(q^5))^{-1}`, a Laurent series with offset -1, computed from
/// the product definition of `R`.
pub fn z_series(prec: i64) -> TruncSeries {
    // inverting q·(1 + ...) loses two orders of precision
    z_inverse_series(prec + 2).invert().expect("q R(q^5) has leading coefficient 1").truncate(prec)
}

/// `z^{-1} = q R(q^5)` through `prec`.
pub fn z_inverse_series(prec: i64) -> TruncSeries {
    rr_product(Integer::div_floor(&(prec - 1), &5)).inflate(5).shift(1).truncate(prec)
}

/// `u = E_5^6 / (q^5 E_25^6)`, offset -5.
pub fn u_series(prec: i64) -> Result<TruncSeries> {
    eta_quotient(&EtaQuotientSpec::new(-5, [(5, 6), (25, -6)])?, prec)
}

/// `t = E_5^6 / (q^4 E_1 E_25^5)`, offset -4; the quotient of `u` by
/// `E_1 / (q E_25)`.
pub fn t_series(prec: i64) -> Result<TruncSeries> {
    eta_quotient(&EtaQuotientSpec::new(-4, [(5, 6), (1, -1), (25, -5)])?, prec)
}

/// `F = q^19 E_24^19 = Σ a(n) q^n`.
pub fn f_series(prec: i64) -> Result<TruncSeries> {
    eta_quotient(&EtaQuotientSpec::new(19, [(24, 19)])?, prec)
}

/// `G = q^23 E_24^23 = Σ b(n) q^n`.
pub fn g_series(prec: i64) -> Result<TruncSeries> {
    eta_quotient(&EtaQuotientSpec::new(23, [(24, 23)])?, prec)
}

/// Process-wide memo of eta-quotient expansions with an optional on-disk
/// coefficient cache.
///
/// Each spec keeps its largest expansion; smaller requests are served from
/// it. Computation happens under the memo lock, so concurrent callers see
/// each entry computed once.
#[derive(Debug, Default)]
pub struct SeriesMemo {
    cache_dir: Option<PathBuf>,
    entries: Mutex<HashMap<EtaQuotientSpec, Arc<TruncSeries>>>,
}

impl SeriesMemo {
    pub fn new(cache_dir: Option<PathBuf>) -> Self {
        Self { cache_dir, entries: Mutex::default() }
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    /// An expansion of `spec` valid through at least `prec`.
    pub fn get(&self, spec: &EtaQuotientSpec, prec: i64) -> Result<Arc<TruncSeries>> {
        let mut entries = self.entries.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(hit) = entries.get(spec) {
            if hit.prec() >= prec {
                return Ok(Arc::clone(hit));
            }
        }
        let series = Arc::new(self.load_or_compute(spec, prec)?);
        entries.insert(spec.clone(), Arc::clone(&series));
        Ok(series)
    }

    fn load_or_compute(&self, spec: &EtaQuotientSpec, prec: i64) -> Result<TruncSeries> {
        let Some(dir) = &self.cache_dir else {
            return eta_quotient(spec, prec);
        };
        let path = dir.join(cache_file_name(spec));
        if let Ok(series) = read_cache(&path, spec, prec) {
            return Ok(series);
        }
        let series = eta_quotient(spec, prec)?;
        write_cache(&path, spec, &series)?;
        Ok(series)
    }
}

fn cache_file_name(spec: &EtaQuotientSpec) -> String {
    let name: String = spec
        .to_string()
        .chars()
        .map(|c| match c {
            '^' => '_',
            '*' => '.',
            '-' => 'm',
            c => c,
        })
        .collect();
    format!("{name}.qcache")
}

/// Writes `qcache v1 <spec> <prec>` followed by one decimal coefficient per
/// line from exponent `q^s` (the spec's monomial power) through `prec`.
pub fn write_cache(path: &Path, spec: &EtaQuotientSpec, series: &TruncSeries) -> Result<()> {
    let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let tmp = path.with_extension("qcache.tmp");
    {
        let mut out = std::io::BufWriter::new(fs::File::create(&tmp).map_err(io)?);
        writeln!(out, "qcache v1 {spec} {}", series.prec()).map_err(io)?;
        for e in spec.monomial_power..=series.prec() {
            writeln!(out, "{}", series.coeff(e)?).map_err(io)?;
        }
        out.flush().map_err(io)?;
    }
    fs::rename(&tmp, path).map_err(io)
}

/// Reads a cache file written by [`write_cache`]. Fails if the header does
/// not name `spec`, the stored precision is below `prec`, or any line is
/// malformed; callers recompute on failure.
pub fn read_cache(path: &Path, spec: &EtaQuotientSpec, prec: i64) -> Result<TruncSeries> {
    let bad = |why: &str| Error::Cache(format!("{}: {why}", path.display()));
    let file = fs::File::open(path).map_err(|e| bad(&e.to_string()))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines.next().and_then(|l| l.ok()).ok_or_else(|| bad("missing header"))?;
    let fields: Vec<&str> = header.split(' ').collect();
    let stored_prec: i64 = match fields.as_slice() {
        ["qcache", "v1", name, p] if *name == spec.to_string() => p.parse().map_err(|_| bad("bad precision"))?,
        _ => return Err(bad("header mismatch")),
    };
    if stored_prec < prec {
        return Err(bad("stored precision too low"));
    }
    let s = spec.monomial_power;
    let mut coeffs = Vec::with_capacity((stored_prec - s + 1).max(0) as usize);
    for line in lines {
        let line = line.map_err(|e| bad(&e.to_string()))?;
        coeffs.push(line.trim().parse::<BigInt>().map_err(|_| bad("bad coefficient"))?);
    }
    if coeffs.len() as i64 != stored_prec - s + 1 {
        return Err(bad("coefficient count does not match header"));
    }
    TruncSeries::new(s, stored_prec, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(a: &TruncSeries, from: i64, to: i64) -> Vec<i64> {
        (from..=to).map(|e| i64::try_from(a.coeff(e).unwrap()).unwrap()).collect()
    }

    fn direct_product(j: i64, prec: i64) -> TruncSeries {
        let mut c = vec![BigInt::zero(); (prec + 1) as usize];
        c[0] = BigInt::one();
        let mut n = 1;
        while j * n <= prec {
            let k = (j * n) as usize;
            for e in (k..c.len()).rev() {
                let t = c[e - k].clone();
                c[e] -= t;
            }
            n += 1;
        }
        TruncSeries::new(0, prec, c).unwrap()
    }

    #[test]
    fn pentagonal_terms() {
        let e1 = euler_sparse(1, 15);
        let got: Vec<(i64, i64)> = e1.terms().iter().map(|(e, c)| (*e, i64::try_from(c).unwrap())).collect();
        assert_eq!(got, vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)]);
        let e5 = euler_sparse(5, 12);
        let got: Vec<(i64, i64)> = e5.terms().iter().map(|(e, c)| (*e, i64::try_from(c).unwrap())).collect();
        assert_eq!(got, vec![(0, 1), (5, -1), (10, -1)]);
        assert_eq!(euler_sparse(1, 60).densify(), direct_product(1, 60));
    }

    #[test]
    fn euler_matches_direct_product() {
        for j in [1u32, 5, 24, 25, 120] {
            assert_eq!(euler_sparse(j, 120).densify(), direct_product(j as i64, 120), "j = {j}");
        }
    }

    #[test]
    fn jacobi_cube() {
        let c = euler_cubed_sparse(1, 10);
        let got: Vec<(i64, i64)> = c.terms().iter().map(|(e, c)| (*e, i64::try_from(c).unwrap())).collect();
        assert_eq!(got, vec![(0, 1), (1, -3), (3, 5), (6, -7), (10, 9)]);
        assert_eq!(euler_cubed_sparse(1, 50).densify(), euler_sparse(1, 50).densify().pow(3));
        let c24 = euler_cubed_sparse(24, 240);
        assert_eq!(c24.terms()[1], (24, BigInt::from(-3)));
        assert_eq!(c24.densify(), euler_cubed_sparse(1, 10).densify().inflate(24).truncate(240));
    }

    #[test]
    fn eta_quotient_examples() {
        let c = eta_quotient(&EtaQuotientSpec::c_series(), 6).unwrap();
        assert_eq!(ints(&c, 0, 6), vec![1, 1, 2, 3, 5, 3, 7]);
        let e1 = eta_quotient(&EtaQuotientSpec::new(0, [(1, 1)]).unwrap(), 40).unwrap();
        assert_eq!(e1, euler_sparse(1, 40).densify());
        let g = eta_quotient(&EtaQuotientSpec::new(23, [(24, 23)]).unwrap(), 100).unwrap();
        assert_eq!(g.offset(), 23);
        assert_eq!(g.coeff(23).unwrap(), BigInt::one());
        assert_eq!(g.prec(), 100);
    }

    #[test]
    fn eta_quotient_below_monomial_is_zero() {
        let g = eta_quotient(&EtaQuotientSpec::new(23, [(24, 23)]).unwrap(), 10).unwrap();
        assert!(g.is_zero());
        assert_eq!(g.prec(), 10);
    }

    #[test]
    fn large_exponents_match_repeated_products() {
        let spec = EtaQuotientSpec::new(2, [(5, 11), (1, -7)]).unwrap();
        let fast = eta_quotient(&spec, 60).unwrap();
        let mut slow = TruncSeries::one(58);
        for _ in 0..11 {
            slow = &slow * &direct_product(5, 58);
        }
        let inv = direct_product(1, 58).invert().unwrap();
        for _ in 0..7 {
            slow = &slow * &inv;
        }
        assert_eq!(fast, slow.shift(2));
    }

    #[test]
    fn c_series_values() {
        let c = c_series(19).unwrap();
        assert_eq!(ints(&c, 0, 4), vec![1, 1, 2, 3, 5]);
        assert_eq!(c.coeff(9).unwrap(), BigInt::from(10));
        assert_eq!(c.coeff(19).unwrap(), BigInt::from(50));
    }

    #[test]
    fn rr_and_u_leading_terms() {
        assert_eq!(ints(&rr_product(10), 0, 4), vec![1, -1, 1, 0, -1]);
        let u = u_series(10).unwrap();
        assert_eq!(u.offset(), -5);
        assert_eq!(u.coeff(-5).unwrap(), BigInt::one());
        assert_eq!(u.coeff(0).unwrap(), BigInt::from(-6));
        assert_eq!(z_series(10).offset(), -1);
        assert_eq!(t_series(10).unwrap().offset(), -4);
    }

    #[test]
    fn weight_series_leading_terms() {
        let f = f_series(200).unwrap();
        let g = g_series(200).unwrap();
        assert_eq!(f.coeff(19).unwrap(), BigInt::one());
        assert_eq!(f.coeff(43).unwrap(), BigInt::from(-19));
        assert_eq!(g.coeff(23).unwrap(), BigInt::one());
        assert_eq!(g.coeff(47).unwrap(), BigInt::from(-23));
        for n in 0..=200 {
            if n % 24 != 19 {
                assert!(f.coeff(n).unwrap().is_zero(), "a({n})");
            }
            if n % 24 != 23 {
                assert!(g.coeff(n).unwrap().is_zero(), "b({n})");
            }
        }
    }

    #[test]
    fn spec_text_roundtrip() {
        let spec = EtaQuotientSpec::new(-4, [(25, -5), (5, 6), (1, -1)]).unwrap();
        assert_eq!(spec.to_string(), "q^-4*E1^-1*E5^6*E25^-5");
        assert_eq!(spec.to_string().parse::<EtaQuotientSpec>().unwrap(), spec);
        assert!("E1^2".parse::<EtaQuotientSpec>().is_err());
        assert!(EtaQuotientSpec::new(0, [(0, 1)]).is_err());
    }
}
