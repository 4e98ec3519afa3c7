//! The matrix `M = (m_{i,j})`, the index-mapped matrices `Ã`, `B̃`, the
//! vectors `x̃_α`, and 5-adic valuation audits over them.
//!
//! Rows 1 to 5 of `M` are tabulated constants. For `i >= 6`, `m_{i,1} = 0`
//! and for `j >= 2`
//!
//! ```text
//! m_{i,j} = 25 m_{i-1,j-1} + 25 m_{i-2,j-1} + 15 m_{i-3,j-1} + 5 m_{i-4,j-1} + m_{i-5,j-1}
//! ```
//!
//! The matrix is lower triangular. Rows are generated on demand and
//! memoized behind a lock, so each row is computed once even under
//! concurrent access.

use std::fmt;
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::report::{Modulus, ReportBuilder, VerificationReport};

/// Weights of the row recurrence, applied to rows `i-1, ..., i-5`.
const RECURRENCE: [u32; 5] = [25, 25, 15, 5, 1];

/// Rows 1–5 of `M`.
pub fn initial_rows() -> [Vec<BigInt>; 5] {
    let p = |k: u32| BigInt::from(5u32).pow(k);
    let n = |v: u32| BigInt::from(v);
    [
        vec![n(5)],
        vec![n(2) * n(5), p(3)],
        vec![n(9), n(3) * p(3), p(5)],
        vec![n(4), n(22) * p(2), n(4) * p(5), p(7)],
        vec![n(1), n(4) * p(3), n(8) * p(5), p(8), p(9)],
    ]
}

/// A 5-adic valuation; `Infinite` (the valuation of 0) orders above every
/// finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    /// Whether the valuation is at least `bound`. Negative bounds always hold.
    pub fn at_least(self, bound: i64) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => bound <= 0 || v >= bound as u64,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// The exact power of 5 dividing `x`.
pub fn nu5(x: &BigInt) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    // strip 5^27 (the largest power of 5 below 2^64) at a time first
    const BIG_STEP: u64 = 7_450_580_596_923_828_125;
    let mut x = x.clone();
    let mut v = 0u64;
    loop {
        let (q, r) = x.div_rem(&BigInt::from(BIG_STEP));
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 27;
    }
    let five = BigInt::from(5u32);
    loop {
        let (q, r) = x.div_rem(&five);
        if !r.is_zero() {
            break;
        }
        x = q;
        v += 1;
    }
    Valuation::Finite(v)
}

/// `x̃_α` with its finite support `x̃_{α,1..s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XVector {
    pub alpha: u32,
    pub entries: Vec<BigInt>,
}

impl XVector {
    /// `x̃_{α,i}` (1-based); zero beyond the support.
    pub fn get(&self, i: usize) -> BigInt {
        assert!(i >= 1, "x̃ entries are 1-based");
        self.entries.get(i - 1).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> usize {
        self.entries.len()
    }
}

#[derive(Debug, Default)]
pub struct MMatrix {
    rows: RwLock<Vec<Arc<[BigInt]>>>,
    xvecs: Mutex<Vec<Arc<XVector>>>,
}

impl MMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    /// Row `i` (1-based), holding `m_{i,1..=i}`.
    pub fn row(&self, i: usize) -> Arc<[BigInt]> {
        assert!(i >= 1, "rows are 1-based");
        {
            let rows = self.rows.read().unwrap_or_else(|e| e.into_inner());
            if let Some(r) = rows.get(i - 1) {
                return Arc::clone(r);
            }
        }
        let mut rows = self.rows.write().unwrap_or_else(|e| e.into_inner());
        while rows.len() < i {
            let next = rows.len() + 1;
            let row: Arc<[BigInt]> = if next <= 5 {
                initial_rows()[next - 1].clone().into()
            } else {
                (1..=next).map(|j| recurrence_value(&rows, next, j)).collect()
            };
            rows.push(row);
        }
        Arc::clone(&rows[i - 1])
    }

    /// `m_{i,j}`; zero when `j > i`.
    pub fn m_entry(&self, i: usize, j: usize) -> BigInt {
        assert!(i >= 1 && j >= 1, "entries are 1-based");
        if j > i {
            return BigInt::zero();
        }
        self.row(i)[j - 1].clone()
    }

    /// The right-hand side of the row recurrence evaluated at `(i, j)`
    /// from the memoized rows. Defined for `j >= 2`.
    pub fn recurrence_at(&self, i: usize, j: usize) -> BigInt {
        assert!(j >= 2, "the recurrence applies from column 2");
        if i > 1 {
            self.row(i - 1);
        }
        let rows = self.rows.read().unwrap_or_else(|e| e.into_inner());
        recurrence_value(&rows, i, j)
    }

    /// `ã_{i,j} = m_{6i-4, i-1+j}`.
    pub fn a_tilde(&self, i: usize, j: usize) -> BigInt {
        assert!(i >= 1 && j >= 1, "entries are 1-based");
        self.m_entry(6 * i - 4, i - 1 + j)
    }

    /// `b̃_{i,j} = m_{6i-5, i-1+j}`.
    pub fn b_tilde(&self, i: usize, j: usize) -> BigInt {
        assert!(i >= 1 && j >= 1, "entries are 1-based");
        self.m_entry(6 * i - 5, i - 1 + j)
    }

    /// `x̃_1 = (5)`, `x̃_{α+1} = x̃_α Ã` for odd `α` and `x̃_α B̃` for even `α`.
    /// Since `ã_{i,j} = 0` for `j > 5i-3` and `b̃_{i,j} = 0` for `j > 5i-4`,
    /// the support grows to `5s-3`, resp. `5s-4`.
    pub fn x_vec(&self, alpha: u32) -> Arc<XVector> {
        assert!(alpha >= 1, "alpha starts at 1");
        let mut memo = self.xvecs.lock().unwrap_or_else(|e| e.into_inner());
        if memo.is_empty() {
            memo.push(Arc::new(XVector { alpha: 1, entries: vec![BigInt::from(5u32)] }));
        }
        while memo.len() < alpha as usize {
            let prev = Arc::clone(memo.last().expect("nonempty"));
            let odd = prev.alpha % 2 == 1;
            let s = prev.support();
            let support = if odd { 5 * s - 3 } else { 5 * s - 4 };
            // rows 6s-4 (odd) / 6s-5 (even) cover every entry touched
            self.row(if odd { 6 * s - 4 } else { 6 * s - 5 });
            let entries = (1..=support)
                .map(|j| {
                    prev.entries
                        .iter()
                        .enumerate()
                        .map(|(i, x)| {
                            let m = if odd { self.a_tilde(i + 1, j) } else { self.b_tilde(i + 1, j) };
                            x * m
                        })
                        .sum()
                })
                .collect();
            memo.push(Arc::new(XVector { alpha: prev.alpha + 1, entries }));
        }
        Arc::clone(&memo[alpha as usize - 1])
    }
}

fn recurrence_value(rows: &[Arc<[BigInt]>], i: usize, j: usize) -> BigInt {
    if j == 1 {
        return BigInt::zero();
    }
    let mut acc = BigInt::zero();
    for (k, w) in RECURRENCE.iter().enumerate() {
        let src = i as i64 - 1 - k as i64;
        if src < 1 || j - 1 > src as usize {
            continue;
        }
        let v = &rows[src as usize - 1][j - 2];
        if !v.is_zero() {
            acc += v * *w;
        }
    }
    acc
}

fn half_floor(x: i64) -> i64 {
    Integer::div_floor(&x, &2)
}

/// Checks, on the window `i <= i_max`, `j <= j_max`:
///
/// * the row recurrence for every generated entry and `m_{i,1} = 0` for `i >= 6`;
/// * triangularity, `m_{i,j} = 0` for `j > i`;
/// * `ν(m_{i,j}) >= ⌊(5j-i-1)/2⌋`;
/// * `ν(ã_{i,j}) >= ⌊(5j-i-2)/2⌋` and `ν(b̃_{i,j}) >= ⌊(5j-i-1)/2⌋`;
///
/// and for every `α <= alpha_max`, over the full support of `x̃_α`:
///
/// * `ν(x̃_{α,i}) >= α + ⌊(5i-5)/2⌋`;
/// * `5^α | x̃_{α,i}` and `5^{α+1} | x̃_{α,i}` for `i >= 2`.
///
/// At even steps the induction actually gives `α + ⌊(5i-4)/2⌋`; only the
/// weaker bound is asserted.
pub fn audit_valuations(m: &MMatrix, i_max: usize, j_max: usize, alpha_max: u32) -> VerificationReport {
    let mut report = ReportBuilder::new("valuations", Modulus::Exact)
        .param("imax", i_max)
        .param("jmax", j_max)
        .param("alphamax", alpha_max)
        .range(format!("i<={i_max}, j<={j_max}, alpha<={alpha_max}"));
    let finite = |v: Valuation| v.to_string();

    for i in 1..=i_max {
        for j in 1..=j_max {
            let value = m.m_entry(i, j);
            if j >= 2 {
                let rec = m.recurrence_at(i, j);
                report.compare(format!("recurrence m[{i},{j}]"), &value, &rec);
            } else if i >= 6 {
                report.compare(format!("m[{i},1]"), &value, &BigInt::zero());
            }
            if j > i {
                report.compare(format!("triangular m[{i},{j}]"), &value, &BigInt::zero());
            }
            let bound = half_floor(5 * j as i64 - i as i64 - 1);
            let v = nu5(&value);
            report.record(format!("nu(m[{i},{j}])"), v.at_least(bound), || (finite(v), bound.to_string()));

            let a = nu5(&m.a_tilde(i, j));
            let bound = half_floor(5 * j as i64 - i as i64 - 2);
            report.record(format!("nu(a~[{i},{j}])"), a.at_least(bound), || (finite(a), bound.to_string()));
            let b = nu5(&m.b_tilde(i, j));
            let bound = half_floor(5 * j as i64 - i as i64 - 1);
            report.record(format!("nu(b~[{i},{j}])"), b.at_least(bound), || (finite(b), bound.to_string()));
        }
    }

    for alpha in 1..=alpha_max {
        let x = m.x_vec(alpha);
        let five_a = BigInt::from(5u32).pow(alpha);
        let five_a1 = &five_a * 5u32;
        for (idx, entry) in x.entries.iter().enumerate() {
            let i = idx as i64 + 1;
            let v = nu5(entry);
            let bound = alpha as i64 + half_floor(5 * i - 5);
            report.record(format!("nu(x~[{alpha},{i}])"), v.at_least(bound), || (finite(v), bound.to_string()));
            report.record(format!("5^{alpha} | x~[{alpha},{i}]"), entry.is_multiple_of(&five_a), || {
                (entry.to_string(), five_a.to_string())
            });
            if i >= 2 {
                report.record(format!("5^{} | x~[{alpha},{i}]", alpha + 1), entry.is_multiple_of(&five_a1), || {
                    (entry.to_string(), five_a1.to_string())
                });
            }
        }
    }
    report.finish()
}

/// Support sizes `s_1, ..., s_alpha` of the vectors `x̃_α`.
pub fn support_sizes(alpha: u32) -> Vec<usize> {
    let mut sizes = vec![1usize];
    for a in 1..alpha {
        let s = *sizes.last().expect("nonempty");
        sizes.push(if a % 2 == 1 { 5 * s - 3 } else { 5 * s - 4 });
    }
    sizes
}
