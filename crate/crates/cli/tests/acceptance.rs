//! Acceptance suite: one check per criterion, each printed as a PASS/FAIL
//! line. Run with `--nocapture` to see the table on success.

use std::process::Command;
use std::time::{Duration, Instant};

use ntcong::etaq::{eta_quotient, t_series, u_series, z_inverse_series, z_series, EtaQuotientSpec};
use ntcong::partitions::{nt_enum, p_of_n, PartitionTable};
use ntcong::verify::{c_at, default_suite, delta_ram, hecke_arg, Claim, Verifier};
use ntcong::{Status, TruncSeries, VerificationReport};
use num_bigint::BigInt;
use num_rational::BigRational;

type Outcome = Result<(), String>;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn passes(v: &Verifier, claim: Claim) -> Outcome {
    let report = v.run(&claim).map_err(|e| format!("{claim}: {e}"))?;
    ensure(report.status == Status::Pass, || format!("{report}"))
}

fn c_coeff(v: &Verifier, n: i64) -> BigInt {
    v.c_series(n).unwrap().coeff(n).unwrap()
}

fn mod_eq(a: &BigInt, b: &BigInt, m: i64) -> bool {
    num_integer::Integer::mod_floor(&(a - b), &big(m)) == big(0)
}

fn oracle_equivalence(_: &Verifier) -> Outcome {
    let table = PartitionTable::build(28);
    for n in 0..=28usize {
        for k in [5u32, 7] {
            let mut sum = big(0);
            for r in 0..k {
                let dp = table.nt(r, k, n).unwrap();
                let en = nt_enum(r, k, n).unwrap();
                ensure(dp == en, || format!("NT({r},{k},{n}): dp {dp} vs enumeration {en}"))?;
                sum += dp;
            }
            ensure(sum == table.total_parts(n).unwrap(), || format!("residue sum at n={n}, k={k}"))?;
        }
        for t in 0..=n as i64 {
            ensure(table.rank_count(t, n).unwrap() == table.rank_count(-t, n).unwrap(), || {
                format!("rank symmetry at t={t}, n={n}")
            })?;
        }
    }
    Ok(())
}

fn generating_function(v: &Verifier) -> Outcome {
    let table = v.partition_table();
    let spot = table.nt(4, 5, 4).unwrap() - table.nt(1, 5, 4).unwrap();
    ensure(table.nt(4, 5, 4).unwrap() == big(3) && table.nt(1, 5, 4).unwrap() == big(2), || {
        "NT(4,5,4)=3, NT(1,5,4)=2".into()
    })?;
    ensure(spot == big(1) && c_coeff(v, 0) == big(1), || format!("n=0 difference {spot}"))?;
    passes(v, Claim::Gencn { nmax: 25 })
}

fn beck(v: &Verifier) -> Outcome {
    passes(v, Claim::Beck { k: 5, max_arg: 148 })?;
    passes(v, Claim::Beck { k: 7, max_arg: 148 })
}

fn ramanujan(v: &Verifier) -> Outcome {
    ensure([1, 2, 3].map(delta_ram) == [4, 24, 99], || "delta_1..3".into())?;
    let p = p_of_n(24);
    ensure(p[4] == big(5) && p[24] == big(1575), || "p(4)=5, p(24)=1575".into())?;
    passes(v, Claim::Ramanujan { alpha: 1, nmax: 100 })?;
    passes(v, Claim::Ramanujan { alpha: 2, nmax: 20 })?;
    passes(v, Claim::Ramanujan { alpha: 3, nmax: 5 })
}

fn lemma21(v: &Verifier) -> Outcome {
    let report = v.run(&Claim::Lemma21 { imax: 8, prec: 480 }).map_err(|e| e.to_string())?;
    ensure(report.status == Status::Pass, || format!("{report}"))?;
    let through: i64 = report.params["through"].parse().unwrap();
    ensure(through >= 100, || format!("identities checked only through q^{through}"))?;

    // tabulated rows one and two, straight from the series
    let t = t_series(200).unwrap();
    let u = u_series(200).unwrap();
    let h1 = t.restrict(0, 5);
    let five = TruncSeries::one(h1.prec()).scale(&big(5));
    ensure(h1.eq_upto(&five, h1.prec()).unwrap(), || format!("H(t) = {h1}"))?;
    let h2 = t.pow(2).restrict(0, 5);
    let rhs = &u.scale(&big(10)) + &TruncSeries::one(u.prec()).scale(&big(125));
    let upto = h2.prec().min(rhs.prec());
    ensure(h2.eq_upto(&rhs, upto).unwrap(), || "H(t^2) = 10u + 125".into())?;

    let z5 = &(&z_series(50).pow(5) - &TruncSeries::one(50).scale(&big(11))) - &z_inverse_series(50).pow(5);
    ensure(z5.coeff(-5).unwrap() == big(1) && u.coeff(-5).unwrap() == big(1), || "leading q^-5".into())
}

fn lemma22(v: &Verifier) -> Outcome {
    passes(v, Claim::Lemma22 { imax: 3, prec: 840 })
}

fn matrix(v: &Verifier) -> Outcome {
    let p = |k: u32| big(5).pow(k);
    let rows: [Vec<BigInt>; 5] = [
        vec![big(5)],
        vec![big(2) * 5, p(3)],
        vec![big(9), big(3) * p(3), p(5)],
        vec![big(4), big(22) * p(2), big(4) * p(5), p(7)],
        vec![big(1), big(4) * p(3), big(8) * p(5), p(8), p(9)],
    ];
    let m = v.matrix();
    for (i, row) in rows.iter().enumerate() {
        ensure(&*m.row(i + 1) == row.as_slice(), || format!("row {}", i + 1))?;
    }
    ensure(m.m_entry(6, 2) == big(315), || format!("m(6,2) = {}", m.m_entry(6, 2)))?;
    ensure(m.x_vec(2).entries == vec![big(50), big(625)], || "x~_2".into())?;
    passes(v, Claim::Valuations { imax: 40, jmax: 40, alpha_max: 6 })
}

fn thm12(v: &Verifier) -> Outcome {
    for (alpha, nmax) in [(1, 30), (2, 30), (3, 25), (4, 20)] {
        passes(v, Claim::Thm12 { alpha, nmax })?;
    }
    let lhs = v.c_series(5 * 30 + 4).unwrap().extract(4, 5).truncate(30);
    let spec = EtaQuotientSpec::new(0, [(5, 5), (1, -2)]).unwrap();
    let rhs = eta_quotient(&spec, 30).unwrap().scale(&big(5));
    ensure(lhs == rhs, || "sum c(5n+4) q^n = 5 E5^5/E1^2".into())?;
    let x21 = v.matrix().x_vec(2).get(1);
    ensure(c_coeff(v, 19) == big(50) && x21 == big(50), || format!("c(19) vs x~_(2,1) = {x21}"))
}

fn thm11(v: &Verifier) -> Outcome {
    ensure(c_coeff(v, 4) == big(5) && c_coeff(v, 19) == big(50), || "c(4)=5, c(19)=50".into())?;
    for alpha in 1..=3 {
        passes(v, Claim::Thm11 { alpha, nmax: 100 })?;
    }
    passes(v, Claim::Thm11Nt { nmax: 5 })
}

fn lemma41(v: &Verifier) -> Outcome {
    let g = eta_quotient(&EtaQuotientSpec::new(23, [(24, 23)]).unwrap(), 47).unwrap();
    let (b23, b47) = (g.coeff(23).unwrap(), g.coeff(47).unwrap());
    ensure(b23 == big(1) && b47 == big(-23), || format!("b(23) = {b23}, b(47) = {b47}"))?;
    ensure(mod_eq(&c_coeff(v, 4), &(big(5) * &b23), 25), || "c(4) = 5 b(23) mod 25".into())?;
    ensure(mod_eq(&c_coeff(v, 9), &(big(5) * &b47), 25), || "c(9) = 5 b(47) mod 25".into())?;
    passes(v, Claim::Lemma41 { alpha: 1, nmax: 50 })?;
    passes(v, Claim::Lemma41 { alpha: 2, nmax: 50 })
}

fn lovejoy(v: &Verifier) -> Outcome {
    let g = eta_quotient(&EtaQuotientSpec::new(23, [(24, 23)]).unwrap(), 1127).unwrap();
    let b = g.coeff(1127).unwrap();
    ensure(mod_eq(&b, &big(4), 5), || format!("b(1127) = {b}"))?;
    passes(v, Claim::Lovejoy { ell: 7, nmax: 200 })
}

fn thm13(v: &Verifier) -> Outcome {
    let arg = hecke_arg(1, 7, 46);
    ensure(arg == BigRational::from_integer(big(4)), || format!("hecke_arg(1,7,46) = {arg}"))?;
    let c = v.c_series(10).unwrap();
    ensure(c_at(&c, &arg).unwrap() == big(5), || "c_at = c(4) = 5".into())?;
    passes(v, Claim::Thm13 { alpha: 1, ell: 7, nmax: 46 })?;
    passes(v, Claim::Thm13 { alpha: 2, ell: 7, nmax: 20 })
}

fn cor14(v: &Verifier) -> Outcome {
    for n in 0..=3 {
        let x = c_coeff(v, 10985 * n + 1654);
        ensure(mod_eq(&x, &big(0), 25), || format!("c({}) = {x}", 10985 * n + 1654))?;
    }
    for arg in [7144, 41439] {
        let x = c_coeff(v, arg);
        ensure(mod_eq(&x, &big(0), 25), || format!("c({arg}) = {x}"))?;
    }
    passes(v, Claim::Cor14 { part: 1, alpha: 1, ell: 13, r: 1, s: 0, nmax: 3 })?;
    passes(v, Claim::Cor14 { part: 2, alpha: 1, ell: 19, r: 3, s: 0, nmax: 0 })?;
    passes(v, Claim::Cor14 { part: 2, alpha: 1, ell: 19, r: 3, s: 1, nmax: 0 })
}

fn run_all_json(cache: Option<&std::path::Path>) -> Result<Vec<VerificationReport>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ntcong"));
    cmd.args(["verify", "all", "--format", "json"]).env_remove("NTCONG_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.arg("--cache-dir").arg(dir);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| VerificationReport::from_json(l).map(|r| r.without_timing()).map_err(|e| e.to_string()))
        .collect()
}

fn determinism(_: &Verifier) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fresh = run_all_json(Some(dir.path()))?;
    let warm = run_all_json(Some(dir.path()))?;
    let uncached = run_all_json(None)?;
    ensure(fresh.len() == default_suite().len(), || format!("{} reports", fresh.len()))?;
    let as_json = |rs: &[VerificationReport]| rs.iter().map(|r| r.to_json()).collect::<Vec<_>>().join("\n");
    ensure(as_json(&fresh) == as_json(&warm), || "fresh and warm cache runs differ".into())?;
    ensure(as_json(&fresh) == as_json(&uncached), || "cached and uncached runs differ".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    check: fn(&Verifier) -> Outcome,
}

#[test]
fn acceptance_criteria() {
    let minutes = |m: u64| Some(Duration::from_secs(60 * m));
    let criteria = [
        Criterion { id: 1, name: "rank DP vs enumeration", limit: minutes(1), check: oracle_equivalence },
        Criterion { id: 2, name: "generating function of c(n)", limit: minutes(2), check: generating_function },
        Criterion { id: 3, name: "Andrews-Beck congruences", limit: None, check: beck },
        Criterion { id: 4, name: "Ramanujan congruences", limit: None, check: ramanujan },
        Criterion { id: 5, name: "z/u/H identities", limit: None, check: lemma21 },
        Criterion { id: 6, name: "H-images of t^(6i-4), t^(6i-5)", limit: None, check: lemma22 },
        Criterion { id: 7, name: "matrix rows and valuation audits", limit: None, check: matrix },
        Criterion { id: 8, name: "x~ expansion identity", limit: minutes(5), check: thm12 },
        Criterion { id: 9, name: "c(5^a n + d~) = 0 mod 5^a", limit: None, check: thm11 },
        Criterion { id: 10, name: "c against b(24n+23), a(24n+19)", limit: None, check: lemma41 },
        Criterion { id: 11, name: "Hecke congruences for a, b", limit: None, check: lovejoy },
        Criterion { id: 12, name: "Hecke-type congruences for c", limit: minutes(10), check: thm13 },
        Criterion { id: 13, name: "NT congruences via c", limit: minutes(20), check: cor14 },
        Criterion { id: 14, name: "deterministic JSON reports", limit: None, check: determinism },
    ];
    let v = Verifier::default();
    let mut failed = Vec::new();
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.check)(&v);
        let took = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, c.limit) {
            if took > limit {
                outcome = Err(format!("took {took:?}, limit {limit:?}"));
            }
        }
        match &outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {} ({} ms)", c.id, c.name, took.as_millis()),
            Err(why) => {
                println!("criterion {:>2}: FAIL  {} ({} ms): {why}", c.id, c.name, took.as_millis());
                failed.push(c.id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
