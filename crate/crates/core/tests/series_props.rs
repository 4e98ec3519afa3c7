use ntcong::{SparseSeries, TruncSeries};
use num_bigint::BigInt;
use proptest::prelude::*;

/// A series with offset in `-3..=3`, up to 12 known coefficients and a
/// nonzero leading coefficient.
fn series() -> impl Strategy<Value = TruncSeries> {
    (-3i64..=3, prop::collection::vec(-20i64..=20, 1..12), prop::sample::select(vec![-3i64, -1, 1, 2, 7])).prop_map(
        |(offset, mut coeffs, lead)| {
            coeffs[0] = lead;
            let prec = offset + coeffs.len() as i64 - 1;
            TruncSeries::from_i64s(offset, prec, &coeffs).unwrap()
        },
    )
}

/// Like [`series`] but with leading coefficient `±1`.
fn unit_series() -> impl Strategy<Value = TruncSeries> {
    (series(), any::<bool>()).prop_map(|(s, neg)| {
        let mut c: Vec<BigInt> = s.coeffs().to_vec();
        c[0] = BigInt::from(if neg { -1 } else { 1 });
        TruncSeries::new(s.offset(), s.prec(), c).unwrap()
    })
}

fn common(a: &TruncSeries, b: &TruncSeries) -> i64 {
    a.prec().min(b.prec())
}

proptest! {
    #[test]
    fn addition_commutes(a in series(), b in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn multiplication_commutes_and_propagates_precision(a in series(), b in series()) {
        let ab = &a * &b;
        prop_assert_eq!(&ab, &(&b * &a));
        prop_assert_eq!(ab.prec(), (a.prec() + b.offset()).min(b.prec() + a.offset()));
        prop_assert_eq!(ab.offset(), a.offset() + b.offset());
    }

    #[test]
    fn multiplication_associates(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        let lhs = &a * &(&b + &c);
        let rhs = &(&a * &b) + &(&a * &c);
        prop_assert!(lhs.eq_upto(&rhs, common(&lhs, &rhs)).unwrap());
    }

    #[test]
    fn inverse_is_two_sided(a in unit_series()) {
        let inv = a.invert().unwrap();
        let prod = &a * &inv;
        prop_assert_eq!(prod.prec(), a.prec() - a.offset());
        prop_assert_eq!(inv.prec(), a.prec() - 2 * a.offset());
        prop_assert_eq!(prod, TruncSeries::one(a.prec() - a.offset()));
        let twice = inv.invert().unwrap();
        prop_assert!(twice.eq_upto(&a, common(&twice, &a)).unwrap());
    }

    #[test]
    fn forward_division_matches_inverse(n in series(), d in unit_series()) {
        let sparse = SparseSeries::new(d.terms().map(|(e, c)| (e, c.clone())), d.prec());
        let fwd = n.div_forward(&sparse).unwrap();
        let via_inverse = &n * &d.invert().unwrap();
        let upto = common(&fwd, &via_inverse);
        prop_assert!(fwd.eq_upto(&via_inverse, upto).unwrap());
        let back = &fwd * &d;
        prop_assert!(back.eq_upto(&n, common(&back, &n)).unwrap());
    }

    #[test]
    fn sparse_product_matches_dense(a in series(), b in series()) {
        let sparse = SparseSeries::new(b.terms().map(|(e, c)| (e, c.clone())), b.prec());
        prop_assert_eq!(a.mul_sparse(&sparse), &a * &b);
    }

    #[test]
    fn extract_undoes_inflate(a in series(), j in 1u32..7) {
        prop_assert_eq!(a.inflate(j).extract(0, j), a);
    }

    #[test]
    fn restrictions_sum_to_series(a in series(), m in 1u32..7) {
        let mut acc = TruncSeries::zero(a.prec());
        for r in 0..m {
            acc = &acc + &a.restrict(r, m);
        }
        prop_assert_eq!(acc, a);
    }

    #[test]
    fn dissection_reassembles(a in series(), m in 1u32..6) {
        let mut acc = TruncSeries::zero(a.prec());
        for r in 0..m {
            let part = a.extract(r, m).inflate(m).shift(r as i64);
            acc = &acc + &part;
        }
        prop_assert!(acc.eq_upto(&a, a.prec()).unwrap());
    }

    #[test]
    fn powers_are_repeated_products(a in series(), k in 1u32..6) {
        let mut acc = a.clone();
        for _ in 1..k {
            acc = &acc * &a;
        }
        prop_assert_eq!(a.pow(k), acc);
    }

    #[test]
    fn coefficients_above_precision_are_unknown(a in series(), extra in 1i64..5) {
        prop_assert!(a.coeff(a.prec() + extra).is_err());
        prop_assert!(a.coeff(a.offset() - extra).unwrap() == BigInt::from(0));
    }
}
