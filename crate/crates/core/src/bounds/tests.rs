use super::*;
use crate::rational::{rat, to_f64};

#[test]
fn mu_values() {
    assert_eq!(mu(1).unwrap(), int(1));
    assert_eq!(mu(3).unwrap(), rat(2, 3));
    assert!((to_f64(&mu(10).unwrap()) - 0.6321208).abs() < 1e-6);
    let limit = Interval::from_int(1).sub(&Interval::from_int(-1).exp());
    let gap = Interval::exact(mu(20).unwrap()).sub(&limit).abs();
    assert!(gap.certainly_le(&Interval::exact(rat(1, 1_000_000))));
    assert!(mu(0).is_err());
}

/// Counts permutations of `n` points by number of cycles.
fn cycle_counts(n: usize) -> Vec<u64> {
    fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permutations(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut all = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut all);
    let mut counts = vec![0u64; n + 1];
    for p in all {
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if !seen[start] {
                cycles += 1;
                let mut i = start;
                while !seen[i] {
                    seen[i] = true;
                    i = p[i];
                }
            }
        }
        counts[cycles] += 1;
    }
    counts
}

#[test]
fn stirling_numbers() {
    assert_eq!(stirling1_unsigned(4, 3).unwrap(), BigUint::from(6u32));
    assert_eq!(stirling1_row(4).iter().sum::<BigUint>(), BigUint::from(24u32));
    assert_eq!(stirling1_unsigned(0, 0).unwrap(), BigUint::one());
    assert!(stirling1_unsigned(3, 4).is_err());
    for n in 0..=7usize {
        let expected: Vec<BigUint> = cycle_counts(n).into_iter().map(BigUint::from).collect();
        assert_eq!(stirling1_row(n as u64), expected, "n={n}");
    }
    for r in 1..=30u64 {
        assert_eq!(stirling1_unsigned(r, r).unwrap(), BigUint::one());
        assert_eq!(stirling1_unsigned(r, r - 1).unwrap(), binom(r, 2));
        assert_eq!(stirling1_row(r).iter().sum::<BigUint>(), factorial(r));
    }
}

#[test]
fn delta_and_d() {
    let pair = |d, s, r| {
        let (a, b) = delta_d(d, s, r).unwrap();
        (a.to_string(), b.to_string())
    };
    assert_eq!(pair(6, 2, 5), ("2".into(), "1".into()));
    assert_eq!(pair(6, 2, 6), ("2".into(), "1".into()));
    assert_eq!(pair(4, 1, 4), ("1".into(), "0".into()));
    assert!(delta_d(6, 2, 4).is_err());
    assert!(delta_d(6, 2, 7).is_err());
}

#[test]
fn chi_bound_values() {
    // (12 / (2 · 24)) · 1 · 7^2 + 0
    assert_eq!(chi_bound(7, 4, 1, 4).unwrap(), rat(49, 4));
    assert!(chi_bound(7, 4, 1, 5).is_err());
    assert!(matches!(chi_bound(5, 6, 2, 6), Err(Error::Regime(_))));
    for (d, s) in [(6, 2), (8, 3), (10, 4)] {
        for r in d - s + 1..=d {
            let mut prev = Rational::zero();
            for q in (d as u64 + 1)..40 {
                let b = chi_bound(q, d, s, r).unwrap();
                assert!(b >= prev);
                prev = b;
            }
        }
    }
}

#[test]
fn a_term_routes_agree() {
    for q in [5u64, 7, 9, 16, 101, 1 << 20] {
        for d in 3..=14u64 {
            for s in 1..=d - 2 {
                assert_eq!(a_term(q, d, s).unwrap(), a_term_stirling(q, d, s).unwrap());
                assert_eq!(first_sum_deficit(q, d, s).unwrap(), a_term(q, d, s).unwrap());
            }
        }
    }
    // binom(q,2) - q^2/2 = -q/2
    for q in [7u64, 13, 1000] {
        assert_eq!(a_term(q, 5, 3).unwrap(), rat(1, 2));
    }
}

#[test]
fn a_term_bound_and_limit() {
    let half_inv_e = Interval::from_int(1).div(&Interval::e().scale(&int(2)));
    for q in [5u64, 7, 8, 9, 11, 13, 16, 25, 27] {
        for d in 3..q.min(15) {
            for s in 1..=d - 2 {
                let a = Interval::exact(a_term(q, d, s).unwrap());
                let bound = rat(1, 2 * factorial(d - s - 1).to_string().parse::<i64>().unwrap())
                    + rat(7, q as i64);
                assert!(a.sub(&half_inv_e).abs().certainly_le(&Interval::exact(bound)));
            }
        }
    }
    // term-by-term limit as q grows
    // m = 2 gives exactly 1/2 for every q
    for m in 3..=8u64 {
        let limit = (0..=m - 2).fold(Rational::zero(), |acc, r| {
            let t = Rational::new(1.into(), 2 * BigInt::from(factorial(r)));
            if r % 2 == 0 {
                acc + t
            } else {
                acc - t
            }
        });
        let gaps: Vec<Rational> = [1_000u64, 1_000_000, 1_000_000_000]
            .iter()
            .map(|&q| (a_term(q, m + 1, 1).unwrap() - &limit).abs())
            .collect();
        assert!(&gaps[1] * int(100) < gaps[0] && &gaps[2] * int(100) < gaps[1], "m={m}");
    }
}

#[test]
fn corollary_values() {
    assert_eq!(corollary_bound(7, 4, 1).unwrap(), rat(135, 64));
    assert!(corollary_bound(5, 4, 1).unwrap() > corollary_bound(7, 4, 1).unwrap());
    assert_eq!(h_total(9, 1), Rational::new(1.into(), factorial(9).into()));
    assert!(corollary_bound(7, 6, 3).is_err());
}

#[test]
fn f_and_g_anchors() {
    let f14 = f_profile(14).midpoint_f64();
    assert!((f14 / 1.08e5 - 1.0).abs() < 0.01, "f(14) = {f14}");
    assert_eq!(certified_argmax(4, 200, f_profile), Some(14));
    assert_eq!(eventually_below_one(4, 200, f_profile), Some(51));
    assert!((g_profile(9).midpoint_f64() - 85.0).abs() <= 1.0);
    assert_eq!(certified_argmax(7, 200, g_profile), Some(9));
    assert_eq!(eventually_below_one(7, 200, g_profile), Some(24));
    // floats as an independent reference
    for d in 4..60u64 {
        let df = d as f64;
        let f = (2.0 * df.sqrt()).exp() * (df - 2.0).powi(5) / 2f64.powi(d as i32 - 2);
        assert!((f_profile(d).midpoint_f64() / f - 1.0).abs() < 1e-12);
    }
    assert!(main_bound(3, 3).is_err());
    assert!(restricted_bound(20, 6).is_err());
}

#[test]
fn k0_examples() {
    assert_eq!(k0_floor(14), 3);
    assert!((k0(14).midpoint_f64() - 3.405).abs() < 1e-3);
    for d in 1..500u64 {
        let k = k0(d);
        let f = k0_floor(d);
        assert!(k.lo() >= &int(f as i64) && k.hi() < &int(f as i64 + 1), "d={d}");
    }
}

#[test]
fn h_profile_and_chain() {
    for d in 4..=40u64 {
        for s in 1..=(d / 2 - 1) {
            let aux = aux_profiles(d, s).unwrap();
            assert!(aux.unimodal, "d={d} s={s}");
            assert_eq!(aux.h_argmax, aux.expected_argmax, "d={d} s={s}");
            assert!(aux.h_le_c, "d={d} s={s}");
            assert!(aux.c_le_envelope, "d={d} s={s}");
        }
    }
    let aux = aux_profiles(14, 6).unwrap();
    assert_eq!(aux.k0_floor, 3);
    assert_eq!(aux.h.len(), 6);
    assert_eq!(aux.h[0], "1");
    assert_eq!(aux.h[1], "14");
}

#[test]
fn decomposition_parts() {
    use crate::exact::{chi_counts, formula_from_chi, Budget, FamilySpec};
    use crate::gf::FieldCtx;
    for (q, d, s, a) in [(11u32, 6usize, 2usize, vec![3u32, 1]), (13, 8, 3, vec![0, 0, 0])] {
        let f = FieldCtx::prime(q as u64).unwrap();
        let spec = FamilySpec::new(&f, d, s, a).unwrap();
        let chi = chi_counts(&spec, d, Budget::default()).unwrap();
        let dec = decomposition(q as u64, d as u64, s as u64, &chi).unwrap();
        assert!(dec.a_holds() && dec.b_holds());
        let avg = formula_from_chi(q as u64, d, s, &chi);
        let report = check_bounds(q as u64, d as u64, s as u64, &avg).unwrap();
        assert_eq!(report.corollary_holds, Some(true));
        assert_eq!(report.main_holds, Some(true));
    }
}
