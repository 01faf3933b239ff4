use std::collections::BTreeMap;

use avset_core::exact::{
    avg_value_set_brute, avg_value_set_formula, chi_counts, chi_counts_dfs, chi_counts_symmetric, chi_subsets,
    interp_space_size,
};
use avset_core::rational::{binom, factorial};
use avset_core::varscan::{count_points, Evaluator};
use avset_core::{Budget, FamilySpec, FieldCtx, Poly, ScanMode, ScanOptions};
use num_bigint::BigUint;
use proptest::prelude::*;

const FIELDS: [&str; 6] = ["5", "7", "8", "9", "11", "2^4"];

/// `(field, d, s, a)` with `d < q` and brute force cheap.
fn small_family() -> impl Strategy<Value = FamilySpec> {
    (0..FIELDS.len(), 3usize..8, any::<u64>())
        .prop_filter_map("needs d < q", |(fi, d, seed)| {
            let f = FieldCtx::parse(FIELDS[fi]).unwrap();
            (d < f.q() as usize).then_some((f, d, seed))
        })
        .prop_flat_map(|(f, d, seed)| {
            let q = f.q() as u64;
            // keep q^{d-s} below ~10^5
            let s_min = (1..=d - 2).find(|&s| q.pow((d - s) as u32) <= 100_000).unwrap_or(d - 2);
            (Just(f), Just(d), s_min..=d - 2, Just(seed))
        })
        .prop_flat_map(|(f, d, s, _)| {
            let q = f.q();
            (Just(f), Just(d), Just(s), proptest::collection::vec(0..q, s))
        })
        .prop_map(|(f, d, s, a)| FamilySpec::new(&f, d, s, a).unwrap())
}

fn field() -> impl Strategy<Value = FieldCtx> {
    prop_oneof![Just("7"), Just("13"), Just("3^2:1,0,1"), Just("2^5"), Just("5^2")]
        .prop_map(|s| FieldCtx::parse(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn brute_equals_formula(spec in small_family()) {
        let b = Budget::default();
        prop_assert_eq!(avg_value_set_brute(&spec, b).unwrap(), avg_value_set_formula(&spec, b).unwrap());
    }

    #[test]
    fn chi_within_binomial_and_matches_subsets(spec in small_family()) {
        let q = spec.field().q() as u64;
        let counts = chi_counts(&spec, spec.d(), Budget::default()).unwrap();
        for (&r, &c) in &counts {
            prop_assert!(BigUint::from(c) <= binom(q, r as u64));
            prop_assert_eq!(c, chi_subsets(&spec, r, Budget::default()).unwrap());
        }
    }

    #[test]
    fn chi_paths_agree(spec in small_family(), cut in any::<usize>()) {
        let r_max = spec.m() + 1 + cut % spec.s();
        let b = Budget::default();
        prop_assert_eq!(chi_counts_dfs(&spec, r_max, b).unwrap(), chi_counts_symmetric(&spec, r_max, b).unwrap());
    }

    #[test]
    fn interp_space_matches_enumeration(spec in small_family(), pick in any::<u64>()) {
        let f = spec.field().clone();
        let q = f.q();
        let m = spec.m();
        prop_assume!((q as u64).pow(m as u32) <= 20_000);
        // distinct points from the bits of `pick`
        let r = 1 + (pick % (spec.d() as u64 + 1)) as usize;
        let mut points: Vec<u32> = (0..q).collect();
        let mut state = pick;
        for i in (1..points.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            points.swap(i, (state >> 33) as usize % (i + 1));
        }
        points.truncate(r.min(q as usize));
        let fa = spec.f_a();
        let mut count = 0u64;
        let mut g = vec![0u32; m];
        loop {
            let ok = points.iter().all(|&x| {
                let gx = g.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c));
                f.add(fa.eval(x), gx) == 0
            });
            count += ok as u64;
            let mut i = 0;
            while i < m && g[i] == q - 1 {
                g[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            g[i] += 1;
        }
        prop_assert_eq!(interp_space_size(&spec, &points).unwrap(), BigUint::from(count));
    }

    #[test]
    fn distinct_points_are_r_factorial_chi(spec in small_family(), orbit in any::<bool>()) {
        let q = spec.field().q() as u64;
        let counts = chi_counts(&spec, spec.d(), Budget::default()).unwrap();
        for r in spec.m() + 1..=spec.d() {
            prop_assume!(q.pow(r as u32) <= 200_000);
            let opts = ScanOptions {
                mode: if orbit { ScanMode::Orbit } else { ScanMode::Odometer },
                evaluator: if orbit { Evaluator::Remainder } else { Evaluator::Symbolic },
                budget: Budget::default(),
            };
            let pc = count_points(&spec, r, opts).unwrap();
            prop_assert_eq!(BigUint::from(pc.distinct_coords), factorial(r as u64) * counts[&r]);
            prop_assert_eq!(pc.total, pc.distinct_coords + pc.equal_coords);
        }
    }

    #[test]
    fn division_reconstructs(f in field(), a in proptest::collection::vec(any::<u32>(), 1..12), b in proptest::collection::vec(any::<u32>(), 1..6)) {
        let q = f.q();
        let a = Poly::new(&f, a.iter().map(|v| v % q).collect()).unwrap();
        let mut bc: Vec<u32> = b.iter().map(|v| v % q).collect();
        *bc.last_mut().unwrap() = 1 + bc.last().unwrap() % (q - 1);
        let b = Poly::new(&f, bc).unwrap();
        let (quot, rem) = a.divrem(&b).unwrap();
        prop_assert!(rem.degree().is_none_or(|d| d < b.degree().unwrap()));
        prop_assert_eq!(quot.mul(&b).unwrap().add(&rem).unwrap(), a);
    }

    #[test]
    fn field_axioms(f in field(), x in any::<u32>(), y in any::<u32>(), z in any::<u32>()) {
        let q = f.q();
        let (x, y, z) = (x % q, y % q, z % q);
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.add(f.sub(x, y), y), x);
        if x != 0 {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
        }
        prop_assert_eq!(f.pow(x, q as u64), x);
    }

    #[test]
    fn value_set_is_image_size(f in field(), c in proptest::collection::vec(any::<u32>(), 1..7)) {
        let q = f.q();
        let p = Poly::new(&f, c.iter().map(|v| v % q).collect()).unwrap();
        let image: BTreeMap<u32, ()> = (0..q).map(|x| (p.eval(x), ())).collect();
        prop_assert_eq!(p.value_set() as usize, image.len());
    }
}
