use std::time::Duration;

use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

use z8sums::characters::{additive_char, power_symbol, AdditiveMode, SymbolValue};
use z8sums::cli::RunConfig;
use z8sums::expsums::{complete_sum, identity_composite, PolySpec, TwistSpec};
use z8sums::ring::{crt, factor, normalize_assoc, primes_up_to_norm, CycInt, FieldElem, Modulus};
use z8sums::series::{fit_exponent, patterson_series, PattersonOptions, SeriesPoint};

fn elem(r: i64) -> impl Strategy<Value = CycInt> {
    prop::array::uniform4(-r..=r).prop_map(CycInt::from_i64s)
}

fn nonzero(r: i64) -> impl Strategy<Value = CycInt> {
    elem(r).prop_filter("nonzero", |c| !c.is_zero())
}

fn mode() -> impl Strategy<Value = AdditiveMode> {
    prop::sample::select(AdditiveMode::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_multiplicative(x in elem(1000), y in elem(1000)) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn trace_is_sum_of_conjugates(x in elem(10_000)) {
        let s = [1, 3, 5, 7]
            .into_iter()
            .map(|k| x.galois(k).unwrap())
            .fold(CycInt::zero(), |a, g| &a + &g);
        prop_assert_eq!(s, CycInt::from_int(x.trace()));
    }

    #[test]
    fn embeddings_match_norm(x in nonzero(1_000_000)) {
        let (a, b) = x.embeddings().abs_sq();
        let n: f64 = x.norm().to_string().parse().unwrap();
        prop_assert!((a * b - n).abs() <= 1e-9 * n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn crt_reduces_to_its_inputs(c1 in nonzero(6), c2 in nonzero(6), x1 in elem(50), x2 in elem(50)) {
        let (m1, m2) = (Modulus::new(c1).unwrap(), Modulus::new(c2).unwrap());
        prop_assume!(!m1.is_unit() && !m2.is_unit());
        match crt(&x1, &m1, &x2, &m2) {
            Ok(x) => {
                prop_assert_eq!(m1.reduce(&x), m1.reduce(&x1));
                prop_assert_eq!(m2.reduce(&x), m2.reduce(&x2));
            }
            Err(_) => prop_assert!(!z8sums::ring::are_coprime(m1.elem(), m2.elem())),
        }
    }

    #[test]
    fn factorization_multiplies_back(c in nonzero(40)) {
        let f = factor(&c).unwrap();
        prop_assert!(f.unit.is_unit());
        prop_assert_eq!(f.product(), c);
    }

    #[test]
    fn normalized_associates(c in nonzero(60)) {
        prop_assume!(c.norm() % BigInt::from(2) == BigInt::from(1));
        if let Ok((a, _)) = normalize_assoc(&c) {
            prop_assert!(a.is_one_mod_4());
            let q = a.div_exact(&c).expect("associate");
            prop_assert!(q.is_unit());
        }
    }

    #[test]
    fn additive_char_has_period_one(alpha in elem(30), y in elem(30), c in nonzero(8), m in mode()) {
        let v0 = additive_char(&FieldElem::quotient(&alpha, &c), m);
        let v1 = additive_char(&FieldElem::quotient(&(&alpha + &(&y * &c)), &c), m);
        prop_assert!((v0 - v1).norm() < 1e-9);
    }
}

fn odd_primes() -> Vec<CycInt> {
    primes_up_to_norm(400).into_iter().filter(|p| p.norm() % BigInt::from(2) == BigInt::from(1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn symbols_are_fourth_roots(a in elem(50), i in 0usize..1000) {
        let ps = odd_primes();
        let p = &ps[i % ps.len()];
        let q = power_symbol(&a, p, 4).unwrap();
        let s = power_symbol(&a, p, 2).unwrap();
        if q.is_zero() {
            prop_assert!(s.is_zero());
        } else {
            prop_assert_eq!(q.pow(4), SymbolValue::one());
            prop_assert_eq!(q.pow(2), s);
        }
    }

    #[test]
    fn complete_sums_obey_trivial_bound(c in nonzero(3), f in prop::collection::vec((elem(4), 0u32..5), 1..4), m in mode()) {
        let Ok(f) = PolySpec::new(dedup(f)) else { return Ok(()) };
        let cm = Modulus::new(c).unwrap();
        let v = complete_sum(&f, &cm, &TwistSpec::None, m).unwrap().value;
        prop_assert!(v.norm() <= cm.norm() as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn odd_polynomials_give_real_sums(c in nonzero(3), a in elem(9), b in elem(9), m in mode()) {
        // x ↔ −x pairs each term with its conjugate
        let cm = Modulus::new(c).unwrap();
        let f = PolySpec::new(vec![(a, 3), (b, 1)]).unwrap();
        let v = complete_sum(&f, &cm, &TwistSpec::None, m).unwrap().value;
        prop_assert!(v.im.abs() <= 1e-9 * cm.norm() as f64);
    }

    #[test]
    fn even_monomials_give_real_sums(c in nonzero(3), a in elem(9), d in prop::sample::select(vec![2u32, 4]), m in mode()) {
        // x ↦ ωx (d = 4) or ω²x (d = 2) negates a·x^d
        let cm = Modulus::new(c).unwrap();
        let v = complete_sum(&PolySpec::new(vec![(a, d)]).unwrap(), &cm, &TwistSpec::None, m).unwrap().value;
        prop_assert!(v.im.abs() <= 1e-9 * cm.norm() as f64);
    }
}

fn dedup(mut terms: Vec<(CycInt, u32)>) -> Vec<(CycInt, u32)> {
    terms.sort_by_key(|t| t.1);
    terms.dedup_by_key(|t| t.1);
    terms
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn composite_rhs_is_sum_of_terms(a0 in nonzero(2), b0 in nonzero(2), m in mode()) {
        // c = 3·p² with p above 17, normalized
        let c = normalize_assoc(&(&CycInt::from(3) * &primes_up_to_norm(17).into_iter().find(|p| p.norm() == BigInt::from(17)).unwrap().pow(2))).ok();
        prop_assume!(c.is_some());
        let c = Modulus::new(c.unwrap().0).unwrap();
        let (a, b) = (&a0 * &a0, &(&b0 * &b0) * &CycInt::from(4));
        prop_assume!(z8sums::ring::are_coprime(&(&(&a * &b) * &CycInt::from(2)), c.elem()));
        let r = identity_composite(&a, &b, &c, m).unwrap();
        prop_assert_eq!(r.rhs_total(), r.rhs);
    }

    #[test]
    fn power_laws_are_recovered(k in 0.5f64..2.5, scale in 0.1f64..100.0) {
        let pts: Vec<SeriesPoint> = (0..8)
            .map(|i| {
                let x = 2f64.powi(10 + i);
                SeriesPoint::new(x, Complex64::new(scale * x.powf(k), 0.0), 0, Duration::ZERO)
            })
            .collect();
        let fit = fit_exponent(&pts, None).unwrap();
        prop_assert!((fit.slope - k).abs() < 1e-12);
    }

    #[test]
    fn patterson_sums_ignore_worker_count(c3 in 1i64..4, c1 in -3i64..4, x in 100u64..600) {
        let f: PolySpec = format!("{c3}:3,{c1}:1").parse().unwrap();
        let run = |w| patterson_series(&f, &[x / 2, x], PattersonOptions { workers: Some(w), ..Default::default() }).unwrap();
        let (a, b) = (run(1), run(4));
        prop_assert_eq!(a.iter().map(|p| p.value).collect::<Vec<_>>(), b.iter().map(|p| p.value).collect::<Vec<_>>());
    }

    #[test]
    fn config_round_trips(seed in any::<u64>(), xr in 1.01f64..8.0, w in 0.01f64..1.0, cases in prop::option::of(1usize..500), idx in 0usize..40) {
        let text = format!(
            "command = table\nseed = {seed}\nx_ratio = {xr}\nweight = {w},{}\ncases = {}\nchar = idx:{idx}\nsuites = c4,hd\n",
            w + 1.0,
            cases.map_or("auto".to_string(), |c| c.to_string()),
        );
        let c = RunConfig::from_text(&text).unwrap();
        let canon = c.to_canonical();
        let back = RunConfig::from_text(&canon).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_canonical(), canon);
    }
}
