use gaudin_core::algebra::{dimension_oracle, ModuleSpec, Partition};
use gaudin_core::bae::{bae_residual, weight_function, RootCoordinates};
use gaudin_core::harness::InstanceConfig;
use gaudin_core::polyring::{DiffOp, Poly, RatFun};
use gaudin_core::quasiexp::{
    annihilates, char_at_infinity, check_first_coefficient, expected_second_char, fundamental_data,
    second_char_at_infinity, QuasiExpSpace,
};
use gaudin_core::scalar::{format_exact, gauss, parse_gauss, rat, ExactField, Rat, Scalar};
use gaudin_core::spectral::kernel_from_operator;
use gaudin_core::util::multinomial;
use num_complex::Complex64;
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

fn poly() -> impl Strategy<Value = Poly<Rat>> {
    prop::collection::vec(small_rat(), 0..5).prop_map(Poly::from_coeffs)
}

/// Distinct exponents and monic polynomial parts of non-increasing degree.
fn space(rank: usize) -> impl Strategy<Value = QuasiExpSpace<Rat>> {
    let k = prop::collection::vec(small_rat(), rank).prop_filter("distinct", |k| {
        (0..k.len()).all(|i| (i + 1..k.len()).all(|j| k[i] != k[j]))
    });
    let degrees = prop::collection::vec(0usize..=3, rank).prop_map(|mut d| {
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    });
    (k, degrees).prop_flat_map(|(k, degrees)| {
        let rows: Vec<_> = degrees.iter().map(|&d| prop::collection::vec(small_rat(), d)).collect();
        (Just(k), rows).prop_map(|(k, rows)| QuasiExpSpace::from_coefficients(k, rows).unwrap())
    })
}

fn vector_spec(lambda: &[usize]) -> ModuleSpec<Rat> {
    let n: usize = lambda.iter().sum();
    let rank = lambda.len();
    ModuleSpec::new(
        rank,
        (0..rank as i64).map(|i| rat(2 * i + 1, 3)).collect(),
        vec![Partition::new(vec![1]).unwrap(); n],
        (0..n as i64).map(Rat::from_i64).collect(),
        Partition::new(lambda.to_vec()).unwrap(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn division_undoes_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let (q, r) = (&a * &b).divmod(&b).unwrap();
        prop_assert_eq!(q, a);
        prop_assert!(r.is_zero());
    }

    #[test]
    fn product_rule(a in poly(), b in poly()) {
        let lhs = (&a * &b).derivative();
        let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exact_scalars_round_trip(re in small_rat(), im in small_rat()) {
        let z = gauss(re, im.clone());
        prop_assert_eq!(parse_gauss(&format_exact(&z)).unwrap(), z.clone());
        let back = Rat::from_gauss(&z);
        prop_assert_eq!(back.is_some(), im == rat(0, 1));
    }

    #[test]
    fn fundamental_operator_kills_its_space(x in space(2)) {
        let data = fundamental_data(&x).unwrap();
        prop_assert!(annihilates(&data.operator, &x, 0.0));
        prop_assert!(check_first_coefficient(&data, x.k(), 0.0));
        prop_assert_eq!(char_at_infinity(&data.operator).unwrap(), Poly::from_roots(x.k().iter()));
        prop_assert_eq!(
            second_char_at_infinity(&data.operator).unwrap(),
            expected_second_char(x.k(), &x.degrees())
        );
    }

    #[test]
    fn rank_three_operators_have_the_twist_at_infinity(x in space(3)) {
        let data = fundamental_data(&x).unwrap();
        prop_assert!(annihilates(&data.operator, &x, 0.0));
        prop_assert_eq!(char_at_infinity(&data.operator).unwrap(), Poly::from_roots(x.k().iter()));
    }

    #[test]
    fn kernels_are_recovered_from_operators(x in space(2)) {
        let degrees = x.degrees();
        prop_assume!(degrees[0] > 0);
        let d = fundamental_data(&x).unwrap().operator;
        let dc = DiffOp::new(d.coeffs().iter().map(RatFun::to_c64).collect());
        let n = degrees.iter().sum::<usize>();
        let spec = ModuleSpec::new(
            2,
            x.k().to_vec(),
            vec![Partition::new(vec![1]).unwrap(); n],
            (0..n as i64).map(Rat::from_i64).collect(),
            Partition::new(degrees).unwrap(),
        )
        .unwrap();
        let y = kernel_from_operator(&dc, &spec, 1e-8).unwrap();
        for (a, b) in y.polys().iter().zip(x.to_c64().polys()) {
            prop_assert!((a - b).max_abs() <= 1e-8 * b.max_abs().max(1.0));
        }
    }

    #[test]
    fn vector_dimension_is_multinomial(parts in prop::collection::vec(1usize..=2, 1..=3)) {
        let mut lambda = parts;
        lambda.sort_unstable_by(|a, b| b.cmp(a));
        let spec = vector_spec(&lambda);
        prop_assert_eq!(dimension_oracle(&spec), multinomial(&lambda));
    }

    #[test]
    fn weight_function_is_symmetric_within_levels(
        b in prop::collection::vec(-20i64..3, 3),
        t in prop::collection::vec(21i64..60, 2),
    ) {
        prop_assume!(b[0] != b[1] && b[1] != b[2] && b[0] != b[2] && t[0] != t[1]);
        let base: Vec<Rat> = b.iter().map(|&x| Rat::from_i64(x)).collect();
        let roots: Vec<Rat> = t.iter().map(|&x| rat(x, 7)).collect();
        let swapped: Vec<Rat> = roots.iter().rev().cloned().collect();
        let (basis, w) = weight_function(2, &[base.clone(), roots]).unwrap();
        let (basis2, w2) = weight_function(2, &[base, swapped]).unwrap();
        prop_assert_eq!(basis.len(), 3);
        prop_assert_eq!(basis, basis2);
        prop_assert_eq!(w, w2);
    }

    #[test]
    fn bae_residual_is_equivariant(t in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 2)) {
        let z: Vec<Complex64> = t.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        prop_assume!((z[0] - z[1]).norm() > 1e-3);
        let base = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        prop_assume!(z.iter().all(|x| base.iter().all(|b| (x - b).norm() > 1e-3)));
        let k = [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)];
        let r = bae_residual(&RootCoordinates::new(vec![base.clone(), z.clone()]), &k).unwrap();
        let swapped = vec![z[1], z[0]];
        let r2 = bae_residual(&RootCoordinates::new(vec![base, swapped]), &k).unwrap();
        prop_assert!((r[0] - r2[1]).norm() < 1e-9 && (r[1] - r2[0]).norm() < 1e-9);
    }

    #[test]
    fn configs_round_trip(k in small_rat(), b0 in small_rat(), shift in 1i64..5) {
        let b1 = b0.clone() + Rat::from_i64(shift);
        let text = format!(
            r#"{{"N": 2, "K": ["0", "{}"], "partitions": [[1], [1]], "b": ["{}", "{}"], "weight": [1, 1]}}"#,
            format_exact(&k), format_exact(&b0), format_exact(&b1)
        );
        let parsed = InstanceConfig::from_json(&text);
        if k == rat(0, 1) {
            prop_assert!(parsed.is_err());
        } else {
            let cfg = parsed.unwrap();
            prop_assert_eq!(InstanceConfig::from_json(&cfg.to_json()).unwrap(), cfg.clone());
            prop_assert_eq!(cfg.spec::<Rat>().unwrap().b()[1].clone(), b1);
        }
    }
}
