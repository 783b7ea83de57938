use lipcert::geometry::{Ball, Vector};
use lipcert::sampling::{seeded_rng, uniform_in_ball};
use lipcert::verification::{convexity_check, ConvexityReport};
use lipcert::zoo::{AffinePiece, FunctionKind, FunctionSpec};

fn v(c: &[f64]) -> Vector {
    Vector::new(c.to_vec()).unwrap()
}

fn convex_specs() -> Vec<FunctionSpec> {
    vec![
        FunctionSpec::norm(3),
        FunctionSpec::linear(v(&[1.0, -2.0, 0.5]), 3.0).unwrap(),
        FunctionSpec::constant(7.0, 3).unwrap(),
        FunctionSpec::logistic(v(&[3.0, 4.0, -1.0])),
        FunctionSpec::max_affine(vec![
            AffinePiece { b: v(&[1.0, 0.0, 0.0]), alpha: 0.0 },
            AffinePiece { b: v(&[-1.0, 2.0, 0.0]), alpha: 1.0 },
            AffinePiece { b: v(&[0.0, 0.0, -3.0]), alpha: -2.0 },
        ])
        .unwrap(),
        FunctionSpec::quadratic(
            vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 0.0]],
            v(&[1.0, 0.0, -1.0]),
        )
        .unwrap(),
    ]
}

#[test]
fn sampled_convexity_of_convex_specs() {
    let region = Ball::new(v(&[0.5, -0.5, 1.0]), 6.0).unwrap();
    for spec in convex_specs() {
        let report = convexity_check(&spec, &region, 10_000, 31).unwrap();
        assert_eq!(report, ConvexityReport::Ok { triples_tested: 10_000 }, "{:?}", spec.kind());
    }
}

/// Central differences with h = 1e-6 against the analytic gradient.
#[test]
fn gradients_match_central_differences() {
    let h = 1e-6;
    let region = Ball::new(v(&[0.0, 0.0, 0.0]), 3.0).unwrap();
    let mut smooth: Vec<_> = convex_specs().into_iter().filter(|s| s.is_smooth()).collect();
    smooth.push(FunctionSpec::norm(3));
    let mut rng = seeded_rng(5);
    for spec in &smooth {
        for _ in 0..1000 {
            let x = uniform_in_ball(&mut rng, &region);
            if matches!(spec.kind(), FunctionKind::EuclideanNorm) && x.norm() < 1e-2 {
                continue;
            }
            let g = spec.gradient(&x).unwrap();
            for i in 0..3 {
                let e = Vector::basis(3, i);
                let fd = (spec.evaluate(&x.offset(h, &e)).unwrap() - spec.evaluate(&x.offset(-h, &e)).unwrap())
                    / (2.0 * h);
                let scale = g.norm().max(1.0);
                assert!(
                    (fd - g[i]).abs() <= 1e-5 * scale,
                    "{:?} at {x}: fd {fd} vs {}",
                    spec.kind(),
                    g[i]
                );
            }
        }
    }
}

#[test]
fn logistic_finite_for_extreme_arguments() {
    let f = FunctionSpec::logistic(v(&[3.0, 4.0]));
    for t in [1e4, -1e4] {
        // bᵀx = t along b/‖b‖·t/5
        let x = v(&[0.6 * t / 5.0, 0.8 * t / 5.0]);
        let value = f.evaluate(&x).unwrap();
        assert!(value.is_finite());
        if t > 0.0 {
            assert!((value - t).abs() < 1e-9 * t);
        }
        assert!(f.gradient(&x).unwrap().coords().iter().all(|c| c.is_finite()));
    }
}

#[test]
fn maxaffine_gradient_is_an_active_slope() {
    let pieces = vec![
        AffinePiece { b: v(&[1.0, 0.0]), alpha: 0.0 },
        AffinePiece { b: v(&[-0.5, 1.5]), alpha: 0.3 },
        AffinePiece { b: v(&[0.0, -2.0]), alpha: -1.0 },
    ];
    let f = FunctionSpec::max_affine(pieces.clone()).unwrap();
    let region = Ball::new(v(&[0.0, 0.0]), 4.0).unwrap();
    let mut rng = seeded_rng(8);
    for _ in 0..2000 {
        let x = uniform_in_ball(&mut rng, &region);
        let g = f.gradient(&x).unwrap();
        let fx = f.evaluate(&x).unwrap();
        let active = pieces.iter().position(|p| p.b == g).expect("slope of some piece");
        assert_eq!(pieces[active].b.dot(&x) + pieces[active].alpha, fx);
    }
}

#[test]
fn catalog_moduli_match_table() {
    use lipcert::zoo::{catalog, Modulus};
    let moduli: Vec<_> = catalog().iter().map(|s| s.analytic_global_modulus()).collect();
    assert_eq!(
        moduli,
        vec![
            Some(Modulus::Finite(1.0)),
            Some(Modulus::Finite(5.0)),
            Some(Modulus::Finite(0.0)),
            Some(Modulus::Finite(5.0)),
            Some(Modulus::Finite(2.0)),
            Some(Modulus::Infinite),
            None,
        ]
    );
}
