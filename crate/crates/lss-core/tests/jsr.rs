use lss_core::jsr::{jsr_bounds, jsr_decide, JsrOptions, Verdict};
use lss_core::linalg::{Matrix, MatrixSet, NormKind};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};
use std::time::Instant;

type M2 = [[f64; 2]; 2];

fn mul(a: &M2, b: &M2) -> M2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

fn rho(a: &M2) -> f64 {
    let tr = a[0][0] + a[1][1];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        (tr.abs() + disc.sqrt()) / 2.0
    } else {
        det.abs().sqrt()
    }
}

fn norm2(a: &M2) -> f64 {
    let f = a.iter().flatten().map(|x| x * x).sum::<f64>();
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    ((f + (f * f - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
}

/// Exhaustive products up to `depth`: `(max ρ(Π)^{1/k}, min_k max ‖Π‖^{1/k})`.
fn brute(a: &M2, b: &M2, depth: usize) -> (f64, f64) {
    let mut level = vec![*a, *b];
    let (mut lo, mut hi) = (0.0f64, f64::INFINITY);
    for k in 1..=depth {
        let e = 1.0 / k as f64;
        lo = level.iter().map(|p| rho(p).powf(e)).fold(lo, f64::max);
        hi = hi.min(level.iter().map(|p| norm2(p).powf(e)).fold(0.0, f64::max));
        if k < depth {
            level = level.iter().flat_map(|p| [mul(p, a), mul(p, b)]).collect();
        }
    }
    (lo, hi)
}

fn to_set(a: &M2, b: &M2) -> MatrixSet {
    let m = |x: &M2| Matrix::from_rows(&[x[0].to_vec(), x[1].to_vec()]).unwrap();
    MatrixSet::new(vec![m(a), m(b)]).unwrap()
}

fn random_m2(rng: &mut StdRng) -> M2 {
    let mut g = || rng.random_range(-1.0..1.0);
    [[g(), g()], [g(), g()]]
}

fn golden() -> MatrixSet {
    let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
    let b = Matrix::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
    MatrixSet::new(vec![a, b]).unwrap()
}

#[test]
fn consistent_with_brute_force() {
    let mut rng = StdRng::seed_from_u64(11);
    for i in 0..50 {
        let (a, b) = (random_m2(&mut rng), random_m2(&mut rng));
        let (lo, hi) = brute(&a, &b, 10);
        let r = jsr_bounds(&to_set(&a, &b), 0.02, &JsrOptions::default()).unwrap();
        assert!(r.lower >= lo * (1.0 - 1e-9), "set {i}");
        assert!(
            r.upper >= lo * (1.0 - 1e-9) && r.lower <= hi * (1.0 + 1e-9),
            "set {i}"
        );
        assert!(
            r.inconclusive || r.upper <= r.lower * 1.02 + 1e-12,
            "set {i}"
        );
    }
}

#[test]
fn golden_ratio_pair() {
    let start = Instant::now();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let r = jsr_bounds(&golden(), 0.005, &JsrOptions::default()).unwrap();
    assert!(!r.inconclusive);
    assert!((r.lower - phi).abs() < 1e-9, "{}", r.lower);
    assert!(r.upper < phi + 0.01);
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn bounds_bracket_the_true_value() {
    // Commuting upper-triangular pair: ρ is the max diagonal entry.
    let a = Matrix::from_rows(&[vec![0.6, 1.0], vec![0.0, 0.2]]).unwrap();
    let b = Matrix::from_rows(&[vec![0.3, 0.5], vec![0.0, 0.7]]).unwrap();
    for norm in [NormKind::One, NormKind::Two, NormKind::Inf] {
        let o = JsrOptions {
            norm,
            ..JsrOptions::default()
        };
        let r = jsr_bounds(
            &MatrixSet::new(vec![a.clone(), b.clone()]).unwrap(),
            0.01,
            &o,
        )
        .unwrap();
        assert!(r.lower <= 0.7 + 1e-12 && 0.7 <= r.upper + 1e-12);
        if !r.inconclusive {
            assert!(r.upper <= 0.7 * 1.01 + 1e-9, "{norm}: {}", r.upper);
        }
    }
}

#[test]
fn more_budget_never_loosens() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..10 {
        let s = to_set(&random_m2(&mut rng), &random_m2(&mut rng));
        let mut prev: Option<(f64, f64)> = None;
        for budget in [20, 200, 2_000, 20_000] {
            let o = JsrOptions {
                budget,
                ..JsrOptions::default()
            };
            let r = jsr_bounds(&s, 1e-4, &o).unwrap();
            if let Some((l, u)) = prev {
                assert!(r.lower >= l - 1e-12 && r.upper <= u + 1e-12);
            }
            prev = Some((r.lower, r.upper));
        }
    }
}

#[test]
fn decision_respects_the_bounds() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let o = JsrOptions::default();
    let d = jsr_decide(&golden().scale(1.01 / phi), 0.01, &o).unwrap();
    assert_eq!(d.verdict, Verdict::CertifiedAbove);
    let d = jsr_decide(&golden().scale(0.98 / phi), 0.01, &o).unwrap();
    assert_eq!(d.verdict, Verdict::CertifiedBelow);
    assert!(d.rho_star < 1.01);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scale_equivariant(
        entries in prop::collection::vec(-1.0f64..1.0, 8),
        s in 0.2f64..5.0,
    ) {
        let a = [[entries[0], entries[1]], [entries[2], entries[3]]];
        let b = [[entries[4], entries[5]], [entries[6], entries[7]]];
        let set = to_set(&a, &b);
        let r = jsr_bounds(&set, 0.02, &JsrOptions::default()).unwrap();
        let rs = jsr_bounds(&set.scale(s), 0.02, &JsrOptions::default()).unwrap();
        prop_assert!((rs.lower - s * r.lower).abs() <= 1e-9 * (1.0 + rs.lower));
        prop_assert!((rs.upper - s * r.upper).abs() <= 1e-9 * (1.0 + rs.upper));
    }

    #[test]
    fn every_norm_brackets_the_same_value(
        entries in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let a = [[entries[0], entries[1]], [entries[2], entries[3]]];
        let b = [[entries[4], entries[5]], [entries[6], entries[7]]];
        let set = to_set(&a, &b);
        let rs: Vec<_> = [NormKind::One, NormKind::Two, NormKind::Inf]
            .into_iter()
            .map(|norm| jsr_bounds(&set, 0.02, &JsrOptions { norm, ..JsrOptions::default() }).unwrap())
            .collect();
        let lo = rs.iter().map(|r| r.lower).fold(0.0, f64::max);
        let hi = rs.iter().map(|r| r.upper).fold(f64::INFINITY, f64::min);
        prop_assert!(lo <= hi * (1.0 + 1e-9));
    }
}
