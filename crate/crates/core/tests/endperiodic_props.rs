mod common;

use common::*;
use perispec::endperiodic::{
    fl_inverse, fl_transform, index, index_change, spectral_flow, symbol_index, truncation_kernels,
    weighted_norm, EndPeriodicOperator,
};
use perispec::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fourier_laplace_round_trip(seed in any::<u64>(), delta in -1.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_sequence(&mut rng);
        let nodes = 4 * u.width().max(4);
        let t = fl_transform(&u, delta.exp(), nodes).unwrap();
        for n in u.offset() - 2..u.offset() + u.width() as i64 + 2 {
            let back = fl_inverse(&t, n);
            let want = u.get(n);
            let err = back.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-10, "n = {}, err = {}", n, err);
        }
    }

    #[test]
    fn parseval(seed in any::<u64>(), delta in -1.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_sequence(&mut rng);
        let t = fl_transform(&u, delta.exp(), 4 * u.width().max(4)).unwrap();
        let lhs = t.mean_square();
        let rhs = weighted_norm(&u, delta).powi(2);
        prop_assert!((lhs - rhs).abs() < 1e-10 * rhs.max(1.0));
    }

    #[test]
    fn index_change_three_ways(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sym = random_symbol(&mut rng);
        prop_assume!(sym.n() <= 2);
        if let Some((d1, d2)) = weight_pair(&mut rng, &sym, 0.5) {
            let change = index_change(&sym, d1, d2).unwrap();
            let i1 = symbol_index(&sym, d1).unwrap();
            let i2 = symbol_index(&sym, d2).unwrap();
            prop_assert_eq!(change, i1 - i2);
            let inside = log_radii(&sym).iter().filter(|l| **l > d1 && **l < d2).count() as i64;
            prop_assert_eq!(change, inside);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reversal_negates_flow(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let path = random_path(&mut rng, 0.05);
        match spectral_flow(&path) {
            Ok((sf, events)) => {
                let (sr, rev) = spectral_flow(&path.reversed()).unwrap();
                prop_assert_eq!(sr, -sf);
                prop_assert_eq!(rev.len(), events.len());
                let mut fwd: Vec<(f64, i32)> = events.iter().map(|e| (1.0 - e.t_star, -e.sign)).collect();
                let mut bwd: Vec<(f64, i32)> = rev.iter().map(|e| (e.t_star, e.sign)).collect();
                fwd.sort_by(|a, b| a.0.total_cmp(&b.0));
                bwd.sort_by(|a, b| a.0.total_cmp(&b.0));
                for (f, b) in fwd.iter().zip(&bwd) {
                    prop_assert!((f.0 - b.0).abs() < 1e-6);
                    prop_assert_eq!(f.1, b.1);
                }
                let i0 = symbol_index(path.start(), 0.0).unwrap();
                let i1 = symbol_index(path.end(), 0.0).unwrap();
                prop_assert_eq!(i1 - i0, sf);
            }
            Err(Error::Collision { .. })
            | Err(Error::TangentialCrossing { .. })
            | Err(Error::DegenerateCrossing { .. })
            | Err(Error::ZeroCountChanged { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

#[test]
fn cap_stability_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    while done < 4 {
        let sym = random_symbol(&mut rng);
        if sym.n() > 2 {
            continue;
        }
        let Some(&delta) = admissible_weights(&sym, 0.5).first() else {
            continue;
        };
        let bare = EndPeriodicOperator::new(sym.clone(), delta).unwrap();
        let base = index(&bare).unwrap();
        let t0 = truncation_kernels(&bare, 200).unwrap();
        assert_eq!(t0.index(), base);
        for _ in 0..3 {
            let cap = random_cap(&mut rng, sym.n(), 3);
            let op = EndPeriodicOperator::with_cap(sym.clone(), delta, cap).unwrap();
            assert_eq!(index(&op).unwrap(), base);
            assert_eq!(truncation_kernels(&op, 200).unwrap().index(), base);
        }
        done += 1;
    }
}
