use num_complex::Complex64;
use proptest::prelude::*;

use unruhchan_core::fock::{
    apply_creation, decode_index, encode_index, hermitian_spectrum, reduce_from_vector, ModeLayout,
    StateVector,
};
use unruhchan_core::info::{channel_report, conditional_entropy_routes, Receiver};
use unruhchan_core::unruh::{
    build_quantum_state, excitation_deficit, unruh_excitation, unruh_excitation_branches,
    unruh_vacuum, vacuum_deficit, ChannelParams, Cutoff, Rail, RindlerParams, UnruhWeights,
    Q_R_MIN,
};

fn layout_strategy() -> impl Strategy<Value = ModeLayout> {
    prop::collection::vec(1usize..5, 1..5).prop_map(|dims| {
        let modes: Vec<(String, usize)> = dims
            .into_iter()
            .enumerate()
            .map(|(i, d)| (format!("m{i}"), d))
            .collect();
        ModeLayout::new(&modes).unwrap()
    })
}

fn random_state(layout: ModeLayout, seed: &[(f64, f64)]) -> StateVector {
    let amps: Vec<Complex64> = (0..layout.total_dim())
        .map(|i| {
            let (re, im) = seed[i % seed.len()];
            Complex64::new(re + 0.1 * i as f64, im)
        })
        .collect();
    StateVector::from_dense(layout, &amps)
        .unwrap()
        .normalized()
        .unwrap()
        .0
}

fn amplitudes() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..40)
}

fn nonzero_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.retain(|&x| x > 1e-13);
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

fn spectrum_of(state: &StateVector, keep: &[&str]) -> Vec<f64> {
    hermitian_spectrum(&reduce_from_vector(state, keep).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn encode_decode_is_a_bijection(layout in layout_strategy()) {
        for index in 0..layout.total_dim() {
            let occ = decode_index(index, &layout).unwrap();
            prop_assert_eq!(encode_index(&occ, &layout).unwrap(), index);
        }
    }

    #[test]
    fn full_reduction_is_the_projector(layout in layout_strategy(), seed in amplitudes()) {
        let psi = random_state(layout.clone(), &seed);
        let labels: Vec<&str> = layout.labels().iter().map(String::as_str).collect();
        let rho = reduce_from_vector(&psi, &labels).unwrap();
        let amps = psi.to_dense();
        for i in 0..amps.len() {
            for j in 0..amps.len() {
                prop_assert!((rho.get(i, j) - amps[i] * amps[j].conj()).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn complementary_reductions_share_their_spectrum(
        layout in layout_strategy(),
        seed in amplitudes(),
        cut in 0usize..4,
    ) {
        let labels: Vec<&str> = layout.labels().iter().map(String::as_str).collect();
        prop_assume!(labels.len() >= 2);
        let cut = 1 + cut % (labels.len() - 1);
        let psi = random_state(layout.clone(), &seed);
        let x = nonzero_sorted(spectrum_of(&psi, &labels[..cut]));
        let y = nonzero_sorted(spectrum_of(&psi, &labels[cut..]));
        prop_assert_eq!(x.len(), y.len());
        for (a, b) in x.iter().zip(&y) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn creation_spill_is_the_lost_trace(
        layout in layout_strategy(),
        seed in amplitudes(),
        which in 0usize..4,
    ) {
        let labels: Vec<&str> = layout.labels().iter().map(String::as_str).collect();
        let mode = labels[which % labels.len()];
        let psi = random_state(layout.clone(), &seed);
        let (raised, spill) = apply_creation(&psi, mode).unwrap();
        // a† scales |n⟩ by √(n+1); undo that to compare weights.
        let pos = layout.position(mode).unwrap();
        let mut kept = 0.0;
        for &(i, a) in psi.entries() {
            let n = decode_index(i, &layout).unwrap()[pos];
            if n + 1 < layout.dims()[pos] {
                kept += (n + 1) as f64 * a.norm_sqr();
            }
        }
        let rho = reduce_from_vector(&raised, &labels[..1]).unwrap();
        prop_assert!((rho.trace() - kept).abs() < 1e-12);
        let total: f64 = psi
            .entries()
            .iter()
            .map(|&(i, a)| (decode_index(i, &layout).unwrap()[pos] + 1) as f64 * a.norm_sqr())
            .sum();
        prop_assert!((total - rho.trace() - spill).abs() < 1e-12);
    }

    #[test]
    fn spectrum_sums_to_the_trace(layout in layout_strategy(), seed in amplitudes(), cut in 0usize..4) {
        let labels: Vec<&str> = layout.labels().iter().map(String::as_str).collect();
        let keep = &labels[..1 + cut % labels.len()];
        let psi = random_state(layout.clone(), &seed);
        let rho = reduce_from_vector(&psi, keep).unwrap();
        let values = hermitian_spectrum(&rho).unwrap();
        prop_assert!((values.iter().sum::<f64>() - rho.trace()).abs() < 1e-10);
        prop_assert!(values.iter().all(|&l| (0.0..=1.0 + 1e-10).contains(&l)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn region_swap_exchanges_the_weights(r in 0.0f64..1.5, q in Q_R_MIN..1.0) {
        let p = RindlerParams::from_r(r).unwrap();
        let w = UnruhWeights::new(q).unwrap();
        let (ex, _) = unruh_excitation(&p, &w, 12, 1.0).unwrap();
        let (mirror, _) = unruh_excitation(&p, &w.swapped(), 12, 1.0).unwrap();
        prop_assert_eq!(ex.swap_modes("I", "II").unwrap(), mirror);
    }

    #[test]
    fn vacuum_and_excitation_are_orthogonal(r in 0.0f64..2.0, q in Q_R_MIN..1.0) {
        let p = RindlerParams::from_r(r).unwrap();
        let (vac, _) = unruh_vacuum(&p, 10, 1.0).unwrap();
        let (ex, _) = unruh_excitation(&p, &UnruhWeights::new(q).unwrap(), 10, 1.0).unwrap();
        prop_assert_eq!(vac.inner(&ex).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn deficits_fall_strictly_with_the_cutoff(r in 0.05f64..3.0, n in 2usize..200) {
        let p = RindlerParams::from_r(r).unwrap();
        prop_assert!(vacuum_deficit(&p, n + 1) < vacuum_deficit(&p, n));
        prop_assert!(excitation_deficit(&p, n + 1) < excitation_deficit(&p, n));
    }

    #[test]
    fn phases_leave_every_reduction_spectrum_unchanged(
        r in 0.0f64..1.2,
        q in Q_R_MIN..1.0,
        alpha2 in 0.0f64..1.0,
        phi in 0.0f64..std::f64::consts::TAU,
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let n = 8;
        let p = RindlerParams::from_r(r).unwrap();
        let w = UnruhWeights::new(q).unwrap();
        let (vac, _) = unruh_vacuum(&p, n, 1.0).unwrap();
        let br = unruh_excitation_branches(&p, n, 1.0).unwrap();
        let alice = ModeLayout::new(&[("A", 2)]).unwrap();
        let build = |phi: f64, theta: f64| {
            let ex = br
                .right
                .scale(Complex64::from_polar(w.q_r(), theta))
                .add(&br.left.scale(Complex64::new(w.q_l(), 0.0)))
                .unwrap();
            StateVector::basis(alice.clone(), &[0]).unwrap()
                .tensor(&vac).unwrap()
                .scale(Complex64::from_polar(alpha2.sqrt(), phi))
                .add(
                    &StateVector::basis(alice.clone(), &[1]).unwrap()
                        .tensor(&ex).unwrap()
                        .scale(Complex64::new((1.0 - alpha2).sqrt(), 0.0)),
                )
                .unwrap()
        };
        let (plain, phased) = (build(0.0, 0.0), build(phi, theta));
        for keep in [&["I"][..], &["II"], &["A", "I"], &["A", "II"], &["A"]] {
            let (a, b) = (spectrum_of(&plain, keep), spectrum_of(&phased, keep));
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-12, "{keep:?}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn single_rail_report_invariants(r in 0.0f64..1.5, q in Q_R_MIN..1.0, alpha2 in 0.0f64..1.0) {
        let params = ChannelParams::new(r, q, alpha2, Rail::Single)
            .unwrap()
            .with_cutoff(Cutoff::Auto { cap: 400 });
        let res = channel_report(&params).unwrap();
        prop_assert!((res.cond_r + res.cond_rbar).abs() < 1e-9);
        prop_assert!(res.holevo_r >= -1e-10 && res.holevo_rbar >= -1e-10);
        let h = unruhchan_core::info::binary_entropy(alpha2);
        prop_assert!(res.holevo_r <= h + 1e-10 && res.holevo_rbar <= h + 1e-10);
        if res.cohinfo_r.abs() > 1e-9 || res.cohinfo_rbar.abs() > 1e-9 {
            prop_assert_eq!(res.cohinfo_r.signum(), -res.cohinfo_rbar.signum());
        }
        let state = build_quantum_state(&params).unwrap().state;
        for rx in [Receiver::Rob, Receiver::AntiRob] {
            let (direct, shortcut) = conditional_entropy_routes(&state, rx).unwrap();
            prop_assert!((direct - shortcut).abs() < 1e-8);
        }
    }

    #[test]
    fn receiver_swap_matches_weight_swap(r in 0.0f64..1.0, q in Q_R_MIN..1.0, alpha2 in 0.0f64..1.0) {
        for (rail, cutoff) in [(Rail::Single, Cutoff::default()), (Rail::Dual, Cutoff::Fixed(8))] {
            let params = ChannelParams::new(r, q, alpha2, rail).unwrap().with_cutoff(cutoff).with_tol(1.0);
            let a = channel_report(&params).unwrap();
            let b = channel_report(&params.with_weights(params.weights.swapped())).unwrap();
            prop_assert!((a.holevo_r - b.holevo_rbar).abs() < 1e-10);
            prop_assert!((a.holevo_rbar - b.holevo_r).abs() < 1e-10);
            prop_assert!((a.cohinfo_r - b.cohinfo_rbar).abs() < 1e-10);
            prop_assert!((a.cohinfo_rbar - b.cohinfo_r).abs() < 1e-10);
        }
    }
}
