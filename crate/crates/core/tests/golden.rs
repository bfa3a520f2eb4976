//! Reference values at r = 1, α² = 1/2, q_R = 1, pinned from runs at twice
//! the automatic cutoff (N = 84), where they agree with N = 42 to 1e-9.

use unruhchan_core::{channel_report, ChannelParams, Rail};

const TOL: f64 = 5e-9;

fn check(rail: Rail, expected: [f64; 4]) {
    let res = channel_report(&ChannelParams::new(1.0, 1.0, 0.5, rail).unwrap()).unwrap();
    let got = [
        res.holevo_r,
        res.holevo_rbar,
        res.cohinfo_r,
        res.cohinfo_rbar,
    ];
    for (g, e) in got.iter().zip(expected) {
        assert!(
            (g - e).abs() < TOL,
            "{rail}: got {got:?}, expected {expected:?}"
        );
    }
    assert_eq!(res.cutoff, 42);
}

#[test]
fn single_rail_at_unit_squeezing() {
    check(
        Rail::Single,
        [
            0.308845439426549,
            0.079312394670645,
            0.229533044755904,
            -0.229533044755904,
        ],
    );
}

#[test]
fn dual_rail_at_unit_squeezing() {
    check(
        Rail::Dual,
        [
            0.507238675541422,
            0.150449092497518,
            0.356789583043901,
            -0.356789583043901,
        ],
    );
}
