#![allow(clippy::field_reassign_with_default)]

use maritime_relay::channel::{link_gain, snr_siso, ChannelParams};
use maritime_relay::geometry::Vec3;
use maritime_relay::link_budget::{analytic_rate, chain, LinkBudgetParams, BOLTZMANN};

// The channel model takes -174 dBm/Hz as thermal noise; pick the budget's
// temperature so k*T matches it exactly, with the noise figure folded in.
fn matched_budget(ch: &ChannelParams, ebn0: f64) -> LinkBudgetParams {
    let n0_w_per_hz = 10f64.powf((-174.0 + ch.noise_figure_db) / 10.0) * 1e-3;
    let mut p = LinkBudgetParams::from_channel(ch, 0.0);
    p.temperature = n0_w_per_hz / BOLTZMANN;
    p.ebn0 = ebn0;
    p
}

#[test]
fn budget_agrees_with_channel_at_500_m() {
    let mut ch = ChannelParams::default();
    ch.zeta_los_db = 0.0;
    let bs = Vec3::new(0.0, 0.0, 10.0);
    let rx = Vec3::new(500.0, 0.0, 10.0);
    let snr = snr_siso(&ch, &link_gain(&ch, bs, rx, &[]).unwrap()).snr_linear;

    let p = matched_budget(&ch, snr);
    let r = analytic_rate(&p, 500.0).unwrap();
    let back = r * p.ebn0 / p.bandwidth;
    assert!((back - snr).abs() / snr < 1e-6, "{back} vs {snr}");

    let c = chain(&p, 500.0).unwrap();
    assert!((c.pr_over_n - snr).abs() / snr < 1e-6);
}

#[test]
fn reference_received_power_at_100_m() {
    let p = LinkBudgetParams::from_channel(&ChannelParams::default(), 10.0);
    let c = chain(&p, 100.0).unwrap();
    assert!(
        (c.fspl_linear - 5.91e8).abs() / 5.91e8 < 2e-3,
        "{}",
        c.fspl_linear
    );
    assert!(
        (c.received_power_w - 5.35e-8).abs() / 5.35e-8 < 2e-3,
        "{}",
        c.received_power_w
    );
}
