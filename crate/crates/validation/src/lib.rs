//! Reference formulas, each written as a single closed-form expression with
//! no shared code paths with the simulator, plus small brute-force solvers.

pub const C: f64 = 299_792_458.0;

/// Free-space loss plus extra loss, in dB, summed term by term.
pub fn path_loss_db(f_hz: f64, d_m: f64, extra_db: f64) -> f64 {
    20.0 * (4.0 * std::f64::consts::PI).log10() + 20.0 * f_hz.log10() + 20.0 * d_m.log10()
        - 20.0 * C.log10()
        + extra_db
}

pub fn noise_dbm(bandwidth_hz: f64, nf_db: f64) -> f64 {
    -174.0 + 10.0 * bandwidth_hz.log10() + nf_db
}

/// Linear SNR of a hop from its budget in dB.
pub fn hop_snr(tx_dbm: f64, pl_db: f64, noise_dbm: f64) -> f64 {
    10f64.powf((tx_dbm - pl_db - noise_dbm) / 10.0)
}

pub fn rate_direct(snr: f64) -> f64 {
    (1.0 + snr).ln() / std::f64::consts::LN_2
}

pub fn snr_df(br: f64, bv: f64, rv: f64) -> f64 {
    if br < bv + rv {
        br
    } else {
        bv + rv
    }
}

pub fn rate_df(br: f64, bv: f64, rv: f64) -> f64 {
    (1.0 + snr_df(br, bv, rv)).ln() / (2.0 * std::f64::consts::LN_2)
}

pub fn comm_energy(n: f64, p_tx: f64, p_cu: f64, t: f64) -> f64 {
    n * p_tx * t + p_cu * t
}

pub fn hover_power(n_rotors: f64, thrust: f64, rho: f64, r: f64) -> f64 {
    n_rotors * thrust * thrust.sqrt() / (2.0 * rho * std::f64::consts::PI * r * r).sqrt()
}

/// Horizontal leg at `v_h`, then the vertical leg; descent is charged
/// `-P_d * dh / v_d`, which is positive for `dh < 0`.
#[allow(clippy::too_many_arguments)]
pub fn mobility_energy(
    p_hv: f64,
    thrust: f64,
    rho: f64,
    cx: f64,
    area: f64,
    v_a: f64,
    v_d: f64,
    d: f64,
    dh: f64,
    v_h: f64,
) -> f64 {
    let p_h = p_hv + 0.5 * rho * cx * area * v_h * v_h * v_h;
    let horizontal = p_h * (d / v_h);
    if dh >= 0.0 {
        horizontal + (p_hv + thrust * v_a) * (dh / v_a)
    } else {
        let p_d = (p_hv - thrust * v_d).max(0.0);
        horizontal - p_d * (dh / v_d)
    }
}

pub fn mean(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    (
        points.iter().map(|p| p.0 / n).sum(),
        points.iter().map(|p| p.1 / n).sum(),
    )
}

fn sse(points: &[(f64, f64)]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    let m = mean(points);
    points
        .iter()
        .map(|p| (p.0 - m.0).powi(2) + (p.1 - m.1).powi(2))
        .sum()
}

/// Lowest within-cluster sum of squares over every split into two non-empty
/// groups.
pub fn best_two_partition(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    assert!((2..=20).contains(&n));
    let mut best = f64::INFINITY;
    // Point 0 always sits in group A, so each split is visited once.
    for mask in 0..(1u32 << (n - 1)) {
        let mut a = vec![points[0]];
        let mut b = Vec::new();
        for (i, &p) in points.iter().enumerate().skip(1) {
            if mask & (1 << (i - 1)) != 0 {
                a.push(p);
            } else {
                b.push(p);
            }
        }
        if b.is_empty() {
            continue;
        }
        best = best.min(sse(&a) + sse(&b));
    }
    best
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}
