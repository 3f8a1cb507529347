use std::collections::BTreeMap;

use maritime_relay::report::{
    emit_results, read_cdf_rows, read_energy_rows, read_slot_rows, read_summary, run_study, Metric,
};
use maritime_relay::{Architecture, FleetMode, ScenarioConfig};

fn small_multi() -> ScenarioConfig {
    let mut cfg = ScenarioConfig::defaults(FleetMode::Multi);
    cfg.n_victims = 6;
    cfg.n_slots = 7;
    cfg
}

#[test]
fn headers_are_fixed() {
    let dir = tempfile::tempdir().unwrap();
    let study = run_study(&small_multi(), &Architecture::ALL, 2).unwrap();
    let files = emit_results(&study, dir.path()).unwrap();
    let first_line = |p: &std::path::Path| {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .to_string()
    };
    assert_eq!(
        first_line(&files.slots),
        "run,slot,arch,ship_id,rate_bpshz,rx_dbm,los,throughput_bps"
    );
    assert_eq!(
        first_line(&files.energy),
        "run,slot,arch,comm_J,hover_J,mobility_J,total_J,cumulative_J"
    );
    assert_eq!(first_line(&files.cdf), "arch,rate,quantile");
    let slots = std::fs::read_to_string(&files.slots).unwrap();
    assert_eq!(slots.lines().count(), 1 + 4 * 2 * 7 * 6);
    assert!(slots
        .lines()
        .skip(1)
        .all(|l| l.contains(",LoS,") || l.contains(",NLoS,")));
}

// Rebuild every summary number from the CSV rows alone and demand exact
// equality with summary.json.
#[test]
fn summary_recomputes_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_multi();
    let runs = 3;
    let study = run_study(&cfg, &Architecture::ALL, runs).unwrap();
    let files = emit_results(&study, dir.path()).unwrap();

    let summary = read_summary(&files.summary).unwrap();
    let slots = read_slot_rows(&files.slots).unwrap();
    let energy = read_energy_rows(&files.energy).unwrap();
    let cdf = read_cdf_rows(&files.cdf).unwrap();
    assert_eq!(summary.config, cfg);
    assert_eq!(summary.runs, runs);

    for arch in Architecture::ALL {
        let s = summary.summary(arch).unwrap();
        let rows: Vec<_> = slots.iter().filter(|r| r.arch == arch).collect();

        let mean = rows.iter().map(|r| r.rate_bpshz).sum::<f64>() / rows.len() as f64;
        assert_eq!(s.mean_rate_bpshz, mean, "{arch}");
        assert_eq!(s.mean_throughput_bps, mean * cfg.channel.bandwidth_hz);
        for r in &rows {
            assert_eq!(r.throughput_bps, r.rate_bpshz * cfg.channel.bandwidth_hz);
        }

        // Ship average per (run, slot), then the mean over runs per slot.
        let mut per_slot: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
        for r in &rows {
            per_slot
                .entry((r.slot, r.run))
                .or_default()
                .push(r.rate_bpshz);
        }
        let mut slot_means = vec![0.0; cfg.n_slots];
        for ((slot, _), rates) in &per_slot {
            slot_means[*slot] += rates.iter().sum::<f64>() / rates.len() as f64;
        }
        for m in &mut slot_means {
            *m /= runs as f64;
        }
        assert_eq!(s.mean_slot_rate_bpshz, slot_means, "{arch}");

        let e_rows: Vec<_> = energy.iter().filter(|r| r.arch == arch).collect();
        let mut cum_means = vec![0.0; cfg.n_slots];
        let mut finals = 0.0;
        for r in &e_rows {
            assert_eq!(r.total_j, r.comm_j + r.hover_j + r.mobility_j);
            cum_means[r.slot] += r.cumulative_j;
            if r.slot == cfg.n_slots - 1 {
                finals += r.cumulative_j;
            }
        }
        for m in &mut cum_means {
            *m /= runs as f64;
        }
        assert_eq!(s.mean_cumulative_energy_j, cum_means, "{arch}");
        assert_eq!(s.total_energy_j, finals / runs as f64, "{arch}");

        let mut pooled: Vec<f64> = rows.iter().map(|r| r.rate_bpshz).collect();
        pooled.sort_by(f64::total_cmp);
        let steps: Vec<(f64, f64)> = cdf
            .iter()
            .filter(|r| r.arch == arch)
            .map(|r| (r.rate, r.quantile))
            .collect();
        for (v, f) in &steps {
            let at_or_below = pooled.iter().filter(|&&x| x <= *v).count();
            assert_eq!(*f, at_or_below as f64 / pooled.len() as f64);
        }
        assert_eq!(steps.last().unwrap().1, 1.0);
    }

    for c in &summary.comparisons {
        let value = |a: Architecture| {
            let s = summary.summary(a).unwrap();
            match c.metric {
                Metric::Rate => s.mean_rate_bpshz,
                Metric::Energy => s.total_energy_j,
            }
        };
        let (a, b) = (value(c.arch), value(c.baseline));
        assert_eq!(c.percent, 100.0 * (a - b) / b);
    }
    // Energy against NR has a zero baseline and is left out.
    assert!(!summary
        .comparisons
        .iter()
        .any(|c| c.metric == Metric::Energy && c.baseline == Architecture::Nr));
    assert_eq!(summary.comparisons.len(), 12 + 9);
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let cfg = small_multi();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    emit_results(&run_study(&cfg, &Architecture::ALL, 2).unwrap(), a.path()).unwrap();
    emit_results(&run_study(&cfg, &Architecture::ALL, 2).unwrap(), b.path()).unwrap();
    for name in ["slots.csv", "energy.csv", "summary.json", "cdf.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}
