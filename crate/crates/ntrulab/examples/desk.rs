use ntrulab::attack::AttackConfig;
use ntrulab::harness::{run_experiment, ExperimentSpec};
use ntrulab::ntru::NtruParams;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let r_lo: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let r_hi: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(4);
    let trials: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(5);
    let cache = std::path::PathBuf::from("/tmp/desk-cache");
    for r in r_lo..=r_hi {
        let spec = ExperimentSpec {
            params: NtruParams::new(61, 3, 256, 18).unwrap(),
            attack: AttackConfig::new(2.3, r),
            trials,
            seed: 7,
        };
        let t0 = Instant::now();
        let report = run_experiment(&spec, Some(&cache)).unwrap();
        println!(
            "R={r}: rate {}/{} (lll {:.1}s, cache {}, total {:.1}s, calls: {:?})",
            report.successes,
            trials,
            report.lll_seconds,
            report.basis_cache_hit,
            t0.elapsed().as_secs_f64(),
            report.trials.iter().map(|t| t.oracle_calls_used).collect::<Vec<_>>()
        );
    }
}
