use ntrulab::analysis::*;
use std::time::Instant;

fn main() {
    for (n, q, y) in REFERENCE_EXACT_TUPLES {
        let t0 = Instant::now();
        let report = check_params(n, q, y, None, 7);
        println!(
            "({n}, {q}, {y}): lambda1 = {:?}, ok = {:?}, {:.2}s",
            report.lambda1,
            report.lambda1_ok,
            t0.elapsed().as_secs_f64()
        );
    }
}
