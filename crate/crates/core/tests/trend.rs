//! Setup and iteration times of PSLR-GMRES grow with the order of example1.
//! Only the ordering is checked; each time is the minimum over repeats to
//! damp scheduler noise.

use pslr::bench::{run_bench, BenchConfig, Method, Problem};

const REPEATS: usize = 15;

fn min_times(order: usize) -> (f64, f64) {
    let cfg = BenchConfig::new(Problem::Example1 { order }, Method::PslrGmres);
    let mut best = (f64::INFINITY, f64::INFINITY);
    for _ in 0..REPEATS {
        let row = run_bench(&cfg).unwrap();
        assert!(row.converged(), "order {order}: {}", row.n_iter());
        best.0 = best.0.min(row.report.time_precond);
        best.1 = best.1.min(row.report.time_iterate);
    }
    best
}

#[test]
fn times_increase_with_order() {
    let times: Vec<(usize, (f64, f64))> = [128, 256, 512].into_iter().map(|n| (n, min_times(n))).collect();
    for w in times.windows(2) {
        let ((n0, (p0, i0)), (n1, (p1, i1))) = (w[0], w[1]);
        assert!(p1 > p0, "p-t: order {n0} {p0:.3e} s, order {n1} {p1:.3e} s");
        assert!(i1 > i0, "i-t: order {n0} {i0:.3e} s, order {n1} {i1:.3e} s");
    }
}
