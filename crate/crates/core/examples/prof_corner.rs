use dyson_edge_core::ensemble::*;
use dyson_edge_core::rng::RngStream;
use std::time::Instant;

fn main() {
    let mut rng = RngStream::new(102, 0);
    let n = 150;
    let t0 = Instant::now();
    let top = sample_beta_hermite(n, 2.0, n as f64, &mut rng).unwrap();
    eprintln!("tridiag draw: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let lower = sample_corner_level(&top, 2.0, &mut rng).unwrap();
    eprintln!("one corner level: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let _l2 = sample_corner_level(&lower, 2.0, &mut rng).unwrap();
    eprintln!("next corner level: {:?}", t0.elapsed());
    let t0 = Instant::now();
    for i in 1..50u64 {
        let mut rng = RngStream::new(102, i);
        let rows = sample_corners_top_levels(n, 2.0, n as f64, 4, &mut rng).unwrap();
        std::hint::black_box(rows);
    }
    eprintln!("49 full top-level draws: {:?} ({:?}/draw)", t0.elapsed(), t0.elapsed()/49);
}
