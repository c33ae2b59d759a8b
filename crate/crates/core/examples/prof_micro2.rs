use std::time::Instant;
use std::hint::black_box;

#[inline(never)]
fn inv_sum(x: f64, ys: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let mut chunks = ys.chunks_exact(4);
    for c in &mut chunks {
        acc[0] += 1.0 / (x - c[0]);
        acc[1] += 1.0 / (x - c[1]);
        acc[2] += 1.0 / (x - c[2]);
        acc[3] += 1.0 / (x - c[3]);
    }
    for y in chunks.remainder() { acc[0] += 1.0/(x - y); }
    (acc[0]+acc[1])+(acc[2]+acc[3])
}

fn main() {
    let ys: Vec<f64> = (0..40).map(|i| i as f64 * 2.0).collect();
    let t = Instant::now();
    let mut total = 0.0;
    let reps = 100_000;
    for r in 0..reps {
        total += inv_sum(black_box(81.3 + r as f64 * 1e-9), black_box(&ys));
    }
    black_box(total);
    let per_div = t.elapsed().as_nanos() as f64 / (reps as f64 * 40.0);
    println!("inv_sum(40): {:.2} ns/division -> N=40 substep divisions ~ {:.0} us", per_div, per_div * 43_000.0 / 1000.0);
}
