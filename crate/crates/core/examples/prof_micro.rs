use dyson_edge_core::rng::RngStream;
use std::time::Instant;
use std::hint::black_box;

fn main() {
    let mut rng = RngStream::new(1, 0);
    // inv_sum-like work: total divisions in one N=40 substep approx 2*40^3/3 = 43k
    let ys: Vec<f64> = (0..40).map(|i| i as f64 * 2.0).collect();
    let x = 81.3;
    let t = Instant::now();
    let mut total = 0.0;
    for _ in 0..1100 {
        let mut acc = [0.0f64; 4];
        let mut chunks = ys.chunks_exact(4);
        for c in &mut chunks {
            acc[0] += 1.0 / (x - c[0]);
            acc[1] += 1.0 / (x - c[1]);
            acc[2] += 1.0 / (x - c[2]);
            acc[3] += 1.0 / (x - c[3]);
        }
        for y in chunks.remainder() { acc[0] += 1.0/(x - y); }
        total += (acc[0]+acc[1])+(acc[2]+acc[3]);
    }
    black_box(total);
    println!("44k pipelined divisions: {:?}", t.elapsed());

    let t = Instant::now();
    let mut s = 0.0;
    for _ in 0..820 { s += rng.normal(); }
    black_box(s);
    println!("820 normal draws: {:?}", t.elapsed());

    let t = Instant::now();
    let mut v: Vec<Vec<f64>> = Vec::new();
    for _ in 0..40 { v.push(ys.clone()); }
    black_box(&v);
    println!("40 vec clones: {:?}", t.elapsed());
}
