use dyson_edge_core::mdbm::*;
use dyson_edge_core::model::SimConfig;
use dyson_edge_core::rng::RngStream;

fn min_cross_gap(levels: &[Vec<f64>]) -> (f64, usize, usize) {
    let mut best = (f64::INFINITY, 0, 0);
    for k in 0..levels.len() - 1 {
        let upper = &levels[k];
        let lower = &levels[k + 1];
        for i in 0..upper.len() {
            let g1 = upper[i] - lower[i];
            let g2 = lower[i + 1] - upper[i];
            if g1 < best.0 { best = (g1, k, i); }
            if g2 < best.0 { best = (g2, k, i); }
        }
    }
    best
}

fn main() {
    let mut rng = RngStream::new(23, 0);
    let cfg = SimConfig { beta: 4.0, t0: 0.5, n: 15, k: 3, dt: 1e-3, horizon: 1.0, n_samples: 1, seed: 0 };
    let st = warm_start(&cfg, &mut rng).unwrap();
    let g = min_cross_gap(st.array().levels());
    eprintln!("warm start min cross gap: {:?}", g);
    let mut cur = st;
    for i in 0..25 {
        match step_mdbm(&cur, 1e-3, &mut rng) {
            Ok(n) => cur = n,
            Err(e) => { eprintln!("step {i} err: {e}"); break; }
        }
        let g = min_cross_gap(cur.array().levels());
        eprintln!("step {i:3}: min gap {:.3e} at level-pair {} idx {}", g.0, g.1, g.2);
    }
}
