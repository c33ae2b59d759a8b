use dyson_edge_core::mdbm::*;
use dyson_edge_core::model::SimConfig;
use dyson_edge_core::rng::RngStream;
use std::time::Instant;

fn main() {
    let n = 40;
    let cfg = SimConfig { beta: 4.0, t0: 0.5, n, k: 2, dt: 2e-4, horizon: 0.5, n_samples: 1, seed: 0 };
    let mut rng = RngStream::new(300, 0);
    let st = warm_start(&cfg, &mut rng).unwrap();
    // time single macro steps from a fresh state each time (usually 1 substep)
    let t = Instant::now();
    let mut cur = st.clone();
    let reps = 2000;
    for _ in 0..reps {
        cur = step_mdbm(&cur, 2e-4, &mut rng).unwrap();
    }
    println!("avg macro step: {:?}", t.elapsed() / reps);
}
