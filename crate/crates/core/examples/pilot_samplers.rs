use dyson_edge_core::ensemble::*;
use dyson_edge_core::model::GammaLaw;
use dyson_edge_core::stats::EmpiricalDistribution;
use dyson_edge_core::rng::RngStream;
use rayon::prelude::*;
use std::time::Instant;

fn piece(name: &str) -> Instant { eprintln!(">>> {name}"); Instant::now() }

fn main() {
    let which: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);

    if which == 0 || which == 1 {
        let t = piece("1: tridiag(50) vs dense GUE(50), 5000 each");
        let a: Vec<f64> = (0..5000u64).into_par_iter().map(|i| {
            let mut rng = RngStream::new(100, i);
            sample_beta_hermite(50, 2.0, 50.0, &mut rng).unwrap().top()
        }).collect();
        eprintln!("  tridiag half done {:?}", t.elapsed());
        let b: Vec<f64> = (0..5000u64).into_par_iter().map(|i| {
            let mut rng = RngStream::new(101, i);
            DenseMatrixSample::draw(50, 2.0, &mut rng).unwrap().corner_eigenvalues(50).unwrap()[49]
        }).collect();
        let ks = EmpiricalDistribution::new(a).unwrap().ks_two_sample(&EmpiricalDistribution::new(b).unwrap());
        println!("1. tridiag-vs-GUE top eig KS = {ks:.4}  (<= 0.04)  [{:?}]", t.elapsed());
    }

    if which == 0 || which == 2 {
        let t = piece("2: corners beta=2 N=150 spacings, 4000 draws");
        let n = 150usize;
        let draws: Vec<Vec<f64>> = (0..4000u64).into_par_iter().map(|i| {
            let mut rng = RngStream::new(102, i);
            let rows = sample_corners_top_levels(n, 2.0, n as f64, 4, &mut rng).unwrap();
            edge_spacings_of_rows(&rows, 3).unwrap()
        }).collect();
        let law = GammaLaw::limiting(2.0, 1.0).unwrap();
        for j in 0..3 {
            let xs: Vec<f64> = draws.iter().map(|r| r[j]).collect();
            let mean: f64 = xs.iter().sum::<f64>() / xs.len() as f64;
            let ks = EmpiricalDistribution::new(xs).unwrap().ks_distance(|x| law.cdf(x));
            println!("2. corners b=2 N=150 r{} KS vs Exp(1) = {ks:.4} mean = {mean:.4}", j+1);
        }
        println!("   [{:?}]", t.elapsed());
    }

    if which == 0 || which == 3 {
        let t = piece("3: dense GSE N=100 spacings, 2500 draws");
        let draws: Vec<Vec<f64>> = (0..2500u64).into_par_iter().map(|i| {
            let mut rng = RngStream::new(103, i);
            let rows = sample_dense_corner_top_levels(100, 4.0, 3, &mut rng).unwrap();
            edge_spacings_of_rows(&rows, 2).unwrap()
        }).collect();
        let law = GammaLaw::limiting(4.0, 0.5).unwrap();
        for j in 0..2 {
            let xs: Vec<f64> = draws.iter().map(|r| r[j]).collect();
            let ks = EmpiricalDistribution::new(xs).unwrap().ks_distance(|x| law.cdf(x));
            println!("3. dense GSE N=100 r{} KS vs Gamma(2,2) = {ks:.4}  (<= 0.06)", j+1);
        }
        println!("   [{:?}]", t.elapsed());
    }

    if which == 0 || which == 4 {
        let t = piece("4: dense GOE N=100 spacings, 2500 draws");
        let draws: Vec<Vec<f64>> = (0..2500u64).into_par_iter().map(|i| {
            let mut rng = RngStream::new(104, i);
            let rows = sample_dense_corner_top_levels(100, 1.0, 3, &mut rng).unwrap();
            edge_spacings_of_rows(&rows, 2).unwrap()
        }).collect();
        let law = GammaLaw::limiting(1.0, 2.0).unwrap();
        for j in 0..2 {
            let xs: Vec<f64> = draws.iter().map(|r| r[j]).collect();
            let ks = EmpiricalDistribution::new(xs).unwrap().ks_distance(|x| law.cdf(x));
            println!("4. dense GOE N=100 r{} KS vs Gamma(.5,.5) = {ks:.4}  (<= 0.06)", j+1);
        }
        println!("   [{:?}]", t.elapsed());
    }

    if which == 0 || which == 5 {
        let t = piece("5: corner-level vs dense corner, N=8 beta=1");
        let a: Vec<f64> = (0..5000u64).into_par_iter().map(|i| {
            let mut rng = RngStream::new(105, i);
            let top = sample_beta_hermite(8, 1.0, 16.0, &mut rng).unwrap();
            sample_corner_level(&top, 1.0, &mut rng).unwrap().top()
        }).collect();
        let b: Vec<f64> = (0..5000u64).into_par_iter().map(|i| {
            let mut rng = RngStream::new(106, i);
            let s = DenseMatrixSample::draw(8, 1.0, &mut rng).unwrap();
            *s.corner_eigenvalues(7).unwrap().last().unwrap()
        }).collect();
        let ks = EmpiricalDistribution::new(a).unwrap().ks_two_sample(&EmpiricalDistribution::new(b).unwrap());
        println!("5. corner-level-vs-dense GOE n=8 KS = {ks:.4}  (<= 0.04)  [{:?}]", t.elapsed());
    }
}
