use walkforge::extract::{sample_perfect_transfer, CouplingMap, SamplerConfig};

fn main() {
    for seed in [0u64, 7, 42] {
        let cfg = SamplerConfig::new(4, 100_000, seed).unwrap();
        let map = CouplingMap::linear(4);
        let t0 = std::time::Instant::now();
        let found = sample_perfect_transfer(&cfg, &map).unwrap();
        let tries: Vec<u64> = found.iter().map(|f| f.0).collect();
        println!(
            "seed {seed}: {} hits in 100k tries ({:?}); tries {:?}",
            found.len(),
            t0.elapsed(),
            tries
        );
    }
}
