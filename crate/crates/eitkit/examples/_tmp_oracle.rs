use eitkit::forward::*;
use eitkit::mesh::*;
use eitkit::phantom::*;

fn worst_err(h: f64, seed: u64) -> f64 {
    let gamma = 1.45; let r = 0.28;
    let mesh = generate_disk_mesh(r, h, seed).unwrap();
    let layout = electrode_layout(16).unwrap();
    let spec = ConductivitySpec::homogeneous(r, gamma);
    let dn = dn_matrix(&mesh, &spec, &layout, &trig_patterns(16)).unwrap();
    let mut worst: f64 = 0.0;
    for k in 1..=14usize {
        let n = if k % 2 == 1 { (k + 1) / 2 } else { k / 2 } as f64;
        let x = n * std::f64::consts::PI / 16.0;
        let expected = gamma * n / r * (8.0 / std::f64::consts::PI) * (x.sin() / x);
        worst = worst.max((dn.get(k - 1, k - 1) - expected).abs() / expected);
    }
    worst
}

fn main() {
    for seed in 1..=5u64 {
        let w1 = worst_err(DEFAULT_TARGET_MAX_EDGE, seed);
        let w2 = worst_err(DEFAULT_TARGET_MAX_EDGE / 2.0, seed);
        println!("seed {seed}: default {:.4}, half {:.4}, ratio {:.2}", w1, w2, w1 / w2);
    }
}
