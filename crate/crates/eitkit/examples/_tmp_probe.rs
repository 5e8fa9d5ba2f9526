use eitkit::experiments::*;
use eitkit::phantom::Task;

fn main() {
    let config = RunConfig::default();
    let which = std::env::args().nth(1).unwrap_or_default();
    match which.as_str() {
        "svm" => {
            for seed in [1u64, 2, 3] {
                let p = run_task(Task::Presence, 0.2, seed, &config).map(|r| r.test.accuracy).unwrap();
                let cs = run_task(Task::CountSmall, 0.2, seed, &config).map(|r| r.test.accuracy).unwrap();
                let cl = run_task(Task::CountLarge, 0.2, seed, &config).map(|r| r.test.accuracy).unwrap();
                println!("seed {seed}: presence {p:.3} | count_small {cs:.3} | count_large {cl:.3}");
            }
        }
        "aniso" => {
            for task in [Task::IsoVsAnisoBoth, Task::DiagVsOffdiag, Task::IsoVsSpatial] {
                for seed in [1u64, 2, 3] {
                    let a = run_task(task, 0.5, seed, &config).map(|r| r.test.accuracy).unwrap();
                    print!(" {a:.3}");
                }
                println!("  <- {}", task.name());
            }
        }
        "radii" => {
            for seed in [1u64, 2, 3] {
                let t = std::time::Instant::now();
                let r = run_task(Task::Radii, 0.25, seed, &config).map(|r| r.test.accuracy).unwrap();
                println!("radii seed {seed}: {r:.3} ({:?})", t.elapsed());
            }
        }
        "msweep" => {
            for seed in [1u64, 2, 3] {
                let t = std::time::Instant::now();
                let s = run_measurement_sweep(&[1, 2, 16], 0.25, seed, &config).unwrap();
                println!("msweep seed {seed}: {:?} ({:?})",
                    s.points.iter().map(|p| (p.measurement_count, (p.test_accuracy * 1000.0).round() / 1000.0)).collect::<Vec<_>>(), t.elapsed());
            }
        }
        "esweep" => {
            let t = std::time::Instant::now();
            let s = run_electrode_sweep(&[2, 4, 8, 12, 16], 0.25, 1, &config, false).unwrap();
            println!("esweep: {:?} ({:?})",
                s.points.iter().map(|p| (p.electrode_count, (p.test_accuracy * 1000.0).round() / 1000.0)).collect::<Vec<_>>(), t.elapsed());
        }
        _ => {}
    }
}
