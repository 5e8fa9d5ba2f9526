use eitkit::experiments::*;
use eitkit::phantom::Task;

fn main() {
    for c in [1.2e-8f64] {
        let config = RunConfig { svm_c: c, ..RunConfig::default() };
        for seed in [1u64, 2, 3] {
            let p = run_task(Task::Presence, 0.2, seed, &config).map(|r| r.test.accuracy).unwrap();
            let cs = run_task(Task::CountSmall, 0.2, seed, &config).map(|r| r.test.accuracy).unwrap();
            let cl = run_task(Task::CountLarge, 0.2, seed, &config).map(|r| r.test.accuracy).unwrap();
            println!("C={c:.1e} seed {seed}: presence {p:.3} | count_small {cs:.3} | count_large {cl:.3}");
        }
    }
}
