use eitkit::experiments::*;
use eitkit::phantom::Task;

fn main() {
    let config = RunConfig::default();
    for task in [Task::IsoVsAnisoBoth, Task::IsoVsAnisoInclusion, Task::DiagVsOffdiag, Task::IsoVsSpatial] {
        for seed in [1u64, 2, 3] {
            let a = run_task(task, 0.5, seed, &config).map(|r| r.test.accuracy).unwrap();
            print!(" {a:.3}");
        }
        println!("  <- {}", task.name());
    }
}
