use std::process::ExitCode;
use std::time::Instant;

use krylov_validation::reproduction::{Reproduction, EAST_SHAPE, STABILITY, SYK_ORDERING};
use krylov_validation::{quick_suite, Outcome};

fn main() -> ExitCode {
    let start = Instant::now();
    let mut outcomes = quick_suite();
    for o in &outcomes {
        println!("{o}");
    }

    let reproduction = Reproduction::compute(|run| {
        let points = run.measure_points.map_or(String::new(), |p| format!(", {p} measure points"));
        eprintln!(
            "  {} ({} backend{points}): {} coefficients, max epsilon {:.1e}, {:.1}s",
            run.label(),
            run.backend,
            run.b.len(),
            run.max_epsilon(usize::MAX),
            run.seconds
        );
    });
    match reproduction {
        Ok(r) => {
            for o in [r.stability(), r.east_shape(), r.syk_ordering()] {
                println!("{o}");
                outcomes.push(o);
            }
        }
        Err(e) => {
            for name in [STABILITY, EAST_SHAPE, SYK_ORDERING] {
                let o = Outcome::error(name, &e);
                println!("{o}");
                outcomes.push(o);
            }
        }
    }

    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "acceptance: {} of {} criteria passed in {:.0}s",
        outcomes.len() - failed,
        outcomes.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
