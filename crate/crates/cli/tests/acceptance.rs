//! Replays every acceptance criterion and prints one PASS/FAIL line each.
//! Runs without the test harness so the lines are never captured.

use std::time::Instant;

use fracsys_cli::repro;

fn main() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for id in 1..=10 {
        let v = repro::criterion(id);
        println!("{}", v.line());
        for d in &v.details {
            println!("    {d}");
        }
        if !v.pass {
            failed.push(id);
        }
        lines.push(v.line());
    }
    println!("\nacceptance summary ({:.0}s):", start.elapsed().as_secs_f64());
    for l in &lines {
        println!("{l}");
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
