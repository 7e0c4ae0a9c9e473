//! Prints PASS/FAIL for every acceptance criterion. Failures are reported, not raised: the
//! process exits 0 once all criteria have been evaluated.

use std::process::Command;
use std::time::Instant;

use multibump_cli::context::{Context, CACHE_ENV};
use multibump_cli::verify;
use multibump_core::config::ModelConfig;

fn main() {
    let work = tempfile::tempdir().expect("temp dir");
    let cache = work.path().join("cache");
    let ctx = Context::new(ModelConfig::default().resolved(), &cache);
    let mut verdicts = vec![
        verify::criterion_1(&ctx),
        verify::criterion_2(&ctx),
        verify::criterion_3(&ctx),
        verify::criterion_4(&ctx),
        verify::criterion_5(&ctx),
        verify::criterion_6(&ctx),
        verify::criterion_7(&ctx),
    ];
    for v in &verdicts {
        v.print();
    }

    // The quick suite end to end through the binary, reusing the bundles solved above.
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_multibump"))
        .args(["verify-all", "--quick", "--out"])
        .arg(work.path().join("quick"))
        .env(CACHE_ENV, &cache)
        .output()
        .expect("run multibump");
    let seconds = start.elapsed().as_secs_f64();
    let code = status.status.code();
    let pass = code == Some(0) && seconds <= 180.0;
    let v8 = verify::Verdict {
        id: 8,
        title: "verify-all --quick",
        pass,
        seconds,
        budget_seconds: 180.0,
        lines: vec![
            format!("[{}] exit code {code:?} == 0", if code == Some(0) { "ok" } else { "FAIL" }),
            format!("[{}] runtime {seconds:.1} s <= 180 s", if seconds <= 180.0 { "ok" } else { "FAIL" }),
        ],
    };
    v8.print();
    verdicts.push(v8);

    println!();
    for v in &verdicts {
        println!("{} criterion {}: {}", if v.pass { "PASS" } else { "FAIL" }, v.id, v.title);
    }
    println!("{}/{} criteria pass", verdicts.iter().filter(|v| v.pass).count(), verdicts.len());
}
