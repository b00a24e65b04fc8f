use quadpot::ratcalc::RationalFn;
use quadpot::verify;
use quadpot::QuadDomain;
use std::process::Command;

fn cli_neumann(dom: &QuadDomain, psi: &RationalFn) -> Option<i32> {
    let dir = tempfile::tempdir().ok()?;
    let dpath = dir.path().join("domain.json");
    let tpath = dir.path().join("trace.json");
    std::fs::write(&dpath, dom.to_json().to_string()).ok()?;
    std::fs::write(&tpath, quadpot::solvers::trace_to_json(psi).to_string()).ok()?;
    let status = Command::new(env!("CARGO_BIN_EXE_quadpot"))
        .args(["solve-neumann", "--domain"])
        .arg(&dpath)
        .arg("--data")
        .arg(&tpath)
        .output()
        .ok()?;
    status.status.code()
}

fn main() {
    let results = verify::run_all(Some(&cli_neumann));
    let mut failed = 0;
    for r in &results {
        println!("{r}");
        if !r.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
