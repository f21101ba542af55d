//! Acceptance suite: runs every numbered criterion, prints one PASS/FAIL line
//! per criterion, re-asserts the headline metrics, and exits non-zero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use cauchy_fdiv::suites::{run_criterion, CheckReport};

/// Independent re-check of each report's headline numbers against the
/// published thresholds, so a bookkeeping slip inside a check cannot turn a
/// failure into a pass.
fn recheck(r: &CheckReport) -> Result<(), String> {
    let m = |name: &str| r.metric(name).ok_or_else(|| format!("metric '{name}' missing"));
    let need = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
    match r.id {
        1 => {
            need(m("max_rel_err")? <= 1e-7, "closed vs quadrature above 1e-7")?;
            need(m("cases")? >= 1300.0, "fewer than 13 x 100 cases")?;
            need(m("seconds")? < 60.0, "runtime above 60 s")
        }
        2 => need(m("max_rel_gap")? <= 1e-7, "forward/reverse gap above 1e-7"),
        3 => need(m("max_rel_err_chi")? <= 1e-10 && m("max_rel_err_kl")? <= 1e-9, "invariance error too large"),
        4 => need(m("j6_max_rel_err")? <= 1e-7 && m("j6_leading")? == 7.875, "J_6 mismatch"),
        5 => need((0.99..=1.01).contains(&m("j6_constant")?) && m("chi6_constant")?.abs() <= 1e-2, "regression constants"),
        6 => {
            need(m("kl_series_abs_err")? <= 1e-6, "KL series error above 1e-6")?;
            need(m("kl_series_terms")? <= 39.0, "more than 40 orders used")
        }
        7 => {
            need((m("integral_shifted")? - 57.953).abs() <= 0.05, "shifted integral")?;
            need((m("integral_centered")? - 30.1523).abs() <= 0.05, "centred integral")?;
            need(m("kl_forward")? - m("kl_reverse")? > 1.0, "asymmetry gap")?;
            need(m("seconds")? < 300.0, "runtime above 5 min")
        }
        8 => {
            need(m("max_abs_err_k")? <= 1e-10 && m("max_abs_err_deficit")? <= 1e-10, "elliptic accuracy")?;
            let want = [0.5, 1.0 / 16.0, 1.0 / 32.0, 41.0 / 2048.0];
            for (i, w) in want.iter().enumerate() {
                need((m(&format!("deficit_coef_{}", i + 1))? - w).abs() <= 1e-4, "deficit coefficient")?;
            }
            Ok(())
        }
        9 => {
            need(m("sqrt_kl_violations")? == 0.0 && m("sqrt_bhat_violations")? == 0.0, "triangle violations")?;
            for a in ["0.55", "0.6", "0.75", "1"] {
                need(m(&format!("witness_excess_alpha_{a}"))? > 0.0, "missing witness")?;
            }
            Ok(())
        }
        10 => need(m("max_quadratic_form")? <= 1e-9 && m("hellinger_kernel_min_eig")? >= -1e-9, "kernel signs"),
        11 => need(m("max_abs_dev_a_star")? <= 1e-6 && m("max_abs_err_value")? <= 1e-8, "Chernoff optimum"),
        12 => need(m("kinds")? >= 13.0, "too few kinds"),
        13 => {
            for tag in ["kl", "bhat"] {
                let d: Vec<f64> = (1..=4).map(|n| m(&format!("{tag}_defect_1e{n}"))).collect::<Result<_, _>>()?;
                need(d.windows(2).all(|w| w[1] > w[0]), "defect not increasing")?;
            }
            Ok(())
        }
        14 => {
            need(m("max_abs_err_native")? <= 1e-6, "native quadrature")?;
            need(m("max_boole_residual")? <= 1e-10, "Boole residual")?;
            need((m("boole_kl_before")? - m("boole_kl_after")?).abs() > 1e-3, "Boole gap")
        }
        15 => need(m("max_abs_err")? <= 1e-8, "angular integral"),
        16 => {
            need(m("max_abs_err_cauchy")? <= 1e-9, "Cauchy entropy")?;
            need(m("max_abs_err_mixture")? <= 1e-7, "mixture entropy")?;
            need(m("max_abs_err_mixture_family_kl")? <= 1e-6, "mixture-family KL")
        }
        _ => Err(format!("unexpected criterion id {}", r.id)),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut failed = 0;
    for id in 1..=16 {
        let t = Instant::now();
        let mut report = run_criterion(id).expect("criterion ids 1..=16 exist");
        if report.passed {
            if let Err(why) = recheck(&report) {
                report.passed = false;
                report.failures.push(format!("re-check: {why}"));
            }
        }
        println!("{} [{:.2} s]", report.line(), t.elapsed().as_secs_f64());
        if !report.passed {
            failed += 1;
            for f in &report.failures {
                println!("    {f}");
            }
        }
    }
    println!("acceptance: {} of 16 criteria passed in {:.1} s", 16 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
