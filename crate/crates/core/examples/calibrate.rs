//! Calibration run for the convergence thresholds frozen in the acceptance
//! suite. Prints the quadrature-oracle value of `c_n(exp(τ_N))` next to the
//! truncated-series value for each window.
//!
//! cargo run --release --example calibrate

use braid_tau::braidexp::{
    auto_terms, default_probes, exp_coefficient_oracle, tau, verify_exp_tau, Terms,
};
use braid_tau::conv::power;
use braid_tau::fourier::{cn_theta_power_closed, QuadratureSpec};

fn main() {
    let windows = [256usize, 1024, 4096];
    let probes = default_probes();
    let report = verify_exp_tau(&windows, &Terms::Auto, &probes, 2.0).expect("report");
    println!("N,M,err_c1,err_off,l2_err,discarded_mass");
    for r in &report.rows {
        println!(
            "{},{},{:e},{:e},{:e},{:e}",
            r.window, r.terms, r.err_c1, r.err_off, r.l2_err, r.discarded_mass
        );
    }

    let spec = QuadratureSpec {
        tolerance: 1e-9,
        ..Default::default()
    };
    println!("\nN,c1_oracle_re,c1_oracle_im,|c1_oracle-1|,|series-oracle|");
    for &n in &windows {
        let t = tau(n);
        let oracle = exp_coefficient_oracle(&t, 1, &spec).expect("oracle converges");
        let series = braid_tau::braidexp::exp_seq(&t, auto_terms(t.l1_norm()), 2 * n)
            .expect("series")
            .seq
            .get(1);
        println!(
            "{n},{:.15e},{:.3e},{:e},{:e}",
            oracle.re,
            oracle.im,
            (oracle - 1.0).norm(),
            (series - oracle).norm()
        );
    }

    println!("\nc_n(τ_N^m) error against the closed form, N = 256 / 1024 / 4096");
    for m in 2..=6u32 {
        for k in -8..=8i64 {
            let errs: Vec<f64> = windows
                .iter()
                .map(|&n| {
                    let p = power(&tau(n), m, 2 * n).expect("power");
                    (p.seq.get(k) - cn_theta_power_closed(k, m)).norm()
                })
                .collect();
            let flag = if errs[1] < errs[0] && errs[2] < errs[1] { "" } else { "  <-- not strictly decreasing" };
            println!("m={m} n={k:>3}: {:.3e} {:.3e} {:.3e}{flag}", errs[0], errs[1], errs[2]);
        }
    }
}
