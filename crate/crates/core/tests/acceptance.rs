//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use qed1d::energy::{
    breakdown, dc_correction, dc_direct, total_vp_correction, xb_correction, xb_direct,
    xc_correction, xc_direct,
};
use qed1d::green::{uehling_density, vacuum_numbers, vp_density_green};
use qed1d::model::{
    bound_spinor, boundary_matrix, nonrel_expansion, phase_shifts, scattering_state, Spinor,
    StateLabel,
};
use qed1d::vacuum::{
    linspace, vacuum_charge_numeric, vacuum_charge_summary, vp_density, vp_density_commutator,
};
use qed1d::{ModelParams, QuadratureSpec};
use std::process::ExitCode;
use std::time::{Duration, Instant};

const C: f64 = 137.036;

type Outcome = Result<String, String>;

fn params(z: f64, c: f64) -> ModelParams {
    ModelParams::new(z, c, 1.0).expect("valid parameters")
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn vacuum_charge() -> Outcome {
    let mut worst = 0.0_f64;
    for z in [1.0, 10.0, 50.0, 120.0] {
        let p = params(z, C);
        let numeric = vacuum_charge_numeric(&p.derive(), &spec()).map_err(|e| e.to_string())?;
        worst = worst.max((numeric.value - vacuum_charge_summary(&p).integral).abs());
    }
    check(
        worst <= 1e-6,
        format!("max |numeric - closed form| = {worst:.3e} (tol 1e-6)"),
    )
}

fn route_equivalence() -> Outcome {
    let mut worst = [0.0_f64; 3];
    for z in [1.0, 50.0, 120.0] {
        let d = params(z, C).derive();
        for x in linspace(-5.0 / C, 5.0 / C, 101) {
            let s = vp_density(&d, x, &spec()).map_err(|e| e.to_string())?.value;
            let c = vp_density_commutator(&d, x, &spec())
                .map_err(|e| e.to_string())?
                .value;
            let g = vp_density_green(&d, x, &spec())
                .map_err(|e| e.to_string())?
                .value;
            worst[0] = worst[0].max((s - c).abs());
            worst[1] = worst[1].max((s - g).abs());
            worst[2] = worst[2].max((c - g).abs());
        }
    }
    let max = worst.iter().cloned().fold(0.0, f64::max);
    check(
        max <= 1e-8,
        format!(
            "spectral-commutator {:.2e}, spectral-green {:.2e}, commutator-green {:.2e} (tol 1e-8)",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn closed_form_anchors() -> Outcome {
    let mut worst = 0.0_f64;
    for z in [1.0, 50.0, 120.0] {
        let p = params(z, C);
        let d = p.derive();
        let n0 = vp_density(&d, 0.0, &spec())
            .map_err(|e| e.to_string())?
            .value;
        let u0 = uehling_density(&p, 0.0, &spec())
            .map_err(|e| e.to_string())?
            .value;
        worst = worst.max((n0 + d.kappa / 2.0).abs() / (d.kappa / 2.0));
        worst = worst.max((u0 + z / 2.0).abs() / (z / 2.0));
    }
    check(
        worst <= 1e-10,
        format!("max relative deviation {worst:.2e} (tol 1e-10)"),
    )
}

fn vacuum_neutrality() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for z in [1.0, 10.0] {
        let p = params(z, C);
        let n = vacuum_numbers(&p, &spec()).map_err(|e| e.to_string())?;
        let q = vacuum_charge_numeric(&p.derive(), &spec()).map_err(|e| e.to_string())?;
        let neutral = n.n_net.abs() <= 1e-6;
        let nonzero = q.value.abs() > 10.0 * q.error_estimate.max(1e-12);
        ok &= neutral && nonzero;
        parts.push(format!(
            "Z={z}: |N_e - N_p| = {:.3e} (tol 1e-6), integral of n_vp = {:.4e}",
            n.n_net.abs(),
            q.value
        ));
    }
    check(ok, parts.join("; "))
}

fn energy_consistency() -> Outcome {
    let p = params(50.0, C);
    let s = spec();
    let err = |e: qed1d::Error| e.to_string();
    let b = breakdown(&p, &s).map_err(err)?;
    let total = total_vp_correction(&p, &s).map_err(err)?.value;
    let sum_rel = (total - b.sum_of_parts()).abs() / total.abs();
    let pairs = [
        (
            "dc",
            dc_correction(&p, &s).map_err(err)?.value,
            dc_direct(&p, &s).map_err(err)?.value,
        ),
        (
            "xc",
            xc_correction(&p, &s).map_err(err)?.value,
            xc_direct(&p, &s).map_err(err)?.value,
        ),
        (
            "xb",
            xb_correction(&p, &s).map_err(err)?.value,
            xb_direct(&p, &s).map_err(err)?.value,
        ),
    ];
    let mut ok = sum_rel <= 1e-9 && b.db == 0.0;
    let mut detail = format!("compact vs sum {sum_rel:.2e}, db = {}", b.db);
    for (name, reduced, direct) in pairs {
        let rel = (reduced - direct).abs() / direct.abs();
        ok &= rel <= 1e-9;
        detail.push_str(&format!(", {name} reduced vs 2D {rel:.2e}"));
    }
    check(ok, detail + " (tol 1e-9)")
}

fn sign_pattern() -> Outcome {
    let mut points: Vec<(f64, f64)> = linspace(1.0, 120.0, 25)
        .into_iter()
        .map(|z| (z, C))
        .collect();
    points.extend(
        linspace(1.0 / 1000.0, 1.0 / 10.0, 25)
            .into_iter()
            .map(|ic| (1.0, 1.0 / ic)),
    );
    let mut sign_failures = Vec::new();
    let mut worst_cancel = (0.0_f64, 0.0);
    for (z, c) in points {
        let b = breakdown(&params(z, c), &spec()).map_err(|e| e.to_string())?;
        if !(b.dc < 0.0 && b.xc > 0.0 && b.xb < 0.0 && b.total_vp < 0.0) {
            sign_failures.push(format!("(Z={z}, c={c})"));
        }
        if c == C && z <= 40.0 {
            let ratio = (b.xc + b.xb).abs() / b.xc.abs();
            if ratio > worst_cancel.0 {
                worst_cancel = (ratio, z);
            }
        }
    }
    let ok = sign_failures.is_empty() && worst_cancel.0 < 0.05;
    check(
        ok,
        format!(
            "sign violations: {}; max |xc + xb|/|xc| for Z <= 40 is {:.3} at Z = {:.3} (tol 0.05)",
            if sign_failures.is_empty() {
                "none".to_string()
            } else {
                sign_failures.join(" ")
            },
            worst_cancel.0,
            worst_cancel.1
        ),
    )
}

fn scaling_laws() -> Outcome {
    let total = |z: f64, c: f64| -> Result<f64, String> {
        Ok(total_vp_correction(&params(z, c), &spec())
            .map_err(|e| e.to_string())?
            .value
            .abs())
    };
    let zs = [0.5, 1.0, 2.0, 4.0];
    let ez: Vec<f64> = zs.iter().map(|&z| total(z, C)).collect::<Result<_, _>>()?;
    let cs = [137.036, 274.0, 548.0];
    let inv: Vec<f64> = cs.iter().map(|c| 1.0 / c).collect();
    let ec: Vec<f64> = cs
        .iter()
        .map(|&c| total(1.0, c))
        .collect::<Result<_, _>>()?;
    let (sz, sc) = (slope(&zs, &ez), slope(&inv, &ec));
    check(
        (sz - 2.0).abs() <= 0.05 && (sc - 1.0).abs() <= 0.05,
        format!("exponent in Z {sz:.4} (2 +- 0.05), in 1/c {sc:.4} (1 +- 0.05)"),
    )
}

fn nonrelativistic_limits() -> Outcome {
    let cs = [1e2, 1e3, 1e4];
    let residual: Vec<f64> = cs
        .iter()
        .map(|&c| nonrel_expansion(&params(1.0, c)).remainder.abs())
        .collect();
    let order = -slope(&cs, &residual);
    // at c = 100 the direct subtraction still resolves the remainder
    let p = params(1.0, cs[0]);
    let e = nonrel_expansion(&p);
    let direct = p.derive().eps1 - e.sum();
    let remainder_ok = (direct - e.remainder).abs() <= 1e-2 * e.remainder.abs();
    let k = 0.7;
    let mut plus_dev = Vec::new();
    let mut minus = Vec::new();
    let mut lower = Vec::new();
    for &c in &cs {
        let p = params(1.0, c);
        let ps = phase_shifts(&p, k).map_err(|e| e.to_string())?;
        plus_dev.push((ps.delta_plus.tan() - p.m() * p.z() / k).abs());
        minus.push(ps.delta_minus.abs());
        let psi = bound_spinor(&p.derive(), 0.3).map_err(|e| e.to_string())?;
        lower.push(psi.lower.norm() / psi.upper.norm());
    }
    let shrinking = |v: &[f64]| v.windows(2).all(|w| w[1] <= 0.2 * w[0]);
    let ok = remainder_ok
        && (order - 4.0).abs() <= 0.1
        && shrinking(&plus_dev)
        && shrinking(&minus)
        && shrinking(&lower);
    check(
        ok,
        format!(
            "expansion residual order c^-{order:.3} (direct subtraction agrees: {remainder_ok}); |tan d+ - mZ/k| {}; |d-| {}; lower/upper {}",
            sci(&plus_dev),
            sci(&minus),
            sci(&lower)
        ),
    )
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn jump(p: &ModelParams, f: impl Fn(f64) -> Result<Spinor, qed1d::Error>) -> Result<f64, String> {
    let eps = f64::MIN_POSITIVE;
    let right = f(eps).map_err(|e| e.to_string())?;
    let left = f(-eps).map_err(|e| e.to_string())?;
    let mapped = Spinor::from(boundary_matrix(p).apply(left.as_array()));
    Ok(right.max_abs_diff(&mapped)
        / right
            .norm_sqr()
            .sqrt()
            .max(left.norm_sqr().sqrt())
            .max(1e-300))
}

fn boundary_conditions() -> Outcome {
    let mut worst = 0.0_f64;
    for z in [1.0, 120.0] {
        let p = params(z, C);
        let d = p.derive();
        worst = worst.max(jump(&p, |x| bound_spinor(&d, x))?);
        for label in StateLabel::ALL {
            for i in 0..20 {
                let k = 0.05 * C * 1.45_f64.powi(i);
                worst = worst.max(jump(&p, |x| scattering_state(&p, label, k, x))?);
            }
        }
    }
    check(
        worst <= 1e-12,
        format!("max relative jump residual {worst:.2e} (tol 1e-12)"),
    )
}

fn uehling_dominance() -> Outcome {
    let xs = [0.0, 0.25 / C, 0.5 / C, 1.0 / C, 2.0 / C];
    let zs = [4.0, 2.0, 1.0, 0.5];
    let mut diffs = Vec::new();
    for &z in &zs {
        let p = params(z, C);
        let d = p.derive();
        let mut row = Vec::new();
        for &x in &xs {
            let n = vp_density(&d, x, &spec()).map_err(|e| e.to_string())?.value;
            let u = uehling_density(&p, x, &spec())
                .map_err(|e| e.to_string())?
                .value;
            row.push(n - u);
        }
        diffs.push(row);
    }
    let mut worst = 0.0_f64;
    for pair in diffs.windows(2) {
        for (a, b) in pair[0].iter().zip(&pair[1]) {
            worst = worst.max((b / a).abs());
        }
    }
    check(
        worst <= 0.6,
        format!("max pointwise ratio per halving {worst:.4} (tol 0.6)"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        (
            "vacuum-charge identity",
            vacuum_charge,
            Duration::from_secs(10),
        ),
        (
            "route equivalence",
            route_equivalence,
            Duration::from_secs(60),
        ),
        (
            "closed-form anchors",
            closed_form_anchors,
            Duration::from_secs(1),
        ),
        (
            "vacuum neutrality",
            vacuum_neutrality,
            Duration::from_secs(120),
        ),
        (
            "energy-correction consistency",
            energy_consistency,
            Duration::from_secs(60),
        ),
        (
            "sign pattern and cancellation",
            sign_pattern,
            Duration::from_secs(600),
        ),
        ("scaling laws", scaling_laws, Duration::from_secs(300)),
        (
            "non-relativistic limits",
            nonrelativistic_limits,
            Duration::from_secs(5),
        ),
        (
            "boundary conditions",
            boundary_conditions,
            Duration::from_secs(5),
        ),
        (
            "Uehling dominance",
            uehling_dominance,
            Duration::from_secs(60),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let (ok, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} [{:.2?} of {:?} budget] {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            name,
            elapsed,
            budget,
            detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
