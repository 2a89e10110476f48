//! One function per subcommand, each turning a run configuration into a
//! [`Report`].

use std::f64::consts::PI;

use fermichain::criticality::predicted_scaling;
use fermichain::{
    c_tilde, entropy_sweep, fermi_points, fh_deviation, free_energy, i1, low_temperature_fit, ComplexValue,
    DispersionProfile, FermiAnalysis, FhSymbol, Phase,
};
use serde_json::{json, Map, Value};

use crate::config::{Alpha, Command, RunConfig};
use crate::output::{Report, Table};
use crate::CliError;

pub fn execute(command: Command, config: &RunConfig) -> Result<Report, CliError> {
    match command {
        Command::Dispersion => dispersion(config),
        Command::Phase => phase(config),
        Command::FreeEnergy => thermal(config),
        Command::Entropy => entropy(config),
        Command::FhCheck => fh_check(config),
        Command::Constants => constants(config),
    }
}

fn profile(config: &RunConfig) -> Result<DispersionProfile, CliError> {
    Ok(DispersionProfile::new(config.model()?)?)
}

fn analysis_json(a: &FermiAnalysis) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("mu".into(), json!(a.mu));
    m.insert("phase".into(), json!(a.phase.label()));
    let c = match a.phase {
        Phase::Critical { central_charge } => json!(central_charge),
        _ => Value::Null,
    };
    m.insert("c".into(), c);
    m.insert("roots".into(), json!(a.root_momenta()));
    m.insert("velocities".into(), json!(a.velocities()));
    m.insert("sea".into(), json!(a.sea));
    m.insert("e_min".into(), json!(a.e_min));
    m.insert("e_max".into(), json!(a.e_max));
    m
}

fn dispersion(config: &RunConfig) -> Result<Report, CliError> {
    let profile = profile(config)?;
    let n = config.points.unwrap_or(257);
    if n < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let mut table = Table::new(vec!["p", "E", "dE", "d2E"]);
    for k in 0..n {
        let p = 2.0 * PI * k as f64 / (n - 1) as f64;
        table.push(vec![
            p.into(),
            profile.energy(p).into(),
            profile.first_derivative(p).into(),
            profile.second_derivative(p).into(),
        ]);
    }
    let report = profile.monotonicity_report();
    let (e_min, e_max) = profile.extrema();
    let mut details = Map::new();
    details.insert("family".into(), json!(profile.model().family()));
    details.insert("monotonic".into(), json!(report.monotonic));
    details.insert("critical_points".into(), json!(report.critical_points));
    details.insert("e_min".into(), json!(e_min));
    details.insert("e_max".into(), json!(e_max));
    Ok(Report { table, details })
}

fn phase(config: &RunConfig) -> Result<Report, CliError> {
    let analysis = fermi_points(&profile(config)?, config.mu()?)?;
    let c = match analysis.phase {
        Phase::Critical { central_charge } => central_charge,
        _ => 0,
    };
    let mut table = Table::new(vec!["phase", "c", "p", "multiplicity", "velocity", "b"]);
    for r in &analysis.roots {
        table.push(vec![
            analysis.phase.label().into(),
            c.into(),
            r.p.into(),
            (r.multiplicity as usize).into(),
            r.velocity.into(),
            r.b.into(),
        ]);
    }
    Ok(Report {
        table,
        details: analysis_json(&analysis),
    })
}

fn thermal(config: &RunConfig) -> Result<Report, CliError> {
    let profile = profile(config)?;
    let mu = config.mu()?;
    let analysis = fermi_points(&profile, mu)?;
    let temperatures = config.temperatures()?;
    let mut table = Table::new(vec!["T", "f", "f0", "excess", "quadrature_error"]);
    for &t in &temperatures {
        let r = free_energy(&profile, mu, t)?;
        table.push(vec![t.into(), r.f.into(), r.f0.into(), r.excess.into(), r.quadrature_error.into()]);
    }
    let mut details = analysis_json(&analysis);
    let fit = if predicted_scaling(&analysis).is_some() && temperatures.len() >= 4 {
        let fit = low_temperature_fit(&profile, mu, &temperatures)?;
        json!({
            "exponent": fit.exponent,
            "coefficient": fit.coefficient,
            "rms_residual": fit.rms_residual,
            "predicted_exponent": fit.predicted_exponent,
            "predicted_coefficient": fit.predicted_coefficient,
        })
    } else {
        Value::Null
    };
    details.insert("fit".into(), fit);
    Ok(Report { table, details })
}

fn entropy(config: &RunConfig) -> Result<Report, CliError> {
    let analysis = fermi_points(&profile(config)?, config.mu()?)?;
    let ls = config.block_lengths("10:100:10")?;
    let reports = entropy_sweep(&analysis, &ls, &config.alphas())?;
    let mut columns = vec!["L", "alpha", "S_exact"];
    if config.compare {
        columns.extend(["S_app", "r_L"]);
    }
    let mut table = Table::new(columns);
    for r in &reports {
        let mut row = vec![r.l.into(), Alpha(r.alpha).to_string().into(), r.s_exact.into()];
        if config.compare {
            row.extend([r.s_asymptotic.into(), r.r_l.into()]);
        }
        table.push(row);
    }
    let mut details = analysis_json(&analysis);
    if let Some(first) = reports.first() {
        details.insert("f_factor".into(), json!(first.f_factor));
    }
    Ok(Report { table, details })
}

fn fh_check(config: &RunConfig) -> Result<Report, CliError> {
    let analysis = fermi_points(&profile(config)?, config.mu()?)?;
    let lambda = ComplexValue::new(config.lambda_re.unwrap_or(3.0), config.lambda_im.unwrap_or(0.0));
    let ls = config.block_lengths("8,16,32,64,128")?;
    let symbol = FhSymbol::from_analysis(&analysis, lambda)?;
    let deviations = fh_deviation(&analysis, lambda, &ls)?;
    let mut table = Table::new(vec!["L", "deviation"]);
    for (l, d) in deviations {
        table.push(vec![l.into(), d.into()]);
    }
    let mut details = analysis_json(&analysis);
    details.insert("lambda".into(), json!([lambda.re, lambda.im]));
    details.insert("beta".into(), json!([symbol.beta.re, symbol.beta.im]));
    details.insert("b".into(), json!([symbol.b.re, symbol.b.im]));
    details.insert("filling".into(), json!(symbol.p));
    Ok(Report { table, details })
}

fn constants(config: &RunConfig) -> Result<Report, CliError> {
    let mut table = Table::new(vec!["alpha", "c_tilde", "i1"]);
    for alpha in config.alphas() {
        table.push(vec![
            Alpha(alpha).to_string().into(),
            c_tilde(alpha)?.into(),
            i1(alpha)?.into(),
        ]);
    }
    Ok(Report {
        table,
        details: Map::new(),
    })
}
