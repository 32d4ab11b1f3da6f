//! Command dispatch: build the network and profiles from the parsed
//! config, compute, and emit CSV plus a JSON run manifest.

use crate::config::{
    db_to_linear, Command, MetricParam, RunConfig, SchemeParam, SweepVariable, TermsParam,
};
use kappamu::error::Error as MathError;
use kappamu::fading::FadingProfile;
use kappamu::geometry::{build_two_tier_hex, link_budget, place_user, NetworkLayout};
use kappamu::montecarlo::{ks_validate_sampler, simulate_outage, simulate_outage_csv, simulate_rate, McConfig};
use kappamu::reuse::{ffr_rate, sfr_rate, simulate_reuse, ReuseConfig, Scheme};
use kappamu::sir::{
    outage_series, outage_soi_kappa_mu, rate_kappa_mu, rate_shadowed, typical_user,
    KappaMuParams, Metric, SirProblem, TermChoice,
};
use kappamu::SeriesConfig;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

pub struct RunError {
    pub exit_code: i32,
    pub message: String,
}

impl RunError {
    fn numerical(e: MathError) -> Self {
        RunError {
            exit_code: 3,
            message: format!("numerical failure: {e}"),
        }
    }

    fn io(e: std::io::Error) -> Self {
        RunError {
            exit_code: 1,
            message: format!("io error: {e}"),
        }
    }
}

/// One sweep point's outputs; columns stay in this order in every CSV.
struct Row {
    swept_value: f64,
    columns: Vec<(&'static str, f64)>,
}

fn fmt12(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        "nan".to_string()
    }
}

pub fn run(config: &RunConfig, out_dir: &Path, seed_override: Option<u64>) -> Result<i32, RunError> {
    let started = Instant::now();
    let mut config = config.clone();
    if let (Some(seed), Some(mc)) = (seed_override, config.mc.as_mut()) {
        mc.seed = seed;
    }
    std::fs::create_dir_all(out_dir).map_err(RunError::io)?;

    let layout = build_two_tier_hex(config.geometry.r_cell_m).map_err(RunError::numerical)?;
    std::fs::write(out_dir.join("layout.csv"), layout.layout_csv()).map_err(RunError::io)?;

    let (header, rows, extra) = dispatch(&config, &layout, out_dir)?;

    let mut csv = String::new();
    csv.push_str(header.as_str());
    csv.push('\n');
    for r in rows {
        let mut line = fmt12(r.swept_value);
        for (_, v) in &r.columns {
            line.push(',');
            line.push_str(&fmt12(*v));
        }
        csv.push_str(&line);
        csv.push('\n');
    }
    std::fs::write(out_dir.join("results.csv"), &csv).map_err(RunError::io)?;

    let manifest = serde_json::json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "config": serde_json::to_value(&config).expect("config serialises"),
        "wall_time_s": started.elapsed().as_secs_f64(),
        "outputs": extra.iter().map(|s| s.as_str()).chain(["results.csv", "layout.csv"]).collect::<Vec<_>>(),
    });
    std::fs::write(
        out_dir.join("run_manifest.json"),
        serde_json::to_string_pretty(&manifest).expect("manifest serialises"),
    )
    .map_err(RunError::io)?;
    Ok(0)
}

/// Expand the per-tier interferer blocks onto the 18 cells.
fn interferer_profiles(
    config: &RunConfig,
    layout: &NetworkLayout,
) -> Result<Vec<FadingProfile>, RunError> {
    let blocks = &config.interferers;
    (1..layout.bs_positions.len())
        .map(|cell| {
            let g = layout.tier_group(cell).min(blocks.len() - 1);
            let b = &blocks[g];
            // interferers must stay κ-μ shadowed; "inf" is emulated by a
            // large finite m (the spec caps it at 10^6)
            let m = b.m.finite().unwrap_or(1e6);
            FadingProfile::new(b.kappa, b.mu, m, b.mean).map_err(RunError::numerical)
        })
        .collect()
}

fn term_choice(config: &RunConfig) -> TermChoice {
    match config.series.terms {
        TermsParam::Fixed(p) => TermChoice::Fixed(p),
        TermsParam::Special(_) => TermChoice::Auto {
            epsilon: config.series.epsilon,
        },
    }
}

fn mc_config(config: &RunConfig) -> Option<McConfig> {
    config.mc.map(|m| McConfig {
        batches: m.batches,
        batch_size: m.batch_size,
        seed: m.seed,
        confidence: m.confidence,
    })
}

type Dispatched = (String, Vec<Row>, Vec<String>);

fn dispatch(
    config: &RunConfig,
    layout: &NetworkLayout,
    out_dir: &Path,
) -> Result<Dispatched, RunError> {
    let cfg = SeriesConfig::default();
    let ints = interferer_profiles(config, layout)?;
    let g = &config.geometry;
    let terms = term_choice(config);

    let sweep_points: Vec<(SweepVariable, f64)> = match (&config.sweep, config.command) {
        (Some(s), _) => {
            let n = s.points.max(1);
            (0..n)
                .map(|i| {
                    let f = if n == 1 {
                        0.0
                    } else {
                        i as f64 / (n - 1) as f64
                    };
                    (s.variable, s.from + f * (s.to - s.from))
                })
                .collect()
        }
        (None, _) => vec![(SweepVariable::TDb, config.t_db)],
    };

    let point_config = |var: SweepVariable, v: f64| -> RunConfig {
        let mut c = config.clone();
        match var {
            SweepVariable::SoiM => c.soi.m = crate::config::MParam::Finite(v),
            SweepVariable::SoiMu => c.soi.mu = v,
            SweepVariable::SoiKappa => c.soi.kappa = v,
            SweepVariable::TDb => c.t_db = v,
            SweepVariable::RM => c.geometry.r_m = v,
            SweepVariable::TermsP => {
                c.series.terms = crate::config::TermsParam::Fixed(v.max(0.0) as u32)
            }
        }
        c
    };

    match config.command {
        Command::Outage | Command::Rate | Command::Sweep => {
            let want_rate = config.command == Command::Rate
                || (config.command == Command::Sweep
                    && config.typical.map(|t| t.metric) == Some(MetricParam::Rate));
            let mut rows = Vec::new();
            for &(var, v) in &sweep_points {
                let c = point_config(var, v);
                c.validate().map_err(|m| RunError {
                    exit_code: 2,
                    message: format!("config error: {m}"),
                })?;
                let link = place_user(layout, c.geometry.r_m, c.geometry.azimuth_rad, c.geometry.alpha)
                    .map_err(RunError::numerical)?;
                let t_lin = db_to_linear(c.t_db);
                let mut columns: Vec<(&'static str, f64)> = Vec::new();
                let problem_m = c.soi.m.finite().map(|m| {
                    FadingProfile::new(c.soi.kappa, c.soi.mu, m, c.soi.mean)
                        .and_then(|soi| link_budget(&link, &soi, &ints, t_lin))
                });
                match (want_rate, problem_m) {
                    (false, Some(p)) => {
                        let p = p.map_err(RunError::numerical)?;
                        let o = outage_series(&p, term_choice(&c), &cfg)
                            .map_err(RunError::numerical)?;
                        columns.push(("analytic_value", o.value));
                        columns.push(("error_bound", o.error_bound));
                        push_mc(&mut columns, &c, &p, false)?;
                    }
                    (true, Some(p)) => {
                        let p = p.map_err(RunError::numerical)?;
                        let r = rate_shadowed(&p, term_choice(&c), &cfg)
                            .map_err(RunError::numerical)?;
                        columns.push(("analytic_value", r));
                        columns.push(("error_bound", f64::NAN));
                        push_mc(&mut columns, &c, &p, true)?;
                    }
                    (want, None) => {
                        // κ-μ SoI limit forms
                        let km = KappaMuParams::new(c.soi.kappa, c.soi.mu, c.soi.mean)
                            .map_err(RunError::numerical)?;
                        let km_post = KappaMuParams::new(
                            km.kappa,
                            km.mu,
                            km.mean_power * c.geometry.r_m.powf(-c.geometry.alpha),
                        )
                        .map_err(RunError::numerical)?;
                        let ints_post: Vec<FadingProfile> = ints
                            .iter()
                            .zip(&link.d)
                            .map(|(p, d)| p.scaled_to(p.mean_power * d.powf(-c.geometry.alpha)))
                            .collect::<Result<_, _>>()
                            .map_err(RunError::numerical)?;
                        let value = if want {
                            rate_kappa_mu(&km_post, &ints_post, term_choice(&c), &cfg)
                                .map_err(RunError::numerical)?
                        } else {
                            outage_soi_kappa_mu(&km_post, &ints_post, t_lin, term_choice(&c), &cfg)
                                .map_err(RunError::numerical)?
                                .value
                        };
                        columns.push(("analytic_value", value));
                        columns.push(("error_bound", f64::NAN));
                    }
                }
                rows.push(Row {
                    swept_value: v,
                    columns,
                });
            }
            let header = csv_header(&rows);
            Ok((header, rows, vec![]))
        }
        Command::Typical => {
            let tb = config.typical.expect("validated");
            let soi = soi_profile(config)?;
            let grid: Vec<f64> = (0..=tb.radial_points)
                .map(|i| g.r_cell_m * i as f64 / tb.radial_points as f64)
                .collect();
            let mut rows = Vec::new();
            for &(var, v) in &sweep_points {
                let c = point_config(var, v);
                let metric = match tb.metric {
                    MetricParam::Outage => Metric::Outage,
                    MetricParam::Rate => Metric::Rate,
                };
                let soi_point = if matches!(
                    var,
                    SweepVariable::SoiKappa | SweepVariable::SoiM | SweepVariable::SoiMu
                ) {
                    soi_profile(&c)?
                } else {
                    soi
                };
                let value = typical_user(
                    metric,
                    layout,
                    &soi_point,
                    &ints,
                    c.geometry.azimuth_rad,
                    c.geometry.alpha,
                    db_to_linear(c.t_db),
                    &grid,
                    terms,
                    &cfg,
                )
                .map_err(RunError::numerical)?;
                rows.push(Row {
                    swept_value: v,
                    columns: vec![("analytic_value", value)],
                });
            }
            Ok((csv_header(&rows), rows, vec![]))
        }
        Command::McValidate => {
            let soi = soi_profile(config)?;
            let mc = mc_config(config).expect("validated");
            let mut csv = String::from("profile,n,ks_statistic,threshold\n");
            let n = 1_000_000usize;
            let thresh = 1.36 / (n as f64).sqrt();
            for (name, p) in [("soi", soi), ("interferer_tier0", ints[0])] {
                let ks = ks_validate_sampler(&p, n, mc.seed).map_err(RunError::numerical)?;
                writeln!(csv, "{name},{n},{},{}", fmt12(ks), fmt12(thresh)).unwrap();
            }
            std::fs::write(out_dir.join("ks.csv"), csv).map_err(RunError::io)?;
            // batch means for the configured outage problem
            let link = place_user(layout, g.r_m, g.azimuth_rad, g.alpha)
                .map_err(RunError::numerical)?;
            let problem = link_budget(&link, &soi, &ints, db_to_linear(config.t_db))
                .map_err(RunError::numerical)?;
            let (est, batches_csv) =
                simulate_outage_csv(&problem, &mc).map_err(RunError::numerical)?;
            std::fs::write(out_dir.join("batches.csv"), batches_csv).map_err(RunError::io)?;
            let rows = vec![Row {
                swept_value: config.t_db,
                columns: vec![
                    ("mc_mean", est.mean),
                    ("mc_ci_lo", est.ci_lo),
                    ("mc_ci_hi", est.ci_hi),
                ],
            }];
            Ok((
                csv_header(&rows),
                rows,
                vec!["ks.csv".into(), "batches.csv".into()],
            ))
        }
        Command::Reuse => {
            let rb = config.reuse.expect("validated");
            let soi = soi_profile(config)?;
            let s_t = db_to_linear(rb.s_t_db);
            let grid: Vec<f64> = (0..=12)
                .map(|i| g.r_cell_m * i as f64 / 12.0)
                .collect();
            let mut rows = Vec::new();
            for &(var, v) in &sweep_points {
                let c = point_config(var, v);
                let soi_point = if matches!(
                    var,
                    SweepVariable::SoiKappa | SweepVariable::SoiM | SweepVariable::SoiMu
                ) {
                    soi_profile(&c)?
                } else {
                    soi
                };
                let mut columns: Vec<(&'static str, f64)> = Vec::new();
                if rb.scheme != SchemeParam::Sfr {
                    let f = ffr_rate(
                        layout, &soi_point, &ints, s_t, c.geometry.azimuth_rad,
                        c.geometry.alpha, &grid, terms, &cfg,
                    )
                    .map_err(RunError::numerical)?;
                    columns.push(("ffr_rate", f));
                }
                if rb.scheme != SchemeParam::Ffr {
                    let s = sfr_rate(
                        layout, &soi_point, &ints, s_t, rb.beta, c.geometry.azimuth_rad,
                        c.geometry.alpha, &grid, terms, &cfg,
                    )
                    .map_err(RunError::numerical)?;
                    columns.push(("sfr_rate", s));
                }
                if let Some(mc) = mc_config(config) {
                    let scheme = match rb.scheme {
                        SchemeParam::Sfr => Scheme::Sfr,
                        _ => Scheme::Ffr,
                    };
                    let rc = ReuseConfig::new(scheme, s_t, rb.beta)
                        .map_err(RunError::numerical)?;
                    let est = simulate_reuse(&rc, layout, &soi_point, &ints, c.geometry.alpha, &mc)
                        .map_err(RunError::numerical)?;
                    columns.push(("mc_mean", est.mean));
                    columns.push(("mc_ci_lo", est.ci_lo));
                    columns.push(("mc_ci_hi", est.ci_hi));
                }
                rows.push(Row {
                    swept_value: v,
                    columns,
                });
            }
            Ok((csv_header(&rows), rows, vec![]))
        }
    }
}

fn soi_profile(config: &RunConfig) -> Result<FadingProfile, RunError> {
    let m = config.soi.m.finite().ok_or_else(|| RunError {
        exit_code: 2,
        message: "config error: soi.m: \"inf\" is only supported by the outage/rate/sweep commands"
            .to_string(),
    })?;
    FadingProfile::new(config.soi.kappa, config.soi.mu, m, config.soi.mean)
        .map_err(RunError::numerical)
}

fn push_mc(
    columns: &mut Vec<(&'static str, f64)>,
    config: &RunConfig,
    problem: &SirProblem,
    rate: bool,
) -> Result<(), RunError> {
    if let Some(mc) = mc_config(config) {
        let est = if rate {
            simulate_rate(problem, &mc)
        } else {
            simulate_outage(problem, &mc)
        }
        .map_err(RunError::numerical)?;
        columns.push(("mc_mean", est.mean));
        columns.push(("mc_ci_lo", est.ci_lo));
        columns.push(("mc_ci_hi", est.ci_hi));
    }
    Ok(())
}

fn csv_header(rows: &[Row]) -> String {
    let mut h = String::from("swept_value");
    if let Some(r) = rows.first() {
        for (name, _) in &r.columns {
            h.push(',');
            h.push_str(name);
        }
    }
    h
}
