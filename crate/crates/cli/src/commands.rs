use std::fs;
use std::path::Path;

use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;

use bdf_girg::analysis::{analyze as analyze_instance, stochastic_triangle_check, AnalysisOptions};
use bdf_girg::bdf::{depth, is_scom, leading_term, monte_carlo_volume, volume};
use bdf_girg::io::{self, InstancePaths, ScalingRow};
use bdf_girg::sampler::sample_girg;
use bdf_girg::stats::{log_log_slope, mean};
use bdf_girg::two_round::run_phases;

use crate::config::ExperimentConfig;
use crate::CliError;

const CONFIG_FILE: &str = "config.toml";

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes a new output file; existing files are only replaced with `force`.
fn write_output(path: &Path, bytes: &[u8], force: bool) -> Result<(), CliError> {
    if !force && path.exists() {
        return Err(io_err(path, "already exists (use --force or a new --out-dir)"));
    }
    io::write_atomic(path, bytes).map_err(|e| io_err(path, e))
}

fn prepare_out_dir(cfg: &ExperimentConfig) -> Result<&Path, CliError> {
    fs::create_dir_all(&cfg.out_dir).map_err(|e| io_err(&cfg.out_dir, e))?;
    Ok(&cfg.out_dir)
}

fn write_config(cfg: &ExperimentConfig, force: bool) -> Result<(), CliError> {
    write_output(&cfg.out_dir.join(CONFIG_FILE), cfg.to_toml().as_bytes(), force)
}

fn csv_table(header: &str, rows: impl IntoIterator<Item = String>) -> Vec<u8> {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s.into_bytes()
}

pub fn generate(cfg: &ExperimentConfig, force: bool) -> Result<(), CliError> {
    let expr = cfg.expr()?;
    let params = cfg.params()?;
    let dir = prepare_out_dir(cfg)?;
    let g = sample_girg(&params, &expr)?;
    let paths = InstancePaths::in_dir(dir);
    write_output(&paths.edges, &io::edges_csv(&g.edges)?, force)?;
    write_output(&paths.positions, &io::positions_csv(&g.positions)?, force)?;
    write_output(&paths.weights, &io::weights_csv(&g.weights)?, force)?;
    write_output(&paths.sidecar, &io::sidecar_json(&g)?, force)?;
    println!("{} vertices, {} edges -> {}", g.n(), g.edges.len(), dir.display());
    Ok(())
}

pub fn volume_check(cfg: &ExperimentConfig, force: bool) -> Result<(), CliError> {
    let expr = cfg.expr()?;
    let dir = prepare_out_dir(cfg)?;
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let hits = monte_carlo_volume(&expr, &cfg.radii, cfg.samples, &mut rng)?;
    let n = cfg.samples as f64;
    let mut rows = Vec::new();
    let mut exact = Vec::new();
    for (&r, &h) in cfg.radii.iter().zip(&hits) {
        let v = volume(&expr, r)?;
        exact.push(v);
        let sigma = (v * (1.0 - v) / n).sqrt();
        rows.push(format!("{r},{v},{},{sigma}", h as f64 / n));
    }
    write_output(&dir.join("volume.csv"), &csv_table("r,exact,mc_estimate,sigma", rows), force)?;

    // slope of the exact volume over the three smallest radii
    let mut by_r: Vec<(f64, f64)> = cfg.radii.iter().copied().zip(exact).collect();
    by_r.sort_by(|a, b| a.0.total_cmp(&b.0));
    let small = &by_r[..by_r.len().min(3)];
    let (xs, ys): (Vec<f64>, Vec<f64>) = small.iter().copied().unzip();
    let slope = log_log_slope(&xs, &ys).unwrap_or(f64::NAN);
    let (coef, _) = leading_term(&expr);
    let summary = [
        format!("depth,{}", depth(&expr).value()),
        format!("slope,{slope}"),
        format!("leading_coefficient,{coef}"),
        format!("scom,{}", is_scom(&expr).0 as u8),
    ];
    write_output(&dir.join("volume_summary.csv"), &csv_table("metric,value", summary), force)?;

    let tri_samples = (cfg.samples / 10).max(1);
    let tri = stochastic_triangle_check(&expr, &cfg.epsilons, tri_samples, cfg.seed)?;
    let rows = tri
        .iter()
        .map(|t| format!("{},{},{},{}", t.epsilon, t.probability, t.samples, t.volume_ratio));
    write_output(
        &dir.join("triangle.csv"),
        &csv_table("epsilon,probability,samples,volume_ratio", rows),
        force,
    )?;
    write_config(cfg, force)?;
    println!("depth {}, slope {slope:.6} -> {}", depth(&expr).value(), dir.display());
    Ok(())
}

pub fn scaling_study(cfg: &ExperimentConfig, force: bool) -> Result<(), CliError> {
    let expr = cfg.expr()?;
    let dir = prepare_out_dir(cfg)?;
    let jobs: Vec<(usize, u64)> = cfg
        .n_grid
        .iter()
        .flat_map(|&n| cfg.seed_list().into_iter().map(move |s| (n, s)))
        .collect();
    let opts = AnalysisOptions {
        delta: cfg.delta,
        ..Default::default()
    };
    let reports = jobs
        .par_iter()
        .map(|&(n, seed)| {
            let g = sample_girg(&cfg.params_for(n, seed)?, &expr)?;
            Ok(analyze_instance(&g, &opts)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut rows = Vec::new();
    for (&(n, seed), rep) in jobs.iter().zip(&reports) {
        for (metric, value) in &rep.metrics {
            rows.push(ScalingRow {
                n,
                seed,
                metric: metric.clone(),
                value: *value,
            });
        }
    }
    write_output(&dir.join("scaling.csv"), &io::scaling_csv(&rows)?, force)?;

    let per_n = |metric: &str| -> Vec<f64> {
        cfg.n_grid
            .iter()
            .map(|&n| {
                let vals: Vec<f64> = jobs
                    .iter()
                    .zip(&reports)
                    .filter(|((m, _), _)| *m == n)
                    .filter_map(|(_, r)| r.get(metric))
                    .collect();
                mean(&vals)
            })
            .collect()
    };
    let ns: Vec<f64> = cfg.n_grid.iter().map(|&n| n as f64).collect();
    let slope = |metric: &str| log_log_slope(&ns, &per_n(metric)).unwrap_or(f64::NAN);
    let all = |metric: &str| -> Vec<f64> { reports.iter().filter_map(|r| r.get(metric)).collect() };
    let fold = |xs: Vec<f64>, f: fn(f64, f64) -> f64, init: f64| xs.into_iter().fold(init, f);
    let mut summary = vec![
        format!("scom,{}", is_scom(&expr).0 as u8),
        format!("separator_slope,{}", slope("separator_cross_edges")),
        format!("probe_slope,{}", slope("probe_min_cross_edges")),
        format!("probe_min_normalized_min,{}", fold(all("probe_min_normalized"), f64::min, f64::INFINITY)),
        format!("clustering_min,{}", fold(all("clustering"), f64::min, f64::INFINITY)),
        format!("clustering_max,{}", fold(all("clustering"), f64::max, 0.0)),
        format!("giant_fraction_min,{}", fold(all("giant_fraction"), f64::min, f64::INFINITY)),
    ];
    for (n, v) in cfg.n_grid.iter().zip(per_n("probe_min_normalized")) {
        summary.push(format!("probe_min_normalized_n{n},{v}"));
    }
    write_output(&dir.join("summary.csv"), &csv_table("metric,value", summary), force)?;
    write_config(cfg, force)?;
    println!("{} runs -> {}", jobs.len(), dir.display());
    Ok(())
}

pub fn two_round(cfg: &ExperimentConfig, force: bool) -> Result<(), CliError> {
    let expr = cfg.expr()?;
    if let (true, Some(k)) = is_scom(&expr) {
        return Err(CliError::Validation(format!(
            "{expr} is SCOM (max of |x{k}| and the rest): the hyperplanes x{k} = 0 and x{k} = 1/2 \
             already separate its giant with o(n) edges, so the two-round robustness experiment is undefined"
        )));
    }
    let dir = prepare_out_dir(cfg)?;
    let traces = cfg
        .seed_list()
        .par_iter()
        .map(|&seed| Ok((seed, run_phases(&cfg.params_for(cfg.n, seed)?, &expr, cfg.delta, cfg.l)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut summary = Vec::new();
    let mut violations = 0;
    for (seed, t) in &traces {
        write_output(
            &dir.join(format!("phases_seed{seed}.csv")),
            &io::phase_csv(&t.phase_rows())?,
            force,
        )?;
        violations += t.lb_violations;
        let [k1, _, k3, k4] = t.giant_sizes;
        summary.push(format!(
            "{seed},{k1},{k3},{k4},{},{},{},{},{},{}",
            k3 as f64 + 3.0 * cfg.delta * cfg.n as f64,
            t.growth_within_bound() as u8,
            t.edge_count(1),
            t.edge_count(4),
            t.lb_violations,
            t.step_probe.frequency(),
        ));
    }
    write_output(
        &dir.join("two_round.csv"),
        &csv_table(
            "seed,k1,k3,k4,k4_bound,growth_ok,edges_g1,edges_g4,lb_violations,step_frequency",
            summary,
        ),
        force,
    )?;
    write_config(cfg, force)?;
    if violations > 0 {
        return Err(CliError::Invariant(format!(
            "{violations} pairs passed a lower-bound check but failed the edge-insertion criterion"
        )));
    }
    let ok = traces.iter().filter(|(_, t)| t.growth_within_bound()).count();
    println!("{ok}/{} runs within the growth bound -> {}", traces.len(), dir.display());
    Ok(())
}

pub fn analyze(cfg: &ExperimentConfig, force: bool) -> Result<(), CliError> {
    let input = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::Validation("analyze needs --input <dir>".into()))?;
    let g = io::read_instance(&InstancePaths::in_dir(input))?;
    let dir = prepare_out_dir(cfg)?;
    let opts = AnalysisOptions {
        delta: cfg.delta,
        ..Default::default()
    };
    let report = analyze_instance(&g, &opts)?;
    write_output(&dir.join("analysis.csv"), &io::metrics_csv(&report.metrics)?, force)?;
    write_config(cfg, force)?;
    println!("{} metrics -> {}", report.metrics.len(), dir.display());
    Ok(())
}
