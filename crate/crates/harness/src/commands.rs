//! The five commands, as library calls that return their results and
//! optionally write them.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use qed_core::circuit::{json, Circuit};
use qed_core::grover::{grover_reference_resources, measured_resources, GroverLayout, GroverSpec, ResourceReport};
use qed_core::iceberg::{encode, parse_encoded, EncodeOptions};
use qed_core::stats::{
    expected_success, gamma_of_delta, optimal_syndrome, read_sweep_csv, BootstrapSettings, DetectionModel, SweepPoint,
    SyndromeOptimum, DEFAULT_MAX_ROUNDS,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::runner::{run_trials, Experiment, Readout, Rejections};
use crate::seed;

/// Comment line opening every CSV file.
pub fn csv_header(command: &str, seed: u64, fields: &[(&str, String)]) -> String {
    let mut line = format!("# qed {command} seed={seed}");
    for (k, v) in fields {
        line.push_str(&format!(" {k}={v}"));
    }
    line
}

fn layout_name(layout: GroverLayout) -> &'static str {
    match layout {
        GroverLayout::Compact => "compact",
        GroverLayout::Dedicated => "dedicated",
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Writes `rows` as CSV under a [`csv_header`] comment, to `path` or to
/// standard output.
pub fn write_csv<T: Serialize>(path: Option<&Path>, header: &str, rows: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    writeln!(buf, "{header}").expect("writing to memory");
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        for r in rows {
            w.serialize(r).map_err(qed_core::Error::from)?;
        }
        w.flush().expect("writing to memory");
    }
    match path {
        Some(p) => std::fs::write(p, &buf).map_err(|e| Error::io(p, e)),
        None => std::io::stdout().write_all(&buf).map_err(|e| Error::io("<stdout>", e)),
    }
}

// ---------------------------------------------------------------- compile

/// What to compile.
#[derive(Debug, Clone)]
pub enum Source {
    /// Logical circuit JSON.
    File(PathBuf),
    Grover {
        spec: GroverSpec,
        layout: GroverLayout,
    },
}

/// Measured resources next to the closed-form reference, when one applies.
#[derive(Debug, Clone, Serialize)]
pub struct ResourceComparison {
    pub seed: u64,
    pub rounds: usize,
    pub measured: ResourceReport,
    pub reference: Option<ResourceReport>,
    /// `(measured − reference) / reference` for RZZ, U and depth.
    pub relative_delta: Option<Value>,
}

#[derive(Debug, Clone)]
pub struct CompileOutput {
    pub circuit_json: Value,
    pub resources: ResourceComparison,
}

pub fn compile(source: &Source, rounds: usize, seed: u64) -> Result<CompileOutput> {
    let (logical, grover) = match source {
        Source::File(path) => (json::parse(&read_text(path)?)?, None),
        Source::Grover { spec, layout } => (qed_core::grover::build_grover_logical(spec, *layout), Some(spec)),
    };
    let enc = encode(&logical, &EncodeOptions::with_rounds(rounds))?;
    let measured = measured_resources(&enc.circuit)?;
    let reference = grover.and_then(|spec| grover_reference_resources(spec.s as u64, spec.iterations as u64).ok());
    let relative_delta = reference.map(|r| {
        let rel = |m: u64, r: u64| (m as f64 - r as f64) / r as f64;
        json!({
            "rzz_count": rel(measured.rzz_count, r.rzz_count),
            "u_count": rel(measured.u_count, r.u_count),
            "depth": rel(measured.depth, r.depth),
        })
    });
    let mut circuit_json = enc.to_value();
    circuit_json["seed"] = json!(seed);
    Ok(CompileOutput {
        circuit_json,
        resources: ResourceComparison {
            seed,
            rounds,
            measured,
            reference,
            relative_delta,
        },
    })
}

/// Human-readable comparison with the closed forms.
pub fn describe_resources(c: &ResourceComparison) -> String {
    let m = &c.measured;
    let mut out = String::new();
    let rows = [
        ("qubits", m.qubits, c.reference.map(|r| r.qubits)),
        ("measurements", m.measurements, c.reference.map(|r| r.measurements)),
        ("rzz", m.rzz_count, c.reference.map(|r| r.rzz_count)),
        ("u", m.u_count, c.reference.map(|r| r.u_count)),
        ("depth", m.depth, c.reference.map(|r| r.depth)),
    ];
    for (name, got, want) in rows {
        match want {
            Some(w) => out.push_str(&format!(
                "{name:<13}{got:>8}  reference {w:>8}  delta {:+}\n",
                got as i64 - w as i64
            )),
            None => out.push_str(&format!("{name:<13}{got:>8}\n")),
        }
    }
    out
}

// --------------------------------------------------------------- simulate

#[derive(Debug, Clone, Serialize)]
pub struct SimulateReport {
    pub seed: u64,
    pub p: f64,
    pub shots: u64,
    pub trials: usize,
    pub encoded: bool,
    pub success: f64,
    pub survival: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ideal: Option<f64>,
    pub eta: Option<f64>,
    pub rejections: Rejections,
}

/// Loads a compiled circuit; without layout metadata it is run bare, which
/// must be asked for explicitly.
pub fn load_experiment(path: &Path, bare: bool, expected: Vec<u8>) -> Result<Experiment> {
    let (circuit, layout) = parse_encoded(&read_text(path)?)?;
    match (layout, bare) {
        (Some(layout), false) => Experiment::new(circuit, Readout::Encoded(layout), expected),
        (None, false) => Err(Error::usage(format!(
            "{} has no code layout; pass --bare to run it without post-selection",
            path.display()
        ))),
        (_, true) => {
            let register = bare_register(&circuit)?;
            Experiment::new(circuit, Readout::Bare { register }, expected)
        }
    }
}

fn bare_register(circuit: &Circuit) -> Result<String> {
    let regs = circuit.registers();
    regs.iter()
        .find(|r| r.name == qed_core::grover::BARE_REGISTER)
        .or(regs.last())
        .map(|r| r.name.clone())
        .ok_or_else(|| Error::usage("circuit has no classical register to read"))
}

pub fn simulate(
    exp: &Experiment,
    p: f64,
    shots: u64,
    trials: usize,
    seed: u64,
    ideal: Option<f64>,
) -> Result<SimulateReport> {
    let point = seed::derive(seed, &[p.to_bits()]);
    let run = run_trials(exp, p, shots, trials, point)?;
    let boot = BootstrapSettings {
        seed: seed::bootstrap_seed(point),
        ..BootstrapSettings::default()
    };
    let pt = SweepPoint::from_trials(p, 0, 0, None, &run.outcomes, boot)?;
    Ok(SimulateReport {
        seed,
        p,
        shots,
        trials,
        encoded: exp.is_encoded(),
        success: pt.success,
        survival: pt.survival,
        ci_low: pt.ci_low,
        ci_high: pt.ci_high,
        ideal,
        eta: ideal.filter(|&i| i > 0.0).map(|i| pt.success / i),
        rejections: run.rejections,
    })
}

// ------------------------------------------------------------------ sweep

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub spec: GroverSpec,
    pub layout: GroverLayout,
    pub ps: Vec<f64>,
    pub rs: Vec<usize>,
    pub shots: u64,
    pub trials: usize,
    pub seed: u64,
    pub resamples: usize,
}

impl SweepConfig {
    /// Desk-scale defaults: p ∈ {0.002, 0.004, 0.006, 0.008}, r = 1..=12,
    /// 1000 shots, 10 trials.
    pub fn new(spec: GroverSpec) -> Self {
        Self {
            spec,
            layout: GroverLayout::default(),
            ps: vec![0.002, 0.004, 0.006, 0.008],
            rs: (1..=DEFAULT_MAX_ROUNDS).collect(),
            shots: 1000,
            trials: 10,
            seed: 0,
            resamples: 10_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ps.is_empty() || self.rs.is_empty() {
            return Err(Error::usage("noise and round grids must not be empty"));
        }
        if let Some(p) = self.ps.iter().find(|p| !(0.0..1.0).contains(*p)) {
            return Err(Error::usage(format!("noise p = {p} is outside [0, 1)")));
        }
        if self.shots == 0 || self.trials == 0 {
            return Err(Error::usage("shots and trials must be at least 1"));
        }
        Ok(())
    }

    fn header(&self) -> String {
        csv_header(
            "sweep",
            self.seed,
            &[
                ("spec", self.spec.to_string()),
                ("layout", layout_name(self.layout).into()),
                ("shots", self.shots.to_string()),
                ("trials", self.trials.to_string()),
            ],
        )
    }

    /// One grid point; `r = None` is the unencoded baseline.
    pub fn point(&self, p: f64, r: Option<usize>) -> Result<SweepPoint> {
        let exp = match r {
            Some(r) => Experiment::grover_encoded(&self.spec, self.layout, r)?,
            None => Experiment::grover_bare(&self.spec, self.layout)?,
        };
        let point = seed::point_seed(self.seed, p, r);
        let run = run_trials(&exp, p, self.shots, self.trials, point)?;
        let boot = BootstrapSettings {
            level: 0.95,
            resamples: self.resamples,
            seed: seed::bootstrap_seed(point),
        };
        Ok(SweepPoint::from_trials(
            p,
            self.spec.s,
            self.spec.iterations,
            r,
            &run.outcomes,
            boot,
        )?)
    }

    /// Grid in output order: per noise value the baseline, then every r.
    pub fn grid(&self) -> Vec<(f64, Option<usize>)> {
        self.ps
            .iter()
            .flat_map(|&p| {
                std::iter::once(None)
                    .chain(self.rs.iter().map(|&r| Some(r)))
                    .map(move |r| (p, r))
            })
            .collect()
    }
}

/// Optimal schedule at one noise value.
#[derive(Debug, Clone, Serialize)]
pub struct SweepOptimum {
    pub p: f64,
    pub p_bare: f64,
    pub p_ideal: f64,
    #[serde(flatten)]
    pub optimum: SyndromeOptimum,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub seed: u64,
    pub spec: String,
    pub layout: &'static str,
    pub shots: u64,
    pub trials: usize,
    pub optima: Vec<SweepOptimum>,
}

fn point_key(p: f64, r: Option<usize>) -> (u64, Option<usize>) {
    (p.to_bits(), r)
}

/// Rows already in `path` for this configuration. A file written under a
/// different seed, spec, layout or shot budget is refused.
fn existing_rows(cfg: &SweepConfig, path: &Path) -> Result<Vec<SweepPoint>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut first = String::new();
    BufReader::new(&file)
        .read_line(&mut first)
        .map_err(|e| Error::io(path, e))?;
    if first.trim_end() != cfg.header() {
        return Err(Error::usage(format!(
            "{} was written by a different sweep ({}); use another --out",
            path.display(),
            first.trim_end()
        )));
    }
    Ok(read_sweep_csv(File::open(path).map_err(|e| Error::io(path, e))?)?)
}

/// Runs the grid, skipping points already present in `out`, appending each
/// new point as soon as it finishes. Returns every point of the grid in
/// grid order and the optimum per noise value.
pub fn sweep(cfg: &SweepConfig, out: Option<&Path>) -> Result<(Vec<SweepPoint>, SweepSummary)> {
    cfg.validate()?;
    let mut done: HashMap<(u64, Option<usize>), SweepPoint> = HashMap::new();
    let mut writer = None;
    if let Some(path) = out {
        let existing = existing_rows(cfg, path)?;
        let fresh = existing.is_empty() && !path.exists();
        for row in existing {
            done.insert(point_key(row.p, row.r), row);
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::io(path, e))?;
        if fresh {
            writeln!(file, "{}", cfg.header()).map_err(|e| Error::io(path, e))?;
        }
        writer = Some(csv::WriterBuilder::new().has_headers(fresh).from_writer(file));
    }
    let mut points = Vec::new();
    for (p, r) in cfg.grid() {
        if let Some(row) = done.get(&point_key(p, r)) {
            points.push(row.clone());
            continue;
        }
        let row = cfg.point(p, r)?;
        if let Some(w) = writer.as_mut() {
            w.serialize(&row).map_err(qed_core::Error::from)?;
            w.flush().map_err(|e| Error::io(out.expect("writer implies path"), e))?;
        }
        points.push(row);
    }
    let summary = summarize(cfg, &points)?;
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&summary).expect("summary is serializable");
        write_text(&summary_path(path), &text)?;
    }
    Ok((points, summary))
}

/// Where [`sweep`] writes its JSON summary for a CSV at `csv`.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.json")
}

fn summarize(cfg: &SweepConfig, points: &[SweepPoint]) -> Result<SweepSummary> {
    let p_ideal = cfg.spec.ideal_success();
    let mut optima = Vec::new();
    for &p in &cfg.ps {
        let at_p: Vec<SweepPoint> = points.iter().filter(|x| x.p == p).cloned().collect();
        let p_bare = at_p
            .iter()
            .find(|x| x.r.is_none())
            .map(|x| x.success)
            .expect("grid has a baseline per p");
        optima.push(SweepOptimum {
            p,
            p_bare,
            p_ideal,
            optimum: optimal_syndrome(&at_p, p_bare, p_ideal)?,
        });
    }
    Ok(SweepSummary {
        seed: cfg.seed,
        spec: cfg.spec.to_string(),
        layout: layout_name(cfg.layout),
        shots: cfg.shots,
        trials: cfg.trials,
        optima,
    })
}

// -------------------------------------------------------------- statmodel

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StatRow {
    pub epsilon: f64,
    pub delta: f64,
    pub gamma: f64,
    pub shots: u64,
    pub expected_success: f64,
}

/// Expected post-selected success over a `δ` grid with `γ` tied to `δ`.
pub fn statmodel(epsilons: &[f64], deltas: &[f64], shots: u64) -> Result<Vec<StatRow>> {
    let mut rows = Vec::with_capacity(epsilons.len() * deltas.len());
    for &epsilon in epsilons {
        for &delta in deltas {
            let m = DetectionModel::<f64>::coupled(epsilon, delta, shots)?;
            rows.push(StatRow {
                epsilon,
                delta,
                gamma: gamma_of_delta(delta),
                shots,
                expected_success: expected_success(&m),
            });
        }
    }
    Ok(rows)
}

/// `0, 0.02, …, 1`.
pub fn default_delta_grid() -> Vec<f64> {
    (0..=50).map(|i| i as f64 / 50.0).collect()
}

// --------------------------------------------------------- identity bench

/// Rounds swept by default; `0` is the bare circuit.
pub const IDENTITY_ROUNDS: [usize; 9] = [0, 1, 2, 3, 5, 6, 10, 15, 30];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct IdentityPoint {
    pub p: f64,
    pub r: usize,
    pub shots: u64,
    pub trials: usize,
    pub success: f64,
    pub survival: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Post-selected all-zero rate and survival per `(p, r)`.
pub fn identity_bench(ps: &[f64], rs: &[usize], shots: u64, trials: usize, seed: u64) -> Result<Vec<IdentityPoint>> {
    if ps.is_empty() || rs.is_empty() {
        return Err(Error::usage("noise and round grids must not be empty"));
    }
    let experiments: Vec<(usize, Experiment)> = rs
        .iter()
        .map(|&r| Experiment::identity_bench(r).map(|e| (r, e)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for &p in ps {
        for (r, exp) in &experiments {
            let point = seed::point_seed(seed, p, Some(*r));
            let run = run_trials(exp, p, shots, trials, point)?;
            let boot = BootstrapSettings {
                seed: seed::bootstrap_seed(point),
                ..BootstrapSettings::default()
            };
            let pt = SweepPoint::from_trials(p, 4, 0, Some(*r), &run.outcomes, boot)?;
            out.push(IdentityPoint {
                p,
                r: *r,
                shots,
                trials,
                success: pt.success,
                survival: pt.survival,
                ci_low: pt.ci_low,
                ci_high: pt.ci_high,
            });
        }
    }
    Ok(out)
}

/// Accepts only the identity benchmark's round counts.
pub fn check_identity_rounds(rs: &[usize]) -> Result<()> {
    for &r in rs {
        Experiment::identity_bench(r)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_grid_order() {
        let mut cfg = SweepConfig::new(GroverSpec::new(2, 1).unwrap());
        cfg.ps = vec![0.001, 0.002];
        cfg.rs = vec![1, 2];
        assert_eq!(
            cfg.grid(),
            vec![
                (0.001, None),
                (0.001, Some(1)),
                (0.001, Some(2)),
                (0.002, None),
                (0.002, Some(1)),
                (0.002, Some(2))
            ]
        );
    }

    #[test]
    fn statmodel_midpoint() {
        let rows = statmodel(&[0.1], &[0.3], 10).unwrap();
        assert!((rows[0].gamma - 0.5).abs() < 1e-15);
    }
}
