//! Config-driven pipelines and deterministic file output.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Artifact, ExperimentConfig, Format, Mode};
use crate::decoherence::{decohered_walk, DyadEnsemble};
use crate::error::{Error, Result};
use crate::fock::walk_oracle;
use crate::observables::{self, PhaseSpaceSource};
use crate::protocol::{self, LabelChain, ProtocolParams};

/// Oracle fidelity gate reported by `oracle-check`.
pub const ORACLE_FIDELITY_GATE: f64 = 1.0 - 1e-6;

/// Numeric table with one descriptive header line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub description: String,
    pub columns: Vec<String>,
    /// Leading columns holding integers.
    pub index_columns: usize,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = format!("# {}\n{}\n", self.description, self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, v)| if i < self.index_columns { format!("{}", *v as i64) } else { format!("{v:.12e}") })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables hold finite numbers");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let description = lines
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| Error::Config("table lacks its header comment".into()))?
            .to_string();
        let columns: Vec<String> = lines
            .next()
            .ok_or_else(|| Error::Config("table lacks a column header".into()))?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        let mut index_columns = usize::MAX;
        for line in lines {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != columns.len() {
                return Err(Error::Config(format!("row has {} cells, header has {}", cells.len(), columns.len())));
            }
            let ints = cells.iter().take_while(|c| !c.contains(['e', '.'])).count();
            index_columns = index_columns.min(ints);
            rows.push(
                cells
                    .iter()
                    .map(|c| c.parse::<f64>().map_err(|_| Error::Config(format!("bad cell {c:?}"))))
                    .collect::<Result<Vec<f64>>>()?,
            );
        }
        Ok(Self { description, columns, index_columns: if rows.is_empty() { 0 } else { index_columns }, rows })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `(j, Re αⱼ, Im αⱼ, θⱼ)` for `j ∈ [−n_max, n_max]`.
pub fn alpha_table(chain: &LabelChain) -> Table {
    Table {
        description: "coherent labels: index j, Re(alpha_j), Im(alpha_j), accumulated phase theta_j in rad".into(),
        columns: vec!["j".into(), "re_alpha".into(), "im_alpha".into(), "theta".into()],
        index_columns: 1,
        rows: chain
            .indices()
            .map(|j| {
                let l = chain.label(j);
                vec![j as f64, l.amplitude.re, l.amplitude.im, l.phase]
            })
            .collect(),
    }
}

fn density_table<S: PhaseSpaceSource + ?Sized>(source: &S, grid: &observables::PhaseSpaceGrid) -> Table {
    let field = observables::position_density(source, grid);
    Table {
        description: "position probability density: x, rho(x) = <x|rho|x>".into(),
        columns: vec!["x".into(), "density".into()],
        index_columns: 0,
        rows: grid.xs().into_iter().zip(field.values).map(|(x, d)| vec![x, d]).collect(),
    }
}

fn wigner_table(field: &observables::GridField) -> Table {
    let g = field.grid;
    Table {
        description: format!("Wigner function on a {}x{} grid, x-major: x, p, W(x,p)", g.nx, g.np),
        columns: vec!["x".into(), "p".into(), "w".into()],
        index_columns: 0,
        rows: (0..g.nx)
            .flat_map(|i| (0..g.np).map(move |k| (i, k)))
            .map(|(i, k)| vec![g.x(i), g.p(k), field.at(i, k)])
            .collect(),
    }
}

fn diagnostics_file(values: &BTreeMap<String, f64>, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("# scalar diagnostics: quantity name, value\nquantity,value\n");
            for (k, v) in values {
                out.push_str(&format!("{k},{v:.12e}\n"));
            }
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(values).expect("finite diagnostics");
            s.push('\n');
            s
        }
    }
}

/// Parse a diagnostics file written by [`run`].
pub fn parse_diagnostics(text: &str, format: Format) -> Result<BTreeMap<String, f64>> {
    match format {
        Format::Json => Ok(serde_json::from_str(text)?),
        Format::Csv => {
            let mut out = BTreeMap::new();
            for line in text.lines().skip(2) {
                let (k, v) = line.split_once(',').ok_or_else(|| Error::Config(format!("bad line {line:?}")))?;
                out.insert(k.to_string(), v.parse().map_err(|_| Error::Config(format!("bad value {v:?}")))?);
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    pub artifact: Artifact,
    pub case: Option<String>,
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub label: String,
    pub n: usize,
    pub xi: String,
    pub diagnostics: BTreeMap<String, f64>,
    pub summary: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub mode: Mode,
    pub config: BTreeMap<String, String>,
    pub cases: Vec<CaseReport>,
    pub outputs: Vec<OutputFile>,
    pub warnings: Vec<String>,
    /// Not written to disk, so reports stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

struct CaseOutput {
    report: CaseReport,
    files: Vec<(Artifact, String)>,
    warnings: Vec<String>,
}

fn case_label(pp: &ProtocolParams) -> String {
    if pp.xi.is_infinite() {
        format!("n{}_xiinf", pp.n)
    } else {
        format!("n{}_xi{}", pp.n, pp.xi)
    }
}

fn sink_observables<S: PhaseSpaceSource + ?Sized>(
    cfg: &ExperimentConfig,
    source: &S,
    diag: &mut BTreeMap<String, f64>,
    files: &mut Vec<(Artifact, String)>,
    warnings: &mut Vec<String>,
) {
    let support = source.support();
    let (grid, expanded) = cfg.grid.covering(support.iter());
    if expanded {
        warnings.push(format!("grid expanded from {} to {grid} to cover every label", cfg.grid));
    }
    let m = observables::moments(source);
    diag.insert("mean_x".into(), m.mean_x);
    diag.insert("mean_p".into(), m.mean_p);
    diag.insert("var_x".into(), m.var_x);
    diag.insert("var_p".into(), m.var_p);
    if cfg.outputs.contains(&Artifact::Pdist) {
        files.push((Artifact::Pdist, density_table(source, &grid).render(cfg.format)));
    }
    let want_wigner = cfg.outputs.contains(&Artifact::Wigner);
    let want_diag = cfg.outputs.contains(&Artifact::Diagnostics);
    if want_wigner || want_diag {
        let field = observables::wigner(source, &grid);
        let d = if want_diag {
            observables::diagnostics(source, &grid)
        } else {
            observables::diagnostics_from(source, &field, None)
        };
        diag.insert("min_w".into(), d.min_w);
        diag.insert("negativity_volume".into(), d.negativity_volume);
        diag.insert("wigner_integral".into(), field.integral());
        diag.insert("wigner_imag_residue".into(), field.imag_residue);
        if let Some(w) = d.grid_warning {
            warnings.push(w);
        }
        if want_wigner {
            files.push((Artifact::Wigner, wigner_table(&field).render(cfg.format)));
        }
    }
}

fn run_case(cfg: &ExperimentConfig, pp: &ProtocolParams) -> Result<CaseOutput> {
    let mut diag = BTreeMap::new();
    let mut files = Vec::new();
    let mut warnings = Vec::new();
    let mut summary = Vec::new();
    let label = case_label(pp);
    match cfg.mode {
        Mode::Walk => {
            let (state, p) = protocol::walk_state_with_probability(pp)?;
            diag.insert("success_probability".into(), p);
            sink_observables(cfg, &state, &mut diag, &mut files, &mut warnings);
        }
        Mode::Cat => {
            let rho = DyadEnsemble::cat_with_suppression(pp, cfg.outcome, 2.0 * pp.n as f64 * pp.xi)?;
            let n = pp.n as i32;
            diag.insert("outcome_probability".into(), rho.record_probability());
            diag.insert("purity".into(), rho.purity());
            diag.insert("coherence_ratio".into(), rho.coherence_ratio(-n, n));
            diag.insert("phi_prime".into(), protocol::cat_phase(pp));
            sink_observables(cfg, &rho, &mut diag, &mut files, &mut warnings);
        }
        Mode::Decohere => {
            let rho = decohered_walk(pp)?;
            let inv = rho.invariants();
            diag.insert("success_probability".into(), rho.record_probability());
            diag.insert("purity".into(), rho.purity());
            diag.insert("cross_weight".into(), rho.cross_weight());
            diag.insert("trace_error".into(), inv.trace_error);
            diag.insert("min_eigenvalue".into(), inv.min_eigenvalue);
            sink_observables(cfg, &rho, &mut diag, &mut files, &mut warnings);
        }
        Mode::OracleCheck => {
            let r = walk_oracle(pp, &cfg.oracle)?;
            diag.insert("fidelity".into(), r.fidelity);
            diag.insert("infidelity".into(), 1.0 - r.fidelity);
            diag.insert("record_probability".into(), r.record_probability);
            diag.insert("closed_record_probability".into(), r.closed_record_probability);
            diag.insert("phi".into(), r.model.phi());
            diag.insert("eta".into(), r.model.eta);
            let verdict = if r.fidelity >= ORACLE_FIDELITY_GATE { "fidelity ≥ 0.999999" } else { "fidelity < 0.999999" };
            summary.push(format!(
                "n={} {verdict} (fidelity {:.9}, {:?} form, eta {:.0e}, cutoff {})",
                pp.n, r.fidelity, cfg.oracle.form, cfg.oracle.eta, cfg.oracle.cutoff
            ));
        }
        Mode::AlphaTable => {}
    }
    if cfg.mode != Mode::AlphaTable && cfg.outputs.contains(&Artifact::Diagnostics) {
        files.push((Artifact::Diagnostics, diagnostics_file(&diag, cfg.format)));
    }
    let xi = if pp.xi.is_infinite() { "inf".to_string() } else { format!("{}", pp.xi) };
    Ok(CaseOutput { report: CaseReport { label, n: pp.n, xi, diagnostics: diag, summary }, files, warnings })
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write(dir: &Path, name: &str, content: &str) -> Result<String> {
    fs::write(dir.join(name), content)?;
    Ok(sha256_hex(content.as_bytes()))
}

/// Run every case of `cfg` and write the requested files plus `report.json`.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport> {
    let start = Instant::now();
    cfg.grid.validate().map_err(|e| Error::Config(e.to_string()))?;
    fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| Error::Config(format!("cannot create {}: {e}", cfg.output_dir.display())))?;
    let mut warnings: Vec<String> = cfg.physical.map(|p| p.regime_warnings()).unwrap_or_default();

    let cases = if cfg.mode == Mode::AlphaTable { Vec::new() } else { cfg.cases() };
    let results: Vec<Result<CaseOutput>> = cases.par_iter().map(|pp| run_case(cfg, pp)).collect();

    let ext = cfg.format.extension();
    let mut outputs = Vec::new();
    let mut reports = Vec::new();
    if cfg.outputs.contains(&Artifact::AlphaTable) || cfg.mode == Mode::AlphaTable {
        let pp = &cfg.protocol;
        let chain = match cfg.mode {
            Mode::Cat => LabelChain::cat(pp.alpha0, pp.l1, pp.l2, cfg.n_max)?,
            _ => LabelChain::walk(pp.alpha0, pp.l1, pp.l2, cfg.n_max)?,
        };
        let name = format!("{}_alpha-table.{ext}", cfg.mode);
        let sha256 = write(&cfg.output_dir, &name, &alpha_table(&chain).render(cfg.format))?;
        outputs.push(OutputFile { artifact: Artifact::AlphaTable, case: None, path: name, sha256 });
    }
    for result in results {
        let out = result?;
        for (artifact, content) in &out.files {
            let name = format!("{}_{}_{}.{ext}", cfg.mode, out.report.label, artifact.name());
            let sha256 = write(&cfg.output_dir, &name, content)?;
            outputs.push(OutputFile { artifact: *artifact, case: Some(out.report.label.clone()), path: name, sha256 });
        }
        warnings.extend(out.warnings.into_iter().map(|w| format!("{}: {w}", out.report.label)));
        reports.push(out.report);
    }
    let mut report = RunReport {
        mode: cfg.mode,
        config: cfg.echo.clone(),
        cases: reports,
        outputs,
        warnings,
        wall_time: Duration::ZERO,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    fs::write(cfg.output_dir.join("report.json"), text)?;
    report.wall_time = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_round_trip() {
        let chain = LabelChain::walk(num_complex::Complex64::new(0.0, 0.0), 0.1, 0.01, 2).unwrap();
        let t = alpha_table(&chain);
        assert_eq!(t.rows.len(), 5);
        let csv = t.to_csv();
        assert!(csv.starts_with("# coherent labels"));
        assert!(csv.contains("\n1,3.141075907"));
        let back = Table::from_csv(&csv).unwrap();
        assert_eq!(back.columns, t.columns);
        assert_eq!(back.index_columns, 1);
        for (a, b) in back.rows.iter().flatten().zip(t.rows.iter().flatten()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
        }
        assert_eq!(Table::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn diagnostics_round_trip() {
        let mut m = BTreeMap::new();
        m.insert("mean_x".to_string(), -1.25);
        m.insert("purity".to_string(), 0.5);
        for f in [Format::Csv, Format::Json] {
            assert_eq!(parse_diagnostics(&diagnostics_file(&m, f), f).unwrap(), m);
        }
    }
}
