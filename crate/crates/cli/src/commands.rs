//! Implementations behind the `sumprod` subcommands. Each returns the text
//! it produced so the binary (and the tests) decide where it goes.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::json;

use sumprod_core::notation::{
    chain_line, read_set_file, separable_line, serialize_set_file, write_report_csv, AnySet,
};
use sumprod_core::report::{growth_report, Budgets, ReportRow};

use crate::bundle::{certify_set, verify_bundle, Bundle};
use crate::error::CliError;
use crate::family::{generate, FamilySpec};
use crate::verify::{render, run_suite};
use crate::with_set;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[value(name = "csv")]
    Csv,
    #[value(name = "json")]
    Json,
}

pub fn run_gen(spec: &FamilySpec) -> Result<String, CliError> {
    let (set, comments) = generate(spec)?;
    let text = serialize_set_file(&comments, &set);
    // Emitted files must survive their own grammar (extreme progression
    // parameters can push exponents past the literal caps).
    let (reparsed, _) = sumprod_core::notation::parse_set_text(&text).map_err(|e| {
        CliError::Usage(format!("generated set does not round-trip the literal grammar: {e}"))
    })?;
    if reparsed != set {
        return Err(CliError::Usage("generated set does not round-trip canonically".into()));
    }
    Ok(text)
}

pub struct AnalyzeOptions {
    pub inputs: Vec<PathBuf>,
    pub format: OutputFormat,
    pub jobs: usize,
    pub budgets: Budgets,
}

fn check_size(set: &AnySet, budgets: &Budgets) -> Result<(), CliError> {
    if set.len() < 2 {
        return Err(CliError::Usage(
            "growth statistics need at least two elements".into(),
        ));
    }
    if set.len() > budgets.max_size {
        return Err(CliError::Resource(format!(
            "set of size {} exceeds --max-size {}",
            set.len(),
            budgets.max_size
        )));
    }
    Ok(())
}

struct AnalyzedInput {
    row: ReportRow,
    chain: String,
    separable: String,
}

fn analyze_one(path: &Path, budgets: &Budgets) -> Result<AnalyzedInput, CliError> {
    let (set, meta) = read_set_file(path)?;
    check_size(&set, budgets)?;
    let family = meta.family.unwrap_or_else(|| "custom".to_string());
    with_set!(&set, |s| {
        let report = growth_report(s, budgets)?;
        Ok(AnalyzedInput {
            row: ReportRow::from_report(&family, &s.ambient_label(), &report),
            chain: chain_line(&report.chain),
            separable: separable_line(&report.separable),
        })
    })
}

/// Analyzes every input (in name order, optionally in parallel) and renders
/// the frozen CSV schema or a JSON array embedding both certificates.
pub fn run_analyze(opts: &AnalyzeOptions) -> Result<String, CliError> {
    if opts.inputs.is_empty() {
        return Err(CliError::Usage("analyze needs at least one input file".into()));
    }
    let mut inputs = opts.inputs.clone();
    inputs.sort();
    let results: Vec<Result<AnalyzedInput, CliError>> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| CliError::Usage(format!("could not build thread pool: {e}")))?;
        pool.install(|| {
            inputs
                .par_iter()
                .map(|path| analyze_one(path, &opts.budgets))
                .collect()
        })
    } else {
        inputs.iter().map(|path| analyze_one(path, &opts.budgets)).collect()
    };
    let mut analyzed = Vec::with_capacity(results.len());
    for r in results {
        analyzed.push(r?);
    }
    match opts.format {
        OutputFormat::Csv => {
            let rows: Vec<ReportRow> = analyzed.into_iter().map(|a| a.row).collect();
            Ok(write_report_csv(&rows))
        }
        OutputFormat::Json => {
            let objects: Vec<serde_json::Value> = analyzed
                .iter()
                .map(|a| {
                    json!({
                        "family": a.row.family,
                        "ambient": a.row.ambient,
                        "n": a.row.n,
                        "sum_size": a.row.sum_size,
                        "prod_size": a.row.prod_size,
                        "e2": a.row.e2,
                        "chain_len": a.row.chain_len,
                        "chain_bound": a.row.chain_bound,
                        "sep_len": a.row.sep_len,
                        "sep_bound": a.row.sep_bound,
                        "k_value": a.row.k_value,
                        "delta_hat": a.row.delta_hat,
                        "chain": a.chain,
                        "separable": a.separable,
                    })
                })
                .collect();
            let mut text = serde_json::to_string_pretty(&objects).expect("serializable");
            text.push('\n');
            Ok(text)
        }
    }
}

/// Certifies one input: emits the bundle and re-verifies it from its own
/// serialized form before reporting success.
pub fn run_certify(input: &Path, budgets: &Budgets) -> Result<(Bundle, String), CliError> {
    let (set, _) = read_set_file(input)?;
    check_size(&set, budgets)?;
    let name = input
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| input.display().to_string());
    let bundle = certify_set(&set, &name, budgets)?;
    let text = bundle.render();
    verify_bundle(&set, &text, budgets)?;
    Ok((bundle, text))
}

/// Runs an invariant suite; returns the line-per-battery summary and
/// whether everything passed.
pub fn run_verify(suite: &str) -> Result<(String, bool), CliError> {
    let batteries = run_suite(suite)?;
    Ok(render(&batteries))
}
