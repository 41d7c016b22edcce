//! Certificate bundles: the output of `sumprod certify`.
//!
//! A bundle is a line-oriented text file holding the measured sizes, the
//! chain and separable certificates, and a checked inequality ledger:
//!
//!   (i)   chain length >= the guaranteed chain bound,
//!   (ii)  separable length >= ceil(chain length / q),
//!   (iii) 3 |U+U| >= |U|^2 for the extracted separable set U,
//!   (iv)  the growth lower bound implied by (i)-(iii) alone,
//!         (bound/q)^2 / 3, stays below the measured max(|A+A|, |AA|).
//!
//! Bundles re-verify from their serialized form: the certificates are parsed
//! back and checked against the definitions, and every ledger line is
//! recomputed from scratch.

use num::bigint::BigInt;
use num::rational::BigRational;

use sumprod_core::geometry::{chain_from_elements, verify_separable};
use sumprod_core::notation::{
    chain_line, parse_chain_line, parse_laurent, parse_padic, parse_separable_line,
    separable_line, AnySet,
};
use sumprod_core::report::{growth_report, Budgets, GrowthReport};
use sumprod_core::sumset::{sumset, FiniteSet};
use sumprod_core::valued::ValuedElement;

use crate::error::CliError;
use crate::with_set;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub lhs: String,
    pub op: &'static str,
    pub rhs: String,
    pub pass: bool,
}

impl Check {
    fn render(&self) -> String {
        format!(
            "check: {}: {} {} {}: {}",
            self.name,
            self.lhs,
            self.op,
            self.rhs,
            if self.pass { "pass" } else { "fail" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub input: String,
    pub ambient: String,
    pub set_size: usize,
    pub sum_size: usize,
    pub prod_size: usize,
    pub chain: String,
    pub separable: String,
    pub checks: Vec<Check>,
}

impl Bundle {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("# certificate bundle\n");
        out.push_str(&format!("# input: {}\n", self.input));
        out.push_str(&format!("ambient: {}\n", self.ambient));
        out.push_str(&format!("set-size: {}\n", self.set_size));
        out.push_str(&format!("sum-size: {}\n", self.sum_size));
        out.push_str(&format!("prod-size: {}\n", self.prod_size));
        out.push_str(&self.chain);
        out.push('\n');
        out.push_str(&self.separable);
        out.push('\n');
        for check in &self.checks {
            out.push_str(&check.render());
            out.push('\n');
        }
        out
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn build_checks<T: ValuedElement>(
    report: &GrowthReport<T>,
    separable_sum: usize,
    base: u64,
) -> Vec<Check> {
    let chain_len = BigRational::from(BigInt::from(report.chain.len() as u64));
    let sep_len = report.separable.len() as u64;

    let check1 = Check {
        name: "chain-length-vs-bound".into(),
        lhs: report.chain.len().to_string(),
        op: ">=",
        rhs: report.chain_bound.to_string(),
        pass: chain_len >= report.chain_bound,
    };
    let check2 = Check {
        name: "separable-vs-class-bound".into(),
        lhs: sep_len.to_string(),
        op: ">=",
        rhs: report.sep_bound.to_string(),
        pass: sep_len >= report.sep_bound,
    };
    let growth_lhs = 3 * separable_sum as u64;
    let growth_rhs = sep_len * sep_len;
    let check3 = Check {
        name: "separable-sumset-growth".into(),
        lhs: format!("3*{separable_sum}"),
        op: ">=",
        rhs: growth_rhs.to_string(),
        pass: growth_lhs >= growth_rhs,
    };
    // Using only (i)-(iii): max growth >= |U+U| >= |U|^2/3 with
    // |U| >= bound/q, i.e. (bound/q)^2 / 3.
    let implied = &report.chain_bound * &report.chain_bound
        / BigRational::from(BigInt::from(3 * base * base));
    let measured = BigRational::from(BigInt::from(report.sum_size.max(report.prod_size) as u64));
    let check4 = Check {
        name: "implied-growth-lower-bound".into(),
        lhs: implied.to_string(),
        op: "<=",
        rhs: measured.to_string(),
        pass: implied <= measured,
    };
    vec![check1, check2, check3, check4]
}

fn certify_typed<T: ValuedElement>(
    set: &FiniteSet<T>,
    input: &str,
    budgets: &Budgets,
) -> Result<Bundle, CliError> {
    let report = growth_report(set, budgets)?;
    let extracted = FiniteSet::new(report.separable.elements.clone())?;
    let separable_sum = sumset(&extracted, &extracted)?.len();
    let checks = build_checks(&report, separable_sum, set.base());
    Ok(Bundle {
        input: input.to_string(),
        ambient: set.ambient_label(),
        set_size: report.size,
        sum_size: report.sum_size,
        prod_size: report.prod_size,
        chain: chain_line(&report.chain),
        separable: separable_line(&report.separable),
        checks,
    })
}

/// Builds the certificate bundle for a set.
pub fn certify_set(set: &AnySet, input: &str, budgets: &Budgets) -> Result<Bundle, CliError> {
    with_set!(set, |s| certify_typed(s, input, budgets))
}

/// Parsed view of a bundle file.
#[derive(Debug, Clone)]
pub struct ParsedBundle {
    pub input: Option<String>,
    pub ambient: String,
    pub set_size: usize,
    pub sum_size: usize,
    pub prod_size: usize,
    pub chain: String,
    pub separable: String,
    pub checks: Vec<(String, bool)>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Verification(msg.into())
}

pub fn parse_bundle(text: &str) -> Result<ParsedBundle, CliError> {
    let mut input = None;
    let mut ambient = None;
    let mut set_size = None;
    let mut sum_size = None;
    let mut prod_size = None;
    let mut chain = None;
    let mut separable = None;
    let mut checks = Vec::new();
    for raw in text.lines() {
        let line = raw.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# input:") {
            input = Some(rest.trim().to_string());
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("ambient:") {
            ambient = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("set-size:") {
            set_size = Some(parse_usize(rest)?);
        } else if let Some(rest) = line.strip_prefix("sum-size:") {
            sum_size = Some(parse_usize(rest)?);
        } else if let Some(rest) = line.strip_prefix("prod-size:") {
            prod_size = Some(parse_usize(rest)?);
        } else if line.starts_with("chain:") {
            chain = Some(line.to_string());
        } else if line.starts_with("separable:") {
            separable = Some(line.to_string());
        } else if let Some(rest) = line.strip_prefix("check:") {
            let rest = rest.trim();
            let (body, verdict) = rest
                .rsplit_once(':')
                .ok_or_else(|| bad(format!("malformed check line `{line}`")))?;
            let pass = match verdict.trim() {
                "pass" => true,
                "fail" => false,
                other => return Err(bad(format!("unknown verdict `{other}`"))),
            };
            let name = body
                .split(':')
                .next()
                .ok_or_else(|| bad(format!("malformed check line `{line}`")))?;
            checks.push((name.trim().to_string(), pass));
        } else {
            return Err(bad(format!("unexpected bundle line `{line}`")));
        }
    }
    Ok(ParsedBundle {
        input,
        ambient: ambient.ok_or_else(|| bad("bundle lacks an ambient line"))?,
        set_size: set_size.ok_or_else(|| bad("bundle lacks set-size"))?,
        sum_size: sum_size.ok_or_else(|| bad("bundle lacks sum-size"))?,
        prod_size: prod_size.ok_or_else(|| bad("bundle lacks prod-size"))?,
        chain: chain.ok_or_else(|| bad("bundle lacks a chain line"))?,
        separable: separable.ok_or_else(|| bad("bundle lacks a separable line"))?,
        checks,
    })
}

fn parse_usize(text: &str) -> Result<usize, CliError> {
    text.trim()
        .parse()
        .map_err(|_| bad(format!("bad integer `{}` in bundle", text.trim())))
}

fn verify_typed<T: ValuedElement>(
    set: &FiniteSet<T>,
    parsed: &ParsedBundle,
    budgets: &Budgets,
    parse_elem: impl Fn(&str) -> Result<T, sumprod_core::notation::ParseError>,
) -> Result<(), CliError> {
    // Definition-level re-verification of both certificates.
    let chain_elems = parse_chain_line(&parsed.chain, &parse_elem)?;
    chain_from_elements(set, chain_elems)?;
    let sep = parse_separable_line(&parsed.separable, &parse_elem)?;
    verify_separable(&sep)?;
    for e in &sep.elements {
        if !set.contains(e) {
            return Err(bad(format!("separable element `{e}` is not in the set")));
        }
    }
    // Recompute the measurements and the ledger from scratch.
    let fresh = certify_typed(set, parsed.input.as_deref().unwrap_or(""), budgets)?;
    if fresh.set_size != parsed.set_size
        || fresh.sum_size != parsed.sum_size
        || fresh.prod_size != parsed.prod_size
    {
        return Err(bad("bundle sizes do not match the set"));
    }
    if fresh.chain != parsed.chain || fresh.separable != parsed.separable {
        return Err(bad("bundle certificates do not match a fresh run"));
    }
    let fresh_checks: Vec<(String, bool)> =
        fresh.checks.iter().map(|c| (c.name.clone(), c.pass)).collect();
    if fresh_checks != parsed.checks {
        return Err(bad("bundle check ledger does not match a fresh evaluation"));
    }
    if !parsed.checks.iter().all(|(_, pass)| *pass) {
        return Err(bad("bundle records a failing check"));
    }
    Ok(())
}

/// Re-verifies a serialized bundle against its input set: certificates are
/// checked against the definitions and the ledger is recomputed.
pub fn verify_bundle(set: &AnySet, text: &str, budgets: &Budgets) -> Result<(), CliError> {
    let parsed = parse_bundle(text)?;
    if parsed.ambient != set.ambient_label() {
        return Err(bad(format!(
            "bundle ambient `{}` does not match the set ambient `{}`",
            parsed.ambient,
            set.ambient_label()
        )));
    }
    match set {
        AnySet::Laurent(s) => {
            let spec = std::sync::Arc::clone(s.elements()[0].spec());
            verify_typed(s, &parsed, budgets, move |text| parse_laurent(text, &spec))
        }
        AnySet::Padic(s) => {
            let p = s.elements()[0].p();
            verify_typed(s, &parsed, budgets, move |text| parse_padic(text, p))
        }
    }
}

/// Convenience for tests: certify from an ambient-tagged set built in code.
pub fn certify_any(set: &AnySet, input: &str) -> Result<Bundle, CliError> {
    certify_set(set, input, &Budgets::default())
}
