//! The textual boundary: element literals, set files, report CSV, and
//! certificate lines.
//!
//! Canonical serialization is the `Display` form of each element; it defines
//! the total element order used for every deterministic tie-break in the
//! library, so there is exactly one source of truth. Output is UTF-8 with LF
//! line endings; parsing tolerates trailing CR.
//!
//! Element grammar (whitespace-insensitive between tokens):
//!
//! ```text
//! element := term ("+" term)*
//! term    := coeff | coeff "*" tpart | tpart
//! tpart   := "t" ["^" int]
//! coeff   := int | "(" int ("," int)* ")"
//! padic   := int | int "/" p "^" uint
//! ```
//!
//! Integer coefficients are reduced into `F_q`; coefficient tuples are only
//! accepted over extension fields and may not exceed the extension degree.
//! Exponents are capped at `|i| ≤ 10^6`.

use std::path::Path;
use std::sync::Arc;

use num::bigint::BigInt;
use thiserror::Error;

use crate::field::{FieldElement, FieldError, FieldSpec};
use crate::geometry::{Ball, ChainCertificate, SeparableCertificate};
use crate::report::ReportRow;
use crate::sumset::{FiniteSet, SetError};
use crate::valued::{Laurent, Padic, ValuedElement};

/// Largest exponent magnitude accepted by the grammar.
pub const MAX_EXPONENT: i64 = 1_000_000;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, col {col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}, col {col}: coefficient out of range: {msg}")]
    CoefficientRange { line: usize, col: usize, msg: String },
    #[error("line {line}, col {col}: exponent {value} out of range (|i| <= {MAX_EXPONENT})")]
    ExponentRange { line: usize, col: usize, value: i64 },
    #[error("line {line}, col {col}: denominator base {found} does not match ambient p = {expected}")]
    WrongBase { line: usize, col: usize, expected: u32, found: String },
    #[error("bad header: {0}")]
    Header(String),
    #[error("line {line}: duplicate element `{literal}`")]
    DuplicateElement { line: usize, literal: String },
    #[error("set file has an empty body; sets must be non-empty")]
    EmptyBody,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

// ---- lexer ----

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Star,
    Caret,
    TSym,
    Slash,
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, col));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, col));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, col));
                i += 1;
            }
            't' => {
                toks.push((Tok::TSym, col));
                i += 1;
            }
            '-' | '0'..='9' => {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                if text == "-" {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: "`-` must be followed by digits".into(),
                    });
                }
                toks.push((Tok::Num(text), col));
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(toks)
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    len: usize,
}

impl<'a> Cursor<'a> {
    fn new(toks: &'a [(Tok, usize)], line: usize, text_len: usize) -> Self {
        Cursor { toks, pos: 0, line, len: text_len }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.len + 1)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t);
        self.pos += 1;
        t
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col(), msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn int(&mut self, what: &str) -> Result<(i64, usize), ParseError> {
        let col = self.col();
        let line = self.line;
        match self.next() {
            Some(Tok::Num(s)) => match s.parse::<i64>() {
                Ok(v) => Ok((v, col)),
                Err(_) => Err(ParseError::CoefficientRange {
                    line,
                    col,
                    msg: format!("`{s}` does not fit a 64-bit integer"),
                }),
            },
            _ => Err(ParseError::Syntax { line, col, msg: format!("expected {what}") }),
        }
    }

    fn bignum(&mut self, what: &str) -> Result<(BigInt, usize), ParseError> {
        let col = self.col();
        let line = self.line;
        match self.next() {
            Some(Tok::Num(s)) => Ok((s.parse().expect("lexer produced digits"), col)),
            _ => Err(ParseError::Syntax { line, col, msg: format!("expected {what}") }),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }
}

fn check_exponent(value: i64, line: usize, col: usize) -> Result<i64, ParseError> {
    if value.abs() > MAX_EXPONENT {
        Err(ParseError::ExponentRange { line, col, value })
    } else {
        Ok(value)
    }
}

/// Parses one Laurent element literal.
pub fn parse_laurent(text: &str, spec: &Arc<FieldSpec>) -> Result<Laurent, ParseError> {
    parse_laurent_at(text, spec, 1)
}

fn parse_laurent_at(text: &str, spec: &Arc<FieldSpec>, line: usize) -> Result<Laurent, ParseError> {
    let toks = lex(text, line)?;
    let mut cur = Cursor::new(&toks, line, text.chars().count());
    if cur.at_end() {
        return Err(cur.syntax("empty element literal"));
    }
    let mut terms: Vec<(i64, FieldElement)> = Vec::new();
    loop {
        terms.push(parse_term(&mut cur, spec)?);
        match cur.peek() {
            Some(Tok::Plus) => {
                cur.next();
            }
            None => break,
            Some(_) => return Err(cur.syntax("expected `+` or end of literal")),
        }
    }
    Ok(Laurent::new(spec, terms)?)
}

fn parse_term(
    cur: &mut Cursor<'_>,
    spec: &Arc<FieldSpec>,
) -> Result<(i64, FieldElement), ParseError> {
    match cur.peek() {
        Some(Tok::TSym) => {
            let exp = parse_tpart(cur)?;
            Ok((exp, FieldElement::one(spec)))
        }
        Some(Tok::Num(_)) | Some(Tok::LParen) => {
            let coeff = parse_coeff(cur, spec)?;
            match cur.peek() {
                Some(Tok::Star) => {
                    cur.next();
                    let exp = parse_tpart(cur)?;
                    Ok((exp, coeff))
                }
                _ => Ok((0, coeff)),
            }
        }
        _ => Err(cur.syntax("expected a term")),
    }
}

fn parse_tpart(cur: &mut Cursor<'_>) -> Result<i64, ParseError> {
    cur.expect(Tok::TSym, "`t`")?;
    match cur.peek() {
        Some(Tok::Caret) => {
            cur.next();
            let line = cur.line;
            let (v, col) = cur.int("an exponent")?;
            check_exponent(v, line, col)
        }
        _ => Ok(1),
    }
}

fn parse_coeff(cur: &mut Cursor<'_>, spec: &Arc<FieldSpec>) -> Result<FieldElement, ParseError> {
    match cur.peek() {
        Some(Tok::Num(_)) => {
            let (v, _) = cur.int("a coefficient")?;
            Ok(FieldElement::from_int(spec, v))
        }
        Some(Tok::LParen) => {
            let open_col = cur.col();
            cur.next();
            let mut coords = Vec::new();
            loop {
                let (v, _) = cur.int("a coefficient coordinate")?;
                coords.push(v);
                match cur.next() {
                    Some(Tok::Comma) => continue,
                    Some(Tok::RParen) => break,
                    _ => {
                        return Err(ParseError::Syntax {
                            line: cur.line,
                            col: cur.col(),
                            msg: "expected `,` or `)` in coefficient vector".into(),
                        })
                    }
                }
            }
            if spec.e() == 1 {
                return Err(ParseError::CoefficientRange {
                    line: cur.line,
                    col: open_col,
                    msg: "coefficient vectors are only valid over extension fields".into(),
                });
            }
            FieldElement::new(spec, &coords).map_err(|_| ParseError::CoefficientRange {
                line: cur.line,
                col: open_col,
                msg: format!(
                    "vector of length {} does not fit extension degree {}",
                    coords.len(),
                    spec.e()
                ),
            })
        }
        _ => Err(cur.syntax("expected a coefficient")),
    }
}

/// Parses one p-adic element literal: `int` or `int/p^uint`.
pub fn parse_padic(text: &str, p: u32) -> Result<Padic, ParseError> {
    parse_padic_at(text, p, 1)
}

fn parse_padic_at(text: &str, p: u32, line: usize) -> Result<Padic, ParseError> {
    let toks = lex(text, line)?;
    let mut cur = Cursor::new(&toks, line, text.chars().count());
    let (num, _) = cur.bignum("a numerator")?;
    if cur.at_end() {
        return Ok(Padic::new(p, num, 0)?);
    }
    cur.expect(Tok::Slash, "`/`")?;
    let (base, base_col) = cur.bignum("the denominator base")?;
    if base != BigInt::from(p) {
        return Err(ParseError::WrongBase {
            line,
            col: base_col,
            expected: p,
            found: base.to_string(),
        });
    }
    cur.expect(Tok::Caret, "`^`")?;
    let (sexp, sexp_col) = cur.int("a non-negative exponent")?;
    if sexp < 0 {
        return Err(ParseError::Syntax {
            line,
            col: sexp_col,
            msg: "denominator exponent must be non-negative".into(),
        });
    }
    let sexp = check_exponent(sexp, line, sexp_col)?;
    if !cur.at_end() {
        return Err(cur.syntax("trailing input after literal"));
    }
    Ok(Padic::new(p, num, sexp as u32)?)
}

/// Canonical text form of any element; inverse of the parsers.
pub fn format_element<T: ValuedElement>(x: &T) -> String {
    x.to_string()
}

// ---- ambients and set files ----

/// Runtime ambient descriptor: `field: <spec>` or `padic: p=<p>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ambient {
    Field(Arc<FieldSpec>),
    Padic(u32),
}

impl Ambient {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("field:") {
            let spec = FieldSpec::parse(rest.trim())?;
            return Ok(Ambient::Field(Arc::new(spec)));
        }
        if let Some(rest) = text.strip_prefix("padic:") {
            let rest = rest.trim();
            let p = rest
                .strip_prefix("p=")
                .and_then(|v| v.trim().parse::<u32>().ok())
                .ok_or_else(|| ParseError::Header(format!("bad p-adic descriptor `{text}`")))?;
            // Validates primality.
            Padic::from_integer(p, 0)?;
            return Ok(Ambient::Padic(p));
        }
        Err(ParseError::Header(format!(
            "ambient must start with `field:` or `padic:`, got `{text}`"
        )))
    }

    pub fn label(&self) -> String {
        match self {
            Ambient::Field(spec) => format!("field: {spec}"),
            Ambient::Padic(p) => format!("padic: p={p}"),
        }
    }
}

impl std::fmt::Display for Ambient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A finite set in whichever ambient a file declared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnySet {
    Laurent(FiniteSet<Laurent>),
    Padic(FiniteSet<Padic>),
}

impl AnySet {
    pub fn len(&self) -> usize {
        match self {
            AnySet::Laurent(s) => s.len(),
            AnySet::Padic(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ambient(&self) -> Ambient {
        match self {
            AnySet::Laurent(s) => Ambient::Field(Arc::clone(s.elements()[0].spec())),
            AnySet::Padic(s) => Ambient::Padic(s.elements()[0].p()),
        }
    }

    pub fn ambient_label(&self) -> String {
        match self {
            AnySet::Laurent(s) => s.ambient_label(),
            AnySet::Padic(s) => s.ambient_label(),
        }
    }
}

/// Non-structural metadata carried by a set file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SetFileMeta {
    /// Contents of a `# family: ...` comment, when present.
    pub family: Option<String>,
    /// All comment lines, verbatim.
    pub comments: Vec<String>,
}

/// Parses a set file: comments, one ambient header line, one element literal
/// per line. Duplicate values (even under different spellings) are a hard
/// error naming the offending line.
pub fn parse_set_text(text: &str) -> Result<(AnySet, SetFileMeta), ParseError> {
    let mut meta = SetFileMeta::default();
    let mut ambient: Option<Ambient> = None;
    let mut laurent_elems: Vec<Laurent> = Vec::new();
    let mut padic_elems: Vec<Padic> = Vec::new();
    let mut seen: std::collections::HashMap<String, usize> = std::collections::HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            meta.comments.push(line.to_string());
            if let Some(fam) = comment.trim().strip_prefix("family:") {
                meta.family = Some(fam.trim().to_string());
            }
            continue;
        }
        match &ambient {
            None => {
                ambient = Some(Ambient::parse(line)?);
            }
            Some(Ambient::Field(spec)) => {
                let elem = parse_laurent_at(line, spec, lineno)?;
                if let Some(_first) = seen.insert(elem.to_string(), lineno) {
                    return Err(ParseError::DuplicateElement {
                        line: lineno,
                        literal: line.to_string(),
                    });
                }
                laurent_elems.push(elem);
            }
            Some(Ambient::Padic(p)) => {
                let elem = parse_padic_at(line, *p, lineno)?;
                if let Some(_first) = seen.insert(elem.to_string(), lineno) {
                    return Err(ParseError::DuplicateElement {
                        line: lineno,
                        literal: line.to_string(),
                    });
                }
                padic_elems.push(elem);
            }
        }
    }
    let ambient = ambient.ok_or_else(|| ParseError::Header("missing ambient header".into()))?;
    let set = match ambient {
        Ambient::Field(_) => {
            if laurent_elems.is_empty() {
                return Err(ParseError::EmptyBody);
            }
            AnySet::Laurent(FiniteSet::new(laurent_elems)?)
        }
        Ambient::Padic(_) => {
            if padic_elems.is_empty() {
                return Err(ParseError::EmptyBody);
            }
            AnySet::Padic(FiniteSet::new(padic_elems)?)
        }
    };
    Ok((set, meta))
}

pub fn read_set_file(path: &Path) -> Result<(AnySet, SetFileMeta), ParseError> {
    let text = std::fs::read_to_string(path)?;
    parse_set_text(&text)
}

/// Serializes a set file in canonical form: the given comment lines, the
/// ambient header, then one canonical literal per line. LF line endings.
pub fn serialize_set_file(comments: &[String], set: &AnySet) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&set.ambient_label());
    out.push('\n');
    match set {
        AnySet::Laurent(s) => {
            for e in s.iter() {
                out.push_str(&e.to_string());
                out.push('\n');
            }
        }
        AnySet::Padic(s) => {
            for e in s.iter() {
                out.push_str(&e.to_string());
                out.push('\n');
            }
        }
    }
    out
}

// ---- certificate lines ----

/// `chain: e1; e2; ...`
pub fn chain_line<T: ValuedElement>(cert: &ChainCertificate<T>) -> String {
    let parts: Vec<String> = cert.elements.iter().map(|e| e.to_string()).collect();
    format!("chain: {}", parts.join("; "))
}

/// `separable: e1; e2; ... | witness: (center, rexp); ...`
pub fn separable_line<T: ValuedElement>(cert: &SeparableCertificate<T>) -> String {
    let elems: Vec<String> = cert.elements.iter().map(|e| e.to_string()).collect();
    let wits: Vec<String> = cert
        .witnesses
        .iter()
        .map(|b| format!("({}, {})", b.center(), b.rexp()))
        .collect();
    format!("separable: {} | witness: {}", elems.join("; "), wits.join("; "))
}

/// Parses the element list of a `chain:` line.
pub fn parse_chain_line<T, F>(line: &str, parse_elem: F) -> Result<Vec<T>, ParseError>
where
    T: ValuedElement,
    F: Fn(&str) -> Result<T, ParseError>,
{
    let body = line
        .trim()
        .strip_prefix("chain:")
        .ok_or_else(|| ParseError::Header("expected `chain:` line".into()))?;
    body.split(';').map(|part| parse_elem(part.trim())).collect()
}

/// Parses a full `separable:` line back into a certificate.
pub fn parse_separable_line<T, F>(
    line: &str,
    parse_elem: F,
) -> Result<SeparableCertificate<T>, ParseError>
where
    T: ValuedElement,
    F: Fn(&str) -> Result<T, ParseError>,
{
    let body = line
        .trim()
        .strip_prefix("separable:")
        .ok_or_else(|| ParseError::Header("expected `separable:` line".into()))?;
    let (elem_part, wit_part) = body
        .split_once("| witness:")
        .ok_or_else(|| ParseError::Header("separable line lacks a witness section".into()))?;
    let elements: Vec<T> = elem_part
        .split(';')
        .map(|part| parse_elem(part.trim()))
        .collect::<Result<_, _>>()?;
    let mut witnesses = Vec::new();
    for part in wit_part.split(';') {
        let part = part.trim();
        let inner = part
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| ParseError::Header(format!("bad witness `{part}`")))?;
        let (center_text, rexp_text) = inner
            .rsplit_once(',')
            .ok_or_else(|| ParseError::Header(format!("bad witness `{part}`")))?;
        let center = parse_elem(center_text.trim())?;
        let rexp: i64 = rexp_text
            .trim()
            .parse()
            .map_err(|_| ParseError::Header(format!("bad witness radius in `{part}`")))?;
        witnesses.push(Ball::new(center, rexp));
    }
    Ok(SeparableCertificate { elements, witnesses })
}

// ---- report CSV ----

/// Frozen column order; see [`ReportRow`].
pub const CSV_COLUMNS: [&str; 12] = [
    "family",
    "ambient",
    "n",
    "sum_size",
    "prod_size",
    "e2",
    "chain_len",
    "chain_bound",
    "sep_len",
    "sep_bound",
    "k_value",
    "delta_hat",
];

/// Renders report rows as CSV text (header + one line per row).
pub fn write_report_csv(rows: &[ReportRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_COLUMNS).expect("in-memory write");
    for row in rows {
        writer
            .write_record([
                row.family.as_str(),
                row.ambient.as_str(),
                &row.n.to_string(),
                &row.sum_size.to_string(),
                &row.prod_size.to_string(),
                row.e2.as_deref().unwrap_or(""),
                &row.chain_len.to_string(),
                &row.chain_bound,
                &row.sep_len.to_string(),
                &row.sep_bound.to_string(),
                &row.k_value,
                &row.delta_hat,
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valued::NormExponent;

    fn f2() -> Arc<FieldSpec> {
        Arc::new(FieldSpec::prime(2).unwrap())
    }

    fn f3() -> Arc<FieldSpec> {
        Arc::new(FieldSpec::prime(3).unwrap())
    }

    fn f4() -> Arc<FieldSpec> {
        Arc::new(FieldSpec::extension(2, 2, &[1, 1, 1]).unwrap())
    }

    #[test]
    fn parse_examples() {
        let x = parse_laurent("t^3 + t", &f2()).unwrap();
        assert_eq!(x.terms().len(), 2);
        assert_eq!(x.coeff(3).coeffs(), &[1]);
        assert_eq!(x.coeff(1).coeffs(), &[1]);

        let y = parse_laurent("2*t^-1 + 1", &f3()).unwrap();
        assert_eq!(y.coeff(-1).coeffs(), &[2]);
        assert_eq!(y.coeff(0).coeffs(), &[1]);

        let z = parse_padic("7/2^1", 2).unwrap();
        assert_eq!(z.num(), &BigInt::from(7));
        assert_eq!(z.sexp(), 1);
        assert_eq!(z.norm_exp(), NormExponent::Finite(1));
    }

    #[test]
    fn format_examples() {
        assert_eq!(Laurent::zero(&f2()).to_string(), "0");
        let x = parse_laurent("t + t^3", &f2()).unwrap();
        assert_eq!(x.to_string(), "t^3 + t");
        let z = parse_padic("7/2^1", 2).unwrap();
        assert_eq!(z.to_string(), "7/2^1");
        // Extension coefficients always print as full tuples.
        let w = parse_laurent("(1,1)*t^2 + (0,1)", &f4()).unwrap();
        assert_eq!(w.to_string(), "(1,1)*t^2 + (0,1)");
    }

    #[test]
    fn parse_is_whitespace_insensitive_and_reduces_coefficients() {
        let spec = f3();
        let a = parse_laurent("  5 * t ^ 2+ 1 ", &spec).unwrap();
        let b = parse_laurent("2*t^2 + 1", &spec).unwrap();
        assert_eq!(a, b);
        // Accumulating terms and cancelling is allowed by the grammar.
        let c = parse_laurent("t + t", &spec).unwrap();
        assert_eq!(c.to_string(), "2*t");
        let d = parse_laurent("t + t", &f2()).unwrap();
        assert!(d.is_zero());
        // Negative integers reduce into F_q.
        let e = parse_laurent("-1", &spec).unwrap();
        assert_eq!(e.to_string(), "2");
    }

    #[test]
    fn negative_corpus() {
        let spec = f2();
        for bad in [
            "", "t^", "t^^2", "^3", "1 +", "+1", "(1,2", "*t", "t*", "x", "--2", "1 2",
            "-t", "0x5", "t^2.5",
        ] {
            assert!(
                matches!(parse_laurent(bad, &spec), Err(ParseError::Syntax { .. })),
                "`{bad}` should be a syntax error"
            );
        }
        // Exponent overflow.
        assert!(matches!(
            parse_laurent("t^1000001", &spec),
            Err(ParseError::ExponentRange { value: 1000001, .. })
        ));
        assert!(matches!(
            parse_laurent("t^-1000001", &spec),
            Err(ParseError::ExponentRange { .. })
        ));
        // Tuples in a prime field, or too long for the extension.
        assert!(matches!(
            parse_laurent("(1,1)", &spec),
            Err(ParseError::CoefficientRange { .. })
        ));
        assert!(matches!(
            parse_laurent("(1,0,1)*t", &f4()),
            Err(ParseError::CoefficientRange { .. })
        ));
        // Wrong denominator base for the ambient prime.
        assert!(matches!(
            parse_padic("5/3^2", 2),
            Err(ParseError::WrongBase { expected: 2, .. })
        ));
        assert!(matches!(
            parse_padic("1/2^-1", 2),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_padic("1/2^1 junk", 2),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn roundtrip_fuzz_per_ambient() {
        use rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);

        for spec in [f2(), f3(), f4()] {
            for _ in 0..10_000 {
                let nterms = (rng.next_u64() % 5) as usize;
                let mut terms = Vec::new();
                for _ in 0..nterms {
                    let exp = (rng.next_u64() % 17) as i64 - 8;
                    let coeffs: Vec<i64> = (0..spec.e())
                        .map(|_| (rng.next_u64() % u64::from(spec.p())) as i64)
                        .collect();
                    terms.push((exp, FieldElement::new(&spec, &coeffs).unwrap()));
                }
                let x = Laurent::new(&spec, terms).unwrap();
                let reparsed = parse_laurent(&x.to_string(), &spec).unwrap();
                assert_eq!(x, reparsed);
            }
        }

        for p in [2u32, 3] {
            for _ in 0..10_000 {
                let num = rng.next_u64() as i64 % 1_000_000_007;
                let sexp = (rng.next_u64() % 9) as u32;
                let x = Padic::new(p, BigInt::from(num), sexp).unwrap();
                let reparsed = parse_padic(&x.to_string(), p).unwrap();
                assert_eq!(x, reparsed);
            }
        }
    }

    #[test]
    fn set_file_round_trip() {
        let text = "# family: monomials\nfield: p=2\n1\nt\nt^2\n";
        let (set, meta) = parse_set_text(text).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(meta.family.as_deref(), Some("monomials"));
        let serialized = serialize_set_file(&meta.comments, &set);
        let (reparsed, _) = parse_set_text(&serialized).unwrap();
        assert_eq!(set, reparsed);
        assert_eq!(serialized, text);
    }

    #[test]
    fn set_file_errors() {
        // Duplicate under a different spelling still collides, and the error
        // names the line.
        let dup = "field: p=2\nt + 1\n1 + t\n";
        match parse_set_text(dup) {
            Err(ParseError::DuplicateElement { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected duplicate error, got {other:?}"),
        }

        assert!(matches!(
            parse_set_text("field: p=2\n"),
            Err(ParseError::EmptyBody)
        ));
        assert!(matches!(
            parse_set_text("p=2\n1\n"),
            Err(ParseError::Header(_))
        ));
        assert!(matches!(
            parse_set_text("padic: p=4\n1\n"),
            Err(ParseError::Field(_))
        ));
        // Parse errors carry the file line number.
        match parse_set_text("field: p=2\n1\nt^^\n") {
            Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn header_variants() {
        let (set, _) = parse_set_text("field: p=2,e=2,modulus=1,1,1\n(1,1)\n").unwrap();
        assert_eq!(set.ambient_label(), "field: p=2,e=2,modulus=1,1,1");
        let (set, _) = parse_set_text("padic: p=3\n1/3^2\n").unwrap();
        assert_eq!(set.ambient_label(), "padic: p=3");
        assert!(Ambient::parse("padic:p=5").is_ok());
        assert!(Ambient::parse("something: p=2").is_err());
    }

    #[test]
    fn certificate_lines_round_trip() {
        use crate::geometry::{
            build_forest, critical_balls, extract_separable, longest_chain, verify_separable,
        };
        let spec = f2();
        let set = FiniteSet::new(
            (0..=6)
                .map(|j| Laurent::monomial(&spec, j, 1).unwrap())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let chain = longest_chain(&build_forest(&critical_balls(&set).unwrap()));
        let line = chain_line(&chain);
        assert!(line.starts_with("chain: "));
        let elems = parse_chain_line(&line, |s| parse_laurent(s, &spec)).unwrap();
        assert_eq!(elems, chain.elements);

        let sep = extract_separable(&chain);
        let line = separable_line(&sep);
        let parsed = parse_separable_line(&line, |s| parse_laurent(s, &spec)).unwrap();
        assert_eq!(parsed.elements, sep.elements);
        verify_separable(&parsed).unwrap();
        assert_eq!(separable_line(&parsed), line);
    }

    #[test]
    fn certificate_lines_round_trip_with_tuple_coefficients() {
        use crate::geometry::{verify_separable, Ball, SeparableCertificate};
        // Witness parsing splits on the last comma, which must not be
        // confused by commas inside extension coefficient tuples.
        let spec = f4();
        let a = parse_laurent("(1,1)*t^2 + (0,1)", &spec).unwrap();
        let b = parse_laurent("(1,1)*t^2 + (1,0)", &spec).unwrap();
        let c = parse_laurent("(0,1)*t^4", &spec).unwrap();
        let cert = SeparableCertificate {
            elements: vec![a.clone(), b.clone(), c.clone()],
            witnesses: vec![
                Ball::new(a.clone(), -1),
                Ball::new(a.clone(), 0),
                Ball::new(a, 4),
            ],
        };
        verify_separable(&cert).unwrap();
        let line = separable_line(&cert);
        let parsed = parse_separable_line(&line, |s| parse_laurent(s, &spec)).unwrap();
        assert_eq!(parsed.elements, cert.elements);
        verify_separable(&parsed).unwrap();
        assert_eq!(separable_line(&parsed), line);

        let chain = format!("chain: {b}; {c}");
        let elems = parse_chain_line(&chain, |s| parse_laurent(s, &spec)).unwrap();
        assert_eq!(elems, vec![b, c]);
    }

    #[test]
    fn csv_schema_is_stable() {
        let row = ReportRow {
            family: "monomials".into(),
            ambient: "field: p=2,e=2,modulus=1,1,1".into(),
            n: 11,
            sum_size: 56,
            prod_size: 21,
            e2: Some("1234".into()),
            chain_len: 11,
            chain_bound: "161051/11329339392".into(),
            sep_len: 10,
            sep_bound: 6,
            k_value: "161051/1".into(),
            delta_hat: "0.678700".into(),
        };
        let csv = write_report_csv(&[row]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let data = lines.next().unwrap();
        // The ambient contains commas, so it must be quoted.
        assert!(data.contains("\"field: p=2,e=2,modulus=1,1,1\""));
        assert!(data.split(',').count() > 12);
        assert!(lines.next().is_none());
    }
}
