//! Line-oriented text formats for matrices and lift certificates.
//!
//! Both formats are human-diffable: `#` starts a comment, blank lines are
//! skipped, and every number is an exact rational written `p` or `p/q`.
//! Decimal literals are rejected unless the caller opts in, in which case
//! they convert exactly (1.25 becomes 5/4). Certificate lift entries are
//! stored as (exponent coefficient) pairs for numerator and denominator,
//! with exponents as rationals against one ramification declared once per
//! certificate. Parsing then serializing is the identity document.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use troprank::{
    BigInt, BigRational, KapranovCertificate, LiftMatrix, Poly, PuiseuxScalar, Ramification,
    TraceStep, TropMatrix, TropScalar,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for FormatError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

/// A matrix file: optional name and seed, then the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixDocument {
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub matrix: TropMatrix,
}

/// Exact rational parsing; decimals only on request.
pub fn parse_rational(
    tok: &str,
    allow_decimal: bool,
    line: usize,
) -> Result<BigRational, FormatError> {
    if let Some(dot) = tok.find('.') {
        if !allow_decimal {
            return err(
                line,
                format!("decimal literal '{}' (pass --allow-decimal to convert exactly)", tok),
            );
        }
        let (int_part, frac_part) = (&tok[..dot], &tok[dot + 1..]);
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if frac_part.is_empty() || frac_part.contains(['-', '+', '/', '.']) {
            return err(line, format!("malformed decimal '{}'", tok));
        }
        let whole = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            match BigInt::from_str(int_digits) {
                Ok(v) => v,
                Err(_) => return err(line, format!("malformed decimal '{}'", tok)),
            }
        };
        let frac = match BigInt::from_str(frac_part) {
            Ok(v) => v,
            Err(_) => return err(line, format!("malformed decimal '{}'", tok)),
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut v = BigRational::new(whole * &scale + frac, scale);
        if negative {
            v = -v;
        }
        return Ok(v);
    }
    match BigRational::from_str(tok) {
        Ok(v) => Ok(v),
        Err(_) => err(line, format!("expected rational, found '{}'", tok)),
    }
}

/// Meaningful lines with their original 1-based numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_grid(
    lines: &[(usize, &str)],
    at: &mut usize,
    rows: usize,
    cols: usize,
    allow_decimal: bool,
    header_line: usize,
) -> Result<TropMatrix, FormatError> {
    if rows == 0 || cols == 0 {
        return err(header_line, "matrix dimensions must be positive");
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let Some(&(ln, text)) = lines.get(*at) else {
            return err(header_line, format!("expected {} grid rows", rows));
        };
        *at += 1;
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != cols {
            return err(ln, format!("expected {} entries, found {}", cols, toks.len()));
        }
        for tok in toks {
            entries.push(TropScalar::new(parse_rational(tok, allow_decimal, ln)?));
        }
    }
    match TropMatrix::new(rows, cols, entries) {
        Ok(m) => Ok(m),
        Err(e) => err(header_line, e.to_string()),
    }
}

pub fn parse_matrix_document(
    text: &str,
    allow_decimal: bool,
) -> Result<MatrixDocument, FormatError> {
    let lines = content_lines(text);
    let mut at = 0usize;
    let mut name = None;
    let mut seed = None;
    let (rows, cols, header_line) = loop {
        let Some(&(ln, line)) = lines.get(at) else {
            return err(text.lines().count().max(1), "missing 'matrix <rows> <cols>' header");
        };
        at += 1;
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("name") => {
                let rest = line["name".len()..].trim();
                if rest.is_empty() {
                    return err(ln, "empty name");
                }
                name = Some(rest.to_string());
            }
            Some("seed") => match toks.next().map(u64::from_str) {
                Some(Ok(s)) if toks.next().is_none() => seed = Some(s),
                _ => return err(ln, "expected 'seed <integer>'"),
            },
            Some("matrix") => {
                let dims: Vec<usize> = toks.filter_map(|t| t.parse().ok()).collect();
                if dims.len() != 2 {
                    return err(ln, "expected 'matrix <rows> <cols>'");
                }
                break (dims[0], dims[1], ln);
            }
            _ => return err(ln, format!("unexpected line '{}'", line)),
        }
    };
    let matrix = parse_grid(&lines, &mut at, rows, cols, allow_decimal, header_line)?;
    if let Some(&(ln, extra)) = lines.get(at) {
        return err(ln, format!("unexpected trailing content '{}'", extra));
    }
    Ok(MatrixDocument { name, seed, matrix })
}

fn write_grid(out: &mut String, m: &TropMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).value().to_string()).collect();
        writeln!(out, "{}", row.join(" ")).expect("string write");
    }
}

pub fn serialize_matrix_document(doc: &MatrixDocument) -> String {
    let mut out = String::new();
    if let Some(name) = &doc.name {
        writeln!(out, "name {}", name).expect("string write");
    }
    if let Some(seed) = doc.seed {
        writeln!(out, "seed {}", seed).expect("string write");
    }
    writeln!(out, "matrix {} {}", doc.matrix.rows(), doc.matrix.cols()).expect("string write");
    write_grid(&mut out, &doc.matrix);
    out
}

/// One Puiseux entry as `num (e c)... den (e c)...` with exponents divided
/// out by the shared ramification.
fn write_puiseux(out: &mut String, e: &PuiseuxScalar, n: u64) {
    let part = |out: &mut String, p: &Poly| {
        for (k, c) in p.terms() {
            let exp = BigRational::new(BigInt::from(k), BigInt::from(n));
            write!(out, " ({} {})", exp, c).expect("string write");
        }
    };
    out.push_str("num");
    part(out, e.numerator());
    out.push_str(" den");
    part(out, e.denominator());
    out.push('\n');
}

fn parse_poly_pairs(
    toks: &[&str],
    n: u64,
    ln: usize,
) -> Result<Poly, FormatError> {
    if toks.len() % 2 != 0 {
        return err(ln, "unpaired exponent/coefficient tokens");
    }
    let mut coeffs: Vec<BigRational> = Vec::new();
    for pair in toks.chunks(2) {
        let exp = parse_rational(pair[0], false, ln)?;
        let coeff = parse_rational(pair[1], false, ln)?;
        let scaled = exp * BigRational::new(BigInt::from(n), BigInt::one());
        if !scaled.is_integer() || scaled.is_negative() {
            return err(
                ln,
                format!("exponent {} is not a nonnegative multiple of 1/{}", pair[0], n),
            );
        }
        let deg: usize = match scaled.to_integer().try_into() {
            Ok(d) => d,
            Err(_) => return err(ln, "exponent out of range"),
        };
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, BigRational::zero());
        }
        if !coeffs[deg].is_zero() {
            return err(ln, format!("duplicate exponent {}", pair[0]));
        }
        coeffs[deg] = coeff;
    }
    Ok(Poly::from_coeffs(coeffs))
}

fn parse_puiseux(line: &str, n: u64, ln: usize) -> Result<PuiseuxScalar, FormatError> {
    let cleaned: String = line.replace(['(', ')'], " ");
    let toks: Vec<&str> = cleaned.split_whitespace().collect();
    if toks.first() != Some(&"num") {
        return err(ln, "lift entry must start with 'num'");
    }
    let Some(den_at) = toks.iter().position(|t| *t == "den") else {
        return err(ln, "lift entry missing 'den'");
    };
    let num = parse_poly_pairs(&toks[1..den_at], n, ln)?;
    let den = parse_poly_pairs(&toks[den_at + 1..], n, ln)?;
    match PuiseuxScalar::from_fraction(num, den, Ramification::new(n)) {
        Ok(v) => Ok(v),
        Err(e) => err(ln, e.to_string()),
    }
}

/// Serialize a certificate; self-contained, so verification needs nothing
/// but this document.
pub fn serialize_certificate(cert: &KapranovCertificate) -> String {
    let ram = cert.lift.ram().expect("lift ramifications join");
    let n = ram.get();
    let mut out = String::new();
    writeln!(out, "certificate").expect("string write");
    writeln!(out, "rank-bound {}", cert.rank_bound).expect("string write");
    writeln!(out, "seed {}", cert.seed).expect("string write");
    writeln!(out, "verified {}", cert.verified).expect("string write");
    writeln!(out, "ramification {}", n).expect("string write");
    writeln!(out, "matrix {} {}", cert.matrix.rows(), cert.matrix.cols()).expect("string write");
    write_grid(&mut out, &cert.matrix);
    writeln!(out, "lift {} {}", cert.lift.rows(), cert.lift.cols()).expect("string write");
    for i in 0..cert.lift.rows() {
        for j in 0..cert.lift.cols() {
            let e = cert.lift.get(i, j).rescale(ram).expect("rescale to joined ram");
            write_puiseux(&mut out, &e, n);
        }
    }
    writeln!(out, "trace {}", cert.trace.len()).expect("string write");
    for step in &cert.trace {
        writeln!(out, "{} {}", step.depth, step.action).expect("string write");
    }
    out
}

fn expect_kv(
    lines: &[(usize, &str)],
    at: &mut usize,
    key: &str,
) -> Result<(usize, String), FormatError> {
    let Some(&(ln, line)) = lines.get(*at) else {
        return err(0, format!("unexpected end of certificate, wanted '{}'", key));
    };
    *at += 1;
    match line.split_once(char::is_whitespace) {
        Some((k, v)) if k == key => Ok((ln, v.trim().to_string())),
        _ if line == key => Ok((ln, String::new())),
        _ => err(ln, format!("expected '{}', found '{}'", key, line)),
    }
}

pub fn parse_certificate(text: &str) -> Result<KapranovCertificate, FormatError> {
    let lines = content_lines(text);
    let mut at = 0usize;

    let (ln0, rest) = expect_kv(&lines, &mut at, "certificate")?;
    if !rest.is_empty() {
        return err(ln0, "unexpected tokens after 'certificate'");
    }
    let (ln, v) = expect_kv(&lines, &mut at, "rank-bound")?;
    let rank_bound: usize = v.parse().map_err(|_| FormatError {
        line: ln,
        message: "rank-bound must be an integer".into(),
    })?;
    let (ln, v) = expect_kv(&lines, &mut at, "seed")?;
    let seed: u64 = v.parse().map_err(|_| FormatError {
        line: ln,
        message: "seed must be an integer".into(),
    })?;
    let (ln, v) = expect_kv(&lines, &mut at, "verified")?;
    let verified = match v.as_str() {
        "true" => true,
        "false" => false,
        _ => return err(ln, "verified must be true or false"),
    };
    let (ln, v) = expect_kv(&lines, &mut at, "ramification")?;
    let n: u64 = match v.parse() {
        Ok(n) if (1..=(1u64 << 20)).contains(&n) => n,
        _ => return err(ln, "ramification must be an integer in [1, 2^20]"),
    };

    let (ln, v) = expect_kv(&lines, &mut at, "matrix")?;
    let dims: Vec<usize> = v.split_whitespace().filter_map(|t| t.parse().ok()).collect();
    if dims.len() != 2 {
        return err(ln, "expected 'matrix <rows> <cols>'");
    }
    let matrix = parse_grid(&lines, &mut at, dims[0], dims[1], false, ln)?;

    let (lift_ln, v) = expect_kv(&lines, &mut at, "lift")?;
    let ldims: Vec<usize> = v.split_whitespace().filter_map(|t| t.parse().ok()).collect();
    if ldims.len() != 2 {
        return err(lift_ln, "expected 'lift <rows> <cols>'");
    }
    let mut scalars = Vec::with_capacity(ldims[0] * ldims[1]);
    for _ in 0..ldims[0] * ldims[1] {
        let Some(&(ln, line)) = lines.get(at) else {
            return err(lift_ln, format!("expected {} lift entries", ldims[0] * ldims[1]));
        };
        at += 1;
        scalars.push(parse_puiseux(line, n, ln)?);
    }
    let lift = match LiftMatrix::new(ldims[0], ldims[1], scalars) {
        Ok(l) => l,
        Err(e) => return err(lift_ln, e.to_string()),
    };

    let (trace_ln, v) = expect_kv(&lines, &mut at, "trace")?;
    let count: usize = v.parse().map_err(|_| FormatError {
        line: trace_ln,
        message: "trace must declare a count".into(),
    })?;
    let mut trace = Vec::with_capacity(count);
    for _ in 0..count {
        let Some(&(ln, line)) = lines.get(at) else {
            return err(trace_ln, format!("expected {} trace lines", count));
        };
        at += 1;
        let Some((d, action)) = line.split_once(char::is_whitespace) else {
            return err(ln, "trace line needs '<depth> <action>'");
        };
        let depth: usize = d.parse().map_err(|_| FormatError {
            line: ln,
            message: "trace depth must be an integer".into(),
        })?;
        trace.push(TraceStep {
            depth,
            action: action.trim().to_string(),
        });
    }
    if let Some(&(ln, extra)) = lines.get(at) {
        return err(ln, format!("unexpected trailing content '{}'", extra));
    }

    Ok(KapranovCertificate {
        matrix,
        rank_bound,
        lift,
        verified,
        seed,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use troprank::{lift_rank1, sample_outer_sum};

    #[test]
    fn matrix_document_round_trip() {
        let text = "# demo\nname twin zeros\nseed 7\nmatrix 2 3\n0 1/2 -3\n5 2 7/3\n";
        let doc = parse_matrix_document(text, false).unwrap();
        assert_eq!(doc.name.as_deref(), Some("twin zeros"));
        assert_eq!(doc.seed, Some(7));
        assert_eq!(doc.matrix.get(0, 1).value(), &BigRational::new(1.into(), 2.into()));
        let text2 = serialize_matrix_document(&doc);
        let doc2 = parse_matrix_document(&text2, false).unwrap();
        assert_eq!(doc, doc2);
        assert_eq!(text2, serialize_matrix_document(&doc2));
    }

    #[test]
    fn decimal_literals_need_the_flag() {
        let text = "matrix 1 2\n0.5 1\n";
        assert!(parse_matrix_document(text, false).is_err());
        let doc = parse_matrix_document(text, true).unwrap();
        assert_eq!(doc.matrix.get(0, 0).value(), &BigRational::new(1.into(), 2.into()));
        let neg = parse_rational("-2.25", true, 1).unwrap();
        assert_eq!(neg, BigRational::new((-9).into(), 4.into()));
    }

    #[test]
    fn malformed_documents_report_lines() {
        let e = parse_matrix_document("matrix 2 2\n0 1\n", false).unwrap_err();
        assert!(e.message.contains("grid rows"));
        let e = parse_matrix_document("matrix 1 2\n0 x\n", false).unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_matrix_document("matrix 0 2\n", false).unwrap_err();
        assert!(e.message.contains("positive"));
    }

    #[test]
    fn certificate_round_trip_preserves_everything() {
        let m = sample_outer_sum(3, 4, 3, 5);
        let cert = lift_rank1(&m).unwrap();
        let text = serialize_certificate(&cert);
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back.rank_bound, cert.rank_bound);
        assert_eq!(back.seed, cert.seed);
        assert_eq!(back.verified, cert.verified);
        assert_eq!(back.matrix, cert.matrix);
        assert_eq!(back.lift.ord_matrix(), cert.lift.ord_matrix());
        assert_eq!(back.trace.len(), cert.trace.len());
        assert_eq!(text, serialize_certificate(&back));
    }

    #[test]
    fn certificate_rejects_tampered_structure() {
        let m = sample_outer_sum(2, 2, 3, 1);
        let text = serialize_certificate(&lift_rank1(&m).unwrap());
        let degraded = text.replace("certificate", "certifikat");
        assert!(parse_certificate(&degraded).is_err());
        let bad_pairs = text.replacen("num (", "num (1/3 ", 1);
        assert!(parse_certificate(&bad_pairs).is_err());
    }

    #[test]
    fn fractional_exponents_survive_the_round_trip() {
        use troprank::TropMatrix;
        // A matrix with a half-integer order forces ramification 2.
        let m = TropMatrix::new(
            1,
            2,
            vec![
                TropScalar::new(BigRational::new(1.into(), 2.into())),
                TropScalar::from_int(2),
            ],
        )
        .unwrap();
        let cert = troprank::lift_full(&m).unwrap();
        let text = serialize_certificate(&cert);
        assert!(text.contains("ramification 2"));
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back.lift.ord_matrix(), m);
    }
}
