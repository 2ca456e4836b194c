//! Subcommand implementations shared by the binary and the test suite.
//!
//! Every command returns the text it would print, so tests call them without
//! spawning a process. Failures carry their exit code: 2 when a certificate
//! fails verification, 3 for unreadable input or guard violations, and 4 when
//! a result contradicts the rank chain or the five-column theorem. Exit 4 is
//! a bug trap, not a user error: it means an invariant the library promises
//! has been observed to fail, and the offending matrix is printed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use num_traits::Zero;
use troprank::{
    barvinok_rank, check_chain, count_optimal_permutations, kapranov_bounds_seeded,
    kapranov_rank3_5col_seeded, sample_uniform, sample_with_rank, tropical_rank, trop_det,
    verify_lift, witness_matches, BarvinokOutcome, BigRational, KapranovUpper, LiftError,
    TropMatrix, DEFAULT_RETRIES,
};

use crate::format::{
    parse_certificate, parse_matrix_document, serialize_certificate, serialize_matrix_document,
    FormatError, MatrixDocument,
};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input; exit 3.
    Parse(String),
    /// Valid input outside an operation's domain; exit 3.
    Guard(String),
    /// A certificate (or certificate construction) failed to verify; exit 2.
    Verification(String),
    /// An invariant the library guarantees was observed broken; exit 4.
    Contradiction(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Guard(_) => 3,
            CliError::Verification(_) => 2,
            CliError::Contradiction(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {}", m),
            CliError::Guard(m) => write!(f, "guard error: {}", m),
            CliError::Verification(m) => write!(f, "verification failure: {}", m),
            CliError::Contradiction(m) => write!(f, "theorem contradiction (bug trap): {}", m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Parse(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {}", path.display(), e)))
}

fn load_matrix(path: &Path, allow_decimal: bool) -> Result<MatrixDocument, CliError> {
    Ok(parse_matrix_document(&read_file(path)?, allow_decimal)?)
}

/// Construction errors sorted into exit classes. Shape and precondition
/// failures are the caller's problem; an exhausted plan list on a matrix the
/// theorem covers is ours.
fn lift_error(e: LiftError) -> CliError {
    match e {
        LiftError::Shape { .. }
        | LiftError::NotRankOne
        | LiftError::RankPrecondition { .. }
        | LiftError::PipelineShape { .. }
        | LiftError::Matrix(_)
        | LiftError::Det(_)
        | LiftError::Barvinok(_) => CliError::Guard(e.to_string()),
        LiftError::BudgetExhausted { .. } => CliError::Verification(format!(
            "{} (raise --retries to continue the search)",
            e
        )),
        LiftError::PatternMismatch
        | LiftError::WitnessMismatch
        | LiftError::PipelineExhausted { .. }
        | LiftError::Puiseux(_) => CliError::Contradiction(e.to_string()),
    }
}

fn join_indices(idx: &[usize]) -> String {
    idx.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_det(path: &Path, allow_decimal: bool) -> Result<String, CliError> {
    let doc = load_matrix(path, allow_decimal)?;
    let det = trop_det(&doc.matrix).map_err(|e| CliError::Guard(e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "det {}", det.value.value()).expect("string write");
    writeln!(out, "singular {}", det.singular).expect("string write");
    writeln!(out, "witness {}", join_indices(&det.witness)).expect("string write");
    if let Some(second) = &det.second_witness {
        writeln!(out, "second-witness {}", join_indices(second)).expect("string write");
    }
    Ok(out)
}

pub fn cmd_rank(path: &Path, allow_decimal: bool) -> Result<String, CliError> {
    let doc = load_matrix(path, allow_decimal)?;
    let w = tropical_rank(&doc.matrix);
    let mut out = String::new();
    writeln!(out, "tropical-rank {}", w.rank).expect("string write");
    writeln!(out, "witness-rows {}", join_indices(&w.rows)).expect("string write");
    writeln!(out, "witness-cols {}", join_indices(&w.cols)).expect("string write");
    Ok(out)
}

pub fn cmd_barvinok(
    path: &Path,
    allow_decimal: bool,
    max_r: Option<usize>,
) -> Result<String, CliError> {
    let doc = load_matrix(path, allow_decimal)?;
    let m = &doc.matrix;
    let cap = max_r.unwrap_or_else(|| m.rows().min(m.cols()));
    let outcome = barvinok_rank(m, cap).map_err(|e| CliError::Guard(e.to_string()))?;
    let mut out = String::new();
    match outcome {
        BarvinokOutcome::Exact(w) => {
            if !witness_matches(m, &w) {
                return Err(CliError::Contradiction(format!(
                    "barvinok witness does not reproduce the matrix:\n{}",
                    m
                )));
            }
            writeln!(out, "barvinok-rank {}", w.rank).expect("string write");
            for (a, b) in &w.pairs {
                let left: Vec<String> = a.iter().map(|v| v.value().to_string()).collect();
                let right: Vec<String> = b.iter().map(|v| v.value().to_string()).collect();
                writeln!(out, "term {} | {}", left.join(" "), right.join(" "))
                    .expect("string write");
            }
        }
        BarvinokOutcome::ExceedsMax { max_r } => {
            writeln!(out, "barvinok-rank exceeds {}", max_r).expect("string write");
        }
    }
    Ok(out)
}

pub fn cmd_certify(
    path: &Path,
    allow_decimal: bool,
    seed: u64,
    retries: usize,
    out_path: Option<&Path>,
) -> Result<String, CliError> {
    let doc = load_matrix(path, allow_decimal)?;
    let bounds = kapranov_bounds_seeded(&doc.matrix, seed, retries).map_err(lift_error)?;
    let mut out = String::new();
    writeln!(out, "kapranov-lower {}", bounds.lower).expect("string write");
    writeln!(out, "kapranov-upper {}", bounds.upper_value()).expect("string write");
    match &bounds.upper {
        KapranovUpper::Certified(cert) => {
            if !cert.verified {
                return Err(CliError::Verification(
                    "constructed lift failed its own verification".into(),
                ));
            }
            let text = serialize_certificate(cert);
            match out_path {
                Some(p) => {
                    fs::write(p, &text).map_err(|e| {
                        CliError::Guard(format!("cannot write {}: {}", p.display(), e))
                    })?;
                    writeln!(out, "certificate {}", p.display()).expect("string write");
                    Ok(out)
                }
                // No output path: stdout is the certificate itself, pipeable
                // into `verify`.
                None => Ok(text),
            }
        }
        KapranovUpper::TheoremCited { .. } => {
            writeln!(out, "certificate none (bound cited, not constructed)")
                .expect("string write");
            Ok(out)
        }
        KapranovUpper::Interval { .. } => {
            writeln!(out, "certificate none (dimension bound only)").expect("string write");
            Ok(out)
        }
    }
}

pub fn cmd_verify(path: &Path) -> Result<String, CliError> {
    let cert = parse_certificate(&read_file(path)?)?;
    let rerun = verify_lift(&cert.lift, &cert.matrix, cert.rank_bound)
        .map_err(|e| CliError::Verification(e.to_string()))?;
    if !rerun.verified {
        return Err(CliError::Verification(format!(
            "lift does not certify rank bound {} for the stated matrix",
            cert.rank_bound
        )));
    }
    let ram = cert.lift.ram().map_err(|e| CliError::Verification(e.to_string()))?;
    let mut out = String::new();
    writeln!(out, "verified").expect("string write");
    writeln!(out, "rank-bound {}", cert.rank_bound).expect("string write");
    writeln!(out, "matrix {}x{}", cert.matrix.rows(), cert.matrix.cols())
        .expect("string write");
    writeln!(out, "ramification {}", ram.get()).expect("string write");
    Ok(out)
}

pub fn parse_shape(shape: &str) -> Result<(usize, usize), CliError> {
    let norm = shape.replace('\u{d7}', "x");
    let parts: Vec<&str> = norm.split('x').collect();
    let dims: Option<(usize, usize)> = match parts.as_slice() {
        [r, c] => r.parse().ok().zip(c.parse().ok()),
        _ => None,
    };
    match dims {
        Some((r, c)) if r >= 1 && c >= 1 => Ok((r, c)),
        _ => Err(CliError::Guard(format!(
            "shape '{}' is not of the form <rows>x<cols>",
            shape
        ))),
    }
}

pub fn cmd_gen(
    shape: &str,
    rank: usize,
    count: usize,
    seed: u64,
    out_dir: &Path,
) -> Result<String, CliError> {
    let (rows, cols) = parse_shape(shape)?;
    if rank < 1 || rank > rows.min(cols) {
        return Err(CliError::Guard(format!(
            "tropical rank {} is infeasible for a {}x{} matrix",
            rank, rows, cols
        )));
    }
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Guard(format!("cannot create {}: {}", out_dir.display(), e)))?;
    let mut out = String::new();
    for k in 0..count {
        let s = seed.wrapping_add(k as u64);
        let matrix = sample_with_rank(rows, cols, rank, s)
            .map_err(|e| CliError::Guard(e.to_string()))?;
        debug_assert_eq!(tropical_rank(&matrix).rank, rank);
        let name = format!("m{}x{}-r{}-s{}", rows, cols, rank, s);
        let doc = MatrixDocument {
            name: Some(name.clone()),
            seed: Some(s),
            matrix,
        };
        let path = out_dir.join(format!("{}.txt", name));
        fs::write(&path, serialize_matrix_document(&doc))
            .map_err(|e| CliError::Guard(format!("cannot write {}: {}", path.display(), e)))?;
        writeln!(out, "wrote {}", path.display()).expect("string write");
    }
    Ok(out)
}

/// Brute-force assignment minimum by full permutation enumeration, the
/// independent side of the `oracle` suite.
fn brute_force_det(a: &TropMatrix) -> (BigRational, u64) {
    let n = a.rows();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut best: Option<BigRational> = None;
    let mut count = 0u64;
    // Heap's algorithm, iterative.
    let mut c = vec![0usize; n];
    let visit = |cols: &[usize], best: &mut Option<BigRational>, count: &mut u64| {
        let mut sum = BigRational::zero();
        for (i, &j) in cols.iter().enumerate() {
            sum += a.get(i, j).value();
        }
        match best {
            Some(b) if sum > *b => {}
            Some(b) if sum == *b => *count += 1,
            _ => {
                *best = Some(sum);
                *count = 1;
            }
        }
    };
    visit(&cols, &mut best, &mut count);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                cols.swap(0, i);
            } else {
                cols.swap(c[i], i);
            }
            visit(&cols, &mut best, &mut count);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    (best.expect("n >= 1"), count)
}

/// One corpus record; every field the report prints.
#[derive(Debug, Clone)]
pub struct CorpusRecord {
    pub rows: usize,
    pub cols: usize,
    pub seed: u64,
    pub tropical_rank: Option<usize>,
    pub barvinok_rank: Option<usize>,
    pub kapranov_lower: Option<usize>,
    pub kapranov_upper: Option<usize>,
    pub certificate: CertStatus,
    pub millis: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertStatus {
    /// The suite does not construct certificates for this record.
    NotApplicable,
    /// Bound established by theorem, no lift constructed.
    Cited,
    /// A lift was constructed and re-verified.
    Verified,
}

impl std::fmt::Display for CertStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertStatus::NotApplicable => write!(f, "-"),
            CertStatus::Cited => write!(f, "cited"),
            CertStatus::Verified => write!(f, "verified"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusReport {
    pub suite: String,
    pub records: Vec<CorpusRecord>,
}

impl std::fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "corpus {}", self.suite)?;
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        for r in &self.records {
            writeln!(
                f,
                "record {}x{} seed={} rk_t={} rk_B={} lower={} upper={} certificate={} ms={}",
                r.rows,
                r.cols,
                r.seed,
                opt(r.tropical_rank),
                opt(r.barvinok_rank),
                opt(r.kapranov_lower),
                opt(r.kapranov_upper),
                r.certificate,
                r.millis
            )?;
        }
        let total: u128 = self.records.iter().map(|r| r.millis).sum();
        let max = self.records.iter().map(|r| r.millis).max().unwrap_or(0);
        let verified = self
            .records
            .iter()
            .filter(|r| r.certificate == CertStatus::Verified)
            .count();
        writeln!(
            f,
            "aggregate records={} verified={} total-ms={} max-ms={}",
            self.records.len(),
            verified,
            total,
            max
        )
    }
}

/// Worker seed from (global seed, matrix index): records are independent, so
/// a fanned-out run merges to the same report in any order.
fn worker_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index)
}

/// Determinant agreement: library solver vs. permutation enumeration on 500
/// matrices, 100 per size in 2..=6.
fn corpus_oracle(seed: u64) -> Result<CorpusReport, CliError> {
    let mut records = Vec::new();
    let mut index = 0u64;
    for r in 2..=6usize {
        for _ in 0..100 {
            let s = worker_seed(seed, index);
            index += 1;
            let m = sample_uniform(r, r, 0, 9, s);
            let started = Instant::now();
            let det = trop_det(&m).map_err(|e| CliError::Guard(e.to_string()))?;
            let count =
                count_optimal_permutations(&m).map_err(|e| CliError::Guard(e.to_string()))?;
            let (brute_min, brute_count) = brute_force_det(&m);
            if det.value.value() != &brute_min
                || count != brute_count
                || det.singular != (count >= 2)
            {
                return Err(CliError::Contradiction(format!(
                    "determinant disagrees with enumeration (solver {} x{}, brute {} x{}) on:\n{}",
                    det.value.value(),
                    count,
                    brute_min,
                    brute_count,
                    m
                )));
            }
            records.push(CorpusRecord {
                rows: r,
                cols: r,
                seed: s,
                tropical_rank: None,
                barvinok_rank: None,
                kapranov_lower: None,
                kapranov_upper: None,
                certificate: CertStatus::NotApplicable,
                millis: started.elapsed().as_millis(),
            });
        }
    }
    Ok(CorpusReport {
        suite: "oracle".into(),
        records,
    })
}

/// Rank-chain sweep: 200 matrices per shape with small entries, every record
/// checked against 1 <= rk_t <= rk_K lower <= upper <= rk_B <= min(m, n).
fn corpus_dis(seed: u64) -> Result<CorpusReport, CliError> {
    let mut records = Vec::new();
    let mut index = 0u64;
    for (rows, cols) in [(3, 3), (4, 4), (4, 5), (5, 5)] {
        for _ in 0..200 {
            let s = worker_seed(seed, index);
            index += 1;
            let m = sample_uniform(rows, cols, 0, 4, s);
            let started = Instant::now();
            let bounds = kapranov_bounds_seeded(&m, s, DEFAULT_RETRIES).map_err(lift_error)?;
            let report = check_chain(&m, &bounds.assessment()).map_err(|v| {
                CliError::Contradiction(format!("{}; counterexample:\n{}", v.message, v.matrix))
            })?;
            records.push(CorpusRecord {
                rows,
                cols,
                seed: s,
                tropical_rank: Some(report.tropical),
                barvinok_rank: report.barvinok,
                kapranov_lower: Some(report.kapranov_lower),
                kapranov_upper: Some(report.kapranov_upper),
                certificate: match &bounds.upper {
                    KapranovUpper::Certified(_) => CertStatus::Verified,
                    KapranovUpper::TheoremCited { .. } => CertStatus::Cited,
                    KapranovUpper::Interval { .. } => CertStatus::NotApplicable,
                },
                millis: started.elapsed().as_millis(),
            });
        }
    }
    Ok(CorpusReport {
        suite: "dis".into(),
        records,
    })
}

/// Five-column certification sweep: 100 rank-3 g x 5 matrices per height,
/// each must produce a verified rank-3 certificate.
fn corpus_mio(seed: u64) -> Result<CorpusReport, CliError> {
    let mut records = Vec::new();
    let mut index = 0u64;
    for g in 4..=8usize {
        for _ in 0..100 {
            let s = worker_seed(seed, index);
            index += 1;
            let m = sample_with_rank(g, 5, 3, s).map_err(|e| CliError::Guard(e.to_string()))?;
            let started = Instant::now();
            let cert = kapranov_rank3_5col_seeded(&m, s, DEFAULT_RETRIES).map_err(|e| {
                CliError::Contradiction(format!("{}; counterexample:\n{}", lift_error(e), m))
            })?;
            if !cert.verified || cert.rank_bound != 3 {
                return Err(CliError::Contradiction(format!(
                    "pipeline returned an unverified certificate for:\n{}",
                    m
                )));
            }
            records.push(CorpusRecord {
                rows: g,
                cols: 5,
                seed: s,
                tropical_rank: Some(3),
                barvinok_rank: None,
                kapranov_lower: Some(3),
                kapranov_upper: Some(3),
                certificate: CertStatus::Verified,
                millis: started.elapsed().as_millis(),
            });
        }
    }
    Ok(CorpusReport {
        suite: "mio".into(),
        records,
    })
}

pub fn cmd_corpus(suite: &str, seed: u64) -> Result<CorpusReport, CliError> {
    match suite {
        "oracle" => corpus_oracle(seed),
        "dis" => corpus_dis(seed),
        "mio" => corpus_mio(seed),
        other => Err(CliError::Guard(format!(
            "unknown suite '{}' (expected oracle, dis, or mio)",
            other
        ))),
    }
}
