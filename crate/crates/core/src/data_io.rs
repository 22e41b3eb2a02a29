//! Deterministic data generation and file formats.
//!
//! All randomness flows through [`SplitMix64`] (Steele, Lea, and Flood's
//! SplitMix64: 64-bit state, golden-ratio increment, two xor-multiply
//! finalizer rounds). Independent sub-streams are derived from a base seed
//! and a purpose tag, so e.g. the design matrix stream never moves when more
//! target columns are requested.
//!
//! Text formats:
//! * regression container: one `n d m` header line, then `n` rows of the
//!   design matrix and `n` rows of the targets, row-major, 17 significant
//!   digits so values survive a round trip bit-exactly;
//! * sparse classification: `label idx:val idx:val ...` with 1-based indices,
//!   labels in {+1,-1} or {1,2} (the latter mapped to +1/-1);
//! * convergence traces: the 7-column CSV written by the solvers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, DenseVector};
use crate::solver::IterationRecord;

const GOLDEN_GAMMA: u64 = 0x9E3779B9_7F4A7C15;

/// SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

/// Purpose tags for derived streams.
pub mod stream_tag {
    pub const MATRIX: u64 = 1;
    pub const TARGET: u64 = 2;
    pub const SUPPORT: u64 = 3;
    pub const NOISE: u64 = 4;
    pub const SHUFFLE: u64 = 5;
    pub const LABELS: u64 = 6;
    pub const FEATURES: u64 = 7;
    pub const AUDIT: u64 = 8;
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for `(seed, tag)`: the tag is spread by the golden
    /// ratio constant before being folded into the seed, so distinct tags
    /// land in unrelated regions of the state space.
    pub fn stream(seed: u64, tag: u64) -> Self {
        SplitMix64::new(seed ^ tag.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
    }

    /// Stream for `(seed, tag, index)`, used for per-column target streams.
    pub fn stream_indexed(seed: u64, tag: u64, index: u64) -> Self {
        SplitMix64::stream(seed, tag.wrapping_add(index.wrapping_mul(0x100)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D_1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB_133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller (two uniforms per draw; the first is
    /// shifted into `(0, 1]` so the logarithm stays finite).
    pub fn next_normal(&mut self) -> f64 {
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Unbiased uniform in `[0, bound)` by rejection.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "next_below(0)");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let v = self.next_u64();
            if v >= threshold {
                return v % bound;
            }
        }
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Regression target: one column for the vector problems, a matrix for the
/// multitask problem.
#[derive(Debug, Clone)]
pub enum Target {
    Single(DenseVector),
    Multi(DenseMatrix),
}

impl Target {
    pub fn tasks(&self) -> usize {
        match self {
            Target::Single(_) => 1,
            Target::Multi(m) => m.cols(),
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            Target::Single(v) => v.len(),
            Target::Multi(m) => m.rows(),
        }
    }
}

/// Shape and seed of a synthetic regression instance.
///
/// The default mode draws both the design matrix and the targets from the
/// standard normal. `planted` is an extension that instead builds targets
/// from a sparse ground-truth vector per task (10% support, +/-1 entries)
/// plus `noise_sigma` times standard normal noise.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub seed: u64,
    pub noise_sigma: f64,
    pub planted: bool,
}

impl SyntheticSpec {
    pub fn new(n: usize, d: usize, m: usize, seed: u64) -> Self {
        SyntheticSpec {
            n,
            d,
            m,
            seed,
            noise_sigma: 0.0,
            planted: false,
        }
    }
}

/// Generate a synthetic regression instance. The matrix stream and the
/// per-column target streams are independent, so growing `m` appends target
/// columns without disturbing anything already generated.
pub fn generate_regression(spec: &SyntheticSpec) -> Result<(DenseMatrix, Target)> {
    if spec.n == 0 || spec.d == 0 || spec.m == 0 {
        return Err(Error::EmptyData(format!(
            "synthetic shape {}x{} with {} tasks",
            spec.n, spec.d, spec.m
        )));
    }
    if !spec.noise_sigma.is_finite() || spec.noise_sigma < 0.0 {
        return Err(Error::BadArgument(format!(
            "noise sigma {} must be finite and nonnegative",
            spec.noise_sigma
        )));
    }
    let mut mat_rng = SplitMix64::stream(spec.seed, stream_tag::MATRIX);
    let mut a = DenseMatrix::zeros(spec.n, spec.d)?;
    for c in 0..spec.d {
        for v in a.col_mut(c) {
            *v = mat_rng.next_normal();
        }
    }

    let mut y = DenseMatrix::zeros(spec.n, spec.m)?;
    for j in 0..spec.m {
        let mut rng = SplitMix64::stream_indexed(spec.seed, stream_tag::TARGET, j as u64);
        if spec.planted {
            let mut support_rng =
                SplitMix64::stream_indexed(spec.seed, stream_tag::SUPPORT, j as u64);
            let mut noise_rng = SplitMix64::stream_indexed(spec.seed, stream_tag::NOISE, j as u64);
            let k = (spec.d + 9) / 10; // ceil(d / 10) nonzeros
            let mut idx: Vec<usize> = (0..spec.d).collect();
            support_rng.shuffle(&mut idx);
            let mut xbar = DenseVector::zeros(spec.d);
            for &i in idx.iter().take(k) {
                xbar[i] = if support_rng.next_f64() < 0.5 { 1.0 } else { -1.0 };
            }
            let ax = a.matvec(&xbar)?;
            for (r, v) in y.col_mut(j).iter_mut().enumerate() {
                *v = ax[r] + spec.noise_sigma * noise_rng.next_normal();
            }
            let _ = rng; // target stream unused in planted mode
        } else {
            for v in y.col_mut(j) {
                *v = rng.next_normal();
            }
        }
    }

    let target = if spec.m == 1 {
        Target::Single(DenseVector::new(y.col(0).to_vec()))
    } else {
        Target::Multi(y)
    };
    Ok((a, target))
}

/// Two-blob synthetic classification set: labels are random +/-1 and features
/// are standard normal shifted by `separation / sqrt(d)` along the all-ones
/// direction, signed by the label. Returns the `n x d` feature matrix and
/// the label vector.
pub fn generate_classification(
    n: usize,
    d: usize,
    separation: f64,
    seed: u64,
) -> Result<(DenseMatrix, DenseVector)> {
    if n == 0 || d == 0 {
        return Err(Error::EmptyData(format!("classification shape {n}x{d}")));
    }
    if !separation.is_finite() || separation < 0.0 {
        return Err(Error::BadArgument(format!(
            "separation {separation} must be finite and nonnegative"
        )));
    }
    let mut label_rng = SplitMix64::stream(seed, stream_tag::LABELS);
    let mut feat_rng = SplitMix64::stream(seed, stream_tag::FEATURES);
    let shift = separation / (d as f64).sqrt();
    let labels: Vec<f64> = (0..n)
        .map(|_| if label_rng.next_f64() < 0.5 { 1.0 } else { -1.0 })
        .collect();
    let mut x = DenseMatrix::zeros(n, d)?;
    // Row by row so each point's features are consecutive in the stream.
    for r in 0..n {
        for c in 0..d {
            x.set(r, c, labels[r] * shift + feat_rng.next_normal());
        }
    }
    Ok((x, DenseVector::new(labels)))
}

/// 17-significant-digit float text: round-trips through `f64` parsing
/// bit-exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a regression instance: `n d m` header, then the design matrix and
/// the targets, row-major.
pub fn write_regression(path: &Path, a: &DenseMatrix, target: &Target) -> Result<()> {
    if target.rows() != a.rows() {
        return Err(Error::Shape(format!(
            "regression container: matrix has {} rows, target {}",
            a.rows(),
            target.rows()
        )));
    }
    let m = target.tasks();
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", a.rows(), a.cols(), m);
    for r in 0..a.rows() {
        let mut line = String::new();
        for c in 0..a.cols() {
            if c > 0 {
                line.push(' ');
            }
            line.push_str(&format_float(a.get(r, c)));
        }
        out.push_str(&line);
        out.push('\n');
    }
    for r in 0..a.rows() {
        let mut line = String::new();
        for j in 0..m {
            if j > 0 {
                line.push(' ');
            }
            let v = match target {
                Target::Single(v) => v[r],
                Target::Multi(mt) => mt.get(r, j),
            };
            line.push_str(&format_float(v));
        }
        out.push_str(&line);
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read the container written by [`write_regression`].
pub fn read_regression(path: &Path) -> Result<(DenseMatrix, Target)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let pathname = path.display().to_string();
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::Parse {
        path: pathname.clone(),
        line: 1,
        msg: "empty file".to_string(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            path: pathname.clone(),
            line: 1,
            msg: format!("bad header '{header}': {e}"),
        })?;
    if dims.len() != 3 || dims.iter().any(|&v| v == 0) {
        return Err(Error::Parse {
            path: pathname,
            line: 1,
            msg: format!("header must be three positive integers, got '{header}'"),
        });
    }
    let (n, d, m) = (dims[0], dims[1], dims[2]);
    let mut parse_row = |width: usize| -> Result<Vec<f64>> {
        let (idx, line) = lines.next().ok_or_else(|| Error::Parse {
            path: pathname.clone(),
            line: n + 1,
            msg: "unexpected end of file".to_string(),
        })?;
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                path: pathname.clone(),
                line: idx + 1,
                msg: e.to_string(),
            })?;
        if vals.len() != width {
            return Err(Error::Parse {
                path: pathname.clone(),
                line: idx + 1,
                msg: format!("expected {width} values, got {}", vals.len()),
            });
        }
        Ok(vals)
    };
    let mut a = DenseMatrix::zeros(n, d)?;
    for r in 0..n {
        for (c, v) in parse_row(d)?.into_iter().enumerate() {
            a.set(r, c, v);
        }
    }
    let mut y = DenseMatrix::zeros(n, m)?;
    for r in 0..n {
        for (j, v) in parse_row(m)?.into_iter().enumerate() {
            y.set(r, j, v);
        }
    }
    let target = if m == 1 {
        Target::Single(DenseVector::new(y.col(0).to_vec()))
    } else {
        Target::Multi(y)
    };
    Ok((a, target))
}

/// Read `label idx:val ...` classification data (1-based indices). Labels
/// must all be in {+1,-1} or all in {1,2}; the {1,2} convention is remapped
/// to +1/-1. The feature dimension is the largest index seen.
pub fn read_sparse_classification(path: &Path) -> Result<(DenseMatrix, DenseVector)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let pathname = path.display().to_string();
    let mut rows: Vec<(f64, Vec<(usize, f64)>)> = Vec::new();
    let mut max_index = 0usize;
    let mut saw_two = false;
    let mut saw_minus_one = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().expect("non-empty line has a first token");
        let label: f64 = label_tok.parse().map_err(|_| Error::Parse {
            path: pathname.clone(),
            line: lineno,
            msg: format!("bad label '{label_tok}'"),
        })?;
        if label == 2.0 {
            saw_two = true;
        } else if label == -1.0 {
            saw_minus_one = true;
        } else if label != 1.0 {
            return Err(Error::Parse {
                path: pathname.clone(),
                line: lineno,
                msg: format!("label {label} is outside {{+1,-1}} and {{1,2}}"),
            });
        }
        let mut feats = Vec::new();
        for tok in tokens {
            let (i_str, v_str) = tok.split_once(':').ok_or_else(|| Error::Parse {
                path: pathname.clone(),
                line: lineno,
                msg: format!("feature '{tok}' is not idx:val"),
            })?;
            let i: usize = i_str.parse().map_err(|_| Error::Parse {
                path: pathname.clone(),
                line: lineno,
                msg: format!("bad feature index '{i_str}'"),
            })?;
            if i == 0 {
                return Err(Error::Parse {
                    path: pathname.clone(),
                    line: lineno,
                    msg: "feature indices are 1-based".to_string(),
                });
            }
            let v: f64 = v_str.parse().map_err(|_| Error::Parse {
                path: pathname.clone(),
                line: lineno,
                msg: format!("bad feature value '{v_str}'"),
            })?;
            max_index = max_index.max(i);
            feats.push((i - 1, v));
        }
        rows.push((label, feats));
    }
    if rows.is_empty() {
        return Err(Error::EmptyData(format!("{pathname}: no data lines")));
    }
    if saw_two && saw_minus_one {
        return Err(Error::Parse {
            path: pathname,
            line: 1,
            msg: "mixed label conventions: file contains both -1 and 2".to_string(),
        });
    }
    if max_index == 0 {
        return Err(Error::EmptyData(format!("{pathname}: no features")));
    }
    let n = rows.len();
    let mut x = DenseMatrix::zeros(n, max_index)?;
    let mut y = DenseVector::zeros(n);
    for (r, (label, feats)) in rows.into_iter().enumerate() {
        y[r] = if saw_two {
            if label == 1.0 {
                1.0
            } else {
                -1.0
            }
        } else {
            label
        };
        for (c, v) in feats {
            x.set(r, c, v);
        }
    }
    Ok((x, y))
}

/// Seeded train/test split by rows.
#[derive(Debug, Clone)]
pub struct SplitData {
    pub train_x: DenseMatrix,
    pub train_y: DenseVector,
    pub test_x: DenseMatrix,
    pub test_y: DenseVector,
}

/// Shuffle rows with the seed's shuffle stream and keep
/// `round(fraction * n)` of them (clamped so neither side is empty) for
/// training.
pub fn subsample(x: &DenseMatrix, y: &DenseVector, fraction: f64, seed: u64) -> Result<SplitData> {
    if x.rows() != y.len() {
        return Err(Error::Shape(format!(
            "subsample: {} rows against {} labels",
            x.rows(),
            y.len()
        )));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::BadArgument(format!(
            "fraction {fraction} must lie strictly between 0 and 1"
        )));
    }
    let n = x.rows();
    if n < 2 {
        return Err(Error::EmptyData(
            "subsample needs at least two rows".to_string(),
        ));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    SplitMix64::stream(seed, stream_tag::SHUFFLE).shuffle(&mut idx);
    let n_train = ((fraction * n as f64).round() as usize).clamp(1, n - 1);
    let gather = |rows: &[usize]| -> Result<(DenseMatrix, DenseVector)> {
        let mut gx = DenseMatrix::zeros(rows.len(), x.cols())?;
        let mut gy = DenseVector::zeros(rows.len());
        for (r, &src) in rows.iter().enumerate() {
            for c in 0..x.cols() {
                gx.set(r, c, x.get(src, c));
            }
            gy[r] = y[src];
        }
        Ok((gx, gy))
    };
    let (train_x, train_y) = gather(&idx[..n_train])?;
    let (test_x, test_y) = gather(&idx[n_train..])?;
    Ok(SplitData {
        train_x,
        train_y,
        test_x,
        test_y,
    })
}

pub const TRACE_HEADER: &str = "t,f_x,f_theta_x,theta,eta,gamma,elapsed_ns";

/// Write a convergence trace as CSV.
pub fn write_trace(path: &Path, records: &[IterationRecord]) -> Result<()> {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.t,
            format_float(r.f_x),
            format_float(r.f_theta_x),
            format_float(r.theta),
            format_float(r.eta),
            format_float(r.gamma),
            r.elapsed_ns
        );
    }
    fs::write(path, out).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a trace written by [`write_trace`], field-for-field.
pub fn read_trace(path: &Path) -> Result<Vec<IterationRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let pathname = path.display().to_string();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == TRACE_HEADER => {}
        other => {
            return Err(Error::Parse {
                path: pathname,
                line: 1,
                msg: format!(
                    "bad trace header {:?}, expected {:?}",
                    other.map(|(_, h)| h).unwrap_or(""),
                    TRACE_HEADER
                ),
            })
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse {
                path: pathname.clone(),
                line: lineno,
                msg: format!("expected 7 fields, got {}", fields.len()),
            });
        }
        let parse_f = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| Error::Parse {
                path: pathname.clone(),
                line: lineno,
                msg: format!("bad {what} '{s}'"),
            })
        };
        records.push(IterationRecord {
            t: fields[0].parse().map_err(|_| Error::Parse {
                path: pathname.clone(),
                line: lineno,
                msg: format!("bad iteration counter '{}'", fields[0]),
            })?,
            f_x: parse_f(fields[1], "f_x")?,
            f_theta_x: parse_f(fields[2], "f_theta_x")?,
            theta: parse_f(fields[3], "theta")?,
            eta: parse_f(fields[4], "eta")?,
            gamma: parse_f(fields[5], "gamma")?,
            elapsed_ns: fields[6].parse().map_err(|_| Error::Parse {
                path: pathname.clone(),
                line: lineno,
                msg: format!("bad elapsed_ns '{}'", fields[6]),
            })?,
        });
    }
    Ok(records)
}
