//! File formats: signal CSV and `f64le` binary, grid CSV, PPM heatmaps and
//! `key=value` reports.
//!
//! Numbers are written with Rust's shortest round-trip representation, so
//! re-reading any file reproduces the exact `f64` values.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

use crate::axis::Axis;
use crate::signal::Signal;

/// Magic bytes of the binary signal format.
pub const F64LE_MAGIC: &[u8; 4] = b"HGTF";
pub const F64LE_VERSION: u32 = 1;
/// Magic, version and 8 reserved zero bytes.
pub const F64LE_HEADER_LEN: usize = 16;

/// Relative tolerance on the sample-time spacing of CSV input.
pub const CSV_UNIFORMITY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("malformed header: {0}")]
    Header(String),
    #[error("row {row}: {reason}")]
    Row { row: usize, reason: String },
    #[error("non-uniform time grid at row {row}: step {step} differs from {expected}")]
    NonUniform {
        row: usize,
        step: f64,
        expected: f64,
    },
    #[error("NaN or infinite sample at row {row}")]
    NonFinite { row: usize },
    #[error("truncated binary file: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("invalid signal: {0}")]
    Signal(#[from] crate::error::Error),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> FormatError + '_ {
    move |source| FormatError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Signal file formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalFormat {
    Csv,
    F64le,
}

impl SignalFormat {
    /// `.csv` is CSV, everything else the binary format.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => SignalFormat::Csv,
            _ => SignalFormat::F64le,
        }
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// `re+imj` / `re-imj`.
pub fn fmt_complex(c: Complex64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{:?}{sign}{:?}j", c.re, c.im.abs())
}

pub fn parse_complex(token: &str) -> Option<Complex64> {
    let body = token.trim().strip_suffix('j')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&i| {
        (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
    })?;
    let re: f64 = body[..split].parse().ok()?;
    let im: f64 = body[split + 1..].parse().ok()?;
    Some(Complex64::new(
        re,
        if bytes[split] == b'-' { -im } else { im },
    ))
}

pub fn read_signal(path: &Path, format: SignalFormat) -> Result<Signal, FormatError> {
    match format {
        SignalFormat::Csv => {
            let text = fs::read_to_string(path).map_err(io_err(path))?;
            parse_signal_csv(&text)
        }
        SignalFormat::F64le => {
            let mut bytes = Vec::new();
            fs::File::open(path)
                .and_then(|mut f| f.read_to_end(&mut bytes))
                .map_err(io_err(path))?;
            decode_f64le(&bytes)
        }
    }
}

pub fn write_signal(path: &Path, signal: &Signal, format: SignalFormat) -> Result<(), FormatError> {
    let bytes = match format {
        SignalFormat::Csv => signal_to_csv(signal).into_bytes(),
        SignalFormat::F64le => encode_f64le(signal),
    };
    fs::write(path, bytes).map_err(io_err(path))
}

/// Parses `t,re[,im]` CSV. Rows are numbered from 1 after the header.
pub fn parse_signal_csv(text: &str) -> Result<Signal, FormatError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| FormatError::Header("empty file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let has_im = match cols.as_slice() {
        ["t", "re"] => false,
        ["t", "re", "im"] => true,
        _ => {
            return Err(FormatError::Header(format!(
                "expected `t,re` or `t,re,im`, found `{header}`"
            )))
        }
    };
    let mut times: Vec<f64> = Vec::new();
    let mut samples = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != cols.len() {
            return Err(FormatError::Row {
                row,
                reason: format!("expected {} fields, found {}", cols.len(), fields.len()),
            });
        }
        let num = |s: &str| {
            s.parse::<f64>().map_err(|e| FormatError::Row {
                row,
                reason: format!("`{s}`: {e}"),
            })
        };
        let t = num(fields[0])?;
        let re = num(fields[1])?;
        let im = if has_im { num(fields[2])? } else { 0.0 };
        if !(t.is_finite() && re.is_finite() && im.is_finite()) {
            return Err(FormatError::NonFinite { row });
        }
        if times.len() >= 2 {
            let expected = times[1] - times[0];
            let step = t - times[times.len() - 1];
            if (step - expected).abs() > CSV_UNIFORMITY_TOL * expected.abs() {
                return Err(FormatError::NonUniform {
                    row,
                    step,
                    expected,
                });
            }
        }
        times.push(t);
        samples.push(Complex64::new(re, im));
    }
    if samples.len() < 2 {
        return Err(FormatError::Signal(crate::error::Error::TooShort(
            samples.len(),
        )));
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    Ok(Signal::new(samples, times[0], dt)?)
}

pub fn signal_to_csv(signal: &Signal) -> String {
    let mut out = String::from("t,re,im\n");
    for (j, c) in signal.samples().iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_f64(signal.time(j)),
            fmt_f64(c.re),
            fmt_f64(c.im)
        );
    }
    out
}

pub fn encode_f64le(signal: &Signal) -> Vec<u8> {
    let mut out = Vec::with_capacity(F64LE_HEADER_LEN + 24 + 16 * signal.len());
    out.extend_from_slice(F64LE_MAGIC);
    out.extend_from_slice(&F64LE_VERSION.to_le_bytes());
    out.extend_from_slice(&[0u8; 8]);
    out.extend_from_slice(&signal.t0().to_le_bytes());
    out.extend_from_slice(&signal.dt().to_le_bytes());
    out.extend_from_slice(&(signal.len() as u64).to_le_bytes());
    for c in signal.samples() {
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

pub fn decode_f64le(bytes: &[u8]) -> Result<Signal, FormatError> {
    let fixed = F64LE_HEADER_LEN + 24;
    if bytes.len() < fixed {
        return Err(FormatError::Truncated {
            expected: fixed,
            found: bytes.len(),
        });
    }
    if &bytes[..4] != F64LE_MAGIC {
        return Err(FormatError::Header(format!("bad magic {:?}", &bytes[..4])));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != F64LE_VERSION {
        return Err(FormatError::Header(format!(
            "unsupported version {version}"
        )));
    }
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let t0 = f64_at(16);
    let dt = f64_at(24);
    let count = u64::from_le_bytes(bytes[32..40].try_into().unwrap()) as usize;
    let expected = count
        .checked_mul(16)
        .and_then(|n| n.checked_add(fixed))
        .ok_or_else(|| FormatError::Header(format!("sample count {count} too large")))?;
    if bytes.len() != expected {
        return Err(FormatError::Truncated {
            expected,
            found: bytes.len(),
        });
    }
    let mut samples = Vec::with_capacity(count);
    for row in 0..count {
        let o = fixed + 16 * row;
        let c = Complex64::new(f64_at(o), f64_at(o + 8));
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(FormatError::NonFinite { row: row + 1 });
        }
        samples.push(c);
    }
    Ok(Signal::new(samples, t0, dt)?)
}

/// Grid CSV: first row `omega\T` then the `T` values; each further row is an
/// `Omega` value followed by the cells at that `Omega`.
pub fn grid_to_csv<V: Copy>(
    t_axis: &Axis,
    omega_axis: &Axis,
    get: impl Fn(usize, usize) -> V,
    fmt: impl Fn(V) -> String,
) -> String {
    let mut out = String::from("omega\\T");
    for t in t_axis.values() {
        out.push(',');
        out.push_str(&fmt_f64(t));
    }
    out.push('\n');
    for (j, w) in omega_axis.values().enumerate() {
        out.push_str(&fmt_f64(w));
        for i in 0..t_axis.len() {
            out.push(',');
            out.push_str(&fmt(get(i, j)));
        }
        out.push('\n');
    }
    out
}

/// A grid re-read from CSV: `values[j][i]` is the cell at `(T_i, Omega_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvGrid<V> {
    pub t_values: Vec<f64>,
    pub omega_values: Vec<f64>,
    pub values: Vec<Vec<V>>,
}

impl CsvGrid<f64> {
    /// Rectangle-rule plane integral using steps recovered from the axes.
    pub fn integral(&self) -> f64 {
        let step = |v: &[f64]| (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
        let sum: f64 = self.values.iter().flatten().sum();
        sum * step(&self.t_values) * step(&self.omega_values)
    }
}

pub fn parse_grid_csv<V>(
    text: &str,
    parse: impl Fn(&str) -> Option<V>,
) -> Result<CsvGrid<V>, FormatError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| FormatError::Header("empty file".into()))?;
    let mut head = header.split(',');
    if head.next() != Some("omega\\T") {
        return Err(FormatError::Header(format!("unexpected `{header}`")));
    }
    let t_values = head
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| FormatError::Header(format!("`{s}`: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut omega_values = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 1;
        let mut fields = line.split(',');
        let w = fields
            .next()
            .and_then(|s| s.parse::<f64>().ok())
            .ok_or_else(|| FormatError::Row {
                row,
                reason: "bad omega value".into(),
            })?;
        let cells = fields
            .map(|s| {
                parse(s).ok_or_else(|| FormatError::Row {
                    row,
                    reason: format!("bad cell `{s}`"),
                })
            })
            .collect::<Result<Vec<V>, _>>()?;
        if cells.len() != t_values.len() {
            return Err(FormatError::Row {
                row,
                reason: format!("expected {} cells, found {}", t_values.len(), cells.len()),
            });
        }
        omega_values.push(w);
        values.push(cells);
    }
    Ok(CsvGrid {
        t_values,
        omega_values,
        values,
    })
}

/// Heatmap color scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ColorScale {
    /// `(v - lo) / (hi - lo)` with `lo = min(0, min v)`, `hi = max v`.
    Linear,
    /// `log10(max(v, floor * max))` mapped from `log10(floor * max)` to `log10(max)`.
    Log { floor: f64 },
}

/// Colormap stops, equally spaced over `[0, 1]` and increasing in luminance:
/// black, purple, red, orange, white.
pub const COLORMAP: [[f64; 3]; 5] = [
    [0.0, 0.0, 0.0],
    [64.0, 0.0, 128.0],
    [200.0, 30.0, 30.0],
    [255.0, 160.0, 0.0],
    [255.0, 255.0, 255.0],
];

pub fn colormap(x: f64) -> [u8; 3] {
    let x = if x.is_nan() { 0.0 } else { x.clamp(0.0, 1.0) };
    let pos = x * (COLORMAP.len() - 1) as f64;
    let i = (pos.floor() as usize).min(COLORMAP.len() - 2);
    let f = pos - i as f64;
    let mut rgb = [0u8; 3];
    for (c, out) in rgb.iter_mut().enumerate() {
        let v = COLORMAP[i][c] + f * (COLORMAP[i + 1][c] - COLORMAP[i][c]);
        *out = v.round() as u8;
    }
    rgb
}

/// Binary P6 image, one pixel per cell: `T` left to right, `Omega`
/// increasing from the bottom row to the top row.
pub fn heatmap_ppm(
    nt: usize,
    nw: usize,
    get: impl Fn(usize, usize) -> f64,
    scale: ColorScale,
) -> Vec<u8> {
    let mut hi = f64::NEG_INFINITY;
    let mut lo = 0.0f64;
    for i in 0..nt {
        for j in 0..nw {
            let v = get(i, j);
            hi = hi.max(v);
            lo = lo.min(v);
        }
    }
    let normalize = |v: f64| -> f64 {
        match scale {
            ColorScale::Linear => {
                if hi > lo {
                    (v - lo) / (hi - lo)
                } else {
                    0.0
                }
            }
            ColorScale::Log { floor } => {
                if hi <= 0.0 {
                    return 0.0;
                }
                let bottom = (floor * hi).log10();
                let top = hi.log10();
                if top <= bottom {
                    return 0.0;
                }
                (v.max(floor * hi).log10() - bottom) / (top - bottom)
            }
        }
    };
    let mut out = format!("P6\n{nt} {nw}\n255\n").into_bytes();
    out.reserve(3 * nt * nw);
    for j in (0..nw).rev() {
        for i in 0..nt {
            out.extend_from_slice(&colormap(normalize(get(i, j))));
        }
    }
    out
}

/// Ordered `key=value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn push_f64(&mut self, key: &str, value: f64) {
        self.push(key, fmt_f64(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Self { entries }
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        let mut f = fs::File::create(path).map_err(io_err(path))?;
        f.write_all(self.render().as_bytes()).map_err(io_err(path))
    }
}
