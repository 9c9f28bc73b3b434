//! Table-shaped output: the per-(image, solver) record, its CSV and aligned
//! text renderings, and the `key=value` single-run report.

use std::io::Write;

use crate::error::Result;

pub const CSV_HEADER: [&str; 8] = [
    "image",
    "solver",
    "mask_fraction",
    "rel_error_pct",
    "psnr_db",
    "cpu_seconds",
    "iterations",
    "fft_count",
];

/// Six significant digits in the style of C's `%g`; infinities as `inf`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // let the formatter do the rounding, then read back the decimal exponent
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// One row of the results table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub image: String,
    pub solver: String,
    pub mask_fraction: Option<f64>,
    pub outcome: std::result::Result<RunMetrics, String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMetrics {
    pub rel_error_pct: f64,
    pub psnr_db: f64,
    pub cpu_seconds: f64,
    pub iterations: usize,
    pub fft_count: u64,
}

impl BenchRecord {
    pub fn is_failed(&self) -> bool {
        self.outcome.is_err()
    }

    /// CSV fields in [`CSV_HEADER`] order. Metrics are left blank for failed runs.
    pub fn fields(&self) -> [String; 8] {
        let frac = self.mask_fraction.map(fmt_sig).unwrap_or_default();
        match &self.outcome {
            Ok(m) => [
                self.image.clone(),
                self.solver.clone(),
                frac,
                fmt_sig(m.rel_error_pct),
                fmt_sig(m.psnr_db),
                fmt_sig(m.cpu_seconds),
                m.iterations.to_string(),
                m.fft_count.to_string(),
            ],
            Err(_) => [
                self.image.clone(),
                self.solver.clone(),
                frac,
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ],
        }
    }
}

pub fn write_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn csv_string(records: &[BenchRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, records)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

/// Left-aligned text columns separated by two spaces.
pub fn aligned_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

pub fn records_table(records: &[BenchRecord]) -> String {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let mut f = r.fields().to_vec();
            if let Err(reason) = &r.outcome {
                f[3] = format!("FAILED: {reason}");
            }
            f
        })
        .collect();
    aligned_table(&CSV_HEADER, &rows)
}

/// Ordered `key=value` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValueReport {
    entries: Vec<(String, String)>,
}

impl KeyValueReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn push_num(&mut self, key: impl Into<String>, value: f64) {
        self.push(key, fmt_sig(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|l| l.split_once('='))
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .collect();
        Self { entries }
    }
}
