//! Fixed-header CSV tables. Floats are written with 17 significant digits,
//! which round-trips every binary64 value.

use std::path::Path;

use crate::error::Result;
use crate::measures::Banded;
use crate::montecarlo::{McSummary, PairMomentRow, TailRow, TheoremEntry};

pub const WERNER_HEADER: &str = "N,replicate,stat_offcurve,stat_inclusive";
pub const THEOREM_HEADER: &str = "N,f_name,discrepancy,bound,ratio";
pub const TAIL_HEADER: &str = "N,R,ccdf";
pub const PAIRMOMENT_HEADER: &str = "T,M,estimate,stderr";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

/// One row per replicate and `N`.
pub fn werner_csv(summary: Option<&McSummary>) -> String {
    let rows = summary.into_iter().flat_map(|s| {
        s.replicates.iter().flat_map(move |rec| {
            s.per_n.iter().zip(&rec.werner).map(move |(ns, w)| {
                format!(
                    "{},{},{},{}",
                    ns.n,
                    rec.replicate,
                    fmt_f64(w.off_curve),
                    fmt_f64(w.inclusive)
                )
            })
        })
    });
    table(WERNER_HEADER, rows)
}

/// Werner rows `(N, replicate, statistic)` from a single-path run.
pub fn werner_rows_csv(rows: &[(i32, usize, Banded)]) -> String {
    table(
        WERNER_HEADER,
        rows.iter()
            .map(|(n, r, w)| format!("{n},{r},{},{}", fmt_f64(w.off_curve), fmt_f64(w.inclusive))),
    )
}

/// Theorem rows of a single path (band-inclusive discrepancy).
pub fn theorem_entries_csv(entries: &[TheoremEntry]) -> String {
    table(
        THEOREM_HEADER,
        entries.iter().map(|e| {
            format!(
                "{},{},{},{},{}",
                e.n,
                e.f_name,
                fmt_f64(e.discrepancy.inclusive),
                fmt_f64(e.bound),
                fmt_f64(e.ratio())
            )
        }),
    )
}

/// One row per `(N, f)`: medians over replicates of the band-inclusive
/// discrepancy, the rate bound and their ratio.
pub fn theorem_csv(summary: Option<&McSummary>) -> String {
    let rows = summary.into_iter().flat_map(|s| {
        s.theorem.iter().map(|t| {
            format!(
                "{},{},{},{},{}",
                t.n,
                t.f_name,
                fmt_f64(t.median_discrepancy),
                fmt_f64(t.median_bound),
                fmt_f64(t.median_ratio)
            )
        })
    });
    table(THEOREM_HEADER, rows)
}

pub fn tail_csv(rows: &[TailRow]) -> String {
    table(
        TAIL_HEADER,
        rows.iter()
            .map(|r| format!("{},{},{}", r.n, fmt_f64(r.r), fmt_f64(r.ccdf))),
    )
}

pub fn pairmoment_csv(rows: &[PairMomentRow]) -> String {
    table(
        PAIRMOMENT_HEADER,
        rows.iter().map(|r| {
            format!(
                "{},{},{},{}",
                r.t,
                r.m,
                fmt_f64(r.estimate),
                fmt_f64(r.stderr)
            )
        }),
    )
}

pub fn write(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}

/// Splits a CSV into its header and rows of fields.
pub fn read_csv(text: &str) -> (String, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("").to_string();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}
