//! CSV form of sweep and design tables.
//!
//! Probabilities are written with nine significant digits in scientific
//! notation; noise values use the shortest representation that parses back
//! to the same `f64`. Missing values are empty fields.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::geometry::PlanarPoint;

use super::{DesignRow, RowStatus, SweepRow};

pub const SWEEP_HEADER: [&str; 10] = [
    "snr_db",
    "sigma2",
    "scheme",
    "p_err_exact",
    "p_err_union",
    "p_err_mc",
    "mc_ci_halfwidth",
    "trials",
    "seed",
    "status",
];

fn prob(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.8e}")).unwrap_or_default()
}

fn plain<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            plain(r.snr_db),
            r.sigma2.to_string(),
            r.scheme.clone(),
            prob(r.p_err_exact),
            prob(r.p_err_union),
            prob(r.p_err_mc),
            prob(r.mc_ci_halfwidth),
            r.trials.to_string(),
            plain(r.seed),
            r.status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, line: usize, i: usize) -> Result<Option<T>> {
    let text = record.get(i).unwrap_or("");
    if text.is_empty() {
        return Ok(None);
    }
    text.parse()
        .map(Some)
        .map_err(|_| Error::config(Some(line), SWEEP_HEADER[i], format!("cannot parse `{text}`")))
}

fn required<T: std::str::FromStr>(record: &csv::StringRecord, line: usize, i: usize) -> Result<T> {
    field(record, line, i)?.ok_or_else(|| Error::config(Some(line), SWEEP_HEADER[i], "missing value"))
}

/// Reads a table written by [`write_sweep`].
pub fn read_sweep<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(SWEEP_HEADER) {
        return Err(Error::config(Some(1), "header", "unexpected sweep columns"));
    }
    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        rows.push(SweepRow {
            snr_db: field(&rec, line, 0)?,
            sigma2: required(&rec, line, 1)?,
            scheme: rec.get(2).unwrap_or("").to_string(),
            p_err_exact: field(&rec, line, 3)?,
            p_err_union: field(&rec, line, 4)?,
            p_err_mc: field(&rec, line, 5)?,
            mc_ci_halfwidth: field(&rec, line, 6)?,
            trials: required(&rec, line, 7)?,
            seed: field(&rec, line, 8)?,
            status: rec
                .get(9)
                .unwrap_or("")
                .parse::<RowStatus>()
                .map_err(|e| Error::config(Some(line), "status", e))?,
        });
    }
    Ok(rows)
}

pub const DESIGN_HEADER: [&str; 22] = [
    "scheme",
    "gamma_phi",
    "snr_db",
    "sigma2",
    "s10_re",
    "s10_im",
    "s11_re",
    "s11_im",
    "s20_re",
    "s20_im",
    "s21_re",
    "s21_im",
    "a00_re",
    "a00_im",
    "a01_re",
    "a01_im",
    "a10_re",
    "a10_im",
    "a11_re",
    "a11_im",
    "energy",
    "p_err_exact",
];

fn coords(points: &[PlanarPoint]) -> impl Iterator<Item = String> + '_ {
    points.iter().flat_map(|p| [p.re.to_string(), p.im.to_string()])
}

pub fn write_design<W: Write>(rows: &[DesignRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DESIGN_HEADER)?;
    for r in rows {
        let mut rec = vec![
            r.scheme.clone(),
            r.gamma_phi.to_string(),
            plain(r.snr_db),
            r.sigma2.to_string(),
        ];
        rec.extend(coords(&r.s1));
        rec.extend(coords(&r.s2));
        rec.extend(coords(&r.combined));
        rec.push(if r.energy_ok { "ok" } else { "violated" }.to_string());
        rec.push(prob(r.p_err_exact));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Fixed-width text rendering of a design table.
pub fn format_design_table(rows: &[DesignRow]) -> String {
    let mut out = format!(
        "{:<28} {:>22} {:>22} {:>8} {:>12}\n",
        "scheme", "S1 (S10, S11)", "S2 (S20, S21)", "energy", "p_err"
    );
    let pair = |p: &[PlanarPoint; 2]| {
        if p.iter().all(|x| x.im == 0.0) {
            format!("({:.4}, {:.4})", p[0].re, p[1].re)
        } else {
            format!("({:.3}{:+.3}i, {:.3}{:+.3}i)", p[0].re, p[0].im, p[1].re, p[1].im)
        }
    };
    for r in rows {
        out += &format!(
            "{:<28} {:>22} {:>22} {:>8} {:>12}\n",
            r.scheme,
            pair(&r.s1),
            pair(&r.s2),
            if r.energy_ok { "ok" } else { "violated" },
            r.p_err_exact.map(|p| format!("{p:.4e}")).unwrap_or_default()
        );
    }
    out
}
