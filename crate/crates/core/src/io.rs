//! Plain-text output formats.
//!
//! Reals are written with 17 significant digits in scientific notation, so
//! every value reads back to the same `f64`. States and blocks are written as
//! 0-based indices.

use std::io::{Read, Write};

use crate::analysis::{DiagnosticsReport, ErrorReport, SweepResult};
use crate::error::{invalid, Error, Result};
use crate::initcond::InitialCondition;
use crate::meanfield::OdeSolution;
use crate::simulate::{MasterSolution, TrajectorySample};

/// Shortest fixed format that round-trips: 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::Parse(format!("{other:?}")),
        }
    } else {
        Error::Parse(e.to_string())
    }
}

fn writer<W: Write>(w: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(header).map_err(csv_error)?;
    Ok(out)
}

fn finish<W: Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush()?;
    Ok(())
}

/// `vertex,state,probability`, one row per vertex and state.
pub fn write_initial_condition<W: Write>(w: W, ic: &InitialCondition) -> Result<()> {
    let mut out = writer(w, &["vertex", "state", "probability"])?;
    for i in 0..ic.n() {
        for (s, p) in ic.row(i).iter().enumerate() {
            out.write_record([i.to_string(), s.to_string(), fmt_real(*p)]).map_err(csv_error)?;
        }
    }
    finish(out)
}

/// Inverse of [`write_initial_condition`]; missing entries are zero.
pub fn read_initial_condition<R: Read>(r: R, n: usize, n_states: usize) -> Result<InitialCondition> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let mut z0 = vec![0.0; n * n_states];
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let field = |c: usize| {
            record.get(c).ok_or_else(|| Error::Parse(format!("row {}: missing column {c}", line + 2)))
        };
        let parse_err = |what: &str| Error::Parse(format!("row {}: bad {what}", line + 2));
        let i: usize = field(0)?.parse().map_err(|_| parse_err("vertex"))?;
        let s: usize = field(1)?.parse().map_err(|_| parse_err("state"))?;
        let p: f64 = field(2)?.parse().map_err(|_| parse_err("probability"))?;
        if i >= n || s >= n_states {
            return Err(invalid(format!("row {}: vertex {i} state {s} out of range", line + 2)));
        }
        z0[i * n_states + s] = p;
    }
    InitialCondition::new(n_states, z0, "file")
}

/// `replicate,t,block,state,xbar`
pub fn write_trajectories<W: Write>(w: W, samples: &[TrajectorySample]) -> Result<()> {
    let mut out = writer(w, &["replicate", "t", "block", "state", "xbar"])?;
    for sample in samples {
        let (k_count, s_count) = (sample.num_blocks(), sample.n_states);
        for (g, t) in sample.time_grid.times().iter().enumerate() {
            for k in 0..k_count {
                for s in 0..s_count {
                    out.write_record([
                        sample.replicate.to_string(),
                        fmt_real(*t),
                        k.to_string(),
                        s.to_string(),
                        fmt_real(sample.block_average(g, k, s)),
                    ])
                    .map_err(csv_error)?;
                }
            }
        }
    }
    finish(out)
}

/// `t,unit,state,value`; units are vertices or blocks depending on the
/// solver variant.
pub fn write_solution<W: Write>(w: W, sol: &OdeSolution) -> Result<()> {
    let mut out = writer(w, &["t", "unit", "state", "value"])?;
    for (g, t) in sol.time_grid.times().iter().enumerate() {
        let t = fmt_real(*t);
        for u in 0..sol.n_units {
            for s in 0..sol.n_states {
                out.write_record([t.as_str(), &u.to_string(), &s.to_string(), &fmt_real(sol.value(g, u, s))])
                    .map_err(csv_error)?;
            }
        }
    }
    finish(out)
}

/// `t,block,state,mean,variance`
pub fn write_master_solution<W: Write>(w: W, sol: &MasterSolution) -> Result<()> {
    let mut out = writer(w, &["t", "block", "state", "mean", "variance"])?;
    for (g, t) in sol.time_grid.times().iter().enumerate() {
        for k in 0..sol.block_sizes.len() {
            for s in 0..sol.n_states {
                out.write_record([
                    fmt_real(*t),
                    k.to_string(),
                    s.to_string(),
                    fmt_real(sol.mean(g, k, s)),
                    fmt_real(sol.variance(g, k, s)),
                ])
                .map_err(csv_error)?;
            }
        }
    }
    finish(out)
}

/// `t,block,state,error,se`
pub fn write_error_report<W: Write>(w: W, report: &ErrorReport) -> Result<()> {
    let mut out = writer(w, &["t", "block", "state", "error", "se"])?;
    for (g, t) in report.time_grid.times().iter().enumerate() {
        for k in 0..report.n_blocks {
            for s in 0..report.n_states {
                let (e, se) = report.cell(g, k, s);
                out.write_record([fmt_real(*t), k.to_string(), s.to_string(), fmt_real(e), fmt_real(se)])
                    .map_err(csv_error)?;
            }
        }
    }
    finish(out)
}

/// `t,block,state,h,delta_rms,delta_star_rms`
pub fn write_diagnostics<W: Write>(w: W, report: &DiagnosticsReport) -> Result<()> {
    let mut out = writer(w, &["t", "block", "state", "h", "delta_rms", "delta_star_rms"])?;
    for (g, t) in report.time_grid.times().iter().enumerate() {
        for k in 0..report.n_blocks {
            for s in 0..report.n_states {
                out.write_record([
                    fmt_real(*t),
                    k.to_string(),
                    s.to_string(),
                    fmt_real(report.h[(g * report.n_blocks + k) * report.n_states + s]),
                    fmt_real(report.delta_rms[g]),
                    fmt_real(report.delta_star_rms[g]),
                ])
                .map_err(csv_error)?;
            }
        }
    }
    finish(out)
}

/// `N,d,rho,error,se,bound_held`; the last column is empty for error sweeps.
pub fn write_sweep<W: Write>(w: W, result: &SweepResult) -> Result<()> {
    let mut out = writer(w, &["N", "d", "rho", "error", "se", "bound_held"])?;
    for p in &result.points {
        out.write_record([
            p.n.to_string(),
            p.d.to_string(),
            fmt_real(p.rho),
            fmt_real(p.error),
            fmt_real(p.se),
            p.bound_held.map(|b| b.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_error)?;
    }
    finish(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(fmt_real(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(fmt_real(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn initial_condition_round_trip() {
        let ic = InitialCondition::new(3, vec![0.1, 0.2, 0.7, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], "t").unwrap();
        let mut buf = vec![];
        write_initial_condition(&mut buf, &ic).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("vertex,state,probability\n0,0,1.0000000000000001e-1\n"));
        let back = read_initial_condition(buf.as_slice(), 2, 3).unwrap();
        assert_eq!(back.z0(), ic.z0());
    }

    #[test]
    fn read_rejects_out_of_range() {
        let text = "vertex,state,probability\n0,5,1.0\n";
        assert!(read_initial_condition(text.as_bytes(), 1, 2).is_err());
        let text = "vertex,state,probability\n0,x,1.0\n";
        assert!(matches!(read_initial_condition(text.as_bytes(), 1, 2), Err(Error::Parse(_))));
    }
}
