//! CSV writers. Floats carry six decimals; lines end with `\n`.

use std::io::{self, Write};

use thiserror::Error;

use crate::env::Trace;
use crate::harness::AggregateCurve;
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
}

pub const TRACE_HEADER: &str = "run,t,arm,generated,accrued,reward,cum_regret";

/// Reproducibility header written above every output file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metadata {
    pub master_seed: u64,
    pub config_hash: String,
    pub version: String,
}

impl Metadata {
    pub fn new(master_seed: u64, config_hash: String) -> Self {
        Self {
            master_seed,
            config_hash,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

pub const VERSION_PREFIX: &str = "# version=";

/// Two comment lines: seed and config hash, then the tool version.
pub fn write_metadata<W: Write>(out: &mut W, meta: &Metadata) -> io::Result<()> {
    writeln!(
        out,
        "# master_seed={} config_hash={}",
        meta.master_seed, meta.config_hash
    )?;
    writeln!(out, "{VERSION_PREFIX}{}", meta.version)
}

pub fn write_trace_csv<W: Write, F: Real>(
    out: &mut W,
    trace: &Trace<F>,
    cum_regret: &[F],
) -> Result<(), OutputError> {
    if cum_regret.len() != trace.len() {
        return Err(OutputError::LengthMismatch(format!(
            "{} regret entries for {} rounds",
            cum_regret.len(),
            trace.len()
        )));
    }
    writeln!(out, "{TRACE_HEADER}")?;
    for (r, c) in trace.records.iter().zip(cum_regret) {
        writeln!(
            out,
            "{},{},{},{:.6},{},{:.6},{:.6}",
            trace.run,
            r.t,
            r.arm,
            r.generated,
            u8::from(r.accrued),
            r.reward,
            c
        )?;
    }
    Ok(())
}

/// `t,<label>_mean,<label>_std,...` with one row per round.
pub fn write_curve_csv<W: Write, F: Real>(
    out: &mut W,
    curves: &[(&str, &AggregateCurve<F>)],
) -> Result<(), OutputError> {
    let len = curves.first().map_or(0, |(_, c)| c.len());
    if let Some((label, c)) = curves.iter().find(|(_, c)| c.len() != len) {
        return Err(OutputError::LengthMismatch(format!(
            "curve `{label}` has {} rounds, expected {len}",
            c.len()
        )));
    }
    let mut header = String::from("t");
    for (label, _) in curves {
        header.push_str(&format!(",{label}_mean,{label}_std"));
    }
    writeln!(out, "{header}")?;
    for i in 0..len {
        write!(out, "{}", i + 1)?;
        for (_, c) in curves {
            write!(out, ",{:.6},{:.6}", c.mean[i], c.std[i])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// `bin,<label>,...` with one row per histogram bin.
pub fn write_histogram_csv<W: Write>(
    out: &mut W,
    histograms: &[(String, Vec<u64>)],
) -> Result<(), OutputError> {
    let len = histograms.first().map_or(0, |(_, h)| h.len());
    if histograms.iter().any(|(_, h)| h.len() != len) {
        return Err(OutputError::LengthMismatch(
            "histograms differ in bin count".into(),
        ));
    }
    let labels: Vec<&str> = histograms.iter().map(|(l, _)| l.as_str()).collect();
    writeln!(out, "bin,{}", labels.join(","))?;
    for bin in 0..len {
        write!(out, "{bin}")?;
        for (_, h) in histograms {
            write!(out, ",{}", h[bin])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::RoundRecord;

    fn three_rounds() -> Trace<f64> {
        let mut tr = Trace::new(9, 2);
        tr.records = vec![
            RoundRecord {
                t: 1,
                arm: 0,
                generated: 1.0,
                accrued: false,
                reward: 0.0,
                sampled_d: 2,
            },
            RoundRecord {
                t: 2,
                arm: 0,
                generated: 1.0,
                accrued: true,
                reward: 1.0,
                sampled_d: 2,
            },
            RoundRecord {
                t: 3,
                arm: 1,
                generated: 0.0,
                accrued: true,
                reward: 0.0,
                sampled_d: 0,
            },
        ];
        tr
    }

    #[test]
    fn empty_trace_is_header_only() {
        let mut buf = Vec::new();
        write_trace_csv::<_, f64>(&mut buf, &Trace::new(0, 0), &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{TRACE_HEADER}\n"));
    }

    #[test]
    fn three_rounds_make_four_lines() {
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &three_rounds(), &[0.9, 0.8, 1.7]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(!text.contains('\r'));
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "2,1,0,1.000000,0,0.000000,0.900000"
        );
    }

    #[test]
    fn trace_length_mismatch() {
        let mut buf = Vec::new();
        assert!(matches!(
            write_trace_csv(&mut buf, &three_rounds(), &[0.0]),
            Err(OutputError::LengthMismatch(_))
        ));
    }

    #[test]
    fn curve_headers() {
        let c = AggregateCurve {
            mean: vec![0.5],
            std: vec![0.0],
            runs: 1,
        };
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &[("ucb1", &c)]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap().lines().next().unwrap(),
            "t,ucb1_mean,ucb1_std"
        );
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &[("a", &c), ("b", &c)]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap().lines().next().unwrap(),
            "t,a_mean,a_std,b_mean,b_std"
        );
    }

    #[test]
    fn curve_values_match_fixture() {
        let c = AggregateCurve {
            mean: vec![0.1, 0.25, 0.5, 0.75, 1.125],
            std: vec![0.0, 0.5, 0.125, 0.3333333, 2.0],
            runs: 3,
        };
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &[("x", &c)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<Vec<f64>> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 5);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row[0], (i + 1) as f64);
            assert!((row[1] - c.mean[i]).abs() < 5e-7);
            assert!((row[2] - c.std[i]).abs() < 5e-7);
        }
    }

    #[test]
    fn curve_length_mismatch() {
        let a = AggregateCurve {
            mean: vec![0.0; 2],
            std: vec![0.0; 2],
            runs: 1,
        };
        let b = AggregateCurve {
            mean: vec![0.0; 3],
            std: vec![0.0; 3],
            runs: 1,
        };
        let mut buf = Vec::new();
        assert!(write_curve_csv(&mut buf, &[("a", &a), ("b", &b)]).is_err());
    }
}
