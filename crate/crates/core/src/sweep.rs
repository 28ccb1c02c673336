//! Temperature sweeps and their CSV/JSON serializations.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energies::{EnergyBreakdown, ShiftModel, DELTA_E_REFERENCE};
use crate::error::{Error, Result};
use crate::model::check_density;

pub const CSV_COLUMNS: [&str; 8] = [
    "theta",
    "u1",
    "u2",
    "e_osc",
    "delta_e",
    "delta_e_asym",
    "delta_f",
    "thermo_residual",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Lin,
}

/// `min:max:count[:log|lin]`, log by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl ThetaGrid {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        let bad = |m: &str| Err(Error::Grid(m.to_string()));
        if !min.is_finite() || !max.is_finite() {
            return bad("bounds must be finite");
        }
        if !(min > 0.0) {
            return bad("theta grid must start above 0");
        }
        if count == 0 {
            return bad("count must be at least 1");
        }
        if count == 1 && min != max {
            return bad("a single-point grid needs min == max");
        }
        if count > 1 && !(max > min) {
            return bad("max must exceed min for more than one point");
        }
        Ok(ThetaGrid {
            min,
            max,
            count,
            spacing,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k == 0 {
                    return self.min;
                }
                if k == self.count - 1 {
                    return self.max;
                }
                let t = k as f64 / last;
                match self.spacing {
                    Spacing::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                    Spacing::Lin => self.min + t * (self.max - self.min),
                }
            })
            .collect()
    }
}

impl FromStr for ThetaGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::Grid(format!(
                "expected min:max:count[:log|lin], got `{s}`"
            )));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Grid(format!("`{p}` is not a number")))
        };
        let min = num(parts[0])?;
        let max = num(parts[1])?;
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Grid(format!("`{}` is not a count", parts[2])))?;
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("log") => Spacing::Log,
            Some("lin") => Spacing::Lin,
            Some(other) => return Err(Error::Grid(format!("unknown spacing `{other}`"))),
        };
        ThetaGrid::new(min, max, count, spacing)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepHeader {
    pub g: f64,
    pub nu: f64,
    pub rel_tol: f64,
    pub grid: ThetaGrid,
    pub tool_version: String,
    pub delta_e_reference: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub header: SweepHeader,
    pub rows: Vec<EnergyBreakdown>,
}

impl EnergyBreakdown {
    /// Values in `CSV_COLUMNS` order.
    pub fn csv_fields(&self) -> [f64; 8] {
        [
            self.theta,
            self.u1,
            self.u2,
            self.e_osc,
            self.delta_e,
            self.delta_e_asym,
            self.delta_f,
            self.thermo_residual,
        ]
    }
}

/// Evaluate every grid point, concurrently on `threads` workers when given.
/// Rows come back in grid order regardless of scheduling.
pub fn compute_sweep(
    g: f64,
    nu: f64,
    grid: ThetaGrid,
    rel_tol: f64,
    threads: Option<usize>,
) -> Result<SweepTable> {
    check_density(nu)?;
    let model = ShiftModel::new(g, rel_tol)?;
    let thetas = grid.points();
    let run = || -> Result<Vec<EnergyBreakdown>> {
        thetas.par_iter().map(|&t| model.breakdown(t)).collect()
    };
    let rows = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(run)?,
        None => run()?,
    };
    Ok(SweepTable {
        header: SweepHeader {
            g,
            nu,
            rel_tol,
            grid,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            delta_e_reference: DELTA_E_REFERENCE.to_string(),
        },
        rows,
    })
}

/// 17 significant digits, enough to round-trip binary64.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = CSV_COLUMNS.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields = row.csv_fields();
            for (i, v) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", format_value(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Parse CSV produced by [`SweepTable::to_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<[f64; 8]>> {
    let mut lines = text.split('\n');
    let header = lines.next().unwrap_or_default();
    if header != CSV_COLUMNS.join(",") {
        return Err(Error::Parse(format!("unexpected header `{header}`")));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut row = [0.0; 8];
        let mut fields = line.split(',');
        for slot in row.iter_mut() {
            let field = fields
                .next()
                .ok_or_else(|| Error::Parse(format!("row {} is short", n + 1)))?;
            *slot = field
                .parse()
                .map_err(|_| Error::Parse(format!("row {}: `{field}`", n + 1)))?;
        }
        if fields.next().is_some() {
            return Err(Error::Parse(format!("row {} is long", n + 1)));
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grid_parsing() {
        let g: ThetaGrid = "10:1000:25:log".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 25);
        assert_eq!(p[0], 10.0);
        assert_eq!(p[24], 1000.0);
        assert!((p[12] - 100.0).abs() < 1e-9);
        assert!(p.windows(2).all(|w| w[0] < w[1]));

        let single: ThetaGrid = "5:5:1".parse().unwrap();
        assert_eq!(single.points(), vec![5.0]);
        assert_eq!(single.spacing, Spacing::Log);

        let lin: ThetaGrid = "1:3:3:lin".parse().unwrap();
        assert_eq!(lin.points(), vec![1.0, 2.0, 3.0]);

        for bad in [
            "",
            "1:2",
            "a:2:3",
            "1:2:0",
            "2:1:5",
            "0:1:3",
            "1:2:1",
            "1:2:3:cubic",
            "1:2:3:log:x",
        ] {
            assert!(bad.parse::<ThetaGrid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn csv_layout() {
        let table = SweepTable {
            header: SweepHeader {
                g: 1e-6,
                nu: 0.0,
                rel_tol: 1e-10,
                grid: "5:5:1".parse().unwrap(),
                tool_version: "0".into(),
                delta_e_reference: DELTA_E_REFERENCE.into(),
            },
            rows: vec![EnergyBreakdown {
                theta: 5.0,
                u0_per_vtilde: 1.0,
                u1: 0.1,
                u2: -0.2,
                e_osc: -0.1,
                delta_e: -1e-300,
                delta_e_asym: 3.0,
                delta_f: 1.0 / 3.0,
                thermo_residual: 0.0,
            }],
        };
        let csv = table.to_csv();
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(
            lines[0],
            "theta,u1,u2,e_osc,delta_e,delta_e_asym,delta_f,thermo_residual"
        );
        assert!(lines[1].starts_with("5.0000000000000000e0,1.0000000000000001e-1,"));
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[2], "");
        assert!(!csv.contains('\r'));
        let parsed = parse_csv(&csv).unwrap();
        assert_eq!(parsed[0], table.rows[0].csv_fields());
        let back = SweepTable::from_json(&table.to_json()).unwrap();
        assert_eq!(back, table);
    }

    proptest! {
        #[test]
        fn seventeen_digits_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let back: f64 = format_value(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
