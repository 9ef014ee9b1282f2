//! Closed-form arithmetic cost per received symbol of the RLS algorithms and
//! the rank-selection rules, as tabulated for the proposed scheme.

use std::fmt;
use std::io::Write;

use thiserror::Error;

use crate::rank::Selector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexityError {
    #[error("JM must be at least 1")]
    Dimension,
    #[error("rank must be at least 1")]
    Rank,
    #[error("rank range {d_min}..={d_max} is empty or starts at 0")]
    Range { d_min: u64, d_max: u64 },
    #[error(transparent)]
    Csv(#[from] CsvError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("csv output failed: {0}")]
pub struct CsvError(pub String);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpCount {
    pub additions: u64,
    pub multiplications: u64,
}

impl OpCount {
    pub const fn new(additions: u64, multiplications: u64) -> Self {
        Self { additions, multiplications }
    }
}

impl std::ops::Add for OpCount {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(self.additions + o.additions, self.multiplications + o.multiplications)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    FullRank,
    Proposed,
    Mswf,
    Avf,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::FullRank, Algorithm::Proposed, Algorithm::Mswf, Algorithm::Avf];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::FullRank => "full-rank",
            Algorithm::Proposed => "proposed",
            Algorithm::Mswf => "mswf",
            Algorithm::Avf => "avf",
        }
    }

    /// Cost at observation size `jm` and rank `d` (ignored for full rank).
    pub fn cost(self, jm: u64, d: u64) -> Result<OpCount, ComplexityError> {
        match self {
            Algorithm::FullRank => cost_full_rank(jm),
            Algorithm::Proposed => cost_proposed(jm, d),
            Algorithm::Mswf => cost_mswf(jm, d),
            Algorithm::Avf => cost_avf(jm, d),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The printed polynomials, `x = JM`, `D` the rank, `Δ = D_max - D_min`.
pub struct FormulaRow {
    pub name: &'static str,
    pub additions: &'static str,
    pub multiplications: &'static str,
}

pub const FORMULAS: [FormulaRow; 8] = [
    FormulaRow { name: "full-rank", additions: "3x^2 - 2x + 3", multiplications: "6x^2 + 2x + 2" },
    FormulaRow {
        name: "proposed",
        additions: "3x^2 - 2x + 3 + 6D^2 - 8D + 3",
        multiplications: "7x^2 + 2x + 7D^2 + 9D",
    },
    FormulaRow { name: "mswf", additions: "Dx^2 + x^2 + 6D^2 - 8D + 2", multiplications: "Dx^2 + x^2 + 2Dx + 3D + 2" },
    FormulaRow {
        name: "avf",
        additions: "D(x^2 + 3(x-1)^2) + D(5(x-1) + 1) + 2x - 1",
        multiplications: "D(4x^2 + 4x + 1) + 4x + 2",
    },
    FormulaRow {
        name: "multiple-filters",
        additions: "2Δ + 1 + (Δ+1)(3x^2 - 2x + 3 + 6Dmax^2 - 8Dmax + 3)",
        multiplications: "(Δ+1)(7x^2 + 2x + 7Dmax^2 + 9Dmax)",
    },
    FormulaRow { name: "extended", additions: "2Δ + 1", multiplications: "0" },
    FormulaRow { name: "stopping-rule", additions: "2(2x-1)Δ + 1", multiplications: "(x^2 + x + 1)(Δ+1)" },
    FormulaRow { name: "cv", additions: "(2x-1)(2Δ + 1)", multiplications: "(Δ+1)(x + 1)" },
];

fn check(jm: u64, d: u64) -> Result<(), ComplexityError> {
    if jm < 1 {
        return Err(ComplexityError::Dimension);
    }
    if d < 1 {
        return Err(ComplexityError::Rank);
    }
    Ok(())
}

pub fn cost_full_rank(jm: u64) -> Result<OpCount, ComplexityError> {
    check(jm, 1)?;
    let x = jm;
    Ok(OpCount::new(3 * x * x - 2 * x + 3, 6 * x * x + 2 * x + 2))
}

pub fn cost_proposed(jm: u64, d: u64) -> Result<OpCount, ComplexityError> {
    check(jm, d)?;
    let x = jm;
    Ok(OpCount::new(3 * x * x - 2 * x + 3 + 6 * d * d - 8 * d + 3, 7 * x * x + 2 * x + 7 * d * d + 9 * d))
}

pub fn cost_mswf(jm: u64, d: u64) -> Result<OpCount, ComplexityError> {
    check(jm, d)?;
    let x = jm;
    Ok(OpCount::new(d * x * x + x * x + 6 * d * d - 8 * d + 2, d * x * x + x * x + 2 * d * x + 3 * d + 2))
}

pub fn cost_avf(jm: u64, d: u64) -> Result<OpCount, ComplexityError> {
    check(jm, d)?;
    let x = jm;
    Ok(OpCount::new(
        d * (x * x + 3 * (x - 1) * (x - 1)) + d * (5 * (x - 1) + 1) + 2 * x - 1,
        d * (4 * x * x + 4 * x + 1) + 4 * x + 2,
    ))
}

/// Cost of a rank-selection rule over `d_min ..= d_max`. The multiple-filters
/// figure includes its `D_max - D_min + 1` proposed RLS filters; the other
/// rules exclude the filter they select for.
pub fn cost_rank_selection(mode: Selector, jm: u64, d_min: u64, d_max: u64) -> Result<OpCount, ComplexityError> {
    check(jm, 1)?;
    if d_min < 1 || d_max < d_min {
        return Err(ComplexityError::Range { d_min, d_max });
    }
    let x = jm;
    let delta = d_max - d_min;
    Ok(match mode {
        Selector::Extended => OpCount::new(2 * delta + 1, 0),
        Selector::Multiple => OpCount::new(
            2 * delta + 1 + (delta + 1) * (3 * x * x - 2 * x + 3 + 6 * d_max * d_max - 8 * d_max + 3),
            (delta + 1) * (7 * x * x + 2 * x + 7 * d_max * d_max + 9 * d_max),
        ),
        Selector::Stopping => OpCount::new(2 * (2 * x - 1) * delta + 1, (x * x + x + 1) * (delta + 1)),
        Selector::CrossValidation => OpCount::new((2 * x - 1) * (2 * delta + 1), (delta + 1) * (x + 1)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub jm: u64,
    pub algorithm: Algorithm,
    pub ops: OpCount,
}

/// Cost of every algorithm at each `jm` for rank `d`.
pub fn sweep(jm_values: impl IntoIterator<Item = u64>, d: u64) -> Result<Vec<SweepRow>, ComplexityError> {
    let mut rows = Vec::new();
    for jm in jm_values {
        for algorithm in Algorithm::ALL {
            rows.push(SweepRow { jm, algorithm, ops: algorithm.cost(jm, d)? });
        }
    }
    Ok(rows)
}

/// CSV with header `jm,algorithm,additions,multiplications`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<(), ComplexityError> {
    let err = |e: csv::Error| CsvError(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["jm", "algorithm", "additions", "multiplications"]).map_err(err)?;
    for r in rows {
        w.write_record([
            r.jm.to_string(),
            r.algorithm.name().to_string(),
            r.ops.additions.to_string(),
            r.ops.multiplications.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| CsvError(e.to_string()))?;
    Ok(())
}
