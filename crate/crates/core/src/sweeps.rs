//! Grid evaluation of the core operations and CSV tables of the results.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adder_mac::{zero_error_upper_exponent, RatePair};
use crate::entropy::{
    binary_entropy, binary_entropy_inv, g_func, log_binomial, phi, v_func, NormalizedDistance, Rate,
};
use crate::error::{Error, Result};
use crate::exponents::{
    avgdist_lower_exponent, avgdist_threshold, compare_bounds, hct_upper_exponent,
    morss_lower_exponent, rhct_lower_exponent, sphere_exponent, thm1_expansion, thm2_expansion,
    w_d, CenterMode, Correlation,
};
use crate::hypercontractivity::{c_function, psi_bound, solve_q};
use crate::oracle::{rectangle_prob, sphere_distance_profile};
use crate::sentinel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// One grid axis. The first and last points are exactly `start` and `stop`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl Axis {
    pub fn linear(name: &str, start: f64, stop: f64, count: usize) -> Self {
        Self {
            name: name.into(),
            start,
            stop,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn log(name: &str, start: f64, stop: f64, count: usize) -> Self {
        Self {
            spacing: Spacing::Log,
            ..Self::linear(name, start, stop, count)
        }
    }

    /// A single-point axis.
    pub fn point(name: &str, value: f64) -> Self {
        Self::linear(name, value, value, 1)
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        let bad = |msg: &str| Err(Error::Sweep(format!("axis {}: {msg}", self.name)));
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return bad("endpoints must be finite");
        }
        match self.count {
            0 => return bad("count must be at least 1"),
            1 if self.start != self.stop => return bad("a single point needs start == stop"),
            1 => return Ok(vec![self.start]),
            _ => {}
        }
        if self.spacing == Spacing::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return bad("log spacing needs positive endpoints");
        }
        let last = self.count - 1;
        Ok((0..self.count)
            .map(|i| {
                if i == last {
                    return self.stop;
                }
                let f = i as f64 / last as f64;
                match self.spacing {
                    Spacing::Linear => self.start + f * (self.stop - self.start),
                    Spacing::Log => self.start * (self.stop / self.start).powf(f),
                }
            })
            .collect())
    }
}

impl FromStr for Axis {
    type Err = Error;

    /// `name=start:stop:count[:lin|log]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Sweep(format!(
                "axis {s:?}: expected name=start:stop:count[:lin|log]"
            ))
        };
        let (name, rest) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = rest.split(':').collect();
        if !(3..=4).contains(&parts.len()) || name.is_empty() {
            return Err(bad());
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("lin") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(_) => return Err(bad()),
        };
        Ok(Self {
            name: name.trim().into(),
            start: num(parts[0])?,
            stop: num(parts[1])?,
            count: parts[2].trim().parse().map_err(|_| bad())?,
            spacing,
        })
    }
}

/// Core operation evaluated at every grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operation {
    Entropy,
    EntropyInv,
    Phi,
    V,
    G,
    Wd,
    SphereSame,
    SphereOpposite,
    Thm1,
    Thm2,
    Hct,
    Rhct,
    Morss,
    Avgdist,
    CompareBounds,
    C,
    SolveQ,
    Psi,
    ZeroError,
}

impl Operation {
    pub const ALL: [Operation; 19] = [
        Operation::Entropy,
        Operation::EntropyInv,
        Operation::Phi,
        Operation::V,
        Operation::G,
        Operation::Wd,
        Operation::SphereSame,
        Operation::SphereOpposite,
        Operation::Thm1,
        Operation::Thm2,
        Operation::Hct,
        Operation::Rhct,
        Operation::Morss,
        Operation::Avgdist,
        Operation::CompareBounds,
        Operation::C,
        Operation::SolveQ,
        Operation::Psi,
        Operation::ZeroError,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operation::Entropy => "entropy",
            Operation::EntropyInv => "entropy-inv",
            Operation::Phi => "phi",
            Operation::V => "v",
            Operation::G => "g",
            Operation::Wd => "wd",
            Operation::SphereSame => "sphere-same",
            Operation::SphereOpposite => "sphere-opposite",
            Operation::Thm1 => "thm1",
            Operation::Thm2 => "thm2",
            Operation::Hct => "hct",
            Operation::Rhct => "rhct",
            Operation::Morss => "morss",
            Operation::Avgdist => "avgdist",
            Operation::CompareBounds => "compare-bounds",
            Operation::C => "c",
            Operation::SolveQ => "solve-q",
            Operation::Psi => "psi",
            Operation::ZeroError => "zero-error",
        }
    }

    /// Axis names the operation reads, in argument order.
    pub fn inputs(self) -> &'static [&'static str] {
        match self {
            Operation::Entropy => &["p"],
            Operation::EntropyInv => &["y"],
            Operation::Phi => &["x", "y"],
            Operation::V => &["t"],
            Operation::G => &["y"],
            Operation::Wd => &["alpha", "beta", "d"],
            Operation::SphereSame | Operation::SphereOpposite => &["alpha", "beta", "rho"],
            Operation::Thm1 | Operation::Hct | Operation::Rhct | Operation::Psi => {
                &["alpha", "rho"]
            }
            Operation::Thm2 | Operation::Morss | Operation::Avgdist => &["alpha", "beta", "rho"],
            Operation::CompareBounds => &["alpha", "beta", "rho"],
            Operation::C => &["lambda"],
            Operation::SolveQ => &["alpha", "q0", "t"],
            Operation::ZeroError => &["r1", "r2", "rho"],
        }
    }

    /// Output column names appended after the axes.
    pub fn outputs(self) -> &'static [&'static str] {
        match self {
            Operation::Entropy => &["h"],
            Operation::EntropyInv => &["h_inv"],
            Operation::Phi => &["phi"],
            Operation::V => &["v"],
            Operation::G => &["g"],
            Operation::Wd => &["w"],
            Operation::SphereSame | Operation::SphereOpposite => &["exponent", "d_star"],
            Operation::Thm1 | Operation::Thm2 => &["exponent", "in_regime"],
            Operation::Hct | Operation::Rhct | Operation::Morss | Operation::Avgdist => {
                &["exponent"]
            }
            Operation::CompareBounds => &[
                "morss",
                "avgdist",
                "rhct",
                "hct",
                "avgdist_threshold",
                "avgdist_beats_morss",
            ],
            Operation::C => &["c"],
            Operation::SolveQ => &["q", "a", "b", "residual", "extra_roots"],
            Operation::Psi => &["psi", "q"],
            Operation::ZeroError => &["exponent"],
        }
    }

    /// Evaluates the operation with arguments in [`Operation::inputs`] order.
    pub fn eval(self, x: &[f64]) -> Result<Vec<f64>> {
        let rate = Rate::new;
        let corr = Correlation::new;
        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        Ok(match self {
            Operation::Entropy => vec![binary_entropy(crate::entropy::Prob::new(x[0])?.get())],
            Operation::EntropyInv => vec![binary_entropy_inv(rate(x[0])?.get())],
            Operation::Phi => vec![phi(rate(x[0])?.get(), rate(x[1])?.get())],
            Operation::V => vec![v_func(x[0])?],
            Operation::G => vec![g_func(x[0])?],
            Operation::Wd => vec![w_d(
                rate(x[0])?,
                rate(x[1])?,
                NormalizedDistance::new(x[2])?,
            )?],
            Operation::SphereSame | Operation::SphereOpposite => {
                let mode = if self == Operation::SphereSame {
                    CenterMode::Same
                } else {
                    CenterMode::Opposite
                };
                let s = sphere_exponent(rate(x[0])?, rate(x[1])?, corr(x[2])?, mode)?;
                vec![s.bound.value, s.d_star]
            }
            Operation::Thm1 => {
                let b = thm1_expansion(rate(x[0])?, x[1])?;
                vec![b.value, flag(b.in_regime)]
            }
            Operation::Thm2 => {
                let b = thm2_expansion(rate(x[0])?, rate(x[1])?, corr(x[2])?);
                vec![b.value, flag(b.in_regime)]
            }
            Operation::Hct => vec![hct_upper_exponent(rate(x[0])?, corr(x[1])?).value],
            Operation::Rhct => vec![rhct_lower_exponent(rate(x[0])?, corr(x[1])?).value],
            Operation::Morss => {
                vec![morss_lower_exponent(rate(x[0])?, rate(x[1])?, corr(x[2])?).value]
            }
            Operation::Avgdist => {
                vec![avgdist_lower_exponent(rate(x[0])?, rate(x[1])?, corr(x[2])?).value]
            }
            Operation::CompareBounds => {
                let (a, b, r) = (rate(x[0])?, rate(x[1])?, corr(x[2])?);
                let rep = compare_bounds(a, b, r)?;
                vec![
                    morss_lower_exponent(a, b, r).value,
                    avgdist_lower_exponent(a, b, r).value,
                    rhct_lower_exponent(a, r).value,
                    hct_upper_exponent(a, r).value,
                    avgdist_threshold(r)?,
                    flag(rep.avgdist_beats_morss),
                ]
            }
            Operation::C => vec![c_function(x[0])?],
            Operation::SolveQ => {
                let s = solve_q(rate(x[0])?, x[1], x[2])?;
                vec![s.q, s.a, s.b, s.residual, s.extra_roots as f64]
            }
            Operation::Psi => {
                let (b, s) = psi_bound(rate(x[0])?, x[1])?;
                vec![b.value, s.q]
            }
            Operation::ZeroError => {
                vec![zero_error_upper_exponent(RatePair::new(x[0], x[1])?, corr(x[2])?).value]
            }
        })
    }
}

impl FromStr for Operation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Operation::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Operation::ALL.iter().map(|o| o.name()).collect();
                Error::Sweep(format!(
                    "unknown operation {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub operation: Operation,
    /// Row order is lexicographic in axis order: the first axis varies slowest.
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl SweepSpec {
    pub fn new(operation: Operation, axes: Vec<Axis>) -> Self {
        Self {
            operation,
            axes,
            output: None,
        }
    }

    /// Checks that the axes name exactly the operation's inputs and returns,
    /// for each input, the index of its axis.
    fn bind(&self) -> Result<Vec<usize>> {
        let inputs = self.operation.inputs();
        if self.axes.len() != inputs.len() {
            return Err(Error::Sweep(format!(
                "operation {} takes axes {:?}, got {} axes",
                self.operation.name(),
                inputs,
                self.axes.len()
            )));
        }
        inputs
            .iter()
            .map(|name| {
                self.axes
                    .iter()
                    .position(|a| a.name == *name)
                    .ok_or_else(|| {
                        Error::Sweep(format!(
                            "operation {} needs an axis named {name}",
                            self.operation.name()
                        ))
                    })
            })
            .collect()
    }
}

/// Rectangular table of reals with a header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                left: self.columns.len(),
                right: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// CSV with a header row, shortest round-trip decimals, `inf`/`-inf`
    /// sentinels and LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", sentinel::render(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::SetFormat {
            line: 1,
            message: "missing header".into(),
        })?;
        let mut table = Self::new(header.split(',').map(String::from).collect());
        for (i, line) in lines.enumerate() {
            let row = line
                .split(',')
                .map(|c| {
                    sentinel::parse(c).ok_or_else(|| Error::SetFormat {
                        line: i + 2,
                        message: format!("not a number: {c:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row).map_err(|_| Error::SetFormat {
                line: i + 2,
                message: "row length differs from header".into(),
            })?;
        }
        Ok(table)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

fn describe_point(names: &[&str], x: &[f64]) -> String {
    names
        .iter()
        .zip(x)
        .map(|(n, v)| format!("{n}={v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Evaluates the operation on the full grid. Rows come back in lexicographic
/// axis order regardless of how the work was scheduled; the first failing
/// point in that order aborts the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<ResultTable> {
    let binding = spec.bind()?;
    let values = spec
        .axes
        .iter()
        .map(Axis::values)
        .collect::<Result<Vec<_>>>()?;
    let total: usize = values.iter().map(Vec::len).product();
    let points: Vec<Vec<f64>> = (0..total)
        .map(|mut flat| {
            let mut p = vec![0.0; values.len()];
            for (k, vals) in values.iter().enumerate().rev() {
                p[k] = vals[flat % vals.len()];
                flat /= vals.len();
            }
            p
        })
        .collect();
    let op = spec.operation;
    let inputs = op.inputs();
    let results: Vec<Result<Vec<f64>>> = points
        .par_iter()
        .map(|p| {
            let args: Vec<f64> = binding.iter().map(|&i| p[i]).collect();
            op.eval(&args).map_err(|e| Error::AtGridPoint {
                point: describe_point(inputs, &args),
                source: Box::new(e),
            })
        })
        .collect();
    let mut columns: Vec<String> = spec.axes.iter().map(|a| a.name.clone()).collect();
    columns.extend(op.outputs().iter().map(|s| s.to_string()));
    let mut table = ResultTable::new(columns);
    for (p, r) in points.into_iter().zip(results) {
        let mut row = p;
        row.extend(r?);
        table.push(row)?;
    }
    Ok(table)
}

/// `phi(x, y)` on the uniform `grid_count x grid_count` grid over `[0, 1]^2`.
pub fn figure_phi_surface(grid_count: usize) -> Result<ResultTable> {
    if grid_count < 2 {
        return Err(Error::Sweep("grid_count must be at least 2".into()));
    }
    run_sweep(&SweepSpec::new(
        Operation::Phi,
        vec![
            Axis::linear("x", 0.0, 1.0, grid_count),
            Axis::linear("y", 0.0, 1.0, grid_count),
        ],
    ))
}

/// Sphere radius used at finite `n`: `round(n h^{-1}(alpha))`.
pub fn finite_radius(n: usize, alpha: Rate) -> usize {
    (n as f64 * binary_entropy_inv(alpha.get())).round() as usize
}

/// Oracle exponent of two concentric spheres of radius `round(n h^{-1}(alpha))`
/// against the asymptotic sphere exponent, for each `n`.
///
/// Columns: `n, radius, realized_rate, oracle_exponent, asymptotic_exponent,
/// gap, scaled_gap` with `gap = |oracle - asymptotic|` and
/// `scaled_gap = gap n / log2 n`.
pub fn convergence_study(alpha: Rate, rho: Correlation, n_list: &[usize]) -> Result<ResultTable> {
    let asymptotic = sphere_exponent(alpha, alpha, rho, CenterMode::Same)?
        .bound
        .value;
    let rows: Vec<Result<Vec<f64>>> = n_list
        .par_iter()
        .map(|&n| {
            let radius = finite_radius(n, alpha);
            if radius == 0 || n < 2 {
                return Err(Error::Sweep(format!("n = {n}: sphere radius rounds to 0")));
            }
            let profile = sphere_distance_profile(n, radius, radius)?;
            let oracle = rectangle_prob(&profile, rho).exponent(n);
            let realized = log_binomial(n as u64, radius as u64)? / n as f64;
            let gap = (oracle - asymptotic).abs();
            Ok(vec![
                n as f64,
                radius as f64,
                realized,
                oracle,
                asymptotic,
                gap,
                gap * n as f64 / (n as f64).log2(),
            ])
        })
        .collect();
    let mut table = ResultTable::new(
        [
            "n",
            "radius",
            "realized_rate",
            "oracle_exponent",
            "asymptotic_exponent",
            "gap",
            "scaled_gap",
        ]
        .map(String::from)
        .to_vec(),
    );
    for r in rows {
        table.push(r?)?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values() {
        assert_eq!(
            Axis::linear("a", 0.0, 1.0, 5).values().unwrap(),
            [0.0, 0.25, 0.5, 0.75, 1.0]
        );
        let l = Axis::log("y", 1.0, 1e6, 7).values().unwrap();
        assert_eq!(l[0], 1.0);
        assert_eq!(l[6], 1e6);
        assert!((l[3] - 1e3).abs() < 1e-9);
        assert!(Axis::linear("a", 0.0, 1.0, 1).values().is_err());
        assert!(Axis::log("a", 0.0, 1.0, 3).values().is_err());
        assert_eq!(Axis::point("a", 0.3).values().unwrap(), [0.3]);
    }

    #[test]
    fn axis_parse() {
        let a: Axis = "rho=0.1:0.9:5".parse().unwrap();
        assert_eq!(a, Axis::linear("rho", 0.1, 0.9, 5));
        let b: Axis = "y=1:1e6:10:log".parse().unwrap();
        assert_eq!(b.spacing, Spacing::Log);
        assert!("rho=0.1:0.9".parse::<Axis>().is_err());
        assert!("0.1:0.9:3".parse::<Axis>().is_err());
        assert!("x=0:1:3:cubic".parse::<Axis>().is_err());
    }

    #[test]
    fn operation_names_round_trip() {
        for op in Operation::ALL {
            assert_eq!(op.name().parse::<Operation>().unwrap(), op);
            let json = serde_json::to_string(&op).unwrap();
            assert_eq!(json, format!("\"{}\"", op.name()));
        }
        assert!("nope".parse::<Operation>().is_err());
    }

    #[test]
    fn grid_cardinality_and_order() {
        let spec = SweepSpec::new(
            Operation::Thm1,
            vec![
                Axis::linear("rho", 0.9, 0.99, 3),
                Axis::linear("alpha", 0.2, 0.8, 3),
            ],
        );
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(t.columns, ["rho", "alpha", "exponent", "in_regime"]);
        assert_eq!(t.column("rho").unwrap()[..3], [0.9, 0.9, 0.9]);
        assert_eq!(t.column("alpha").unwrap()[..3], [0.2, 0.5, 0.8]);
    }

    #[test]
    fn single_point_matches_direct_call() {
        let spec = SweepSpec::new(
            Operation::SphereSame,
            vec![
                Axis::point("alpha", 0.4),
                Axis::point("beta", 0.6),
                Axis::point("rho", 0.3),
            ],
        );
        let t = run_sweep(&spec).unwrap();
        let direct = sphere_exponent(
            Rate::new(0.4).unwrap(),
            Rate::new(0.6).unwrap(),
            Correlation::new(0.3).unwrap(),
            CenterMode::Same,
        )
        .unwrap();
        assert_eq!(
            t.rows,
            [vec![0.4, 0.6, 0.3, direct.bound.value, direct.d_star]]
        );
    }

    #[test]
    fn wrong_axes_rejected() {
        let spec = SweepSpec::new(Operation::Phi, vec![Axis::linear("x", 0.0, 1.0, 2)]);
        assert!(run_sweep(&spec).is_err());
        let spec = SweepSpec::new(
            Operation::Phi,
            vec![
                Axis::linear("x", 0.0, 1.0, 2),
                Axis::linear("z", 0.0, 1.0, 2),
            ],
        );
        assert!(run_sweep(&spec).is_err());
    }

    #[test]
    fn failing_point_is_identified() {
        let spec = SweepSpec::new(
            Operation::Hct,
            vec![
                Axis::linear("alpha", 0.5, 0.5, 1),
                Axis::linear("rho", 0.5, 1.0, 3),
            ],
        );
        match run_sweep(&spec) {
            Err(Error::AtGridPoint { point, .. }) => assert_eq!(point, "alpha=0.5, rho=1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_round_trip_with_sentinels() {
        let mut t = ResultTable::new(vec!["a".into(), "b".into()]);
        t.push(vec![0.1, f64::NEG_INFINITY]).unwrap();
        t.push(vec![1.0 / 3.0, f64::INFINITY]).unwrap();
        assert!(t.push(vec![1.0]).is_err());
        let csv = t.to_csv();
        assert_eq!(csv, "a,b\n0.1,-inf\n0.3333333333333333,inf\n");
        assert_eq!(ResultTable::from_csv(&csv).unwrap(), t);
    }

    #[test]
    fn phi_surface_shape() {
        let t = figure_phi_surface(11).unwrap();
        assert_eq!(t.len(), 121);
        let v = t.column("phi").unwrap();
        assert_eq!(v[0], 0.0);
        assert_eq!(v[120], 0.5);
        assert_eq!(v[10], 0.5);
        for i in 0..11 {
            for j in 0..11 {
                assert_eq!(v[i * 11 + j], v[j * 11 + i]);
            }
        }
        assert!(figure_phi_surface(1).is_err());
    }

    #[test]
    fn convergence_rejects_zero_radius() {
        let r = Rate::new(0.5).unwrap();
        let c = Correlation::new(0.5).unwrap();
        assert!(convergence_study(r, c, &[2]).is_err());
        let t = convergence_study(r, c, &[64]).unwrap();
        assert_eq!(t.column("radius").unwrap(), [7.0]);
    }
}
