//! Parameter sweeps behind the figures: violation landscapes, asymptote
//! convergence, allowed/forbidden maps, the singular regime and WKB error
//! tables.
//!
//! Every scan returns a [`ScanResult`]: a metadata map, column names and rows
//! of [`Cell`]s. Grid points inside a [`GridSpec`] exclusion window produce no
//! row. Points inside the breakdown window of the asymptotics keep their row
//! with `flag = "breakdown"` and empty asymptote cells.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::{devi_forms, elgi_family, mutual_information_ineq, InequalityFamily};
use crate::error::{domain, Error, Result};
use crate::semiclassics::{
    breakdown_half_width, classify_region, d_wkb, default_boundary_eps, discriminant_for, distance_to_multiple_of_pi,
    entropy_asymptotic, forbidden_envelope, radial_coordinate, ReducedIndices, RegionTag,
};
use crate::spin::Spin;
use crate::temporal::{all_subsets, entropy_vector, mixed_entropy_vector, wigner_entropy, InitialState, Schedule};
use crate::wigner::d_matrix;

/// Default number of points in a β grid.
pub const DEFAULT_POINTS: usize = 512;

/// `|x - center| < half_width` is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub center: f64,
    pub half_width: f64,
}

/// Evenly spaced grid on `[start, stop]`, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub windows: Vec<Window>,
}

impl GridSpec {
    pub fn new(name: impl Into<String>, start: f64, stop: f64, points: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return domain(format!("grid needs finite start < stop, got [{start}, {stop}]"));
        }
        if points < 2 {
            return domain(format!("grid needs at least 2 points, got {points}"));
        }
        Ok(Self { name: name.into(), start, stop, points, windows: Vec::new() })
    }

    pub fn with_window(mut self, center: f64, half_width: f64) -> Result<Self> {
        if !(center >= self.start && center <= self.stop) {
            return domain(format!("window centre {center} lies outside [{}, {}]", self.start, self.stop));
        }
        if !(half_width >= 0.0 && half_width.is_finite()) {
            return domain(format!("window half-width must be finite and non-negative, got {half_width}"));
        }
        self.windows.push(Window { center, half_width });
        Ok(self)
    }

    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.points {
            self.stop
        } else {
            self.start + (self.stop - self.start) * k as f64 / (self.points - 1) as f64
        }
    }

    pub fn is_excluded(&self, x: f64) -> bool {
        self.windows.iter().any(|w| (x - w.center).abs() < w.half_width)
    }

    /// Grid values outside every window, in grid order.
    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|k| self.value(k)).filter(|&x| !self.is_excluded(x)).collect()
    }

    fn describe(&self) -> String {
        let mut s = format!("{}:[{},{}]x{}", self.name, self.start, self.stop, self.points);
        for w in &self.windows {
            s.push_str(&format!(" excl({}±{})", w.center, w.half_width));
        }
        s
    }
}

/// One table entry. Serializes to a JSON number, string or `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(k) => Some(*k as f64),
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Int(k) => k.to_string(),
            Cell::Num(x) => format!("{x:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        if x.is_finite() {
            Cell::Num(x)
        } else {
            Cell::Empty
        }
    }
}

impl From<i64> for Cell {
    fn from(k: i64) -> Self {
        Cell::Int(k)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::from)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Self-describing table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ScanResult {
    fn new(kind: &str, columns: &[&str]) -> Self {
        let mut meta = BTreeMap::new();
        meta.insert("scan".to_string(), kind.to_string());
        meta.insert("code_version".to_string(), env!("CARGO_PKG_VERSION").to_string());
        Self { meta, columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.meta.insert(key.into(), value.to_string());
    }

    /// Stamp the result; scans never read the clock themselves.
    pub fn with_timestamp(mut self, stamp: impl Into<String>) -> Self {
        self.meta.insert("timestamp".to_string(), stamp.into());
        self
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric cells of one column; non-numeric cells are skipped.
    pub fn numbers(&self, name: &str) -> Result<Vec<f64>> {
        let k = self.column(name).ok_or_else(|| Error::Domain(format!("no column '{name}'")))?;
        Ok(self.rows.iter().filter_map(|r| r[k].as_f64()).collect())
    }

    /// Header row, then one record per row. Metadata goes in `# key=value`
    /// comment lines before the header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for (k, v) in &self.meta {
            writeln!(out, "# {k}={v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field)).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    /// `{"meta": {...}, "columns": [...], "rows": [[...], ...]}`.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if r.rows.iter().any(|row| row.len() != r.columns.len()) {
            return Err(Error::Parse("row width does not match the column count".into()));
        }
        Ok(r)
    }
}

fn is_flagged(angles: &[f64], half_width: f64) -> bool {
    angles.iter().any(|&b| distance_to_multiple_of_pi(b) < half_width)
}

fn ordered_map<F>(values: &[f64], f: F) -> Result<Vec<Vec<Cell>>>
where
    F: Fn(f64) -> Result<Vec<Cell>> + Sync,
{
    values.par_iter().map(|&x| f(x)).collect()
}

/// Violation landscape for `n` equally spaced times, grid over `ωΔt`.
///
/// Columns: the grid value, `min_order_k` for `k = 2..=n`, `min_devi`, then
/// one column per family member named `o{k}:{label}`.
pub fn scan_fig2(spin: Spin, n: usize, grid: &GridSpec, state: &InitialState<f64>) -> Result<ScanResult> {
    if !(3..=4).contains(&n) {
        return domain(format!("the landscape scan takes n = 3 or 4, got {n}"));
    }
    if state.spin() != spin {
        return domain(format!("state is for j = {}, scan asked for j = {spin}", state.spin()));
    }
    let families: Vec<InequalityFamily> = (2..=n).map(|k| elgi_family(n, k)).collect::<Result<_>>()?;
    let devi = devi_forms(n)?;
    let mut columns = vec![grid.name.clone()];
    columns.extend((2..=n).map(|k| format!("min_order_{k}")));
    columns.push("min_devi".into());
    for fam in &families {
        for m in fam.members() {
            columns.push(format!("o{}:{}", fam.order(), m.label()));
        }
    }
    let mixed = state.is_maximally_mixed();
    let subsets = all_subsets(n);
    let rows = ordered_map(&grid.values(), |step| {
        let schedule = Schedule::equally_spaced(n, step)?;
        let h = if mixed {
            mixed_entropy_vector(spin, &schedule, &subsets)?
        } else {
            entropy_vector(state, &schedule, &subsets)?
        };
        let mut row = vec![Cell::from(step)];
        let mut values = Vec::new();
        for fam in &families {
            let v: Vec<f64> = fam.members().iter().map(|m| m.value(&h)).collect::<Result<_>>()?;
            row.push(v.iter().copied().fold(f64::INFINITY, f64::min).into());
            values.extend(v);
        }
        let mut best = f64::INFINITY;
        for d in &devi {
            best = best.min(d.value(&h)?);
        }
        row.push(best.into());
        row.extend(values.into_iter().map(Cell::from));
        Ok(row)
    })?;
    let mut out = ScanResult::new("fig2", &[]);
    out.columns = columns;
    out.rows = rows;
    out.set_meta("j", spin);
    out.set_meta("n", n);
    out.set_meta("schedule", "equally spaced, beta_{i,i+1} = grid value");
    out.set_meta("state", if mixed { "mixed".to_string() } else { format!("{:?}", state.diag()) });
    out.set_meta("grid", grid.describe());
    Ok(out)
}

/// `D_{2,3}` for the angles `(0, 2β, 3β)` against `±ln|sin 3β / sin β|`.
///
/// `window` is the breakdown half-width around multiples of π for `β` and
/// `3β`; `None` uses [`breakdown_half_width`].
pub fn scan_fig3(spin: Spin, grid: &GridSpec, window: Option<f64>) -> Result<ScanResult> {
    let w = window.unwrap_or_else(|| breakdown_half_width(spin));
    let ineq = mutual_information_ineq(3, 1, 2)?;
    let subsets: Vec<_> = ineq.coeffs().keys().copied().collect();
    let rows = ordered_map(&grid.values(), |beta| {
        let schedule = Schedule::from_angles(vec![0.0, 2.0 * beta, 3.0 * beta])?;
        let exact = ineq.value(&mixed_entropy_vector(spin, &schedule, &subsets)?)?;
        let flagged = is_flagged(&[beta, 3.0 * beta], w);
        let asym = ((3.0 * beta).sin() / beta.sin()).abs().ln();
        let row = if flagged {
            vec![beta.into(), exact.into(), Cell::Empty, Cell::Empty, Cell::Empty, "breakdown".into()]
        } else {
            vec![beta.into(), exact.into(), asym.into(), (-asym).into(), (exact - asym).abs().into(), "".into()]
        };
        Ok(row)
    })?;
    let mut out = ScanResult::new("fig3", &["beta", "exact", "asymptote", "asymptote_neg", "deviation", "flag"]);
    out.rows = rows;
    out.set_meta("j", spin);
    out.set_meta("schedule", "angles (0, 2 beta, 3 beta)");
    out.set_meta("inequality", ineq.label());
    out.set_meta("state", "mixed");
    out.set_meta("breakdown_half_width", w);
    out.set_meta("grid", grid.describe());
    Ok(out)
}

/// Largest deviation among unflagged rows of a fig3 table.
pub fn max_deviation(result: &ScanResult) -> Result<f64> {
    Ok(result.numbers("deviation")?.into_iter().fold(0.0, f64::max))
}

/// `|d^j_{mn}(β)|²` and the region tag over the full `(m, n)` grid at each `β`.
pub fn scan_fig4(spin: Spin, betas: &[f64], eps: Option<f64>) -> Result<ScanResult> {
    let eps = eps.unwrap_or_else(|| default_boundary_eps(spin));
    let mut out = ScanResult::new("fig4", &["beta", "m", "n", "d2", "region", "R"]);
    for &beta in betas {
        let dm = d_matrix::<f64>(spin, beta);
        let mut allowed = 0usize;
        for m in spin.indices() {
            for n in spin.indices() {
                let d = dm.element(m, n)?;
                let rr = discriminant_for::<f64>(spin, m, n, beta);
                if rr > 0.0 {
                    allowed += 1;
                }
                let tag = classify_region(spin, m, n, beta, eps);
                out.rows.push(vec![
                    beta.into(),
                    m.value::<f64>().into(),
                    n.value::<f64>().into(),
                    (d * d).into(),
                    tag.name().into(),
                    rr.into(),
                ]);
            }
        }
        let frac = allowed as f64 / (spin.dim() * spin.dim()) as f64;
        out.set_meta(format!("allowed_fraction@{beta}"), frac);
    }
    out.set_meta("j", spin);
    out.set_meta("boundary_eps", eps);
    Ok(out)
}

/// `D_{2,3}` with `β_{2,3} = beta23` and `β_{1,3} = π + δ`, for each spin and
/// `δ ∈ {0, ±1/J, ±J^{-2/3}, ±0.1}`. The `δ = 0` rows carry the ratio
/// `D_{2,3} / ln(2j+1)`.
pub fn scan_singularity(spins: &[Spin], beta23: f64) -> Result<ScanResult> {
    if distance_to_multiple_of_pi(beta23) < 1e-3 {
        return domain(format!("beta23 = {beta23} must stay away from multiples of pi"));
    }
    let ineq = mutual_information_ineq(3, 1, 2)?;
    let subsets: Vec<_> = ineq.coeffs().keys().copied().collect();
    let mut jobs = Vec::new();
    for &spin in spins {
        let big_j: f64 = spin.big_j();
        jobs.push((spin, "0", 0.0));
        for (name, d) in [("1/J", 1.0 / big_j), ("J^-2/3", big_j.powf(-2.0 / 3.0)), ("0.1", 0.1)] {
            jobs.push((spin, name, -d));
            jobs.push((spin, name, d));
        }
    }
    let rows: Vec<Vec<Cell>> = jobs
        .par_iter()
        .map(|&(spin, name, delta)| {
            let beta12 = std::f64::consts::PI - beta23 + delta;
            let schedule = Schedule::from_angles(vec![0.0, beta12, beta12 + beta23])?;
            let d23 = ineq.value(&mixed_entropy_vector(spin, &schedule, &subsets)?)?;
            let ln_dim = (spin.dim() as f64).ln();
            let ratio = if delta == 0.0 { Cell::from(d23 / ln_dim) } else { Cell::Empty };
            Ok(vec![
                spin.j::<f64>().into(),
                name.into(),
                delta.into(),
                (beta12 + beta23).into(),
                d23.into(),
                (-wigner_entropy(spin, beta23)).into(),
                ratio,
            ])
        })
        .collect::<Result<_>>()?;
    let mut out = ScanResult::new("singularity", &["j", "delta_scale", "delta", "beta13", "d23", "minus_h", "ratio"]);
    out.rows = rows;
    out.set_meta("beta23", beta23);
    out.set_meta("schedule", "angles (0, pi - beta23 + delta, pi + delta)");
    out.set_meta("state", "mixed");
    out.set_meta("spins", spins.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
    Ok(out)
}

/// Per-`β` validation of the Airy approximation and the entropy asymptote.
///
/// * `wkb_err`: max of `|d_wkb - d| / sqrt(2 / (π J sqrt R))` over allowed
///   points outside the boundary layer with `ζ < -2` and a reliable anchor.
/// * `forbidden_c`: max of `|d|² / forbidden_envelope` over points more than
///   `5 J^{-2/3}` outside the ellipse.
/// * `entropy_dev`: `H_j(β) - entropy_asymptotic`, withheld in the breakdown window.
pub fn scan_wkb_error(spin: Spin, grid: &GridSpec) -> Result<ScanResult> {
    let w = breakdown_half_width(spin);
    let eps = default_boundary_eps(spin);
    let big_j: f64 = spin.big_j();
    let rows = ordered_map(&grid.values(), |beta| {
        if distance_to_multiple_of_pi(beta) < 1e-9 {
            let h = wigner_entropy(spin, beta);
            return Ok(vec![
                beta.into(),
                Cell::Empty,
                Cell::Empty,
                h.into(),
                Cell::Empty,
                Cell::Empty,
                "breakdown".into(),
            ]);
        }
        let dm = d_matrix::<f64>(spin, beta);
        let (mut wkb_err, mut forb_c) = (None::<f64>, None::<f64>);
        for m in spin.indices() {
            for n in spin.indices() {
                let d = dm.element(m, n)?;
                match classify_region(spin, m, n, beta, eps) {
                    RegionTag::Allowed => {
                        let e = d_wkb(spin, m, n, beta)?;
                        if e.zeta < -2.0 && e.reliable {
                            let rr = discriminant_for::<f64>(spin, m, n, beta);
                            let amp = (2.0 / (std::f64::consts::PI * big_j * rr.sqrt())).sqrt();
                            let err = (e.value - d).abs() / amp;
                            wkb_err = Some(wkb_err.map_or(err, |x| x.max(err)));
                        }
                    }
                    RegionTag::Forbidden => {
                        let r = ReducedIndices::<f64>::new(spin, m, n);
                        if radial_coordinate(r.mu, r.nu, beta) - beta.sin().abs() > 5.0 * eps {
                            let env = forbidden_envelope(spin, m, n, beta)?;
                            if env > 0.0 {
                                let c = d * d / env;
                                forb_c = Some(forb_c.map_or(c, |x| x.max(c)));
                            }
                        }
                    }
                    RegionTag::Boundary(_) => {}
                }
            }
        }
        let h = wigner_entropy(spin, beta);
        let flagged = is_flagged(&[beta], w);
        let (asym, dev, flag) = if flagged {
            (Cell::Empty, Cell::Empty, "breakdown")
        } else {
            let a = entropy_asymptotic(spin, beta);
            (a.into(), (h - a).into(), "")
        };
        Ok(vec![beta.into(), wkb_err.into(), forb_c.into(), h.into(), asym, dev, flag.into()])
    })?;
    let mut out = ScanResult::new(
        "wkb-error",
        &["beta", "wkb_err", "forbidden_c", "entropy", "entropy_asymptote", "entropy_dev", "flag"],
    );
    out.rows = rows;
    out.set_meta("j", spin);
    out.set_meta("boundary_eps", eps);
    out.set_meta("breakdown_half_width", w);
    out.set_meta("grid", grid.describe());
    Ok(out)
}

/// `points`-point grid on `[0, π]` named `beta`.
pub fn beta_grid(points: usize) -> Result<GridSpec> {
    GridSpec::new("beta", 0.0, std::f64::consts::PI, points)
}
