//! Initial distributions and the scalar functionals the threshold results consume.
//!
//! Three representations are supported: finitely many atoms, a piecewise-linear
//! density on a grid, and a handful of named families. Every named family is
//! backed by one of the first two, so downstream code only ever has to handle
//! atoms or piecewise-linear cells.

mod json;

pub use json::{parse_measure, MeasureDocument};

use crate::error::{Error, Result};
use crate::quadrature;

/// Tolerance on the total weight of an atomic measure after construction.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Accepted band for user-entered weight sums; values inside are renormalized.
pub const WEIGHT_SUM_BAND: (f64, f64) = (0.999, 1.001);
/// Absolute tolerance for quadrature-based functionals.
pub const FUNCTIONAL_TOL: f64 = 1e-10;
/// Grid points used to back the semicircle family.
const SEMICIRCLE_GRID: usize = 513;

/// A finite sum of weighted point masses.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl AtomicMeasure {
    /// Validates and builds an atomic measure. Atoms are sorted and duplicates
    /// merged; weights summing into [`WEIGHT_SUM_BAND`] are renormalized.
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        Self::check_entries(&atoms, &weights)?;
        let sum: f64 = weights.iter().sum();
        if !(WEIGHT_SUM_BAND.0..=WEIGHT_SUM_BAND.1).contains(&sum) {
            return Err(Error::validation(
                "weights",
                format!("weights sum to {sum}, outside [{}, {}]", WEIGHT_SUM_BAND.0, WEIGHT_SUM_BAND.1),
            ));
        }
        Ok(Self::assemble(atoms, weights))
    }

    /// Builds a measure from positive weights of arbitrary total, dividing by the sum.
    pub fn from_unnormalized(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        Self::check_entries(&atoms, &weights)?;
        let sum: f64 = weights.iter().sum();
        if !sum.is_finite() {
            return Err(Error::validation("weights", "weight sum is not finite"));
        }
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(Self::assemble(atoms, weights))
    }

    pub fn point_mass(a: f64) -> Self {
        Self {
            atoms: vec![a],
            weights: vec![1.0],
        }
    }

    fn check_entries(atoms: &[f64], weights: &[f64]) -> Result<()> {
        if atoms.is_empty() {
            return Err(Error::validation("atoms", "at least one atom is required"));
        }
        if atoms.len() != weights.len() {
            return Err(Error::validation(
                "weights",
                format!("{} weights for {} atoms", weights.len(), atoms.len()),
            ));
        }
        for (i, a) in atoms.iter().enumerate() {
            if !a.is_finite() {
                return Err(Error::validation(format!("atoms[{i}]"), "atom is not finite"));
            }
        }
        for (i, w) in weights.iter().enumerate() {
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::validation(format!("weights[{i}]"), format!("weight {w} is not positive")));
            }
        }
        Ok(())
    }

    fn assemble(atoms: Vec<f64>, weights: Vec<f64>) -> Self {
        let mut pairs: Vec<(f64, f64)> = atoms.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut weights: Vec<f64> = Vec::with_capacity(pairs.len());
        for (a, w) in pairs {
            match atoms.last() {
                Some(&last) if last == a => *weights.last_mut().unwrap() += w,
                _ => {
                    atoms.push(a);
                    weights.push(w);
                }
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            weights.iter_mut().for_each(|w| *w /= sum);
        }
        Self { atoms, weights }
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms.iter().copied().zip(self.weights.iter().copied())
    }
}

/// A probability density interpolated linearly between grid samples and zero
/// outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GriddedDensity {
    grid: Vec<f64>,
    values: Vec<f64>,
}

/// One interpolation cell of a [`GriddedDensity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub x0: f64,
    pub x1: f64,
    pub p0: f64,
    pub p1: f64,
}

impl Cell {
    pub fn slope(&self) -> f64 {
        (self.p1 - self.p0) / (self.x1 - self.x0)
    }

    pub fn value_at(&self, x: f64) -> f64 {
        self.p0 + self.slope() * (x - self.x0)
    }

    pub fn is_positive(&self) -> bool {
        self.p0 > 0.0 || self.p1 > 0.0
    }
}

impl GriddedDensity {
    /// Validates the samples and renormalizes them to unit trapezoid mass.
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 {
            return Err(Error::validation("grid", "at least two grid points are required"));
        }
        if grid.len() != values.len() {
            return Err(Error::validation(
                "values",
                format!("{} values for {} grid points", values.len(), grid.len()),
            ));
        }
        for (i, x) in grid.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::validation(format!("grid[{i}]"), "grid point is not finite"));
            }
            if i > 0 && *x <= grid[i - 1] {
                return Err(Error::validation(format!("grid[{i}]"), "grid is not strictly increasing"));
            }
        }
        for (i, p) in values.iter().enumerate() {
            if !p.is_finite() || *p < 0.0 {
                return Err(Error::validation(format!("values[{i}]"), format!("density value {p} is negative")));
            }
        }
        let mass = trapezoid(&grid, &values);
        if !(mass > 0.0) {
            return Err(Error::validation("values", "density has zero total mass"));
        }
        let values = values.into_iter().map(|p| p / mass).collect();
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.grid.windows(2).zip(self.values.windows(2)).map(|(x, p)| Cell {
            x0: x[0],
            x1: x[1],
            p0: p[0],
            p1: p[1],
        })
    }

    pub fn value_at(&self, x: f64) -> f64 {
        let n = self.grid.len();
        if x < self.grid[0] || x > self.grid[n - 1] {
            return 0.0;
        }
        let i = self.grid.partition_point(|g| *g <= x).clamp(1, n - 1);
        let cell = Cell {
            x0: self.grid[i - 1],
            x1: self.grid[i],
            p0: self.values[i - 1],
            p1: self.values[i],
        };
        cell.value_at(x)
    }

    /// Maximal closed intervals on which the interpolant is not identically zero.
    pub fn support_pieces(&self) -> Vec<(f64, f64)> {
        let mut pieces: Vec<(f64, f64)> = Vec::new();
        let mut open: Option<(f64, f64)> = None;
        for cell in self.cells() {
            if cell.is_positive() {
                open = Some(match open {
                    Some((l, _)) => (l, cell.x1),
                    None => (cell.x0, cell.x1),
                });
            } else if let Some(piece) = open.take() {
                pieces.push(piece);
            }
        }
        pieces.extend(open);
        pieces
    }
}

/// Trapezoid integral of samples `ys` on abscissae `xs`.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Parametric families with closed-form functionals where available.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Symmetric Bernoulli ½δ₋ₐ + ½δₐ.
    Bernoulli { a: f64 },
    PointMass { a: f64 },
    Uniform { l: f64, r: f64 },
    Triangle { l: f64, m: f64, r: f64 },
    /// Centered semicircle law of variance `t`.
    Semicircle { t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
enum Backing {
    Atomic(AtomicMeasure),
    Density(GriddedDensity),
}

/// A named family together with the atomic or gridded measure that backs it.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedMeasure {
    family: Family,
    backing: Backing,
}

impl NamedMeasure {
    pub fn new(family: Family) -> Result<Self> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(name, "parameter is not finite"))
            }
        };
        let backing = match family {
            Family::Bernoulli { a } => {
                finite("a", a)?;
                Backing::Atomic(AtomicMeasure::new(vec![-a, a], vec![0.5, 0.5])?)
            }
            Family::PointMass { a } => {
                finite("a", a)?;
                Backing::Atomic(AtomicMeasure::point_mass(a))
            }
            Family::Uniform { l, r } => {
                finite("l", l)?;
                finite("r", r)?;
                if l >= r {
                    return Err(Error::validation("r", "uniform family requires l < r"));
                }
                Backing::Density(GriddedDensity::new(vec![l, r], vec![1.0, 1.0])?)
            }
            Family::Triangle { l, m, r } => {
                finite("l", l)?;
                finite("m", m)?;
                finite("r", r)?;
                if l >= r {
                    return Err(Error::validation("r", "triangle family requires l < r"));
                }
                if m < l || m > r {
                    return Err(Error::validation("m", "triangle family requires l <= m <= r"));
                }
                let (grid, values) = if m == l {
                    (vec![l, r], vec![1.0, 0.0])
                } else if m == r {
                    (vec![l, r], vec![0.0, 1.0])
                } else {
                    (vec![l, m, r], vec![0.0, 1.0, 0.0])
                };
                Backing::Density(GriddedDensity::new(grid, values)?)
            }
            Family::Semicircle { t } => {
                if !(t > 0.0) || !t.is_finite() {
                    return Err(Error::validation("t", "semicircle variance must be positive"));
                }
                let radius = 2.0 * t.sqrt();
                let n = SEMICIRCLE_GRID;
                // cosine spacing resolves the square-root edges
                let grid: Vec<f64> = (0..n)
                    .map(|i| -radius * (std::f64::consts::PI * i as f64 / (n - 1) as f64).cos())
                    .collect();
                let values = grid
                    .iter()
                    .map(|x| (4.0 * t - x * x).max(0.0).sqrt() / (2.0 * std::f64::consts::PI * t))
                    .collect();
                Backing::Density(GriddedDensity::new(grid, values)?)
            }
        };
        Ok(Self { family, backing })
    }

    pub fn family(&self) -> Family {
        self.family
    }
}

/// An initial distribution μ.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbabilityMeasure {
    Atomic(AtomicMeasure),
    Density(GriddedDensity),
    Named(NamedMeasure),
}

/// Borrowed view of the representation every computation runs on.
#[derive(Debug, Clone, Copy)]
pub enum Repr<'a> {
    Atoms(&'a AtomicMeasure),
    Density(&'a GriddedDensity),
}

impl From<AtomicMeasure> for ProbabilityMeasure {
    fn from(m: AtomicMeasure) -> Self {
        ProbabilityMeasure::Atomic(m)
    }
}

impl From<GriddedDensity> for ProbabilityMeasure {
    fn from(m: GriddedDensity) -> Self {
        ProbabilityMeasure::Density(m)
    }
}

impl From<NamedMeasure> for ProbabilityMeasure {
    fn from(m: NamedMeasure) -> Self {
        ProbabilityMeasure::Named(m)
    }
}

impl ProbabilityMeasure {
    pub fn named(family: Family) -> Result<Self> {
        NamedMeasure::new(family).map(Self::Named)
    }

    pub fn bernoulli(a: f64) -> Self {
        Self::named(Family::Bernoulli { a }).expect("finite Bernoulli parameter")
    }

    pub fn point_mass(a: f64) -> Self {
        Self::named(Family::PointMass { a }).expect("finite point mass")
    }

    pub fn uniform(l: f64, r: f64) -> Result<Self> {
        Self::named(Family::Uniform { l, r })
    }

    pub fn triangle(l: f64, m: f64, r: f64) -> Result<Self> {
        Self::named(Family::Triangle { l, m, r })
    }

    pub fn semicircle(t: f64) -> Result<Self> {
        Self::named(Family::Semicircle { t })
    }

    pub fn atomic(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        AtomicMeasure::new(atoms, weights).map(Self::Atomic)
    }

    pub fn repr(&self) -> Repr<'_> {
        match self {
            ProbabilityMeasure::Atomic(m) => Repr::Atoms(m),
            ProbabilityMeasure::Density(d) => Repr::Density(d),
            ProbabilityMeasure::Named(n) => match &n.backing {
                Backing::Atomic(m) => Repr::Atoms(m),
                Backing::Density(d) => Repr::Density(d),
            },
        }
    }

    fn family(&self) -> Option<Family> {
        match self {
            ProbabilityMeasure::Named(n) => Some(n.family),
            _ => None,
        }
    }

    /// Atoms as degenerate intervals, or the positive runs of a gridded density.
    pub fn support_pieces(&self) -> Vec<(f64, f64)> {
        match self.repr() {
            Repr::Atoms(m) => m.atoms().iter().map(|&a| (a, a)).collect(),
            Repr::Density(d) => d.support_pieces(),
        }
    }

    /// Smallest closed interval containing the support.
    pub fn hull(&self) -> (f64, f64) {
        let pieces = self.support_pieces();
        (pieces[0].0, pieces[pieces.len() - 1].1)
    }

    /// Total mass: the weight sum for atoms, the trapezoid integral for a grid
    /// (exact for the piecewise-linear interpolant).
    pub fn total_mass(&self) -> f64 {
        match self.repr() {
            Repr::Atoms(m) => m.weights().iter().sum(),
            Repr::Density(d) => trapezoid(d.grid(), d.values()),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self.family() {
            Some(Family::Bernoulli { a }) => 2.0 * a.abs(),
            Some(Family::PointMass { .. }) => 0.0,
            Some(Family::Uniform { l, r }) | Some(Family::Triangle { l, r, .. }) => r - l,
            Some(Family::Semicircle { t }) => 4.0 * t.sqrt(),
            None => {
                let (lo, hi) = self.hull();
                hi - lo
            }
        }
    }

    /// α = ∫ exp(ε x²) dμ(x).
    pub fn gaussian_tail_functional(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Domain(format!("eps must be positive, got {eps}")));
        }
        match self.family() {
            Some(Family::Bernoulli { a }) | Some(Family::PointMass { a }) => return Ok((eps * a * a).exp()),
            _ => {}
        }
        match self.repr() {
            Repr::Atoms(m) => Ok(m.iter().map(|(a, w)| w * (eps * a * a).exp()).sum()),
            Repr::Density(d) => {
                let width = d.grid()[d.grid().len() - 1] - d.grid()[0];
                let mut total = 0.0;
                for cell in d.cells().filter(Cell::is_positive) {
                    let tol = FUNCTIONAL_TOL * (cell.x1 - cell.x0) / width;
                    total += quadrature::integrate(|x| cell.value_at(x) * (eps * x * x).exp(), cell.x0, cell.x1, tol)?;
                }
                Ok(total)
            }
        }
    }

    /// ∫ |x|^p dμ(x).
    pub fn abs_moment(&self, p: f64) -> Result<f64> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::Domain(format!("moment order must be positive, got {p}")));
        }
        match self.family() {
            Some(Family::Bernoulli { a }) | Some(Family::PointMass { a }) => return Ok(a.abs().powf(p)),
            Some(Family::Uniform { l, r }) => {
                let antiderivative = |x: f64| x.signum() * x.abs().powf(p + 1.0) / (p + 1.0);
                return Ok((antiderivative(r) - antiderivative(l)) / (r - l));
            }
            _ => {}
        }
        match self.repr() {
            Repr::Atoms(m) => Ok(m.iter().map(|(a, w)| w * a.abs().powf(p)).sum()),
            Repr::Density(d) => Ok(d.cells().map(|c| cell_abs_moment(&c, p)).sum()),
        }
    }

    /// The image of μ under x ↦ x + c.
    pub fn shifted(&self, c: f64) -> Self {
        self.mapped(|x| x + c)
    }

    /// The image of μ under x ↦ c·x, for c > 0.
    pub fn dilated(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("dilation factor must be positive, got {c}")));
        }
        if let Some(family) = self.family() {
            let scaled = match family {
                Family::Bernoulli { a } => Family::Bernoulli { a: c * a },
                Family::PointMass { a } => Family::PointMass { a: c * a },
                Family::Uniform { l, r } => Family::Uniform { l: c * l, r: c * r },
                Family::Triangle { l, m, r } => Family::Triangle {
                    l: c * l,
                    m: c * m,
                    r: c * r,
                },
                Family::Semicircle { t } => Family::Semicircle { t: c * c * t },
            };
            return Self::named(scaled);
        }
        Ok(self.mapped(|x| c * x))
    }

    fn mapped<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        match self.repr() {
            Repr::Atoms(m) => ProbabilityMeasure::Atomic(AtomicMeasure {
                atoms: m.atoms().iter().map(|&a| f(a)).collect(),
                weights: m.weights().to_vec(),
            }),
            Repr::Density(d) => {
                let grid: Vec<f64> = d.grid().iter().map(|&x| f(x)).collect();
                let values = d.values().to_vec();
                ProbabilityMeasure::Density(
                    GriddedDensity::new(grid, values).expect("monotone map preserves a valid grid"),
                )
            }
        }
    }
}

/// ∫ over one cell of (p0 + s(x − x0))·|x|^p, split at the origin.
fn cell_abs_moment(cell: &Cell, p: f64) -> f64 {
    let slope = cell.slope();
    // density written as c0 + c1·x
    let c1 = slope;
    let c0 = cell.p0 - slope * cell.x0;
    // ∫_a^b (c0 + c1 x) x^p dx for 0 <= a <= b
    let positive_side = |a: f64, b: f64, c0: f64, c1: f64| {
        c0 * (b.powf(p + 1.0) - a.powf(p + 1.0)) / (p + 1.0) + c1 * (b.powf(p + 2.0) - a.powf(p + 2.0)) / (p + 2.0)
    };
    let mut total = 0.0;
    if cell.x1 > 0.0 {
        total += positive_side(cell.x0.max(0.0), cell.x1, c0, c1);
    }
    if cell.x0 < 0.0 {
        // substitute x = −y
        total += positive_side((-cell.x1).max(0.0), -cell.x0, c0, -c1);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(ProbabilityMeasure::bernoulli(1.0).diameter(), 2.0);
        assert_eq!(ProbabilityMeasure::point_mass(5.0).diameter(), 0.0);
        let m = ProbabilityMeasure::atomic(vec![0.0, 3.0, 7.0], vec![0.2, 0.3, 0.5]).unwrap();
        assert_eq!(m.diameter(), 7.0);
    }

    #[test]
    fn gaussian_tail_examples() {
        let e = ProbabilityMeasure::bernoulli(1.0).gaussian_tail_functional(1.0).unwrap();
        assert_close(e, std::f64::consts::E, 1e-15);
        assert_eq!(ProbabilityMeasure::point_mass(0.0).gaussian_tail_functional(3.7).unwrap(), 1.0);
        let u = ProbabilityMeasure::uniform(-1.0, 1.0).unwrap();
        // oracle: composite Simpson with 2·10⁵ panels of ½∫₋₁¹ e^{x²} dx
        let n = 200_000;
        let h = 2.0 / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let x = -1.0 + i as f64 * h;
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * (x * x).exp();
        }
        let oracle = 0.5 * s * h / 3.0;
        assert_close(oracle, 1.4626517459071817, 1e-12);
        assert_close(u.gaussian_tail_functional(1.0).unwrap(), oracle, 1e-10);
    }

    #[test]
    fn abs_moment_examples() {
        assert_close(ProbabilityMeasure::bernoulli(1.0).abs_moment(3.0).unwrap(), 1.0, 1e-15);
        assert_close(ProbabilityMeasure::point_mass(2.0).abs_moment(3.0).unwrap(), 8.0, 1e-14);
        assert_close(ProbabilityMeasure::uniform(0.0, 2.0).unwrap().abs_moment(3.0).unwrap(), 2.0, 1e-14);
        // the gridded path agrees with the closed form
        let d = GriddedDensity::new(vec![0.0, 2.0], vec![1.0, 1.0]).unwrap();
        assert_close(ProbabilityMeasure::Density(d).abs_moment(3.0).unwrap(), 2.0, 1e-14);
        let straddle = GriddedDensity::new(vec![-1.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert_close(ProbabilityMeasure::Density(straddle).abs_moment(2.0).unwrap(), 1.0 / 3.0, 1e-14);
    }

    #[test]
    fn triangle_abs_moment_matches_quadrature() {
        let tri = ProbabilityMeasure::triangle(-1.0, 0.3, 2.0).unwrap();
        let Repr::Density(d) = tri.repr() else { panic!() };
        let mut oracle = 0.0;
        for cell in d.cells() {
            oracle += quadrature::integrate(|x| cell.value_at(x) * x.abs().powf(2.5), cell.x0, cell.x1, 1e-13).unwrap();
        }
        assert_close(tri.abs_moment(2.5).unwrap(), oracle, 1e-11);
    }

    #[test]
    fn atoms_are_sorted_and_merged() {
        let m = AtomicMeasure::new(vec![3.0, 1.0, 3.0], vec![0.25, 0.5, 0.25]).unwrap();
        assert_eq!(m.atoms(), &[1.0, 3.0]);
        assert_eq!(m.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn weight_band_is_enforced() {
        assert!(AtomicMeasure::new(vec![0.0], vec![0.9]).is_err());
        let m = AtomicMeasure::new(vec![0.0, 1.0], vec![0.5, 0.5005]).unwrap();
        assert_close(m.weights().iter().sum::<f64>(), 1.0, 1e-15);
        let err = AtomicMeasure::new(vec![0.0, 1.0], vec![1.5, -0.5]).unwrap_err();
        assert!(err.to_string().contains("weights[1]"), "{err}");
    }

    #[test]
    fn gridded_density_is_renormalized_and_validated() {
        let d = GriddedDensity::new(vec![0.0, 1.0, 2.0], vec![0.0, 4.0, 0.0]).unwrap();
        assert_close(trapezoid(d.grid(), d.values()), 1.0, 1e-15);
        assert_close(d.value_at(0.5), 0.5, 1e-15);
        assert_eq!(d.value_at(-1.0), 0.0);
        let err = GriddedDensity::new(vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 1.0]).unwrap_err();
        assert!(err.to_string().contains("grid[2]"), "{err}");
        assert!(GriddedDensity::new(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
        assert!(GriddedDensity::new(vec![0.0, 1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn support_pieces_split_on_zero_runs() {
        let d = GriddedDensity::new(vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0], vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(d.support_pieces(), vec![(0.0, 2.0), (3.0, 5.0)]);
    }

    #[test]
    fn named_families_have_unit_mass() {
        for m in [
            ProbabilityMeasure::bernoulli(1.0),
            ProbabilityMeasure::point_mass(-2.0),
            ProbabilityMeasure::uniform(-1.0, 3.0).unwrap(),
            ProbabilityMeasure::triangle(-1.0, 0.0, 1.0).unwrap(),
            ProbabilityMeasure::triangle(0.0, 0.0, 1.0).unwrap(),
            ProbabilityMeasure::semicircle(2.0).unwrap(),
        ] {
            assert_close(m.total_mass(), 1.0, 1e-9);
        }
    }

    #[test]
    fn invalid_families_are_rejected() {
        assert!(ProbabilityMeasure::uniform(1.0, 1.0).is_err());
        assert!(ProbabilityMeasure::triangle(0.0, 2.0, 1.0).is_err());
        assert!(ProbabilityMeasure::semicircle(0.0).is_err());
    }

    #[test]
    fn dilation_scales_diameter() {
        let m = ProbabilityMeasure::atomic(vec![0.0, 1.0, 4.0], vec![0.3, 0.3, 0.4]).unwrap();
        assert_close(m.dilated(2.5).unwrap().diameter(), 10.0, 1e-14);
        assert_close(ProbabilityMeasure::bernoulli(1.0).dilated(2.0).unwrap().diameter(), 4.0, 0.0);
        assert!(m.dilated(-1.0).is_err());
    }
}
