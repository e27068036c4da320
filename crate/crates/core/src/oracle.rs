//! Grid-based numerical ground truth.
//!
//! Everything in this module is deliberately brute force: sample a function
//! on a rectangular grid, then infimize, dualize, or convolve by scanning the
//! samples. The closed forms elsewhere in the crate are validated against
//! these scans, and the quadrature convolution also covers densities (such as
//! the Laplacian) that the quadratic fragment cannot represent at all.
//!
//! Indicator constraints have measure-zero support, which a grid never hits.
//! They are realized by [`SampledFunction::sample_pcqf`]: a grid point within
//! half a grid step of the feasible set is projected onto it and the function
//! is evaluated at the projection, so the sample is a true function value at a
//! nearby feasible point rather than a biased off-set reading.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::numeric::Vector;
use crate::pcqf::Pcqf;

/// One axis of a sampling grid: `count` evenly spaced points on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::ImproperInput("grid bounds must be finite".into()));
        }
        if lo >= hi {
            return Err(Error::ImproperInput(format!(
                "grid axis needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if count < 2 {
            return Err(Error::ImproperInput(format!(
                "grid axis needs at least 2 points, got {count}"
            )));
        }
        Ok(Axis { lo, hi, count })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }

    fn coordinate(&self, index: usize) -> f64 {
        self.lo + index as f64 * self.step()
    }

    /// Index of the grid point nearest to `v`, or `None` when `v` lies more
    /// than half a step outside the axis range.
    fn nearest(&self, v: f64) -> Option<usize> {
        let t = (v - self.lo) / self.step();
        let r = t.round();
        if r < -0.25 || r > (self.count - 1) as f64 + 0.25 {
            return None;
        }
        Some(r.max(0.0) as usize)
    }
}

/// Rectangular sampling grid in row-major order: the first axis varies
/// slowest, the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    axes: Vec<Axis>,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>) -> Self {
        GridSpec { axes }
    }

    /// `dim` copies of the same axis.
    pub fn uniform(dim: usize, lo: f64, hi: f64, count: usize) -> Result<Self> {
        let axis = Axis::new(lo, hi, count)?;
        Ok(GridSpec { axes: vec![axis; dim] })
    }

    /// One-dimensional grid.
    pub fn line(lo: f64, hi: f64, count: usize) -> Result<Self> {
        GridSpec::uniform(1, lo, hi, count)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axis(&self, i: usize) -> Axis {
        self.axes[i]
    }

    /// Total number of grid points.
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_step(&self) -> f64 {
        self.axes.iter().map(Axis::step).fold(0.0, f64::max)
    }

    /// Grid of the first `m` axes.
    pub fn prefix(&self, m: usize) -> GridSpec {
        assert!(m <= self.dim());
        GridSpec { axes: self.axes[..m].to_vec() }
    }

    /// Decodes a flat row-major index into per-axis indices.
    pub fn indices(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim()];
        for (i, axis) in self.axes.iter().enumerate().rev() {
            out[i] = flat % axis.count;
            flat /= axis.count;
        }
        out
    }

    /// The coordinates of the grid point with flat index `flat`.
    pub fn point(&self, flat: usize) -> Vector {
        let idx = self.indices(flat);
        Vector::new(
            idx.iter()
                .zip(&self.axes)
                .map(|(&i, a)| a.coordinate(i))
                .collect(),
        )
    }

    /// Flat index of the grid point nearest to `x`, or `None` when `x` falls
    /// outside the grid by more than a quarter step on some axis.
    pub fn nearest(&self, x: &Vector) -> Option<usize> {
        assert_eq!(x.dim(), self.dim());
        let mut flat = 0;
        for (i, axis) in self.axes.iter().enumerate() {
            flat = flat * axis.count + axis.nearest(x.get(i))?;
        }
        Some(flat)
    }

    /// Whether the point with this flat index touches the grid boundary.
    pub fn on_boundary(&self, flat: usize) -> bool {
        self.indices(flat)
            .iter()
            .zip(&self.axes)
            .any(|(&i, a)| i == 0 || i == a.count - 1)
    }
}

/// A transform result together with a reliability flag: when
/// `boundary_dominated` is set, some extremum was attained on the edge of the
/// sampling window and the true value likely lies outside it.
#[derive(Debug, Clone)]
pub struct GridTransform {
    pub result: SampledFunction,
    pub boundary_dominated: bool,
}

/// A function sampled on a rectangular grid, stored in row-major order.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: GridSpec,
    values: Vec<ExtReal>,
}

impl SampledFunction {
    pub fn from_values(grid: GridSpec, values: Vec<ExtReal>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: values.len() });
        }
        Ok(SampledFunction { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(&Vector) -> ExtReal) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        SampledFunction { grid, values }
    }

    /// Samples a quadratic function whose domain may be a strict affine
    /// subspace. Grid points within half a grid step of the domain are
    /// projected onto it and evaluated there; all others read `+inf`.
    pub fn sample_pcqf(grid: GridSpec, f: &Pcqf) -> Result<Self> {
        if f.ambient_dim() != grid.dim() {
            return Err(Error::DimensionMismatch { expected: grid.dim(), got: f.ambient_dim() });
        }
        let band = 0.5 * grid.max_step();
        let domain = f.domain();
        let values = (0..grid.len())
            .map(|i| {
                let x = grid.point(i);
                if domain.is_empty() {
                    return Ok(ExtReal::PosInf);
                }
                let proj = domain.point_at(&domain.internal_coords(&x));
                if (&x - &proj).norm() > band {
                    return Ok(ExtReal::PosInf);
                }
                f.evaluate(&proj)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SampledFunction { grid, values })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn value(&self, flat: usize) -> ExtReal {
        self.values[flat]
    }

    /// Minimum over all grid points.
    pub fn min_value(&self) -> ExtReal {
        self.values.iter().fold(ExtReal::PosInf, |acc, &v| acc.min(v))
    }

    /// Maximum over all grid points.
    pub fn max_value(&self) -> ExtReal {
        self.values.iter().fold(ExtReal::NegInf, |acc, &v| acc.max(v))
    }

    /// Pointwise minimum over the trailing axes, keeping the first `keep`.
    pub fn grid_partial_infimum(&self, keep: usize) -> Result<SampledFunction> {
        if keep > self.grid.dim() {
            return Err(Error::DimensionMismatch { expected: self.grid.dim(), got: keep });
        }
        let kept = self.grid.prefix(keep);
        let block = self.grid.len() / kept.len();
        let values = (0..kept.len())
            .map(|i| {
                self.values[i * block..(i + 1) * block]
                    .iter()
                    .fold(ExtReal::PosInf, |acc, &v| acc.min(v))
            })
            .collect();
        Ok(SampledFunction { grid: kept, values })
    }

    /// Numerical Legendre transform: for each dual grid point `s`, the
    /// supremum of `⟨s, x⟩ - f(x)` over the sample grid.
    pub fn numeric_legendre(&self, dual: &GridSpec) -> Result<GridTransform> {
        if dual.dim() != self.grid.dim() {
            return Err(Error::DimensionMismatch { expected: self.grid.dim(), got: dual.dim() });
        }
        let points: Vec<Vector> = (0..self.grid.len()).map(|i| self.grid.point(i)).collect();
        let mut boundary_dominated = false;
        let values = (0..dual.len())
            .map(|si| {
                let s = dual.point(si);
                let mut best = ExtReal::NegInf;
                let mut best_at = None;
                for (xi, x) in points.iter().enumerate() {
                    let term = match self.values[xi] {
                        ExtReal::PosInf => continue,
                        ExtReal::NegInf => ExtReal::PosInf,
                        ExtReal::Finite(fv) => ExtReal::Finite(s.dot(x) - fv),
                    };
                    if term > best {
                        best = term;
                        best_at = Some(xi);
                    }
                }
                if let Some(xi) = best_at {
                    if best.is_finite() && self.grid.on_boundary(xi) {
                        boundary_dominated = true;
                    }
                }
                best
            })
            .collect();
        Ok(GridTransform {
            result: SampledFunction { grid: dual.clone(), values },
            boundary_dominated,
        })
    }

    /// Infimal convolution by exhaustive scan: at each grid point `x`, the
    /// minimum over grid points `y` of `f(x - y) + g(y)`, with `f` read at
    /// the grid point nearest `x - y` (and `+inf` outside the grid).
    pub fn numeric_inf_convolution(&self, g: &SampledFunction) -> Result<SampledFunction> {
        if self.grid != g.grid {
            return Err(Error::ImproperInput(
                "infimal convolution needs a common grid".into(),
            ));
        }
        let n = self.grid.len();
        let points: Vec<Vector> = (0..n).map(|i| self.grid.point(i)).collect();
        let values = (0..n)
            .map(|zi| {
                let z = &points[zi];
                let mut best = ExtReal::PosInf;
                for (yi, y) in points.iter().enumerate() {
                    let gy = g.values[yi];
                    if gy == ExtReal::PosInf {
                        continue;
                    }
                    let Some(fi) = self.grid.nearest(&(z - y)) else { continue };
                    let total = self.values[fi].add(gy);
                    best = best.min(total);
                    if best == ExtReal::NegInf {
                        break;
                    }
                }
                best
            })
            .collect();
        Ok(SampledFunction { grid: self.grid.clone(), values })
    }

    /// Log of the trapezoid-rule convolution of `exp(self)` and `exp(g)` on a
    /// shared one-dimensional grid, computed with log-sum-exp for stability.
    /// `-inf` samples carry zero mass; `+inf` samples are rejected.
    pub fn quadrature_log_convolution(&self, g: &SampledFunction) -> Result<GridTransform> {
        if self.grid != g.grid {
            return Err(Error::ImproperInput("log convolution needs a common grid".into()));
        }
        if self.grid.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.grid.dim() });
        }
        if self.values.iter().chain(&g.values).any(|&v| v == ExtReal::PosInf) {
            return Err(Error::ImproperInput(
                "log convolution needs finite or -inf samples".into(),
            ));
        }
        let axis = self.grid.axis(0);
        let n = axis.count;
        let h = axis.step();
        let mut boundary_dominated = false;
        let values = (0..n)
            .map(|zi| {
                let z = axis.coordinate(zi);
                let mut terms = Vec::with_capacity(n);
                let mut best = f64::NEG_INFINITY;
                let mut best_at = 0usize;
                for xi in 0..n {
                    let Some(lf) = self.values[xi].finite() else { continue };
                    let Some(gi) = axis.nearest(z - axis.coordinate(xi)) else { continue };
                    let Some(lg) = g.values[gi].finite() else { continue };
                    // trapezoid weights: h at interior samples, h/2 at the ends
                    let w = if xi == 0 || xi == n - 1 { 0.5 * h } else { h };
                    let t = lf + lg + w.ln();
                    if t > best {
                        best = t;
                        best_at = xi;
                    }
                    terms.push(t);
                }
                if terms.is_empty() {
                    return ExtReal::NegInf;
                }
                if best_at == 0 || best_at == n - 1 {
                    boundary_dominated = true;
                }
                let sum: f64 = terms.iter().map(|t| (t - best).exp()).sum();
                ExtReal::Finite(best + sum.ln())
            })
            .collect();
        Ok(GridTransform {
            result: SampledFunction { grid: self.grid.clone(), values },
            boundary_dominated,
        })
    }

    /// Shifts so the largest finite value becomes 0. Comparisons that only
    /// hold up to an additive constant are made on normalized samples.
    pub fn normalized_to_max(&self) -> SampledFunction {
        let m = match self.max_value() {
            ExtReal::Finite(m) => m,
            _ => return self.clone(),
        };
        let values = self
            .values
            .iter()
            .map(|&v| match v {
                ExtReal::Finite(x) => ExtReal::Finite(x - m),
                inf => inf,
            })
            .collect();
        SampledFunction { grid: self.grid.clone(), values }
    }

    /// Largest pointwise gap against `other`: `|a - b|` where both are
    /// finite, `+inf` where exactly one is, `0` where the infinities agree.
    pub fn sup_distance(&self, other: &SampledFunction) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::ImproperInput("sup distance needs a common grid".into()));
        }
        let mut worst = 0.0f64;
        for (&a, &b) in self.values.iter().zip(&other.values) {
            match (a, b) {
                (ExtReal::Finite(x), ExtReal::Finite(y)) => worst = worst.max((x - y).abs()),
                _ if a == b => {}
                _ => return Ok(f64::INFINITY),
            }
        }
        Ok(worst)
    }

    /// One CSV row per grid point: coordinates then value, with a header row
    /// and `inf`/`-inf` literals for infinite samples.
    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        if self.grid.dim() == 1 {
            writeln!(out, "x,value")?;
        } else {
            let header: Vec<String> = (1..=self.grid.dim()).map(|i| format!("x{i}")).collect();
            writeln!(out, "{},value", header.join(","))?;
        }
        for i in 0..self.grid.len() {
            let p = self.grid.point(i);
            for c in 0..p.dim() {
                write!(out, "{},", p.get(c))?;
            }
            writeln!(out, "{}", self.values[i])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Matrix;

    fn vec(entries: &[f64]) -> Vector {
        Vector::new(entries.to_vec())
    }

    fn finite(v: ExtReal) -> f64 {
        v.finite().expect("expected a finite sample")
    }

    #[test]
    fn grid_layout_is_row_major() {
        let grid = GridSpec::new(vec![
            Axis::new(0.0, 1.0, 2).unwrap(),
            Axis::new(0.0, 2.0, 3).unwrap(),
        ]);
        assert_eq!(grid.len(), 6);
        // last axis fastest
        assert_eq!(grid.point(0).as_slice(), &[0.0, 0.0]);
        assert_eq!(grid.point(1).as_slice(), &[0.0, 1.0]);
        assert_eq!(grid.point(2).as_slice(), &[0.0, 2.0]);
        assert_eq!(grid.point(3).as_slice(), &[1.0, 0.0]);
        assert_eq!(grid.point(5).as_slice(), &[1.0, 2.0]);
        assert_eq!(grid.nearest(&vec(&[0.9, 1.2])), Some(4));
        assert_eq!(grid.nearest(&vec(&[3.0, 0.0])), None);
        assert!(grid.on_boundary(0));
        assert!(grid.on_boundary(4)); // first axis index 1 = last row
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(0.0, 1.0, 1).is_err());
        assert!(Axis::new(1.0, 1.0, 5).is_err());
        assert!(Axis::new(f64::NAN, 1.0, 5).is_err());
        assert!(Axis::new(-1.0, 1.0, 5).is_ok());
    }

    #[test]
    fn partial_infimum_of_coupled_square_is_flat() {
        let grid = GridSpec::uniform(2, -10.0, 10.0, 201).unwrap();
        let f = SampledFunction::from_fn(grid, |p| {
            ExtReal::Finite(0.5 * (p.get(0) - p.get(1)).powi(2))
        });
        let reduced = f.grid_partial_infimum(1).unwrap();
        for i in 0..reduced.grid().len() {
            assert!(finite(reduced.value(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_infimum_of_separable_square() {
        let grid = GridSpec::uniform(2, -10.0, 10.0, 201).unwrap();
        let f = SampledFunction::from_fn(grid, |p| {
            ExtReal::Finite(0.5 * p.get(0).powi(2) + 0.5 * p.get(1).powi(2))
        });
        let reduced = f.grid_partial_infimum(1).unwrap();
        for i in 0..reduced.grid().len() {
            let x = reduced.grid().point(i).get(0);
            assert!((finite(reduced.value(i)) - 0.5 * x * x).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_infimum_through_a_sampled_constraint() {
        // f(x, y) = [y = 2x] + y²/2, eliminating y, leaves 2x²
        let q = Matrix::new(2, 2, vec![0.0, 0.0, 0.0, 1.0]);
        let constraint = Matrix::new(1, 2, vec![2.0, -1.0]);
        let f = Pcqf::from_ambient(&q, &Vector::zeros(2), 0.0, &constraint, &Vector::zeros(1))
            .unwrap();
        let grid = GridSpec::uniform(2, -10.0, 10.0, 401).unwrap();
        let sampled = SampledFunction::sample_pcqf(grid, &f).unwrap();
        let reduced = sampled.grid_partial_infimum(1).unwrap();
        // Samples sit exactly on the line, but neighbors inside the band
        // project to points slid along it by 2e/5 for a vertical offset e,
        // here at most one grid step: the scan sees x' in {x, x ± 0.02}. The
        // grid infimum is therefore bracketed by the value at x and the value
        // at the slid point nearer the minimum.
        for i in 0..reduced.grid().len() {
            let x = reduced.grid().point(i).get(0);
            if x.abs() > 4.0 {
                continue; // y = 2x leaves the sampling window
            }
            let got = finite(reduced.value(i));
            let slid = (x.abs() - 0.02).max(0.0);
            assert!(got <= 2.0 * x * x + 1e-9, "x = {x}, got {got}");
            assert!(got >= 2.0 * slid * slid - 1e-9, "x = {x}, got {got}");
        }
    }

    #[test]
    fn legendre_of_absolute_value_is_an_interval_indicator() {
        let grid = GridSpec::line(-25.0, 25.0, 2001).unwrap();
        let f = SampledFunction::from_fn(grid, |p| ExtReal::Finite(p.get(0).abs()));
        let dual = GridSpec::line(-5.0, 5.0, 2001).unwrap();
        let t = f.numeric_legendre(&dual).unwrap();
        for i in 0..dual.len() {
            let s = t.result.grid().point(i).get(0);
            let v = finite(t.result.value(i));
            if s.abs() <= 0.99 {
                assert!(v.abs() < 1e-6, "s = {s}, v = {v}");
            }
            if (s.abs() - 1.5).abs() < 1e-9 {
                assert!(v > 10.0, "s = {s}, v = {v}");
            }
        }
    }

    #[test]
    fn legendre_fixed_point_and_quarter_rule() {
        let grid = GridSpec::line(-25.0, 25.0, 4001).unwrap();
        let dual = GridSpec::line(-3.0, 3.0, 61).unwrap();
        let half = SampledFunction::from_fn(grid.clone(), |p| {
            ExtReal::Finite(0.5 * p.get(0).powi(2))
        });
        let t = half.numeric_legendre(&dual).unwrap();
        assert!(!t.boundary_dominated);
        for i in 0..dual.len() {
            let s = t.result.grid().point(i).get(0);
            assert!((finite(t.result.value(i)) - 0.5 * s * s).abs() < 1e-4);
        }
        let square = SampledFunction::from_fn(grid, |p| ExtReal::Finite(p.get(0).powi(2)));
        let t2 = square.numeric_legendre(&dual).unwrap();
        for i in 0..dual.len() {
            let s = t2.result.grid().point(i).get(0);
            assert!((finite(t2.result.value(i)) - 0.25 * s * s).abs() < 1e-4);
        }
    }

    #[test]
    fn legendre_flags_boundary_domination() {
        // a linear function has no interior argmax for s away from its slope
        let grid = GridSpec::line(-10.0, 10.0, 101).unwrap();
        let f = SampledFunction::from_fn(grid, |p| ExtReal::Finite(p.get(0)));
        let dual = GridSpec::line(1.5, 2.0, 11).unwrap();
        let t = f.numeric_legendre(&dual).unwrap();
        assert!(t.boundary_dominated);
    }

    #[test]
    fn inf_convolution_halves_curvature() {
        let grid = GridSpec::line(-10.0, 10.0, 401).unwrap();
        let f = SampledFunction::from_fn(grid, |p| ExtReal::Finite(0.5 * p.get(0).powi(2)));
        let conv = f.numeric_inf_convolution(&f).unwrap();
        for i in 0..conv.grid().len() {
            let x = conv.grid().point(i).get(0);
            if x.abs() > 8.0 {
                continue; // the optimal split x/2 must stay inside the grid
            }
            assert!((finite(conv.value(i)) - 0.25 * x * x).abs() < 2.5e-3);
        }
    }

    #[test]
    fn absolute_value_is_idempotent_under_inf_convolution() {
        let grid = GridSpec::line(-10.0, 10.0, 401).unwrap();
        let h = SampledFunction::from_fn(grid, |p| ExtReal::Finite(p.get(0).abs()));
        let conv = h.numeric_inf_convolution(&h).unwrap();
        assert!(conv.sup_distance(&h).unwrap() < 1e-9);
    }

    #[test]
    fn point_indicator_is_a_convolution_unit() {
        let grid = GridSpec::line(-10.0, 10.0, 401).unwrap();
        let f = SampledFunction::from_fn(grid.clone(), |p| {
            ExtReal::Finite((p.get(0) - 1.0).powi(2) + 0.3)
        });
        let delta = SampledFunction::from_fn(grid, |p| {
            if p.get(0).abs() < 1e-12 {
                ExtReal::Finite(0.0)
            } else {
                ExtReal::PosInf
            }
        });
        let conv = f.numeric_inf_convolution(&delta).unwrap();
        assert!(conv.sup_distance(&f).unwrap() < 1e-12);
    }

    #[test]
    fn gaussian_log_convolution_matches_sup_convolution() {
        // for Gaussians the log of the density convolution and the
        // sup-convolution of log densities agree up to an additive constant
        let grid = GridSpec::line(-10.0, 10.0, 2001).unwrap();
        let logpdf = SampledFunction::from_fn(grid.clone(), |p| {
            ExtReal::Finite(-0.5 * p.get(0).powi(2) - 0.5 * (2.0 * std::f64::consts::PI).ln())
        });
        let quad = logpdf.quadrature_log_convolution(&logpdf).unwrap();
        assert!(!quad.boundary_dominated);

        let neg = SampledFunction::from_fn(grid, |p| ExtReal::Finite(0.5 * p.get(0).powi(2)));
        let sup = neg.numeric_inf_convolution(&neg).unwrap();
        let sup_conv = SampledFunction::from_values(
            sup.grid().clone(),
            sup.values().iter().map(|&v| v.neg()).collect(),
        )
        .unwrap();

        let a = quad.result.normalized_to_max();
        let b = sup_conv.normalized_to_max();
        // compare where the sum density retains noticeable mass
        for i in 0..a.grid().len() {
            let z = a.grid().point(i).get(0);
            if z.abs() > 8.0 {
                continue;
            }
            let gap = (finite(a.value(i)) - finite(b.value(i))).abs();
            assert!(gap < 1e-3, "z = {z}, gap = {gap}");
        }
    }

    #[test]
    fn laplacian_log_convolution_is_not_a_sup_convolution() {
        let grid = GridSpec::line(-10.0, 10.0, 2001).unwrap();
        let logpdf = SampledFunction::from_fn(grid.clone(), |p| {
            ExtReal::Finite(-p.get(0).abs() - 2.0f64.ln())
        });
        let quad = logpdf.quadrature_log_convolution(&logpdf).unwrap();

        let neg = SampledFunction::from_fn(grid, |p| ExtReal::Finite(p.get(0).abs()));
        let sup = neg.numeric_inf_convolution(&neg).unwrap();
        let sup_conv = SampledFunction::from_values(
            sup.grid().clone(),
            sup.values().iter().map(|&v| v.neg()).collect(),
        )
        .unwrap();

        let a = quad.result.normalized_to_max();
        let b = sup_conv.normalized_to_max();
        let mut residual = 0.0f64;
        for i in 0..a.grid().len() {
            residual = residual.max((finite(a.value(i)) - finite(b.value(i))).abs());
        }
        // log(1 + |z|) at z = 10 is about 2.4: far beyond quadrature noise
        assert!(residual > 0.05, "residual = {residual}");
    }

    #[test]
    fn narrow_gaussian_acts_as_an_approximate_unit() {
        let grid = GridSpec::line(-10.0, 10.0, 2001).unwrap();
        let f = SampledFunction::from_fn(grid.clone(), |p| {
            ExtReal::Finite(-0.125 * (p.get(0) - 1.0).powi(2))
        });
        let sigma = 0.02f64;
        let spike = SampledFunction::from_fn(grid, |p| {
            ExtReal::Finite(-0.5 * (p.get(0) / sigma).powi(2))
        });
        let quad = f.quadrature_log_convolution(&spike).unwrap();
        let a = quad.result.normalized_to_max();
        let b = f.normalized_to_max();
        for i in 0..a.grid().len() {
            let z = a.grid().point(i).get(0);
            if z.abs() > 6.0 {
                continue;
            }
            // the spike has variance sigma², broadening f only at that order
            assert!((finite(a.value(i)) - finite(b.value(i))).abs() < 2e-3);
        }
    }

    #[test]
    fn csv_rows_carry_coordinates_then_value() {
        let grid = GridSpec::line(-1.0, 1.0, 3).unwrap();
        let f = SampledFunction::from_values(
            grid,
            vec![ExtReal::PosInf, ExtReal::Finite(0.5), ExtReal::NegInf],
        )
        .unwrap();
        let mut out = Vec::new();
        f.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "x,value\n-1,inf\n0,0.5\n1,-inf\n");

        let grid2 = GridSpec::uniform(2, 0.0, 1.0, 2).unwrap();
        let g = SampledFunction::from_fn(grid2, |p| ExtReal::Finite(p.get(0) + p.get(1)));
        let mut out2 = Vec::new();
        g.write_csv(&mut out2).unwrap();
        let text2 = String::from_utf8(out2).unwrap();
        assert!(text2.starts_with("x1,x2,value\n0,0,0\n0,1,1\n"));
    }

    #[test]
    fn sampling_respects_infeasible_domains() {
        let f = Pcqf::infeasible(1);
        let grid = GridSpec::line(-1.0, 1.0, 5).unwrap();
        let s = SampledFunction::sample_pcqf(grid, &f).unwrap();
        assert!(s.values().iter().all(|&v| v == ExtReal::PosInf));
        assert_eq!(s.min_value(), ExtReal::PosInf);
    }
}
