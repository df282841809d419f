//! Rectangular grids, sampled complex fields and planar sample regions.
//!
//! All discrete calculus in the crate runs on [`ComplexGridField`]: an
//! `nx × ny` array of complex samples with a validity mask. Statistics and
//! norms only ever see masked-in points, and every derivative operation
//! propagates the mask conservatively (a stencil touching a masked point
//! produces a masked output point).

mod interp;
mod io;
mod wirtinger;

pub use interp::{interpolate, BicubicSampler, InterpOutcome};
pub use io::{read_csv, read_csv_path, write_csv, write_csv_path};
pub use wirtinger::{fd_x, fd_y, wirtinger_fd, wirtinger_spectral};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Rectangular sampling of a planar domain.
///
/// Non-periodic grids include both endpoints (`hx = span/(nx−1)`); periodic
/// grids exclude the right/top edge (`hx = span/nx`), which is the layout the
/// spectral operations require.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub periodic: bool,
}

/// Smallest grid the toolkit accepts along either axis.
pub const MIN_POINTS: usize = 8;

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        Self::build(x_min, x_max, y_min, y_max, nx, ny, false)
    }

    pub fn periodic(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        Self::build(x_min, x_max, y_min, y_max, nx, ny, true)
    }

    /// Square non-periodic grid over [lo, hi]².
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::build(lo, hi, lo, hi, n, n, false)
    }

    fn build(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize, periodic: bool) -> Result<Self> {
        if !(x_max > x_min) || !(y_max > y_min) {
            return Err(Error::InvalidGrid(format!(
                "bounds must be increasing: x [{x_min}, {x_max}], y [{y_min}, {y_max}]"
            )));
        }
        if nx < MIN_POINTS || ny < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points per axis, got {nx}×{ny}"
            )));
        }
        let spec = GridSpec { x_min, x_max, y_min, y_max, nx, ny, periodic };
        if !(spec.hx() > 0.0) || !(spec.hy() > 0.0) {
            return Err(Error::InvalidGrid("degenerate spacing".into()));
        }
        Ok(spec)
    }

    pub fn hx(&self) -> f64 {
        let d = if self.periodic { self.nx } else { self.nx - 1 };
        (self.x_max - self.x_min) / d as f64
    }

    pub fn hy(&self) -> f64 {
        let d = if self.periodic { self.ny } else { self.ny - 1 };
        (self.y_max - self.y_min) / d as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.hy()
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.x(i), self.y(j))
    }

    /// Row-major by y then x.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when (x, y) lies inside the sampled hull (closed, with a rounding margin).
    pub fn contains(&self, z: Complex64) -> bool {
        let ex = 1e-12 * (self.x_max - self.x_min).abs();
        let ey = 1e-12 * (self.y_max - self.y_min).abs();
        // For periodic grids the last row/column of the cell is still covered.
        let x_hi = if self.periodic { self.x_max } else { self.x_max + ex };
        let y_hi = if self.periodic { self.y_max } else { self.y_max + ey };
        z.re >= self.x_min - ex && z.re <= x_hi && z.im >= self.y_min - ey && z.im <= y_hi
    }
}

/// Planar sample region used to mask grids.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
    Disk { radius: f64 },
    Annulus { inner: f64, outer: f64 },
}

impl Region {
    pub fn square(lo: f64, hi: f64) -> Region {
        Region::Rect { x0: lo, x1: hi, y0: lo, y1: hi }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Region::Rect { x0, x1, y0, y1 } => z.re >= x0 && z.re <= x1 && z.im >= y0 && z.im <= y1,
            Region::Disk { radius } => z.norm() <= radius,
            Region::Annulus { inner, outer } => {
                let r = z.norm();
                r >= inner && r <= outer
            }
        }
    }

    /// Non-periodic grid over the region's bounding box, n points per axis.
    pub fn bounding_spec(&self, n: usize) -> Result<GridSpec> {
        match *self {
            Region::Rect { x0, x1, y0, y1 } => GridSpec::new(x0, x1, y0, y1, n, n),
            Region::Disk { radius } => GridSpec::square(-radius, radius, n),
            Region::Annulus { outer, .. } => GridSpec::square(-outer, outer, n),
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Region::Rect { x0, x1, y0, y1 } => format!("rect [{x0}, {x1}]×[{y0}, {y1}]"),
            Region::Disk { radius } => format!("disk |z| <= {radius}"),
            Region::Annulus { inner, outer } => format!("annulus {inner} <= |z| <= {outer}"),
        }
    }
}

/// Sampled complex-valued function on a [`GridSpec`] with a validity mask.
#[derive(Clone, Debug)]
pub struct ComplexGridField {
    pub spec: GridSpec,
    values: Vec<Complex64>,
    mask: Vec<bool>,
}

impl ComplexGridField {
    pub fn from_parts(spec: GridSpec, values: Vec<Complex64>, mask: Vec<bool>) -> Result<Self> {
        if values.len() != spec.len() || mask.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "field storage must have {} entries, got {} values / {} mask",
                spec.len(),
                values.len(),
                mask.len()
            )));
        }
        Ok(ComplexGridField { spec, values, mask })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        ComplexGridField {
            spec,
            values: vec![Complex64::new(0.0, 0.0); spec.len()],
            mask: vec![true; spec.len()],
        }
    }

    /// Sample `f` at every node. Non-finite samples are masked out.
    pub fn sample<F: Fn(Complex64) -> Complex64>(spec: GridSpec, f: F) -> Self {
        Self::sample_masked(spec, f, |_| true)
    }

    /// Sample `f` on the nodes that satisfy `keep`; everything else is masked.
    pub fn sample_masked<F, M>(spec: GridSpec, f: F, keep: M) -> Self
    where
        F: Fn(Complex64) -> Complex64,
        M: Fn(Complex64) -> bool,
    {
        let mut values = vec![Complex64::new(0.0, 0.0); spec.len()];
        let mut mask = vec![false; spec.len()];
        for j in 0..spec.ny {
            for i in 0..spec.nx {
                let z = spec.point(i, j);
                if keep(z) {
                    let v = f(z);
                    let ok = v.re.is_finite() && v.im.is_finite();
                    let k = spec.index(i, j);
                    values[k] = if ok { v } else { Complex64::new(0.0, 0.0) };
                    mask[k] = ok;
                }
            }
        }
        ComplexGridField { spec, values, mask }
    }

    pub fn sample_region<F: Fn(Complex64) -> Complex64>(spec: GridSpec, region: &Region, f: F) -> Self {
        Self::sample_masked(spec, f, |z| region.contains(z))
    }

    /// Sample a real-valued function (imaginary part identically zero).
    pub fn sample_real<F: Fn(Complex64) -> f64>(spec: GridSpec, f: F) -> Self {
        Self::sample(spec, |z| Complex64::new(f(z), 0.0))
    }

    pub fn sample_real_region<F: Fn(Complex64) -> f64>(spec: GridSpec, region: &Region, f: F) -> Self {
        Self::sample_masked(spec, |z| Complex64::new(f(z), 0.0), |z| region.contains(z))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.spec.index(i, j)]
    }

    #[inline]
    pub fn is_valid(&self, i: usize, j: usize) -> bool {
        self.mask[self.spec.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64, valid: bool) {
        let k = self.spec.index(i, j);
        self.values[k] = v;
        self.mask[k] = valid;
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn all_valid(&self) -> bool {
        self.mask.iter().all(|&m| m)
    }

    /// Pointwise map sharing this field's mask.
    pub fn map<F: Fn(Complex64, Complex64) -> Complex64>(&self, f: F) -> Self {
        let mut out = self.clone();
        for j in 0..self.spec.ny {
            for i in 0..self.spec.nx {
                let k = self.spec.index(i, j);
                if self.mask[k] {
                    let v = f(self.spec.point(i, j), self.values[k]);
                    if v.re.is_finite() && v.im.is_finite() {
                        out.values[k] = v;
                    } else {
                        out.values[k] = Complex64::new(0.0, 0.0);
                        out.mask[k] = false;
                    }
                }
            }
        }
        out
    }

    /// Restrict the mask to `region`.
    pub fn restrict(&self, region: &Region) -> Self {
        let mut out = self.clone();
        for j in 0..self.spec.ny {
            for i in 0..self.spec.nx {
                if !region.contains(self.spec.point(i, j)) {
                    let k = self.spec.index(i, j);
                    out.mask[k] = false;
                }
            }
        }
        out
    }

    /// Iterate (i, j, z, value) over masked-in points.
    pub fn for_each_valid<F: FnMut(usize, usize, Complex64, Complex64)>(&self, mut f: F) {
        for j in 0..self.spec.ny {
            for i in 0..self.spec.nx {
                let k = self.spec.index(i, j);
                if self.mask[k] {
                    f(i, j, self.spec.point(i, j), self.values[k]);
                }
            }
        }
    }

    /// Sup of |v| over masked-in points (0 when empty).
    pub fn sup_abs(&self) -> f64 {
        let mut s = 0.0f64;
        for (v, &m) in self.values.iter().zip(&self.mask) {
            if m {
                s = s.max(v.norm());
            }
        }
        s
    }

    /// RMS of |v| over masked-in points (0 when empty).
    pub fn rms(&self) -> f64 {
        let mut s = 0.0f64;
        let mut n = 0usize;
        for (v, &m) in self.values.iter().zip(&self.mask) {
            if m {
                s += v.norm_sqr();
                n += 1;
            }
        }
        if n == 0 {
            0.0
        } else {
            (s / n as f64).sqrt()
        }
    }

    pub fn sup_imag_abs(&self) -> f64 {
        let mut s = 0.0f64;
        for (v, &m) in self.values.iter().zip(&self.mask) {
            if m {
                s = s.max(v.im.abs());
            }
        }
        s
    }
}
