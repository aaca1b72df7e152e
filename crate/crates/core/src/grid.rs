//! Discretized position/momentum Hilbert spaces on periodic grids.
//!
//! Units are ħ = c = 1 throughout. A [`GridSpace`] fixes the sampling of one
//! or two spatial axes; a [`StateVector`] is a complex amplitude array over
//! that grid together with a representation tag. The forward transform is the
//! Riemann-sum discretization of `ψ̃(k) = ∫ ψ(x) e^{-ikx} dx`, so discrete
//! sums weighted by Δx (position) or Δk/2π (momentum) approximate continuum
//! integrals digit-for-digit, and the transform is exactly unitary between
//! those weighted norms.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;

/// Representation tag for a state's amplitude array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rep {
    Position,
    Momentum,
}

/// Fraction of each axis (outermost bins) scanned by the tail-mass checks.
pub const TAIL_BAND: f64 = 0.05;

/// Largest tolerated probability mass in the tail band of an admissible state.
///
/// A Gaussian with 5σ clearance carries ~8e-13 beyond the band, so this
/// threshold separates admissible packets from boundary-contaminated ones.
pub const ADMISSIBLE_TAIL: f64 = 1e-10;

/// Discretized 1D or 2D configuration space with periodic boundaries.
///
/// Position samples per axis are `x_i = -L/2 + i Δx`; momentum samples follow
/// FFT bin order mapped to signed values in `[-πN/L, πN/L)`. The exact
/// identity `Δx · Δk · N = 2π` holds per axis by construction.
#[derive(Debug, PartialEq)]
pub struct GridSpace {
    dims: usize,
    n: usize,
    length: f64,
    mass: f64,
}

impl GridSpace {
    /// Build a grid; `dims` ∈ {1, 2}, `n ≥ 8` points per axis, extent and
    /// mass strictly positive. Powers of two are recommended for `n`.
    pub fn new(dims: usize, n: usize, length: f64, mass: f64) -> Result<Arc<Self>> {
        if dims == 0 || dims > 2 {
            return Err(Error::BadDims(dims));
        }
        if n < 8 {
            return Err(Error::TooFewPoints(n));
        }
        if length.is_nan() || length <= 0.0 || length.is_infinite() {
            return Err(Error::NonpositiveExtent(length));
        }
        if mass.is_nan() || mass <= 0.0 || mass.is_infinite() {
            return Err(Error::NonpositiveMass(mass));
        }
        Ok(Arc::new(GridSpace {
            dims,
            n,
            length,
            mass,
        }))
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Position spacing Δx = L/N.
    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Momentum spacing Δk = 2π/L.
    pub fn momentum_spacing(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Half-width of the momentum extent, πN/L.
    pub fn max_momentum(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    pub fn total_points(&self) -> usize {
        self.n.pow(self.dims as u32)
    }

    /// Position sample on one axis: `x_i = -L/2 + i Δx`.
    pub fn position(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.spacing()
    }

    /// Signed momentum sample for FFT bin `j`.
    pub fn momentum(&self, j: usize) -> f64 {
        let j = j as isize;
        let n = self.n as isize;
        let signed = if j < n / 2 { j } else { j - n };
        signed as f64 * self.momentum_spacing()
    }

    /// Decompose a flat index into per-axis indices (axis 0 major).
    #[inline]
    pub fn axis_indices(&self, flat: usize) -> [usize; 2] {
        match self.dims {
            1 => [flat, 0],
            _ => [flat / self.n, flat % self.n],
        }
    }

    fn weight(&self, rep: Rep) -> f64 {
        let per_axis = match rep {
            Rep::Position => self.spacing(),
            Rep::Momentum => self.momentum_spacing() / (2.0 * PI),
        };
        per_axis.powi(self.dims as i32)
    }
}

/// Complex amplitudes over a [`GridSpace`] in a definite representation.
///
/// States are immutable values: every operation returns a new state, so they
/// are safe to share across parallel sweeps.
#[derive(Debug, Clone)]
pub struct StateVector {
    space: Arc<GridSpace>,
    rep: Rep,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(space: Arc<GridSpace>, rep: Rep, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != space.total_points() {
            return Err(Error::ShapeMismatch {
                want: space.total_points(),
                got: amps.len(),
            });
        }
        Ok(StateVector { space, rep, amps })
    }

    /// Normalized Gaussian packet `∏_a exp(-(x_a-x0_a)²/2σ² + i k0_a x_a)`.
    ///
    /// Rejects packets whose ±5σ position support or ±5/σ momentum support
    /// would leave the grid; boundary wrap is what breaks the continuum
    /// identities the rest of the crate relies on.
    pub fn gaussian(
        space: &Arc<GridSpace>,
        center_x: &[f64],
        center_k: &[f64],
        sigma: f64,
    ) -> Result<Self> {
        let half_l = 0.5 * space.extent();
        let half_k = space.max_momentum();
        for (axis, &x0) in center_x.iter().enumerate() {
            if x0.abs() + 5.0 * sigma > half_l {
                return Err(Error::SupportViolation(format!(
                    "position support |{x0}| + 5σ = {} exceeds half-extent {half_l} on axis {axis}",
                    x0.abs() + 5.0 * sigma
                )));
            }
        }
        for (axis, &k0) in center_k.iter().enumerate() {
            if k0.abs() + 5.0 / sigma > half_k {
                return Err(Error::SupportViolation(format!(
                    "momentum support |{k0}| + 5/σ = {} exceeds half-extent {half_k} on axis {axis}",
                    k0.abs() + 5.0 / sigma
                )));
            }
        }
        Self::gaussian_unchecked(space, center_x, center_k, sigma)
    }

    /// Gaussian constructor without the support precondition.
    ///
    /// Exists for diagnostics that deliberately probe boundary contamination
    /// (e.g. watching the canonical commutator drift off `i`).
    pub fn gaussian_unchecked(
        space: &Arc<GridSpace>,
        center_x: &[f64],
        center_k: &[f64],
        sigma: f64,
    ) -> Result<Self> {
        if center_x.len() != space.dims() || center_k.len() != space.dims() {
            return Err(Error::InvalidParameter(format!(
                "gaussian centers need {} components, got {}/{}",
                space.dims(),
                center_x.len(),
                center_k.len()
            )));
        }
        if sigma.is_nan() || sigma <= 0.0 || sigma.is_infinite() {
            return Err(Error::InvalidParameter(format!(
                "gaussian width must be positive, got {sigma}"
            )));
        }
        let norm_1d = (PI * sigma * sigma).powf(-0.25);
        let mut amps = Vec::with_capacity(space.total_points());
        for flat in 0..space.total_points() {
            let idx = space.axis_indices(flat);
            let mut a = Complex64::new(1.0, 0.0);
            for axis in 0..space.dims() {
                let x = space.position(idx[axis]);
                let u = x - center_x[axis];
                let envelope = (-u * u / (2.0 * sigma * sigma)).exp();
                let phase = Complex64::new(0.0, center_k[axis] * x).exp();
                a *= norm_1d * envelope * phase;
            }
            amps.push(a);
        }
        let mut state = StateVector {
            space: space.clone(),
            rep: Rep::Position,
            amps,
        };
        let n = state.norm();
        state = state.scaled(Complex64::new(1.0 / n, 0.0));
        Ok(state)
    }

    /// Normalized plane wave `e^{i k·x} / L^{d/2}` with `k` snapped to the
    /// nearest grid momentum (exact single-bin spectrum).
    pub fn plane_wave(space: &Arc<GridSpace>, k: &[f64]) -> Result<Self> {
        if k.len() != space.dims() {
            return Err(Error::InvalidParameter(format!(
                "plane wave needs {} momentum components, got {}",
                space.dims(),
                k.len()
            )));
        }
        let dk = space.momentum_spacing();
        let snapped: Vec<f64> = k.iter().map(|&ki| (ki / dk).round() * dk).collect();
        let amp = space.extent().powf(-0.5 * space.dims() as f64);
        let mut amps = Vec::with_capacity(space.total_points());
        for flat in 0..space.total_points() {
            let idx = space.axis_indices(flat);
            let mut phase = 0.0;
            for axis in 0..space.dims() {
                phase += snapped[axis] * space.position(idx[axis]);
            }
            amps.push(Complex64::from_polar(amp, phase));
        }
        Ok(StateVector {
            space: space.clone(),
            rep: Rep::Position,
            amps,
        })
    }

    pub fn space(&self) -> &Arc<GridSpace> {
        &self.space
    }

    pub fn rep(&self) -> Rep {
        self.rep
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Unitary transform to the momentum representation.
    pub fn to_momentum(&self) -> Result<Self> {
        if self.rep == Rep::Momentum {
            return Err(Error::RepMismatch {
                expected: Rep::Position,
                found: Rep::Momentum,
            });
        }
        Ok(self.transform_forward())
    }

    /// Unitary transform to the position representation.
    pub fn to_position(&self) -> Result<Self> {
        if self.rep == Rep::Position {
            return Err(Error::RepMismatch {
                expected: Rep::Momentum,
                found: Rep::Position,
            });
        }
        Ok(self.transform_inverse())
    }

    /// Convert to `rep` if needed (identity clone otherwise).
    pub fn to_rep(&self, rep: Rep) -> Self {
        if self.rep == rep {
            self.clone()
        } else {
            match rep {
                Rep::Momentum => self.transform_forward(),
                Rep::Position => self.transform_inverse(),
            }
        }
    }

    fn transform_forward(&self) -> Self {
        debug_assert_eq!(self.rep, Rep::Position);
        let space = &self.space;
        let n = space.points_per_axis();
        let mut amps = self.amps.clone();
        for axis in 0..space.dims() {
            transform_axis(&mut amps, n, space.dims(), axis, true);
        }
        // Fold in dx e^{-i k x0} per axis so bins approximate ψ̃(k_j).
        let x0 = space.position(0);
        let dx = space.spacing();
        for (flat, a) in amps.iter_mut().enumerate() {
            let idx = space.axis_indices(flat);
            let mut phase = 0.0;
            let mut scale = 1.0;
            for &j in idx.iter().take(space.dims()) {
                phase -= space.momentum(j) * x0;
                scale *= dx;
            }
            *a *= Complex64::from_polar(scale, phase);
        }
        StateVector {
            space: space.clone(),
            rep: Rep::Momentum,
            amps,
        }
    }

    fn transform_inverse(&self) -> Self {
        debug_assert_eq!(self.rep, Rep::Momentum);
        let space = &self.space;
        let n = space.points_per_axis();
        let x0 = space.position(0);
        let dx = space.spacing();
        let mut amps = self.amps.clone();
        for (flat, a) in amps.iter_mut().enumerate() {
            let idx = space.axis_indices(flat);
            let mut phase = 0.0;
            let mut scale = 1.0;
            for &j in idx.iter().take(space.dims()) {
                phase += space.momentum(j) * x0;
                scale /= dx;
            }
            *a *= Complex64::from_polar(scale, phase);
        }
        for axis in 0..space.dims() {
            transform_axis(&mut amps, n, space.dims(), axis, false);
        }
        StateVector {
            space: space.clone(),
            rep: Rep::Position,
            amps,
        }
    }

    /// Pointwise multiply by `f(x)` in the position representation, restoring
    /// the input representation afterwards.
    pub fn map_position<F>(&self, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let original = self.rep;
        let mut state = self.to_rep(Rep::Position);
        let space = state.space.clone();
        let mut xs = [0.0f64; 2];
        for (flat, a) in state.amps.iter_mut().enumerate() {
            let idx = space.axis_indices(flat);
            for (x, &i) in xs.iter_mut().zip(idx.iter().take(space.dims())) {
                *x = space.position(i);
            }
            *a *= f(&xs[..space.dims()]);
        }
        state.to_rep(original)
    }

    /// Pointwise multiply by `f(k)` in the momentum representation, restoring
    /// the input representation afterwards.
    pub fn map_momentum<F>(&self, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let original = self.rep;
        let mut state = self.to_rep(Rep::Momentum);
        let space = state.space.clone();
        let mut ks = [0.0f64; 2];
        for (flat, a) in state.amps.iter_mut().enumerate() {
            let idx = space.axis_indices(flat);
            for (k, &j) in ks.iter_mut().zip(idx.iter().take(space.dims())) {
                *k = space.momentum(j);
            }
            *a *= f(&ks[..space.dims()]);
        }
        state.to_rep(original)
    }

    /// Sesquilinear inner product `⟨self|other⟩` (conjugate-linear in self),
    /// with the sum weighted so it approximates the continuum integral.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let other = other.to_rep(self.rep);
        let w = self.space.weight(self.rep);
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, b) in self.amps.iter().zip(other.amps.iter()) {
            acc += a.conj() * b;
        }
        Ok(acc * w)
    }

    pub fn norm_sq(&self) -> f64 {
        let w = self.space.weight(self.rep);
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * w
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `|⟨self|other⟩| / (‖self‖ ‖other‖)` — representation- and phase-blind
    /// state overlap.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm() / (self.norm() * other.norm()))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let amps = self.amps.iter().map(|a| a * c).collect();
        StateVector {
            space: self.space.clone(),
            rep: self.rep,
            amps,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let other = other.to_rep(self.rep);
        let amps = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(StateVector {
            space: self.space.clone(),
            rep: self.rep,
            amps,
        })
    }

    /// Fraction of probability mass in the outermost `TAIL_BAND` of each
    /// position axis.
    pub fn position_tail_mass(&self) -> f64 {
        let state = self.to_rep(Rep::Position);
        let cutoff = 0.5 * self.space.extent() * (1.0 - 2.0 * TAIL_BAND);
        state.band_mass(cutoff, |space, i| space.position(i))
    }

    /// Fraction of probability mass in the outermost `TAIL_BAND` of each
    /// momentum axis.
    pub fn momentum_tail_mass(&self) -> f64 {
        let state = self.to_rep(Rep::Momentum);
        let cutoff = self.space.max_momentum() * (1.0 - 2.0 * TAIL_BAND);
        state.band_mass(cutoff, |space, j| space.momentum(j))
    }

    fn band_mass(&self, cutoff: f64, coord: impl Fn(&GridSpace, usize) -> f64) -> f64 {
        let mut tail = 0.0;
        let mut total = 0.0;
        for (flat, a) in self.amps.iter().enumerate() {
            let idx = self.space.axis_indices(flat);
            let p = a.norm_sqr();
            total += p;
            let outside =
                (0..self.space.dims()).any(|axis| coord(&self.space, idx[axis]).abs() >= cutoff);
            if outside {
                tail += p;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    /// Check that both position and momentum tails are below
    /// [`ADMISSIBLE_TAIL`]; returns a support-violation error otherwise.
    pub fn check_admissible(&self) -> Result<()> {
        let pt = self.position_tail_mass();
        if pt > ADMISSIBLE_TAIL {
            return Err(Error::SupportViolation(format!(
                "position tail mass {pt:.3e} exceeds {ADMISSIBLE_TAIL:.0e}"
            )));
        }
        let mt = self.momentum_tail_mass();
        if mt > ADMISSIBLE_TAIL {
            return Err(Error::SupportViolation(format!(
                "momentum tail mass {mt:.3e} exceeds {ADMISSIBLE_TAIL:.0e}"
            )));
        }
        Ok(())
    }

    /// Translate along one axis by a per-line shift (spectral shift theorem;
    /// exactly unitary). `shift(t)` receives the transverse index and returns
    /// the displacement of that line. Used by the shear stages of rotations.
    pub(crate) fn sheared(&self, axis: usize, shift: impl Fn(usize) -> f64) -> Self {
        let original = self.rep;
        let state = self.to_rep(Rep::Position);
        let space = state.space.clone();
        let n = space.points_per_axis();
        let mut amps = state.amps;
        match (space.dims(), axis) {
            (1, 0) => {
                let s = shift(0);
                shift_line(&mut amps, &space, s);
            }
            (2, 1) => {
                for (t, row) in amps.chunks_exact_mut(n).enumerate() {
                    let s = shift(t);
                    shift_line(row, &space, s);
                }
            }
            (2, 0) => {
                let mut col = vec![Complex64::new(0.0, 0.0); n];
                for t in 0..n {
                    for i in 0..n {
                        col[i] = amps[i * n + t];
                    }
                    let s = shift(t);
                    shift_line(&mut col, &space, s);
                    for i in 0..n {
                        amps[i * n + t] = col[i];
                    }
                }
            }
            _ => unreachable!("axis {axis} out of range for dims {}", space.dims()),
        }
        let out = StateVector {
            space,
            rep: Rep::Position,
            amps,
        };
        out.to_rep(original)
    }
}

/// Shift one contiguous line by `s` via DFT phase multiplication.
fn shift_line(line: &mut [Complex64], space: &GridSpace, s: f64) {
    if s == 0.0 {
        return;
    }
    fft::forward(line);
    for (j, a) in line.iter_mut().enumerate() {
        let k = space.momentum(j);
        *a *= Complex64::from_polar(1.0, k * s);
    }
    fft::inverse(line);
}

/// In-place DFT along one axis of a row-major `n^dims` array.
fn transform_axis(amps: &mut [Complex64], n: usize, dims: usize, axis: usize, forward: bool) {
    let run = |buf: &mut [Complex64]| {
        if forward {
            fft::forward(buf)
        } else {
            fft::inverse(buf)
        }
    };
    match (dims, axis) {
        (1, 0) => run(amps),
        (2, 1) => {
            for row in amps.chunks_exact_mut(n) {
                run(row);
            }
        }
        (2, 0) => {
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            for j in 0..n {
                for i in 0..n {
                    col[i] = amps[i * n + j];
                }
                run(&mut col);
                for i in 0..n {
                    amps[i * n + j] = col[i];
                }
            }
        }
        _ => unreachable!("axis {axis} out of range for dims {dims}"),
    }
}
