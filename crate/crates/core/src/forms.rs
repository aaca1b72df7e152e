//! Operator-valued differential forms on a coordinate patch, at finite fiber
//! dimension.
//!
//! Connection 1-forms are anti-hermitian n×n matrix fields; the exterior
//! derivative is taken by central differences with the patch step, so every
//! identity here is a falsifiable O(h²) statement:
//!
//! * curvature Ω = dω + ω∧ω, with ω∧ω the matrix commutator;
//! * gauge transformation ω ↦ U⁻¹ωU + U⁻¹dU conjugates the curvature;
//! * pure-gauge connections U dU⁻¹ are flat;
//! * the Bianchi identity dΩ = Ω∧ω − ω∧Ω.
//!
//! Fields are immutable closures over the patch; derived forms track how many
//! stencil widths of boundary margin their evaluation needs and reject points
//! too close to the edge.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cmat::CMat;
use crate::error::{Error, Result};

/// Rectangular coordinate box with a per-axis finite-difference step.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    lo: Vec<f64>,
    hi: Vec<f64>,
    step: f64,
}

impl Patch {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, step: f64) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidParameter(
                "patch bounds must be non-empty and of equal length".into(),
            ));
        }
        if step.is_nan() || step <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "patch step must be positive, got {step}"
            )));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(Error::InvalidParameter(
                "patch lower bounds must be below upper bounds".into(),
            ));
        }
        Ok(Patch { lo, hi, step })
    }

    /// Unit cube patch in `dims` coordinates.
    pub fn unit(dims: usize, step: f64) -> Result<Self> {
        Patch::new(vec![0.0; dims], vec![1.0; dims], step)
    }

    pub fn dims(&self) -> usize {
        self.lo.len()
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn with_step(&self, step: f64) -> Result<Self> {
        Patch::new(self.lo.clone(), self.hi.clone(), step)
    }

    /// Reject points closer than `stencil` stencil widths to the boundary.
    pub fn require_interior(&self, point: &[f64], stencil: usize) -> Result<()> {
        if point.len() != self.dims() {
            return Err(Error::InvalidParameter(format!(
                "point has {} coordinates, patch has {}",
                point.len(),
                self.dims()
            )));
        }
        let margin = stencil as f64 * self.step;
        let inside = point
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (lo, hi))| *x >= lo + margin && *x <= hi - margin);
        if inside {
            Ok(())
        } else {
            Err(Error::PatchBoundary(point.to_vec(), stencil))
        }
    }
}

type OneFormEval = dyn Fn(&[f64], usize) -> CMat + Send + Sync;
type TwoFormEval = dyn Fn(&[f64], usize, usize) -> CMat + Send + Sync;
type ThreeFormEval = dyn Fn(&[f64], usize, usize, usize) -> CMat + Send + Sync;
type GaugeEval = dyn Fn(&[f64]) -> CMat + Send + Sync;
/// (coefficient matrix, per-axis frequencies, per-axis phases)
type TrigTerm = (CMat, Vec<f64>, Vec<f64>);

/// Matrix-valued 1-form: one n×n component per coordinate direction.
#[derive(Clone)]
pub struct MatrixOneForm {
    n: usize,
    patch: Patch,
    stencil: usize,
    eval: Arc<OneFormEval>,
}

/// Matrix-valued 2-form, antisymmetric in its direction indices.
#[derive(Clone)]
pub struct MatrixTwoForm {
    n: usize,
    patch: Patch,
    stencil: usize,
    eval: Arc<TwoFormEval>,
}

/// Matrix-valued 3-form (single independent component per direction triple).
#[derive(Clone)]
pub struct MatrixThreeForm {
    patch: Patch,
    stencil: usize,
    eval: Arc<ThreeFormEval>,
}

/// Smooth unitary-matrix field over a patch.
#[derive(Clone)]
pub struct GaugeField {
    n: usize,
    patch: Patch,
    eval: Arc<GaugeEval>,
}

fn displaced(point: &[f64], axis: usize, delta: f64) -> Vec<f64> {
    let mut p = point.to_vec();
    p[axis] += delta;
    p
}

impl MatrixOneForm {
    pub fn from_fn<F>(n: usize, patch: Patch, f: F) -> Self
    where
        F: Fn(&[f64], usize) -> CMat + Send + Sync + 'static,
    {
        MatrixOneForm {
            n,
            patch,
            stencil: 0,
            eval: Arc::new(f),
        }
    }

    pub fn fiber_dim(&self) -> usize {
        self.n
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    /// Same field with a different finite-difference step.
    pub fn with_step(&self, step: f64) -> Result<Self> {
        Ok(MatrixOneForm {
            n: self.n,
            patch: self.patch.with_step(step)?,
            stencil: self.stencil,
            eval: self.eval.clone(),
        })
    }

    /// Component ω_μ at a point.
    pub fn at(&self, point: &[f64], mu: usize) -> Result<CMat> {
        self.patch.require_interior(point, self.stencil)?;
        Ok((self.eval)(point, mu))
    }

    /// Exterior derivative (dω)_{μν} = ∂_μ ω_ν − ∂_ν ω_μ by central
    /// differences with the patch step; O(h²) accurate.
    pub fn exterior_derivative(&self) -> MatrixTwoForm {
        let eval = self.eval.clone();
        let h = self.patch.step();
        MatrixTwoForm {
            n: self.n,
            patch: self.patch.clone(),
            stencil: self.stencil + 1,
            eval: Arc::new(move |point, mu, nu| {
                let d_mu_nu = eval(&displaced(point, mu, h), nu)
                    .sub(&eval(&displaced(point, mu, -h), nu))
                    .scale(Complex64::new(0.5 / h, 0.0));
                let d_nu_mu = eval(&displaced(point, nu, h), mu)
                    .sub(&eval(&displaced(point, nu, -h), mu))
                    .scale(Complex64::new(0.5 / h, 0.0));
                d_mu_nu.sub(&d_nu_mu)
            }),
        }
    }

    /// Curvature Ω_{μν} = (dω)_{μν} + [ω_μ, ω_ν].
    pub fn curvature(&self) -> MatrixTwoForm {
        let d_omega = self.exterior_derivative();
        let eval = self.eval.clone();
        MatrixTwoForm {
            n: self.n,
            patch: d_omega.patch.clone(),
            stencil: d_omega.stencil,
            eval: Arc::new(move |point, mu, nu| {
                let dd = (d_omega.eval)(point, mu, nu);
                let w_mu = eval(point, mu);
                let w_nu = eval(point, nu);
                dd.add(&w_mu.commutator(&w_nu))
            }),
        }
    }

    /// Gauge transformation ω ↦ U⁻¹ωU + U⁻¹∂U (with U⁻¹ = U† and the
    /// derivative of U by central differences).
    pub fn gauge_transform(&self, u: &GaugeField) -> Result<MatrixOneForm> {
        if u.n != self.n {
            return Err(Error::InvalidParameter(format!(
                "gauge field fiber dim {} does not match form fiber dim {}",
                u.n, self.n
            )));
        }
        u.check_unitary()?;
        let eval = self.eval.clone();
        let ueval = u.eval.clone();
        let h = self.patch.step();
        Ok(MatrixOneForm {
            n: self.n,
            patch: self.patch.clone(),
            stencil: self.stencil + 1,
            eval: Arc::new(move |point, mu| {
                let u0 = ueval(point);
                let uinv = u0.adjoint();
                let du = ueval(&displaced(point, mu, h))
                    .sub(&ueval(&displaced(point, mu, -h)))
                    .scale(Complex64::new(0.5 / h, 0.0));
                uinv.mul(&eval(point, mu)).mul(&u0).add(&uinv.mul(&du))
            }),
        })
    }

    /// Bianchi residual dΩ − (Ω∧ω − ω∧Ω), antisymmetrized over the three
    /// direction indices; its max norm vanishes as O(h²) for any smooth ω.
    pub fn bianchi_residual(&self) -> MatrixThreeForm {
        let omega = self.eval.clone();
        let big_omega = self.curvature();
        let h = self.patch.step();
        MatrixThreeForm {
            patch: big_omega.patch.clone(),
            stencil: big_omega.stencil + 1,
            eval: Arc::new(move |point, mu, nu, rho| {
                let half_h = Complex64::new(0.5 / h, 0.0);
                // Cyclic exterior derivative of the antisymmetric 2-form.
                let mut d_omega = CMat::zeros((big_omega.eval)(point, mu, nu).dim());
                for &(a, b, c) in &[(mu, nu, rho), (nu, rho, mu), (rho, mu, nu)] {
                    let diff = (big_omega.eval)(&displaced(point, a, h), b, c)
                        .sub(&(big_omega.eval)(&displaced(point, a, -h), b, c))
                        .scale(half_h);
                    d_omega = d_omega.add(&diff);
                }
                // (Ω∧ω)_{μνρ} = Σ_cyc Ω_{ab} ω_c and (ω∧Ω)_{μνρ} = Σ_cyc ω_a Ω_{bc}.
                let mut rhs = CMat::zeros(d_omega.dim());
                for &(a, b, c) in &[(mu, nu, rho), (nu, rho, mu), (rho, mu, nu)] {
                    let wedge_left = (big_omega.eval)(point, a, b).mul(&omega(point, c));
                    let wedge_right = omega(point, a).mul(&(big_omega.eval)(point, b, c));
                    rhs = rhs.add(&wedge_left).sub(&wedge_right);
                }
                d_omega.sub(&rhs)
            }),
        }
    }

    /// Max anti-hermiticity defect over sample points (should vanish for
    /// connection forms and stay zero under gauge transformation).
    pub fn anti_hermitian_defect(&self, points: &[Vec<f64>]) -> Result<f64> {
        let mut worst = 0.0f64;
        for p in points {
            for mu in 0..self.patch.dims() {
                worst = worst.max(self.at(p, mu)?.anti_hermitian_defect());
            }
        }
        Ok(worst)
    }
}

impl MatrixTwoForm {
    pub fn fiber_dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, point: &[f64], mu: usize, nu: usize) -> Result<CMat> {
        self.patch.require_interior(point, self.stencil)?;
        Ok((self.eval)(point, mu, nu))
    }
}

impl MatrixThreeForm {
    pub fn at(&self, point: &[f64], mu: usize, nu: usize, rho: usize) -> Result<CMat> {
        self.patch.require_interior(point, self.stencil)?;
        Ok((self.eval)(point, mu, nu, rho))
    }
}

impl GaugeField {
    pub fn from_fn<F>(n: usize, patch: Patch, f: F) -> Self
    where
        F: Fn(&[f64]) -> CMat + Send + Sync + 'static,
    {
        GaugeField {
            n,
            patch,
            eval: Arc::new(f),
        }
    }

    pub fn identity(n: usize, patch: Patch) -> Self {
        GaugeField::from_fn(n, patch, move |_| CMat::identity(n))
    }

    pub fn at(&self, point: &[f64]) -> Result<CMat> {
        self.patch.require_interior(point, 0)?;
        Ok((self.eval)(point))
    }

    /// Spot-check unitarity on a coarse lattice of patch points.
    pub fn check_unitary(&self) -> Result<()> {
        for p in self.patch_samples(3) {
            let u = (self.eval)(&p);
            let defect = u.unitarity_defect();
            if defect > 1e-12 {
                return Err(Error::NonUnitaryGauge {
                    point: p,
                    deviation: defect,
                });
            }
        }
        Ok(())
    }

    /// Pure-gauge connection ω = U dU⁻¹ (flat by construction).
    pub fn pure_gauge_form(&self) -> MatrixOneForm {
        let ueval = self.eval.clone();
        let h = self.patch.step();
        MatrixOneForm {
            n: self.n,
            patch: self.patch.clone(),
            stencil: 1,
            eval: Arc::new(move |point, mu| {
                let u0 = ueval(point);
                let dinv = ueval(&displaced(point, mu, h))
                    .adjoint()
                    .sub(&ueval(&displaced(point, mu, -h)).adjoint())
                    .scale(Complex64::new(0.5 / h, 0.0));
                u0.mul(&dinv)
            }),
        }
    }

    fn patch_samples(&self, per_axis: usize) -> Vec<Vec<f64>> {
        let dims = self.patch.dims();
        let mut points = vec![Vec::new()];
        for axis in 0..dims {
            let mut next = Vec::new();
            for p in &points {
                for i in 0..per_axis {
                    let frac = (i as f64 + 0.5) / per_axis as f64;
                    let x =
                        self.patch.lo[axis] + frac * (self.patch.hi[axis] - self.patch.lo[axis]);
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
            points = next;
        }
        points
    }
}

/// Anti-hermitian trigonometric-polynomial matrix field with an analytic
/// derivative, used both as a randomized test subject and as the oracle for
/// the finite-difference exterior derivative.
pub struct TrigPolyField {
    n: usize,
    dims: usize,
    terms: Vec<Vec<TrigTerm>>,
}

impl TrigPolyField {
    /// Deterministically seeded random field with `terms_per_direction`
    /// harmonics per coordinate direction.
    pub fn random(seed: u64, n: usize, dims: usize, terms_per_direction: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Keep amplitudes and frequencies O(1) so the h² truncation term of
        // the central differences dominates roundoff across the refinement
        // ladder without swamping the identities being tested.
        let amp = 0.8 / (n as f64 * terms_per_direction as f64);
        let mut terms = Vec::with_capacity(dims);
        for _ in 0..dims {
            let mut per_dir = Vec::with_capacity(terms_per_direction);
            for _ in 0..terms_per_direction {
                let raw = CMat::from_fn(n, |_, _| {
                    Complex64::new(rng.random_range(-amp..amp), rng.random_range(-amp..amp))
                });
                // (B - B†)/2 is anti-hermitian.
                let coeff = raw.sub(&raw.adjoint()).scale(Complex64::new(0.5, 0.0));
                let freqs: Vec<f64> = (0..dims).map(|_| rng.random_range(1..=2) as f64).collect();
                let phases: Vec<f64> = (0..dims)
                    .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                    .collect();
                per_dir.push((coeff, freqs, phases));
            }
            terms.push(per_dir);
        }
        TrigPolyField { n, dims, terms }
    }

    pub fn component(&self, point: &[f64], mu: usize) -> CMat {
        let mut acc = CMat::zeros(self.n);
        for (coeff, freqs, phases) in &self.terms[mu] {
            let mut envelope = 1.0;
            for axis in 0..self.dims {
                envelope *= (freqs[axis] * point[axis] + phases[axis]).cos();
            }
            acc = acc.add(&coeff.scale(Complex64::new(envelope, 0.0)));
        }
        acc
    }

    /// Analytic ∂_μ ω_ν — the independent oracle for the central-difference
    /// exterior derivative.
    pub fn analytic_derivative(&self, point: &[f64], mu: usize, nu: usize) -> CMat {
        let mut acc = CMat::zeros(self.n);
        for (coeff, freqs, phases) in &self.terms[nu] {
            let mut envelope = 1.0;
            for axis in 0..self.dims {
                let arg = freqs[axis] * point[axis] + phases[axis];
                envelope *= if axis == mu {
                    -freqs[axis] * arg.sin()
                } else {
                    arg.cos()
                };
            }
            acc = acc.add(&coeff.scale(Complex64::new(envelope, 0.0)));
        }
        acc
    }

    pub fn one_form(&self, patch: Patch) -> MatrixOneForm
    where
        Self: Sized,
    {
        let n = self.n;
        let terms = self.terms.clone();
        let dims = self.dims;
        let field = TrigPolyField { n, dims, terms };
        MatrixOneForm::from_fn(n, patch, move |point, mu| field.component(point, mu))
    }

    /// Smooth unitary field exp(A(x)) from this generator (single-direction
    /// component 0 is used as the generator).
    pub fn gauge_field(&self, patch: Patch) -> GaugeField {
        let n = self.n;
        let terms = self.terms.clone();
        let dims = self.dims;
        let field = TrigPolyField { n, dims, terms };
        GaugeField::from_fn(n, patch, move |point| field.component(point, 0).expm())
    }
}

impl Clone for TrigPolyField {
    fn clone(&self) -> Self {
        TrigPolyField {
            n: self.n,
            dims: self.dims,
            terms: self.terms.clone(),
        }
    }
}
