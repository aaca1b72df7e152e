//! Curves on the frame manifold and the effective Hamiltonians their
//! observers see.
//!
//! An accelerating observer changes Galilean frame at every instant; the
//! generator of its perceived evolution is `H_eff = i (dU/dt) U⁻¹` with
//! `U(t)` the transport word of the curve's frame coordinate. This module
//! evaluates that derivative numerically (central differences in t) and
//! assembles the closed-form pseudo-force Hamiltonians:
//!
//! * linear acceleration g — kinetic term in `P − m v(t)` plus the linear
//!   potential `−m g (X + x(t))`;
//! * uniform rotation (ω, r) — Coriolis shifts `(P₁ + mωX₂, P₂ − mωX₁)`
//!   folded into the kinetic term plus the centrifugal potential
//!   `−½mω²((X₁+r)² + X₂²)`.
//!
//! The Coriolis term is a connection piece added to the canonical momentum,
//! not a potential — it does no work, which the conservation checks in the
//! test suites make quantitative. Comparisons between the numeric and
//! analytic routes are always modulo real multiples of the identity: constant
//! offsets only generate global phases.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::galilei::{Factor, FrameCoord, GroupWord};
use crate::grid::{GridSpace, StateVector};
use crate::operators::Op;

type PotentialFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// Timelike curve on the base manifold of frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameCurve {
    /// x(t) = ½gt², v(t) = gt on the 1D chart.
    LinearAccel { g: f64 },
    /// Frame origin circling at radius r with angular velocity ω.
    Circular { omega: f64, radius: f64 },
}

impl FrameCurve {
    /// Grid dimensionality the curve lives in.
    pub fn dims(&self) -> usize {
        match self {
            FrameCurve::LinearAccel { .. } => 1,
            FrameCurve::Circular { .. } => 2,
        }
    }

    /// Frame coordinate at curve time t.
    pub fn coord(&self, t: f64) -> FrameCoord {
        match *self {
            FrameCurve::LinearAccel { g } => FrameCoord::Line {
                t,
                x: 0.5 * g * t * t,
                v: g * t,
            },
            FrameCurve::Circular { omega, radius } => FrameCoord::Rotating {
                t,
                radius,
                theta: omega * t,
                speed: radius * omega,
            },
        }
    }

    /// Observer transport word at curve time t.
    ///
    /// Both charts use the orientation in which the kinetic term of
    /// `i (dU/dt) U⁻¹` comes out positive: the rotating chart is the product
    /// boost ∘ rotation ∘ translation ∘ time evolution, and the linear chart
    /// is `U_{-v} U_{-x} U_{t}` (evolve, then express in the displaced and
    /// boosted coordinates).
    pub fn word(&self, t: f64) -> Result<GroupWord> {
        match *self {
            FrameCurve::LinearAccel { g } => {
                let x = 0.5 * g * t * t;
                let v = g * t;
                Ok(GroupWord::new(vec![
                    Factor::Boost { eta: -v, axis: 0 },
                    Factor::SpaceTranslate { zeta: -x, axis: 0 },
                    Factor::TimeTranslate(t),
                ]))
            }
            FrameCurve::Circular { .. } => GroupWord::for_frame(&self.coord(t)),
        }
    }
}

/// Position-dependent addition to the canonical momentum.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentumShift {
    None,
    /// Constant shift per axis: kinetic term Σ (P_a + s_a)² / 2m.
    Constant(Vec<f64>),
    /// Coriolis shifts (+mωX₂, −mωX₁); the kinetic term is assembled exactly
    /// as Hfree − ωJ + ½mω²(X₁² + X₂²).
    Angular {
        omega: f64,
    },
}

/// Structured Hamiltonian: shifted kinetic part + scalar potential + offset.
#[derive(Clone)]
pub struct EffectiveHamiltonian {
    space: Arc<GridSpace>,
    shift: MomentumShift,
    potential: Arc<PotentialFn>,
    offset: f64,
}

impl EffectiveHamiltonian {
    pub fn new<V>(
        space: Arc<GridSpace>,
        shift: MomentumShift,
        potential: V,
        offset: f64,
    ) -> Result<Self>
    where
        V: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        match &shift {
            MomentumShift::Constant(s) if s.len() != space.dims() => {
                return Err(Error::InvalidParameter(format!(
                    "constant shift needs {} components, got {}",
                    space.dims(),
                    s.len()
                )));
            }
            MomentumShift::Angular { .. } if space.dims() != 2 => {
                return Err(Error::DimsMismatch {
                    op: "angular momentum shift",
                    need: 2,
                    have: space.dims(),
                });
            }
            _ => {}
        }
        Ok(EffectiveHamiltonian {
            space,
            shift,
            potential: Arc::new(potential),
            offset,
        })
    }

    /// Free Hamiltonian on the grid.
    pub fn free(space: Arc<GridSpace>) -> Self {
        EffectiveHamiltonian {
            space,
            shift: MomentumShift::None,
            potential: Arc::new(|_| 0.0),
            offset: 0.0,
        }
    }

    pub fn space(&self) -> &Arc<GridSpace> {
        &self.space
    }

    pub fn shift(&self) -> &MomentumShift {
        &self.shift
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn potential_at(&self, x: &[f64]) -> f64 {
        (self.potential)(x)
    }

    /// For the angular gauge the quadratic |x|² piece of the expanded kinetic
    /// term is folded into the position-diagonal factor of the propagator.
    pub(crate) fn position_factor(&self, x: &[f64]) -> f64 {
        let quad = match self.shift {
            MomentumShift::Angular { omega } => {
                let m = self.space.mass();
                0.5 * m * omega * omega * x.iter().map(|xi| xi * xi).sum::<f64>()
            }
            _ => 0.0,
        };
        (self.potential)(x) + quad
    }

    /// Apply the assembled operator Σ(P + shift)²/2m + V(X) + offset.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let m = self.space.mass();
        let kinetic = match &self.shift {
            MomentumShift::None => psi.map_momentum(|k| {
                Complex64::new(k.iter().map(|ki| ki * ki).sum::<f64>() / (2.0 * m), 0.0)
            }),
            MomentumShift::Constant(s) => {
                let s = s.clone();
                psi.map_momentum(move |k| {
                    let shifted: f64 = k.iter().zip(&s).map(|(ki, si)| (ki + si) * (ki + si)).sum();
                    Complex64::new(shifted / (2.0 * m), 0.0)
                })
            }
            MomentumShift::Angular { omega } => {
                // (P₁+mωX₂)² + (P₂−mωX₁)² = P² − 2mωJ + m²ω²(X₁²+X₂²),
                // assembled from exact spectral actions.
                let hfree = psi.apply(Op::Hfree)?;
                let j = psi.apply(Op::J)?.scaled(Complex64::new(-omega, 0.0));
                let quad = psi.map_position(|x| {
                    Complex64::new(
                        0.5 * m * omega * omega * x.iter().map(|xi| xi * xi).sum::<f64>(),
                        0.0,
                    )
                });
                hfree.add(&j)?.add(&quad)?
            }
        };
        let pot = self.potential.clone();
        let vpart = psi.map_position(move |x| Complex64::new(pot(x), 0.0));
        let mut total = kinetic.add(&vpart)?;
        if self.offset != 0.0 {
            total = total.add(&psi.scaled(Complex64::new(self.offset, 0.0)))?;
        }
        Ok(total)
    }

    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        Ok(psi.inner(&self.apply(psi)?)?.re / psi.norm_sq())
    }
}

/// Numeric effective Hamiltonian action
/// `i [U(t+h)U(t)⁻¹ − U(t−h)U(t)⁻¹] ψ / (2h)`; O(h²) accurate.
pub fn numeric_effective_hamiltonian(
    curve: &FrameCurve,
    t: f64,
    psi: &StateVector,
    h: f64,
) -> Result<StateVector> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "time step must be positive, got {h}"
        )));
    }
    if psi.space().dims() != curve.dims() {
        return Err(Error::DimsMismatch {
            op: "numeric effective hamiltonian",
            need: curve.dims(),
            have: psi.space().dims(),
        });
    }
    psi.check_admissible()?;
    let back = curve.word(t)?.inverse().apply(psi)?;
    let plus = curve.word(t + h)?.apply(&back)?;
    let minus = curve.word(t - h)?.apply(&back)?;
    Ok(plus.sub(&minus)?.scaled(Complex64::new(0.0, 0.5 / h)))
}

/// Closed-form effective Hamiltonian of the curve at time t.
pub fn analytic_effective_hamiltonian(
    curve: &FrameCurve,
    t: f64,
    space: &Arc<GridSpace>,
) -> Result<EffectiveHamiltonian> {
    if space.dims() != curve.dims() {
        return Err(Error::DimsMismatch {
            op: "analytic effective hamiltonian",
            need: curve.dims(),
            have: space.dims(),
        });
    }
    let m = space.mass();
    match *curve {
        FrameCurve::LinearAccel { g } => {
            let v = g * t;
            let xc = 0.5 * g * t * t;
            EffectiveHamiltonian::new(
                space.clone(),
                MomentumShift::Constant(vec![-m * v]),
                move |x: &[f64]| -m * g * (x[0] + xc),
                0.0,
            )
        }
        FrameCurve::Circular { omega, radius } => EffectiveHamiltonian::new(
            space.clone(),
            MomentumShift::Angular { omega },
            move |x: &[f64]| {
                -0.5 * m * omega * omega * ((x[0] + radius) * (x[0] + radius) + x[1] * x[1])
            },
            0.0,
        ),
    }
}

/// Minimize over real c the worst relative residual `‖(A−B−c·1)ψ‖/‖ψ‖` over
/// a set of (at least two, linearly independent) probe states.
///
/// Returns `(residual, c_opt)`; c_opt is the constant-offset discrepancy
/// between the two actions, physically an unobservable global phase rate.
pub fn compare_mod_identity<A, B>(a: A, b: B, states: &[StateVector]) -> Result<(f64, f64)>
where
    A: Fn(&StateVector) -> Result<StateVector>,
    B: Fn(&StateVector) -> Result<StateVector>,
{
    if states.len() < 2 {
        return Err(Error::DegenerateStateSet(format!(
            "need at least 2 probe states, got {}",
            states.len()
        )));
    }
    for (i, s) in states.iter().enumerate() {
        for other in states.iter().skip(i + 1) {
            let fid = s.fidelity(other)?;
            if fid > 1.0 - 1e-9 {
                return Err(Error::DegenerateStateSet(format!(
                    "probe states have overlap fidelity {fid}"
                )));
            }
        }
    }
    // Per state: ‖d − cψ‖²/‖ψ‖² is a parabola in c with unit leading
    // coefficient after normalization, so the max over states is piecewise
    // quadratic and its minimizer is either a vertex or a pairwise crossing.
    struct Quad {
        d_sq: f64,
        cross: f64,
        n_sq: f64,
        diff: StateVector,
    }
    let mut quads = Vec::with_capacity(states.len());
    for psi in states {
        let diff = a(psi)?.sub(&b(psi)?)?;
        quads.push(Quad {
            d_sq: diff.norm_sq() / psi.norm_sq(),
            cross: psi.inner(&diff)?.re / psi.norm_sq(),
            n_sq: psi.norm_sq(),
            diff,
        });
    }
    let objective = |c: f64| -> f64 {
        quads
            .iter()
            .map(|q| (q.d_sq - 2.0 * c * q.cross + c * c).max(0.0))
            .fold(0.0, f64::max)
    };
    let mut candidates: Vec<f64> = quads.iter().map(|q| q.cross).collect();
    for (i, qi) in quads.iter().enumerate() {
        for qj in quads.iter().skip(i + 1) {
            let denom = 2.0 * (qi.cross - qj.cross);
            if denom.abs() > 1e-300 {
                candidates.push((qi.d_sq - qj.d_sq) / denom);
            }
        }
    }
    let c_opt = candidates
        .into_iter()
        .filter(|c| c.is_finite())
        .min_by(|a, b| objective(*a).total_cmp(&objective(*b)))
        .unwrap_or(0.0);
    // Evaluate the residual by direct vector arithmetic at the optimum; the
    // quadratic form loses half the digits to cancellation near zero.
    let mut residual = 0.0f64;
    for (psi, q) in states.iter().zip(&quads) {
        let shifted = q.diff.sub(&psi.scaled(Complex64::new(c_opt, 0.0)))?;
        residual = residual.max(shifted.norm() / q.n_sq.sqrt());
    }
    Ok((residual, c_opt))
}
