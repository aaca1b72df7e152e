//! Exact unitary actions of the Galilean transformations on grid states.
//!
//! The primitives are pure phase multiplications in one representation or the
//! other, so each is unitary to machine precision:
//!
//! * time translation  `U_τ = e^{-iHτ}` — momentum-rep phase `e^{-ik²τ/2m}`;
//! * space translation `U_ζ = e^{iPζ}` — momentum-rep phase `e^{ikζ}`
//!   (shifts ⟨X⟩ by −ζ);
//! * boost `U_η = e^{-iKη}` — position-rep phase `e^{-imηx}` (shifts ⟨P⟩ by
//!   −mη for arbitrary real η, no lattice restriction);
//! * rotation — three-shear spectral decomposition, each shear a pure phase
//!   multiply in a mixed representation.
//!
//! Group-law checks compare states by fidelity, not amplitude equality: the
//! representation is projective and compositions pick up central phases (the
//! Weyl phase test below measures exactly that).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Rep, StateVector, ADMISSIBLE_TAIL};

/// Time translation `U_τ = e^{-iHτ}`.
pub fn time_translate(psi: &StateVector, tau: f64) -> StateVector {
    let m = psi.space().mass();
    psi.map_momentum(|k| {
        let ksq: f64 = k.iter().map(|ki| ki * ki).sum();
        Complex64::from_polar(1.0, -ksq * tau / (2.0 * m))
    })
}

/// Space translation `U_ζ = e^{iP·ζ}`; one component per axis.
pub fn space_translate(psi: &StateVector, zeta: &[f64]) -> Result<StateVector> {
    if zeta.len() != psi.space().dims() {
        return Err(Error::InvalidParameter(format!(
            "translation needs {} components, got {}",
            psi.space().dims(),
            zeta.len()
        )));
    }
    Ok(psi.map_momentum(|k| {
        let dot: f64 = k.iter().zip(zeta).map(|(ki, zi)| ki * zi).sum();
        Complex64::from_polar(1.0, dot)
    }))
}

/// Boost `U_η = e^{-iK·η}` with K = mX per axis.
///
/// Rejects states whose shifted momentum support would reach the edge of the
/// momentum extent.
pub fn boost(psi: &StateVector, eta: &[f64]) -> Result<StateVector> {
    if eta.len() != psi.space().dims() {
        return Err(Error::InvalidParameter(format!(
            "boost needs {} components, got {}",
            psi.space().dims(),
            eta.len()
        )));
    }
    let m = psi.space().mass();
    let boosted = psi.map_position(|x| {
        let dot: f64 = x.iter().zip(eta).map(|(xi, ei)| xi * ei).sum();
        Complex64::from_polar(1.0, -m * dot)
    });
    let tail = boosted.momentum_tail_mass();
    if tail > ADMISSIBLE_TAIL {
        return Err(Error::SupportViolation(format!(
            "boosted momentum tail mass {tail:.3e} exceeds {ADMISSIBLE_TAIL:.0e}"
        )));
    }
    Ok(boosted)
}

/// Fraction of the grid half-extent that packet support may occupy so the
/// shear intermediates of a rotation stay clear of the periodic seam (each
/// sub-rotation stage stretches radii by at most ~1.23).
const ROTATE_DISK_FRACTION: f64 = 0.8;

/// Rotate the wavefunction counterclockwise by `theta` about the origin
/// (2D only): `ψ'(r) = ψ(R(-θ) r)`, spectrally interpolated.
///
/// Implemented as composed sub-rotations of at most π/4, each factored into
/// three shears applied as pure phase multiplies along one axis, so the whole
/// map is unitary to machine precision.
pub fn rotate(psi: &StateVector, theta: f64) -> Result<StateVector> {
    if psi.space().dims() != 2 {
        return Err(Error::DimsMismatch {
            op: "rotate",
            need: 2,
            have: psi.space().dims(),
        });
    }
    let outside = disk_tail_mass(psi, ROTATE_DISK_FRACTION * 0.5 * psi.space().extent());
    if outside > ADMISSIBLE_TAIL {
        return Err(Error::SupportViolation(format!(
            "mass {outside:.3e} outside the rotation-safe disk exceeds {ADMISSIBLE_TAIL:.0e}"
        )));
    }
    // A full turn is the identity; work with the wrapped angle.
    let wrapped = theta.rem_euclid(2.0 * PI);
    let reduced = if wrapped > PI {
        wrapped - 2.0 * PI
    } else {
        wrapped
    };
    if reduced == 0.0 {
        return Ok(psi.clone());
    }
    let n_sub = (reduced.abs() / (PI / 4.0)).ceil().max(1.0) as usize;
    let alpha = reduced / n_sub as f64;
    let a = (alpha / 2.0).tan();
    let b = -alpha.sin();
    let space = psi.space().clone();
    let pos = |t: usize| space.position(t);
    let mut state = psi.clone();
    for _ in 0..n_sub {
        state = state.sheared(0, |t| a * pos(t));
        state = state.sheared(1, |t| b * pos(t));
        state = state.sheared(0, |t| a * pos(t));
    }
    Ok(state)
}

/// Probability mass at radius ≥ `radius` from the grid origin.
fn disk_tail_mass(psi: &StateVector, radius: f64) -> f64 {
    let state = psi.to_rep(Rep::Position);
    let space = state.space();
    let mut tail = 0.0;
    let mut total = 0.0;
    for (flat, amp) in state.amplitudes().iter().enumerate() {
        let idx = space.axis_indices(flat);
        let x = space.position(idx[0]);
        let y = space.position(idx[1]);
        let p = amp.norm_sqr();
        total += p;
        if x * x + y * y >= radius * radius {
            tail += p;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// Coordinates on the base manifold of frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameCoord {
    /// 1D Galilean chart: time, position offset, velocity offset.
    Line { t: f64, x: f64, v: f64 },
    /// Rotating chart: time, radius, angle, tangential speed.
    Rotating {
        t: f64,
        radius: f64,
        theta: f64,
        speed: f64,
    },
}

impl FrameCoord {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            FrameCoord::Line { t, x, v } => t.is_finite() && x.is_finite() && v.is_finite(),
            FrameCoord::Rotating {
                t,
                radius,
                theta,
                speed,
            } => {
                t.is_finite()
                    && radius.is_finite()
                    && radius >= 0.0
                    && theta.is_finite()
                    && speed.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "frame coordinate {self:?} is not finite (or has negative radius)"
            )))
        }
    }
}

/// One primitive group factor. `Rotate(θ)` is the generator exponential
/// `e^{iJθ}` (which carries packets clockwise; see [`rotate`] for the
/// counterclockwise coordinate rotation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    TimeTranslate(f64),
    SpaceTranslate { zeta: f64, axis: usize },
    Boost { eta: f64, axis: usize },
    Rotate(f64),
}

impl Factor {
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        let dims = psi.space().dims();
        match *self {
            Factor::TimeTranslate(tau) => Ok(time_translate(psi, tau)),
            Factor::SpaceTranslate { zeta, axis } => {
                let mut z = vec![0.0; dims];
                z[axis] = zeta;
                space_translate(psi, &z)
            }
            Factor::Boost { eta, axis } => {
                let mut e = vec![0.0; dims];
                e[axis] = eta;
                boost(psi, &e)
            }
            Factor::Rotate(theta) => rotate(psi, -theta),
        }
    }

    pub fn inverse(&self) -> Factor {
        match *self {
            Factor::TimeTranslate(tau) => Factor::TimeTranslate(-tau),
            Factor::SpaceTranslate { zeta, axis } => Factor::SpaceTranslate { zeta: -zeta, axis },
            Factor::Boost { eta, axis } => Factor::Boost { eta: -eta, axis },
            Factor::Rotate(theta) => Factor::Rotate(-theta),
        }
    }
}

/// Ordered product of primitive factors; the leftmost factor acts last, as in
/// operator products.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupWord {
    factors: Vec<Factor>,
}

impl GroupWord {
    pub fn new(factors: Vec<Factor>) -> Self {
        GroupWord { factors }
    }

    pub fn identity() -> Self {
        GroupWord {
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Formal inverse: reversed list with negated parameters.
    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            factors: self.factors.iter().rev().map(Factor::inverse).collect(),
        }
    }

    /// Apply the word to a state, rightmost factor first.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        let mut state = psi.clone();
        for factor in self.factors.iter().rev() {
            state = factor.apply(&state)?;
        }
        Ok(state)
    }

    /// Parallel-transport word for a frame coordinate.
    ///
    /// Line chart: `U(t,x,v) = U_{-t} U_{-x} U_{+v}`. The translation and
    /// time parameters are negated as in the passive convention; the boost
    /// parameter is taken positive, which is the orientation that makes
    /// `U dU⁻¹` come out as `i(-H dt + P dx + (X(t) - x) m dv)` in the
    /// constant-section basis.
    ///
    /// Rotating chart: `U = U_v U_θ U_r U_t` with the boost along the second
    /// axis and the translation along the current radius vector.
    pub fn for_frame(coord: &FrameCoord) -> Result<GroupWord> {
        coord.validate()?;
        Ok(match *coord {
            FrameCoord::Line { t, x, v } => GroupWord::new(vec![
                Factor::TimeTranslate(-t),
                Factor::SpaceTranslate { zeta: -x, axis: 0 },
                Factor::Boost { eta: v, axis: 0 },
            ]),
            FrameCoord::Rotating {
                t,
                radius,
                theta,
                speed,
            } => GroupWord::new(vec![
                Factor::Boost {
                    eta: speed,
                    axis: 1,
                },
                Factor::Rotate(theta),
                Factor::SpaceTranslate {
                    zeta: radius * theta.cos(),
                    axis: 0,
                },
                Factor::SpaceTranslate {
                    zeta: radius * theta.sin(),
                    axis: 1,
                },
                Factor::TimeTranslate(t),
            ]),
        })
    }
}

/// Apply a transport word to a state (rightmost factor first).
pub fn transport(psi: &StateVector, word: &GroupWord) -> Result<StateVector> {
    word.apply(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpace;
    use crate::operators::Op;
    use std::sync::Arc;

    fn grid_1d() -> Arc<GridSpace> {
        GridSpace::new(1, 256, 40.0, 1.0).unwrap()
    }

    fn grid_2d() -> Arc<GridSpace> {
        GridSpace::new(2, 128, 20.0, 1.0).unwrap()
    }

    fn max_amp_dev(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn zero_parameters_are_identities() {
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[0.5], &[1.0], 1.0).unwrap();
        assert!(max_amp_dev(&time_translate(&psi, 0.0), &psi) <= 1e-14);
        assert!(max_amp_dev(&space_translate(&psi, &[0.0]).unwrap(), &psi) <= 1e-14);
        assert!(max_amp_dev(&boost(&psi, &[0.0]).unwrap(), &psi) <= 1e-14);

        let g2 = grid_2d();
        let psi2 = StateVector::gaussian(&g2, &[1.0, 0.0], &[0.0, 0.5], 1.0).unwrap();
        assert!(max_amp_dev(&rotate(&psi2, 0.0).unwrap(), &psi2) <= 1e-14);
    }

    #[test]
    fn primitives_are_unitary() {
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[1.0], &[2.0], 1.0).unwrap();
        for state in [
            time_translate(&psi, 0.37),
            space_translate(&psi, &[1.3]).unwrap(),
            boost(&psi, &[0.7]).unwrap(),
        ] {
            assert!((state.norm() - 1.0).abs() <= 1e-12);
        }
        let g2 = grid_2d();
        let psi2 = StateVector::gaussian(&g2, &[1.5, 0.0], &[0.0, 1.0], 1.0).unwrap();
        let rot = rotate(&psi2, 1.1).unwrap();
        assert!((rot.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn plane_wave_picks_up_free_phase() {
        let g = grid_1d();
        let k0 = 8.0 * g.momentum_spacing();
        let psi = StateVector::plane_wave(&g, &[k0]).unwrap();
        let tau = 0.8;
        let moved = time_translate(&psi, tau);
        let expect = psi.scaled(Complex64::from_polar(1.0, -k0 * k0 * tau / 2.0));
        assert!(max_amp_dev(&moved, &expect) <= 1e-12);
    }

    #[test]
    fn free_spreading_matches_analytic_variance() {
        // Var_x(t) = σ²/2 + t²/(2σ²m²) for an initially unchirped Gaussian.
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[0.0], &[0.0], 1.0).unwrap();
        let moved = time_translate(&psi, 1.0);
        let x = moved.expectation(Op::X).unwrap();
        let xx = moved
            .inner(&moved.apply(Op::X).unwrap().apply(Op::X).unwrap())
            .unwrap()
            .re;
        let var = xx - x * x;
        assert!((var - 1.0).abs() <= 1e-6, "spread variance {var}");
    }

    #[test]
    fn space_translation_shifts_centroid_backwards() {
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[0.0], &[0.0], 1.0).unwrap();
        let moved = space_translate(&psi, &[1.0]).unwrap();
        let x = moved.expectation(Op::X).unwrap();
        assert!((x + 1.0).abs() <= 1e-8, "⟨X⟩ after U_1 is {x}");
        assert!((moved.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn boost_shifts_momentum_exactly() {
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[0.0], &[2.0], 1.0).unwrap();
        let eta = 0.5;
        let kicked = boost(&psi, &[eta]).unwrap();
        let p = kicked.expectation(Op::P).unwrap();
        assert!((p - 1.5).abs() <= 1e-10, "⟨P⟩ after boost is {p}");
        // Position distribution untouched by the pure phase.
        let x0 = psi.expectation(Op::X).unwrap();
        let x1 = kicked.expectation(Op::X).unwrap();
        assert!((x0 - x1).abs() <= 1e-10);
    }

    #[test]
    fn boost_composition_up_to_phase() {
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[0.0], &[1.0], 1.0).unwrap();
        let two_step = boost(&boost(&psi, &[0.4]).unwrap(), &[0.35]).unwrap();
        let one_step = boost(&psi, &[0.75]).unwrap();
        let fid = two_step.fidelity(&one_step).unwrap();
        assert!(fid >= 1.0 - 1e-12, "boost composition fidelity {fid}");
    }

    #[test]
    fn boost_rejects_momentum_overflow() {
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[0.0], &[15.0], 1.0).unwrap();
        // Half momentum extent is π·256/40 ≈ 20.1; a large kick pushes the
        // packet support across it.
        assert!(matches!(
            boost(&psi, &[-6.0]),
            Err(Error::SupportViolation(_))
        ));
    }

    #[test]
    fn weyl_phase_measures_central_charge() {
        // U_ζ U_η = e^{imηζ} U_η U_ζ on states, measured as the phase of the
        // overlap between the two composition orders.
        let g = GridSpace::new(1, 256, 40.0, 1.3).unwrap();
        let psi = StateVector::gaussian(&g, &[0.0], &[0.5], 1.0).unwrap();
        let (zeta, eta) = (0.9, 0.6);
        let translate_then_boost = boost(&space_translate(&psi, &[zeta]).unwrap(), &[eta]).unwrap();
        let boost_then_translate = space_translate(&boost(&psi, &[eta]).unwrap(), &[zeta]).unwrap();
        let overlap = boost_then_translate.inner(&translate_then_boost).unwrap();
        assert!((overlap.norm() - 1.0).abs() <= 1e-12);
        let expected = Complex64::from_polar(1.0, 1.3 * eta * zeta);
        assert!(
            (overlap - expected).norm() <= 1e-10,
            "weyl phase {} vs {}",
            overlap.arg(),
            1.3 * eta * zeta
        );
    }

    #[test]
    fn full_turn_is_identity() {
        let g = grid_2d();
        let psi = StateVector::gaussian(&g, &[2.0, 0.0], &[0.0, 1.0], 1.0).unwrap();
        let turned = rotate(&psi, 2.0 * PI).unwrap();
        let fid = turned.fidelity(&psi).unwrap();
        assert!(fid >= 1.0 - 1e-8, "2π rotation fidelity {fid}");
    }

    #[test]
    fn quarter_turn_moves_packet_counterclockwise() {
        let g = grid_2d();
        let x0 = 2.0;
        let psi = StateVector::gaussian(&g, &[x0, 0.0], &[0.0, 0.0], 1.0).unwrap();
        let turned = rotate(&psi, PI / 2.0).unwrap();
        let c1 = turned.expectation(Op::X1).unwrap();
        let c2 = turned.expectation(Op::X2).unwrap();
        assert!(c1.abs() <= 1e-6, "⟨X1⟩ = {c1}");
        assert!((c2 - x0).abs() <= 1e-6, "⟨X2⟩ = {c2}");
    }

    #[test]
    fn rotation_matches_coordinate_rotated_gaussian() {
        let g = grid_2d();
        let (x0, k0, theta) = (1.5, 1.0, 0.7);
        let psi = StateVector::gaussian(&g, &[x0, 0.0], &[0.0, k0], 1.0).unwrap();
        let turned = rotate(&psi, theta).unwrap();
        let target = StateVector::gaussian(
            &g,
            &[x0 * theta.cos(), x0 * theta.sin()],
            &[-k0 * theta.sin(), k0 * theta.cos()],
            1.0,
        )
        .unwrap();
        let diff = turned.sub(&target).unwrap().norm();
        assert!(diff <= 1e-6, "norm difference {diff:.3e}");
        let j_before = psi.expectation(Op::J).unwrap();
        let j_after = turned.expectation(Op::J).unwrap();
        assert!((j_before - j_after).abs() <= 1e-8);
    }

    #[test]
    fn rotate_rejects_dims_and_support() {
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[0.0], &[0.0], 1.0).unwrap();
        assert!(matches!(
            rotate(&psi, 0.3),
            Err(Error::DimsMismatch { op: "rotate", .. })
        ));
        let g2 = grid_2d();
        let far = StateVector::gaussian_unchecked(&g2, &[8.5, 0.0], &[0.0, 0.0], 1.0).unwrap();
        assert!(matches!(rotate(&far, 0.3), Err(Error::SupportViolation(_))));
    }

    #[test]
    fn empty_word_is_identity() {
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[0.0], &[1.0], 1.0).unwrap();
        let out = GroupWord::identity().apply(&psi).unwrap();
        assert!(max_amp_dev(&out, &psi) == 0.0);
    }

    #[test]
    fn word_times_inverse_is_identity_up_to_phase() {
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[0.0], &[0.5], 1.0).unwrap();
        let word = GroupWord::for_frame(&FrameCoord::Line {
            t: 0.6,
            x: 0.8,
            v: 0.4,
        })
        .unwrap();
        let there = word.apply(&psi).unwrap();
        let back = word.inverse().apply(&there).unwrap();
        let fid = back.fidelity(&psi).unwrap();
        assert!(fid >= 1.0 - 1e-10, "inverse word fidelity {fid}");
    }

    #[test]
    fn time_translations_compose_exactly() {
        // The abelian subgroup obeys U(z,y) U(y,x) = U(z,x) with no
        // projective phase.
        let g = grid_1d();
        let psi = StateVector::gaussian(&g, &[0.0], &[1.0], 1.0).unwrap();
        let step = time_translate(&time_translate(&psi, 0.3), 0.5);
        let once = time_translate(&psi, 0.8);
        let fid = step.fidelity(&once).unwrap();
        assert!(fid >= 1.0 - 1e-12);
        assert!(max_amp_dev(&step, &once) <= 1e-12);
    }

    #[test]
    fn rotating_frame_word_applies() {
        let g = grid_2d();
        let psi = StateVector::gaussian(&g, &[0.0, 0.0], &[0.0, 0.0], 1.0).unwrap();
        let word = GroupWord::for_frame(&FrameCoord::Rotating {
            t: 0.2,
            radius: 2.0,
            theta: 0.1,
            speed: 1.0,
        })
        .unwrap();
        let moved = word.apply(&psi).unwrap();
        assert!((moved.norm() - 1.0).abs() <= 1e-12);
        let back = word.inverse().apply(&moved).unwrap();
        assert!(back.fidelity(&psi).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn invalid_frame_coord_is_rejected() {
        assert!(GroupWord::for_frame(&FrameCoord::Rotating {
            t: 0.0,
            radius: -1.0,
            theta: 0.0,
            speed: 0.0,
        })
        .is_err());
        assert!(GroupWord::for_frame(&FrameCoord::Line {
            t: f64::NAN,
            x: 0.0,
            v: 0.0,
        })
        .is_err());
    }
}
