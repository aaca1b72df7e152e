//! The flat connection along the 1D Galilean frame coordinates, evaluated on
//! states.
//!
//! In the constant-section basis the connection is pure gauge, ω = U dU⁻¹,
//! with closed-form components
//!
//! ```text
//! ω_t = -iH,   ω_x = +iP,   ω_v = i m (X(t) - x·1),   X(t) = U_t† X U_t
//! ```
//!
//! Both routes are implemented: [`numeric_connection`] differentiates the
//! transport word by central differences in the frame coordinate, and
//! [`analytic_connection`] evaluates the closed form. Their agreement and the
//! vanishing of the curvature pairs are the content of the flatness checks;
//! pairwise the zero-curvature conditions are the Heisenberg equations for P
//! and X and the canonical commutation relation.
//!
//! Coordinate derivatives of operator-valued quantities are always taken on
//! states, never as dense matrices; the dense oracle used in the test suite
//! validates the state-level implementation at small N.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::galilei::{time_translate, FrameCoord, GroupWord};
use crate::grid::StateVector;
use crate::operators::Op;

/// Frame-coordinate direction for the 1D chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    T,
    X,
    V,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::T, Direction::X, Direction::V];

    pub fn name(self) -> &'static str {
        match self {
            Direction::T => "t",
            Direction::X => "x",
            Direction::V => "v",
        }
    }
}

/// Unordered pair of directions labelling one curvature component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionPair {
    TX,
    TV,
    XV,
}

impl DirectionPair {
    pub const ALL: [DirectionPair; 3] = [DirectionPair::TX, DirectionPair::TV, DirectionPair::XV];

    pub fn directions(self) -> (Direction, Direction) {
        match self {
            DirectionPair::TX => (Direction::T, Direction::X),
            DirectionPair::TV => (Direction::T, Direction::V),
            DirectionPair::XV => (Direction::X, Direction::V),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DirectionPair::TX => "(t,x)",
            DirectionPair::TV => "(t,v)",
            DirectionPair::XV => "(x,v)",
        }
    }
}

/// Position operator conjugated to time t: `ψ ↦ U_t† X U_t ψ`.
///
/// The conjugated form is the primary implementation; the free-particle
/// closed form `X + (t/m) P` serves as its oracle in tests.
#[derive(Debug, Clone, Copy)]
pub struct HeisenbergPosition {
    pub t: f64,
}

impl HeisenbergPosition {
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        let forward = time_translate(psi, self.t);
        let acted = forward.apply(Op::X)?;
        Ok(time_translate(&acted, -self.t))
    }
}

/// One closed-form connection component; `apply` evaluates it on a state at
/// a frame coordinate.
#[derive(Debug, Clone, Copy)]
pub struct ConnectionComponent {
    pub direction: Direction,
}

impl ConnectionComponent {
    pub fn apply(&self, coord: &FrameCoord, psi: &StateVector) -> Result<StateVector> {
        let (t, x) = line_coords(coord)?;
        let i = Complex64::new(0.0, 1.0);
        match self.direction {
            Direction::T => Ok(psi.apply(Op::Hfree)?.scaled(-i)),
            Direction::X => Ok(psi.apply(Op::P)?.scaled(i)),
            Direction::V => {
                let m = psi.space().mass();
                let heisenberg = HeisenbergPosition { t }.apply(psi)?;
                let shifted = heisenberg.sub(&psi.scaled(Complex64::new(x, 0.0)))?;
                Ok(shifted.scaled(i * m))
            }
        }
    }
}

/// Closed-form connection component in direction `direction`.
pub fn analytic_connection(direction: Direction) -> ConnectionComponent {
    ConnectionComponent { direction }
}

fn line_coords(coord: &FrameCoord) -> Result<(f64, f64)> {
    match *coord {
        FrameCoord::Line { t, x, .. } => Ok((t, x)),
        FrameCoord::Rotating { .. } => Err(Error::InvalidParameter(
            "the 1D connection needs a Line frame coordinate".into(),
        )),
    }
}

fn displace(coord: &FrameCoord, direction: Direction, delta: f64) -> Result<FrameCoord> {
    match *coord {
        FrameCoord::Line { t, x, v } => Ok(match direction {
            Direction::T => FrameCoord::Line { t: t + delta, x, v },
            Direction::X => FrameCoord::Line { t, x: x + delta, v },
            Direction::V => FrameCoord::Line { t, x, v: v + delta },
        }),
        FrameCoord::Rotating { .. } => Err(Error::InvalidParameter(
            "the 1D connection needs a Line frame coordinate".into(),
        )),
    }
}

/// Numeric connection component `U(z) ∂_μ[U(z)⁻¹] ψ` by central differences
/// with coordinate step `h`; O(h²) accurate.
pub fn numeric_connection(
    direction: Direction,
    coord: &FrameCoord,
    psi: &StateVector,
    h: f64,
) -> Result<StateVector> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "coordinate step must be positive, got {h}"
        )));
    }
    psi.check_admissible()?;
    connection_action(direction, coord, psi, h)
}

fn connection_action(
    direction: Direction,
    coord: &FrameCoord,
    psi: &StateVector,
    h: f64,
) -> Result<StateVector> {
    let word = GroupWord::for_frame(coord)?;
    let plus = GroupWord::for_frame(&displace(coord, direction, h)?)?;
    let minus = GroupWord::for_frame(&displace(coord, direction, -h)?)?;
    let from_plus = plus.inverse().apply(psi)?;
    let from_minus = minus.inverse().apply(psi)?;
    let derivative = from_plus
        .sub(&from_minus)?
        .scaled(Complex64::new(0.5 / h, 0.0));
    word.apply(&derivative)
}

/// Evaluation route for the connection components inside the curvature
/// residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionEval {
    /// Closed-form components (coordinate derivatives still by central
    /// differences; exact on these coordinate-affine components).
    Analytic,
    /// Transport-word components `U ∂(U⁻¹)`, making the whole residual a
    /// genuine O(h²) quantity.
    Numeric,
}

/// Curvature residual `Ω_{μν} ψ = (∂_μ ω_ν − ∂_ν ω_μ + [ω_μ, ω_ν]) ψ` with
/// finite-difference coordinate derivatives of step `h`.
///
/// Flatness pair by pair encodes the Heisenberg equation for P (t,x), the
/// Heisenberg equation for X (t,v), and the canonical commutation relation
/// (x,v).
pub fn curvature_residual(
    pair: DirectionPair,
    coord: &FrameCoord,
    psi: &StateVector,
    h: f64,
    eval: ConnectionEval,
) -> Result<StateVector> {
    psi.check_admissible()?;
    let (mu, nu) = pair.directions();
    let omega = |dir: Direction, at: &FrameCoord, state: &StateVector| -> Result<StateVector> {
        match eval {
            ConnectionEval::Analytic => analytic_connection(dir).apply(at, state),
            ConnectionEval::Numeric => connection_action(dir, at, state, h),
        }
    };
    let fd = |d_of: Direction, comp: Direction| -> Result<StateVector> {
        let plus = omega(comp, &displace(coord, d_of, h)?, psi)?;
        let minus = omega(comp, &displace(coord, d_of, -h)?, psi)?;
        Ok(plus.sub(&minus)?.scaled(Complex64::new(0.5 / h, 0.0)))
    };
    let d_mu_nu = fd(mu, nu)?;
    let d_nu_mu = fd(nu, mu)?;
    let w_nu_psi = omega(nu, coord, psi)?;
    let w_mu_psi = omega(mu, coord, psi)?;
    let comm = omega(mu, coord, &w_nu_psi)?.sub(&omega(nu, coord, &w_mu_psi)?)?;
    d_mu_nu.sub(&d_nu_mu)?.add(&comm)
}

/// Expectation of the canonical commutator, `⟨ψ|(XP − PX)|ψ⟩`.
///
/// Equals `i` to quadrature accuracy on admissible states; near-boundary
/// states (built with the unchecked constructor) show the periodic-wrap
/// deviation this catalogue's support preconditions exist to exclude.
pub fn ccr_expectation(psi: &StateVector) -> Result<Complex64> {
    let xp = psi.apply(Op::P)?.apply(Op::X)?;
    let px = psi.apply(Op::X)?.apply(Op::P)?;
    let comm = xp.sub(&px)?;
    Ok(psi.inner(&comm)? / Complex64::new(psi.norm_sq(), 0.0))
}
