//! Generator actions on grid states: X, P, free Hamiltonian, boost generator
//! K = mX, and the 2D angular momentum J = X₁P₂ − X₂P₁.
//!
//! Position-type operators multiply by the affine sample values in the
//! position representation; momentum-type operators multiply by the signed
//! FFT-order samples in the momentum representation. Either way the input
//! representation is restored, so compositions read right-to-left like
//! operator products.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::StateVector;

/// Catalog of generator actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// Position (1D).
    X,
    /// First/second position component (2D).
    X1,
    X2,
    /// Momentum (1D).
    P,
    /// First/second momentum component (2D).
    P1,
    P2,
    /// Free Hamiltonian k²/2m, summed over axes in 2D.
    Hfree,
    /// Boost generator K = mX (1D).
    K,
    /// Angular momentum X₁P₂ − X₂P₁ (2D).
    J,
}

impl Op {
    fn required_dims(self) -> usize {
        match self {
            Op::X | Op::P | Op::K => 1,
            Op::X1 | Op::X2 | Op::P1 | Op::P2 | Op::J => 2,
            Op::Hfree => 0, // any
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::X => "X",
            Op::X1 => "X1",
            Op::X2 => "X2",
            Op::P => "P",
            Op::P1 => "P1",
            Op::P2 => "P2",
            Op::Hfree => "Hfree",
            Op::K => "K",
            Op::J => "J",
        }
    }
}

impl StateVector {
    /// Apply a generator action, returning a new state in the input
    /// representation.
    pub fn apply(&self, op: Op) -> Result<StateVector> {
        let dims = self.space().dims();
        let need = op.required_dims();
        if need != 0 && need != dims {
            return Err(Error::DimsMismatch {
                op: op.name(),
                need,
                have: dims,
            });
        }
        let m = self.space().mass();
        let real = |v: f64| Complex64::new(v, 0.0);
        Ok(match op {
            Op::X => self.map_position(|x| real(x[0])),
            Op::X1 => self.map_position(|x| real(x[0])),
            Op::X2 => self.map_position(|x| real(x[1])),
            Op::P => self.map_momentum(|k| real(k[0])),
            Op::P1 => self.map_momentum(|k| real(k[0])),
            Op::P2 => self.map_momentum(|k| real(k[1])),
            Op::Hfree => {
                self.map_momentum(|k| real(k.iter().map(|ki| ki * ki).sum::<f64>() / (2.0 * m)))
            }
            // Scaling the X action keeps K = mX bit-exact.
            Op::K => self.apply(Op::X)?.scaled(real(m)),
            Op::J => {
                let x1p2 = self.apply(Op::P2)?.apply(Op::X1)?;
                let x2p1 = self.apply(Op::P1)?.apply(Op::X2)?;
                x1p2.sub(&x2p1)?
            }
        })
    }

    /// Real expectation value ⟨ψ|Op|ψ⟩ / ⟨ψ|ψ⟩.
    pub fn expectation(&self, op: Op) -> Result<f64> {
        let applied = self.apply(op)?;
        Ok(self.inner(&applied)?.re / self.norm_sq())
    }
}
