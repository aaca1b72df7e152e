//! Dense-matrix oracle for the spectral-grid operators.
//!
//! Everything here is built directly from the defining formulas (DFT matrix
//! with the Riemann-sum normalization, diagonal sample matrices, Kronecker
//! products, Taylor matrix exponential) so it shares no code path with the
//! FFT-based implementation it validates.

#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Clone)]
pub struct Dense {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl Dense {
    pub fn zeros(n: usize) -> Self {
        Dense {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Dense::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Dense::zeros(n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut m = Dense::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn matmul(&self, other: &Dense) -> Dense {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.n, v.len());
        let n = self.n;
        self.data
            .chunks_exact(n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Dense) -> Dense {
        assert_eq!(self.n, other.n);
        Dense {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Dense) -> Dense {
        assert_eq!(self.n, other.n);
        Dense {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Dense {
        Dense {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// exp(self) by scaling and squaring with a Taylor series.
    pub fn expm(&self) -> Dense {
        let norm = self.frobenius();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let scaled = self.scale(Complex64::new((0.5f64).powi(squarings as i32), 0.0));
        let mut result = Dense::identity(self.n);
        let mut term = Dense::identity(self.n);
        for j in 1..=80 {
            term = term
                .matmul(&scaled)
                .scale(Complex64::new(1.0 / j as f64, 0.0));
            result = result.add(&term);
            if term.frobenius() < 1e-22 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.matmul(&result);
        }
        result
    }

    /// Kronecker product; the left factor acts on the major (first) axis of
    /// a row-major flattened 2D array.
    pub fn kron(&self, other: &Dense) -> Dense {
        let (na, nb) = (self.n, other.n);
        let n = na * nb;
        let mut out = Dense::zeros(n);
        for i0 in 0..na {
            for j0 in 0..na {
                let a = self.data[i0 * na + j0];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for i1 in 0..nb {
                    for j1 in 0..nb {
                        out.data[(i0 * nb + i1) * n + (j0 * nb + j1)] =
                            a * other.data[i1 * nb + j1];
                    }
                }
            }
        }
        out
    }
}

/// Dense 1D grid operators built from the defining formulas.
pub struct Oracle1D {
    pub n: usize,
    pub length: f64,
    pub mass: f64,
}

impl Oracle1D {
    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn position_sample(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dx()
    }

    pub fn momentum_sample(&self, j: usize) -> f64 {
        let j = j as isize;
        let n = self.n as isize;
        let signed = if j < n / 2 { j } else { j - n };
        signed as f64 * 2.0 * PI / self.length
    }

    /// Forward transform matrix: W[j,i] = Δx e^{-i k_j x_i}.
    pub fn forward(&self) -> Dense {
        let dx = self.dx();
        Dense::from_fn(self.n, |j, i| {
            Complex64::from_polar(dx, -self.momentum_sample(j) * self.position_sample(i))
        })
    }

    /// Inverse transform matrix: V[i,j] = (Δk/2π) e^{i k_j x_i}.
    pub fn inverse(&self) -> Dense {
        let w = 1.0 / self.length;
        Dense::from_fn(self.n, |i, j| {
            Complex64::from_polar(w, self.momentum_sample(j) * self.position_sample(i))
        })
    }

    pub fn position(&self) -> Dense {
        Dense::diag(
            &(0..self.n)
                .map(|i| Complex64::new(self.position_sample(i), 0.0))
                .collect::<Vec<_>>(),
        )
    }

    fn momentum_diag(&self, f: impl Fn(f64) -> Complex64) -> Dense {
        let diag: Vec<Complex64> = (0..self.n).map(|j| f(self.momentum_sample(j))).collect();
        self.inverse()
            .matmul(&Dense::diag(&diag))
            .matmul(&self.forward())
    }

    pub fn momentum(&self) -> Dense {
        self.momentum_diag(|k| Complex64::new(k, 0.0))
    }

    pub fn hfree(&self) -> Dense {
        let m = self.mass;
        self.momentum_diag(move |k| Complex64::new(k * k / (2.0 * m), 0.0))
    }

    pub fn boost_gen(&self) -> Dense {
        self.position().scale(Complex64::new(self.mass, 0.0))
    }

    pub fn boost(&self, eta: f64) -> Dense {
        let m = self.mass;
        Dense::diag(
            &(0..self.n)
                .map(|i| Complex64::from_polar(1.0, -m * eta * self.position_sample(i)))
                .collect::<Vec<_>>(),
        )
    }

    pub fn translate(&self, zeta: f64) -> Dense {
        self.momentum_diag(|k| Complex64::from_polar(1.0, k * zeta))
    }

    pub fn time_translate(&self, tau: f64) -> Dense {
        let m = self.mass;
        self.momentum_diag(move |k| Complex64::from_polar(1.0, -k * k * tau / (2.0 * m)))
    }

    /// Propagator e^{-iHT} for H = P²/2m + V(X).
    pub fn propagator(&self, potential: impl Fn(f64) -> f64, total_time: f64) -> Dense {
        let v = Dense::diag(
            &(0..self.n)
                .map(|i| Complex64::new(potential(self.position_sample(i)), 0.0))
                .collect::<Vec<_>>(),
        );
        let h = self.hfree().add(&v);
        h.scale(Complex64::new(0.0, -total_time)).expm()
    }
}

/// Dense 2D grid operators assembled by Kronecker products of the 1D oracle.
pub struct Oracle2D {
    pub axis: Oracle1D,
}

impl Oracle2D {
    pub fn new(n: usize, length: f64, mass: f64) -> Self {
        Oracle2D {
            axis: Oracle1D { n, length, mass },
        }
    }

    pub fn dim(&self) -> usize {
        self.axis.n * self.axis.n
    }

    pub fn x1(&self) -> Dense {
        self.axis.position().kron(&Dense::identity(self.axis.n))
    }

    pub fn x2(&self) -> Dense {
        Dense::identity(self.axis.n).kron(&self.axis.position())
    }

    pub fn p1(&self) -> Dense {
        self.axis.momentum().kron(&Dense::identity(self.axis.n))
    }

    pub fn p2(&self) -> Dense {
        Dense::identity(self.axis.n).kron(&self.axis.momentum())
    }

    pub fn hfree(&self) -> Dense {
        let h1 = self.axis.hfree();
        let id = Dense::identity(self.axis.n);
        h1.kron(&id).add(&id.kron(&h1))
    }

    pub fn angular_momentum(&self) -> Dense {
        self.x1()
            .matmul(&self.p2())
            .sub(&self.x2().matmul(&self.p1()))
    }

    /// Propagator e^{-iHT} for the rotating-frame Hamiltonian
    /// H = Hfree − ωJ + V(X₁,X₂).
    pub fn rotating_propagator(
        &self,
        omega: f64,
        potential: impl Fn(f64, f64) -> f64,
        total_time: f64,
    ) -> Dense {
        let n = self.axis.n;
        let dim = self.dim();
        let mut v = Dense::zeros(dim);
        for i0 in 0..n {
            for i1 in 0..n {
                let idx = i0 * n + i1;
                v.data[idx * dim + idx] = Complex64::new(
                    potential(self.axis.position_sample(i0), self.axis.position_sample(i1)),
                    0.0,
                );
            }
        }
        let h = self
            .hfree()
            .sub(&self.angular_momentum().scale(Complex64::new(omega, 0.0)))
            .add(&v);
        h.scale(Complex64::new(0.0, -total_time)).expm()
    }
}

/// Max elementwise deviation between a state's amplitudes and a raw vector.
pub fn max_amp_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Weighted L² distance between amplitude vectors (position rep).
pub fn l2_dev(a: &[Complex64], b: &[Complex64], weight: f64) -> f64 {
    (a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        * weight)
        .sqrt()
}
