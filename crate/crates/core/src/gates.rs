//! Dense gate matrices for one and two qubits.
//!
//! Two-qubit matrices are indexed with the *first* wire as the high bit:
//! row/column `r` of a 4x4 matrix addresses the basis state where the first
//! wire holds bit `r >> 1` and the second wire holds bit `r & 1`.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type C64 = Complex64;

/// A dense unitary on one or two qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    arity: usize,
    data: Vec<C64>,
}

impl GateMatrix {
    pub fn from_rows(arity: usize, rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = 1usize << arity;
        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: rows.len(),
            });
        }
        Ok(Self {
            arity,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(arity: usize) -> Self {
        let dim = 1usize << arity;
        let mut data = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = C64::new(1.0, 0.0);
        }
        Self { arity, data }
    }

    pub fn zeros(arity: usize) -> Self {
        let dim = 1usize << arity;
        Self {
            arity,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        let dim = self.dim();
        self.data[row * dim + col] = value;
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &GateMatrix) -> GateMatrix {
        assert_eq!(self.arity, other.arity, "arity mismatch in matmul");
        let dim = self.dim();
        let mut out = GateMatrix::zeros(self.arity);
        for i in 0..dim {
            for k in 0..dim {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> GateMatrix {
        let dim = self.dim();
        let mut out = GateMatrix::zeros(self.arity);
        for i in 0..dim {
            for j in 0..dim {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn scale(&self, factor: C64) -> GateMatrix {
        GateMatrix {
            arity: self.arity,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entry of `U U† - I`.
    pub fn unitarity_residual(&self) -> f64 {
        self.matmul(&self.dagger())
            .max_abs_diff(&GateMatrix::identity(self.arity))
    }

    pub fn check_unitary(&self, tolerance: f64) -> Result<()> {
        let residual = self.unitarity_residual();
        if residual > tolerance {
            return Err(Error::NonUnitary { residual });
        }
        Ok(())
    }

    /// Kronecker product with the first factor on the first wire (high bit).
    pub fn kron(&self, other: &GateMatrix) -> GateMatrix {
        let (da, db) = (self.dim(), other.dim());
        let arity = self.arity + other.arity;
        let mut out = GateMatrix::zeros(arity);
        for ia in 0..da {
            for ja in 0..da {
                for ib in 0..db {
                    for jb in 0..db {
                        out.set(ia * db + ib, ja * db + jb, self.get(ia, ja) * other.get(ib, jb));
                    }
                }
            }
        }
        out
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> GateMatrix {
    GateMatrix::from_rows(1, vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap()
}

pub fn pauli_y() -> GateMatrix {
    GateMatrix::from_rows(1, vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap()
}

pub fn pauli_z() -> GateMatrix {
    GateMatrix::from_rows(1, vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]]).unwrap()
}

pub fn hadamard() -> GateMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    GateMatrix::from_rows(1, vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]).unwrap()
}

/// `S† = diag(1, -i)`, used to rotate a Pauli-Y measurement into the Z basis.
pub fn s_dagger() -> GateMatrix {
    GateMatrix::from_rows(1, vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, -1.0)]]).unwrap()
}

/// `Rx(t) = exp(-i t X / 2)`.
pub fn rx(t: f64) -> GateMatrix {
    let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
    GateMatrix::from_rows(1, vec![vec![c(ch, 0.0), c(0.0, -sh)], vec![c(0.0, -sh), c(ch, 0.0)]]).unwrap()
}

/// `Ry(t) = exp(-i t Y / 2)`.
pub fn ry(t: f64) -> GateMatrix {
    let (ch, sh) = ((t / 2.0).cos(), (t / 2.0).sin());
    GateMatrix::from_rows(1, vec![vec![c(ch, 0.0), c(-sh, 0.0)], vec![c(sh, 0.0), c(ch, 0.0)]]).unwrap()
}

/// `Rz(t) = exp(-i t Z / 2) = diag(e^{-it/2}, e^{it/2})`.
pub fn rz(t: f64) -> GateMatrix {
    GateMatrix::from_rows(
        1,
        vec![
            vec![C64::from_polar(1.0, -t / 2.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), C64::from_polar(1.0, t / 2.0)],
        ],
    )
    .unwrap()
}

/// `P(phi) = diag(1, e^{i phi})`.
pub fn phase(phi: f64) -> GateMatrix {
    GateMatrix::from_rows(
        1,
        vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), C64::from_polar(1.0, phi)],
        ],
    )
    .unwrap()
}

/// CNOT with the first wire as control and the second as target.
pub fn cnot() -> GateMatrix {
    let mut m = GateMatrix::zeros(2);
    m.set(0, 0, c(1.0, 0.0));
    m.set(1, 1, c(1.0, 0.0));
    m.set(2, 3, c(1.0, 0.0));
    m.set(3, 2, c(1.0, 0.0));
    m
}

/// SWAP of the two wires.
pub fn swap() -> GateMatrix {
    let mut m = GateMatrix::zeros(2);
    m.set(0, 0, c(1.0, 0.0));
    m.set(1, 2, c(1.0, 0.0));
    m.set(2, 1, c(1.0, 0.0));
    m.set(3, 3, c(1.0, 0.0));
    m
}

/// Controlled version of a one-qubit gate, control on the first wire.
pub fn controlled(u: &GateMatrix) -> GateMatrix {
    assert_eq!(u.arity(), 1, "controlled() expects a one-qubit gate");
    let mut m = GateMatrix::identity(2);
    for i in 0..2 {
        for j in 0..2 {
            m.set(2 + i, 2 + j, u.get(i, j));
        }
    }
    m
}
