//! Spin-chain Hamiltonians and exact diagonalization.
//!
//! All chains are open-boundary. The XXZ family conserves total particle
//! number (Hamming weight of the basis index), which is what makes the
//! particle-conserving circuit ansatz appropriate for it.

use crate::error::{Error, Result};
use crate::fock;
use crate::gates::C64;
use crate::pauli::{PauliOp, PauliString};
use crate::tol;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest chain accepted by the diagonalization routines.
pub const MAX_SITES: usize = 16;
/// Largest chain diagonalized densely; larger systems use the iterative path.
pub const DENSE_SITES: usize = 10;

/// A Hamiltonian given as a sum of Pauli strings.
#[derive(Debug, Clone)]
pub struct PauliHamiltonian {
    num_qubits: usize,
    terms: Vec<PauliString>,
}

impl PauliHamiltonian {
    pub fn new(num_qubits: usize, terms: Vec<PauliString>) -> Result<Self> {
        for t in &terms {
            if let Some(q) = t.max_qubit() {
                if q >= num_qubits {
                    return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
                }
            }
        }
        Ok(Self { num_qubits, terms })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    /// Matrix-vector product `H v` over the full `2^L` space.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        for term in &self.terms {
            term.accumulate_apply(v, &mut out);
        }
        out
    }

    /// Dense `2^L x 2^L` matrix.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.num_qubits;
        let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        let mut basis = vec![C64::new(0.0, 0.0); dim];
        for col in 0..dim {
            basis[col] = C64::new(1.0, 0.0);
            let image = self.apply(&basis);
            for row in 0..dim {
                m[(row, col)] = image[row];
            }
            basis[col] = C64::new(0.0, 0.0);
        }
        m
    }
}

fn two_site(coefficient: f64, i: usize, j: usize, op: PauliOp) -> PauliString {
    PauliString::new(coefficient, vec![(i, op), (j, op)]).expect("distinct sites")
}

/// Open-boundary XXZ chain
/// `H = sum_i X_i X_{i+1} + Y_i Y_{i+1} + gamma Z_i Z_{i+1}`.
pub fn xxz_hamiltonian(l: usize, gamma: f64) -> Result<PauliHamiltonian> {
    if l < 2 {
        return Err(Error::InvalidArgument("XXZ chain needs at least two sites".into()));
    }
    let mut terms = Vec::new();
    for i in 0..l - 1 {
        terms.push(two_site(1.0, i, i + 1, PauliOp::X));
        terms.push(two_site(1.0, i, i + 1, PauliOp::Y));
        if gamma != 0.0 {
            terms.push(two_site(gamma, i, i + 1, PauliOp::Z));
        }
    }
    PauliHamiltonian::new(l, terms)
}

/// The XX chain: XXZ at `gamma = 0`.
pub fn xx_hamiltonian(l: usize) -> Result<PauliHamiltonian> {
    xxz_hamiltonian(l, 0.0)
}

/// Isotropic Heisenberg couplings on all nearest- and next-nearest-neighbour
/// pairs of an open chain.
pub fn nnn_heisenberg_hamiltonian(l: usize) -> Result<PauliHamiltonian> {
    if l < 3 {
        return Err(Error::InvalidArgument(
            "next-nearest-neighbour chain needs at least three sites".into(),
        ));
    }
    let mut terms = Vec::new();
    for dist in [1usize, 2] {
        for i in 0..l - dist {
            for op in [PauliOp::X, PauliOp::Y, PauliOp::Z] {
                terms.push(two_site(1.0, i, i + dist, op));
            }
        }
    }
    PauliHamiltonian::new(l, terms)
}

/// Hardcore-boson chain
/// `H = sum_i a†_i a_{i+1} + a†_{i+1} a_i + Delta n_i n_{i+1}`
/// in the occupation basis, using `a = |0><1|`, `n = |1><1|` per site
/// (equivalently `X = a + a†`, `Y = -i(a - a†)`, `Z = 1 - 2n`).
pub fn hcbh_hamiltonian(l: usize, delta: f64) -> Result<DMatrix<f64>> {
    if l < 2 {
        return Err(Error::InvalidArgument("chain needs at least two sites".into()));
    }
    if l > MAX_SITES {
        return Err(Error::SizeCap { l, cap: MAX_SITES });
    }
    let dim = 1usize << l;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for s in 0..dim {
        for i in 0..l - 1 {
            let (bi, bj) = (1usize << i, 1usize << (i + 1));
            let (ni, nj) = (s & bi != 0, s & bj != 0);
            if ni && nj {
                m[(s, s)] += delta;
            }
            // a†_i a_{i+1} moves a particle from site i+1 to site i.
            if nj && !ni {
                let t = s ^ bi ^ bj;
                m[(t, s)] += 1.0;
                m[(s, t)] += 1.0;
            }
        }
    }
    Ok(m)
}

/// Result of an extremal-eigenvalue solve.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub ground_energy: f64,
    pub sector: Option<usize>,
    pub dim: usize,
    pub method: &'static str,
}

/// Eigenvalues (ascending) of a Hermitian complex matrix, computed through
/// the real-symmetric doubling `[[Re, -Im], [Im, Re]]`.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let n = h.nrows();
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = h[(i, j)];
            m[(i, j)] = v.re;
            m[(i, j + n)] = -v.im;
            m[(i + n, j)] = v.im;
            m[(i + n, j + n)] = v.re;
        }
    }
    let mut eigs: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Each eigenvalue of H appears twice in the doubled problem.
    eigs.into_iter().step_by(2).collect()
}

/// Eigenvalues (ascending) of a real symmetric matrix.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut eigs: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

/// Restriction of a dense matrix to the given basis indices.
pub fn submatrix<T: nalgebra::Scalar + Copy>(m: &DMatrix<T>, indices: &[usize]) -> DMatrix<T> {
    DMatrix::from_fn(indices.len(), indices.len(), |r, c| m[(indices[r], indices[c])])
}

/// Exact ground-state energy, optionally restricted to the `N`-particle
/// sector. Dense diagonalization up to [`DENSE_SITES`] sites (or whenever a
/// sector restriction keeps the subspace small), Lanczos above that.
pub fn exact_ground_energy(h: &PauliHamiltonian, sector: Option<usize>) -> Result<SpectralResult> {
    let l = h.num_qubits();
    if l > MAX_SITES {
        return Err(Error::SizeCap { l, cap: MAX_SITES });
    }
    match sector {
        Some(n) => {
            let indices = fock::sector_indices(l, n)?;
            let dim = indices.len();
            if dim <= (1usize << DENSE_SITES) {
                let dense = submatrix(&h.to_dense(), &indices);
                let eigs = hermitian_eigenvalues(&dense);
                Ok(SpectralResult { ground_energy: eigs[0], sector, dim, method: "dense" })
            } else {
                let energy = lanczos_ground(h, Some(&indices))?;
                Ok(SpectralResult { ground_energy: energy, sector, dim, method: "lanczos" })
            }
        }
        None => {
            let dim = 1usize << l;
            if l <= DENSE_SITES {
                let eigs = hermitian_eigenvalues(&h.to_dense());
                Ok(SpectralResult { ground_energy: eigs[0], sector: None, dim, method: "dense" })
            } else {
                let energy = lanczos_ground(h, None)?;
                Ok(SpectralResult { ground_energy: energy, sector: None, dim, method: "lanczos" })
            }
        }
    }
}

/// Lanczos iteration with full reorthogonalization for the smallest
/// eigenvalue. With `indices` given, the operator is projected onto that
/// subspace (apply, then project).
fn lanczos_ground(h: &PauliHamiltonian, indices: Option<&[usize]>) -> Result<f64> {
    let full_dim = 1usize << h.num_qubits();
    let dim = indices.map_or(full_dim, |ix| ix.len());
    let max_iter = dim.min(300);

    // Deterministic pseudo-random start vector.
    let mut v0 = vec![C64::new(0.0, 0.0); dim];
    let mut x = 0x9e3779b97f4a7c15u64;
    for entry in v0.iter_mut() {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let re = ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let im = ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
        *entry = C64::new(re, im);
    }
    normalize(&mut v0);

    let apply = |v: &[C64]| -> Vec<C64> {
        match indices {
            None => h.apply(v),
            Some(ix) => {
                let mut full = vec![C64::new(0.0, 0.0); full_dim];
                for (k, &i) in ix.iter().enumerate() {
                    full[i] = v[k];
                }
                let image = h.apply(&full);
                ix.iter().map(|&i| image[i]).collect()
            }
        }
    };

    let mut basis: Vec<Vec<C64>> = vec![v0];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut previous_best = f64::INFINITY;

    for k in 0..max_iter {
        let mut w = apply(&basis[k]);
        let alpha = dot(&basis[k], &w).re;
        alphas.push(alpha);
        // Full reorthogonalization keeps the basis numerically orthonormal.
        for b in &basis {
            let overlap = dot(b, &w);
            for (wi, bi) in w.iter_mut().zip(b.iter()) {
                *wi -= overlap * bi;
            }
        }
        for b in &basis {
            let overlap = dot(b, &w);
            for (wi, bi) in w.iter_mut().zip(b.iter()) {
                *wi -= overlap * bi;
            }
        }
        let beta = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let best = tridiagonal_smallest(&alphas, &betas);
        if beta < 1e-13 || (previous_best - best).abs() < tol::EIGEN {
            return Ok(best);
        }
        previous_best = best;
        if k + 1 < max_iter {
            betas.push(beta);
            for wi in w.iter_mut() {
                *wi /= beta;
            }
            basis.push(w);
        }
    }
    Ok(tridiagonal_smallest(&alphas, &betas))
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn normalize(v: &mut [C64]) {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in v.iter_mut() {
        *c /= norm;
    }
}

fn tridiagonal_smallest(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    symmetric_eigenvalues(&t)[0]
}
