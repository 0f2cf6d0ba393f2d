//! Fixed-particle-number (Fock) sector bookkeeping.

use crate::error::{Error, Result};

/// Binomial coefficient `C(l, n)` by Pascal's rule in exact integer
/// arithmetic; the independent oracle for sector dimensions.
pub fn binomial(l: u64, n: u64) -> u64 {
    if n > l {
        return 0;
    }
    let n = n.min(l - n);
    let mut row: Vec<u64> = vec![1];
    for _ in 0..l {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1);
        for w in row.windows(2) {
            next.push(w[0] + w[1]);
        }
        if !row.is_empty() {
            next.push(1);
        }
        row = next;
    }
    row[n as usize]
}

/// Dimension of the `N`-particle sector on `L` qubits.
pub fn fock_dimension(l: usize, n: usize) -> Result<u64> {
    if n > l {
        return Err(Error::InvalidArgument(format!(
            "particle number {n} exceeds {l} sites"
        )));
    }
    Ok(binomial(l as u64, n as u64))
}

/// All basis indices of Hamming weight `n`, ascending. This enumeration is
/// the index map shared by sector-restricted diagonalization and the
/// sector Haar sampler.
pub fn sector_indices(l: usize, n: usize) -> Result<Vec<usize>> {
    if n > l {
        return Err(Error::InvalidArgument(format!(
            "particle number {n} exceeds {l} sites"
        )));
    }
    let mut out = Vec::with_capacity(binomial(l as u64, n as u64) as usize);
    for i in 0..(1usize << l) {
        if i.count_ones() as usize == n {
            out.push(i);
        }
    }
    Ok(out)
}
