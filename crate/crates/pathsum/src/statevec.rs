//! Small dense complex linear algebra for state-vector oracles.
//!
//! Everything here is built explicitly from cosines and sines so the
//! state-vector route stays independent of any closed-form correlation it is
//! used to check.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    n: usize,
    data: Vec<C64>,
}

impl CMat {
    pub fn from_rows(rows: &[&[C64]]) -> CMat {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        CMat {
            n,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn mul_mat(&self, other: &CMat) -> CMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        CMat { n, data }
    }
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let n = a.n * b.n;
    let mut data = vec![C64::new(0.0, 0.0); n * n];
    for ia in 0..a.n {
        for ja in 0..a.n {
            let f = a.get(ia, ja);
            for ib in 0..b.n {
                for jb in 0..b.n {
                    data[(ia * b.n + ib) * n + (ja * b.n + jb)] = f * b.get(ib, jb);
                }
            }
        }
    }
    CMat { n, data }
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// ⟨ψ| op |ψ⟩.
pub fn expectation(op: &CMat, psi: &[C64]) -> C64 {
    inner(psi, &op.mul_vec(psi))
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> CMat {
    CMat::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn pauli_y() -> CMat {
    CMat::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn pauli_z() -> CMat {
    CMat::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(-1.0, 0.0)]])
}

/// ±1-valued spin measurement whose analyzer is rotated by `angle` about the
/// y-axis, sweeping the z–x plane: cos(angle)·σz + sin(angle)·σx.
pub fn spin_measurement(angle: f64) -> CMat {
    let (s, co) = angle.sin_cos();
    CMat::from_rows(&[&[c(co, 0.0), c(s, 0.0)], &[c(s, 0.0), c(-co, 0.0)]])
}

/// Two-particle singlet (|01⟩ − |10⟩)/√2.
pub fn singlet_state() -> Vec<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(0.0, 0.0), c(r, 0.0), c(-r, 0.0), c(0.0, 0.0)]
}

/// Three-particle GHZ state (|000⟩ − |111⟩)/√2.
pub fn ghz_state() -> Vec<C64> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = vec![c(0.0, 0.0); 8];
    v[0] = c(r, 0.0);
    v[7] = c(-r, 0.0);
    v
}
