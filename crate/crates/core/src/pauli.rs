//! Symplectic labels for the one- and two-qudit Pauli group.
//!
//! For odd prime `d` a label `(x|z)[c]` stands for `w^c X^x Z^z` with
//! `w = exp(2 pi i / d)`. For `d = 2` the unphased operator is the Hermitian
//! `i^(x.z) X^x Z^z` (so `(1|1)` is `sigma_y`) and the phase `c` counts powers
//! of `i`, i.e. lives in `Z_4`.
//!
//! Multi-qudit operators put qudit 1 on the left tensor factor:
//! `P(x1,x2|z1,z2) = (X^x1 (x) X^x2)(Z^z1 (x) Z^z2)`, and basis state
//! `|j1 j2>` has index `j1 * d + j2`.

use std::fmt;

use crate::error::{ensure_prime, Error, Result};
use crate::linalg::{root_of_unity, CMatrix, C64};

/// Largest number of qudits a label can describe.
pub const MAX_QUDITS: usize = 2;

/// A (one- or two-qudit) Pauli operator with its phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliLabel {
    d: u32,
    n: usize,
    x: [u32; MAX_QUDITS],
    z: [u32; MAX_QUDITS],
    phase: u32,
}

impl PauliLabel {
    /// Label with phase 0. Components are reduced mod `d`.
    pub fn new(d: u32, x: &[u32], z: &[u32]) -> Result<Self> {
        ensure_prime(d)?;
        if x.len() != z.len() || x.is_empty() || x.len() > MAX_QUDITS {
            return Err(Error::shape(format!(
                "Pauli label needs 1 or 2 qudits with matching x/z lengths, got {}/{}",
                x.len(),
                z.len()
            )));
        }
        let mut label = PauliLabel {
            d,
            n: x.len(),
            x: [0; MAX_QUDITS],
            z: [0; MAX_QUDITS],
            phase: 0,
        };
        for i in 0..x.len() {
            label.x[i] = x[i] % d;
            label.z[i] = z[i] % d;
        }
        Ok(label)
    }

    pub fn single(d: u32, x: u32, z: u32) -> Result<Self> {
        Self::new(d, &[x], &[z])
    }

    pub fn two(d: u32, x1: u32, x2: u32, z1: u32, z2: u32) -> Result<Self> {
        Self::new(d, &[x1, x2], &[z1, z2])
    }

    /// Identity on `n` qudits.
    pub fn identity(d: u32, n: usize) -> Result<Self> {
        Self::new(d, &vec![0; n], &vec![0; n])
    }

    pub fn with_phase(mut self, phase: u32) -> Self {
        self.phase = phase % self.phase_modulus();
        self
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn qudits(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> &[u32] {
        &self.x[..self.n]
    }

    pub fn z(&self) -> &[u32] {
        &self.z[..self.n]
    }

    /// Phase exponent: of `w` for odd `d`, of `i` for `d = 2`.
    pub fn phase(&self) -> u32 {
        self.phase
    }

    /// Same operator without its phase.
    pub fn unphased(&self) -> Self {
        Self { phase: 0, ..*self }
    }

    pub fn phase_modulus(&self) -> u32 {
        if self.d == 2 {
            4
        } else {
            self.d
        }
    }

    /// The scalar `w^c` (or `i^c` for qubits).
    pub fn phase_factor(&self) -> C64 {
        root_of_unity(self.phase_modulus(), self.phase as i64)
    }

    pub fn is_identity(&self) -> bool {
        self.x().iter().chain(self.z()).all(|&v| v == 0)
    }

    /// Whether qudit `i` carries a non-identity factor.
    pub fn acts_on(&self, i: usize) -> bool {
        self.x[i] != 0 || self.z[i] != 0
    }

    /// Hilbert-space dimension `d^n`.
    pub fn dim(&self) -> usize {
        (self.d as usize).pow(self.n as u32)
    }

    fn dot(a: &[u32], b: &[u32]) -> u64 {
        a.iter().zip(b).map(|(&p, &q)| p as u64 * q as u64).sum()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::shape(format!(
                "Pauli labels over (d={}, n={}) and (d={}, n={})",
                self.d, self.n, other.d, other.n
            )));
        }
        Ok(())
    }

    /// `x.z' - x'.z mod d`; zero exactly when the operators commute.
    pub fn symplectic_product(&self, other: &Self) -> Result<u32> {
        self.check_compatible(other)?;
        let d = self.d as u64;
        let a = Self::dot(self.x(), other.z()) % d;
        let b = Self::dot(other.x(), self.z()) % d;
        Ok(((a + d - b) % d) as u32)
    }

    /// Label of the operator product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let d = self.d;
        let mut out = *self;
        for i in 0..self.n {
            out.x[i] = (self.x[i] + other.x[i]) % d;
            out.z[i] = (self.z[i] + other.z[i]) % d;
        }
        // Z^z X^x' = w^{z.x'} X^x' Z^z
        let swap = Self::dot(self.z(), other.x());
        out.phase = if d == 2 {
            let own = Self::dot(self.x(), self.z()) + Self::dot(other.x(), other.z());
            let fix = Self::dot(out.x(), out.z());
            ((self.phase as u64 + other.phase as u64 + own + 2 * swap + 4 * fix - fix) % 4) as u32
        } else {
            ((self.phase as u64 + other.phase as u64 + swap) % d as u64) as u32
        };
        Ok(out)
    }

    /// Label of `self^m`, using `(P_(x|z))^m = w^{m(m-1)/2 x.z} P_(mx|mz)`.
    pub fn power(&self, m: u32) -> Self {
        let d = self.d;
        if d == 2 {
            // Hermitian qubit Paulis square to the identity
            let odd = m % 2;
            let mut out = *self;
            for i in 0..self.n {
                out.x[i] *= odd;
                out.z[i] *= odd;
            }
            out.phase = ((self.phase as u64 * m as u64) % 4) as u32;
            return out;
        }
        let dm = d as u64;
        let m = m as u64 % dm;
        let half = (dm + 1) / 2; // 1/2 in Z_d
        let xz = Self::dot(self.x(), self.z()) % dm;
        let extra = half * ((m * (m + dm - 1)) % dm) % dm * xz % dm;
        let mut out = *self;
        for i in 0..self.n {
            out.x[i] = ((self.x[i] as u64 * m) % dm) as u32;
            out.z[i] = ((self.z[i] as u64 * m) % dm) as u32;
        }
        out.phase = ((self.phase as u64 * m + extra) % dm) as u32;
        out
    }

    /// Action on a computational basis state: `P|j> = coeff |target>`.
    pub fn apply_to_basis(&self, j: usize) -> (usize, C64) {
        let d = self.d as usize;
        let mut digits = [0usize; MAX_QUDITS];
        let mut rest = j;
        for i in (0..self.n).rev() {
            digits[i] = rest % d;
            rest /= d;
        }
        let mut exp: u64 = 0;
        let mut target = 0usize;
        for i in 0..self.n {
            exp += self.z[i] as u64 * digits[i] as u64;
            target = target * d + (digits[i] + self.x[i] as usize) % d;
        }
        let coeff = if self.d == 2 {
            let herm = Self::dot(self.x(), self.z());
            root_of_unity(4, (self.phase as u64 + herm + 2 * exp) as i64)
        } else {
            root_of_unity(self.d, (self.phase as u64 + exp) as i64)
        };
        (target, coeff)
    }

    /// Matrix realization (`d^n x d^n`, monomial and unitary).
    pub fn matrix(&self) -> CMatrix {
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for j in 0..dim {
            let (t, c) = self.apply_to_basis(j);
            m[(t, j)] = c;
        }
        m
    }

    /// `Tr(P^dagger M)` without materializing `P`.
    pub fn trace_dagger_with(&self, m: &CMatrix) -> C64 {
        (0..self.dim())
            .map(|j| {
                let (t, c) = self.apply_to_basis(j);
                c.conj() * m[(t, j)]
            })
            .sum()
    }

    /// `P |psi>`.
    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); psi.len()];
        for (j, &amp) in psi.iter().enumerate() {
            let (t, c) = self.apply_to_basis(j);
            out[t] += c * amp;
        }
        out
    }

    /// Position of the (unphased) label among all `d^{2n}` labels:
    /// `index = X * d^n + Z` with `X`, `Z` read as base-`d` numbers.
    pub fn index(&self) -> usize {
        let d = self.d as usize;
        let xs = self.x().iter().fold(0, |acc, &v| acc * d + v as usize);
        let zs = self.z().iter().fold(0, |acc, &v| acc * d + v as usize);
        xs * d.pow(self.n as u32) + zs
    }

    /// Inverse of [`PauliLabel::index`].
    pub fn from_index(d: u32, n: usize, index: usize) -> Result<Self> {
        let du = d as usize;
        let dn = du.pow(n as u32);
        let (mut xs, mut zs) = (index / dn, index % dn);
        let mut x = vec![0u32; n];
        let mut z = vec![0u32; n];
        for i in (0..n).rev() {
            x[i] = (xs % du) as u32;
            z[i] = (zs % du) as u32;
            xs /= du;
            zs /= du;
        }
        Self::new(d, &x, &z)
    }

    /// All `d^{2n}` unphased labels in index order.
    pub fn all(d: u32, n: usize) -> Result<Vec<Self>> {
        let count = (d as usize).pow(2 * n as u32);
        (0..count).map(|i| Self::from_index(d, n, i)).collect()
    }
}

impl fmt::Display for PauliLabel {
    /// `(x1,x2|z1,z2)[phase]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({}|{})[{}]", join(self.x()), join(self.z()), self.phase)
    }
}

/// Pauli-basis coefficients `c_(x|z) = Tr(P_(x|z)^dagger rho)`.
#[derive(Debug, Clone)]
pub struct PauliCoefficients {
    d: u32,
    n: usize,
    coeffs: Vec<C64>,
}

impl PauliCoefficients {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn qudits(&self) -> usize {
        self.n
    }

    pub fn get(&self, label: &PauliLabel) -> C64 {
        self.coeffs[label.index()]
    }

    /// Coefficient of the single-qudit label `(a|b)`.
    pub fn single(&self, a: u32, b: u32) -> C64 {
        let d = self.d as usize;
        self.coeffs[(a as usize % d) * d + b as usize % d]
    }

    /// Coefficients in [`PauliLabel::index`] order.
    pub fn as_slice(&self) -> &[C64] {
        &self.coeffs
    }

    /// `rho = d^{-n} sum c_(x|z) P_(x|z)`.
    pub fn reconstruct(&self) -> CMatrix {
        let dim = (self.d as usize).pow(self.n as u32);
        let mut m = CMatrix::zeros(dim, dim);
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let label = PauliLabel::from_index(self.d, self.n, idx).expect("valid index");
            for j in 0..dim {
                let (t, p) = label.apply_to_basis(j);
                m[(t, j)] += c * p;
            }
        }
        m.scale_re(1.0 / dim as f64)
    }
}

/// Expands an operator on `n` qudits in the Pauli basis.
pub fn pauli_coefficients(rho: &CMatrix, d: u32, n: usize) -> Result<PauliCoefficients> {
    ensure_prime(d)?;
    let dim = (d as usize).pow(n as u32);
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::shape(format!(
            "expected a {dim}x{dim} operator for {n} qudit(s) of dimension {d}, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    let coeffs = PauliLabel::all(d, n)?
        .iter()
        .map(|l| l.trace_dagger_with(rho))
        .collect();
    Ok(PauliCoefficients { d, n, coeffs })
}

/// Matrix of a Pauli label.
pub fn pauli_matrix(label: &PauliLabel) -> CMatrix {
    label.matrix()
}
