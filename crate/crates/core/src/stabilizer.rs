//! Stabilizer projectors, the single-qudit stabilizer states, and the three
//! two-qudit codes used to turn phase-point operators into Clifford
//! witnesses.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_prime, Error, Result};
use crate::linalg::{root_of_unity, CMatrix, C64, ONE, ZERO};
use crate::pauli::PauliLabel;

/// Projector onto the `w^k` eigenspace of `label` (the `(-1)^k`
/// eigenspace for qubits):
/// `(1/d) sum_q w^{-qk} P^q`, with powers taken from [`PauliLabel::power`].
pub fn projector(label: &PauliLabel, k: u32) -> Result<CMatrix> {
    if label.is_identity() {
        return Err(Error::contract(format!(
            "the identity {label} has no non-trivial eigenspace projector"
        )));
    }
    let d = label.d();
    let dim = label.dim();
    let base = label.unphased();
    let mut m = CMatrix::zeros(dim, dim);
    for q in 0..d {
        let pq = base.power(q);
        let w = root_of_unity(d, -(q as i64) * k as i64);
        for j in 0..dim {
            let (t, c) = pq.apply_to_basis(j);
            m[(t, j)] += w * c;
        }
    }
    Ok(m.scale_re(1.0 / d as f64))
}

/// `Pi_(a|b)[k]`, a rank-1 single-qudit stabilizer state.
pub fn projector_single(a: u32, b: u32, k: u32, d: u32) -> Result<CMatrix> {
    projector(&PauliLabel::single(d, a, b)?, k % d)
}

/// `Pi_(x1,x2|z1,z2)[k]`, a rank-`d` two-qudit projector.
pub fn projector_two(x1: u32, x2: u32, z1: u32, z2: u32, k: u32, d: u32) -> Result<CMatrix> {
    projector(&PauliLabel::two(d, x1, x2, z1, z2)?, k % d)
}

/// Pauli operator whose eigenbasis is MUB number `basis`:
/// `Z` for basis 0 and `X Z^{basis-1}` for bases `1..=d`.
pub fn mub_label(d: u32, basis: usize) -> Result<PauliLabel> {
    if basis > d as usize {
        return Err(Error::contract(format!(
            "basis index {basis} out of range 0..={d}"
        )));
    }
    if basis == 0 {
        PauliLabel::single(d, 0, 1)
    } else {
        PauliLabel::single(d, 1, basis as u32 - 1)
    }
}

/// One single-qudit stabilizer state, identified by its MUB slot.
#[derive(Debug, Clone)]
pub struct StabilizerState {
    pub basis: usize,
    pub k: u32,
    pub projector: CMatrix,
}

/// The `d(d+1)` single-qudit stabilizer states: eigenprojectors of
/// `Z, X, XZ, ..., XZ^{d-1}`.
pub fn enumerate_stabilizer_states(d: u32) -> Result<Vec<StabilizerState>> {
    ensure_prime(d)?;
    let mut out = Vec::with_capacity((d * (d + 1)) as usize);
    for basis in 0..=d as usize {
        let label = mub_label(d, basis)?;
        for k in 0..d {
            out.push(StabilizerState {
                basis,
                k,
                projector: projector(&label, k)?,
            });
        }
    }
    Ok(out)
}

/// The two-qudit codes used for witness derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeId {
    /// Stabilizer `I (x) Z`, logical `Z (x) I`.
    A,
    /// Stabilizer `Z (x) I`, logical `I (x) Z`.
    AT,
    /// Parity code: stabilizer `Z (x) Z`, logical `I (x) Z`.
    B,
}

impl CodeId {
    pub const ALL: [CodeId; 3] = [CodeId::A, CodeId::AT, CodeId::B];

    /// (stabilizer, logical) two-qudit labels.
    fn generators(self, d: u32) -> Result<(PauliLabel, PauliLabel)> {
        Ok(match self {
            CodeId::A => (
                PauliLabel::two(d, 0, 0, 0, 1)?,
                PauliLabel::two(d, 0, 0, 1, 0)?,
            ),
            CodeId::AT => (
                PauliLabel::two(d, 0, 0, 1, 0)?,
                PauliLabel::two(d, 0, 0, 0, 1)?,
            ),
            CodeId::B => (
                PauliLabel::two(d, 0, 0, 1, 1)?,
                PauliLabel::two(d, 0, 0, 0, 1)?,
            ),
        })
    }
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeId::A => "A",
            CodeId::AT => "AT",
            CodeId::B => "B",
        })
    }
}

impl FromStr for CodeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CodeId::A),
            "AT" | "A^T" | "AT-TYPE" => Ok(CodeId::AT),
            "B" => Ok(CodeId::B),
            other => Err(Error::contract(format!(
                "unknown code id {other:?} (expected A, AT or B)"
            ))),
        }
    }
}

/// A two-qudit stabilizer code encoding one qudit, with its logical basis.
#[derive(Debug, Clone)]
pub struct StabilizerCode {
    pub d: u32,
    pub id: CodeId,
    pub stabilizer: PauliLabel,
    pub logical: PauliLabel,
    /// `|j̄>` for `j = 0..d`, as `d^2`-dimensional vectors.
    pub kets: Vec<Vec<C64>>,
}

/// `(1/d^2) sum_{a,b} S^a (w^j L)^b`, the rank-1 projector onto `|j̄>`.
pub fn logical_projector(stabilizer: &PauliLabel, logical: &PauliLabel, j: u32) -> Result<CMatrix> {
    let d = stabilizer.d();
    let dim = stabilizer.dim();
    // w^j (or (-1)^j for qubits) as a label phase
    let shift = if d == 2 { 2 * j } else { j };
    let phased = logical.with_phase(logical.phase() + shift);
    let mut m = CMatrix::zeros(dim, dim);
    for a in 0..d {
        let sa = stabilizer.power(a);
        for b in 0..d {
            let g = sa.compose(&phased.power(b))?;
            for col in 0..dim {
                let (t, c) = g.apply_to_basis(col);
                m[(t, col)] += c;
            }
        }
    }
    Ok(m.scale_re(1.0 / (d * d) as f64))
}

/// Logical basis of one of the three codes, computed by expanding the group
/// sum. Each logical ket is the computational basis vector carried by the
/// rank-1 group-sum projector, with coefficient `+1`.
pub fn code_logical_basis(id: CodeId, d: u32) -> Result<StabilizerCode> {
    ensure_prime(d)?;
    let (stabilizer, logical) = id.generators(d)?;
    let dim = (d * d) as usize;
    let mut kets = Vec::with_capacity(d as usize);
    for j in 0..d {
        let proj = logical_projector(&stabilizer, &logical, j)?;
        let pos = (0..dim)
            .find(|&i| (proj[(i, i)] - ONE).norm() < 1e-9)
            .ok_or_else(|| {
                Error::Verification(format!("code {id}: logical state {j} is not a basis state"))
            })?;
        let mut ket = vec![ZERO; dim];
        ket[pos] = ONE;
        if proj.max_abs_diff(&CMatrix::outer(&ket, &ket)) > 1e-12 {
            return Err(Error::Verification(format!(
                "code {id}: group sum for j={j} is not |{pos}><{pos}|"
            )));
        }
        kets.push(ket);
    }
    Ok(StabilizerCode {
        d,
        id,
        stabilizer,
        logical,
        kets,
    })
}

impl StabilizerCode {
    /// Isometry `V = sum_j |j̄><j|` (`d^2 x d`).
    pub fn isometry(&self) -> CMatrix {
        CMatrix::from_columns(&self.kets).expect("kets share a length")
    }

    /// Projector onto the code space.
    pub fn code_projector(&self) -> CMatrix {
        let v = self.isometry();
        &v * &v.adjoint()
    }

    /// `sum_{m,n} rho[m,n] |m̄><n̄|`.
    pub fn encode(&self, rho: &CMatrix) -> Result<CMatrix> {
        let d = self.d as usize;
        if rho.rows() != d || rho.cols() != d {
            return Err(Error::shape(format!("encode expects a {d}x{d} matrix")));
        }
        Ok(rho.conjugate_by(&self.isometry()))
    }

    /// Unnormalized decoded state `rho[m,n] = <m̄|tau|n̄>`.
    pub fn decode(&self, tau: &CMatrix) -> Result<CMatrix> {
        let dd = (self.d * self.d) as usize;
        if tau.rows() != dd || tau.cols() != dd {
            return Err(Error::shape(format!("decode expects a {dd}x{dd} matrix")));
        }
        let v = self.isometry();
        Ok(&(&v.adjoint() * tau) * &v)
    }
}

/// Free-function form of [`StabilizerCode::decode`].
pub fn decode(tau: &CMatrix, code: &StabilizerCode) -> Result<CMatrix> {
    code.decode(tau)
}
