//! Single-qudit Clifford group, Choi states of gates, and the real
//! coordinates used for polytope rank computations.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{ensure_odd_prime, ensure_prime, Error, Result};
use crate::exec::{map_range, Exec};
use crate::linalg::{root_of_unity, CMatrix, C64, ONE, ZERO};
use crate::pauli::PauliLabel;

/// Rounding scale used for modulo-phase dedup keys.
pub const KEY_SCALE: f64 = 1e9;

/// A Clifford unitary with its symplectic action.
#[derive(Debug, Clone)]
pub struct CliffordElement {
    pub d: u32,
    /// `[alpha, beta, gamma, delta]`: `C P_v C^dagger ~ P_{F v}` for
    /// `v = (x, z)` and `F = [[alpha, beta], [gamma, delta]]`.
    pub f: [u32; 4],
    /// Displacement part; `None` for qubits, which are generated by closure.
    pub chi: Option<[u32; 2]>,
    pub matrix: CMatrix,
}

fn modinv(a: u32, d: u32) -> Option<u32> {
    (1..d).find(|&x| (a as u64 * x as u64) % d as u64 == 1)
}

/// Divides by the phase of the first non-negligible entry in column-major
/// order.
pub fn canonicalize_phase(m: &CMatrix) -> CMatrix {
    for c in 0..m.cols() {
        for r in 0..m.rows() {
            let z = m[(r, c)];
            if z.norm() > 1e-6 {
                return m.scale(z.conj() / z.norm());
            }
        }
    }
    m.clone()
}

/// Dedup key of a matrix modulo global phase.
pub fn phase_key(m: &CMatrix) -> Vec<i64> {
    canonicalize_phase(m).rounded_key(KEY_SCALE)
}

/// Unitary `D_chi U_F` for odd `d`, following Appleby's description:
/// `U_F = d^{-1/2} sum_{r,s} tau^{beta^{-1}(alpha s^2 - 2 r s + delta r^2)} |r><s|`
/// when `beta != 0`, `U_F = sum_s tau^{alpha gamma s^2} |alpha s><s|` otherwise,
/// and `D_chi = tau^{chi_1 chi_2} X^{chi_1} Z^{chi_2}`.
/// The result is returned with canonical global phase.
pub fn clifford_unitary(f: [u32; 4], chi: [u32; 2], d: u32) -> Result<CMatrix> {
    ensure_prime(d)?;
    if d == 2 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "qubit Cliffords come from the {H, S} closure in enumerate_clifford",
        });
    }
    let dm = d as i64;
    let [a, b, g, dl] = f.map(|v| (v % d) as i64);
    if (a * dl - b * g).rem_euclid(dm) != 1 {
        return Err(Error::contract(format!(
            "F = [[{a},{b}],[{g},{dl}]] does not have determinant 1 mod {d}"
        )));
    }
    let dim = d as usize;
    // tau = w^{(d+1)/2} = -e^{i pi / d}
    let tau = |e: i64| root_of_unity(d, (e.rem_euclid(dm) * ((dm + 1) / 2)).rem_euclid(dm));
    let uf = if b != 0 {
        let binv = modinv(b as u32, d).expect("beta is invertible") as i64;
        let amp = 1.0 / (d as f64).sqrt();
        CMatrix::from_fn(dim, dim, |r, s| {
            let (r, s) = (r as i64, s as i64);
            tau(binv * (a * s * s - 2 * r * s + dl * r * r)) * amp
        })
    } else {
        let mut m = CMatrix::zeros(dim, dim);
        for s in 0..dm {
            m[((a * s).rem_euclid(dm) as usize, s as usize)] = tau(a * g * s * s);
        }
        m
    };
    let disp = PauliLabel::single(d, chi[0] % d, chi[1] % d)?.matrix();
    let phase = tau((chi[0] % d) as i64 * (chi[1] % d) as i64);
    Ok(canonicalize_phase(&(&disp * &uf).scale(phase)))
}

/// The symplectic matrix `F` of a Clifford unitary, read off from its action
/// on `X` and `Z`.
pub fn symplectic_action(u: &CMatrix, d: u32) -> Result<[u32; 4]> {
    ensure_prime(d)?;
    let image = |p: PauliLabel| -> Result<(u32, u32)> {
        let conj = p.matrix().conjugate_by(u);
        for a in 0..d {
            for b in 0..d {
                let q = PauliLabel::single(d, a, b)?;
                if (q.trace_dagger_with(&conj).norm() - d as f64).abs() < 1e-8 {
                    return Ok((a, b));
                }
            }
        }
        Err(Error::contract("matrix does not map Paulis to Paulis"))
    };
    let (a, g) = image(PauliLabel::single(d, 1, 0)?)?;
    let (b, dl) = image(PauliLabel::single(d, 0, 1)?)?;
    Ok([a, b, g, dl])
}

/// The full single-qudit Clifford group modulo phase, `d^3 (d^2 - 1)` elements.
#[derive(Debug, Clone)]
pub struct CliffordGroup {
    d: u32,
    elements: Vec<CliffordElement>,
    index: HashMap<Vec<i64>, usize>,
}

impl CliffordGroup {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CliffordElement] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &CliffordElement {
        &self.elements[i]
    }

    /// Position of `m` (up to phase) in the enumeration.
    pub fn find(&self, m: &CMatrix) -> Option<usize> {
        if m.rows() != self.d as usize || m.cols() != self.d as usize {
            return None;
        }
        if let Some(&i) = self.index.get(&phase_key(m)) {
            return Some(i);
        }
        // rounding can straddle a grid line; fall back to a direct comparison
        let c = canonicalize_phase(m);
        self.elements
            .iter()
            .position(|e| e.matrix.max_abs_diff(&c) < 1e-8)
    }

    /// Choi states of every element, in enumeration order.
    pub fn choi_vertices(&self, exec: Exec) -> Result<Vec<ChoiVector>> {
        let basis = WeightTwoBasis::new(self.d)?;
        map_range(exec, self.elements.len(), |i| {
            ChoiVector::with_basis(&self.elements[i].matrix, &basis)
        })
        .into_iter()
        .collect()
    }

    fn from_elements(d: u32, elements: Vec<CliffordElement>) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(phase_key(&e.matrix), i).is_some() {
                return Err(Error::Verification(format!(
                    "duplicate Clifford element at position {i}"
                )));
            }
        }
        let expected = (d * d * d * (d * d - 1)) as usize;
        if elements.len() != expected {
            return Err(Error::Verification(format!(
                "enumerated {} Clifford elements for d={d}, expected {expected}",
                elements.len()
            )));
        }
        Ok(Self { d, elements, index })
    }
}

fn qubit_cliffords() -> Result<Vec<CliffordElement>> {
    let s = 0.5f64.sqrt();
    let h = CMatrix::from_rows(&[
        vec![C64::new(s, 0.0), C64::new(s, 0.0)],
        vec![C64::new(s, 0.0), C64::new(-s, 0.0)],
    ])?;
    let sg = CMatrix::diag(&[ONE, C64::new(0.0, 1.0)]);
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut out = Vec::new();
    let mut frontier = vec![CMatrix::identity(2)];
    seen.insert(phase_key(&frontier[0]), ());
    out.push(frontier[0].clone());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for g in [&h, &sg] {
                let p = canonicalize_phase(&(g * m));
                if seen.insert(phase_key(&p), ()).is_none() {
                    out.push(p.clone());
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    out.into_iter()
        .map(|m| {
            Ok(CliffordElement {
                d: 2,
                f: symplectic_action(&m, 2)?,
                chi: None,
                matrix: m,
            })
        })
        .collect()
}

/// All `d^3(d^2-1)` Clifford elements modulo phase. Odd `d` iterates
/// `(F, chi)` with `F` in lexicographic order; `d = 2` closes `{H, S}`.
pub fn enumerate_clifford(d: u32, exec: Exec) -> Result<CliffordGroup> {
    ensure_prime(d)?;
    if d == 2 {
        return CliffordGroup::from_elements(2, qubit_cliffords()?);
    }
    let mut fs = Vec::new();
    for a in 0..d {
        for b in 0..d {
            for g in 0..d {
                for dl in 0..d {
                    if (a * dl + d * d - b * g) % d == 1 {
                        fs.push([a, b, g, dl]);
                    }
                }
            }
        }
    }
    let per_f = (d * d) as usize;
    let elements = map_range(exec, fs.len() * per_f, |i| {
        let f = fs[i / per_f];
        let chi = [(i % per_f) as u32 / d, (i % per_f) as u32 % d];
        clifford_unitary(f, chi, d).map(|matrix| CliffordElement {
            d,
            f,
            chi: Some(chi),
            matrix,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    CliffordGroup::from_elements(d, elements)
}

/// Orthonormal real coordinates for the weight-2 part of a two-qudit
/// Hermitian operator. For odd `d` each pair `{P_l, P_l^dagger ~ P_{-l}}`
/// contributes `sqrt(2) Re c_l / d` and `sqrt(2) Im c_l / d`; for qubits every
/// label is Hermitian and contributes `c_l / d`. Here `c_l = Tr(P_l^dagger T)`.
#[derive(Debug, Clone)]
pub struct WeightTwoBasis {
    d: u32,
    labels: Vec<PauliLabel>,
}

impl WeightTwoBasis {
    pub fn new(d: u32) -> Result<Self> {
        ensure_prime(d)?;
        let labels = PauliLabel::all(d, 2)?
            .into_iter()
            .filter(|l| l.acts_on(0) && l.acts_on(1))
            .filter(|l| d == 2 || l.index() < l.power(d - 1).unphased().index())
            .collect();
        Ok(Self { d, labels })
    }

    /// `(d^2 - 1)^2`.
    pub fn dimension(&self) -> usize {
        let n = (self.d * self.d - 1) as usize;
        n * n
    }

    pub fn labels(&self) -> &[PauliLabel] {
        &self.labels
    }

    /// Coordinates from a coefficient oracle `l -> Tr(P_l^dagger T)`.
    pub fn coordinates(&self, mut coeff: impl FnMut(&PauliLabel) -> C64) -> Vec<f64> {
        let d = self.d as f64;
        let mut out = Vec::with_capacity(self.dimension());
        for l in &self.labels {
            let c = coeff(l);
            if self.d == 2 {
                out.push(c.re / d);
            } else {
                out.push(std::f64::consts::SQRT_2 * c.re / d);
                out.push(std::f64::consts::SQRT_2 * c.im / d);
            }
        }
        out
    }

    /// Coordinates of a `d^2 x d^2` Hermitian operator.
    pub fn operator_coordinates(&self, t: &CMatrix) -> Vec<f64> {
        self.coordinates(|l| l.trace_dagger_with(t))
    }

    /// Coordinates of `|psi><psi|`.
    pub fn state_coordinates(&self, psi: &[C64]) -> Vec<f64> {
        // Tr(P^dagger |psi><psi|) = <psi|P^dagger|psi> = conj(<psi|P|psi>)
        self.coordinates(|l| {
            let pv = l.apply(psi);
            psi.iter()
                .zip(&pv)
                .map(|(a, b)| a.conj() * b)
                .sum::<C64>()
                .conj()
        })
    }
}

/// Choi state of a single-qudit unitary and its real embedding.
#[derive(Debug, Clone, Serialize)]
pub struct ChoiVector {
    pub d: u32,
    /// `(I (x) U) sum_j |jj> / sqrt(d)`, index `j d + r`.
    #[serde(skip)]
    pub j_state: Vec<C64>,
    pub real_vec: Vec<f64>,
}

/// `|J_U>` alone.
pub fn choi_ket(u: &CMatrix) -> Result<Vec<C64>> {
    let d = u.rows();
    if !u.is_square() || d < 2 {
        return Err(Error::shape(format!(
            "expected a square gate, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    if !u.is_unitary(1e-8) {
        return Err(Error::contract("gate is not unitary within 1e-8"));
    }
    let amp = 1.0 / (d as f64).sqrt();
    let mut psi = vec![ZERO; d * d];
    for j in 0..d {
        for r in 0..d {
            psi[j * d + r] = u[(r, j)] * amp;
        }
    }
    Ok(psi)
}

impl ChoiVector {
    pub fn with_basis(u: &CMatrix, basis: &WeightTwoBasis) -> Result<Self> {
        if u.rows() != basis.d as usize {
            return Err(Error::shape(format!(
                "gate dimension {} does not match d={}",
                u.rows(),
                basis.d
            )));
        }
        let j_state = choi_ket(u)?;
        let real_vec = basis.state_coordinates(&j_state);
        Ok(Self {
            d: basis.d,
            j_state,
            real_vec,
        })
    }
}

pub fn choi_state(u: &CMatrix) -> Result<ChoiVector> {
    let d = u.rows() as u32;
    ChoiVector::with_basis(u, &WeightTwoBasis::new(d)?)
}

/// Clifford `C'` having `(|0> - |1>)/sqrt(2)` as an eigenvector.
#[derive(Debug, Clone)]
pub struct RobustEigenCertificate {
    pub d: u32,
    pub c_prime: CMatrix,
    pub eigenvalue: C64,
    /// `eigenvalue = -w^k`.
    pub k: u32,
}

/// `C' = X^h C X^{-h}` with `h = (d+1)/2` and
/// `C = sum_j tau^{j^2} |-j><j|` (the element `F = [[-1,0],[-1,-1]]`, `chi = 0`).
pub fn robust_eigenvector_certificate(d: u32) -> Result<RobustEigenCertificate> {
    ensure_odd_prime(d)?;
    let c = clifford_unitary([d - 1, 0, d - 1, d - 1], [0, 0], d)?;
    let x = PauliLabel::single(d, (d + 1) / 2, 0)?.matrix();
    let c_prime = c.conjugate_by(&x);
    let s = 0.5f64.sqrt();
    let mut nu = vec![ZERO; d as usize];
    nu[0] = C64::new(s, 0.0);
    nu[1] = C64::new(-s, 0.0);
    let image = c_prime.mat_vec(&nu);
    let lambda = image[0] / nu[0];
    if image
        .iter()
        .zip(&nu)
        .any(|(a, b)| (a - lambda * b).norm() > 1e-10)
    {
        return Err(Error::Verification(
            "(|0>-|1>)/sqrt(2) is not an eigenvector of C'".into(),
        ));
    }
    let k = (0..d)
        .find(|&k| (lambda + root_of_unity(d, k as i64)).norm() < 1e-10)
        .ok_or_else(|| {
            Error::Verification(format!("eigenvalue {lambda} is not of the form -w^k"))
        })?;
    Ok(RobustEigenCertificate {
        d,
        c_prime,
        eigenvalue: lambda,
        k,
    })
}
