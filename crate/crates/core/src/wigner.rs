//! Discrete Wigner function for prime `d`: phase-point operators built from
//! the `d + 1` mutually unbiased bases, negativity, robustness, and the
//! family of maximally robust qudit states.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_odd_prime, ensure_prime, Error, Result};
use crate::exec::{map_chunks, map_range, Exec};
use crate::linalg::{hermitian_eig, inner, norm, root_of_unity, CMatrix, C64, ONE, ZERO};
use crate::pauli::{pauli_coefficients, PauliLabel};
use crate::stabilizer::{mub_label, projector};

/// Index `u = (u_1, ..., u_{d+1})` of a phase-point operator. `u_1` selects
/// the `Z` eigenprojector, `u_{j}` for `j >= 2` the `X Z^{j-2}` one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasePointIndex {
    d: u32,
    u: Vec<u32>,
}

impl PhasePointIndex {
    pub fn new(d: u32, u: &[i64]) -> Result<Self> {
        ensure_prime(d)?;
        if u.len() != d as usize + 1 {
            return Err(Error::shape(format!(
                "phase-point index for d={d} needs {} components, got {}",
                d + 1,
                u.len()
            )));
        }
        let u = u.iter().map(|&v| v.rem_euclid(d as i64) as u32).collect();
        Ok(Self { d, u })
    }

    pub fn zero(d: u32) -> Result<Self> {
        Self::new(d, &vec![0; d as usize + 1])
    }

    /// `u* = ((d+1)/2, 0, ..., 0)`.
    pub fn u_star(d: u32) -> Result<Self> {
        let mut u = vec![0i64; d as usize + 1];
        u[0] = (d as i64 + 1) / 2;
        Self::new(d, &u)
    }

    /// Number of indices, `d^{d+1}`.
    pub fn count(d: u32) -> usize {
        (d as usize).pow(d + 1)
    }

    /// Index with `u_1` as the most significant base-`d` digit.
    pub fn from_linear(d: u32, mut idx: usize) -> Self {
        let du = d as usize;
        let mut u = vec![0u32; du + 1];
        for slot in u.iter_mut().rev() {
            *slot = (idx % du) as u32;
            idx /= du;
        }
        Self { d, u }
    }

    pub fn linear(&self) -> usize {
        self.u
            .iter()
            .fold(0, |acc, &v| acc * self.d as usize + v as usize)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn components(&self) -> &[u32] {
        &self.u
    }

    /// Parses `"0,2,2,0"` (commas and/or whitespace).
    pub fn parse(d: u32, s: &str) -> Result<Self> {
        let vals = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.trim_matches(|c| c == '(' || c == ')')
                    .parse::<i64>()
                    .map_err(|e| Error::contract(format!("bad phase-point component {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, &vals)
    }
}

impl fmt::Display for PhasePointIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.u.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A phase-point operator together with its index.
#[derive(Debug, Clone)]
pub struct PhasePointOperator {
    pub index: PhasePointIndex,
    pub matrix: CMatrix,
}

/// The `(d+1) x d` table of MUB projectors `Pi_b[k]`, cached for scans.
#[derive(Debug, Clone)]
pub struct PhaseSpace {
    d: u32,
    projectors: Vec<Vec<CMatrix>>,
}

impl PhaseSpace {
    pub fn new(d: u32) -> Result<Self> {
        ensure_prime(d)?;
        let projectors = (0..=d as usize)
            .map(|b| {
                let label = mub_label(d, b)?;
                (0..d)
                    .map(|k| projector(&label, k))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { d, projectors })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn projector(&self, basis: usize, k: u32) -> &CMatrix {
        &self.projectors[basis][k as usize]
    }

    /// `A(u) = (1/d)(sum_b Pi_b[u_b] - I)`.
    pub fn operator(&self, u: &PhasePointIndex) -> CMatrix {
        let d = self.d as usize;
        let mut m = CMatrix::identity(d).scale_re(-1.0);
        for (b, &k) in u.components().iter().enumerate() {
            m = &m + &self.projectors[b][k as usize];
        }
        m.scale_re(1.0 / d as f64)
    }

    /// `p[b][k] = Tr(rho Pi_b[k])`.
    pub fn basis_probabilities(&self, rho: &CMatrix) -> Vec<Vec<f64>> {
        self.projectors
            .iter()
            .map(|row| row.iter().map(|p| p.hs_inner(rho).re).collect())
            .collect()
    }
}

pub fn phase_point_operator(u: &PhasePointIndex) -> Result<PhasePointOperator> {
    let space = PhaseSpace::new(u.d())?;
    Ok(PhasePointOperator {
        index: u.clone(),
        matrix: space.operator(u),
    })
}

/// Eigenvector of `X Z^b` with eigenvalue `w^k`:
/// `psi[m] = w^{k(d-m)} w^{-b s_m} / sqrt(d)` with `s_m = sum_{q=m}^{d-1} q`.
/// For qubits, `b = 0` gives the `X` eigenvectors and `b = 1` the `Y` ones.
pub fn mub_vector(b: u32, k: u32, d: u32) -> Result<Vec<C64>> {
    ensure_prime(d)?;
    let (b, k) = (b % d, k % d);
    if d == 2 {
        let s = 0.5f64.sqrt();
        let sign = if k == 0 { 1.0 } else { -1.0 };
        let second = if b == 0 {
            C64::new(sign, 0.0)
        } else {
            C64::new(0.0, sign)
        };
        return Ok(vec![C64::new(s, 0.0), second * s]);
    }
    let dd = d as i64;
    let amp = 1.0 / (d as f64).sqrt();
    Ok((0..dd)
        .map(|m| {
            let s_m: i64 = (m..dd).sum();
            root_of_unity(d, k as i64 * (dd - m) - b as i64 * s_m) * amp
        })
        .collect())
}

/// `A(u)` assembled from explicit basis vectors rather than Pauli sums.
pub fn phase_point_from_vectors(u: &PhasePointIndex) -> Result<CMatrix> {
    let d = u.d();
    let dim = d as usize;
    let uu = u.components();
    let mut m = CMatrix::identity(dim).scale_re(-1.0);
    let mut e = vec![ZERO; dim];
    e[uu[0] as usize] = ONE;
    m = &m + &CMatrix::outer(&e, &e);
    for b in 1..=dim {
        let v = mub_vector(b as u32 - 1, uu[b], d)?;
        m = &m + &CMatrix::outer(&v, &v);
    }
    Ok(m.scale_re(1.0 / d as f64))
}

fn check_state(rho: &CMatrix, d: u32) -> Result<()> {
    let dim = d as usize;
    if rho.rows() != dim || rho.cols() != dim {
        return Err(Error::shape(format!(
            "expected a {dim}x{dim} density matrix, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    if !rho.is_hermitian(1e-9) {
        return Err(Error::contract("state is not Hermitian"));
    }
    if (rho.trace() - ONE).norm() > 1e-9 {
        return Err(Error::contract(format!(
            "state has trace {} (expected 1)",
            rho.trace()
        )));
    }
    Ok(())
}

/// `Tr(rho A(u))`.
pub fn wigner_value(rho: &CMatrix, u: &PhasePointIndex) -> Result<f64> {
    check_state(rho, u.d())?;
    let a = phase_point_operator(u)?;
    Ok(a.matrix.hs_inner(rho).re)
}

/// Coefficients `M(u)` such that `Tr(rho A(u)) = (1/d^2) sum_l M_l conj(c_l)`
/// where `c_l = Tr(P_l^dagger rho)` runs over all Pauli labels in
/// [`PauliLabel::index`] order.
pub fn wigner_kernel(u: &PhasePointIndex) -> Result<Vec<C64>> {
    let d = u.d();
    let mut m = vec![ZERO; (d * d) as usize];
    m[0] = ONE;
    for (b, &ub) in u.components().iter().enumerate() {
        let label = mub_label(d, b)?;
        for q in 1..d {
            let pq = label.power(q);
            m[pq.unphased().index()] += root_of_unity(d, -((q * ub) as i64)) * pq.phase_factor();
        }
    }
    Ok(m)
}

/// [`wigner_value`] through the Pauli-coefficient dot product.
pub fn wigner_value_dot(rho: &CMatrix, u: &PhasePointIndex) -> Result<f64> {
    let d = u.d();
    check_state(rho, d)?;
    let c = pauli_coefficients(rho, d, 1)?;
    let m = wigner_kernel(u)?;
    let s: C64 = m
        .iter()
        .zip(c.as_slice())
        .map(|(mv, cv)| mv * cv.conj())
        .sum();
    Ok(s.re / (d * d) as f64)
}

/// Most negative Wigner value and where it occurs.
#[derive(Debug, Clone, Serialize)]
pub struct NegativityReport {
    /// `max(0, -min_u Tr(rho A(u)))`.
    pub negativity: f64,
    pub min_value: f64,
    pub argmin: PhasePointIndex,
}

/// Negativity of `rho`.
///
/// `Tr(rho A(u)) = (1/d)(sum_b p_b[u_b] - 1)` separates over the bases, so the
/// global minimum is reached by picking the least likely outcome in every
/// basis. Exact for every prime `d`.
pub fn negativity(rho: &CMatrix) -> Result<NegativityReport> {
    let d = rho.rows() as u32;
    ensure_prime(d)?;
    check_state(rho, d)?;
    let space = PhaseSpace::new(d)?;
    let probs = space.basis_probabilities(rho);
    let mut u = Vec::with_capacity(probs.len());
    let mut total = 0.0;
    for row in &probs {
        let (k, p) =
            row.iter().enumerate().fold(
                (0, f64::INFINITY),
                |best, (k, &p)| if p < best.1 { (k, p) } else { best },
            );
        u.push(k as i64);
        total += p;
    }
    let min_value = (total - 1.0) / d as f64;
    Ok(NegativityReport {
        negativity: (-min_value).max(0.0),
        min_value,
        argmin: PhasePointIndex::new(d, &u)?,
    })
}

/// Brute-force negativity: assembles every `A(u)` and takes the trace.
/// Ties resolve to the lowest linear index.
pub fn negativity_scan(rho: &CMatrix, exec: Exec) -> Result<NegativityReport> {
    let d = rho.rows() as u32;
    ensure_prime(d)?;
    check_state(rho, d)?;
    let space = PhaseSpace::new(d)?;
    let total = PhasePointIndex::count(d);
    let best = map_chunks(exec, total, 4096, |range| {
        let mut best = (f64::INFINITY, usize::MAX);
        for idx in range {
            let u = PhasePointIndex::from_linear(d, idx);
            let v = space.operator(&u).hs_inner(rho).re;
            if v < best.0 {
                best = (v, idx);
            }
        }
        best
    })
    .into_iter()
    .fold((f64::INFINITY, usize::MAX), |a, b| {
        if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    });
    Ok(NegativityReport {
        negativity: (-best.0).max(0.0),
        min_value: best.0,
        argmin: PhasePointIndex::from_linear(d, best.1),
    })
}

/// `p* = 1 - 1/(d^2 N + 1)`.
pub fn robustness_from_negativity(negativity: f64, d: u32) -> f64 {
    let n = negativity.abs();
    1.0 - 1.0 / ((d * d) as f64 * n + 1.0)
}

/// Depolarizing robustness of a state: the smallest `p` with
/// `(1-p) rho + p I/d` inside the stabilizer hull.
pub fn state_robustness(rho: &CMatrix) -> Result<f64> {
    let n = negativity(rho)?;
    Ok(robustness_from_negativity(n.negativity, rho.rows() as u32))
}

/// `(|0> - |1>)/sqrt(2)`.
pub fn nu1(d: u32) -> Result<Vec<C64>> {
    ensure_prime(d)?;
    let mut v = vec![ZERO; d as usize];
    let s = 0.5f64.sqrt();
    v[0] = C64::new(s, 0.0);
    v[1] = C64::new(-s, 0.0);
    Ok(v)
}

/// One member of the maximally robust family.
#[derive(Debug, Clone)]
pub struct RobustState {
    /// Which `-1/d` eigenvector of `A(u*)` was displaced.
    pub eigenvector: usize,
    pub displacement: PauliLabel,
    pub vector: Vec<C64>,
}

/// Pure states with negativity `1/d`: an orthonormal basis of the `-1/d`
/// eigenspace of `A(u*)` (starting with `nu1`), displaced by all `d^2` Paulis.
pub fn robust_state_family(d: u32) -> Result<Vec<RobustState>> {
    ensure_odd_prime(d)?;
    let target = -1.0 / d as f64;
    let a = phase_point_operator(&PhasePointIndex::u_star(d)?)?.matrix;
    let eig = hermitian_eig(&a)?;
    let want = (d as usize - 1) / 2;
    let space: Vec<Vec<C64>> = (0..eig.values.len())
        .filter(|&k| (eig.values[k] - target).abs() < 1e-9)
        .map(|k| eig.vector(k))
        .collect();
    if space.len() != want {
        return Err(Error::Verification(format!(
            "A(u*) has {} eigenvalues equal to -1/{d}, expected {want}",
            space.len()
        )));
    }
    let first = nu1(d)?;
    let residual = a.mat_vec(&first);
    if residual
        .iter()
        .zip(&first)
        .any(|(r, v)| (r - v * target).norm() > 1e-9)
    {
        return Err(Error::Verification(
            "nu1 is not a -1/d eigenvector of A(u*)".into(),
        ));
    }
    let mut basis = vec![first];
    for v in space {
        if basis.len() == want {
            break;
        }
        let mut w = v;
        for b in &basis {
            let o = inner(b, &w);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= o * bi;
            }
        }
        let n = norm(&w);
        if n > 1e-6 {
            basis.push(w.into_iter().map(|x| x / n).collect());
        }
    }
    if basis.len() != want {
        return Err(Error::Verification(
            "could not complete the -1/d eigenspace basis".into(),
        ));
    }
    let paulis = PauliLabel::all(d, 1)?;
    let mut out = Vec::with_capacity(want * paulis.len());
    for (i, v) in basis.iter().enumerate() {
        for p in &paulis {
            out.push(RobustState {
                eigenvector: i,
                displacement: *p,
                vector: p.apply(v),
            });
        }
    }
    Ok(out)
}

/// Smallest eigenvalue found among a set of phase-point operators.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumScan {
    pub operators: usize,
    pub min_eigenvalue: f64,
    pub argmin: PhasePointIndex,
}

fn scan_indices(d: u32, indices: &[usize], exec: Exec) -> Result<SpectrumScan> {
    let space = PhaseSpace::new(d)?;
    let vals = map_range(exec, indices.len(), |i| {
        let u = PhasePointIndex::from_linear(d, indices[i]);
        hermitian_eig(&space.operator(&u)).map(|e| e.min())
    });
    let mut best = (f64::INFINITY, 0usize);
    for (i, v) in vals.into_iter().enumerate() {
        let v = v?;
        if v < best.0 {
            best = (v, i);
        }
    }
    Ok(SpectrumScan {
        operators: indices.len(),
        min_eigenvalue: best.0,
        argmin: PhasePointIndex::from_linear(d, indices[best.1]),
    })
}

/// Minimum eigenvalue over all `d^{d+1}` phase-point operators.
pub fn phase_point_spectrum_scan(d: u32, exec: Exec) -> Result<SpectrumScan> {
    ensure_prime(d)?;
    let idx: Vec<usize> = (0..PhasePointIndex::count(d)).collect();
    scan_indices(d, &idx, exec)
}

/// Minimum eigenvalue over `samples` uniformly random phase-point operators.
pub fn phase_point_spectrum_sample(
    d: u32,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<SpectrumScan> {
    ensure_prime(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = PhasePointIndex::count(d);
    let idx: Vec<usize> = (0..samples).map(|_| rng.random_range(0..total)).collect();
    scan_indices(d, &idx, exec)
}

/// Named single-qudit states: `maxmixed`, `nu1`, and (qubits only) `T`,
/// the pure state with Bloch vector `(1,1,1)/sqrt(3)`.
pub fn preset_state(name: &str, d: u32) -> Result<CMatrix> {
    ensure_prime(d)?;
    let dim = d as usize;
    match name.to_ascii_lowercase().as_str() {
        "maxmixed" | "mixed" => Ok(CMatrix::identity(dim).scale_re(1.0 / d as f64)),
        "nu1" => {
            let v = nu1(d)?;
            Ok(CMatrix::outer(&v, &v))
        }
        "t" => {
            if d != 2 {
                return Err(Error::UnsupportedDimension {
                    d,
                    reason: "the T preset is a qubit state",
                });
            }
            let r = 1.0 / 3f64.sqrt();
            Ok(CMatrix::from_rows(&[
                vec![C64::new((1.0 + r) / 2.0, 0.0), C64::new(r / 2.0, -r / 2.0)],
                vec![C64::new(r / 2.0, r / 2.0), C64::new((1.0 - r) / 2.0, 0.0)],
            ])?)
        }
        other => Err(Error::contract(format!(
            "unknown preset {other:?} (expected nu1, T or maxmixed)"
        ))),
    }
}
