//! Clifford-polytope witnesses: construction from codes or projector
//! tuples, facet certification against the Clifford Choi vertices, local
//! Clifford orbits, and noisy-gate membership tests.

mod file;

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

pub use file::{load_witness_file, parse_witness, save_witness_file, witness_to_string};

use crate::clifford::{choi_ket, ChoiVector, CliffordGroup};
use crate::error::{ensure_prime, Error, Result};
use crate::exec::{map_range, Exec};
use crate::linalg::{hermitian_eig, numerical_rank, CMatrix, RMatrix, C64, DEFAULT_RANK_TOL};
use crate::pauli::PauliLabel;
use crate::stabilizer::{code_logical_basis, projector_two, CodeId};
use crate::wigner::{phase_point_operator, PhasePointIndex};

/// Default tolerance for `<J|W|J> = 0`.
pub const DEFAULT_TOL_SAT: f64 = 1e-9;

/// Rounding scale for witness dedup.
const ORBIT_KEY_SCALE: f64 = 1e9;

/// Two-qudit projector index `Pi_(x1,x2|z1,z2)[k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ProjectorTuple {
    pub x1: u32,
    pub x2: u32,
    pub z1: u32,
    pub z2: u32,
    pub k: u32,
}

impl ProjectorTuple {
    pub fn new(x1: u32, x2: u32, z1: u32, z2: u32, k: u32) -> Self {
        Self { x1, x2, z1, z2, k }
    }

    pub fn projector(&self, d: u32) -> Result<CMatrix> {
        projector_two(self.x1, self.x2, self.z1, self.z2, self.k, d)
    }

    fn validate(&self, d: u32) -> std::result::Result<(), String> {
        let all = [self.x1, self.x2, self.z1, self.z2, self.k];
        if all.iter().any(|&v| v >= d) {
            return Err(format!("entries of {self} must lie in 0..{d}"));
        }
        if all[..4].iter().all(|&v| v == 0) {
            return Err("the identity label has no projector".into());
        }
        Ok(())
    }
}

impl fmt::Display for ProjectorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.x1, self.x2, self.z1, self.z2, self.k
        )
    }
}

/// Where a witness came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Decoded through a two-qudit code and tested against `A(u)`.
    Code { code: CodeId, u: PhasePointIndex },
    /// Built from a projector tuple list.
    Tuples,
    /// Supplied directly, or obtained by conjugation.
    Matrix,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Code { code, u } => {
                let parts: Vec<String> = u.components().iter().map(|v| v.to_string()).collect();
                write!(f, "{code}:{}", parts.join(","))
            }
            Provenance::Tuples => f.write_str("tuples"),
            Provenance::Matrix => f.write_str("matrix"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Unknown,
    /// Valid and saturated by a full-rank vertex set.
    Facet,
    /// Valid but the saturating vertices are rank deficient.
    Peak,
    /// Some Clifford vertex has a negative value: the hyperplane cuts
    /// through the polytope interior.
    Interior,
}

/// A Hermitian two-qudit operator `W` with `<J_C|W|J_C> >= 0` expected for
/// every Clifford `C`, normalized to unit trace.
#[derive(Debug, Clone)]
pub struct Witness {
    pub d: u32,
    pub matrix: CMatrix,
    pub provenance: Provenance,
    pub tuples: Option<Vec<ProjectorTuple>>,
    pub classification: Classification,
}

impl Witness {
    /// Wraps a Hermitian `d^2 x d^2` matrix, rescaled to unit trace.
    pub fn from_matrix(d: u32, matrix: CMatrix) -> Result<Self> {
        ensure_prime(d)?;
        let dd = (d * d) as usize;
        if matrix.rows() != dd || matrix.cols() != dd {
            return Err(Error::shape(format!("witness for d={d} must be {dd}x{dd}")));
        }
        if !matrix.is_hermitian(1e-9) {
            return Err(Error::contract("witness matrix is not Hermitian"));
        }
        let tr = matrix.trace().re;
        if tr <= 1e-12 {
            return Err(Error::contract(
                "witness matrix needs a positive trace to be normalized",
            ));
        }
        Ok(Self {
            d,
            matrix: matrix.scale_re(1.0 / tr),
            provenance: Provenance::Matrix,
            tuples: None,
            classification: Classification::Unknown,
        })
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Sorted eigenvalues.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eig(&self.matrix)?.values)
    }

    /// `<J_U|W|J_U>`.
    pub fn value_on(&self, ket: &[C64]) -> f64 {
        self.matrix.expectation(ket).re
    }

    /// `(C1 (x) C2) W (C1 (x) C2)^dagger`.
    pub fn conjugated(&self, c1: &CMatrix, c2: &CMatrix) -> Witness {
        Witness {
            d: self.d,
            matrix: self.matrix.conjugate_by(&c1.kron(c2)),
            provenance: Provenance::Matrix,
            tuples: None,
            classification: self.classification,
        }
    }

    /// Hash of the entries rounded at the orbit dedup scale.
    pub fn dedup_key(&self) -> u128 {
        matrix_hash(&self.matrix)
    }
}

fn matrix_hash(m: &CMatrix) -> u128 {
    let key = m.rounded_key(ORBIT_KEY_SCALE);
    let mut h1 = DefaultHasher::new();
    key.hash(&mut h1);
    let mut h2 = DefaultHasher::new();
    0xa5a5_5a5au32.hash(&mut h2);
    key.hash(&mut h2);
    ((h1.finish() as u128) << 64) | h2.finish() as u128
}

/// Witness from the phase-point operator `A(u)` pushed through a code:
/// the unit-trace projection of `V A(u) V^dagger` onto the identity and the
/// weight-2 Pauli operators, where `V` is the code's encoding isometry.
/// On weight-2 states `tau`, `Tr(W tau) = Tr(A(u) decode(tau))` up to a
/// positive factor.
pub fn derive_witness(code: CodeId, u: &PhasePointIndex) -> Result<Witness> {
    let d = u.d();
    let stab = code_logical_basis(code, d)?;
    let a = phase_point_operator(u)?;
    let lifted = a.matrix.conjugate_by(&stab.isometry());
    let dd = (d * d) as usize;
    let norm = 1.0 / (dd * dd) as f64;
    let mut w = CMatrix::identity(dd).scale(lifted.trace() * norm);
    for label in PauliLabel::all(d, 2)? {
        if !(label.acts_on(0) && label.acts_on(1)) {
            continue;
        }
        let c = label.trace_dagger_with(&lifted);
        if c.norm() < 1e-14 {
            continue;
        }
        let coeff = c * norm;
        for j in 0..dd {
            let (t, p) = label.apply_to_basis(j);
            w[(t, j)] += coeff * p;
        }
    }
    let tr = w.trace().re;
    Ok(Witness {
        d,
        matrix: w.scale_re(1.0 / tr),
        provenance: Provenance::Code { code, u: u.clone() },
        tuples: None,
        classification: Classification::Unknown,
    })
}

/// `W = (sum Pi - ((M - 1)/d) I) / d` over the `M` distinct projectors named
/// by `tuples`; repeated projectors count once. The result has unit trace.
pub fn witness_from_tuples(tuples: &[ProjectorTuple], d: u32) -> Result<Witness> {
    ensure_prime(d)?;
    if tuples.is_empty() {
        return Err(Error::contract(
            "a tuple witness needs at least one projector",
        ));
    }
    let dd = (d * d) as usize;
    let mut seen = HashMap::new();
    let mut sum = CMatrix::zeros(dd, dd);
    for (i, t) in tuples.iter().enumerate() {
        t.validate(d)
            .map_err(|msg| Error::Parse { line: i + 1, msg })?;
        let p = t.projector(d)?;
        if seen.insert(p.rounded_key(ORBIT_KEY_SCALE), ()).is_none() {
            sum = &sum + &p;
        }
    }
    let m = seen.len() as f64;
    let offset = (m - 1.0) / d as f64;
    let w = (&sum - &CMatrix::identity(dd).scale_re(offset)).scale_re(1.0 / d as f64);
    Ok(Witness {
        d,
        matrix: w,
        provenance: Provenance::Tuples,
        tuples: Some(tuples.to_vec()),
        classification: Classification::Unknown,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub tol_sat: f64,
    pub rank_tol: f64,
    pub exec: Exec,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            tol_sat: DEFAULT_TOL_SAT,
            rank_tol: DEFAULT_RANK_TOL,
            exec: Exec::default(),
        }
    }
}

/// Outcome of checking a witness against all Clifford vertices.
#[derive(Debug, Clone, Serialize)]
pub struct FacetReport {
    pub saturating_count: usize,
    pub rank: usize,
    pub is_facet: bool,
    pub min_vertex_value: f64,
    pub classification: Classification,
    /// Positions (in enumeration order) of the saturating vertices.
    #[serde(skip)]
    pub saturating: Vec<usize>,
}

/// `<J_i|W|J_i>` for every vertex.
pub fn vertex_values(w: &Witness, vertices: &[ChoiVector], exec: Exec) -> Vec<f64> {
    map_range(exec, vertices.len(), |i| w.value_on(&vertices[i].j_state))
}

/// Condition 1 (`min_i <J_i|W|J_i> >= -tol_sat`) and Condition 2 (the
/// saturating vertices span all `(d^2-1)^2` real dimensions).
pub fn certify(w: &Witness, vertices: &[ChoiVector], opts: &CertifyOptions) -> Result<FacetReport> {
    let Some(first) = vertices.first() else {
        return Err(Error::contract("no vertices to certify against"));
    };
    if vertices.iter().any(|v| v.d != w.d) || first.d != w.d {
        return Err(Error::shape(format!(
            "witness has d={} but vertices have d={}",
            w.d, first.d
        )));
    }
    let values = vertex_values(w, vertices, opts.exec);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let saturating: Vec<usize> = (0..values.len())
        .filter(|&i| values[i].abs() <= opts.tol_sat)
        .collect();
    let dim = ((w.d * w.d - 1) * (w.d * w.d - 1)) as usize;
    let rank = if saturating.is_empty() {
        0
    } else {
        let rows: Vec<&[f64]> = saturating
            .iter()
            .map(|&i| vertices[i].real_vec.as_slice())
            .collect();
        numerical_rank(&RMatrix::from_rows(&rows)?, opts.rank_tol)?
    };
    let valid = min >= -opts.tol_sat;
    let classification = if !valid {
        Classification::Interior
    } else if rank == dim {
        Classification::Facet
    } else {
        Classification::Peak
    };
    Ok(FacetReport {
        saturating_count: saturating.len(),
        rank,
        is_facet: classification == Classification::Facet,
        min_vertex_value: min,
        classification,
        saturating,
    })
}

fn orbit_rows(w: &Witness, group: &CliffordGroup, exec: Exec) -> Result<Vec<Vec<(u128, usize)>>> {
    if group.d() != w.d {
        return Err(Error::shape(format!(
            "witness has d={} but the group has d={}",
            w.d,
            group.d()
        )));
    }
    let n = group.len();
    Ok(map_range(exec, n, |i| {
        let ci = &group.get(i).matrix;
        let mut row: Vec<(u128, usize)> = Vec::new();
        let mut local = HashMap::new();
        for j in 0..n {
            let h = w.conjugated(ci, &group.get(j).matrix).dedup_key();
            if local.insert(h, ()).is_none() {
                row.push((h, j));
            }
        }
        row
    }))
}

/// Distinct witnesses `(C_i (x) C_j) W (C_i (x) C_j)^dagger`, in order of
/// first appearance over `(i, j)`.
pub fn orbit(w: &Witness, group: &CliffordGroup, exec: Exec) -> Result<Vec<Witness>> {
    let rows = orbit_rows(w, group, exec)?;
    let mut seen = HashMap::new();
    let mut pairs = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        for (h, j) in row {
            if seen.insert(h, ()).is_none() {
                pairs.push((i, j));
            }
        }
    }
    Ok(map_range(exec, pairs.len(), |k| {
        let (i, j) = pairs[k];
        w.conjugated(&group.get(i).matrix, &group.get(j).matrix)
    }))
}

/// Dedup fingerprints of the orbit members. Fingerprints of different
/// witnesses can be merged to count distinct members of a union of orbits.
pub fn orbit_fingerprints(w: &Witness, group: &CliffordGroup, exec: Exec) -> Result<HashSet<u128>> {
    let rows = orbit_rows(w, group, exec)?;
    Ok(rows.into_iter().flatten().map(|(h, _)| h).collect())
}

/// Size of [`orbit`] without keeping the members.
pub fn orbit_size(w: &Witness, group: &CliffordGroup, exec: Exec) -> Result<usize> {
    Ok(orbit_fingerprints(w, group, exec)?.len())
}

/// Orbits of several witnesses merged into one deduplicated list.
pub fn orbit_union(ws: &[Witness], group: &CliffordGroup, exec: Exec) -> Result<Vec<Witness>> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for w in ws {
        for member in orbit(w, group, exec)? {
            if seen.insert(member.dedup_key(), ()).is_none() {
                out.push(member);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Outside,
    Undetermined,
}

/// Whether the depolarized gate `(1-p)|J_U><J_U| + p I/d^2` lies in the
/// Clifford polytope. `Inside` is only reported when `complete` says the
/// facet list describes the whole polytope.
pub fn gate_membership(
    u: &CMatrix,
    p: f64,
    facets: &[Witness],
    complete: bool,
    tol: f64,
) -> Result<Membership> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::contract(format!("noise rate {p} is outside [0, 1]")));
    }
    let ket = choi_ket(u)?;
    let dd = (u.rows() * u.rows()) as f64;
    for w in facets {
        if w.matrix.rows() != ket.len() {
            return Err(Error::shape("facet and gate dimensions differ"));
        }
        let v = (1.0 - p) * w.value_on(&ket) + p * w.trace() / dd;
        if v < -tol {
            return Ok(Membership::Outside);
        }
    }
    Ok(if complete {
        Membership::Inside
    } else {
        Membership::Undetermined
    })
}

/// True when every entry of `a` and `b` agree to `tol`.
pub fn same_witness(a: &Witness, b: &Witness, tol: f64) -> bool {
    a.d == b.d && a.matrix.max_abs_diff(&b.matrix) <= tol
}
