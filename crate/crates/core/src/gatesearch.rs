//! Depolarizing robustness of gates against a facet, the eigenvalue bound,
//! and a restarted simplex search for gates that minimize `<J_U|W|J_U>`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clifford::choi_ket;
use crate::data;
use crate::error::{Error, Result};
use crate::exec::{map_range, Exec};
use crate::linalg::{hermitian_eig, CMatrix, C64};
use crate::wigner::{negativity, nu1, preset_state, robustness_from_negativity};
use crate::witness::Witness;

fn check_unit_trace(w: &Witness) -> Result<()> {
    let tr = w.matrix.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::contract(format!(
            "witness trace is {tr}; normalize it to 1 first"
        )));
    }
    Ok(())
}

/// `<J_U|W|J_U>` for a unit-trace witness.
pub fn gate_value(u: &CMatrix, w: &Witness) -> Result<f64> {
    check_unit_trace(w)?;
    if u.rows() != w.d as usize {
        return Err(Error::shape(format!(
            "gate is {}x{} but the witness has d={}",
            u.rows(),
            u.cols(),
            w.d
        )));
    }
    let ket = choi_ket(u)?;
    let v = w.matrix.expectation(&ket);
    if v.im.abs() > 1e-10 {
        return Err(Error::Verification(format!(
            "gate value has imaginary part {}",
            v.im
        )));
    }
    Ok(v.re)
}

/// `p* = 1 - 1/(d^2 |v| + 1)`.
pub fn robustness_from_value(value: f64, d: u32) -> f64 {
    1.0 - 1.0 / ((d * d) as f64 * value.abs() + 1.0)
}

/// Noise rate at which the depolarized gate reaches the facet.
pub fn gate_robustness(u: &CMatrix, w: &Witness) -> Result<f64> {
    let v = gate_value(u, w)?;
    if v >= 0.0 {
        return Err(Error::contract(format!(
            "gate value {v} is not negative; the facet certifies no threshold"
        )));
    }
    Ok(robustness_from_value(v, w.d))
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenBound {
    pub lambda_min: f64,
    /// Upper bound on the robustness of any gate against this facet.
    pub bound: f64,
    #[serde(skip)]
    pub eigenvector: Vec<C64>,
}

/// `1 - 1/(d^2 |lambda_min| + 1)`, or 0 when `W` is positive semidefinite.
pub fn eigen_bound(w: &Witness) -> Result<EigenBound> {
    check_unit_trace(w)?;
    let e = hermitian_eig(&w.matrix)?;
    let lambda_min = e.min();
    let bound = if lambda_min < 0.0 {
        robustness_from_value(lambda_min, w.d)
    } else {
        0.0
    };
    Ok(EigenBound {
        lambda_min,
        bound,
        eigenvector: e.vector(0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parametrization {
    /// `U = exp(iH)` with `H` Hermitian.
    General,
    /// Permutation matrix with phases.
    Monomial,
    Both,
}

impl fmt::Display for Parametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parametrization::General => "general",
            Parametrization::Monomial => "monomial",
            Parametrization::Both => "both",
        })
    }
}

impl FromStr for Parametrization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "general" | "general-unitary" => Ok(Parametrization::General),
            "monomial" => Ok(Parametrization::Monomial),
            "both" => Ok(Parametrization::Both),
            other => Err(Error::contract(format!(
                "unknown parametrization {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateSearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub step_tol: f64,
    pub parametrization: Parametrization,
}

impl Default for GateSearchConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 2000,
            seed: 0,
            step_tol: 1e-10,
            parametrization: Parametrization::Both,
        }
    }
}

/// Best gate found. Not a proof of global optimality.
#[derive(Debug, Clone)]
pub struct GateSearchResult {
    pub unitary: CMatrix,
    pub value: f64,
    pub mode: Parametrization,
    /// Index of the winning task.
    pub task: usize,
    pub tasks: usize,
}

/// Minimizes `f` with the Nelder-Mead simplex method. Stops when the spread
/// of function values falls below `tol` or after `max_iters` iterations.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    max_iters: usize,
    tol: f64,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    if n == 0 {
        return (Vec::new(), f(x0));
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        simplex.push(x);
    }
    let mut vals: Vec<f64> = simplex.iter().map(|x| f(x)).collect();
    let combine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect()
    };
    for _ in 0..max_iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();
        if (vals[n] - vals[0]).abs() <= tol {
            break;
        }
        let mut centroid = vec![0.0; n];
        for x in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        let xr = combine(&centroid, &simplex[n], -1.0);
        let fr = f(&xr);
        if fr < vals[0] {
            let xe = combine(&centroid, &simplex[n], -2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[n] = xe;
                vals[n] = fe;
            } else {
                simplex[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            simplex[n] = xr;
            vals[n] = fr;
        } else {
            let (xc, fc) = if fr < vals[n] {
                let xc = combine(&centroid, &xr, 0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = combine(&centroid, &simplex[n], 0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < vals[n].min(fr) {
                simplex[n] = xc;
                vals[n] = fc;
            } else {
                for i in 1..=n {
                    simplex[i] = combine(&simplex[0], &simplex[i], 0.5);
                    vals[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=n)
        .min_by(|&a, &b| vals[a].total_cmp(&vals[b]))
        .expect("non-empty simplex");
    (simplex[best].clone(), vals[best])
}

/// Restarts the simplex around its last optimum until it stops improving.
fn polish(
    f: &impl Fn(&[f64]) -> f64,
    x0: Vec<f64>,
    step: f64,
    cfg: &GateSearchConfig,
) -> (Vec<f64>, f64) {
    let (mut x, mut fx) = nelder_mead(f, &x0, step, cfg.max_iters, cfg.step_tol);
    for round in 0..4 {
        let (y, fy) = nelder_mead(
            f,
            &x,
            step * 0.1f64.powi(round + 1),
            cfg.max_iters,
            cfg.step_tol,
        );
        let improved = fx - fy > cfg.step_tol;
        if fy < fx {
            x = y;
            fx = fy;
        }
        if !improved {
            break;
        }
    }
    (x, fx)
}

/// `exp(iH)` with `H` read from `d^2` reals: the diagonal, then the real
/// and imaginary parts of the upper triangle.
pub fn unitary_from_params(d: usize, p: &[f64]) -> Result<CMatrix> {
    let mut h = CMatrix::zeros(d, d);
    let mut it = p.iter();
    for i in 0..d {
        h[(i, i)] = C64::new(*it.next().unwrap_or(&0.0), 0.0);
    }
    for i in 0..d {
        for j in i + 1..d {
            let re = *it.next().unwrap_or(&0.0);
            let im = *it.next().unwrap_or(&0.0);
            h[(i, j)] = C64::new(re, im);
            h[(j, i)] = C64::new(re, -im);
        }
    }
    let e = hermitian_eig(&h)?;
    let mut u = CMatrix::zeros(d, d);
    for k in 0..d {
        let v = e.vector(k);
        let ph = C64::from_polar(1.0, e.values[k]);
        for r in 0..d {
            for c in 0..d {
                u[(r, c)] += ph * v[r] * v[c].conj();
            }
        }
    }
    Ok(u)
}

/// Monomial gate `U[perm[j], j] = e^{i theta_j}`.
pub fn monomial_unitary(perm: &[usize], theta: &[f64]) -> CMatrix {
    let d = perm.len();
    let mut u = CMatrix::zeros(d, d);
    for (j, &p) in perm.iter().enumerate() {
        u[(p, j)] = C64::from_polar(1.0, theta[j]);
    }
    u
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..d.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            break;
        };
        let j = (i + 1..d)
            .rev()
            .find(|&j| cur[j] > cur[i])
            .expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Largest `d` for which monomial mode walks every permutation.
const MAX_EXHAUSTIVE_PERMUTATIONS: usize = 7;

enum Task {
    General,
    Monomial(Vec<usize>),
}

/// Searches for the gate minimizing `<J_U|W|J_U>`. Each task owns a
/// generator seeded from `(seed, task index)`, and ties go to the lowest
/// task index, so results do not depend on thread count.
pub fn optimize_gate(w: &Witness, cfg: &GateSearchConfig, exec: Exec) -> Result<GateSearchResult> {
    check_unit_trace(w)?;
    if cfg.restarts == 0 || cfg.max_iters == 0 {
        return Err(Error::contract("restarts and max_iters must be positive"));
    }
    let d = w.d as usize;
    let mut tasks = Vec::new();
    if matches!(
        cfg.parametrization,
        Parametrization::General | Parametrization::Both
    ) {
        tasks.extend((0..cfg.restarts).map(|_| Task::General));
    }
    if matches!(
        cfg.parametrization,
        Parametrization::Monomial | Parametrization::Both
    ) {
        if d <= MAX_EXHAUSTIVE_PERMUTATIONS {
            let perms = permutations(d);
            let per = cfg.restarts.div_ceil(perms.len()).max(2);
            for p in perms {
                for _ in 0..per {
                    tasks.push(Task::Monomial(p.clone()));
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6d6f_6e6f);
            for _ in 0..cfg.restarts {
                let mut p: Vec<usize> = (0..d).collect();
                for i in (1..d).rev() {
                    p.swap(i, rng.random_range(0..=i));
                }
                tasks.push(Task::Monomial(p));
            }
        }
    }
    let results = map_range(
        exec,
        tasks.len(),
        |t| -> Result<(f64, CMatrix, Parametrization)> {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(t as u64);
            match &tasks[t] {
                Task::General => {
                    let x0: Vec<f64> = (0..d * d).map(|_| rng.random_range(-PI..PI)).collect();
                    let f = |p: &[f64]| match unitary_from_params(d, p) {
                        Ok(u) => gate_value(&u, w).unwrap_or(f64::INFINITY),
                        Err(_) => f64::INFINITY,
                    };
                    let (x, _) = polish(&f, x0, 0.5, cfg);
                    let u = unitary_from_params(d, &x)?;
                    Ok((gate_value(&u, w)?, u, Parametrization::General))
                }
                Task::Monomial(perm) => {
                    // <J|W|J> = (1/d) sum_{j,k} e^{-i th_j} W[(j, s_j), (k, s_k)] e^{i th_k}
                    let sub =
                        CMatrix::from_fn(d, d, |j, k| w.matrix[(j * d + perm[j], k * d + perm[k])]);
                    let f = |th: &[f64]| {
                        let ph: Vec<C64> = std::iter::once(0.0)
                            .chain(th.iter().copied())
                            .map(|t| C64::from_polar(1.0, t))
                            .collect();
                        sub.expectation(&ph).re / d as f64
                    };
                    let x0: Vec<f64> = (1..d).map(|_| rng.random_range(0.0..2.0 * PI)).collect();
                    let (x, _) = polish(&f, x0, 0.5, cfg);
                    let theta: Vec<f64> = std::iter::once(0.0).chain(x).collect();
                    let u = monomial_unitary(perm, &theta);
                    Ok((gate_value(&u, w)?, u, Parametrization::Monomial))
                }
            }
        },
    );
    let mut best: Option<(usize, f64, CMatrix, Parametrization)> = None;
    for (t, r) in results.into_iter().enumerate() {
        let (v, u, mode) = r?;
        if best.as_ref().is_none_or(|b| v < b.1) {
            best = Some((t, v, u, mode));
        }
    }
    let (task, value, unitary, mode) = best.expect("at least one task");
    Ok(GateSearchResult {
        unitary,
        value,
        mode,
        task,
        tasks: tasks.len(),
    })
}

/// One row of the robustness summary.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub d: u32,
    pub state_negativity: f64,
    pub p_star_state: f64,
    pub gate_value: f64,
    pub p_star_gate: f64,
}

/// Most robust state and the reference gate against its designated facet.
/// Deterministic; no search is run.
pub fn table_one(d: u32) -> Result<TableRow> {
    let rho = match d {
        2 => preset_state("T", 2)?,
        3 | 5 | 7 => {
            let v = nu1(d)?;
            CMatrix::outer(&v, &v)
        }
        _ => {
            return Err(Error::UnsupportedDimension {
                d,
                reason: "the summary covers d = 2, 3, 5, 7",
            })
        }
    };
    let n = negativity(&rho)?.negativity;
    let w = data::designated_facet(d)?;
    let u = data::optimal_gate(d)?;
    let v = gate_value(&u, &w)?;
    Ok(TableRow {
        d,
        state_negativity: n,
        p_star_state: robustness_from_negativity(n, d),
        gate_value: v,
        p_star_gate: gate_robustness(&u, &w)?,
    })
}
