#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use qudit_thresholds::linalg::{CMatrix, C64};
use qudit_thresholds::stabilizer::enumerate_stabilizer_states;
use rand::Rng;

/// Real coordinates of a Hermitian matrix: diagonal, then Re/Im of the
/// upper triangle.
pub fn hermitian_coords(m: &CMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut out: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(m[(i, j)].re);
            out.push(m[(i, j)].im);
        }
    }
    out
}

/// Lawson-Hanson non-negative least squares: `min |Ax - b|, x >= 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, f64) {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    for _ in 0..(3 * n + 10) {
        let w = a.transpose() * (b - a * &x);
        let cand = (0..n)
            .filter(|&j| !passive[j] && w[j] > 1e-12)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(j) = cand else { break };
        passive[j] = true;
        loop {
            let idx: Vec<usize> = (0..n).filter(|&k| passive[k]).collect();
            let sub = DMatrix::from_fn(a.nrows(), idx.len(), |r, c| a[(r, idx[c])]);
            let z_sub = sub
                .clone()
                .svd(true, true)
                .solve(b, 1e-12)
                .expect("svd solve");
            let mut z = DVector::zeros(n);
            for (c, &k) in idx.iter().enumerate() {
                z[k] = z_sub[c];
            }
            if idx.iter().all(|&k| z[k] > 0.0) {
                x = z;
                break;
            }
            let alpha = idx
                .iter()
                .filter(|&&k| z[k] <= 0.0)
                .map(|&k| x[k] / (x[k] - z[k]))
                .fold(f64::INFINITY, f64::min);
            x = &x + (z - &x) * alpha;
            for k in 0..n {
                if passive[k] && x[k] <= 1e-14 {
                    passive[k] = false;
                    x[k] = 0.0;
                }
            }
        }
    }
    let r = (b - a * &x).norm();
    (x, r)
}

/// Distance from `rho` to the convex hull of single-qudit stabilizer states,
/// measured as the NNLS residual in Hermitian coordinates.
pub fn stabilizer_hull_residual(rho: &CMatrix) -> f64 {
    let d = rho.rows() as u32;
    let states = enumerate_stabilizer_states(d).unwrap();
    let cols: Vec<Vec<f64>> = states
        .iter()
        .map(|s| hermitian_coords(&s.projector))
        .collect();
    let m = cols[0].len();
    let a = DMatrix::from_fn(m, cols.len(), |r, c| cols[c][r]);
    let b = DVector::from_vec(hermitian_coords(rho));
    nnls(&a, &b).1
}

pub fn random_ket(rng: &mut impl Rng, d: usize) -> Vec<C64> {
    // Box-Muller: r cos and r sin are independent normals
    let mut v: Vec<C64> = (0..d)
        .map(|_| {
            let (u1, u2): (f64, f64) = (rng.random_range(1e-300..1.0), rng.random_range(0.0..1.0));
            let r = (-2.0 * u1.ln()).sqrt();
            let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
            C64::new(r * c, r * s)
        })
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= n;
    }
    v
}

/// `(1-p)|psi><psi| + p I/d` for a random `psi` and `p`.
pub fn random_mixed_state(rng: &mut impl Rng, d: usize) -> CMatrix {
    let psi = random_ket(rng, d);
    let p: f64 = rng.random_range(0.0..1.0);
    let pure = CMatrix::outer(&psi, &psi).scale_re(1.0 - p);
    &pure + &CMatrix::identity(d).scale_re(p / d as f64)
}

/// Random unitary `exp(iH)`.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    let p: Vec<f64> = (0..d * d).map(|_| rng.random_range(-3.0..3.0)).collect();
    qudit_thresholds::gatesearch::unitary_from_params(d, &p).unwrap()
}

/// The displayed `d = 7` phase-point operator: counter-identity blocks on
/// `{0, 1}` and `{2, ..., 6}`, scaled by `1/7`.
pub fn displayed_a_star_d7() -> CMatrix {
    CMatrix::from_fn(7, 7, |r, c| {
        let hit = (r < 2 && c < 2 && r + c == 1) || (r >= 2 && c >= 2 && r + c == 8);
        C64::new(if hit { 1.0 / 7.0 } else { 0.0 }, 0.0)
    })
}
