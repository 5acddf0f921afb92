#![allow(dead_code, clippy::needless_range_loop)]

use obstruct::catalog;
use obstruct::geometry::Scene;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The four catalog scenes with their default parameters.
pub fn catalog_scenes() -> Vec<Scene> {
    vec![catalog::flat_torus(1.0), catalog::fuzzy_sphere(1.0), catalog::podles_sphere(2.0), catalog::su2_dual()]
}

/// Uniform point in the inner 90% of the sample box, away from excluded regions.
pub fn random_point(scene: &Scene, rng: &mut impl Rng) -> Vec<f64> {
    let d = scene.domain();
    loop {
        let p: Vec<f64> = d
            .lower
            .iter()
            .zip(&d.upper)
            .map(|(lo, hi)| {
                let mid = 0.5 * (lo + hi);
                let half = 0.45 * (hi - lo);
                rng.gen_range(mid - half..mid + half)
            })
            .collect();
        if !scene.is_excluded(&p).unwrap() {
            return p;
        }
    }
}

fn constant(rng: &mut impl Rng) -> String {
    format!("{:.2}", rng.gen_range(0.25..2.0))
}

/// A random smooth expression in `coords`, bounded on bounded boxes: divisions,
/// roots and logarithms only ever see arguments of the form `c + u^2`.
pub fn random_expr(rng: &mut impl Rng, coords: &[&str], depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.7) { coords[rng.gen_range(0..coords.len())].to_string() } else { constant(rng) };
    }
    let a = random_expr(rng, coords, depth - 1);
    match rng.gen_range(0..11) {
        0 => format!("{a} + {}", random_expr(rng, coords, depth - 1)),
        1 => format!("{a} - ({})", random_expr(rng, coords, depth - 1)),
        2 | 3 => format!("({a})*({})", random_expr(rng, coords, depth - 1)),
        4 => format!("({a})/({} + ({})^2)", constant(rng), random_expr(rng, coords, depth - 1)),
        5 => format!("({a})^{}", rng.gen_range(2..4)),
        6 => format!("sin({a})"),
        7 => format!("cos({a})"),
        8 => format!("exp({}*sin({a}))", constant(rng)),
        9 => format!("sqrt(1 + ({a})^2)"),
        _ => format!("log({} + ({a})^2)", constant(rng)),
    }
}

pub fn coordinate_names(scene: &Scene) -> Vec<&str> {
    scene.coordinates().iter().map(String::as_str).collect()
}

fn det(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut d = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs())).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    d
}

fn plain(scene: &Scene, which: &obstruct::tensor::Tensor<obstruct::expr::Expr>, p: &[f64]) -> Vec<Vec<f64>> {
    let n = scene.dim();
    (0..n).map(|i| (0..n).map(|j| which[[i, j]].eval_real(p, scene.params()).unwrap()).collect()).collect()
}

/// `ρ π^ij` with `ρ = sqrt|det g|`: the components of the (n-2)-form `π⌟ε`
/// up to the fixed Levi-Civita symbol.
fn density_pi(scene: &Scene, p: &[f64]) -> (f64, Vec<Vec<f64>>) {
    let rho = det(plain(scene, scene.metric(), p)).abs().sqrt();
    let pi = plain(scene, scene.poisson(), p);
    (rho, pi.into_iter().map(|row| row.into_iter().map(|x| rho * x).collect()).collect())
}

/// Finite-difference oracle for the divergence via `d(π⌟ε)`: in
/// components, `d(π⌟ε)` is `∂_j(ρ π^ij)` contracted into `ε`, so the vector
/// it corresponds to is `ρ^-1 ∂_j(ρ π^ij)`. Fourth-order central
/// differences on plain evaluations; no jets involved.
pub fn fd_divergence(scene: &Scene, p: &[f64]) -> Vec<f64> {
    let n = scene.dim();
    let h = 1e-3;
    let at = |j: usize, t: f64| {
        let mut q = p.to_vec();
        q[j] += t;
        density_pi(scene, &q).1
    };
    let (rho, _) = density_pi(scene, p);
    let mut out = vec![0.0; n];
    for j in 0..n {
        let (m2, m1, p1, p2) = (at(j, -2.0 * h), at(j, -h), at(j, h), at(j, 2.0 * h));
        for i in 0..n {
            let d = (m2[i][j] - 8.0 * m1[i][j] + 8.0 * p1[i][j] - p2[i][j]) / (12.0 * h);
            out[i] += d / rho;
        }
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn basis(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}
