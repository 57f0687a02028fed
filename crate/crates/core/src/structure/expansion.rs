use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::structure::components_and_giant;

pub const EXACT_PHI_MAX_VERTICES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiMethod {
    Exact,
    CheegerInterval,
}

/// Isoperimetric constant: exact value (`lower == upper`) or the interval
/// `[gamma / 2, sqrt(2 gamma)]` implied by `phi^2 / 2 <= gamma <= 2 phi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phi {
    pub lower: f64,
    pub upper: f64,
    pub method: PhiMethod,
}

impl Phi {
    /// Exact value, or the conservative lower end of the interval.
    pub fn value(&self) -> f64 {
        self.lower
    }
}

fn check_connected(g: &Graph) -> Result<()> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (comps, _) = components_and_giant(g)?;
    if comps.len() > 1 {
        return Err(Error::NotConnected);
    }
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(())
}

/// Minimum of `|boundary(S)| / d(S)` over nonempty `S` with `d(S) <= |E|`,
/// by Gray-code enumeration of all subsets.
pub fn isoperimetric_exact(g: &Graph) -> Result<f64> {
    let n = g.n();
    if n > EXACT_PHI_MAX_VERTICES {
        return Err(Error::TooLargeForExact { got: n, max: EXACT_PHI_MAX_VERTICES });
    }
    check_connected(g)?;
    // mult[v][u]: number of non-loop edges between v and u.
    let mut mult = vec![vec![0i64; n]; n];
    for &(u, v) in g.edges() {
        if u != v {
            mult[u][v] += 1;
            mult[v][u] += 1;
        }
    }
    let nonloop_deg: Vec<i64> = (0..n).map(|v| mult[v].iter().sum()).collect();
    let deg: Vec<i64> = g.degrees().into_iter().map(|d| d as i64).collect();
    let simple = g.is_simple();
    let masks: Vec<u32> = (0..n).map(|v| (0..n).filter(|&u| mult[v][u] > 0).fold(0u32, |m, u| m | (1 << u))).collect();
    let total = g.edge_count() as i64;
    let mut set = 0u32;
    let (mut boundary, mut volume) = (0i64, 0i64);
    let mut best = f64::INFINITY;
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let into_s = if simple {
            (masks[v] & set).count_ones() as i64
        } else {
            (0..n).filter(|&u| set & (1 << u) != 0).map(|u| mult[v][u]).sum()
        };
        if set & (1 << v) == 0 {
            boundary += nonloop_deg[v] - 2 * into_s;
            volume += deg[v];
            set |= 1 << v;
        } else {
            set &= !(1 << v);
            boundary -= nonloop_deg[v] - 2 * into_s;
            volume -= deg[v];
        }
        if set != 0 && volume <= total && volume > 0 {
            let ratio = boundary as f64 / volume as f64;
            if ratio < best {
                best = ratio;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Warm start in the symmetrized basis; ignored if the length is wrong.
    pub start: Option<Vec<f64>>,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { tol: 1e-9, max_iter: 100_000, start: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGap {
    pub gamma: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip)]
    pub vector: Vec<f64>,
}

pub fn spectral_gap(g: &Graph) -> Result<SpectralGap> {
    spectral_gap_with(g, &SpectralOptions::default())
}

/// `1 - lambda_2` for the walk `P = D^-1 A` by power iteration on the lazy
/// symmetric matrix `(I + D^-1/2 A D^-1/2) / 2`, deflating the Perron vector
/// `sqrt(d)`. Loops contribute 2 to `A[v][v]`.
pub fn spectral_gap_with(g: &Graph, opts: &SpectralOptions) -> Result<SpectralGap> {
    check_connected(g)?;
    let n = g.n();
    let deg: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
    let total: f64 = deg.iter().sum();
    let perron: Vec<f64> = deg.iter().map(|d| (d / total).sqrt()).collect();
    let apply = |x: &[f64], out: &mut [f64]| {
        for v in 0..n {
            let mut acc = 0.0;
            for &(w, _) in g.incident(v) {
                acc += x[w] * inv_sqrt[w];
            }
            out[v] = 0.5 * (x[v] + inv_sqrt[v] * acc);
        }
    };
    let deflate = |x: &mut [f64]| {
        let dot: f64 = x.iter().zip(&perron).map(|(a, b)| a * b).sum();
        for (xi, pi) in x.iter_mut().zip(&perron) {
            *xi -= dot * pi;
        }
    };
    let normalize = |x: &mut [f64]| -> f64 {
        let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 0.0 {
            x.iter_mut().for_each(|a| *a /= norm);
        }
        norm
    };
    if n == 1 {
        // A single vertex with loops: P = [1], no second eigenvalue.
        return Ok(SpectralGap { gamma: 0.0, residual: 0.0, iterations: 0, converged: true, vector: vec![0.0] });
    }
    let mut x: Vec<f64> = match &opts.start {
        Some(s) if s.len() == n => s.clone(),
        _ => (0..n).map(|i| ((i as f64 + 1.0) * 0.618_033_988_75).fract() - 0.5).collect(),
    };
    deflate(&mut x);
    if normalize(&mut x) < 1e-300 {
        x = (0..n).map(|i| ((i as f64 + 1.0) * 0.618_033_988_75).fract() - 0.5).collect();
        deflate(&mut x);
        normalize(&mut x);
    }
    let mut y = vec![0.0; n];
    let mut rho = 0.0;
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        apply(&x, &mut y);
        deflate(&mut y);
        rho = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        residual = x.iter().zip(&y).map(|(a, b)| (b - rho * a).powi(2)).sum::<f64>().sqrt();
        if normalize(&mut y) == 0.0 {
            // x lies in the kernel of the lazy matrix: eigenvalue 0.
            rho = 0.0;
            residual = 0.0;
            break;
        }
        std::mem::swap(&mut x, &mut y);
        if residual < opts.tol {
            break;
        }
    }
    let lambda2 = 2.0 * rho - 1.0;
    Ok(SpectralGap { gamma: 1.0 - lambda2, residual, iterations, converged: residual < opts.tol, vector: x })
}

/// Exact value up to 20 vertices when asked for; otherwise the interval
/// inverted from the Cheeger sandwich.
pub fn isoperimetric_constant(g: &Graph, method: PhiMethod) -> Result<Phi> {
    match method {
        PhiMethod::Exact => {
            let v = isoperimetric_exact(g)?;
            Ok(Phi { lower: v, upper: v, method })
        }
        PhiMethod::CheegerInterval => {
            let gamma = spectral_gap(g)?.gamma;
            Ok(cheeger_interval(gamma))
        }
    }
}

pub fn cheeger_interval(gamma: f64) -> Phi {
    Phi { lower: gamma / 2.0, upper: (2.0 * gamma).sqrt(), method: PhiMethod::CheegerInterval }
}
