//! Real critical points by multi-start Newton on the gradient system.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::OracleError;
use crate::poly::{Derivatives, Polynomial};

type C64 = Complex<f64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalOptions {
    /// Starts fill the cube `[-half_width, half_width]^n`.
    pub half_width: f64,
    /// Starts per axis; defaults to 40 in the plane and 14 in space.
    pub grid_n: Option<usize>,
    pub newton_tol: f64,
    pub dedup_radius: f64,
    /// Merge radius when either point is degenerate; Newton only converges
    /// linearly there.
    pub degenerate_radius: f64,
    /// Eigenvalues below this, relative to `max(1, |largest|)`, vanish.
    pub zero_eigenvalue: f64,
    /// Critical values below this in magnitude count as zero.
    pub zero_value: f64,
    /// Defaults to `(degree - 1)^nvars`.
    pub expected_mu: Option<usize>,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        CriticalOptions {
            half_width: 5.0,
            grid_n: None,
            newton_tol: 1e-10,
            dedup_radius: 1e-6,
            degenerate_radius: 1e-3,
            zero_eigenvalue: 1e-7,
            zero_value: 1e-8,
            expected_mu: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub coords: Vec<f64>,
    pub value: f64,
    /// Eigenvalue sign counts `(negative, zero, positive)` of the Hessian.
    pub signature: (usize, usize, usize),
    /// `None` at degenerate points.
    pub morse_index: Option<usize>,
    pub residual: f64,
    /// 1 at Morse points; estimated by splitting otherwise.
    pub multiplicity: usize,
}

impl CriticalPoint {
    pub fn is_degenerate(&self) -> bool {
        self.morse_index.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    /// Ascending by value, then coordinates.
    pub points: Vec<CriticalPoint>,
    pub real_count: usize,
    pub expected_mu: usize,
    /// `expected_mu` minus the total real multiplicity.
    pub complex_count: i64,
    /// Set when `complex_count` is odd or negative.
    pub suspect_missed: bool,
    /// `None` when a degenerate point or a zero critical value is present.
    pub ind: Option<i64>,
    pub zero_value: f64,
}

impl CriticalReport {
    /// The report of `f - c`, given the report of `f`.
    pub fn minus_constant(&self, c: f64) -> CriticalReport {
        let mut out = self.clone();
        for p in &mut out.points {
            p.value -= c;
        }
        out.ind = ind_of_points(&out.points, out.zero_value).ok();
        out
    }

    pub fn degenerate_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_degenerate()).count()
    }
}

fn gradient(d: &Derivatives, x: &[f64]) -> DVector<f64> {
    DVector::from_iterator(x.len(), d.gradient.iter().map(|g| g.eval(x)))
}

fn hessian(d: &Derivatives, x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    DMatrix::from_fn(n, n, |i, j| d.hessian[i][j].eval(x))
}

const MAX_STEP: f64 = 2.0;
/// Runs still this far from stationary after this many steps are chasing a
/// complex critical point.
const STALL_CHECK: usize = 40;
const STALL_GRADIENT: f64 = 1e-6;

fn newton(d: &Derivatives, start: &[f64], limit: f64) -> Option<Vec<f64>> {
    let mut x = DVector::from_column_slice(start);
    for iter in 0..300 {
        let g = gradient(d, x.as_slice());
        if iter == STALL_CHECK && g.norm() > STALL_GRADIENT {
            return None;
        }
        let h = hessian(d, x.as_slice());
        let scale = h.amax().max(1.0);
        let mut step = h.svd(true, true).solve(&g, 1e-14 * scale).ok()?;
        let len = step.norm();
        if len > MAX_STEP {
            step *= MAX_STEP / len;
        }
        x -= &step;
        if x.amax() > limit || !x.iter().all(|v| v.is_finite()) {
            return None;
        }
        if len <= 1e-15 * (1.0 + x.norm()) {
            break;
        }
    }
    Some(x.iter().copied().collect())
}

/// Signature and degeneracy flag. At degenerate points Newton stalls at a
/// distance of order `sqrt(eps)`, so their signature uses the coarser
/// threshold `sqrt(zero)`.
fn classify(h: &DMatrix<f64>, zero: f64, degenerate: bool) -> ((usize, usize, usize), bool) {
    let eig = h.clone().symmetric_eigen().eigenvalues;
    let scale = eig.amax().max(1.0);
    let degenerate = degenerate || eig.iter().any(|e| e.abs() < zero * scale);
    let tau = if degenerate { zero.sqrt() * scale } else { zero * scale };
    let neg = eig.iter().filter(|&&e| e < -tau).count();
    let pos = eig.iter().filter(|&&e| e > tau).count();
    ((neg, eig.len() - neg - pos, pos), degenerate)
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Number of complex critical points of `p + delta * c.(x - at)` near `at`,
/// which is the local multiplicity of the critical point `at` of `p`.
/// Only roots within `radius` of `at` count; keep it below the distance to
/// other critical points.
pub fn local_multiplicity(p: &Polynomial, at: &[f64], radius: f64) -> usize {
    const DELTA: f64 = 1e-8;
    const COEFFS: [f64; 3] = [0.5377, -0.8133, 0.2211];
    let n = p.nvars();
    let d = Derivatives::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut starts = Vec::new();
    for scale in [radius, radius / 10.0, radius / 100.0, radius / 1000.0] {
        for _ in 0..120 {
            let z: Vec<C64> = (0..n)
                .map(|i| C64::new(at[i] + scale * rng.gen_range(-1.0..1.0), scale * rng.gen_range(-1.0..1.0)))
                .collect();
            starts.push(z);
        }
    }
    let roots: Vec<Vec<C64>> = starts
        .par_iter()
        .filter_map(|z0| {
            let mut z = DVector::from_column_slice(z0);
            for _ in 0..100 {
                let at_z: Vec<C64> = z.iter().copied().collect();
                let g = DVector::from_iterator(
                    n,
                    (0..n).map(|i| d.gradient[i].eval(&at_z) + C64::new(DELTA * COEFFS[i], 0.0)),
                );
                let h = DMatrix::from_fn(n, n, |i, j| d.hessian[i][j].eval(&at_z));
                let step = h.lu().solve(&g)?;
                z -= &step;
                if step.norm() < 1e-15 {
                    break;
                }
            }
            let at_z: Vec<C64> = z.iter().copied().collect();
            let res: f64 = (0..n)
                .map(|i| (d.gradient[i].eval(&at_z) + C64::new(DELTA * COEFFS[i], 0.0)).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let far = (0..n).map(|i| (z[i] - C64::new(at[i], 0.0)).norm_sqr()).sum::<f64>().sqrt();
            (res < 1e-12 && far < radius).then_some(at_z)
        })
        .collect();
    let mut distinct: Vec<Vec<C64>> = Vec::new();
    for r in roots {
        let close = |s: &Vec<C64>| s.iter().zip(&r).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() < 1e-9;
        if !distinct.iter().any(close) {
            distinct.push(r);
        }
    }
    distinct.len().max(2)
}

/// All real critical points of `p` reachable from a start grid.
pub fn critical_points(p: &Polynomial, opts: &CriticalOptions) -> Result<CriticalReport, OracleError> {
    let n = p.nvars();
    let grid_n = opts.grid_n.unwrap_or(if n == 2 { 40 } else { 14 });
    if grid_n < 8 || opts.half_width.is_nan() || opts.half_width <= 0.0 {
        return Err(OracleError::Range("grid_n must be at least 8 and the box non-empty".into()));
    }
    let d = Derivatives::new(p);
    let axis: Vec<f64> = (0..grid_n)
        .map(|i| opts.half_width * (2.0 * (i as f64 + 0.5) / grid_n as f64 - 1.0) + 1e-3 * (i as f64 + 1.0))
        .collect();
    let total = grid_n.pow(n as u32);
    let starts: Vec<Vec<f64>> =
        (0..total).map(|k| (0..n).map(|i| axis[(k / grid_n.pow(i as u32)) % grid_n]).collect()).collect();
    let limit = 4.0 * opts.half_width;
    let found: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .filter_map(|s| newton(&d, s, limit))
        .map(|x| {
            let r = gradient(&d, &x).norm();
            (x, r)
        })
        .filter(|(_, r)| *r < opts.newton_tol)
        .collect();

    struct Cluster {
        x: Vec<f64>,
        residual: f64,
        degenerate: bool,
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    for (x, r) in found {
        let degenerate = classify(&hessian(&d, &x), opts.zero_eigenvalue, false).1;
        let hit = clusters.iter_mut().find(|c| {
            let radius = if c.degenerate || degenerate { opts.degenerate_radius } else { opts.dedup_radius };
            dist(&c.x, &x) < radius
        });
        match hit {
            Some(c) => {
                c.degenerate |= degenerate;
                if r < c.residual {
                    c.x = x;
                    c.residual = r;
                }
            }
            None => clusters.push(Cluster { x, residual: r, degenerate }),
        }
    }

    let nearest: Vec<f64> = (0..clusters.len())
        .map(|i| {
            let others = clusters.iter().enumerate().filter(|(j, _)| *j != i);
            others.map(|(_, c)| dist(&c.x, &clusters[i].x)).fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut points: Vec<CriticalPoint> = clusters
        .into_iter()
        .zip(nearest)
        .map(|(c, near)| {
            let (sig, degenerate) = classify(&hessian(&d, &c.x), opts.zero_eigenvalue, c.degenerate);
            let multiplicity = if degenerate { local_multiplicity(p, &c.x, (0.4 * near).min(0.05)) } else { 1 };
            CriticalPoint {
                value: p.eval(&c.x),
                signature: sig,
                morse_index: (!degenerate).then_some(sig.0),
                residual: c.residual,
                multiplicity,
                coords: c.x,
            }
        })
        .collect();
    points.sort_by(|a, b| a.value.total_cmp(&b.value).then_with(|| a.coords.partial_cmp(&b.coords).expect("finite")));

    let expected_mu = opts.expected_mu.unwrap_or_else(|| (p.degree().saturating_sub(1) as usize).pow(n as u32));
    let real_mult: usize = points.iter().map(|p| p.multiplicity).sum();
    let complex_count = expected_mu as i64 - real_mult as i64;
    Ok(CriticalReport {
        real_count: points.len(),
        expected_mu,
        complex_count,
        suspect_missed: complex_count < 0 || complex_count % 2 != 0,
        ind: ind_of_points(&points, opts.zero_value).ok(),
        zero_value: opts.zero_value,
        points,
    })
}

fn ind_of_points(points: &[CriticalPoint], zero: f64) -> Result<i64, OracleError> {
    let mut ind = 0;
    for p in points {
        let Some(k) = p.morse_index else {
            return Err(OracleError::UndefinedInd(format!("degenerate point at {:?}", p.coords)));
        };
        if p.value.abs() < zero {
            return Err(OracleError::UndefinedInd(format!("zero critical value at {:?}", p.coords)));
        }
        if p.value < 0.0 {
            ind += if k % 2 == 0 { 1 } else { -1 };
        }
    }
    Ok(ind)
}

/// Negative critical values at even Morse indices minus those at odd ones.
pub fn ind_of_report(r: &CriticalReport) -> Result<i64, OracleError> {
    ind_of_points(&r.points, r.zero_value)
}
