//! Floating-point spectra, overlap traces, Ky Fan checks and the eigenvalue
//! majorization certificate for `M`.
//!
//! The overlap quantities stay exact; only eigenvalues are floating. The
//! two meet in [`SpectralReport`].

use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, VertexSet};
use crate::linalg::{int, matrix_m, projection_q, serde_rational, Rational, RationalMatrix};

/// Off-diagonal magnitude below which Jacobi iteration stops.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Default absolute tolerance for spectral assertions.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Allowed entrywise asymmetry of eigensolver input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Dense real square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(dim: usize) -> Self {
        RealMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension("matrix must be square".into()));
        }
        Ok(RealMatrix {
            dim,
            data: rows.concat(),
        })
    }

    /// Nearest floating values of an exact matrix.
    pub fn from_rational(m: &RationalMatrix) -> Self {
        RealMatrix {
            dim: m.dim(),
            data: m
                .rows()
                .flat_map(|r| r.iter().map(|e| e.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        }
    }

    /// `Σ_c v_c v_cᵀ` over the given columns of `basis`.
    pub fn projection_onto_columns(basis: &RealMatrix, cols: &[usize]) -> Self {
        let n = basis.dim;
        let mut p = Self::zeros(n);
        for &c in cols {
            for i in 0..n {
                for j in 0..n {
                    p.data[i * n + j] += basis.get(i, c) * basis.get(j, c);
                }
            }
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, rhs: &RealMatrix) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &RealMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn asymmetry(&self) -> f64 {
        self.max_abs_diff(&self.transpose())
    }
}

/// Eigenvalues sorted weakly decreasing, with the worst residual `‖Sv − λv‖∞`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub residual: f64,
}

/// Eigenpairs sorted by decreasing eigenvalue; column `c` of `vectors`
/// belongs to `values[c]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: RealMatrix,
    pub residual: f64,
}

impl EigenDecomposition {
    pub fn spectrum(&self) -> Spectrum {
        Spectrum {
            values: self.values.clone(),
            residual: self.residual,
        }
    }

    /// Projection onto the span of the top `k` eigenvectors.
    pub fn top_projection(&self, k: usize) -> RealMatrix {
        RealMatrix::projection_onto_columns(&self.vectors, &(0..k).collect::<Vec<_>>())
    }
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn eigen_sym(s: &RealMatrix, tol: f64) -> Result<Spectrum> {
    Ok(eigen_decompose(s, tol)?.spectrum())
}

/// Cyclic Jacobi with a threshold sweep: rotations annihilate each
/// off-diagonal entry in turn until all fall below [`JACOBI_TOLERANCE`].
pub fn eigen_decompose(s: &RealMatrix, tol: f64) -> Result<EigenDecomposition> {
    let asym = s.asymmetry();
    if asym > SYMMETRY_TOLERANCE {
        return Err(Error::NotSymmetric(asym));
    }
    let n = s.dim();
    let mut a = s.clone();
    let mut v = RealMatrix::identity(n);

    let max_off = |a: &RealMatrix| {
        (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a.get(p, q).abs())
            .fold(0.0, f64::max)
    };

    let mut sweeps = 0;
    while max_off(&a) > JACOBI_TOLERANCE {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off: max_off(&a),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq.abs() <= JACOBI_TOLERANCE {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a.get(k, p), a.get(k, q));
                    a.set(k, p, c * akp - sn * akq);
                    a.set(k, q, sn * akp + c * akq);
                }
                for k in 0..n {
                    let (apk, aqk) = (a.get(p, k), a.get(q, k));
                    a.set(p, k, c * apk - sn * aqk);
                    a.set(q, k, sn * apk + c * aqk);
                }
                for k in 0..n {
                    let (vkp, vkq) = (v.get(k, p), v.get(k, q));
                    v.set(k, p, c * vkp - sn * vkq);
                    v.set(k, q, sn * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(j, j).total_cmp(&a.get(i, i)));
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let mut vectors = RealMatrix::zeros(n);
    for (c, &src) in order.iter().enumerate() {
        for k in 0..n {
            vectors.set(k, c, v.get(k, src));
        }
    }

    let residual = (0..n)
        .map(|c| {
            let col = vectors.column(c);
            s.mul_vec(&col)
                .iter()
                .zip(&col)
                .map(|(sv, x)| (sv - values[c] * x).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    if residual > tol {
        return Err(Error::NoConvergence {
            sweeps,
            off: residual,
        });
    }
    Ok(EigenDecomposition {
        values,
        vectors,
        residual,
    })
}

fn check_nonempty_inside(s: VertexSet, m: usize) -> Result<()> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if s.max().is_some_and(|i| i >= m) {
        return Err(Error::Dimension(format!("set {s:?} is not inside 0..{m}")));
    }
    Ok(())
}

/// Overlap defect `ε(I,T) = |I∖T|·|T∖I| / (|I|·|T|)`.
pub fn overlap_defect(i: VertexSet, t: VertexSet) -> Result<Rational> {
    if i.is_empty() || t.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(Rational::new(
        (i.difference(t).len() * t.difference(i).len()).into(),
        (i.len() * t.len()).into(),
    ))
}

/// `tr(Q_I Q_T) = |I ∩ T| + ε(I,T)` by the closed formula.
pub fn overlap_trace(i: VertexSet, t: VertexSet, m: usize) -> Result<Rational> {
    check_nonempty_inside(i, m)?;
    check_nonempty_inside(t, m)?;
    Ok(int(i.intersection(t).len() as i64) + overlap_defect(i, t)?)
}

/// `tr(Q_I Q_T)` from the exact matrices.
pub fn overlap_trace_by_product(i: VertexSet, t: VertexSet, m: usize) -> Result<Rational> {
    Ok(projection_q(i, m)?.trace_of_product(&projection_q(t, m)?))
}

/// Closed formula, checked against the exact matrix product.
pub fn overlap_trace_verified(i: VertexSet, t: VertexSet, m: usize) -> Result<Rational> {
    let formula = overlap_trace(i, t, m)?;
    let product = overlap_trace_by_product(i, t, m)?;
    if formula != product {
        return Err(Error::IdentityViolation {
            name: "tr(Q_I Q_T) = |I cap T| + eps(I,T)",
            lhs: crate::linalg::format_rational(&product),
            rhs: crate::linalg::format_rational(&formula),
        });
    }
    Ok(formula)
}

/// Outcome of one Ky Fan comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct KyFanOutcome {
    pub trace_ps: f64,
    pub top_k_sum: f64,
    /// `P` coincides with the top-`k` eigenprojection (only decided when
    /// `θ_k > θ_{k+1}`, since otherwise that projection is not unique).
    pub at_maximizer: bool,
    pub holds: bool,
}

/// Checks `tr(PS) ≤ θ_1 + … + θ_k` for a rank-`k` orthogonal projection `P`,
/// with equality when `P` is the top-`k` eigenprojection of `S`.
pub fn kyfan_check(s: &RealMatrix, p: &RealMatrix, k: usize, tol: f64) -> Result<KyFanOutcome> {
    if p.dim() != s.dim() {
        return Err(Error::Dimension("S and P differ in size".into()));
    }
    let idempotence = p.mul(p).max_abs_diff(p);
    if idempotence > tol {
        return Err(Error::NotProjection(format!("|P^2 - P| = {idempotence:e}")));
    }
    if p.asymmetry() > tol {
        return Err(Error::NotProjection(format!("|P^T - P| = {:e}", p.asymmetry())));
    }
    if (p.trace() - k as f64).abs() > tol {
        return Err(Error::NotProjection(format!("trace {} but rank {k}", p.trace())));
    }
    let eig = eigen_decompose(s, tol)?;
    let top_k_sum: f64 = eig.values[..k].iter().sum();
    let trace_ps = p.mul(s).trace();
    let gap = k < s.dim() && eig.values[k - 1] - eig.values[k] > tol.sqrt();
    let at_maximizer = (k == s.dim() || gap) && p.max_abs_diff(&eig.top_projection(k)) <= tol.sqrt();
    let mut holds = trace_ps <= top_k_sum + tol;
    if at_maximizer {
        holds &= (trace_ps - top_k_sum).abs() <= tol;
    }
    Ok(KyFanOutcome {
        trace_ps,
        top_k_sum,
        at_maximizer,
        holds,
    })
}

/// Projection onto a uniformly random `k`-dimensional subspace of `R^dim`.
pub fn random_projection<R: Rng + ?Sized>(dim: usize, k: usize, rng: &mut R) -> RealMatrix {
    assert!(k <= dim);
    let mut basis = RealMatrix::zeros(dim);
    let mut c = 0;
    while c < k {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        // two Gram–Schmidt passes
        for _ in 0..2 {
            for prev in 0..c {
                let dot: f64 = (0..dim).map(|i| v[i] * basis.get(i, prev)).sum();
                for (i, x) in v.iter_mut().enumerate() {
                    *x -= dot * basis.get(i, prev);
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        for (i, x) in v.iter().enumerate() {
            basis.set(i, c, x / norm);
        }
        c += 1;
    }
    RealMatrix::projection_onto_columns(&basis, &(0..k).collect::<Vec<_>>())
}

/// Random symmetric matrix with standard normal entries.
pub fn random_symmetric<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> RealMatrix {
    let mut s = RealMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let x: f64 = rng.sample(StandardNormal);
            s.set(i, j, x);
            s.set(j, i, x);
        }
    }
    s
}

/// Eigenvalues of `M` against the sorted X-degrees.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    /// Eigenvalues of `M`, weakly decreasing.
    pub lambda: Vec<f64>,
    pub residual: f64,
    pub a_sorted: Vec<usize>,
    /// X-vertices in the order used for `[k]`: decreasing degree, ties by index.
    pub x_order: Vec<usize>,
    /// `Σ_{i≤k} λ_i − Σ_{i≤k} a_i` for `k = 1, …, m−1`.
    pub partial_gaps: Vec<f64>,
    /// `Σ_j ε([k], T_j)` for `k = 1, …, m−1`, exact.
    #[serde(serialize_with = "serde_rational::serialize_vec")]
    pub defect_sums: Vec<Rational>,
    pub trace_gap: f64,
    pub majorizes: bool,
    /// Every partial gap is at least its defect sum.
    pub strengthened: bool,
    /// Smallest eigenvalue is positive.
    pub positive_definite: bool,
}

impl SpectralReport {
    pub fn certified(&self) -> bool {
        self.majorizes && self.strengthened && self.positive_definite
    }
}

/// Builds the majorization report for a connected graph.
///
/// Fails with [`Error::MajorizationFailure`] (carrying the report as JSON)
/// if the eigenvalues of `M` do not majorize the degrees with the overlap
/// defects as slack, or if `M` is not positive definite.
pub fn majorization_report(g: &BipartiteGraph, tol: f64) -> Result<SpectralReport> {
    let report = spectral_report(g, tol)?;
    if !report.certified() {
        return Err(Error::MajorizationFailure(
            serde_json::to_string_pretty(&report).expect("report serializes"),
        ));
    }
    Ok(report)
}

/// Same quantities as [`majorization_report`] without asserting them.
pub fn spectral_report(g: &BipartiteGraph, tol: f64) -> Result<SpectralReport> {
    spectral_report_for(g, &matrix_m(g)?, tol)
}

/// [`spectral_report`] with `M` already computed.
pub fn spectral_report_for(g: &BipartiteGraph, m_exact: &RationalMatrix, tol: f64) -> Result<SpectralReport> {
    let spectrum = eigen_sym(&RealMatrix::from_rational(m_exact), tol)?;
    let lambda = spectrum.values;
    let degrees = g.degrees().a;
    let m = g.m();

    let mut x_order: Vec<usize> = (0..m).collect();
    x_order.sort_by(|&i, &j| degrees[j].cmp(&degrees[i]).then(i.cmp(&j)));
    let a_sorted: Vec<usize> = x_order.iter().map(|&i| degrees[i]).collect();

    let mut partial_gaps = Vec::with_capacity(m.saturating_sub(1));
    let mut defect_sums = Vec::with_capacity(m.saturating_sub(1));
    let (mut sum_lambda, mut sum_a) = (0.0, 0.0);
    let mut segment = VertexSet::empty();
    for k in 0..m.saturating_sub(1) {
        sum_lambda += lambda[k];
        sum_a += a_sorted[k] as f64;
        segment.insert(x_order[k]);
        partial_gaps.push(sum_lambda - sum_a);
        let mut defect = Rational::zero();
        for &t in g.neighborhoods() {
            defect += overlap_defect(segment, t)?;
        }
        defect_sums.push(defect);
    }
    let trace_gap = (lambda.iter().sum::<f64>() - degrees.iter().sum::<usize>() as f64).abs();
    let majorizes = partial_gaps.iter().all(|&gap| gap >= -tol) && trace_gap <= tol;
    let strengthened = partial_gaps
        .iter()
        .zip(&defect_sums)
        .all(|(&gap, d)| gap >= d.to_f64().unwrap_or(f64::INFINITY) - tol);
    let positive_definite = lambda.last().is_some_and(|&l| l > 0.0);

    Ok(SpectralReport {
        lambda,
        residual: spectrum.residual,
        a_sorted,
        x_order,
        partial_gaps,
        defect_sums,
        trace_gap,
        majorizes,
        strengthened,
        positive_definite,
    })
}
