//! End-to-end checks of the Ferrers bound `τ(G)·m·n ≤ ∏ deg(v)`, its
//! equality case, and the weighted spanning-tree polynomial inequality.
//!
//! Inequality and equality verdicts are exact integer comparisons. The
//! floating spectral certificate is carried along as a cross-check only.

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::format::write_graph;
use crate::graph::{mask_count, BipartiteGraph, ConnectedGraphs, PartitionSpec};
use crate::linalg::{
    check_projection_algebra, format_rational, int, matrix_m, serde_rational, Rational,
};
use crate::spectral::{spectral_report_for, DEFAULT_TOL};
use crate::trees::{
    degree_product, ferrers_invariant, reduction_sides, tau_brute_force, tau_matrix_tree,
    TreeCount, DEFAULT_BRUTE_FORCE_CAP,
};

fn serialize_graph<S: Serializer>(g: &BipartiteGraph, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&write_graph(g))
}

fn serialize_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Result of checking one graph.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationRecord {
    #[serde(serialize_with = "serialize_graph")]
    pub graph: BipartiteGraph,
    pub m: usize,
    pub n: usize,
    pub tau: TreeCount,
    /// `F(G)`
    #[serde(rename = "F", serialize_with = "serde_rational::serialize")]
    pub ferrers_invariant: Rational,
    /// `∏_v deg(v)`
    #[serde(serialize_with = "serialize_biguint")]
    pub degree_product: BigUint,
    /// `τ·m·n ≤ ∏ deg`
    pub inequality_ok: bool,
    /// `τ·m·n = ∏ deg`
    pub equality: bool,
    pub ferrers: bool,
    /// `τ·m·n = (∏ b_j)·det M`
    pub reduction_ok: bool,
    /// Projection algebra for every neighborhood, and `Σ Q_{T_j} = M`.
    pub projections_ok: bool,
    /// Floating majorization certificate with overlap-defect slack.
    pub majorizes: bool,
}

impl VerificationRecord {
    /// Everything the theorem and the proof identities require.
    pub fn passes(&self) -> bool {
        self.inequality_ok
            && self.equality == self.ferrers
            && self.reduction_ok
            && self.projections_ok
            && self.majorizes
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub tol: f64,
    /// Corrupts the spanning-tree count before it is compared (testing only).
    pub fault_inject: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: DEFAULT_TOL,
            fault_inject: false,
        }
    }
}

pub fn verify_graph(g: &BipartiteGraph) -> Result<VerificationRecord> {
    verify_graph_with(g, &VerifyOptions::default())
}

pub fn verify_graph_with(g: &BipartiteGraph, opts: &VerifyOptions) -> Result<VerificationRecord> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut tau = tau_matrix_tree(g);
    if opts.fault_inject {
        tau.0 += 1u32;
    }
    let product = degree_product(g);
    let lhs = tau.value() * BigUint::from(g.m() * g.n());

    let distinct: BTreeSet<_> = g.neighborhoods().iter().copied().collect();
    let mut projections_ok = distinct
        .iter()
        .all(|&t| check_projection_algebra(t, g.m()).is_ok());

    // matrix_m cross-checks both routes to L_X and the Q-sum; a mismatch
    // surfaces as an error here.
    let (reduction_ok, majorizes) = match matrix_m(g) {
        Ok(m) => {
            let (l, r) = reduction_sides(g, &tau, &m.det_exact());
            let majorizes = spectral_report_for(g, &m, opts.tol)
                .map(|rep| rep.certified())
                .unwrap_or(false);
            (l == r, majorizes)
        }
        Err(Error::IdentityViolation { .. }) => {
            projections_ok = false;
            (false, false)
        }
        Err(e) => return Err(e),
    };

    Ok(VerificationRecord {
        m: g.m(),
        n: g.n(),
        ferrers_invariant: ferrers_invariant(g)?,
        inequality_ok: lhs <= product,
        equality: lhs == product,
        ferrers: g.is_ferrers(),
        degree_product: product,
        tau,
        reduction_ok,
        projections_ok,
        majorizes,
        graph: g.clone(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CampaignSummary {
    pub dims: Vec<(usize, usize)>,
    pub graphs_checked: u64,
    pub violations: u64,
    pub equality_cases: u64,
    pub ferrers_count: u64,
    pub wall_time: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct CampaignOptions {
    /// Largest allowed `m·n`.
    pub cap: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub verify: VerifyOptions,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        CampaignOptions {
            cap: crate::graph::DEFAULT_ENUMERATION_CAP,
            threads: None,
            verify: VerifyOptions::default(),
        }
    }
}

/// All `(m, n)` with `1 ≤ m ≤ m_max`, `1 ≤ n ≤ n_max`.
pub fn rectangle(m_max: usize, n_max: usize) -> Vec<(usize, usize)> {
    (1..=m_max)
        .flat_map(|m| (1..=n_max).map(move |n| (m, n)))
        .collect()
}

/// All `(m, n)` with `m·n ≤ max_cells`.
pub fn dims_up_to_cells(max_cells: usize) -> Vec<(usize, usize)> {
    (1..=max_cells)
        .flat_map(|m| (1..=max_cells / m).map(move |n| (m, n)))
        .collect()
}

/// Exhaustive check over the rectangle `1..=m_max × 1..=n_max`.
pub fn verify_range(m_max: usize, n_max: usize, opts: &CampaignOptions) -> Result<CampaignSummary> {
    verify_dims(&rectangle(m_max, n_max), opts, |_| {})
}

const MASKS_PER_TASK: u64 = 1 << 10;
const TASKS_PER_BATCH: u64 = 256;

/// Verifies every connected labeled graph for each `(m, n)` in `dims`, feeding
/// records to `sink` in enumeration order. Stops at the first failing graph.
pub fn verify_dims<F>(dims: &[(usize, usize)], opts: &CampaignOptions, sink: F) -> Result<CampaignSummary>
where
    F: FnMut(&VerificationRecord) + Send,
{
    for &(m, n) in dims {
        mask_count(m, n, opts.cap)?;
    }
    match opts.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Dimension(format!("cannot build thread pool: {e}")))?
            .install(|| run_campaign(dims, opts, sink)),
        None => run_campaign(dims, opts, sink),
    }
}

fn run_campaign<F>(dims: &[(usize, usize)], opts: &CampaignOptions, mut sink: F) -> Result<CampaignSummary>
where
    F: FnMut(&VerificationRecord),
{
    let start = Instant::now();
    let mut summary = CampaignSummary {
        dims: dims.to_vec(),
        graphs_checked: 0,
        violations: 0,
        equality_cases: 0,
        ferrers_count: 0,
        wall_time: 0.0,
    };
    for &(m, n) in dims {
        let total = mask_count(m, n, opts.cap)?;
        let tasks = total.div_ceil(MASKS_PER_TASK);
        let mut first = 0;
        while first < tasks {
            let last = (first + TASKS_PER_BATCH).min(tasks);
            let batch: Vec<Vec<VerificationRecord>> = (first..last)
                .into_par_iter()
                .map(|task| {
                    let lo = task * MASKS_PER_TASK;
                    let hi = (lo + MASKS_PER_TASK).min(total);
                    ConnectedGraphs::over_range(m, n, lo..hi, false)
                        .map(|g| verify_graph_with(&g, &opts.verify))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            for rec in batch.iter().flatten() {
                sink(rec);
                summary.graphs_checked += 1;
                summary.equality_cases += rec.equality as u64;
                summary.ferrers_count += rec.ferrers as u64;
                if !rec.passes() {
                    summary.violations += 1;
                    return Err(Error::Violation {
                        graph: write_graph(&rec.graph),
                        detail: serde_json::to_string(rec).expect("record serializes"),
                    });
                }
            }
            first = last;
        }
    }
    if summary.equality_cases != summary.ferrers_count {
        return Err(Error::IdentityViolation {
            name: "equality cases = Ferrers graphs",
            lhs: summary.equality_cases.to_string(),
            rhs: summary.ferrers_count.to_string(),
        });
    }
    summary.wall_time = start.elapsed().as_secs_f64();
    Ok(summary)
}

/// Both sides of the weighted spanning-tree inequality
/// `P_G(z)·(Σ_X z)·(Σ_Y z) ≤ ∏_v Σ_{u∈N(v)} z_u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryOutcome {
    #[serde(serialize_with = "serde_rational::serialize")]
    pub polynomial: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub lhs: Rational,
    #[serde(serialize_with = "serde_rational::serialize")]
    pub rhs: Rational,
    pub holds: bool,
}

/// `P_G(z) = Σ_T ∏_v z_v^(deg_T(v) − 1)` over spanning trees `T`, with
/// weights ordered X first, then Y. Zero for disconnected graphs.
pub fn spanning_tree_polynomial(g: &BipartiteGraph, z: &[Rational], cap: usize) -> Result<Rational> {
    check_weights(g, z)?;
    let (_, trees) = tau_brute_force(g, cap)?;
    let mut total = Rational::zero();
    for tree in &trees {
        let mut term = Rational::one();
        for (v, d) in tree.degrees(g.m(), g.n()).into_iter().enumerate() {
            // every vertex of a spanning tree on >= 2 vertices has degree >= 1
            term *= num_traits::pow(z[v].clone(), d - 1);
        }
        total += term;
    }
    Ok(total)
}

fn check_weights(g: &BipartiteGraph, z: &[Rational]) -> Result<()> {
    if z.len() != g.order() {
        return Err(Error::Dimension(format!(
            "expected {} weights (m + n), got {}",
            g.order(),
            z.len()
        )));
    }
    if let Some(w) = z.iter().find(|w| w.is_negative()) {
        return Err(Error::NegativeWeight(format_rational(w)));
    }
    Ok(())
}

/// Evaluates both sides of the weighted inequality exactly.
pub fn corollary_check(g: &BipartiteGraph, z: &[Rational], cap: usize) -> Result<CorollaryOutcome> {
    let polynomial = spanning_tree_polynomial(g, z, cap)?;
    let (m, n) = (g.m(), g.n());
    let sum_x: Rational = z[..m].iter().sum();
    let sum_y: Rational = z[m..].iter().sum();
    let lhs = &polynomial * sum_x * sum_y;
    let mut rhs = Rational::one();
    for i in 0..m {
        rhs *= g.x_neighborhood(i).iter().map(|j| &z[m + j]).sum::<Rational>();
    }
    for j in 0..n {
        rhs *= g.neighborhood(j).iter().map(|i| &z[i]).sum::<Rational>();
    }
    Ok(CorollaryOutcome {
        holds: lhs <= rhs,
        polynomial,
        lhs,
        rhs,
    })
}

pub fn corollary_check_default(g: &BipartiteGraph, z: &[Rational]) -> Result<CorollaryOutcome> {
    corollary_check(g, z, DEFAULT_BRUTE_FORCE_CAP)
}

/// Checks the equality direction for a Ferrers graph through its flag basis.
///
/// With `T_j = [t_j]`, the vectors `v_1 = 1` and
/// `v_r = (1, …, 1, −(r−1), 0, …, 0)` (`r−1` ones) are mutually orthogonal
/// and `v_1, …, v_r` span the image of `Q_[r]`. In that basis `M` must be
/// diagonal with Rayleigh quotients `#{j : t_j ≥ r}`, the degree of `x_r`,
/// and hence `det M = ∏ a_i`. All of this is checked exactly.
pub fn equality_flag_diagonalization(p: &PartitionSpec) -> Result<bool> {
    let g = BipartiteGraph::ferrers_from_partition(p);
    let m_mat = matrix_m(&g)?;
    let dim = g.m();
    let basis: Vec<Vec<Rational>> = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|i| {
                    if r == 0 || i < r {
                        int(1)
                    } else if i == r {
                        int(-(r as i64))
                    } else {
                        int(0)
                    }
                })
                .collect()
        })
        .collect();
    let dot = |u: &[Rational], v: &[Rational]| -> Rational { u.iter().zip(v).map(|(a, b)| a * b).sum() };
    let images: Vec<Vec<Rational>> = basis.iter().map(|v| m_mat.mul_vec(v)).collect();

    let degrees = g.degrees().a;
    for r in 0..dim {
        for (s, v) in basis.iter().enumerate() {
            let entry = dot(v, &images[r]);
            if r != s && !entry.is_zero() {
                return Err(Error::IdentityViolation {
                    name: "M diagonal in the flag basis",
                    lhs: format!("v_{s}^T M v_{r} = {}", format_rational(&entry)),
                    rhs: "0".into(),
                });
            }
        }
        let rayleigh = dot(&basis[r], &images[r]) / dot(&basis[r], &basis[r]);
        let column_count = p.heights().iter().filter(|&&t| t > r).count();
        if rayleigh != int(column_count as i64) || column_count != degrees[r] {
            return Err(Error::IdentityViolation {
                name: "flag-basis diagonal entry = #{j : t_j >= r} = deg(x_r)",
                lhs: format_rational(&rayleigh),
                rhs: format!("{column_count} (deg {})", degrees[r]),
            });
        }
    }
    let det = m_mat.det_exact();
    let prod_a: BigInt = degrees.iter().map(|&a| BigInt::from(a)).product();
    if det != Rational::from_integer(prod_a.clone()) {
        return Err(Error::IdentityViolation {
            name: "det M = prod a_i",
            lhs: format_rational(&det),
            rhs: prod_a.to_string(),
        });
    }
    Ok(true)
}

/// Uniform random nonnegative weights `p/q` with `p ≤ 10`, `1 ≤ q ≤ 10`;
/// about a quarter are forced to zero.
pub fn random_weights<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Rational> {
    (0..len)
        .map(|_| {
            if rng.random_ratio(1, 4) {
                Rational::zero()
            } else {
                Rational::new(rng.random_range(0..=10).into(), rng.random_range(1..=10).into())
            }
        })
        .collect()
}

/// A random connected graph with `m·n ≤ max_cells`, uniform over masks of a
/// uniformly chosen shape.
pub fn random_connected_graph<R: Rng + ?Sized>(max_cells: usize, rng: &mut R) -> BipartiteGraph {
    let shapes = dims_up_to_cells(max_cells);
    loop {
        let (m, n) = shapes[rng.random_range(0..shapes.len())];
        let mask = rng.random_range(0..1u64 << (m * n));
        let g = BipartiteGraph::from_mask(m, n, mask);
        if g.is_connected() {
            return g;
        }
    }
}

/// A random partition with `m ≤ max_m` rows and `n ≤ max_n` columns.
pub fn random_partition<R: Rng + ?Sized>(max_m: usize, max_n: usize, rng: &mut R) -> PartitionSpec {
    let m = rng.random_range(1..=max_m);
    let n = rng.random_range(1..=max_n);
    let mut heights: Vec<usize> = (1..n).map(|_| rng.random_range(1..=m)).collect();
    heights.push(m);
    heights.sort_unstable_by(|a, b| b.cmp(a));
    PartitionSpec::new(heights).expect("sorted heights in 1..=m")
}

/// `(τ·m·n, ∏ deg)`, the two sides of the bound as exact integers.
pub fn unit_weight_sides(g: &BipartiteGraph) -> (BigUint, BigUint) {
    (
        tau_matrix_tree(g).value() * BigUint::from(g.m() * g.n()),
        degree_product(g),
    )
}
