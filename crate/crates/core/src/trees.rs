//! Spanning-tree counts, the Ferrers invariant, and the determinant reduction
//! `τ(G)·m·n = (∏ b_j)·det M`.

use std::fmt;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::linalg::{as_nonnegative_integer, format_rational, laplacian, matrix_m, Rational};

/// Default bound on `|E|` for brute-force tree enumeration.
pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;

/// Number of spanning trees `τ(G)`; zero exactly for disconnected graphs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeCount(pub BigUint);

impl TreeCount {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl From<u64> for TreeCount {
    fn from(v: u64) -> Self {
        TreeCount(v.into())
    }
}

impl fmt::Display for TreeCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for TreeCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

/// A spanning tree as its `(x, y)` edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanningTree {
    pub edges: Vec<(usize, usize)>,
}

impl SpanningTree {
    /// Tree degrees of all vertices, X first.
    pub fn degrees(&self, m: usize, n: usize) -> Vec<usize> {
        let mut deg = vec![0; m + n];
        for &(x, y) in &self.edges {
            deg[x] += 1;
            deg[m + y] += 1;
        }
        deg
    }
}

/// Matrix-tree count: the determinant of the Laplacian with row and column 0 deleted.
pub fn tau_matrix_tree(g: &BipartiteGraph) -> TreeCount {
    principal_minor(g, 0)
}

fn principal_minor(g: &BipartiteGraph, index: usize) -> TreeCount {
    let det = laplacian(g)
        .delete_row_col(index)
        .expect("Laplacian has order at least 2")
        .det_exact();
    let value = as_nonnegative_integer(&det)
        .unwrap_or_else(|| panic!("Laplacian minor must be a nonnegative integer, got {det}"));
    TreeCount(value)
}

/// Matrix-tree count recomputed for every deleted vertex; all minors must agree.
pub fn tau_all_deletions(g: &BipartiteGraph) -> Result<TreeCount> {
    let tau = principal_minor(g, 0);
    for index in 1..g.order() {
        let other = principal_minor(g, index);
        if other != tau {
            return Err(Error::IdentityViolation {
                name: "Laplacian minors independent of the deleted vertex",
                lhs: format!("minor 0 = {tau}"),
                rhs: format!("minor {index} = {other}"),
            });
        }
    }
    Ok(tau)
}

/// Counts spanning trees by checking every `(m+n−1)`-edge subset for acyclicity.
pub fn tau_brute_force(g: &BipartiteGraph, cap: usize) -> Result<(TreeCount, Vec<SpanningTree>)> {
    let edges = g.edges();
    if edges.len() > cap {
        return Err(Error::CapExceeded {
            what: "|E|",
            value: edges.len(),
            cap,
        });
    }
    let (m, order) = (g.m(), g.order());
    let trees: Vec<SpanningTree> = edges
        .iter()
        .copied()
        .combinations(order - 1)
        .filter(|subset| is_forest(order, subset.iter().map(|&(x, y)| (x, m + y))))
        .map(|edges| SpanningTree { edges })
        .collect();
    Ok((TreeCount::from(trees.len() as u64), trees))
}

/// Union–find acyclicity test; `order − 1` acyclic edges form a spanning tree.
fn is_forest(order: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut parent: Vec<usize> = (0..order).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (u, v) in edges {
        let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
        if ru == rv {
            return false;
        }
        parent[ru] = rv;
    }
    true
}

/// `D(G) = ∏_v deg(v)`.
pub fn degree_product(g: &BipartiteGraph) -> BigUint {
    g.degrees().all().map(BigUint::from).product()
}

/// Ferrers invariant `F(G) = (1/(m·n))·∏_v deg(v)`.
pub fn ferrers_invariant(g: &BipartiteGraph) -> Result<Rational> {
    let deg = g.degrees();
    if let Some(i) = deg.a.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedVertex(format!("x_{i}")));
    }
    if let Some(j) = deg.b.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedVertex(format!("y_{j}")));
    }
    Ok(Rational::new(
        BigInt::from(degree_product(g)),
        BigInt::from(g.m() * g.n()),
    ))
}

/// Checks `τ(G)·m·n = (∏ b_j)·det M` exactly, using the matrix-tree count.
pub fn check_reduction(g: &BipartiteGraph) -> Result<bool> {
    check_reduction_with(g, &tau_matrix_tree(g))
}

/// Same as [`check_reduction`] against a supplied spanning-tree count.
pub fn check_reduction_with(g: &BipartiteGraph, tau: &TreeCount) -> Result<bool> {
    let det_m = matrix_m(g)?.det_exact();
    let (lhs, rhs) = reduction_sides(g, tau, &det_m);
    if lhs != rhs {
        return Err(Error::IdentityViolation {
            name: "tau*m*n = (prod b_j) * det M",
            lhs: format_rational(&lhs),
            rhs: format_rational(&rhs),
        });
    }
    Ok(true)
}

/// `(τ·m·n, (∏ b_j)·det M)`.
pub fn reduction_sides(g: &BipartiteGraph, tau: &TreeCount, det_m: &Rational) -> (Rational, Rational) {
    let lhs = Rational::from_integer(BigInt::from(tau.0.clone() * (g.m() * g.n())));
    let prod_b: BigUint = g.degrees().b.into_iter().map(BigUint::from).product();
    let rhs = Rational::from_integer(BigInt::from(prod_b)) * det_m;
    (lhs, rhs)
}

/// Bozkurt's bound `(1/|E|)·∏ deg(v)` with its two comparisons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BozkurtBound {
    pub bound: Rational,
    /// `τ ≤ bound`
    pub holds: bool,
    /// `F(G) ≤ bound`, which follows from `|E| ≤ m·n`.
    pub dominates_ferrers: bool,
}

pub fn bozkurt_bound(g: &BipartiteGraph) -> Result<BozkurtBound> {
    let e = g.edge_count();
    if e == 0 {
        return Err(Error::Dimension("graph has no edges".into()));
    }
    let bound = Rational::new(BigInt::from(degree_product(g)), BigInt::from(e));
    let tau = Rational::from_integer(BigInt::from(tau_matrix_tree(g).0));
    let ferrers = Rational::new(
        BigInt::from(degree_product(g)),
        BigInt::from(g.m() * g.n()),
    );
    let dominates_ferrers = ferrers <= bound;
    Ok(BozkurtBound {
        holds: tau <= bound,
        bound,
        dominates_ferrers,
    })
}

/// `τ(K_{m,n}) = m^(n−1)·n^(m−1)`.
pub fn complete_bipartite_tree_count(m: usize, n: usize) -> BigUint {
    num_traits::pow(BigUint::from(m), n - 1) * num_traits::pow(BigUint::from(n), m - 1)
}
