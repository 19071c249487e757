//! Matrices attached to a bipartite graph: the Laplacian, the neighborhood
//! projections `P_T` and `Q_T`, the X-side Schur complement `L_X`, and
//! `M = L_X + (n/m)·J`.

use num_traits::{One, Zero};

use super::matrix::{format_rational, int, rational, Rational, RationalMatrix};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, VertexSet};

/// Laplacian `L(G)` with X-vertices first, then Y-vertices.
pub fn laplacian(g: &BipartiteGraph) -> RationalMatrix {
    let (m, n) = (g.m(), g.n());
    let deg = g.degrees();
    let mut l = RationalMatrix::zeros(m + n);
    for (i, &a) in deg.a.iter().enumerate() {
        l.set(i, i, int(a as i64));
    }
    for (j, &b) in deg.b.iter().enumerate() {
        l.set(m + j, m + j, int(b as i64));
    }
    for (x, y) in g.edges() {
        l.set(x, m + y, int(-1));
        l.set(m + y, x, int(-1));
    }
    l
}

fn check_subset(t: VertexSet, m: usize) -> Result<()> {
    if t.is_empty() {
        return Err(Error::EmptySet);
    }
    if t.max().is_some_and(|i| i >= m) {
        return Err(Error::Dimension(format!("set {t:?} is not inside 0..{m}")));
    }
    Ok(())
}

/// `P_T = D_T − J_T/|T|`: orthogonal projection onto zero-sum vectors supported on `T`.
pub fn projection_p(t: VertexSet, m: usize) -> Result<RationalMatrix> {
    check_subset(t, m)?;
    let size = t.len() as i64;
    let diag = rational(size - 1, size);
    let off = rational(-1, size);
    Ok(RationalMatrix::from_fn(m, |i, k| {
        match (t.contains(i), t.contains(k)) {
            (true, true) if i == k => diag.clone(),
            (true, true) => off.clone(),
            _ => Rational::zero(),
        }
    }))
}

/// `Q_T = P_T + J/m`: orthogonal projection of rank `|T|` onto `H_T ⊕ ⟨1⟩`.
pub fn projection_q(t: VertexSet, m: usize) -> Result<RationalMatrix> {
    let p = projection_p(t, m)?;
    Ok(&p + &RationalMatrix::ones(m).scale(&rational(1, m as i64)))
}

fn require_covered_y(g: &BipartiteGraph) -> Result<()> {
    match g.neighborhoods().iter().position(|t| t.is_empty()) {
        Some(j) => Err(Error::Singular(format!(
            "C = diag(b) is singular: y_{j} has degree 0"
        ))),
        None => Ok(()),
    }
}

/// `Σ_j P_{T_j}`.
pub fn sum_of_p(g: &BipartiteGraph) -> Result<RationalMatrix> {
    require_covered_y(g)?;
    let mut acc = RationalMatrix::zeros(g.m());
    for &t in g.neighborhoods() {
        acc = &acc + &projection_p(t, g.m())?;
    }
    Ok(acc)
}

/// `Σ_j Q_{T_j}`.
pub fn sum_of_q(g: &BipartiteGraph) -> Result<RationalMatrix> {
    require_covered_y(g)?;
    let mut acc = RationalMatrix::zeros(g.m());
    for &t in g.neighborhoods() {
        acc = &acc + &projection_q(t, g.m())?;
    }
    Ok(acc)
}

/// `L_X = A − B C⁻¹ Bᵀ`.
///
/// Computed as the Schur complement of the Y-block of the Laplacian and,
/// independently, as `Σ_j P_{T_j}`; the two must agree entrywise.
pub fn schur_lx(g: &BipartiteGraph) -> Result<RationalMatrix> {
    require_covered_y(g)?;
    let block = laplacian(g).schur_complement(g.m())?;
    let projections = sum_of_p(g)?;
    if block != projections {
        return Err(Error::IdentityViolation {
            name: "A - B C^-1 B^T = sum of P_T",
            lhs: block.to_string(),
            rhs: projections.to_string(),
        });
    }
    Ok(block)
}

/// `M = L_X + (n/m)·J`, checked against `Σ_j Q_{T_j}`.
pub fn matrix_m(g: &BipartiteGraph) -> Result<RationalMatrix> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let lx = schur_lx(g)?;
    let shift = RationalMatrix::ones(g.m()).scale(&rational(g.n() as i64, g.m() as i64));
    let m = &lx + &shift;
    let q_sum = sum_of_q(g)?;
    if m != q_sum {
        return Err(Error::IdentityViolation {
            name: "L_X + (n/m) J = sum of Q_T",
            lhs: m.to_string(),
            rhs: q_sum.to_string(),
        });
    }
    Ok(m)
}

/// Exact checks of the projection algebra for one neighborhood `T ⊆ 0..m`:
/// `P² = P`, `Q² = Q`, `P·1 = 0`, `P·J = J·P = 0`, `tr P = |T| − 1`, `tr Q = |T|`.
pub fn check_projection_algebra(t: VertexSet, m: usize) -> Result<()> {
    let p = projection_p(t, m)?;
    let q = projection_q(t, m)?;
    let size = t.len() as i64;
    let fail = |name: &'static str, lhs: String, rhs: String| {
        Err(Error::IdentityViolation { name, lhs, rhs })
    };

    if !p.is_symmetric() || !q.is_symmetric() {
        return fail("P_T, Q_T symmetric", format!("{p}"), format!("{q}"));
    }
    let p2 = &p * &p;
    if p2 != p {
        return fail("P_T^2 = P_T", p2.to_string(), p.to_string());
    }
    let q2 = &q * &q;
    if q2 != q {
        return fail("Q_T^2 = Q_T", q2.to_string(), q.to_string());
    }
    let p_one = p.mul_vec(&vec![Rational::one(); m]);
    if !p_one.iter().all(Zero::is_zero) {
        return fail(
            "P_T 1 = 0",
            p_one.iter().map(format_rational).collect::<Vec<_>>().join(" "),
            "0".into(),
        );
    }
    let j = RationalMatrix::ones(m);
    if !(&p * &j).is_zero() || !(&j * &p).is_zero() {
        return fail("P_T J = J P_T = 0", p.to_string(), "0".into());
    }
    if p.trace() != int(size - 1) {
        return fail("tr P_T = |T| - 1", format_rational(&p.trace()), (size - 1).to_string());
    }
    if q.trace() != int(size) {
        return fail("tr Q_T = |T|", format_rational(&q.trace()), size.to_string());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PartitionSpec;

    fn six_cycle() -> BipartiteGraph {
        crate::format::parse_graph("3 3\n0 1\n1 2\n2 0\n").unwrap()
    }

    #[test]
    fn laplacian_examples() {
        let k11 = BipartiteGraph::complete(1, 1).unwrap();
        assert_eq!(
            laplacian(&k11),
            RationalMatrix::from_integers(&[[1, -1], [-1, 1]]).unwrap()
        );
        // path x0 - y0 - x1
        let path = BipartiteGraph::from_biadjacency(&[[1u8], [1]]).unwrap();
        assert_eq!(
            laplacian(&path),
            RationalMatrix::from_integers(&[[1, 0, -1], [0, 1, -1], [-1, -1, 2]]).unwrap()
        );
        let l = laplacian(&BipartiteGraph::complete(2, 2).unwrap());
        for row in l.rows() {
            assert!(row.iter().sum::<Rational>().is_zero());
        }
        assert!(l.det_exact().is_zero());
        assert_eq!(l.get(0, 0), &int(2));
    }

    #[test]
    fn six_cycle_minors() {
        let l = laplacian(&six_cycle());
        for i in 0..6 {
            assert_eq!(l.delete_row_col(i).unwrap().det_exact(), int(6));
        }
    }

    #[test]
    fn projection_examples() {
        let t0 = VertexSet::from_indices([0]);
        let t01 = VertexSet::from_indices([0, 1]);
        assert!(projection_p(t0, 2).unwrap().is_zero());
        let half = rational(1, 2);
        let p = projection_p(t01, 2).unwrap();
        assert_eq!(
            p,
            RationalMatrix::from_rows(vec![
                vec![half.clone(), -half.clone()],
                vec![-half.clone(), half.clone()]
            ])
            .unwrap()
        );
        let p3 = projection_p(t01, 3).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                assert_eq!(p3.get(i, k), p.get(i, k));
            }
        }
        for k in 0..3 {
            assert!(p3.get(2, k).is_zero() && p3.get(k, 2).is_zero());
        }
        assert!(matches!(projection_p(VertexSet::empty(), 2), Err(Error::EmptySet)));
        assert!(matches!(projection_q(VertexSet::empty(), 2), Err(Error::EmptySet)));
        assert!(projection_p(VertexSet::from_indices([3]), 2).is_err());
    }

    #[test]
    fn q_examples() {
        for m in 1..6 {
            assert_eq!(
                projection_q(VertexSet::initial_segment(m), m).unwrap(),
                RationalMatrix::identity(m)
            );
        }
        let q = projection_q(VertexSet::from_indices([0]), 2).unwrap();
        assert_eq!(q, RationalMatrix::ones(2).scale(&rational(1, 2)));
        assert_eq!(q.trace(), int(1));
        let q = projection_q(VertexSet::from_indices([0, 1]), 3).unwrap();
        assert_eq!(q.trace(), int(2));
        assert_eq!(&q * &q, q);
    }

    #[test]
    fn projection_algebra_all_subsets() {
        for m in 1..=6 {
            for bits in 1..1u64 << m {
                check_projection_algebra(VertexSet::from_bits(bits), m).unwrap();
            }
        }
    }

    #[test]
    fn schur_examples() {
        let k11 = BipartiteGraph::complete(1, 1).unwrap();
        assert!(schur_lx(&k11).unwrap().is_zero());

        let half = rational(-1, 2);
        let expected =
            RationalMatrix::from_fn(3, |i, k| if i == k { int(1) } else { half.clone() });
        assert_eq!(schur_lx(&six_cycle()).unwrap(), expected);

        let k22 = BipartiteGraph::complete(2, 2).unwrap();
        assert_eq!(
            schur_lx(&k22).unwrap(),
            RationalMatrix::from_integers(&[[1, -1], [-1, 1]]).unwrap()
        );

        let bad = BipartiteGraph::new(2, vec![VertexSet::from_indices([0, 1]), VertexSet::empty()])
            .unwrap();
        assert!(matches!(schur_lx(&bad), Err(Error::Singular(_))));
    }

    #[test]
    fn m_examples() {
        assert_eq!(
            matrix_m(&BipartiteGraph::complete(1, 1).unwrap()).unwrap(),
            RationalMatrix::identity(1)
        );
        let expected = RationalMatrix::from_fn(3, |i, k| {
            if i == k {
                int(2)
            } else {
                rational(1, 2)
            }
        });
        assert_eq!(matrix_m(&six_cycle()).unwrap(), expected);
        assert_eq!(
            matrix_m(&BipartiteGraph::complete(2, 2).unwrap()).unwrap(),
            RationalMatrix::identity(2).scale(&int(2))
        );
        let disconnected =
            BipartiteGraph::new(2, vec![VertexSet::from_indices([0]), VertexSet::from_indices([1])])
                .unwrap();
        assert!(matches!(matrix_m(&disconnected), Err(Error::Disconnected)));
    }

    #[test]
    fn adjugate_of_lx_is_multiple_of_ones() {
        // C6: μ = (3/2, 3/2), so adj(L_X) = (1/3)(9/4) J = (3/4) J
        let adj = schur_lx(&six_cycle()).unwrap().adjugate().unwrap();
        assert_eq!(adj, RationalMatrix::ones(3).scale(&rational(3, 4)));

        let staircase =
            BipartiteGraph::ferrers_from_partition(&PartitionSpec::new(vec![3, 2, 1]).unwrap());
        let adj = schur_lx(&staircase).unwrap().adjugate().unwrap();
        let c = adj.get(0, 0).clone();
        assert_eq!(adj, RationalMatrix::ones(3).scale(&c));
    }

    #[test]
    fn kirchhoff_step_through_schur() {
        // τ = det(C) · det((L_X) with x_0 deleted)
        let g = six_cycle();
        let lx = schur_lx(&g).unwrap();
        let det_c: i64 = g.degrees().b.iter().map(|&b| b as i64).product();
        assert_eq!(int(det_c) * lx.delete_row_col(0).unwrap().det_exact(), int(6));
    }
}
