//! Bipartite graphs stored by their Y-side neighborhoods.
//!
//! A graph has parts `X = {x_0, …, x_{m-1}}` and `Y = {y_0, …, y_{n-1}}`, and is
//! represented by the list of neighborhoods `T_j = N(y_j) ⊆ X` as bitsets.
//! Everything downstream (Schur complement, projections, overlap defects) is
//! indexed by these neighborhoods, so X-side adjacency is derived on demand.

use std::fmt;
use std::ops::Range;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest supported size of either part (one machine word per neighborhood).
pub const MAX_PART: usize = 64;

/// Default bound on `m·n` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// A subset of `{0, …, 63}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn empty() -> Self {
        VertexSet(0)
    }

    /// `{0, …, len-1}`.
    pub fn initial_segment(len: usize) -> Self {
        assert!(len <= MAX_PART);
        if len == MAX_PART {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << len) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = VertexSet::empty();
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_PART && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < MAX_PART, "vertex index {i} exceeds {MAX_PART}");
        self.0 |= 1 << i;
    }

    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// True if one of the two sets contains the other.
    pub const fn is_comparable(self, other: VertexSet) -> bool {
        self.is_subset(other) || other.is_subset(self)
    }

    pub const fn union(self, other: VertexSet) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: VertexSet) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub const fn difference(self, other: VertexSet) -> Self {
        VertexSet(self.0 & !other.0)
    }

    /// Largest element, if any.
    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_indices(iter)
    }
}

/// Degrees of a bipartite graph: `a` for X, `b` for Y.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeData {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl DegreeData {
    /// All degrees, X first.
    pub fn all(&self) -> impl Iterator<Item = usize> + '_ {
        self.a.iter().chain(&self.b).copied()
    }
}

/// Column heights `m = t_1 ≥ t_2 ≥ … ≥ t_n ≥ 1` of a Ferrers diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    heights: Vec<usize>,
}

impl PartitionSpec {
    pub fn new(heights: Vec<usize>) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::InvalidPartition("no columns".into()));
        }
        if heights[0] > MAX_PART {
            return Err(Error::InvalidPartition(format!(
                "height {} exceeds {MAX_PART}",
                heights[0]
            )));
        }
        if let Some((k, _)) = heights.iter().tuple_windows().find_position(|(p, q)| p < q) {
            return Err(Error::InvalidPartition(format!(
                "heights must be weakly decreasing, but t_{} < t_{}",
                k + 1,
                k + 2
            )));
        }
        if heights.last() == Some(&0) {
            return Err(Error::InvalidPartition("every height must be at least 1".into()));
        }
        Ok(PartitionSpec { heights })
    }

    /// Like [`PartitionSpec::new`], additionally requiring `t_1 = m`.
    pub fn with_parts(m: usize, heights: Vec<usize>) -> Result<Self> {
        let p = Self::new(heights)?;
        if p.m() != m {
            return Err(Error::InvalidPartition(format!(
                "t_1 = {} but m = {m}",
                p.heights[0]
            )));
        }
        Ok(p)
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn m(&self) -> usize {
        self.heights[0]
    }

    pub fn n(&self) -> usize {
        self.heights.len()
    }
}

impl std::str::FromStr for PartitionSpec {
    type Err = Error;

    /// Parses comma-separated heights such as `3,2,1`.
    fn from_str(s: &str) -> Result<Self> {
        let heights = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Format(format!("bad height {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PartitionSpec::new(heights)
    }
}

/// A simple bipartite graph on parts of sizes `m` and `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    m: usize,
    nbrs: Vec<VertexSet>,
}

impl BipartiteGraph {
    /// Builds a graph from its Y-side neighborhoods.
    pub fn new(m: usize, nbrs: Vec<VertexSet>) -> Result<Self> {
        if m == 0 || nbrs.is_empty() {
            return Err(Error::Dimension(format!(
                "both parts must be nonempty (m = {m}, n = {})",
                nbrs.len()
            )));
        }
        if m > MAX_PART || nbrs.len() > MAX_PART {
            return Err(Error::Dimension(format!(
                "parts are limited to {MAX_PART} vertices (m = {m}, n = {})",
                nbrs.len()
            )));
        }
        let x_set = VertexSet::initial_segment(m);
        if let Some(j) = nbrs.iter().position(|t| !t.is_subset(x_set)) {
            return Err(Error::Dimension(format!(
                "neighborhood of y_{j} mentions a vertex outside 0..{m}"
            )));
        }
        Ok(BipartiteGraph { m, nbrs })
    }

    /// Builds a graph from its `m × n` biadjacency matrix (`rows[i][j] = 1` iff `x_i ~ y_j`).
    pub fn from_biadjacency<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if m == 0 || n == 0 {
            return Err(Error::Dimension(format!(
                "biadjacency matrix must be at least 1x1, got {m}x{n}"
            )));
        }
        let mut nbrs = vec![VertexSet::empty(); n];
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Format(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &e) in row.iter().enumerate() {
                match e {
                    0 => {}
                    1 => nbrs[j].insert(i),
                    other => {
                        return Err(Error::Format(format!(
                            "entry ({i}, {j}) is {other}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        Self::new(m, nbrs)
    }

    /// Decodes an enumeration mask: bit `j·m + i` is the edge `x_i ~ y_j`.
    pub fn from_mask(m: usize, n: usize, mask: u64) -> Self {
        debug_assert!(m * n <= 64);
        let low = VertexSet::initial_segment(m).bits();
        let nbrs = (0..n)
            .map(|j| VertexSet::from_bits((mask >> (j * m)) & low))
            .collect();
        BipartiteGraph { m, nbrs }
    }

    /// The Ferrers graph with `N(y_j) = {x_0, …, x_{t_j - 1}}`.
    pub fn ferrers_from_partition(p: &PartitionSpec) -> Self {
        let nbrs = p
            .heights()
            .iter()
            .map(|&t| VertexSet::initial_segment(t))
            .collect();
        BipartiteGraph { m: p.m(), nbrs }
    }

    /// The complete bipartite graph `K_{m,n}`.
    pub fn complete(m: usize, n: usize) -> Result<Self> {
        Self::new(m, vec![VertexSet::initial_segment(m.min(MAX_PART)); n])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.nbrs.len()
    }

    /// `m + n`.
    pub fn order(&self) -> usize {
        self.m + self.nbrs.len()
    }

    pub fn neighborhoods(&self) -> &[VertexSet] {
        &self.nbrs
    }

    /// `T_j = N(y_j)`.
    pub fn neighborhood(&self, j: usize) -> VertexSet {
        self.nbrs[j]
    }

    /// `N(x_i)` as a set of Y-indices.
    pub fn x_neighborhood(&self, i: usize) -> VertexSet {
        self.nbrs
            .iter()
            .positions(|t| t.contains(i))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.iter().map(|t| t.len()).sum()
    }

    /// Edges as `(x, y)` index pairs, ordered by `y` then `x`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.nbrs
            .iter()
            .enumerate()
            .flat_map(|(j, t)| t.iter().map(move |i| (i, j)))
            .collect()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        y < self.n() && self.nbrs[y].contains(x)
    }

    /// The `m × n` 0/1 biadjacency matrix.
    pub fn biadjacency(&self) -> Vec<Vec<u8>> {
        (0..self.m)
            .map(|i| self.nbrs.iter().map(|t| t.contains(i) as u8).collect())
            .collect()
    }

    /// Inverse of [`BipartiteGraph::from_mask`].
    pub fn mask(&self) -> Option<u64> {
        if self.m * self.n() > 64 {
            return None;
        }
        Some(
            self.nbrs
                .iter()
                .enumerate()
                .fold(0, |acc, (j, t)| acc | t.bits() << (j * self.m)),
        )
    }

    /// Breadth-first search over the union graph on `m + n` vertices.
    pub fn is_connected(&self) -> bool {
        sets_connected(self.m, &self.nbrs)
    }

    pub fn degrees(&self) -> DegreeData {
        let mut a = vec![0; self.m];
        for t in &self.nbrs {
            for i in t.iter() {
                a[i] += 1;
            }
        }
        let b = self.nbrs.iter().map(|t| t.len()).collect();
        DegreeData { a, b }
    }

    /// True iff the graph is connected and its Y-neighborhoods form a chain
    /// under inclusion covering all of X.
    ///
    /// For such graphs a relabeling of X turns every `T_j` into an initial
    /// segment, which is the Ferrers-diagram condition.
    pub fn is_ferrers(&self) -> bool {
        let mut sorted = self.nbrs.clone();
        // decreasing size, ties lexicographic
        sorted.sort_by(|s, t| t.len().cmp(&s.len()).then(s.bits().cmp(&t.bits())));
        let chain = sorted.iter().tuple_windows().all(|(big, small)| small.is_subset(*big));
        let covers = sorted[0] == VertexSet::initial_segment(self.m);
        chain && covers && self.is_connected()
    }

    /// Reads back column heights when every `T_j` is already the initial
    /// segment `{0, …, t_j - 1}` with `t` weakly decreasing and `t_1 = m`.
    pub fn partition_heights(&self) -> Option<PartitionSpec> {
        let heights = self
            .nbrs
            .iter()
            .map(|t| (*t == VertexSet::initial_segment(t.len())).then_some(t.len()))
            .collect::<Option<Vec<_>>>()?;
        PartitionSpec::with_parts(self.m, heights).ok()
    }

    /// Relabels X: vertex `i` becomes `perm[i]`.
    pub fn permute_x(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.m);
        let nbrs = self
            .nbrs
            .iter()
            .map(|t| t.iter().map(|i| perm[i]).collect())
            .collect();
        BipartiteGraph { m: self.m, nbrs }
    }

    /// Relabels Y: vertex `j` becomes `perm[j]`.
    pub fn permute_y(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n());
        let mut nbrs = vec![VertexSet::empty(); self.n()];
        for (j, t) in self.nbrs.iter().enumerate() {
            nbrs[perm[j]] = *t;
        }
        BipartiteGraph { m: self.m, nbrs }
    }

    /// Swaps the roles of X and Y.
    pub fn transpose(&self) -> Self {
        let nbrs = (0..self.m).map(|i| self.x_neighborhood(i)).collect();
        BipartiteGraph { m: self.n(), nbrs }
    }

    /// Canonical representative key under relabeling of both parts.
    ///
    /// The key is the lexicographically least sequence of neighborhood codes
    /// over all relabelings. Permutations run over the smaller part (for a
    /// fixed relabeling of one part, sorting the other part's codes gives the
    /// least arrangement), so the key is only comparable between graphs with
    /// the same `(m, n)`.
    pub fn canonical_key(&self) -> Vec<u64> {
        if self.m <= self.n() {
            least_relabeling(self.m, &self.nbrs)
        } else {
            let t = self.transpose();
            least_relabeling(t.m, &t.nbrs)
        }
    }

    /// True iff this labeled graph is the canonical representative of its class.
    pub fn is_canonical(&self) -> bool {
        let own: Vec<u64> = if self.m <= self.n() {
            self.nbrs.iter().map(|t| t.bits()).collect()
        } else {
            self.transpose().nbrs.iter().map(|t| t.bits()).collect()
        };
        own == self.canonical_key()
    }
}

fn least_relabeling(m: usize, nbrs: &[VertexSet]) -> Vec<u64> {
    (0..m)
        .permutations(m)
        .map(|perm| {
            let mut codes: Vec<u64> = nbrs
                .iter()
                .map(|t| t.iter().fold(0u64, |acc, i| acc | 1 << perm[i]))
                .collect();
            codes.sort_unstable();
            codes
        })
        .min()
        .expect("at least one permutation")
}

/// Connectivity of the bipartite graph on `X = 0..m` with Y-neighborhoods `nbrs`.
fn sets_connected(m: usize, nbrs: &[VertexSet]) -> bool {
    let all_x = VertexSet::initial_segment(m);
    let mut reached = VertexSet::from_bits(1);
    let mut seen_y = vec![false; nbrs.len()];
    loop {
        let mut grew = false;
        for (j, t) in nbrs.iter().enumerate() {
            if !seen_y[j] && !t.intersection(reached).is_empty() {
                seen_y[j] = true;
                reached = reached.union(*t);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    reached == all_x && seen_y.iter().all(|&s| s)
}

/// Options for [`enumerate_connected`].
#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    /// Refuse when `m·n` exceeds this.
    pub cap: usize,
    /// Yield one representative per class under relabeling of X and Y.
    pub dedupe: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            cap: DEFAULT_ENUMERATION_CAP,
            dedupe: false,
        }
    }
}

/// Every connected bipartite graph on labeled parts of sizes `m` and `n`.
///
/// Walks all `2^(m·n)` biadjacency masks and keeps the connected ones.
pub fn enumerate_connected(m: usize, n: usize, opts: &EnumerateOptions) -> Result<ConnectedGraphs> {
    let total = mask_count(m, n, opts.cap)?;
    Ok(ConnectedGraphs::over_range(m, n, 0..total, opts.dedupe))
}

/// Number of biadjacency masks for parts `(m, n)`, checked against `cap`.
pub fn mask_count(m: usize, n: usize, cap: usize) -> Result<u64> {
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!(
            "both parts must be nonempty (m = {m}, n = {n})"
        )));
    }
    let cells = m * n;
    if cells > cap {
        return Err(Error::CapExceeded {
            what: "m*n",
            value: cells,
            cap,
        });
    }
    if cells >= 64 {
        return Err(Error::CapExceeded {
            what: "m*n",
            value: cells,
            cap: 63,
        });
    }
    Ok(1u64 << cells)
}

/// Iterator over the connected graphs whose masks fall in a range.
///
/// Disjoint ranges partition the enumeration, so workers can split it freely.
#[derive(Clone, Debug)]
pub struct ConnectedGraphs {
    m: usize,
    n: usize,
    masks: Range<u64>,
    dedupe: bool,
}

impl ConnectedGraphs {
    pub fn over_range(m: usize, n: usize, masks: Range<u64>, dedupe: bool) -> Self {
        ConnectedGraphs {
            m,
            n,
            masks,
            dedupe,
        }
    }
}

impl Iterator for ConnectedGraphs {
    type Item = BipartiteGraph;

    fn next(&mut self) -> Option<BipartiteGraph> {
        for mask in self.masks.by_ref() {
            let g = BipartiteGraph::from_mask(self.m, self.n, mask);
            if g.is_connected() && (!self.dedupe || g.is_canonical()) {
                return Some(g);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six_cycle() -> BipartiteGraph {
        BipartiteGraph::new(
            3,
            vec![
                VertexSet::from_indices([0, 1]),
                VertexSet::from_indices([1, 2]),
                VertexSet::from_indices([2, 0]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn biadjacency_transcription() {
        let k11 = BipartiteGraph::from_biadjacency(&[[1u8]]).unwrap();
        assert_eq!(k11.neighborhoods(), &[VertexSet::from_indices([0])]);

        let k22 = BipartiteGraph::from_biadjacency(&[[1u8, 1], [1, 1]]).unwrap();
        assert_eq!(k22.neighborhoods(), &[VertexSet::initial_segment(2); 2]);

        let g = BipartiteGraph::from_biadjacency(&[[1u8, 0], [1, 1]]).unwrap();
        assert_eq!(g.neighborhood(0), VertexSet::from_indices([0, 1]));
        assert_eq!(g.neighborhood(1), VertexSet::from_indices([1]));
        assert_eq!(
            g.degrees(),
            DegreeData {
                a: vec![1, 2],
                b: vec![2, 1]
            }
        );
        assert_eq!(g.biadjacency(), vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn biadjacency_errors() {
        assert!(matches!(
            BipartiteGraph::from_biadjacency(&[[1u8, 2]]),
            Err(Error::Format(_))
        ));
        let empty: [[u8; 0]; 0] = [];
        assert!(matches!(
            BipartiteGraph::from_biadjacency(&empty),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            BipartiteGraph::from_biadjacency(&[Vec::<u8>::new()]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn connectivity() {
        assert!(BipartiteGraph::complete(2, 2).unwrap().is_connected());
        let two_edges = BipartiteGraph::new(
            2,
            vec![VertexSet::from_indices([0]), VertexSet::from_indices([1])],
        )
        .unwrap();
        assert!(!two_edges.is_connected());
        assert!(six_cycle().is_connected());
        // isolated x
        let g = BipartiteGraph::new(2, vec![VertexSet::from_indices([0])]).unwrap();
        assert!(!g.is_connected());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(
            BipartiteGraph::complete(2, 3).unwrap().degrees(),
            DegreeData {
                a: vec![3, 3],
                b: vec![2, 2, 2]
            }
        );
        let star = BipartiteGraph::complete(1, 4).unwrap();
        assert_eq!(star.degrees().a, vec![4]);
        assert_eq!(star.degrees().b, vec![1; 4]);
    }

    #[test]
    fn ferrers_detection() {
        assert!(!six_cycle().is_ferrers());
        let nested = BipartiteGraph::new(
            3,
            vec![
                VertexSet::from_indices([0, 1, 2]),
                VertexSet::from_indices([0, 1]),
                VertexSet::from_indices([0]),
            ],
        )
        .unwrap();
        assert!(nested.is_ferrers());
        // chain that misses x_2
        let uncovered = BipartiteGraph::new(
            3,
            vec![VertexSet::from_indices([0, 1]), VertexSet::from_indices([0])],
        )
        .unwrap();
        assert!(!uncovered.is_ferrers());
    }

    #[test]
    fn partitions() {
        let p: PartitionSpec = "3,2,1".parse().unwrap();
        let g = BipartiteGraph::ferrers_from_partition(&p);
        assert!(g.is_ferrers());
        assert_eq!(g.degrees().a, vec![3, 2, 1]);
        assert_eq!(g.degrees().b, vec![3, 2, 1]);
        assert_eq!(g.partition_heights(), Some(p));

        let k22 = BipartiteGraph::ferrers_from_partition(&PartitionSpec::new(vec![2, 2]).unwrap());
        assert_eq!(k22, BipartiteGraph::complete(2, 2).unwrap());
        let k11 = BipartiteGraph::ferrers_from_partition(&PartitionSpec::new(vec![1]).unwrap());
        assert_eq!(k11, BipartiteGraph::complete(1, 1).unwrap());

        assert!(PartitionSpec::new(vec![1, 2]).is_err());
        assert!(PartitionSpec::new(vec![2, 0]).is_err());
        assert!(PartitionSpec::new(vec![]).is_err());
        assert!(PartitionSpec::with_parts(3, vec![2, 1]).is_err());
        assert!("3,x".parse::<PartitionSpec>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        let opts = EnumerateOptions::default();
        assert_eq!(enumerate_connected(1, 1, &opts).unwrap().count(), 1);
        assert_eq!(enumerate_connected(1, 2, &opts).unwrap().count(), 1);
        assert_eq!(enumerate_connected(2, 2, &opts).unwrap().count(), 5);
    }

    #[test]
    fn enumeration_matches_bfs_filter() {
        // Independent oracle: explicit adjacency lists and a queue-based BFS.
        fn bfs_connected(g: &BipartiteGraph) -> bool {
            let v = g.order();
            let mut adj = vec![Vec::new(); v];
            for (x, y) in g.edges() {
                adj[x].push(g.m() + y);
                adj[g.m() + y].push(x);
            }
            let mut seen = vec![false; v];
            let mut queue = std::collections::VecDeque::from([0]);
            seen[0] = true;
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            seen.iter().all(|&s| s)
        }
        for (m, n) in [(2, 3), (3, 2), (3, 3)] {
            let expected = (0..1u64 << (m * n))
                .filter(|&mask| bfs_connected(&BipartiteGraph::from_mask(m, n, mask)))
                .count();
            let got = enumerate_connected(m, n, &EnumerateOptions::default())
                .unwrap()
                .count();
            assert_eq!(got, expected, "({m},{n})");
        }
    }

    #[test]
    fn dedupe_counts() {
        let opts = EnumerateOptions {
            dedupe: true,
            ..Default::default()
        };
        // K_{2,2} and the path P_4
        assert_eq!(enumerate_connected(2, 2, &opts).unwrap().count(), 2);
        // stars: exactly one class
        assert_eq!(enumerate_connected(1, 4, &opts).unwrap().count(), 1);
        assert_eq!(enumerate_connected(4, 1, &opts).unwrap().count(), 1);
        // dedupe yields one graph per distinct key
        let reps: Vec<_> = enumerate_connected(3, 3, &opts).unwrap().collect();
        let keys: std::collections::HashSet<_> = enumerate_connected(3, 3, &Default::default())
            .unwrap()
            .map(|g| g.canonical_key())
            .collect();
        assert_eq!(reps.len(), keys.len());
    }

    #[test]
    fn cap_refusal() {
        let err = enumerate_connected(5, 5, &EnumerateOptions::default()).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { value: 25, cap: 20, .. }));
    }

    #[test]
    fn mask_round_trip() {
        let g = six_cycle();
        let mask = g.mask().unwrap();
        assert_eq!(BipartiteGraph::from_mask(3, 3, mask), g);
    }
}
