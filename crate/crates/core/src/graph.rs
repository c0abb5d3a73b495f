//! Weighted undirected graphs, vertex subsets and partitions.
//!
//! A [`Graph`] stores a dense symmetric adjacency matrix. Loops are allowed and
//! a loop of weight `w` on vertex `i` is the diagonal entry `a_ii = w`, so it
//! contributes `w` (not `2w`) to the degree: `d = A𝟙` holds exactly.

use std::collections::{HashMap, VecDeque};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    adjacency: DMatrix<f64>,
    degree: Vec<f64>,
    volume: f64,
}

impl Graph {
    /// Builds a graph on `n` vertices labelled `1..=n` from weighted edges.
    ///
    /// Duplicate edges are summed; `(i, i, w)` declares a loop. Zero-weight
    /// edges are dropped.
    pub fn from_weighted_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let labels = (1..=n).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    /// Unit-weight convenience constructor.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let weighted: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        Self::from_weighted_edges(n, &weighted)
    }

    pub fn with_labels(labels: Vec<String>, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adjacency = DMatrix::zeros(n, n);
        for &(u, v, w) in edges {
            for index in [u, v] {
                if index >= n {
                    return Err(Error::VertexOutOfRange { index, n });
                }
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight { u, v, weight: w });
            }
            adjacency[(u, v)] += w;
            if u != v {
                adjacency[(v, u)] += w;
            }
        }
        Ok(Self::from_parts(labels, adjacency))
    }

    /// Builds a graph from a dense adjacency matrix, which must be square,
    /// symmetric and entrywise nonnegative.
    pub fn from_adjacency(adjacency: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = adjacency.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyGraph);
        }
        for i in 0..rows {
            for j in 0..rows {
                let w = adjacency[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidWeight { u: i, v: j, weight: w });
                }
                if w != adjacency[(j, i)] {
                    return Err(Error::NotSymmetric((w - adjacency[(j, i)]).abs()));
                }
            }
        }
        let labels = (1..=rows).map(|i| i.to_string()).collect();
        Ok(Self::from_parts(labels, adjacency))
    }

    fn from_parts(labels: Vec<String>, adjacency: DMatrix<f64>) -> Self {
        let degree: Vec<f64> = adjacency.row_iter().map(|r| r.sum()).collect();
        let volume = degree.iter().sum();
        Graph {
            labels,
            adjacency,
            degree,
            volume,
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency[(i, j)]
    }

    pub fn degree(&self) -> &[f64] {
        &self.degree
    }

    pub fn degree_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.degree)
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn min_degree(&self) -> f64 {
        self.degree.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_degree(&self) -> f64 {
        self.degree.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n()).any(|i| self.adjacency[(i, i)] != 0.0)
    }

    /// True when every stored weight is exactly 1 and there are no loops.
    pub fn is_simple_unweighted(&self) -> bool {
        self.adjacency.iter().all(|&w| w == 0.0 || w == 1.0) && !self.has_loops()
    }

    /// Common degree when all degrees agree within `1e-12` relative.
    pub fn regular_degree(&self) -> Option<f64> {
        let (lo, hi) = (self.min_degree(), self.max_degree());
        (hi - lo <= 1e-12 * hi.abs().max(1.0)).then_some(hi)
    }

    /// Neighbours of `i`, excluding `i` itself.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n()).filter(move |&j| j != i && self.adjacency[(i, j)] != 0.0)
    }

    /// Stored edges `(i, j, w)` with `i <= j`, each counted once.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let w = self.adjacency[(i, j)];
                if w != 0.0 {
                    out.push((i, j, w));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn laplacian_form(&self, x: &[f64]) -> f64 {
        self.edges()
            .into_iter()
            .map(|(i, j, w)| w * (x[i] - x[j]).powi(2))
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() == 1
    }

    /// Errors with [`Error::Disconnected`] unless the graph is connected.
    pub fn require_connected(&self) -> Result<()> {
        let components = connected_components(self).len();
        if components == 1 {
            Ok(())
        } else {
            Err(Error::Disconnected { components })
        }
    }

    pub fn require_volume(&self) -> Result<()> {
        if self.volume > 0.0 {
            Ok(())
        } else {
            Err(Error::ZeroVolume)
        }
    }
}

/// A subset of the vertices of a graph, with volume and edge accounting
/// cached at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSet {
    members: Vec<usize>,
    mask: Vec<bool>,
    volume: f64,
    internal_weight: f64,
    boundary_weight: f64,
}

impl VertexSet {
    pub fn new<I: IntoIterator<Item = usize>>(g: &Graph, members: I) -> Result<Self> {
        let n = g.n();
        let mut mask = vec![false; n];
        for index in members {
            if index >= n {
                return Err(Error::VertexOutOfRange { index, n });
            }
            mask[index] = true;
        }
        Ok(Self::from_mask(g, mask))
    }

    pub fn from_mask(g: &Graph, mask: Vec<bool>) -> Self {
        assert_eq!(mask.len(), g.n(), "mask length must equal vertex count");
        let members: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
        let a = g.adjacency();
        let mut internal = 0.0;
        let mut boundary = 0.0;
        for &i in &members {
            for j in 0..mask.len() {
                let w = a[(i, j)];
                if w == 0.0 {
                    continue;
                }
                if mask[j] {
                    internal += w;
                } else {
                    boundary += w;
                }
            }
        }
        let volume = members.iter().map(|&i| g.degree()[i]).sum();
        VertexSet {
            members,
            mask,
            volume,
            internal_weight: internal,
            boundary_weight: boundary,
        }
    }

    pub fn all(g: &Graph) -> Self {
        Self::from_mask(g, vec![true; g.n()])
    }

    pub fn empty(g: &Graph) -> Self {
        Self::from_mask(g, vec![false; g.n()])
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Size of the ambient vertex set.
    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    /// `vol S = Σ_{i∈S} d_i`.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `2|E(S)| = 𝟙_Sᵀ A 𝟙_S` (loops counted once).
    pub fn internal_weight(&self) -> f64 {
        self.internal_weight
    }

    /// Total weight of edges with exactly one endpoint in `S`.
    pub fn boundary_weight(&self) -> f64 {
        self.boundary_weight
    }

    pub fn complement(&self, g: &Graph) -> Self {
        Self::from_mask(g, self.mask.iter().map(|b| !b).collect())
    }

    pub fn indicator(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.mask.len(),
            self.mask.iter().map(|&b| if b { 1.0 } else { 0.0 }),
        )
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.first_overlap(other).is_none()
    }

    pub fn first_overlap(&self, other: &VertexSet) -> Option<usize> {
        self.members.iter().copied().find(|&i| other.contains(i))
    }

    pub fn labels<'g>(&self, g: &'g Graph) -> Vec<&'g str> {
        self.members.iter().map(|&i| g.label(i)).collect()
    }
}

/// `(|∂S|, vol S, 2|E(S)|)`, all weighted.
pub fn boundary_and_volume(s: &VertexSet) -> (f64, f64, f64) {
    let out = (s.boundary_weight(), s.volume(), s.internal_weight());
    debug_assert!(
        (out.1 - out.2 - out.0).abs() <= 1e-9 * out.1.abs().max(1.0),
        "vol S = 2|E(S)| + |∂S| violated"
    );
    out
}

/// A partition of the vertex set into nonempty, pairwise disjoint blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    blocks: Vec<VertexSet>,
}

impl Partition {
    pub fn new(g: &Graph, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = g.n();
        let mut owner = vec![usize::MAX; n];
        let mut sets = Vec::with_capacity(blocks.len());
        for (b, block) in blocks.into_iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {b} is empty")));
            }
            for &i in &block {
                if i >= n {
                    return Err(Error::VertexOutOfRange { index: i, n });
                }
                if owner[i] != usize::MAX && owner[i] != b {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {i} appears in blocks {} and {b}",
                        owner[i]
                    )));
                }
                owner[i] = b;
            }
            sets.push(VertexSet::new(g, block)?);
        }
        if let Some(missing) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidPartition(format!(
                "vertex {missing} is not covered"
            )));
        }
        Ok(Partition { blocks: sets })
    }

    /// Builds a partition from a block label per vertex. Labels need not be
    /// contiguous; blocks are ordered by first appearance.
    pub fn from_assignment(g: &Graph, assignment: &[usize]) -> Result<Self> {
        if assignment.len() != g.n() {
            return Err(Error::DimensionMismatch {
                expected: g.n(),
                got: assignment.len(),
            });
        }
        let mut order: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (i, &label) in assignment.iter().enumerate() {
            let next = order.len();
            let b = *order.entry(label).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(i);
        }
        Self::new(g, blocks)
    }

    pub fn singletons(g: &Graph) -> Self {
        Self::new(g, (0..g.n()).map(|i| vec![i]).collect()).expect("singletons partition")
    }

    pub fn trivial(g: &Graph) -> Self {
        Self::new(g, vec![(0..g.n()).collect()]).expect("trivial partition")
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The `n × k` index matrix `Z = [𝟙_{S_1} … 𝟙_{S_k}]`.
    pub fn index_matrix(&self) -> DMatrix<f64> {
        let n = self.blocks.first().map_or(0, |b| b.universe());
        let mut z = DMatrix::zeros(n, self.blocks.len());
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block.members() {
                z[(i, b)] = 1.0;
            }
        }
        z
    }
}

/// Parses an edge list: one `u v [w]` per line, `#` starts a comment line,
/// `u == v` declares a loop. Labels are assigned dense indices in order of
/// first appearance; duplicate edges are summed.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut intern = |label: &str| -> usize {
        if let Some(&i) = index.get(label) {
            return i;
        }
        labels.push(label.to_string());
        index.insert(label.to_string(), labels.len() - 1);
        labels.len() - 1
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line_no = lineno + 1;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected `u v [w]`, found {} fields", tokens.len()),
            });
        }
        let weight = match tokens.get(2) {
            None => 1.0,
            Some(tok) => {
                let w: f64 = tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("non-numeric weight `{tok}`"),
                })?;
                if !w.is_finite() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("non-numeric weight `{tok}`"),
                    });
                }
                if w < 0.0 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("negative weight {w}"),
                    });
                }
                w
            }
        };
        let u = intern(tokens[0]);
        let v = intern(tokens[1]);
        edges.push((u, v, weight));
    }
    if edges.is_empty() {
        return Err(Error::EmptyDocument);
    }
    Graph::with_labels(labels, &edges)
}

/// Serializes to the edge-list format read by [`parse_graph`]. Isolated
/// vertices without loops cannot be represented and are dropped.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (i, j, w) in g.edges() {
        out.push_str(&format!("{} {} {}\n", g.label(i), g.label(j), w));
    }
    out
}

/// The subgraph induced by `s`: adjacency is the principal submatrix `A(S)`.
pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Result<Graph> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let members = s.members();
    let k = members.len();
    let adjacency = DMatrix::from_fn(k, k, |r, c| g.weight(members[r], members[c]));
    let labels = members.iter().map(|&i| g.label(i).to_string()).collect();
    Ok(Graph::from_parts(labels, adjacency))
}

/// Connected components in breadth-first order, sorted by smallest member.
pub fn connected_components(g: &Graph) -> Vec<VertexSet> {
    components_within(g, &vec![true; g.n()])
        .into_iter()
        .map(|c| VertexSet::new(g, c).expect("component indices are in range"))
        .collect()
}

/// Connected components of the subgraph induced by `mask`, as sorted index
/// lists ordered by smallest member.
pub fn components_within(g: &Graph, mask: &[bool]) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if !mask[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(i) = queue.pop_front() {
            comp.push(i);
            for j in g.neighbors(i) {
                if mask[j] && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_bridge() -> Graph {
        parse_graph("1 2\n2 3\n3 1\n3 4\n4 5\n5 6\n6 4").unwrap()
    }

    #[test]
    fn parses_path() {
        let g = parse_graph("1 2\n2 3").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.degree(), &[1.0, 2.0, 1.0]);
        assert_eq!(g.volume(), 4.0);
    }

    #[test]
    fn loop_contributes_weight_once() {
        let g = parse_graph("a a 2.0").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.degree(), &[2.0]);
        assert_eq!(g.volume(), 2.0);
        assert_eq!(g.labels(), &["a".to_string()]);
    }

    #[test]
    fn duplicate_edges_are_summed() {
        let g = parse_graph("1 2 1\n2 1 1").unwrap();
        assert_eq!(g.edges(), vec![(0, 1, 2.0)]);
        assert_eq!(g.weight(1, 0), 2.0);
    }

    #[test]
    fn comments_crlf_and_labels() {
        let g = parse_graph("# header\r\nx y 0.5\r\n\r\ny z\r\n").unwrap();
        assert_eq!(g.labels(), &["x", "y", "z"]);
        assert_eq!(g.degree(), &[0.5, 1.5, 1.0]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_graph(""), Err(Error::EmptyDocument));
        assert_eq!(parse_graph("# only\n\n"), Err(Error::EmptyDocument));
        assert!(matches!(
            parse_graph("1 2 -1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("1 2\n2 3 abc"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_graph("1 2 nan"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("1 2 3 4"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = parse_graph("a b 0.1\nb c 3\nc c 2.5\na c").unwrap();
        let h = parse_graph(&to_edge_list(&g)).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn induced_subgraphs() {
        let p3 = parse_graph("1 2\n2 3").unwrap();
        let s = VertexSet::new(&p3, [0, 1]).unwrap();
        let k2 = induced_subgraph(&p3, &s).unwrap();
        assert_eq!(k2.edges(), vec![(0, 1, 1.0)]);
        assert_eq!(k2.labels(), &["1", "2"]);

        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let k3 = induced_subgraph(&k4, &VertexSet::new(&k4, [0, 1, 2]).unwrap()).unwrap();
        assert_eq!(k3.edge_count(), 3);
        assert_eq!(k3.degree(), &[2.0, 2.0, 2.0]);

        assert_eq!(
            induced_subgraph(&k4, &VertexSet::empty(&k4)),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn components() {
        let p3 = parse_graph("1 2\n2 3").unwrap();
        let c = connected_components(&p3);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].members(), &[0, 1, 2]);

        let two = parse_graph("1 2\n3 4").unwrap();
        let c = connected_components(&two);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].members(), &[0, 1]);
        assert_eq!(c[1].members(), &[2, 3]);
        assert!(matches!(
            two.require_connected(),
            Err(Error::Disconnected { components: 2 })
        ));

        let tb = triangle_bridge();
        assert_eq!(connected_components(&tb).len(), 1);
        assert_eq!(connected_components(&tb)[0].len(), 6);
    }

    #[test]
    fn boundary_volume_accounting() {
        let p3 = parse_graph("1 2\n2 3").unwrap();
        let center = VertexSet::new(&p3, [1]).unwrap();
        assert_eq!(boundary_and_volume(&center), (2.0, 2.0, 0.0));

        let all = VertexSet::all(&p3);
        assert_eq!(boundary_and_volume(&all), (0.0, 4.0, 4.0));

        let tb = triangle_bridge();
        let tri = VertexSet::new(&tb, [0, 1, 2]).unwrap();
        assert_eq!(boundary_and_volume(&tri), (1.0, 7.0, 6.0));
    }

    #[test]
    fn characteristic_vector_identities() {
        let g = parse_graph("1 2 0.5\n2 3 2\n3 3 1.5\n1 3 1").unwrap();
        let s = VertexSet::new(&g, [1, 2]).unwrap();
        let x = s.indicator();
        let quad = (x.transpose() * g.adjacency() * &x)[(0, 0)];
        assert_eq!(quad, s.internal_weight());
        assert_eq!(x.dot(&g.degree_vector()), s.volume());
        let c = s.complement(&g);
        assert_eq!(s.volume() + c.volume(), g.volume());
    }

    #[test]
    fn partitions_validate() {
        let g = triangle_bridge();
        assert!(Partition::new(&g, vec![vec![0, 1, 2], vec![3, 4, 5]]).is_ok());
        assert!(matches!(
            Partition::new(&g, vec![vec![0, 1, 2], vec![2, 3, 4, 5]]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            Partition::new(&g, vec![vec![0, 1, 2], vec![3, 4]]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            Partition::new(&g, vec![vec![0, 1, 2, 3, 4, 5], vec![]]),
            Err(Error::InvalidPartition(_))
        ));
        let p = Partition::from_assignment(&g, &[7, 7, 7, 2, 2, 9]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.blocks()[2].members(), &[5]);
        let z = p.index_matrix();
        assert_eq!(z.shape(), (6, 3));
        assert_eq!(z.column(0).sum(), 3.0);
    }

    #[test]
    fn rejects_bad_adjacency() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(matches!(Graph::from_adjacency(a), Err(Error::NotSymmetric(_))));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 5)]),
            Err(Error::VertexOutOfRange { index: 5, n: 2 })
        ));
        assert_eq!(Graph::from_edges(0, &[]), Err(Error::EmptyGraph));
    }
}
