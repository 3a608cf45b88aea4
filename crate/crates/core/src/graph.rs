//! Interval overlap graphs, cut evaluation and MAX k-CUT solvers.

use std::cmp::Ordering;
use std::io::Write;

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::fenwick::Fenwick;
use crate::model::Interval;
use crate::scalar::Scalar;

/// Vertex limit of [`max_kcut_exact`].
pub const EXACT_MAX_VERTICES: usize = 16;

/// `true` iff the endpoints strictly interleave: `a.lo < b.lo < a.hi < b.hi`
/// or the mirror image. Containment, disjointness and touching endpoints do
/// not count.
pub fn overlaps<T: Scalar>(a: &Interval<T>, b: &Interval<T>) -> bool {
    let (alo, ahi, blo, bhi) = (a.lo(), a.hi(), b.lo(), b.hi());
    (alo < blo && blo < ahi && ahi < bhi) || (blo < alo && alo < bhi && bhi < ahi)
}

/// Overlap test from the center distance `d` and the two lengths:
/// `d < (l1 + l2) / 2` and `d + min / 2 > max / 2`.
pub fn overlaps_by_distance<T: Scalar>(distance: &T, len_a: &T, len_b: &T) -> bool {
    let short = T::min_of(len_a.clone(), len_b.clone());
    let long = T::max_of(len_a.clone(), len_b.clone());
    *distance < (short.clone() + long.clone()).half()
        && distance.clone() + short.half() > long.half()
}

/// Edge list of an interval overlap graph, edges stored as `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapGraph {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl OverlapGraph {
    /// Builds a graph from arbitrary edges; they are normalized and sorted.
    pub fn from_edges(num_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidParameter(format!("self-loop at {a}")));
            }
            if a >= num_vertices || b >= num_vertices {
                return Err(Error::InvalidParameter(format!(
                    "edge ({a}, {b}) out of range for {num_vertices} vertices"
                )));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("duplicate edge".into()));
        }
        Ok(Self {
            num_vertices,
            edges: list,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges whose endpoints receive different colors.
    pub fn cut_size(&self, colors: &[u32]) -> u64 {
        self.edges
            .iter()
            .filter(|&&(a, b)| colors[a] != colors[b])
            .count() as u64
    }

    /// Writes `n m` followed by one `i j` line per edge, 0-based.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{} {}", self.num_vertices, self.edges.len())?;
        for (a, b) in &self.edges {
            writeln!(out, "{a} {b}")?;
        }
        Ok(())
    }

    /// Parses the format produced by [`write_edge_list`](Self::write_edge_list).
    pub fn read_edge_list(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParameter(format!("edge list: {msg}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| bad("missing header"))?;
        let mut nums = header.split_whitespace().map(str::parse::<usize>);
        let (n, m) = match (nums.next(), nums.next()) {
            (Some(Ok(n)), Some(Ok(m))) => (n, m),
            _ => return Err(bad("malformed header")),
        };
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b))) => edges.push((a, b)),
                _ => return Err(bad("malformed edge")),
            }
        }
        if edges.len() != m {
            return Err(bad("edge count does not match header"));
        }
        Self::from_edges(n, edges)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// Conflict graph by testing every pair. Quadratic; meant for small instances.
pub fn build_overlap_graph<T: Scalar>(intervals: &[Interval<T>]) -> OverlapGraph {
    let mut edges = Vec::new();
    for i in 0..intervals.len() {
        for j in i + 1..intervals.len() {
            if overlaps(&intervals[i], &intervals[j]) {
                edges.push((i, j));
            }
        }
    }
    OverlapGraph {
        num_vertices: intervals.len(),
        edges,
    }
}

/// Quadratic reference count of overlapping pairs.
pub fn count_overlapping_pairs_naive<T: Scalar>(intervals: &[Interval<T>]) -> u64 {
    let mut count = 0;
    for i in 0..intervals.len() {
        for j in i + 1..intervals.len() {
            if overlaps(&intervals[i], &intervals[j]) {
                count += 1;
            }
        }
    }
    count
}

fn cmp_scalar<T: Scalar>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).expect("interval endpoints must be comparable")
}

/// Number of overlapping pairs in `O(n log n)`.
///
/// Intervals are swept by left endpoint. For each interval `b`, the earlier
/// intervals `a` with `a.lo < b.lo` that overlap it are exactly those with
/// `b.lo < a.hi < b.hi`; a Fenwick tree over ranked right endpoints answers
/// that count.
pub fn count_overlapping_pairs<T: Scalar>(intervals: &[Interval<T>]) -> u64 {
    let ends: Vec<(T, T)> = intervals.iter().map(|iv| (iv.lo(), iv.hi())).collect();
    count_interleaved(&ends)
}

fn count_interleaved<T: Scalar>(ends: &[(T, T)]) -> u64 {
    if ends.len() < 2 {
        return 0;
    }
    let mut coords: Vec<&T> = ends.iter().flat_map(|(lo, hi)| [lo, hi]).collect();
    coords.sort_unstable_by(|a, b| cmp_scalar(*a, *b));
    coords.dedup_by(|a, b| cmp_scalar(*a, *b) == Ordering::Equal);
    let rank = |v: &T| {
        coords
            .binary_search_by(|c| cmp_scalar(*c, v))
            .expect("endpoint present in coordinate table")
    };
    let mut ranked: Vec<(usize, usize)> = ends.iter().map(|(lo, hi)| (rank(lo), rank(hi))).collect();
    ranked.sort_unstable();

    let mut tree = Fenwick::new(coords.len());
    let mut count = 0;
    let mut start = 0;
    while start < ranked.len() {
        let lo = ranked[start].0;
        let end = start + ranked[start..].partition_point(|&(l, _)| l == lo);
        // equal left endpoints never interleave, so query the whole group first
        for &(lo, hi) in &ranked[start..end] {
            count += tree.range(lo + 1, hi);
        }
        for &(_, hi) in &ranked[start..end] {
            tree.add(hi, 1);
        }
        start = end;
    }
    count
}

/// Edge count, cut size and same-color conflicts of a colored instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct CutStats {
    pub m: u64,
    pub cut: u64,
    pub conflicts: u64,
}

impl CutStats {
    pub fn from_counts(m: u64, conflicts: u64) -> Self {
        debug_assert!(conflicts <= m);
        Self {
            m,
            cut: m - conflicts,
            conflicts,
        }
    }

    /// `cut / m`, or `None` for an edgeless instance.
    pub fn ratio(&self) -> Option<f64> {
        (self.m > 0).then(|| self.cut as f64 / self.m as f64)
    }
}

/// Overlapping pairs inside each color class, summed. Runs the sweep once
/// per class.
pub fn count_same_color_overlaps<T: Scalar>(intervals: &[Interval<T>], coloring: &Coloring) -> Result<u64> {
    check_sizes(intervals, coloring)?;
    let mut classes: Vec<Vec<(T, T)>> = vec![Vec::new(); coloring.k() as usize];
    for (iv, &c) in intervals.iter().zip(coloring.colors()) {
        classes[(c - 1) as usize].push((iv.lo(), iv.hi()));
    }
    Ok(classes.iter().map(|class| count_interleaved(class)).sum())
}

fn check_sizes<T>(intervals: &[Interval<T>], coloring: &Coloring) -> Result<()> {
    if intervals.len() != coloring.len() {
        return Err(Error::SizeMismatch {
            intervals: intervals.len(),
            colors: coloring.len(),
        });
    }
    Ok(())
}

/// Cut statistics using the sweep counter.
pub fn evaluate_cut<T: Scalar>(intervals: &[Interval<T>], coloring: &Coloring) -> Result<CutStats> {
    let conflicts = count_same_color_overlaps(intervals, coloring)?;
    Ok(CutStats::from_counts(count_overlapping_pairs(intervals), conflicts))
}

/// Cut statistics by testing every pair.
pub fn evaluate_cut_naive<T: Scalar>(intervals: &[Interval<T>], coloring: &Coloring) -> Result<CutStats> {
    check_sizes(intervals, coloring)?;
    let colors = coloring.colors();
    let (mut m, mut conflicts) = (0, 0);
    for i in 0..intervals.len() {
        for j in i + 1..intervals.len() {
            if overlaps(&intervals[i], &intervals[j]) {
                m += 1;
                if colors[i] == colors[j] {
                    conflicts += 1;
                }
            }
        }
    }
    Ok(CutStats::from_counts(m, conflicts))
}

/// Maximum k-cut by exhaustive search, for at most [`EXACT_MAX_VERTICES`]
/// vertices.
///
/// Colorings are enumerated in lexicographic order, restricted to those where
/// each vertex uses at most one color beyond the largest already in use (this
/// removes color permutations). Branches that cannot strictly improve on the
/// incumbent are pruned, so the returned coloring is the lexicographically
/// smallest optimum.
pub fn max_kcut_exact(graph: &OverlapGraph, k: u32) -> Result<(u64, Coloring)> {
    let n = graph.num_vertices();
    if n > EXACT_MAX_VERTICES {
        return Err(Error::InstanceTooLarge {
            got: n,
            max: EXACT_MAX_VERTICES,
        });
    }
    if k < 1 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    // back[v]: neighbours of v with smaller index
    let mut back = vec![Vec::new(); n];
    for &(a, b) in graph.edges() {
        back[b].push(a);
    }
    // edges not yet decided once vertices 0..v are colored
    let mut remaining = vec![0u64; n + 1];
    for v in (0..n).rev() {
        remaining[v] = remaining[v + 1] + back[v].len() as u64;
    }

    struct Search<'a> {
        back: &'a [Vec<usize>],
        remaining: &'a [u64],
        k: u32,
        colors: Vec<u32>,
        best: Option<(u64, Vec<u32>)>,
    }

    impl Search<'_> {
        fn run(&mut self, v: usize, cut: u64, used: u32) {
            let n = self.colors.len();
            if v == n {
                if self.best.as_ref().is_none_or(|(b, _)| cut > *b) {
                    self.best = Some((cut, self.colors.clone()));
                }
                return;
            }
            if let Some((b, _)) = &self.best {
                if cut + self.remaining[v] <= *b {
                    return;
                }
            }
            for c in 1..=self.k.min(used + 1) {
                let gain = self.back[v]
                    .iter()
                    .filter(|&&u| self.colors[u] != c)
                    .count() as u64;
                self.colors[v] = c;
                self.run(v + 1, cut + gain, used.max(c));
            }
            self.colors[v] = 0;
        }
    }

    let mut search = Search {
        back: &back,
        remaining: &remaining,
        k,
        colors: vec![0; n],
        best: None,
    };
    search.run(0, 0, 0);
    let (best, colors) = search.best.expect("at least one coloring exists");
    Ok((best, Coloring::new(colors, k)?))
}

/// Greedy k-cut: vertices in index order, each takes the color shared by the
/// fewest already-colored neighbours, ties to the lowest color. The result
/// cuts at least `(1 - 1/k) m` edges.
pub fn greedy_kcut(graph: &OverlapGraph, k: u32) -> Result<(u64, Coloring)> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("greedy k-cut needs k >= 2, got {k}")));
    }
    let adj = graph.adjacency();
    let mut colors = vec![0u32; graph.num_vertices()];
    let mut same = vec![0u64; k as usize];
    for v in 0..graph.num_vertices() {
        same.iter_mut().for_each(|s| *s = 0);
        for &u in adj[v].iter().filter(|&&u| u < v) {
            same[(colors[u] - 1) as usize] += 1;
        }
        let (best, _) = same
            .iter()
            .enumerate()
            .min_by_key(|&(c, s)| (*s, c))
            .expect("k >= 2");
        colors[v] = best as u32 + 1;
    }
    let cut = graph.cut_size(&colors);
    Ok((cut, Coloring::new(colors, k)?))
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval<f64> {
        Interval::from_endpoints(lo, hi).unwrap()
    }

    #[test]
    fn overlap_cases() {
        assert!(overlaps(&iv(0.0, 2.0), &iv(1.0, 3.0)));
        assert!(overlaps(&iv(1.0, 3.0), &iv(0.0, 2.0)));
        assert!(!overlaps(&iv(0.0, 2.0), &iv(0.5, 1.5)));
        assert!(!overlaps(&iv(0.0, 1.0), &iv(1.0, 2.0)));
        assert!(!overlaps(&iv(0.0, 1.0), &iv(0.0, 1.0)));
        assert!(!overlaps(&iv(0.0, 1.0), &iv(2.0, 3.0)));
        // shared left endpoint is containment
        assert!(!overlaps(&iv(0.0, 1.0), &iv(0.0, 2.0)));
    }

    #[test]
    fn distance_form_cases() {
        // [0,2] and [1,3]: d = 1, lengths 2, 2
        assert!(overlaps_by_distance(&1.0, &2.0, &2.0));
        // containment [0,2] vs [0.5,1.5]: d = 0
        assert!(!overlaps_by_distance(&0.0, &2.0, &1.0));
        // touching [0,1] and [1,2]
        assert!(!overlaps_by_distance(&1.0, &1.0, &1.0));
        // zero length overlaps nothing
        assert!(!overlaps_by_distance(&0.1, &0.0, &0.3));
        assert!(!overlaps(&iv(0.5, 0.5), &iv(0.4, 0.7)));
    }

    fn figure_instance() -> Vec<Interval<f64>> {
        vec![iv(0.0, 3.0), iv(1.0, 5.0), iv(4.0, 7.0), iv(2.0, 6.0)]
    }

    #[test]
    fn small_graph() {
        let g = build_overlap_graph(&[iv(0.0, 3.0), iv(1.0, 4.0), iv(2.0, 6.0), iv(5.0, 8.0)]);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2), (2, 3)]);
        let disjoint = build_overlap_graph(&[iv(0.0, 1.0), iv(2.0, 3.0), iv(4.0, 5.0)]);
        assert_eq!(disjoint.num_edges(), 0);
    }

    #[test]
    fn figure_graph_and_cut() {
        let ivs = figure_instance();
        let g = build_overlap_graph(&ivs);
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let coloring = Coloring::new(vec![1, 2, 1, 2], 2).unwrap();
        let stats = evaluate_cut(&ivs, &coloring).unwrap();
        assert_eq!(stats, CutStats { m: 5, cut: 4, conflicts: 1 });
        let (best, col) = max_kcut_exact(&g, 2).unwrap();
        assert_eq!(best, 4);
        assert_eq!(g.cut_size(col.colors()), 4);
    }

    #[test]
    fn exact_rational_instance() {
        let r = |n| BigRational::ratio(n, 1);
        let ivs: Vec<_> = [(0, 3), (1, 5), (4, 7), (2, 6)]
            .iter()
            .map(|&(a, b)| Interval::from_endpoints(r(a), r(b)).unwrap())
            .collect();
        assert_eq!(count_overlapping_pairs(&ivs), 5);
        assert_eq!(count_overlapping_pairs_naive(&ivs), 5);
    }

    #[test]
    fn sweep_special_families() {
        // nested
        let nested: Vec<_> = (0..20).map(|i| iv(i as f64, 40.0 - i as f64)).collect();
        assert_eq!(count_overlapping_pairs(&nested), 0);
        // staircase [i, i + 1.5]
        let stairs: Vec<_> = (0..50).map(|i| iv(i as f64, i as f64 + 1.5)).collect();
        assert_eq!(count_overlapping_pairs_naive(&stairs), 49);
        assert_eq!(count_overlapping_pairs(&stairs), 49);
        // duplicated intervals and shared endpoints
        let ties = vec![iv(0.0, 2.0), iv(0.0, 2.0), iv(1.0, 3.0), iv(2.0, 4.0), iv(1.0, 2.0)];
        assert_eq!(count_overlapping_pairs(&ties), count_overlapping_pairs_naive(&ties));
        assert_eq!(count_overlapping_pairs::<f64>(&[]), 0);
    }

    #[test]
    fn cut_all_one_color_and_rainbow() {
        let ivs: Vec<_> = (0..4).map(|i| iv(i as f64, i as f64 + 10.0)).collect();
        let one = Coloring::new(vec![1; 4], 3).unwrap();
        let stats = evaluate_cut(&ivs, &one).unwrap();
        assert_eq!(stats.m, 6);
        assert_eq!(stats.cut, 0);
        let rainbow = Coloring::new(vec![1, 2, 3, 4], 4).unwrap();
        assert_eq!(evaluate_cut(&ivs, &rainbow).unwrap().cut, 6);
        let short = Coloring::new(vec![1, 2], 2).unwrap();
        assert!(matches!(evaluate_cut(&ivs, &short), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn exact_solver_small_graphs() {
        let empty = OverlapGraph::from_edges(5, []).unwrap();
        assert_eq!(max_kcut_exact(&empty, 3).unwrap().0, 0);
        let triangle = OverlapGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let (c2, col2) = max_kcut_exact(&triangle, 2).unwrap();
        assert_eq!(c2, 2);
        assert_eq!(col2.colors(), &[1, 1, 2]);
        assert_eq!(max_kcut_exact(&triangle, 3).unwrap().0, 3);
        let big = OverlapGraph::from_edges(17, []).unwrap();
        assert!(matches!(
            max_kcut_exact(&big, 2),
            Err(Error::InstanceTooLarge { got: 17, max: 16 })
        ));
    }

    #[test]
    fn exact_matches_brute_force_on_triangle() {
        // all 2^3 colorings of a triangle
        let best = (0..8u32)
            .map(|mask| {
                let c: Vec<u32> = (0..3).map(|i| (mask >> i) & 1).collect();
                [(0, 1), (1, 2), (0, 2)]
                    .iter()
                    .filter(|&&(a, b)| c[a] != c[b])
                    .count()
            })
            .max()
            .unwrap();
        assert_eq!(best, 2);
    }

    #[test]
    fn greedy_examples() {
        let empty = OverlapGraph::from_edges(4, []).unwrap();
        let (cut, col) = greedy_kcut(&empty, 3).unwrap();
        assert_eq!(cut, 0);
        assert!(col.colors().iter().all(|&c| c == 1));
        let star = OverlapGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let (cut, col) = greedy_kcut(&star, 2).unwrap();
        assert_eq!(cut, 4);
        assert_eq!(col.colors(), &[1, 2, 2, 2, 2]);
        assert!(greedy_kcut(&star, 1).is_err());
    }

    #[test]
    fn edge_list_format() {
        let g = build_overlap_graph(&figure_instance());
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "4 5\n0 1\n0 3\n1 2\n1 3\n2 3\n");
        assert_eq!(OverlapGraph::read_edge_list(&text).unwrap(), g);
        assert!(OverlapGraph::read_edge_list("3 1\n0 0\n").is_err());
        assert!(OverlapGraph::read_edge_list("3 2\n0 1\n").is_err());
    }
}
