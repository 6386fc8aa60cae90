//! Random simple graphs from degree sequences, and the graph structure.
//!
//! Two models are provided. The erased configuration model (ECM) matches
//! the 2m degree stubs by a uniform random perfect matching and then
//! erases self-loops and collapses parallel edges; the erasures are
//! counted in a [`GenerationTrace`]. The Chung-Lu model inserts each pair
//! {i, j} independently with probability dᵢdⱼ/2m.
//!
//! All randomness flows through a ChaCha8 generator seeded explicitly, so
//! a fixed (sequence, seed) pair reproduces the same graph on every
//! platform.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::degrees::DegreeSequence;
use crate::error::{Error, Result};

/// Above this vertex count, Chung-Lu generation switches from the
/// quadratic per-pair scan to the degree-sorted edge-skipping path.
const CHUNG_LU_DENSE_LIMIT: usize = 30_000;

/// An immutable simple graph in compressed sparse rows: per-vertex sorted
/// neighbor lists, no self-loops, symmetric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl SimpleGraph {
    /// Builds a graph from an explicit undirected edge list over vertices
    /// `0..n`. Edges may be given in any order and orientation; self-loops
    /// and duplicate edges are rejected.
    pub fn from_edge_list(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut keys = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::Parameter(format!("self-loop at vertex {a}")));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::Parameter(format!(
                    "edge ({a}, {b}) out of range for n = {n}"
                )));
            }
            keys.push(pack_edge(a, b));
        }
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter("duplicate edge in edge list".into()));
        }
        Ok(Self::from_sorted_keys(n, &keys))
    }

    /// Builds the CSR structure from packed edge keys sorted ascending,
    /// already deduplicated and self-loop-free.
    fn from_sorted_keys(n: usize, keys: &[u64]) -> Self {
        let mut counts = vec![0usize; n];
        for &k in keys {
            let (u, v) = unpack_edge(k);
            counts[u as usize] += 1;
            counts[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for c in &counts {
            acc += c;
            offsets.push(acc);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; acc];
        // Keys are sorted by (u, v); filling in this order leaves every
        // adjacency list sorted: u-lists receive ascending v directly, and
        // v-lists receive first the smaller endpoints (ascending in u),
        // then their own block's larger endpoints.
        for &k in keys {
            let (u, v) = unpack_edge(k);
            neighbors[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            neighbors[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        SimpleGraph { offsets, neighbors }
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> u64 {
        (self.neighbors.len() / 2) as u64
    }

    /// Realized degree Dᵥ.
    pub fn degree(&self, v: u32) -> u32 {
        (self.offsets[v as usize + 1] - self.offsets[v as usize]) as u32
    }

    /// The sorted neighbor list of `v`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// All realized degrees, indexed by vertex.
    pub fn realized_degrees(&self) -> Vec<u32> {
        (0..self.n() as u32).map(|v| self.degree(v)).collect()
    }

    /// Whether the edge {u, v} is present, by binary search on the
    /// shorter of the two adjacency lists — O(log min(Dᵤ, Dᵥ)).
    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        if u == v {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }
}

fn pack_edge(a: u32, b: u32) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    ((lo as u64) << 32) | hi as u64
}

fn unpack_edge(k: u64) -> (u32, u32) {
    ((k >> 32) as u32, k as u32)
}

/// Which random-graph model produced a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphModel {
    /// Erased configuration model: uniform stub matching, then erasure.
    Ecm,
    /// Chung-Lu: independent pairs with probability dᵢdⱼ/2m.
    ChungLu,
}

/// Accounting record of one graph generation.
///
/// For the ECM, every matched stub pair is accounted for:
/// `edge_count + multi_edges_erased + self_loops_erased = m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerationTrace {
    /// The model that ran.
    pub model: GraphModel,
    /// The seed the generator was given.
    pub seed: u64,
    /// Vertex count of the input sequence.
    pub input_n: usize,
    /// Stub sum of the input sequence (2m).
    pub input_stub_sum: u64,
    /// Parallel stub pairs collapsed into an existing edge (ECM only).
    pub multi_edges_erased: u64,
    /// Stub pairs matched within one vertex and dropped (ECM only).
    pub self_loops_erased: u64,
    /// Pairs whose probability dᵢdⱼ/2m exceeded 1 and was clamped
    /// (Chung-Lu only; nonzero only when the truncation assumption is
    /// violated).
    pub clamped_pairs: u64,
}

impl GenerationTrace {
    /// m = stub_sum / 2, the number of matched stub pairs.
    pub fn m(&self) -> u64 {
        self.input_stub_sum / 2
    }
}

/// Erased configuration model: builds dᵥ stubs per vertex, applies a
/// uniform random perfect matching (a full shuffle of the 2m stubs paired
/// consecutively — distributionally identical to sequential uniform
/// matching), then erases self-loops and collapses parallel edges.
///
/// Realized degrees never exceed the targets: Dᵥ ≤ dᵥ.
pub fn generate_ecm(seq: &DegreeSequence, seed: u64) -> (SimpleGraph, GenerationTrace) {
    let stub_sum = seq.stub_sum();
    debug_assert!(stub_sum % 2 == 0, "DegreeSequence guarantees even stub sum");
    let mut stubs: Vec<u32> = Vec::with_capacity(stub_sum as usize);
    for (v, &d) in seq.degrees().iter().enumerate() {
        stubs.extend(std::iter::repeat(v as u32).take(d as usize));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    stubs.shuffle(&mut rng);

    let mut keys: Vec<u64> = Vec::with_capacity(stubs.len() / 2);
    let mut self_loops = 0u64;
    for pair in stubs.chunks_exact(2) {
        if pair[0] == pair[1] {
            self_loops += 1;
        } else {
            keys.push(pack_edge(pair[0], pair[1]));
        }
    }
    keys.sort_unstable();
    let matched = keys.len() as u64;
    keys.dedup();
    let multi = matched - keys.len() as u64;

    let graph = SimpleGraph::from_sorted_keys(seq.n(), &keys);
    let trace = GenerationTrace {
        model: GraphModel::Ecm,
        seed,
        input_n: seq.n(),
        input_stub_sum: stub_sum,
        multi_edges_erased: multi,
        self_loops_erased: self_loops,
        clamped_pairs: 0,
    };
    debug_assert_eq!(
        graph.edge_count() + trace.multi_edges_erased + trace.self_loops_erased,
        trace.m()
    );
    (graph, trace)
}

/// Chung-Lu model: each unordered pair {i, j} is an edge independently
/// with probability dᵢdⱼ/2m, clamped to 1 (clamps are counted in the
/// trace; none occur when the truncation assumption dₙ < √m/2 holds).
///
/// Small inputs use a per-pair Bernoulli scan; above
/// 30 000 vertices a degree-sorted edge-skipping pass draws geometric
/// jumps between candidate neighbors, changing the cost from O(n²) to
/// O(n + edges). The two paths sample the same distribution but consume
/// randomness differently, so the same seed gives different (equally
/// distributed) graphs on either side of the threshold.
pub fn generate_chung_lu(seq: &DegreeSequence, seed: u64) -> (SimpleGraph, GenerationTrace) {
    let n = seq.n();
    let s = seq.stub_sum() as f64; // 2m
    let degrees = seq.degrees();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keys: Vec<u64> = Vec::new();
    let mut clamped = 0u64;

    if n <= CHUNG_LU_DENSE_LIMIT {
        for i in 0..n as u32 {
            let wi = degrees[i as usize] as f64;
            for j in (i + 1)..n as u32 {
                let raw = wi * degrees[j as usize] as f64 / s;
                let p = if raw > 1.0 {
                    clamped += 1;
                    1.0
                } else {
                    raw
                };
                if rng.gen::<f64>() < p {
                    keys.push(pack_edge(i, j));
                }
            }
        }
    } else {
        // Degree-sorted edge skipping: process vertices in descending
        // weight order; within a row, weights only decrease, so a
        // geometric skip at the current probability over-samples and a
        // q/p thinning corrects it.
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(degrees[v as usize]), v));
        let w: Vec<f64> = order.iter().map(|&v| degrees[v as usize] as f64).collect();
        for i in 0..n {
            // Count clamped pairs in this row exactly: the prefix of
            // partners j > i with w[i]·w[j] > s.
            let row_clamp_end = w[i + 1..].partition_point(|&wj| w[i] * wj > s);
            clamped += row_clamp_end as u64;

            let mut v = i + 1;
            if v >= n {
                break;
            }
            let mut p = (w[i] * w[v] / s).min(1.0);
            while v < n {
                if p < 1.0 {
                    let u: f64 = rng.gen();
                    let skip = (u.ln() / (1.0 - p).ln()).floor();
                    if !(skip < (n - v) as f64) {
                        break;
                    }
                    v += skip as usize;
                }
                let q = (w[i] * w[v] / s).min(1.0);
                if rng.gen::<f64>() * p < q {
                    keys.push(pack_edge(order[i], order[v]));
                }
                p = q;
                v += 1;
            }
        }
        keys.sort_unstable();
    }

    debug_assert!(keys.windows(2).all(|k| k[0] < k[1]));
    let graph = SimpleGraph::from_sorted_keys(n, &keys);
    let trace = GenerationTrace {
        model: GraphModel::ChungLu,
        seed,
        input_n: n,
        input_stub_sum: seq.stub_sum(),
        multi_edges_erased: 0,
        self_loops_erased: 0,
        clamped_pairs: clamped,
    };
    (graph, trace)
}

/// Reads an edge-list file: one edge per line as two decimal vertex ids.
/// Reversed endpoint order is normalized; self-loops and duplicate edges
/// are rejected with their line number. The vertex count is inferred as
/// max id + 1.
pub fn load_graph(path: &Path) -> Result<SimpleGraph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut keyed_lines: Vec<(u64, usize)> = Vec::new();
    let mut max_id = 0u32;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let mut parts = line.split_whitespace();
        let (a, b) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::parse(
                    path,
                    lineno,
                    format!("expected \"u v\", got {line:?}"),
                ))
            }
        };
        let a: u32 = a
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("invalid vertex id {a:?}")))?;
        let b: u32 = b
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("invalid vertex id {b:?}")))?;
        if a == b {
            return Err(Error::parse(path, lineno, format!("self-loop at vertex {a}")));
        }
        max_id = max_id.max(a).max(b);
        keyed_lines.push((pack_edge(a, b), lineno));
    }
    keyed_lines.sort_unstable();
    for w in keyed_lines.windows(2) {
        if w[0].0 == w[1].0 {
            let (u, v) = unpack_edge(w[1].0);
            return Err(Error::parse(
                path,
                w[1].1,
                format!("duplicate edge {u} {v} (first at line {})", w[0].1),
            ));
        }
    }
    let keys: Vec<u64> = keyed_lines.iter().map(|&(k, _)| k).collect();
    let n = if keys.is_empty() { 0 } else { max_id as usize + 1 };
    Ok(SimpleGraph::from_sorted_keys(n, &keys))
}

/// Writes an edge-list file in canonical form: one edge per line as
/// "u v" with u < v, lines sorted by (u, v). Loading and re-saving a
/// canonical file is byte-identical.
pub fn save_graph(g: &SimpleGraph, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for u in 0..g.n() as u32 {
        for &v in g.neighbors(u) {
            if v > u {
                writeln!(out, "{u} {v}").map_err(|e| Error::io(path, e))?;
            }
        }
    }
    out.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrees::DegreeSequence;

    fn seq(degrees: &[u32]) -> DegreeSequence {
        DegreeSequence::from_degrees(degrees.to_vec()).unwrap()
    }

    #[test]
    fn two_vertices_one_edge() {
        let (g, trace) = generate_ecm(&seq(&[1, 1]), 5);
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 1));
        assert_eq!(trace.multi_edges_erased, 0);
        assert_eq!(trace.self_loops_erased, 0);
    }

    #[test]
    fn two_two_matching_distribution() {
        // Degrees (2,2): of the 3 perfect matchings of 4 stubs, 2 produce
        // the single edge {0,1} and 1 produces two self-loops, so
        // P(edge) = 2/3.
        let s = seq(&[2, 2]);
        let mut with_edge = 0u32;
        let trials = 10_000;
        for seed in 0..trials {
            let (g, trace) = generate_ecm(&s, seed as u64);
            assert_eq!(
                g.edge_count() + trace.multi_edges_erased + trace.self_loops_erased,
                2
            );
            match g.edge_count() {
                1 => with_edge += 1,
                0 => {}
                other => panic!("impossible edge count {other}"),
            }
        }
        let p = with_edge as f64 / trials as f64;
        assert!((p - 2.0 / 3.0).abs() < 0.02, "P(edge) = {p}");
    }

    #[test]
    fn erasure_only_removes() {
        let s = seq(&[5, 4, 3, 3, 2, 2, 1, 1, 1]);
        for seed in 0..50 {
            let (g, trace) = generate_ecm(&s, seed);
            let total: u64 = (0..g.n() as u32).map(|v| g.degree(v) as u64).sum();
            assert_eq!(total, 2 * g.edge_count());
            for (v, &d) in s.degrees().iter().enumerate() {
                assert!(g.degree(v as u32) <= d, "vertex {v} exceeded target");
            }
            assert_eq!(
                g.edge_count() + trace.multi_edges_erased + trace.self_loops_erased,
                trace.m()
            );
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let s = seq(&[3, 2, 2, 2, 1, 2]);
        assert_eq!(generate_ecm(&s, 11).0, generate_ecm(&s, 11).0);
        assert_eq!(generate_chung_lu(&s, 11).0, generate_chung_lu(&s, 11).0);
    }

    #[test]
    fn chung_lu_single_pair_probability() {
        let s = seq(&[1, 1]);
        let trials = 10_000;
        let mut present = 0u32;
        for seed in 0..trials {
            let (g, _) = generate_chung_lu(&s, seed as u64);
            present += g.edge_count() as u32;
        }
        let p = present as f64 / trials as f64;
        assert!((p - 0.5).abs() < 0.02, "P(edge) = {p}");
    }

    #[test]
    fn chung_lu_expected_edge_count() {
        // Degrees (1,1,1,1): m = 2, each of the 6 pairs appears with
        // probability 1/4, so E[edges] = 1.5.
        let s = seq(&[1, 1, 1, 1]);
        let trials = 10_000;
        let mut total = 0u64;
        for seed in 0..trials {
            total += generate_chung_lu(&s, seed as u64).0.edge_count();
        }
        let mean = total as f64 / trials as f64;
        assert!((mean - 1.5).abs() < 0.05, "mean edges = {mean}");
    }

    #[test]
    fn chung_lu_disjoint_pairs_independent() {
        // Empirical covariance of the indicators of {0,1} and {2,3} over
        // 10⁴ seeds should be 0 within 3 standard errors.
        let s = seq(&[1, 1, 1, 1]);
        let trials = 10_000usize;
        let (mut sum_a, mut sum_b, mut sum_ab) = (0u32, 0u32, 0u32);
        for seed in 0..trials {
            let (g, _) = generate_chung_lu(&s, seed as u64);
            let a = g.has_edge(0, 1) as u32;
            let b = g.has_edge(2, 3) as u32;
            sum_a += a;
            sum_b += b;
            sum_ab += a * b;
        }
        let t = trials as f64;
        let (ma, mb) = (sum_a as f64 / t, sum_b as f64 / t);
        let cov = sum_ab as f64 / t - ma * mb;
        let se = (ma * (1.0 - ma) * mb * (1.0 - mb) / t).sqrt();
        assert!(cov.abs() <= 3.0 * se, "cov = {cov}, 3se = {}", 3.0 * se);
    }

    #[test]
    fn chung_lu_clamp_is_traced() {
        // Degrees (3,3): m = 3, p = 9/6 > 1 → clamped, edge always there.
        let s = seq(&[3, 3]);
        let (g, trace) = generate_chung_lu(&s, 0);
        assert_eq!(trace.clamped_pairs, 1);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn chung_lu_skip_path_edge_count() {
        // 3-regular on 40 000 vertices exercises the edge-skipping path:
        // E[edges] = C(n,2)·9/(3n), σ ≈ √E.
        let n = 40_000usize;
        let s = seq(&vec![3u32; n]);
        let (g, trace) = generate_chung_lu(&s, 123);
        assert_eq!(trace.clamped_pairs, 0);
        let p = 9.0 / (3.0 * n as f64);
        let expected = (n as f64) * (n as f64 - 1.0) / 2.0 * p;
        let sigma = expected.sqrt();
        let got = g.edge_count() as f64;
        assert!(
            (got - expected).abs() < 5.0 * sigma,
            "edges = {got}, expected {expected} ± {sigma}"
        );
        // CSR invariants hold on the skip path too.
        let total: u64 = (0..n as u32).map(|v| g.degree(v) as u64).sum();
        assert_eq!(total, 2 * g.edge_count());
        for v in 0..n as u32 {
            assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        fs::write(&path, "0 1\n1 2\n").unwrap();
        let g = load_graph(&path).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));

        let out = dir.path().join("g2.txt");
        save_graph(&g, &out).unwrap();
        assert_eq!(load_graph(&out).unwrap(), g);
        // Canonical input survives a load/save cycle byte-for-byte.
        assert_eq!(fs::read(&path).unwrap(), fs::read(&out).unwrap());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.txt");

        fs::write(&path, "0 1\n2 2\n").unwrap();
        match load_graph(&path) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("self-loop"));
            }
            other => panic!("expected self-loop error, got {other:?}"),
        }

        fs::write(&path, "0 1 2\n").unwrap();
        assert!(matches!(load_graph(&path), Err(Error::Parse { line: 1, .. })));

        fs::write(&path, "0 1\n1 0\n").unwrap();
        match load_graph(&path) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("duplicate"));
            }
            other => panic!("expected duplicate error, got {other:?}"),
        }
    }

    #[test]
    fn from_edge_list_validates() {
        assert!(SimpleGraph::from_edge_list(3, &[(0, 1), (1, 2)]).is_ok());
        assert!(SimpleGraph::from_edge_list(3, &[(0, 0)]).is_err());
        assert!(SimpleGraph::from_edge_list(3, &[(0, 3)]).is_err());
        assert!(SimpleGraph::from_edge_list(3, &[(0, 1), (1, 0)]).is_err());
    }
}
