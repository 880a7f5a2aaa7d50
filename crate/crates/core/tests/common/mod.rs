//! Shared helpers for the integration tests: seeded random graphs and
//! oracles that do not go through the library's own algorithms.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use graphkms::{Graph, Path, Vertex, VertexSet};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x6b6d_7321;

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

/// Index picker in the shape the samplers expect.
pub fn picker(rng: &mut ChaCha8Rng) -> impl FnMut(usize) -> usize + '_ {
    move |n| if n == 0 { 0 } else { rng.gen_range(0..n) }
}

const POSITIVE: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
const NEGATIVE: [f64; 4] = [-0.5, -1.0, -1.5, -2.0];
const MIXED: [f64; 7] = [-2.0, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0];

fn build(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    let edges = edges
        .iter()
        .enumerate()
        .map(|(k, &(s, r, w))| (format!("e{k}"), format!("v{s}"), format!("v{r}"), w))
        .collect();
    Graph::new(vertices, edges).expect("generated graph is valid")
}

/// Up to 8 vertices and 16 edges; weights all positive, all negative or
/// mixed, chosen per graph.
pub fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(2..=8);
    let m = rng.gen_range(1..=16);
    let palette: &[f64] = match rng.gen_range(0..3) {
        0 => &POSITIVE,
        1 => &NEGATIVE,
        _ => &MIXED,
    };
    let edges: Vec<_> = (0..m)
        .map(|_| {
            (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                palette[rng.gen_range(0..palette.len())],
            )
        })
        .collect();
    build(n, &edges)
}

/// A graph with a zero-weight circular component: vertices split into an
/// upstream part `U`, the cycle, and a downstream part `D`, with edges only
/// `U→U`, `U→cycle`, `U→D`, `cycle→D`, `D→D`. Upstream edges go forward
/// unless `upstream_cycles`. At most 8 vertices and 16 edges. Returns the
/// graph and the cycle's vertices.
pub fn planted_graph(rng: &mut ChaCha8Rng, upstream_cycles: bool) -> (Graph, Vec<usize>) {
    let k = rng.gen_range(1..=3);
    let u = rng.gen_range(1..=(7 - k).min(3));
    let d = rng.gen_range(0..=(8 - k - u));
    let n = u + k + d;
    let cycle: Vec<usize> = (u..u + k).collect();
    let mut edges = Vec::new();
    let mut total = 0.0;
    for i in 0..k {
        let w = if i + 1 == k {
            -total
        } else {
            MIXED[rng.gen_range(0..MIXED.len())]
        };
        total += w;
        edges.push((cycle[i], cycle[(i + 1) % k], w));
    }
    // guarantee the cycle is reached from upstream
    edges.push((rng.gen_range(0..u), cycle[rng.gen_range(0..k)], 1.0));
    let extra = rng.gen_range(0..=(16 - edges.len()));
    let upstream = 0..u;
    let downstream = u + k..n;
    for _ in 0..extra {
        let w = MIXED[rng.gen_range(0..MIXED.len())];
        let edge = match rng.gen_range(0..5) {
            0 => {
                let (a, b) = (
                    rng.gen_range(upstream.clone()),
                    rng.gen_range(upstream.clone()),
                );
                if !upstream_cycles && a >= b {
                    continue;
                }
                (a, b)
            }
            1 => (rng.gen_range(upstream.clone()), cycle[rng.gen_range(0..k)]),
            2 if d > 0 => (
                rng.gen_range(upstream.clone()),
                rng.gen_range(downstream.clone()),
            ),
            3 if d > 0 => (
                cycle[rng.gen_range(0..k)],
                rng.gen_range(downstream.clone()),
            ),
            4 if d > 0 => (
                rng.gen_range(downstream.clone()),
                rng.gen_range(downstream.clone()),
            ),
            _ => continue,
        };
        edges.push((edge.0, edge.1, w));
    }
    (build(n, &edges), cycle)
}

/// Vertices with a path into `target`, by breadth-first search backwards.
pub fn closure_bfs(g: &Graph, target: &VertexSet) -> VertexSet {
    let mut seen: VertexSet = target.clone();
    let mut queue: VecDeque<Vertex> = target.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for e in g.edges() {
            if e.range == v && seen.insert(e.source) {
                queue.push_back(e.source);
            }
        }
    }
    seen
}

/// Largest eigenvalue modulus from a dense Schur decomposition.
pub fn eigen_radius(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// `Σ_{e: v→w} e^{-βF(e)}` on `set`, built directly from the edge list;
/// rows of `zero_rows` are left empty.
pub fn dense_block(g: &Graph, beta: f64, set: &VertexSet, zero_rows: &[Vertex]) -> DMatrix<f64> {
    let index: Vec<Vertex> = set.iter().copied().collect();
    let pos = |v: Vertex| index.iter().position(|&x| x == v);
    let mut m = DMatrix::zeros(index.len(), index.len());
    for e in g.edges() {
        if zero_rows.contains(&e.source) {
            continue;
        }
        if let (Some(i), Some(j)) = (pos(e.source), pos(e.range)) {
            m[(i, j)] += (-beta * e.weight).exp();
        }
    }
    m
}

fn inf_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Upper bound on `Σ_{ℓ > l} ‖B^ℓ‖_∞`: find `m` with `q = ‖B^m‖ < 1`, then
/// the tail is at most `Σ_{r<m} ‖B^{l+1+r}‖ / (1 - q)`. `None` when no such
/// `m ≤ 256` exists.
pub fn tail_bound(b: &DMatrix<f64>, l: usize) -> Option<f64> {
    let n = b.nrows();
    let mut power = DMatrix::<f64>::identity(n, n);
    let mut m = 0;
    let q = loop {
        power = &power * b;
        m += 1;
        let q = inf_norm(&power);
        if q < 1.0 {
            break q;
        }
        if m == 256 {
            return None;
        }
    };
    let mut p = DMatrix::<f64>::identity(n, n);
    for _ in 0..=l {
        p = &p * b;
    }
    let mut head = 0.0;
    for _ in 0..m {
        head += inf_norm(&p);
        p = &p * b;
    }
    Some(head / (1.0 - q))
}

/// Truncated first-passage data for a base vertex: `B` is `A(β)` on
/// `closure({base})` with the base's row removed, so `(B^ℓ)_{v,base}` sums
/// `e^{-βF}` over paths of length `ℓ` from `v` to the base that never leave it.
pub struct FirstPassage {
    pub index: Vec<Vertex>,
    pub b: DMatrix<f64>,
    pub base_pos: usize,
    /// `by_length[ℓ][i] = (B^ℓ)_{index[i], base}`.
    pub by_length: Vec<Vec<f64>>,
}

impl FirstPassage {
    pub fn new(g: &Graph, beta: f64, base: Vertex, cap: usize) -> FirstPassage {
        let set = closure_bfs(g, &VertexSet::from([base]));
        let index: Vec<Vertex> = set.iter().copied().collect();
        let b = dense_block(g, beta, &set, &[base]);
        let base_pos = index.iter().position(|&v| v == base).unwrap();
        let mut col = vec![0.0; index.len()];
        col[base_pos] = 1.0;
        let mut by_length = vec![col.clone()];
        for _ in 0..cap {
            let next: Vec<f64> = (0..index.len())
                .map(|i| (0..index.len()).map(|j| b[(i, j)] * col[j]).sum())
                .collect();
            by_length.push(next.clone());
            col = next;
        }
        FirstPassage {
            index,
            b,
            base_pos,
            by_length,
        }
    }

    /// `Σ_{ℓ ≤ cap} Σ_v (B^ℓ)_{v,base}`.
    pub fn z(&self) -> f64 {
        self.by_length.iter().flatten().sum()
    }

    /// `Σ_{1 ≤ ℓ ≤ upto} (B^ℓ)_{v,base}`.
    pub fn mass_from(&self, v: Vertex, upto: usize) -> f64 {
        let Some(i) = self.index.iter().position(|&x| x == v) else {
            return 0.0;
        };
        self.by_length[1..=upto.min(self.by_length.len() - 1)]
            .iter()
            .map(|c| c[i])
            .sum()
    }
}

/// Explicit backward enumeration of first-passage paths into `base`, up to
/// `max_len` edges or until `budget` paths have been produced; returns the
/// weight sum per length and whether the enumeration completed.
pub fn enumerate_first_passage(
    g: &Graph,
    beta: f64,
    base: Vertex,
    max_len: usize,
    budget: usize,
) -> (Vec<f64>, bool) {
    let mut sums = vec![0.0; max_len + 1];
    let mut frontier = vec![(base, 0.0_f64)];
    let mut produced = 1;
    sums[0] = 1.0;
    for len in 1..=max_len {
        let mut next = Vec::new();
        for &(v, w) in &frontier {
            for e in g.edges() {
                if e.range == v && e.source != base {
                    next.push((e.source, w + e.weight));
                }
            }
        }
        produced += next.len();
        if produced > budget {
            sums.truncate(len);
            return (sums, false);
        }
        sums[len] = next.iter().map(|&(_, w)| (-beta * w).exp()).sum();
        frontier = next;
    }
    (sums, true)
}

/// Independent evaluation of `ω^λ_D(S_μ S_ν*)` from its description as an
/// integral over boundary paths `αδ^∞`, `α` a first-passage path into the
/// base of length at most `cap`, each with mass `e^{-βF(α)}/Z`. A path
/// contributes `λ^k`, `k = (|μ| - |ν|)/p`, when it starts with both `μ` and
/// `ν` and `σ^{|μ|} x = σ^{|ν|} x`.
///
/// Returns the truncated value and an error bound from the geometric tails.
pub struct OmegaOracle<'a> {
    pub g: &'a Graph,
    pub beta: f64,
    pub base: Vertex,
    pub delta: Vec<usize>,
    pub cap: usize,
    pub fp: FirstPassage,
    pub tail: f64,
}

impl<'a> OmegaOracle<'a> {
    pub fn new(g: &'a Graph, beta: f64, delta: &Path, cap: usize) -> Option<OmegaOracle<'a>> {
        let base = delta.source();
        let fp = FirstPassage::new(g, beta, base, cap);
        let tail = tail_bound(&fp.b, 0)?;
        Some(OmegaOracle {
            g,
            beta,
            base,
            delta: delta.edges().iter().map(|e| e.0).collect(),
            cap,
            fp,
            tail,
        })
    }

    /// Bound on the neglected part of `Σ_{ℓ > l} (B^ℓ)_{v, base}` summed
    /// over all `v`.
    fn tail_after(&self, l: usize) -> f64 {
        tail_bound(&self.fp.b, l).unwrap_or(self.tail) * self.fp.index.len() as f64
    }

    pub fn z(&self) -> (f64, f64) {
        (self.fp.z(), self.tail_after(self.cap))
    }

    fn edge_at(&self, alpha: &[usize], i: usize) -> usize {
        if i < alpha.len() {
            alpha[i]
        } else {
            self.delta[(i - alpha.len()) % self.delta.len()]
        }
    }

    fn first_passage(&self, alpha: &[usize]) -> bool {
        let end = match alpha.last() {
            Some(&e) => self.g.edges()[e].range,
            None => return true,
        };
        end == self.base && alpha.iter().all(|&e| self.g.edges()[e].source != self.base)
    }

    fn weight(&self, edges: &[usize]) -> f64 {
        edges.iter().map(|&e| self.g.edges()[e].weight).sum()
    }

    /// Value and error bound.
    pub fn eval(&self, lambda: Complex64, mu: &Path, nu: &Path) -> (Complex64, f64) {
        let mu_e: Vec<usize> = mu.edges().iter().map(|e| e.0).collect();
        let nu_e: Vec<usize> = nu.edges().iter().map(|e| e.0).collect();
        let (a, b) = (mu_e.len(), nu_e.len());
        let p = self.delta.len() as i64;
        let diff = a as i64 - b as i64;
        let power = if diff % p == 0 {
            let k = diff / p;
            if k >= 0 {
                lambda.powi(k as i32)
            } else {
                lambda.conj().powi((-k) as i32)
            }
        } else {
            Complex64::new(0.0, 0.0)
        };

        // α no longer than the longer word: prefixes of μ or ν
        let mut candidates: BTreeSet<Vec<usize>> = BTreeSet::new();
        for l in 0..=a {
            candidates.insert(mu_e[..l].to_vec());
        }
        for l in 0..=b {
            candidates.insert(nu_e[..l].to_vec());
        }
        let mut num = Complex64::new(0.0, 0.0);
        for alpha in candidates {
            let start = alpha
                .first()
                .map_or(self.base, |&e| self.g.edges()[e].source);
            if start != mu.source() || start != nu.source() {
                continue;
            }
            if !self.first_passage(&alpha) {
                continue;
            }
            let starts = |w: &[usize]| (0..w.len()).all(|i| self.edge_at(&alpha, i) == w[i]);
            if !starts(&mu_e) || !starts(&nu_e) {
                continue;
            }
            let window = alpha.len() + self.delta.len() + 1;
            let same_tail =
                (0..window).all(|i| self.edge_at(&alpha, a + i) == self.edge_at(&alpha, b + i));
            if same_tail {
                num += power * (-self.beta * self.weight(&alpha)).exp();
            }
        }

        // α strictly longer than both words: only μ = ν can contribute,
        // since a periodic tail would need a base-sourced edge inside α
        let mut extension_tail = 0.0;
        if mu_e == nu_e {
            let r = mu.range();
            let avoids = mu_e.iter().all(|&e| self.g.edges()[e].source != self.base);
            if r != self.base && avoids && a < self.cap {
                let room = self.cap - a;
                let ext = self.fp.mass_from(r, room);
                let scale = (-self.beta * self.weight(&mu_e)).exp();
                num += Complex64::new(scale * ext, 0.0);
                extension_tail = scale * self.tail_after(room);
            }
        }

        let (z, z_tail) = self.z();
        let value = num / z;
        let bound = (extension_tail + value.norm() * z_tail) / z + 1e-12 * value.norm().max(1.0);
        (value, bound)
    }
}

/// Brute-force count of paths of length `≤ max_len` ending at `target`.
pub fn count_paths_into(g: &Graph, target: Vertex, max_len: usize) -> u64 {
    let mut frontier = vec![target];
    let mut total = 1;
    for _ in 0..max_len {
        let mut next = Vec::new();
        for &v in &frontier {
            for e in g.edges() {
                if e.range == v {
                    next.push(e.source);
                }
            }
        }
        total += next.len() as u64;
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    total
}
