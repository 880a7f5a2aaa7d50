//! Trace states (`β = 0`): the sources that carry them, the matrix-algebra
//! structure of the relevant quotient, and an explicit Cuntz–Krieger family
//! in matrices over Laurent polynomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::graph::{components, Component, EdgeIx, Graph, Path, Vertex, VertexSet};
use crate::state::{Measure, Word};

/// Largest path set enumerated for one matrix block.
const MAX_BLOCK: usize = 4096;

/// A source of trace states: a sink, or a circular component based at its
/// least vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceSource {
    Sink { vertex: Vertex, label: String },
    Component(Component),
}

impl TraceSource {
    pub fn label(&self) -> &str {
        match self {
            TraceSource::Sink { label, .. } => label,
            TraceSource::Component(c) => &c.label,
        }
    }

    pub fn base(&self) -> Vertex {
        match self {
            TraceSource::Sink { vertex, .. } => *vertex,
            TraceSource::Component(c) => c.least(),
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, TraceSource::Component(_))
    }
}

/// Circular components and sinks with no component strictly upstream, and
/// the vertices `N` outside all their closures.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSets {
    pub circulars: Vec<Component>,
    pub sinks: Vec<Vertex>,
    pub outside: VertexSet,
}

impl ZeroSets {
    /// Sinks first, then components.
    pub fn sources(&self, g: &Graph) -> Vec<TraceSource> {
        self.sinks
            .iter()
            .map(|&s| TraceSource::Sink {
                vertex: s,
                label: g.name(s).to_string(),
            })
            .chain(self.circulars.iter().cloned().map(TraceSource::Component))
            .collect()
    }

    pub fn source(&self, g: &Graph, label: &str) -> Result<TraceSource> {
        self.sources(g)
            .into_iter()
            .find(|s| s.label() == label)
            .ok_or_else(|| Error::InvalidSource(label.to_string()))
    }
}

pub fn zero_sets(g: &Graph) -> ZeroSets {
    let comps = components(g);
    let clean = |members: &VertexSet| {
        let rest: VertexSet = g.closure(members).difference(members).copied().collect();
        !comps.iter().any(|c| c.members.is_subset(&rest))
    };
    let circulars: Vec<Component> = comps
        .iter()
        .filter(|c| c.circular && clean(&c.members))
        .cloned()
        .collect();
    let sinks: Vec<Vertex> = g
        .sinks()
        .into_iter()
        .filter(|&s| clean(&VertexSet::from([s])))
        .collect();
    let mut covered = VertexSet::new();
    for c in &circulars {
        covered.extend(g.closure(&c.members));
    }
    for &s in &sinks {
        covered.extend(g.closure(&VertexSet::from([s])));
    }
    let outside = g.vertex_ids().filter(|v| !covered.contains(v)).collect();
    ZeroSets {
        circulars,
        sinks,
        outside,
    }
}

/// Number of paths ending at `base` with no edge sourced at `base`,
/// counted by dynamic programming; errors if such paths are unbounded.
pub fn count_first_passage(g: &Graph, base: Vertex) -> Result<u64> {
    fn visit(
        g: &Graph,
        v: Vertex,
        base: Vertex,
        memo: &mut HashMap<Vertex, u64>,
        active: &mut VertexSet,
    ) -> Result<u64> {
        if let Some(&n) = memo.get(&v) {
            return Ok(n);
        }
        if v == base {
            return Ok(1);
        }
        if !active.insert(v) {
            return Err(Error::CountOverflow);
        }
        let mut n: u64 = 0;
        for &e in g.out_edges(v) {
            let r = g.edge(e).range;
            if g.talks_to(r, base) {
                let sub = visit(g, r, base, memo, active)?;
                n = n.checked_add(sub).ok_or(Error::CountOverflow)?;
            }
        }
        active.remove(&v);
        memo.insert(v, n);
        Ok(n)
    }
    let mut memo = HashMap::new();
    let mut total: u64 = 0;
    for v in g.closure(&VertexSet::from([base])) {
        let n = visit(g, v, base, &mut memo, &mut VertexSet::new())?;
        total = total.checked_add(n).ok_or(Error::CountOverflow)?;
    }
    Ok(total)
}

/// `n_s` (all paths ending at the sink) or `n_C` (paths ending at the base
/// without passing it before).
pub fn multiplicity(g: &Graph, source: &TraceSource) -> Result<u64> {
    let sets = zero_sets(g);
    let valid = match source {
        TraceSource::Sink { vertex, .. } => sets.sinks.contains(vertex),
        TraceSource::Component(c) => sets.circulars.iter().any(|d| d.members == c.members),
    };
    if !valid {
        return Err(Error::InvalidSource(source.label().to_string()));
    }
    count_first_passage(g, source.base())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SummandKind {
    MatrixAlgebra,
    MatrixOverCircle,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraSummand {
    pub source: String,
    pub dimension: u64,
    pub kind: SummandKind,
}

impl fmt::Display for AlgebraSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.dimension) {
            (SummandKind::MatrixAlgebra, 1) => write!(f, "C"),
            (SummandKind::MatrixAlgebra, n) => write!(f, "M_{n}(C)"),
            (SummandKind::MatrixOverCircle, 1) => write!(f, "C(T)"),
            (SummandKind::MatrixOverCircle, n) => write!(f, "M_{n}(C(T))"),
        }
    }
}

/// One summand per sink, then one per circular component.
pub fn algebra_structure(g: &Graph) -> Result<Vec<AlgebraSummand>> {
    zero_sets(g)
        .sources(g)
        .iter()
        .map(|s| {
            Ok(AlgebraSummand {
                source: s.label().to_string(),
                dimension: count_first_passage(g, s.base())?,
                kind: if s.is_circle() {
                    SummandKind::MatrixOverCircle
                } else {
                    SummandKind::MatrixAlgebra
                },
            })
        })
        .collect()
}

/// `M_2(C) (+) M_3(C(T))`, or `0` when there are no summands.
pub fn format_structure(summands: &[AlgebraSummand]) -> String {
    if summands.is_empty() {
        return "0".into();
    }
    summands
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" (+) ")
}

/// A Laurent polynomial with integer coefficients, `degree → coefficient`,
/// never storing zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LaurentPoly(BTreeMap<i64, i64>);

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn monomial(coefficient: i64, degree: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        p.add_term(degree, coefficient);
        p
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::monomial(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&d, &c)| (d, c))
    }

    fn add_term(&mut self, degree: i64, coefficient: i64) {
        let c = self.0.entry(degree).or_insert(0);
        *c += coefficient;
        if *c == 0 {
            self.0.remove(&degree);
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (d, c) in other.terms() {
            out.add_term(d, c);
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (d1, c1) in self.terms() {
            for (d2, c2) in other.terms() {
                out.add_term(d1 + d2, c1 * c2);
            }
        }
        out
    }

    /// `z ↦ z^{-1}`; coefficients are real.
    pub fn star(&self) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(&d, &c)| (-d, c)).collect())
    }

    pub fn constant_term(&self) -> i64 {
        self.0.get(&0).copied().unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms().map(|(d, c)| z.powi(d as i32) * c as f64).sum()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(d, c)| match (d, c) {
                (0, c) => c.to_string(),
                (1, 1) => "z".into(),
                (d, 1) => format!("z^{d}"),
                (1, c) => format!("{c}z"),
                (d, c) => format!("{c}z^{d}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A square sparse matrix of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaurentMatrix {
    pub dim: usize,
    entries: BTreeMap<(usize, usize), LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zero(dim: usize) -> LaurentMatrix {
        LaurentMatrix {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> LaurentMatrix {
        let mut m = LaurentMatrix::zero(dim);
        for i in 0..dim {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        if p.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), p);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> LaurentPoly {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&(usize, usize), &LaurentPoly)> {
        self.entries.iter()
    }

    pub fn add(&self, other: &LaurentMatrix) -> LaurentMatrix {
        let mut out = self.clone();
        for (&(i, j), p) in &other.entries {
            let sum = out.get(i, j).add(p);
            out.set(i, j, sum);
        }
        out
    }

    pub fn mul(&self, other: &LaurentMatrix) -> LaurentMatrix {
        let mut out = LaurentMatrix::zero(self.dim);
        for (&(i, k), p) in &self.entries {
            for (&(k2, j), q) in other.entries.range((k, 0)..(k + 1, 0)) {
                debug_assert_eq!(k, k2);
                let sum = out.get(i, j).add(&p.mul(q));
                out.set(i, j, sum);
            }
        }
        out
    }

    /// Conjugate transpose with `z ↦ z^{-1}`.
    pub fn star(&self) -> LaurentMatrix {
        LaurentMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), p)| ((j, i), p.star()))
                .collect(),
        }
    }

    /// Trace as a Laurent polynomial.
    pub fn trace(&self) -> LaurentPoly {
        (0..self.dim).fold(LaurentPoly::zero(), |acc, i| acc.add(&self.get(i, i)))
    }
}

/// The matrix block of one source: its path index set `N^a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block {
    pub source: TraceSource,
    #[serde(skip)]
    pub paths: Vec<Path>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.paths.len()
    }

    fn position(&self, p: &Path) -> Option<usize> {
        self.paths.iter().position(|q| q == p)
    }
}

/// A generator's image: one matrix per block.
pub type BlockImage = Vec<LaurentMatrix>;

/// The Cuntz–Krieger family of the quotient graph in block-diagonal
/// matrices; the quotient keeps the edges whose range is outside `N`.
#[derive(Clone, Debug)]
pub struct Representation {
    pub sets: ZeroSets,
    pub blocks: Vec<Block>,
    pub vertices: VertexSet,
    pub edges: Vec<EdgeIx>,
    projections: BTreeMap<Vertex, BlockImage>,
    isometries: BTreeMap<EdgeIx, BlockImage>,
}

/// All paths of the quotient ending at `base` with no edge sourced at
/// `base`, enumerated backwards, shortest first.
fn first_passage_paths(g: &Graph, kept: &[bool], base: Vertex) -> Result<Vec<Path>> {
    let mut out = vec![Path::empty(base)];
    let mut i = 0;
    while i < out.len() {
        let p = out[i].clone();
        for &e in g.in_edges(p.source()) {
            if kept[e.0] && g.edge(e).source != base {
                out.push(p.prepend(g, e).expect("in-edge composes"));
                if out.len() > MAX_BLOCK {
                    return Err(Error::CountOverflow);
                }
            }
        }
        i += 1;
    }
    Ok(out)
}

impl Representation {
    pub fn projection(&self, v: Vertex) -> BlockImage {
        self.projections
            .get(&v)
            .cloned()
            .unwrap_or_else(|| self.zero_image())
    }

    pub fn isometry(&self, e: EdgeIx) -> BlockImage {
        self.isometries
            .get(&e)
            .cloned()
            .unwrap_or_else(|| self.zero_image())
    }

    fn zero_image(&self) -> BlockImage {
        self.blocks
            .iter()
            .map(|b| LaurentMatrix::zero(b.dim()))
            .collect()
    }

    fn map2(
        a: &BlockImage,
        b: &BlockImage,
        f: impl Fn(&LaurentMatrix, &LaurentMatrix) -> LaurentMatrix,
    ) -> BlockImage {
        a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
    }

    fn star(a: &BlockImage) -> BlockImage {
        a.iter().map(LaurentMatrix::star).collect()
    }

    /// Image of `S_μ S_ν*`.
    pub fn image(&self, w: &Word) -> BlockImage {
        let mut acc = self.projection(w.mu.source());
        for &e in w.mu.edges() {
            acc = Self::map2(&acc, &self.isometry(e), LaurentMatrix::mul);
        }
        let mut right = self.projection(w.nu.source());
        for &e in w.nu.edges() {
            right = Self::map2(&right, &self.isometry(e), LaurentMatrix::mul);
        }
        Self::map2(&acc, &Self::star(&right), LaurentMatrix::mul)
    }

    /// Exact check of the Cuntz–Krieger relations of the quotient graph,
    /// and that every vertex of `N` is sent to zero.
    pub fn check_relations(&self, g: &Graph) -> Result<()> {
        let fail = |msg: String| Err(Error::Representation(msg));
        for v in g.vertex_ids() {
            let p = self.projection(v);
            if self.sets.outside.contains(&v) {
                if p.iter().any(|m| !m.is_zero()) {
                    return fail(format!("P_{} is nonzero but lies in N", g.name(v)));
                }
                continue;
            }
            if Self::map2(&p, &p, LaurentMatrix::mul) != p || Self::star(&p) != p {
                return fail(format!("P_{} is not a projection", g.name(v)));
            }
            for w in self.vertices.range(v..).skip(1) {
                let q = self.projection(*w);
                if Self::map2(&p, &q, LaurentMatrix::mul)
                    .iter()
                    .any(|m| !m.is_zero())
                {
                    return fail(format!(
                        "P_{} and P_{} are not orthogonal",
                        g.name(v),
                        g.name(*w)
                    ));
                }
            }
        }
        for &e in &self.edges {
            let s = self.isometry(e);
            let edge = g.edge(e);
            if Self::map2(&Self::star(&s), &s, LaurentMatrix::mul) != self.projection(edge.range) {
                return fail(format!(
                    "S_{}* S_{} differs from P_{}",
                    edge.id,
                    edge.id,
                    g.name(edge.range)
                ));
            }
        }
        for &v in &self.vertices {
            let out: Vec<EdgeIx> = self
                .edges
                .iter()
                .copied()
                .filter(|&e| g.edge(e).source == v)
                .collect();
            if out.is_empty() {
                continue;
            }
            let mut sum = self.zero_image();
            for e in out {
                let s = self.isometry(e);
                let ss = Self::map2(&s, &Self::star(&s), LaurentMatrix::mul);
                sum = Self::map2(&sum, &ss, LaurentMatrix::add);
            }
            if sum != self.projection(v) {
                return fail(format!(
                    "P_{} is not the sum of its range projections",
                    g.name(v)
                ));
            }
        }
        Ok(())
    }
}

/// Builds the representation and verifies it exactly.
pub fn build_representation(g: &Graph) -> Result<Representation> {
    let sets = zero_sets(g);
    let kept: Vec<bool> = g
        .edges()
        .iter()
        .map(|e| !sets.outside.contains(&e.range))
        .collect();
    let edges: Vec<EdgeIx> = g.edge_ixs().filter(|e| kept[e.0]).collect();
    let vertices: VertexSet = g
        .vertex_ids()
        .filter(|v| !sets.outside.contains(v))
        .collect();
    for &e in &edges {
        if sets.outside.contains(&g.edge(e).source) {
            return Err(Error::Representation(format!(
                "edge {} leaves N, which must be hereditary",
                g.edge(e).id
            )));
        }
    }

    let mut blocks = Vec::new();
    for source in sets.sources(g) {
        let paths = first_passage_paths(g, &kept, source.base())?;
        let count = count_first_passage(g, source.base())?;
        if paths.len() as u64 != count {
            return Err(Error::Representation(format!(
                "{}: {} quotient paths but multiplicity {}",
                source.label(),
                paths.len(),
                count
            )));
        }
        blocks.push(Block { source, paths });
    }

    let mut projections = BTreeMap::new();
    for &v in &vertices {
        let image: BlockImage = blocks
            .iter()
            .map(|b| {
                let mut m = LaurentMatrix::zero(b.dim());
                for (i, p) in b.paths.iter().enumerate() {
                    if p.source() == v {
                        m.set(i, i, LaurentPoly::one());
                    }
                }
                m
            })
            .collect();
        projections.insert(v, image);
    }

    let mut isometries = BTreeMap::new();
    for &f in &edges {
        let edge = g.edge(f);
        let mut image = Vec::new();
        for b in &blocks {
            let mut m = LaurentMatrix::zero(b.dim());
            let base = b.source.base();
            if edge.source == base {
                // only the loop edge leaves the base inside the quotient
                let target = b
                    .paths
                    .iter()
                    .filter(|p| p.source() == edge.range)
                    .min_by_key(|p| p.len());
                if let (Some(target), TraceSource::Component(_)) = (target, &b.source) {
                    let j = b.position(target).expect("listed path");
                    let i = b.position(&Path::empty(base)).expect("empty path at base");
                    m.set(i, j, LaurentPoly::monomial(1, 1));
                }
            } else {
                for (j, alpha) in b.paths.iter().enumerate() {
                    if alpha.source() == edge.range {
                        let longer = alpha.prepend(g, f).expect("edge composes");
                        let i = b.position(&longer).expect("prepended path is listed");
                        m.set(i, j, LaurentPoly::one());
                    }
                }
            }
            image.push(m);
        }
        isometries.insert(f, image);
    }

    let rep = Representation {
        sets,
        blocks,
        vertices,
        edges,
        projections,
        isometries,
    };
    rep.check_relations(g)?;
    Ok(rep)
}

/// A trace state: convex weights over the sources, circle sources carrying
/// a probability measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSpec {
    pub terms: Vec<crate::state::StateTerm>,
}

/// `Σ_a α_a ∫ tr_a(π_a(w))`, with normalized traces `tr_a = Tr / n_a`.
pub fn eval_trace(rep: &Representation, spec: &TraceSpec, w: &Word) -> Result<Complex64> {
    let total: f64 = spec.terms.iter().map(|t| t.weight).sum();
    if spec
        .terms
        .iter()
        .any(|t| t.weight.is_nan() || t.weight < 0.0)
        || (total - 1.0).abs() > TOL.classification
    {
        return Err(Error::InvalidState(format!(
            "weights must be nonnegative and sum to 1 (sum {total})"
        )));
    }
    let image = rep.image(w);
    let mut acc = Complex64::new(0.0, 0.0);
    for term in &spec.terms {
        let k = rep
            .blocks
            .iter()
            .position(|b| b.source.label() == term.source)
            .ok_or_else(|| Error::InvalidSource(term.source.clone()))?;
        let block = &rep.blocks[k];
        let tr = image[k].trace();
        let value = match (&block.source, &term.measure) {
            (TraceSource::Sink { .. }, None) => Complex64::new(tr.constant_term() as f64, 0.0),
            (TraceSource::Component(_), Some(Measure::Lebesgue)) => {
                Complex64::new(tr.constant_term() as f64, 0.0)
            }
            (TraceSource::Component(_), Some(Measure::Atoms(atoms))) => {
                atoms.iter().map(|a| tr.eval(a.lambda) * a.mass).sum()
            }
            _ => {
                return Err(Error::InvalidState(format!(
                    "{}: a measure is required exactly for circle summands",
                    term.source
                )))
            }
        };
        acc += value * (term.weight / block.dim() as f64);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{example_graph, Profile};

    #[test]
    fn fixture_zero_sets() {
        let g = example_graph(Profile::Gauge);
        let z = zero_sets(&g);
        assert_eq!(
            z.circulars
                .iter()
                .map(|c| c.label.as_str())
                .collect::<Vec<_>>(),
            ["C1"]
        );
        assert_eq!(z.sinks, vec![g.vertex("s1").unwrap()]);
        assert_eq!(
            z.outside,
            g.vertex_set(&["v5", "v6", "v7", "v8", "v9", "v10", "s2"])
                .unwrap()
        );
    }

    #[test]
    fn small_zero_sets() {
        let sink = Graph::builder().vertex("s").build().unwrap();
        let z = zero_sets(&sink);
        assert!(z.circulars.is_empty());
        assert_eq!(z.sinks, vec![Vertex(0)]);
        let lone = Graph::builder()
            .vertex("x")
            .edge("l", "x", "x", 0.0)
            .build()
            .unwrap();
        let z = zero_sets(&lone);
        assert_eq!(z.circulars.len(), 1);
        assert!(z.sinks.is_empty());
    }

    #[test]
    fn multiplicities() {
        let g = example_graph(Profile::Gauge);
        let z = zero_sets(&g);
        assert_eq!(multiplicity(&g, &z.source(&g, "s1").unwrap()).unwrap(), 2);
        assert_eq!(multiplicity(&g, &z.source(&g, "C1").unwrap()).unwrap(), 3);
        // the count does not depend on the chosen base vertex
        assert_eq!(count_first_passage(&g, g.vertex("v4").unwrap()).unwrap(), 3);
        let bad = TraceSource::Sink {
            vertex: g.vertex("s2").unwrap(),
            label: "s2".into(),
        };
        assert!(matches!(
            multiplicity(&g, &bad),
            Err(Error::InvalidSource(_))
        ));
        let sink = Graph::builder().vertex("s").build().unwrap();
        let src = zero_sets(&sink).source(&sink, "s").unwrap();
        assert_eq!(multiplicity(&sink, &src).unwrap(), 1);
    }

    #[test]
    fn structures() {
        let g = example_graph(Profile::Gauge);
        assert_eq!(
            format_structure(&algebra_structure(&g).unwrap()),
            "M_2(C) (+) M_3(C(T))"
        );
        let two = Graph::builder().vertices(["a", "b"]).build().unwrap();
        assert_eq!(
            format_structure(&algebra_structure(&two).unwrap()),
            "C (+) C"
        );
        let lone = Graph::builder()
            .vertex("x")
            .edge("l", "x", "x", 0.0)
            .build()
            .unwrap();
        assert_eq!(format_structure(&algebra_structure(&lone).unwrap()), "C(T)");
    }

    #[test]
    fn laurent_arithmetic() {
        let z = LaurentPoly::monomial(1, 1);
        assert_eq!(z.mul(&z.star()), LaurentPoly::one());
        assert!(z.add(&LaurentPoly::monomial(-1, 1)).is_zero());
        assert_eq!(z.to_string(), "z");
        assert_eq!(z.star().to_string(), "z^-1");
        let i = Complex64::new(0.0, 1.0);
        assert!((z.mul(&z).eval(i) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn fixture_representation() {
        let g = example_graph(Profile::Gauge);
        let rep = build_representation(&g).unwrap();
        let dims: Vec<usize> = rep.blocks.iter().map(Block::dim).collect();
        assert_eq!(dims, [2, 3]);
        // the circle variable sits on the loop edge leaving the base only
        let mut with_z = Vec::new();
        for &e in &rep.edges {
            for m in rep.isometry(e) {
                for (_, p) in m.nonzero() {
                    if p.terms().any(|(d, _)| d != 0) {
                        with_z.push(g.edge(e).id.clone());
                    }
                }
            }
        }
        assert_eq!(with_z, ["e3"]);
        for v in ["v5", "s2", "v9"] {
            assert!(rep
                .projection(g.vertex(v).unwrap())
                .iter()
                .all(LaurentMatrix::is_zero));
        }
    }

    #[test]
    fn trivial_representations() {
        let sink = Graph::builder().vertex("s").build().unwrap();
        let rep = build_representation(&sink).unwrap();
        assert_eq!(rep.projection(Vertex(0)), vec![LaurentMatrix::identity(1)]);
        assert!(rep.edges.is_empty());
        let lone = Graph::builder()
            .vertex("x")
            .edge("l", "x", "x", 0.0)
            .build()
            .unwrap();
        let rep = build_representation(&lone).unwrap();
        let mut expect = LaurentMatrix::zero(1);
        expect.set(0, 0, LaurentPoly::monomial(1, 1));
        assert_eq!(rep.isometry(EdgeIx(0)), vec![expect]);
    }

    #[test]
    fn trace_values() {
        let g = example_graph(Profile::Gauge);
        let rep = build_representation(&g).unwrap();
        let spec: TraceSpec = serde_json::from_str(
            r#"{"terms": [{"source": "s1", "weight": 0.5},
                          {"source": "C1", "weight": 0.5, "measure": "lebesgue"}]}"#,
        )
        .unwrap();
        let p = |v: &str| Word::vertex(g.vertex(v).unwrap());
        let val = |w: &Word| eval_trace(&rep, &spec, w).unwrap();
        // P_v2 has rank 1 in both blocks
        assert!((val(&p("v2")) - Complex64::new(0.5 / 2.0 + 0.5 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(val(&p("v5")), Complex64::new(0.0, 0.0));
        let total: Complex64 = g.vertex_ids().map(|v| val(&Word::vertex(v))).sum();
        assert!((total - 1.0).norm() < 1e-15);
        // the loop at the base has trace zero for Lebesgue measure, z for an atom
        let w = Word::parse(&g, "e3,a", "@v3").unwrap();
        assert_eq!(val(&w), Complex64::new(0.0, 0.0));
        let atom: TraceSpec = serde_json::from_str(
            r#"{"terms": [{"source": "C1", "weight": 1.0, "measure": {"atoms": [{"lambda": [0.0, 1.0], "mass": 1.0}]}}]}"#,
        )
        .unwrap();
        let v = eval_trace(&rep, &atom, &w).unwrap();
        assert!((v - Complex64::new(0.0, 1.0 / 3.0)).norm() < 1e-15);
    }
}
