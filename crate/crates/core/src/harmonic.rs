//! Almost-harmonic vectors of `A(β)`: the extreme points `φ^C`, `φ^s` and
//! the decomposition of a normalized almost-harmonic vector over them.

use nalgebra::DVector;
use serde::Serialize;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::graph::{components, Component, Graph, Vertex, VertexSet};
use crate::spectral::{
    a_beta, a_beta_on, neumann_inverse, perron_vector, spectral_radius, WeightMatrix,
};

/// A nonnegative vector indexed by all vertices of a graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarmonicVector {
    pub values: Vec<f64>,
    pub normalized: bool,
}

impl HarmonicVector {
    /// Wraps `values`, flagging it normalized when it sums to 1.
    pub fn new(values: Vec<f64>) -> HarmonicVector {
        let normalized = (values.iter().sum::<f64>() - 1.0).abs() <= TOL.harmonicity;
        HarmonicVector { values, normalized }
    }

    pub fn zeros(n: usize) -> HarmonicVector {
        HarmonicVector {
            values: vec![0.0; n],
            normalized: false,
        }
    }

    pub fn get(&self, v: Vertex) -> f64 {
        self.values[v.0]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Scales to total mass 1.
    pub fn normalize(mut self) -> Result<HarmonicVector> {
        let total = self.sum();
        if total.is_nan() || total <= 0.0 {
            return Err(Error::NotNormalized(total));
        }
        self.values.iter_mut().for_each(|x| *x /= total);
        self.normalized = true;
        Ok(self)
    }

    /// Vertices carrying a value above `tol`.
    pub fn support(&self, tol: f64) -> VertexSet {
        (0..self.values.len())
            .filter(|&i| self.values[i] > tol)
            .map(Vertex)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Harmonicity {
    Harmonic,
    AlmostHarmonic,
    Neither,
}

/// Compares `Bψ` with `ψ` at every vertex, and at the non-sinks only.
pub fn is_almost_harmonic(b: &WeightMatrix, psi: &HarmonicVector, g: &Graph) -> Harmonicity {
    if b.rows().len() != g.vertex_count() || !b.is_square() || psi.len() != g.vertex_count() {
        return Harmonicity::Neither;
    }
    if psi.values.iter().any(|&x| x < -TOL.almost_harmonic) {
        return Harmonicity::Neither;
    }
    let x = DVector::from_column_slice(&psi.values);
    let image = b.entries() * &x;
    let mut harmonic = true;
    for v in g.vertex_ids() {
        if (image[v.0] - x[v.0]).abs() > TOL.almost_harmonic {
            if !g.is_sink(v) {
                return Harmonicity::Neither;
            }
            harmonic = false;
        }
    }
    if harmonic {
        Harmonicity::Harmonic
    } else {
        Harmonicity::AlmostHarmonic
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum ExtremeKind {
    Component(Component),
    Sink(Vertex),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremePoint {
    pub kind: ExtremeKind,
    pub vector: HarmonicVector,
}

impl ExtremePoint {
    pub fn label(&self, g: &Graph) -> String {
        match &self.kind {
            ExtremeKind::Component(c) => c.label.clone(),
            ExtremeKind::Sink(s) => g.name(*s).to_string(),
        }
    }
}

fn singleton(v: Vertex) -> VertexSet {
    VertexSet::from([v])
}

/// Radius of `A(β)` on `closure({s}) ∖ {s}`; the sink is summable iff it is `< 1`.
pub fn sink_radius(g: &Graph, beta: f64, s: Vertex) -> Result<f64> {
    let mut rest = g.closure(&singleton(s));
    rest.remove(&s);
    spectral_radius(&a_beta_on(g, beta, &rest))
}

/// `φ^s_v ∝ Σ_n A(β)^n_{vs}`, the normalized `s`-column of the Neumann
/// inverse over `closure({s})`.
pub fn phi_sink(g: &Graph, beta: f64, s: Vertex) -> Result<ExtremePoint> {
    if !g.is_sink(s) {
        return Err(Error::NotASink(g.name(s).to_string()));
    }
    let radius = sink_radius(g, beta, s)?;
    if radius >= 1.0 - TOL.classification {
        return Err(Error::NotSummable {
            sink: g.name(s).to_string(),
            radius,
        });
    }
    let closure = g.closure(&singleton(s));
    let block = a_beta_on(g, beta, &closure);
    let inv = neumann_inverse(&block)?;
    let col = block.col_position(s).expect("sink lies in its closure");
    let mut values = vec![0.0; g.vertex_count()];
    for (i, &v) in block.rows().iter().enumerate() {
        values[v.0] = inv[(i, col)];
    }
    Ok(ExtremePoint {
        kind: ExtremeKind::Sink(s),
        vector: HarmonicVector::new(values).normalize()?,
    })
}

/// Why `C` fails to be `A(β)`-harmonic, if it does.
pub fn component_obstruction(g: &Graph, beta: f64, c: &Component) -> Result<Option<String>> {
    let rho = spectral_radius(&a_beta_on(g, beta, &c.members))?;
    if (rho - 1.0).abs() > TOL.classification {
        return Ok(Some(format!("radius on the component is {rho}, not 1")));
    }
    let rest: VertexSet = g
        .closure(&c.members)
        .difference(&c.members)
        .copied()
        .collect();
    let below = spectral_radius(&a_beta_on(g, beta, &rest))?;
    if below >= 1.0 - TOL.classification {
        return Ok(Some(format!(
            "radius {below} upstream of the component is not below 1"
        )));
    }
    Ok(None)
}

/// The unique normalized `A(β)`-harmonic vector supported on `closure(C)`.
pub fn phi_component(g: &Graph, beta: f64, c: &Component) -> Result<ExtremePoint> {
    if let Some(reason) = component_obstruction(g, beta, c)? {
        return Err(Error::NotHarmonicComponent {
            component: c.label.clone(),
            reason,
        });
    }
    let a = a_beta(g, beta);
    let x = perron_vector(&a.principal(&c.members)?)?;
    let rest: VertexSet = g
        .closure(&c.members)
        .difference(&c.members)
        .copied()
        .collect();
    let mut values = vec![0.0; g.vertex_count()];
    for (i, &v) in c.members.iter().enumerate() {
        values[v.0] = x[i];
    }
    if !rest.is_empty() {
        let inv = neumann_inverse(&a.principal(&rest)?)?;
        let feed = a.restrict(&rest, &c.members)?;
        let y = inv * (feed.entries() * &x);
        for (i, &v) in rest.iter().enumerate() {
            values[v.0] = y[i];
        }
    }
    let vector = HarmonicVector::new(values).normalize()?;
    if is_almost_harmonic(&a, &vector, g) != Harmonicity::Harmonic {
        return Err(Error::NotHarmonicComponent {
            component: c.label.clone(),
            reason: "constructed vector fails the harmonicity check".into(),
        });
    }
    Ok(ExtremePoint {
        kind: ExtremeKind::Component(c.clone()),
        vector,
    })
}

/// All `φ^C` over `A(β)`-harmonic components, then all `φ^s` over
/// `A(β)`-summable sinks, in canonical order.
pub fn extreme_points(g: &Graph, beta: f64) -> Result<Vec<ExtremePoint>> {
    let mut out = Vec::new();
    for c in components(g) {
        if component_obstruction(g, beta, &c)?.is_none() {
            out.push(phi_component(g, beta, &c)?);
        }
    }
    for s in g.sinks() {
        if sink_radius(g, beta, s)? < 1.0 - TOL.classification {
            out.push(phi_sink(g, beta, s)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimplexDecomposition {
    pub component_terms: Vec<(Component, f64)>,
    pub sink_terms: Vec<(Vertex, f64)>,
    pub residual_norm: f64,
}

impl SimplexDecomposition {
    pub fn total(&self) -> f64 {
        self.component_terms.iter().map(|t| t.1).sum::<f64>()
            + self.sink_terms.iter().map(|t| t.1).sum::<f64>()
    }
}

/// `Σ t_i ξ_i` over extreme points.
pub fn recombine(n: usize, terms: &[(&ExtremePoint, f64)]) -> HarmonicVector {
    let mut values = vec![0.0; n];
    for (p, t) in terms {
        for (acc, x) in values.iter_mut().zip(&p.vector.values) {
            *acc += t * x;
        }
    }
    HarmonicVector::new(values)
}

/// Coefficients below this are treated as absent terms.
const NEGLIGIBLE: f64 = 1e-12;

/// Writes a normalized almost-harmonic `ψ` as a convex combination of the
/// extreme points. Sink weights come from the defect `ψ - A(β)ψ`; the
/// harmonic remainder is split over harmonic components, which never talk
/// to one another, so each coefficient is read off its own component.
pub fn decompose(g: &Graph, beta: f64, psi: &HarmonicVector) -> Result<SimplexDecomposition> {
    let a = a_beta(g, beta);
    if is_almost_harmonic(&a, psi, g) == Harmonicity::Neither {
        return Err(Error::NotAlmostHarmonic);
    }
    let total = psi.sum();
    if (total - 1.0).abs() > TOL.harmonicity {
        return Err(Error::NotNormalized(total));
    }
    let n = g.vertex_count();
    let image = a.entries() * DVector::from_column_slice(&psi.values);
    let mut remainder = psi.values.clone();

    let mut sink_terms = Vec::new();
    for s in g.sinks() {
        let defect = psi.get(s) - image[s.0];
        if defect <= NEGLIGIBLE {
            continue;
        }
        let closure = g.closure(&singleton(s));
        let block = a_beta_on(g, beta, &closure);
        let inv = neumann_inverse(&block).map_err(|_| Error::NotSummable {
            sink: g.name(s).to_string(),
            radius: sink_radius(g, beta, s).unwrap_or(f64::NAN),
        })?;
        let col = block.col_position(s).expect("sink lies in its closure");
        let mass: f64 = inv.column(col).sum();
        let t = defect * mass;
        let phi = phi_sink(g, beta, s)?;
        for (r, x) in remainder.iter_mut().zip(&phi.vector.values) {
            *r -= t * x;
        }
        sink_terms.push((s, t));
    }

    let mut component_terms = Vec::new();
    for c in components(g) {
        let on_c: f64 = c.members.iter().map(|v| remainder[v.0]).sum();
        if on_c <= NEGLIGIBLE || component_obstruction(g, beta, &c)?.is_some() {
            continue;
        }
        let phi = phi_component(g, beta, &c)?;
        let mass: f64 = c.members.iter().map(|&v| phi.vector.get(v)).sum();
        component_terms.push((c, on_c / mass));
    }

    let mut rebuilt = vec![0.0; n];
    for (c, t) in &component_terms {
        let phi = phi_component(g, beta, c)?;
        for (r, x) in rebuilt.iter_mut().zip(&phi.vector.values) {
            *r += t * x;
        }
    }
    for &(s, t) in &sink_terms {
        let phi = phi_sink(g, beta, s)?;
        for (r, x) in rebuilt.iter_mut().zip(&phi.vector.values) {
            *r += t * x;
        }
    }
    let residual_norm = rebuilt
        .iter()
        .zip(&psi.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if residual_norm > TOL.reconstruction {
        return Err(Error::Decomposition(residual_norm));
    }
    Ok(SimplexDecomposition {
        component_terms,
        sink_terms,
        residual_norm,
    })
}
