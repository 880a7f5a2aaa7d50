//! Words `S_μ S_ν*`, their products, and the evaluation of KMS states on
//! them: gauge-invariant states from almost-harmonic vectors, the
//! circle-parametrized states `ω^λ_D` of zero-weight circular components,
//! and convex combinations of those.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::graph::{components, Component, EdgeIx, Graph, Path, Vertex, VertexSet};
use crate::harmonic::{phi_component, phi_sink, HarmonicVector};
use crate::kms::kms_sets;
use crate::spectral::{a_beta_on, neumann_inverse};

/// `S_μ S_ν*` with `r(μ) = r(ν)`. The zero element is represented by `None`
/// wherever a product may vanish.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Word {
    pub mu: Path,
    pub nu: Path,
}

impl Word {
    pub fn new(mu: Path, nu: Path) -> Result<Word> {
        if mu.range() != nu.range() {
            return Err(Error::MalformedPath(
                "S_mu S_nu* needs r(mu) = r(nu)".into(),
            ));
        }
        Ok(Word { mu, nu })
    }

    /// The projection `P_v`.
    pub fn vertex(v: Vertex) -> Word {
        Word {
            mu: Path::empty(v),
            nu: Path::empty(v),
        }
    }

    pub fn parse(g: &Graph, mu: &str, nu: &str) -> Result<Word> {
        Word::new(Path::parse(g, mu)?, Path::parse(g, nu)?)
    }

    pub fn adjoint(&self) -> Word {
        Word {
            mu: self.nu.clone(),
            nu: self.mu.clone(),
        }
    }

    /// `F(μ) - F(ν)`, the degree under the generalized gauge action.
    pub fn weight(&self, g: &Graph) -> f64 {
        self.mu.weight(g) - self.nu.weight(g)
    }

    pub fn display(&self, g: &Graph) -> String {
        format!("S[{}]S[{}]*", self.mu.display(g), self.nu.display(g))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{:?}S{:?}*", self.mu.edges(), self.nu.edges())
    }
}

/// `(S_μ S_ν*)(S_γ S_ρ*)`: `S_{μγ'} S_ρ*` if `γ = νγ'`, `S_μ S_{ρν'}*` if
/// `ν = γν'`, and zero otherwise.
pub fn word_multiply(w1: &Word, w2: &Word) -> Option<Word> {
    if let Some(rest) = w2.mu.strip_prefix(&w1.nu) {
        return Some(Word {
            mu: w1.mu.concat(&rest)?,
            nu: w2.nu.clone(),
        });
    }
    if let Some(rest) = w1.nu.strip_prefix(&w2.mu) {
        return Some(Word {
            mu: w1.mu.clone(),
            nu: w2.nu.concat(&rest)?,
        });
    }
    None
}

/// `δ_{μ,ν} e^{-βF(μ)} ψ_{r(μ)}`.
pub fn eval_gauge_invariant(g: &Graph, psi: &HarmonicVector, beta: f64, w: &Word) -> f64 {
    if w.mu != w.nu {
        return 0.0;
    }
    (-beta * w.mu.weight(g)).exp() * psi.get(w.mu.range())
}

/// A circular component with a zero-weight loop, based at its least vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircularData {
    pub component: Component,
    pub base: Vertex,
    #[serde(skip)]
    pub loop_path: Path,
    pub period: usize,
}

impl CircularData {
    pub fn new(g: &Graph, c: &Component) -> Result<CircularData> {
        let path = match &c.loop_path {
            Some(p) if c.circular && p.weight(g).abs() <= TOL.zero_weight => p.clone(),
            _ => return Err(Error::NotZeroCircular(c.label.clone())),
        };
        Ok(CircularData {
            component: c.clone(),
            base: c.least(),
            period: path.len(),
            loop_path: path,
        })
    }

    /// Looks a circular component up by label.
    pub fn by_label(g: &Graph, label: &str) -> Result<CircularData> {
        let c = components(g)
            .into_iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::NotZeroCircular(label.to_string()))?;
        CircularData::new(g, &c)
    }

    fn loop_edge(&self, i: usize) -> EdgeIx {
        self.loop_path.edges()[i % self.period]
    }
}

/// Precomputed data of `ω^λ_D` at a fixed `β`: the normalizer `Z` and the
/// first-passage weights `Z_w` of paths from `w` to the base.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircularState {
    pub data: CircularData,
    pub beta: f64,
    pub z: f64,
    pub z_w: Vec<f64>,
}

impl CircularState {
    /// First-passage sums from the Neumann inverse of `A(β)` on
    /// `closure({base})` with the base's out-edges removed.
    pub fn new(g: &Graph, beta: f64, data: &CircularData) -> Result<CircularState> {
        let closure = g.closure(&VertexSet::from([data.base]));
        let mut block = a_beta_on(g, beta, &closure);
        let b = block
            .row_position(data.base)
            .expect("base lies in its closure");
        let mut entries = block.entries().clone();
        entries.row_mut(b).fill(0.0);
        block = crate::spectral::WeightMatrix::new(block.rows().to_vec(), entries)?;
        let inv = neumann_inverse(&block).map_err(|_| Error::OutsideInterval {
            source_label: data.component.label.clone(),
            beta,
        })?;
        let mut z_w = vec![0.0; g.vertex_count()];
        for (i, &v) in block.rows().iter().enumerate() {
            z_w[v.0] = inv[(i, b)];
        }
        Ok(CircularState {
            data: data.clone(),
            beta,
            z: z_w.iter().sum(),
            z_w,
        })
    }

    /// `ω^λ_D(S_μ S_ν*)`.
    pub fn eval(&self, g: &Graph, lambda: Complex64, w: &Word) -> Complex64 {
        let (m, n) = (w.mu.len(), w.nu.len());
        if m < n {
            return self.eval(g, lambda, &w.adjoint()).conj();
        }
        let diff = m - n;
        if diff % self.data.period != 0 {
            return Complex64::new(0.0, 0.0);
        }
        if diff == 0 {
            if w.mu != w.nu {
                return Complex64::new(0.0, 0.0);
            }
            return Complex64::new(self.diagonal(g, &w.mu), 0.0);
        }
        let Some(gamma) = w.mu.strip_prefix(&w.nu) else {
            return Complex64::new(0.0, 0.0);
        };
        let k = (diff / self.data.period) as i32;
        match self.pinned_weight(g, &w.nu, &gamma) {
            Some(weight) => lambda.powi(k) * (weight / self.z),
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// The gauge-invariant part: `ω(S_μ S_μ*)`, independent of `λ`.
    pub fn diagonal(&self, g: &Graph, mu: &Path) -> f64 {
        let base = self.data.base;
        let edges = mu.edges();
        match edges.iter().position(|&e| g.edge(e).source == base) {
            Some(j) => {
                let on_loop = edges[j..]
                    .iter()
                    .enumerate()
                    .all(|(t, &e)| e == self.data.loop_edge(t));
                if !on_loop {
                    return 0.0;
                }
                let eta: f64 = edges[..j].iter().map(|&e| g.edge(e).weight).sum();
                (-self.beta * eta).exp() / self.z
            }
            None => (-self.beta * mu.weight(g)).exp() * self.z_w[mu.range().0] / self.z,
        }
    }

    /// For `z = νγ^∞`: `e^{-βF(η)}` if `z = ηδ^∞` with `η` its prefix up to
    /// the first base visit, else `None`.
    fn pinned_weight(&self, g: &Graph, nu: &Path, gamma: &Path) -> Option<f64> {
        let (nl, gl) = (nu.len(), gamma.len());
        let edge_at = |i: usize| {
            if i < nl {
                nu.edges()[i]
            } else {
                gamma.edges()[(i - nl) % gl]
            }
        };
        let base = self.data.base;
        let j = (0..nl + gl).find(|&i| g.edge(edge_at(i)).source == base)?;
        let end = j.max(nl) + gl;
        if !(j..end).all(|i| edge_at(i) == self.data.loop_edge(i - j)) {
            return None;
        }
        let eta: f64 = (0..j).map(|i| g.edge(edge_at(i)).weight).sum();
        Some((-self.beta * eta).exp())
    }
}

/// `Z = Σ e^{-βF(α)}` over first-passage paths `α` into the base.
pub fn circular_normalizer(g: &Graph, beta: f64, d: &CircularData) -> Result<f64> {
    Ok(CircularState::new(g, beta, d)?.z)
}

pub fn eval_omega_lambda(
    g: &Graph,
    beta: f64,
    d: &CircularData,
    lambda: Complex64,
    w: &Word,
) -> Result<Complex64> {
    if (lambda.norm() - 1.0).abs() > TOL.classification {
        return Err(Error::InvalidState(format!(
            "|lambda| = {} is not 1",
            lambda.norm()
        )));
    }
    Ok(CircularState::new(g, beta, d)?.eval(g, lambda, w))
}

/// A probability measure on the unit circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Lebesgue,
    Atoms(Vec<Atom>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    /// `[re, im]`.
    pub lambda: Complex64,
    pub mass: f64,
}

/// One extremal ingredient: a sink or component label, its convex weight,
/// and for circular components the measure on the circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateTerm {
    pub source: String,
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Measure>,
}

/// A `β`-KMS state given by its convex decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KmsStateSpec {
    pub beta: f64,
    pub terms: Vec<StateTerm>,
}

impl KmsStateSpec {
    pub fn from_json(text: &str) -> Result<KmsStateSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }
}

#[derive(Clone, Debug)]
enum Part {
    Gauge(HarmonicVector),
    Circle(CircularState, Measure),
}

/// A validated [`KmsStateSpec`] with everything needed for evaluation.
#[derive(Clone, Debug)]
pub struct KmsState {
    beta: f64,
    parts: Vec<(f64, Part)>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidState(msg.into())
}

impl KmsState {
    pub fn new(g: &Graph, spec: &KmsStateSpec) -> Result<KmsState> {
        let sets = kms_sets(g, spec.beta)?;
        let total: f64 = spec.terms.iter().map(|t| t.weight).sum();
        if spec
            .terms
            .iter()
            .any(|t| t.weight.is_nan() || t.weight < 0.0)
            || (total - 1.0).abs() > TOL.classification
        {
            return Err(invalid(format!(
                "weights must be nonnegative and sum to 1 (sum {total})"
            )));
        }
        let mut parts = Vec::new();
        for term in &spec.terms {
            let label = term.source.as_str();
            let part = if let Some(c) = sets.non_circular.iter().find(|c| c.label == label) {
                if term.measure.is_some() {
                    return Err(invalid(format!("{label} takes no measure")));
                }
                Part::Gauge(phi_component(g, spec.beta, c)?.vector)
            } else if let Some(c) = sets.circular.iter().find(|c| c.label == label) {
                let measure = term
                    .measure
                    .clone()
                    .ok_or_else(|| invalid(format!("{label} needs a measure on the circle")))?;
                if let Measure::Atoms(atoms) = &measure {
                    let mass: f64 = atoms.iter().map(|a| a.mass).sum();
                    let bad = atoms.iter().any(|a| {
                        a.mass.is_nan()
                            || a.mass < 0.0
                            || (a.lambda.norm() - 1.0).abs() > TOL.classification
                    });
                    if bad || (mass - 1.0).abs() > TOL.classification {
                        return Err(invalid(format!(
                            "atoms of {label} must be unit complex numbers with masses summing to 1"
                        )));
                    }
                }
                let data = CircularData::new(g, c)?;
                Part::Circle(CircularState::new(g, spec.beta, &data)?, measure)
            } else if let Some(&s) = sets.sinks.iter().find(|&&s| g.name(s) == label) {
                if term.measure.is_some() {
                    return Err(invalid(format!("{label} takes no measure")));
                }
                Part::Gauge(phi_sink(g, spec.beta, s)?.vector)
            } else {
                return Err(invalid(format!(
                    "{label} contributes no extremal state at beta = {}",
                    spec.beta
                )));
            };
            parts.push((term.weight, part));
        }
        Ok(KmsState {
            beta: spec.beta,
            parts,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn eval(&self, g: &Graph, w: &Word) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, part) in &self.parts {
            let v = match part {
                Part::Gauge(psi) => Complex64::new(eval_gauge_invariant(g, psi, self.beta, w), 0.0),
                Part::Circle(state, Measure::Lebesgue) => {
                    if w.mu == w.nu {
                        Complex64::new(state.diagonal(g, &w.mu), 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }
                Part::Circle(state, Measure::Atoms(atoms)) => atoms
                    .iter()
                    .map(|a| state.eval(g, a.lambda, w) * a.mass)
                    .sum(),
            };
            acc += v * t;
        }
        acc
    }
}

pub fn eval_state(g: &Graph, spec: &KmsStateSpec, w: &Word) -> Result<Complex64> {
    Ok(KmsState::new(g, spec)?.eval(g, w))
}

/// `|ω(w1 w2) - e^{-β(F(μ1) - F(ν1))} ω(w2 w1)|`.
pub fn kms_check(
    g: &Graph,
    state: impl Fn(&Word) -> Complex64,
    beta: f64,
    w1: &Word,
    w2: &Word,
) -> f64 {
    let eval = |w: Option<Word>| w.map_or(Complex64::new(0.0, 0.0), |w| state(&w));
    let lhs = eval(word_multiply(w1, w2));
    let rhs = eval(word_multiply(w2, w1)) * (-beta * w1.weight(g)).exp();
    (lhs - rhs).norm()
}

/// A random path of length `≤ max_len` ending at `r`, built backwards;
/// `pick(n)` must return an index below `n`.
pub fn sample_path_into(
    g: &Graph,
    r: Vertex,
    max_len: usize,
    pick: &mut impl FnMut(usize) -> usize,
) -> Path {
    let len = pick(max_len + 1);
    let mut p = Path::empty(r);
    for _ in 0..len {
        let inc = g.in_edges(p.source());
        if inc.is_empty() {
            break;
        }
        p = p
            .prepend(g, inc[pick(inc.len())])
            .expect("in-edge composes");
    }
    p
}

/// A random path of length `≤ max_len` starting at `s`.
pub fn sample_path_from(
    g: &Graph,
    s: Vertex,
    max_len: usize,
    pick: &mut impl FnMut(usize) -> usize,
) -> Path {
    let len = pick(max_len + 1);
    let mut p = Path::empty(s);
    for _ in 0..len {
        let out = g.out_edges(p.range());
        if out.is_empty() {
            break;
        }
        p = p.push(g, out[pick(out.len())]).expect("out-edge composes");
    }
    p
}

/// A random word with paths of length `≤ max_len`.
pub fn sample_word(g: &Graph, max_len: usize, pick: &mut impl FnMut(usize) -> usize) -> Word {
    let r = Vertex(pick(g.vertex_count()));
    let mu = sample_path_into(g, r, max_len, pick);
    let nu = sample_path_into(g, r, max_len, pick);
    Word { mu, nu }
}

/// A random pair whose products are often nonzero: the second word is
/// built so that its `μ` extends, or is a prefix of, the first word's `ν`.
pub fn sample_word_pair(
    g: &Graph,
    max_len: usize,
    pick: &mut impl FnMut(usize) -> usize,
) -> (Word, Word) {
    let w1 = sample_word(g, max_len, pick);
    let w2 = match pick(3) {
        0 => sample_word(g, max_len, pick),
        1 => {
            let room = max_len.saturating_sub(w1.nu.len());
            let ext = sample_path_from(g, w1.nu.range(), room, pick);
            let mu = w1.nu.concat(&ext).expect("extension composes");
            let nu = sample_path_into(g, mu.range(), max_len, pick);
            Word { mu, nu }
        }
        _ => {
            let cut = pick(w1.nu.len() + 1);
            let mu = w1.nu.prefix(g, cut);
            let nu = sample_path_into(g, mu.range(), max_len, pick);
            Word { mu, nu }
        }
    };
    (w1, w2)
}
