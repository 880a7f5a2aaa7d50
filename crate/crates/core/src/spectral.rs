//! Nonnegative vertex-indexed matrices: `A(β)`, restrictions `B^{E,D}`,
//! spectral radii, Perron vectors, Neumann inverses and the Riesz
//! decomposition of superharmonic vectors.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::graph::scc::strongly_connected;
use crate::graph::{Graph, Vertex, VertexSet};

/// A nonnegative matrix whose rows and columns are labelled by vertices in
/// canonical order. Square when `rows == cols`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightMatrix {
    rows: Vec<Vertex>,
    cols: Vec<Vertex>,
    entries: DMatrix<f64>,
}

impl WeightMatrix {
    /// Square matrix over `index`.
    pub fn new(index: Vec<Vertex>, entries: DMatrix<f64>) -> Result<WeightMatrix> {
        if entries.nrows() != index.len() || entries.ncols() != index.len() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        Ok(WeightMatrix {
            cols: index.clone(),
            rows: index,
            entries,
        })
    }

    /// Square matrix indexed by `Vertex(0..n)`; handy for matrices that do
    /// not come from a graph.
    pub fn from_matrix(entries: DMatrix<f64>) -> Result<WeightMatrix> {
        let index = (0..entries.nrows()).map(Vertex).collect();
        WeightMatrix::new(index, entries)
    }

    pub fn rows(&self) -> &[Vertex] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vertex] {
        &self.cols
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_position(&self, v: Vertex) -> Option<usize> {
        self.rows.binary_search(&v).ok()
    }

    pub fn col_position(&self, v: Vertex) -> Option<usize> {
        self.cols.binary_search(&v).ok()
    }

    /// Entry `(v, w)`, zero when either index is absent.
    pub fn get(&self, v: Vertex, w: Vertex) -> f64 {
        match (self.row_position(v), self.col_position(w)) {
            (Some(i), Some(j)) => self.entries[(i, j)],
            _ => 0.0,
        }
    }

    /// The block on `rows × cols`; both must lie inside this matrix's index.
    pub fn restrict(&self, rows: &VertexSet, cols: &VertexSet) -> Result<WeightMatrix> {
        let pick = |set: &VertexSet, index: &[Vertex]| -> Result<Vec<usize>> {
            set.iter()
                .map(|&v| {
                    index
                        .binary_search(&v)
                        .map_err(|_| Error::UnknownVertex(format!("#{}", v.0)))
                })
                .collect()
        };
        let ri = pick(rows, &self.rows)?;
        let ci = pick(cols, &self.cols)?;
        let entries = DMatrix::from_fn(ri.len(), ci.len(), |i, j| self.entries[(ri[i], ci[j])]);
        Ok(WeightMatrix {
            rows: rows.iter().copied().collect(),
            cols: cols.iter().copied().collect(),
            entries,
        })
    }

    /// Principal block on `set`.
    pub fn principal(&self, set: &VertexSet) -> Result<WeightMatrix> {
        self.restrict(set, set)
    }
}

/// `A(β)_{vw} = Σ_{e: v→w} exp(-β F(e))` over all vertices.
pub fn a_beta(g: &Graph, beta: f64) -> WeightMatrix {
    let n = g.vertex_count();
    let mut m = DMatrix::zeros(n, n);
    for e in g.edges() {
        m[(e.source.0, e.range.0)] += (-beta * e.weight).exp();
    }
    WeightMatrix::new(g.vertex_ids().collect(), m).expect("square by construction")
}

/// `A(β)^S`, the principal block of `A(β)` on `set`.
pub fn a_beta_on(g: &Graph, beta: f64, set: &VertexSet) -> WeightMatrix {
    let index: Vec<Vertex> = set.iter().copied().collect();
    let k = index.len();
    let mut m = DMatrix::zeros(k, k);
    for e in g.edges() {
        if let (Ok(i), Ok(j)) = (
            index.binary_search(&e.source),
            index.binary_search(&e.range),
        ) {
            m[(i, j)] += (-beta * e.weight).exp();
        }
    }
    WeightMatrix::new(index, m).expect("square by construction")
}

/// `B^{rows, cols}`.
pub fn restrict(b: &WeightMatrix, rows: &VertexSet, cols: &VertexSet) -> Result<WeightMatrix> {
    b.restrict(rows, cols)
}

/// Spectral radius of a square nonnegative matrix: the largest radius over
/// its irreducible diagonal blocks, zero for an empty or nilpotent matrix.
pub fn spectral_radius(b: &WeightMatrix) -> Result<f64> {
    if !b.is_square() {
        return Err(Error::NotSquare {
            rows: b.rows.len(),
            cols: b.cols.len(),
        });
    }
    matrix_radius(&b.entries)
}

/// [`spectral_radius`] on a bare matrix.
pub fn matrix_radius(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let mut rho: f64 = 0.0;
    for class in support_classes(m) {
        rho = rho.max(block_radius(m, &class)?);
    }
    Ok(rho)
}

fn support_classes(m: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| m[(i, j)] > 0.0).collect())
        .collect();
    strongly_connected(&adj)
}

fn block_radius(m: &DMatrix<f64>, class: &[usize]) -> Result<f64> {
    if class.len() == 1 {
        let i = class[0];
        return Ok(m[(i, i)]);
    }
    let block = DMatrix::from_fn(class.len(), class.len(), |i, j| m[(class[i], class[j])]);
    if let Some(r) = cycle_radius(&block) {
        return Ok(r);
    }
    irreducible_radius(&block).map(|(r, _)| r)
}

/// Closed form `(Π w_i)^{1/p}` when the support of an irreducible block is a
/// single cycle, i.e. every row has exactly one positive entry.
fn cycle_radius(block: &DMatrix<f64>) -> Option<f64> {
    let mut log_sum = 0.0;
    for row in block.row_iter() {
        let mut positive = row.iter().filter(|&&x| x > 0.0);
        let w = *positive.next()?;
        if positive.next().is_some() {
            return None;
        }
        log_sum += w.ln();
    }
    Some((log_sum / block.nrows() as f64).exp())
}

/// Power iteration on `B/s + I` (primitive even when `B` is periodic), with
/// repeated squaring to accelerate and Collatz–Wielandt bounds as the
/// stopping rule. Returns `ρ(B)` and a max-normalized Perron vector.
fn irreducible_radius(b: &DMatrix<f64>) -> Result<(f64, DVector<f64>)> {
    let k = b.nrows();
    let scale = b
        .row_iter()
        .map(|r| r.iter().sum::<f64>())
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return Ok((0.0, DVector::from_element(k, 1.0)));
    }
    let shifted = b / scale + DMatrix::identity(k, k);
    let floor = 64.0 * f64::EPSILON * k as f64;
    let mut power = shifted.clone();
    let mut x = DVector::from_element(k, 1.0);
    let mut gap = f64::INFINITY;
    for it in 0..TOL.max_iterations {
        if it < 64 {
            x = normalize_max(&power * DVector::from_element(k, 1.0));
        } else {
            x = normalize_max(&shifted * &x);
        }
        let image = &shifted * &x;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
        for i in 0..k {
            let r = image[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if lo.is_finite() && hi.is_finite() {
            gap = hi - lo;
            let rho = scale * ((lo + hi) / 2.0 - 1.0);
            if scale * gap <= TOL.eig * rho.max(1.0) || gap <= floor {
                return Ok((rho.max(0.0), x));
            }
        }
        if it < 64 {
            power = &power * &power;
            let top = power.max();
            power /= top;
        }
    }
    Err(Error::NonConvergence {
        what: "spectral radius",
        iterations: TOL.max_iterations,
        gap,
    })
}

fn normalize_max(v: DVector<f64>) -> DVector<f64> {
    let top = v.max();
    v / top
}

fn is_irreducible(m: &DMatrix<f64>) -> bool {
    m.nrows() > 0 && support_classes(m).len() == 1
}

/// Perron vector of an irreducible matrix with `ρ = 1`, max-normalized.
pub fn perron_vector(b: &WeightMatrix) -> Result<DVector<f64>> {
    let rho = spectral_radius(b)?;
    if !is_irreducible(&b.entries) {
        return Err(Error::Reducible);
    }
    if (rho - 1.0).abs() > TOL.classification {
        return Err(Error::RadiusNotOne(rho));
    }
    let k = b.entries.nrows();
    let x = if k == 1 {
        DVector::from_element(1, 1.0)
    } else {
        irreducible_radius(&b.entries)?.1
    };
    let residual = (&b.entries * &x - &x * rho).amax();
    if residual > TOL.perron_residual {
        return Err(Error::Residual {
            what: "Perron vector",
            residual,
            tolerance: TOL.perron_residual,
        });
    }
    Ok(x)
}

/// `(I - B)^{-1} = Σ_n B^n` for `ρ(B) < 1`.
pub fn neumann_inverse(b: &WeightMatrix) -> Result<DMatrix<f64>> {
    let rho = spectral_radius(b)?;
    if rho >= 1.0 - TOL.classification {
        return Err(Error::NotContracting(rho));
    }
    let k = b.entries.nrows();
    if k == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let system = DMatrix::identity(k, k) - &b.entries;
    let mut inv = system
        .clone()
        .lu()
        .try_inverse()
        .ok_or(Error::NotContracting(rho))?;
    let residual = (&system * &inv - DMatrix::identity(k, k)).amax();
    if residual > TOL.neumann_residual {
        return Err(Error::Residual {
            what: "Neumann inverse",
            residual,
            tolerance: TOL.neumann_residual,
        });
    }
    // the exact inverse is entrywise nonnegative
    inv.iter_mut().for_each(|x| *x = x.max(0.0));
    Ok(inv)
}

/// `ψ = h + Σ_n B^n k` with `h` harmonic and `k = ψ - Bψ`, indexed like `B`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RieszParts {
    pub harmonic: Vec<f64>,
    pub defect: Vec<f64>,
}

pub fn riesz_decompose(b: &WeightMatrix, psi: &[f64]) -> Result<RieszParts> {
    if !b.is_square() {
        return Err(Error::NotSquare {
            rows: b.rows.len(),
            cols: b.cols.len(),
        });
    }
    let m = &b.entries;
    let psi = DVector::from_column_slice(psi);
    let image = m * &psi;
    let mut defect = Vec::with_capacity(psi.len());
    for i in 0..psi.len() {
        let excess = image[i] - psi[i];
        if psi[i] < 0.0 || excess > TOL.harmonicity {
            return Err(Error::NotSuperharmonic {
                vertex: format!("#{}", b.rows[i].0),
                excess,
            });
        }
        defect.push((psi[i] - image[i]).max(0.0));
    }

    // h = lim B^n ψ, a decreasing sequence
    let mut x = psi.clone();
    let mut calm = 0;
    let mut converged = false;
    let mut last_gap = f64::INFINITY;
    for _ in 0..TOL.max_iterations {
        let next = m * &x;
        last_gap = (&next - &x).amax();
        x = next;
        calm = if last_gap < TOL.riesz_cauchy {
            calm + 1
        } else {
            0
        };
        if calm >= TOL.riesz_window {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            what: "Riesz harmonic limit",
            iterations: TOL.max_iterations,
            gap: last_gap,
        });
    }

    // Σ_n B^n k, summed independently to check the reconstruction
    let k = DVector::from_vec(defect.clone());
    let mut term = k.clone();
    let mut potential = k.clone();
    for _ in 0..TOL.max_iterations {
        term = m * &term;
        potential += &term;
        if term.amax() < 1e-18 {
            break;
        }
    }
    let residual = (&psi - &x - &potential).amax();
    if residual > TOL.reconstruction {
        return Err(Error::Residual {
            what: "Riesz reconstruction",
            residual,
            tolerance: TOL.reconstruction,
        });
    }
    Ok(RieszParts {
        harmonic: x.iter().map(|v| v.max(0.0)).collect(),
        defect,
    })
}
