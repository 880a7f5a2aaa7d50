//! Critical inverse temperatures and the classification of components and
//! sinks into KMS types, with their admissible intervals.

use std::fmt;

use serde::Serialize;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::graph::{components, sign_profile, Component, Graph, SignTag, Vertex, VertexSet};
use crate::spectral::{a_beta_on, spectral_radius};

/// `ln ρ(A(β)^C)`.
fn log_radius(g: &Graph, members: &VertexSet, beta: f64) -> Result<f64> {
    Ok(spectral_radius(&a_beta_on(g, beta, members))?.ln())
}

/// The unique `β` with `ρ(A(β)^C) = 1` for a component whose loops all
/// have the same strict sign. Circular components with a nonzero loop have
/// `β_C = 0` exactly.
pub fn beta_c(g: &Graph, c: &Component) -> Result<f64> {
    let profile = sign_profile(g, &c.members)?;
    let sign = match profile.tag {
        SignTag::AllPositive => 1.0,
        SignTag::AllNegative => -1.0,
        tag => {
            return Err(Error::NoCriticalBeta {
                component: c.label.clone(),
                profile: format!("{tag:?}"),
            })
        }
    };
    if c.circular {
        return Ok(0.0);
    }
    // h is strictly decreasing in β
    let h = |beta: f64| log_radius(g, &c.members, beta).map(|x| sign * x);
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut step = 1.0;
    while h(lo)? < 0.0 {
        step *= 2.0;
        hi = lo;
        lo -= step;
        if step > 1e12 {
            return Err(bracket_failure());
        }
    }
    step = 1.0;
    while h(hi)? > 0.0 {
        step *= 2.0;
        lo = hi;
        hi += step;
        if step > 1e12 {
            return Err(bracket_failure());
        }
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= TOL.beta_root * lo.abs().max(hi.abs()).max(1.0) || mid == lo || mid == hi {
            break;
        }
        let v = h(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn bracket_failure() -> Error {
    Error::NonConvergence {
        what: "critical inverse temperature bracket",
        iterations: 40,
        gap: f64::INFINITY,
    }
}

/// An interval endpoint together with the label of the component whose
/// `β_C` produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Endpoint {
    pub value: f64,
    pub producer: String,
}

/// An open interval `]lower, upper[`; a missing bound is infinite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lower: Option<Endpoint>,
    pub upper: Option<Endpoint>,
}

impl Interval {
    pub fn full() -> Interval {
        Interval {
            lower: None,
            upper: None,
        }
    }

    pub fn above(e: Endpoint) -> Interval {
        Interval {
            lower: Some(e),
            upper: None,
        }
    }

    pub fn below(e: Endpoint) -> Interval {
        Interval {
            lower: None,
            upper: Some(e),
        }
    }

    pub fn is_full(&self) -> bool {
        self.lower.is_none() && self.upper.is_none()
    }

    /// Strict membership, endpoints excluded with the classification margin.
    pub fn contains(&self, beta: f64) -> bool {
        self.lower
            .as_ref()
            .is_none_or(|e| beta > e.value + TOL.classification)
            && self
                .upper
                .as_ref()
                .is_none_or(|e| beta < e.value - TOL.classification)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self
            .lower
            .as_ref()
            .map_or("-inf".to_string(), |e| closed_form(e.value));
        let hi = self
            .upper
            .as_ref()
            .map_or("+inf".to_string(), |e| closed_form(e.value));
        write!(f, "]{lo}, {hi}[")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotKmsReason {
    /// A zero-weight loop lies in the inspected closure.
    ZeroLoopInClosure,
    /// Loops of both signs lie in the inspected closure.
    MixedSigns,
    /// Some upstream component has `β_{C'}` on the wrong side of `β_C`.
    OrderViolation { other: String },
    /// The loop of a circular component has nonzero weight.
    CircularLoopNonzero,
}

impl fmt::Display for NotKmsReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotKmsReason::ZeroLoopInClosure => write!(f, "zero-weight loop in closure"),
            NotKmsReason::MixedSigns => write!(f, "loops of both signs in closure"),
            NotKmsReason::OrderViolation { other } => {
                write!(f, "critical temperature of {other} is out of order")
            }
            NotKmsReason::CircularLoopNonzero => write!(f, "loop weight is nonzero"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    PositiveKms {
        beta_c: f64,
    },
    NegativeKms {
        beta_c: f64,
    },
    CircularKms {
        positive: bool,
        negative: bool,
        interval: Interval,
    },
    NotKms {
        #[serde(flatten)]
        reason: NotKmsReason,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentVerdict {
    pub component: Component,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SinkVerdict {
    pub sink: Vertex,
    pub label: String,
    pub positive: bool,
    pub negative: bool,
    /// `None` when the sink is of neither type.
    pub interval: Option<Interval>,
}

impl SinkVerdict {
    pub fn is_kms(&self) -> bool {
        self.positive || self.negative
    }
}

/// Components contained in `region`.
fn components_in(g: &Graph, region: &VertexSet) -> Vec<Component> {
    components(g)
        .into_iter()
        .filter(|c| c.members.is_subset(region))
        .collect()
}

/// Interval bounded by the extreme `β_{C'}` over the components in
/// `region`, or ℝ if there are none.
fn interval_from(g: &Graph, region: &VertexSet, positive: bool) -> Result<Interval> {
    let mut best: Option<Endpoint> = None;
    for c in components_in(g, region) {
        let b = beta_c(g, &c)?;
        let better = match &best {
            None => true,
            Some(e) => (positive && b > e.value) || (!positive && b < e.value),
        };
        if better {
            best = Some(Endpoint {
                value: b,
                producer: c.label.clone(),
            });
        }
    }
    Ok(match best {
        None => Interval::full(),
        Some(e) if positive => Interval::above(e),
        Some(e) => Interval::below(e),
    })
}

/// The interval attached to a region's sign profile: both types and ℝ
/// without loops, one type and a ray otherwise, `None` for zero or mixed loops.
fn typed_interval(
    g: &Graph,
    region: &VertexSet,
) -> Result<std::result::Result<(bool, bool, Interval), NotKmsReason>> {
    Ok(match sign_profile(g, region)?.tag {
        SignTag::NoLoops => Ok((true, true, Interval::full())),
        SignTag::AllPositive => Ok((true, false, interval_from(g, region, true)?)),
        SignTag::AllNegative => Ok((false, true, interval_from(g, region, false)?)),
        SignTag::HasZeroLoop => Err(NotKmsReason::ZeroLoopInClosure),
        SignTag::Mixed => Err(NotKmsReason::MixedSigns),
    })
}

pub fn classify_component(g: &Graph, c: &Component) -> Result<ComponentVerdict> {
    let closure = g.closure(&c.members);
    let rest: VertexSet = closure.difference(&c.members).copied().collect();
    let verdict = if c.circular {
        let w = c
            .loop_path
            .as_ref()
            .expect("circular components carry their loop")
            .weight(g);
        if w.abs() > TOL.zero_weight {
            Verdict::NotKms {
                reason: NotKmsReason::CircularLoopNonzero,
            }
        } else {
            match typed_interval(g, &rest)? {
                Ok((positive, negative, interval)) => Verdict::CircularKms {
                    positive,
                    negative,
                    interval,
                },
                Err(reason) => Verdict::NotKms { reason },
            }
        }
    } else {
        match sign_profile(g, &closure)?.tag {
            SignTag::HasZeroLoop => Verdict::NotKms {
                reason: NotKmsReason::ZeroLoopInClosure,
            },
            SignTag::Mixed => Verdict::NotKms {
                reason: NotKmsReason::MixedSigns,
            },
            tag => {
                let positive = tag == SignTag::AllPositive;
                let b = beta_c(g, c)?;
                let mut violation = None;
                for other in components_in(g, &rest) {
                    let b2 = beta_c(g, &other)?;
                    let ordered = if positive {
                        b2 < b - TOL.classification
                    } else {
                        b2 > b + TOL.classification
                    };
                    if !ordered {
                        violation = Some(other.label);
                        break;
                    }
                }
                match (violation, positive) {
                    (Some(other), _) => Verdict::NotKms {
                        reason: NotKmsReason::OrderViolation { other },
                    },
                    (None, true) => Verdict::PositiveKms { beta_c: b },
                    (None, false) => Verdict::NegativeKms { beta_c: b },
                }
            }
        }
    };
    Ok(ComponentVerdict {
        component: c.clone(),
        verdict,
    })
}

pub fn classify_sink(g: &Graph, s: Vertex) -> Result<SinkVerdict> {
    if !g.is_sink(s) {
        return Err(Error::NotASink(g.name(s).to_string()));
    }
    let closure = g.closure(&VertexSet::from([s]));
    let (positive, negative, interval) = match typed_interval(g, &closure)? {
        Ok((p, n, i)) => (p, n, Some(i)),
        Err(_) => (false, false, None),
    };
    Ok(SinkVerdict {
        sink: s,
        label: g.name(s).to_string(),
        positive,
        negative,
        interval,
    })
}

/// Verdicts for every component and every sink.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub components: Vec<ComponentVerdict>,
    pub sinks: Vec<SinkVerdict>,
}

pub fn classify(g: &Graph) -> Result<Classification> {
    Ok(Classification {
        components: components(g)
            .iter()
            .map(|c| classify_component(g, c))
            .collect::<Result<_>>()?,
        sinks: g
            .sinks()
            .into_iter()
            .map(|s| classify_sink(g, s))
            .collect::<Result<_>>()?,
    })
}

/// The index sets of the extremal `β`-KMS states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KmsSets {
    pub beta: f64,
    pub non_circular: Vec<Component>,
    pub circular: Vec<Component>,
    pub sinks: Vec<Vertex>,
}

impl KmsSets {
    pub fn len(&self) -> usize {
        self.non_circular.len() + self.circular.len() + self.sinks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn kms_sets(g: &Graph, beta: f64) -> Result<KmsSets> {
    kms_sets_from(&classify(g)?, beta)
}

/// [`kms_sets`] from precomputed verdicts.
pub fn kms_sets_from(class: &Classification, beta: f64) -> Result<KmsSets> {
    if beta.abs() <= TOL.zero_weight {
        return Err(Error::BetaZero);
    }
    let positive_side = beta > 0.0;
    let mut sets = KmsSets {
        beta,
        non_circular: Vec::new(),
        circular: Vec::new(),
        sinks: Vec::new(),
    };
    for cv in &class.components {
        match &cv.verdict {
            Verdict::PositiveKms { beta_c } | Verdict::NegativeKms { beta_c }
                if (beta_c - beta).abs() <= TOL.classification
                    && matches!(cv.verdict, Verdict::PositiveKms { .. }) == positive_side =>
            {
                sets.non_circular.push(cv.component.clone())
            }
            Verdict::CircularKms {
                positive,
                negative,
                interval,
            } if (if positive_side { *positive } else { *negative }) && interval.contains(beta) => {
                sets.circular.push(cv.component.clone())
            }
            _ => {}
        }
    }
    for sv in &class.sinks {
        let typed = if positive_side {
            sv.positive
        } else {
            sv.negative
        };
        if typed && sv.interval.as_ref().is_some_and(|i| i.contains(beta)) {
            sets.sinks.push(sv.sink);
        }
    }
    Ok(sets)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `]endpoint, ∞[`
    Up,
    /// `]-∞, endpoint[`
    Down,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum RowShape {
    FullLine,
    OpenRay {
        endpoint: f64,
        direction: Direction,
        producer: String,
    },
    Point {
        beta: f64,
    },
    Absent,
}

/// One line of the KMS spectrum (`β ≠ 0`): where a sink or component
/// contributes extremal states.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub label: String,
    /// Contributes a circle of states at each admissible `β`.
    pub circle_family: bool,
    #[serde(flatten)]
    pub shape: RowShape,
}

fn shape_of(interval: &Interval) -> RowShape {
    match (&interval.lower, &interval.upper) {
        (None, None) => RowShape::FullLine,
        (Some(e), None) => RowShape::OpenRay {
            endpoint: e.value,
            direction: Direction::Up,
            producer: e.producer.clone(),
        },
        (None, Some(e)) => RowShape::OpenRay {
            endpoint: e.value,
            direction: Direction::Down,
            producer: e.producer.clone(),
        },
        (Some(_), Some(_)) => unreachable!("intervals are rays or the full line"),
    }
}

/// Rows for the sinks, then the components, in canonical order.
pub fn spectrum(g: &Graph) -> Result<Vec<SpectrumRow>> {
    Ok(spectrum_from(&classify(g)?))
}

pub fn spectrum_from(class: &Classification) -> Vec<SpectrumRow> {
    let mut rows = Vec::new();
    for sv in &class.sinks {
        rows.push(SpectrumRow {
            label: sv.label.clone(),
            circle_family: false,
            shape: sv.interval.as_ref().map_or(RowShape::Absent, shape_of),
        });
    }
    for cv in &class.components {
        let (circle_family, shape) = match &cv.verdict {
            Verdict::PositiveKms { beta_c } | Verdict::NegativeKms { beta_c } => {
                (false, RowShape::Point { beta: *beta_c })
            }
            Verdict::CircularKms { interval, .. } => (true, shape_of(interval)),
            Verdict::NotKms { .. } => (false, RowShape::Absent),
        };
        rows.push(SpectrumRow {
            label: cv.component.label.clone(),
            circle_family,
            shape,
        });
    }
    rows
}

/// Symbolic label `±log(k)/m` (k ≤ 16, m ≤ 4, smallest m first) when `x`
/// is within the classification tolerance of one, else a decimal.
pub fn closed_form(x: f64) -> String {
    if x.abs() <= TOL.classification {
        return "0".into();
    }
    let sign = if x < 0.0 { "-" } else { "" };
    for m in 1..=4u32 {
        for k in 2..=16u32 {
            if ((k as f64).ln() / m as f64 - x.abs()).abs() <= TOL.classification {
                return if m == 1 {
                    format!("{sign}log({k})")
                } else {
                    format!("{sign}log({k})/{m}")
                };
            }
        }
    }
    format!("{x:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture::{example_graph, Profile};
    use std::f64::consts::LN_2;

    fn comp(g: &Graph, label: &str) -> Component {
        components(g)
            .into_iter()
            .find(|c| c.label == label)
            .unwrap()
    }

    #[test]
    fn critical_temperatures() {
        let g = example_graph(Profile::Gauge);
        assert!((beta_c(&g, &comp(&g, "C2")).unwrap() - LN_2 / 2.0).abs() < 1e-12);
        assert!((beta_c(&g, &comp(&g, "C4")).unwrap() - LN_2 / 2.0).abs() < 1e-12);
        let g1 = example_graph(Profile::F1);
        assert!((beta_c(&g1, &comp(&g1, "C2")).unwrap() + LN_2).abs() < 1e-12);
        assert_eq!(beta_c(&g1, &comp(&g1, "C1")).unwrap(), 0.0);
        let g2 = example_graph(Profile::F2);
        assert!((beta_c(&g2, &comp(&g2, "C4")).unwrap() + 4f64.ln()).abs() < 1e-12);
        assert!(matches!(
            beta_c(&g2, &comp(&g2, "C1")),
            Err(Error::NoCriticalBeta { .. })
        ));
    }

    #[test]
    fn component_verdicts_f2() {
        let g = example_graph(Profile::F2);
        let v = |l| classify_component(&g, &comp(&g, l)).unwrap().verdict;
        assert!(
            matches!(v("C4"), Verdict::NegativeKms { beta_c } if (beta_c + 4f64.ln()).abs() < 1e-12)
        );
        assert_eq!(
            v("C1"),
            Verdict::CircularKms {
                positive: true,
                negative: true,
                interval: Interval::full()
            }
        );
        assert_eq!(
            v("C2"),
            Verdict::NotKms {
                reason: NotKmsReason::ZeroLoopInClosure
            }
        );
        assert_eq!(
            v("C3"),
            Verdict::NotKms {
                reason: NotKmsReason::CircularLoopNonzero
            }
        );
    }

    #[test]
    fn order_violation_detected() {
        // upstream component {u} with a heavy self-loop has the larger β_C
        let g = Graph::builder()
            .vertices(["u", "x", "y"])
            .edge("l", "u", "u", 0.1)
            .edge("m", "u", "u", 0.1)
            .edge("ux", "u", "x", 1.0)
            .edge("xy", "x", "y", 1.0)
            .edge("yx", "y", "x", 1.0)
            .edge("yx2", "y", "x", 1.0)
            .build()
            .unwrap();
        let c = comp(&g, "C2");
        assert_eq!(
            classify_component(&g, &c).unwrap().verdict,
            Verdict::NotKms {
                reason: NotKmsReason::OrderViolation { other: "C1".into() }
            }
        );
    }

    #[test]
    fn sink_verdicts() {
        for p in Profile::ALL {
            let g = example_graph(p);
            let s1 = classify_sink(&g, g.vertex("s1").unwrap()).unwrap();
            assert_eq!(s1.interval, Some(Interval::full()));
            assert!(s1.positive && s1.negative);
        }
        let g = example_graph(Profile::Gauge);
        let s2 = classify_sink(&g, g.vertex("s2").unwrap()).unwrap();
        assert!(s2.positive && !s2.negative);
        let lower = s2.interval.unwrap().lower.unwrap();
        assert!((lower.value - LN_2 / 2.0).abs() < 1e-12);
        let g = example_graph(Profile::F2);
        let s2 = classify_sink(&g, g.vertex("s2").unwrap()).unwrap();
        assert!(!s2.positive && s2.negative);
        assert!((s2.interval.unwrap().upper.unwrap().value + 4f64.ln()).abs() < 1e-12);
        assert!(classify_sink(&g, g.vertex("v2").unwrap()).is_err());
    }

    fn names(g: &Graph, sets: &KmsSets) -> (Vec<String>, Vec<String>, Vec<String>) {
        (
            sets.non_circular.iter().map(|c| c.label.clone()).collect(),
            sets.circular.iter().map(|c| c.label.clone()).collect(),
            sets.sinks.iter().map(|&s| g.name(s).to_string()).collect(),
        )
    }

    #[test]
    fn kms_set_examples() {
        let g = example_graph(Profile::Gauge);
        let (c, z, s) = names(&g, &kms_sets(&g, LN_2 / 2.0).unwrap());
        assert_eq!(
            (c, z, s),
            (
                vec!["C2".into(), "C4".into()],
                vec![],
                vec!["s1".to_string()]
            )
        );
        let g = example_graph(Profile::F1);
        let (c, z, s) = names(&g, &kms_sets(&g, 1.0).unwrap());
        assert!(c.is_empty());
        assert_eq!(z, ["C3"]);
        assert_eq!(s, ["s1", "s2"]);
        let g = example_graph(Profile::F2);
        let (c, z, s) = names(&g, &kms_sets(&g, 5.0).unwrap());
        assert!(c.is_empty());
        assert_eq!(z, ["C1"]);
        assert_eq!(s, ["s1"]);
        assert_eq!(kms_sets(&g, 0.0), Err(Error::BetaZero));
    }

    #[test]
    fn spectrum_gauge() {
        let g = example_graph(Profile::Gauge);
        let rows = spectrum(&g).unwrap();
        let labels: Vec<_> = rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["s1", "s2", "C1", "C2", "C3", "C4"]);
        assert_eq!(rows[0].shape, RowShape::FullLine);
        assert!(
            matches!(&rows[1].shape, RowShape::OpenRay { direction: Direction::Up, producer, .. } if producer == "C4")
        );
        assert_eq!(rows[2].shape, RowShape::Absent);
        assert!(
            matches!(rows[3].shape, RowShape::Point { beta } if (beta - LN_2 / 2.0).abs() < 1e-12)
        );
        assert_eq!(rows[4].shape, RowShape::Absent);
    }

    #[test]
    fn closed_form_labels() {
        assert_eq!(closed_form(LN_2 / 2.0), "log(2)/2");
        assert_eq!(closed_form(-4f64.ln()), "-log(4)");
        assert_eq!(closed_form(-LN_2), "-log(2)");
        assert_eq!(closed_form(0.0), "0");
        assert_eq!(closed_form(0.123), "0.123000");
    }
}
