//! One handler per subcommand. Every handler returns deterministic JSON
//! except `spectrum` (ASCII or SVG on request) and `export --format text`.

use std::f64::consts::PI;
use std::fs;

use graphkms::fixture;
use graphkms::harmonic::{extreme_points, ExtremeKind};
use graphkms::kms::{beta_c, classify, closed_form, kms_sets_from, spectrum_from, Verdict};
use graphkms::state::{
    circular_normalizer, eval_gauge_invariant, eval_omega_lambda, kms_check, sample_word_pair,
    CircularData, CircularState, KmsState, KmsStateSpec, StateTerm, Word,
};
use graphkms::trace::{
    algebra_structure, build_representation, eval_trace, format_structure, TraceSpec,
};
use graphkms::{
    census, components, potentials, sign_profile, tight_subgraph, Graph, GraphDocument, VertexSet,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{Cli, Command, ExportFormat, Format, WordArgs};
use crate::output::{CliError, CliResult, Output};
use crate::render;

/// Output of a command, plus a violation message when a check failed.
pub struct Report {
    pub output: Output,
    pub violation: Option<String>,
}

impl From<Output> for Report {
    fn from(output: Output) -> Self {
        Report {
            output,
            violation: None,
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<Report> {
    let doc = load_document(cli)?;
    let profile = cli.global.profile.as_deref();
    let g = doc.graph(profile).map_err(|e| match e {
        graphkms::Error::UnknownProfile(_) => CliError::Usage(e.to_string()),
        e => CliError::Domain(e),
    })?;
    let profile_name = profile.unwrap_or("base");
    Ok(match &cli.command {
        Command::Analyze => analyze(&g, profile_name)?.into(),
        Command::Classify { beta } => classify_at(&g, *beta)?.into(),
        Command::Spectrum { format } => spectrum_report(&g, profile_name, *format)?.into(),
        Command::StateEval { beta, spec, word } => state_eval(&g, *beta, spec, word)?.into(),
        Command::Omega {
            component,
            lambda,
            beta,
            word,
        } => omega(&g, component, lambda, *beta, word)?.into(),
        Command::Trace => trace(&g)?.into(),
        Command::Ground => ground(&g)?.into(),
        Command::Export { format } => export(&doc, *format).into(),
        Command::KmsCheck {
            seed,
            pairs,
            max_len,
        } => kms_check_report(&g, *seed, *pairs, *max_len)?,
    })
}

fn load_document(cli: &Cli) -> CliResult<GraphDocument> {
    match &cli.global.graph {
        None => Ok(fixture::example_document()),
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            GraphDocument::parse(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        }
    }
}

fn names(g: &Graph, set: &VertexSet) -> Vec<String> {
    g.names(set)
}

fn parse_word(g: &Graph, w: &WordArgs) -> CliResult<Word> {
    Word::parse(g, &w.mu, &w.nu).map_err(|e| CliError::Usage(e.to_string()))
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn analyze(g: &Graph, profile: &str) -> CliResult<Output> {
    let all: VertexSet = g.vertex_ids().collect();
    let mut comps = Vec::new();
    for c in components(g) {
        let closure = g.closure(&c.members);
        let profile = sign_profile(g, &c.members)?;
        let closure_profile = sign_profile(g, &closure)?;
        let critical = beta_c(g, &c).ok();
        comps.push(json!({
            "label": c.label,
            "members": names(g, &c.members),
            "circular": c.circular,
            "loop": c.loop_path.as_ref().map(|p| p.display(g)),
            "loop_weight": c.loop_path.as_ref().map(|p| p.weight(g)),
            "closure": names(g, &closure),
            "sign_profile": profile.tag,
            "closure_sign_profile": closure_profile.tag,
            "beta_c": critical,
            "beta_c_label": critical.map(closed_form),
        }));
    }
    let sinks: Vec<Value> = g
        .sinks()
        .into_iter()
        .map(|s| {
            let closure = g.closure(&VertexSet::from([s]));
            Ok(json!({
                "sink": g.name(s),
                "closure": names(g, &closure),
                "closure_sign_profile": sign_profile(g, &closure)?.tag,
            }))
        })
        .collect::<CliResult<_>>()?;
    Ok(Output::Json(json!({
        "profile": profile,
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "sign_profile": sign_profile(g, &all)?.tag,
        "components": comps,
        "sinks": sinks,
    })))
}

fn classify_at(g: &Graph, beta: f64) -> CliResult<Output> {
    let class = classify(g)?;
    let sets = kms_sets_from(&class, beta)?;
    let comps: Vec<Value> = class
        .components
        .iter()
        .map(|cv| {
            json!({
                "label": cv.component.label,
                "verdict": cv.verdict,
                "summary": render::verdict_summary(&cv.verdict),
            })
        })
        .collect();
    let sinks: Vec<Value> = class
        .sinks
        .iter()
        .map(|sv| {
            json!({
                "label": sv.label,
                "positive": sv.positive,
                "negative": sv.negative,
                "interval": sv.interval.as_ref().map(|i| i.to_string()),
            })
        })
        .collect();
    let points: Vec<Value> = extreme_points(g, beta)?
        .iter()
        .map(|p| {
            let vector: serde_json::Map<String, Value> = g
                .vertex_ids()
                .map(|v| (g.name(v).to_string(), json!(p.vector.get(v))))
                .collect();
            json!({
                "label": p.label(g),
                "kind": match p.kind { ExtremeKind::Component(_) => "component", ExtremeKind::Sink(_) => "sink" },
                "vector": vector,
            })
        })
        .collect();
    Ok(Output::Json(json!({
        "beta": beta,
        "components": comps,
        "sinks": sinks,
        "kms_sets": {
            "non_circular": sets.non_circular.iter().map(|c| c.label.clone()).collect::<Vec<_>>(),
            "circular": sets.circular.iter().map(|c| c.label.clone()).collect::<Vec<_>>(),
            "sinks": sets.sinks.iter().map(|&s| g.name(s).to_string()).collect::<Vec<_>>(),
        },
        "extreme_points": points,
    })))
}

fn spectrum_report(g: &Graph, profile: &str, format: Format) -> CliResult<Output> {
    let rows = spectrum_from(&classify(g)?);
    Ok(match format {
        Format::Json => Output::Json(render::spectrum_json(profile, &rows)),
        Format::Ascii => Output::Text {
            body: render::spectrum_ascii(profile, &rows),
            extension: "txt",
        },
        Format::Svg => Output::Text {
            body: render::spectrum_svg(profile, &rows),
            extension: "svg",
        },
    })
}

/// The spec file holds `{"terms": [...]}` and optionally `"beta"`, which
/// must then agree with `--beta`. At `β = 0` the terms describe a trace.
fn state_eval(g: &Graph, beta: f64, spec: &std::path::Path, word: &WordArgs) -> CliResult<Output> {
    let text = fs::read_to_string(spec)
        .map_err(|e| CliError::Usage(format!("{}: {e}", spec.display())))?;
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", spec.display())))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| CliError::Usage("state spec must be a JSON object".into()))?;
    match obj.get("beta").and_then(Value::as_f64) {
        Some(b) if b != beta => {
            return Err(CliError::Usage(format!(
                "spec file has beta = {b} but --beta is {beta}"
            )))
        }
        _ => {
            obj.insert("beta".into(), json!(beta));
        }
    }
    let w = parse_word(g, word)?;
    let value = if beta == 0.0 {
        let terms: Vec<StateTerm> = serde_json::from_value(obj["terms"].clone())
            .map_err(|e| CliError::Usage(format!("{}: {e}", spec.display())))?;
        let rep = build_representation(g)?;
        eval_trace(&rep, &TraceSpec { terms }, &w)?
    } else {
        let spec: KmsStateSpec = serde_json::from_value(value)
            .map_err(|e| CliError::Usage(format!("{}: {e}", spec.display())))?;
        KmsState::new(g, &spec)?.eval(g, &w)
    };
    Ok(Output::Json(json!({
        "beta": beta,
        "word": w.display(g),
        "value": complex_json(value),
    })))
}

fn parse_lambda(text: &str) -> CliResult<Complex64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || CliError::Usage(format!("--lambda expects RE,IM, got `{text}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let re: f64 = parts[0].parse().map_err(|_| bad())?;
    let im: f64 = parts[1].parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn omega(g: &Graph, label: &str, lambda: &str, beta: f64, word: &WordArgs) -> CliResult<Output> {
    let lambda = parse_lambda(lambda)?;
    let data = CircularData::by_label(g, label)?;
    let w = parse_word(g, word)?;
    let value = eval_omega_lambda(g, beta, &data, lambda, &w)?;
    Ok(Output::Json(json!({
        "component": label,
        "base": g.name(data.base),
        "period": data.period,
        "beta": beta,
        "lambda": complex_json(lambda),
        "normalizer": circular_normalizer(g, beta, &data)?,
        "word": w.display(g),
        "value": complex_json(value),
    })))
}

fn trace(g: &Graph) -> CliResult<Output> {
    let rep = build_representation(g)?;
    let summands = algebra_structure(g)?;
    let blocks: Vec<Value> = rep
        .blocks
        .iter()
        .zip(&summands)
        .map(|(b, s)| {
            json!({
                "source": b.source.label(),
                "base": g.name(b.source.base()),
                "summand": s.to_string(),
                "dimension": b.dim(),
                "paths": b.paths.iter().map(|p| p.display(g)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(Output::Json(json!({
        "structure": format_structure(&summands),
        "circular_components": rep.sets.circulars.iter().map(|c| c.label.clone()).collect::<Vec<_>>(),
        "sinks": rep.sets.sinks.iter().map(|&s| g.name(s).to_string()).collect::<Vec<_>>(),
        "killed_vertices": names(g, &rep.sets.outside),
        "blocks": blocks,
        "relations": "verified",
    })))
}

fn ground(g: &Graph) -> CliResult<Output> {
    let m = potentials(g);
    let tight = tight_subgraph(g, &m);
    let c = census(g)?;
    let potentials: serde_json::Map<String, Value> = g
        .vertex_ids()
        .map(|v| (g.name(v).to_string(), json!(m.get(v))))
        .collect();
    Ok(Output::Json(json!({
        "potentials": potentials,
        "start_vertices": names(g, &tight.start_vertices),
        "tight_edges": tight.tight_edges.iter().map(|&e| g.edge(e).id.clone()).collect::<Vec<_>>(),
        "sink_orbits": c.sink_orbits.iter().map(|o| json!({"sink": o.label, "count": o.count})).collect::<Vec<_>>(),
        "cycle_orbits": c.cycle_orbits.iter().map(|o| json!({"cycle": o.label, "count": o.count})).collect::<Vec<_>>(),
        "rich": c.rich,
        "diagnostic": c.diagnostic,
        "summary": c.summary(),
    })))
}

fn export(doc: &GraphDocument, format: ExportFormat) -> Output {
    match format {
        ExportFormat::Json => Output::Text {
            body: doc.to_json() + "\n",
            extension: "json",
        },
        ExportFormat::Text => Output::Text {
            body: doc.to_text(),
            extension: "graph",
        },
    }
}

const RESIDUAL_LIMIT: f64 = 1e-9;

/// Every extremal state at five inverse temperatures (critical ones first),
/// and the circle states at five admissible `β` each with three `λ`.
fn kms_check_report(g: &Graph, seed: u64, pairs: usize, max_len: usize) -> CliResult<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let class = classify(g)?;
    let mut betas: Vec<f64> = Vec::new();
    for cv in &class.components {
        if let Verdict::PositiveKms { beta_c } | Verdict::NegativeKms { beta_c } = cv.verdict {
            if !betas.iter().any(|b| (b - beta_c).abs() <= 1e-12) && betas.len() < 3 {
                betas.push(beta_c);
            }
        }
    }
    while betas.len() < 5 {
        let b: f64 = rng.gen_range(-2.0..2.0);
        if b.abs() > 0.05 {
            betas.push(b);
        }
    }

    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    let mut run =
        |label: String, beta: f64, state: &dyn Fn(&Word) -> Complex64, rng: &mut ChaCha8Rng| {
            let mut local: f64 = 0.0;
            let mut pick = |n: usize| if n == 0 { 0 } else { rng.gen_range(0..n) };
            for _ in 0..pairs {
                let (w1, w2) = sample_word_pair(g, max_len, &mut pick);
                local = local.max(kms_check(g, state, beta, &w1, &w2));
            }
            worst = worst.max(local);
            rows.push(json!({ "state": label, "beta": beta, "residual": local }));
        };

    for &beta in &betas {
        for p in extreme_points(g, beta)? {
            let psi = p.vector.clone();
            let state = |w: &Word| Complex64::new(eval_gauge_invariant(g, &psi, beta, w), 0.0);
            run(format!("phi^{}", p.label(g)), beta, &state, &mut rng);
        }
    }
    let lambdas = [
        ("1", Complex64::new(1.0, 0.0)),
        ("i", Complex64::new(0.0, 1.0)),
        ("exp(2 pi i/7)", Complex64::from_polar(1.0, 2.0 * PI / 7.0)),
    ];
    for cv in &class.components {
        let Verdict::CircularKms { interval, .. } = &cv.verdict else {
            continue;
        };
        let data = CircularData::new(g, &cv.component)?;
        let lo = interval.lower.as_ref().map_or(-2.5, |e| e.value + 0.05);
        let hi = interval.upper.as_ref().map_or(2.5, |e| e.value - 0.05);
        let (lo, hi) = (lo.max(hi - 3.0), hi.min(lo + 3.0));
        let mut count = 0;
        while count < 5 {
            let beta: f64 = rng.gen_range(lo..hi);
            if beta.abs() <= 0.05 || !interval.contains(beta) {
                continue;
            }
            count += 1;
            let cs = CircularState::new(g, beta, &data)?;
            for (name, lambda) in lambdas {
                let state = |w: &Word| cs.eval(g, lambda, w);
                run(
                    format!("omega^{name}_{}", cv.component.label),
                    beta,
                    &state,
                    &mut rng,
                );
            }
        }
    }

    let pass = worst <= RESIDUAL_LIMIT;
    let output = Output::Json(json!({
        "seed": seed,
        "pairs_per_state": pairs,
        "max_len": max_len,
        "states": rows,
        "worst_residual": worst,
        "limit": RESIDUAL_LIMIT,
        "pass": pass,
    }));
    Ok(Report {
        output,
        violation: (!pass).then(|| format!("KMS residual {worst:e} exceeds {RESIDUAL_LIMIT:e}")),
    })
}
