//! Text, SVG and JSON renderings of the KMS spectrum: one horizontal line
//! per sink or component over a common β axis.

use std::fmt::Write;

use graphkms::kms::{closed_form, Direction, RowShape, SpectrumRow, Verdict};
use serde_json::{json, Value};

pub fn verdict_summary(v: &Verdict) -> String {
    match v {
        Verdict::PositiveKms { beta_c } => {
            format!("positive type at beta = {}", closed_form(*beta_c))
        }
        Verdict::NegativeKms { beta_c } => {
            format!("negative type at beta = {}", closed_form(*beta_c))
        }
        Verdict::CircularKms {
            positive,
            negative,
            interval,
        } => {
            let types = match (positive, negative) {
                (true, true) => "positive and negative type",
                (true, false) => "positive type",
                _ => "negative type",
            };
            format!("circular, {types}, beta in {interval}")
        }
        Verdict::NotKms { reason } => format!("not KMS: {reason}"),
    }
}

/// Half-width of the β axis: every endpoint fits with some margin.
fn axis_half_width(rows: &[SpectrumRow]) -> f64 {
    let extent = rows
        .iter()
        .filter_map(|r| match &r.shape {
            RowShape::OpenRay { endpoint, .. } => Some(endpoint.abs()),
            RowShape::Point { beta } => Some(beta.abs()),
            _ => None,
        })
        .fold(0.0, f64::max);
    ((extent * 1.5 * 2.0).ceil() / 2.0).max(1.0)
}

fn describe(row: &SpectrumRow) -> String {
    let mut text = match &row.shape {
        RowShape::FullLine => "all beta != 0".to_string(),
        RowShape::OpenRay {
            endpoint,
            direction: Direction::Up,
            producer,
        } => format!("]{}, +inf[ (from {producer})", closed_form(*endpoint)),
        RowShape::OpenRay {
            endpoint,
            direction: Direction::Down,
            producer,
        } => format!("]-inf, {}[ (from {producer})", closed_form(*endpoint)),
        RowShape::Point { beta } => format!("beta = {}", closed_form(*beta)),
        RowShape::Absent => "none".to_string(),
    };
    if row.circle_family {
        text.push_str(" [circle]");
    }
    text
}

const WIDTH: usize = 49;

pub fn spectrum_ascii(profile: &str, rows: &[SpectrumRow]) -> String {
    let half = axis_half_width(rows);
    let col = |beta: f64| -> usize {
        let t = (beta + half) / (2.0 * half);
        ((t * (WIDTH - 1) as f64).round() as isize).clamp(0, WIDTH as isize - 1) as usize
    };
    let label_width = rows.iter().map(|r| r.label.len()).max().unwrap_or(2).max(4);
    let mut out = format!("KMS spectrum (beta != 0), profile {profile}\n");

    let mut axis = ['-'; WIDTH];
    axis[0] = '<';
    axis[WIDTH - 1] = '>';
    axis[col(0.0)] = '+';
    let lo = format!("{}", -half);
    let hi = format!("{half}");
    let mut scale = [' '; WIDTH];
    for (i, ch) in lo.chars().enumerate() {
        scale[i] = ch;
    }
    scale[col(0.0)] = '0';
    for (i, ch) in hi.chars().rev().enumerate() {
        scale[WIDTH - 1 - i] = ch;
    }
    writeln!(
        out,
        "{:label_width$}  {}",
        "beta",
        scale.iter().collect::<String>()
    )
    .unwrap();
    writeln!(
        out,
        "{:label_width$}  {}",
        "",
        axis.iter().collect::<String>()
    )
    .unwrap();

    for row in rows {
        let mut line = [' '; WIDTH];
        match &row.shape {
            RowShape::FullLine => line.iter_mut().for_each(|c| *c = '='),
            RowShape::OpenRay {
                endpoint,
                direction,
                ..
            } => {
                let at = col(*endpoint);
                let range = match direction {
                    Direction::Up => at..WIDTH,
                    Direction::Down => 0..at + 1,
                };
                for c in &mut line[range] {
                    *c = '-';
                }
                line[at] = 'o';
            }
            RowShape::Point { beta } => line[col(*beta)] = '●',
            RowShape::Absent => {}
        }
        writeln!(
            out,
            "{:label_width$}  {}  {}",
            row.label,
            line.iter().collect::<String>(),
            describe(row)
        )
        .unwrap();
    }
    out
}

pub fn spectrum_svg(profile: &str, rows: &[SpectrumRow]) -> String {
    const LEFT: f64 = 60.0;
    const PLOT: f64 = 480.0;
    const ROW: f64 = 36.0;
    const TOP: f64 = 40.0;
    let half = axis_half_width(rows);
    let x = |beta: f64| LEFT + (beta.clamp(-half, half) + half) / (2.0 * half) * PLOT;
    let height = TOP + ROW * rows.len() as f64 + 40.0;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{height:.0}" font-family="sans-serif" font-size="12">"#,
        LEFT + PLOT + 40.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{LEFT}" y="20">KMS spectrum (beta != 0), profile {profile}</text>"#
    )
    .unwrap();
    for (i, row) in rows.iter().enumerate() {
        let y = TOP + ROW * (i as f64 + 0.5);
        let color = if row.circle_family {
            "#c0392b"
        } else {
            "#000000"
        };
        writeln!(s, r#"<text x="8" y="{:.1}">{}</text>"#, y + 4.0, row.label).unwrap();
        let line = |a: f64, b: f64| {
            format!(
                r#"<line x1="{a:.1}" y1="{y:.1}" x2="{b:.1}" y2="{y:.1}" stroke="{color}" stroke-width="2"/>"#
            )
        };
        let tick = |beta: f64| {
            format!(
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
                x(beta),
                y + 16.0,
                closed_form(beta)
            )
        };
        match &row.shape {
            RowShape::FullLine => writeln!(s, "{}", line(LEFT, LEFT + PLOT)).unwrap(),
            RowShape::OpenRay {
                endpoint,
                direction,
                ..
            } => {
                let at = x(*endpoint);
                let (a, b) = match direction {
                    Direction::Up => (at, LEFT + PLOT),
                    Direction::Down => (LEFT, at),
                };
                writeln!(s, "{}", line(a, b)).unwrap();
                writeln!(
                    s,
                    r##"<circle cx="{at:.1}" cy="{y:.1}" r="4" fill="#ffffff" stroke="{color}" stroke-width="2"/>"##
                )
                .unwrap();
                writeln!(s, "{}", tick(*endpoint)).unwrap();
            }
            RowShape::Point { beta } => {
                writeln!(
                    s,
                    r#"<circle cx="{:.1}" cy="{y:.1}" r="4" fill="{color}"/>"#,
                    x(*beta)
                )
                .unwrap();
                writeln!(s, "{}", tick(*beta)).unwrap();
            }
            RowShape::Absent => {}
        }
    }
    let axis_y = TOP + ROW * rows.len() as f64 + 10.0;
    writeln!(
        s,
        r##"<line x1="{LEFT}" y1="{axis_y:.1}" x2="{:.1}" y2="{axis_y:.1}" stroke="#666666"/>"##,
        LEFT + PLOT
    )
    .unwrap();
    for beta in [-half, 0.0, half] {
        writeln!(
            s,
            r##"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}" stroke="#666666"/><text x="{0:.1}" y="{3:.1}" text-anchor="middle" font-size="10">{4}</text>"##,
            x(beta),
            axis_y - 4.0,
            axis_y + 4.0,
            axis_y + 18.0,
            closed_form(beta)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn spectrum_json(profile: &str, rows: &[SpectrumRow]) -> Value {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(r).expect("rows serialize");
            let label = match &r.shape {
                RowShape::OpenRay { endpoint, .. } => Some(closed_form(*endpoint)),
                RowShape::Point { beta } => Some(closed_form(*beta)),
                _ => None,
            };
            v["exact"] = json!(label);
            v["description"] = json!(describe(r));
            v
        })
        .collect();
    json!({ "profile": profile, "rows": rows })
}
