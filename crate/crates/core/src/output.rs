//! CSV tables and static SVG plots.
//!
//! Tables start with `# key=value` metadata lines, then a header row, then
//! data. Numbers are written with Rust's shortest round-trip `{:e}` form, so
//! they re-parse bit-exactly and never depend on locale. Failed cells keep
//! their numeric fields empty and carry the error tag in `status`.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::bte::ConductancePoint;
use crate::stage::StageSolution;
use crate::sweep::{SweepCell, SweepKind, SweepResult};
use crate::warning::Warning;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvTable {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<String>) -> &mut Self {
        self.metadata.push((key.into(), value.into()));
        self
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.render().as_bytes())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "# {k}={}", v.replace('\n', " "));
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.join(","));
        }
        s
    }

    /// Inverse of [`CsvTable::render`].
    pub fn parse(text: &str) -> Option<Self> {
        let mut table = CsvTable::default();
        let mut lines = text.lines();
        for line in lines.by_ref() {
            match line.strip_prefix("# ") {
                Some(m) => {
                    let (k, v) = m.split_once('=')?;
                    table.metadata.push((k.to_string(), v.to_string()));
                }
                None => {
                    table.header = line.split(',').map(str::to_string).collect();
                    break;
                }
            }
        }
        table.rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
        Some(table)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Shortest round-trip scientific notation; empty for non-finite values.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        String::new()
    }
}

fn status(cell: &SweepCell) -> String {
    match &cell.outcome {
        Ok(s) if s.validity_warnings.iter().any(|w| matches!(w, Warning::Heating { .. })) => "heating".into(),
        Ok(_) => "ok".into(),
        Err(e) => e.tag().into(),
    }
}

fn field(cell: &SweepCell, f: impl Fn(&StageSolution) -> f64) -> String {
    cell.outcome.as_ref().map(|s| num(f(s))).unwrap_or_default()
}

/// Table for a sweep, with `extra` metadata (e.g. the config hash) first.
pub fn sweep_table(result: &SweepResult, extra: &[(String, String)]) -> CsvTable {
    let header: &[&str] = match result.kind {
        SweepKind::VersusT0 => &["T0_K", "TN_K", "relative_cooling", "scenario", "residual_W", "status"],
        SweepKind::ClassicalMap | SweepKind::QuantumMap => &["t", "Pi_or_N", "relative_cooling", "status"],
        SweepKind::Andreev => &[
            "RT_A_ohm_um2",
            "T0_K",
            "relative_cooling",
            "gamma_eff",
            "andreev_limit_flag",
            "status",
        ],
    };
    let mut table = CsvTable::new(header);
    table.metadata.extend(extra.iter().cloned());
    table.metadata.extend(result.metadata.iter().cloned());
    table.meta("rows", result.rows.values.len().to_string());
    table.meta("columns", result.columns.values.len().to_string());
    for cell in &result.cells {
        let row_value = result.rows.values[cell.row];
        let column_value = result.columns.values[cell.column];
        let rel = field(cell, |s| s.relative_cooling);
        table.rows.push(match result.kind {
            SweepKind::VersusT0 => vec![
                num(cell.t_0),
                field(cell, |s| s.t_n),
                rel,
                result.row_labels[cell.row].clone(),
                field(cell, |s| s.residual),
                status(cell),
            ],
            SweepKind::ClassicalMap | SweepKind::QuantumMap => {
                vec![num(row_value), num(column_value), rel, status(cell)]
            }
            SweepKind::Andreev => {
                let limited = result.andreev_limit.is_some_and(|l| column_value <= l);
                vec![
                    num(column_value),
                    num(row_value),
                    rel,
                    num(cell.gamma_eff),
                    u8::from(limited).to_string(),
                    status(cell),
                ]
            }
        });
    }
    table
}

/// One row per solved stage, hottest first.
pub fn stage_table(solutions: &[StageSolution], materials: &[String], extra: &[(String, String)]) -> CsvTable {
    let mut table = CsvTable::new(&[
        "stage",
        "material",
        "T0_K",
        "TN_K",
        "V_opt_V",
        "P_cool_W",
        "P_ph_W",
        "load_W",
        "residual_W",
        "relative_cooling",
        "stability_W_per_K",
        "warnings",
    ]);
    table.metadata.extend(extra.iter().cloned());
    for (k, s) in solutions.iter().enumerate() {
        let warnings: Vec<String> = s
            .validity_warnings
            .iter()
            .map(|w| w.to_string().replace(',', ";"))
            .collect();
        table.rows.push(vec![
            k.to_string(),
            materials.get(k).cloned().unwrap_or_default(),
            num(s.t_0),
            num(s.t_n),
            num(s.v_opt),
            num(s.p_cool),
            num(s.p_ph_influx),
            num(s.external_load),
            num(s.residual),
            num(s.relative_cooling),
            num(s.stability_slope),
            warnings.join(" | "),
        ]);
    }
    table
}

pub fn conductance_table(curve: &[ConductancePoint], extra: &[(String, String)]) -> CsvTable {
    let mut table = CsvTable::new(&["T_K", "G_W_per_K", "residual"]);
    table.metadata.extend(extra.iter().cloned());
    for p in curve {
        table.rows.push(vec![num(p.t), num(p.conductance), num(p.residual)]);
    }
    table
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 110.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: &[&str] = &["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#17becf"];

/// Piecewise-linear viridis approximation for `v` in [0, 1].
fn colour(v: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let x = v.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (x.floor() as usize).min(STOPS.len() - 2);
    let f = x - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |p: f64, q: f64| (p + (q - p) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn is_log(values: &[f64]) -> bool {
    match (values.first(), values.last()) {
        (Some(&a), Some(&b)) => a > 0.0 && b / a >= 50.0,
        _ => false,
    }
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        WIDTH / 2.0
    )
}

fn axis_labels(s: &mut String, x_label: &str, y_label: &str) {
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let _ = writeln!(
        s,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label}</text>",
        LEFT + pw / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        s,
        "<text x=\"20\" y=\"{y}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {y})\">{y_label}</text>",
        y = TOP + ph / 2.0
    );
}

fn tick(v: f64) -> String {
    format!("{v:.3e}")
}

/// Heat map for the 2D maps, curves for the 1D sweeps.
pub fn sweep_svg(result: &SweepResult) -> String {
    match result.kind {
        SweepKind::ClassicalMap | SweepKind::QuantumMap => heat_map(result),
        SweepKind::VersusT0 | SweepKind::Andreev => curves(result),
    }
}

fn heat_map(result: &SweepResult) -> String {
    let (rows, cols) = result.shape();
    let x_name = if result.kind == SweepKind::ClassicalMap {
        "Π"
    } else {
        "N"
    };
    let mut s = svg_open(&format!(
        "relative cooling, {}",
        result.metadata_value("material").unwrap_or("")
    ));
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    if rows > 0 && cols > 0 {
        let (cw, ch) = (pw / cols as f64, ph / rows as f64);
        for cell in &result.cells {
            let x = LEFT + cell.column as f64 * cw;
            let y = TOP + ph - (cell.row + 1) as f64 * ch;
            let fill = cell.relative_cooling().map(colour).unwrap_or_else(|| "#bbbbbb".into());
            let _ = writeln!(
                s,
                "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{fill}\"/>",
                cw + 0.3,
                ch + 0.3
            );
        }
        let xs = &result.columns.values;
        let ys = &result.rows.values;
        for (label, x) in [(xs[0], LEFT + 0.5 * cw), (xs[cols - 1], LEFT + pw - 0.5 * cw)] {
            let _ = writeln!(
                s,
                "<text x=\"{x:.2}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
                TOP + ph + 16.0,
                tick(label)
            );
        }
        for (label, y) in [(ys[0], TOP + ph - 0.5 * ch), (ys[rows - 1], TOP + 0.5 * ch)] {
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{y:.2}\" text-anchor=\"end\">{}</text>",
                LEFT - 4.0,
                tick(label)
            );
        }
    }
    let bar_x = WIDTH - RIGHT + 20.0;
    for k in 0..50 {
        let v = k as f64 / 49.0;
        let _ = writeln!(
            s,
            "<rect x=\"{bar_x}\" y=\"{:.2}\" width=\"18\" height=\"{:.2}\" fill=\"{}\"/>",
            TOP + ph * (1.0 - (k + 1) as f64 / 50.0),
            ph / 50.0 + 0.3,
            colour(v)
        );
    }
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\">1</text>", bar_x + 22.0, TOP + 10.0);
    let _ = writeln!(s, "<text x=\"{}\" y=\"{}\">0</text>", bar_x + 22.0, TOP + ph);
    axis_labels(&mut s, x_name, "T/T_c");
    s.push_str("</svg>\n");
    s
}

fn curves(result: &SweepResult) -> String {
    let xs = &result.columns.values;
    let log_x = is_log(xs);
    let (x_label, title) = match result.kind {
        SweepKind::Andreev => ("R_T·A (Ω·µm²)", "relative cooling vs junction transparency"),
        _ => ("T_0 (K)", "relative cooling vs bath temperature"),
    };
    let mut s = svg_open(title);
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let map = |v: f64| if log_x { v.ln() } else { v };
    let (x0, x1) = match (xs.first(), xs.last()) {
        (Some(&a), Some(&b)) if b > a => (map(a), map(b)),
        (Some(&a), _) => (map(a) - 0.5, map(a) + 0.5),
        _ => (0.0, 1.0),
    };
    let values: Vec<f64> = result.cells.iter().filter_map(SweepCell::relative_cooling).collect();
    let y0 = values.iter().copied().fold(0.0, f64::min);
    let y1 = values.iter().copied().fold(1.0, f64::max);
    let px = |v: f64| LEFT + (map(v) - x0) / (x1 - x0) * pw;
    let py = |v: f64| TOP + ph - (v - y0) / (y1 - y0) * ph;
    for (row, label) in result.rows.values.iter().enumerate() {
        let colour = PALETTE[row % PALETTE.len()];
        let points: Vec<String> = (0..xs.len())
            .filter_map(|c| {
                result
                    .cell(row, c)
                    .relative_cooling()
                    .map(|v| format!("{:.2},{:.2}", px(xs[c]), py(v)))
            })
            .collect();
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"2\" points=\"{}\"/>",
            points.join(" ")
        );
        let name = match result.kind {
            SweepKind::Andreev => format!("T_0 = {label} K"),
            _ => result.row_labels[row].clone(),
        };
        let ly = TOP + 14.0 + 16.0 * row as f64;
        let _ = writeln!(
            s,
            "<line x1=\"{a}\" y1=\"{ly}\" x2=\"{b}\" y2=\"{ly}\" stroke=\"{colour}\" stroke-width=\"2\"/>\
             <text x=\"{c}\" y=\"{}\" font-size=\"10\">{name}</text>",
            ly + 3.0,
            a = WIDTH - RIGHT + 6.0,
            b = WIDTH - RIGHT + 22.0,
            c = WIDTH - RIGHT + 25.0,
        );
    }
    if let Some(limit) = result.andreev_limit {
        if limit > 0.0 && map(limit) >= x0 && map(limit) <= x1 {
            let x = px(limit);
            let _ = writeln!(
                s,
                "<line x1=\"{x:.2}\" y1=\"{TOP}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\" stroke-width=\"3\"/>",
                TOP + ph
            );
        }
    }
    if let (Some(&a), Some(&b)) = (xs.first(), xs.last()) {
        let _ = writeln!(
            s,
            "<text x=\"{LEFT}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            TOP + ph + 16.0,
            tick(a)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            LEFT + pw,
            TOP + ph + 16.0,
            tick(b)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{y1:.2}</text>",
        LEFT - 4.0,
        TOP + 4.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{y0:.2}</text>",
        LEFT - 4.0,
        TOP + ph
    );
    axis_labels(&mut s, x_label, "(T_0 − T_N)/T_0");
    s.push_str("</svg>\n");
    s
}

/// Log-log conductance curve.
pub fn conductance_svg(curve: &[ConductancePoint]) -> String {
    let mut s = svg_open("phonon conductance of one wire");
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let pts: Vec<(f64, f64)> = curve
        .iter()
        .filter(|p| p.t > 0.0 && p.conductance > 0.0)
        .map(|p| (p.t.ln(), p.conductance.ln()))
        .collect();
    if pts.len() >= 2 {
        let (x0, x1) = (pts[0].0, pts[pts.len() - 1].0);
        let y0 = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let y1 = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0).max(1e-300) * pw;
        let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0).max(1e-300) * ph;
        let line: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>",
            PALETTE[0],
            line.join(" ")
        );
        for &(x, y) in &pts {
            let _ = writeln!(
                s,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\"/>",
                sx(x),
                sy(y),
                PALETTE[0]
            );
        }
        let _ = writeln!(
            s,
            "<text x=\"{LEFT}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            TOP + ph + 16.0,
            tick(x0.exp())
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            LEFT + pw,
            TOP + ph + 16.0,
            tick(x1.exp())
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            LEFT - 4.0,
            TOP + 4.0,
            tick(y1.exp())
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            LEFT - 4.0,
            TOP + ph,
            tick(y0.exp())
        );
    }
    axis_labels(&mut s, "T (K)", "G (W/K)");
    s.push_str("</svg>\n");
    s
}

impl SweepResult {
    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}
