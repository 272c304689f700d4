//! Hand-written SVG 1.1 for (Δ, g) panels.

use std::fmt::Write as _;

use rabi_core::contour::Polyline;

const PANEL_W: f64 = 440.0;
const PANEL_H: f64 = 360.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 46.0;

pub struct Layer<'a> {
    pub label: &'static str,
    pub color: &'static str,
    pub dash: Option<&'static str>,
    pub lines: &'a [Polyline],
}

pub struct Panel<'a> {
    pub id: String,
    pub title: String,
    pub delta_max: f64,
    pub g_max: f64,
    pub layers: Vec<Layer<'a>>,
}

fn header(w: f64, h: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" \
         font-family=\"Helvetica, Arial, sans-serif\" font-size=\"12\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    )
}

pub fn single(panel: &Panel) -> String {
    let mut s = header(PANEL_W, PANEL_H);
    s.push_str(&group(panel, 0.0, 0.0));
    s.push_str("</svg>\n");
    s
}

/// Panels laid out row by row, `columns` per row.
pub fn composed(panels: &[Panel], columns: usize) -> String {
    let columns = columns.max(1);
    let rows = panels.len().div_ceil(columns).max(1);
    let mut s = header(PANEL_W * columns.min(panels.len().max(1)) as f64, PANEL_H * rows as f64);
    for (k, p) in panels.iter().enumerate() {
        s.push_str(&group(p, (k % columns) as f64 * PANEL_W, (k / columns) as f64 * PANEL_H));
    }
    s.push_str("</svg>\n");
    s
}

fn ticks(max: f64) -> Vec<f64> {
    let step = if max <= 1.5 {
        0.2
    } else if max <= 4.0 {
        0.5
    } else {
        1.0
    };
    let count = (max / step + 1e-9).floor() as usize;
    (0..=count).map(|i| i as f64 * step).collect()
}

fn group(p: &Panel, x0: f64, y0: f64) -> String {
    let pw = PANEL_W - LEFT - RIGHT;
    let ph = PANEL_H - TOP - BOTTOM;
    let sx = |d: f64| LEFT + d / p.delta_max * pw;
    let sy = |g: f64| TOP + ph - g / p.g_max * ph;
    let mut s = String::new();
    writeln!(s, "<g transform=\"translate({x0:.0},{y0:.0})\">").unwrap();
    writeln!(
        s,
        "<defs><clipPath id=\"clip-{id}\"><rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\"/></clipPath></defs>",
        id = p.id
    )
    .unwrap();
    writeln!(s, "<text x=\"{LEFT}\" y=\"18\" font-size=\"14\" font-weight=\"bold\">{}</text>", esc(&p.title)).unwrap();

    // Axes and ticks.
    writeln!(
        s,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>"
    )
    .unwrap();
    for d in ticks(p.delta_max) {
        let x = sx(d);
        let yb = TOP + ph;
        writeln!(s, "<line x1=\"{x:.2}\" y1=\"{yb}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", yb + 5.0).unwrap();
        writeln!(s, "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", yb + 18.0, label(d)).unwrap();
    }
    for g in ticks(p.g_max) {
        let y = sy(g);
        writeln!(s, "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/>", LEFT - 5.0).unwrap();
        writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>", LEFT - 8.0, y + 4.0, label(g)).unwrap();
    }
    writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">Δ</text>", LEFT + pw / 2.0, PANEL_H - 8.0).unwrap();
    writeln!(
        s,
        "<text x=\"14\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">g</text>",
        TOP + ph / 2.0,
        TOP + ph / 2.0
    )
    .unwrap();

    // Curves.
    writeln!(s, "<g clip-path=\"url(#clip-{})\" fill=\"none\" stroke-linejoin=\"round\">", p.id).unwrap();
    for layer in &p.layers {
        let dash = layer.dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
        for l in layer.lines {
            let pts: Vec<String> = l.points.iter().map(|&(d, g)| format!("{:.3},{:.3}", sx(d), sy(g))).collect();
            let tag = if l.cycle { "polygon" } else { "polyline" };
            writeln!(
                s,
                "<{tag} points=\"{}\" stroke=\"{}\" stroke-width=\"1.8\"{dash}/>",
                pts.join(" "),
                layer.color
            )
            .unwrap();
        }
    }
    s.push_str("</g>\n");

    // Legend along the top margin.
    let mut lx = PANEL_W - RIGHT;
    for layer in p.layers.iter().rev() {
        let width = 34.0 + 6.5 * layer.label.chars().count() as f64;
        lx -= width;
        let dash = layer.dash.map(|d| format!(" stroke-dasharray=\"{d}\"")).unwrap_or_default();
        writeln!(
            s,
            "<line x1=\"{lx:.2}\" y1=\"30\" x2=\"{:.2}\" y2=\"30\" stroke=\"{}\" stroke-width=\"1.8\"{dash}/>",
            lx + 22.0,
            layer.color
        )
        .unwrap();
        writeln!(s, "<text x=\"{:.2}\" y=\"34\">{}</text>", lx + 26.0, esc(layer.label)).unwrap();
    }
    s.push_str("</g>\n");
    s
}

fn label(v: f64) -> String {
    let s = format!("{v:.1}");
    s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn panel(lines: &[Polyline]) -> Panel<'_> {
        Panel {
            id: "t".into(),
            title: "n = 1".into(),
            delta_max: 3.5,
            g_max: 1.0,
            layers: vec![Layer {
                label: "degenerate",
                color: "#b2182b",
                dash: None,
                lines,
            }],
        }
    }

    #[test]
    fn cycles_become_polygons() {
        let square = Polyline {
            points: vec![(0.5, 0.5), (1.0, 0.5), (1.0, 0.8), (0.5, 0.8)],
            closed: true,
            cycle: true,
            start: None,
            end: None,
        };
        let s = single(&panel(std::slice::from_ref(&square)));
        assert!(s.starts_with("<?xml"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<polygon").count(), 1);
        assert!(s.contains("degenerate"));
    }

    #[test]
    fn tick_labels() {
        assert_eq!(ticks(1.0).len(), 6);
        assert_eq!(ticks(3.5), vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5]);
        assert_eq!(label(2.0), "2");
        assert_eq!(label(0.4), "0.4");
    }

    #[test]
    fn layout_of_four_panels() {
        let panels: Vec<Panel> = (0..4).map(|_| panel(&[])).collect();
        let s = composed(&panels, 2);
        assert!(s.contains("width=\"880\" height=\"720\""));
        assert_eq!(s.matches("<g transform").count(), 4);
    }
}
