//! Minimal line charts written as raw SVG.

pub struct Series<'a> {
    pub label: &'a str,
    pub colour: &'a str,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 56.0;

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * hi.abs().max(1.0) {
        let w = hi.abs().max(1.0) * 0.1;
        return (lo - w, hi + w);
    }
    let pad = 0.08 * (hi - lo);
    (lo - pad, hi + pad)
}

/// Chart of several series sharing axes; `x_ticks` label the x positions.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, x_ticks: &[(f64, String)], series: &[Series<'_>]) -> String {
    let xs = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).chain(x_ticks.iter().map(|t| t.0)));
    let ys = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let px = |x: f64| PAD + (x - xs.0) / (xs.1 - xs.0) * (W - 2.0 * PAD);
    let py = |y: f64| H - PAD - (y - ys.0) / (ys.1 - ys.0) * (H - 2.0 * PAD);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", W / 2.0, esc(title)));
    out.push_str(&format!(
        "<path d=\"M{a:.1} {b:.1} L{a:.1} {c:.1} L{d:.1} {c:.1}\" stroke=\"black\" fill=\"none\"/>\n",
        a = PAD,
        b = PAD,
        c = H - PAD,
        d = W - PAD
    ));
    for (x, label) in x_ticks {
        let p = px(*x);
        out.push_str(&format!(
            "<path d=\"M{p:.1} {y0:.1} L{p:.1} {y1:.1}\" stroke=\"black\"/><text x=\"{p:.1}\" y=\"{ty:.1}\" text-anchor=\"middle\">{}</text>\n",
            esc(label),
            y0 = H - PAD,
            y1 = H - PAD + 5.0,
            ty = H - PAD + 18.0
        ));
    }
    for i in 0..=4 {
        let y = ys.0 + (ys.1 - ys.0) * i as f64 / 4.0;
        let p = py(y);
        out.push_str(&format!(
            "<path d=\"M{x0:.1} {p:.1} L{x1:.1} {p:.1}\" stroke=\"black\"/><text x=\"{tx:.1}\" y=\"{ty:.1}\" text-anchor=\"end\">{y:.3e}</text>\n",
            x0 = PAD - 5.0,
            x1 = PAD,
            tx = PAD - 8.0,
            ty = p + 4.0
        ));
    }
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        H - 12.0,
        esc(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"14\" y=\"{y}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {y})\">{}</text>\n",
        esc(y_label),
        y = H / 2.0
    ));
    for (k, s) in series.iter().enumerate() {
        if s.points.is_empty() {
            continue;
        }
        let d: Vec<String> = s
            .points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| format!("{}{:.1} {:.1}", if i == 0 { "M" } else { "L" }, px(x), py(y)))
            .collect();
        out.push_str(&format!("<path d=\"{}\" stroke=\"{}\" stroke-width=\"2\" fill=\"none\"/>\n", d.join(" "), s.colour));
        for &(x, y) in &s.points {
            out.push_str(&format!("<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3.5\" fill=\"{}\"/>\n", px(x), py(y), s.colour));
        }
        let ly = PAD + 16.0 * k as f64;
        out.push_str(&format!(
            "<path d=\"M{a:.1} {ly:.1} L{b:.1} {ly:.1}\" stroke=\"{c}\" stroke-width=\"2\"/><text x=\"{t:.1}\" y=\"{ty:.1}\">{}</text>\n",
            esc(s.label),
            a = W - PAD - 120.0,
            b = W - PAD - 100.0,
            c = s.colour,
            t = W - PAD - 94.0,
            ty = ly + 4.0
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formed() {
        let s = line_chart(
            "a < b",
            "K",
            "ratio",
            &[(0.0, "32".into()), (1.0, "64".into())],
            &[Series { label: "mean", colour: "#1f77b4", points: vec![(0.0, 1.0), (1.0, 1.1)] }],
        );
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a &lt; b"));
        assert_eq!(s.matches("<circle").count(), 2);
    }

    #[test]
    fn flat_series() {
        let s = line_chart("t", "x", "y", &[], &[Series { label: "c", colour: "red", points: vec![(0.0, 2.0)] }]);
        assert!(!s.contains("NaN"));
    }
}
