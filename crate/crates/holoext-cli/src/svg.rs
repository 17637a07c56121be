//! Minimal SVG writer for one-dimensional sweep plots.

/// Renders a polyline plot of `(x, y)` points with axes and tick labels.
/// Output is deterministic for identical inputs.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, points: &[(f64, f64)]) -> String {
    let (w, h) = (640.0, 400.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 40.0, 50.0);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">{}</text>\n",
        w / 2.0,
        escape(title)
    ));
    if points.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let xmin = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xmax = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let ymin = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let ymax = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let xspan = if (xmax - xmin).abs() < 1e-300 { 1.0 } else { xmax - xmin };
    let yspan = if (ymax - ymin).abs() < 1e-300 { 1.0 } else { ymax - ymin };
    let px = |x: f64| ml + (x - xmin) / xspan * (w - ml - mr);
    let py = |y: f64| h - mb - (y - ymin) / yspan * (h - mt - mb);

    out.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - mb,
        w - mr,
        h - mb
    ));
    out.push_str(&format!(
        "<line x1=\"{ml}\" y1=\"{mt}\" x2=\"{ml}\" y2=\"{}\" stroke=\"black\"/>\n",
        h - mb
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
        (ml + w - mr) / 2.0,
        h - 12.0,
        escape(xlabel)
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        (mt + h - mb) / 2.0,
        (mt + h - mb) / 2.0,
        escape(ylabel)
    ));
    for (value, at_x) in [(xmin, px(xmin)), (xmax, px(xmax))] {
        out.push_str(&format!(
            "<text x=\"{at_x:.2}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">{value:.4}</text>\n",
            h - mb + 16.0
        ));
    }
    for (value, at_y) in [(ymin, py(ymin)), (ymax, py(ymax))] {
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{at_y:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{value:.4}</text>\n",
            ml - 6.0
        ));
    }

    let path: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{:.3},{:.3}", px(*x), py(*y)))
        .collect();
    out.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        path.join(" ")
    ));
    for (x, y) in points {
        out.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"#1f77b4\"/>\n",
            px(*x),
            py(*y)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
