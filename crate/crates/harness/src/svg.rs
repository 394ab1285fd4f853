//! Minimal static SVG charts. Output depends only on the values passed in.

use std::fmt::Write;

const PANEL_W: f64 = 260.0;
const PANEL_H: f64 = 200.0;
const MARGIN: f64 = 40.0;

fn header(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="16" text-anchor="middle" font-size="13">{}</text>"#, width / 2.0, escape(title));
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One histogram panel per group: relative frequency of each integer value,
/// with a dashed vertical line at `marker`.
pub fn histograms(title: &str, x_label: &str, groups: &[(String, Vec<usize>)], marker: f64) -> String {
    let width = MARGIN + groups.len().max(1) as f64 * (PANEL_W + MARGIN);
    let height = PANEL_H + 3.0 * MARGIN;
    let mut out = String::new();
    header(&mut out, width, height, title);
    let global_max = groups.iter().flat_map(|(_, v)| v.iter().copied()).max().unwrap_or(0);
    let x_max = (global_max.max(marker.ceil() as usize) + 1) as f64;

    for (i, (label, values)) in groups.iter().enumerate() {
        let x0 = MARGIN + i as f64 * (PANEL_W + MARGIN);
        let y0 = 2.0 * MARGIN;
        let mut counts = vec![0usize; global_max + 1];
        for &v in values {
            counts[v] += 1;
        }
        let total = values.len().max(1) as f64;
        let sx = |x: f64| x0 + x / x_max * PANEL_W;
        let sy = |f: f64| y0 + PANEL_H - f * PANEL_H;
        let _ = writeln!(out, r#"<g>"#);
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, x0 + PANEL_W / 2.0, y0 - 8.0, escape(label));
        let _ = writeln!(out, r#"<rect x="{x0}" y="{y0}" width="{PANEL_W}" height="{PANEL_H}" fill="none" stroke="black"/>"#);
        for (v, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let f = c as f64 / total;
            let _ = writeln!(
                out,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#4a7ab5"/>"##,
                sx(v as f64 + 0.1),
                sy(f),
                PANEL_W / x_max * 0.8,
                f * PANEL_H
            );
        }
        let mx = sx(marker + 0.5);
        let _ = writeln!(out, r#"<line x1="{mx:.2}" y1="{y0}" x2="{mx:.2}" y2="{}" stroke="red" stroke-dasharray="5,4"/>"#, y0 + PANEL_H);
        for v in 0..x_max as usize {
            let _ = writeln!(out, r#"<text x="{:.2}" y="{}" text-anchor="middle">{v}</text>"#, sx(v as f64 + 0.5), y0 + PANEL_H + 14.0);
        }
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, x0 + PANEL_W / 2.0, y0 + PANEL_H + 30.0, escape(x_label));
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">1</text><text x="{}" y="{}" text-anchor="end">0</text>"#, x0 - 4.0, y0 + 4.0, x0 - 4.0, y0 + PANEL_H);
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// Five-number summary with the median taken as the mean of the middle pair.
fn quartiles(sorted: &[f64]) -> [f64; 5] {
    let q = |p: f64| {
        let pos = p * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
    };
    [sorted[0], q(0.25), q(0.5), q(0.75), sorted[sorted.len() - 1]]
}

/// One box per group on a shared `[0, 1]` axis with a dashed horizontal line
/// at `reference`. Groups without values are drawn as an empty slot.
pub fn boxplots(title: &str, y_label: &str, groups: &[(String, Vec<f64>)], reference: f64) -> String {
    let slot = 70.0;
    let width = 2.0 * MARGIN + groups.len().max(1) as f64 * slot;
    let height = PANEL_H + 3.0 * MARGIN;
    let mut out = String::new();
    header(&mut out, width, height, title);
    let (x0, y0) = (MARGIN * 1.5, 2.0 * MARGIN);
    let sy = |v: f64| y0 + PANEL_H - v.clamp(0.0, 1.0) * PANEL_H;
    let plot_w = groups.len().max(1) as f64 * slot;
    let _ = writeln!(out, r#"<rect x="{x0}" y="{y0}" width="{plot_w}" height="{PANEL_H}" fill="none" stroke="black"/>"#);
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let _ = writeln!(out, r#"<text x="{}" y="{:.2}" text-anchor="end">{t}</text>"#, x0 - 4.0, sy(t) + 4.0);
    }
    let _ = writeln!(
        out,
        r#"<text x="12" y="{}" transform="rotate(-90 12 {})" text-anchor="middle">{}</text>"#,
        y0 + PANEL_H / 2.0,
        y0 + PANEL_H / 2.0,
        escape(y_label)
    );
    for (i, (label, values)) in groups.iter().enumerate() {
        let cx = x0 + (i as f64 + 0.5) * slot;
        let _ = writeln!(out, r#"<text x="{cx:.2}" y="{}" text-anchor="middle">{}</text>"#, y0 + PANEL_H + 16.0, escape(label));
        let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        if sorted.is_empty() {
            let _ = writeln!(out, r#"<text x="{cx:.2}" y="{}" text-anchor="middle" fill="gray">no data</text>"#, y0 + PANEL_H / 2.0);
            continue;
        }
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let [lo, q1, med, q3, hi] = quartiles(&sorted);
        let half = slot * 0.3;
        let _ = writeln!(out, r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#, sy(lo), sy(hi));
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="black"/>"##,
            cx - half,
            sy(q3),
            2.0 * half,
            sy(q1) - sy(q3)
        );
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#, cx - half, sy(med), cx + half, sy(med));
    }
    let ry = sy(reference);
    let _ = writeln!(out, r#"<line x1="{x0}" y1="{ry:.2}" x2="{}" y2="{ry:.2}" stroke="red" stroke-dasharray="5,4"/>"#, x0 + plot_w);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_is_deterministic_and_marked() {
        let groups = vec![("b=3".to_string(), vec![2, 2, 3]), ("b=4".to_string(), vec![1])];
        let a = histograms("t", "x", &groups, 5.16);
        assert_eq!(a, histograms("t", "x", &groups, 5.16));
        assert!(a.contains("stroke-dasharray"));
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
    }

    #[test]
    fn boxplot_handles_empty_group() {
        let groups = vec![("a".to_string(), vec![0.2, 0.5, 0.9]), ("b".to_string(), vec![])];
        let s = boxplots("p", "p-value", &groups, 0.1);
        assert!(s.contains("no data"));
        assert_eq!(quartiles(&[1.0, 2.0, 3.0, 4.0])[2], 2.5);
    }
}
