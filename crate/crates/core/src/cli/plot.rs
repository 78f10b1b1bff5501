//! Static SVG time-series panels drawn from a metrics CSV.

use std::fmt::Write as _;

use clap::ValueEnum;

use crate::harness::StepRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Panel {
    /// Drone-to-animal distance with the acoustic, safe and visibility ranges.
    Distance,
    /// Focal length.
    Focal,
    /// Subject image position against its desired position.
    Framing,
    /// Speed and acceleration magnitude.
    Kinematics,
    /// Horizontal position of the drone in the animal's eye image.
    Fovx,
}

impl Panel {
    pub const ALL: [Panel; 5] = [Panel::Distance, Panel::Focal, Panel::Framing, Panel::Kinematics, Panel::Fovx];

    pub fn key(self) -> &'static str {
        match self {
            Panel::Distance => "distance",
            Panel::Focal => "focal",
            Panel::Framing => "framing",
            Panel::Kinematics => "kinematics",
            Panel::Fovx => "fovx",
        }
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

struct Series {
    label: String,
    color: &'static str,
    dash: Option<&'static str>,
    values: Vec<Option<f64>>,
}

struct Threshold {
    label: String,
    value: f64,
    color: &'static str,
    dash: &'static str,
}

struct Chart {
    title: &'static str,
    y_label: &'static str,
    times: Vec<f64>,
    series: Vec<Series>,
    thresholds: Vec<Threshold>,
    /// Times at which a new sequence starts.
    boundaries: Vec<f64>,
}

fn series(label: &str, color: &'static str, records: &[StepRecord], get: impl Fn(&StepRecord) -> Option<f64>) -> Series {
    Series {
        label: label.to_string(),
        color,
        dash: None,
        values: records.iter().map(get).collect(),
    }
}

fn threshold(label: &str, value: f64, color: &'static str, dash: &'static str) -> Threshold {
    Threshold {
        label: label.to_string(),
        value,
        color,
        dash,
    }
}

/// Renders one panel as a standalone SVG document. `records` must be
/// nonempty; thresholds are read from the first record.
pub fn render(panel: Panel, records: &[StepRecord]) -> String {
    assert!(!records.is_empty(), "nothing to plot");
    let first = &records[0];
    let times: Vec<f64> = records.iter().map(|r| r.t).collect();
    let boundaries: Vec<f64> = records
        .windows(2)
        .filter(|w| w[0].sequence != w[1].sequence)
        .map(|w| w[0].t)
        .collect();
    let chart = match panel {
        Panel::Distance => Chart {
            title: "Drone-to-animal distance",
            y_label: "distance (m)",
            series: vec![series("d_dt", "#1f77b4", records, |r| Some(r.d_dt))],
            thresholds: vec![
                threshold(&format!("d_ac = {}", first.d_ac), first.d_ac, "#2ca02c", "6 4"),
                threshold(&format!("d_sf = {}", first.d_sf), first.d_sf, "#d62728", "6 4"),
                threshold(&format!("d_vis = {}", first.d_vis), first.d_vis, "#9467bd", "2 3"),
            ],
            times,
            boundaries,
        },
        Panel::Focal => Chart {
            title: "Focal length",
            y_label: "f (mm)",
            series: vec![series("f", "#ff7f0e", records, |r| Some(r.f))],
            thresholds: vec![],
            times,
            boundaries,
        },
        Panel::Framing => Chart {
            title: "Subject position in the image",
            y_label: "pixels",
            series: vec![
                series("u", "#1f77b4", records, |r| r.im_t_u),
                series("v", "#ff7f0e", records, |r| r.im_t_v),
                Series {
                    dash: Some("5 4"),
                    ..series("u*", "#1f77b4", records, |r| Some(r.im_star_u))
                },
                Series {
                    dash: Some("5 4"),
                    ..series("v*", "#ff7f0e", records, |r| Some(r.im_star_v))
                },
            ],
            thresholds: vec![
                threshold("border 0", 0.0, "#7f7f7f", "2 3"),
                threshold(&format!("W = {}", first.image_width_px), first.image_width_px, "#7f7f7f", "2 3"),
                threshold(&format!("H = {}", first.image_height_px), first.image_height_px, "#7f7f7f", "2 3"),
            ],
            times,
            boundaries,
        },
        Panel::Kinematics => Chart {
            title: "Speed and acceleration",
            y_label: "m/s, m/s²",
            series: vec![
                series("|v|", "#1f77b4", records, |r| Some(r.v_norm)),
                series("|a|", "#d62728", records, |r| Some(r.a_norm)),
            ],
            thresholds: vec![],
            times,
            boundaries,
        },
        Panel::Fovx => Chart {
            title: "Drone in the animal's view (horizontal)",
            y_label: "u (px)",
            series: vec![series("im_d u", "#1f77b4", records, |r| r.im_d_u)],
            thresholds: vec![
                threshold("border 0", 0.0, "#d62728", "2 3"),
                threshold(&format!("W = {}", first.eye_width_px), first.eye_width_px, "#d62728", "2 3"),
            ],
            times,
            boundaries,
        },
    };
    draw(&chart)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Tick spacing of 1, 2 or 5 times a power of ten giving about `n` ticks.
fn nice_step(span: f64, n: f64) -> f64 {
    let raw = span / n;
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    let k = if m < 1.5 {
        1.0
    } else if m < 3.5 {
        2.0
    } else if m < 7.5 {
        5.0
    } else {
        10.0
    };
    k * mag
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-9 {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn draw(c: &Chart) -> String {
    let (x0, x1) = range(c.times.iter().copied().chain([0.0]));
    let (y0, y1) = range(
        c.series
            .iter()
            .flat_map(|s| s.values.iter().flatten().copied())
            .chain(c.thresholds.iter().map(|t| t.value)),
    );
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" font-size="15" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, escape(c.title));

    // ticks and grid
    let xs = nice_step(x1 - x0, 8.0);
    let mut x = (x0 / xs).ceil() * xs;
    while x <= x1 + 1e-9 {
        let px = sx(x);
        let _ = writeln!(s, r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#eeeeee"/>"##, TOP + ph);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + ph + 16.0, tick_label(x, xs));
        x += xs;
    }
    let ys = nice_step(y1 - y0, 6.0);
    let mut y = (y0 / ys).ceil() * ys;
    while y <= y1 + 1e-9 {
        let py = sy(y);
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#eeeeee"/>"##, LEFT + pw);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 6.0, py + 4.0, tick_label(y, ys));
        y += ys;
    }
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">time (s)</text>"#, LEFT + pw / 2.0, HEIGHT - 10.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(c.y_label)
    );

    for b in &c.boundaries {
        let px = sx(*b);
        let _ = writeln!(
            s,
            r#"<line class="sequence-boundary" x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="black" stroke-dasharray="8 5"/>"#,
            TOP + ph
        );
    }
    for t in &c.thresholds {
        let py = sy(t.value);
        let _ = writeln!(
            s,
            r#"<line class="threshold" x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="{}" stroke-dasharray="{}"/>"#,
            LEFT + pw,
            t.color,
            t.dash
        );
    }

    for ser in &c.series {
        let dash = ser.dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
        let mut d = String::new();
        let mut pen_down = false;
        for (t, v) in c.times.iter().zip(&ser.values) {
            match v {
                Some(v) => {
                    let _ = write!(d, "{}{:.2} {:.2} ", if pen_down { "L" } else { "M" }, sx(*t), sy(*v));
                    pen_down = true;
                }
                None => pen_down = false,
            }
        }
        if !d.is_empty() {
            let _ = writeln!(
                s,
                r#"<path class="series" d="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#,
                d.trim_end(),
                ser.color
            );
        }
    }

    // legend
    let lx = LEFT + pw + 12.0;
    let mut ly = TOP + 10.0;
    for ser in &c.series {
        let dash = ser.dash.map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"{dash}/>"#, lx + 22.0, ser.color);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 28.0, ly + 4.0, escape(&ser.label));
        ly += 18.0;
    }
    for t in &c.thresholds {
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-dasharray="{}"/>"#, lx + 22.0, t.color, t.dash);
        let _ = writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 28.0, ly + 4.0, escape(&t.label));
        ly += 18.0;
    }
    if !c.boundaries.is_empty() {
        let _ = writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="black" stroke-dasharray="8 5"/>"#, lx + 22.0);
        let _ = writeln!(s, r#"<text x="{}" y="{}">sequence</text>"#, lx + 28.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}

fn tick_label(v: f64, step: f64) -> String {
    let decimals = if step >= 1.0 { 0 } else { (-step.log10().floor()) as usize };
    let v = if v.abs() < step * 1e-9 { 0.0 } else { v };
    format!("{v:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn records() -> Vec<StepRecord> {
        (0..20)
            .map(|k| StepRecord {
                k,
                t: 0.2 * (k + 1) as f64,
                sequence: k / 10,
                d_dt: 10.0 + k as f64,
                f: 30.0,
                im_d_u: (k % 7 != 3).then_some(100.0 * k as f64),
                d_ac: 20.0,
                d_sf: 5.0,
                d_vis: 12.0,
                image_width_px: 1280.0,
                image_height_px: 720.0,
                eye_width_px: 960.0,
                eye_height_px: 540.0,
                ..StepRecord::default()
            })
            .collect()
    }

    #[test]
    fn nice_steps() {
        assert_eq!(nice_step(10.0, 5.0), 2.0);
        assert_eq!(nice_step(60.0, 8.0), 10.0);
        assert!((nice_step(0.3, 6.0) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn distance_panel_has_thresholds_and_one_boundary() {
        let svg = render(Panel::Distance, &records());
        assert_eq!(svg.matches("class=\"threshold\"").count(), 3);
        assert_eq!(svg.matches("class=\"sequence-boundary\"").count(), 1);
        assert!(svg.contains("d_ac = 20"));
    }

    #[test]
    fn gaps_split_the_line() {
        let svg = render(Panel::Fovx, &records());
        let path = svg.lines().find(|l| l.contains("class=\"series\"")).unwrap();
        // k = 3, 10, 17 are missing: four runs of points
        assert_eq!(path.matches('M').count(), 4);
        assert!(svg.contains("W = 960"));
    }

    #[test]
    fn constant_series_still_renders() {
        let svg = render(Panel::Focal, &records());
        assert!(svg.contains("class=\"series\""));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
