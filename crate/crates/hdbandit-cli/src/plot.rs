//! Renders the emitted CSV files as self-contained SVG line charts.
//!
//! Two schemas are recognized, matching the files the other subcommands
//! write:
//!
//! * a trajectory table — a `round` column plus one
//!   `{agent}_mean_cumulative_reward` column per agent (stderr columns are
//!   accepted and ignored); drawn on linear axes, one polyline per agent;
//! * the memory table — `algorithm,bits,d,kib`; drawn as model size in KiB
//!   against context dimension, one polyline per algorithm, with a log10
//!   y-axis declared via `data-y-scale="log"` on the SVG root.
//!
//! Anything else is rejected with an error naming the column that is
//! missing. The output is a single `<svg>` element with no external
//! references, so it can be embedded or opened directly.

use std::fmt;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 230.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const TRAJECTORY_SUFFIX: &str = "_mean_cumulative_reward";

#[derive(Debug)]
pub enum PlotError {
    /// The file has no header row at all.
    Empty { path: String },
    /// The header matches neither schema; `column` is what was looked for.
    MissingColumn { path: String, column: String },
    /// The header is fine but a cell does not parse as a number.
    BadCell { path: String, detail: String },
    /// A header was found but no data rows follow it.
    NoRows { path: String },
}

impl fmt::Display for PlotError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlotError::Empty { path } => write!(f, "{path} is empty"),
            PlotError::MissingColumn { path, column } => {
                write!(f, "{path}: missing column {column:?}")
            }
            PlotError::BadCell { path, detail } => write!(f, "{path}: {detail}"),
            PlotError::NoRows { path } => write!(f, "{path} has a header but no data rows"),
        }
    }
}

/// One named line on the chart.
struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

struct Chart {
    title: String,
    x_label: String,
    y_label: String,
    log_y: bool,
    series: Vec<Series>,
}

/// Parses `content` (labelled `path` in errors) and renders it as an SVG.
pub fn svg_from_csv(path: &str, content: &str) -> Result<String, PlotError> {
    if content.trim().is_empty() {
        return Err(PlotError::Empty {
            path: path.to_string(),
        });
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(content.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|err| PlotError::BadCell {
            path: path.to_string(),
            detail: format!("unreadable header: {err}"),
        })?
        .iter()
        .map(str::to_string)
        .collect();

    let rows = read_rows(path, &mut reader)?;
    if rows.is_empty() {
        return Err(PlotError::NoRows {
            path: path.to_string(),
        });
    }

    let chart = if headers.iter().any(|h| h == "algorithm") {
        memory_chart(path, &headers, &rows)?
    } else if headers.iter().any(|h| h == "round") {
        trajectory_chart(path, &headers, &rows)?
    } else {
        return Err(PlotError::MissingColumn {
            path: path.to_string(),
            column: "round (trajectory) or algorithm (memory table)".to_string(),
        });
    };

    Ok(render(&chart))
}

fn read_rows(path: &str, reader: &mut csv::Reader<&[u8]>) -> Result<Vec<Vec<String>>, PlotError> {
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|err| PlotError::BadCell {
            path: path.to_string(),
            detail: format!("unreadable row: {err}"),
        })?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok(rows)
}

fn column_index(path: &str, headers: &[String], name: &str) -> Result<usize, PlotError> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| PlotError::MissingColumn {
            path: path.to_string(),
            column: name.to_string(),
        })
}

fn parse_cell(path: &str, row: usize, column: &str, text: &str) -> Result<f64, PlotError> {
    text.parse::<f64>().map_err(|_| PlotError::BadCell {
        path: path.to_string(),
        detail: format!("row {row}, column {column:?}: {text:?} is not a number"),
    })
}

/// Builds the cumulative-reward chart: one series per
/// `{agent}_mean_cumulative_reward` column, x from the `round` column.
fn trajectory_chart(
    path: &str,
    headers: &[String],
    rows: &[Vec<String>],
) -> Result<Chart, PlotError> {
    let round_col = column_index(path, headers, "round")?;
    let series_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter_map(|(i, h)| {
            h.strip_suffix(TRAJECTORY_SUFFIX)
                .map(|label| (i, label.to_string()))
        })
        .collect();
    if series_cols.is_empty() {
        return Err(PlotError::MissingColumn {
            path: path.to_string(),
            column: format!("*{TRAJECTORY_SUFFIX}"),
        });
    }

    let mut series: Vec<Series> = series_cols
        .iter()
        .map(|(_, label)| Series {
            label: label.clone(),
            points: Vec::with_capacity(rows.len()),
        })
        .collect();
    for (r, row) in rows.iter().enumerate() {
        let x = parse_cell(path, r + 1, "round", &row[round_col])?;
        for (s, (col, _)) in series_cols.iter().enumerate() {
            let y = parse_cell(path, r + 1, &headers[*col], &row[*col])?;
            series[s].points.push((x, y));
        }
    }

    Ok(Chart {
        title: "Mean cumulative reward".to_string(),
        x_label: "round".to_string(),
        y_label: "cumulative reward".to_string(),
        log_y: false,
        series,
    })
}

/// Builds the model-size chart: one series per algorithm, x = context
/// dimension, y = KiB on a log axis.
fn memory_chart(path: &str, headers: &[String], rows: &[Vec<String>]) -> Result<Chart, PlotError> {
    let algo_col = column_index(path, headers, "algorithm")?;
    let d_col = column_index(path, headers, "d")?;
    let kib_col = column_index(path, headers, "kib")?;

    let mut series: Vec<Series> = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        let label = row[algo_col].clone();
        let d = parse_cell(path, r + 1, "d", &row[d_col])?;
        let kib = parse_cell(path, r + 1, "kib", &row[kib_col])?;
        match series.iter_mut().find(|s| s.label == label) {
            Some(existing) => existing.points.push((d, kib)),
            None => series.push(Series {
                label,
                points: vec![(d, kib)],
            }),
        }
    }
    for s in &mut series {
        s.points
            .sort_by(|a, b| a.0.partial_cmp(&b.0).expect("dimensions are finite"));
    }

    Ok(Chart {
        title: "Model size".to_string(),
        x_label: "context dimension d".to_string(),
        y_label: "KiB".to_string(),
        log_y: true,
        series,
    })
}

/// Maps data coordinates to SVG pixels, with an optional log10 y-axis.
struct Scale {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    log_y: bool,
}

impl Scale {
    fn from_chart(chart: &Chart) -> Scale {
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for s in &chart.series {
            for &(x, y) in &s.points {
                x_min = x_min.min(x);
                x_max = x_max.max(x);
                y_min = y_min.min(y);
                y_max = y_max.max(y);
            }
        }
        if x_min >= x_max {
            x_min -= 0.5;
            x_max += 0.5;
        }
        if chart.log_y {
            // Decade bounds around the data keep the tick labels exact.
            let lo = y_min.max(f64::MIN_POSITIVE).log10().floor();
            let hi = y_max.max(f64::MIN_POSITIVE).log10().ceil();
            let hi = if hi <= lo { lo + 1.0 } else { hi };
            Scale {
                x_min,
                x_max,
                y_min: lo,
                y_max: hi,
                log_y: true,
            }
        } else {
            let y_lo = y_min.min(0.0);
            let y_hi = if y_max > y_lo { y_max } else { y_lo + 1.0 };
            Scale {
                x_min,
                x_max,
                y_min: y_lo,
                y_max: y_hi * 1.05,
                log_y: false,
            }
        }
    }

    fn x(&self, v: f64) -> f64 {
        let w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        MARGIN_LEFT + (v - self.x_min) / (self.x_max - self.x_min) * w
    }

    fn y(&self, v: f64) -> f64 {
        let h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let t = if self.log_y {
            (v.max(f64::MIN_POSITIVE).log10() - self.y_min) / (self.y_max - self.y_min)
        } else {
            (v - self.y_min) / (self.y_max - self.y_min)
        };
        HEIGHT - MARGIN_BOTTOM - t * h
    }

    /// Tick positions in data coordinates.
    fn x_ticks(&self) -> Vec<f64> {
        let n = 5;
        (0..=n)
            .map(|i| self.x_min + (self.x_max - self.x_min) * i as f64 / n as f64)
            .collect()
    }

    fn y_ticks(&self) -> Vec<f64> {
        if self.log_y {
            let lo = self.y_min as i32;
            let hi = self.y_max as i32;
            (lo..=hi).map(|k| 10f64.powi(k)).collect()
        } else {
            let n = 5;
            (0..=n)
                .map(|i| self.y_min + (self.y_max - self.y_min) * i as f64 / n as f64)
                .collect()
        }
    }
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let rounded = (v * 100.0).round() / 100.0;
    if rounded == rounded.trunc() && rounded.abs() < 1e9 {
        format!("{}", rounded as i64)
    } else {
        format!("{rounded}")
    }
}

fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn render(chart: &Chart) -> String {
    let scale = Scale::from_chart(chart);
    let y_scale_attr = if chart.log_y { "log" } else { "linear" };
    let plot_left = MARGIN_LEFT;
    let plot_right = WIDTH - MARGIN_RIGHT;
    let plot_top = MARGIN_TOP;
    let plot_bottom = HEIGHT - MARGIN_BOTTOM;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" data-y-scale=\"{y_scale_attr}\" \
         font-family=\"sans-serif\" font-size=\"13\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"28\" text-anchor=\"middle\" font-size=\"17\">{}</text>\n",
        (plot_left + plot_right) / 2.0,
        escape_xml(&chart.title)
    ));

    // Gridlines and tick labels.
    for tick in scale.y_ticks() {
        let y = scale.y(tick);
        svg.push_str(&format!(
            "  <line x1=\"{plot_left:.1}\" y1=\"{y:.1}\" x2=\"{plot_right:.1}\" y2=\"{y:.1}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>\n",
            plot_left - 8.0,
            y + 4.0,
            fmt_tick(tick)
        ));
    }
    for tick in scale.x_ticks() {
        let x = scale.x(tick);
        svg.push_str(&format!(
            "  <line x1=\"{x:.1}\" y1=\"{plot_bottom:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n",
            plot_top
        ));
        svg.push_str(&format!(
            "  <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
            plot_bottom + 20.0,
            fmt_tick(tick)
        ));
    }

    // Axis frame and labels.
    svg.push_str(&format!(
        "  <line x1=\"{plot_left:.1}\" y1=\"{plot_top:.1}\" x2=\"{plot_left:.1}\" \
         y2=\"{plot_bottom:.1}\" stroke=\"black\" stroke-width=\"1.5\"/>\n"
    ));
    svg.push_str(&format!(
        "  <line x1=\"{plot_left:.1}\" y1=\"{plot_bottom:.1}\" x2=\"{plot_right:.1}\" \
         y2=\"{plot_bottom:.1}\" stroke=\"black\" stroke-width=\"1.5\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n",
        (plot_left + plot_right) / 2.0,
        HEIGHT - 16.0,
        escape_xml(&chart.x_label)
    ));
    svg.push_str(&format!(
        "  <text x=\"22\" y=\"{:.1}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 22 {:.1})\">{}</text>\n",
        (plot_top + plot_bottom) / 2.0,
        (plot_top + plot_bottom) / 2.0,
        escape_xml(&chart.y_label)
    ));

    // One polyline per series plus a legend entry.
    for (i, s) in chart.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let points: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", scale.x(x), scale.y(y)))
            .collect();
        svg.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            points.join(" ")
        ));

        let legend_x = plot_right + 16.0;
        let legend_y = plot_top + 10.0 + i as f64 * 22.0;
        svg.push_str(&format!(
            "  <rect x=\"{legend_x:.1}\" y=\"{:.1}\" width=\"14\" height=\"14\" \
             fill=\"{color}\"/>\n",
            legend_y - 11.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{legend_y:.1}\">{}</text>\n",
            legend_x + 20.0,
            escape_xml(&s.label)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}
