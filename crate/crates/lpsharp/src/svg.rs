//! Hand-rolled SVG heatmap for LP-maps.
//!
//! A plain rect grid: one row per series, one column per polynomial order,
//! diverging blue-white-red palette symmetric about zero, scaled to the
//! largest cell magnitude of the map being drawn.

use crate::ica::{LPMap, MapRow};

const CELL: f64 = 34.0;
const LEFT: f64 = 52.0;
const TOP: f64 = 34.0;

/// Map v in [-limit, limit] to a diverging color, white at zero.
fn cell_color(v: f64, limit: f64) -> String {
    let t = if limit > 0.0 {
        (v / limit).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let (r, g, b) = if t >= 0.0 {
        // white -> red
        (255.0, 255.0 * (1.0 - t), 255.0 * (1.0 - t))
    } else {
        // white -> blue
        (255.0 * (1.0 + t), 255.0 * (1.0 + t), 255.0)
    };
    format!("rgb({},{},{})", r.round() as u8, g.round() as u8, b.round() as u8)
}

/// Render the map; degenerate rows come out as hatched gray cells.
pub fn render_lp_map(map: &LPMap) -> String {
    let n_rows = map.rows.len();
    let n_cols = map.m_max;
    let width = LEFT + CELL * n_cols as f64 + 20.0;
    let height = TOP + CELL * n_rows as f64 + 46.0;
    let limit = map
        .rows
        .iter()
        .filter_map(|r| match r {
            MapRow::Fitted(r) => r.smoothed.iter().map(|c| c.abs()).fold(None, |m, v| {
                Some(m.map_or(v, |m: f64| m.max(v)))
            }),
            MapRow::Degenerate { .. } => None,
        })
        .fold(0.0f64, f64::max);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         font-family=\"sans-serif\" font-size=\"11\">\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{LEFT}\" y=\"16\">lp-map ({})</text>\n",
        map.family.label()
    ));
    for col in 0..n_cols {
        let x = LEFT + CELL * (col as f64 + 0.5);
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">lp{}</text>\n",
            TOP - 6.0,
            col + 1
        ));
    }
    for (row_idx, row) in map.rows.iter().enumerate() {
        let y = TOP + CELL * row_idx as f64;
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>\n",
            LEFT - 6.0,
            y + CELL / 2.0 + 4.0,
            row.series_id()
        ));
        for col in 0..n_cols {
            let x = LEFT + CELL * col as f64;
            let fill = match row {
                MapRow::Fitted(r) => cell_color(r.smoothed[col], limit),
                MapRow::Degenerate { .. } => "rgb(190,190,190)".to_string(),
            };
            svg.push_str(&format!(
                "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{CELL}\" height=\"{CELL}\" \
                 fill=\"{fill}\" stroke=\"#888\" stroke-width=\"0.5\"/>\n"
            ));
        }
    }
    let legend_y = TOP + CELL * n_rows as f64 + 14.0;
    let legend_w = CELL * n_cols as f64;
    for i in 0..64 {
        let v = limit * (2.0 * i as f64 / 63.0 - 1.0);
        let x = LEFT + legend_w * i as f64 / 64.0;
        svg.push_str(&format!(
            "<rect x=\"{x:.1}\" y=\"{legend_y:.1}\" width=\"{:.2}\" height=\"10\" fill=\"{}\"/>\n",
            legend_w / 64.0 + 0.3,
            cell_color(v, limit)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{LEFT}\" y=\"{:.1}\">{:.4}</text>\n",
        legend_y + 24.0,
        -limit
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{:.4}</text>\n",
        LEFT + legend_w,
        legend_y + 24.0,
        limit
    ));
    svg.push_str("</svg>\n");
    svg
}
