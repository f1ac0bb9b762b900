use std::collections::HashMap;

use crate::error::Result;

use super::{evaluate_grid, HandshakeFieldConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContourSet {
    pub polylines: Vec<Polyline>,
    /// Cells (i, j) with an ambiguous saddle, resolved by the cell mean.
    pub saddles: Vec<(usize, usize)>,
}

impl ContourSet {
    /// Number of times the contours cross the line y = y0 with x inside
    /// (x_lo, x_hi).
    pub fn crossings_of(&self, y0: f64, x_lo: f64, x_hi: f64) -> usize {
        let mut n = 0;
        for pl in &self.polylines {
            for w in pl.points.windows(2) {
                let (a, b) = (w[0], w[1]);
                if (a[1] - y0) * (b[1] - y0) < 0.0 {
                    let x = a[0] + (b[0] - a[0]) * (y0 - a[1]) / (b[1] - a[1]);
                    if x > x_lo && x < x_hi {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    pub fn point_count(&self) -> usize {
        self.polylines.iter().map(|p| p.points.len()).sum()
    }
}

// Edge ids: horizontal edge from (i, j) to (i+1, j) is 2 * (j * nx + i),
// vertical edge from (i, j) to (i, j+1) is 2 * (j * nx + i) + 1.
#[derive(Clone, Copy)]
enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

/// Iso-lines of `values` (row-major, `y.len()` rows of `x.len()`) at
/// `level`. Cells with a NaN corner are skipped.
pub fn marching_squares(x: &[f64], y: &[f64], values: &[f64], level: f64) -> ContourSet {
    let nx = x.len();
    let ny = y.len();
    assert_eq!(values.len(), nx * ny, "grid size mismatch");
    let v = |i: usize, j: usize| values[j * nx + i];

    let mut points: HashMap<usize, [f64; 2]> = HashMap::new();
    let mut segments: Vec<(usize, usize)> = Vec::new();
    let mut saddles = Vec::new();

    let edge = |i: usize, j: usize, side: Side, points: &mut HashMap<usize, [f64; 2]>| -> usize {
        let (id, p0, p1) = match side {
            Side::Bottom => (2 * (j * nx + i), (i, j), (i + 1, j)),
            Side::Top => (2 * ((j + 1) * nx + i), (i, j + 1), (i + 1, j + 1)),
            Side::Left => (2 * (j * nx + i) + 1, (i, j), (i, j + 1)),
            Side::Right => (2 * (j * nx + i + 1) + 1, (i + 1, j), (i + 1, j + 1)),
        };
        points.entry(id).or_insert_with(|| {
            let (a, b) = (v(p0.0, p0.1) - level, v(p1.0, p1.1) - level);
            let f = if a == b { 0.5 } else { a / (a - b) };
            [
                x[p0.0] + f * (x[p1.0] - x[p0.0]),
                y[p0.1] + f * (y[p1.1] - y[p0.1]),
            ]
        });
        id
    };

    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            let c = [v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)];
            if c.iter().any(|z| z.is_nan()) {
                continue;
            }
            let inside = |z: f64| z >= level;
            let case = (inside(c[0]) as u8)
                | (inside(c[1]) as u8) << 1
                | (inside(c[2]) as u8) << 2
                | (inside(c[3]) as u8) << 3;
            use Side::*;
            let pairs: &[(Side, Side)] = match case {
                0 | 15 => &[],
                1 | 14 => &[(Left, Bottom)],
                2 | 13 => &[(Bottom, Right)],
                3 | 12 => &[(Left, Right)],
                4 | 11 => &[(Right, Top)],
                6 | 9 => &[(Bottom, Top)],
                7 | 8 => &[(Left, Top)],
                5 | 10 => {
                    saddles.push((i, j));
                    let centre_inside = inside(0.25 * (c[0] + c[1] + c[2] + c[3]));
                    // corners 0 and 2 share a class in case 5; 1 and 3 in case 10
                    let diag02_inside = case == 5;
                    if centre_inside == diag02_inside {
                        &[(Bottom, Right), (Left, Top)]
                    } else {
                        &[(Left, Bottom), (Right, Top)]
                    }
                }
                _ => unreachable!(),
            };
            for &(a, b) in pairs {
                let ea = edge(i, j, a, &mut points);
                let eb = edge(i, j, b, &mut points);
                segments.push((ea, eb));
            }
        }
    }

    ContourSet {
        polylines: join_segments(&segments, &points),
        saddles,
    }
}

fn join_segments(segments: &[(usize, usize)], points: &HashMap<usize, [f64; 2]>) -> Vec<Polyline> {
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &(a, b)) in segments.iter().enumerate() {
        incident.entry(a).or_default().push(k);
        incident.entry(b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();

    let walk = |start_seg: usize, start_edge: usize, used: &mut [bool]| -> Polyline {
        let mut ids = vec![start_edge];
        let mut seg = start_seg;
        let mut at = start_edge;
        let mut closed = false;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            let next = if a == at { b } else { a };
            if next == start_edge {
                closed = true;
                ids.push(next);
                break;
            }
            ids.push(next);
            at = next;
            match incident[&at].iter().find(|&&s| !used[s]) {
                Some(&s) => seg = s,
                None => break,
            }
        }
        Polyline {
            points: ids.iter().map(|id| points[id]).collect(),
            closed,
        }
    };

    // open chains start at an edge used by only one segment
    let mut ends: Vec<usize> = incident
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(&e, _)| e)
        .collect();
    ends.sort_unstable();
    for e in ends {
        let s = incident[&e][0];
        if !used[s] {
            out.push(walk(s, e, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            out.push(walk(s, segments[s].0, &mut used));
        }
    }
    out
}

/// Zero level of the potential at time `t` on the configured grid.
pub fn zero_crossing_contours(cfg: &HandshakeFieldConfig, t: f64) -> Result<ContourSet> {
    let mut one = cfg.clone();
    one.times = vec![t];
    let g = evaluate_grid(&one)?;
    Ok(marching_squares(&g.x, &g.y, &g.frames[0], 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<f64> {
        (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn circle_is_one_closed_loop() {
        let xs = grid(41);
        let vals: Vec<f64> = xs
            .iter()
            .flat_map(|&y| xs.iter().map(move |&x| x * x + y * y - 0.5))
            .collect();
        let c = marching_squares(&xs, &xs, &vals, 0.0);
        assert_eq!(c.polylines.len(), 1);
        assert!(c.polylines[0].closed);
        for p in &c.polylines[0].points {
            let r = p[0].hypot(p[1]);
            assert!((r - 0.5f64.sqrt()).abs() < 2e-3, "{r}");
        }
    }

    #[test]
    fn line_is_one_open_polyline() {
        let xs = grid(11);
        let vals: Vec<f64> = xs
            .iter()
            .flat_map(|&_y| xs.iter().map(move |&x| x - 0.05))
            .collect();
        let c = marching_squares(&xs, &xs, &vals, 0.0);
        assert_eq!(c.polylines.len(), 1);
        assert!(!c.polylines[0].closed);
        assert_eq!(c.polylines[0].points.len(), 11);
    }

    #[test]
    fn saddle_is_flagged() {
        let xs = vec![0.0, 1.0];
        let vals = vec![1.0, -1.0, -1.0, 1.0];
        let c = marching_squares(&xs, &xs, &vals, 0.0);
        assert_eq!(c.saddles, vec![(0, 0)]);
        assert_eq!(c.polylines.len(), 2);
    }

    #[test]
    fn nan_cells_are_skipped() {
        let xs = vec![0.0, 1.0, 2.0];
        let mut vals = vec![1.0, -1.0, 1.0, 1.0, -1.0, 1.0];
        vals[0] = f64::NAN;
        let c = marching_squares(&xs, &[0.0, 1.0], &vals, 0.0);
        assert_eq!(c.polylines.len(), 1);
    }
}
