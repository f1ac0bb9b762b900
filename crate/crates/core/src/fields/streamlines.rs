use crate::error::{Error, Result};
use crate::ode::{Dopri5, OdeOptions};
use crate::quadrature::GaussLegendre;

use super::{mean_poynting, mean_poynting_3d, poynting, HandshakeFieldConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StreamlineMode {
    /// Poynting vector at one instant.
    Instant(f64),
    /// Average over one optical period.
    Averaged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamlineEnd {
    /// Entered the exclusion disc around beta.
    Absorber,
    /// Entered the exclusion disc around alpha.
    Source,
    LeftGrid,
    /// |S| fell below the stagnation threshold.
    Stagnation,
    MaxLength,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Streamline {
    pub seed: [f64; 2],
    pub points: Vec<[f64; 2]>,
    pub end: StreamlineEnd,
    pub length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamlineOptions {
    pub tol: f64,
    /// Cap on the arc-length step; keep it below the exclusion radius.
    pub max_step: f64,
    pub max_length: f64,
    /// |S| below this counts as a stagnation point.
    pub stagnation: f64,
}

impl Default for StreamlineOptions {
    fn default() -> Self {
        StreamlineOptions {
            tol: 1e-8,
            max_step: 0.02,
            max_length: 200.0,
            stagnation: 1e-12,
        }
    }
}

fn flux(cfg: &HandshakeFieldConfig, mode: StreamlineMode, x: f64, y: f64) -> Result<[f64; 2]> {
    match mode {
        StreamlineMode::Instant(t) => poynting(cfg, x, y, t),
        StreamlineMode::Averaged => mean_poynting(cfg, x, y),
    }
}

fn classify(cfg: &HandshakeFieldConfig, p: [f64; 2]) -> Option<StreamlineEnd> {
    let g = &cfg.grid;
    if p[0] < g.x_min || p[0] > g.x_max || p[1] < g.y_min || p[1] > g.y_max {
        return Some(StreamlineEnd::LeftGrid);
    }
    let eps = cfg.exclusion_radius;
    if (p[0] - cfg.separation_dx).hypot(p[1]) < eps {
        return Some(StreamlineEnd::Absorber);
    }
    if p[0].hypot(p[1]) < eps {
        return Some(StreamlineEnd::Source);
    }
    None
}

/// Follows the Poynting direction from each seed until the line leaves
/// the grid, enters an exclusion disc, or stalls.
pub fn poynting_streamlines(
    cfg: &HandshakeFieldConfig,
    mode: StreamlineMode,
    seeds: &[[f64; 2]],
    opts: &StreamlineOptions,
) -> Result<Vec<Streamline>> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        if cfg.is_excluded(seed[0], seed[1]) {
            return Err(Error::Domain(format!(
                "seed ({}, {}) lies inside an exclusion disc",
                seed[0], seed[1]
            )));
        }
        out.push(trace(cfg, mode, seed, opts)?);
    }
    Ok(out)
}

fn trace(
    cfg: &HandshakeFieldConfig,
    mode: StreamlineMode,
    seed: [f64; 2],
    opts: &StreamlineOptions,
) -> Result<Streamline> {
    let s0 = flux(cfg, mode, seed[0], seed[1])?;
    if s0[0].hypot(s0[1]) < opts.stagnation {
        return Ok(Streamline {
            seed,
            points: vec![seed],
            end: StreamlineEnd::Stagnation,
            length: 0.0,
        });
    }
    let rhs = |_: f64, p: &[f64], d: &mut [f64]| match flux(cfg, mode, p[0], p[1]) {
        Ok(s) => {
            let m = s[0].hypot(s[1]);
            if m > 0.0 {
                d[0] = s[0] / m;
                d[1] = s[1] / m;
            } else {
                d[0] = 0.0;
                d[1] = 0.0;
            }
        }
        Err(_) => {
            d[0] = 0.0;
            d[1] = 0.0;
        }
    };
    let ode_opts = OdeOptions {
        rtol: opts.tol,
        atol: opts.tol,
        h_init: Some(0.25 * opts.max_step),
        h_max: opts.max_step,
        max_steps: 10_000_000,
    };
    let mut solver = Dopri5::new(rhs, 0.0, &seed, opts.max_length, ode_opts)?;
    let mut points = vec![seed];
    let end = loop {
        solver.step(opts.max_length, None)?;
        let p = [solver.y()[0], solver.y()[1]];
        points.push(p);
        if let Some(end) = classify(cfg, p) {
            break end;
        }
        let s = flux(cfg, mode, p[0], p[1])?;
        if s[0].hypot(s[1]) < opts.stagnation {
            break StreamlineEnd::Stagnation;
        }
        if solver.t() >= opts.max_length {
            break StreamlineEnd::MaxLength;
        }
    };
    Ok(Streamline {
        seed,
        points,
        end,
        length: solver.t(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxBalance {
    pub half_side: f64,
    /// Net outward flux of the period-averaged Poynting vector
    pub net: f64,
    /// Sum of |flux| over the six faces
    pub absolute: f64,
    /// |net| / absolute
    pub ratio: f64,
}

/// Net flux of the period-averaged Poynting vector through concentric
/// cubes around `centre` (3-D point). The cubes must not touch either atom.
pub fn flux_balance(
    cfg: &HandshakeFieldConfig,
    centre: [f64; 3],
    half_sides: &[f64],
    points_per_edge: usize,
) -> Result<Vec<FluxBalance>> {
    cfg.validate()?;
    if points_per_edge < 2 {
        return Err(Error::param("points_per_edge", "need at least 2"));
    }
    let rule = GaussLegendre::new(points_per_edge);
    let mut out = Vec::with_capacity(half_sides.len());
    for &h in half_sides {
        let margin = h + cfg.exclusion_radius;
        for atom in [[0.0, 0.0, 0.0], [cfg.separation_dx, 0.0, 0.0]] {
            if (0..3).all(|k| (centre[k] - atom[k]).abs() < margin) {
                return Err(Error::param("half_sides", format!("box of half-side {h} encloses an atom")));
            }
        }
        let mut faces = [0.0f64; 6];
        for (f, face) in faces.iter_mut().enumerate() {
            let axis = f / 2;
            let sign = if f % 2 == 0 { -1.0 } else { 1.0 };
            let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
            let mut acc = 0.0;
            for (a, wa) in rule.on(-h, h) {
                for (b, wb) in rule.on(-h, h) {
                    let mut p = centre;
                    p[axis] += sign * h;
                    p[u] += a;
                    p[v] += b;
                    let s = mean_poynting_3d(cfg, p[0], p[1], p[2])?;
                    acc += wa * wb * sign * s[axis];
                }
            }
            *face = acc;
        }
        let net: f64 = faces.iter().sum();
        let absolute: f64 = faces.iter().map(|f| f.abs()).sum();
        out.push(FluxBalance {
            half_side: h,
            net,
            absolute,
            ratio: if absolute > 0.0 { net.abs() / absolute } else { 0.0 },
        });
    }
    Ok(out)
}
