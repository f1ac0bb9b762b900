use std::f64::consts::PI;

const CYCLE_SAMPLES: usize = 64;

/// Cycle-averaged power delivered by a field E cos(w t) to a dipole whose
/// velocity is -V sin(w t + phase), by trapezoid quadrature over one period.
/// Positive means the dipole gains energy.
pub fn per_cycle_work(field_amplitude: f64, velocity_envelope: f64, phase: f64) -> f64 {
    // periodic trapezoid: exact for the low harmonics involved
    let n = CYCLE_SAMPLES;
    let mut acc = 0.0;
    for i in 0..n {
        let th = 2.0 * PI * i as f64 / n as f64;
        acc += field_amplitude * th.cos() * (-velocity_envelope * (th + phase).sin());
    }
    acc / n as f64
}

/// Closed form -E V sin(phase) / 2.
pub fn per_cycle_work_closed(field_amplitude: f64, velocity_envelope: f64, phase: f64) -> f64 {
    -0.5 * field_amplitude * velocity_envelope * phase.sin()
}
