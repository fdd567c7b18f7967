//! The single C-infinity transition primitive shared by the cutoff `omega`,
//! the Littlewood-Paley window and the plateau used for periodic extension.

fn h(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Smooth step: 0 for `s <= 0`, 1 for `s >= 1`, C-infinity, and
/// `smoothstep(1 - s) = 1 - smoothstep(s)`.
pub fn smoothstep(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let a = h(s);
        a / (a + h(1.0 - s))
    }
}

/// `ln smoothstep(s)`, accurate where `smoothstep` itself underflows;
/// `-inf` for `s <= 0`.
pub fn ln_smoothstep(s: f64) -> f64 {
    if s <= 0.0 {
        f64::NEG_INFINITY
    } else if s >= 1.0 {
        0.0
    } else {
        let a = -1.0 / s;
        let b = -1.0 / (1.0 - s);
        let top = a.max(b);
        a - (top + ((a - top).exp() + (b - top).exp()).ln())
    }
}

/// Plateau on a torus of length `1.5 * side` centred at `center`: equal to 1
/// on `|s - center| <= side / 2`, decaying smoothly to 0 at
/// `|s - center| = 3 * side / 4`.
pub fn plateau(s: f64, center: f64, side: f64) -> f64 {
    let d = (s - center).abs();
    1.0 - smoothstep((d - 0.5 * side) / (0.25 * side))
}
