//! Geometry of the flat square torus of side `N`: wrapped coordinates,
//! wrapped Euclidean distance, and uniform sampling.

use rand::Rng;

/// A position on the square torus, both coordinates in `[0, N)`.
///
/// Construction always wraps, so arithmetic cannot produce out-of-range
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub x: f64,
    pub y: f64,
}

impl TorusPoint {
    /// Wraps arbitrary real coordinates into `[0, N)`.
    pub fn new(x: f64, y: f64, side: f64) -> Self {
        debug_assert!(side > 0.0);
        TorusPoint {
            x: x.rem_euclid(side),
            y: y.rem_euclid(side),
        }
    }
}

/// Wrapped Euclidean distance between two points of the torus of side `n`.
///
/// Each axis contributes `min(|d|, n - |d|)`; the result is at most
/// `n / sqrt(2)` (attained by the half-diagonal).
#[inline]
pub fn torus_distance(p: TorusPoint, q: TorusPoint, n: f64) -> f64 {
    let mut dx = (p.x - q.x).abs();
    if dx > n - dx {
        dx = n - dx;
    }
    let mut dy = (p.y - q.y).abs();
    if dy > n - dy {
        dy = n - dy;
    }
    (dx * dx + dy * dy).sqrt()
}

/// A point with both coordinates independent uniform on `[0, n)`.
pub fn uniform_point<R: Rng + ?Sized>(rng: &mut R, n: f64) -> TorusPoint {
    TorusPoint {
        x: rng.gen::<f64>() * n,
        y: rng.gen::<f64>() * n,
    }
}
