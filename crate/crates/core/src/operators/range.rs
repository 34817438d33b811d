//! Geometric range of products in the opinion triangle.
//!
//! Points are `(b, d, u)` barycentric coordinates. Given `ω_x` and the base
//! rate `a_y`, every product `ω_x · ω_y` lies in the closed triangle spanned
//! by the disbelief vertex `V = (0, 1, 0)` and two points `D`, `E` on the
//! line `d = d_x`:
//!
//! * `A` is the expectation of `ω_x` on the zero-uncertainty edge and `B`
//!   the intersection of its projector with the zero-belief edge.
//! * `C` lies on the zero-uncertainty edge at `a_y` times the distance from
//!   `V` to `A`.
//! * `D` is where line `BC` meets `d = d_x`; `E` is where the parallel to
//!   `BC` through `A` meets it.
//!
//! `BC` is the projector direction for base rate `a_x a_y`, so `D` and `E`
//! are the points on `d = d_x` whose expectations under that base rate are
//! `a_y E(x)` and `E(x)`. This form stays defined when `a_x = 0` and `B`
//! does not exist.

use crate::opinion::Opinion;

const TOL: f64 = 1e-9;

/// Closed triangle `V D E`, stored as `(b, d, u)` triples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductRange {
    pub v: [f64; 3],
    pub d: [f64; 3],
    pub e: [f64; 3],
}

impl ProductRange {
    pub fn new(wx: &Opinion, a_y: f64) -> Self {
        let dx = wx.d();
        let ex = wx.expectation().value();
        let a = wx.a() * a_y;
        let rest = 1.0 - dx;
        let on_line = |target: f64| {
            // b + u = 1 - d_x and b + a u = target
            let u = if a < 1.0 {
                ((rest - target) / (1.0 - a)).clamp(0.0, rest)
            } else {
                rest
            };
            [rest - u, dx, u]
        };
        let (d, e) = if a < 1.0 {
            (on_line(a_y * ex), on_line(ex))
        } else {
            // every projector is parallel to d = d_x: the range is d ≥ d_x
            ([0.0, dx, rest], [rest, dx, 0.0])
        };
        Self {
            v: [0.0, 1.0, 0.0],
            d,
            e,
        }
    }

    /// Membership with tolerance `1e-9` on the barycentric coordinates.
    pub fn contains(&self, w: &Opinion) -> bool {
        // V sits at the origin of the (b, u) plane
        let p = (w.b(), w.u());
        let d = (self.d[0], self.d[2]);
        let e = (self.e[0], self.e[2]);
        let det = d.0 * e.1 - e.0 * d.1;
        if det.abs() > 1e-14 {
            let s = (p.0 * e.1 - e.0 * p.1) / det;
            let t = (d.0 * p.1 - p.0 * d.1) / det;
            return s >= -TOL && t >= -TOL && s + t <= 1.0 + TOL;
        }
        segment_distance(p, d) <= TOL || segment_distance(p, e) <= TOL
    }
}

/// Distance from `p` to the segment between the origin and `q`.
fn segment_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    let qq = q.0 * q.0 + q.1 * q.1;
    let t = if qq > 0.0 {
        ((p.0 * q.0 + p.1 * q.1) / qq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ((p.0 - t * q.0).powi(2) + (p.1 - t * q.1).powi(2)).sqrt()
}

/// Whether `candidate` lies in the range of `ω_x · ω_y` over all `ω_y` with
/// base rate `a_y`.
pub fn product_range_contains(wx: &Opinion, a_y: f64, candidate: &Opinion) -> bool {
    ProductRange::new(wx, a_y).contains(candidate)
}

/// Whether an opinion `candidate` with base rate `a_x` could be divided by
/// `wy`: the triangle from `wy`'s projector points, with lines parallel to
/// the projector for `a_x`. Requires `0 ≤ a_x ≤ a_y`, `a_y > 0`.
pub fn divisible_range_contains(wy: &Opinion, a_x: f64, candidate: &Opinion) -> bool {
    if wy.a() <= 0.0 || a_x > wy.a() {
        return false;
    }
    ProductRange::new(wy, a_x / wy.a()).contains(candidate)
}
