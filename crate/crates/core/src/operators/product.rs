//! Multiplication, comultiplication and the Cartesian-product bba.

use super::{canonical, LimitParams, OpError, Raw};
use crate::frames::{Bba, FrameOfDiscernment, Subset};
use crate::opinion::Opinion;

/// AND: opinion about `x ∧ y` for `x` and `y` on distinct binary frames.
///
/// When `a_x = a_y = 1` the general formulas are 0/0 and `lp.eta` selects
/// the limit.
pub fn multiply(wx: &Opinion, wy: &Opinion, lp: &LimitParams) -> Result<Opinion, OpError> {
    lp.validate()?;
    let (x, y, swapped) = canonical(wx, wy);
    let raw = if x.a() == 1.0 && y.a() == 1.0 {
        let eta = lp.eta.ok_or(OpError::MissingLimitParam("eta"))?;
        let mut lambda = eta / (1.0 + eta);
        if swapped {
            lambda = 1.0 - lambda;
        }
        multiply_limit(x, y, lambda)
    } else {
        multiply_raw(x, y)
    };
    raw.finish("multiply")
}

pub(crate) fn multiply_raw(x: &Opinion, y: &Opinion) -> Raw {
    let (ax, ay) = (x.a(), y.a());
    let den = (1.0 - ax) + ax * (1.0 - ay);
    Raw {
        b: x.b() * y.b()
            + ((1.0 - ax) * ay * x.b() * y.u() + ax * (1.0 - ay) * x.u() * y.b()) / den,
        d: x.d() + y.d() - x.d() * y.d(),
        u: x.u() * y.u() + ((1.0 - ay) * x.b() * y.u() + (1.0 - ax) * x.u() * y.b()) / den,
        a: ax * ay,
    }
}

fn multiply_limit(x: &Opinion, y: &Opinion, lambda: f64) -> Raw {
    Raw {
        b: x.b() * y.b() + lambda * x.b() * y.u() + (1.0 - lambda) * x.u() * y.b(),
        d: x.d() + y.d() - x.d() * y.d(),
        u: x.u() * y.u() + (1.0 - lambda) * x.b() * y.u() + lambda * x.u() * y.b(),
        a: 1.0,
    }
}

/// OR: opinion about `x ∨ y` for `x` and `y` on distinct binary frames.
///
/// When `a_x = a_y = 0` the general formulas are 0/0 and `lp.zeta` selects
/// the limit.
pub fn comultiply(wx: &Opinion, wy: &Opinion, lp: &LimitParams) -> Result<Opinion, OpError> {
    lp.validate()?;
    let (x, y, swapped) = canonical(wx, wy);
    let raw = if x.a() == 0.0 && y.a() == 0.0 {
        let zeta = lp.zeta.ok_or(OpError::MissingLimitParam("zeta"))?;
        let mut lambda = zeta / (1.0 + zeta);
        if swapped {
            lambda = 1.0 - lambda;
        }
        comultiply_limit(x, y, lambda)
    } else {
        comultiply_raw(x, y)
    };
    raw.finish("comultiply")
}

pub(crate) fn comultiply_raw(x: &Opinion, y: &Opinion) -> Raw {
    let (ax, ay) = (x.a(), y.a());
    let den = ax + ay * (1.0 - ax);
    Raw {
        b: x.b() + y.b() - x.b() * y.b(),
        d: x.d() * y.d()
            + (ax * (1.0 - ay) * x.d() * y.u() + (1.0 - ax) * ay * x.u() * y.d()) / den,
        u: x.u() * y.u() + (ay * x.d() * y.u() + ax * x.u() * y.d()) / den,
        a: den,
    }
}

fn comultiply_limit(x: &Opinion, y: &Opinion, lambda: f64) -> Raw {
    Raw {
        b: x.b() + y.b() - x.b() * y.b(),
        d: x.d() * y.d() + lambda * x.d() * y.u() + (1.0 - lambda) * x.u() * y.d(),
        u: x.u() * y.u() + (1.0 - lambda) * x.d() * y.u() + lambda * x.u() * y.d(),
        a: 0.0,
    }
}

/// One focal element of the product bba.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductCell {
    pub label: &'static str,
    pub subset: Subset,
    pub mass: f64,
}

/// Belief masses on `X × Y` built from two binomial opinions.
///
/// Atoms are ordered `x.y`, `x.~y`, `~x.y`, `~x.~y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductBba {
    bba: Bba,
    cells: [ProductCell; 9],
}

pub const XY: Subset = Subset::from_bits(0b0001);
pub const X_NY: Subset = Subset::from_bits(0b0010);
pub const NX_Y: Subset = Subset::from_bits(0b0100);
pub const NX_NY: Subset = Subset::from_bits(0b1000);

impl ProductBba {
    pub fn bba(&self) -> &Bba {
        &self.bba
    }

    pub fn cells(&self) -> &[ProductCell; 9] {
        &self.cells
    }

    pub fn mass(&self, x: Subset) -> f64 {
        self.cells
            .iter()
            .find(|c| c.subset == x)
            .map_or(0.0, |c| c.mass)
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().map(|c| c.mass).sum()
    }

    /// Belief in `x ∧ y`, the single cell `{(x,y)}`.
    pub fn belief_and(&self) -> f64 {
        self.mass(XY)
    }

    /// Belief in `x ∨ y`: every focal element inside `{(x,y),(x,ȳ),(x̄,y)}`.
    pub fn belief_or(&self) -> f64 {
        let target = XY.union(X_NY).union(NX_Y);
        self.cells
            .iter()
            .filter(|c| c.subset.is_subset_of(target))
            .map(|c| c.mass)
            .sum()
    }
}

pub fn cartesian_product_bba(wx: &Opinion, wy: &Opinion) -> ProductBba {
    let (x, y) = (wx, wy);
    let cell = |label, subset, mass| ProductCell {
        label,
        subset,
        mass,
    };
    let cells = [
        cell("{(x,y)}", XY, x.b() * y.b()),
        cell("{(x,~y)}", X_NY, x.b() * y.d()),
        cell("{(~x,y)}", NX_Y, x.d() * y.b()),
        cell("{(~x,~y)}", NX_NY, x.d() * y.d()),
        cell("{x}×Y", XY.union(X_NY), x.b() * y.u()),
        cell("{~x}×Y", NX_Y.union(NX_NY), x.d() * y.u()),
        cell("X×{y}", XY.union(NX_Y), x.u() * y.b()),
        cell("X×{~y}", X_NY.union(NX_NY), x.u() * y.d()),
        cell("X×Y", XY.union(X_NY).union(NX_Y).union(NX_NY), x.u() * y.u()),
    ];
    let frame = FrameOfDiscernment::new(["x.y", "x.~y", "~x.y", "~x.~y"])
        .expect("fixed four-atom frame is valid");
    let bba = Bba::new(frame, cells.iter().map(|c| (c.subset, c.mass)))
        .expect("product masses sum to one");
    ProductBba { bba, cells }
}
