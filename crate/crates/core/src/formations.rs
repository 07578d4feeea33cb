//! Square, circle and triangle formation generators, the leading slot, and
//! the cost-minimising conversion center.

use crate::error::{FormationError, Result};
use crate::formation::Formation;
use crate::geometry::{centroid, Vec2};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Square,
    Circle,
    Triangle,
}

impl std::str::FromStr for Shape {
    type Err = FormationError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "square" => Ok(Shape::Square),
            "circle" => Ok(Shape::Circle),
            "triangle" => Ok(Shape::Triangle),
            other => Err(FormationError::InvalidSpec(format!("unknown shape `{other}`"))),
        }
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Shape::Square => "square",
            Shape::Circle => "circle",
            Shape::Triangle => "triangle",
        })
    }
}

/// Parameters of a generated formation.
#[derive(Debug, Clone, PartialEq)]
pub struct FormationSpec<T> {
    pub shape: Shape,
    pub n: usize,
    pub area: T,
    /// Robots strictly inside the triangle base; `None` picks the most uniform spacing.
    pub triangle_bottom_count: Option<usize>,
}

impl<T: Scalar> FormationSpec<T> {
    pub fn new(shape: Shape, n: usize, area: T) -> Self {
        FormationSpec { shape, n, area, triangle_bottom_count: None }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.area > T::zero()) || !self.area.is_finite() {
            return Err(spec_err(format!("area must be positive, got {}", self.area)));
        }
        let min_n = if self.shape == Shape::Square { 4 } else { 3 };
        if self.n < min_n {
            return Err(spec_err(format!("{} formation needs n >= {min_n}, got {}", self.shape, self.n)));
        }
        if let (Shape::Triangle, Some(y)) = (self.shape, self.triangle_bottom_count) {
            triangle_waist_count(self.n, y)?;
        }
        Ok(())
    }

    /// Generate the slots. A triangle of area `S` uses height `sqrt(S)` and
    /// half-base `sqrt(S)`.
    pub fn build(&self) -> Result<Formation<T>> {
        self.validate()?;
        match self.shape {
            Shape::Circle => circle_formation(self.n, self.area),
            Shape::Square => square_formation(self.n, self.area),
            Shape::Triangle => {
                let side = self.area.sqrt();
                let y = match self.triangle_bottom_count {
                    Some(y) => y,
                    None => uniform_bottom_count(self.n, side, side),
                };
                Ok(triangle_formation(self.n, side, side, y)?.formation)
            }
        }
    }
}

fn spec_err(msg: String) -> FormationError {
    FormationError::InvalidSpec(msg)
}

/// `n` slots evenly spaced on the circle of area `area`, counterclockwise from angle 0.
pub fn circle_formation<T: Scalar>(n: usize, area: T) -> Result<Formation<T>> {
    if n < 3 {
        return Err(spec_err(format!("circle formation needs n >= 3, got {n}")));
    }
    if !(area > T::zero()) || !area.is_finite() {
        return Err(spec_err(format!("area must be positive, got {area}")));
    }
    let radius = circle_radius(area);
    let step = T::TAU() / T::from_count(n);
    let slots = (0..n).map(|k| Vec2::polar(radius, step * T::from_count(k))).collect();
    Formation::centered(slots)
}

/// Radius of the circle enclosing `area`.
pub fn circle_radius<T: Scalar>(area: T) -> T {
    (area / T::PI()).sqrt()
}

/// `n` slots evenly spaced along the perimeter of an axis-aligned square of
/// side `sqrt(area)`, starting at the middle of the top edge and walking clockwise.
pub fn square_formation<T: Scalar>(n: usize, area: T) -> Result<Formation<T>> {
    if n < 4 {
        return Err(spec_err(format!("square formation needs n >= 4, got {n}")));
    }
    if !(area > T::zero()) || !area.is_finite() {
        return Err(spec_err(format!("area must be positive, got {area}")));
    }
    let side = area.sqrt();
    let half = side * T::half();
    let spacing = side * T::lit(4.0) / T::from_count(n);
    let slots = (0..n).map(|k| perimeter_point(spacing * T::from_count(k), side, half)).collect();
    Formation::centered(slots)
}

/// Point at clockwise arc length `t` from the top-middle of the square.
fn perimeter_point<T: Scalar>(t: T, side: T, half: T) -> Vec2<T> {
    let mut t = t;
    // top edge, right half
    if t <= half {
        return Vec2::new(t, half);
    }
    t -= half;
    if t <= side {
        return Vec2::new(half, half - t);
    }
    t -= side;
    if t <= side {
        return Vec2::new(half - t, -half);
    }
    t -= side;
    if t <= side {
        return Vec2::new(-half, -half + t);
    }
    t -= side;
    Vec2::new(-half + t, half)
}

/// Vertices and geometric centroid of a generated triangle, in slot coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleLayout<T> {
    pub formation: Formation<T>,
    pub apex: Vec2<T>,
    pub base_left: Vec2<T>,
    pub base_right: Vec2<T>,
    /// Geometric centroid `O` of the triangle; `|AO| = 2|OD|` with `D` the base midpoint.
    pub centroid: Vec2<T>,
    /// Robots strictly inside each waist edge.
    pub waist_count: usize,
    pub bottom_count: usize,
}

impl<T: Scalar> TriangleLayout<T> {
    pub fn base_midpoint(&self) -> Vec2<T> {
        (self.base_left + self.base_right) * T::half()
    }
}

fn triangle_waist_count(n: usize, bottom: usize) -> Result<usize> {
    if n < 3 {
        return Err(spec_err(format!("triangle formation needs n >= 3, got {n}")));
    }
    let rest = (n - 3)
        .checked_sub(bottom)
        .ok_or_else(|| spec_err(format!("bottom count {bottom} exceeds the {} non-vertex robots", n - 3)))?;
    if rest % 2 != 0 {
        return Err(spec_err(format!("n - 3 - bottom = {rest} must be even so both waists hold the same count")));
    }
    Ok(rest / 2)
}

/// Isosceles triangle with height `height` (apex to base midpoint) and base
/// `2 * half_base`: three robots on the vertices, `(n - 3 - bottom) / 2` inside
/// each waist and `bottom` inside the base, all evenly spaced.
///
/// The geometric centroid of the triangle sits on the origin before the slot
/// set is shifted to a zero mean; the shift is vertical and vanishes when the
/// waist and base counts agree.
pub fn triangle_formation<T: Scalar>(n: usize, height: T, half_base: T, bottom: usize) -> Result<TriangleLayout<T>> {
    if !(height > T::zero()) || !(half_base > T::zero()) {
        return Err(spec_err("triangle dimensions must be positive".into()));
    }
    let waist = triangle_waist_count(n, bottom)?;
    let third = height / T::lit(3.0);
    let apex = Vec2::new(T::zero(), third * T::two());
    let base_left = Vec2::new(-half_base, -third);
    let base_right = Vec2::new(half_base, -third);

    let mut slots = vec![apex, base_left, base_right];
    let interior = |from: Vec2<T>, to: Vec2<T>, count: usize, out: &mut Vec<Vec2<T>>| {
        for k in 1..=count {
            let t = T::from_count(k) / T::from_count(count + 1);
            out.push(from + (to - from) * t);
        }
    };
    interior(apex, base_left, waist, &mut slots);
    interior(apex, base_right, waist, &mut slots);
    interior(base_left, base_right, bottom, &mut slots);

    let shift = centroid(&slots)?;
    let formation = Formation::centered(slots)?;
    Ok(TriangleLayout {
        formation,
        apex: apex - shift,
        base_left: base_left - shift,
        base_right: base_right - shift,
        centroid: -shift,
        waist_count: waist,
        bottom_count: bottom,
    })
}

/// Base count whose spacing is closest to the waist spacing; ties go to the smaller count.
pub fn uniform_bottom_count<T: Scalar>(n: usize, height: T, half_base: T) -> usize {
    if n < 3 {
        return 0;
    }
    let waist_len = half_base.hypot(height);
    let base_len = half_base * T::two();
    let mut best: Option<(T, usize)> = None;
    let mut y = (n - 3) % 2;
    while y <= n - 3 {
        let x = (n - 3 - y) / 2;
        let gap = (waist_len / T::from_count(x + 1) - base_len / T::from_count(y + 1)).abs();
        if best.is_none_or(|(g, _)| gap < g) {
            best = Some((gap, y));
        }
        y += 2;
    }
    best.map(|(_, y)| y).unwrap_or(0)
}

/// Slot with the largest y; ties go to the smaller x, then the smaller index.
pub fn leading_slot<T: Scalar>(f: &Formation<T>) -> usize {
    let mut best = 0;
    for (i, s) in f.slots().iter().enumerate().skip(1) {
        let b = f.slot(best);
        if s.y > b.y || (s.y == b.y && s.x < b.x) {
            best = i;
        }
    }
    best
}

/// Center minimising total squared travel to a zero-mean formation: the
/// centroid of the current positions.
pub fn optimal_center<T: Scalar>(positions: &[Vec2<T>]) -> Result<Vec2<T>> {
    centroid(positions)
}
