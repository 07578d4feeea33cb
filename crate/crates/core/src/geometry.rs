//! Planar vectors and point-set helpers.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{invalid_input, Result};
use crate::scalar::Scalar;

/// A 2-D vector used for positions, velocities, displacements and slot offsets.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vec2<T> {
    pub const fn new(x: T, y: T) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2::new(T::zero(), T::zero())
    }

    /// Validating constructor: both components must be finite.
    pub fn try_new(x: T, y: T) -> Result<Self> {
        let v = Vec2::new(x, y);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(invalid_input(format!("non-finite vector ({x}, {y})")))
        }
    }

    /// Unit vector at `angle` radians from the positive x-axis.
    pub fn from_angle(angle: T) -> Self {
        Vec2::new(angle.cos(), angle.sin())
    }

    pub fn polar(radius: T, angle: T) -> Self {
        Vec2::from_angle(angle) * radius
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    pub fn distance_squared(self, other: Self) -> T {
        (self - other).norm_squared()
    }

    /// Angle in `(-pi, pi]`.
    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    /// Rotate counterclockwise by `angle` radians.
    pub fn rotated(self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Vec2::new(self.x * c - self.y * s, self.x * s + self.y * c)
    }

    /// Scale down to norm `max` if longer; shorter vectors are returned untouched.
    pub fn clamp_norm(self, max: T) -> Self {
        let n = self.norm();
        if n > max {
            self * (max / n)
        } else {
            self
        }
    }

    pub fn cast<U: Scalar>(self) -> Vec2<U> {
        Vec2::new(U::from(self.x).expect("component representable"), U::from(self.y).expect("component representable"))
    }
}

impl<T: Scalar> Add for Vec2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> AddAssign for Vec2<T> {
    fn add_assign(&mut self, rhs: Self) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl<T: Scalar> Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> SubAssign for Vec2<T> {
    fn sub_assign(&mut self, rhs: Self) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl<T: Scalar> Mul<T> for Vec2<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl<T: Scalar> Div<T> for Vec2<T> {
    type Output = Self;
    fn div(self, rhs: T) -> Self {
        Vec2::new(self.x / rhs, self.y / rhs)
    }
}

impl<T: Scalar> Neg for Vec2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vec2::new(-self.x, -self.y)
    }
}

impl<T: Scalar> From<(T, T)> for Vec2<T> {
    fn from((x, y): (T, T)) -> Self {
        Vec2::new(x, y)
    }
}

/// Arithmetic mean of a non-empty point set.
pub fn centroid<T: Scalar>(points: &[Vec2<T>]) -> Result<Vec2<T>> {
    if points.is_empty() {
        return Err(invalid_input("centroid of an empty point set"));
    }
    let sum = points.iter().fold(Vec2::zero(), |acc, &p| acc + p);
    Ok(sum / T::from_count(points.len()))
}

/// Smallest pairwise distance, `None` for fewer than two points.
pub fn min_pairwise_distance<T: Scalar>(points: &[Vec2<T>]) -> Option<T> {
    let mut best: Option<T> = None;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            let d = a.distance(b);
            best = Some(match best {
                Some(m) if m <= d => m,
                _ => d,
            });
        }
    }
    best
}

/// Wrap an angle into `[0, 2pi)`.
pub fn normalize_angle<T: Scalar>(theta: T) -> T {
    let tau = T::TAU();
    let mut t = theta % tau;
    if t < T::zero() {
        t += tau;
    }
    // `-tiny % tau + tau` can round up to exactly tau.
    if t >= tau {
        t = T::zero();
    }
    t
}
