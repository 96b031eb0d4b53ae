//! Minimal planar vector helpers. Points are plain `[f64; 2]`.

#[allow(unused_imports)]
use num_traits::Float;

pub type Point = [f64; 2];

#[inline]
pub fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

#[inline]
pub fn scale(a: Point, s: f64) -> Point {
    [a[0] * s, a[1] * s]
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
pub fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    norm(sub(a, b))
}

#[inline]
pub fn lerp(a: Point, b: Point, t: f64) -> Point {
    [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
}

/// Unit vector in the direction of `a`; `None` for the zero vector.
#[inline]
pub fn normalize(a: Point) -> Option<Point> {
    let n = norm(a);
    if n > 0.0 {
        Some(scale(a, 1.0 / n))
    } else {
        None
    }
}

/// Twice the signed area of the triangle `a b c` (positive when counter-clockwise).
#[inline]
pub fn cross(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub lo: Point,
    pub hi: Point,
}

impl Aabb {
    pub fn new(lo: Point, hi: Point) -> Self {
        Aabb { lo, hi }
    }

    pub fn square(center: Point, half: f64) -> Self {
        Aabb {
            lo: [center[0] - half, center[1] - half],
            hi: [center[0] + half, center[1] + half],
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p[0] >= self.lo[0] && p[0] <= self.hi[0] && p[1] >= self.lo[1] && p[1] <= self.hi[1]
    }

    pub fn contains_box(&self, other: &Aabb) -> bool {
        self.contains(other.lo) && self.contains(other.hi)
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            self.lo,
            [self.hi[0], self.lo[1]],
            self.hi,
            [self.lo[0], self.hi[1]],
        ]
    }

    pub fn width(&self) -> f64 {
        self.hi[0] - self.lo[0]
    }

    pub fn height(&self) -> f64 {
        self.hi[1] - self.lo[1]
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn intersect(&self, other: &Aabb) -> Aabb {
        Aabb {
            lo: [self.lo[0].max(other.lo[0]), self.lo[1].max(other.lo[1])],
            hi: [self.hi[0].min(other.hi[0]), self.hi[1].min(other.hi[1])],
        }
    }

    /// Distance from `p` to the box (zero inside).
    pub fn distance(&self, p: Point) -> f64 {
        let dx = (self.lo[0] - p[0]).max(0.0).max(p[0] - self.hi[0]);
        let dy = (self.lo[1] - p[1]).max(0.0).max(p[1] - self.hi[1]);
        dx.hypot(dy)
    }

    /// Farthest distance from `p` to a point of the box.
    pub fn max_distance(&self, p: Point) -> f64 {
        self.corners()
            .iter()
            .map(|&c| dist(c, p))
            .fold(0.0, f64::max)
    }
}
