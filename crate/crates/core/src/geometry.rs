//! Geometry on the circle `R/Z`.
//!
//! Points are reduced mod 1, balls are arcs `[c - r, c + r)` whose measure is
//! `min(2r, 1)`, and finite unions of arcs are kept in a canonical form: sorted,
//! pairwise disjoint, half-open linear segments of `[0, 1)`. An arc that crosses
//! `0` is stored as two segments. Segments that touch are merged.
//!
//! All comparisons are exact on `f64`; no epsilon is used when merging.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the circle, stored as its representative in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub const ZERO: CirclePoint = CirclePoint(0.0);

    /// Reduces any real mod 1.
    pub fn new(x: f64) -> Self {
        let r = x.rem_euclid(1.0);
        // rem_euclid rounds tiny negative inputs up to exactly 1.0
        CirclePoint(if r >= 1.0 { 0.0 } else { r })
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// Rotates by `shift` (mod 1).
    #[inline]
    pub fn rotate(self, shift: f64) -> Self {
        CirclePoint::new(self.0 + shift)
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl From<f64> for CirclePoint {
    fn from(x: f64) -> Self {
        CirclePoint::new(x)
    }
}

impl From<CirclePoint> for f64 {
    fn from(p: CirclePoint) -> f64 {
        p.0
    }
}

/// Distance on `R/Z`: `min(|x - y|, 1 - |x - y|)`.
#[inline]
pub fn wrap_dist(x: CirclePoint, y: CirclePoint) -> f64 {
    let d = (x.0 - y.0).abs();
    d.min(1.0 - d)
}

/// Converts a slice of raw reals into circle points.
pub fn to_points(values: &[f64]) -> Vec<CirclePoint> {
    values.iter().copied().map(CirclePoint::new).collect()
}

/// The ball `B(center, radius)` on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: CirclePoint,
    pub radius: f64,
}

impl Arc {
    /// # Panics
    /// If `radius` is negative or not finite.
    pub fn new(center: impl Into<CirclePoint>, radius: f64) -> Self {
        assert!(
            radius.is_finite() && radius >= 0.0,
            "arc radius must be finite and nonnegative, got {radius}"
        );
        Arc {
            center: center.into(),
            radius,
        }
    }

    #[inline]
    pub fn measure(&self) -> f64 {
        (2.0 * self.radius).min(1.0)
    }

    /// Appends the one or two linear segments covered by this arc.
    fn push_segments(&self, out: &mut Vec<Segment>) {
        if self.radius <= 0.0 {
            return;
        }
        if self.radius >= 0.5 {
            out.push(Segment { lo: 0.0, hi: 1.0 });
            return;
        }
        let c = self.center.value();
        let lo = c - self.radius;
        let hi = c + self.radius;
        if lo < 0.0 {
            out.push(Segment { lo: lo + 1.0, hi: 1.0 });
            out.push(Segment { lo: 0.0, hi });
        } else if hi > 1.0 {
            out.push(Segment { lo, hi: 1.0 });
            out.push(Segment { lo: 0.0, hi: hi - 1.0 });
        } else {
            out.push(Segment { lo, hi });
        }
    }
}

/// A half-open linear segment `[lo, hi)` with `0 <= lo < hi <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
}

impl Segment {
    #[inline]
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

/// The interval `J = [left, left + length)` taken mod 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub left: CirclePoint,
    pub length: f64,
}

impl Window {
    pub fn new(left: impl Into<CirclePoint>, length: f64) -> Result<Self> {
        if !(length > 0.0 && length <= 1.0) {
            return Err(Error::Parameter(format!(
                "window length must lie in (0, 1], got {length}"
            )));
        }
        Ok(Window {
            left: left.into(),
            length,
        })
    }

    pub fn full() -> Self {
        Window {
            left: CirclePoint::ZERO,
            length: 1.0,
        }
    }

    /// The window `[lo, hi)` for `0 <= lo < hi <= 1`.
    pub fn span(lo: f64, hi: f64) -> Result<Self> {
        Window::new(lo, hi - lo)
    }

    /// `count` equal windows `[k/count, (k+1)/count)`.
    pub fn dyadic(count: usize) -> Vec<Window> {
        let len = 1.0 / count as f64;
        (0..count)
            .map(|k| Window {
                left: CirclePoint::new(k as f64 / count as f64),
                length: len,
            })
            .collect()
    }

    pub fn is_full(&self) -> bool {
        self.length >= 1.0
    }

    /// The window as one or two linear pieces of `[0, 1]`.
    pub fn linear_parts(&self) -> ([f64; 2], Option<[f64; 2]>) {
        if self.is_full() {
            return ([0.0, 1.0], None);
        }
        let lo = self.left.value();
        let hi = lo + self.length;
        if hi > 1.0 {
            ([lo, 1.0], Some([0.0, hi - 1.0]))
        } else {
            ([lo, hi], None)
        }
    }

    /// Whether `other` is contained in `self`.
    pub fn contains_window(&self, other: &Window) -> bool {
        if self.is_full() {
            return true;
        }
        if other.length > self.length {
            return false;
        }
        let offset = (other.left.value() - self.left.value()).rem_euclid(1.0);
        offset + other.length <= self.length
    }
}

/// A finite union of arcs in canonical disjoint form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcUnion {
    segments: Vec<Segment>,
    /// `prefix[i]` is the total length of `segments[..i]`.
    #[serde(skip)]
    prefix: Vec<f64>,
    total_measure: f64,
}

impl Default for ArcUnion {
    fn default() -> Self {
        ArcUnion::from_segments(Vec::new())
    }
}

impl ArcUnion {
    pub fn from_arcs<I: IntoIterator<Item = Arc>>(arcs: I) -> Self {
        let arcs = arcs.into_iter();
        let mut raw = Vec::with_capacity(arcs.size_hint().0 + 2);
        for arc in arcs {
            arc.push_segments(&mut raw);
        }
        ArcUnion::from_segments(raw)
    }

    /// Union of `B(x, radius)` over all `points`.
    pub fn uniform(points: &[CirclePoint], radius: f64) -> Self {
        ArcUnion::from_arcs(points.iter().map(|&p| Arc::new(p, radius)))
    }

    fn from_segments(mut raw: Vec<Segment>) -> Self {
        raw.retain(|s| !s.is_empty());
        raw.sort_unstable_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut segments: Vec<Segment> = Vec::with_capacity(raw.len());
        for s in raw {
            match segments.last_mut() {
                Some(cur) if s.lo <= cur.hi => {
                    if s.hi > cur.hi {
                        cur.hi = s.hi;
                    }
                }
                _ => segments.push(s),
            }
        }
        let mut prefix = Vec::with_capacity(segments.len() + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for s in &segments {
            acc += s.len();
            prefix.push(acc);
        }
        ArcUnion {
            segments,
            prefix,
            total_measure: acc,
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Measure of the union inside `[0, t)`, for `t` in `[0, 1]`.
    fn cumulative(&self, t: f64) -> f64 {
        let k = self.segments.partition_point(|s| s.lo < t);
        if k == 0 {
            return 0.0;
        }
        let last = &self.segments[k - 1];
        self.prefix[k - 1] + (last.hi.min(t) - last.lo)
    }

    /// Measure of the union inside the linear range `[lo, hi)` of `[0, 1]`.
    pub fn measure_in_range(&self, lo: f64, hi: f64) -> f64 {
        let lo = lo.clamp(0.0, 1.0);
        let hi = hi.clamp(0.0, 1.0);
        if hi <= lo {
            return 0.0;
        }
        (self.cumulative(hi) - self.cumulative(lo)).max(0.0)
    }

    /// Measure of the union intersected with the window.
    pub fn measure_in(&self, window: &Window) -> f64 {
        if window.is_full() {
            return self.total_measure;
        }
        let (first, second) = window.linear_parts();
        let mut m = self.measure_in_range(first[0], first[1]);
        if let Some(p) = second {
            m += self.measure_in_range(p[0], p[1]);
        }
        m
    }

    pub fn contains(&self, x: CirclePoint) -> bool {
        let t = x.value();
        let k = self.segments.partition_point(|s| s.lo <= t);
        k > 0 && t < self.segments[k - 1].hi
    }
}

/// `λ(∪ arcs)`.
pub fn union_measure(arcs: &[Arc]) -> f64 {
    ArcUnion::from_arcs(arcs.iter().copied()).total_measure()
}

/// `λ(∪ arcs ∩ J)`.
pub fn union_measure_in(arcs: &[Arc], window: &Window) -> f64 {
    ArcUnion::from_arcs(arcs.iter().copied()).measure_in(window)
}
