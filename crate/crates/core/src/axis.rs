use crate::error::{invalid, Result};

/// A uniform, strictly increasing grid `start + i * step` for `i < len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    start: f64,
    step: f64,
    len: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, len: usize) -> Result<Self> {
        if !start.is_finite() {
            return Err(invalid("start", "must be finite"));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(invalid(
                "step",
                format!("must be finite and > 0, got {step}"),
            ));
        }
        if len == 0 {
            return Err(invalid("len", "axis must have at least one point"));
        }
        Ok(Self { start, step, len })
    }

    /// `count` points from `min` to `max` inclusive.
    pub fn from_range(min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(invalid(
                "count",
                format!("need at least 2 points, got {count}"),
            ));
        }
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(invalid(
                "range",
                format!("need min < max, got [{min}, {max}]"),
            ));
        }
        Self::new(min, (max - min) / (count - 1) as f64, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn last(&self) -> f64 {
        self.value(self.len - 1)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.value(i))
    }
}
