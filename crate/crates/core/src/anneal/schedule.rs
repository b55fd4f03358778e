use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Piecewise-linear s(t) through `(t, s)` breakpoints (t in μs).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    breakpoints: Vec<(f64, f64)>,
}

impl Schedule {
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(invalid("a schedule needs at least two breakpoints"));
        }
        if breakpoints[0].1 != 0.0 || breakpoints[breakpoints.len() - 1].1 != 1.0 {
            return Err(invalid("a schedule must start at s = 0 and end at s = 1"));
        }
        for w in breakpoints.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(invalid(format!(
                    "time is not strictly increasing at t = {}",
                    w[1].0
                )));
            }
            if w[1].1 < w[0].1 {
                return Err(invalid(format!("s decreases at t = {}", w[1].0)));
            }
        }
        Ok(Self { breakpoints })
    }

    pub fn linear(total: f64) -> Result<Self> {
        Self::new(vec![(0.0, 0.0), (total, 1.0)])
    }

    /// Linear ramp of length `total` with a flat pause of `pause` μs inserted at `s_pause`.
    pub fn with_pause(total: f64, s_pause: f64, pause: f64) -> Result<Self> {
        if !(0.0 < s_pause && s_pause < 1.0) || pause <= 0.0 {
            return Err(invalid("pause needs 0 < s < 1 and a positive duration"));
        }
        let t_pause = total * s_pause;
        Self::new(vec![
            (0.0, 0.0),
            (t_pause, s_pause),
            (t_pause + pause, s_pause),
            (total + pause, 1.0),
        ])
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn duration(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1].0
    }

    /// s at time t, clamped to the schedule's range.
    pub fn s_at(&self, t: f64) -> f64 {
        let bp = &self.breakpoints;
        if t <= bp[0].0 {
            return bp[0].1;
        }
        for w in bp.windows(2) {
            let ((t0, s0), (t1, s1)) = (w[0], w[1]);
            if t <= t1 {
                return s0 + (s1 - s0) * (t - t0) / (t1 - t0);
            }
        }
        1.0
    }

    /// Flat segments as `(t_start, t_end, s)`.
    pub fn pauses(&self) -> Vec<(f64, f64, f64)> {
        self.breakpoints
            .windows(2)
            .filter(|w| w[0].1 == w[1].1)
            .map(|w| (w[0].0, w[1].0, w[0].1))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pause_is_flat() {
        let sch = Schedule::with_pause(100.0, 0.4, 10.0).unwrap();
        assert_eq!(sch.pauses(), vec![(40.0, 50.0, 0.4)]);
        assert_eq!(sch.s_at(45.0), 0.4);
        assert_eq!(sch.s_at(110.0), 1.0);
        assert!((sch.s_at(20.0) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(Schedule::new(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(Schedule::new(vec![(0.0, 0.0), (1.0, 0.5), (2.0, 0.4), (3.0, 1.0)]).is_err());
        assert!(Schedule::new(vec![(0.0, 0.1), (1.0, 1.0)]).is_err());
    }
}
