use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

/// A wall-clock limit plus an optional shared stop flag.
///
/// Cloning shares the flag. Sub-deadlines created with [`Deadline::share`]
/// never outlive their parent.
#[derive(Debug, Clone, Default)]
pub struct Deadline {
    at: Option<Instant>,
    stop: Option<Arc<AtomicBool>>,
}

impl Deadline {
    pub fn never() -> Self {
        Deadline::default()
    }

    pub fn after(limit: Duration) -> Self {
        Deadline {
            at: Instant::now().checked_add(limit),
            stop: None,
        }
    }

    pub fn at(instant: Instant) -> Self {
        Deadline {
            at: Some(instant),
            stop: None,
        }
    }

    pub fn with_stop(mut self, flag: Arc<AtomicBool>) -> Self {
        self.stop = Some(flag);
        self
    }

    pub fn instant(&self) -> Option<Instant> {
        self.at
    }

    pub fn expired(&self) -> bool {
        if let Some(flag) = &self.stop {
            if flag.load(Ordering::Relaxed) {
                return true;
            }
        }
        matches!(self.at, Some(at) if Instant::now() >= at)
    }

    /// Time left, `None` when unlimited.
    pub fn remaining(&self) -> Option<Duration> {
        self.at.map(|at| at.saturating_duration_since(Instant::now()))
    }

    /// A deadline at `fraction` of the remaining time, sharing the stop flag.
    pub fn share(&self, fraction: f64) -> Deadline {
        match self.remaining() {
            None => self.clone(),
            Some(left) => Deadline {
                at: Some(Instant::now() + left.mul_f64(fraction.clamp(0.0, 1.0))),
                stop: self.stop.clone(),
            },
        }
    }

    /// The earlier of `self` and `now + limit`.
    pub fn min_with(&self, limit: Duration) -> Deadline {
        let candidate = Instant::now().checked_add(limit);
        let at = match (self.at, candidate) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Deadline {
            at,
            stop: self.stop.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stop_flag_expires_all_clones() {
        let flag = Arc::new(AtomicBool::new(false));
        let d = Deadline::never().with_stop(flag.clone());
        let child = d.share(0.5);
        assert!(!d.expired() && !child.expired());
        flag.store(true, Ordering::Relaxed);
        assert!(d.expired() && child.expired());
    }

    #[test]
    fn share_is_never_later_than_parent() {
        let d = Deadline::after(Duration::from_secs(10));
        let child = d.share(0.1);
        assert!(child.instant().unwrap() <= d.instant().unwrap());
        assert!(child.remaining().unwrap() <= Duration::from_secs(1));
        assert!(Deadline::never().share(0.1).remaining().is_none());
        assert!(Deadline::after(Duration::ZERO).expired());
    }
}
