//! Resource limits for long symbolic runs. Exceeding a limit unwinds to the
//! nearest [`guarded`] call, which reports it as [`Error::Budget`].

use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use crate::error::{Error, Result};

/// Step and term-count limits with running counters.
#[derive(Debug, Default)]
pub struct Budget {
    max_terms: Option<usize>,
    max_steps: Option<u64>,
    steps: AtomicU64,
    high_water: AtomicUsize,
    retained: AtomicUsize,
}

/// Panic payload used to unwind out of an exhausted computation.
#[derive(Debug, Clone)]
pub struct BudgetExceeded(pub String);

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn new(max_terms: Option<usize>, max_steps: Option<u64>) -> Self {
        Self {
            max_terms,
            max_steps,
            ..Self::default()
        }
    }

    /// Records one multiplication producing `terms` terms.
    pub fn charge(&self, terms: usize) {
        let steps = self.steps.fetch_add(1, Ordering::Relaxed) + 1;
        self.high_water.fetch_max(terms, Ordering::Relaxed);
        if let Some(max) = self.max_steps {
            if steps > max {
                panic::panic_any(BudgetExceeded(format!("more than {max} multiplication steps")));
            }
        }
        if let Some(max) = self.max_terms {
            if terms > max {
                panic::panic_any(BudgetExceeded(format!("{terms} terms exceeds the limit of {max}")));
            }
        }
    }

    /// Records `terms` terms kept in a memo table. The running total is
    /// held to the same limit as a single product.
    pub fn retain(&self, terms: usize) {
        let total = self.retained.fetch_add(terms, Ordering::Relaxed) + terms;
        if let Some(max) = self.max_terms {
            if total > max {
                panic::panic_any(BudgetExceeded(format!(
                    "{total} memoized terms exceeds the limit of {max}"
                )));
            }
        }
    }

    /// Forgets all retained terms, after the memo tables were cleared.
    pub fn release(&self) {
        self.retained.store(0, Ordering::Relaxed);
    }

    /// Restarts the step count, so that the step limit applies per check.
    pub fn reset_steps(&self) {
        self.steps.store(0, Ordering::Relaxed);
    }

    pub fn retained(&self) -> usize {
        self.retained.load(Ordering::Relaxed)
    }

    pub fn steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    pub fn reset_high_water(&self) {
        self.high_water.store(0, Ordering::Relaxed);
    }

    pub fn high_water(&self) -> usize {
        self.high_water.load(Ordering::Relaxed)
    }
}

/// Runs `f`, turning budget exhaustion into an error. Other panics propagate.
pub fn guarded<T>(f: impl FnOnce() -> T) -> Result<T> {
    match panic::catch_unwind(AssertUnwindSafe(f)) {
        Ok(v) => Ok(v),
        Err(payload) => match payload.downcast::<BudgetExceeded>() {
            Ok(b) => Err(Error::Budget(b.0)),
            Err(other) => panic::resume_unwind(other),
        },
    }
}

/// Keeps the default panic message for real panics but stays quiet when a
/// budget runs out.
pub fn install_quiet_hook() {
    let default = panic::take_hook();
    panic::set_hook(Box::new(move |info| {
        if info.payload().downcast_ref::<BudgetExceeded>().is_none() {
            default(info);
        }
    }));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustion_is_an_error() {
        let b = Budget::new(None, Some(3));
        let r = guarded(|| {
            for _ in 0..10 {
                b.charge(1);
            }
        });
        assert!(matches!(r, Err(Error::Budget(_))));
        assert_eq!(b.steps(), 4);
        let b = Budget::new(Some(5), None);
        assert!(guarded(|| b.charge(5)).is_ok());
        assert!(guarded(|| b.charge(6)).is_err());
        assert_eq!(b.high_water(), 6);
        let b = Budget::new(Some(5), None);
        assert!(guarded(|| b.retain(3)).is_ok());
        assert!(guarded(|| b.retain(3)).is_err());
    }
}
