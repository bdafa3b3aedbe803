use std::sync::atomic::{AtomicU64, Ordering};

/// Exact tally of group operations performed through one backend instance.
///
/// Every call is counted; nothing is sampled. The counter is shared by all
/// callers of the same group value, so measurements taken while other threads
/// use that value will include their work too.
#[derive(Debug, Default)]
pub struct OpCounter {
    exp: AtomicU64,
    double_exp: AtomicU64,
    mul: AtomicU64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub exp: u64,
    pub double_exp: u64,
    pub mul: u64,
}

impl OpCounts {
    /// Element-wise difference, `self - earlier`.
    pub fn since(&self, earlier: &OpCounts) -> OpCounts {
        OpCounts {
            exp: self.exp - earlier.exp,
            double_exp: self.double_exp - earlier.double_exp,
            mul: self.mul - earlier.mul,
        }
    }

    pub fn total(&self) -> u64 {
        self.exp + self.double_exp + self.mul
    }
}

impl OpCounter {
    pub fn snapshot(&self) -> OpCounts {
        OpCounts {
            exp: self.exp.load(Ordering::Relaxed),
            double_exp: self.double_exp.load(Ordering::Relaxed),
            mul: self.mul.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.exp.store(0, Ordering::Relaxed);
        self.double_exp.store(0, Ordering::Relaxed);
        self.mul.store(0, Ordering::Relaxed);
    }

    pub(crate) fn count_exp(&self) {
        self.exp.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn count_double_exp(&self) {
        self.double_exp.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn count_mul(&self) {
        self.mul.fetch_add(1, Ordering::Relaxed);
    }
}

impl Clone for OpCounter {
    /// A cloned backend starts a fresh measurement window.
    fn clone(&self) -> Self {
        OpCounter::default()
    }
}
