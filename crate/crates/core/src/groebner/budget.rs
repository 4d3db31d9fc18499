use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_MAX_REDUCTIONS: u64 = 2_000_000;
pub const DEFAULT_MAX_DEGREE: u32 = 120;

static MAX_REDUCTIONS: AtomicU64 = AtomicU64::new(DEFAULT_MAX_REDUCTIONS);
static MAX_DEGREE: AtomicU64 = AtomicU64::new(DEFAULT_MAX_DEGREE as u64);

/// Resource caps for a single Buchberger run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_reductions: u64,
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_reductions: DEFAULT_MAX_REDUCTIONS, max_degree: DEFAULT_MAX_DEGREE }
    }
}

impl Budget {
    /// The process-wide budget used by the convenience entry points.
    pub fn global() -> Self {
        Budget {
            max_reductions: MAX_REDUCTIONS.load(Ordering::Relaxed),
            max_degree: MAX_DEGREE.load(Ordering::Relaxed) as u32,
        }
    }

    pub fn set_global(self) {
        MAX_REDUCTIONS.store(self.max_reductions, Ordering::Relaxed);
        MAX_DEGREE.store(self.max_degree as u64, Ordering::Relaxed);
    }
}
