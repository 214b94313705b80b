use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::OnceLock;

/// Interval refinement stops here unless overridden.
pub const DEFAULT_MAX_PRECISION_BITS: u32 = 1024;

/// First refinement round, in bits.
pub(crate) const INITIAL_PRECISION_BITS: u32 = 32;

const ENV_VAR: &str = "MULTITILE_MAX_PRECISION_BITS";

static OVERRIDE: AtomicU32 = AtomicU32::new(0);
static FROM_ENV: OnceLock<u32> = OnceLock::new();

/// The refinement cap: an explicit override, else `MULTITILE_MAX_PRECISION_BITS`,
/// else [`DEFAULT_MAX_PRECISION_BITS`].
pub fn max_precision_bits() -> u32 {
    match OVERRIDE.load(Ordering::Relaxed) {
        0 => *FROM_ENV.get_or_init(|| {
            std::env::var(ENV_VAR)
                .ok()
                .and_then(|s| s.trim().parse::<u32>().ok())
                .filter(|&b| b >= INITIAL_PRECISION_BITS)
                .unwrap_or(DEFAULT_MAX_PRECISION_BITS)
        }),
        bits => bits,
    }
}

/// Overrides the refinement cap for the whole process. Values below the first
/// refinement round are raised to it.
pub fn set_max_precision_bits(bits: u32) {
    OVERRIDE.store(bits.max(INITIAL_PRECISION_BITS), Ordering::Relaxed);
}

/// 32, 64, 128, ... up to and including the cap.
pub(crate) fn schedule() -> impl Iterator<Item = u32> {
    let cap = max_precision_bits();
    let mut next = Some(INITIAL_PRECISION_BITS.min(cap));
    std::iter::from_fn(move || {
        let current = next?;
        next = if current >= cap {
            None
        } else {
            Some(current.saturating_mul(2).min(cap))
        };
        Some(current)
    })
}
