//! Shared FFT plans, keyed by length and direction.
//!
//! rustfft plans are immutable and thread-safe once built; the cache is a
//! plain mutex so concurrent scenario sweeps reuse plans without re-planning.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

type PlanCache = Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>;

fn cache() -> &'static PlanCache {
    static CACHE: OnceLock<PlanCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut map = cache().lock().expect("fft plan cache poisoned");
    map.entry((n, forward))
        .or_insert_with(|| {
            let dir = if forward {
                FftDirection::Forward
            } else {
                FftDirection::Inverse
            };
            FftPlanner::new().plan_fft(n, dir)
        })
        .clone()
}

/// Unnormalized forward DFT in place: X_j = sum_i x_i exp(-2*pi*i*j*i/n).
pub fn forward(buf: &mut [Complex64]) {
    plan(buf.len(), true).process(buf);
}

/// Inverse DFT in place, normalized by 1/n so that inverse(forward(x)) = x.
pub fn inverse(buf: &mut [Complex64]) {
    let n = buf.len();
    plan(n, false).process(buf);
    let scale = 1.0 / n as f64;
    for a in buf.iter_mut() {
        *a *= scale;
    }
}
