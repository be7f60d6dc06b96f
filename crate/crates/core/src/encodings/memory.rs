use crate::sim::SimError;

/// Peak value count for evaluating one output of an alternating
/// conv/pool CNN fragment-wise: `1 + (k^2 + m^2 - 2) log_m(n)`.
///
/// `n` is the square input side, `k` the conv kernel (stride 1), `m` the
/// pooling kernel and stride; `n` must be a power of `m`.
pub fn memory_bound(n: usize, k: usize, m: usize) -> Result<usize, SimError> {
    if k == 0 || m == 0 || n == 0 {
        return Err(SimError::Contract("n, k, m must be positive".into()));
    }
    let depth = exact_log(n, m)
        .ok_or_else(|| SimError::Contract(format!("{n} is not a power of {m}")))?;
    Ok(1 + (k * k + m * m - 2) * depth)
}

fn exact_log(n: usize, m: usize) -> Option<usize> {
    if m == 1 {
        return if n == 1 { Some(0) } else { None };
    }
    let mut v = n;
    let mut log = 0;
    while v > 1 {
        if v % m != 0 {
            return None;
        }
        v /= m;
        log += 1;
    }
    Some(log)
}

/// Brute-force liveness oracle: simulate the fragment-wise dataflow that
/// computes one final value, allocating every intermediate, freeing it
/// when consumed, and recording the peak number of simultaneously live
/// values. Inputs are fetched on demand from external storage, so only
/// fetched-but-unconsumed pixels count.
pub fn liveness_peak(n: usize, k: usize, m: usize) -> Result<usize, SimError> {
    let depth = exact_log(n, m)
        .ok_or_else(|| SimError::Contract(format!("{n} is not a power of {m}")))?;

    struct Tracker {
        live: usize,
        peak: usize,
    }
    impl Tracker {
        fn alloc(&mut self) {
            self.live += 1;
            self.peak = self.peak.max(self.live);
        }
        fn free(&mut self, count: usize) {
            self.live -= count;
        }
    }

    // Produce one pooled value at `level` (level 0 = a raw pixel). A
    // pooled value needs m^2 conv outputs; a conv output needs k^2
    // pooled values from the level below. Values are gathered in full,
    // then reduced: the reduction frees the operands and allocates the
    // result.
    fn pooled(t: &mut Tracker, level: usize, k: usize, m: usize) {
        if level == 0 {
            t.alloc(); // fetch one pixel
            return;
        }
        for _ in 0..m * m {
            // one conv output from k^2 values of the level below
            for _ in 0..k * k {
                pooled(t, level - 1, k, m);
            }
            t.free(k * k);
            t.alloc();
        }
        t.free(m * m);
        t.alloc();
    }

    let mut t = Tracker { live: 0, peak: 0 };
    pooled(&mut t, depth, k, m);
    Ok(t.peak)
}
