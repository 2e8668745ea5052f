/// Summary of the retained timing repetitions, in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingStats {
    pub median: u64,
    pub mean: f64,
    pub samples: usize,
}

impl TimingStats {
    pub fn from_samples(samples: &[u64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let mut sorted = samples.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2
        };
        let mean = sorted.iter().map(|&t| t as f64).sum::<f64>() / n as f64;
        Some(Self {
            median,
            mean,
            samples: n,
        })
    }
}

/// Runs `f` `repetitions` times, discards the first `warmup` timings and
/// returns the last result with the retained statistics. `f` reports its own
/// elapsed nanoseconds.
pub fn measure<T, E>(
    repetitions: usize,
    warmup: usize,
    mut f: impl FnMut() -> Result<(T, u64), E>,
) -> Result<(T, TimingStats), E> {
    let reps = repetitions.max(warmup + 1);
    let mut retained = Vec::with_capacity(reps - warmup);
    let mut last = None;
    for i in 0..reps {
        let (value, ns) = f()?;
        if i >= warmup {
            retained.push(ns);
        }
        last = Some(value);
    }
    let stats = TimingStats::from_samples(&retained).expect("at least one retained repetition");
    Ok((last.expect("at least one repetition"), stats))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even_samples() {
        assert_eq!(TimingStats::from_samples(&[5, 1, 3]).unwrap().median, 3);
        assert_eq!(TimingStats::from_samples(&[4, 1, 3, 2]).unwrap().median, 2);
        assert!(TimingStats::from_samples(&[]).is_none());
    }

    #[test]
    fn warmup_runs_are_discarded() {
        let mut calls = 0u64;
        let (last, stats) = measure::<u64, ()>(5, 2, || {
            calls += 1;
            Ok((calls, calls * 100))
        })
        .unwrap();
        assert_eq!(last, 5);
        assert_eq!(stats.samples, 3);
        assert_eq!(stats.median, 400);
    }
}
