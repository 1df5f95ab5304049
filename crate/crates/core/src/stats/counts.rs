use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

/// Click and coincidence tallies. Coincidences are per pulse: one time bin
/// per laser pulse.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountsSummary {
    pub n_pulses: u64,
    pub idler_clicks: u64,
    pub signal1_clicks: u64,
    pub signal2_clicks: u64,
    pub two_fold_1i: u64,
    pub two_fold_2i: u64,
    pub three_fold_12i: u64,
}

impl CountsSummary {
    /// Ordering invariants every tally must satisfy.
    pub fn is_consistent(&self) -> bool {
        let n = self.n_pulses;
        self.three_fold_12i <= self.two_fold_1i.min(self.two_fold_2i)
            && self.two_fold_1i <= self.idler_clicks.min(self.signal1_clicks)
            && self.two_fold_2i <= self.idler_clicks.min(self.signal2_clicks)
            && [self.idler_clicks, self.signal1_clicks, self.signal2_clicks]
                .iter()
                .all(|&c| c <= n)
    }

    pub(crate) fn record(&mut self, idler: bool, signal1: bool, signal2: bool) {
        self.idler_clicks += idler as u64;
        self.signal1_clicks += signal1 as u64;
        self.signal2_clicks += signal2 as u64;
        self.two_fold_1i += (idler && signal1) as u64;
        self.two_fold_2i += (idler && signal2) as u64;
        self.three_fold_12i += (idler && signal1 && signal2) as u64;
    }
}

impl AddAssign for CountsSummary {
    fn add_assign(&mut self, o: Self) {
        self.n_pulses += o.n_pulses;
        self.idler_clicks += o.idler_clicks;
        self.signal1_clicks += o.signal1_clicks;
        self.signal2_clicks += o.signal2_clicks;
        self.two_fold_1i += o.two_fold_1i;
        self.two_fold_2i += o.two_fold_2i;
        self.three_fold_12i += o.three_fold_12i;
    }
}

impl Add for CountsSummary {
    type Output = Self;

    fn add(mut self, o: Self) -> Self {
        self += o;
        self
    }
}
