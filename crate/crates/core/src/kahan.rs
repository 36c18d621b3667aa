/// Neumaier-compensated accumulator.
///
/// Used wherever a result must not depend on how panel contributions
/// happen to round: the adaptive drivers sort contributions into a fixed
/// order and push them through this accumulator, so reruns (and parallel
/// evaluation) reproduce the sum bit for bit.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
