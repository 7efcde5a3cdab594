//! Right-censored paired data: product-limit estimation and the
//! Mann-Whitney effect of the two margins.

mod estimators;
mod mann_whitney;

pub use estimators::{censoring_km, kaplan_meier, nelson_aalen, MarginalFit};
pub use mann_whitney::{
    mw_effect, mw_fit, mw_influence, mw_statistic, mw_variance, variance_of, MannWhitney, MwFit,
};

use crate::groups::{GroupAction, GroupElement, GroupKind};

/// Two possibly censored times observed on the same unit.
///
/// `event_j` is `true` when `time_j` is an event time and `false` when it is
/// a censoring time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensoredPairedObservation {
    pub time1: f64,
    pub event1: bool,
    pub time2: f64,
    pub event2: bool,
}

impl CensoredPairedObservation {
    pub fn new(time1: f64, event1: bool, time2: f64, event2: bool) -> Self {
        Self {
            time1,
            event1,
            time2,
            event2,
        }
    }

    pub fn time(&self, margin: Margin) -> f64 {
        match margin {
            Margin::First => self.time1,
            Margin::Second => self.time2,
        }
    }

    pub fn event(&self, margin: Margin) -> bool {
        match margin {
            Margin::First => self.event1,
            Margin::Second => self.event2,
        }
    }
}

impl GroupAction for CensoredPairedObservation {
    const NAME: &'static str = "censored pairs";

    fn supports(kind: GroupKind) -> bool {
        kind == GroupKind::Exchange
    }

    #[inline]
    fn act_unchecked(&self, element: &GroupElement) -> Self {
        match *element {
            GroupElement::Exchange { swap: true } => Self {
                time1: self.time2,
                event1: self.event2,
                time2: self.time1,
                event2: self.event1,
            },
            _ => *self,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Margin {
    First,
    Second,
}

impl Margin {
    pub fn index(self) -> usize {
        match self {
            Margin::First => 1,
            Margin::Second => 2,
        }
    }

    pub fn other(self) -> Margin {
        match self {
            Margin::First => Margin::Second,
            Margin::Second => Margin::First,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SurvivalError {
    #[error("degenerate: no events in margin {margin}")]
    Degenerate { margin: usize },
    #[error("the sample is empty")]
    Empty,
    #[error("tau must be positive and finite")]
    InvalidTau,
}

/// Caps both times at `tau`; a time reaching `tau` becomes an event there.
pub fn truncate(obs: CensoredPairedObservation, tau: f64) -> CensoredPairedObservation {
    let cap = |t: f64, d: bool| if t >= tau { (tau, true) } else { (t, d) };
    let (time1, event1) = cap(obs.time1, obs.event1);
    let (time2, event2) = cap(obs.time2, obs.event2);
    CensoredPairedObservation {
        time1,
        event1,
        time2,
        event2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_examples() {
        let t = |x, d| truncate(CensoredPairedObservation::new(x, d, 0.1, true), 1.0);
        assert_eq!((t(2.0, false).time1, t(2.0, false).event1), (1.0, true));
        assert_eq!((t(0.5, true).time1, t(0.5, true).event1), (0.5, true));
        assert_eq!((t(0.5, false).time1, t(0.5, false).event1), (0.5, false));
        let once = t(2.0, false);
        assert_eq!(truncate(once, 1.0), once);
    }
}
