//! Randomization groups acting on single observations.
//!
//! Three groups are shipped: rotations of the plane about the origin, sign
//! flips of each coordinate, and the exchange of the two components of a
//! censored pair. Every observation receives its own independent element;
//! the engine owns the element vector.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("{element:?} cannot act on {target}")]
    Mismatch { element: GroupKind, target: &'static str },
    #[error("cannot compose elements of different groups")]
    MixedKinds,
    #[error("the {0:?} group is not finite")]
    NotFinite(GroupKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Rotation,
    Mirror,
    Exchange,
}

impl GroupKind {
    /// Number of elements, `None` for the rotation group.
    pub fn order(self) -> Option<usize> {
        match self {
            GroupKind::Rotation => None,
            GroupKind::Mirror => Some(4),
            GroupKind::Exchange => Some(2),
        }
    }

    pub fn identity(self) -> GroupElement {
        match self {
            GroupKind::Rotation => GroupElement::Rotation { theta: 0.0 },
            GroupKind::Mirror => GroupElement::Mirror { eps_x: 1, eps_y: 1 },
            GroupKind::Exchange => GroupElement::Exchange { swap: false },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupElement {
    /// Counter-clockwise rotation by `theta ∈ [0, 2π)`.
    Rotation { theta: f64 },
    /// Coordinate sign flips, each `±1`.
    Mirror { eps_x: i8, eps_y: i8 },
    /// Swap of the two components of a pair.
    Exchange { swap: bool },
}

impl GroupElement {
    pub fn kind(&self) -> GroupKind {
        match self {
            GroupElement::Rotation { .. } => GroupKind::Rotation,
            GroupElement::Mirror { .. } => GroupKind::Mirror,
            GroupElement::Exchange { .. } => GroupKind::Exchange,
        }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        match (*self, *other) {
            (GroupElement::Rotation { theta: a }, GroupElement::Rotation { theta: b }) => {
                Ok(GroupElement::Rotation { theta: reduce_angle(a + b) })
            }
            (
                GroupElement::Mirror { eps_x: a, eps_y: b },
                GroupElement::Mirror { eps_x: c, eps_y: d },
            ) => Ok(GroupElement::Mirror { eps_x: a * c, eps_y: b * d }),
            (GroupElement::Exchange { swap: a }, GroupElement::Exchange { swap: b }) => {
                Ok(GroupElement::Exchange { swap: a ^ b })
            }
            _ => Err(GroupError::MixedKinds),
        }
    }
}

fn reduce_angle(theta: f64) -> f64 {
    let r = libm::fmod(theta, TAU);
    let r = if r < 0.0 { r + TAU } else { r };
    // fmod can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Uniform draw from the group.
pub fn sample_element<R: Rng + ?Sized>(kind: GroupKind, rng: &mut R) -> GroupElement {
    match kind {
        GroupKind::Rotation => GroupElement::Rotation {
            theta: reduce_angle(rng.random::<f64>() * TAU),
        },
        GroupKind::Mirror => {
            let bits: u8 = rng.random();
            GroupElement::Mirror {
                eps_x: if bits & 1 == 0 { 1 } else { -1 },
                eps_y: if bits & 2 == 0 { 1 } else { -1 },
            }
        }
        GroupKind::Exchange => GroupElement::Exchange { swap: rng.random() },
    }
}

/// All elements of a finite group.
pub fn enumerate_elements(kind: GroupKind) -> Result<Vec<GroupElement>, GroupError> {
    match kind {
        GroupKind::Rotation => Err(GroupError::NotFinite(kind)),
        GroupKind::Mirror => Ok(vec![
            GroupElement::Mirror { eps_x: 1, eps_y: 1 },
            GroupElement::Mirror { eps_x: 1, eps_y: -1 },
            GroupElement::Mirror { eps_x: -1, eps_y: 1 },
            GroupElement::Mirror { eps_x: -1, eps_y: -1 },
        ]),
        GroupKind::Exchange => Ok(vec![
            GroupElement::Exchange { swap: false },
            GroupElement::Exchange { swap: true },
        ]),
    }
}

/// Observation types a group can act on.
pub trait GroupAction: Sized {
    /// Short name used in mismatch errors.
    const NAME: &'static str;

    fn supports(kind: GroupKind) -> bool;

    /// Image of `self` under `element`. Implementations may assume
    /// `Self::supports(element.kind())`.
    fn act_unchecked(&self, element: &GroupElement) -> Self;

    fn act(&self, element: &GroupElement) -> Result<Self, GroupError> {
        if Self::supports(element.kind()) {
            Ok(self.act_unchecked(element))
        } else {
            Err(GroupError::Mismatch {
                element: element.kind(),
                target: Self::NAME,
            })
        }
    }
}

pub fn apply<T: GroupAction>(element: &GroupElement, obs: &T) -> Result<T, GroupError> {
    obs.act(element)
}

pub(crate) fn check_support<T: GroupAction>(kind: GroupKind) -> Result<(), GroupError> {
    if T::supports(kind) {
        Ok(())
    } else {
        Err(GroupError::Mismatch { element: kind, target: T::NAME })
    }
}
