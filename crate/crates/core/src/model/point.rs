use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelError;

/// Labelled point on the chain. `O` is the ground reference; the letters
/// I, J, K and L are not used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum JointPointId {
    O,
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    M,
    N,
    P,
    Q,
    R,
    S,
    T,
}

/// Joint type of a labelled point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JointKind {
    /// Actuated revolute joint.
    PinMotor,
    /// Rigid coupling.
    Fixed,
}

impl JointPointId {
    /// All sixteen points in chain order, from ground to the wrist tip.
    pub const ALL: [JointPointId; 16] = [
        Self::O,
        Self::A,
        Self::B,
        Self::C,
        Self::D,
        Self::E,
        Self::F,
        Self::G,
        Self::H,
        Self::M,
        Self::N,
        Self::P,
        Self::Q,
        Self::R,
        Self::S,
        Self::T,
    ];

    /// Position in [`JointPointId::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::O => "O",
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::D => "D",
            Self::E => "E",
            Self::F => "F",
            Self::G => "G",
            Self::H => "H",
            Self::M => "M",
            Self::N => "N",
            Self::P => "P",
            Self::Q => "Q",
            Self::R => "R",
            Self::S => "S",
            Self::T => "T",
        }
    }

    /// `None` for the ground reference `O` and for the tip `T`.
    pub fn kind(self) -> Option<JointKind> {
        use JointPointId::*;
        match self {
            A | C | E | G | M | P | R => Some(JointKind::PinMotor),
            B | D | F | H | N | Q | S => Some(JointKind::Fixed),
            O | T => None,
        }
    }
}

impl fmt::Display for JointPointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for JointPointId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|p| p.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ModelError::UnknownPoint(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_labels_without_i_to_l() {
        assert_eq!(JointPointId::ALL.len(), 16);
        for missing in ["I", "J", "K", "L"] {
            assert!(missing.parse::<JointPointId>().is_err());
        }
        for (i, p) in JointPointId::ALL.iter().enumerate() {
            assert_eq!(p.index(), i);
            assert_eq!(p.label().parse::<JointPointId>().unwrap(), *p);
        }
    }

    #[test]
    fn pin_motor_and_fixed_sets() {
        let pins: String = JointPointId::ALL
            .iter()
            .filter(|p| p.kind() == Some(JointKind::PinMotor))
            .map(|p| p.label())
            .collect();
        let fixed: String = JointPointId::ALL
            .iter()
            .filter(|p| p.kind() == Some(JointKind::Fixed))
            .map(|p| p.label())
            .collect();
        assert_eq!(pins, "ACEGMPR");
        assert_eq!(fixed, "BDFHNQS");
        assert_eq!(JointPointId::O.kind(), None);
    }
}
