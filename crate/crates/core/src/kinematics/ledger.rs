//! Corrections applied to the printed joint-point formulas.
//!
//! Each entry records a printed term that disagrees with the rest of the
//! model and the term the canonical chain uses instead. Entries with a
//! patch can be reverted to their printed form through the configuration
//! (`"corrections": {"<id>": "printed"}`), which is how the self-check suite
//! demonstrates that it detects an inconsistent model.

use serde::{Deserialize, Serialize};

use super::table::{Axis, TermKey, Trig};
use crate::model::JointPointId;

/// Which form of a ledger entry the chain uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionState {
    Corrected,
    Printed,
}

/// Whether an entry patches a position term or a `∂p/∂θ_k` term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Position,
    Rate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// The printed term contradicts a neighbouring block.
    ForcedByConsistency,
    /// The printed block cannot be patched term by term; the canonical
    /// value comes from differentiating the position formula.
    DerivedByDifferentiation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Patch {
    pub corrected: TermKey,
    pub printed: TermKey,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Correction {
    pub id: &'static str,
    pub point: JointPointId,
    pub axis: Axis,
    pub scope: Scope,
    pub printed: &'static str,
    pub corrected: &'static str,
    pub basis: Basis,
    pub reason: &'static str,
    /// Term-level edit, absent for entries that are documentation only.
    pub patch: Option<Patch>,
}

const fn key(lengths: &'static [usize], dof: usize, trig: Trig) -> TermKey {
    TermKey { lengths, dof, trig }
}

const fn dof_swap(lengths: &'static [usize], trig: Trig, corrected: usize, printed: usize) -> Option<Patch> {
    Some(Patch {
        corrected: key(lengths, corrected, trig),
        printed: key(lengths, printed, trig),
    })
}

const fn len_swap(
    dof: usize,
    trig: Trig,
    corrected: &'static [usize],
    printed: &'static [usize],
) -> Option<Patch> {
    Some(Patch {
        corrected: key(corrected, dof, trig),
        printed: key(printed, dof, trig),
    })
}

use Axis::{X, Y, Z};
use Basis::{DerivedByDifferentiation as Derived, ForcedByConsistency as Forced};
use JointPointId as J;
use Scope::{Position, Rate};
use Trig::{Cos, Sin};

const X_THETA1: &str = "the x velocity term l2 ω1 sin θ1 only follows from l2 cos θ1";

/// The corrections ledger.
pub static LEDGER: &[Correction] = &[
    Correction {
        id: "x_B",
        point: J::B,
        axis: X,
        scope: Position,
        printed: "x_B = l1 - l2 cos θ2",
        corrected: "x_B = l1 - l2 cos θ1",
        basis: Forced,
        reason: X_THETA1,
        patch: dof_swap(&[2], Cos, 0, 1),
    },
    Correction {
        id: "x_C",
        point: J::C,
        axis: X,
        scope: Position,
        printed: "x_C = l1 - l2 cos θ2",
        corrected: "x_C = l1 - l2 cos θ1",
        basis: Forced,
        reason: X_THETA1,
        patch: dof_swap(&[2], Cos, 0, 1),
    },
    Correction {
        id: "vx_C",
        point: J::C,
        axis: X,
        scope: Rate,
        printed: "v_xC = l1 ω1 sin θ1",
        corrected: "v_xC = l2 ω1 sin θ1",
        basis: Forced,
        reason: "l1 is a grounded offset and cannot contribute a rate term",
        patch: len_swap(0, Sin, &[2], &[1]),
    },
    Correction {
        id: "v_D",
        point: J::D,
        axis: Y,
        scope: Rate,
        printed: "v_yD = l2 ω1 sin θ1",
        corrected: "v_yD = l2 ω1 cos θ1 - l4 ω2 sin θ2",
        basis: Derived,
        reason: "printed block omits the θ2 term and uses the wrong function of θ1",
        patch: None,
    },
    Correction {
        id: "vy_F",
        point: J::F,
        axis: Y,
        scope: Rate,
        printed: "v_yF = l3 ω1 cos θ1 - l4 ω2 sin θ2",
        corrected: "v_yF = l2 ω1 cos θ1 - l4 ω2 sin θ2",
        basis: Forced,
        reason: "l3 is a fixed riser; y_F depends on θ1 through l2 only",
        patch: len_swap(0, Cos, &[2], &[3]),
    },
    Correction {
        id: "y_G",
        point: J::G,
        axis: Y,
        scope: Position,
        printed: "y_G = l2 sin θ1 + l1 cos θ2",
        corrected: "y_G = l2 sin θ1 + l4 cos θ2",
        basis: Forced,
        reason: "chain continuity with D and E, which carry l4 cos θ2",
        patch: len_swap(1, Cos, &[4], &[1]),
    },
    Correction {
        id: "z_G",
        point: J::G,
        axis: Z,
        scope: Position,
        printed: "z_G = l3 + l2 sin θ2 + (l6 + l7) cos θ3",
        corrected: "z_G = l3 + l4 sin θ2 + (l6 + l7) cos θ3",
        basis: Forced,
        reason: "chain continuity with D and E, which carry l4 sin θ2",
        patch: len_swap(1, Sin, &[4], &[2]),
    },
    Correction {
        id: "x_H",
        point: J::H,
        axis: X,
        scope: Position,
        printed: "x_H = ... + l4 cos θ4",
        corrected: "x_H = ... + l8 cos θ4",
        basis: Forced,
        reason: "the H velocity and z blocks use l8 for the θ4 link",
        patch: len_swap(3, Cos, &[8], &[4]),
    },
    Correction {
        id: "vx_H",
        point: J::H,
        axis: X,
        scope: Rate,
        printed: "v_xH = ... - l2 ω4 sin θ4",
        corrected: "v_xH = ... - l8 ω4 sin θ4",
        basis: Forced,
        reason: "the θ4 link of H has length l8",
        patch: len_swap(3, Sin, &[8], &[2]),
    },
    Correction {
        id: "x_N",
        point: J::N,
        axis: X,
        scope: Position,
        printed: "x_N = ... - l2 cos θ2 + ...",
        corrected: "x_N = ... - l2 cos θ1 + ...",
        basis: Forced,
        reason: X_THETA1,
        patch: dof_swap(&[2], Cos, 0, 1),
    },
    Correction {
        id: "z_N",
        point: J::N,
        axis: Z,
        scope: Position,
        printed: "z_N = ... + (l7 + l8) cos θ3 + ...",
        corrected: "z_N = ... + (l6 + l7) cos θ3 + ...",
        basis: Forced,
        reason: "the θ3 link spans l6 + l7 in every other block",
        patch: len_swap(2, Cos, &[6, 7], &[7, 8]),
    },
    Correction {
        id: "x_P",
        point: J::P,
        axis: X,
        scope: Position,
        printed: "x_P = ... - l2 cos θ2 + ...",
        corrected: "x_P = ... - l2 cos θ1 + ...",
        basis: Forced,
        reason: X_THETA1,
        patch: dof_swap(&[2], Cos, 0, 1),
    },
    Correction {
        id: "vy_P",
        point: J::P,
        axis: Y,
        scope: Rate,
        printed: "v_yP = l4 ω1 cos θ1 - l4 ω2 sin θ2",
        corrected: "v_yP = l2 ω1 cos θ1 - l4 ω2 sin θ2",
        basis: Forced,
        reason: "y_P depends on θ1 through l2 sin θ1",
        patch: len_swap(0, Cos, &[2], &[4]),
    },
    Correction {
        id: "vz_P",
        point: J::P,
        axis: Z,
        scope: Rate,
        printed: "v_zP = ... - l10 ω3 sin θ5",
        corrected: "v_zP = ... - l10 ω5 sin θ5",
        basis: Derived,
        reason: "rate index and angle index disagree; the term cannot be patched in place",
        patch: None,
    },
    Correction {
        id: "x_Q",
        point: J::Q,
        axis: X,
        scope: Position,
        printed: "x_Q = ... - l2 cos θ2 + ...",
        corrected: "x_Q = ... - l2 cos θ1 + ...",
        basis: Forced,
        reason: X_THETA1,
        patch: dof_swap(&[2], Cos, 0, 1),
    },
    Correction {
        id: "y_Q",
        point: J::Q,
        axis: Y,
        scope: Position,
        printed: "y_Q = ... + l12 sin θ3",
        corrected: "y_Q = ... + l12 sin θ6",
        basis: Forced,
        reason: "the Q velocity block carries l12 ω6 cos θ6",
        patch: dof_swap(&[12], Sin, 5, 2),
    },
    Correction {
        id: "vy_Q",
        point: J::Q,
        axis: Y,
        scope: Rate,
        printed: "v_yQ = l4 ω1 cos θ1 - ...",
        corrected: "v_yQ = l2 ω1 cos θ1 - ...",
        basis: Forced,
        reason: "y_Q depends on θ1 through l2 sin θ1",
        patch: len_swap(0, Cos, &[2], &[4]),
    },
    Correction {
        id: "az_Q",
        point: J::Q,
        axis: Z,
        scope: Rate,
        printed: "a_zQ = l4 α1 cos θ1 - l2 ω1² sin θ1 - ...",
        corrected: "a_zQ = -l4 α2 sin θ2 ... (derived)",
        basis: Derived,
        reason: "printed block carries θ1 terms absent from z_Q and omits the l10 terms",
        patch: None,
    },
    Correction {
        id: "x_R",
        point: J::R,
        axis: X,
        scope: Position,
        printed: "x_R = ... - l2 cos θ2 + ...",
        corrected: "x_R = ... - l2 cos θ1 + ...",
        basis: Forced,
        reason: X_THETA1,
        patch: dof_swap(&[2], Cos, 0, 1),
    },
    Correction {
        id: "vy_R",
        point: J::R,
        axis: Y,
        scope: Rate,
        printed: "v_yR = l4 ω1 cos θ1 - ...",
        corrected: "v_yR = l2 ω1 cos θ1 - ...",
        basis: Forced,
        reason: "y_R depends on θ1 through l2 sin θ1",
        patch: len_swap(0, Cos, &[2], &[4]),
    },
    Correction {
        id: "az_R",
        point: J::R,
        axis: Z,
        scope: Rate,
        printed: "a_zR = l4 α1 cos θ1 - l2 ω1² sin θ1 - ...",
        corrected: "a_zR = -l4 α2 sin θ2 ... (derived)",
        basis: Derived,
        reason: "printed block carries θ1 terms absent from z_R and omits the l10 terms",
        patch: None,
    },
    Correction {
        id: "x_S",
        point: J::S,
        axis: X,
        scope: Position,
        printed: "x_S = ... - l2 cos θ2 + ...",
        corrected: "x_S = ... - l2 cos θ1 + ...",
        basis: Forced,
        reason: X_THETA1,
        patch: dof_swap(&[2], Cos, 0, 1),
    },
    Correction {
        id: "vy_S",
        point: J::S,
        axis: Y,
        scope: Rate,
        printed: "v_yS = l4 ω1 cos θ1 - ...",
        corrected: "v_yS = l2 ω1 cos θ1 - ...",
        basis: Forced,
        reason: "y_S depends on θ1 through l2 sin θ1",
        patch: len_swap(0, Cos, &[2], &[4]),
    },
    Correction {
        id: "x_T",
        point: J::T,
        axis: X,
        scope: Position,
        printed: "x_T = l5 + l1 - l2 cos θ2 + ...",
        corrected: "x_T = l5 + l1 - l2 cos θ1 + ...",
        basis: Forced,
        reason: X_THETA1,
        patch: dof_swap(&[2], Cos, 0, 1),
    },
    Correction {
        id: "vy_T",
        point: J::T,
        axis: Y,
        scope: Rate,
        printed: "v_yT = l4 ω1 cos θ1 - ...",
        corrected: "v_yT = l2 ω1 cos θ1 - ...",
        basis: Forced,
        reason: "y_T depends on θ1 through l2 sin θ1",
        patch: len_swap(0, Cos, &[2], &[4]),
    },
];

/// Looks up a ledger entry by id.
pub fn correction(id: &str) -> Option<&'static Correction> {
    LEDGER.iter().find(|c| c.id == id)
}
