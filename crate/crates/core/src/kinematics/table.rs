//! Symbolic position table of the chain.
//!
//! Every coordinate of every node is a sum of terms `w · (l_a + l_b + ...) ·
//! f(θ_k)` with `f ∈ {sin, cos}` or a constant. Because no term couples two
//! angles, the Jacobian column `k` of a node collects only the terms in
//! `θ_k` and cross second partials vanish.

use std::collections::BTreeMap;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use super::ledger::{Correction, CorrectionState, Scope, LEDGER};
use super::KinematicsError;
use crate::model::JointPointId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Trig {
    Sin,
    Cos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        ["x", "y", "z"][self as usize]
    }
}

/// One additive term of a coordinate expression.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTerm {
    /// 1-based length indices whose sum forms the magnitude.
    pub lengths: Vec<usize>,
    /// Sign and scale.
    pub weight: f64,
    /// 0-based DOF and function, or `None` for a constant offset.
    pub angle: Option<(usize, Trig)>,
}

impl SymTerm {
    fn constant(length: usize, weight: f64) -> Self {
        Self {
            lengths: vec![length],
            weight,
            angle: None,
        }
    }

    /// Partial derivative with respect to the term's own angle.
    fn differentiate(&self) -> Option<SymTerm> {
        let (k, trig) = self.angle?;
        Some(match trig {
            Trig::Sin => SymTerm {
                angle: Some((k, Trig::Cos)),
                ..self.clone()
            },
            Trig::Cos => SymTerm {
                weight: -self.weight,
                angle: Some((k, Trig::Sin)),
                ..self.clone()
            },
        })
    }

    fn matches(&self, key: &TermKey) -> bool {
        self.angle == Some((key.dof, key.trig)) && self.lengths == key.lengths
    }

    fn scaled(&self, s: f64) -> Self {
        Self {
            weight: self.weight * s,
            ..self.clone()
        }
    }
}

impl std::fmt::Display for SymTerm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = if self.weight < 0.0 { "-" } else { "+" };
        let scale = self.weight.abs();
        let mag = self
            .lengths
            .iter()
            .map(|l| format!("l{l}"))
            .collect::<Vec<_>>()
            .join(" + ");
        let mag = if self.lengths.len() > 1 {
            format!("({mag})")
        } else {
            mag
        };
        let scale = if scale == 1.0 {
            String::new()
        } else {
            format!("{scale}·")
        };
        match self.angle {
            None => write!(f, "{sign} {scale}{mag}"),
            Some((k, t)) => {
                let fun = if t == Trig::Sin { "sin" } else { "cos" };
                write!(f, "{sign} {scale}{mag} {fun} θ{}", k + 1)
            }
        }
    }
}

/// Identifies a term by magnitude and angle, ignoring sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TermKey {
    pub lengths: &'static [usize],
    pub dof: usize,
    pub trig: Trig,
}

/// A chain node: every labelled point plus the top of the `l13` riser,
/// which sits between `R` and `S` without a label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Point(JointPointId),
    RiserTop,
}

impl Node {
    pub const COUNT: usize = 17;

    pub fn index(self) -> usize {
        match self {
            Node::Point(p) => p.index(),
            Node::RiserTop => 16,
        }
    }
}

/// Position and rate expressions of one node.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NodeExpr {
    /// Position terms per axis.
    pub pos: [Vec<SymTerm>; 3],
    /// `∂p/∂θ_k` terms per axis; each term carries the DOF `k` of the
    /// Jacobian column it belongs to.
    pub rate: [Vec<SymTerm>; 3],
}

impl NodeExpr {
    fn push(&mut self, axis: Axis, term: SymTerm) {
        let terms = &mut self.pos[axis.index()];
        if let Some(t) = terms
            .iter_mut()
            .find(|t| t.angle == term.angle && t.weight == term.weight)
        {
            t.lengths.extend(term.lengths);
            t.lengths.sort_unstable();
        } else {
            terms.push(term);
        }
    }

    fn derive_rates(&mut self) {
        for a in 0..3 {
            self.rate[a] = self.pos[a].iter().filter_map(SymTerm::differentiate).collect();
        }
    }

    /// Weighted average of two nodes, term lists concatenated.
    pub fn blend(a: &NodeExpr, wa: f64, b: &NodeExpr, wb: f64) -> NodeExpr {
        let mix = |x: &[SymTerm], y: &[SymTerm]| -> Vec<SymTerm> {
            x.iter()
                .map(|t| t.scaled(wa))
                .chain(y.iter().map(|t| t.scaled(wb)))
                .filter(|t| t.weight != 0.0)
                .collect()
        };
        NodeExpr {
            pos: std::array::from_fn(|i| mix(&a.pos[i], &b.pos[i])),
            rate: std::array::from_fn(|i| mix(&a.rate[i], &b.rate[i])),
        }
    }

    /// DOFs (0-based) that appear in any rate term.
    pub fn dofs(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .rate
            .iter()
            .flatten()
            .filter_map(|t| t.angle.map(|(k, _)| k))
            .collect();
        d.sort_unstable();
        d.dedup();
        d
    }
}

/// Displacement contributed by one chain segment.
struct Segment {
    length: usize,
    /// `(axis, function, sign)`; `None` function means a fixed offset.
    parts: &'static [(Axis, Option<Trig>, f64)],
    dof: usize,
    /// Node reached at the end of the segment.
    end: Node,
}

use Axis::{X, Y, Z};
use JointPointId as J;

const fn seg(
    length: usize,
    dof: usize,
    parts: &'static [(Axis, Option<Trig>, f64)],
    end: Node,
) -> Segment {
    Segment {
        length,
        parts,
        dof,
        end,
    }
}

const C: Option<Trig> = Some(Trig::Cos);
const S: Option<Trig> = Some(Trig::Sin);

/// The canonical chain, ground to tip. `R` coincides with `Q`.
static SEGMENTS: [Segment; 16] = [
    seg(1, 0, &[(X, None, 1.0)], Node::Point(J::A)),
    seg(2, 0, &[(X, C, -1.0), (Y, S, 1.0)], Node::Point(J::B)),
    seg(3, 0, &[(Z, None, 1.0)], Node::Point(J::C)),
    seg(4, 1, &[(Y, C, 1.0), (Z, S, 1.0)], Node::Point(J::D)),
    seg(5, 0, &[(X, None, 1.0)], Node::Point(J::E)),
    seg(6, 2, &[(X, S, 1.0), (Z, C, 1.0)], Node::Point(J::F)),
    seg(7, 2, &[(X, S, 1.0), (Z, C, 1.0)], Node::Point(J::G)),
    seg(8, 3, &[(X, C, 1.0), (Z, S, 1.0)], Node::Point(J::H)),
    seg(9, 3, &[(X, C, 1.0), (Z, S, 1.0)], Node::Point(J::M)),
    seg(10, 4, &[(X, S, 1.0), (Z, C, 1.0)], Node::Point(J::N)),
    seg(11, 0, &[(Y, None, 1.0)], Node::Point(J::P)),
    seg(12, 5, &[(X, C, 1.0), (Y, S, 1.0)], Node::Point(J::Q)),
    seg(0, 0, &[], Node::Point(J::R)),
    seg(13, 0, &[(Z, None, 1.0)], Node::RiserTop),
    seg(14, 6, &[(Y, C, 1.0), (Z, S, 1.0)], Node::Point(J::S)),
    seg(15, 0, &[(X, None, -1.0)], Node::Point(J::T)),
];

/// DOF (0-based) that rotates moving link `i` (2..=15), or `None` for links
/// that only translate.
pub fn link_spin_dof(link: usize) -> Option<usize> {
    SEGMENTS
        .iter()
        .find(|s| s.length == link)
        .filter(|s| s.parts.iter().any(|p| p.1.is_some()))
        .map(|s| s.dof)
}

/// Proximal and distal node of moving link `i` (2..=15).
pub fn link_nodes(link: usize) -> (Node, Node) {
    let pos = SEGMENTS
        .iter()
        .position(|s| s.length == link)
        .expect("link index in 2..=15");
    let prox = SEGMENTS[..pos]
        .iter()
        .rev()
        .map(|s| s.end)
        .next()
        .unwrap_or(Node::Point(J::O));
    (prox, SEGMENTS[pos].end)
}

/// Symbolic expressions of every node, after applying a ledger selection.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainTable {
    nodes: Vec<NodeExpr>,
    reverted: Vec<&'static str>,
}

static CANONICAL: LazyLock<ChainTable> =
    LazyLock::new(|| ChainTable::build(&BTreeMap::new()).expect("canonical table builds"));

impl ChainTable {
    /// The fully corrected table.
    pub fn canonical() -> &'static ChainTable {
        &CANONICAL
    }

    /// Builds the table, reverting every ledger entry selected as
    /// [`CorrectionState::Printed`] to its printed form.
    pub fn build(selection: &BTreeMap<String, CorrectionState>) -> Result<Self, KinematicsError> {
        for id in selection.keys() {
            if !LEDGER.iter().any(|c| c.id == id) {
                return Err(KinematicsError::UnknownCorrection(id.clone()));
            }
        }
        let mut nodes = vec![NodeExpr::default(); Node::COUNT];
        let mut cur = NodeExpr::default();
        for s in &SEGMENTS {
            for &(axis, trig, sign) in s.parts {
                let term = match trig {
                    None => SymTerm::constant(s.length, sign),
                    Some(t) => SymTerm {
                        lengths: vec![s.length],
                        weight: sign,
                        angle: Some((s.dof, t)),
                    },
                };
                cur.push(axis, term);
            }
            nodes[s.end.index()] = cur.clone();
        }

        let reverted: Vec<&'static Correction> = LEDGER
            .iter()
            .filter(|c| selection.get(c.id) == Some(&CorrectionState::Printed))
            .collect();
        for c in reverted.iter().filter(|c| c.scope == Scope::Position) {
            apply(&mut nodes[c.point.index()].pos[c.axis.index()], c)?;
        }
        for n in nodes.iter_mut() {
            n.derive_rates();
        }
        for c in reverted.iter().filter(|c| c.scope == Scope::Rate) {
            apply(&mut nodes[c.point.index()].rate[c.axis.index()], c)?;
        }
        Ok(Self {
            nodes,
            reverted: reverted.iter().map(|c| c.id).collect(),
        })
    }

    pub fn node(&self, node: Node) -> &NodeExpr {
        &self.nodes[node.index()]
    }

    pub fn point(&self, p: JointPointId) -> &NodeExpr {
        self.node(Node::Point(p))
    }

    /// Ids of ledger entries reverted to their printed form.
    pub fn reverted(&self) -> &[&'static str] {
        &self.reverted
    }

    /// Human-readable position formula, e.g. `x_B = l1 - l2 cos θ1`.
    pub fn formula(&self, p: JointPointId, axis: Axis) -> String {
        let terms = &self.point(p).pos[axis.index()];
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            let s = terms.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
            s.strip_prefix("+ ").map(str::to_string).unwrap_or(s)
        };
        format!("{}_{} = {}", axis.label(), p.label(), body)
    }
}

fn apply(terms: &mut [SymTerm], c: &Correction) -> Result<(), KinematicsError> {
    let patch = c
        .patch
        .as_ref()
        .ok_or(KinematicsError::NotRevertible(c.id))?;
    let t = terms
        .iter_mut()
        .find(|t| t.matches(&patch.corrected))
        .ok_or(KinematicsError::PatchTargetMissing(c.id))?;
    t.lengths = patch.printed.lengths.to_vec();
    t.angle = Some((patch.printed.dof, patch.printed.trig));
    Ok(())
}

/// DOFs appearing in the canonical position formula of `p` (0-based).
pub fn point_dofs(p: JointPointId) -> Vec<usize> {
    ChainTable::canonical().point(p).dofs()
}
