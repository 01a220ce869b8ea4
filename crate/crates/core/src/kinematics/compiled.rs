use nalgebra::{SMatrix, Vector3};

use super::table::{link_nodes, ChainTable, Node, NodeExpr, SymTerm, Trig};
use crate::model::{InertiaModel, JointPointId, LinkInertia, LinkLengths, DOF, MOVING_LINKS};
use crate::{Joints, Real};

#[derive(Clone, Copy, Debug)]
struct Term<T> {
    coef: T,
    angle: Option<(usize, Trig)>,
}

impl<T: Real> Term<T> {
    fn compile(t: &SymTerm, lengths: &LinkLengths<T>) -> Self {
        let sum = t.lengths.iter().fold(T::zero(), |a, &i| a + lengths.l(i));
        Self {
            coef: T::lit(t.weight) * sum,
            angle: t.angle,
        }
    }

    #[inline]
    fn value(&self, theta: &Joints<T>) -> T {
        match self.angle {
            None => self.coef,
            Some((k, Trig::Sin)) => self.coef * theta[k].sin(),
            Some((k, Trig::Cos)) => self.coef * theta[k].cos(),
        }
    }

    /// Derivative with respect to the term's own angle.
    #[inline]
    fn slope(&self, theta: &Joints<T>) -> T {
        match self.angle {
            None => T::zero(),
            Some((k, Trig::Sin)) => self.coef * theta[k].cos(),
            Some((k, Trig::Cos)) => -self.coef * theta[k].sin(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledNode<T> {
    pos: [Vec<Term<T>>; 3],
    rate: [Vec<Term<T>>; 3],
}

impl<T: Real> CompiledNode<T> {
    fn compile(expr: &NodeExpr, lengths: &LinkLengths<T>) -> Self {
        let c = |terms: &[SymTerm]| terms.iter().map(|t| Term::compile(t, lengths)).collect();
        Self {
            pos: std::array::from_fn(|a| c(&expr.pos[a])),
            rate: std::array::from_fn(|a| c(&expr.rate[a])),
        }
    }

    pub(crate) fn position(&self, theta: &Joints<T>) -> Vector3<T> {
        Vector3::from_fn(|a, _| self.pos[a].iter().fold(T::zero(), |s, t| s + t.value(theta)))
    }

    pub(crate) fn jacobian(&self, theta: &Joints<T>) -> SMatrix<T, 3, DOF> {
        let mut j = SMatrix::<T, 3, DOF>::zeros();
        for (a, terms) in self.rate.iter().enumerate() {
            for t in terms {
                if let Some((k, _)) = t.angle {
                    j[(a, k)] += t.value(theta);
                }
            }
        }
        j
    }

    /// `∂(column k)/∂θ_k` for every k, i.e. the diagonal second partials.
    pub(crate) fn curvature(&self, theta: &Joints<T>) -> SMatrix<T, 3, DOF> {
        let mut h = SMatrix::<T, 3, DOF>::zeros();
        for (a, terms) in self.rate.iter().enumerate() {
            for t in terms {
                if let Some((k, _)) = t.angle {
                    h[(a, k)] += t.slope(theta);
                }
            }
        }
        h
    }
}

/// A moving link compiled against concrete lengths and masses.
#[derive(Clone, Debug)]
pub(crate) struct CompiledBody<T> {
    pub(crate) mass: T,
    /// Moment of inertia about an axis through the centre of mass
    /// perpendicular to the link.
    pub(crate) rotary_inertia: T,
    /// 0-based DOF that turns the link, if any.
    pub(crate) spin_dof: Option<usize>,
    pub(crate) com: CompiledNode<T>,
}

/// Chain kinematics compiled for a fixed set of link lengths.
///
/// Built once from a [`ChainTable`]; evaluation is allocation-free apart
/// from the returned values.
#[derive(Clone, Debug)]
pub struct ChainKinematics<T: Real> {
    lengths: LinkLengths<T>,
    nodes: Vec<CompiledNode<T>>,
}

impl<T: Real> ChainKinematics<T> {
    pub fn new(lengths: &LinkLengths<T>) -> Self {
        Self::with_table(ChainTable::canonical(), lengths)
    }

    pub fn with_table(table: &ChainTable, lengths: &LinkLengths<T>) -> Self {
        let nodes = (0..Node::COUNT)
            .map(|i| {
                let node = if i < 16 {
                    Node::Point(JointPointId::ALL[i])
                } else {
                    Node::RiserTop
                };
                CompiledNode::compile(table.node(node), lengths)
            })
            .collect();
        Self {
            lengths: *lengths,
            nodes,
        }
    }

    pub fn lengths(&self) -> &LinkLengths<T> {
        &self.lengths
    }

    pub(crate) fn node(&self, p: JointPointId) -> &CompiledNode<T> {
        &self.nodes[p.index()]
    }

    /// Top of the fixed `l13` riser between `R` and `S`.
    pub fn riser_top(&self, theta: &Joints<T>) -> Vector3<T> {
        self.nodes[Node::RiserTop.index()].position(theta)
    }

    pub fn position(&self, p: JointPointId, theta: &Joints<T>) -> Vector3<T> {
        self.node(p).position(theta)
    }

    pub fn jacobian(&self, p: JointPointId, theta: &Joints<T>) -> SMatrix<T, 3, DOF> {
        self.node(p).jacobian(theta)
    }

    pub fn velocity(&self, p: JointPointId, theta: &Joints<T>, omega: &Joints<T>) -> Vector3<T> {
        self.node(p).jacobian(theta) * omega
    }

    pub fn acceleration(
        &self,
        p: JointPointId,
        theta: &Joints<T>,
        omega: &Joints<T>,
        alpha: &Joints<T>,
    ) -> Vector3<T> {
        let n = self.node(p);
        n.jacobian(theta) * alpha + n.curvature(theta) * omega.component_mul(omega)
    }

    /// Compiles the moving links' centres of mass for `inertia`.
    pub(crate) fn bodies(&self, table: &ChainTable, inertia: &LinkInertia<T>) -> Vec<CompiledBody<T>> {
        (2..2 + MOVING_LINKS)
            .map(|link| {
                let (prox, dist) = link_nodes(link);
                let (a, b) = (table.node(prox), table.node(dist));
                let mass = inertia.mass(link);
                let (expr, rotary_inertia) = match inertia.model(link) {
                    InertiaModel::PointMassAtDistalEnd => (NodeExpr::blend(a, 0.0, b, 1.0), T::zero()),
                    InertiaModel::UniformSlenderRod => {
                        let l = self.lengths.l(link);
                        (NodeExpr::blend(a, 0.5, b, 0.5), mass * l * l / T::lit(12.0))
                    }
                };
                CompiledBody {
                    mass,
                    rotary_inertia,
                    spin_dof: super::table::link_spin_dof(link),
                    com: CompiledNode::compile(&expr, &self.lengths),
                }
            })
            .collect()
    }
}
