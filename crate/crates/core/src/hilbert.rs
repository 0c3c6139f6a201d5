//! Dense state vectors over an ordered-qubit tensor basis.
//!
//! The first declared node is the most significant bit of a basis index, so
//! for nodes `(r, s)` the basis runs `|00⟩, |01⟩, |10⟩, |11⟩` with `r` on the
//! left. Every module in the crate shares this convention.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statics::ConstraintMask;

pub type C64 = Complex64;

/// Tolerance for norm and probability checks.
pub const NORM_TOL: f64 = 1e-12;

/// Ordered list of node names fixing bit positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeOrder(Vec<String>);

impl NodeOrder {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for name in names {
            let name = name.into();
            if out.contains(&name) {
                return Err(Error::DuplicateNode(name));
            }
            out.push(name);
        }
        Ok(NodeOrder(out))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Hilbert-space dimension, `2^n`.
    pub fn dim(&self) -> usize {
        1usize << self.0.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn position(&self, node: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))
    }

    /// Shift of `node`'s bit inside a basis index.
    pub fn shift(&self, node: &str) -> Result<usize> {
        Ok(self.0.len() - 1 - self.position(node)?)
    }

    pub fn basis_index(&self, assignment: &Assignment) -> Result<usize> {
        if assignment.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: assignment.len(),
            });
        }
        Ok(assignment
            .bits()
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b)))
    }

    pub fn assignment(&self, index: usize) -> Assignment {
        Assignment::from_index(index, self.len())
    }
}

/// A Boolean value for every node, in node order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment(bits)
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        Assignment((0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidBitstring(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(Assignment)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Probability mass of one node's two values.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorDiag {
    pub node: String,
    pub p0: f64,
    pub p1: f64,
}

/// Complex amplitudes over the computational basis of a [`NodeOrder`].
///
/// Values produced by masking or splitting are not renormalized; call
/// [`StateVector::normalize`] when a unit vector is needed.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    order: NodeOrder,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn from_amplitudes(order: NodeOrder, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != order.dim() {
            return Err(Error::DimensionMismatch {
                left: order.dim(),
                right: amps.len(),
            });
        }
        Ok(StateVector { order, amps })
    }

    pub fn from_real(order: NodeOrder, amps: &[f64]) -> Result<Self> {
        Self::from_amplitudes(order, amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn zeros(order: NodeOrder) -> Self {
        let dim = order.dim();
        StateVector {
            order,
            amps: vec![C64::new(0.0, 0.0); dim],
        }
    }

    pub fn basis_state(order: NodeOrder, assignment: &Assignment) -> Result<Self> {
        let k = order.basis_index(assignment)?;
        let mut v = Self::zeros(order);
        v.amps[k] = C64::new(1.0, 0.0);
        Ok(v)
    }

    /// Equal-weight, equal-phase superposition of the given basis indices.
    pub fn uniform(order: NodeOrder, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::DegenerateState);
        }
        let mut v = Self::zeros(order);
        let a = 1.0 / (indices.len() as f64).sqrt();
        for &k in indices {
            if k >= v.amps.len() {
                return Err(Error::DimensionMismatch {
                    left: v.amps.len(),
                    right: k + 1,
                });
            }
            v.amps[k] = C64::new(a, 0.0);
        }
        Ok(v)
    }

    pub fn order(&self) -> &NodeOrder {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, assignment: &Assignment) -> Result<C64> {
        Ok(self.amps[self.order.basis_index(assignment)?])
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn check_compatible(&self, other: &StateVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        if self.order != other.order {
            return Err(Error::NodeOrderMismatch);
        }
        Ok(())
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.check_compatible(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn normalize(&self) -> Result<StateVector> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::DegenerateState);
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn scale(&self, factor: f64) -> StateVector {
        StateVector {
            order: self.order.clone(),
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn apply_mask(&self, mask: &ConstraintMask) -> Result<StateVector> {
        if mask.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: mask.dim(),
            });
        }
        let amps = self
            .amps
            .iter()
            .zip(mask.bits())
            .map(|(&a, &keep)| if keep { a } else { C64::new(0.0, 0.0) })
            .collect();
        Ok(StateVector {
            order: self.order.clone(),
            amps,
        })
    }

    /// Diagonal of the reduced density matrix of `node`.
    pub fn reduced_diag(&self, node: &str) -> Result<SectorDiag> {
        let shift = self.order.shift(node)?;
        let (mut p0, mut p1) = (0.0, 0.0);
        for (k, a) in self.amps.iter().enumerate() {
            if (k >> shift) & 1 == 0 {
                p0 += a.norm_sqr();
            } else {
                p1 += a.norm_sqr();
            }
        }
        Ok(SectorDiag {
            node: node.to_string(),
            p0,
            p1,
        })
    }

    /// Split into the components with `node = 0` and `node = 1`.
    pub fn sector_split(&self, node: &str) -> Result<(StateVector, StateVector)> {
        let shift = self.order.shift(node)?;
        let zero = C64::new(0.0, 0.0);
        let mut c0 = self.amps.clone();
        let mut c1 = self.amps.clone();
        for k in 0..self.amps.len() {
            if (k >> shift) & 1 == 0 {
                c1[k] = zero;
            } else {
                c0[k] = zero;
            }
        }
        Ok((
            StateVector {
                order: self.order.clone(),
                amps: c0,
            },
            StateVector {
                order: self.order.clone(),
                amps: c1,
            },
        ))
    }

    /// Indices with nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(k, _)| k)
            .collect()
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }
}

impl Add for &StateVector {
    type Output = Result<StateVector>;

    fn add(self, rhs: &StateVector) -> Result<StateVector> {
        self.check_compatible(rhs)?;
        Ok(StateVector {
            order: self.order.clone(),
            amps: self.amps.iter().zip(&rhs.amps).map(|(a, b)| a + b).collect(),
        })
    }
}
