//! Integer lattices inside ℤ^n: membership, sums, intersections, equality.
//!
//! A lattice is presented by generator columns. Membership is decided by
//! exact integral solving against the generators, so all comparisons here
//! are statements about subgroups of ℤ^n, not just about ranks.

use num_bigint::BigInt;
use num_traits::Zero;

use super::snf::{kernel_basis, IntegralSolver};
use crate::matrix::SparseIntMatrix;

pub struct Lattice {
    gens: SparseIntMatrix,
    solver: IntegralSolver,
}

impl Lattice {
    pub fn new(gens: SparseIntMatrix) -> Self {
        let solver = IntegralSolver::new(&gens);
        Lattice { gens, solver }
    }

    /// The lattice spanned by the columns of `m`.
    pub fn image_of(m: &SparseIntMatrix) -> Self {
        Self::new(m.clone())
    }

    /// The kernel lattice of `m` (always saturated).
    pub fn kernel_of(m: &SparseIntMatrix) -> Self {
        Self::new(kernel_basis(m))
    }

    pub fn ambient_dim(&self) -> usize {
        self.gens.rows()
    }

    pub fn rank(&self) -> usize {
        self.solver.rank()
    }

    pub fn generators(&self) -> &SparseIntMatrix {
        &self.gens
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        self.solver.solve(v).is_some()
    }

    /// Whether `other ⊆ self` as subgroups of ℤ^n.
    pub fn contains(&self, other: &Lattice) -> bool {
        assert_eq!(self.ambient_dim(), other.ambient_dim());
        (0..other.gens.cols()).all(|j| self.contains_vector(&other.gens.column(j)))
    }

    /// Exact equality of subgroups, checked by mutual containment.
    pub fn equals(&self, other: &Lattice) -> bool {
        self.contains(other) && other.contains(self)
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::new(self.gens.hstack(&other.gens))
    }

    /// The intersection of two lattices, computed from the kernel of the
    /// stacked generator matrix `[A | -B]`.
    pub fn intersection(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient_dim(), other.ambient_dim());
        let stacked = self.gens.hstack(&other.gens.scale(&BigInt::from(-1)));
        let ker = kernel_basis(&stacked);
        let mut columns = Vec::new();
        for j in 0..ker.cols() {
            let full = ker.column(j);
            let mut coeffs = vec![BigInt::zero(); self.gens.cols()];
            coeffs.clone_from_slice(&full[..self.gens.cols()]);
            columns.push(self.gens.apply(&coeffs));
        }
        Lattice::new(SparseIntMatrix::from_columns(self.ambient_dim(), &columns))
    }
}
