use num::Zero;
use serde::{Deserialize, Serialize};

use super::mat::Mat;
use super::rat::Rat;
use crate::error::{Error, Result};

/// A linear subspace of `Q^n`, stored as the reduced row echelon form of a
/// spanning set. Two subspaces are equal iff their canonical bases are
/// identical, so `==` decides subspace equality.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_rows(ambient_dim: usize, rows: Vec<Vec<Rat>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ambient_dim, "row length vs ambient dimension");
        }
        let m = if rows.is_empty() { Mat::zeros(0, ambient_dim) } else { Mat::from_rows(rows) };
        Self::from_mat(m)
    }

    pub fn from_mat(m: Mat) -> Self {
        let ambient_dim = m.cols();
        let (basis, pivots) = m.rref();
        Subspace { ambient_dim, basis, pivots }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: Mat::zeros(0, ambient_dim), pivots: vec![] }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Mat::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rat>> {
        self.basis.iter_rows().map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains_vector(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        // reduce v against the RREF basis; membership iff the residue is 0
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (vj, bj) in v.iter_mut().zip(self.basis.row(i)) {
                    if !bj.is_zero() {
                        *vj -= &f * bj;
                    }
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis.iter_rows().all(|r| self.contains_vector(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        Subspace::from_mat(self.basis.vstack(&other.basis))
    }

    /// Intersection via the left null space of the stacked bases: if
    /// `(a, b)` satisfies `aᵀA = bᵀB`, that common value is in both spaces.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient_dim);
        }
        // solve [Aᵀ | -Bᵀ] (a; b) = 0, then take aᵀA
        let at = self.basis.transpose();
        let bt = other.basis.transpose();
        let da = self.dim();
        let sys = Mat::from_fn(self.ambient_dim, da + other.dim(), |i, j| {
            if j < da {
                at[(i, j)].clone()
            } else {
                -bt[(i, j - da)].clone()
            }
        });
        let ker = sys.kernel();
        let rows: Vec<Vec<Rat>> = ker
            .iter_rows()
            .map(|k| {
                let mut v = vec![Rat::zero(); self.ambient_dim];
                for (i, c) in k[..da].iter().enumerate() {
                    if !c.is_zero() {
                        for (vj, bj) in v.iter_mut().zip(self.basis.row(i)) {
                            *vj += c * bj;
                        }
                    }
                }
                v
            })
            .collect();
        Subspace::from_rows(self.ambient_dim, rows)
    }

    /// Orthogonal complement with respect to a symmetric bilinear form given
    /// by its Gram matrix in the ambient coordinates.
    pub fn perp(&self, gram: &Mat) -> Result<Subspace> {
        if gram.rows() != self.ambient_dim || gram.cols() != self.ambient_dim {
            return Err(Error::AmbientMismatch(gram.rows(), self.ambient_dim));
        }
        if !gram.is_symmetric() {
            return Err(Error::NonSymmetricForm);
        }
        Ok(Subspace::from_mat(self.basis.mul(gram).kernel()))
    }

    /// Coordinates of `v` in the canonical basis; errors if `v` is outside.
    pub fn coords_of(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(v.len(), self.ambient_dim));
        }
        let coords: Vec<Rat> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        // with an RREF basis the pivot coordinates determine the combination
        let mut rebuilt = vec![Rat::zero(); self.ambient_dim];
        for (c, row) in coords.iter().zip(self.basis.iter_rows()) {
            if !c.is_zero() {
                for (rj, bj) in rebuilt.iter_mut().zip(row) {
                    *rj += c * bj;
                }
            }
        }
        if rebuilt == v {
            Ok(coords)
        } else {
            Err(Error::NotInSubspace)
        }
    }

    /// Linear map with kernel exactly this subspace: the quotient projection
    /// `Q^n -> Q^n / self` written in the non-pivot coordinates.
    pub fn quotient_map(&self) -> Mat {
        let free: Vec<usize> = (0..self.ambient_dim).filter(|c| !self.pivots.contains(c)).collect();
        Mat::from_fn(free.len(), self.ambient_dim, |i, j| {
            let f = free[i];
            if j == f {
                num::One::one()
            } else if let Some(k) = self.pivots.iter().position(|&p| p == j) {
                -self.basis[(k, f)].clone()
            } else {
                Rat::zero()
            }
        })
    }

    /// Image of this subspace under the linear map `m` (acting on column
    /// vectors, so basis rows are pushed through `mᵀ`).
    pub fn map_by(&self, m: &Mat) -> Subspace {
        assert_eq!(m.cols(), self.ambient_dim);
        let rows: Vec<Vec<Rat>> = self.basis.iter_rows().map(|r| m.mul_vec(r)).collect();
        Subspace::from_rows(m.rows(), rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat::rat;

    fn sp(ambient: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_rows(
            ambient,
            rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(),
        )
    }

    #[test]
    fn canonical_equality() {
        let a = sp(3, &[&[1, 1, 0], &[0, 0, 1]]);
        let b = sp(3, &[&[2, 2, 2], &[1, 1, 3]]);
        assert_eq!(a, b);
    }

    #[test]
    fn sum_and_intersection_dims() {
        let a = sp(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let b = sp(4, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let s = a.sum(&b);
        let i = a.intersect(&b);
        assert_eq!(s.dim(), 3);
        assert_eq!(i, sp(4, &[&[0, 1, 0, 0]]));
        // modular law of dimensions
        assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
    }

    #[test]
    fn intersection_is_lower_bound() {
        let a = sp(3, &[&[1, 2, 3], &[0, 1, 1]]);
        let b = sp(3, &[&[1, 1, 2], &[1, 0, 1]]);
        let i = a.intersect(&b);
        assert!(a.contains(&i) && b.contains(&i));
    }

    #[test]
    fn perp_standard_form() {
        let a = sp(3, &[&[1, 0, 0]]);
        let p = a.perp(&Mat::identity(3)).unwrap();
        assert_eq!(p, sp(3, &[&[0, 1, 0], &[0, 0, 1]]));
        // double perp returns the original space for a nondegenerate form
        assert_eq!(p.perp(&Mat::identity(3)).unwrap(), a);
    }

    #[test]
    fn perp_rejects_asymmetric_gram() {
        let g = Mat::from_rows(vec![vec![rat(0), rat(1)], vec![rat(0), rat(0)]]);
        assert!(sp(2, &[&[1, 0]]).perp(&g).is_err());
    }

    #[test]
    fn membership_and_coords() {
        let a = sp(3, &[&[1, 0, 2], &[0, 1, -1]]);
        let v = [rat(3), rat(2), rat(4)];
        assert!(a.contains_vector(&v));
        assert_eq!(a.coords_of(&v).unwrap(), vec![rat(3), rat(2)]);
        assert!(!a.contains_vector(&[rat(0), rat(0), rat(1)]));
        assert!(a.coords_of(&[rat(0), rat(0), rat(1)]).is_err());
    }

    #[test]
    fn quotient_map_kernel_is_subspace() {
        let a = sp(4, &[&[1, 0, 1, 0], &[0, 1, 0, 2]]);
        let q = a.quotient_map();
        assert_eq!(q.rows(), 2);
        for r in a.basis().iter_rows() {
            assert!(q.mul_vec(r).iter().all(|x| x.is_zero()));
        }
        assert_eq!(q.rank(), 2);
    }

    #[test]
    fn serde_round_trip() {
        let a = sp(3, &[&[1, 2, 3]]);
        let s = serde_json::to_string(&a).unwrap();
        let b: Subspace = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
