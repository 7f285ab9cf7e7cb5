//! Structure-constant Lie algebras over `Q` and the type-A family realized
//! by traceless matrices, together with the subspace predicates (subalgebra,
//! isotropic, coisotropic, Lagrangian) used throughout.

use num::Zero;

use crate::error::{Error, Result};
use crate::exactlin::{rat, Mat, Rat, Subspace};

/// A finite-dimensional Lie algebra given by its structure constants in a
/// fixed basis, plus the Gram matrix of an invariant symmetric form.
#[derive(Clone)]
pub struct LieAlgebra {
    dim: usize,
    /// `table[a][b]` = coordinates of `[b_a, b_b]`.
    table: Vec<Vec<Vec<Rat>>>,
    gram: Mat,
}

impl LieAlgebra {
    pub fn new(table: Vec<Vec<Vec<Rat>>>, gram: Mat) -> Self {
        let dim = table.len();
        assert!(table.iter().all(|r| r.len() == dim && r.iter().all(|v| v.len() == dim)));
        assert_eq!(gram.rows(), dim);
        assert_eq!(gram.cols(), dim);
        LieAlgebra { dim, table, gram }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn basis_bracket(&self, a: usize, b: usize) -> &[Rat] {
        &self.table[a][b]
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![Rat::zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa * yb;
                for (o, t) in out.iter_mut().zip(&self.table[a][b]) {
                    if !t.is_zero() {
                        *o += &c * t;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad x : v -> [x, v]` acting on column vectors.
    pub fn ad(&self, x: &[Rat]) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for b in 0..self.dim {
                for (i, t) in self.table[a][b].iter().enumerate() {
                    if !t.is_zero() {
                        m[(i, b)] += xa * t;
                    }
                }
            }
        }
        m
    }

    pub fn form(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        let basis = s.basis_vectors();
        basis
            .iter()
            .enumerate()
            .all(|(i, x)| basis[..i].iter().all(|y| s.contains_vector(&self.bracket(x, y))))
    }

    /// Span of all brackets of elements of `s`: the derived subalgebra when
    /// `s` is a subalgebra.
    pub fn derived(&self, s: &Subspace) -> Subspace {
        let basis = s.basis_vectors();
        let mut rows = Vec::new();
        for (i, x) in basis.iter().enumerate() {
            for y in &basis[..i] {
                rows.push(self.bracket(x, y));
            }
        }
        Subspace::from_rows(self.dim, rows)
    }

    /// `{x in within : [x, s] ⊆ s}`, computed as the kernel of the map
    /// sending `x` to the images of `[x, s_b]` in the quotient by `s`.
    pub fn normalizer_in(&self, s: &Subspace, within: &Subspace) -> Subspace {
        let q = s.quotient_map();
        let wb = within.basis_vectors();
        let sb = s.basis_vectors();
        if wb.is_empty() {
            return Subspace::zero(self.dim);
        }
        let mut rows: Vec<Vec<Rat>> = vec![Vec::with_capacity(wb.len()); q.rows() * sb.len()];
        for x in &wb {
            for (bi, y) in sb.iter().enumerate() {
                let img = q.mul_vec(&self.bracket(x, y));
                for (k, v) in img.into_iter().enumerate() {
                    rows[bi * q.rows() + k].push(v);
                }
            }
        }
        let sys = if rows.is_empty() {
            Mat::zeros(0, wb.len())
        } else {
            Mat::from_rows(rows)
        };
        let ker = sys.kernel();
        let gens: Vec<Vec<Rat>> = ker
            .iter_rows()
            .map(|c| {
                let mut v = vec![Rat::zero(); self.dim];
                for (ci, w) in c.iter().zip(&wb) {
                    if !ci.is_zero() {
                        for (vj, wj) in v.iter_mut().zip(w) {
                            *vj += ci * wj;
                        }
                    }
                }
                v
            })
            .collect();
        Subspace::from_rows(self.dim, gens)
    }

    pub fn perp(&self, s: &Subspace) -> Subspace {
        s.perp(&self.gram).expect("invariant form is symmetric")
    }

    pub fn is_isotropic(&self, s: &Subspace) -> bool {
        self.perp(s).contains(s)
    }

    pub fn is_coisotropic(&self, s: &Subspace) -> bool {
        s.contains(&self.perp(s))
    }

    pub fn is_lagrangian(&self, s: &Subspace) -> bool {
        self.perp(s) == *s
    }

    /// Checks antisymmetry, the Jacobi identity, and invariance of the form
    /// on every basis pair/triple. Quadratic-to-cubic in the dimension; meant
    /// for small ranks and for tests.
    pub fn verify_structure(&self) -> Result<()> {
        if !self.gram.is_symmetric() {
            return Err(Error::NonSymmetricForm);
        }
        let n = self.dim;
        let e = |i: usize| {
            let mut v = vec![Rat::zero(); n];
            v[i] = rat(1);
            v
        };
        for a in 0..n {
            for b in 0..n {
                let ab = self.bracket(&e(a), &e(b));
                let ba = self.bracket(&e(b), &e(a));
                if ab.iter().zip(&ba).any(|(x, y)| !(x + y).is_zero()) {
                    return Err(Error::TheoryViolation(format!(
                        "bracket not antisymmetric at basis pair ({a}, {b})"
                    )));
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let mut j = self.bracket(&e(a), &self.bracket(&e(b), &e(c)));
                    let t2 = self.bracket(&e(b), &self.bracket(&e(c), &e(a)));
                    let t3 = self.bracket(&e(c), &self.bracket(&e(a), &e(b)));
                    for ((x, y), z) in j.iter_mut().zip(&t2).zip(&t3) {
                        *x += y;
                        *x += z;
                    }
                    if j.iter().any(|x| !x.is_zero()) {
                        return Err(Error::TheoryViolation(format!(
                            "Jacobi identity fails at basis triple ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let lhs = self.form(&self.bracket(&e(a), &e(b)), &e(c));
                    let rhs = self.form(&e(a), &self.bracket(&e(b), &e(c)));
                    if lhs != rhs {
                        return Err(Error::TheoryViolation(format!(
                            "form not invariant at basis triple ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Test hook: corrupt one structure constant. The verification batteries
    /// use this to prove they can detect a broken bracket table.
    pub fn corrupt_entry(&mut self, a: usize, b: usize, i: usize, delta: Rat) {
        self.table[a][b][i] += delta;
    }
}

/// Root system data for `sl(rank+1)` together with its matrix realization.
///
/// Basis order: Cartan generators `H_1..H_rank` (`H_i = E_ii - E_{i+1,i+1}`),
/// then a root vector `E_β` per positive root sorted by height then
/// lexicographically on simple-root coordinates, then the negative root
/// vectors in the same order. The invariant form is the trace form.
#[derive(Clone)]
pub struct RootDatum {
    rank: usize,
    cartan: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, height-then-lex order.
    pos_roots: Vec<Vec<i64>>,
    algebra: LieAlgebra,
    /// Each basis element as a traceless `(rank+1) x (rank+1)` matrix.
    realization: Vec<Mat>,
}

impl RootDatum {
    pub fn type_a(rank: usize) -> Result<RootDatum> {
        if rank == 0 {
            return Err(Error::RankOutOfRange);
        }
        let n = rank + 1;
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        if i == j {
                            2
                        } else if i.abs_diff(j) == 1 {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();

        // positive roots ε_i - ε_j (i < j) have simple coordinates 1 on i..j
        let mut pos_roots = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut c = vec![0i64; rank];
                for s in i..j {
                    c[s] = 1;
                }
                pos_roots.push(c);
            }
        }
        pos_roots.sort_by_key(|c| (c.iter().sum::<i64>(), c.clone()));

        let unit = |i: usize, j: usize| {
            let mut m = Mat::zeros(n, n);
            m[(i, j)] = rat(1);
            m
        };
        let span_of = |c: &[i64]| {
            // recover (i, j) from the coordinate vector
            let i = c.iter().position(|&x| x == 1).unwrap();
            let j = c.iter().rposition(|&x| x == 1).unwrap() + 1;
            (i, j)
        };
        let mut realization = Vec::new();
        for i in 0..rank {
            let mut h = Mat::zeros(n, n);
            h[(i, i)] = rat(1);
            h[(i + 1, i + 1)] = rat(-1);
            realization.push(h);
        }
        for c in &pos_roots {
            let (i, j) = span_of(c);
            realization.push(unit(i, j));
        }
        for c in &pos_roots {
            let (i, j) = span_of(c);
            realization.push(unit(j, i));
        }

        let dim = realization.len();
        let n_pos = pos_roots.len();
        let coords_of = |m: &Mat| -> Vec<Rat> {
            let mut v = vec![Rat::zero(); dim];
            // diagonal part in the H basis via partial sums
            let mut acc = Rat::zero();
            for k in 0..rank {
                acc += &m[(k, k)];
                v[k] = acc.clone();
            }
            for (r, c) in pos_roots.iter().enumerate() {
                let (i, j) = span_of(c);
                v[rank + r] = m[(i, j)].clone();
                v[rank + n_pos + r] = m[(j, i)].clone();
            }
            v
        };

        let commutator = |a: &Mat, b: &Mat| {
            let ab = a.mul(b);
            let ba = b.mul(a);
            Mat::from_fn(n, n, |i, j| &ab[(i, j)] - &ba[(i, j)])
        };
        let table: Vec<Vec<Vec<Rat>>> = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| coords_of(&commutator(&realization[a], &realization[b])))
                    .collect()
            })
            .collect();
        let trace = |m: &Mat| (0..n).map(|i| m[(i, i)].clone()).sum::<Rat>();
        let gram = Mat::from_fn(dim, dim, |a, b| trace(&realization[a].mul(&realization[b])));

        Ok(RootDatum { rank, cartan, pos_roots, algebra: LieAlgebra::new(table, gram), realization })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn num_pos_roots(&self) -> usize {
        self.pos_roots.len()
    }

    pub fn pos_roots(&self) -> &[Vec<i64>] {
        &self.pos_roots
    }

    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.pos_roots.iter().position(|c| c == coords)
    }

    /// Basis index of `H_i` (`i` in `0..rank`).
    pub fn h_index(&self, i: usize) -> usize {
        assert!(i < self.rank);
        i
    }

    /// Basis index of the root vector for the `r`-th positive root; negative
    /// when `positive` is false.
    pub fn root_vector_index(&self, r: usize, positive: bool) -> usize {
        assert!(r < self.pos_roots.len());
        if positive {
            self.rank + r
        } else {
            self.rank + self.pos_roots.len() + r
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim()];
        v[i] = rat(1);
        v
    }

    /// Ambient coordinates of the coroot-form element `H_α` for the root with
    /// the given simple coordinates; linear in the coordinates.
    pub fn h_of_root(&self, coords: &[i64]) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim()];
        for (i, &c) in coords.iter().enumerate() {
            v[i] = rat(c);
        }
        v
    }

    /// Value `β(h)` for `h` in the Cartan span (coordinates on `H_1..H_rank`
    /// read off the ambient vector) and a root in simple coordinates.
    pub fn root_value(&self, beta: &[i64], h: &[Rat]) -> Rat {
        let mut out = Rat::zero();
        for (j, &bj) in beta.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            for (i, hi) in h.iter().take(self.rank).enumerate() {
                out += rat(bj * self.cartan[j][i]) * hi;
            }
        }
        out
    }

    /// The full Cartan subalgebra as a subspace.
    pub fn cartan_subspace(&self) -> Subspace {
        Subspace::from_rows(self.dim(), (0..self.rank).map(|i| self.basis_vector(i)).collect())
    }

    pub fn realization(&self, i: usize) -> &Mat {
        &self.realization[i]
    }
}
