//! Weyl group combinatorics (reduced words, lengths, minimal coset
//! representatives, longest elements) plus exact adjoint-group elements
//! acting on the algebra: Weyl representatives, unipotent exponentials and
//! torus elements, all verified to preserve bracket and form.

use std::collections::HashMap;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{format_rat, parse_rat, pow_i, rat, Mat, Rat, Subspace};
use crate::liealg::{LieAlgebra, RootDatum};

pub const DEFAULT_WEYL_BOUND: usize = 3_628_800;

type ActionMat = Vec<Vec<i64>>;

/// A finite Weyl group enumerated by breadth-first closure over the simple
/// reflections. Element 0 is the identity; `words[i]` is the ShortLex-minimal
/// reduced word of element `i`, and the action is stored as an integer matrix
/// on simple-root coordinates.
pub struct WeylGroup {
    rank: usize,
    cartan: Vec<Vec<i64>>,
    words: Vec<Vec<usize>>,
    mats: Vec<ActionMat>,
    index: HashMap<ActionMat, usize>,
}

fn mat_id(rank: usize) -> ActionMat {
    (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &ActionMat, b: &ActionMat) -> ActionMat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

impl WeylGroup {
    pub fn build(datum: &RootDatum, bound: usize) -> Result<WeylGroup> {
        Self::build_from_cartan(datum.cartan().to_vec(), bound)
    }

    pub fn build_from_cartan(cartan: Vec<Vec<i64>>, bound: usize) -> Result<WeylGroup> {
        let rank = cartan.len();
        // s_i on simple-root coordinates: v -> v − (Σ_j cartan[i][j] v_j) e_i
        let refl: Vec<ActionMat> = (0..rank)
            .map(|i| {
                let mut m = mat_id(rank);
                for j in 0..rank {
                    m[i][j] -= cartan[i][j];
                }
                m
            })
            .collect();

        let mut words = vec![vec![]];
        let mut mats = vec![mat_id(rank)];
        let mut index = HashMap::new();
        index.insert(mats[0].clone(), 0usize);
        // FIFO over elements already in ShortLex order, extending words on the
        // right by ascending generator index, yields ShortLex-minimal words
        let mut head = 0;
        while head < words.len() {
            for i in 0..rank {
                let m = mat_mul(&mats[head], &refl[i]);
                if !index.contains_key(&m) {
                    if words.len() >= bound {
                        return Err(Error::WeylBoundExceeded(bound));
                    }
                    let mut w = words[head].clone();
                    w.push(i);
                    index.insert(m.clone(), words.len());
                    words.push(w);
                    mats.push(m);
                }
            }
            head += 1;
        }
        Ok(WeylGroup { rank, cartan, words, mats, index })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.words.len()
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.words[w]
    }

    pub fn length(&self, w: usize) -> usize {
        self.words[w].len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn simple_reflection(&self, i: usize) -> usize {
        self.element_of_word(&[i])
    }

    pub fn element_of_word(&self, word: &[usize]) -> usize {
        let mut m = mat_id(self.rank);
        for &i in word {
            let s = {
                let mut s = mat_id(self.rank);
                for j in 0..self.rank {
                    s[i][j] -= self.cartan[i][j];
                }
                s
            };
            m = mat_mul(&m, &s);
        }
        self.index[&m]
    }

    /// `a ∘ b`: apply `b` first.
    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.index[&mat_mul(&self.mats[a], &self.mats[b])]
    }

    pub fn inverse(&self, w: usize) -> usize {
        let mut word: Vec<usize> = self.words[w].clone();
        word.reverse();
        self.element_of_word(&word)
    }

    /// Image of a root (simple-root coordinates) under the element.
    pub fn act_on_root(&self, w: usize, coords: &[i64]) -> Vec<i64> {
        self.mats[w].iter().map(|row| row.iter().zip(coords).map(|(a, c)| a * c).sum()).collect()
    }

    /// If `w(α_i)` is again a simple root, its index.
    pub fn simple_image(&self, w: usize, i: usize) -> Option<usize> {
        let mut c = vec![0i64; self.rank];
        c[i] = 1;
        let img = self.act_on_root(w, &c);
        let pos = img.iter().position(|&x| x == 1)?;
        if img.iter().enumerate().all(|(j, &x)| if j == pos { x == 1 } else { x == 0 }) {
            Some(pos)
        } else {
            None
        }
    }

    pub fn longest_element(&self) -> usize {
        (0..self.order()).max_by_key(|&w| self.length(w)).unwrap()
    }

    /// Elements of the standard parabolic subgroup `W_A`.
    pub fn parabolic_subgroup(&self, a: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0usize];
        let mut head = 0;
        while head < out.len() {
            for &i in a {
                let n = self.compose(out[head], self.simple_reflection(i));
                if !seen[n] {
                    seen[n] = true;
                    out.push(n);
                }
            }
            head += 1;
        }
        out
    }

    /// Minimal-length representatives of `W/W_A` (side `Left`, the set
    /// usually written `W^A`) or `W_A\W` (side `Right`, `^A W`).
    pub fn coset_reps(&self, a: &[usize], side: Side) -> Vec<usize> {
        (0..self.order())
            .filter(|&w| {
                a.iter().all(|&i| {
                    let s = self.simple_reflection(i);
                    let ext = match side {
                        Side::Left => self.compose(w, s),
                        Side::Right => self.compose(s, w),
                    };
                    self.length(ext) > self.length(w)
                })
            })
            .collect()
    }

    /// `(w_{0,A}, x_A)` where `w_{0,A}` is the longest element of `W_A` and
    /// `x_A = w_0 · w_{0,A}`.
    pub fn special_elements(&self, a: &[usize]) -> (usize, usize) {
        let w0a = self
            .parabolic_subgroup(a)
            .into_iter()
            .max_by_key(|&w| self.length(w))
            .unwrap();
        (w0a, self.compose(self.longest_element(), w0a))
    }

    /// `{-w_0(α_a) : a ∈ A}` as a sorted set of simple indices.
    pub fn minus_w0_of(&self, a: &[usize]) -> Vec<usize> {
        let w0 = self.longest_element();
        let mut out: Vec<usize> = a
            .iter()
            .map(|&i| {
                let mut c = vec![0i64; self.rank];
                c[i] = 1;
                let img = self.act_on_root(w0, &c);
                let neg: Vec<i64> = img.iter().map(|x| -x).collect();
                let pos = neg.iter().position(|&x| x == 1).expect("-w0 permutes simple roots");
                assert!(neg.iter().enumerate().all(|(j, &x)| if j == pos { x == 1 } else { x == 0 }));
                pos
            })
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

/// One generator record of a group-element word, applied left-to-right.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    Weyl(Vec<usize>),
    Exp(Vec<Rat>),
    Torus(Vec<Rat>),
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum GeneratorWire {
    Weyl(Vec<usize>),
    Exp(Vec<String>),
    Torus(Vec<String>),
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = match self {
            Generator::Weyl(w) => GeneratorWire::Weyl(w.clone()),
            Generator::Exp(v) => GeneratorWire::Exp(v.iter().map(format_rat).collect()),
            Generator::Torus(v) => GeneratorWire::Torus(v.iter().map(format_rat).collect()),
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = GeneratorWire::deserialize(d)?;
        let parse = |v: Vec<String>| -> std::result::Result<Vec<Rat>, D::Error> {
            v.iter()
                .map(|s| parse_rat(s).ok_or_else(|| D::Error::custom("bad rational literal")))
                .collect()
        };
        Ok(match wire {
            GeneratorWire::Weyl(w) => Generator::Weyl(w),
            GeneratorWire::Exp(v) => Generator::Exp(parse(v)?),
            GeneratorWire::Torus(v) => Generator::Torus(parse(v)?),
        })
    }
}

/// An exact automorphism of the algebra, remembered together with the word
/// of generators that built it.
#[derive(Clone, Debug)]
pub struct GroupElement {
    matrix: Mat,
    word: Vec<Generator>,
}

impl GroupElement {
    pub fn identity(dim: usize) -> GroupElement {
        GroupElement { matrix: Mat::identity(dim), word: vec![] }
    }

    /// `exp(ad x)` for `ad x` nilpotent; the exact finite exponential series.
    pub fn exp_ad(g: &LieAlgebra, x: &[Rat]) -> Result<GroupElement> {
        let a = g.ad(x);
        let n = g.dim();
        let mut out = Mat::identity(n);
        let mut term = Mat::identity(n);
        let mut k = 0usize;
        loop {
            term = term.mul(&a);
            k += 1;
            let fact: Rat = rat(1) / (1..=k as i64).map(rat).product::<Rat>();
            let mut zero = true;
            for i in 0..n {
                for j in 0..n {
                    if !term[(i, j)].is_zero() {
                        zero = false;
                        out[(i, j)] += &term[(i, j)] * &fact;
                    }
                }
            }
            if zero {
                break;
            }
            if k > n {
                return Err(Error::NotNilpotent);
            }
        }
        Ok(GroupElement { matrix: out, word: vec![Generator::Exp(x.to_vec())] })
    }

    /// The fixed representative `ṡ_i = exp(ad E_i) exp(−ad E_{−i}) exp(ad E_i)`
    /// extended over a word of simple indices.
    pub fn weyl_rep(datum: &RootDatum, word: &[usize]) -> GroupElement {
        let g = datum.algebra();
        let mut out = Mat::identity(g.dim());
        for &i in word {
            let r = datum.root_index(&unit_root(datum.rank(), i)).expect("simple root");
            let e = datum.basis_vector(datum.root_vector_index(r, true));
            let f: Vec<Rat> =
                datum.basis_vector(datum.root_vector_index(r, false)).iter().map(|x| -x).collect();
            let a = GroupElement::exp_ad(g, &e).expect("root vector is ad-nilpotent");
            let b = GroupElement::exp_ad(g, &f).expect("root vector is ad-nilpotent");
            out = out.mul(&a.matrix).mul(&b.matrix).mul(&a.matrix);
        }
        GroupElement { matrix: out, word: vec![Generator::Weyl(word.to_vec())] }
    }

    /// Adjoint-torus element with one nonzero coordinate per simple root:
    /// scales `E_{±β}` by `∏ tᵢ^{±βᵢ}` and fixes the Cartan.
    pub fn torus_element(datum: &RootDatum, coords: &[Rat]) -> Result<GroupElement> {
        if coords.len() != datum.rank() {
            return Err(Error::DimensionMismatch(coords.len(), datum.rank()));
        }
        if coords.iter().any(|t| t.is_zero()) {
            return Err(Error::ZeroTorusCoordinate);
        }
        let dim = datum.dim();
        let mut m = Mat::identity(dim);
        for (r, beta) in datum.pos_roots().iter().enumerate() {
            let mut t = Rat::one();
            for (i, &b) in beta.iter().enumerate() {
                t *= pow_i(&coords[i], b);
            }
            let p = datum.root_vector_index(r, true);
            let q = datum.root_vector_index(r, false);
            m[(p, p)] = t.clone();
            m[(q, q)] = t.recip();
        }
        Ok(GroupElement { matrix: m, word: vec![Generator::Torus(coords.to_vec())] })
    }

    /// Builds an element from a generator word, applied left-to-right.
    pub fn from_word(datum: &RootDatum, word: &[Generator]) -> Result<GroupElement> {
        let mut out = GroupElement::identity(datum.dim());
        for g in word {
            let next = match g {
                Generator::Weyl(w) => GroupElement::weyl_rep(datum, w),
                Generator::Exp(x) => GroupElement::exp_ad(datum.algebra(), x)?,
                Generator::Torus(t) => GroupElement::torus_element(datum, t)?,
            };
            out = out.compose(&next);
        }
        Ok(out)
    }

    /// Block-diagonal element `(a, b)` acting on a doubled algebra.
    pub fn pair(a: &GroupElement, b: &GroupElement) -> GroupElement {
        let n = a.matrix.rows();
        assert_eq!(n, b.matrix.rows());
        let m = Mat::from_fn(2 * n, 2 * n, |i, j| {
            if i < n && j < n {
                a.matrix[(i, j)].clone()
            } else if i >= n && j >= n {
                b.matrix[(i - n, j - n)].clone()
            } else {
                Rat::zero()
            }
        });
        let mut word = a.word.clone();
        word.extend(b.word.clone());
        GroupElement { matrix: m, word }
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn provenance(&self) -> &[Generator] {
        &self.word
    }

    /// `self` then `other` (matrix product `self · other` acting right-first
    /// ... stated precisely: `(self ∘ other)(v) = self(other(v))`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let mut word = self.word.clone();
        word.extend(other.word.clone());
        GroupElement { matrix: self.matrix.mul(&other.matrix), word }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { matrix: self.matrix.inverse().expect("group element invertible"), word: vec![] }
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.matrix.mul_vec(v)
    }

    pub fn apply_subspace(&self, s: &Subspace) -> Subspace {
        s.map_by(&self.matrix)
    }

    /// Exhaustive automorphism check: bracket and form preservation on every
    /// basis pair.
    pub fn verify(&self, g: &LieAlgebra) -> Result<()> {
        let n = g.dim();
        if self.matrix.rows() != n {
            return Err(Error::AmbientMismatch(self.matrix.rows(), n));
        }
        let e = |i: usize| {
            let mut v = vec![Rat::zero(); n];
            v[i] = rat(1);
            v
        };
        let images: Vec<Vec<Rat>> = (0..n).map(|i| self.apply(&e(i))).collect();
        for a in 0..n {
            for b in 0..n {
                let lhs = self.apply(g.basis_bracket(a, b));
                let rhs = g.bracket(&images[a], &images[b]);
                if lhs != rhs {
                    return Err(Error::TheoryViolation(format!(
                        "bracket not preserved at basis pair ({a}, {b})"
                    )));
                }
                if g.form(&images[a], &images[b]) != g.form(&e(a), &e(b)) {
                    return Err(Error::TheoryViolation(format!(
                        "form not preserved at basis pair ({a}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn unit_root(rank: usize, i: usize) -> Vec<i64> {
    let mut c = vec![0i64; rank];
    c[i] = 1;
    c
}
