//! Seeded, deterministic samplers: Lagrangian subspaces of `z_S ⊕ z_T`,
//! small-integer vectors, and group-element words used by the verification
//! batteries and the CLI.

use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::double::{Double, GbdSystem};
use crate::error::{Error, Result};
use crate::exactlin::{rat, Rat, Subspace};
use crate::liealg::RootDatum;
use crate::weyl::GroupElement;

/// Seeded greedy isotropic completion: returns a Lagrangian subspace of
/// `z_S ⊕ z_T` for the restricted split form. Deterministic per seed.
pub fn sample_lagrangian_v(dbl: &Double, s: &[usize], t: &[usize], seed: u64) -> Result<Subspace> {
    let ps = dbl.parabolic_data(s);
    let pt = dbl.parabolic_data(t);
    let ambient = dbl.product(&ps.z, &pt.z);
    let k = ambient.dim();
    if k == 0 {
        return Ok(Subspace::zero(dbl.dim()));
    }
    if k % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "z_S ⊕ z_T has odd dimension {k}; |S| must equal |T|"
        )));
    }
    let basis = ambient.basis_vectors();
    let form = |a: &[Rat], b: &[Rat]| {
        let av = combine(&basis, a);
        let bv = combine(&basis, b);
        dbl.algebra().form(&av, &bv)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<Vec<Rat>> = Vec::new();
    'grow: while chosen.len() < k / 2 {
        for limit in [2i64, 3, 4, 6] {
            let mut candidates: Vec<Vec<i64>> = int_vectors(k, limit);
            candidates.shuffle(&mut rng);
            for cand in candidates {
                let v: Vec<Rat> = cand.iter().map(|&x| rat(x)).collect();
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                if !form(&v, &v).is_zero() {
                    continue;
                }
                if chosen.iter().any(|c| !form(&v, c).is_zero()) {
                    continue;
                }
                // independence of the already-chosen vectors
                let mut rows: Vec<Vec<Rat>> = chosen.clone();
                rows.push(v.clone());
                if Subspace::from_rows(k, rows).dim() != chosen.len() + 1 {
                    continue;
                }
                chosen.push(v);
                continue 'grow;
            }
        }
        return Err(Error::TheoryViolation(
            "isotropic completion stalled; no small-integer isotropic vector found".into(),
        ));
    }

    let rows: Vec<Vec<Rat>> = chosen.iter().map(|c| combine(&basis, c)).collect();
    let out = Subspace::from_rows(dbl.dim(), rows);
    debug_assert!(dbl.algebra().is_isotropic(&out));
    debug_assert_eq!(out.dim(), k / 2);
    Ok(out)
}

fn combine(basis: &[Vec<Rat>], coords: &[Rat]) -> Vec<Rat> {
    let dim = basis[0].len();
    let mut v = vec![Rat::zero(); dim];
    for (c, b) in coords.iter().zip(basis) {
        if !c.is_zero() {
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += c * bi;
            }
        }
    }
    v
}

fn int_vectors(len: usize, limit: i64) -> Vec<Vec<i64>> {
    let span = 2 * limit + 1;
    let total = (span as usize).pow(len as u32);
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push((idx % span as usize) as i64 - limit);
            idx /= span as usize;
        }
        out.push(v);
    }
    out
}

/// Deterministic stream of small rationals and vectors for point sampling.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn small_int(&mut self, limit: i64) -> i64 {
        self.rng.gen_range(-limit..=limit)
    }

    pub fn nonzero_int(&mut self, limit: i64) -> i64 {
        loop {
            let x = self.small_int(limit);
            if x != 0 {
                return x;
            }
        }
    }

    pub fn small_rat(&mut self, limit: i64) -> Rat {
        rat(self.small_int(limit))
    }

    pub fn nonzero_rat(&mut self, limit: i64) -> Rat {
        rat(self.nonzero_int(limit))
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.index(items.len())]
    }

    pub fn small_vector(&mut self, len: usize, limit: i64) -> Vec<Rat> {
        (0..len).map(|_| self.small_rat(limit)).collect()
    }
}

/// Tiny union-find over `n` indices.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, a: usize) -> usize {
        if self.parent[a] != a {
            let root = self.find(self.parent[a]);
            self.parent[a] = root;
        }
        self.parent[a]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Multiplicative matching classes for the common-normalizer torus of a
/// splitting: variables are the `2r` simple-root characters of a Cartan pair
/// `(h1, h2)`, merged by `h1^α = h2^{d1 α}` for `α ∈ S1` and
/// `h1^β = h2^{d2 β}` for `β ∈ S2`.
fn hh_classes(system: &GbdSystem, rank: usize) -> UnionFind {
    let mut uf = UnionFind::new(2 * rank);
    for (a, b) in system.quad1.triple.d_pairs() {
        uf.union(a, rank + b);
    }
    for (a, b) in system.quad2.triple.d_pairs() {
        uf.union(a, rank + b);
    }
    uf
}

/// Dimension of the common-normalizer torus: the number of free character
/// classes.
pub fn hh_torus_dim(datum: &RootDatum, system: &GbdSystem) -> usize {
    let rank = datum.rank();
    let mut uf = hh_classes(system, rank);
    let mut roots: Vec<usize> = (0..2 * rank).map(|i| uf.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// A seeded Cartan pair `(h1, h2)` whose adjoint action preserves both
/// splitting members: one nonzero rational per character class.
pub fn sample_hh_torus(
    dbl: &Double,
    system: &GbdSystem,
    sampler: &mut Sampler,
) -> Result<GroupElement> {
    let datum = dbl.datum();
    let rank = datum.rank();
    let mut uf = hh_classes(system, rank);
    let mut value: Vec<Option<Rat>> = vec![None; 2 * rank];
    let mut coords = vec![Rat::zero(); 2 * rank];
    for i in 0..2 * rank {
        let root = uf.find(i);
        if value[root].is_none() {
            let num = sampler.nonzero_int(5);
            let den = sampler.nonzero_int(5).abs();
            value[root] = Some(rat(num) / rat(den));
        }
        coords[i] = value[root].clone().unwrap();
    }
    let h1 = GroupElement::torus_element(datum, &coords[..rank])?;
    let h2 = GroupElement::torus_element(datum, &coords[rank..])?;
    Ok(GroupElement::pair(&h1, &h2))
}

/// A seeded product of at most `max_factors` exact-adjoint generators:
/// Weyl representatives, unipotent exponentials of root vectors with small
/// coefficients, and torus elements.
pub fn sample_group_element(
    datum: &RootDatum,
    sampler: &mut Sampler,
    max_factors: usize,
) -> GroupElement {
    let rank = datum.rank();
    let mut out = GroupElement::identity(datum.dim());
    let n_factors = 1 + sampler.index(max_factors.max(1));
    for _ in 0..n_factors {
        let next = match sampler.index(3) {
            0 => GroupElement::weyl_rep(datum, &[sampler.index(rank)]),
            1 => {
                let r = sampler.index(datum.num_pos_roots());
                let positive = sampler.index(2) == 0;
                let mut x = datum.basis_vector(datum.root_vector_index(r, positive));
                let c = sampler.nonzero_rat(3);
                for v in &mut x {
                    *v *= &c;
                }
                GroupElement::exp_ad(datum.algebra(), &x)
                    .expect("root vectors are ad-nilpotent")
            }
            _ => {
                let coords: Vec<Rat> = (0..rank).map(|_| sampler.nonzero_rat(3)).collect();
                GroupElement::torus_element(datum, &coords).expect("nonzero coords")
            }
        };
        out = out.compose(&next);
    }
    out
}

/// A seeded element of the connected subgroup of `D` whose Lie algebra is
/// the coisotropic subalgebra `q`: a product of unipotent exponentials of
/// ad-nilpotent basis directions of `q` and one-parameter Cartan subgroups
/// through integer-valued elements of `q ∩ (h ⊕ h)`.
pub fn sample_q_element(
    dbl: &Double,
    q: &Subspace,
    sampler: &mut Sampler,
    max_factors: usize,
) -> Result<GroupElement> {
    let alg = dbl.algebra();
    let nilpotent: Vec<Vec<Rat>> = q
        .basis_vectors()
        .into_iter()
        .filter(|b| GroupElement::exp_ad(alg, b).is_ok())
        .collect();
    let cartan = q.intersect(&dbl.cartan_double());
    let mut out = GroupElement::identity(dbl.dim());
    let n_factors = 1 + sampler.index(max_factors.max(1));
    for _ in 0..n_factors {
        let use_cartan = cartan.dim() > 0 && (nilpotent.is_empty() || sampler.index(2) == 0);
        let next = if use_cartan {
            let coeffs: Vec<Rat> = (0..cartan.dim()).map(|_| sampler.small_rat(2)).collect();
            let x = combine(&cartan.basis_vectors(), &coeffs);
            cartan_one_parameter(dbl, &x, sampler)?
        } else if !nilpotent.is_empty() {
            let b = sampler.pick(&nilpotent);
            let c = sampler.nonzero_rat(3);
            let x: Vec<Rat> = b.iter().map(|v| v * &c).collect();
            GroupElement::exp_ad(alg, &x)?
        } else {
            continue;
        };
        out = out.compose(&next);
    }
    Ok(out)
}

/// `Ad` of a point on the one-parameter subgroup through a Cartan pair `x`:
/// scale `x` so all simple-root values are integers, then evaluate the
/// character lattice at a random nonzero rational.
fn cartan_one_parameter(dbl: &Double, x: &[Rat], sampler: &mut Sampler) -> Result<GroupElement> {
    let datum = dbl.datum();
    let rank = datum.rank();
    let n = dbl.g_dim();
    let simple =
        |i: usize| -> Vec<i64> { (0..rank).map(|j| if j == i { 1 } else { 0 }).collect() };
    // α_i(x_left) and α_i(x_right); clear denominators jointly
    let mut vals: Vec<Rat> = Vec::with_capacity(2 * rank);
    for i in 0..rank {
        vals.push(datum.root_value(&simple(i), &x[..n]));
    }
    for i in 0..rank {
        vals.push(datum.root_value(&simple(i), &x[n..]));
    }
    let mut denom = num::BigInt::from(1);
    for v in &vals {
        denom = num::integer::lcm(denom, v.denom().clone());
    }
    let ints: Vec<num::BigInt> =
        vals.iter().map(|v| (v * Rat::from_integer(denom.clone())).to_integer()).collect();
    let t = {
        let num = sampler.nonzero_int(4);
        let den = sampler.nonzero_int(4).abs();
        rat(num) / rat(den)
    };
    let pow = |e: &num::BigInt| -> Rat {
        let mut acc = Rat::from_integer(1.into());
        let mut k = e.clone();
        let (base, inv) = (t.clone(), rat(1) / t.clone());
        use num::Signed;
        let step = if k.is_negative() { inv } else { base };
        k = k.abs();
        while !k.is_zero() {
            acc *= &step;
            k -= num::BigInt::from(1);
        }
        acc
    };
    let c1: Vec<Rat> = ints[..rank].iter().map(&pow).collect();
    let c2: Vec<Rat> = ints[rank..].iter().map(&pow).collect();
    let h1 = GroupElement::torus_element(datum, &c1)?;
    let h2 = GroupElement::torus_element(datum, &c2)?;
    Ok(GroupElement::pair(&h1, &h2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::RootDatum;

    fn dbl(rank: usize) -> Double {
        Double::new(RootDatum::type_a(rank).unwrap())
    }

    #[test]
    fn full_levi_gives_zero() {
        let d = dbl(2);
        let v = sample_lagrangian_v(&d, &[0, 1], &[0, 1], 7).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn sl2_empty_levi() {
        let d = dbl(1);
        let v = sample_lagrangian_v(&d, &[], &[], 3).unwrap();
        assert_eq!(v.dim(), 1);
        assert!(d.algebra().is_isotropic(&v));
        // deterministic per seed
        assert_eq!(v, sample_lagrangian_v(&d, &[], &[], 3).unwrap());
        // different seeds may differ but stay Lagrangian
        for seed in 0..6 {
            let v = sample_lagrangian_v(&d, &[], &[], seed).unwrap();
            assert!(d.algebra().is_isotropic(&v));
            assert_eq!(v.dim(), 1);
        }
    }

    #[test]
    fn mixed_levi_a2_and_a3() {
        let d2 = dbl(2);
        for seed in 0..4 {
            let v = sample_lagrangian_v(&d2, &[0], &[1], seed).unwrap();
            assert_eq!(v.dim(), 1);
            assert!(d2.algebra().is_isotropic(&v));
        }
        let d3 = dbl(3);
        let v = sample_lagrangian_v(&d3, &[0], &[1], 5).unwrap();
        assert_eq!(v.dim(), 2);
        assert!(d3.algebra().is_isotropic(&v));
    }

    #[test]
    fn odd_total_is_rejected() {
        let d = dbl(2);
        assert!(sample_lagrangian_v(&d, &[0], &[], 0).is_err());
    }

    fn standard_system(d: &Double) -> GbdSystem {
        use crate::double::{GbdQuad, GbdTriple};
        let rank = d.datum().rank();
        let all: Vec<usize> = (0..rank).collect();
        let idpairs: Vec<(usize, usize)> = all.iter().map(|&i| (i, i)).collect();
        let full = GbdTriple::new(d.datum(), &all, &all, &idpairs).unwrap();
        let empty = GbdTriple::new(d.datum(), &[], &[], &[]).unwrap();
        let anti: Vec<Vec<Rat>> = (0..rank)
            .map(|i| {
                let h = d.datum().basis_vector(i);
                let neg: Vec<Rat> = h.iter().map(|x| -x).collect();
                d.pair_vec(&h, &neg)
            })
            .collect();
        let q1 = GbdQuad::new(d, full, Subspace::zero(d.dim())).unwrap();
        let q2 = GbdQuad::new(d, empty, Subspace::from_rows(d.dim(), anti)).unwrap();
        GbdSystem::new(d, q1, q2).unwrap()
    }

    #[test]
    fn hh_torus_dimension_and_invariance() {
        use crate::double::Variant;
        for rank in 1..=2 {
            let d = dbl(rank);
            let system = standard_system(&d);
            // expected dimension: dim z_{S1} + dim z_{S2} = 0 + rank
            assert_eq!(hh_torus_dim(d.datum(), &system), rank);
            let l1 = d.lagrangian_subalg(&system.quad1, Variant::Prime).unwrap().space;
            let l2 = d.lagrangian_subalg(&system.quad2, Variant::DoublePrime).unwrap().space;
            let mut s = Sampler::new(11);
            for _ in 0..5 {
                let g = sample_hh_torus(&d, &system, &mut s).unwrap();
                assert_eq!(g.apply_subspace(&l1), l1);
                assert_eq!(g.apply_subspace(&l2), l2);
            }
        }
    }

    #[test]
    fn group_elements_are_automorphisms() {
        let d = dbl(2);
        let mut s = Sampler::new(4);
        for _ in 0..8 {
            let g = sample_group_element(d.datum(), &mut s, 4);
            g.verify(d.datum().algebra()).unwrap();
        }
        // deterministic per seed
        let mut s1 = Sampler::new(9);
        let mut s2 = Sampler::new(9);
        let a = sample_group_element(d.datum(), &mut s1, 4);
        let b = sample_group_element(d.datum(), &mut s2, 4);
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn q_elements_preserve_self_normalizing_q() {
        let d = dbl(1);
        // q = b ⊕ b: self-normalizing, so its subgroup fixes it
        let pd = d.parabolic_data(&[]);
        let q = d.product(&pd.p, &pd.p);
        let mut s = Sampler::new(17);
        for _ in 0..10 {
            let g = sample_q_element(&d, &q, &mut s, 3).unwrap();
            g.verify(d.algebra()).unwrap();
            assert_eq!(g.apply_subspace(&q), q);
        }
    }
}
