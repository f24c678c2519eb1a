//! Seeded generators of random test objects. Every generator is a pure
//! function of the seed, so property suites are reproducible.

use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{kernel_subspace, FinAbGroup, GMatrix, GaussScalar, IntMatrix};
use crate::ext::ExtClassFHS;
use crate::fhs::{hom_fhs, FhsMorphism, FormalHodge};
use crate::mhs::{carlson_extension, CarlsonExt, MixedHodge};
use crate::vecn::VecTower;

/// Shape limits for random formal Hodge structures.
#[derive(Clone, Debug)]
pub struct FhsShape {
    pub level: usize,
    pub max_rank: usize,
    pub max_vo: usize,
    pub max_ho: usize,
    /// Force the object to be special (`Some(true)`), non-special when
    /// possible (`Some(false)`), or leave it to chance.
    pub special: Option<bool>,
    pub torsion: bool,
}

impl FhsShape {
    pub fn small(level: usize) -> Self {
        FhsShape {
            level,
            max_rank: 2,
            max_vo: 1,
            max_ho: 1,
            special: None,
            torsion: false,
        }
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn usize(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// A small Gaussian rational, occasionally with denominator 2.
    pub fn scalar(&mut self) -> GaussScalar {
        let d = if self.rng.gen_bool(0.2) { 2 } else { 1 };
        let re = GaussScalar::from_ratio(self.int(-2, 2), d);
        let im = GaussScalar::from_int(self.int(-2, 2));
        &re + &(&im * &GaussScalar::i())
    }

    /// A scalar with nonzero imaginary part.
    pub fn upper_half(&mut self) -> GaussScalar {
        let re = GaussScalar::from_ratio(self.int(-2, 2), 2);
        let im = GaussScalar::from_int(self.int(1, 2));
        &re + &(&im * &GaussScalar::i())
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> GMatrix {
        GMatrix::from_fn(rows, cols, |_, _| self.scalar())
    }

    pub fn invertible(&mut self, n: usize) -> GMatrix {
        loop {
            let m = self.matrix(n, n);
            if m.is_invertible() {
                return m;
            }
        }
    }

    /// A product of elementary integer matrices.
    pub fn unimodular(&mut self, n: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        if n < 2 {
            return m;
        }
        for _ in 0..n + 1 {
            let i = self.usize(0, n - 1);
            let mut j = self.usize(0, n - 2);
            if j >= i {
                j += 1;
            }
            let k = BigInt::from(self.int(-1, 1));
            let mut e = IntMatrix::identity(n);
            e.set(i, j, k);
            m = &e * &m;
        }
        m
    }

    pub fn tower(&mut self, n: usize, max_dim: usize) -> VecTower {
        let dims: Vec<usize> = (0..n).map(|_| self.usize(0, max_dim)).collect();
        let maps = (2..=n).map(|i| self.matrix(dims[i - 2], dims[i - 1])).collect();
        VecTower::new(dims, maps).expect("shapes match")
    }

    /// `E_tau (x) Z(-p)`: weight `2p + 1`, types `(p + 1, p)` and `(p, p + 1)`.
    pub fn elliptic(&mut self, p: i64) -> MixedHodge {
        let tau = self.upper_half();
        let f = GMatrix::column(vec![GaussScalar::one(), tau]);
        MixedHodge::pure(2, 1, vec![(0, GMatrix::identity(2)), (1, f)])
            .expect("elliptic structure")
            .tate_twist(-p)
    }

    /// A pure torsion-free structure of the given weight and level.
    pub fn pure(&mut self, weight: i64, level: usize, max_rank: usize) -> MixedHodge {
        let mut h = MixedHodge::zero();
        let target = self.usize(1, max_rank.max(1));
        while h.rank() < target {
            let piece = if weight % 2 == 0 {
                MixedHodge::tate(-weight / 2)
            } else if h.rank() + 2 <= max_rank.max(2) {
                self.elliptic((weight - 1) / 2)
            } else {
                break;
            };
            h = h.direct_sum(&piece);
        }
        debug_assert!(h.in_level(level, 0));
        self.scramble(&h)
    }

    /// A random integral change of lattice coordinates.
    pub fn scramble(&mut self, h: &MixedHodge) -> MixedHodge {
        if !h.is_torsion_free() {
            return h.clone();
        }
        let g = self.unimodular(h.rank()).to_gmatrix();
        h.transport(h.lattice().clone(), &g)
    }

    /// A torsion-free structure of level `<= level`, possibly mixed.
    pub fn mhs(&mut self, level: usize, max_rank: usize) -> MixedHodge {
        let piece = |g: &mut Gen, room: usize| -> MixedHodge {
            let p = g.int(0, level as i64);
            if room >= 2 && p < level as i64 && g.coin() {
                g.elliptic(p)
            } else {
                MixedHodge::tate(-p)
            }
        };
        if max_rank == 0 {
            return MixedHodge::zero();
        }
        let a = piece(self, max_rank);
        let room = max_rank - a.rank();
        if room == 0 || self.rng.gen_bool(0.3) {
            return self.scramble(&a);
        }
        let b = piece(self, room);
        let h = match CarlsonExt::new(&b, &a) {
            Ok(ext) if ext.w0.dim() > 0 && self.coin() => {
                let coeffs: Vec<GaussScalar> = (0..ext.w0.dim()).map(|_| self.scalar()).collect();
                let v = ext.w0.basis().apply(&coeffs);
                let theta = GMatrix::from_fn(a.rank(), b.rank(), |i, j| v[i * b.rank() + j].clone());
                carlson_extension(&a, &b, &theta).expect("theta lies in W_0 Hom")
            }
            _ => a.direct_sum(&b),
        };
        self.scramble(&h)
    }

    /// A random valid object: `V_j = H_C/F^j (+) V^o_j` glued by random
    /// maps, then hidden behind random changes of basis.
    pub fn fhs(&mut self, shape: &FhsShape) -> FormalHodge {
        let n = shape.level;
        let mut h = if self.rng.gen_bool(0.15) { MixedHodge::zero() } else { self.mhs(n, shape.max_rank) };
        if shape.torsion && self.rng.gen_bool(0.3) {
            let d = self.int(2, 3) as u64;
            let t = MixedHodge::new(FinAbGroup::new(0, vec![d]).expect("valid torsion"), vec![], vec![]).expect("torsion structure");
            h = h.direct_sum(&t);
        }
        let qd: Vec<usize> = (1..=n).map(|j| h.f(j as i64).codim()).collect();
        let od: Vec<usize> = (1..=n).map(|_| self.usize(0, shape.max_vo)).collect();
        let ho = self.usize(0, shape.max_ho);
        let dims: Vec<usize> = (0..n).map(|k| qd[k] + od[k]).collect();
        let mut maps = Vec::new();
        for j in 2..=n {
            let t = crate::exact::induced_quotient_map(&GMatrix::identity(h.rank()), &h.f(j as i64), &h.f(j as i64 - 1))
                .expect("F is decreasing");
            let c = self.matrix(od[j - 2], qd[j - 1]);
            let w = self.matrix(od[j - 2], od[j - 1]);
            let top = t.hstack(&GMatrix::zeros(qd[j - 2], od[j - 1]));
            maps.push(top.vstack(&c.hstack(&w)));
        }
        let pi: Vec<GMatrix> = (0..n).map(|k| GMatrix::identity(qd[k]).hstack(&GMatrix::zeros(qd[k], od[k]))).collect();
        let qn = h.f(n as i64).quotient_map();
        let aug_et = qn.vstack(&self.matrix(od[n - 1], h.rank()));
        let special = match shape.special {
            Some(s) => s,
            None => self.coin(),
        };
        let b = if special { GMatrix::zeros(qd[n - 1], ho) } else { self.matrix(qd[n - 1], ho) };
        let aug_o = b.vstack(&self.matrix(od[n - 1], ho));

        let g: Vec<GMatrix> = dims.iter().map(|&d| self.invertible(d)).collect();
        let gi: Vec<GMatrix> = g.iter().map(|m| m.inverse().expect("invertible")).collect();
        let maps = (2..=n).map(|j| &(&g[j - 2] * &maps[j - 2]) * &gi[j - 1]).collect();
        let pi = (0..n).map(|k| &pi[k] * &gi[k]).collect();
        let x = FormalHodge {
            n,
            twist: 0,
            h_et: h,
            ho_dim: ho,
            tower: VecTower::new(dims, maps).expect("shapes match"),
            pi,
            aug_et: &g[n - 1] * &aug_et,
            aug_o: &g[n - 1] * &aug_o,
        };
        debug_assert!(x.validate().is_valid(), "{}", x.validate());
        x
    }

    /// A random class for an extension of `x` by `y` (both torsion-free):
    /// a Carlson parameter in `W_0 Hom` and a fiber parameter in `V^o_n`.
    pub fn ext_class(&mut self, x: &FormalHodge, y: &FormalHodge) -> ExtClassFHS {
        let ext = CarlsonExt::new(&x.h_et, &y.h_et).expect("torsion-free inputs");
        let coeffs: Vec<GaussScalar> = (0..ext.w0.dim()).map(|_| self.scalar()).collect();
        let v = ext.w0.basis().apply(&coeffs);
        let (ry, rx) = (y.rank(), x.rank());
        let theta_mhs = GMatrix::from_fn(ry, rx, |i, j| v[i * rx + j].clone());
        let vo = kernel_subspace(&y.pi[y.n - 1]);
        let theta_v = vo.basis() * &self.matrix(vo.dim(), rx);
        ExtClassFHS { theta_mhs, theta_v }
    }

    /// A random element of `Hom(x, y)`.
    pub fn morphism(&mut self, x: &FormalHodge, y: &FormalHodge) -> FhsMorphism {
        let h = hom_fhs(x, y).expect("same level");
        let ints: Vec<i64> = h.generators.iter().map(|_| self.int(-2, 2)).collect();
        let scalars: Vec<GaussScalar> = h.vector_basis.iter().map(|_| self.scalar()).collect();
        h.combine(&ints, &scalars)
    }

    /// A morphism whose target often shares summands with its source, so
    /// that kernels and cokernels are non-trivial.
    pub fn interesting_morphism(&mut self, shape: &FhsShape) -> FhsMorphism {
        let x = self.fhs(shape);
        let y = match self.usize(0, 2) {
            0 => self.fhs(shape),
            1 => x.clone(),
            _ => {
                let z = self.fhs(&FhsShape { max_rank: 1, ..shape.clone() });
                x.direct_sum(&z).expect("same level")
            }
        };
        self.morphism(&x, &y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_objects_validate() {
        let mut g = Gen::new(7);
        for level in 1..=3 {
            for _ in 0..10 {
                let x = g.fhs(&FhsShape { torsion: true, ..FhsShape::small(level) });
                assert!(x.validate().is_valid(), "{}", x.validate());
            }
        }
        let h = g.pure(3, 2, 4);
        assert!(h.is_pure_of_weight(3) && h.validate().is_valid());
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = Gen::new(3).fhs(&FhsShape::small(2));
        let b = Gen::new(3).fhs(&FhsShape::small(2));
        assert_eq!(a, b);
    }
}
