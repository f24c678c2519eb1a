use num::BigInt;

use super::{section, FhsMorphism, FormalHodge};
use crate::error::{Error, Result};
use crate::exact::{BlockId, FinAbGroup, GMatrix, GaussScalar, IntMatrix, LinearSystem};
use crate::lie::Fingerprint;
use crate::mhs::{add_filtration_equations, torsion_homs};

/// A finite presentation of `Hom(x, y)`: a finitely generated lattice part
/// extended by a complex vector space (the morphisms with `f_et = 0`).
#[derive(Clone, Debug)]
pub struct HomPresentation {
    pub source: FormalHodge,
    pub target: FormalHodge,
    pub lattice: FinAbGroup,
    /// Lattice generators; `orders[k] = 0` marks infinite order.
    pub generators: Vec<FhsMorphism>,
    pub orders: Vec<u64>,
    /// A basis of the morphisms with vanishing lattice part.
    pub vector_basis: Vec<FhsMorphism>,
}

impl HomPresentation {
    pub fn vector_dim(&self) -> usize {
        self.vector_basis.len()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint {
            vector: self.vector_dim(),
            torus: 0,
            lattice: self.lattice.rank,
            torsion: self.lattice.torsion.clone(),
        }
    }

    /// `sum a_k g_k + sum c_l e_l`.
    pub fn combine(&self, ints: &[i64], scalars: &[GaussScalar]) -> FhsMorphism {
        let mut acc = FhsMorphism::zero(&self.source, &self.target);
        for (g, &a) in self.generators.iter().zip(ints) {
            acc = acc.add(&g.scale(a, &GaussScalar::from_int(a)));
        }
        for (e, c) in self.vector_basis.iter().zip(scalars) {
            acc = acc.add(&e.scale(0, c));
        }
        acc
    }
}

struct HomSystem {
    sys: LinearSystem,
    lat: BlockId,
    ho: BlockId,
    tower: Vec<BlockId>,
}

impl HomSystem {
    /// The morphism conditions with unknowns `f_et` (free part), `f_o`, `phi_j`.
    fn new(x: &FormalHodge, y: &FormalHodge) -> Result<Self> {
        if (x.n, x.twist) != (y.n, y.twist) {
            return Err(Error::Level(format!(
                "Hom between level {} twist {} and level {} twist {}",
                x.n, x.twist, y.n, y.twist
            )));
        }
        let n = x.n;
        let (rx, ry) = (x.rank(), y.rank());
        let mut sys = LinearSystem::new();
        let xb = sys.add_block(ry, rx, true);
        let ob = sys.add_block(y.ho_dim, x.ho_dim, false);
        let pb: Vec<_> = (1..=n).map(|j| sys.add_block(y.dim(j), x.dim(j), false)).collect();
        add_filtration_equations(&mut sys, xb, &x.h_et, &y.h_et, Some(0), Some(0));
        for j in 2..=n {
            let l = GMatrix::identity(y.dim(j - 1));
            let r = GMatrix::identity(x.dim(j));
            sys.add_equation(&[(pb[j - 2], &l, x.tower.v(j)), (pb[j - 1], &-y.tower.v(j), &r)]);
        }
        let idn = GMatrix::identity(y.dim(n));
        sys.add_equation(&[(pb[n - 1], &idn, &x.aug_et), (xb, &-&y.aug_et, &GMatrix::identity(rx))]);
        sys.add_equation(&[(pb[n - 1], &idn, &x.aug_o), (ob, &-&y.aug_o, &GMatrix::identity(x.ho_dim))]);
        for j in 1..=n {
            let right = &section(&x.q(j)) * &x.pi[j - 1];
            sys.add_equation(&[
                (pb[j - 1], &y.pi[j - 1], &GMatrix::identity(x.dim(j))),
                (xb, &-&y.q(j), &right),
            ]);
        }
        Ok(HomSystem {
            sys,
            lat: xb,
            ho: ob,
            tower: pb,
        })
    }

    fn build(&self, x: &FormalHodge, y: &FormalHodge, v: &[GaussScalar]) -> FhsMorphism {
        let (rx, ry) = (x.rank(), y.rank());
        let (gx, gy) = (x.h_et.lattice(), y.h_et.lattice());
        let xm = self.sys.block_value(self.lat, v);
        let f_et = IntMatrix::from_fn(gy.ngens(), gx.ngens(), |r, c| {
            if r < ry && c < rx {
                xm.get(r, c).to_integer().expect("lattice solutions are integral")
            } else {
                BigInt::from(0)
            }
        });
        FhsMorphism {
            source: x.clone(),
            target: y.clone(),
            f_et,
            f_o: self.sys.block_value(self.ho, v),
            phi: self.tower.iter().map(|&b| self.sys.block_value(b, v)).collect(),
        }
    }
}

/// A morphism `x -> y` whose lattice part on the free generators is
/// `f_et`, if one exists. Free complex parameters are set to zero.
pub fn morphism_over(x: &FormalHodge, y: &FormalHodge, f_et: &IntMatrix) -> Result<FhsMorphism> {
    let mut hs = HomSystem::new(x, y)?;
    if f_et.shape() != (y.rank(), x.rank()) {
        return Err(Error::Dimension(format!(
            "lattice map must be {}x{}, got {:?}",
            y.rank(),
            x.rank(),
            f_et.shape()
        )));
    }
    hs.sys.fix_block(hs.lat, &f_et.to_gmatrix());
    let (v, _) = hs
        .sys
        .solve_affine()
        .ok_or_else(|| Error::InvalidMorphism("no morphism extends the given lattice map".into()))?;
    let f = hs.build(x, y, &v);
    f.check()?;
    Ok(f)
}

/// `Hom_FHS(x, y)` by exact elimination: the lattice block is integral, all
/// other unknowns are Gaussian rationals.
pub fn hom_fhs(x: &FormalHodge, y: &FormalHodge) -> Result<HomPresentation> {
    let hs = HomSystem::new(x, y)?;
    let sol = hs.sys.solve_lattice();
    let build = |v: &[GaussScalar]| hs.build(x, y, v);
    let mut generators: Vec<FhsMorphism> = sol.lattice.iter().map(|v| build(v)).collect();
    let mut orders = vec![0; generators.len()];
    for (m, d) in torsion_homs(&x.h_et, &y.h_et) {
        let mut g = FhsMorphism::zero(x, y);
        g.f_et = m;
        generators.push(g);
        orders.push(d);
    }
    let vector_basis = sol.vector.iter().map(|v| build(v)).collect();
    let free = orders.iter().filter(|&&d| d == 0).count();
    let finite: Vec<u64> = orders.iter().copied().filter(|&d| d != 0).collect();
    Ok(HomPresentation {
        source: x.clone(),
        target: y.clone(),
        lattice: FinAbGroup::from_cyclic_orders(free, &finite),
        generators,
        orders,
        vector_basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fhs::tests::elliptic;
    use crate::mhs::{hom_mhs, MixedHodge};
    use crate::vecn::VecTower;

    #[test]
    fn identity_and_adjunction() {
        let e = FormalHodge::embed_mhs(&elliptic(), 1, 0).unwrap();
        let h = hom_fhs(&e, &e).unwrap();
        assert_eq!(h.lattice, hom_mhs(&elliptic(), &elliptic()).group());
        assert_eq!(h.vector_dim(), 0);
        for g in h.generators.iter().chain(&h.vector_basis) {
            assert!(g.check().is_ok());
        }
        let z = FormalHodge::embed_mhs(&MixedHodge::tate(0), 1, 0).unwrap();
        let hz = hom_fhs(&z, &z).unwrap();
        let g = hz.combine(&[1], &[]);
        assert!(g.same_as(&FhsMorphism::identity(&z)) || g.scale(-1, &GaussScalar::from_int(-1)).same_as(&FhsMorphism::identity(&z)));
        let v = FormalHodge::embed_vecn(&VecTower::with_zero_maps(vec![1]), 0);
        let hv = hom_fhs(&v, &v).unwrap();
        assert_eq!((hv.lattice.rank, hv.vector_dim()), (0, 1));
        assert_eq!(hom_fhs(&z, &e).unwrap().fingerprint(), Fingerprint::new(0, 0, 0));
        assert_eq!(hom_fhs(&v, &e).unwrap().fingerprint(), Fingerprint::new(0, 0, 0));
        assert!(hom_fhs(&e, &FormalHodge::zero(2, 0)).is_err());
    }
}
