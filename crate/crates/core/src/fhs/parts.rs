use std::fmt;

use super::abelian::ShortExact;
use super::{section, FhsMorphism, FormalHodge};
use crate::error::{Error, Result};
use crate::exact::{GMatrix, IntMatrix};
use crate::mhs::{BiPoly, MixedHodge};
use crate::vecn::{TowerMorphism, VecTower};

/// The étale and times parts, the kernel tower `V^o` and `dim H^o`.
#[derive(Clone, Debug)]
pub struct Parts {
    pub etale: FormalHodge,
    pub times: FormalHodge,
    pub vo: VecTower,
    pub ho_dim: usize,
    /// `V^o -> V`.
    pub vo_incl: TowerMorphism,
    /// `V -> V / V^o`.
    pub vo_proj: TowerMorphism,
}

pub fn parts(x: &FormalHodge) -> Result<Parts> {
    x.check()?;
    let vo = x.vo_subspaces();
    let vo_incl = x.tower.subtower(&vo)?;
    let vo_proj = x.tower.quotient(&vo)?;
    let n = x.n;
    let pi: Vec<GMatrix> = (1..=n).map(|j| &x.pi[j - 1] * &section(vo_proj.f(j))).collect();
    let pn = vo_proj.f(n);
    let times = FormalHodge {
        n,
        twist: x.twist,
        h_et: x.h_et.clone(),
        ho_dim: x.ho_dim,
        tower: vo_proj.target.clone(),
        pi,
        aug_et: pn * &x.aug_et,
        aug_o: pn * &x.aug_o,
    };
    let mut etale = times.clone();
    etale.ho_dim = 0;
    etale.aug_o = GMatrix::zeros(times.dim(n), 0);
    Ok(Parts {
        etale,
        times,
        vo: vo_incl.source.clone(),
        ho_dim: x.ho_dim,
        vo_incl,
        vo_proj,
    })
}

fn lattice_id(x: &FormalHodge) -> IntMatrix {
    IntMatrix::identity(x.h_et.lattice().ngens())
}

fn lattice_zero(to: &FormalHodge, from: &FormalHodge) -> IntMatrix {
    IntMatrix::zeros(to.h_et.lattice().ngens(), from.h_et.lattice().ngens())
}

/// `0 -> (0, V^o) -> x -> x_times -> 0` and `0 -> x_et -> x_times -> (H^o, 0) -> 0`,
/// both checked for exactness.
pub fn canonical_sequences(x: &FormalHodge) -> Result<[ShortExact; 2]> {
    let p = parts(x)?;
    let n = x.n;
    let sub = FormalHodge::embed_vecn(&p.vo, x.twist);
    let first = ShortExact::verified(
        FhsMorphism {
            source: sub.clone(),
            target: x.clone(),
            f_et: lattice_zero(x, &sub),
            f_o: GMatrix::zeros(x.ho_dim, 0),
            phi: p.vo_incl.comps.clone(),
        },
        FhsMorphism {
            source: x.clone(),
            target: p.times.clone(),
            f_et: lattice_id(x),
            f_o: GMatrix::identity(x.ho_dim),
            phi: p.vo_proj.comps.clone(),
        },
    )?;
    let vsp = FormalHodge::vector(n, x.twist, x.ho_dim);
    let second = ShortExact::verified(
        FhsMorphism {
            source: p.etale.clone(),
            target: p.times.clone(),
            f_et: lattice_id(x),
            f_o: GMatrix::zeros(x.ho_dim, 0),
            phi: (1..=n).map(|j| GMatrix::identity(p.times.dim(j))).collect(),
        },
        FhsMorphism {
            source: p.times.clone(),
            target: vsp.clone(),
            f_et: lattice_zero(&vsp, x),
            f_o: GMatrix::identity(x.ho_dim),
            phi: (1..=n).map(|j| GMatrix::zeros(0, p.times.dim(j))).collect(),
        },
    )?;
    Ok([first, second])
}

/// `0 -> (H^o, V^o) -> x -> x_et -> 0`; exists exactly when `x` is special.
pub fn special_sequence(x: &FormalHodge) -> Result<ShortExact> {
    let p = parts(x)?;
    let n = x.n;
    let von = &x.vo_subspaces()[n - 1];
    let aug_o = von
        .coordinates(&x.aug_o)
        .ok_or_else(|| Error::NotSpecial("h^o does not factor through V^o_n".into()))?;
    let mut sub = FormalHodge::embed_vecn(&p.vo, x.twist);
    sub.ho_dim = x.ho_dim;
    sub.aug_o = aug_o;
    ShortExact::verified(
        FhsMorphism {
            source: sub.clone(),
            target: x.clone(),
            f_et: lattice_zero(x, &sub),
            f_o: GMatrix::identity(x.ho_dim),
            phi: p.vo_incl.comps.clone(),
        },
        FhsMorphism {
            source: x.clone(),
            target: p.etale.clone(),
            f_et: lattice_id(x),
            f_o: GMatrix::zeros(0, x.ho_dim),
            phi: p.vo_proj.comps.clone(),
        },
    )
}

/// Class in `K_0(FHS_n)`: `f(t) = dim H^o + sum dim V^o_j t^j` and
/// `g(u, v)` the Hodge polynomial of the untwisted lattice part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Class {
    /// Coefficients of `t^0 .. t^n`.
    pub f: Vec<i64>,
    pub g: BiPoly,
}

impl K0Class {
    pub fn add(&self, other: &K0Class) -> K0Class {
        let len = self.f.len().max(other.f.len());
        let f = (0..len)
            .map(|k| self.f.get(k).copied().unwrap_or(0) + other.f.get(k).copied().unwrap_or(0))
            .collect();
        K0Class {
            f,
            g: self.g.add(&other.g),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.g.is_symmetric()
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fs: Vec<String> = self.f.iter().map(i64::to_string).collect();
        writeln!(f, "f(t) coefficients: [{}]", fs.join(", "))?;
        let gs: Vec<String> = self.g.0.iter().map(|((p, q), c)| format!("({p},{q}):{c}")).collect();
        write!(f, "g(u,v) coefficients: [{}]", gs.join(", "))
    }
}

pub fn k0_class(x: &FormalHodge) -> K0Class {
    let mut f = vec![x.ho_dim as i64];
    f.extend(x.vo_subspaces().iter().map(|s| s.dim() as i64));
    let untwisted: MixedHodge = x.h_et.tate_twist(-x.twist);
    K0Class {
        f,
        g: untwisted.hodge_polynomial(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fhs::tests::elliptic;
    use crate::vecn::VecTower;

    #[test]
    fn degenerate_sequences() {
        let e = FormalHodge::embed_mhs(&elliptic(), 1, 0).unwrap();
        let [s1, s2] = canonical_sequences(&e).unwrap();
        assert!(s1.sub().tower.is_zero());
        assert_eq!(s2.sub(), &e);
        assert!(special_sequence(&e).is_ok());
        let v = FormalHodge::embed_vecn(&VecTower::with_zero_maps(vec![2, 1]), 0);
        let [_, s2] = canonical_sequences(&v).unwrap();
        assert!(s2.sub().is_connected() && s2.sub().tower.is_zero());
        assert_eq!(k0_class(&v).f, vec![0, 2, 1]);
        assert!(k0_class(&v).g.is_zero());
        assert_eq!(k0_class(&FormalHodge::vector(1, 0, 3)).f, vec![3, 0]);
    }

    #[test]
    fn non_special_has_no_third_sequence() {
        let mut e = FormalHodge::embed_mhs(&elliptic(), 1, 0).unwrap();
        e.ho_dim = 1;
        e.aug_o = GMatrix::identity(1);
        assert!(e.validate().is_valid());
        assert!(!e.is_special());
        assert!(matches!(special_sequence(&e), Err(Error::NotSpecial(_))));
        for s in canonical_sequences(&e).unwrap() {
            let sum = k0_class(s.sub()).add(&k0_class(s.quot()));
            assert_eq!(sum, k0_class(s.middle()));
        }
    }
}
