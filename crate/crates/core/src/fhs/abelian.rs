use super::{section, FhsMorphism, FormalHodge};
use crate::error::{Error, Result};
use crate::exact::{canonical_subspace, induced_quotient_map, kernel_subspace, FinAbGroup};
use crate::vecn;

/// Kernel and cokernel of a morphism with their structure maps.
#[derive(Clone, Debug)]
pub struct FhsKerCoker {
    pub incl: FhsMorphism,
    pub proj: FhsMorphism,
}

impl FhsKerCoker {
    pub fn ker(&self) -> &FormalHodge {
        &self.incl.source
    }

    pub fn coker(&self) -> &FormalHodge {
        &self.proj.target
    }
}

/// A short exact sequence `0 -> A -incl-> B -proj-> C -> 0`.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub incl: FhsMorphism,
    pub proj: FhsMorphism,
}

impl ShortExact {
    pub fn sub(&self) -> &FormalHodge {
        &self.incl.source
    }

    pub fn middle(&self) -> &FormalHodge {
        &self.incl.target
    }

    pub fn quot(&self) -> &FormalHodge {
        &self.proj.target
    }

    pub fn issues(&self) -> Vec<String> {
        exactness_issues(&self.incl, &self.proj)
    }

    /// Builds the sequence, failing if it is not exact.
    pub fn verified(incl: FhsMorphism, proj: FhsMorphism) -> Result<Self> {
        let s = ShortExact { incl, proj };
        let issues = s.issues();
        if issues.is_empty() {
            Ok(s)
        } else {
            Err(Error::NotExact(issues.join("; ")))
        }
    }
}

pub fn ker_coker_fhs(f: &FhsMorphism) -> Result<FhsKerCoker> {
    f.check()?;
    let (x, y) = (&f.source, &f.target);
    let n = x.n;

    let mk = f.mhs().kernel();
    let kh = &mk.source;
    let kt = f.tower().kernel_subspaces();
    let tinc = x.tower.subtower(&kt)?;
    let ko = kernel_subspace(&f.f_o);
    let inc_c = mk.complex();
    let mut pi = Vec::with_capacity(n);
    for j in 1..=n {
        let p = x.hodge_index(j);
        let e = induced_quotient_map(&inc_c, &kh.f(p), &x.h_et.f(p))?;
        let img = &x.pi[j - 1] * kt[j - 1].basis();
        pi.push(e.solve(&img).ok_or_else(|| Error::InvalidMorphism("kernel projection does not descend".into()))?);
    }
    let kn = &kt[n - 1];
    let ker = FormalHodge {
        n,
        twist: x.twist,
        h_et: kh.clone(),
        ho_dim: ko.dim(),
        tower: tinc.source.clone(),
        pi,
        aug_et: kn.coordinates(&(&x.aug_et * &inc_c)).expect("augmentation of the kernel lands in the kernel"),
        aug_o: kn.coordinates(&(&x.aug_o * ko.basis())).expect("augmentation of the kernel lands in the kernel"),
    };
    let incl = FhsMorphism {
        source: ker,
        target: x.clone(),
        f_et: mk.map,
        f_o: ko.basis().clone(),
        phi: tinc.comps,
    };

    let mc = f.mhs().cokernel();
    let ch = &mc.target;
    let it = f.tower().image_subspaces();
    let tproj = y.tower.quotient(&it)?;
    let qo = canonical_subspace(&f.f_o).quotient_map();
    let pr_c = mc.complex();
    let mut pi = Vec::with_capacity(n);
    for j in 1..=n {
        let p = y.hodge_index(j);
        let down = induced_quotient_map(&pr_c, &y.h_et.f(p), &ch.f(p))?;
        pi.push(&(&down * &y.pi[j - 1]) * &section(tproj.f(j)));
    }
    let pn = tproj.f(n);
    let coker = FormalHodge {
        n,
        twist: y.twist,
        h_et: ch.clone(),
        ho_dim: qo.rows(),
        tower: tproj.target.clone(),
        pi,
        aug_et: &(pn * &y.aug_et) * &section(&pr_c),
        aug_o: &(pn * &y.aug_o) * &section(&qo),
    };
    let proj = FhsMorphism {
        source: y.clone(),
        target: coker,
        f_et: mc.map,
        f_o: qo,
        phi: tproj.comps,
    };
    debug_assert!(incl.check().is_ok() && proj.check().is_ok());
    Ok(FhsKerCoker { incl, proj })
}

/// Why `0 -> A -i-> B -p-> C -> 0` fails to be exact (empty if exact).
pub fn exactness_issues(i: &FhsMorphism, p: &FhsMorphism) -> Vec<String> {
    let mut out = Vec::new();
    for (name, m) in [("first map", i), ("second map", p)] {
        for s in m.issues() {
            out.push(format!("{name}: {s}"));
        }
    }
    if !out.is_empty() {
        return out;
    }
    if i.target != p.source {
        out.push("maps are not composable".into());
        return out;
    }
    let (a, b, c) = (i.source.h_et.lattice(), i.target.h_et.lattice(), p.target.h_et.lattice());
    if !FinAbGroup::kernel(a, b, &i.f_et).0.is_trivial() {
        out.push("lattice: first map is not injective".into());
    }
    if !FinAbGroup::cokernel(c, &p.f_et).group.is_trivial() {
        out.push("lattice: second map is not surjective".into());
    }
    if !c.normalize(&(&p.f_et * &i.f_et)).is_zero() {
        out.push("lattice: composite is not zero".into());
    }
    let (_, kp) = FinAbGroup::kernel(b, c, &p.f_et);
    if b.solve(&i.f_et, &kp).is_none() {
        out.push("lattice: kernel is larger than the image".into());
    }
    if !i.f_o.is_injective() || !p.f_o.is_surjective() || canonical_subspace(&i.f_o) != kernel_subspace(&p.f_o) {
        out.push("H^o: sequence is not exact".into());
    }
    if !vecn::is_short_exact(&i.tower(), &p.tower()) {
        out.push("tower: sequence is not exact".into());
    }
    out
}

/// `f = incl_im ∘ u ∘ proj_coim` with `u: coim f -> im f` the canonical map.
#[derive(Clone, Debug)]
pub struct ImageFactorization {
    pub coimage: FhsKerCoker,
    pub image: FhsKerCoker,
    pub proj_coim: FhsMorphism,
    pub incl_im: FhsMorphism,
    pub u: FhsMorphism,
}

/// Computes image and coimage and the canonical comparison map between them.
pub fn image_coimage(f: &FhsMorphism) -> Result<ImageFactorization> {
    let kc = ker_coker_fhs(f)?;
    let coim = ker_coker_fhs(&kc.incl)?;
    let im = ker_coker_fhs(&kc.proj)?;
    let proj_coim = coim.proj.clone();
    let incl_im = im.incl.clone();
    let (s, t) = (&proj_coim.target, &incl_im.source);
    let y_lat = f.target.h_et.lattice();
    let lifted = &f.f_et * &proj_lift(&proj_coim)?;
    let f_et = y_lat
        .solve(&incl_im.f_et, &lifted)
        .ok_or_else(|| Error::NotExact("image inclusion does not receive f".into()))?;
    let f_o = incl_im
        .f_o
        .solve(&(&f.f_o * &section(&proj_coim.f_o)))
        .ok_or_else(|| Error::NotExact("H^o part does not factor".into()))?;
    let phi = (0..f.source.n)
        .map(|k| {
            incl_im.phi[k]
                .solve(&(&f.phi[k] * &section(&proj_coim.phi[k])))
                .ok_or_else(|| Error::NotExact("tower part does not factor".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let u = FhsMorphism {
        source: s.clone(),
        target: t.clone(),
        f_et: t.h_et.lattice().normalize(&f_et),
        f_o,
        phi,
    };
    Ok(ImageFactorization {
        coimage: coim,
        image: im,
        proj_coim,
        incl_im,
        u,
    })
}

/// Lattice lift of a surjective projection: source representatives of the
/// target generators.
fn proj_lift(p: &FhsMorphism) -> Result<crate::exact::IntMatrix> {
    let c = p.target.h_et.lattice();
    let id = crate::exact::IntMatrix::identity(c.ngens());
    c.solve(&p.f_et, &id).ok_or_else(|| Error::NotExact("lattice projection is not surjective".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fhs::tests::elliptic;
    use crate::fhs::hom_fhs;
    use crate::mhs::MixedHodge;
    use crate::vecn::VecTower;

    #[test]
    fn identity_and_zero() {
        let e = FormalHodge::embed_mhs(&elliptic(), 2, 0).unwrap();
        let v = FormalHodge::embed_vecn(&VecTower::with_zero_maps(vec![1, 1]), 0);
        let x = e.direct_sum(&v).unwrap();
        let kc = ker_coker_fhs(&FhsMorphism::identity(&x)).unwrap();
        assert_eq!(kc.ker().rank() + kc.ker().tower.total_dim(), 0);
        assert_eq!(kc.coker().rank() + kc.coker().tower.total_dim(), 0);
        let kc = ker_coker_fhs(&FhsMorphism::zero(&x, &x)).unwrap();
        assert_eq!(kc.ker().tower.dims(), x.tower.dims());
        assert_eq!(kc.coker().h_et.lattice(), x.h_et.lattice());
        assert!(kc.ker().validate().is_valid() && kc.coker().validate().is_valid());
        assert!(exactness_issues(&kc.incl, &FhsMorphism::zero(&x, &FormalHodge::zero(2, 0))).is_empty());
    }

    #[test]
    fn multiplication_by_two_has_torsion_cokernel() {
        let z = FormalHodge::embed_mhs(&MixedHodge::tate(0), 1, 0).unwrap();
        let h = hom_fhs(&z, &z).unwrap();
        let two = h.combine(&[2], &[]);
        let kc = ker_coker_fhs(&two).unwrap();
        assert_eq!(kc.coker().h_et.lattice().torsion, vec![2]);
        assert!(kc.coker().validate().is_valid());
        assert!(kc.ker().h_et.lattice().is_trivial());
        let fac = image_coimage(&two).unwrap();
        assert!(fac.u.check().is_ok() && fac.u.is_iso());
        let recomposed = fac.incl_im.compose(&fac.u.compose(&fac.proj_coim));
        assert!(recomposed.same_as(&two));
    }
}
