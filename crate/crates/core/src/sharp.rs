//! Sharp cohomology objects assembled from ingested Betti, Hodge and
//! truncated de Rham data.

use crate::error::{Error, Result};
use crate::exact::{induced_quotient_map, kernel_subspace, pullback, GMatrix, IntMatrix, Pullback};
use crate::fhs::{FhsMorphism, FormalHodge};
use crate::functors::{in_image, shift_down, Shift};
use crate::mhs::MixedHodge;
use crate::vecn::VecTower;

/// `D_k -> ... -> D_1` with projections `rho_i: D_i -> H_C/F^i` and the
/// comparison `H_C -> D_k` from Betti cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeRhamTower {
    pub tower: VecTower,
    pub rho: Vec<GMatrix>,
    pub aug: GMatrix,
}

impl DeRhamTower {
    pub fn k(&self) -> usize {
        self.tower.n()
    }

    /// The smooth proper case: `D_i = H_C/F^i` itself.
    pub fn canonical(h: &MixedHodge, k: usize) -> Result<Self> {
        let f = |i: usize| h.f(i as i64);
        let id = GMatrix::identity(h.rank());
        let dims = (1..=k).map(|i| f(i).codim()).collect();
        let maps = (2..=k)
            .map(|i| induced_quotient_map(&id, &f(i), &f(i - 1)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DeRhamTower {
            tower: VecTower::new(dims, maps)?,
            rho: (1..=k).map(|i| GMatrix::identity(f(i).codim())).collect(),
            aug: f(k).quotient_map(),
        })
    }

    /// Why the data is incompatible with `h` (empty when compatible).
    pub fn issues(&self, h: &MixedHodge) -> Vec<String> {
        let k = self.k();
        let mut out = Vec::new();
        let quot = |i: usize| h.f(i as i64);
        if self.rho.len() != k {
            out.push(format!("{} projections for depth {k}", self.rho.len()));
            return out;
        }
        for i in 1..=k {
            let r = &self.rho[i - 1];
            if r.shape() != (quot(i).codim(), self.tower.dim(i)) {
                out.push(format!("rho_{i} has shape {:?}", r.shape()));
                return out;
            }
            if !r.is_surjective() {
                out.push(format!("rho_{i} is not surjective"));
            }
        }
        for i in 2..=k {
            let t = induced_quotient_map(&GMatrix::identity(h.rank()), &quot(i), &quot(i - 1)).expect("F is decreasing");
            if &self.rho[i - 2] * self.tower.v(i) != &t * &self.rho[i - 1] {
                out.push(format!("square at index {i} does not commute"));
            }
        }
        if self.aug.shape() != (self.tower.dim(k), h.rank()) {
            out.push(format!("comparison map has shape {:?}", self.aug.shape()));
        } else if &self.rho[k - 1] * &self.aug != quot(k).quotient_map() {
            out.push("rho_k does not send the comparison map to the canonical projection".into());
        }
        out
    }
}

/// Ingested data of one sharp cohomology object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpData {
    pub h: MixedHodge,
    pub dr: DeRhamTower,
    pub n: usize,
}

impl SharpData {
    pub fn object(&self) -> Result<FormalHodge> {
        sharp_object(&self.h, &self.dr, self.n, self.dr.k())
    }
}

/// `H/F^i x_{H/F^k} D_k` for `k < i <= n`.
fn upper_slots(h: &MixedHodge, dr: &DeRhamTower, n: usize, k: usize) -> Result<Vec<Pullback>> {
    (k + 1..=n)
        .map(|i| {
            let t = induced_quotient_map(&GMatrix::identity(h.rank()), &h.f(i as i64), &h.f(k as i64))?;
            pullback(&t, &dr.rho[k - 1])
        })
        .collect()
}

/// `V_i = D_i` for `i <= k` and `V_i = H_C/F^i x_{H_C/F^k} D_k` above.
pub fn sharp_object(h: &MixedHodge, dr: &DeRhamTower, n: usize, k: usize) -> Result<FormalHodge> {
    if k == 0 || k > n {
        return Err(Error::Level(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if dr.k() != k {
        return Err(Error::Dimension(format!("de Rham data has depth {}, expected {k}", dr.k())));
    }
    if !h.in_level(n, 0) {
        return Err(Error::Level(format!("the Hodge filtration has level > {n}")));
    }
    let issues = dr.issues(h);
    if !issues.is_empty() {
        return Err(Error::InvalidFhs(issues.join("; ")));
    }
    let up = upper_slots(h, dr, n, k)?;
    let mut dims = dr.tower.dims().to_vec();
    let mut maps = dr.tower.maps().to_vec();
    let mut pi = dr.rho.clone();
    for i in k + 1..=n {
        let p = &up[i - k - 1];
        dims.push(p.dim());
        let v = if i == k + 1 {
            p.proj_b.clone()
        } else {
            let below = &up[i - k - 2];
            let t = induced_quotient_map(&GMatrix::identity(h.rank()), &h.f(i as i64), &h.f(i as i64 - 1))?;
            below.coordinates(&(&t * &p.proj_a), &p.proj_b).expect("transition respects the fiber product")
        };
        maps.push(v);
        pi.push(p.proj_a.clone());
    }
    let aug_et = if n > k {
        up[n - k - 1]
            .coordinates(&h.f(n as i64).quotient_map(), &dr.aug)
            .expect("the comparison map lies over the canonical projection")
    } else {
        dr.aug.clone()
    };
    let top = dims[n - 1];
    FormalHodge::new(n, 0, h.clone(), 0, VecTower::new(dims, maps)?, pi, aug_et, GMatrix::zeros(top, 0))
}

/// The morphism `sharp(a) -> sharp(b)` induced by a lattice map and maps
/// `D_i(a) -> D_i(b)`. Fails if the data does not commute.
pub fn sharp_morphism(a: &SharpData, b: &SharpData, f_et: &IntMatrix, dr_maps: &[GMatrix]) -> Result<FhsMorphism> {
    let (x, y) = (a.object()?, b.object()?);
    let k = a.dr.k();
    if b.dr.k() != k || a.n != b.n || dr_maps.len() != k {
        return Err(Error::Dimension("sharp data of different shapes".into()));
    }
    let fc = f_et.to_gmatrix();
    let (ua, ub) = (upper_slots(&a.h, &a.dr, a.n, k)?, upper_slots(&b.h, &b.dr, b.n, k)?);
    let mut phi = dr_maps.to_vec();
    for i in k + 1..=a.n {
        let fi = induced_quotient_map(&fc, &a.h.f(i as i64), &b.h.f(i as i64))?;
        let (pa, pb) = (&ua[i - k - 1], &ub[i - k - 1]);
        let m = pb
            .coordinates(&(&fi * &pa.proj_a), &(&dr_maps[k - 1] * &pa.proj_b))
            .ok_or_else(|| Error::InvalidMorphism(format!("maps do not respect the fiber product at index {i}")))?;
        phi.push(m);
    }
    FhsMorphism::new(x, y, f_et.clone(), GMatrix::zeros(0, 0), phi)
}

/// `x -> embed_mhs(H)` through the projections `pi_i`; an isomorphism
/// exactly when `V^o = 0` and `H^o = 0`.
pub fn comparison_to_mhs(x: &FormalHodge) -> Result<FhsMorphism> {
    if !x.is_special() {
        return Err(Error::NotSpecial("h^o must vanish in H_C/F^n".into()));
    }
    let target = FormalHodge::embed_mhs(&x.h_et, x.n, x.twist)?;
    FhsMorphism::new(
        x.clone(),
        target,
        IntMatrix::identity(x.h_et.lattice().ngens()),
        GMatrix::zeros(0, x.ho_dim),
        x.pi.clone(),
    )
}

/// `H^{2d-1,d}_#` at level `2d - 1`, reduced to level `d` along the
/// quasi-inverse of `tau_{d-1}`.
pub fn albanese_input(h: &MixedHodge, dr: &DeRhamTower, d: usize) -> Result<FormalHodge> {
    if d == 0 {
        return Err(Error::Level("d must be positive".into()));
    }
    let full = sharp_object(h, dr, 2 * d - 1, d)?;
    if d == 1 {
        return Ok(full);
    }
    let w = in_image(&full, Shift::Tau, d - 1)?;
    shift_down(&full, &w)
}

/// `tau_{d-1}(albanese_input) -> H^{2d-1,d}_#`, checked to be an isomorphism.
pub fn albanese_reduction_iso(h: &MixedHodge, dr: &DeRhamTower, d: usize) -> Result<FhsMorphism> {
    let reduced = albanese_input(h, dr, d)?;
    let full = sharp_object(h, dr, 2 * d - 1, d)?;
    let raised = if d == 1 {
        reduced
    } else {
        crate::functors::tau_fhs(&reduced, d - 1)?.0
    };
    let iso = crate::fhs::morphism_over(&raised, &full, &IntMatrix::identity(h.rank()))?;
    if !iso.is_iso() {
        return Err(Error::InvalidMorphism("reduction does not invert tau".into()));
    }
    Ok(iso)
}

/// Ingested data of a projective curve minus points: the sharp data of
/// `H^1(U)` at level 1 and the connecting map `V_1 -> H^{1,1}_dR(U)`
/// whose kernel is `H^o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuncturedCurve {
    pub h: MixedHodge,
    pub dr: DeRhamTower,
    pub connecting: GMatrix,
}

pub fn punctured_curve_object(data: &PuncturedCurve) -> Result<FormalHodge> {
    let mut x = sharp_object(&data.h, &data.dr, 1, 1)?;
    if data.connecting.cols() != x.dim(1) {
        return Err(Error::Dimension(format!(
            "connecting map has {} columns, V_1 has dim {}",
            data.connecting.cols(),
            x.dim(1)
        )));
    }
    let ker = kernel_subspace(&data.connecting);
    x.ho_dim = ker.dim();
    x.aug_o = ker.basis().clone();
    if !x.is_special() {
        return Err(Error::NotSpecial("the kernel of the connecting map is not in the kernel of pi_1".into()));
    }
    x.check()?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussScalar;
    use crate::fhs::tests::elliptic;

    #[test]
    fn smooth_proper_is_the_mhs() {
        let h = elliptic().tate_twist(-1).direct_sum(&MixedHodge::tate(-1));
        for n in 2..=3 {
            for k in 1..=n {
                let dr = DeRhamTower::canonical(&h, k).unwrap();
                let x = sharp_object(&h, &dr, n, k).unwrap();
                assert!(comparison_to_mhs(&x).unwrap().is_iso(), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn nodal_and_cuspidal() {
        let nodal = sharp_object(&MixedHodge::tate(0), &DeRhamTower::canonical(&MixedHodge::tate(0), 1).unwrap(), 1, 1).unwrap();
        assert_eq!(nodal, FormalHodge::embed_mhs(&MixedHodge::tate(0), 1, 0).unwrap());
        let cusp = DeRhamTower {
            tower: VecTower::with_zero_maps(vec![1]),
            rho: vec![GMatrix::zeros(0, 1)],
            aug: GMatrix::zeros(1, 0),
        };
        let c = sharp_object(&MixedHodge::zero(), &cusp, 1, 1).unwrap();
        assert_eq!(c.vo_subspaces()[0].dim(), 1);
    }

    #[test]
    fn surface_reduction() {
        let h = elliptic().tate_twist(-1).direct_sum(&elliptic().tate_twist(-1));
        let base = DeRhamTower::canonical(&h, 2).unwrap();
        let extra = 1;
        let dr = DeRhamTower {
            tower: VecTower::new(
                vec![base.tower.dim(1), base.tower.dim(2) + extra],
                vec![base.tower.v(2).hstack(&GMatrix::zeros(base.tower.dim(1), extra))],
            )
            .unwrap(),
            rho: vec![base.rho[0].clone(), base.rho[1].hstack(&GMatrix::zeros(base.tower.dim(2), extra))],
            aug: base.aug.vstack(&GMatrix::from_fn(extra, 4, |_, c| GaussScalar::from_int(c as i64))),
        };
        let x = albanese_input(&h, &dr, 2).unwrap();
        assert_eq!((x.n, x.dim(2)), (2, 3));
        assert!(albanese_reduction_iso(&h, &dr, 2).unwrap().is_iso());
    }

    #[test]
    fn functorial_in_the_data() {
        let h = elliptic();
        let a = SharpData {
            h: h.clone(),
            dr: DeRhamTower::canonical(&h, 1).unwrap(),
            n: 1,
        };
        let two = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        let f = sharp_morphism(&a, &a, &two, &[GMatrix::identity(1).scale(&GaussScalar::from_int(2))]).unwrap();
        let g = f.compose(&f);
        let ff = sharp_morphism(&a, &a, &IntMatrix::from_i64(&[&[4, 0], &[0, 4]]), &[GMatrix::identity(1).scale(&GaussScalar::from_int(4))]).unwrap();
        assert!(g.same_as(&ff));
        assert!(sharp_morphism(&a, &a, &two, &[GMatrix::identity(1)]).is_err());
    }
}
