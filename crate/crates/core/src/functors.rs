//! Tate twist and the two level-raising functors `iota` and `tau`, with
//! their quasi-inverses on the essential image.

use crate::error::{Error, Result};
use crate::exact::{canonical_subspace, pullback, GMatrix, IntMatrix, Pullback};
use crate::fhs::{FhsMorphism, FormalHodge};

/// `x(k)`: the lattice part is twisted and the slots are relabelled, so the
/// tower itself is untouched.
pub fn twist_fhs(x: &FormalHodge, k: i64) -> FormalHodge {
    let mut y = x.clone();
    y.h_et = x.h_et.tate_twist(k);
    y.twist = x.twist + k;
    y
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shift {
    Iota,
    Tau,
}

/// Data certifying that an object of level `n + k` comes from level `n`.
///
/// For `Iota`, `map` is `alpha: F^n H_C -> H^o`. For `Tau` it is the
/// comparison `V_{n+1} -> V_n (+) H_C`, an isomorphism onto the fiber product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelShiftWitness {
    pub kind: Shift,
    pub k: usize,
    pub map: GMatrix,
}

fn cond(condition: char, detail: impl Into<String>) -> Error {
    Error::ImageCondition {
        condition,
        detail: detail.into(),
    }
}

/// `V_n x_{H/F^n} H_C`, the new top slot for both functors.
fn top_pullback(x: &FormalHodge) -> Result<Pullback> {
    pullback(&x.pi[x.n - 1], &x.q(x.n))
}

fn raise(x: &FormalHodge, p: &Pullback, ho_dim: usize, aug_o: GMatrix) -> FormalHodge {
    let n = x.n;
    let mut dims = x.tower.dims().to_vec();
    dims.push(p.dim());
    let mut maps = x.tower.maps().to_vec();
    maps.push(p.proj_a.clone());
    let mut pi = x.pi.clone();
    pi.push(&x.q(n + 1) * &p.proj_b);
    let aug_et = p
        .coordinates(&x.aug_et, &GMatrix::identity(x.rank()))
        .expect("the augmentation square commutes");
    let y = FormalHodge {
        n: n + 1,
        twist: x.twist,
        h_et: x.h_et.clone(),
        ho_dim,
        tower: crate::vecn::VecTower::new(dims, maps).expect("shapes match"),
        pi,
        aug_et,
        aug_o,
    };
    debug_assert!(y.validate().is_valid(), "{}", y.validate());
    y
}

/// One step of `iota`. Also returns `alpha` and the projection `H'^o -> H^o`.
fn iota_step(x: &FormalHodge) -> Result<(FormalHodge, GMatrix, GMatrix)> {
    let n = x.n;
    let fb = x.f_sub(n);
    let p = top_pullback(x)?;
    let ho = pullback(&x.aug_o, &p.proj_a)?;
    let in_p = p
        .coordinates(&GMatrix::zeros(x.dim(n), fb.dim()), fb.basis())
        .expect("F^n lies over zero");
    let alpha = ho
        .coordinates(&GMatrix::zeros(x.ho_dim, fb.dim()), &in_p)
        .expect("F^n lies over zero");
    let y = raise(x, &p, ho.dim(), ho.proj_b.clone());
    Ok((y, alpha, ho.proj_a))
}

fn tau_step(x: &FormalHodge) -> Result<FormalHodge> {
    if !x.is_special() {
        return Err(Error::NotSpecial("tau needs h^o to vanish in H_C/F^n".into()));
    }
    let p = top_pullback(x)?;
    let aug_o = p
        .coordinates(&x.aug_o, &GMatrix::zeros(x.rank(), x.ho_dim))
        .expect("special objects map H^o into the kernel of pi_n");
    Ok(raise(x, &p, x.ho_dim, aug_o))
}

struct Raised {
    object: FormalHodge,
    witness: LevelShiftWitness,
    /// `H^o` of the output projected to `H^o` of the input.
    ho_back: GMatrix,
}

fn raise_k(x: &FormalHodge, kind: Shift, k: usize) -> Result<Raised> {
    x.check()?;
    let n = x.n;
    let mut y = x.clone();
    let mut alpha = GMatrix::zeros(x.ho_dim, x.f_sub(n).dim());
    let mut ho_back = GMatrix::identity(x.ho_dim);
    for step in 0..k {
        match kind {
            Shift::Iota => {
                let (next, a, back) = iota_step(&y)?;
                alpha = if step == 0 {
                    a
                } else {
                    back.solve(&alpha).expect("higher steps do not change H^o")
                };
                ho_back = &ho_back * &back;
                y = next;
            }
            Shift::Tau => y = tau_step(&y)?,
        }
    }
    let map = match kind {
        Shift::Iota => alpha,
        Shift::Tau if k > 0 => tau_comparison(&y, n),
        Shift::Tau => GMatrix::zeros(0, 0),
    };
    Ok(Raised {
        object: y,
        witness: LevelShiftWitness { kind, k, map },
        ho_back,
    })
}

/// `iota_k(x)` together with its canonical witness.
pub fn iota_fhs(x: &FormalHodge, k: usize) -> Result<(FormalHodge, LevelShiftWitness)> {
    raise_k(x, Shift::Iota, k).map(|r| (r.object, r.witness))
}

/// `tau_k(x)`; fails with `NotSpecial` unless `x` is special.
pub fn tau_fhs(x: &FormalHodge, k: usize) -> Result<(FormalHodge, LevelShiftWitness)> {
    raise_k(x, Shift::Tau, k).map(|r| (r.object, r.witness))
}

fn tau_comparison(y: &FormalHodge, n: usize) -> GMatrix {
    let s = crate::fhs::section(&y.q(n + 1));
    y.tower.v(n + 1).vstack(&(&s * &y.pi[n]))
}

/// Conditions (a) and (b): the lattice part has level `<= n` and the
/// tower is constant above `n + 1`.
fn check_ab(y: &FormalHodge, k: usize) -> Result<usize> {
    y.check()?;
    if k == 0 || k >= y.n {
        return Err(Error::Level(format!("cannot lower level {} by {k}", y.n)));
    }
    let n = y.n - k;
    if !y.h_et.in_level(n, y.twist) {
        return Err(cond('a', format!("the Hodge filtration has level > {n}")));
    }
    for m in n + 2..=y.n {
        if !y.tower.v(m).is_invertible() {
            return Err(cond('b', format!("v_{m}: V_{m} -> V_{} is not an isomorphism", m - 1)));
        }
    }
    Ok(n)
}

/// Condition (c) for `iota`, given `j = h^o alpha` pushed down to `V_{n+1}`.
fn check_iota_row(y: &FormalHodge, n: usize, j: &GMatrix) -> Result<()> {
    let fb = y.f_sub(n);
    let v = y.tower.v(n + 1);
    if &y.pi[n] * j != &y.q(n + 1) * fb.basis() {
        return Err(cond('c', "h^o alpha does not lift the inclusion of F^n"));
    }
    if !(v * j).is_zero() {
        return Err(cond('c', format!("h^o alpha does not land in the kernel of v_{}", n + 1)));
    }
    if j.rank() != fb.dim() || canonical_subspace(j) != crate::exact::kernel_subspace(v) {
        return Err(cond('c', format!("F^n -> V_{} -> V_{n} is not exact in the middle", n + 1)));
    }
    if !v.is_surjective() {
        return Err(cond('c', format!("v_{} is not surjective", n + 1)));
    }
    Ok(())
}

fn check_tau_square(y: &FormalHodge, n: usize, comparison: &GMatrix) -> Result<()> {
    let fiber = pullback(&y.pi[n - 1], &y.q(n))?;
    if !comparison.is_injective() || comparison.rank() != fiber.dim() || !fiber.space.contains_columns(comparison) {
        return Err(cond('c', format!("V_{} is not the fiber product H_C x_(H/F^{n}) V_{n}", n + 1)));
    }
    Ok(())
}

/// Decides membership in the essential image of `iota_k` or `tau_k`,
/// returning a witness or the first failing condition.
pub fn in_image(y: &FormalHodge, kind: Shift, k: usize) -> Result<LevelShiftWitness> {
    let n = check_ab(y, k)?;
    match kind {
        Shift::Iota => {
            let fb = y.f_sub(n);
            let stacked = y.pi[n].vstack(y.tower.v(n + 1));
            let rhs = (&y.q(n + 1) * fb.basis()).vstack(&GMatrix::zeros(y.dim(n), fb.dim()));
            let j = stacked
                .solve(&rhs)
                .ok_or_else(|| cond('c', "the inclusion of F^n does not lift to the kernel of v"))?;
            check_iota_row(y, n, &j)?;
            let ho_to = &y.down_map(n + 1) * &y.aug_o;
            let alpha = ho_to.solve(&j).ok_or_else(|| cond('c', "the lift of F^n does not come from H^o"))?;
            Ok(LevelShiftWitness { kind, k, map: alpha })
        }
        Shift::Tau => {
            if !y.is_special() {
                return Err(Error::NotSpecial("the image of tau consists of special objects".into()));
            }
            let c = tau_comparison(y, n);
            check_tau_square(y, n, &c)?;
            Ok(LevelShiftWitness { kind, k, map: c })
        }
    }
}

/// The quasi-inverse on the essential image, driven by a witness.
pub fn shift_down(y: &FormalHodge, w: &LevelShiftWitness) -> Result<FormalHodge> {
    let n = check_ab(y, w.k)?;
    let down = y.down_map(n);
    let (ho_dim, aug_o) = match w.kind {
        Shift::Iota => {
            let fb = y.f_sub(n);
            if w.map.shape() != (y.ho_dim, fb.dim()) {
                return Err(Error::Dimension(format!(
                    "alpha must be {}x{}, got {}x{}",
                    y.ho_dim,
                    fb.dim(),
                    w.map.rows(),
                    w.map.cols()
                )));
            }
            let j = &(&y.down_map(n + 1) * &y.aug_o) * &w.map;
            check_iota_row(y, n, &j)?;
            let qa = canonical_subspace(&w.map).quotient_map();
            let aug = &(&down * &y.aug_o) * &crate::fhs::section(&qa);
            (qa.rows(), aug)
        }
        Shift::Tau => {
            if !y.is_special() {
                return Err(Error::NotSpecial("the image of tau consists of special objects".into()));
            }
            check_tau_square(y, n, &tau_comparison(y, n))?;
            (y.ho_dim, &down * &y.aug_o)
        }
    };
    let x = FormalHodge {
        n,
        twist: y.twist,
        h_et: y.h_et.clone(),
        ho_dim,
        tower: crate::vecn::VecTower::new(y.tower.dims()[..n].to_vec(), y.tower.maps()[..n - 1].to_vec())?,
        pi: y.pi[..n].to_vec(),
        aug_et: &down * &y.aug_et,
        aug_o,
    };
    x.check()?;
    Ok(x)
}

/// The isomorphism `shift_down(shift_up(x)) -> x`, checked in both directions.
pub fn round_trip_iso(x: &FormalHodge, kind: Shift, k: usize) -> Result<FhsMorphism> {
    let r = raise_k(x, kind, k)?;
    let back = shift_down(&r.object, &r.witness)?;
    let f_o = match kind {
        Shift::Iota => {
            let qa = canonical_subspace(&r.witness.map).quotient_map();
            &r.ho_back * &crate::fhs::section(&qa)
        }
        Shift::Tau => GMatrix::identity(x.ho_dim),
    };
    let iso = FhsMorphism::new(
        back.clone(),
        x.clone(),
        IntMatrix::identity(x.h_et.lattice().ngens()),
        f_o,
        (1..=x.n).map(|j| GMatrix::identity(x.dim(j))).collect(),
    )?;
    let inv = iso
        .inverse()
        .ok_or_else(|| Error::InvalidMorphism("round trip comparison is not invertible".into()))?;
    debug_assert!(iso.compose(&inv).same_as(&FhsMorphism::identity(x)));
    Ok(iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fhs::tests::elliptic;
    use crate::mhs::MixedHodge;
    use crate::random::{FhsShape, Gen};

    #[test]
    fn elliptic_iota_adds_f1() {
        let e = FormalHodge::embed_mhs(&elliptic(), 1, 0).unwrap();
        let (y, w) = iota_fhs(&e, 1).unwrap();
        assert_eq!(y.tower.dims(), &[1, 2]);
        assert_eq!(y.ho_dim, 1);
        assert_eq!(w.map.shape(), (1, 1));
        assert_eq!(in_image(&y, Shift::Iota, 1).unwrap().k, 1);
        assert!(round_trip_iso(&e, Shift::Iota, 1).unwrap().is_iso());
        let (t, _) = tau_fhs(&e, 1).unwrap();
        assert_eq!((t.tower.dims(), t.ho_dim), (&[1usize, 2][..], 0));
    }

    #[test]
    fn degenerate_filtration_gives_equal_functors() {
        let z = FormalHodge::embed_mhs(&MixedHodge::tate(0), 1, 0).unwrap();
        let (i, _) = iota_fhs(&z, 2).unwrap();
        let (t, _) = tau_fhs(&z, 2).unwrap();
        assert_eq!(i, t);
        assert_eq!(i.tower.dims(), &[1, 1, 1]);
    }

    #[test]
    fn conditions_are_named() {
        let e = FormalHodge::embed_mhs(&elliptic().tate_twist(-1), 2, 0).unwrap();
        let err = in_image(&e, Shift::Iota, 1).unwrap_err();
        assert!(matches!(err, Error::ImageCondition { condition: 'a', .. }), "{err}");
        let (y, w) = iota_fhs(&FormalHodge::embed_mhs(&MixedHodge::tate(0), 1, 0).unwrap(), 2).unwrap();
        let extra = FormalHodge::embed_vecn(&crate::vecn::VecTower::with_zero_maps(vec![0, 0, 1]), 0);
        let y = y.direct_sum(&extra).unwrap();
        let err = shift_down(&y, &w).unwrap_err();
        assert!(matches!(err, Error::ImageCondition { condition: 'b', .. }), "{err}");
        let mut nsp = FormalHodge::embed_mhs(&elliptic(), 1, 0).unwrap();
        nsp.ho_dim = 1;
        nsp.aug_o = GMatrix::identity(1);
        assert!(matches!(tau_fhs(&nsp, 1), Err(Error::NotSpecial(_))));
    }

    #[test]
    fn random_round_trips() {
        let mut g = Gen::new(11);
        for level in 1..=2 {
            for _ in 0..6 {
                let x = g.fhs(&FhsShape::small(level));
                for k in 1..=2 {
                    let (y, _) = iota_fhs(&x, k).unwrap();
                    assert!(in_image(&y, Shift::Iota, k).is_ok());
                    assert!(round_trip_iso(&x, Shift::Iota, k).unwrap().is_iso());
                    if x.is_special() {
                        let (t, _) = tau_fhs(&x, k).unwrap();
                        assert!(in_image(&t, Shift::Tau, k).is_ok());
                        assert_eq!(shift_down(&t, &in_image(&t, Shift::Tau, k).unwrap()).unwrap(), x);
                    }
                }
            }
        }
    }

    #[test]
    fn twist_relabels() {
        let e = FormalHodge::embed_mhs(&elliptic(), 1, 0).unwrap();
        let t = twist_fhs(&e, 1);
        assert!(t.validate().is_valid());
        assert_eq!(t.tower, e.tower);
        assert_eq!(twist_fhs(&t, -1), e);
    }
}
