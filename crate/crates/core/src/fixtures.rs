//! The shipped fixture corpus. Every file under `data/` is the printed form
//! of one value built here, so the corpus can be regenerated and checked.

use crate::error::Result;
use crate::exact::{canonical_subspace, GMatrix, GaussScalar};
use crate::ext::LieExtension;
use crate::fhs::FormalHodge;
use crate::io::{print_payload, DrRecord, Payload};
use crate::mhs::{carlson_extension, MixedHodge};
use crate::random::{FhsShape, Gen};
use crate::sharp::{sharp_object, DeRhamTower};
use crate::vecn::VecTower;

fn half() -> GaussScalar {
    GaussScalar::from_ratio(1, 2)
}

/// `H^1` of the elliptic curve with period `i`: weight 1, `F^1 = <(1, i)>`.
pub fn elliptic_i() -> MixedHodge {
    let f = GMatrix::column(vec![GaussScalar::one(), GaussScalar::i()]);
    MixedHodge::pure(2, 1, vec![(0, GMatrix::identity(2)), (1, f)]).expect("E_i is a valid structure")
}

/// Nodal cubic: `H^1 = Z(0)` and `H^1(X, O) = C`, glued by the identity.
pub fn nodal_cubic() -> DrRecord {
    let h = MixedHodge::tate(0);
    DrRecord {
        dr: DeRhamTower::canonical(&h, 1).expect("level 1"),
        h,
        n: 1,
        connecting: None,
    }
}

/// Cuspidal cubic: `H^1 = 0` while `H^1(X, O) = C` survives.
pub fn cuspidal_cubic() -> DrRecord {
    DrRecord {
        h: MixedHodge::zero(),
        dr: DeRhamTower {
            tower: VecTower::with_zero_maps(vec![1]),
            rho: vec![GMatrix::zeros(0, 1)],
            aug: GMatrix::zeros(1, 0),
        },
        n: 1,
        connecting: None,
    }
}

pub fn elliptic_sharp() -> DrRecord {
    let h = elliptic_i();
    DrRecord {
        dr: DeRhamTower::canonical(&h, 1).expect("level 1"),
        h,
        n: 1,
        connecting: None,
    }
}

/// A surface with `H^3 = E_i(-1) (+) E_i(-1)` whose second de Rham space
/// carries one extra dimension beyond `H_C / F^2`.
pub fn surface() -> DrRecord {
    let e = elliptic_i().tate_twist(-1);
    let h = e.direct_sum(&e);
    let base = DeRhamTower::canonical(&h, 2).expect("level 3 structure truncates at 2");
    let (d1, d2) = (base.tower.dim(1), base.tower.dim(2));
    let dr = DeRhamTower {
        tower: VecTower::new(vec![d1, d2 + 1], vec![base.tower.v(2).hstack(&GMatrix::zeros(d1, 1))])
            .expect("shapes match"),
        rho: vec![base.rho[0].clone(), base.rho[1].hstack(&GMatrix::zeros(d2, 1))],
        aug: base.aug.vstack(&GMatrix::from_i64(&[&[0, 1, 2, 3]])),
    };
    DrRecord {
        h,
        dr,
        n: 3,
        connecting: None,
    }
}

/// `E_i` minus `points` points (1 or 2). With two points `H^1(U)` is the
/// extension of `Z(-1)` by `E_i`, `V_1` gains a direction in `ker pi_1`
/// and the connecting map kills exactly that direction.
pub fn punctured_elliptic(points: usize) -> DrRecord {
    if points <= 1 {
        let mut r = elliptic_sharp();
        r.connecting = Some(GMatrix::identity(1));
        return r;
    }
    let theta = GMatrix::column(vec![half(), GaussScalar::zero()]);
    let h = carlson_extension(&elliptic_i(), &MixedHodge::tate(-1), &theta).expect("weights -1 Hom lies in W_0");
    let base = DeRhamTower::canonical(&h, 1).expect("level 1");
    let dr = DeRhamTower {
        tower: VecTower::with_zero_maps(vec![2]),
        rho: vec![GMatrix::from_i64(&[&[1, 0]])],
        aug: base.aug.vstack(&GMatrix::from_i64(&[&[0, 1, 0]])),
    };
    DrRecord {
        h,
        dr,
        n: 1,
        connecting: Some(GMatrix::from_i64(&[&[1, 0]])),
    }
}

/// The level-1 object of `E_i` minus `points` points used to certify the
/// Fakhruddin-style Albanese: `h_et = H^1(U)(1)^dual` and
/// `V_1 = H_C / F^1 (+) K^dual`.
pub fn fw_level_one(points: usize) -> FormalHodge {
    if points <= 1 {
        return FormalHodge::embed_mhs(&elliptic_i(), 1, 0).expect("E_i has level 1");
    }
    let theta = GMatrix::from_fn(1, 2, |_, c| if c == 0 { half() } else { GaussScalar::zero() });
    let h = carlson_extension(&MixedHodge::tate(0), &elliptic_i(), &theta).expect("weight -1 Hom lies in W_0");
    let q = h.f(1).quotient_map();
    FormalHodge {
        n: 1,
        twist: 0,
        ho_dim: 0,
        tower: VecTower::with_zero_maps(vec![3]),
        pi: vec![GMatrix::identity(2).hstack(&GMatrix::zeros(2, 1))],
        aug_et: q.vstack(&GMatrix::from_i64(&[&[0, 1, 0]])),
        aug_o: GMatrix::zeros(3, 0),
        h_et: h,
    }
}

/// `Ser(U)^natural` with its vector part `omega`. One puncture gives the
/// universal vector extension of `E_i`, `C^2 / H_Z` with `omega = F^1`;
/// two punctures give the total space of the level-1 object with `omega`
/// the `K^dual` direction.
pub fn serre_extension(points: usize) -> LieExtension {
    let (omega, lattice) = if points <= 1 {
        (GMatrix::column(vec![GaussScalar::one(), GaussScalar::i()]), GMatrix::identity(2))
    } else {
        (GMatrix::from_i64(&[&[0], &[0], &[1]]), fw_level_one(points).aug_et)
    };
    LieExtension::new(canonical_subspace(&omega), lattice).expect("shapes match")
}

/// `Z = K` inside `H^1(X, O)`: zero for one puncture, everything for two.
pub fn fw_z(points: usize) -> GMatrix {
    if points <= 1 {
        GMatrix::zeros(1, 0)
    } else {
        GMatrix::identity(1)
    }
}

pub fn nodal_cubic_fhs() -> Result<FormalHodge> {
    let r = nodal_cubic();
    sharp_object(&r.h, &r.dr, 1, 1)
}

pub fn cuspidal_cubic_fhs() -> Result<FormalHodge> {
    let r = cuspidal_cubic();
    sharp_object(&r.h, &r.dr, 1, 1)
}

/// A seeded level-2 object with non-zero `H^o`, `V^o` and lattice that
/// is not special: a generic input for `decompose`, `k0` and `shift-level`.
pub fn generic_level_two() -> FormalHodge {
    let shape = FhsShape {
        special: Some(false),
        ..FhsShape::small(2)
    };
    (0..)
        .map(|seed| Gen::new(seed).fhs(&shape))
        .find(|x| x.ho_dim > 0 && x.rank() > 0 && !x.is_special() && x.vo_subspaces().iter().all(|v| v.dim() > 0))
        .expect("some seed qualifies")
}

/// Every shipped file name with its content value.
pub fn corpus() -> Vec<(&'static str, Payload)> {
    vec![
        ("elliptic.mhs", Payload::Mhs(elliptic_i())),
        ("elliptic.fhs", Payload::Fhs(FormalHodge::embed_mhs(&elliptic_i(), 1, 0).expect("level 1"))),
        ("elliptic.sharp", Payload::Dr(elliptic_sharp())),
        ("nodal-cubic.fhs", Payload::Fhs(nodal_cubic_fhs().expect("valid data"))),
        ("nodal-cubic.sharp", Payload::Dr(nodal_cubic())),
        ("cuspidal-cubic.fhs", Payload::Fhs(cuspidal_cubic_fhs().expect("valid data"))),
        ("cuspidal-cubic.sharp", Payload::Dr(cuspidal_cubic())),
        ("generic-level2.fhs", Payload::Fhs(generic_level_two())),
        ("surface-d2.sharp", Payload::Dr(surface())),
        ("surface-d2.tower", Payload::Tower(surface().dr.tower)),
        ("punctured-elliptic-1.sharp", Payload::Dr(punctured_elliptic(1))),
        ("punctured-elliptic-2.sharp", Payload::Dr(punctured_elliptic(2))),
        ("fw-elliptic-1.fhs", Payload::Fhs(fw_level_one(1))),
        ("fw-elliptic-1.lie", Payload::Lie(serre_extension(1))),
        ("fw-elliptic-1-z.subspace", Payload::Subspace(canonical_subspace(&fw_z(1)))),
        ("fw-elliptic-2.fhs", Payload::Fhs(fw_level_one(2))),
        ("fw-elliptic-2.lie", Payload::Lie(serre_extension(2))),
        ("fw-elliptic-2-z.subspace", Payload::Subspace(canonical_subspace(&fw_z(2)))),
    ]
}

/// Printed corpus, ready to write or compare byte for byte.
pub fn corpus_text() -> Vec<(&'static str, String)> {
    corpus().into_iter().map(|(name, p)| (name, print_payload(p))).collect()
}
