//! Extensions in `FHS_n`: the tilde construction realizing MHS classes,
//! formal Jacobians, `Ext^1(Z(-p), -)` and the generalized Albanese groups
//! of Esnault-Srinivas-Viehweg and Faltings-Wüstholz.

use crate::error::{Error, Result};
use crate::exact::{canonical_subspace, image_subspace, kernel_subspace, GMatrix, GaussScalar, IntMatrix, Subspace};
use crate::fhs::{section, FhsMorphism, FormalHodge, ShortExact};
use crate::lie::{lattice_basis, Fingerprint, LiePresentation, LieQuotient};
use crate::mhs::{carlson_extension, jp_quotient, recover_carlson_parameter, CarlsonExt, MixedHodge};
use crate::vecn::VecTower;

/// Parameters of an extension `0 -> y -> E -> x -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClassFHS {
    /// Carlson parameter `H_x -> H_y` of the lattice part, in `W_0 Hom`.
    pub theta_mhs: GMatrix,
    /// `H_x -> V^o_n(y)`: how the new lattice vectors move inside the fibers.
    pub theta_v: GMatrix,
}

impl ExtClassFHS {
    pub fn split(x: &FormalHodge, y: &FormalHodge) -> Self {
        ExtClassFHS {
            theta_mhs: GMatrix::zeros(y.rank(), x.rank()),
            theta_v: GMatrix::zeros(y.dim(y.n), x.rank()),
        }
    }
}

fn require_free(x: &FormalHodge, what: &str) -> Result<()> {
    if x.h_et.is_torsion_free() {
        Ok(())
    } else {
        Err(Error::Torsion(format!("{what} has torsion {:?}", x.h_et.lattice().torsion)))
    }
}

/// A linear lift `L: H_C -> V_n` with `pi_n L = q_n`.
fn fiber_lift(y: &FormalHodge) -> GMatrix {
    let n = y.n;
    &section(&y.pi[n - 1]) * &y.q(n)
}

/// The extension of `x` by `y` with the given class: lattice `H_y (+) H_x`
/// with `F_theta`, towers `V_y (+) V_x`, and augmentation
/// `(a, b) -> (h_y a - L theta b + theta_v b, h_x b)`.
pub fn build_ext_middle(x: &FormalHodge, y: &FormalHodge, cls: &ExtClassFHS) -> Result<ShortExact> {
    require_free(x, "quotient")?;
    require_free(y, "sub-object")?;
    x.check()?;
    y.check()?;
    if (x.n, x.twist) != (y.n, y.twist) {
        return Err(Error::Level("extension of objects at different levels or twists".into()));
    }
    let n = x.n;
    let (rx, ry) = (x.rank(), y.rank());
    if cls.theta_v.shape() != (y.dim(n), rx) {
        return Err(Error::Dimension(format!(
            "theta_v must be {}x{rx}, got {:?}",
            y.dim(n),
            cls.theta_v.shape()
        )));
    }
    if !(&y.pi[n - 1] * &cls.theta_v).is_zero() {
        return Err(Error::Hypothesis("theta_v must land in V^o_n".into()));
    }
    let carlson = CarlsonExt::new(&x.h_et, &y.h_et)?;
    if carlson.coordinates(&cls.theta_mhs).is_none() {
        return Err(Error::Hypothesis("theta_mhs is not in W_0 Hom(H_x, H_y)".into()));
    }
    let h = carlson_extension(&y.h_et, &x.h_et, &cls.theta_mhs)?;

    // `H/F_theta -> H_y/F (+) H_x/F`, `(a, b) -> ([a - theta b], [b])`.
    let untwist = GMatrix::identity(ry)
        .hstack(&-&cls.theta_mhs)
        .vstack(&GMatrix::zeros(rx, ry).hstack(&GMatrix::identity(rx)));
    let pi = (1..=n)
        .map(|j| {
            let split = y.q(j).block_diag(&x.q(j));
            let m = &(&split * &untwist) * &section(&h.f(x.hodge_index(j)).quotient_map());
            &m.inverse().expect("F_theta quotients split") * &y.pi[j - 1].block_diag(&x.pi[j - 1])
        })
        .collect();
    let glue = &cls.theta_v - &(&fiber_lift(y) * &cls.theta_mhs);
    let aug_et = y.aug_et.hstack(&glue).vstack(&GMatrix::zeros(x.dim(n), ry).hstack(&x.aug_et));
    let mid = FormalHodge::new(
        n,
        x.twist,
        h,
        y.ho_dim + x.ho_dim,
        y.tower.direct_sum(&x.tower),
        pi,
        aug_et,
        y.aug_o.block_diag(&x.aug_o),
    )?;
    let dims = |a: &FormalHodge, b: &FormalHodge, j: usize| (a.dim(j), b.dim(j));
    let incl = FhsMorphism {
        source: y.clone(),
        target: mid.clone(),
        f_et: IntMatrix::identity(ry).vstack(&IntMatrix::zeros(rx, ry)),
        f_o: GMatrix::identity(y.ho_dim).vstack(&GMatrix::zeros(x.ho_dim, y.ho_dim)),
        phi: (1..=n)
            .map(|j| {
                let (a, b) = dims(y, x, j);
                GMatrix::identity(a).vstack(&GMatrix::zeros(b, a))
            })
            .collect(),
    };
    let proj = FhsMorphism {
        source: mid,
        target: x.clone(),
        f_et: IntMatrix::zeros(rx, ry).hstack(&IntMatrix::identity(rx)),
        f_o: GMatrix::zeros(x.ho_dim, y.ho_dim).hstack(&GMatrix::identity(x.ho_dim)),
        phi: (1..=n)
            .map(|j| {
                let (a, b) = dims(y, x, j);
                GMatrix::zeros(b, a).hstack(&GMatrix::identity(b))
            })
            .collect(),
    };
    ShortExact::verified(incl, proj)
}

/// The forgetful image `gamma(E)`: a Carlson parameter for the lattice
/// part of a middle object in the standard form of [`build_ext_middle`].
/// Only its class is meaningful; `theta_v` depends on the representative.
pub fn forgetful_class(s: &ShortExact) -> Option<GMatrix> {
    recover_carlson_parameter(&s.middle().h_et, &s.sub().h_et, &s.quot().h_et)
}

/// Whether two Carlson parameters give the same class in `Ext^1_MHS(H_x, H_y)`.
pub fn same_mhs_class(x: &FormalHodge, y: &FormalHodge, t1: &GMatrix, t2: &GMatrix) -> Result<bool> {
    CarlsonExt::new(&x.h_et, &y.h_et)?
        .same_class(t1, t2)
        .ok_or_else(|| Error::Hypothesis("parameter outside W_0 Hom".into()))
}

/// A commutative Lie group `U / Z.Lambda` together with a vector subgroup
/// `S ⊆ U`: the extension `0 -> S -> U/Lambda -> U/(S + Lambda) -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieExtension {
    pub ambient: usize,
    pub sub_space: Subspace,
    /// Columns generate the discrete subgroup.
    pub lattice: GMatrix,
}

impl LieExtension {
    pub fn new(sub_space: Subspace, lattice: GMatrix) -> Result<Self> {
        let ambient = sub_space.ambient_dim();
        if lattice.rows() != ambient {
            return Err(Error::Dimension(format!(
                "lattice vectors have {} entries, ambient is {ambient}",
                lattice.rows()
            )));
        }
        Ok(LieExtension {
            ambient,
            sub_space,
            lattice,
        })
    }

    pub fn sub(&self) -> LiePresentation {
        LiePresentation::vector(self.sub_space.dim())
    }

    pub fn total(&self) -> LiePresentation {
        LieQuotient::new(Subspace::zero(self.ambient), self.lattice.clone()).presentation()
    }

    pub fn quot(&self) -> LiePresentation {
        LieQuotient::new(self.sub_space.clone(), self.lattice.clone()).presentation()
    }

    /// `S` meets the lattice trivially, so `S -> total` is injective.
    pub fn sub_is_injective(&self) -> bool {
        let q = self.sub_space.quotient_map();
        lattice_basis(&(&q * &self.lattice)).cols() == lattice_basis(&self.lattice).cols()
    }

    /// Dimensions add and the lattice passes unchanged to the quotient.
    pub fn is_additive(&self) -> bool {
        let (s, t, q) = (self.sub(), self.total(), self.quot());
        t.dim() == s.dim() + q.dim() && t.lattice_rank() == q.lattice_rank()
    }

    pub fn fingerprints(&self) -> [Fingerprint; 3] {
        [self.sub().fingerprint(), self.total().fingerprint(), self.quot().fingerprint()]
    }
}

/// `J^p_#(x) = V_p / h(H_et)` with sub `V^o_p` and quotient
/// `H_C / (F^p + H_Z)`.
pub fn formal_jacobian(x: &FormalHodge, p: usize) -> Result<LieExtension> {
    require_free(x, "lattice part")?;
    x.check()?;
    if p == 0 || p > x.n {
        return Err(Error::Level(format!("p = {p} outside 1..={}", x.n)));
    }
    let lattice = &x.down_map(p) * &x.aug_et;
    LieExtension::new(kernel_subspace(&x.pi[p - 1]), lattice)
}

/// `Ext^1_{FHS_p}(Z(-p), x)`: classes are the points `e in V_p` over
/// `W_{2p}`, modulo `h(W_{2p} H_Z)`; the sub is `V^o_p` and the quotient is
/// `Ext^1_MHS(Z(-p), H_et)`.
pub fn ext1_tate(x: &FormalHodge, p: usize) -> Result<LieExtension> {
    require_free(x, "lattice part")?;
    x.check()?;
    if x.n != p || x.twist != 0 {
        return Err(Error::Level(format!(
            "Ext^1(Z(-{p}), -) takes untwisted objects of level {p}, got level {} twist {}",
            x.n, x.twist
        )));
    }
    let (u, ints) = tate_domain(x, p)?;
    let sub = canonical_subspace(&u.coordinates(kernel_subspace(&x.pi[p - 1]).basis()).expect("V^o lies over 0"));
    let lattice = u
        .coordinates(&(&x.aug_et * &ints))
        .expect("lattice points lie over W_2p");
    LieExtension::new(sub, lattice)
}

/// `pi_p^{-1}(W_{2p} image) ⊆ V_p` and the integer points of `W_{2p}`.
fn tate_domain(x: &FormalHodge, p: usize) -> Result<(Subspace, GMatrix)> {
    let pe = p as i64;
    let w = x.h_et.w(2 * pe);
    let jq = jp_quotient(&x.h_et, pe)?;
    let ints = w.basis() * jq.lattice();
    let u = w.image(&x.q(p)).preimage(&x.pi[p - 1]);
    Ok((u, ints))
}

/// The extension `0 -> x -> E -> Z(-p) -> 0` whose class is the point `e`
/// of `V_p` (which must lie over `W_{2p}`).
pub fn tate_extension(x: &FormalHodge, p: usize, e: &[GaussScalar]) -> Result<ShortExact> {
    ext1_tate(x, p)?;
    let (u, _) = tate_domain(x, p)?;
    let ev = GMatrix::column(e.to_vec());
    if e.len() != x.dim(p) || !u.contains_columns(&ev) {
        return Err(Error::Hypothesis("the point does not lie over W_2p".into()));
    }
    let pe = p as i64;
    let w = x.h_et.w(2 * pe);
    let target = &x.pi[p - 1] * &ev;
    let wq = &x.q(p) * w.basis();
    let c = wq.solve(&target).expect("e lies over W_2p");
    let theta_mhs = -&(w.basis() * &c);
    let theta_v = &ev + &(&fiber_lift(x) * &theta_mhs);
    let z = FormalHodge::embed_mhs(&MixedHodge::tate(-pe), p, 0)?;
    build_ext_middle(&z, x, &ExtClassFHS { theta_mhs, theta_v })
}

/// Pushout of `e` along `alpha: S -> B` (columns indexed by the basis of
/// `S`): `(B (+) U) / {(alpha s, -s)}`, with the quotient unchanged.
pub fn push_lie_extension(e: &LieExtension, alpha: &GMatrix) -> Result<LieExtension> {
    let s = e.sub_space.dim();
    if alpha.cols() != s {
        return Err(Error::Dimension(format!("alpha has {} columns, sub has dim {s}", alpha.cols())));
    }
    let b = alpha.rows();
    let rel = alpha.vstack(&-e.sub_space.basis());
    let q = canonical_subspace(&rel).quotient_map();
    let sub = image_subspace(&(&q * &GMatrix::identity(b).vstack(&GMatrix::zeros(e.ambient, b))));
    let lattice = &q * &GMatrix::zeros(b, e.lattice.cols()).vstack(&e.lattice);
    LieExtension::new(sub, lattice)
}

/// Fingerprints of one group computed along two independent routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoRoute {
    pub via_ext: Fingerprint,
    pub direct: Fingerprint,
}

impl TwoRoute {
    pub fn passes(&self) -> bool {
        self.via_ext == self.direct
    }
}

#[derive(Clone, Debug)]
pub struct EsvResult {
    pub group: LiePresentation,
    pub routes: TwoRoute,
}

/// `ESV = V_d / H_Z` for a level-reduced sharp object, certified against
/// `Ext^1_{FHS_d}(Z(-d), -)`.
pub fn esv_albanese(sharp: &FormalHodge, d: usize) -> Result<EsvResult> {
    if sharp.n != d {
        return Err(Error::Hypothesis(format!("expected a level-{d} object, got level {}", sharp.n)));
    }
    let ext = ext1_tate(sharp, d)?.total();
    let direct = LieQuotient::new(Subspace::zero(sharp.dim(d)), sharp.aug_et.clone()).presentation();
    Ok(EsvResult {
        routes: TwoRoute {
            via_ext: ext.fingerprint(),
            direct: direct.fingerprint(),
        },
        group: direct,
    })
}

#[derive(Clone, Debug)]
pub struct FwResult {
    pub group: LieExtension,
    /// Present when a level-1 object was supplied for comparison.
    pub routes: Option<TwoRoute>,
}

/// `FW(Z)`: the push-forward of the universal vector extension of the
/// Serre Albanese along `alpha_Z`, the transpose of `Z ⊆ H^1(X, O)`.
pub fn fw_albanese(serre: &LieExtension, z_incl: &GMatrix, level_one: Option<&FormalHodge>) -> Result<FwResult> {
    if z_incl.rows() != serre.sub_space.dim() {
        return Err(Error::Dimension(format!(
            "Z sits in a space of dim {}, the vector part has dim {}",
            z_incl.rows(),
            serre.sub_space.dim()
        )));
    }
    if !z_incl.is_injective() {
        return Err(Error::Hypothesis("the map defining Z is not an inclusion".into()));
    }
    let group = push_lie_extension(serre, &z_incl.transpose())?;
    let routes = match level_one {
        Some(x) => Some(TwoRoute {
            via_ext: ext1_tate(x, 1)?.total().fingerprint(),
            direct: group.total().fingerprint(),
        }),
        None => None,
    };
    Ok(FwResult { group, routes })
}

/// `0 -> (0, D) -> (H, V) -> (H, H_C/F) -> 0` with `V_i = H_C/F^i (+) D_i`,
/// `D` carrying zero transition maps. `glue[i - 2]` is the block
/// `H_C/F^i -> D_{i-1}` of `v_i`; `aug_glue: H_C -> D_n` perturbs `h`.
pub fn build_deformation_extension(
    h: &MixedHodge,
    dims: &[usize],
    glue: &[GMatrix],
    aug_glue: &GMatrix,
) -> Result<ShortExact> {
    h.check()?;
    let n = dims.len();
    if n == 0 {
        return Err(Error::Level("need at least one index".into()));
    }
    let base = FormalHodge::embed_mhs(h, n, 0)?;
    let d = VecTower::with_zero_maps(dims.to_vec());
    if glue.len() + 1 != n {
        return Err(Error::Dimension(format!("expected {} glue maps, got {}", n - 1, glue.len())));
    }
    for i in 2..=n {
        if glue[i - 2].shape() != (dims[i - 2], base.dim(i)) {
            return Err(Error::Dimension(format!("glue at index {i} has shape {:?}", glue[i - 2].shape())));
        }
    }
    if aug_glue.shape() != (dims[n - 1], h.rank()) {
        return Err(Error::Dimension(format!("augmentation glue has shape {:?}", aug_glue.shape())));
    }
    let maps = (2..=n)
        .map(|i| {
            let top = base.tower.v(i).hstack(&GMatrix::zeros(base.dim(i - 1), dims[i - 1]));
            top.vstack(&glue[i - 2].hstack(&GMatrix::zeros(dims[i - 2], dims[i - 1])))
        })
        .collect();
    let tdims: Vec<usize> = (1..=n).map(|i| base.dim(i) + dims[i - 1]).collect();
    let mid = FormalHodge::new(
        n,
        0,
        h.clone(),
        0,
        VecTower::new(tdims, maps)?,
        (1..=n)
            .map(|i| GMatrix::identity(base.dim(i)).hstack(&GMatrix::zeros(base.dim(i), dims[i - 1])))
            .collect(),
        base.aug_et.vstack(aug_glue),
        GMatrix::zeros(base.dim(n) + dims[n - 1], 0),
    )?;
    let sub = FormalHodge::embed_vecn(&d, 0);
    let incl = FhsMorphism {
        source: sub.clone(),
        target: mid.clone(),
        f_et: IntMatrix::zeros(h.rank(), 0),
        f_o: GMatrix::zeros(0, 0),
        phi: (1..=n)
            .map(|i| GMatrix::zeros(base.dim(i), dims[i - 1]).vstack(&GMatrix::identity(dims[i - 1])))
            .collect(),
    };
    let proj = FhsMorphism {
        source: mid,
        target: base.clone(),
        f_et: IntMatrix::identity(h.rank()),
        f_o: GMatrix::zeros(0, 0),
        phi: (1..=n)
            .map(|i| GMatrix::identity(base.dim(i)).hstack(&GMatrix::zeros(base.dim(i), dims[i - 1])))
            .collect(),
    };
    ShortExact::verified(incl, proj)
}
