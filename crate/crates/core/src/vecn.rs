//! The category `Vec_n` of towers `V_n -> V_(n-1) -> ... -> V_1`.

use crate::error::{Error, Result};
use crate::exact::{canonical_subspace, induced_quotient_map, kernel_subspace, GMatrix, Subspace};

/// An object of `Vec_n`. Indices run from 1 to `n`; `v(i): V_i -> V_(i-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VecTower {
    dims: Vec<usize>,
    maps: Vec<GMatrix>,
}

impl VecTower {
    /// `dims[i - 1] = dim V_i` and `maps[i - 2] = v_i`.
    pub fn new(dims: Vec<usize>, maps: Vec<GMatrix>) -> Result<Self> {
        if maps.len() + 1 != dims.len().max(1) {
            return Err(Error::Dimension(format!(
                "{} spaces need {} maps, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (j, m) in maps.iter().enumerate() {
            let i = j + 2;
            if m.shape() != (dims[i - 2], dims[i - 1]) {
                return Err(Error::Dimension(format!(
                    "v_{i} has shape {:?}, expected ({}, {})",
                    m.shape(),
                    dims[i - 2],
                    dims[i - 1]
                )));
            }
        }
        Ok(VecTower { dims, maps })
    }

    pub fn zero(n: usize) -> Self {
        Self::with_zero_maps(vec![0; n])
    }

    /// Spaces of the given dimensions with all transition maps zero.
    pub fn with_zero_maps(dims: Vec<usize>) -> Self {
        let maps = (2..=dims.len()).map(|i| GMatrix::zeros(dims[i - 2], dims[i - 1])).collect();
        VecTower { dims, maps }
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i - 1]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `v_i: V_i -> V_(i-1)` for `2 <= i <= n`.
    pub fn v(&self, i: usize) -> &GMatrix {
        &self.maps[i - 2]
    }

    pub fn maps(&self) -> &[GMatrix] {
        &self.maps
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn direct_sum(&self, other: &VecTower) -> VecTower {
        assert_eq!(self.n(), other.n(), "towers of different length");
        VecTower {
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.block_diag(b)).collect(),
        }
    }

    /// Whether `subs[i - 1] ⊆ V_i` is carried into `subs[i - 2]` by every `v_i`.
    pub fn is_subtower(&self, subs: &[Subspace]) -> bool {
        subs.len() == self.n()
            && (1..=self.n()).all(|i| subs[i - 1].ambient_dim() == self.dim(i))
            && (2..=self.n()).all(|i| subs[i - 2].contains(&subs[i - 1].image(self.v(i))))
    }

    /// The subtower on the given subspaces and its inclusion.
    pub fn subtower(&self, subs: &[Subspace]) -> Result<TowerMorphism> {
        if !self.is_subtower(subs) {
            return Err(Error::Dimension("subspaces do not form a subtower".into()));
        }
        let maps = (2..=self.n())
            .map(|i| {
                subs[i - 2]
                    .coordinates(&(self.v(i) * subs[i - 1].basis()))
                    .expect("subtower is stable")
            })
            .collect();
        let dims = subs.iter().map(Subspace::dim).collect();
        let tower = VecTower { dims, maps };
        Ok(TowerMorphism {
            source: tower,
            target: self.clone(),
            comps: subs.iter().map(|s| s.basis().clone()).collect(),
        })
    }

    /// The quotient by a subtower and its projection.
    pub fn quotient(&self, subs: &[Subspace]) -> Result<TowerMorphism> {
        if !self.is_subtower(subs) {
            return Err(Error::Dimension("subspaces do not form a subtower".into()));
        }
        let maps = (2..=self.n())
            .map(|i| induced_quotient_map(self.v(i), &subs[i - 1], &subs[i - 2]).expect("subtower is stable"))
            .collect();
        let comps: Vec<GMatrix> = subs.iter().map(Subspace::quotient_map).collect();
        let dims = comps.iter().map(GMatrix::rows).collect();
        Ok(TowerMorphism {
            source: self.clone(),
            target: VecTower { dims, maps },
            comps,
        })
    }

    /// `iota(V)`: repeats the top space with the identity.
    pub fn iota(&self) -> VecTower {
        let n = self.n();
        let mut dims = self.dims.clone();
        let mut maps = self.maps.clone();
        let top = dims.last().copied().unwrap_or(0);
        dims.push(top);
        if n > 0 {
            maps.push(GMatrix::identity(top));
        }
        VecTower { dims, maps }
    }

    /// `eta(V)`: puts a zero space on top.
    pub fn eta(&self) -> VecTower {
        let n = self.n();
        let mut dims = self.dims.clone();
        let mut maps = self.maps.clone();
        if n > 0 {
            maps.push(GMatrix::zeros(dims[n - 1], 0));
        }
        dims.push(0);
        VecTower { dims, maps }
    }

    /// Drops the top space.
    pub fn truncate(&self) -> VecTower {
        let n = self.n();
        VecTower {
            dims: self.dims[..n.saturating_sub(1)].to_vec(),
            maps: self.maps[..n.saturating_sub(2)].to_vec(),
        }
    }

    /// If `v_n` is an isomorphism, the level `n - 1` tower `W` with an
    /// isomorphism `iota(W) -> self`.
    pub fn in_iota_image(&self) -> Option<TowerMorphism> {
        let n = self.n();
        if n < 2 {
            return None;
        }
        let inv = self.v(n).inverse()?;
        let base = self.truncate();
        let mut comps: Vec<GMatrix> = (1..n).map(|i| GMatrix::identity(self.dim(i))).collect();
        comps.push(inv);
        Some(TowerMorphism {
            source: base.iota(),
            target: self.clone(),
            comps,
        })
    }

    pub fn in_eta_image(&self) -> bool {
        self.n() >= 2 && self.dim(self.n()) == 0
    }

    pub fn full_subspaces(&self) -> Vec<Subspace> {
        self.dims.iter().map(|&d| Subspace::full(d)).collect()
    }

    pub fn zero_subspaces(&self) -> Vec<Subspace> {
        self.dims.iter().map(|&d| Subspace::zero(d)).collect()
    }
}

/// A morphism of towers, `comps[i - 1] = f_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TowerMorphism {
    pub source: VecTower,
    pub target: VecTower,
    pub comps: Vec<GMatrix>,
}

impl TowerMorphism {
    pub fn new(source: VecTower, target: VecTower, comps: Vec<GMatrix>) -> Result<Self> {
        let f = TowerMorphism { source, target, comps };
        f.check()?;
        Ok(f)
    }

    pub fn check(&self) -> Result<()> {
        let n = self.source.n();
        if self.target.n() != n || self.comps.len() != n {
            return Err(Error::InvalidMorphism("tower lengths differ".into()));
        }
        for i in 1..=n {
            if self.comps[i - 1].shape() != (self.target.dim(i), self.source.dim(i)) {
                return Err(Error::InvalidMorphism(format!("f_{i} has the wrong shape")));
            }
        }
        for i in 2..=n {
            if &self.comps[i - 2] * self.source.v(i) != self.target.v(i) * &self.comps[i - 1] {
                return Err(Error::InvalidMorphism(format!("square at index {i} does not commute")));
            }
        }
        Ok(())
    }

    pub fn f(&self, i: usize) -> &GMatrix {
        &self.comps[i - 1]
    }

    pub fn identity(v: &VecTower) -> Self {
        TowerMorphism {
            source: v.clone(),
            target: v.clone(),
            comps: v.dims.iter().map(|&d| GMatrix::identity(d)).collect(),
        }
    }

    pub fn zero(source: &VecTower, target: &VecTower) -> Self {
        TowerMorphism {
            source: source.clone(),
            target: target.clone(),
            comps: (1..=source.n()).map(|i| GMatrix::zeros(target.dim(i), source.dim(i))).collect(),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &TowerMorphism) -> TowerMorphism {
        TowerMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&first.comps).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, other: &TowerMorphism) -> TowerMorphism {
        TowerMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(GMatrix::is_zero)
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(GMatrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<TowerMorphism> {
        let comps = self.comps.iter().map(GMatrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(TowerMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            comps,
        })
    }

    pub fn kernel_subspaces(&self) -> Vec<Subspace> {
        self.comps.iter().map(kernel_subspace).collect()
    }

    pub fn image_subspaces(&self) -> Vec<Subspace> {
        self.comps.iter().map(canonical_subspace).collect()
    }

    pub fn iota(&self) -> TowerMorphism {
        let mut comps = self.comps.clone();
        if let Some(top) = comps.last().cloned() {
            comps.push(top);
        }
        TowerMorphism {
            source: self.source.iota(),
            target: self.target.iota(),
            comps,
        }
    }

    pub fn eta(&self) -> TowerMorphism {
        let mut comps = self.comps.clone();
        comps.push(GMatrix::zeros(0, 0));
        TowerMorphism {
            source: self.source.eta(),
            target: self.target.eta(),
            comps,
        }
    }
}

/// Kernel and cokernel of a tower morphism with their structure maps.
#[derive(Clone, Debug)]
pub struct TowerKerCoker {
    pub incl: TowerMorphism,
    pub proj: TowerMorphism,
}

impl TowerKerCoker {
    pub fn ker(&self) -> &VecTower {
        &self.incl.source
    }

    pub fn coker(&self) -> &VecTower {
        &self.proj.target
    }
}

pub fn ker_coker_tower(f: &TowerMorphism) -> Result<TowerKerCoker> {
    f.check()?;
    let incl = f.source.subtower(&f.kernel_subspaces())?;
    let proj = f.target.quotient(&f.image_subspaces())?;
    Ok(TowerKerCoker { incl, proj })
}

/// Whether `0 -> A -i-> B -p-> C -> 0` is exact at every index.
pub fn is_short_exact(i: &TowerMorphism, p: &TowerMorphism) -> bool {
    i.target == p.source
        && i.comps.iter().all(GMatrix::is_injective)
        && p.comps.iter().all(GMatrix::is_surjective)
        && i.image_subspaces() == p.kernel_subspaces()
}

/// Canonical coordinates on `Ker v_2` and `Coker v'_2` used for
/// `Hom(Ker v, Coker v')`.
fn ker_basis(v: &VecTower) -> GMatrix {
    kernel_subspace(v.v(2)).basis().clone()
}

fn coker_map(v: &VecTower) -> GMatrix {
    canonical_subspace(v.v(2)).quotient_map()
}

/// Shape `(dim Coker v', dim Ker v)` of the boundary maps.
pub fn boundary_shape(v: &VecTower, v_prime: &VecTower) -> (usize, usize) {
    (coker_map(v_prime).rows(), ker_basis(v).cols())
}

/// An extension `0 -> V' -> E -> V -> 0` in `Vec_2` with snake boundary `phi`.
pub fn ext1_vec2_from_hom(v: &VecTower, v_prime: &VecTower, phi: &GMatrix) -> Result<(TowerMorphism, TowerMorphism)> {
    if v.n() != 2 || v_prime.n() != 2 {
        return Err(Error::Level("Vec_2 extensions need level-2 towers".into()));
    }
    if phi.shape() != boundary_shape(v, v_prime) {
        return Err(Error::Dimension(format!(
            "phi has shape {:?}, expected {:?}",
            phi.shape(),
            boundary_shape(v, v_prime)
        )));
    }
    let k = ker_basis(v);
    let r = k.transpose().solve(&GMatrix::identity(k.cols())).expect("kernel basis is injective").transpose();
    let s = coker_map(v_prime).right_inverse().expect("quotient maps are surjective");
    let tau = &(&s * phi) * &r;
    let e2 = v_prime.v(2).hstack(&tau).vstack(&GMatrix::zeros(v.dim(1), v_prime.dim(2)).hstack(v.v(2)));
    let mid = VecTower::new(vec![v_prime.dim(1) + v.dim(1), v_prime.dim(2) + v.dim(2)], vec![e2])?;
    let inc = |i: usize| GMatrix::identity(v_prime.dim(i)).vstack(&GMatrix::zeros(v.dim(i), v_prime.dim(i)));
    let pr = |i: usize| GMatrix::zeros(v.dim(i), v_prime.dim(i)).hstack(&GMatrix::identity(v.dim(i)));
    let i = TowerMorphism::new(v_prime.clone(), mid.clone(), vec![inc(1), inc(2)])?;
    let p = TowerMorphism::new(mid, v.clone(), vec![pr(1), pr(2)])?;
    Ok((i, p))
}

/// The snake-lemma connecting map `Ker v -> Coker v'` of a short exact
/// sequence of level-2 towers.
pub fn snake_boundary(i: &TowerMorphism, p: &TowerMorphism) -> Result<GMatrix> {
    i.check()?;
    p.check()?;
    if i.source.n() != 2 {
        return Err(Error::Level("snake boundary needs level-2 towers".into()));
    }
    if !is_short_exact(i, p) {
        return Err(Error::NotExact("sequence of towers is not short exact".into()));
    }
    let v = &p.target;
    let e = &i.target;
    let k = ker_basis(v);
    let lift = p.f(2).solve(&k).expect("p_2 is surjective");
    let pushed = e.v(2) * &lift;
    let pre = i.f(1).solve(&pushed).expect("boundary lands in the image of i_1");
    Ok(&coker_map(&i.source) * &pre)
}

/// The three-step weight filtration of a level-3 tower and its graded pieces
/// `(gr_-2, gr_-1, gr_0)`.
#[derive(Clone, Debug)]
pub struct Vec3Weight {
    pub w: [Vec<Subspace>; 3],
    pub graded: [VecTower; 3],
}

pub fn vec3_weight_filtration(v: &VecTower) -> Result<Vec3Weight> {
    if v.n() != 3 {
        return Err(Error::Level(format!("expected a level-3 tower, got level {}", v.n())));
    }
    let full = |i: usize| Subspace::full(v.dim(i));
    let zero = |i: usize| Subspace::zero(v.dim(i));
    let w = [
        vec![full(1), zero(2), zero(3)],
        vec![full(1), full(2), zero(3)],
        vec![full(1), full(2), full(3)],
    ];
    let graded = [
        VecTower::with_zero_maps(vec![v.dim(1), 0, 0]),
        VecTower::with_zero_maps(vec![0, v.dim(2), 0]),
        VecTower::with_zero_maps(vec![0, 0, v.dim(3)]),
    ];
    for ws in &w {
        debug_assert!(v.is_subtower(ws));
    }
    Ok(Vec3Weight { w, graded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::GaussScalar;

    fn tower2(d2: usize, d1: usize, m: GMatrix) -> VecTower {
        VecTower::new(vec![d1, d2], vec![m]).unwrap()
    }

    #[test]
    fn ker_coker_examples() {
        let v = tower2(2, 1, GMatrix::from_i64(&[&[1, 0]]));
        let id = TowerMorphism::identity(&v);
        let kc = ker_coker_tower(&id).unwrap();
        assert!(kc.ker().is_zero() && kc.coker().is_zero());
        let z = TowerMorphism::zero(&v, &v);
        let kc = ker_coker_tower(&z).unwrap();
        assert_eq!(kc.ker().dims(), v.dims());
        assert_eq!(kc.coker().dims(), v.dims());

        let a = VecTower::with_zero_maps(vec![1, 2]);
        let f = TowerMorphism::new(a.clone(), a.clone(), vec![GMatrix::zeros(1, 1), GMatrix::from_i64(&[&[1, 0], &[0, 0]])]).unwrap();
        let kc = ker_coker_tower(&f).unwrap();
        assert_eq!(kc.ker().dims(), &[1, 1]);
        assert_eq!(kc.coker().dims(), &[1, 1]);
    }

    #[test]
    fn iota_eta() {
        let v = VecTower::with_zero_maps(vec![1]);
        let i = v.iota();
        assert_eq!(i.dims(), &[1, 1]);
        assert_eq!(*i.v(2), GMatrix::identity(1));
        assert_eq!(v.eta().dims(), &[1, 0]);
        assert!(i.in_iota_image().is_some());
        assert!(!i.in_eta_image());
        let bad = tower2(1, 1, GMatrix::zeros(1, 1));
        assert!(bad.in_iota_image().is_none());
        let deficient = tower2(2, 2, GMatrix::from_i64(&[&[1, 1], &[1, 1]]));
        assert!(deficient.in_iota_image().is_none());
        let w = deficient.truncate().iota();
        let iso = w.in_iota_image().unwrap();
        assert!(iso.check().is_ok() && iso.is_iso());
    }

    #[test]
    fn vec2_ext_examples() {
        let v = tower2(1, 0, GMatrix::zeros(0, 1));
        let vp = tower2(0, 1, GMatrix::zeros(1, 0));
        let (i, p) = ext1_vec2_from_hom(&v, &vp, &GMatrix::identity(1)).unwrap();
        assert!(i.target.v(2).is_invertible());
        assert_eq!(snake_boundary(&i, &p).unwrap(), GMatrix::identity(1));

        let two = GMatrix::column(vec![GaussScalar::from_int(2)]);
        let (i2, p2) = ext1_vec2_from_hom(&v, &vp, &two).unwrap();
        assert_eq!(snake_boundary(&i2, &p2).unwrap(), two);

        let (i0, p0) = ext1_vec2_from_hom(&v, &vp, &GMatrix::zeros(1, 1)).unwrap();
        assert_eq!(i0.target, vp.direct_sum(&v));
        assert!(snake_boundary(&i0, &p0).unwrap().is_zero());
    }

    #[test]
    fn vec3_weights() {
        let v = VecTower::new(vec![1, 1, 1], vec![GMatrix::identity(1), GMatrix::identity(1)]).unwrap();
        let w = vec3_weight_filtration(&v).unwrap();
        assert_eq!(w.graded[0].dims(), &[1, 0, 0]);
        assert_eq!(w.graded[1].dims(), &[0, 1, 0]);
        assert_eq!(w.graded[2].dims(), &[0, 0, 1]);
        let w = vec3_weight_filtration(&VecTower::zero(3)).unwrap();
        assert!(w.graded.iter().all(VecTower::is_zero));
        let v = VecTower::with_zero_maps(vec![3, 0, 2]);
        assert!(vec3_weight_filtration(&v).unwrap().graded[1].is_zero());
        assert!(vec3_weight_filtration(&VecTower::zero(2)).is_err());
    }
}
