//! Formal Hodge structures of level `<= n` and their morphisms.
//!
//! Tower slot `j` (1-based) holds `V_(j - twist)`; its `pi` lands in
//! `H_C / F^(j - twist)`, so an untwisted object uses slot `j` for `V_j`.

mod abelian;
mod hom;
mod parts;

pub use abelian::{exactness_issues, image_coimage, ker_coker_fhs, FhsKerCoker, ImageFactorization, ShortExact};
pub use hom::{hom_fhs, morphism_over, HomPresentation};
pub use parts::{canonical_sequences, k0_class, parts, special_sequence, K0Class, Parts};

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{induced_quotient_map, kernel_subspace, FinAbGroup, GMatrix, IntMatrix, Subspace};
use crate::mhs::{free_block, MhsMorphism, MixedHodge};
use crate::vecn::{TowerMorphism, VecTower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalHodge {
    pub n: usize,
    pub twist: i64,
    pub h_et: MixedHodge,
    pub ho_dim: usize,
    pub tower: VecTower,
    /// `pi[j - 1]: V_j -> H_C / F^(j - twist)` in canonical quotient coordinates.
    pub pi: Vec<GMatrix>,
    /// `h_et` on the free part of the lattice; torsion maps to zero.
    pub aug_et: GMatrix,
    pub aug_o: GMatrix,
}

/// Outcome of [`FormalHodge::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FhsReport {
    pub issues: Vec<String>,
    pub notes: Vec<String>,
}

impl FhsReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for FhsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            write!(f, "valid")?;
        } else {
            write!(f, "invalid: {}", self.issues.join("; "))?;
        }
        for n in &self.notes {
            write!(f, "\nnote: {n}")?;
        }
        Ok(())
    }
}

/// Right inverse of a surjection; used to descend maps to quotients.
pub(crate) fn section(q: &GMatrix) -> GMatrix {
    q.right_inverse().expect("quotient maps are surjective")
}

impl FormalHodge {
    pub fn new(
        n: usize,
        twist: i64,
        h_et: MixedHodge,
        ho_dim: usize,
        tower: VecTower,
        pi: Vec<GMatrix>,
        aug_et: GMatrix,
        aug_o: GMatrix,
    ) -> Result<Self> {
        let x = FormalHodge {
            n,
            twist,
            h_et,
            ho_dim,
            tower,
            pi,
            aug_et,
            aug_o,
        };
        x.check()?;
        Ok(x)
    }

    /// The zero object of `FHS_n(twist)`.
    pub fn zero(n: usize, twist: i64) -> Self {
        FormalHodge {
            n,
            twist,
            h_et: MixedHodge::zero(),
            ho_dim: 0,
            tower: VecTower::zero(n),
            pi: vec![GMatrix::zeros(0, 0); n],
            aug_et: GMatrix::zeros(0, 0),
            aug_o: GMatrix::zeros(0, 0),
        }
    }

    pub fn rank(&self) -> usize {
        self.h_et.rank()
    }

    pub fn dim(&self, j: usize) -> usize {
        self.tower.dim(j)
    }

    /// The Hodge index attached to slot `j`.
    pub fn hodge_index(&self, j: usize) -> i64 {
        j as i64 - self.twist
    }

    pub fn f_sub(&self, j: usize) -> Subspace {
        self.h_et.f(self.hodge_index(j))
    }

    /// Canonical projection `H_C -> H_C / F` at slot `j`.
    pub fn q(&self, j: usize) -> GMatrix {
        self.f_sub(j).quotient_map()
    }

    pub fn quot_dim(&self, j: usize) -> usize {
        self.f_sub(j).codim()
    }

    /// The canonical map between the quotients at slots `j` and `j - 1`.
    pub fn transition(&self, j: usize) -> GMatrix {
        induced_quotient_map(&GMatrix::identity(self.rank()), &self.f_sub(j), &self.f_sub(j - 1))
            .expect("F is decreasing")
    }

    /// The composite `V_n -> V_m` of transition maps.
    pub fn down_map(&self, m: usize) -> GMatrix {
        let mut acc = GMatrix::identity(self.dim(self.n));
        for j in (m + 1..=self.n).rev() {
            acc = self.tower.v(j) * &acc;
        }
        acc
    }

    pub fn validate(&self) -> FhsReport {
        let mut r = FhsReport::default();
        let n = self.n;
        if n == 0 {
            r.issues.push("level must be at least 1".into());
            return r;
        }
        let mr = self.h_et.validate();
        if !mr.is_valid() {
            r.issues.push(format!("mixed Hodge structure: {}", mr.issues.join("; ")));
            return r;
        }
        if !self.h_et.in_level(n, self.twist) {
            r.issues.push(format!(
                "mixed Hodge structure is not of level <= {n} at twist {}",
                self.twist
            ));
            return r;
        }
        if self.tower.n() != n || self.pi.len() != n {
            r.issues.push(format!(
                "expected {n} tower spaces and projections, got {} and {}",
                self.tower.n(),
                self.pi.len()
            ));
            return r;
        }
        let mut shapes_ok = true;
        for j in 1..=n {
            let want = (self.quot_dim(j), self.dim(j));
            if self.pi[j - 1].shape() != want {
                r.issues.push(format!(
                    "pi_{} has shape {:?}, expected {want:?}",
                    self.hodge_index(j),
                    self.pi[j - 1].shape()
                ));
                shapes_ok = false;
            }
        }
        if self.aug_et.shape() != (self.dim(n), self.rank()) {
            r.issues.push(format!("aug_et has shape {:?}, expected ({}, {})", self.aug_et.shape(), self.dim(n), self.rank()));
            shapes_ok = false;
        }
        if self.aug_o.shape() != (self.dim(n), self.ho_dim) {
            r.issues.push(format!("aug_o has shape {:?}, expected ({}, {})", self.aug_o.shape(), self.dim(n), self.ho_dim));
            shapes_ok = false;
        }
        if !shapes_ok {
            return r;
        }
        let mut commutes = true;
        for j in 2..=n {
            if &self.pi[j - 2] * self.tower.v(j) != &self.transition(j) * &self.pi[j - 1] {
                r.issues.push(format!("square at index {} does not commute", self.hodge_index(j)));
                commutes = false;
            }
        }
        if &self.pi[n - 1] * &self.aug_et != self.q(n) {
            r.issues.push("augmentation square does not commute: pi_n h_et differs from the canonical map".into());
            commutes = false;
        }
        if commutes {
            for j in 1..=n {
                if !self.pi[j - 1].is_surjective() {
                    r.issues.push(format!(
                        "pi_{} is not surjective although the diagram commutes",
                        self.hodge_index(j)
                    ));
                }
            }
        }
        if !self.h_et.is_torsion_free() {
            r.notes.push(format!(
                "lattice torsion {:?} is sent to zero by the augmentation",
                self.h_et.lattice().torsion
            ));
        }
        r
    }

    pub fn check(&self) -> Result<()> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidFhs(r.issues.join("; ")))
        }
    }

    /// `V^o_j = Ker pi_j` for every slot.
    pub fn vo_subspaces(&self) -> Vec<Subspace> {
        self.pi.iter().map(kernel_subspace).collect()
    }

    pub fn is_special(&self) -> bool {
        (&self.pi[self.n - 1] * &self.aug_o).is_zero()
    }

    pub fn is_etale(&self) -> bool {
        self.ho_dim == 0 && self.vo_subspaces().iter().all(Subspace::is_zero)
    }

    pub fn is_connected(&self) -> bool {
        self.h_et.lattice().is_trivial()
    }

    /// `(H_et, V_j = H_C / F^j)` with identity projections.
    pub fn embed_mhs(h: &MixedHodge, n: usize, twist: i64) -> Result<Self> {
        if !h.in_level(n, twist) {
            return Err(Error::Level(format!("structure is not of level <= {n} at twist {twist}")));
        }
        let f = |j: usize| h.f(j as i64 - twist);
        let dims: Vec<usize> = (1..=n).map(|j| f(j).codim()).collect();
        let maps = (2..=n)
            .map(|j| induced_quotient_map(&GMatrix::identity(h.rank()), &f(j), &f(j - 1)).expect("F is decreasing"))
            .collect();
        let tower = VecTower::new(dims.clone(), maps)?;
        FormalHodge::new(
            n,
            twist,
            h.clone(),
            0,
            tower,
            dims.iter().map(|&d| GMatrix::identity(d)).collect(),
            f(n).quotient_map(),
            GMatrix::zeros(dims[n - 1], 0),
        )
    }

    /// `(0, V)`.
    pub fn embed_vecn(v: &VecTower, twist: i64) -> Self {
        let n = v.n();
        FormalHodge {
            n,
            twist,
            h_et: MixedHodge::zero(),
            ho_dim: 0,
            tower: v.clone(),
            pi: (1..=n).map(|j| GMatrix::zeros(0, v.dim(j))).collect(),
            aug_et: GMatrix::zeros(v.dim(n), 0),
            aug_o: GMatrix::zeros(v.dim(n), 0),
        }
    }

    /// `(H^o, 0)`: a bare vector space.
    pub fn vector(n: usize, twist: i64, ho_dim: usize) -> Self {
        let mut x = FormalHodge::zero(n, twist);
        x.ho_dim = ho_dim;
        x.aug_o = GMatrix::zeros(0, ho_dim);
        x
    }

    pub fn direct_sum(&self, other: &FormalHodge) -> Result<FormalHodge> {
        if (self.n, self.twist) != (other.n, other.twist) {
            return Err(Error::Level("direct sum of objects at different levels or twists".into()));
        }
        let h = self.h_et.direct_sum(&other.h_et);
        let s = FinAbGroup::direct_sum_maps(self.h_et.lattice(), other.h_et.lattice());
        let p0 = free_block(&s.proj[0], self.rank(), h.rank());
        let p1 = free_block(&s.proj[1], other.rank(), h.rank());
        let pi = (1..=self.n)
            .map(|j| {
                let p = self.hodge_index(j);
                let to_parts = (&self.q(j) * &p0).vstack(&(&other.q(j) * &p1));
                let m = &to_parts * &section(&h.f(p).quotient_map());
                let inv = m.inverse().expect("quotients of a direct sum split");
                &inv * &self.pi[j - 1].block_diag(&other.pi[j - 1])
            })
            .collect();
        let aug_et = &self.aug_et.block_diag(&other.aug_et) * &p0.vstack(&p1);
        let x = FormalHodge {
            n: self.n,
            twist: self.twist,
            h_et: h,
            ho_dim: self.ho_dim + other.ho_dim,
            tower: self.tower.direct_sum(&other.tower),
            pi,
            aug_et,
            aug_o: self.aug_o.block_diag(&other.aug_o),
        };
        debug_assert!(x.validate().is_valid());
        Ok(x)
    }
}

/// A morphism `(f, phi)` of formal Hodge structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FhsMorphism {
    pub source: FormalHodge,
    pub target: FormalHodge,
    /// Lattice map, target coordinates x source coordinates.
    pub f_et: IntMatrix,
    pub f_o: GMatrix,
    pub phi: Vec<GMatrix>,
}

impl FhsMorphism {
    pub fn new(source: FormalHodge, target: FormalHodge, f_et: IntMatrix, f_o: GMatrix, phi: Vec<GMatrix>) -> Result<Self> {
        let f = FhsMorphism {
            source,
            target,
            f_et,
            f_o,
            phi,
        };
        f.check()?;
        Ok(f)
    }

    pub fn mhs(&self) -> MhsMorphism {
        MhsMorphism {
            source: self.source.h_et.clone(),
            target: self.target.h_et.clone(),
            map: self.f_et.clone(),
        }
    }

    pub fn tower(&self) -> TowerMorphism {
        TowerMorphism {
            source: self.source.tower.clone(),
            target: self.target.tower.clone(),
            comps: self.phi.clone(),
        }
    }

    /// `H_C -> H'_C`.
    pub fn complex(&self) -> GMatrix {
        free_block(&self.f_et, self.target.rank(), self.source.rank())
    }

    /// `H_C / F -> H'_C / F` at slot `j`.
    pub fn on_quotient(&self, j: usize) -> Result<GMatrix> {
        induced_quotient_map(&self.complex(), &self.source.f_sub(j), &self.target.f_sub(j))
    }

    pub fn issues(&self) -> Vec<String> {
        let (x, y) = (&self.source, &self.target);
        let mut out = Vec::new();
        if (x.n, x.twist) != (y.n, y.twist) {
            out.push("source and target differ in level or twist".into());
            return out;
        }
        if self.f_o.shape() != (y.ho_dim, x.ho_dim) {
            out.push("f_o has the wrong shape".into());
            return out;
        }
        let mi = self.mhs().issues();
        if !mi.is_empty() {
            out.extend(mi.into_iter().map(|s| format!("lattice part: {s}")));
            return out;
        }
        if let Err(e) = self.tower().check() {
            out.push(format!("tower part: {e}"));
            return out;
        }
        let n = x.n;
        if &self.phi[n - 1] * &x.aug_et != &y.aug_et * &self.complex() {
            out.push("augmentation is not compatible on H_et".into());
        }
        if &self.phi[n - 1] * &x.aug_o != &y.aug_o * &self.f_o {
            out.push("augmentation is not compatible on H^o".into());
        }
        for j in 1..=n {
            let fbar = self.on_quotient(j).expect("lattice part preserves F");
            if &y.pi[j - 1] * &self.phi[j - 1] != &fbar * &x.pi[j - 1] {
                out.push(format!("projection square at index {} does not commute", x.hodge_index(j)));
            }
        }
        out
    }

    pub fn check(&self) -> Result<()> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidMorphism(issues.join("; ")))
        }
    }

    pub fn identity(x: &FormalHodge) -> Self {
        FhsMorphism {
            source: x.clone(),
            target: x.clone(),
            f_et: IntMatrix::identity(x.h_et.lattice().ngens()),
            f_o: GMatrix::identity(x.ho_dim),
            phi: (1..=x.n).map(|j| GMatrix::identity(x.dim(j))).collect(),
        }
    }

    pub fn zero(x: &FormalHodge, y: &FormalHodge) -> Self {
        FhsMorphism {
            source: x.clone(),
            target: y.clone(),
            f_et: IntMatrix::zeros(y.h_et.lattice().ngens(), x.h_et.lattice().ngens()),
            f_o: GMatrix::zeros(y.ho_dim, x.ho_dim),
            phi: (1..=x.n).map(|j| GMatrix::zeros(y.dim(j), x.dim(j))).collect(),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &FhsMorphism) -> FhsMorphism {
        FhsMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            f_et: self.target.h_et.lattice().normalize(&(&self.f_et * &first.f_et)),
            f_o: &self.f_o * &first.f_o,
            phi: self.phi.iter().zip(&first.phi).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, other: &FhsMorphism) -> FhsMorphism {
        FhsMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            f_et: self.target.h_et.lattice().normalize(&self.f_et.add(&other.f_et)),
            f_o: &self.f_o + &other.f_o,
            phi: self.phi.iter().zip(&other.phi).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, k: i64, s: &crate::exact::GaussScalar) -> FhsMorphism {
        FhsMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            f_et: self.target.h_et.lattice().normalize(&self.f_et.scale(&num::BigInt::from(k))),
            f_o: self.f_o.scale(s),
            phi: self.phi.iter().map(|m| m.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.target.h_et.lattice().normalize(&self.f_et).is_zero()
            && self.f_o.is_zero()
            && self.phi.iter().all(GMatrix::is_zero)
    }

    /// Equality as morphisms (torsion coordinates compared modulo their orders).
    pub fn same_as(&self, other: &FhsMorphism) -> bool {
        let l = self.target.h_et.lattice();
        l.normalize(&self.f_et) == l.normalize(&other.f_et) && self.f_o == other.f_o && self.phi == other.phi
    }

    pub fn is_iso(&self) -> bool {
        FinAbGroup::is_iso(self.source.h_et.lattice(), self.target.h_et.lattice(), &self.f_et)
            && self.f_o.is_invertible()
            && self.phi.iter().all(GMatrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<FhsMorphism> {
        if !self.is_iso() {
            return None;
        }
        let tl = self.target.h_et.lattice();
        let g = tl.solve(&self.f_et, &IntMatrix::identity(tl.ngens()))?;
        Some(FhsMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            f_et: self.source.h_et.lattice().normalize(&g),
            f_o: self.f_o.inverse()?,
            phi: self.phi.iter().map(GMatrix::inverse).collect::<Option<Vec<_>>>()?,
        })
    }
}
