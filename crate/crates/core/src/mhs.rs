//! Mixed Hodge structures on finitely generated abelian groups.
//!
//! The weight filtration lives on `H_Q = Q^rank` (the free quotient of the
//! lattice) and the Hodge filtration on `H_C = Q(i)^rank`. Both are stored
//! densely between their jump indices: `W_m = 0` below the stored range and
//! equals the last stored space above it; `F^p` equals the first stored
//! space below the range and is `0` above it.

use std::collections::BTreeMap;
use std::fmt;

use num::integer::gcd;
use num::BigInt;

use crate::error::{Error, Result};
use crate::exact::{
    canonical_subspace, integer_kernel_rational, FinAbGroup, GMatrix, GaussScalar, IntMatrix, LinearSystem,
    Subspace,
};
use crate::lie::{LiePresentation, LieQuotient};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MixedHodge {
    lattice: FinAbGroup,
    w_start: i64,
    weights: Vec<Subspace>,
    f_start: i64,
    hodge: Vec<Subspace>,
}

/// Result of checking the axioms of a mixed Hodge structure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MhsReport {
    pub issues: Vec<String>,
    /// `(m, p)` pairs where `F^p` and `conj F^(m-p+1)` fail to be opposed on
    /// `gr^W_m`.
    pub opposedness: Vec<(i64, i64)>,
}

impl MhsReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty() && self.opposedness.is_empty()
    }
}

impl fmt::Display for MhsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        let mut parts = self.issues.clone();
        for (m, p) in &self.opposedness {
            parts.push(format!("F^{p} and conj F^{} not opposed on gr^W_{m}", m - p + 1));
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// Integer polynomial in two variables, `sum c[(p, q)] u^p v^q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BiPoly(pub BTreeMap<(i64, i64), i64>);

impl BiPoly {
    pub fn coeff(&self, p: i64, q: i64) -> i64 {
        self.0.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.0.clone();
        for (k, v) in &other.0 {
            *out.entry(*k).or_insert(0) += v;
        }
        out.retain(|_, v| *v != 0);
        BiPoly(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.iter().all(|(&(p, q), &c)| self.coeff(q, p) == c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(&(p, q), &c)| {
                let mono = match (p, q) {
                    (0, 0) => String::new(),
                    _ => format!("{}{}", power("u", p), power("v", q)),
                };
                match (c, mono.is_empty()) {
                    (_, true) => c.to_string(),
                    (1, false) => mono,
                    _ => format!("{c}*{mono}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn power(var: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

impl MixedHodge {
    /// Builds a structure from sparse filtration data. `weights` lists
    /// `(m, generators of W_m)`; intermediate indices take the value at the
    /// nearest listed index below. `hodge` lists `(p, generators of F^p)`;
    /// intermediate indices take the value at the nearest listed index above.
    pub fn new(lattice: FinAbGroup, weights: Vec<(i64, GMatrix)>, hodge: Vec<(i64, GMatrix)>) -> Result<Self> {
        lattice.check()?;
        let r = lattice.rank;
        let canon = |entries: Vec<(i64, GMatrix)>, what: &str| -> Result<BTreeMap<i64, Subspace>> {
            let mut out = BTreeMap::new();
            for (k, g) in entries {
                if g.rows() != r {
                    return Err(Error::Dimension(format!(
                        "{what} index {k}: generators have {} rows, rank is {r}",
                        g.rows()
                    )));
                }
                if out.insert(k, canonical_subspace(&g)).is_some() {
                    return Err(Error::InvalidMhs(format!("{what} index {k} listed twice")));
                }
            }
            Ok(out)
        };
        let w = canon(weights, "weight")?;
        let f = canon(hodge, "hodge")?;
        Ok(Self::from_maps(lattice, &w, &f))
    }

    fn from_maps(lattice: FinAbGroup, w: &BTreeMap<i64, Subspace>, f: &BTreeMap<i64, Subspace>) -> Self {
        let (w_start, weights) = match (w.keys().next(), w.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (
                lo,
                (lo..=hi)
                    .map(|m| w.range(..=m).next_back().expect("lo is present").1.clone())
                    .collect(),
            ),
            _ => (0, vec![]),
        };
        let (f_start, hodge) = match (f.keys().next(), f.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (
                lo,
                (lo..=hi)
                    .map(|p| f.range(p..).next().expect("hi is present").1.clone())
                    .collect(),
            ),
            _ => (0, vec![]),
        };
        let mut h = MixedHodge {
            lattice,
            w_start,
            weights,
            f_start,
            hodge,
        };
        h.normalize();
        h
    }

    fn from_dense(lattice: FinAbGroup, w_start: i64, weights: Vec<Subspace>, f_start: i64, hodge: Vec<Subspace>) -> Self {
        let mut h = MixedHodge {
            lattice,
            w_start,
            weights,
            f_start,
            hodge,
        };
        h.normalize();
        h
    }

    fn normalize(&mut self) {
        while self.weights.first().is_some_and(Subspace::is_zero) {
            self.weights.remove(0);
            self.w_start += 1;
        }
        while self.weights.len() >= 2 && self.weights[self.weights.len() - 1] == self.weights[self.weights.len() - 2] {
            self.weights.pop();
        }
        while self.hodge.len() >= 2 && self.hodge[0] == self.hodge[1] {
            self.hodge.remove(0);
            self.f_start += 1;
        }
        while self.hodge.last().is_some_and(Subspace::is_zero) {
            self.hodge.pop();
        }
        if self.weights.is_empty() {
            self.w_start = 0;
        }
        if self.hodge.is_empty() {
            self.f_start = 0;
        }
    }

    /// The Tate structure `Z(k)`: rank one, pure of type `(-k, -k)`.
    pub fn tate(k: i64) -> Self {
        MixedHodge::from_dense(
            FinAbGroup::free(1),
            -2 * k,
            vec![Subspace::full(1)],
            -k,
            vec![Subspace::full(1)],
        )
    }

    /// A pure structure of the given weight on `Z^rank`.
    pub fn pure(rank: usize, weight: i64, hodge: Vec<(i64, GMatrix)>) -> Result<Self> {
        MixedHodge::new(FinAbGroup::free(rank), vec![(weight, GMatrix::identity(rank))], hodge)
    }

    /// The zero structure.
    pub fn zero() -> Self {
        MixedHodge::from_dense(FinAbGroup::free(0), 0, vec![], 0, vec![])
    }

    pub fn lattice(&self) -> &FinAbGroup {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank
    }

    pub fn is_torsion_free(&self) -> bool {
        self.lattice.is_free()
    }

    pub fn is_zero(&self) -> bool {
        self.lattice.is_trivial()
    }

    pub fn w(&self, m: i64) -> Subspace {
        let r = self.rank();
        if self.weights.is_empty() || m < self.w_start {
            return Subspace::zero(r);
        }
        let idx = ((m - self.w_start) as usize).min(self.weights.len() - 1);
        self.weights[idx].clone()
    }

    pub fn f(&self, p: i64) -> Subspace {
        let r = self.rank();
        if self.hodge.is_empty() {
            return Subspace::zero(r);
        }
        if p < self.f_start {
            return self.hodge[0].clone();
        }
        let idx = (p - self.f_start) as usize;
        self.hodge.get(idx).cloned().unwrap_or_else(|| Subspace::zero(r))
    }

    /// `(first, one past last)` stored weight indices.
    pub fn weight_bounds(&self) -> (i64, i64) {
        (self.w_start, self.w_start + self.weights.len() as i64)
    }

    /// `(first, one past last)` stored Hodge indices.
    pub fn hodge_bounds(&self) -> (i64, i64) {
        (self.f_start, self.f_start + self.hodge.len() as i64)
    }

    /// Stored `(m, W_m)` entries.
    pub fn weight_entries(&self) -> Vec<(i64, &Subspace)> {
        self.weights.iter().enumerate().map(|(i, s)| (self.w_start + i as i64, s)).collect()
    }

    /// Stored `(p, F^p)` entries.
    pub fn hodge_entries(&self) -> Vec<(i64, &Subspace)> {
        self.hodge.iter().enumerate().map(|(i, s)| (self.f_start + i as i64, s)).collect()
    }

    /// Weights `m` with `gr^W_m != 0`.
    pub fn weights_present(&self) -> Vec<i64> {
        let (lo, hi) = self.weight_bounds();
        (lo..hi).filter(|&m| self.w(m).dim() > self.w(m - 1).dim()).collect()
    }

    pub fn is_pure_of_weight(&self, m: i64) -> bool {
        self.w(m).is_full() && self.w(m - 1).is_zero()
    }

    pub fn validate(&self) -> MhsReport {
        let mut rep = MhsReport::default();
        let r = self.rank();
        if let Err(e) = self.lattice.check() {
            rep.issues.push(e.to_string());
        }
        let mut w_ok = true;
        for (m, s) in self.weight_entries() {
            if !s.is_rational() {
                rep.issues.push(format!("W_{m} is not defined over Q"));
                w_ok = false;
            }
            if !s.contains(&self.w(m - 1)) {
                rep.issues.push(format!("W_{} is not contained in W_{m}", m - 1));
                w_ok = false;
            }
        }
        if r > 0 && !self.weights.last().is_some_and(Subspace::is_full) {
            rep.issues.push("weight filtration is not exhaustive".into());
            w_ok = false;
        }
        for (p, s) in self.hodge_entries() {
            if !self.f(p - 1).contains(s) {
                rep.issues.push(format!("F^{p} is not contained in F^{}", p - 1));
            }
        }
        if r > 0 && !self.hodge.first().is_some_and(Subspace::is_full) {
            rep.issues.push("Hodge filtration is not exhaustive".into());
        }
        if w_ok && rep.issues.is_empty() {
            let (fs, fe) = self.hodge_bounds();
            for m in self.weights_present() {
                let g = self.graded(m);
                let lo = fs.min(m + 1 - fe) - 1;
                let hi = fe.max(m + 1 - fs) + 1;
                for p in lo..=hi {
                    let a = g.induced(&self.f(p));
                    let b = g.induced(&self.f(m - p + 1)).conj();
                    if a.dim() + b.dim() != g.dim || !a.sum(&b).is_full() {
                        rep.opposedness.push((m, p));
                    }
                }
            }
        }
        rep
    }

    pub fn check(&self) -> Result<()> {
        let rep = self.validate();
        if rep.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidMhs(rep.to_string()))
        }
    }

    fn graded(&self, m: i64) -> Graded {
        Graded::new(&self.w(m), &self.w(m - 1))
    }

    /// `h^{p,q} = dim gr_F^p gr^W_{p+q}`.
    pub fn hodge_numbers(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        let (fs, fe) = self.hodge_bounds();
        for m in self.weights_present() {
            let g = self.graded(m);
            for p in fs - 1..=fe {
                let d = g.induced(&self.f(p)).dim() - g.induced(&self.f(p + 1)).dim();
                if d > 0 {
                    out.insert((p, m - p), d);
                }
            }
        }
        out
    }

    pub fn hodge_polynomial(&self) -> BiPoly {
        BiPoly(
            self.hodge_numbers()
                .into_iter()
                .map(|(k, v)| (k, v as i64))
                .collect(),
        )
    }

    /// The minimal `l` with `H (x) Z(-twist)` of level `<= l`, or `None` if
    /// `F^{-twist} != H_C`.
    pub fn level_at(&self, twist: i64) -> Option<usize> {
        if self.rank() == 0 {
            return Some(0);
        }
        if !self.f(-twist).is_full() {
            return None;
        }
        let (_, fe) = self.hodge_bounds();
        Some((fe + twist - 1).max(0) as usize)
    }

    /// Whether the structure lies in `MHS_l(twist)`.
    pub fn in_level(&self, l: usize, twist: i64) -> bool {
        self.level_at(twist).is_some_and(|x| x <= l)
    }

    /// `H (x) Z(k)`: weights move by `-2k`, Hodge indices by `-k`.
    pub fn tate_twist(&self, k: i64) -> MixedHodge {
        let mut h = self.clone();
        if !h.weights.is_empty() {
            h.w_start -= 2 * k;
        }
        if !h.hodge.is_empty() {
            h.f_start -= k;
        }
        h
    }

    /// `H_C / F^n` as a canonical quotient: its dimension and the projection.
    pub fn quotient_by_f(&self, n: i64) -> GMatrix {
        self.f(n).quotient_map()
    }

    pub fn direct_sum(&self, other: &MixedHodge) -> MixedHodge {
        let s = FinAbGroup::direct_sum_maps(&self.lattice, &other.lattice);
        let ra = self.rank();
        let rb = other.rank();
        let rs = s.group.rank;
        let free = |m: &IntMatrix, cols: usize| {
            GMatrix::from_fn(rs, cols, |r, c| GaussScalar::from_bigint(m.get(r, c).clone()))
        };
        let ia = free(&s.inj[0], ra);
        let ib = free(&s.inj[1], rb);
        let comb = |x: &Subspace, y: &Subspace| canonical_subspace(&(&ia * x.basis()).hstack(&(&ib * y.basis())));
        let (w0, w1) = (self.w_start.min(other.w_start), self.weight_bounds().1.max(other.weight_bounds().1));
        let (f0, f1) = (self.f_start.min(other.f_start), self.hodge_bounds().1.max(other.hodge_bounds().1));
        let weights = (w0..w1).map(|m| comb(&self.w(m), &other.w(m))).collect();
        let hodge = (f0..f1).map(|p| comb(&self.f(p), &other.f(p))).collect();
        MixedHodge::from_dense(s.group, w0, weights, f0, hodge)
    }

    /// Applies an invertible change of coordinates `g` (new = g * old) on
    /// `H_Q` to both filtrations.
    pub fn transport(&self, lattice: FinAbGroup, g: &GMatrix) -> MixedHodge {
        let weights = self.weights.iter().map(|s| s.image(g)).collect();
        let hodge = self.hodge.iter().map(|s| s.image(g)).collect();
        MixedHodge::from_dense(lattice, self.w_start, weights, self.f_start, hodge)
    }

    /// Sub-structure on a saturated sublattice spanned by the columns of
    /// `incl` (free coordinates), with induced filtrations.
    pub fn restrict(&self, lattice: FinAbGroup, incl: &GMatrix) -> MixedHodge {
        let img = canonical_subspace(incl);
        let pull = |s: &Subspace| {
            let inter = s.intersect(&img);
            let coords = incl.solve(inter.basis()).expect("intersection lies in the image");
            canonical_subspace(&coords)
        };
        let weights = self.weights.iter().map(pull).collect();
        let hodge = self.hodge.iter().map(pull).collect();
        MixedHodge::from_dense(lattice, self.w_start, weights, self.f_start, hodge)
    }

    /// Quotient structure along a surjection `proj` of free coordinates,
    /// with induced filtrations.
    pub fn push(&self, lattice: FinAbGroup, proj: &GMatrix) -> MixedHodge {
        let weights = self.weights.iter().map(|s| s.image(proj)).collect();
        let hodge = self.hodge.iter().map(|s| s.image(proj)).collect();
        MixedHodge::from_dense(lattice, self.w_start, weights, self.f_start, hodge)
    }
}

/// `gr^W_m` with the data to induce filtrations on it.
struct Graded {
    dim: usize,
    /// Coordinates in `W_m` of ambient vectors are read by `top.coordinates`.
    top: Subspace,
    proj: GMatrix,
}

impl Graded {
    fn new(top: &Subspace, below: &Subspace) -> Self {
        let coords = top.coordinates(below.basis()).expect("W is increasing");
        let sub = canonical_subspace(&coords);
        let proj = sub.quotient_map();
        Graded {
            dim: proj.rows(),
            top: top.clone(),
            proj,
        }
    }

    fn induced(&self, s: &Subspace) -> Subspace {
        let inter = s.intersect(&self.top);
        let coords = self.top.coordinates(inter.basis()).expect("intersection lies in W_m");
        canonical_subspace(&(&self.proj * &coords))
    }
}

/// Ranges of filtration indices on which preservation must be checked for
/// maps `a -> b` (outside them both filtrations are constant).
fn w_range(a: &MixedHodge, b: &MixedHodge, shift: i64) -> std::ops::RangeInclusive<i64> {
    let lo = a.weight_bounds().0 - 1;
    let hi = a.weight_bounds().1.max(b.weight_bounds().1 - shift) + 1;
    lo..=hi
}

fn f_range(a: &MixedHodge, b: &MixedHodge, shift: i64) -> std::ops::RangeInclusive<i64> {
    let lo = a.hodge_bounds().0.min(b.hodge_bounds().0 - shift) - 1;
    let hi = a.hodge_bounds().1 + 1;
    lo..=hi
}

/// Adds to `sys` the conditions that `X` (block `x`, shape `rank b x rank a`)
/// maps `W_m(a)` into `W_{m+k}(b)` (`weights`) and `F^p(a)` into
/// `F^{p+k}(b)` (`hodge`).
pub(crate) fn add_filtration_equations(
    sys: &mut LinearSystem,
    x: crate::exact::BlockId,
    a: &MixedHodge,
    b: &MixedHodge,
    w_shift: Option<i64>,
    f_shift: Option<i64>,
) {
    if let Some(k) = w_shift {
        for m in w_range(a, b, k) {
            let src = a.w(m);
            let ann = b.w(m + k).annihilator();
            if src.dim() > 0 && ann.rows() > 0 {
                sys.add_equation(&[(x, &ann, src.basis())]);
            }
        }
    }
    if let Some(k) = f_shift {
        for p in f_range(a, b, k) {
            let src = a.f(p);
            let ann = b.f(p + k).annihilator();
            if src.dim() > 0 && ann.rows() > 0 {
                sys.add_equation(&[(x, &ann, src.basis())]);
            }
        }
    }
}

/// A morphism of mixed Hodge structures, given on lattice generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MhsMorphism {
    pub source: MixedHodge,
    pub target: MixedHodge,
    /// Target coordinates x source coordinates.
    pub map: IntMatrix,
}

/// The block of a lattice map between free parts.
pub fn free_block(map: &IntMatrix, target_rank: usize, source_rank: usize) -> GMatrix {
    GMatrix::from_fn(target_rank, source_rank, |r, c| GaussScalar::from_bigint(map.get(r, c).clone()))
}

impl MhsMorphism {
    pub fn new(source: MixedHodge, target: MixedHodge, map: IntMatrix) -> Result<Self> {
        let f = MhsMorphism { source, target, map };
        let issues = f.issues();
        if issues.is_empty() {
            Ok(f)
        } else {
            Err(Error::InvalidMorphism(issues.join("; ")))
        }
    }

    pub fn identity(h: &MixedHodge) -> Self {
        MhsMorphism {
            source: h.clone(),
            target: h.clone(),
            map: IntMatrix::identity(h.lattice().ngens()),
        }
    }

    pub fn zero(source: &MixedHodge, target: &MixedHodge) -> Self {
        MhsMorphism {
            source: source.clone(),
            target: target.clone(),
            map: IntMatrix::zeros(target.lattice().ngens(), source.lattice().ngens()),
        }
    }

    /// The induced map `H_C -> H'_C`.
    pub fn complex(&self) -> GMatrix {
        free_block(&self.map, self.target.rank(), self.source.rank())
    }

    pub fn issues(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !FinAbGroup::is_hom(self.source.lattice(), self.target.lattice(), &self.map) {
            out.push("lattice map is not a homomorphism".to_string());
            return out;
        }
        let g = self.complex();
        for m in w_range(&self.source, &self.target, 0) {
            if !self.target.w(m).contains(&self.source.w(m).image(&g)) {
                out.push(format!("W_{m} is not preserved"));
            }
        }
        for p in f_range(&self.source, &self.target, 0) {
            if !self.target.f(p).contains(&self.source.f(p).image(&g)) {
                out.push(format!("F^{p} is not preserved"));
            }
        }
        out
    }

    pub fn compose(&self, first: &MhsMorphism) -> MhsMorphism {
        MhsMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            map: self.target.lattice().normalize(&(&self.map * &first.map)),
        }
    }

    /// The kernel with its inclusion; filtrations are induced.
    pub fn kernel(&self) -> MhsMorphism {
        let (group, incl) = FinAbGroup::kernel(self.source.lattice(), self.target.lattice(), &self.map);
        let free = free_block(&incl, self.source.rank(), group.rank);
        let k = self.source.restrict(group, &free);
        MhsMorphism {
            source: k,
            target: self.source.clone(),
            map: incl,
        }
    }

    /// The cokernel with its projection; filtrations are images.
    pub fn cokernel(&self) -> MhsMorphism {
        let q = FinAbGroup::cokernel(self.target.lattice(), &self.map);
        let free = free_block(&q.proj, q.group.rank, self.target.rank());
        let c = self.target.push(q.group, &free);
        MhsMorphism {
            source: self.target.clone(),
            target: c,
            map: q.proj,
        }
    }

    /// The map `H_C/F^n -> H'_C/F^n` in canonical quotient coordinates.
    pub fn on_quotient(&self, n: i64) -> GMatrix {
        crate::exact::induced_quotient_map(&self.complex(), &self.source.f(n), &self.target.f(n))
            .expect("morphisms of MHS preserve F")
    }
}

/// Generators of a finitely generated group of lattice maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomGroup {
    /// Generators of infinite order, independent.
    pub free: Vec<IntMatrix>,
    /// Cyclic generators of finite order.
    pub torsion: Vec<(IntMatrix, u64)>,
}

impl HomGroup {
    pub fn group(&self) -> FinAbGroup {
        let orders: Vec<u64> = self.torsion.iter().map(|(_, d)| *d).collect();
        FinAbGroup::from_cyclic_orders(self.free.len(), &orders)
    }

    pub fn generators(&self) -> impl Iterator<Item = &IntMatrix> {
        self.free.iter().chain(self.torsion.iter().map(|(m, _)| m))
    }
}

/// The Z-basis of the integer matrices `X` (free block) satisfying the
/// filtration constraints, embedded as full lattice maps `b <- a`.
fn free_hom_lattice(a: &MixedHodge, b: &MixedHodge, extra: impl FnOnce(&mut LinearSystem, crate::exact::BlockId)) -> Vec<IntMatrix> {
    let (ra, rb) = (a.rank(), b.rank());
    let mut sys = LinearSystem::new();
    let x = sys.add_block(rb, ra, true);
    add_filtration_equations(&mut sys, x, a, b, Some(0), Some(0));
    extra(&mut sys, x);
    let sol = sys.solve_lattice();
    sol.lattice
        .iter()
        .map(|v| {
            let xm = sys.block_value(x, v);
            IntMatrix::from_fn(b.lattice().ngens(), a.lattice().ngens(), |r, c| {
                if r < rb && c < ra {
                    xm.get(r, c).to_integer().expect("lattice solutions are integral")
                } else {
                    BigInt::from(0)
                }
            })
        })
        .collect()
}

/// Lattice maps involving torsion, which never meet the filtrations.
pub(crate) fn torsion_homs(a: &MixedHodge, b: &MixedHodge) -> Vec<(IntMatrix, u64)> {
    let (la, lb) = (a.lattice(), b.lattice());
    let mut out = Vec::new();
    for (t, &d) in lb.torsion.iter().enumerate() {
        let row = lb.rank + t;
        for j in 0..la.rank {
            let mut m = IntMatrix::zeros(lb.ngens(), la.ngens());
            m.set(row, j, BigInt::from(1));
            out.push((m, d));
        }
        for (u, &e) in la.torsion.iter().enumerate() {
            let g = gcd(d, e);
            if g > 1 {
                let mut m = IntMatrix::zeros(lb.ngens(), la.ngens());
                m.set(row, la.rank + u, BigInt::from(d / g));
                out.push((m, g));
            }
        }
    }
    out
}

/// `Hom_MHS(a, b)`.
pub fn hom_mhs(a: &MixedHodge, b: &MixedHodge) -> HomGroup {
    HomGroup {
        free: free_hom_lattice(a, b, |_, _| {}),
        torsion: torsion_homs(a, b),
    }
}

/// Lattice of `(p, p)` Hodge classes: `Hom_MHS(Z(-p), b)` with the images of
/// the generator as columns.
pub fn hodge_classes(b: &MixedHodge, p: i64) -> (FinAbGroup, IntMatrix) {
    let h = hom_mhs(&MixedHodge::tate(-p), b);
    let group = h.group();
    let cols: Vec<&IntMatrix> = h.generators().collect();
    let emb = IntMatrix::from_fn(b.lattice().ngens(), cols.len(), |r, c| cols[c].get(r, 0).clone());
    (group, emb)
}

fn require_torsion_free(h: &MixedHodge, what: &str) -> Result<()> {
    if h.is_torsion_free() {
        Ok(())
    } else {
        Err(Error::Torsion(format!("{what} has torsion {:?}", h.lattice().torsion)))
    }
}

/// Carlson's description of `Ext^1_MHS(b, a)`: `W_0 Hom_C / (F^0 W_0 + W_0 Hom_Z)`,
/// with `Hom(b, a)` vectorized row-major (`rank a x rank b` matrices).
#[derive(Clone, Debug)]
pub struct CarlsonExt {
    pub rank_a: usize,
    pub rank_b: usize,
    /// `W_0 Hom_C` inside the vectorized Hom space.
    pub w0: Subspace,
    /// The quotient, with ambient coordinates taken in the basis of `w0`.
    pub quotient: LieQuotient,
}

impl CarlsonExt {
    pub fn new(b: &MixedHodge, a: &MixedHodge) -> Result<Self> {
        require_torsion_free(a, "sub-object")?;
        require_torsion_free(b, "quotient object")?;
        let (ra, rb) = (a.rank(), b.rank());
        let mut wsys = LinearSystem::new();
        let x = wsys.add_block(ra, rb, false);
        add_filtration_equations(&mut wsys, x, b, a, Some(0), None);
        let w0 = canonical_subspace(&wsys.solution_space());

        let mut fsys = wsys.clone();
        add_filtration_equations(&mut fsys, x, b, a, None, Some(0));
        let f0w0 = canonical_subspace(&fsys.solution_space());

        let ints = integer_kernel_rational(&wsys.coefficient_matrix()).to_gmatrix();
        let sub = canonical_subspace(&w0.coordinates(f0w0.basis()).expect("F^0 W_0 lies in W_0"));
        let lattice = w0.coordinates(&ints).expect("integer points lie in W_0");
        Ok(CarlsonExt {
            rank_a: ra,
            rank_b: rb,
            w0,
            quotient: LieQuotient::new(sub, lattice),
        })
    }

    pub fn presentation(&self) -> LiePresentation {
        self.quotient.presentation()
    }

    /// Coordinates of a Carlson parameter `theta: H_b -> H_a` in the quotient
    /// ambient, or `None` if `theta` is not in `W_0 Hom`.
    pub fn coordinates(&self, theta: &GMatrix) -> Option<Vec<GaussScalar>> {
        if theta.shape() != (self.rank_a, self.rank_b) {
            return None;
        }
        let v = GMatrix::column(theta.entries().to_vec());
        self.w0.coordinates(&v).map(|c| c.col(0))
    }

    pub fn is_split(&self, theta: &GMatrix) -> Option<bool> {
        self.coordinates(theta).map(|c| self.quotient.is_zero(&c))
    }

    pub fn same_class(&self, t1: &GMatrix, t2: &GMatrix) -> Option<bool> {
        let (c1, c2) = (self.coordinates(t1)?, self.coordinates(t2)?);
        Some(self.quotient.same_class(&c1, &c2))
    }
}

/// `Ext^1_MHS(b, a)` as a Lie group presentation.
pub fn ext1_mhs(b: &MixedHodge, a: &MixedHodge) -> Result<LiePresentation> {
    Ok(CarlsonExt::new(b, a)?.presentation())
}

/// `J^p(a) = W_{2p} H_C / (F^p W_{2p} + W_{2p} H_Z)` with ambient
/// coordinates in the canonical basis of `W_{2p}`. This is
/// `H_C / (F^p + H_Z)` whenever the weights are at most `2p`.
pub fn jp_quotient(a: &MixedHodge, p: i64) -> Result<LieQuotient> {
    require_torsion_free(a, "structure")?;
    let w = a.w(2 * p);
    let f = a.f(p).intersect(&w);
    let sub = canonical_subspace(&w.coordinates(f.basis()).expect("intersection lies in W"));
    let ann = w.annihilator();
    let ints = if ann.rows() == 0 {
        IntMatrix::identity(a.rank())
    } else {
        integer_kernel_rational(&ann)
    };
    let lattice = w.coordinates(&ints.to_gmatrix()).expect("integer points lie in W");
    Ok(LieQuotient::new(sub, lattice))
}

pub fn jp(a: &MixedHodge, p: i64) -> Result<LiePresentation> {
    Ok(jp_quotient(a, p)?.presentation())
}

/// The extension `0 -> a -> (a (+) b, W, F_theta) -> b -> 0` with
/// `F^i_theta = {(x + theta y, y) : x in F^i a, y in F^i b}`.
pub fn carlson_extension(a: &MixedHodge, b: &MixedHodge, theta: &GMatrix) -> Result<MixedHodge> {
    require_torsion_free(a, "sub-object")?;
    require_torsion_free(b, "quotient object")?;
    let (ra, rb) = (a.rank(), b.rank());
    if theta.shape() != (ra, rb) {
        return Err(Error::Dimension(format!(
            "Carlson parameter is {:?}, expected ({ra}, {rb})",
            theta.shape()
        )));
    }
    let (w0, w1) = (a.w_start.min(b.w_start), a.weight_bounds().1.max(b.weight_bounds().1));
    let (f0, f1) = (a.f_start.min(b.f_start), a.hodge_bounds().1.max(b.hodge_bounds().1));
    let weights = (w0..w1)
        .map(|m| canonical_subspace(&a.w(m).basis().block_diag(b.w(m).basis())))
        .collect();
    let hodge = (f0..f1)
        .map(|p| {
            let fa = a.f(p);
            let fb = b.f(p);
            let top = fa.basis().hstack(&(theta * fb.basis()));
            let bottom = GMatrix::zeros(rb, fa.dim()).hstack(fb.basis());
            canonical_subspace(&top.vstack(&bottom))
        })
        .collect();
    Ok(MixedHodge::from_dense(FinAbGroup::free(ra + rb), w0, weights, f0, hodge))
}

/// Recovers a Carlson parameter in `W_0 Hom(b, a)` for a structure on
/// `a (+) b` whose weight filtration is the direct sum, whose sub is `a` and
/// whose quotient is `b`. Returns `None` if no such parameter exists.
pub fn recover_carlson_parameter(mid: &MixedHodge, a: &MixedHodge, b: &MixedHodge) -> Option<GMatrix> {
    let (ra, rb) = (a.rank(), b.rank());
    if mid.rank() != ra + rb {
        return None;
    }
    let mut sys = LinearSystem::new();
    let x = sys.add_block(ra, rb, false);
    add_filtration_equations(&mut sys, x, b, a, Some(0), None);
    let (f0, f1) = (mid.f_start.min(b.f_start), mid.hodge_bounds().1.max(b.hodge_bounds().1));
    for p in f0 - 1..=f1 {
        let fb = b.f(p);
        if fb.dim() == 0 {
            continue;
        }
        let ann = mid.f(p).annihilator();
        if ann.rows() == 0 {
            continue;
        }
        let top = ann.col_range(0, ra);
        let bot = ann.col_range(ra, ra + rb);
        let rhs = -&(&bot * fb.basis());
        sys.add_equation_with_rhs(&[(x, &top, fb.basis())], &rhs);
    }
    let (sol, _) = sys.solve_affine()?;
    let theta = sys.block_value(x, &sol);
    let rebuilt = carlson_extension(a, b, &theta).ok()?;
    (rebuilt == *mid).then_some(theta)
}

/// The boundary `d_x: B^{p,p}_Z -> J^p(a)` of the extension with Carlson
/// parameter `theta`, evaluated on a basis of Hodge classes.
#[derive(Clone, Debug)]
pub struct CarlsonBoundary {
    pub classes: FinAbGroup,
    /// Columns: Hodge classes in lattice coordinates of `b`.
    pub class_basis: IntMatrix,
    pub target: LieQuotient,
    /// Image of each basis class, as a vector of the target ambient.
    pub images: Vec<Vec<GaussScalar>>,
}

impl CarlsonBoundary {
    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| self.target.is_zero(v))
    }
}

pub fn carlson_boundary(theta: &GMatrix, b: &MixedHodge, a: &MixedHodge, p: i64) -> Result<CarlsonBoundary> {
    require_torsion_free(a, "sub-object")?;
    require_torsion_free(b, "quotient object")?;
    if !b.is_pure_of_weight(2 * p) {
        return Err(Error::Hypothesis(format!("quotient must be pure of weight {}", 2 * p)));
    }
    if !a.w(2 * p - 1).is_full() {
        return Err(Error::Hypothesis(format!("sub-object must have weights <= {}", 2 * p - 1)));
    }
    if theta.shape() != (a.rank(), b.rank()) {
        return Err(Error::Dimension(format!(
            "Carlson parameter is {:?}, expected ({}, {})",
            theta.shape(),
            a.rank(),
            b.rank()
        )));
    }
    let (classes, class_basis) = hodge_classes(b, p);
    let target = jp_quotient(a, p)?;
    let w = a.w(2 * p);
    let images = (0..class_basis.cols())
        .map(|c| {
            let beta: Vec<GaussScalar> = (0..b.rank())
                .map(|r| GaussScalar::from_bigint(class_basis.get(r, c).clone()))
                .collect();
            let v = theta.apply(&beta);
            w.coordinates(&GMatrix::column(v)).expect("W_2p is everything").col(0)
        })
        .collect();
    Ok(CarlsonBoundary {
        classes,
        class_basis,
        target,
        images,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::Fingerprint;

    pub(crate) fn elliptic() -> MixedHodge {
        let f1 = GMatrix::column(vec![GaussScalar::one(), GaussScalar::i()]);
        MixedHodge::pure(2, 1, vec![(0, GMatrix::identity(2)), (1, f1)]).unwrap()
    }

    #[test]
    fn tate_and_elliptic_validate() {
        let z0 = MixedHodge::tate(0);
        assert!(z0.validate().is_valid());
        assert_eq!(z0.level_at(0), Some(0));
        let z1 = MixedHodge::tate(-1);
        assert!(z1.validate().is_valid());
        assert_eq!(z1.hodge_polynomial().coeff(1, 1), 1);
        let e = elliptic();
        assert!(e.validate().is_valid(), "{}", e.validate());
        assert_eq!(e.level_at(0), Some(1));
        let g = e.hodge_polynomial();
        assert_eq!((g.coeff(1, 0), g.coeff(0, 1)), (1, 1));
        assert!(g.is_symmetric());
    }

    #[test]
    fn opposedness_failure_reported() {
        let f1 = GMatrix::column(vec![GaussScalar::one(), GaussScalar::zero()]);
        let h = MixedHodge::pure(2, 1, vec![(0, GMatrix::identity(2)), (1, f1)]).unwrap();
        let rep = h.validate();
        assert!(!rep.is_valid());
        assert!(rep.opposedness.contains(&(1, 1)));
    }

    #[test]
    fn twist_levels() {
        let d = 3;
        let h = MixedHodge::tate(-d);
        assert_eq!(h.level_at(-d), Some(0));
        assert_eq!(h.level_at(0), Some(d as usize));
        assert_eq!(MixedHodge::tate(0).tate_twist(1), MixedHodge::tate(1));
        let e = elliptic();
        let t = e.tate_twist(1);
        assert_eq!(t.weights_present(), vec![-1]);
        assert!(t.f(-1).is_full() && t.f(0).dim() == 1 && t.f(1).is_zero());
        assert_eq!(t.tate_twist(-1), e);
        assert_eq!(e.tate_twist(0), e);
    }

    #[test]
    fn hom_examples() {
        let z0 = MixedHodge::tate(0);
        assert_eq!(hom_mhs(&z0, &z0).group(), FinAbGroup::free(1));
        assert!(hom_mhs(&z0, &MixedHodge::tate(-1)).group().is_trivial());
        let e = elliptic();
        let h = hom_mhs(&e, &e);
        assert!(h.group().rank >= 1);
        // multiplication by i is an endomorphism of E_i
        assert_eq!(h.group().rank, 2);
    }

    #[test]
    fn carlson_examples() {
        let z0 = MixedHodge::tate(0);
        let z1 = MixedHodge::tate(1);
        assert_eq!(ext1_mhs(&z0, &z1).unwrap().fingerprint(), Fingerprint::new(0, 1, 1));
        assert!(ext1_mhs(&z0, &z0).unwrap().fingerprint().is_trivial());
        let e = elliptic();
        let zm1 = MixedHodge::tate(-1);
        let fp = ext1_mhs(&zm1, &e).unwrap().fingerprint();
        assert_eq!(fp, Fingerprint::new(0, 1, 2));
        assert_eq!(jp(&e, 1).unwrap().fingerprint(), fp);
        assert_eq!(jp(&z0, 1).unwrap().fingerprint(), Fingerprint::new(0, 1, 1));
        assert!(jp(&zm1, 1).unwrap().fingerprint().is_trivial());
    }

    #[test]
    fn boundary_examples() {
        let a = MixedHodge::tate(0);
        let b = MixedHodge::tate(-1);
        let half = GMatrix::column(vec![GaussScalar::from_ratio(1, 2)]);
        let bd = carlson_boundary(&half, &b, &a, 1).unwrap();
        assert!(!bd.is_zero());
        assert!(carlson_boundary(&GMatrix::zeros(1, 1), &b, &a, 1).unwrap().is_zero());
        let three = GMatrix::column(vec![GaussScalar::from_int(3)]);
        assert!(carlson_boundary(&three, &b, &a, 1).unwrap().is_zero());
        assert!(carlson_boundary(&half, &a, &a, 1).is_err());
    }

    #[test]
    fn carlson_extension_round_trip() {
        let a = MixedHodge::tate(0);
        let b = MixedHodge::tate(-1);
        let half = GMatrix::column(vec![GaussScalar::from_ratio(1, 2)]);
        let mid = carlson_extension(&a, &b, &half).unwrap();
        assert!(mid.validate().is_valid());
        let rec = recover_carlson_parameter(&mid, &a, &b).unwrap();
        let ext = CarlsonExt::new(&b, &a).unwrap();
        assert_eq!(ext.same_class(&rec, &half), Some(true));
        assert_eq!(ext.is_split(&half), Some(false));
    }

    #[test]
    fn hodge_classes_examples() {
        let (g, _) = hodge_classes(&MixedHodge::tate(-2), 2);
        assert_eq!(g, FinAbGroup::free(1));
        assert!(hodge_classes(&elliptic(), 1).0.is_trivial());
        let two = MixedHodge::tate(-1).direct_sum(&MixedHodge::tate(-1));
        assert_eq!(hodge_classes(&two, 1).0, FinAbGroup::free(2));
    }

    #[test]
    fn polynomial_additive() {
        let e = elliptic();
        let z = MixedHodge::tate(-1);
        let s = e.direct_sum(&z);
        assert!(s.validate().is_valid());
        assert_eq!(s.hodge_polynomial(), e.hodge_polynomial().add(&z.hodge_polynomial()));
    }

    #[test]
    fn quotient_dims() {
        let e = elliptic();
        assert_eq!(e.quotient_by_f(1).rows(), 1);
        assert_eq!(e.quotient_by_f(0).rows(), 0);
        assert_eq!(e.quotient_by_f(5).rows(), 2);
    }
}
