use super::matrix::GMatrix;
use super::scalar::GaussScalar;
use crate::error::{Error, Result};

/// A linear subspace of `Q(i)^n`, stored by its reduced column echelon basis.
///
/// The basis is the unique canonical representative of the span, so derived
/// `PartialEq` decides equality of subspaces.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: GMatrix,
    pivots: Vec<usize>,
}

/// Column span of `gens` in canonical form.
pub fn canonical_subspace(gens: &GMatrix) -> Subspace {
    let (r, pivots) = gens.transpose().rref();
    let basis = r.row_range(0, pivots.len()).transpose();
    Subspace {
        ambient_dim: gens.rows(),
        basis,
        pivots,
    }
}

/// Result of a fiber product `A x_C B` of two maps into `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    /// The fiber product as a subspace of `A (+) B`.
    pub space: Subspace,
    /// Projection from pullback coordinates to `A`.
    pub proj_a: GMatrix,
    /// Projection from pullback coordinates to `B`.
    pub proj_b: GMatrix,
}

impl Pullback {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Coordinates of the pair `(a, b)` (columns) in the pullback basis.
    pub fn coordinates(&self, a: &GMatrix, b: &GMatrix) -> Option<GMatrix> {
        self.space.coordinates(&a.vstack(b))
    }
}

/// `{(a, b) : f(a) = g(b)}` with its two projections.
pub fn pullback(f: &GMatrix, g: &GMatrix) -> Result<Pullback> {
    if f.rows() != g.rows() {
        return Err(Error::Dimension(format!(
            "pullback codomains differ: {} vs {}",
            f.rows(),
            g.rows()
        )));
    }
    let a = f.cols();
    let space = canonical_subspace(&f.hstack(&-g).kernel());
    let proj_a = space.basis.row_range(0, a);
    let proj_b = space.basis.row_range(a, space.ambient_dim);
    Ok(Pullback {
        space,
        proj_a,
        proj_b,
    })
}

/// The canonical surjection with kernel `sub`: it reads off the coordinates
/// at the non-pivot rows after clearing the pivot rows with the echelon basis.
pub fn quotient_map(ambient_dim: usize, sub: &Subspace) -> Result<GMatrix> {
    if sub.ambient_dim != ambient_dim {
        return Err(Error::Dimension(format!(
            "subspace of ambient {} used in ambient {ambient_dim}",
            sub.ambient_dim
        )));
    }
    Ok(sub.quotient_map())
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        canonical_subspace(&GMatrix::zeros(ambient_dim, 0))
    }

    pub fn full(ambient_dim: usize) -> Self {
        canonical_subspace(&GMatrix::identity(ambient_dim))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.dim()
    }

    pub fn basis(&self) -> &GMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Whether the subspace is spanned by rational vectors.
    pub fn is_rational(&self) -> bool {
        self.basis.is_real()
    }

    pub fn conj(&self) -> Self {
        canonical_subspace(&self.basis.conj())
    }

    pub fn contains_vector(&self, v: &[GaussScalar]) -> bool {
        self.coordinates(&GMatrix::column(v.to_vec())).is_some()
    }

    /// Whether every column of `m` lies in the subspace.
    pub fn contains_columns(&self, m: &GMatrix) -> bool {
        self.coordinates(m).is_some()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.contains_columns(&other.basis)
    }

    /// Coordinates of the columns of `m` in the canonical basis.
    pub fn coordinates(&self, m: &GMatrix) -> Option<GMatrix> {
        if m.rows() != self.ambient_dim {
            return None;
        }
        // pivot rows of the basis form an identity block
        let x = m.select_rows(&self.pivots);
        (&self.basis * &x == *m).then_some(x)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        canonical_subspace(&self.basis.hstack(&other.basis))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let k = self.basis.hstack(&-&other.basis).kernel();
        let coords = k.row_range(0, self.dim());
        canonical_subspace(&(&self.basis * &coords))
    }

    /// Rows of a matrix whose kernel is exactly this subspace.
    pub fn annihilator(&self) -> GMatrix {
        let ann = self.basis.left_kernel();
        if ann.rows() == 0 {
            GMatrix::zeros(0, self.ambient_dim)
        } else {
            ann
        }
    }

    /// Image under a linear map.
    pub fn image(&self, m: &GMatrix) -> Subspace {
        canonical_subspace(&(m * &self.basis))
    }

    /// `{x : m x in self}`.
    pub fn preimage(&self, m: &GMatrix) -> Subspace {
        let ann = self.annihilator();
        if ann.rows() == 0 {
            return Subspace::full(m.cols());
        }
        canonical_subspace(&(&ann * m).kernel())
    }

    pub fn quotient_map(&self) -> GMatrix {
        let non_pivots: Vec<usize> = (0..self.ambient_dim)
            .filter(|r| !self.pivots.contains(r))
            .collect();
        let id = GMatrix::identity(self.ambient_dim);
        let sel_n = id.select_rows(&non_pivots);
        let sel_p = id.select_rows(&self.pivots);
        let b_n = self.basis.select_rows(&non_pivots);
        &sel_n - &(&b_n * &sel_p)
    }
}

/// Kernel of a map as a canonical subspace.
pub fn kernel_subspace(m: &GMatrix) -> Subspace {
    canonical_subspace(&m.kernel())
}

/// Image of a map as a canonical subspace.
pub fn image_subspace(m: &GMatrix) -> Subspace {
    canonical_subspace(m)
}

/// The map `H/S -> H'/S'` induced by `m`, expressed in canonical quotient
/// coordinates. Requires `m(S) ⊆ S'`.
pub fn induced_quotient_map(m: &GMatrix, source: &Subspace, target: &Subspace) -> Result<GMatrix> {
    if !target.contains(&source.image(m)) {
        return Err(Error::Dimension(
            "map does not carry the source subspace into the target subspace".into(),
        ));
    }
    let q_src = source.quotient_map();
    let q_tgt = target.quotient_map();
    let section = q_src
        .right_inverse()
        .expect("canonical quotient maps are surjective");
    Ok(&(&q_tgt * m) * &section)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_examples() {
        let s = canonical_subspace(&GMatrix::from_i64(&[&[1], &[0]]));
        assert_eq!(s.dim(), 1);
        assert_eq!(*s.basis(), GMatrix::from_i64(&[&[1], &[0]]));

        let s = canonical_subspace(&GMatrix::from_i64(&[&[2, 1], &[0, 0]]));
        assert_eq!(s.dim(), 1);
        assert_eq!(*s.basis(), GMatrix::from_i64(&[&[1], &[0]]));

        assert_eq!(canonical_subspace(&GMatrix::zeros(3, 2)).dim(), 0);
    }

    #[test]
    fn quotient_examples() {
        let full = Subspace::full(2);
        assert_eq!(full.quotient_map().shape(), (0, 2));
        assert_eq!(Subspace::zero(2).quotient_map(), GMatrix::identity(2));
        let e1 = canonical_subspace(&GMatrix::from_i64(&[&[1], &[0]]));
        assert_eq!(quotient_map(2, &e1).unwrap(), GMatrix::from_i64(&[&[0, 1]]));
    }

    #[test]
    fn pullback_examples() {
        let id = GMatrix::identity(1);
        let p = pullback(&id, &id).unwrap();
        assert_eq!(p.dim(), 1);
        assert_eq!(p.proj_a, p.proj_b);

        // projection C^2 -> C against the zero map: the kernel of f
        let f = GMatrix::from_i64(&[&[1, 0]]);
        let g = GMatrix::zeros(1, 0);
        let p = pullback(&f, &g).unwrap();
        assert_eq!(p.dim(), 1);
        assert!((&f * &p.proj_a).is_zero());

        let f = GMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1]]);
        let p = pullback(&f, &GMatrix::identity(2)).unwrap();
        assert_eq!(p.dim(), 3);
    }

    #[test]
    fn intersection_and_preimage() {
        let a = canonical_subspace(&GMatrix::from_i64(&[&[1, 0], &[0, 1], &[0, 0]]));
        let b = canonical_subspace(&GMatrix::from_i64(&[&[0, 0], &[1, 0], &[0, 1]]));
        let c = a.intersect(&b);
        assert_eq!(c, canonical_subspace(&GMatrix::from_i64(&[&[0], &[1], &[0]])));
        let m = GMatrix::from_i64(&[&[1, 1], &[1, 0], &[0, 0]]);
        let pre = c.preimage(&m);
        assert_eq!(pre.dim(), 1);
    }

    #[test]
    fn conj_of_elliptic_line() {
        let f1 = canonical_subspace(&GMatrix::column(vec![GaussScalar::one(), GaussScalar::i()]));
        let c = f1.conj();
        assert_ne!(f1, c);
        assert!(f1.sum(&c).is_full());
    }
}
