//! Finite presentations of commutative complex Lie groups
//! `C^a x (C^b / L) x G` with `L` a lattice and `G` finite.

use std::fmt;

use num::{BigInt, BigRational, Integer, One};
use serde::{Deserialize, Serialize};

use crate::exact::{
    canonical_subspace, integer_span_basis, solve_integer_gauss, FinAbGroup, GMatrix, GaussScalar, IntMatrix,
    Subspace,
};

/// The exact isomorphism invariant used for all group comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fingerprint {
    pub vector: usize,
    pub torus: usize,
    pub lattice: usize,
    pub torsion: Vec<u64>,
}

impl Fingerprint {
    pub fn new(vector: usize, torus: usize, lattice: usize) -> Self {
        Fingerprint {
            vector,
            torus,
            lattice,
            torsion: vec![],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.vector == 0 && self.torus == 0 && self.lattice == 0 && self.torsion.is_empty()
    }

    pub fn sum(&self, other: &Fingerprint) -> Fingerprint {
        let g = FinAbGroup {
            rank: 0,
            torsion: self.torsion.clone(),
        }
        .direct_sum(&FinAbGroup {
            rank: 0,
            torsion: other.torsion.clone(),
        });
        Fingerprint {
            vector: self.vector + other.vector,
            torus: self.torus + other.torus,
            lattice: self.lattice + other.lattice,
            torsion: g.torsion,
        }
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(vec {}, torus {}, lattice {}", self.vector, self.torus, self.lattice)?;
        if !self.torsion.is_empty() {
            let t: Vec<String> = self.torsion.iter().map(u64::to_string).collect();
            write!(f, ", torsion {}", t.join("x"))?;
        }
        write!(f, ")")
    }
}

/// Canonical presentation: vector part, a torus `C^b / L` with the lattice
/// given by independent generators, and a finite discrete part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiePresentation {
    pub vector_dim: usize,
    pub torus_ambient_dim: usize,
    /// Columns are lattice generators in the torus ambient space.
    pub torus_lattice: GMatrix,
    pub discrete: FinAbGroup,
}

impl LiePresentation {
    pub fn vector(dim: usize) -> Self {
        LiePresentation {
            vector_dim: dim,
            torus_ambient_dim: 0,
            torus_lattice: GMatrix::zeros(0, 0),
            discrete: FinAbGroup::free(0),
        }
    }

    pub fn lattice_rank(&self) -> usize {
        self.torus_lattice.cols()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint {
            vector: self.vector_dim,
            torus: self.torus_ambient_dim,
            lattice: self.lattice_rank(),
            torsion: self.discrete.torsion.clone(),
        }
    }

    /// Dimension as a complex Lie group.
    pub fn dim(&self) -> usize {
        self.vector_dim + self.torus_ambient_dim
    }

    pub fn is_compact_torus(&self) -> bool {
        self.vector_dim == 0 && self.lattice_rank() == 2 * self.torus_ambient_dim
    }
}

/// `U / (S_0 + Z.Lambda)` for an ambient `U = C^ambient_dim`, a subspace
/// `S_0` and lattice generators `Lambda`, before canonicalization. Elements
/// are represented by vectors of `U`.
#[derive(Clone, Debug)]
pub struct LieQuotient {
    ambient_dim: usize,
    sub: Subspace,
    lattice: GMatrix,
    discrete: FinAbGroup,
}

impl LieQuotient {
    pub fn new(sub: Subspace, lattice: GMatrix) -> Self {
        assert_eq!(sub.ambient_dim(), lattice.rows(), "lattice lives in the wrong ambient space");
        LieQuotient {
            ambient_dim: sub.ambient_dim(),
            sub,
            lattice,
            discrete: FinAbGroup::free(0),
        }
    }

    pub fn with_discrete(mut self, discrete: FinAbGroup) -> Self {
        self.discrete = discrete;
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn lattice(&self) -> &GMatrix {
        &self.lattice
    }

    /// Whether `v` represents the identity element.
    pub fn is_zero(&self, v: &[GaussScalar]) -> bool {
        let q0 = self.sub.quotient_map();
        let target = q0.apply(v);
        if target.iter().all(GaussScalar::is_zero) {
            return true;
        }
        if self.lattice.cols() == 0 {
            return false;
        }
        solve_integer_gauss(&(&q0 * &self.lattice), &target).is_some()
    }

    pub fn same_class(&self, v: &[GaussScalar], w: &[GaussScalar]) -> bool {
        let d: Vec<GaussScalar> = v.iter().zip(w).map(|(a, b)| a - b).collect();
        self.is_zero(&d)
    }

    pub fn presentation(&self) -> LiePresentation {
        let q0 = self.sub.quotient_map();
        let k0 = q0.rows();
        let images = &q0 * &self.lattice;
        let span = canonical_subspace(&images);
        let coords = span.coordinates(&images).expect("images lie in their span");
        LiePresentation {
            vector_dim: k0 - span.dim(),
            torus_ambient_dim: span.dim(),
            torus_lattice: lattice_basis(&coords),
            discrete: self.discrete.clone(),
        }
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.presentation().fingerprint()
    }
}

/// A Z-basis of the group generated by the columns of a Gaussian rational
/// matrix (always a discrete lattice, since the entries are rational).
pub fn lattice_basis(gens: &GMatrix) -> GMatrix {
    let n = gens.rows();
    if gens.cols() == 0 {
        return GMatrix::zeros(n, 0);
    }
    let real = gens.realify_rows();
    let den = real
        .entries()
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.re().denom()));
    let scale = BigRational::from_integer(den.clone());
    let ints = IntMatrix::from_fn(real.rows(), real.cols(), |r, c| {
        (real.get(r, c).re() * &scale).to_integer()
    });
    let basis = integer_span_basis(&ints);
    GMatrix::from_fn(n, basis.cols(), |r, c| {
        let re = BigRational::new(basis.get(r, c).clone(), den.clone());
        let im = BigRational::new(basis.get(r + n, c).clone(), den.clone());
        GaussScalar::new(re, im)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_mod_z_and_elliptic() {
        let q = LieQuotient::new(Subspace::zero(1), GMatrix::identity(1));
        assert_eq!(q.fingerprint(), Fingerprint::new(0, 1, 1));
        assert!(q.is_zero(&[GaussScalar::from_int(3)]));
        assert!(!q.is_zero(&[GaussScalar::from_ratio(1, 2)]));

        let q = LieQuotient::new(
            Subspace::zero(1),
            GMatrix::from_rows(vec![vec![GaussScalar::one(), GaussScalar::i()]], 2).unwrap(),
        );
        let p = q.presentation();
        assert_eq!(p.fingerprint(), Fingerprint::new(0, 1, 2));
        assert!(p.is_compact_torus());
    }

    #[test]
    fn dependent_generators_collapse() {
        // Z.1 + Z.(1/2) = Z.(1/2)
        let gens = GMatrix::from_rows(
            vec![vec![GaussScalar::one(), GaussScalar::from_ratio(1, 2)]],
            2,
        )
        .unwrap();
        let q = LieQuotient::new(Subspace::zero(1), gens);
        assert_eq!(q.fingerprint(), Fingerprint::new(0, 1, 1));
        assert!(q.is_zero(&[GaussScalar::from_ratio(1, 2)]));
    }

    #[test]
    fn vector_part_survives() {
        let q = LieQuotient::new(Subspace::zero(2), GMatrix::zeros(2, 0));
        assert_eq!(q.fingerprint(), Fingerprint::new(2, 0, 0));
        let q = LieQuotient::new(Subspace::full(2), GMatrix::identity(2));
        assert!(q.fingerprint().is_trivial());
    }
}
