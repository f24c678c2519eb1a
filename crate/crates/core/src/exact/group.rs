use num::{BigInt, Integer, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::intmat::{integer_kernel, integer_span_basis, smith_normal_form, solve_integer, solve_integer_any, IntMatrix};
use crate::error::{Error, Result};

/// `Z^rank (+) Z/d_1 (+) ... (+) Z/d_k` with `d_1 | d_2 | ... | d_k`, all
/// `d_i >= 2`.
///
/// Elements and maps use coordinates `(free..., torsion...)`; torsion
/// coordinates are read modulo the corresponding invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinAbGroup {
    pub rank: usize,
    pub torsion: Vec<u64>,
}

/// A quotient group together with the projection onto its coordinates and a
/// lift of its generators.
#[derive(Clone, Debug)]
pub struct GroupQuotient {
    pub group: FinAbGroup,
    /// Coordinates of the quotient as a function of the ambient coordinates.
    pub proj: IntMatrix,
    /// Columns: ambient representatives of the quotient generators.
    pub lift: IntMatrix,
}

impl FinAbGroup {
    pub fn free(rank: usize) -> Self {
        FinAbGroup { rank, torsion: vec![] }
    }

    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self> {
        let g = FinAbGroup { rank, torsion };
        g.check()?;
        Ok(g)
    }

    pub fn check(&self) -> Result<()> {
        if self.torsion.iter().any(|&d| d < 2) {
            return Err(Error::Dimension(format!(
                "torsion invariants must be at least 2: {:?}",
                self.torsion
            )));
        }
        if self.torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Dimension(format!(
                "torsion invariants do not form a divisibility chain: {:?}",
                self.torsion
            )));
        }
        Ok(())
    }

    /// Normal form of `Z^rank (+) (+) Z/orders[i]`, where an order of 0 means
    /// a free summand and orders of 1 are trivial.
    pub fn from_cyclic_orders(rank: usize, orders: &[u64]) -> Self {
        let extra_free = orders.iter().filter(|&&d| d == 0).count();
        let finite: Vec<i64> = orders.iter().filter(|&&d| d > 1).map(|&d| d as i64).collect();
        let snf = smith_normal_form(&IntMatrix::diag(&finite));
        let torsion = snf
            .diagonal()
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .map(|d| d.to_u64().expect("torsion invariant fits in u64"))
            .collect();
        FinAbGroup {
            rank: rank + extra_free,
            torsion,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of coordinates (generators).
    pub fn ngens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut orders = self.torsion.clone();
        orders.extend(&other.torsion);
        FinAbGroup::from_cyclic_orders(self.rank + other.rank, &orders)
    }

    /// Columns generating the relation subgroup of the presentation.
    pub fn relations(&self) -> IntMatrix {
        let n = self.ngens();
        IntMatrix::from_fn(n, self.torsion.len(), |r, c| {
            if r == self.rank + c {
                BigInt::from(self.torsion[c])
            } else {
                BigInt::zero()
            }
        })
    }

    /// Reduces the torsion coordinates of each column into `[0, d)`.
    pub fn normalize(&self, m: &IntMatrix) -> IntMatrix {
        assert_eq!(m.rows(), self.ngens(), "coordinate count mismatch");
        IntMatrix::from_fn(m.rows(), m.cols(), |r, c| {
            if r < self.rank {
                m.get(r, c).clone()
            } else {
                m.get(r, c).mod_floor(&BigInt::from(self.torsion[r - self.rank]))
            }
        })
    }

    /// Whether `f` (target coordinates x source coordinates) is a well-defined
    /// homomorphism `source -> target`.
    pub fn is_hom(source: &FinAbGroup, target: &FinAbGroup, f: &IntMatrix) -> bool {
        if f.shape() != (target.ngens(), source.ngens()) {
            return false;
        }
        let images = &(f * &source.relations());
        target.normalize(images).is_zero()
    }

    /// `target / image(f)`.
    pub fn cokernel(target: &FinAbGroup, f: &IntMatrix) -> GroupQuotient {
        let m = f.hstack(&target.relations());
        quotient_by_columns(&m)
    }

    /// Kernel of `f: source -> target` with the inclusion into `source`.
    pub fn kernel(source: &FinAbGroup, target: &FinAbGroup, f: &IntMatrix) -> (FinAbGroup, IntMatrix) {
        let n = source.ngens();
        let sys = f.hstack(&target.relations());
        let sol = integer_kernel(&sys);
        let xs = sol.select_rows(&(0..n).collect::<Vec<_>>());
        // preimage lattice contains the source relations; take a basis
        let all = xs.hstack(&source.relations());
        let basis = integer_span_basis(&all);
        let rel_coords = solve_integer(&basis, &source.relations())
            .expect("source relations lie in the preimage lattice");
        let q = quotient_by_columns(&rel_coords);
        let incl = source.normalize(&(&basis * &q.lift));
        (q.group, incl)
    }
}

impl FinAbGroup {
    /// Some `x` with `a x = b` in `self` (torsion coordinates read modulo
    /// the invariants), column by column.
    pub fn solve(&self, a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
        let sys = a.hstack(&self.relations());
        let mut cols = Vec::with_capacity(b.cols());
        for c in 0..b.cols() {
            let rhs: Vec<BigInt> = (0..b.rows()).map(|r| b.get(r, c).clone()).collect();
            let x = solve_integer_any(&sys, &rhs)?;
            cols.push(x[..a.cols()].to_vec());
        }
        Some(IntMatrix::from_fn(a.cols(), b.cols(), |r, c| cols[c][r].clone()))
    }

    /// Whether `f: source -> target` is bijective.
    pub fn is_iso(source: &FinAbGroup, target: &FinAbGroup, f: &IntMatrix) -> bool {
        FinAbGroup::is_hom(source, target, f)
            && FinAbGroup::kernel(source, target, f).0.is_trivial()
            && FinAbGroup::cokernel(target, f).group.is_trivial()
    }
}

/// A direct sum in normal form with its structure maps.
#[derive(Clone, Debug)]
pub struct GroupSum {
    pub group: FinAbGroup,
    /// Inclusions of the two summands.
    pub inj: [IntMatrix; 2],
    /// Projections onto the two summands.
    pub proj: [IntMatrix; 2],
}

impl FinAbGroup {
    /// `a (+) b` with inclusions and projections. When both are free the
    /// coordinates are simply concatenated.
    pub fn direct_sum_maps(a: &FinAbGroup, b: &FinAbGroup) -> GroupSum {
        let (na, nb) = (a.ngens(), b.ngens());
        let first = IntMatrix::identity(na).vstack(&IntMatrix::zeros(nb, na));
        let second = IntMatrix::zeros(na, nb).vstack(&IntMatrix::identity(nb));
        if a.is_free() && b.is_free() {
            return GroupSum {
                group: FinAbGroup::free(na + nb),
                proj: [first.transpose(), second.transpose()],
                inj: [first, second],
            };
        }
        let q = quotient_by_columns(&a.relations().block_diag(&b.relations()));
        let inj = [q.group.normalize(&(&q.proj * &first)), q.group.normalize(&(&q.proj * &second))];
        let proj = [
            a.normalize(&(&first.transpose() * &q.lift)),
            b.normalize(&(&second.transpose() * &q.lift)),
        ];
        GroupSum {
            group: q.group,
            inj,
            proj,
        }
    }
}

/// `Z^m / span(columns of rel)` via Smith normal form.
fn quotient_by_columns(rel: &IntMatrix) -> GroupQuotient {
    let m = rel.rows();
    let snf = smith_normal_form(rel);
    let diag = snf.diagonal();
    let mut free_rows = Vec::new();
    let mut tors_rows = Vec::new();
    let mut torsion = Vec::new();
    for r in 0..m {
        let d = diag.get(r).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free_rows.push(r);
        } else if d > BigInt::one() {
            tors_rows.push(r);
            torsion.push(d.to_u64().expect("torsion invariant fits in u64"));
        }
    }
    let rows: Vec<usize> = free_rows.iter().chain(&tors_rows).copied().collect();
    let group = FinAbGroup {
        rank: free_rows.len(),
        torsion,
    };
    let proj = group.normalize(&snf.u.select_rows(&rows));
    let lift = snf.u_inv.select_cols(&rows);
    GroupQuotient { group, proj, lift }
}

/// `Z^rows / image(f)` for a map of free groups.
pub fn lattice_cokernel(f: &IntMatrix) -> FinAbGroup {
    FinAbGroup::cokernel(&FinAbGroup::free(f.rows()), f).group
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cokernel_examples() {
        let g = lattice_cokernel(&IntMatrix::diag(&[2, 2]));
        assert_eq!(g, FinAbGroup { rank: 0, torsion: vec![2, 2] });
        assert_eq!(lattice_cokernel(&IntMatrix::zeros(2, 1)), FinAbGroup::free(2));
        assert!(lattice_cokernel(&IntMatrix::identity(2)).is_trivial());
    }

    #[test]
    fn cyclic_orders_normalize() {
        let g = FinAbGroup::from_cyclic_orders(1, &[2, 3, 1, 0]);
        assert_eq!(g, FinAbGroup { rank: 2, torsion: vec![6] });
        assert!(FinAbGroup::new(0, vec![4, 2]).is_err());
    }

    #[test]
    fn sum_maps_split() {
        let a = FinAbGroup::new(1, vec![2]).unwrap();
        let b = FinAbGroup::new(0, vec![3]).unwrap();
        let s = FinAbGroup::direct_sum_maps(&a, &b);
        assert_eq!(s.group, FinAbGroup { rank: 1, torsion: vec![6] });
        for k in 0..2 {
            let src = if k == 0 { &a } else { &b };
            assert!(FinAbGroup::is_hom(src, &s.group, &s.inj[k]));
            assert!(FinAbGroup::is_hom(&s.group, src, &s.proj[k]));
            let id = src.normalize(&(&s.proj[k] * &s.inj[k]));
            assert_eq!(id, src.normalize(&IntMatrix::identity(src.ngens())));
        }
        let cross = b.normalize(&(&s.proj[1] * &s.inj[0]));
        assert!(cross.is_zero());
    }

    #[test]
    fn kernel_with_torsion() {
        // Z -> Z/4, 1 |-> 2 : kernel is 2Z
        let src = FinAbGroup::free(1);
        let tgt = FinAbGroup::new(0, vec![4]).unwrap();
        let f = IntMatrix::from_i64(&[&[2]]);
        assert!(FinAbGroup::is_hom(&src, &tgt, &f));
        let (k, incl) = FinAbGroup::kernel(&src, &tgt, &f);
        assert_eq!(k, FinAbGroup::free(1));
        assert_eq!(num::Signed::abs(incl.get(0, 0)), BigInt::from(2));

        // Z/6 -> Z/6 multiplication by 2: kernel Z/2, cokernel Z/2
        let g = FinAbGroup::new(0, vec![6]).unwrap();
        let f = IntMatrix::from_i64(&[&[2]]);
        let (k, _) = FinAbGroup::kernel(&g, &g, &f);
        assert_eq!(k.torsion, vec![2]);
        assert_eq!(FinAbGroup::cokernel(&g, &f).group.torsion, vec![2]);
    }
}
