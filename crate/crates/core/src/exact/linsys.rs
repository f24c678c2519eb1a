//! Linear systems in matrix-valued unknowns, some of which are constrained
//! to be integral. Used to solve for morphisms.

use super::intmat::{integer_kernel_rational, IntMatrix};
use super::matrix::GMatrix;
use super::scalar::GaussScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockId(usize);

#[derive(Clone, Debug)]
struct Block {
    rows: usize,
    cols: usize,
    integral: bool,
    offset: usize,
}

/// Equations of the form `sum_k L_k X_k R_k = C`.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    blocks: Vec<Block>,
    nvars: usize,
    coeffs: Vec<Vec<GaussScalar>>,
    rhs: Vec<GaussScalar>,
}

/// Solutions of a homogeneous system.
#[derive(Clone, Debug)]
pub struct LatticeSolution {
    /// Z-basis of the admissible values of the integral unknowns (columns of
    /// full unknown vectors, each completed by a particular solution of the
    /// remaining unknowns).
    pub lattice: Vec<Vec<GaussScalar>>,
    /// Basis of the solutions whose integral unknowns vanish.
    pub vector: Vec<Vec<GaussScalar>>,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_block(&mut self, rows: usize, cols: usize, integral: bool) -> BlockId {
        let id = BlockId(self.blocks.len());
        self.blocks.push(Block {
            rows,
            cols,
            integral,
            offset: self.nvars,
        });
        self.nvars += rows * cols;
        for row in &mut self.coeffs {
            row.resize(self.nvars, GaussScalar::zero());
        }
        id
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Adds `sum L X R = 0`.
    pub fn add_equation(&mut self, terms: &[(BlockId, &GMatrix, &GMatrix)]) {
        let Some((_, l, r)) = terms.first() else { return };
        let c = GMatrix::zeros(l.rows(), r.cols());
        self.add_equation_with_rhs(terms, &c);
    }

    /// Adds `sum L X R = rhs`.
    pub fn add_equation_with_rhs(&mut self, terms: &[(BlockId, &GMatrix, &GMatrix)], rhs: &GMatrix) {
        let (out_r, out_c) = rhs.shape();
        for &(id, l, r) in terms {
            let b = &self.blocks[id.0];
            assert_eq!(l.cols(), b.rows, "left factor does not match block rows");
            assert_eq!(r.rows(), b.cols, "right factor does not match block cols");
            assert_eq!((l.rows(), r.cols()), (out_r, out_c), "term shape mismatch");
        }
        for a in 0..out_r {
            for bcol in 0..out_c {
                let mut row = vec![GaussScalar::zero(); self.nvars];
                for &(id, l, r) in terms {
                    let blk = &self.blocks[id.0];
                    for i in 0..blk.rows {
                        let li = l.get(a, i);
                        if li.is_zero() {
                            continue;
                        }
                        for j in 0..blk.cols {
                            let rj = r.get(j, bcol);
                            if !rj.is_zero() {
                                row[blk.offset + i * blk.cols + j] += &(li * rj);
                            }
                        }
                    }
                }
                if row.iter().all(GaussScalar::is_zero) && rhs.get(a, bcol).is_zero() {
                    continue;
                }
                self.coeffs.push(row);
                self.rhs.push(rhs.get(a, bcol).clone());
            }
        }
    }

    /// Pins every entry of a block to a value.
    pub fn fix_block(&mut self, id: BlockId, value: &GMatrix) {
        let b = self.blocks[id.0].clone();
        let l = GMatrix::identity(b.rows);
        let r = GMatrix::identity(b.cols);
        self.add_equation_with_rhs(&[(id, &l, &r)], value);
    }

    pub fn block_value(&self, id: BlockId, x: &[GaussScalar]) -> GMatrix {
        let b = &self.blocks[id.0];
        GMatrix::from_fn(b.rows, b.cols, |i, j| x[b.offset + i * b.cols + j].clone())
    }

    /// The coefficient matrix (one row per scalar equation).
    pub fn coefficient_matrix(&self) -> GMatrix {
        self.matrix()
    }

    /// Solutions of the homogeneous system, treating every unknown as a
    /// Gaussian rational.
    pub fn solution_space(&self) -> GMatrix {
        let m = self.matrix();
        if m.rows() == 0 {
            GMatrix::identity(self.nvars)
        } else {
            m.kernel()
        }
    }

    fn matrix(&self) -> GMatrix {
        GMatrix::from_rows(self.coeffs.clone(), self.nvars).expect("rows have nvars entries")
    }

    fn partition(&self) -> (Vec<usize>, Vec<usize>) {
        let mut int_vars = Vec::new();
        let mut cx_vars = Vec::new();
        for b in &self.blocks {
            let range = b.offset..b.offset + b.rows * b.cols;
            if b.integral {
                int_vars.extend(range);
            } else {
                cx_vars.extend(range);
            }
        }
        (int_vars, cx_vars)
    }

    /// Solves a homogeneous system, returning a Z-basis for the integral part
    /// and a basis of the purely non-integral solutions.
    pub fn solve_lattice(&self) -> LatticeSolution {
        assert!(self.rhs.iter().all(GaussScalar::is_zero), "system is not homogeneous");
        let m = self.matrix();
        let (int_vars, cx_vars) = self.partition();
        let a = m.select_cols(&int_vars);
        let b = m.select_cols(&cx_vars);

        let constraint = if b.cols() == 0 {
            a.clone()
        } else {
            let nb = b.left_kernel();
            if nb.rows() == 0 {
                GMatrix::zeros(0, a.cols())
            } else {
                &nb * &a
            }
        };
        let lattice_basis: IntMatrix = integer_kernel_rational(&constraint.realify_rows());

        let mut lattice = Vec::new();
        for c in 0..lattice_basis.cols() {
            let x: Vec<GaussScalar> = (0..int_vars.len())
                .map(|r| GaussScalar::from_bigint(lattice_basis.get(r, c).clone()))
                .collect();
            let ax = a.apply(&x);
            let y = if b.cols() == 0 {
                vec![]
            } else {
                let neg: Vec<GaussScalar> = ax.iter().map(|v| -v).collect();
                b.solve(&GMatrix::column(neg)).expect("lattice point extends").col(0)
            };
            lattice.push(self.assemble(&int_vars, &x, &cx_vars, &y));
        }

        let kb = b.kernel();
        let zeros = vec![GaussScalar::zero(); int_vars.len()];
        let vector = (0..kb.cols())
            .map(|c| self.assemble(&int_vars, &zeros, &cx_vars, &kb.col(c)))
            .collect();
        LatticeSolution { lattice, vector }
    }

    /// Solves treating every unknown as a Gaussian rational. Returns a
    /// particular solution (free variables zero) and a kernel basis.
    pub fn solve_affine(&self) -> Option<(Vec<GaussScalar>, Vec<Vec<GaussScalar>>)> {
        let m = self.matrix();
        let rhs = GMatrix::column(self.rhs.clone());
        let x = if m.rows() == 0 {
            GMatrix::zeros(self.nvars, 1)
        } else {
            m.solve(&rhs)?
        };
        let k = if m.rows() == 0 {
            GMatrix::identity(self.nvars)
        } else {
            m.kernel()
        };
        Some((x.col(0), k.columns()))
    }

    fn assemble(&self, iv: &[usize], x: &[GaussScalar], cv: &[usize], y: &[GaussScalar]) -> Vec<GaussScalar> {
        let mut out = vec![GaussScalar::zero(); self.nvars];
        for (k, &v) in iv.iter().enumerate() {
            out[v] = x[k].clone();
        }
        for (k, &v) in cv.iter().enumerate() {
            out[v] = y[k].clone();
        }
        out
    }
}
