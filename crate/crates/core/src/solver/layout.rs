//! Packed coordinates for the SS-DD variables.
//!
//! Symmetric blocks store their lower triangle (column-major); an
//! off-diagonal coordinate stands for both mirrored entries. `X_A` is stored
//! densely (column-major).

use nalgebra::{DMatrix, DVector};

use crate::inclusion::Ssdd;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Block {
    XB,
    XA,
    XAA,
    XC,
}

/// One packed coordinate: which block and which `(row, col)` entry it stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coord {
    pub block: Block,
    pub row: usize,
    pub col: usize,
}

impl Coord {
    pub fn is_symmetric_offdiag(&self) -> bool {
        self.block != Block::XA && self.row != self.col
    }
}

#[derive(Debug, Clone)]
pub struct Layout {
    pub n_y: usize,
    pub n_x: usize,
    coords: Vec<Coord>,
}

fn sym_coords(block: Block, n: usize, out: &mut Vec<Coord>) {
    for col in 0..n {
        for row in col..n {
            out.push(Coord { block, row, col });
        }
    }
}

impl Layout {
    pub fn new(n_y: usize, n_x: usize) -> Self {
        let mut coords = Vec::new();
        sym_coords(Block::XB, n_y, &mut coords);
        for col in 0..n_x {
            for row in 0..n_y {
                coords.push(Coord {
                    block: Block::XA,
                    row,
                    col,
                });
            }
        }
        sym_coords(Block::XAA, n_x, &mut coords);
        sym_coords(Block::XC, n_x, &mut coords);
        Self { n_y, n_x, coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn pack(&self, s: &Ssdd) -> DVector<f64> {
        DVector::from_iterator(
            self.len(),
            self.coords.iter().map(|c| match c.block {
                Block::XB => s.xb[(c.row, c.col)],
                Block::XA => s.xa[(c.row, c.col)],
                Block::XAA => s.xaa[(c.row, c.col)],
                Block::XC => s.xc[(c.row, c.col)],
            }),
        )
    }

    pub fn unpack(&self, z: &DVector<f64>) -> Ssdd {
        let (ny, nx) = (self.n_y, self.n_x);
        let mut s = Ssdd {
            xb: DMatrix::zeros(ny, ny),
            xa: DMatrix::zeros(ny, nx),
            xaa: DMatrix::zeros(nx, nx),
            xc: DMatrix::zeros(nx, nx),
        };
        for (c, &v) in self.coords.iter().zip(z.iter()) {
            let m = match c.block {
                Block::XB => &mut s.xb,
                Block::XA => &mut s.xa,
                Block::XAA => &mut s.xaa,
                Block::XC => &mut s.xc,
            };
            m[(c.row, c.col)] = v;
            if c.is_symmetric_offdiag() {
                m[(c.col, c.row)] = v;
            }
        }
        s
    }

    /// Packed gradient of the linear functional `⟨G_B,X_B⟩ + ⟨G_A,X_A⟩ + ⟨G_AA,X_AA⟩ + ⟨G_C,X_C⟩`.
    pub fn functional(
        &self,
        gb: &DMatrix<f64>,
        ga: &DMatrix<f64>,
        gaa: &DMatrix<f64>,
        gc: &DMatrix<f64>,
    ) -> DVector<f64> {
        DVector::from_iterator(
            self.len(),
            self.coords.iter().map(|c| {
                let g = match c.block {
                    Block::XB => gb,
                    Block::XA => ga,
                    Block::XAA => gaa,
                    Block::XC => gc,
                };
                if c.is_symmetric_offdiag() {
                    g[(c.row, c.col)] + g[(c.col, c.row)]
                } else {
                    g[(c.row, c.col)]
                }
            }),
        )
    }

    /// Packed coefficients of `tr(X_C)`.
    pub fn trace_xc(&self) -> DVector<f64> {
        DVector::from_iterator(
            self.len(),
            self.coords
                .iter()
                .map(|c| if c.block == Block::XC && c.row == c.col { 1.0 } else { 0.0 }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_unpack_round_trip() {
        let layout = Layout::new(2, 3);
        assert_eq!(layout.len(), 3 + 6 + 6 + 6);
        let z = DVector::from_fn(layout.len(), |i, _| i as f64 + 0.5);
        let s = layout.unpack(&z);
        assert_eq!(s.xb, s.xb.transpose());
        assert_eq!(s.xaa, s.xaa.transpose());
        assert_eq!(layout.pack(&s), z);
    }

    #[test]
    fn functional_matches_frobenius_inner_product() {
        let layout = Layout::new(2, 2);
        let z = DVector::from_fn(layout.len(), |i, _| (i as f64).sin());
        let s = layout.unpack(&z);
        let g = |seed: f64, r, c| DMatrix::from_fn(r, c, |i, j| (seed + i as f64 * 1.3 + j as f64 * 0.7).cos());
        let (gb, ga, gaa, gc) = (g(0.1, 2, 2), g(0.2, 2, 2), g(0.3, 2, 2), g(0.4, 2, 2));
        let direct = gb.component_mul(&s.xb).sum()
            + ga.component_mul(&s.xa).sum()
            + gaa.component_mul(&s.xaa).sum()
            + gc.component_mul(&s.xc).sum();
        let packed = layout.functional(&gb, &ga, &gaa, &gc).dot(&z);
        assert!((direct - packed).abs() < 1e-12);
        assert!((layout.trace_xc().dot(&z) - s.xc.trace()).abs() < 1e-12);
    }
}
