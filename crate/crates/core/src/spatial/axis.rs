use crate::error::{Error, Result};

use super::grid::BoundaryKind;

/// Maximum reach of any row of the 1-D operator.
pub const HALF_BANDWIDTH: usize = 3;

const WIDTH: usize = 2 * HALF_BANDWIDTH + 1;

/// Banded 1-D fourth-order approximation of `∂xx` on the unknowns of one axis.
///
/// Rows hold the integer stencil weights for column offsets `−3..=3`; the
/// common factor `1/(12h²)` is kept separately so that Neumann rows sum to
/// zero exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisOperator {
    rows: Vec<[f64; WIDTH]>,
    scale: f64,
    h: f64,
    bc: BoundaryKind,
}

const INTERIOR: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];

/// Builds the 1-D operator for `m` interior nodes and mesh width `h`.
///
/// Interior rows carry the five-point central stencil. Dirichlet rows next to
/// the boundary use the one-sided closure from quartic extrapolation, with
/// the (zero) boundary values dropped. Neumann rows use mirrored ghost values
/// `W₋₁ = W₁`, `W_{m+2} = W_m`.
pub fn build_axis_operator(m: usize, h: f64, bc: BoundaryKind) -> Result<AxisOperator> {
    if m < 3 {
        return Err(Error::Domain(format!("need m >= 3 interior nodes, got {m}")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Domain(format!("mesh width must be positive, got {h}")));
    }
    // (first node index, weights) for the stencil at node j
    let stencil = |j: usize| -> (usize, &'static [f64]) {
        match bc {
            BoundaryKind::Dirichlet => {
                if j == 1 {
                    (0, &[11.0, -20.0, 6.0, 4.0, -1.0])
                } else if j == m {
                    (m - 3, &[-1.0, 4.0, 6.0, -20.0, 11.0])
                } else {
                    (j - 2, &INTERIOR)
                }
            }
            BoundaryKind::Neumann => {
                if j == 0 {
                    (0, &[-30.0, 32.0, -2.0])
                } else if j == 1 {
                    (0, &[16.0, -31.0, 16.0, -1.0])
                } else if j == m {
                    (m - 2, &[-1.0, 16.0, -31.0, 16.0])
                } else if j == m + 1 {
                    (m - 1, &[-2.0, 32.0, -30.0])
                } else {
                    (j - 2, &INTERIOR)
                }
            }
        }
    };

    let (nodes, offset) = match bc {
        BoundaryKind::Dirichlet => (1..=m, 1usize),
        BoundaryKind::Neumann => (0..=m + 1, 0usize),
    };
    let p = match bc {
        BoundaryKind::Dirichlet => m,
        BoundaryKind::Neumann => m + 2,
    };
    let mut rows = Vec::with_capacity(p);
    for j in nodes {
        let row_idx = j - offset;
        let (first, weights) = stencil(j);
        let mut row = [0.0; WIDTH];
        for (q, &w) in weights.iter().enumerate() {
            let node = first + q;
            // homogeneous Dirichlet values are known zeros
            if node < offset || node - offset >= p {
                continue;
            }
            let col = node - offset;
            row[col + HALF_BANDWIDTH - row_idx] = w;
        }
        rows.push(row);
    }
    Ok(AxisOperator {
        rows,
        scale: 1.0 / (12.0 * h * h),
        h,
        bc,
    })
}

impl AxisOperator {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn bc(&self) -> BoundaryKind {
        self.bc
    }

    /// The common factor `1/(12h²)`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Integer stencil weight at `(row, col)` before scaling.
    pub fn weight(&self, row: usize, col: usize) -> f64 {
        let off = col as isize - row as isize;
        if off.unsigned_abs() > HALF_BANDWIDTH {
            return 0.0;
        }
        self.rows[row][(off + HALF_BANDWIDTH as isize) as usize]
    }

    /// Matrix entry `B[row, col]`.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.scale * self.weight(row, col)
    }

    /// Columns and integer weights of the nonzeros in `row`.
    pub fn row_entries(&self, row: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let p = self.dim();
        self.rows[row].iter().enumerate().filter_map(move |(q, &w)| {
            let col = row as isize + q as isize - HALF_BANDWIDTH as isize;
            (w != 0.0 && col >= 0 && (col as usize) < p).then_some((col as usize, w))
        })
    }

    /// Largest `|col − row|` over all stored nonzeros.
    pub fn bandwidth(&self) -> usize {
        (0..self.dim())
            .flat_map(|r| self.row_entries(r).map(move |(c, _)| c.abs_diff(r)))
            .max()
            .unwrap_or(0)
    }

    /// `y[i·stride] = factor · (B x)[i]` for a strided run of length `dim()`.
    pub(crate) fn apply_strided(&self, x: &[f64], y: &mut [f64], stride: usize, factor: f64) {
        let p = self.dim();
        let c = factor * self.scale;
        for r in 0..p {
            let mut acc = 0.0;
            for (col, w) in self.row_entries(r) {
                acc += w * x[col * stride];
            }
            y[r * stride] = c * acc;
        }
    }

    /// `B x` for a contiguous vector.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        Error::check_len(self.dim(), x.len())?;
        let mut y = vec![0.0; x.len()];
        self.apply_strided(x, &mut y, 1, 1.0);
        Ok(y)
    }

    /// Dense row-major copy, for tests and oracles.
    pub fn to_dense(&self) -> Vec<f64> {
        let p = self.dim();
        let mut out = vec![0.0; p * p];
        for r in 0..p {
            for (c, _) in self.row_entries(r) {
                out[r * p + c] = self.get(r, c);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights_of(op: &AxisOperator, row: usize) -> Vec<(usize, f64)> {
        op.row_entries(row).collect()
    }

    #[test]
    fn interior_rows_use_five_point_stencil() {
        let op = build_axis_operator(8, 0.1, BoundaryKind::Dirichlet).unwrap();
        assert_eq!(
            weights_of(&op, 4),
            vec![(2, -1.0), (3, 16.0), (4, -30.0), (5, 16.0), (6, -1.0)]
        );
        assert!((op.get(4, 4) + 30.0 / (12.0 * 0.01)).abs() < 1e-9);
    }

    #[test]
    fn dirichlet_boundary_rows_reach_three() {
        let op = build_axis_operator(6, 0.5, BoundaryKind::Dirichlet).unwrap();
        assert_eq!(weights_of(&op, 0), vec![(0, -20.0), (1, 6.0), (2, 4.0), (3, -1.0)]);
        assert_eq!(weights_of(&op, 5), vec![(2, -1.0), (3, 4.0), (4, 6.0), (5, -20.0)]);
        // x_2 drops the W_0 term of the central stencil
        assert_eq!(weights_of(&op, 1), vec![(0, 16.0), (1, -30.0), (2, 16.0), (3, -1.0)]);
        assert_eq!(op.bandwidth(), 3);
    }

    #[test]
    fn neumann_boundary_rows() {
        let m = 5;
        let op = build_axis_operator(m, 0.25, BoundaryKind::Neumann).unwrap();
        assert_eq!(op.dim(), m + 2);
        assert_eq!(weights_of(&op, 0), vec![(0, -30.0), (1, 32.0), (2, -2.0)]);
        assert_eq!(weights_of(&op, 1), vec![(0, 16.0), (1, -31.0), (2, 16.0), (3, -1.0)]);
        assert_eq!(weights_of(&op, m), vec![(m - 2, -1.0), (m - 1, 16.0), (m, -31.0), (m + 1, 16.0)]);
        assert_eq!(weights_of(&op, m + 1), vec![(m - 1, -2.0), (m, 32.0), (m + 1, -30.0)]);
        assert_eq!(op.bandwidth(), 2);
    }

    #[test]
    fn smallest_grids_are_well_formed() {
        let d = build_axis_operator(3, 1.0, BoundaryKind::Dirichlet).unwrap();
        assert_eq!(weights_of(&d, 0), vec![(0, -20.0), (1, 6.0), (2, 4.0)]);
        assert_eq!(weights_of(&d, 1), vec![(0, 16.0), (1, -30.0), (2, 16.0)]);
        assert_eq!(weights_of(&d, 2), vec![(0, 4.0), (1, 6.0), (2, -20.0)]);
        let n = build_axis_operator(3, 1.0, BoundaryKind::Neumann).unwrap();
        assert_eq!(weights_of(&n, 2), vec![(0, -1.0), (1, 16.0), (2, -30.0), (3, 16.0), (4, -1.0)]);
    }

    #[test]
    fn neumann_constants_in_kernel() {
        for m in 3..12 {
            let op = build_axis_operator(m, 0.3, BoundaryKind::Neumann).unwrap();
            let y = op.apply(&vec![2.5; m + 2]).unwrap();
            assert!(y.iter().all(|&v| v == 0.0), "m={m}: {y:?}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            build_axis_operator(2, 0.1, BoundaryKind::Dirichlet),
            Err(Error::Domain(_))
        ));
        assert!(build_axis_operator(5, 0.0, BoundaryKind::Neumann).is_err());
        assert!(build_axis_operator(5, -1.0, BoundaryKind::Neumann).is_err());
    }

    /// Max error of `B cos(x)` against `−cos(x)` over the rows selected by `keep`.
    fn residual(bc: BoundaryKind, a: f64, b: f64, cells: usize, keep: impl Fn(usize, usize) -> bool) -> f64 {
        let g = super::super::Grid2D::with_cells(a, b, cells, bc).unwrap();
        let op = build_axis_operator(g.m(), g.h(), bc).unwrap();
        let x = g.coords();
        let u: Vec<f64> = x.iter().map(|v| v.cos()).collect();
        let bu = op.apply(&u).unwrap();
        let p = x.len();
        (0..p)
            .filter(|&r| keep(r, p))
            .map(|r| (bu[r] + x[r].cos()).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn neumann_closure_is_fourth_order() {
        let (a, b) = (-std::f64::consts::PI, std::f64::consts::PI);
        let ratio = residual(BoundaryKind::Neumann, a, b, 20, |_, _| true)
            / residual(BoundaryKind::Neumann, a, b, 40, |_, _| true);
        assert!((ratio - 16.0).abs() < 3.2, "ratio {ratio}");
    }

    #[test]
    fn dirichlet_interior_fourth_order_boundary_third_order() {
        let (a, b) = (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2);
        let interior = |r: usize, p: usize| r > 0 && r + 1 < p;
        let edge = |r: usize, p: usize| r == 0 || r + 1 == p;
        let bc = BoundaryKind::Dirichlet;
        let ratio = residual(bc, a, b, 20, interior) / residual(bc, a, b, 40, interior);
        assert!((ratio - 16.0).abs() < 3.2, "interior ratio {ratio}");
        // the one-sided closure has truncation error −h³u⁽⁵⁾/12
        let ratio = residual(bc, a, b, 20, edge) / residual(bc, a, b, 40, edge);
        assert!((ratio - 8.0).abs() < 1.6, "edge ratio {ratio}");
    }
}
