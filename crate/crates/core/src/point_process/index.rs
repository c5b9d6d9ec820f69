//! Uniform grid over the domain rectangle, stored as a compressed cell list.

use crate::geometry::{Point, Rect};

#[derive(Clone, Debug)]
pub struct GridIndex {
    origin: Point,
    cell_size: f64,
    cols: usize,
    rows: usize,
    /// `cell_start[c]..cell_start[c + 1]` indexes `ids` for cell `c`.
    cell_start: Vec<u32>,
    ids: Vec<u32>,
}

/// Hard cap on the number of cells, whatever the requested size.
const MAX_CELLS: usize = 1 << 24;

impl GridIndex {
    pub fn build(points: &[Point], domain: Rect, cell_size: f64) -> Self {
        let mut cell_size = cell_size;
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            cell_size = domain.width().max(domain.height());
        }
        let count = |cs: f64| {
            let cols = ((domain.width() / cs).ceil() as usize).max(1);
            let rows = ((domain.height() / cs).ceil() as usize).max(1);
            (cols, rows)
        };
        let (mut cols, mut rows) = count(cell_size);
        while cols.saturating_mul(rows) > MAX_CELLS {
            cell_size *= 2.0;
            (cols, rows) = count(cell_size);
        }
        let mut index = Self {
            origin: Point::new(domain.x0, domain.y0),
            cell_size,
            cols,
            rows,
            cell_start: vec![0; cols * rows + 1],
            ids: vec![0; points.len()],
        };
        let cells: Vec<usize> = points.iter().map(|&p| index.cell_id(p)).collect();
        for &c in &cells {
            index.cell_start[c + 1] += 1;
        }
        for c in 0..cols * rows {
            index.cell_start[c + 1] += index.cell_start[c];
        }
        let mut fill = index.cell_start.clone();
        for (id, &c) in cells.iter().enumerate() {
            index.ids[fill[c] as usize] = id as u32;
            fill[c] += 1;
        }
        index
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.cols, self.rows)
    }

    /// Unclamped cell coordinates; may fall outside the grid.
    pub fn cell_coords(&self, p: Point) -> (i64, i64) {
        (
            ((p.x - self.origin.x) / self.cell_size).floor() as i64,
            ((p.y - self.origin.y) / self.cell_size).floor() as i64,
        )
    }

    /// Cell coordinates clamped to the grid; the cell holding `p` if `p` was indexed.
    pub fn home_cell(&self, p: Point) -> (i64, i64) {
        let (i, j) = self.cell_coords(p);
        (i.clamp(0, self.cols as i64 - 1), j.clamp(0, self.rows as i64 - 1))
    }

    fn cell_id(&self, p: Point) -> usize {
        let (i, j) = self.home_cell(p);
        j as usize * self.cols + i as usize
    }

    pub fn in_grid(&self, i: i64, j: i64) -> bool {
        i >= 0 && j >= 0 && (i as usize) < self.cols && (j as usize) < self.rows
    }

    /// Point ids in cell `(i, j)`, empty outside the grid.
    pub fn cell(&self, i: i64, j: i64) -> &[u32] {
        if !self.in_grid(i, j) {
            return &[];
        }
        let c = j as usize * self.cols + i as usize;
        &self.ids[self.cell_start[c] as usize..self.cell_start[c + 1] as usize]
    }

    pub fn cell_rect(&self, i: i64, j: i64) -> Rect {
        let x0 = self.origin.x + i as f64 * self.cell_size;
        let y0 = self.origin.y + j as f64 * self.cell_size;
        Rect {
            x0,
            y0,
            x1: x0 + self.cell_size,
            y1: y0 + self.cell_size,
        }
    }

    /// Largest Chebyshev ring around `(i, j)` that still touches the grid.
    pub fn max_ring(&self, i: i64, j: i64) -> i64 {
        let dx = i.abs().max((self.cols as i64 - 1 - i).abs());
        let dy = j.abs().max((self.rows as i64 - 1 - j).abs());
        dx.max(dy)
    }

    /// Calls `visit` on every in-grid cell of Chebyshev ring `k` around `(i, j)`.
    pub fn for_each_ring_cell(&self, i: i64, j: i64, k: i64, mut visit: impl FnMut(i64, i64)) {
        if k == 0 {
            if self.in_grid(i, j) {
                visit(i, j);
            }
            return;
        }
        let (lo_i, hi_i) = ((i - k).max(0), (i + k).min(self.cols as i64 - 1));
        for row in [j - k, j + k] {
            if row >= 0 && row < self.rows as i64 {
                for ci in lo_i..=hi_i {
                    visit(ci, row);
                }
            }
        }
        let (lo_j, hi_j) = ((j - k + 1).max(0), (j + k - 1).min(self.rows as i64 - 1));
        for col in [i - k, i + k] {
            if col >= 0 && col < self.cols as i64 {
                for cj in lo_j..=hi_j {
                    visit(col, cj);
                }
            }
        }
    }

    pub(crate) fn all_ids(&self) -> &[u32] {
        &self.ids
    }
}
