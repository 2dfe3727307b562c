//! Uniform-grid index over building footprints.
//!
//! Each footprint is registered in every cell its (slightly padded) bounding
//! box overlaps; a query walks the cells crossed by the path footprint and
//! runs the exact test on the de-duplicated candidates. Results are
//! identical to [`count_blockages`](super::count_blockages).

use super::{path_blocked_by, Building, Point3};
use crate::scalar::Scalar;

const DEFAULT_CELL_M: f64 = 50.0;
const MAX_CELLS: usize = 1 << 22;

#[derive(Debug, Clone)]
pub struct BuildingIndex<T> {
    buildings: Vec<Building<T>>,
    min_x: T,
    min_y: T,
    cell: T,
    nx: usize,
    ny: usize,
    /// CSR layout: cell `c` holds `items[offsets[c]..offsets[c + 1]]`.
    offsets: Vec<u32>,
    items: Vec<u32>,
}

impl<T: Scalar> BuildingIndex<T> {
    pub fn new(buildings: Vec<Building<T>>) -> Self {
        Self::with_cell_size(buildings, T::lit(DEFAULT_CELL_M))
    }

    pub fn with_cell_size(buildings: Vec<Building<T>>, cell_m: T) -> Self {
        let mut index = BuildingIndex {
            buildings,
            min_x: T::zero(),
            min_y: T::zero(),
            cell: cell_m,
            nx: 0,
            ny: 0,
            offsets: vec![0],
            items: Vec::new(),
        };
        if index.buildings.is_empty() {
            return index;
        }

        let boxes: Vec<[T; 4]> = index.buildings.iter().map(bounding_box).collect();
        let (mut lo_x, mut lo_y) = (T::infinity(), T::infinity());
        let (mut hi_x, mut hi_y) = (T::neg_infinity(), T::neg_infinity());
        for b in &boxes {
            lo_x = lo_x.min(b[0]);
            lo_y = lo_y.min(b[1]);
            hi_x = hi_x.max(b[2]);
            hi_y = hi_y.max(b[3]);
        }
        let mut cell = cell_m;
        let dims = |cell: T| {
            let nx = ((hi_x - lo_x) / cell).floor().as_f64() as usize + 1;
            let ny = ((hi_y - lo_y) / cell).floor().as_f64() as usize + 1;
            (nx, ny)
        };
        let (mut nx, mut ny) = dims(cell);
        while nx.saturating_mul(ny) > MAX_CELLS {
            cell = cell * T::lit(2.0);
            (nx, ny) = dims(cell);
        }
        // Covers rounding in the cell walk so corner-grazing paths still see
        // every footprint they touch.
        let pad = T::epsilon() * T::lit(16.0 * nx.max(ny) as f64) * cell;

        index.min_x = lo_x;
        index.min_y = lo_y;
        index.cell = cell;
        index.nx = nx;
        index.ny = ny;

        let span = |b: &[T; 4]| {
            let (x0, y0) = index.cell_of(b[0] - pad, b[1] - pad);
            let (x1, y1) = index.cell_of(b[2] + pad, b[3] + pad);
            (x0, y0, x1, y1)
        };
        let mut counts = vec![0u32; nx * ny + 1];
        for b in &boxes {
            let (x0, y0, x1, y1) = span(b);
            for iy in y0..=y1 {
                for ix in x0..=x1 {
                    counts[iy * nx + ix + 1] += 1;
                }
            }
        }
        for c in 1..counts.len() {
            counts[c] += counts[c - 1];
        }
        let mut cursor = counts.clone();
        let mut items = vec![0u32; counts[nx * ny] as usize];
        for (id, b) in boxes.iter().enumerate() {
            let (x0, y0, x1, y1) = span(b);
            for iy in y0..=y1 {
                for ix in x0..=x1 {
                    let c = iy * nx + ix;
                    items[cursor[c] as usize] = id as u32;
                    cursor[c] += 1;
                }
            }
        }
        index.offsets = counts;
        index.items = items;
        index
    }

    pub fn buildings(&self) -> &[Building<T>] {
        &self.buildings
    }

    pub fn len(&self) -> usize {
        self.buildings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buildings.is_empty()
    }

    /// Clamped cell coordinates of a point.
    fn cell_of(&self, x: T, y: T) -> (usize, usize) {
        let clamp = |v: T, n: usize| {
            let f = v.floor();
            if f <= T::zero() {
                0
            } else {
                (f.as_f64() as usize).min(n - 1)
            }
        };
        (
            clamp((x - self.min_x) / self.cell, self.nx),
            clamp((y - self.min_y) / self.cell, self.ny),
        )
    }

    /// Number of buildings blocking the path from `tx` to `rx`.
    pub fn count_blockages(&self, tx: Point3<T>, rx: Point3<T>) -> usize {
        let mut scratch = Vec::new();
        self.count_blockages_with(tx, rx, &mut scratch)
    }

    /// As [`count_blockages`](Self::count_blockages), reusing `scratch` for candidates.
    pub fn count_blockages_with(
        &self,
        tx: Point3<T>,
        rx: Point3<T>,
        scratch: &mut Vec<u32>,
    ) -> usize {
        if self.buildings.is_empty() {
            return 0;
        }
        scratch.clear();
        self.walk_cells(tx, rx, |cell| {
            let (a, b) = (self.offsets[cell] as usize, self.offsets[cell + 1] as usize);
            scratch.extend_from_slice(&self.items[a..b]);
        });
        scratch.sort_unstable();
        scratch.dedup();
        scratch
            .iter()
            .filter(|&&id| path_blocked_by(tx, rx, &self.buildings[id as usize]))
            .count()
    }

    /// Visits every in-grid cell crossed by the footprint of `tx → rx`.
    fn walk_cells(&self, tx: Point3<T>, rx: Point3<T>, mut visit: impl FnMut(usize)) {
        let gx0 = (tx.x - self.min_x) / self.cell;
        let gy0 = (tx.y - self.min_y) / self.cell;
        let gx1 = (rx.x - self.min_x) / self.cell;
        let gy1 = (rx.y - self.min_y) / self.cell;

        let mut ix = gx0.floor().as_f64() as i64;
        let mut iy = gy0.floor().as_f64() as i64;
        let end_x = gx1.floor().as_f64() as i64;
        let end_y = gy1.floor().as_f64() as i64;
        let step_x: i64 = if end_x >= ix { 1 } else { -1 };
        let step_y: i64 = if end_y >= iy { 1 } else { -1 };

        let dx = gx1 - gx0;
        let dy = gy1 - gy0;
        let next_boundary = |g: T, i: i64, step: i64| {
            if step > 0 {
                T::lit((i + 1) as f64) - g
            } else {
                g - T::lit(i as f64)
            }
        };
        let (mut t_max_x, t_delta_x) = if dx == T::zero() {
            (T::infinity(), T::infinity())
        } else {
            (
                next_boundary(gx0, ix, step_x) / dx.abs(),
                T::one() / dx.abs(),
            )
        };
        let (mut t_max_y, t_delta_y) = if dy == T::zero() {
            (T::infinity(), T::infinity())
        } else {
            (
                next_boundary(gy0, iy, step_y) / dy.abs(),
                T::one() / dy.abs(),
            )
        };

        let (nx, ny) = (self.nx as i64, self.ny as i64);
        let mut emit = |ix: i64, iy: i64| {
            if (0..nx).contains(&ix) && (0..ny).contains(&iy) {
                visit((iy * nx + ix) as usize);
            }
        };

        let mut remaining = (end_x - ix).abs() + (end_y - iy).abs();
        emit(ix, iy);
        while remaining > 0 {
            let x_done = ix == end_x;
            let y_done = iy == end_y;
            if !x_done && (y_done || t_max_x < t_max_y) {
                ix += step_x;
                t_max_x = t_max_x + t_delta_x;
            } else {
                iy += step_y;
                t_max_y = t_max_y + t_delta_y;
            }
            emit(ix, iy);
            remaining -= 1;
        }
    }
}

fn bounding_box<T: Scalar>(b: &Building<T>) -> [T; 4] {
    let (p, q) = b.endpoints();
    [p.x.min(q.x), p.y.min(q.y), p.x.max(q.x), p.y.max(q.y)]
}
