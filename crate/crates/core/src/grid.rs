//! Exact disk-coverage bookkeeping on the torus via per-cell
//! earliest-cover times.
//!
//! A point `z` is covered at time `t` by a center born at `s` iff
//! `s + sqrt(2*pi) * d(z, center) <= t` (disk radius grows as
//! `r(s) = s / sqrt(2*pi)`). The grid stores, for every cell's center
//! point, the minimum of that expression over all registered disk
//! centers. Cover times and hitting times are then exact up to spatial
//! discretization, with no time-stepping error at all.
//!
//! Two access patterns are supported:
//!
//! * post-hoc queries at arbitrary times (`covered_count_at`,
//!   `cover_time`, `sorted_earliest`);
//! * a monotone online sweep (`advance_to` / `covered_count_now`) used
//!   by the coupled simulation, which must know the covered area at every
//!   candidate birth time. The sweep keeps a lazy min-heap of pending
//!   cover events, so each query costs only the cells newly covered.
//!
//! Registration prunes its cell scan to the disk that can still improve
//! anything: no cell's earliest time can exceed `max(earliest)`, and that
//! maximum only decreases, so a stale upper bound on it bounds the useful
//! radius `(bound - birth) / sqrt(2*pi)` of a new center. The bound is
//! refreshed by a full scan on a coarse schedule.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::SimError;
use crate::torus::TorusPoint;
use crate::SQRT_2PI;

/// Heap entry ordered by cover time (total order; times are finite).
#[derive(Clone, Copy, PartialEq)]
struct Pending(f64, u32);

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Per-cell earliest-cover times for a `g x g` discretization of the
/// torus of side `n`. Cell membership is judged at the cell's center
/// point, so the area estimate `count * (n/g)^2` carries an error of at
/// most one cell-diagonal band around the covered region's perimeter.
pub struct CoverageGrid {
    side: f64,
    g: usize,
    cell: f64,
    earliest: Vec<f64>,
    registered: u64,
    // online sweep state
    now: f64,
    counted: Vec<bool>,
    covered_order: Vec<u32>,
    pending: BinaryHeap<Reverse<Pending>>,
    // stale-safe upper bound on max(earliest), +inf until first register
    max_bound: f64,
}

impl CoverageGrid {
    pub fn new(side: f64, g: usize) -> Result<Self, SimError> {
        if g < 2 {
            return Err(SimError::config("grid_g", g, "must be at least 2"));
        }
        if !(side > 0.0) {
            return Err(SimError::config("n", side, "must be positive"));
        }
        Ok(CoverageGrid {
            side,
            g,
            cell: side / g as f64,
            earliest: vec![f64::INFINITY; g * g],
            registered: 0,
            now: 0.0,
            counted: vec![false; g * g],
            covered_order: Vec::new(),
            pending: BinaryHeap::new(),
            max_bound: f64::INFINITY,
        })
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn cells_per_side(&self) -> usize {
        self.g
    }

    /// Cell edge length `n / g`.
    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    /// Area represented by one cell.
    pub fn cell_area(&self) -> f64 {
        self.cell * self.cell
    }

    pub fn n_cells(&self) -> usize {
        self.g * self.g
    }

    /// Index of the cell containing `p`.
    pub fn cell_index(&self, p: TorusPoint) -> u32 {
        let i = ((p.x / self.cell) as usize).min(self.g - 1);
        let j = ((p.y / self.cell) as usize).min(self.g - 1);
        (j * self.g + i) as u32
    }

    /// Center point of cell `idx`.
    pub fn cell_center(&self, idx: u32) -> TorusPoint {
        let i = idx as usize % self.g;
        let j = idx as usize / self.g;
        TorusPoint {
            x: (i as f64 + 0.5) * self.cell,
            y: (j as f64 + 0.5) * self.cell,
        }
    }

    pub fn earliest(&self, idx: u32) -> f64 {
        self.earliest[idx as usize]
    }

    /// Registers a disk center: every cell's earliest time drops to
    /// `min(old, birth + sqrt(2*pi) * d(cell center, position))`.
    pub fn register_center(&mut self, position: TorusPoint, birth_time: f64) {
        debug_assert!(birth_time.is_finite());
        self.registered += 1;
        let inv = 1.0 / SQRT_2PI;
        let g = self.g;

        // Cells beyond this radius cannot improve on their current value.
        let radius = (self.max_bound - birth_time) * inv;
        if radius <= 0.0 {
            return;
        }

        // Per-axis wrapped distances for the index window, computed once.
        let (xs, is) = self.axis_window(position.x, radius);
        let (ys, js) = self.axis_window(position.y, radius);

        for (dy2, &j) in ys.iter().zip(&js) {
            let row = j * g;
            for (dx2, &i) in xs.iter().zip(&is) {
                let idx = row + i;
                let e = self.earliest[idx];
                let slack = (e - birth_time) * inv;
                let d2 = dx2 + dy2;
                if slack > 0.0 && d2 < slack * slack {
                    let v = birth_time + SQRT_2PI * d2.sqrt();
                    self.earliest[idx] = v;
                    if !self.counted[idx] {
                        self.pending.push(Reverse(Pending(v, idx as u32)));
                    }
                }
            }
        }

        // Refresh the stale bound now and then; the true maximum only
        // decreases, so any past value stays a valid upper bound.
        if self.registered.is_power_of_two() || self.registered % 64 == 0 {
            self.max_bound = self.max_earliest();
        }
    }

    /// Squared per-axis wrapped distances (and indices) of all cells whose
    /// center's axis distance to `coord` can be below `radius`.
    fn axis_window(&self, coord: f64, radius: f64) -> (Vec<f64>, Vec<usize>) {
        let g = self.g;
        let span = if radius.is_finite() {
            (2.0 * radius / self.cell).ceil() as usize + 2
        } else {
            g
        };
        let (mut d2, mut idx) = (Vec::with_capacity(span.min(g)), Vec::with_capacity(span.min(g)));
        if span >= g {
            for i in 0..g {
                let c = (i as f64 + 0.5) * self.cell;
                let mut d = (c - coord).abs();
                if d > self.side - d {
                    d = self.side - d;
                }
                d2.push(d * d);
                idx.push(i);
            }
        } else {
            let lo = ((coord - radius) / self.cell - 0.5).floor() as i64;
            let hi = ((coord + radius) / self.cell - 0.5).ceil() as i64;
            for raw in lo..=hi {
                let i = raw.rem_euclid(g as i64) as usize;
                let c = (i as f64 + 0.5) * self.cell;
                let mut d = (c - coord).abs();
                if d > self.side - d {
                    d = self.side - d;
                }
                d2.push(d * d);
                idx.push(i);
            }
        }
        (d2, idx)
    }

    /// Exact maximum of the per-cell earliest times (infinite while some
    /// cell is still untouched).
    pub fn max_earliest(&self) -> f64 {
        self.earliest.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    /// Advances the online sweep to time `t` (monotone), counting every
    /// cell whose earliest time is `<= t`.
    pub fn advance_to(&mut self, t: f64) {
        debug_assert!(t >= self.now, "online sweep must move forward");
        self.now = t;
        while let Some(&Reverse(Pending(v, idx))) = self.pending.peek() {
            if v > t {
                break;
            }
            self.pending.pop();
            let i = idx as usize;
            // lazy duplicates: a cell may appear several times
            if !self.counted[i] && self.earliest[i] <= t {
                self.counted[i] = true;
                self.covered_order.push(idx);
            }
        }
    }

    /// Number of covered cells at the sweep's current time.
    pub fn covered_count_now(&self) -> usize {
        self.covered_order.len()
    }

    /// Covered area at the sweep's current time.
    pub fn covered_area_now(&self) -> f64 {
        self.covered_order.len() as f64 * self.cell_area()
    }

    /// Cells in the order the sweep counted them (nondecreasing earliest
    /// time); a uniform index into this prefix is a uniform covered cell.
    pub fn covered_order(&self) -> &[u32] {
        &self.covered_order
    }

    pub fn is_counted(&self, idx: u32) -> bool {
        self.counted[idx as usize]
    }

    /// Exact covered-cell count at an arbitrary time (full scan; intended
    /// for post-hoc queries and oracles, not inner loops).
    pub fn covered_count_at(&self, t: f64) -> usize {
        self.earliest.iter().filter(|&&e| e <= t).count()
    }

    /// Covered area at an arbitrary time: `count(t) * (n/g)^2`.
    pub fn covered_area(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        self.covered_count_at(t) as f64 * self.cell_area()
    }

    /// Exact cover time of the grid given the registered centers: the
    /// maximum per-cell earliest time. `None` while any cell is untouched.
    pub fn cover_time(&self) -> Option<f64> {
        let m = self.max_earliest();
        m.is_finite().then_some(m)
    }

    /// All per-cell earliest times, ascending. The k-th entry (0-based)
    /// is the exact time the covered-cell count first reaches k+1.
    pub fn sorted_earliest(&self) -> Vec<f64> {
        let mut v = self.earliest.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}
