//! Path × time grids.

use serde::{Deserialize, Serialize};

/// Location of one sample on a path × time grid. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SampleIndex {
    pub path: usize,
    pub t_index: usize,
}

impl SampleIndex {
    pub fn new(path: usize, t_index: usize) -> Self {
        Self { path, t_index }
    }
}

impl std::fmt::Display for SampleIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(path {}, t {})", self.path, self.t_index)
    }
}

/// Dense grid of values indexed by path then time, stored path-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    n_paths: usize,
    n_times: usize,
    cells: Vec<T>,
}

impl<T> Grid<T> {
    /// Builds a grid by evaluating `f` at every index in path-major order.
    pub fn from_fn(n_paths: usize, n_times: usize, mut f: impl FnMut(SampleIndex) -> T) -> Self {
        let mut cells = Vec::with_capacity(n_paths * n_times);
        for path in 0..n_paths {
            for t_index in 0..n_times {
                cells.push(f(SampleIndex { path, t_index }));
            }
        }
        Self {
            n_paths,
            n_times,
            cells,
        }
    }

    /// Wraps path-major cells; `None` if the length does not match.
    pub fn from_cells(n_paths: usize, n_times: usize, cells: Vec<T>) -> Option<Self> {
        (cells.len() == n_paths * n_times).then_some(Self {
            n_paths,
            n_times,
            cells,
        })
    }

    /// From nested `[path][time]` vectors; `None` if ragged.
    pub fn from_nested(nested: Vec<Vec<T>>) -> Option<Self> {
        let n_paths = nested.len();
        let n_times = nested.first().map_or(0, Vec::len);
        if nested.iter().any(|p| p.len() != n_times) {
            return None;
        }
        Some(Self {
            n_paths,
            n_times,
            cells: nested.into_iter().flatten().collect(),
        })
    }

    #[inline]
    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    #[inline]
    pub fn n_times(&self) -> usize {
        self.n_times
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn same_shape<U>(&self, other: &Grid<U>) -> bool {
        self.n_paths == other.n_paths && self.n_times == other.n_times
    }

    #[inline]
    fn offset(&self, idx: SampleIndex) -> usize {
        assert!(idx.path < self.n_paths && idx.t_index < self.n_times, "{idx} off grid");
        idx.path * self.n_times + idx.t_index
    }

    #[inline]
    pub fn get(&self, idx: SampleIndex) -> &T {
        &self.cells[self.offset(idx)]
    }

    #[inline]
    pub fn at(&self, path: usize, t_index: usize) -> &T {
        self.get(SampleIndex { path, t_index })
    }

    #[inline]
    pub fn get_mut(&mut self, idx: SampleIndex) -> &mut T {
        let o = self.offset(idx);
        &mut self.cells[o]
    }

    pub fn contains(&self, idx: SampleIndex) -> bool {
        idx.path < self.n_paths && idx.t_index < self.n_times
    }

    /// Index of the cell at a flat path-major position.
    #[inline]
    pub fn index_of(&self, flat: usize) -> SampleIndex {
        SampleIndex {
            path: flat / self.n_times,
            t_index: flat % self.n_times,
        }
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    /// The cells of one path, in time order.
    pub fn path(&self, path: usize) -> &[T] {
        &self.cells[path * self.n_times..(path + 1) * self.n_times]
    }

    pub fn iter(&self) -> impl Iterator<Item = (SampleIndex, &T)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.index_of(i), c))
    }

    pub fn map<U>(&self, mut f: impl FnMut(SampleIndex, &T) -> U) -> Grid<U> {
        Grid {
            n_paths: self.n_paths,
            n_times: self.n_times,
            cells: self.iter().map(|(i, c)| f(i, c)).collect(),
        }
    }

    pub fn to_nested(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.n_paths).map(|p| self.path(p).to_vec()).collect()
    }
}
