//! Periodic triangulation of the pixel grid.
//!
//! Every pixel square `(i, j)–(i+1, j+1)` is split along the same diagonal,
//! so each vertex has six neighbours. Indices:
//!
//! - vertex `v = j * nx + i`
//! - edge `3v + t`: `t = 0` to `(i+1, j)`, `t = 1` to `(i, j+1)`, `t = 2` to `(i+1, j+1)`
//! - triangle `2v + s`: `s = 0` is `(i,j) (i+1,j) (i+1,j+1)`, `s = 1` is `(i,j) (i+1,j+1) (i,j+1)`

use crate::Real;

/// Neighbour offsets in counter-clockwise order.
pub const LINK: [(isize, isize); 6] = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mesh {
    pub nx: usize,
    pub ny: usize,
}

impl Mesh {
    pub fn new(nx: usize, ny: usize) -> Self {
        assert!(nx >= 3 && ny >= 3, "periodic triangulation needs at least 3x3 pixels");
        Self { nx, ny }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        3 * self.vertex_count()
    }

    #[inline]
    pub fn triangle_count(&self) -> usize {
        2 * self.vertex_count()
    }

    #[inline]
    pub fn vertex(&self, i: isize, j: isize) -> usize {
        let i = i.rem_euclid(self.nx as isize) as usize;
        let j = j.rem_euclid(self.ny as isize) as usize;
        j * self.nx + i
    }

    #[inline]
    pub fn coords(&self, v: usize) -> (isize, isize) {
        ((v % self.nx) as isize, (v / self.nx) as isize)
    }

    #[inline]
    pub fn neighbor(&self, v: usize, k: usize) -> usize {
        let (i, j) = self.coords(v);
        let (di, dj) = LINK[k % 6];
        self.vertex(i + di, j + dj)
    }

    pub fn edge_vertices(&self, e: usize) -> (usize, usize) {
        let v = e / 3;
        let (i, j) = self.coords(v);
        let w = match e % 3 {
            0 => self.vertex(i + 1, j),
            1 => self.vertex(i, j + 1),
            _ => self.vertex(i + 1, j + 1),
        };
        (v, w)
    }

    pub fn edge_triangles(&self, e: usize) -> [usize; 2] {
        let v = e / 3;
        let (i, j) = self.coords(v);
        match e % 3 {
            0 => [2 * v, 2 * self.vertex(i, j - 1) + 1],
            1 => [2 * v + 1, 2 * self.vertex(i - 1, j)],
            _ => [2 * v, 2 * v + 1],
        }
    }

    pub fn triangle_vertices(&self, t: usize) -> [usize; 3] {
        let v = t / 2;
        let (i, j) = self.coords(v);
        if t % 2 == 0 {
            [v, self.vertex(i + 1, j), self.vertex(i + 1, j + 1)]
        } else {
            [v, self.vertex(i + 1, j + 1), self.vertex(i, j + 1)]
        }
    }

    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        let v = t / 2;
        let (i, j) = self.coords(v);
        if t % 2 == 0 {
            [3 * v, 3 * self.vertex(i + 1, j) + 1, 3 * v + 2]
        } else {
            [3 * v + 2, 3 * self.vertex(i, j + 1), 3 * v + 1]
        }
    }

    /// Star of `v`: for each `k`, the triangle spanned by `v`, neighbour `k`
    /// and neighbour `k + 1`, together with its edge opposite `v`.
    pub fn star(&self, v: usize) -> [(usize, usize); 6] {
        let (i, j) = self.coords(v);
        let cell = |di: isize, dj: isize| self.vertex(i + di, j + dj);
        [
            (2 * v, 3 * self.vertex(i + 1, j) + 1),
            (2 * v + 1, 3 * self.vertex(i, j + 1)),
            (2 * cell(-1, 0), 3 * cell(-1, 0) + 2),
            (2 * cell(-1, -1) + 1, 3 * cell(-1, -1) + 1),
            (2 * cell(-1, -1), 3 * cell(-1, -1)),
            (2 * cell(0, -1) + 1, 3 * cell(0, -1) + 2),
        ]
    }

    /// Point on edge `e` in pixel units, a fraction `t` of the way from its
    /// first vertex to its second (not wrapped).
    pub fn edge_point(&self, e: usize, t: f64) -> (f64, f64) {
        let (i, j) = self.coords(e / 3);
        let (di, dj) = match e % 3 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            _ => (1.0, 1.0),
        };
        (i as f64 + t * di, j as f64 + t * dj)
    }

    /// Minimum-image displacement from `a` to `b` in pixel units.
    pub fn displacement(&self, a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
        let wrap = |d: f64, n: usize| {
            let n = n as f64;
            d - n * (d / n).round()
        };
        (wrap(b.0 - a.0, self.nx), wrap(b.1 - a.1, self.ny))
    }
}

/// Position of every vertex in the total order "value, then index", which
/// acts as a symbolic perturbation making all values distinct.
pub fn vertex_ranks<T: Real>(values: &[T]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..values.len() as u32).collect();
    order.sort_by(|&a, &b| {
        values[a as usize]
            .partial_cmp(&values[b as usize])
            .expect("finite values")
            .then(a.cmp(&b))
    });
    let mut ranks = vec![0u32; values.len()];
    for (r, &v) in order.iter().enumerate() {
        ranks[v as usize] = r as u32;
    }
    ranks
}
