//! Uniform lattices over the parameter simplex `{p_i >= 0, Σ p_i <= 1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which part of the simplex a lattice covers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Slice {
    FullSimplex,
    FixedP2Zero,
    /// `p2` held at the given value, `p1` and `p3` on the lattice.
    Custom(f64),
}

impl Slice {
    /// The fixed `p2`, if any.
    pub fn fixed_p2(&self) -> Option<f64> {
        match *self {
            Slice::FullSimplex => None,
            Slice::FixedP2Zero => Some(0.0),
            Slice::Custom(p2) => Some(p2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.fixed_p2() {
            Some(p2) if !(0.0..=1.0).contains(&p2) => Err(Error::InvalidSlice(p2)),
            _ => Ok(()),
        }
    }
}

/// Lattice with spacing `1 / steps` restricted to a [`Slice`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    slice: Slice,
    steps: u64,
}

impl Lattice {
    pub fn new(slice: Slice, steps: u64) -> Result<Self> {
        if steps < 2 {
            return Err(Error::InvalidGrid(steps));
        }
        slice.validate()?;
        Ok(Self { slice, steps })
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn slice(&self) -> Slice {
        self.slice
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.steps as f64
    }

    /// Coordinate of lattice index `j`.
    pub fn coordinate(&self, j: u64) -> f64 {
        j as f64 / self.steps as f64
    }

    /// Largest `j1 + j3` allowed on a fixed-`p2` slice.
    pub(crate) fn slice_budget(&self, p2: f64) -> u64 {
        let room = (1.0 - p2) * self.steps as f64;
        // Absorb rounding in (1 - p2) * steps for p2 on the lattice.
        (room + 1e-9).floor().max(0.0) as u64
    }

    /// Number of points the lattice visits.
    pub fn len(&self) -> u64 {
        let triangle = |n: u64| (n + 1) * (n + 2) / 2;
        match self.slice.fixed_p2() {
            None => (0..=self.steps).map(|j1| triangle(self.steps - j1)).sum(),
            Some(p2) => triangle(self.slice_budget(p2)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in lexicographic order of their lattice indices.
    pub fn points(&self) -> impl Iterator<Item = [f64; 3]> + '_ {
        let s = self.steps;
        let fixed = self.slice.fixed_p2();
        let full = fixed.is_none().then(|| {
            (0..=s).flat_map(move |j1| {
                (0..=s - j1).flat_map(move |j2| {
                    (0..=s - j1 - j2).map(move |j3| [self.coordinate(j1), self.coordinate(j2), self.coordinate(j3)])
                })
            })
        });
        let sliced = fixed.map(|p2| {
            let budget = self.slice_budget(p2);
            (0..=budget)
                .flat_map(move |j1| (0..=budget - j1).map(move |j3| [self.coordinate(j1), p2, self.coordinate(j3)]))
        });
        full.into_iter().flatten().chain(sliced.into_iter().flatten())
    }
}
