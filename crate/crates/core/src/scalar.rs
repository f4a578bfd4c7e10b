//! Scalar fields of total degree at most two, used for the profiles `g0`,
//! `g1` and for extra symmetry constraints.

use std::fmt;

use crate::{Mat3, Vec3};

/// `c0 + l . y + y^T Q y` with `Q` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadPoly {
    pub c0: f64,
    pub lin: Vec3,
    pub quad: Mat3,
}

impl QuadPoly {
    pub fn constant(c: f64) -> Self {
        QuadPoly { c0: c, lin: Vec3::zeros(), quad: Mat3::zeros() }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    /// Adds `c * y_i` (0-based index).
    pub fn plus_linear(mut self, i: usize, c: f64) -> Self {
        self.lin[i] += c;
        self
    }

    /// Adds `c * y_i * y_j` (0-based indices).
    pub fn plus_quadratic(mut self, i: usize, j: usize, c: f64) -> Self {
        if i == j {
            self.quad[(i, i)] += c;
        } else {
            self.quad[(i, j)] += 0.5 * c;
            self.quad[(j, i)] += 0.5 * c;
        }
        self
    }

    pub fn plus_constant(mut self, c: f64) -> Self {
        self.c0 += c;
        self
    }

    pub fn value(&self, y: &Vec3) -> f64 {
        self.c0 + self.lin.dot(y) + y.dot(&(self.quad * y))
    }

    /// Ambient gradient.
    pub fn grad(&self, y: &Vec3) -> Vec3 {
        self.lin + 2.0 * self.quad * y
    }

    /// Ambient Hessian (constant).
    pub fn hess(&self) -> Mat3 {
        2.0 * self.quad
    }

    pub fn is_constant(&self) -> bool {
        self.lin == Vec3::zeros() && self.quad == Mat3::zeros()
    }

    pub fn sub(&self, other: &QuadPoly) -> QuadPoly {
        QuadPoly { c0: self.c0 - other.c0, lin: self.lin - other.lin, quad: self.quad - other.quad }
    }

    pub fn scale(&self, s: f64) -> QuadPoly {
        QuadPoly { c0: s * self.c0, lin: s * self.lin, quad: s * self.quad }
    }
}

impl fmt::Display for QuadPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = Vec::new();
        if self.c0 != 0.0 {
            terms.push(format!("{}", self.c0));
        }
        for i in 0..3 {
            if self.lin[i] != 0.0 {
                terms.push(format!("{}*y{}", self.lin[i], i + 1));
            }
        }
        for i in 0..3 {
            for j in i..3 {
                let c = if i == j { self.quad[(i, i)] } else { 2.0 * self.quad[(i, j)] };
                if c != 0.0 {
                    if i == j {
                        terms.push(format!("{}*y{}^2", c, i + 1));
                    } else {
                        terms.push(format!("{}*y{}*y{}", c, i + 1, j + 1));
                    }
                }
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
