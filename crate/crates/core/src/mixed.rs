//! Vectors of `C^{n-d} x R^d`: the space where boundary symbols, support
//! directions and support points live.

use serde::{Deserialize, Serialize};

use crate::C64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mixed {
    /// The first `n - d` (complex) coordinates.
    pub head: Vec<C64>,
    /// The last `d` (real) coordinates.
    pub tail: Vec<f64>,
}

impl Mixed {
    pub fn new(head: Vec<C64>, tail: Vec<f64>) -> Self {
        Mixed { head, tail }
    }

    pub fn zeros(n: usize, d: usize) -> Self {
        Mixed {
            head: vec![C64::new(0.0, 0.0); n - d],
            tail: vec![0.0; d],
        }
    }

    pub fn n(&self) -> usize {
        self.head.len() + self.tail.len()
    }

    pub fn d(&self) -> usize {
        self.tail.len()
    }

    pub fn norm(&self) -> f64 {
        let h: f64 = self.head.iter().map(|c| c.norm_sqr()).sum();
        let t: f64 = self.tail.iter().map(|x| x * x).sum();
        (h + t).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.head.iter().all(|c| c.re == 0.0 && c.im == 0.0) && self.tail.iter().all(|&x| x == 0.0)
    }

    pub fn scale(&self, t: f64) -> Mixed {
        Mixed {
            head: self.head.iter().map(|c| c * t).collect(),
            tail: self.tail.iter().map(|x| x * t).collect(),
        }
    }

    /// Embeds into `C^n` with zero imaginary parts on the tail.
    pub fn to_complex(&self) -> Vec<C64> {
        self.head
            .iter()
            .copied()
            .chain(self.tail.iter().map(|&x| C64::new(x, 0.0)))
            .collect()
    }

    /// Reads `(z_head, Re z_tail)` off a point of `C^n`.
    pub fn from_complex(z: &[C64], d: usize) -> Mixed {
        let k = z.len() - d;
        Mixed {
            head: z[..k].to_vec(),
            tail: z[k..].iter().map(|c| c.re).collect(),
        }
    }

    /// `Re(z . v)` with the bilinear (non-Hermitian) dot product.
    pub fn re_dot(&self, z: &[C64]) -> f64 {
        let k = self.head.len();
        let h: f64 = self.head.iter().zip(z).map(|(v, z)| (v * z).re).sum();
        let t: f64 = self.tail.iter().zip(&z[k..]).map(|(v, z)| v * z.re).sum();
        h + t
    }

    pub fn distance(&self, other: &Mixed) -> f64 {
        let h: f64 = self
            .head
            .iter()
            .zip(&other.head)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let t: f64 = self
            .tail
            .iter()
            .zip(&other.tail)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        (h + t).sqrt()
    }
}

/// Bilinear dot product on `C^n`.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
