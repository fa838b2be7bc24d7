//! Coefficient algebras for bordered structures: a strands algebra, its
//! opposite, or a tensor product of two (for DD bimodules).

use std::sync::Arc;

use crate::strands::StrandsAlgebra;

/// A finite-dimensional F2 algebra with a basis of idempotent-homogeneous elements.
#[derive(Clone, Debug)]
pub enum Alg {
    /// A(Z,0).
    Strands(Arc<StrandsAlgebra>),
    /// The opposite algebra of A(Z,0).
    Opposite(Arc<StrandsAlgebra>),
    /// Tensor product; basis index `a * dim(second) + b`.
    Tensor(Box<Alg>, Box<Alg>),
}

impl Alg {
    /// Basis size.
    pub fn dim(&self) -> usize {
        match self {
            Alg::Strands(a) | Alg::Opposite(a) => a.dim(),
            Alg::Tensor(x, y) => x.dim() * y.dim(),
        }
    }

    /// Splits a tensor basis index.
    pub fn split(&self, i: u32) -> (u32, u32) {
        match self {
            Alg::Tensor(_, y) => (i / y.dim() as u32, i % y.dim() as u32),
            _ => (i, 0),
        }
    }

    /// Joins tensor factors into a basis index.
    pub fn join(&self, a: u32, b: u32) -> u32 {
        match self {
            Alg::Tensor(_, y) => a * y.dim() as u32 + b,
            _ => a,
        }
    }

    /// Product of basis elements.
    pub fn mul(&self, a: u32, b: u32) -> Vec<u32> {
        match self {
            Alg::Strands(s) => s.mul(a, b),
            Alg::Opposite(s) => s.mul(b, a),
            Alg::Tensor(x, y) => {
                let ((a1, a2), (b1, b2)) = (self.split(a), self.split(b));
                let p = x.mul(a1, b1);
                if p.is_empty() {
                    return p;
                }
                let q = y.mul(a2, b2);
                let mut out = Vec::with_capacity(p.len() * q.len());
                for &u in &p {
                    for &v in &q {
                        out.push(self.join(u, v));
                    }
                }
                out.sort_unstable();
                out
            }
        }
    }

    /// Differential of a basis element.
    pub fn diff(&self, a: u32) -> Vec<u32> {
        match self {
            Alg::Strands(s) | Alg::Opposite(s) => s.diff(a).to_vec(),
            Alg::Tensor(x, y) => {
                let (a1, a2) = self.split(a);
                let mut out: Vec<u32> = x.diff(a1).into_iter().map(|u| self.join(u, a2)).collect();
                out.extend(y.diff(a2).into_iter().map(|v| self.join(a1, v)));
                crate::f2::normalize(out)
            }
        }
    }

    /// True for idempotent basis elements.
    pub fn is_idempotent(&self, a: u32) -> bool {
        match self {
            Alg::Strands(s) | Alg::Opposite(s) => s.is_idempotent(a),
            Alg::Tensor(x, y) => {
                let (a1, a2) = self.split(a);
                x.is_idempotent(a1) && y.is_idempotent(a2)
            }
        }
    }

    /// Left idempotent (basis index).
    pub fn left_idem(&self, a: u32) -> u32 {
        match self {
            Alg::Strands(s) => s.left_idem(a),
            Alg::Opposite(s) => s.right_idem(a),
            Alg::Tensor(x, y) => {
                let (a1, a2) = self.split(a);
                self.join(x.left_idem(a1), y.left_idem(a2))
            }
        }
    }

    /// Right idempotent (basis index).
    pub fn right_idem(&self, a: u32) -> u32 {
        match self {
            Alg::Strands(s) => s.right_idem(a),
            Alg::Opposite(s) => s.left_idem(a),
            Alg::Tensor(x, y) => {
                let (a1, a2) = self.split(a);
                self.join(x.right_idem(a1), y.right_idem(a2))
            }
        }
    }

    /// Idempotent basis elements.
    pub fn idempotents(&self) -> Vec<u32> {
        match self {
            Alg::Strands(s) | Alg::Opposite(s) => s.idempotents().to_vec(),
            Alg::Tensor(x, y) => {
                let mut out = Vec::new();
                for a in x.idempotents() {
                    for b in y.idempotents() {
                        out.push(self.join(a, b));
                    }
                }
                out
            }
        }
    }

    /// Label of a basis element.
    pub fn label(&self, a: u32) -> String {
        match self {
            Alg::Strands(s) | Alg::Opposite(s) => s.label(a),
            Alg::Tensor(x, y) => {
                let (a1, a2) = self.split(a);
                format!("{}*{}", x.label(a1), y.label(a2))
            }
        }
    }

    /// Underlying strands algebra, when this is `Strands`.
    pub fn strands(&self) -> Option<&Arc<StrandsAlgebra>> {
        match self {
            Alg::Strands(s) => Some(s),
            _ => None,
        }
    }

    /// Structural equality (same kinds over circles with equal matchings).
    pub fn same_as(&self, other: &Alg) -> bool {
        match (self, other) {
            (Alg::Strands(a), Alg::Strands(b)) | (Alg::Opposite(a), Alg::Opposite(b)) => {
                Arc::ptr_eq(a, b) || a.pmc() == b.pmc()
            }
            (Alg::Tensor(a, b), Alg::Tensor(c, d)) => a.same_as(c) && b.same_as(d),
            _ => false,
        }
    }

    /// The opposite algebra.
    pub fn opposite(&self) -> Alg {
        match self {
            Alg::Strands(s) => Alg::Opposite(s.clone()),
            Alg::Opposite(s) => Alg::Strands(s.clone()),
            Alg::Tensor(x, y) => Alg::Tensor(Box::new(x.opposite()), Box::new(y.opposite())),
        }
    }
}
