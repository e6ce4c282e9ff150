use std::fmt;

use crate::linalg::Mat;
use crate::perm::Perm;

use super::quotient::Coset;

/// `[[X, Y], [0, 1]]` with `X` a 2x2 matrix of determinant 1 and `Y` a 2xm
/// matrix. Multiplication is the block product
/// `(X1, Y1)(X2, Y2) = (X1 X2, X1 Y2 + Y1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffinePair {
    pub x: Mat,
    pub y: Mat,
}

impl AffinePair {
    pub fn new(x: Mat, y: Mat) -> AffinePair {
        assert_eq!((x.rows(), x.cols()), (y.rows(), y.rows()));
        AffinePair { x, y }
    }

    pub fn identity_like(&self) -> AffinePair {
        AffinePair {
            x: Mat::identity(self.x.field(), self.x.rows()),
            y: Mat::zero(self.y.field(), self.y.rows(), self.y.cols()),
        }
    }

    pub fn mul(&self, other: &AffinePair) -> AffinePair {
        let x = self.x.mul_unchecked(&other.x);
        let y = self
            .x
            .mul_unchecked(&other.y)
            .add(&self.y)
            .expect("affine shapes agree");
        AffinePair { x, y }
    }

    pub fn inverse(&self) -> AffinePair {
        let xi = self.x.inv().expect("affine linear part is invertible");
        let y = xi.mul_unchecked(&self.y).neg();
        AffinePair { x: xi, y }
    }

    pub fn width(&self) -> usize {
        self.y.cols()
    }

    /// The full `(2+m) x (2+m)` block matrix.
    pub fn to_block(&self) -> Mat {
        let n = self.x.rows();
        let m = self.y.cols();
        let f = self.x.field();
        let mut b = Mat::identity(f, n + m);
        b.put(0, 0, &self.x);
        b.put(0, n, &self.y);
        b
    }
}

impl fmt::Display for AffinePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.x, self.y)
    }
}

/// The element types every group in this crate is built from.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum GroupElem {
    Perm(Perm),
    /// A matrix; projective elements are stored scaled so that the first
    /// nonzero entry in row-major order is 1.
    Mat {
        mat: Mat,
        projective: bool,
    },
    Affine(AffinePair),
    Tuple(Vec<GroupElem>),
    /// Residue class in the additive group Z/nZ.
    Zn {
        value: u32,
        modulus: u32,
    },
    Coset(Coset),
}

/// Structural type of an element; elements multiply only with equal shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Perm(usize),
    Mat { n: usize, q: u32, projective: bool },
    Affine { q: u32, m: usize },
    Tuple(Vec<Shape>),
    Zn(u32),
    Coset(usize),
}

impl GroupElem {
    pub fn matrix(mat: Mat) -> GroupElem {
        GroupElem::Mat {
            mat,
            projective: false,
        }
    }

    pub fn projective(mut mat: Mat) -> GroupElem {
        mat.normalize_projective();
        GroupElem::Mat {
            mat,
            projective: true,
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            GroupElem::Perm(p) => Shape::Perm(p.degree()),
            GroupElem::Mat { mat, projective } => Shape::Mat {
                n: mat.rows(),
                q: mat.field().order(),
                projective: *projective,
            },
            GroupElem::Affine(a) => Shape::Affine {
                q: a.x.field().order(),
                m: a.width(),
            },
            GroupElem::Tuple(parts) => Shape::Tuple(parts.iter().map(|e| e.shape()).collect()),
            GroupElem::Zn { modulus, .. } => Shape::Zn(*modulus),
            GroupElem::Coset(c) => Shape::Coset(c.context_id()),
        }
    }

    pub fn mul(&self, other: &GroupElem) -> GroupElem {
        match (self, other) {
            (GroupElem::Perm(a), GroupElem::Perm(b)) => GroupElem::Perm(a.mul(b)),
            (GroupElem::Mat { mat: a, projective }, GroupElem::Mat { mat: b, .. }) => {
                let mut m = a.mul_unchecked(b);
                if *projective {
                    m.normalize_projective();
                }
                GroupElem::Mat {
                    mat: m,
                    projective: *projective,
                }
            }
            (GroupElem::Affine(a), GroupElem::Affine(b)) => GroupElem::Affine(a.mul(b)),
            (GroupElem::Tuple(a), GroupElem::Tuple(b)) => {
                GroupElem::Tuple(a.iter().zip(b).map(|(x, y)| x.mul(y)).collect())
            }
            (GroupElem::Zn { value: a, modulus }, GroupElem::Zn { value: b, .. }) => {
                GroupElem::Zn {
                    value: (a + b) % modulus,
                    modulus: *modulus,
                }
            }
            (GroupElem::Coset(a), GroupElem::Coset(b)) => GroupElem::Coset(a.mul(b)),
            _ => panic!("multiplying elements of different shapes"),
        }
    }

    pub fn inverse(&self) -> GroupElem {
        match self {
            GroupElem::Perm(p) => GroupElem::Perm(p.inverse()),
            GroupElem::Mat { mat, projective } => {
                let mut m = mat.inv().expect("group matrices are invertible");
                if *projective {
                    m.normalize_projective();
                }
                GroupElem::Mat {
                    mat: m,
                    projective: *projective,
                }
            }
            GroupElem::Affine(a) => GroupElem::Affine(a.inverse()),
            GroupElem::Tuple(parts) => {
                GroupElem::Tuple(parts.iter().map(|e| e.inverse()).collect())
            }
            GroupElem::Zn { value, modulus } => GroupElem::Zn {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
            GroupElem::Coset(c) => GroupElem::Coset(c.inverse()),
        }
    }

    pub fn identity_like(&self) -> GroupElem {
        match self {
            GroupElem::Perm(p) => GroupElem::Perm(Perm::identity(p.degree())),
            GroupElem::Mat { mat, projective } => GroupElem::Mat {
                mat: Mat::identity(mat.field(), mat.rows()),
                projective: *projective,
            },
            GroupElem::Affine(a) => GroupElem::Affine(a.identity_like()),
            GroupElem::Tuple(parts) => {
                GroupElem::Tuple(parts.iter().map(|e| e.identity_like()).collect())
            }
            GroupElem::Zn { modulus, .. } => GroupElem::Zn {
                value: 0,
                modulus: *modulus,
            },
            GroupElem::Coset(c) => GroupElem::Coset(c.identity()),
        }
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &GroupElem) -> GroupElem {
        g.inverse().mul(self).mul(g)
    }

    pub fn as_affine(&self) -> Option<&AffinePair> {
        match self {
            GroupElem::Affine(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_mat(&self) -> Option<&Mat> {
        match self {
            GroupElem::Mat { mat, .. } => Some(mat),
            _ => None,
        }
    }

    pub fn as_perm(&self) -> Option<&Perm> {
        match self {
            GroupElem::Perm(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElem::Perm(p) => write!(f, "{p}"),
            GroupElem::Mat { mat, .. } => write!(f, "{mat}"),
            GroupElem::Affine(a) => write!(f, "{a}"),
            GroupElem::Tuple(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            GroupElem::Zn { value, .. } => write!(f, "{value}"),
            GroupElem::Coset(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
