//! Orbit representatives in `GMF(m,q)` reached by explicit conjugations in
//! the upper-triangular block group and field automorphisms.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::constructions::gmf::gamma_conj;
use crate::constructions::{Construction, Family};
use crate::field::Field;
use crate::group::{AffinePair, GroupElem};
use crate::linalg::{gl_generators, Mat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error("{0} is not a GMF group over a field of characteristic 2 with more than 2 elements")]
    NotGmf(String),
}

/// One step of a witness chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainStep {
    /// Conjugation by `[[A, B], [0, C]]`.
    Gamma { a: Mat, b: Mat, c: Mat },
    /// Entrywise Frobenius `x -> x^2`.
    Frobenius,
}

impl ChainStep {
    pub fn apply(&self, p: &AffinePair) -> AffinePair {
        match self {
            ChainStep::Gamma { a, b, c } => gamma_conj(p, a, b, c),
            ChainStep::Frobenius => AffinePair {
                x: p.x.frobenius(1),
                y: p.y.frobenius(1),
            },
        }
    }
}

impl fmt::Display for ChainStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainStep::Gamma { a, b, c } => write!(f, "gamma({a}, {b}, {c})"),
            ChainStep::Frobenius => write!(f, "frobenius"),
        }
    }
}

/// Which branch of the case analysis produced the representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalCase {
    /// `(1, Y)`, classified by the rank of `Y`.
    Translation { rank: usize },
    /// An involution outside the translations, sent to `(J, 0)`.
    Involution,
    /// An element of order 4, sent to `(J, [0; e1])`.
    OrderFour,
    /// `X^2 != 1`, sent to `(X', 0)` with `X'` a fixed class representative.
    Semisimple,
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub representative: u32,
    pub case: CanonicalCase,
    /// Applying these steps in order to the input gives the representative.
    pub chain: Vec<ChainStep>,
}

pub fn apply_chain(p: &AffinePair, chain: &[ChainStep]) -> AffinePair {
    chain.iter().fold(p.clone(), |acc, s| s.apply(&acc))
}

/// Computes canonical forms, remembering the conjugation path found for
/// each linear part `X` with `X^2 != 1`.
pub struct GmfCanonicalizer<'a> {
    construction: &'a Construction,
    field: Field,
    m: usize,
    semisimple: HashMap<Mat, (Mat, Vec<ChainStep>)>,
}

impl<'a> GmfCanonicalizer<'a> {
    pub fn new(construction: &'a Construction) -> Result<Self, CanonError> {
        match &construction.family {
            Family::Affine { m, field } if field.characteristic() == 2 && field.order() > 2 => {
                Ok(Self {
                    construction,
                    field: field.clone(),
                    m: *m,
                    semisimple: HashMap::new(),
                })
            }
            _ => Err(CanonError::NotGmf(construction.name())),
        }
    }

    fn id2(&self) -> Mat {
        Mat::identity(&self.field, 2)
    }

    fn idm(&self) -> Mat {
        Mat::identity(&self.field, self.m)
    }

    fn zero_y(&self) -> Mat {
        Mat::zero(&self.field, 2, self.m)
    }

    fn conj_a(&self, a: Mat) -> ChainStep {
        ChainStep::Gamma {
            a,
            b: self.zero_y(),
            c: self.idm(),
        }
    }

    fn conj_b(&self, b: Mat) -> ChainStep {
        ChainStep::Gamma {
            a: self.id2(),
            b,
            c: self.idm(),
        }
    }

    /// `C` in GL(m) with `rows[i] C = e_i`.
    fn basis_to_units(&self, rows: &[&[u16]]) -> Mat {
        Mat::complete_to_basis(&self.field, rows, self.m)
            .expect("independent rows")
            .inv()
            .unwrap()
    }

    /// `A` with `A^-1 X A = J` for unipotent `X != 1`: columns `(X-1)v, v`
    /// for any `v` outside the kernel of `X-1`.
    fn to_j(&self, x: &Mat) -> Mat {
        let n = x.sub(&self.id2()).unwrap();
        let v = if n.get(0, 0) != 0 || n.get(1, 0) != 0 {
            [1u16, 0]
        } else {
            [0, 1]
        };
        let col = Mat::from_vec(&self.field, 2, 1, v.to_vec());
        let u = n.mul_unchecked(&col);
        Mat::from_rows(&self.field, &[&[u.get(0, 0), v[0]], &[u.get(1, 0), v[1]]])
    }

    /// Smallest matrix in the orbit of `x` under GL(2,q)-conjugation and
    /// Frobenius, with the steps reaching it.
    fn semisimple_rep(&mut self, x: &Mat) -> (Mat, Vec<ChainStep>) {
        if let Some(hit) = self.semisimple.get(x) {
            return hit.clone();
        }
        let mut steps: Vec<ChainStep> = gl_generators(&self.field, 2)
            .into_iter()
            .map(|a| self.conj_a(a))
            .collect();
        if self.field.degree() > 1 {
            steps.push(ChainStep::Frobenius);
        }
        let zero = self.zero_y();
        // breadth-first over the orbit, remembering how each point was reached
        let mut parent: HashMap<Mat, Option<(Mat, usize)>> = HashMap::from([(x.clone(), None)]);
        let mut queue = vec![x.clone()];
        let mut k = 0;
        while k < queue.len() {
            let cur = queue[k].clone();
            for (i, s) in steps.iter().enumerate() {
                let next = s.apply(&AffinePair::new(cur.clone(), zero.clone())).x;
                if !parent.contains_key(&next) {
                    parent.insert(next.clone(), Some((cur.clone(), i)));
                    queue.push(next);
                }
            }
            k += 1;
        }
        let best = queue.iter().min().unwrap().clone();
        let mut chain = Vec::new();
        let mut at = best.clone();
        while let Some(Some((prev, i))) = parent.get(&at) {
            chain.push(steps[*i].clone());
            at = prev.clone();
        }
        chain.reverse();
        let out = (best, chain);
        self.semisimple.insert(x.clone(), out.clone());
        out
    }

    pub fn canonical(&mut self, g: u32) -> CanonicalForm {
        let group = &self.construction.group;
        let p = group
            .element(g)
            .as_affine()
            .expect("GMF elements are affine")
            .clone();
        let one = self.id2();
        let (case, chain) = if p.x.is_identity() {
            let rank = p.y.rank();
            let chain = match rank {
                0 => Vec::new(),
                1 => {
                    // row operations R with R Y = [u; 0], then u C = e1
                    let r = if p.y.row(0).iter().any(|&v| v != 0) {
                        let u0 = p.y.row(0).iter().position(|&v| v != 0).unwrap();
                        let lambda = self
                            .field
                            .mul(p.y.get(1, u0), self.field.inv(p.y.get(0, u0)).unwrap());
                        Mat::from_rows(&self.field, &[&[1, 0], &[self.field.neg(lambda), 1]])
                    } else {
                        Mat::from_rows(&self.field, &[&[0, 1], &[1, 0]])
                    };
                    let u = r.mul_unchecked(&p.y);
                    let c = self.basis_to_units(&[u.row(0)]);
                    vec![ChainStep::Gamma {
                        a: r.inv().unwrap(),
                        b: self.zero_y(),
                        c,
                    }]
                }
                _ => {
                    let c = self.basis_to_units(&[p.y.row(0), p.y.row(1)]);
                    vec![ChainStep::Gamma {
                        a: one.clone(),
                        b: self.zero_y(),
                        c,
                    }]
                }
            };
            (CanonicalCase::Translation { rank }, chain)
        } else if p.x.mul_unchecked(&p.x).is_identity() {
            let first = self.conj_a(self.to_j(&p.x));
            let p1 = first.apply(&p);
            if p1.y.row(1).iter().all(|&v| v == 0) {
                // (J, [v; 0]) is conjugated to (J, 0) by Z = [0; v]
                let mut z = self.zero_y();
                z.put(1, 0, &p1.y.block(0, 0, 1, self.m));
                (CanonicalCase::Involution, vec![first, self.conj_b(z)])
            } else {
                let c = self.basis_to_units(&[p1.y.row(1)]);
                let second = ChainStep::Gamma {
                    a: one.clone(),
                    b: self.zero_y(),
                    c,
                };
                let p2 = second.apply(&p1);
                // (J, [x; e1]) is conjugated to (J, [0; e1]) by Z = [0; x]
                let mut z = self.zero_y();
                z.put(1, 0, &p2.y.block(0, 0, 1, self.m));
                (
                    CanonicalCase::OrderFour,
                    vec![first, second, self.conj_b(z)],
                )
            }
        } else {
            let one_minus_x = one.sub(&p.x).unwrap();
            let z = one_minus_x
                .inv()
                .expect("1 - X is invertible when X^2 != 1")
                .mul_unchecked(&p.y);
            let (_, rest) = self.semisimple_rep(&p.x);
            let mut chain = vec![self.conj_b(z)];
            chain.extend(rest);
            (CanonicalCase::Semisimple, chain)
        };
        let rep = apply_chain(&p, &chain);
        let representative = group
            .id_of(&GroupElem::Affine(rep))
            .expect("conjugates stay in the group");
        CanonicalForm {
            representative,
            case,
            chain,
        }
    }
}

/// Canonical orbit representative of `g` with its witness chain.
pub fn canonical_form_gmf(c: &Construction, g: u32) -> Result<CanonicalForm, CanonError> {
    Ok(GmfCanonicalizer::new(c)?.canonical(g))
}
