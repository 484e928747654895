use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// A sublattice of `Z^k`, spanned by the columns of a generator matrix.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient: usize,
    generators: IntMatrix,
}

impl Lattice {
    pub fn new(generators: IntMatrix) -> Self {
        Lattice {
            ambient: generators.rows(),
            generators,
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        let cols: Vec<Vec<BigInt>> = vectors
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Ok(Lattice {
            ambient,
            generators: IntMatrix::from_columns(ambient, &cols)?,
        })
    }

    pub fn zero(ambient: usize) -> Self {
        Lattice {
            ambient,
            generators: IntMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Lattice {
            ambient,
            generators: IntMatrix::identity(ambient),
        }
    }

    /// Image of `Z^m` under an `ambient x m` matrix.
    pub fn image_of(m: &IntMatrix) -> Self {
        Self::new(m.clone())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.hermite_rows().len()
    }

    /// Canonical basis: the nonzero rows of the row-style Hermite normal form
    /// of the generators (each generator taken as a row). Pivots are positive
    /// and entries above a pivot are reduced into `[0, pivot)`.
    pub fn hermite_rows(&self) -> Vec<Vec<BigInt>> {
        hermite_rows(self.generators.columns(), self.ambient)
    }

    /// Canonical basis as the columns of an `ambient x rank` matrix.
    pub fn basis(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient, &self.hermite_rows()).expect("ambient length")
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient
            && other
                .generators
                .columns()
                .into_iter()
                .all(|v| self.contains_vector(&v))
    }

    pub fn contains_vector(&self, v: &[BigInt]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let basis = self.hermite_rows();
        let mut rest = v.to_vec();
        for row in &basis {
            let pc = pivot_col(row).expect("nonzero row");
            if rest[pc].is_zero() {
                continue;
            }
            let (q, r) = rest[pc].div_rem(&row[pc]);
            if !r.is_zero() {
                return false;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
        rest.iter().all(Zero::is_zero)
    }

    pub fn same_as(&self, other: &Lattice) -> bool {
        self.ambient == other.ambient && self.hermite_rows() == other.hermite_rows()
    }

    /// Smallest primitive sublattice containing `self`: its rational span
    /// intersected with `Z^k`.
    pub fn saturate(&self) -> Lattice {
        let s = smith_normal_form(&self.generators);
        let r = s.rank();
        let cols: Vec<Vec<BigInt>> = (0..r).map(|j| s.u_inv.column(j)).collect();
        Lattice {
            ambient: self.ambient,
            generators: IntMatrix::from_columns(self.ambient, &cols).expect("ambient length"),
        }
    }

    /// Index of `self` in its saturation.
    pub fn saturation_index(&self) -> BigInt {
        smith_normal_form(&self.generators)
            .invariant_factors()
            .iter()
            .product()
    }

    pub fn is_primitive(&self) -> bool {
        self.saturation_index().is_one()
    }

    /// Index of `self` inside `outer`, when `self ⊆ outer` and both have the
    /// same rank.
    pub fn index_in(&self, outer: &Lattice) -> Option<BigInt> {
        if !outer.contains(self) || self.rank() != outer.rank() {
            return None;
        }
        Some(self.saturation_index() / outer.saturation_index())
    }

    /// Lattice generated by all generators of all inputs.
    pub fn sum(ambient: usize, lattices: &[Lattice]) -> Result<Lattice> {
        let mut cols = Vec::new();
        for l in lattices {
            if l.ambient != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "lattice in Z^{} summed in Z^{ambient}",
                    l.ambient
                )));
            }
            cols.extend(l.generators.columns());
        }
        Ok(Lattice {
            ambient,
            generators: IntMatrix::from_columns(ambient, &cols)?,
        })
    }

    /// A primitive direct complement: `self ⊕ complement = Z^k`.
    pub fn complement(&self) -> Result<Lattice> {
        let s = smith_normal_form(&self.generators);
        let index: BigInt = s.invariant_factors().iter().product();
        if !index.is_one() {
            return Err(Error::NotPrimitive(index.to_string()));
        }
        let r = s.rank();
        let cols: Vec<Vec<BigInt>> = (r..self.ambient).map(|j| s.u_inv.column(j)).collect();
        Ok(Lattice {
            ambient: self.ambient,
            generators: IntMatrix::from_columns(self.ambient, &cols)?,
        })
    }

    /// `{w ∈ Z^k : w·v = 0 for all v in self}`, always primitive.
    pub fn annihilator(&self) -> Lattice {
        let s = smith_normal_form(&self.generators);
        let r = s.rank();
        let cols: Vec<Vec<BigInt>> = (r..self.ambient).map(|i| s.u.row(i).to_vec()).collect();
        Lattice {
            ambient: self.ambient,
            generators: IntMatrix::from_columns(self.ambient, &cols).expect("ambient length"),
        }
    }

    /// True when the canonical bases of `self` and `other` together form a
    /// basis of `Z^k` (stacked basis has determinant ±1).
    pub fn is_direct_complement(&self, other: &Lattice) -> bool {
        if self.ambient != other.ambient || self.rank() + other.rank() != self.ambient {
            return false;
        }
        let stacked = self.basis().hstack(&other.basis()).expect("same ambient");
        stacked.is_unimodular()
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Lattice {}

impl fmt::Display for Lattice {
    /// Rank-one lattices in `Z^1` print as `nZ`; otherwise the canonical
    /// basis is listed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.hermite_rows();
        if rows.is_empty() {
            return write!(f, "0");
        }
        if self.ambient == 1 {
            return if rows[0][0].is_one() {
                write!(f, "Z")
            } else {
                write!(f, "{}Z", rows[0][0])
            };
        }
        let parts: Vec<String> = rows
            .iter()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("({})", xs.join(","))
            })
            .collect();
        write!(f, "span{{{}}}", parts.join(", "))
    }
}

fn pivot_col(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

pub(crate) fn hermite_rows(mut rows: Vec<Vec<BigInt>>, width: usize) -> Vec<Vec<BigInt>> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pending = rows;
    for col in 0..width {
        // Euclid on the entries in this column among pending rows.
        loop {
            let mut nz: Vec<usize> = (0..pending.len())
                .filter(|&i| !pending[i][col].is_zero())
                .collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by(|&a, &b| {
                pending[a][col]
                    .abs()
                    .cmp(&pending[b][col].abs())
                    .then(a.cmp(&b))
            });
            let p = nz[0];
            let pv = pending[p][col].clone();
            let prow = pending[p].clone();
            for &i in &nz[1..] {
                let q = pending[i][col].div_floor(&pv);
                for (x, y) in pending[i].iter_mut().zip(&prow) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(i) = (0..pending.len()).find(|&i| !pending[i][col].is_zero()) {
            let mut row = pending.remove(i);
            if row[col].is_negative() {
                for x in &mut row {
                    *x = -x.clone();
                }
            }
            for prev in &mut out {
                let q = prev[col].div_floor(&row[col]);
                if !q.is_zero() {
                    for (x, y) in prev.iter_mut().zip(&row) {
                        *x -= &q * y;
                    }
                }
            }
            out.push(row);
        }
        pending.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    out
}
