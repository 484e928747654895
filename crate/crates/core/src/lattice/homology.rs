use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use super::matrix::IntMatrix;
use super::snf;
use super::sparse::{sparse_invariant_factors, sparse_rank, SparseMatrix};
use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d1 ⊕ Z/d2 ⊕ ...`
/// with `2 <= d1 | d2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupInvariants {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// The group `Z^free_rank ⊕ Z/c1 ⊕ Z/c2 ⊕ ...` for arbitrary cyclic
    /// orders `c_i` (not necessarily a divisibility chain), brought into
    /// invariant-factor form. Orders of 0 or 1 are ignored.
    pub fn from_cyclic_orders(free_rank: usize, orders: &[u64]) -> Self {
        AbelianGroupInvariants {
            free_rank,
            torsion: invariant_factors_of_cyclics(orders)
                .into_iter()
                .map(BigInt::from)
                .collect(),
        }
    }

    pub fn finite(orders: &[u64]) -> Self {
        Self::from_cyclic_orders(0, orders)
    }

    /// Builds the group from a Smith diagonal: entries equal to 1 are
    /// dropped, the rest are torsion.
    pub fn from_smith(free_rank: usize, diagonal: &[BigInt]) -> Self {
        AbelianGroupInvariants {
            free_rank,
            torsion: diagonal.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Torsion factors as machine integers; `None` if one does not fit.
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(ToPrimitive::to_u64).collect()
    }

    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    /// Reduced version of an `H_0`: one free summand fewer.
    pub fn reduce_degree_zero(mut self) -> Self {
        self.free_rank = self.free_rank.saturating_sub(1);
        self
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        if self.free_rank > 0 {
            if self.free_rank == 1 {
                write!(f, "Z")?;
            } else {
                write!(f, "Z^{}", self.free_rank)?;
            }
            if !self.torsion.is_empty() {
                write!(f, " + ")?;
            }
        }
        if !self.torsion.is_empty() {
            let parts: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
            write!(f, "[{}]", parts.join(","))?;
        }
        Ok(())
    }
}

struct FactorList<'a>(&'a [BigInt]);

impl Serialize for FactorList<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for d in self.0 {
            match d.to_u64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&d.to_string())?,
            }
        }
        seq.end()
    }
}

impl Serialize for AbelianGroupInvariants {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AbelianGroupInvariants", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &FactorList(&self.torsion))?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}

fn invariant_factors_of_cyclics(orders: &[u64]) -> Vec<u64> {
    // prime -> exponents
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for &n in orders {
        for (p, e) in factorize(n) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for (p, mut exps) in by_prime {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        // largest powers go to the last factors
        for (i, e) in exps.into_iter().enumerate() {
            factors[len - 1 - i] *= p.pow(e);
        }
    }
    factors.retain(|&d| d > 1);
    factors
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `ker(d_out) / im(d_in)` for a composable pair `C_{k+1} -> C_k -> C_{k-1}`.
///
/// `d_out` has `dim C_k` columns and `d_in` has `dim C_k` rows. Because
/// `ker(d_out)` is a direct summand of `C_k`, the torsion of the quotient is
/// the torsion of `coker(d_in)`; the free rank is
/// `dim C_k - rank(d_out) - rank(d_in)`.
pub fn homology_at(d_out: &SparseMatrix, d_in: &SparseMatrix) -> Result<AbelianGroupInvariants> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::DimensionMismatch(format!(
            "outgoing map has {} columns but incoming map has {} rows",
            d_out.cols(),
            d_in.rows()
        )));
    }
    if !d_out.composes_to_zero(d_in)? {
        return Err(Error::NonzeroComposite);
    }
    let middle = d_out.cols();
    let rank_out = sparse_rank(d_out);
    let in_factors = sparse_invariant_factors(d_in);
    let free = middle - rank_out - in_factors.len();
    Ok(AbelianGroupInvariants::from_smith(free, &in_factors))
}

/// Dense counterpart of [`homology_at`].
pub fn homology_at_dense(d_out: &IntMatrix, d_in: &IntMatrix) -> Result<AbelianGroupInvariants> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::DimensionMismatch(format!(
            "outgoing map has {} columns but incoming map has {} rows",
            d_out.cols(),
            d_in.rows()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::NonzeroComposite);
    }
    let rank_out = snf::invariant_factors(d_out).len();
    let in_factors = snf::invariant_factors(d_in);
    let free = d_out.cols() - rank_out - in_factors.len();
    Ok(AbelianGroupInvariants::from_smith(free, &in_factors))
}
