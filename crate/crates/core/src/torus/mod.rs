//! Extensions of a finite group `F` by a torus `T = ℝ^k/ℤ^k`, modelled on
//! rational points.
//!
//! Elements are pairs `(t, f)` with product `(t, f)(t', f') = (t + ρ(f)t', ff')`.
//! A non-split extension is given as the quotient of the split one by a
//! finite central subgroup `Z` that meets the torus trivially; elements are
//! stored as the lexicographically least pair in their `Z`-orbit.
//!
//! With this product the bracket `[(0,q), (t,1)]` equals `(I − ρ(q⁻¹))t`,
//! which is what [`TorusExtension::psi_star`] returns.

pub mod catalog;
mod cover;

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lattice::{IntMatrix, Lattice};

pub use cover::{single_commutator_cover, CommutatorWitness, CoverReport};

pub type Rational = BigRational;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::parse(format!("'{s}'"), "expected an integer or p/q");
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::parse(format!("'{s}'"), "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn format_point(t: &[Rational]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// An element `(t, f)`; `t` has entries in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElement {
    parent: u64,
    t: Vec<Rational>,
    f: usize,
}

impl ExtElement {
    pub fn t(&self) -> &[Rational] {
        &self.t
    }

    pub fn f(&self) -> usize {
        self.f
    }
}

type Pair = (Vec<Rational>, usize);

#[derive(Clone)]
pub struct TorusExtension {
    id: u64,
    name: String,
    rank: usize,
    finite: FiniteGroup,
    action: Vec<Vec<Vec<i64>>>,
    quotient_generators: Vec<Pair>,
    /// Elements of the central subgroup, sorted, identity first.
    central: Vec<Pair>,
    /// For each F-element, the central element with that F-part.
    central_by_f: Vec<Option<usize>>,
}

impl fmt::Debug for TorusExtension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusExtension")
            .field("name", &self.name)
            .field("rank", &self.rank)
            .field("finite_order", &self.finite.order())
            .field("central_order", &self.central.len())
            .finish()
    }
}

fn identity_matrix(k: usize) -> Vec<Vec<i64>> {
    (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let k = a.len();
    let mut out = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            let mut acc = 0i64;
            for l in 0..k {
                acc = acc.checked_add(a[i][l].checked_mul(b[l][j])?)?;
            }
            out[i][j] = acc;
        }
    }
    Some(out)
}

impl TorusExtension {
    /// `action[f]` is the matrix of `ρ(f)` (rows of length `rank`);
    /// `quotient` lists generators `(s, g)` of the central subgroup to
    /// divide out (empty for the split extension).
    pub fn new(
        name: impl Into<String>,
        rank: usize,
        finite: FiniteGroup,
        action: Vec<Vec<Vec<i64>>>,
        quotient: Vec<(Vec<Rational>, usize)>,
    ) -> Result<Self> {
        let bad = |m: String| Error::InvalidExtension(m);
        if action.len() != finite.order() {
            return Err(bad(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                finite.order()
            )));
        }
        for (f, m) in action.iter().enumerate() {
            if m.len() != rank || m.iter().any(|r| r.len() != rank) {
                return Err(bad(format!("matrix of {} is not {rank}x{rank}", finite.name(f))));
            }
            let det = IntMatrix::from_rows(m).determinant()?;
            if det.abs() != BigInt::one() {
                return Err(bad(format!("matrix of {} has determinant {det}", finite.name(f))));
            }
        }
        if action[0] != identity_matrix(rank) {
            return Err(bad("the identity does not act trivially".into()));
        }
        for f in 0..finite.order() {
            for g in 0..finite.order() {
                let prod = mat_mul(&action[f], &action[g])
                    .ok_or_else(|| bad("matrix entries overflow".into()))?;
                if prod != action[finite.mul(f, g)] {
                    return Err(bad(format!(
                        "action is not a homomorphism at ({}, {})",
                        finite.name(f),
                        finite.name(g)
                    )));
                }
            }
        }
        let mut ext = TorusExtension {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            name: name.into(),
            rank,
            finite,
            action,
            quotient_generators: Vec::new(),
            central: Vec::new(),
            central_by_f: Vec::new(),
        };
        let mut gens = Vec::with_capacity(quotient.len());
        for (s, g) in quotient {
            if s.len() != rank || g >= ext.finite.order() {
                return Err(bad("quotient generator has the wrong shape".into()));
            }
            gens.push((s.iter().map(frac).collect::<Vec<_>>(), g));
        }
        for (s, g) in &gens {
            ext.check_central(s, *g)?;
        }
        ext.quotient_generators = gens.clone();
        ext.central = ext.close_central(&gens)?;
        ext.central_by_f = vec![None; ext.finite.order()];
        for (i, (s, g)) in ext.central.iter().enumerate() {
            if ext.central_by_f[*g].is_some() {
                return Err(bad(format!(
                    "central subgroup meets the torus in the nontrivial point {}",
                    format_point(s)
                )));
            }
            ext.central_by_f[*g] = Some(i);
        }
        Ok(ext)
    }

    /// Extends an action given on generators to all of `F` along the
    /// Cayley graph, then validates it.
    pub fn from_generators(
        name: impl Into<String>,
        rank: usize,
        finite: FiniteGroup,
        generators: &[(usize, Vec<Vec<i64>>)],
        quotient: Vec<(Vec<Rational>, usize)>,
    ) -> Result<Self> {
        let n = finite.order();
        let mut action: Vec<Option<Vec<Vec<i64>>>> = vec![None; n];
        action[0] = Some(identity_matrix(rank));
        let mut queue = vec![0usize];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for (s, m) in generators {
                if *s >= n || m.len() != rank || m.iter().any(|r| r.len() != rank) {
                    return Err(Error::InvalidExtension(format!(
                        "generator matrix must be {rank}x{rank} for a valid element"
                    )));
                }
                let y = finite.mul(x, *s);
                let my = mat_mul(action[x].as_ref().expect("visited"), m).ok_or_else(|| {
                    Error::InvalidExtension("matrix entries overflow".into())
                })?;
                match &action[y] {
                    Some(prev) if *prev != my => {
                        return Err(Error::InvalidExtension(format!(
                            "generator matrices do not define a homomorphism (conflict at {})",
                            finite.name(y)
                        )))
                    }
                    Some(_) => {}
                    None => {
                        action[y] = Some(my);
                        queue.push(y);
                    }
                }
            }
        }
        let action: Vec<_> = action
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| {
                    Error::InvalidExtension(format!(
                        "generators do not reach element {}",
                        finite.name(i)
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Self::new(name, rank, finite, action, quotient)
    }

    fn check_central(&self, s: &[Rational], g: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidExtension(m));
        if self.action[g] != identity_matrix(self.rank) {
            return bad(format!(
                "quotient generator part {} acts nontrivially on the torus",
                self.finite.name(g)
            ));
        }
        for f in 0..self.finite.order() {
            if !self.finite.commutes(f, g) {
                return bad(format!("{} is not central in F", self.finite.name(g)));
            }
            if self.apply_frac(f, s) != s {
                return bad(format!(
                    "torus part {} is not fixed by {}",
                    format_point(s),
                    self.finite.name(f)
                ));
            }
        }
        Ok(())
    }

    fn close_central(&self, gens: &[Pair]) -> Result<Vec<Pair>> {
        let identity: Pair = (vec![Rational::zero(); self.rank], 0);
        let mut elems = vec![identity];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let y = self.mul_split(&elems[i], g);
                if !elems.contains(&y) {
                    if elems.len() > 4 * self.finite.order() * 1024 {
                        return Err(Error::InvalidExtension(
                            "central subgroup is too large".into(),
                        ));
                    }
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems[1..].sort();
        Ok(elems)
    }

    fn apply(&self, f: usize, t: &[Rational]) -> Vec<Rational> {
        self.action[f]
            .iter()
            .map(|row| {
                row.iter()
                    .zip(t)
                    .filter(|(a, _)| **a != 0)
                    .map(|(a, x)| x * Rational::from_integer(BigInt::from(*a)))
                    .fold(Rational::zero(), |acc, v| acc + v)
            })
            .collect()
    }

    fn apply_frac(&self, f: usize, t: &[Rational]) -> Vec<Rational> {
        self.apply(f, t).iter().map(frac).collect()
    }

    fn mul_split(&self, (s, f): &Pair, (t, g): &Pair) -> Pair {
        let rt = self.apply(*f, t);
        (
            s.iter().zip(&rt).map(|(a, b)| frac(&(a + b))).collect(),
            self.finite.mul(*f, *g),
        )
    }

    fn inv_split(&self, (s, f): &Pair) -> Pair {
        let fi = self.finite.inv(*f);
        (self.apply(fi, s).iter().map(|x| frac(&-x)).collect(), fi)
    }

    fn canonical(&self, x: Pair) -> ExtElement {
        let best = if self.central.len() <= 1 {
            x
        } else {
            self.central
                .iter()
                .map(|z| self.mul_split(&x, z))
                .min()
                .expect("nonempty")
        };
        ExtElement {
            parent: self.id,
            t: best.0,
            f: best.1,
        }
    }

    fn pair(&self, x: &ExtElement) -> Result<Pair> {
        if x.parent != self.id {
            return Err(Error::MixedParent);
        }
        Ok((x.t.clone(), x.f))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn finite(&self) -> &FiniteGroup {
        &self.finite
    }

    pub fn is_split(&self) -> bool {
        self.central.len() == 1
    }

    /// Elements of the central subgroup divided out, identity first.
    pub fn central_subgroup(&self) -> Vec<(Vec<Rational>, usize)> {
        self.central.clone()
    }

    pub fn quotient_generators(&self) -> &[(Vec<Rational>, usize)] {
        &self.quotient_generators
    }

    pub fn action_matrix(&self, f: usize) -> IntMatrix {
        IntMatrix::from_rows(&self.action[f])
    }

    pub fn action_rows(&self, f: usize) -> &[Vec<i64>] {
        &self.action[f]
    }

    pub fn element(&self, t: Vec<Rational>, f: usize) -> Result<ExtElement> {
        if t.len() != self.rank {
            return Err(Error::DimensionMismatch(format!(
                "torus point of length {} in rank {}",
                t.len(),
                self.rank
            )));
        }
        if f >= self.finite.order() {
            return Err(Error::InvalidExtension(format!("no finite element with index {f}")));
        }
        Ok(self.canonical((t.iter().map(frac).collect(), f)))
    }

    pub fn identity(&self) -> ExtElement {
        self.canonical((vec![Rational::zero(); self.rank], 0))
    }

    /// The torus element `(t, 1)`.
    pub fn torus(&self, t: Vec<Rational>) -> Result<ExtElement> {
        self.element(t, 0)
    }

    /// The lift `(0, f)`.
    pub fn lift(&self, f: usize) -> ExtElement {
        self.canonical((vec![Rational::zero(); self.rank], f))
    }

    pub fn multiply(&self, x: &ExtElement, y: &ExtElement) -> Result<ExtElement> {
        Ok(self.canonical(self.mul_split(&self.pair(x)?, &self.pair(y)?)))
    }

    pub fn inverse(&self, x: &ExtElement) -> Result<ExtElement> {
        Ok(self.canonical(self.inv_split(&self.pair(x)?)))
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    pub fn commutator(&self, x: &ExtElement, y: &ExtElement) -> Result<ExtElement> {
        let (a, b) = (self.pair(x)?, self.pair(y)?);
        let left = self.mul_split(&self.inv_split(&a), &self.inv_split(&b));
        Ok(self.canonical(self.mul_split(&left, &self.mul_split(&a, &b))))
    }

    /// Torus coordinate of `x` if `x` lies in the identity component.
    pub fn torus_coordinate(&self, x: &ExtElement) -> Result<Option<Vec<Rational>>> {
        let p = self.pair(x)?;
        let fi = self.finite.inv(p.1);
        Ok(self.central_by_f[fi].map(|i| self.mul_split(&p, &self.central[i]).0))
    }

    /// Matrix `L(q)` with `[(0,q), (t,1)] = L(q)·t mod ℤ^k`, namely `I − ρ(q⁻¹)`.
    pub fn psi_star(&self, q: usize) -> IntMatrix {
        let qi = self.finite.inv(q);
        IntMatrix::identity(self.rank)
            .sub(&self.action_matrix(qi))
            .expect("square matrices of equal size")
    }

    /// Applies the bracket with the lift of `q` to the torus point `t`.
    pub fn psi(&self, q: usize, t: Vec<Rational>) -> Result<ExtElement> {
        self.commutator(&self.lift(q), &self.torus(t)?)
    }

    /// Evaluates both sides of the bracket expansion
    /// `[p̄s, q̄t] = [p̄,q̄] · ψ([p,q])(s) · ψ(q⁻¹pq)(t) · ψ(q)(s⁻¹)`,
    /// where `p̄ = (0,p)`, `s = (s,1)` and `ψ(r)(u) = [r̄, u]`.
    pub fn commutator_expansion(
        &self,
        p: usize,
        q: usize,
        s: &[Rational],
        t: &[Rational],
    ) -> Result<(ExtElement, ExtElement)> {
        let g = &self.finite;
        let (ps, qt) = (
            self.multiply(&self.lift(p), &self.torus(s.to_vec())?)?,
            self.multiply(&self.lift(q), &self.torus(t.to_vec())?)?,
        );
        let lhs = self.commutator(&ps, &qt)?;
        let s_inv: Vec<Rational> = s.iter().map(|x| -x).collect();
        let conj = g.mul(g.mul(g.inv(q), p), q);
        let factors = [
            self.commutator(&self.lift(p), &self.lift(q))?,
            self.psi(g.commutator(p, q), s.to_vec())?,
            self.psi(conj, t.to_vec())?,
            self.psi(q, s_inv)?,
        ];
        let mut rhs = self.identity();
        for x in &factors {
            rhs = self.multiply(&rhs, x)?;
        }
        Ok((lhs, rhs))
    }

    pub fn commutator_lattices(&self) -> CommutatorLattices {
        let images: Vec<Lattice> = (0..self.finite.order())
            .map(|q| Lattice::image_of(&self.psi_star(q)))
            .collect();
        let sum = Lattice::sum(self.rank, &images).expect("same ambient");
        let subtorus = sum.saturate();
        CommutatorLattices {
            sum: Lattice::new(sum.basis()),
            subtorus: Lattice::new(subtorus.basis()),
        }
    }

    /// The subtorus lattice and a primitive complement.
    pub fn pi1_split(&self) -> Result<(Lattice, Lattice)> {
        let sub = self.commutator_lattices().subtorus;
        let comp = sub.complement()?;
        Ok((sub, Lattice::new(comp.basis())))
    }

    /// True if the torus point lies on the subtorus with lattice `l`
    /// (assumed primitive).
    pub fn on_subtorus(l: &Lattice, t: &[Rational]) -> bool {
        l.annihilator().generators().columns().iter().all(|w| {
            w.iter()
                .zip(t)
                .map(|(a, x)| x * Rational::from_integer(a.clone()))
                .fold(Rational::zero(), |acc, v| acc + v)
                .is_integer()
        })
    }

    pub fn display(&self, x: &ExtElement) -> String {
        let parts: Vec<String> = x.t.iter().map(ToString::to_string).collect();
        format!("({}; {})", parts.join(", "), self.finite.name(x.f))
    }

    /// `ρ(f)·t` without reduction mod ℤ^k.
    pub fn act(&self, f: usize, t: &[Rational]) -> Vec<Rational> {
        self.apply(f, t)
    }

    pub(crate) fn id(&self) -> u64 {
        self.id
    }

    /// The central element with finite part `g`, if any.
    pub fn central_with_finite_part(&self, g: usize) -> Option<&(Vec<Rational>, usize)> {
        self.central_by_f[g].map(|i| &self.central[i])
    }

    /// Least common denominator of the central subgroup's torus parts.
    pub(crate) fn central_denominator(&self) -> u64 {
        self.central
            .iter()
            .flat_map(|(s, _)| s.iter())
            .map(|x| x.denom().to_u64().unwrap_or(1))
            .fold(1u64, |a, b| a.lcm(&b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorLattices {
    /// Sum of the images of all `psi_star(q)`.
    pub sum: Lattice,
    /// Its saturation.
    pub subtorus: Lattice,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeSummary {
    pub rank: usize,
    pub basis: Vec<Vec<String>>,
    pub text: String,
}

impl From<&Lattice> for LatticeSummary {
    fn from(l: &Lattice) -> Self {
        LatticeSummary {
            rank: l.rank(),
            basis: l
                .hermite_rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
            text: l.to_string(),
        }
    }
}

#[cfg(test)]
mod tests;
