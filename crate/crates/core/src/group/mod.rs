//! Finite groups as multiplication tables, subgroups, and enumeration of
//! commuting and almost commuting tuples.
//!
//! Commutators follow `[x, y] = x⁻¹ y⁻¹ x y` throughout the crate.

mod abelian;
pub mod catalog;
mod central;
mod tuples;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use abelian::{abelian_invariants, abelianization};
pub use central::{
    central_product, check_pullback, CentralIdentification, CentralProduct, PullbackCheck,
};
pub use tuples::{
    almost_commuting_tuples, centralizer_size_sum, commuting_tuples, realize_triple,
};

/// Orders above this are checked for associativity on a deterministic
/// random sample instead of exhaustively.
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;
const ASSOCIATIVITY_SAMPLES: usize = 200_000;
/// Largest group the closure constructor will build.
pub const MAX_CLOSURE_ORDER: usize = 100_000;

/// A finite group given by its multiplication table. Index 0 is the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    names: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("names", &self.names)
            .finish()
    }
}

impl FiniteGroup {
    /// Validates a table (row `a`, column `b` holds `a * b`).
    ///
    /// Checks: identity at index 0, every row and column a permutation,
    /// associativity (exhaustive up to order 64, sampled above).
    pub fn from_table(rows: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has length {}", r.len())));
            }
            if let Some(&x) = r.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("entry {x} out of range in row {i}")));
            }
            table.extend_from_slice(r);
        }
        let names = match names {
            Some(v) if v.len() != n => {
                return Err(Error::InvalidGroup(format!(
                    "{} names for {n} elements",
                    v.len()
                )))
            }
            Some(v) => v,
            None => (0..n).map(default_name).collect(),
        };
        let g = Self::assemble(n, table, names)?;
        g.check_latin()?;
        g.check_associative()?;
        Ok(g)
    }

    fn assemble(order: usize, table: Vec<usize>, names: Vec<String>) -> Result<Self> {
        for a in 0..order {
            if table[a] != a || table[a * order] != a {
                return Err(Error::InvalidGroup(format!(
                    "index 0 does not act as identity on element {a}"
                )));
            }
        }
        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            if let Some(b) = (0..order).find(|&b| table[a * order + b] == 0) {
                inverses[a] = b;
            } else {
                return Err(Error::InvalidGroup(format!("element {a} has no inverse")));
            }
        }
        Ok(FiniteGroup {
            order,
            table,
            inverses,
            names,
        })
    }

    fn check_latin(&self) -> Result<()> {
        let n = self.order;
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let x = self.mul(a, b);
                if seen[x] {
                    return Err(Error::InvalidGroup(format!("row {a} repeats element {x}")));
                }
                seen[x] = true;
            }
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..n {
                let x = self.mul(b, a);
                if seen[x] {
                    return Err(Error::InvalidGroup(format!(
                        "column {a} repeats element {x}"
                    )));
                }
                seen[x] = true;
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        let bad = |a: usize, b: usize, c: usize| {
            Error::InvalidGroup(format!("associativity fails at ({a},{b},{c})"))
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(bad(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(bad(a, b, c));
                }
            }
        }
        Ok(())
    }

    /// Closes `generators` under `mul` and builds the table. Elements are
    /// sorted by `Ord` with the identity moved to index 0.
    pub fn from_closure<T, M, N>(identity: T, generators: &[T], mul: M, name: N) -> Result<Self>
    where
        T: Clone + Ord + Hash,
        M: Fn(&T, &T) -> T,
        N: Fn(&T) -> String,
    {
        let mut elems: Vec<T> = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::new();
        index.insert(identity.clone(), 0);
        let mut frontier = 0;
        while frontier < elems.len() {
            let x = elems[frontier].clone();
            frontier += 1;
            for g in generators {
                let y = mul(&x, g);
                if !index.contains_key(&y) {
                    if elems.len() >= MAX_CLOSURE_ORDER {
                        return Err(Error::InvalidGroup(format!(
                            "closure exceeds {MAX_CLOSURE_ORDER} elements"
                        )));
                    }
                    index.insert(y.clone(), elems.len());
                    elems.push(y);
                }
            }
        }
        let mut sorted: Vec<T> = elems.into_iter().filter(|e| *e != identity).collect();
        sorted.sort();
        sorted.insert(0, identity);
        let lookup: HashMap<&T, usize> = sorted.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let n = sorted.len();
        let mut table = vec![0; n * n];
        for (i, a) in sorted.iter().enumerate() {
            for (j, b) in sorted.iter().enumerate() {
                let c = mul(a, b);
                table[i * n + j] = *lookup.get(&c).ok_or_else(|| {
                    Error::InvalidGroup("multiplication leaves the generated set".into())
                })?;
            }
        }
        let names = sorted.iter().map(name).collect();
        let g = Self::assemble(n, table, names)?;
        g.check_latin()?;
        Ok(g)
    }

    /// Group generated by permutations of `{0..degree-1}` given as image
    /// lists. The product `p * q` applies `q` first.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidGroup(format!(
                    "generator {i} is not a permutation of degree {degree}"
                )));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        Self::from_closure(
            id,
            generators,
            |p, q| q.iter().map(|&x| p[x]).collect(),
            |p| cycle_notation(p),
        )
    }

    /// Direct product; element `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let order = n * m;
        let mut table = vec![0; order * order];
        for a in 0..n {
            for b in 0..m {
                for c in 0..n {
                    for d in 0..m {
                        table[(a * m + b) * order + c * m + d] =
                            self.mul(a, c) * m + other.mul(b, d);
                    }
                }
            }
        }
        let mut inverses = vec![0; order];
        let mut names = Vec::with_capacity(order);
        for a in 0..n {
            for b in 0..m {
                inverses[a * m + b] = self.inv(a) * m + other.inv(b);
                names.push(format!("({},{})", self.names[a], other.names[b]));
            }
        }
        FiniteGroup {
            order,
            table,
            inverses,
            names,
        }
    }

    /// Quotient by a normal subgroup. Cosets are ordered by their smallest
    /// element; the returned map sends each element to its coset index.
    pub fn quotient(&self, normal: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !normal.is_normal(self) {
            return Err(Error::NotNormal);
        }
        let mut map = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if map[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &n in normal.elements() {
                map[self.mul(g, n)] = idx;
            }
        }
        let q = reps.len();
        let mut table = vec![0; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * q + j] = map[self.mul(a, b)];
            }
        }
        let names = reps.iter().map(|&r| self.names[r].clone()).collect();
        Ok((Self::assemble(q, table, names)?, map))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    #[inline]
    pub fn commutes(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn pow(&self, a: usize, n: usize) -> usize {
        (0..n).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commutes(a, b)))
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Looks up an element by label, by `#index`, or `1`/`e` for the identity.
    pub fn element(&self, label: &str) -> Option<usize> {
        let label = label.trim();
        if let Some(i) = self.names.iter().position(|n| n == label) {
            return Some(i);
        }
        if label == "1" || label == "e" {
            return Some(0);
        }
        label
            .strip_prefix('#')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&i| i < self.order)
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn centralizer(&self, a: usize) -> Subgroup {
        Subgroup::from_members(self, (0..self.order).filter(|&b| self.commutes(a, b)))
    }

    /// Number of elements of each order, keyed by order.
    pub fn order_statistics(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for a in 0..self.order {
            *m.entry(self.element_order(a)).or_insert(0) += 1;
        }
        m
    }
}

fn default_name(i: usize) -> String {
    if i == 0 {
        "1".to_string()
    } else {
        format!("g{i}")
    }
}

/// Cycle notation of a permutation given by images; identity is `()`.
pub fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut x = p[start];
        while x != start {
            seen[x] = true;
            cycle.push(x);
            x = p[x];
        }
        let parts: Vec<String> = cycle.iter().map(ToString::to_string).collect();
        out.push('(');
        out.push_str(&parts.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

/// A subgroup, stored as a sorted element list plus a membership mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
    members: Vec<bool>,
}

impl Subgroup {
    fn from_members(g: &FiniteGroup, it: impl IntoIterator<Item = usize>) -> Self {
        let mut members = vec![false; g.order()];
        for x in it {
            members[x] = true;
        }
        let elements = (0..g.order()).filter(|&x| members[x]).collect();
        Subgroup { elements, members }
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Self::from_members(g, [0])
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Self::from_members(g, 0..g.order())
    }

    /// Subgroup generated by the given elements.
    pub fn generated(g: &FiniteGroup, generators: &[usize]) -> Self {
        let mut members = vec![false; g.order()];
        members[0] = true;
        let mut elems = vec![0];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            i += 1;
            for &s in generators {
                let y = g.mul(x, s);
                if !members[y] {
                    members[y] = true;
                    elems.push(y);
                }
            }
        }
        Self::from_members(g, elems)
    }

    /// Validates that `elements` is a subgroup of `g`.
    pub fn from_elements(g: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        if let Some(&x) = elements.iter().find(|&&x| x >= g.order()) {
            return Err(Error::NotSubgroup(format!("element {x} out of range")));
        }
        let s = Self::from_members(g, elements.iter().copied());
        if !s.members[0] {
            return Err(Error::NotSubgroup("missing identity".into()));
        }
        for &a in &s.elements {
            if !s.members[g.inv(a)] {
                return Err(Error::NotSubgroup(format!("not closed under inverse at {}", g.name(a))));
            }
            for &b in &s.elements {
                if !s.members[g.mul(a, b)] {
                    return Err(Error::NotSubgroup(format!(
                        "not closed under product at ({}, {})",
                        g.name(a),
                        g.name(b)
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.members.get(x).copied().unwrap_or(false)
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_normal(&self, g: &FiniteGroup) -> bool {
        (0..g.order()).all(|x| {
            self.elements
                .iter()
                .all(|&n| self.contains(g.mul(g.mul(g.inv(x), n), x)))
        })
    }

    pub fn is_central(&self, g: &FiniteGroup) -> bool {
        self.non_central_element(g).is_none()
    }

    fn non_central_element(&self, g: &FiniteGroup) -> Option<usize> {
        self.elements
            .iter()
            .copied()
            .find(|&z| (0..g.order()).any(|x| !g.commutes(z, x)))
    }

    pub(crate) fn require_central(&self, g: &FiniteGroup) -> Result<()> {
        match self.non_central_element(g) {
            Some(z) => Err(Error::NotCentral(g.name(z).to_string())),
            None => Ok(()),
        }
    }

    pub fn is_abelian(&self, g: &FiniteGroup) -> bool {
        self.elements
            .iter()
            .all(|&a| self.elements.iter().all(|&b| g.commutes(a, b)))
    }
}

/// A sequence of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple(pub Vec<usize>);

impl Tuple {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn display(&self, g: &FiniteGroup) -> String {
        let parts: Vec<&str> = self.0.iter().map(|&x| g.name(x)).collect();
        format!("({})", parts.join(", "))
    }
}

impl From<Vec<usize>> for Tuple {
    fn from(v: Vec<usize>) -> Self {
        Tuple(v)
    }
}

/// Center `{z : zg = gz for all g}`.
pub fn center(g: &FiniteGroup) -> Subgroup {
    Subgroup::from_members(
        g,
        (0..g.order()).filter(|&z| (0..g.order()).all(|x| g.commutes(z, x))),
    )
}

/// Subgroup generated by all `[h, k]` with `h ∈ H`, `k ∈ K`.
pub fn commutator_subgroup(g: &FiniteGroup, h: &Subgroup, k: &Subgroup) -> Subgroup {
    let mut gens: Vec<usize> = Vec::new();
    let mut seen = vec![false; g.order()];
    for &a in h.elements() {
        for &b in k.elements() {
            let c = g.commutator(a, b);
            if !seen[c] {
                seen[c] = true;
                gens.push(c);
            }
        }
    }
    Subgroup::generated(g, &gens)
}

/// `[G, G]`.
pub fn derived_subgroup(g: &FiniteGroup) -> Subgroup {
    let whole = Subgroup::whole(g);
    commutator_subgroup(g, &whole, &whole)
}
