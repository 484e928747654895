use super::{FiniteGroup, Subgroup, Tuple};
use crate::error::{Budget, Error, Result};

/// All `n`-tuples whose entries pairwise commute, in lexicographic order.
pub fn commuting_tuples(g: &FiniteGroup, n: usize, budget: &Budget) -> Result<Vec<Tuple>> {
    budget.check_power(g.order(), n)?;
    Ok(extend(g, n, |a, b| g.commutes(a, b)))
}

/// All `n`-tuples whose pairwise commutators lie in the central subgroup `k`.
pub fn almost_commuting_tuples(
    g: &FiniteGroup,
    k: &Subgroup,
    n: usize,
    budget: &Budget,
) -> Result<Vec<Tuple>> {
    k.require_central(g)?;
    budget.check_power(g.order(), n)?;
    Ok(extend(g, n, |a, b| k.contains(g.commutator(a, b))))
}

// Depth-first extension: the entry at position i ranges over elements
// related to every earlier entry, so output is lexicographic.
fn extend(g: &FiniteGroup, n: usize, related: impl Fn(usize, usize) -> bool) -> Vec<Tuple> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn go(
        g: &FiniteGroup,
        n: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Tuple>,
        related: &dyn Fn(usize, usize) -> bool,
    ) {
        if cur.len() == n {
            out.push(Tuple(cur.clone()));
            return;
        }
        for x in 0..g.order() {
            if cur.iter().all(|&y| related(y, x)) {
                cur.push(x);
                go(g, n, cur, out, related);
                cur.pop();
            }
        }
    }
    go(g, n, &mut cur, &mut out, &related);
    out
}

/// `Σ_g |C_G(g)|`, which equals the number of commuting pairs.
pub fn centralizer_size_sum(g: &FiniteGroup) -> usize {
    (0..g.order()).map(|a| g.centralizer(a).order()).sum()
}

/// Exhaustive search for `(g₁, g₂, g₃)` with `[g₁,g₂] = 1`, `[g₂,g₃] = c₁`,
/// `[g₁,g₃] = c₂`. Returns the lexicographically first solution.
pub fn realize_triple(
    g: &FiniteGroup,
    k: &Subgroup,
    c1: usize,
    c2: usize,
    budget: &Budget,
) -> Result<Option<Tuple>> {
    k.require_central(g)?;
    for (label, c) in [("c1", c1), ("c2", c2)] {
        if !k.contains(c) {
            return Err(Error::NotSubgroup(format!(
                "{label} = {} is not in the given subgroup",
                g.name(c.min(g.order().saturating_sub(1)))
            )));
        }
    }
    budget.check_power(g.order(), 3)?;
    for g1 in 0..g.order() {
        for g2 in 0..g.order() {
            if !g.commutes(g1, g2) {
                continue;
            }
            for g3 in 0..g.order() {
                if g.commutator(g2, g3) == c1 && g.commutator(g1, g3) == c2 {
                    return Ok(Some(Tuple(vec![g1, g2, g3])));
                }
            }
        }
    }
    Ok(None)
}
