use std::collections::BTreeMap;

use super::{derived_subgroup, FiniteGroup};
use crate::lattice::factorize;

/// Invariant factors `d₁ | d₂ | …` (all > 1) of an abelian group.
///
/// Counts solutions of `x^{p^k} = 1` for each prime `p`: if `c_k` is that
/// count then `log_p c_k − log_p c_{k−1}` is the number of cyclic
/// `p`-factors of exponent at least `k`. Returns `None` if `g` is not abelian.
pub fn abelian_invariants(g: &FiniteGroup) -> Option<Vec<u64>> {
    if !g.is_abelian() {
        return None;
    }
    let n = g.order() as u64;
    // prime -> exponents of the cyclic p-parts, descending
    let mut parts: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (p, _) in factorize(n) {
        let mut logs = vec![0u32];
        let mut k = 1;
        loop {
            let pk = (p as usize).pow(k);
            let c = (0..g.order()).filter(|&x| g.pow(x, pk) == 0).count() as u64;
            let mut l = 0;
            let mut c2 = c;
            while c2 > 1 {
                c2 /= p;
                l += 1;
            }
            if l == *logs.last().unwrap() {
                break;
            }
            logs.push(l);
            k += 1;
        }
        // at_least[k-1] = number of factors with exponent ≥ k
        let at_least: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        let mut exps = Vec::new();
        for (k, &cnt) in at_least.iter().enumerate() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..(cnt - next) {
                exps.push(k as u32 + 1);
            }
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        parts.insert(p, exps);
    }
    let width = parts.values().map(Vec::len).max().unwrap_or(0);
    // the largest invariant factor collects the largest prime power of each p
    let mut factors: Vec<u64> = (0..width)
        .map(|i| {
            parts
                .iter()
                .map(|(&p, e)| e.get(i).map_or(1, |&k| p.pow(k)))
                .product()
        })
        .collect();
    factors.reverse();
    Some(factors)
}

/// Invariant factors of `G/[G,G]`.
pub fn abelianization(g: &FiniteGroup) -> Vec<u64> {
    let (q, _) = g
        .quotient(&derived_subgroup(g))
        .expect("derived subgroup is normal");
    abelian_invariants(&q).expect("abelianization is abelian")
}
