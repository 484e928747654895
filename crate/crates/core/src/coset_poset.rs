//! The poset of cosets `gA` of abelian subgroups `A`, ordered by inclusion,
//! and the homology of its order complex.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Budget, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::lattice::{homology_at, AbelianGroupInvariants, SparseMatrix};

/// Every abelian subgroup, the trivial one included, sorted by order and
/// then by element list.
pub fn abelian_subgroups(g: &FiniteGroup, budget: &Budget) -> Result<Vec<Subgroup>> {
    budget.check_count(g.order() as u64)?;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let trivial = Subgroup::trivial(g);
    seen.insert(trivial.elements().to_vec());
    let mut frontier = vec![trivial];
    let mut all = frontier.clone();
    while let Some(a) = frontier.pop() {
        for x in 0..g.order() {
            if a.contains(x) || !a.elements().iter().all(|&y| g.commutes(x, y)) {
                continue;
            }
            let mut gens = a.elements().to_vec();
            gens.push(x);
            let b = Subgroup::generated(g, &gens);
            if seen.insert(b.elements().to_vec()) {
                budget.check_count(seen.len() as u64)?;
                frontier.push(b.clone());
                all.push(b);
            }
        }
    }
    all.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
    Ok(all)
}

/// A coset `gA`, recorded by subgroup index and least element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    pub subgroup: usize,
    pub representative: usize,
}

#[derive(Clone, Debug)]
pub struct CosetPoset {
    pub subgroups: Vec<Subgroup>,
    pub elements: Vec<Coset>,
    members: Vec<Vec<bool>>,
    /// `above[i]` lists the `j` with `elements[i] < elements[j]`.
    above: Vec<Vec<usize>>,
}

impl CosetPoset {
    pub fn build(g: &FiniteGroup, budget: &Budget) -> Result<Self> {
        let subgroups = abelian_subgroups(g, budget)?;
        let mut elements = Vec::new();
        let mut members = Vec::new();
        for (si, a) in subgroups.iter().enumerate() {
            let mut covered = vec![false; g.order()];
            for x in 0..g.order() {
                if covered[x] {
                    continue;
                }
                let mut m = vec![false; g.order()];
                for &y in a.elements() {
                    let z = g.mul(x, y);
                    m[z] = true;
                    covered[z] = true;
                }
                elements.push(Coset {
                    subgroup: si,
                    representative: x,
                });
                members.push(m);
            }
        }
        budget.check_count((elements.len() as u64).saturating_mul(elements.len() as u64))?;
        let n = elements.len();
        let above = (0..n)
            .into_par_iter()
            .map(|i| {
                let (ci, sa) = (elements[i], &subgroups[elements[i].subgroup]);
                (0..n)
                    .filter(|&j| {
                        let cj = elements[j];
                        i != j
                            && sa.order() < subgroups[cj.subgroup].order()
                            && sa.is_subset_of(&subgroups[cj.subgroup])
                            && members[j][ci.representative]
                    })
                    .collect()
            })
            .collect();
        Ok(CosetPoset {
            subgroups,
            elements,
            members,
            above,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn less_than(&self, i: usize, j: usize) -> bool {
        self.above[i].binary_search(&j).is_ok()
    }

    /// Members of the coset with index `i`.
    pub fn coset_members(&self, i: usize) -> Vec<usize> {
        (0..self.members[i].len()).filter(|&x| self.members[i][x]).collect()
    }

    /// All strict relations `(i, j)` with `elements[i] < elements[j]`.
    pub fn relation(&self) -> Vec<(usize, usize)> {
        self.above
            .iter()
            .enumerate()
            .flat_map(|(i, up)| up.iter().map(move |&j| (i, j)))
            .collect()
    }

    /// Chains `c0 < … < ck`, grouped by `k`, for `k ≤ max_dim`.
    pub fn chains(&self, max_dim: usize, budget: &Budget) -> Result<Vec<Vec<Vec<u32>>>> {
        let per_bottom: Vec<Result<Vec<Vec<Vec<u32>>>>> = (0..self.len())
            .into_par_iter()
            .map(|b| {
                let mut out = vec![Vec::new(); max_dim + 1];
                let mut stack = vec![b as u32];
                let mut count = 0u64;
                self.extend(&mut stack, max_dim, &mut out, &mut count, budget)?;
                Ok(out)
            })
            .collect();
        let mut levels = vec![Vec::new(); max_dim + 1];
        let mut total = 0u64;
        for r in per_bottom {
            for (k, mut v) in r?.into_iter().enumerate() {
                total += v.len() as u64;
                levels[k].append(&mut v);
            }
        }
        budget.check_count(total)?;
        for level in &mut levels {
            level.sort_unstable();
        }
        Ok(levels)
    }

    fn extend(
        &self,
        stack: &mut Vec<u32>,
        max_dim: usize,
        out: &mut [Vec<Vec<u32>>],
        count: &mut u64,
        budget: &Budget,
    ) -> Result<()> {
        *count += 1;
        budget.check_count(*count)?;
        out[stack.len() - 1].push(stack.clone());
        if stack.len() > max_dim {
            return Ok(());
        }
        let top = *stack.last().expect("nonempty") as usize;
        for &j in &self.above[top] {
            stack.push(j as u32);
            self.extend(stack, max_dim, out, count, budget)?;
            stack.pop();
        }
        Ok(())
    }

    /// Reduced homology `H̃_0..H̃_top` of the order complex.
    pub fn reduced_homology(&self, top: usize, budget: &Budget) -> Result<Vec<AbelianGroupInvariants>> {
        let levels = self.chains(top + 1, budget)?;
        let index: Vec<HashMap<&[u32], usize>> = levels
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect())
            .collect();
        let mut boundaries = vec![SparseMatrix::zeros(0, levels[0].len())];
        for k in 1..levels.len() {
            let columns = levels[k]
                .iter()
                .map(|c| {
                    (0..c.len())
                        .map(|i| {
                            let mut face = c.clone();
                            face.remove(i);
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            (index[k - 1][face.as_slice()], sign)
                        })
                        .collect()
                })
                .collect();
            boundaries.push(SparseMatrix::from_columns(levels[k - 1].len(), columns)?);
        }
        let mut h: Vec<AbelianGroupInvariants> = (0..=top)
            .into_par_iter()
            .map(|k| homology_at(&boundaries[k], &boundaries[k + 1]))
            .collect::<Result<_>>()?;
        h[0] = h[0].clone().reduce_degree_zero();
        Ok(h)
    }
}

/// Reduced homology of the coset poset of abelian subgroups in degrees
/// `0..=top`.
pub fn coset_poset_homology(
    g: &FiniteGroup,
    top: usize,
    budget: &Budget,
) -> Result<Vec<AbelianGroupInvariants>> {
    CosetPoset::build(g, budget)?.reduced_homology(top, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::{group, STANDARD_CORPUS};

    /// Abelian subgroups by testing every subset of the group.
    fn brute_force_abelian(g: &FiniteGroup) -> Vec<Vec<usize>> {
        let n = g.order();
        let mut out = Vec::new();
        for mask in 0u64..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let closed = s.iter().all(|&a| s.iter().all(|&b| mask >> g.mul(a, b) & 1 == 1));
            let abelian = s.iter().all(|&a| s.iter().all(|&b| g.commutes(a, b)));
            if closed && abelian {
                out.push(s);
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    #[test]
    fn subgroup_enumeration_matches_brute_force() {
        for name in ["Z1", "Z5", "Z6", "Z2xZ2", "S3", "D8", "Q8", "Z2xZ2xZ2", "D10", "Z12", "D12", "A4"] {
            let g = group(name).unwrap();
            let ours: Vec<Vec<usize>> = abelian_subgroups(&g, &Budget::default())
                .unwrap()
                .iter()
                .map(|s| s.elements().to_vec())
                .collect();
            assert_eq!(ours, brute_force_abelian(&g), "{name}");
        }
    }

    #[test]
    fn subgroup_counts() {
        let count = |n: &str| abelian_subgroups(&group(n).unwrap(), &Budget::default()).unwrap().len();
        assert_eq!(count("Z7"), 2);
        assert_eq!(count("S3"), 5);
        assert_eq!(count("Q8"), 5);
    }

    #[test]
    fn relation_is_a_strict_order() {
        for name in ["S3", "Q8", "D8"] {
            let p = CosetPoset::build(&group(name).unwrap(), &Budget::default()).unwrap();
            let rel: BTreeSet<(usize, usize)> = p.relation().into_iter().collect();
            for &(a, b) in &rel {
                assert!(!rel.contains(&(b, a)));
                for &(c, d) in &rel {
                    if b == c {
                        assert!(rel.contains(&(a, d)));
                    }
                }
                let (ma, mb) = (p.coset_members(a), p.coset_members(b));
                assert!(ma.iter().all(|x| mb.contains(x)) && ma.len() < mb.len());
            }
        }
    }

    #[test]
    fn s3_graph() {
        let g = group("S3").unwrap();
        let p = CosetPoset::build(&g, &Budget::default()).unwrap();
        assert_eq!(p.len(), 17);
        let chains = p.chains(2, &Budget::default()).unwrap();
        assert_eq!(chains[1].len(), 24);
        assert!(chains[2].is_empty());
        let h = p.reduced_homology(1, &Budget::default()).unwrap();
        assert_eq!(h, vec![AbelianGroupInvariants::trivial(), AbelianGroupInvariants::free(8)]);
    }

    #[test]
    fn abelian_groups_are_acyclic() {
        for name in STANDARD_CORPUS {
            let g = group(name).unwrap();
            if !g.is_abelian() || g.order() > 12 {
                continue;
            }
            let h = coset_poset_homology(&g, 3, &Budget::default()).unwrap();
            assert!(h.iter().all(AbelianGroupInvariants::is_trivial), "{name}: {h:?}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = group("D8").unwrap();
        let e = coset_poset_homology(&g, 2, &Budget::new(50)).unwrap_err();
        assert!(e.is_budget());
    }
}
