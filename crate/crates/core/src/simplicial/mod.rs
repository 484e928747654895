//! Levelwise-finite simplicial sets built from a finite group, truncated at
//! a maximum degree, with their normalized chain complexes.
//!
//! Three models are available:
//! * [`Model::Commuting`]: level k is the set of pairwise commuting
//!   k-tuples, with the bar faces (`d_0` drops the first entry, `d_i`
//!   multiplies entries i and i+1, `d_k` drops the last) and degeneracies
//!   that insert the identity.
//! * [`Model::Nerve`]: the same faces on all of `G^k`.
//! * [`Model::Homogeneous`]: level k is the set of (k+1)-tuples whose
//!   successive quotients `g_{i-1}⁻¹ g_i` pairwise commute; `d_i` drops
//!   `g_i` and `s_i` repeats it.
//!
//! The commuting model reads the pairwise condition `[g_i, g_j] = 1` for
//! all `i < j`.

mod maps;

use rayon::prelude::*;

use crate::error::{Budget, Error, Result};
use crate::group::{commuting_tuples, FiniteGroup};
use crate::lattice::{sparse_invariant_factors, AbelianGroupInvariants, SparseMatrix};

pub use maps::{
    check_commutator_map, check_projection, commutator_map, is_affinely_commutative, p_map,
    SimplicialityReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Commuting,
    Nerve,
    Homogeneous,
}

impl Model {
    /// Number of entries of a degree-k simplex.
    pub fn width(self, k: usize) -> usize {
        match self {
            Model::Commuting | Model::Nerve => k,
            Model::Homogeneous => k + 1,
        }
    }

    /// Face `d_i` of a degree-k simplex, `0 ≤ i ≤ k`.
    pub fn face(self, g: &FiniteGroup, t: &[usize], i: usize) -> Vec<usize> {
        match self {
            Model::Commuting | Model::Nerve => bar_face(g, t, i),
            Model::Homogeneous => {
                let mut v = t.to_vec();
                v.remove(i);
                v
            }
        }
    }

    /// Degeneracy `s_i` of a degree-k simplex, `0 ≤ i ≤ k`.
    pub fn degeneracy(self, t: &[usize], i: usize) -> Vec<usize> {
        let mut v = t.to_vec();
        match self {
            Model::Commuting | Model::Nerve => v.insert(i, 0),
            Model::Homogeneous => v.insert(i, t[i]),
        }
        v
    }

    /// Membership test for a tuple of the right width.
    pub fn contains(self, g: &FiniteGroup, t: &[usize]) -> bool {
        if t.iter().any(|&x| x >= g.order()) {
            return false;
        }
        match self {
            Model::Nerve => true,
            Model::Commuting => pairwise_commute(g, t),
            Model::Homogeneous => is_affinely_commutative(g, t),
        }
    }
}

/// Bar-convention face on a k-tuple.
pub(crate) fn bar_face(g: &FiniteGroup, t: &[usize], i: usize) -> Vec<usize> {
    let k = t.len();
    if i == 0 {
        t[1..].to_vec()
    } else if i == k {
        t[..k - 1].to_vec()
    } else {
        let mut v = Vec::with_capacity(k - 1);
        v.extend_from_slice(&t[..i - 1]);
        v.push(g.mul(t[i - 1], t[i]));
        v.extend_from_slice(&t[i + 1..]);
        v
    }
}

pub(crate) fn pairwise_commute(g: &FiniteGroup, t: &[usize]) -> bool {
    (0..t.len()).all(|i| (i + 1..t.len()).all(|j| g.commutes(t[i], t[j])))
}

/// A level stored as the sorted base-|G| codes of its tuples, which is
/// also lexicographic order of the tuples.
#[derive(Clone, Debug)]
struct Level {
    width: usize,
    codes: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct SimplicialTruncation {
    group: FiniteGroup,
    model: Model,
    max_degree: usize,
    levels: Vec<Level>,
    /// `faces[k][i][s]`: index in level k−1 of `d_i` of simplex s (k ≥ 1).
    faces: Vec<Vec<Vec<u32>>>,
    /// `degeneracies[k][i][s]`: index in level k+1 of `s_i` of simplex s.
    degeneracies: Vec<Vec<Vec<u32>>>,
    degenerate: Vec<Vec<bool>>,
}

/// Commuting-tuple model up to degree `max_degree`.
pub fn build_c(g: &FiniteGroup, max_degree: usize, budget: &Budget) -> Result<SimplicialTruncation> {
    SimplicialTruncation::build(g, Model::Commuting, max_degree, budget)
}

/// Affinely commuting (homogeneous) model up to degree `max_degree`.
pub fn build_e(g: &FiniteGroup, max_degree: usize, budget: &Budget) -> Result<SimplicialTruncation> {
    SimplicialTruncation::build(g, Model::Homogeneous, max_degree, budget)
}

/// Full nerve of `g` up to degree `max_degree`.
pub fn build_nerve(
    g: &FiniteGroup,
    max_degree: usize,
    budget: &Budget,
) -> Result<SimplicialTruncation> {
    SimplicialTruncation::build(g, Model::Nerve, max_degree, budget)
}

fn encode(t: &[usize], n: u64) -> u64 {
    t.iter().fold(0, |acc, &x| acc * n + x as u64)
}

fn decode(mut code: u64, n: u64, width: usize) -> Vec<usize> {
    let mut v = vec![0; width];
    for slot in v.iter_mut().rev() {
        *slot = (code % n) as usize;
        code /= n;
    }
    v
}

impl SimplicialTruncation {
    pub fn build(
        g: &FiniteGroup,
        model: Model,
        max_degree: usize,
        budget: &Budget,
    ) -> Result<Self> {
        let n = g.order() as u64;
        let mut levels = Vec::with_capacity(max_degree + 1);
        for k in 0..=max_degree {
            let width = model.width(k);
            budget.check_power(g.order(), width)?;
            let mut codes: Vec<u64> = match model {
                Model::Commuting => commuting_tuples(g, k, budget)?
                    .iter()
                    .map(|t| encode(&t.0, n))
                    .collect(),
                Model::Nerve => (0..n.pow(width as u32)).collect(),
                Model::Homogeneous => {
                    let base = commuting_tuples(g, k, budget)?;
                    (0..g.order())
                        .into_par_iter()
                        .flat_map_iter(|g0| {
                            base.iter().map(move |x| {
                                let mut acc = g0;
                                let mut code = g0 as u64;
                                for &step in &x.0 {
                                    acc = g.mul(acc, step);
                                    code = code * n + acc as u64;
                                }
                                code
                            })
                        })
                        .collect()
                }
            };
            codes.par_sort_unstable();
            levels.push(Level { width, codes });
        }
        let mut t = SimplicialTruncation {
            group: g.clone(),
            model,
            max_degree,
            levels,
            faces: Vec::new(),
            degeneracies: Vec::new(),
            degenerate: Vec::new(),
        };
        t.faces = (0..=max_degree)
            .map(|k| if k == 0 { Ok(Vec::new()) } else { t.face_tables(k) })
            .collect::<Result<_>>()?;
        t.degeneracies = (0..max_degree).map(|k| t.degeneracy_tables(k)).collect::<Result<_>>()?;
        t.degenerate = (0..=max_degree)
            .map(|k| {
                let mut flags = vec![false; t.level_len(k)];
                if k > 0 {
                    for table in &t.degeneracies[k - 1] {
                        for &s in table {
                            flags[s as usize] = true;
                        }
                    }
                }
                flags
            })
            .collect();
        Ok(t)
    }

    fn lookup(&self, k: usize, tuple: &[usize]) -> Result<u32> {
        self.index_of(k, tuple).map(|i| i as u32).ok_or_else(|| {
            Error::InternalInconsistency(format!(
                "simplex {tuple:?} missing from level {k} of the {:?} model",
                self.model
            ))
        })
    }

    fn face_tables(&self, k: usize) -> Result<Vec<Vec<u32>>> {
        (0..=k)
            .map(|i| {
                (0..self.level_len(k))
                    .into_par_iter()
                    .map(|s| {
                        let t = self.simplex(k, s);
                        self.lookup(k - 1, &self.model.face(&self.group, &t, i))
                    })
                    .collect()
            })
            .collect()
    }

    fn degeneracy_tables(&self, k: usize) -> Result<Vec<Vec<u32>>> {
        (0..=k)
            .map(|i| {
                (0..self.level_len(k))
                    .into_par_iter()
                    .map(|s| {
                        let t = self.simplex(k, s);
                        self.lookup(k + 1, &self.model.degeneracy(&t, i))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn level_len(&self, k: usize) -> usize {
        self.levels[k].codes.len()
    }

    /// Number of nondegenerate simplices in degree k.
    pub fn nondegenerate_len(&self, k: usize) -> usize {
        self.degenerate[k].iter().filter(|&&d| !d).count()
    }

    pub fn simplex(&self, k: usize, index: usize) -> Vec<usize> {
        let l = &self.levels[k];
        decode(l.codes[index], self.group.order() as u64, l.width)
    }

    pub fn simplices(&self, k: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.level_len(k)).map(move |s| self.simplex(k, s))
    }

    pub fn index_of(&self, k: usize, tuple: &[usize]) -> Option<usize> {
        let l = self.levels.get(k)?;
        if tuple.len() != l.width || tuple.iter().any(|&x| x >= self.group.order()) {
            return None;
        }
        l.codes
            .binary_search(&encode(tuple, self.group.order() as u64))
            .ok()
    }

    pub fn is_degenerate(&self, k: usize, index: usize) -> bool {
        self.degenerate[k][index]
    }

    /// Index in level k−1 of `d_i` applied to simplex `s` of level k.
    pub fn face(&self, k: usize, i: usize, s: usize) -> usize {
        self.faces[k][i][s] as usize
    }

    /// Index in level k+1 of `s_i` applied to simplex `s` of level k.
    pub fn degeneracy(&self, k: usize, i: usize, s: usize) -> usize {
        self.degeneracies[k][i][s] as usize
    }

    /// Checks every simplicial identity on every stored level.
    pub fn check_identities(&self) -> Result<()> {
        let fail = |what: String| Err(Error::InternalInconsistency(what));
        let top = self.max_degree;
        for k in 0..=top {
            for s in 0..self.level_len(k) {
                // d_i d_j = d_{j-1} d_i for i < j
                if k >= 2 {
                    for j in 1..=k {
                        let dj = self.face(k, j, s);
                        for i in 0..j {
                            if self.face(k - 1, i, dj) != self.face(k - 1, j - 1, self.face(k, i, s)) {
                                return fail(format!("d{i} d{j} at level {k}, simplex {s}"));
                            }
                        }
                    }
                }
                if k < top {
                    for j in 0..=k {
                        let sj = self.degeneracy(k, j, s);
                        // d_j s_j = d_{j+1} s_j = id
                        if self.face(k + 1, j, sj) != s || self.face(k + 1, j + 1, sj) != s {
                            return fail(format!("d s{j} ≠ id at level {k}, simplex {s}"));
                        }
                        for i in 0..=k + 1 {
                            let lhs = self.face(k + 1, i, sj);
                            let ok = if i < j {
                                lhs == self.degeneracy(k - 1, j - 1, self.face(k, i, s))
                            } else if i > j + 1 {
                                lhs == self.degeneracy(k - 1, j, self.face(k, i - 1, s))
                            } else {
                                true
                            };
                            if !ok {
                                return fail(format!("d{i} s{j} at level {k}, simplex {s}"));
                            }
                        }
                        // s_i s_j = s_{j+1} s_i for i ≤ j
                        if k + 1 < top {
                            for i in 0..=j {
                                let lhs = self.degeneracy(k + 1, i, sj);
                                let rhs = self.degeneracy(k + 1, j + 1, self.degeneracy(k, i, s));
                                if lhs != rhs {
                                    return fail(format!("s{i} s{j} at level {k}, simplex {s}"));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Boundary `∂_k = Σ (−1)^i d_i` from degree k to degree k−1. In the
    /// normalized complex degenerate simplices are dropped from both sides.
    pub fn boundary(&self, k: usize, normalized: bool) -> Result<SparseMatrix> {
        if k > self.max_degree {
            return Err(Error::InsufficientTruncation {
                degree: k,
                have: self.max_degree,
                need: k,
            });
        }
        let (cols, _) = self.basis(k, normalized);
        if k == 0 {
            return Ok(SparseMatrix::zeros(0, cols.len()));
        }
        let (_, row_index) = self.basis(k - 1, normalized);
        let nrows = row_index.iter().filter(|r| r.is_some()).count();
        let columns: Vec<Vec<(usize, i64)>> = cols
            .par_iter()
            .map(|&s| {
                (0..=k)
                    .filter_map(|i| {
                        row_index[self.face(k, i, s)].map(|r| (r, if i % 2 == 0 { 1 } else { -1 }))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(nrows, columns)
    }

    // (basis simplex indices, position of each simplex in the basis)
    fn basis(&self, k: usize, normalized: bool) -> (Vec<usize>, Vec<Option<usize>>) {
        let mut basis = Vec::new();
        let mut index = vec![None; self.level_len(k)];
        for (s, slot) in index.iter_mut().enumerate() {
            if !(normalized && self.degenerate[k][s]) {
                *slot = Some(basis.len());
                basis.push(s);
            }
        }
        (basis, index)
    }

    /// `H_0 … H_top` of the (normalized) chain complex; requires
    /// `top + 1 ≤ max_degree`.
    pub fn homology_through(&self, top: usize, normalized: bool) -> Result<Vec<AbelianGroupInvariants>> {
        if top + 1 > self.max_degree {
            return Err(Error::InsufficientTruncation {
                degree: top,
                have: self.max_degree,
                need: top + 1,
            });
        }
        let boundaries: Vec<SparseMatrix> = (0..=top + 1)
            .map(|k| self.boundary(k, normalized))
            .collect::<Result<_>>()?;
        for k in 1..boundaries.len() {
            if !boundaries[k - 1].composes_to_zero(&boundaries[k])? {
                return Err(Error::NonzeroComposite);
            }
        }
        let factors: Vec<_> = boundaries.par_iter().map(sparse_invariant_factors).collect();
        Ok((0..=top)
            .map(|k| {
                let dim = boundaries[k].cols();
                let free = dim - factors[k].len() - factors[k + 1].len();
                AbelianGroupInvariants::from_smith(free, &factors[k + 1])
            })
            .collect())
    }

    pub fn homology(&self, k: usize, normalized: bool) -> Result<AbelianGroupInvariants> {
        Ok(self.homology_through(k, normalized)?.pop().expect("nonempty"))
    }

    /// Reduced homology in degrees `0..=top`.
    pub fn reduced_homology_through(
        &self,
        top: usize,
        normalized: bool,
    ) -> Result<Vec<AbelianGroupInvariants>> {
        let mut h = self.homology_through(top, normalized)?;
        h[0] = h[0].clone().reduce_degree_zero();
        Ok(h)
    }
}

/// `H_k` of a model, building the truncation to degree k+1.
pub fn homology(
    g: &FiniteGroup,
    model: Model,
    k: usize,
    budget: &Budget,
) -> Result<AbelianGroupInvariants> {
    SimplicialTruncation::build(g, model, k + 1, budget)?.homology(k, true)
}

/// Reduced homology in degrees `0..=top`, building to degree `top + 1`.
pub fn reduced_homology(
    g: &FiniteGroup,
    model: Model,
    top: usize,
    budget: &Budget,
) -> Result<Vec<AbelianGroupInvariants>> {
    SimplicialTruncation::build(g, model, top + 1, budget)?.reduced_homology_through(top, true)
}
