//! The projection `p` from the homogeneous model to the commuting model and
//! the commutator map into the nerve of the derived subgroup.

use serde::Serialize;

use super::{bar_face, build_e, pairwise_commute, Model};
use crate::error::{Budget, Error, Result};
use crate::group::{derived_subgroup, FiniteGroup, Tuple};

/// True if the successive quotients `g_{i-1}⁻¹ g_i` pairwise commute.
pub fn is_affinely_commutative(g: &FiniteGroup, e: &[usize]) -> bool {
    pairwise_commute(g, &quotients(g, e))
}

fn quotients(g: &FiniteGroup, e: &[usize]) -> Vec<usize> {
    e.windows(2).map(|w| g.mul(g.inv(w[0]), w[1])).collect()
}

/// `(g_0, …, g_k) ↦ (g_0⁻¹g_1, …, g_{k−1}⁻¹g_k)`.
pub fn p_map(g: &FiniteGroup, e: &[usize]) -> Result<Tuple> {
    let q = quotients(g, e);
    if !pairwise_commute(g, &q) {
        return Err(Error::NotAffinelyCommutative);
    }
    Ok(Tuple(q))
}

/// `(g_0, …, g_k) ↦ ([g_0,g_1], …, [g_{k−1},g_k])`.
pub fn commutator_map(g: &FiniteGroup, e: &[usize]) -> Result<Tuple> {
    if !is_affinely_commutative(g, e) {
        return Err(Error::NotAffinelyCommutative);
    }
    Ok(Tuple(e.windows(2).map(|w| g.commutator(w[0], w[1])).collect()))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SimplicialityReport {
    pub simplices: usize,
    pub face_checks: usize,
    pub degeneracy_checks: usize,
    /// Triples checked against `[g0,g1][g1,g2] = [g0,g2]`.
    pub triple_identities: usize,
}

/// Exhaustively checks that `p` lands in the commuting model and commutes
/// with all faces and degeneracies through degree `max_degree`.
pub fn check_projection(
    g: &FiniteGroup,
    max_degree: usize,
    budget: &Budget,
) -> Result<SimplicialityReport> {
    check_map(g, max_degree, budget, |e| p_map(g, e), |t| pairwise_commute(g, t), false)
}

/// Exhaustively checks that the commutator map lands in the nerve of
/// `[G,G]` and commutes with all faces and degeneracies, including the
/// triple identity `[g0,g1][g1,g2] = [g0,g2]`.
pub fn check_commutator_map(
    g: &FiniteGroup,
    max_degree: usize,
    budget: &Budget,
) -> Result<SimplicialityReport> {
    let derived = derived_subgroup(g);
    check_map(
        g,
        max_degree,
        budget,
        |e| commutator_map(g, e),
        |t| t.iter().all(|&x| derived.contains(x)),
        true,
    )
}

fn check_map(
    g: &FiniteGroup,
    max_degree: usize,
    budget: &Budget,
    f: impl Fn(&[usize]) -> Result<Tuple>,
    in_target: impl Fn(&[usize]) -> bool,
    triple_identity: bool,
) -> Result<SimplicialityReport> {
    let e = build_e(g, max_degree, budget)?;
    let fail = |m: String| Error::InternalInconsistency(m);
    let mut report = SimplicialityReport::default();
    for k in 0..=max_degree {
        for s in e.simplices(k) {
            report.simplices += 1;
            let image = f(&s)?;
            if !in_target(&image.0) {
                return Err(fail(format!("image of {s:?} leaves the target")));
            }
            for i in 0..=k {
                if k > 0 {
                    let lhs = f(&Model::Homogeneous.face(g, &s, i))?;
                    if lhs.0 != bar_face(g, &image.0, i) {
                        return Err(fail(format!("map does not commute with d{i} at {s:?}")));
                    }
                    report.face_checks += 1;
                }
                let lhs = f(&Model::Homogeneous.degeneracy(&s, i))?;
                if lhs.0 != Model::Commuting.degeneracy(&image.0, i) {
                    return Err(fail(format!("map does not commute with s{i} at {s:?}")));
                }
                report.degeneracy_checks += 1;
            }
            if triple_identity && k == 2 {
                let lhs = g.mul(g.commutator(s[0], s[1]), g.commutator(s[1], s[2]));
                if lhs != g.commutator(s[0], s[2]) {
                    return Err(fail(format!("[g0,g1][g1,g2] ≠ [g0,g2] at {s:?}")));
                }
                report.triple_identities += 1;
            }
        }
    }
    Ok(report)
}
