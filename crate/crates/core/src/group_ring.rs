//! Coinvariants of the augmentation ideal and the three-term Moore complex
//! `ℤ[A×A] → ℤ[A] → ℤ`.

use crate::error::{Error, Result};
use crate::group::{catalog, FiniteGroup};
use crate::lattice::{homology_at, AbelianGroupInvariants, IntMatrix, SparseMatrix};

/// A presentation of an abelian group: generators plus relation columns.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    pub generators: usize,
    pub relations: SparseMatrix,
}

impl ModulePresentation {
    pub fn invariants(&self) -> Result<AbelianGroupInvariants> {
        homology_at(&SparseMatrix::zeros(0, self.generators), &self.relations)
    }

    pub fn relation_matrix(&self) -> IntMatrix {
        self.relations.to_dense()
    }
}

/// Presentation of `W / ⟨w − a·w⟩` where `W` is the augmentation ideal of
/// `ℤA`, on the basis `e_a = a − 1` for `a ≠ 1`.
///
/// Since `b·(a − 1) = (ba − 1) − (b − 1)`, the relation for the basis
/// element `e_a` and group element `b` is `e_a − e_{ba} + e_b`, with `e_1 = 0`.
pub fn coinvariants_presentation(a: &FiniteGroup) -> ModulePresentation {
    let n = a.order();
    let basis = |x: usize| if x == 0 { None } else { Some(x - 1) };
    let mut columns = Vec::with_capacity((n - 1) * n);
    for x in 1..n {
        for b in 0..n {
            let mut col = Vec::with_capacity(3);
            for (elt, sign) in [(x, 1), (a.mul(b, x), -1), (b, 1)] {
                if let Some(r) = basis(elt) {
                    col.push((r, sign));
                }
            }
            columns.push(col);
        }
    }
    ModulePresentation {
        generators: n - 1,
        relations: SparseMatrix::from_columns(n - 1, columns).expect("indices in range"),
    }
}

pub fn coinvariants(a: &FiniteGroup) -> Result<AbelianGroupInvariants> {
    coinvariants_presentation(a).invariants()
}

/// Boundary maps of the Moore complex: `∂₂` is the augmentation
/// `ℤ[A] → ℤ` and `∂₃(η₁, η₂) = [η₁] − [η₂η₁] + [η₂] − [1]` for every pair.
pub fn moore_boundaries(a: &FiniteGroup) -> (SparseMatrix, SparseMatrix) {
    let n = a.order();
    let d2 = SparseMatrix::from_columns(1, (0..n).map(|_| vec![(0, 1)]).collect())
        .expect("augmentation");
    let mut columns = Vec::with_capacity(n * n);
    for e1 in 0..n {
        for e2 in 0..n {
            columns.push(vec![(e1, 1), (a.mul(e2, e1), -1), (e2, 1), (0, -1)]);
        }
    }
    let d3 = SparseMatrix::from_columns(n, columns).expect("indices in range");
    (d2, d3)
}

/// Homology at the middle term of the Moore complex.
pub fn moore_h2(a: &FiniteGroup) -> Result<AbelianGroupInvariants> {
    let (d2, d3) = moore_boundaries(a);
    homology_at(&d2, &d3)
}

/// Builds the abelian group with the given cyclic factors, computes
/// [`moore_h2`] and checks that it returns the same group.
pub fn pi2_e2_connected(factors: &[u64]) -> Result<AbelianGroupInvariants> {
    if let Some(bad) = factors.iter().find(|&&f| f == 0) {
        return Err(Error::parse("factors", format!("cyclic order {bad} must be positive")));
    }
    let expected = AbelianGroupInvariants::finite(factors);
    let sizes: Vec<usize> = factors.iter().map(|&f| f as usize).collect();
    let a = if sizes.is_empty() {
        catalog::cyclic(1)
    } else {
        catalog::abelian(&sizes)?
    };
    let h = moore_h2(&a)?;
    if h != expected {
        return Err(Error::InternalInconsistency(format!(
            "Moore complex gives {h}, expected {expected}"
        )));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::{group, STANDARD_CORPUS};
    use crate::group::abelianization;
    use crate::lattice::AbelianGroupInvariants as H;

    #[test]
    fn coinvariant_examples() {
        assert_eq!(coinvariants(&group("Z2").unwrap()).unwrap(), H::finite(&[2]));
        assert_eq!(coinvariants(&group("Z1").unwrap()).unwrap(), H::trivial());
        assert_eq!(coinvariants(&group("S3").unwrap()).unwrap(), H::finite(&[2]));
        assert_eq!(coinvariants(&group("Q8").unwrap()).unwrap(), H::finite(&[2, 2]));
    }

    #[test]
    fn coinvariants_match_abelianization() {
        for name in STANDARD_CORPUS {
            let g = group(name).unwrap();
            assert_eq!(
                coinvariants(&g).unwrap(),
                H::finite(&abelianization(&g)),
                "{name}"
            );
        }
    }

    #[test]
    fn moore_examples() {
        assert_eq!(moore_h2(&group("Z1").unwrap()).unwrap(), H::trivial());
        assert_eq!(moore_h2(&group("Z3").unwrap()).unwrap(), H::finite(&[3]));
        assert_eq!(moore_h2(&group("Z2xZ2").unwrap()).unwrap(), H::finite(&[2, 2]));
    }

    #[test]
    fn moore_matches_coinvariants() {
        for name in STANDARD_CORPUS {
            let g = group(name).unwrap();
            if g.order() > 16 {
                continue;
            }
            let (d2, d3) = moore_boundaries(&g);
            assert!(d2.composes_to_zero(&d3).unwrap());
            assert_eq!(moore_h2(&g).unwrap(), coinvariants(&g).unwrap(), "{name}");
        }
    }

    #[test]
    fn pi2_instances() {
        assert_eq!(pi2_e2_connected(&[2]).unwrap(), H::finite(&[2]));
        assert_eq!(pi2_e2_connected(&[]).unwrap(), H::trivial());
        assert_eq!(pi2_e2_connected(&[2, 4]).unwrap(), H::finite(&[2, 4]));
        for n in 1..=6u64 {
            assert_eq!(pi2_e2_connected(&[n]).unwrap(), H::finite(&[n]));
        }
        assert!(pi2_e2_connected(&[0]).is_err());
    }
}
