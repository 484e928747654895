use std::collections::HashMap;

use super::{center, commuting_tuples, FiniteGroup, Subgroup};
use crate::error::{Budget, Error, Result};

/// An isomorphism between central subgroups: `in_h[i] ↦ in_k[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralIdentification {
    pub in_h: Vec<usize>,
    pub in_k: Vec<usize>,
}

impl CentralIdentification {
    pub fn trivial() -> Self {
        CentralIdentification {
            in_h: vec![0],
            in_k: vec![0],
        }
    }
}

/// `H ×_Z K`, the quotient of `H × K` by `{(z, φ(z)⁻¹)}`.
#[derive(Clone, Debug)]
pub struct CentralProduct {
    pub group: FiniteGroup,
    /// Sends `h·|K| + k` to the class of `(h, k)`.
    pub quotient_map: Vec<usize>,
    k_order: usize,
}

impl CentralProduct {
    /// Class of `(h, k)`.
    pub fn class_of(&self, h: usize, k: usize) -> usize {
        self.quotient_map[h * self.k_order + k]
    }
}

pub fn central_product(
    h: &FiniteGroup,
    k: &FiniteGroup,
    z: &CentralIdentification,
) -> Result<CentralProduct> {
    let bad = |m: String| Error::InvalidCentralProduct(m);
    if z.in_h.len() != z.in_k.len() {
        return Err(bad("the two embeddings have different sizes".into()));
    }
    let zh = Subgroup::from_elements(h, &z.in_h)?;
    let zk = Subgroup::from_elements(k, &z.in_k)?;
    if zh.order() != z.in_h.len() || zk.order() != z.in_k.len() {
        return Err(bad("repeated elements in the identification".into()));
    }
    let (ch, ck) = (center(h), center(k));
    if !zh.is_subset_of(&ch) {
        zh.require_central(h)?;
    }
    if !zk.is_subset_of(&ck) {
        zk.require_central(k)?;
    }
    let mut phi = vec![usize::MAX; h.order()];
    for (&a, &b) in z.in_h.iter().zip(&z.in_k) {
        phi[a] = b;
    }
    for &a in &z.in_h {
        for &b in &z.in_h {
            if phi[h.mul(a, b)] != k.mul(phi[a], phi[b]) {
                return Err(bad(format!(
                    "map is not a homomorphism at ({}, {})",
                    h.name(a),
                    h.name(b)
                )));
            }
        }
    }
    let hk = h.direct_product(k);
    let m = k.order();
    let anti: Vec<usize> = z.in_h.iter().map(|&a| a * m + k.inv(phi[a])).collect();
    let n = Subgroup::from_elements(&hk, &anti)?;
    let (group, quotient_map) = hk.quotient(&n)?;
    Ok(CentralProduct {
        group,
        quotient_map,
        k_order: m,
    })
}

/// Outcome of comparing `(H^n × C_n(K))/Z^n` with `C_n(H ×_Z K)`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PullbackCheck {
    pub n: usize,
    /// `|H|^n · |C_n(K)|`.
    pub source: u64,
    /// `|C_n(H ×_Z K)|`.
    pub target: u64,
    /// Number of commuting tuples hit by the quotient map.
    pub image: u64,
    /// Every commuting tuple of the product has exactly `|Z|^n` preimages.
    pub uniform_fibers: bool,
}

impl PullbackCheck {
    pub fn holds(&self) -> bool {
        self.uniform_fibers && self.image == self.target
    }
}

/// Pushes `H^n × C_n(K)` through the quotient map and counts fibers.
pub fn check_pullback(
    h: &FiniteGroup,
    k: &FiniteGroup,
    z: &CentralIdentification,
    n: usize,
    budget: &Budget,
) -> Result<PullbackCheck> {
    let product = central_product(h, k, z)?;
    let hn = budget.check_power(h.order(), n)?;
    let ck = commuting_tuples(k, n, budget)?;
    budget.check_count(hn.saturating_mul(ck.len() as u64))?;
    let target = commuting_tuples(&product.group, n, budget)?;
    let mut fibers: HashMap<Vec<usize>, u64> = HashMap::new();
    let mut hs = vec![0usize; n];
    for code in 0..hn {
        let mut c = code as usize;
        for slot in hs.iter_mut() {
            *slot = c % h.order();
            c /= h.order();
        }
        for t in &ck {
            let img: Vec<usize> = (0..n).map(|i| product.class_of(hs[i], t.0[i])).collect();
            *fibers.entry(img).or_insert(0) += 1;
        }
    }
    let expected = (z.in_h.len() as u64).pow(n as u32);
    let uniform = target.iter().all(|t| fibers.get(&t.0) == Some(&expected));
    Ok(PullbackCheck {
        n,
        source: hn * ck.len() as u64,
        target: target.len() as u64,
        image: fibers.len() as u64,
        uniform_fibers: uniform && fibers.len() == target.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog::{cyclic, group};

    #[test]
    fn trivial_identification_is_direct_product() {
        let p = central_product(&cyclic(2), &cyclic(3), &CentralIdentification::trivial()).unwrap();
        assert_eq!(p.group.order(), 6);
        assert!(p.group.is_abelian());
        assert_eq!(p.group.element_order(p.class_of(1, 1)), 6);
    }

    #[test]
    fn order_is_product_over_identified() {
        let z4 = cyclic(4);
        let q8 = group("Q8").unwrap();
        let id = CentralIdentification {
            in_h: vec![0, 1],
            in_k: vec![0, 2],
        };
        let p = central_product(&q8, &z4, &id).unwrap();
        assert_eq!(p.group.order(), 16);
        // (-1, 1) and (1, a^2) are identified
        assert_eq!(p.class_of(1, 0), p.class_of(0, 2));
    }

    #[test]
    fn rejects_bad_identifications() {
        let s3 = group("S3").unwrap();
        let z2 = cyclic(2);
        let not_central = CentralIdentification {
            in_h: vec![0, 1],
            in_k: vec![0, 1],
        };
        assert!(matches!(
            central_product(&s3, &z2, &not_central),
            Err(Error::NotCentral(_))
        ));
        let z4 = cyclic(4);
        let wrong_size = CentralIdentification {
            in_h: vec![0, 2],
            in_k: vec![0, 1, 2, 3],
        };
        assert!(central_product(&z4, &z4, &wrong_size).is_err());
        // a bijection {1, a, a^2, a^3} -> {1, a, a^2, a^3} that is not a homomorphism
        let shuffled = CentralIdentification {
            in_h: vec![0, 1, 2, 3],
            in_k: vec![0, 2, 1, 3],
        };
        assert!(matches!(
            central_product(&z4, &z4, &shuffled),
            Err(Error::InvalidCentralProduct(_))
        ));
    }

    /// For abelian H the map H^n × C_n(K) → C_n(H ×_Z K) is onto with
    /// fibers of size |Z|^n.
    #[test]
    fn commuting_tuples_pull_back() {
        let cases = [
            (cyclic(4), group("Q8").unwrap(), vec![0, 2], vec![0, 1]),
            (cyclic(4), group("D8").unwrap(), vec![0, 2], vec![0, 2]),
            (cyclic(2), group("Q8").unwrap(), vec![0, 1], vec![0, 1]),
            (cyclic(4), cyclic(4), vec![0, 2], vec![0, 2]),
        ];
        let budget = Budget::default();
        for (h, k, zh, zk) in cases {
            let zsize = zh.len();
            let p = central_product(&h, &k, &CentralIdentification { in_h: zh, in_k: zk }).unwrap();
            for n in 0..=3usize {
                let target = commuting_tuples(&p.group, n, &budget).unwrap();
                let mut fibers = std::collections::HashMap::new();
                let ck = commuting_tuples(&k, n, &budget).unwrap();
                let hn = h.order().pow(n as u32);
                for code in 0..hn {
                    let mut c = code;
                    let hs: Vec<usize> = (0..n)
                        .map(|_| {
                            let x = c % h.order();
                            c /= h.order();
                            x
                        })
                        .collect();
                    for t in &ck {
                        let img: Vec<usize> =
                            (0..n).map(|i| p.class_of(hs[i], t.0[i])).collect();
                        *fibers.entry(img).or_insert(0usize) += 1;
                    }
                }
                assert_eq!(fibers.len(), target.len(), "n={n}");
                for t in &target {
                    assert_eq!(fibers.get(&t.0), Some(&zsize.pow(n as u32)));
                }
            }
        }
    }

    #[test]
    fn pullback_check_matches() {
        let id = CentralIdentification {
            in_h: vec![0, 2],
            in_k: vec![0, 1],
        };
        for n in 0..=3 {
            let r = check_pullback(&cyclic(4), &group("Q8").unwrap(), &id, n, &Budget::default()).unwrap();
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.source, 2u64.pow(n as u32) * r.target);
        }
        // nonabelian H breaks the bijection in degree 2
        let q8 = group("Q8").unwrap();
        let id = CentralIdentification {
            in_h: vec![0, 1],
            in_k: vec![0, 1],
        };
        let r = check_pullback(&q8, &q8, &id, 2, &Budget::default()).unwrap();
        assert!(!r.holds());
    }
}
