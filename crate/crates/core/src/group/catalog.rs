//! Built-in groups, addressed by short names such as `Z6`, `Z2xZ4`, `D8`,
//! `Q8`, `Q16`, `S3`, `S4`, `A4`, `Z4oZ4`, `Z4oQ8`.

use super::{central_product, CentralIdentification, FiniteGroup};
use crate::error::{Error, Result};

/// Names of the fixed corpus used by the verification suite, small groups first.
pub const STANDARD_CORPUS: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z12", "Z16", "Z2xZ2", "Z2xZ4",
    "Z2xZ6", "Z3xZ3", "Z2xZ8", "Z4xZ4", "Z2xZ2xZ2", "Z2xZ2xZ4", "D4", "D6", "D8", "D10", "D12",
    "D14", "D16", "Q8", "Q16", "S3", "A4", "S4", "Z4oZ4", "Z4oQ8", "Z4oD8",
];

/// Looks a group up by name.
pub fn group(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    let unknown = || Error::InvalidGroup(format!("unknown catalog group '{name}'"));
    match name {
        "Q8" => return Ok(quaternion8()),
        "S3" => return symmetric(3),
        "S4" => return symmetric(4),
        "A4" => return alternating4(),
        "Z4oZ4" => return cyclic_central_product(&cyclic(4), 2, &cyclic(4), 2),
        "Z4oQ8" => return cyclic_central_product(&cyclic(4), 2, &quaternion8(), 1),
        "Z4oD8" => return cyclic_central_product(&cyclic(4), 2, &dihedral(4), 2),
        _ => {}
    }
    if name.contains('x') {
        let mut factors = Vec::new();
        for part in name.split('x') {
            let n = part
                .strip_prefix('Z')
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(unknown)?;
            factors.push(n);
        }
        return abelian(&factors);
    }
    let (head, digits) = name.split_at(name.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?);
    let n: usize = digits.parse().map_err(|_| unknown())?;
    match head {
        "Z" if n >= 1 => Ok(cyclic(n)),
        "D" if n >= 4 && n.is_multiple_of(2) => Ok(dihedral(n / 2)),
        "Q" if n >= 8 && n.is_multiple_of(4) => Ok(dicyclic(n / 4)),
        _ => Err(unknown()),
    }
}

fn power_name(base: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    }
}

/// ℤ/n with elements `1, a, a^2, …` at indices `0..n`.
pub fn cyclic(n: usize) -> FiniteGroup {
    let n = n.max(1);
    let rows = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let names = (0..n)
        .map(|i| if i == 0 { "1".into() } else { power_name("a", i) })
        .collect();
    FiniteGroup::from_table(rows, Some(names)).expect("cyclic table is a group")
}

/// ℤ/n₁ × ℤ/n₂ × …; element names are exponent vectors such as `(1,0)`.
pub fn abelian(factors: &[usize]) -> Result<FiniteGroup> {
    if factors.is_empty() || factors.contains(&0) {
        return Err(Error::InvalidGroup("abelian factors must be positive".into()));
    }
    let gens: Vec<Vec<usize>> = (0..factors.len())
        .map(|i| (0..factors.len()).map(|j| usize::from(i == j)).collect())
        .collect();
    let fs = factors.to_vec();
    FiniteGroup::from_closure(
        vec![0; factors.len()],
        &gens,
        move |x, y| x.iter().zip(y).zip(&fs).map(|((a, b), m)| (a + b) % m).collect(),
        |x| {
            if x.iter().all(|&v| v == 0) {
                "1".into()
            } else {
                let parts: Vec<String> = x.iter().map(ToString::to_string).collect();
                format!("({})", parts.join(","))
            }
        },
    )
}

/// Dihedral group of order 2n: `r^i s^j` with `s r s = r⁻¹`. Rotations
/// occupy indices `0..n`.
pub fn dihedral(n: usize) -> FiniteGroup {
    metacyclic_sign(n, false)
}

/// Dicyclic group of order 4n: `a^i b^j` with `b a b⁻¹ = a⁻¹`, `b² = a^n`.
/// For n = 2 this is Q8 with the usual quaternion labels.
pub fn dicyclic(n: usize) -> FiniteGroup {
    if n == 2 {
        return quaternion8();
    }
    metacyclic_sign(n, true)
}

// (i, j) ↦ index j·m + i, where m is the order of the rotation subgroup.
fn metacyclic_sign(n: usize, dicyclic: bool) -> FiniteGroup {
    let m = if dicyclic { 2 * n } else { n };
    let order = 2 * m;
    let mul = |(i, j): (usize, usize), (k, l): (usize, usize)| -> (usize, usize) {
        let k_tw = if j == 1 { (m - k) % m } else { k };
        let mut e = (i + k_tw) % m;
        if dicyclic && j == 1 && l == 1 {
            e = (e + n) % m;
        }
        (e, (j + l) % 2)
    };
    let idx = |(i, j): (usize, usize)| j * m + i;
    let el = |x: usize| (x % m, x / m);
    let rows = (0..order)
        .map(|x| (0..order).map(|y| idx(mul(el(x), el(y)))).collect())
        .collect();
    let (r, s) = if dicyclic { ("a", "b") } else { ("r", "s") };
    let names = (0..order)
        .map(|x| {
            let (i, j) = el(x);
            let mut out = power_name(r, i);
            if j == 1 {
                out.push_str(s);
            }
            if out.is_empty() {
                out.push('1');
            }
            out
        })
        .collect();
    FiniteGroup::from_table(rows, Some(names)).expect("metacyclic table is a group")
}

/// Quaternion group with elements `1, -1, i, -i, j, -j, k, -k`.
pub fn quaternion8() -> FiniteGroup {
    // Unit quaternions ±e_u with e_0 = 1, e_1 = i, e_2 = j, e_3 = k.
    let basis = |u: usize, v: usize| -> (bool, usize) {
        // e_u e_v = (negative?, e_w)
        match (u, v) {
            (0, w) | (w, 0) => (false, w),
            (a, b) if a == b => (true, 0),
            (1, 2) => (false, 3),
            (2, 1) => (true, 3),
            (2, 3) => (false, 1),
            (3, 2) => (true, 1),
            (3, 1) => (false, 2),
            (1, 3) => (true, 2),
            _ => unreachable!(),
        }
    };
    let el = |x: usize| (x % 2 == 1, x / 2);
    let idx = |(neg, u): (bool, usize)| 2 * u + usize::from(neg);
    let rows = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let ((nx, ux), (ny, uy)) = (el(x), el(y));
                    let (n, w) = basis(ux, uy);
                    idx((nx ^ ny ^ n, w))
                })
                .collect()
        })
        .collect();
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    FiniteGroup::from_table(rows, Some(names)).expect("Q8 table is a group")
}

pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n < 2 {
        return FiniteGroup::from_permutations(1, &[vec![0]]);
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    FiniteGroup::from_permutations(n, &[swap, cycle])
}

pub fn alternating4() -> Result<FiniteGroup> {
    FiniteGroup::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]])
}

/// Central product identifying the order-2 subgroups generated by the
/// given elements of `h` and `k`.
fn cyclic_central_product(
    h: &FiniteGroup,
    zh: usize,
    k: &FiniteGroup,
    zk: usize,
) -> Result<FiniteGroup> {
    let z = CentralIdentification {
        in_h: vec![0, zh],
        in_k: vec![0, zk],
    };
    Ok(central_product(h, k, &z)?.group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{center, derived_subgroup};

    #[test]
    fn corpus_orders() {
        let expected = [
            ("Z1", 1),
            ("Z16", 16),
            ("Z2xZ2xZ2", 8),
            ("D8", 8),
            ("D16", 16),
            ("Q8", 8),
            ("Q16", 16),
            ("S3", 6),
            ("S4", 24),
            ("A4", 12),
            ("Z4oZ4", 8),
            ("Z4oQ8", 16),
            ("Z4oD8", 16),
        ];
        for (name, n) in expected {
            assert_eq!(group(name).unwrap().order(), n, "{name}");
        }
        for name in STANDARD_CORPUS {
            assert!(group(name).is_ok(), "{name}");
        }
    }

    #[test]
    fn unknown_names() {
        for bad in ["", "X4", "D5", "Q6", "Z0", "Zx", "Z2xY3"] {
            assert!(group(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn quaternion_relations() {
        let q = quaternion8();
        let e = |s| q.element(s).unwrap();
        assert_eq!(q.mul(e("i"), e("j")), e("k"));
        assert_eq!(q.mul(e("j"), e("i")), e("-k"));
        assert_eq!(q.mul(e("i"), e("i")), e("-1"));
        assert_eq!(q.commutator(e("i"), e("j")), e("-1"));
        assert_eq!(q.order_statistics().get(&4), Some(&6));
    }

    #[test]
    fn dicyclic_16_is_generalized_quaternion() {
        let q = group("Q16").unwrap();
        // a unique involution, and the center is that involution
        assert_eq!(q.order_statistics().get(&2), Some(&1));
        assert_eq!(center(&q).order(), 2);
        assert_eq!(derived_subgroup(&q).order(), 4);
    }

    #[test]
    fn dihedral_relations() {
        for n in 2..=8 {
            let d = dihedral(n);
            assert_eq!(d.order(), 2 * n);
            let (r, s) = (d.element("r").unwrap(), d.element("s").unwrap());
            assert_eq!(d.element_order(r), n);
            assert_eq!(d.element_order(s), 2);
            assert_eq!(d.mul(d.mul(s, r), s), d.inv(r));
            let z = match n {
                2 => 4,
                _ if n % 2 == 0 => 2,
                _ => 1,
            };
            assert_eq!(center(&d).order(), z);
        }
    }

    #[test]
    fn central_products_in_catalog() {
        let g = group("Z4oZ4").unwrap();
        assert!(g.is_abelian());
        assert_eq!(g.order_statistics().get(&4), Some(&4));
        let h = group("Z4oQ8").unwrap();
        assert_eq!(center(&h).order(), 4);
        assert_eq!(derived_subgroup(&h).order(), 2);
    }
}
