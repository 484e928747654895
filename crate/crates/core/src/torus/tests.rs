use super::catalog::{conjugate, extension, random_extension, random_unimodular, EXTENSIONS};
use super::*;
use crate::error::Budget;
use crate::group::catalog::group;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> Rational {
    rational(n, d)
}

fn lat(k: usize, vs: &[&[i64]]) -> Lattice {
    Lattice::from_vectors(k, &vs.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// Every torus point with all coordinates in (1/n)ℤ/ℤ.
fn grid(k: usize, n: i64) -> Vec<Vec<Rational>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut p = p.clone();
                    p.push(q(i, n));
                    p
                })
            })
            .collect();
    }
    out
}

#[test]
fn catalog_builds() {
    for name in EXTENSIONS {
        let e = extension(name).unwrap_or_else(|err| panic!("{name}: {err}"));
        assert_eq!(e.name(), *name);
    }
    assert!(extension("nope").is_err());
    assert!(!extension("NT_SU2").unwrap().is_split());
}

#[test]
fn rejects_bad_actions() {
    let z2 = group("Z2").unwrap();
    // determinant 2
    let r = TorusExtension::new("x", 1, z2.clone(), vec![vec![vec![1]], vec![vec![2]]], vec![]);
    assert!(matches!(r, Err(Error::InvalidExtension(_))));
    // not a homomorphism: a ↦ a rotation of order 4 for an element of order 2
    let r = TorusExtension::from_generators(
        "x",
        2,
        z2.clone(),
        &[(1, vec![vec![0, -1], vec![1, 0]])],
        vec![],
    );
    assert!(matches!(r, Err(Error::InvalidExtension(_))));
    // central generator acting nontrivially
    let r = TorusExtension::from_generators(
        "x",
        1,
        z2.clone(),
        &[(1, vec![vec![-1]])],
        vec![(vec![q(0, 1)], 1)],
    );
    assert!(matches!(r, Err(Error::InvalidExtension(_))));
    // central torus point not fixed by the action
    let z4 = group("Z4").unwrap();
    let r = TorusExtension::from_generators(
        "x",
        1,
        z4.clone(),
        &[(1, vec![vec![-1]])],
        vec![(vec![q(1, 3)], 2)],
    );
    assert!(matches!(r, Err(Error::InvalidExtension(_))));
    // meets the torus: (1/2, 1) is central with trivial finite part
    let r = TorusExtension::from_generators("x", 1, z2, &[(1, vec![vec![1]])], vec![(vec![q(1, 2)], 0)]);
    assert!(matches!(r, Err(Error::InvalidExtension(_))));
}

#[test]
fn mixed_parents_are_rejected() {
    let a = extension("O2").unwrap();
    let b = extension("O2").unwrap();
    let x = a.lift(1);
    let y = b.lift(1);
    assert_eq!(a.multiply(&x, &y).unwrap_err(), Error::MixedParent);
    assert!(a.multiply(&x, &a.identity()).is_ok());
}

#[test]
fn basic_products() {
    let e = extension("O2").unwrap();
    let tau = e.lift(1);
    for t in grid(1, 12) {
        let x = e.torus(t.clone()).unwrap();
        assert_eq!(e.multiply(&e.identity(), &x).unwrap(), x);
        // the bracket with the reflection doubles
        let c = e.commutator(&tau, &x).unwrap();
        assert_eq!(c, e.torus(vec![&t[0] * q(2, 1)]).unwrap());
        let y = e.torus(vec![q(1, 5)]).unwrap();
        assert_eq!(e.commutator(&x, &y).unwrap(), e.identity());
    }
}

#[test]
fn quotient_model_relations() {
    let e = extension("NT_SU2").unwrap();
    let a = e.lift(1);
    // a² = (1/2, 1)·z ~ the torus point 1/2
    let a2 = e.multiply(&a, &a).unwrap();
    assert_eq!(e.torus_coordinate(&a2).unwrap(), Some(vec![q(1, 2)]));
    let a4 = e.multiply(&a2, &a2).unwrap();
    assert_eq!(a4, e.identity());
    assert_eq!(e.torus_coordinate(&a).unwrap(), None);
    assert_eq!(e.central_subgroup().len(), 2);
}

#[test]
fn psi_star_examples() {
    let e = extension("O2").unwrap();
    assert!(e.psi_star(0).is_zero());
    assert_eq!(e.psi_star(1), IntMatrix::from_rows(&[[2]]));
    let s = extension("swap2").unwrap();
    assert_eq!(s.psi_star(1), IntMatrix::from_rows(&[[1, -1], [-1, 1]]));
}

#[test]
fn lattices_of_examples() {
    let o2 = extension("O2").unwrap().commutator_lattices();
    assert_eq!(o2.sum, lat(1, &[&[2]]));
    assert_eq!(o2.subtorus, Lattice::full(1));
    let t = extension("trivial2").unwrap().commutator_lattices();
    assert_eq!(t.sum.rank(), 0);
    assert_eq!(t.subtorus.rank(), 0);
    let d = extension("diag2").unwrap();
    let l = d.commutator_lattices();
    assert_eq!(l.sum, lat(2, &[&[2, 0]]));
    assert_eq!(l.subtorus, lat(2, &[&[1, 0]]));
    let (sub, comp) = d.pi1_split().unwrap();
    assert_eq!(sub, lat(2, &[&[1, 0]]));
    assert_eq!(comp, lat(2, &[&[0, 1]]));
    let (sub, comp) = extension("O2").unwrap().pi1_split().unwrap();
    assert_eq!((sub, comp), (Lattice::full(1), Lattice::zero(1)));
    let (sub, comp) = extension("trivial2").unwrap().pi1_split().unwrap();
    assert_eq!((sub, comp), (Lattice::zero(2), Lattice::full(2)));
    let nt = extension("NT_SU2").unwrap().commutator_lattices();
    assert_eq!(nt.subtorus, Lattice::full(1));
}

#[test]
fn lattice_invariants_across_catalog() {
    for name in EXTENSIONS {
        let e = extension(name).unwrap();
        let l = e.commutator_lattices();
        assert!(l.subtorus.contains(&l.sum), "{name}");
        assert_eq!(l.sum.rank(), l.subtorus.rank(), "{name}");
        assert!(l.sum.index_in(&l.subtorus).is_some(), "{name}");
        let inverted: Vec<Lattice> = (0..e.finite().order())
            .map(|f| {
                Lattice::image_of(
                    &IntMatrix::identity(e.rank()).sub(&e.action_matrix(f)).unwrap(),
                )
            })
            .collect();
        assert_eq!(Lattice::sum(e.rank(), &inverted).unwrap(), l.sum, "{name}");
        let (sub, comp) = e.pi1_split().unwrap();
        assert!(sub.is_direct_complement(&comp), "{name}");
    }
}

#[test]
fn psi_star_is_the_bracket() {
    for name in EXTENSIONS {
        let e = extension(name).unwrap();
        for f in 0..e.finite().order() {
            let l = e.psi_star(f);
            for t in grid(e.rank(), 12) {
                let lt: Vec<Rational> = (0..e.rank())
                    .map(|i| {
                        (0..e.rank()).fold(q(0, 1), |acc, j| {
                            acc + &t[j] * Rational::from_integer(l[(i, j)].clone())
                        })
                    })
                    .collect();
                assert_eq!(e.psi(f, t).unwrap(), e.torus(lt).unwrap(), "{name}");
            }
        }
    }
}

#[test]
fn conjugation_preserves_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in EXTENSIONS {
        let base = extension(name).unwrap();
        let (p, pinv) = random_unimodular(&mut rng, base.rank());
        let c = conjugate(&base, &p, &pinv, "c".into()).unwrap();
        let (lb, lc) = (base.commutator_lattices(), c.commutator_lattices());
        assert_eq!(lb.sum.rank(), lc.sum.rank(), "{name}");
        assert_eq!(
            lb.sum.index_in(&lb.subtorus),
            lc.sum.index_in(&lc.subtorus),
            "{name}"
        );
    }
    for _ in 0..20 {
        let e = random_extension(&mut rng, 3, 8).unwrap();
        assert!(e.rank() <= 3 && e.finite().order() <= 8);
    }
}

#[test]
fn single_commutators() {
    let b = Budget::default();
    let r = single_commutator_cover(&extension("trivial2").unwrap(), 5, None, &b).unwrap();
    assert!(r.covered());
    assert_eq!(r.targets, 1);
    for name in ["O2", "NT_SU2"] {
        let e = extension(name).unwrap();
        let r = single_commutator_cover(&e, 12, None, &b).unwrap();
        assert!(r.covered(), "{name}");
        assert_eq!(r.targets, 12);
        for w in &r.witnesses {
            let c = e.commutator(&w.x, &w.y).unwrap();
            assert_eq!(c, e.torus(w.target.clone()).unwrap());
        }
    }
    // with only torus elements available nothing but 0 is a bracket
    let e = extension("O2").unwrap();
    let r = single_commutator_cover(&e, 4, Some(1), &b).unwrap();
    assert!(!r.covered());
    assert!(single_commutator_cover(&e, 12, Some(10_000), &b).unwrap_err().is_budget());
}

#[test]
fn bracket_expansion_on_random_samples() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in EXTENSIONS {
        let e = extension(name).unwrap();
        let n = e.finite().order();
        for _ in 0..100 {
            let (p, qq) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let mut pt = || -> Vec<Rational> {
                (0..e.rank())
                    .map(|_| {
                        let d = rng.gen_range(1..=30);
                        q(rng.gen_range(0..d), d)
                    })
                    .collect()
            };
            let (s, t) = (pt(), pt());
            let (lhs, rhs) = e.commutator_expansion(p, qq, &s, &t).unwrap();
            assert_eq!(lhs, rhs, "{name} p={p} q={qq}");
        }
    }
}

/// Independent oracle: the subgroup generated by brackets of denominator-n
/// elements, computed with integer numerators in the split extension, meets
/// the torus only in denominator-(n·|F|) points of the commutator subtorus.
#[test]
fn bracket_subgroup_stays_on_subtorus() {
    use std::collections::HashSet;
    for name in EXTENSIONS {
        let e = extension(name).unwrap();
        let k = e.rank();
        let fo = e.finite().order();
        let max_n: i64 = 8;
        let sub = e.commutator_lattices().subtorus;
        for n in 1..=max_n {
            // work over denominator d; central parts have denominator ≤ 2
            let d = 2 * n * fo as i64;
            let central: Vec<(Vec<i64>, usize)> = e
                .central_subgroup()
                .iter()
                .map(|(s, g)| {
                    (
                        s.iter()
                            .map(|x| (x * q(d, 1)).to_integer().to_i64().unwrap())
                            .collect(),
                        *g,
                    )
                })
                .collect();
            let act = |f: usize, t: &[i64]| -> Vec<i64> {
                e.action_rows(f)
                    .iter()
                    .map(|row| row.iter().zip(t).map(|(a, b)| a * b).sum::<i64>().rem_euclid(d))
                    .collect()
            };
            let mul = |x: &(Vec<i64>, usize), y: &(Vec<i64>, usize)| {
                let ry = act(x.1, &y.0);
                (
                    x.0.iter().zip(&ry).map(|(a, b)| (a + b).rem_euclid(d)).collect::<Vec<_>>(),
                    e.finite().mul(x.1, y.1),
                )
            };
            let inv = |x: &(Vec<i64>, usize)| {
                let fi = e.finite().inv(x.1);
                (act(fi, &x.0).iter().map(|v| (-v).rem_euclid(d)).collect::<Vec<_>>(), fi)
            };
            let canon = |x: (Vec<i64>, usize)| central.iter().map(|z| mul(&x, z)).min().unwrap();
            let step = d / n;
            let mut elems = Vec::new();
            for code in 0..(n as usize).pow(k as u32) {
                let mut c = code;
                let t: Vec<i64> = (0..k)
                    .map(|_| {
                        let v = (c % n as usize) as i64 * step;
                        c /= n as usize;
                        v
                    })
                    .collect();
                for f in 0..fo {
                    elems.push((t.clone(), f));
                }
            }
            let mut gens = HashSet::new();
            for x in &elems {
                for y in &elems {
                    let c = mul(&mul(&inv(x), &inv(y)), &mul(x, y));
                    gens.insert(canon(c));
                }
            }
            let gens: Vec<_> = gens.into_iter().collect();
            let mut seen: HashSet<(Vec<i64>, usize)> = HashSet::new();
            let mut queue = vec![canon((vec![0; k], 0))];
            seen.insert(queue[0].clone());
            while let Some(x) = queue.pop() {
                for g in &gens {
                    let y = canon(mul(&x, g));
                    if seen.insert(y.clone()) {
                        queue.push(y);
                    }
                }
            }
            let fine = d / (n * fo as i64);
            for x in &seen {
                // torus elements: orbit contains an element with trivial finite part
                let Some(t) = central
                    .iter()
                    .map(|z| mul(x, z))
                    .find(|y| y.1 == 0)
                    .map(|y| y.0)
                else {
                    continue;
                };
                assert!(t.iter().all(|v| v % fine == 0), "{name} n={n}: denominator");
                let pt: Vec<Rational> = t.iter().map(|&v| q(v, d)).collect();
                assert!(TorusExtension::on_subtorus(&sub, &pt), "{name} n={n}: {pt:?}");
            }
        }
    }
}
