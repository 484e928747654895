//! Named torus extensions, and random conjugates of them.

use rand::Rng;

use super::{rational, Rational, TorusExtension};
use crate::error::{Error, Result};
use crate::group::catalog::group;

/// Every named extension, split ones first.
pub const EXTENSIONS: &[&str] = &[
    "trivial1", "trivial2", "O2", "diag2", "swap2", "rot3", "rot4", "rot6", "signs2", "weyl_A2",
    "weyl_B2", "perm3", "neg3", "cyc3", "NT_SU2", "diag2_quot",
];

type Gens = Vec<(&'static str, Vec<Vec<i64>>)>;
type Quotient = Vec<(Vec<Rational>, &'static str)>;

fn definition(name: &str) -> Option<(usize, &'static str, Gens, Quotient)> {
    let split = |k, f, g: Gens| Some((k, f, g, Vec::new()));
    match name {
        "trivial1" => split(1, "Z1", vec![]),
        "trivial2" => split(2, "Z2", vec![("a", vec![vec![1, 0], vec![0, 1]])]),
        "O2" => split(1, "Z2", vec![("a", vec![vec![-1]])]),
        "diag2" => split(2, "Z2", vec![("a", vec![vec![-1, 0], vec![0, 1]])]),
        "swap2" => split(2, "Z2", vec![("a", vec![vec![0, 1], vec![1, 0]])]),
        "rot3" => split(2, "Z3", vec![("a", vec![vec![0, -1], vec![1, -1]])]),
        "rot4" => split(2, "Z4", vec![("a", vec![vec![0, -1], vec![1, 0]])]),
        "rot6" => split(2, "Z6", vec![("a", vec![vec![1, -1], vec![1, 0]])]),
        "signs2" => split(
            2,
            "Z2xZ2",
            vec![
                ("(1,0)", vec![vec![-1, 0], vec![0, 1]]),
                ("(0,1)", vec![vec![1, 0], vec![0, -1]]),
            ],
        ),
        // S3 on the coroot lattice spanned by e0 − e1, e1 − e2
        "weyl_A2" => split(
            2,
            "S3",
            vec![
                ("(0 1)", vec![vec![-1, 1], vec![0, 1]]),
                ("(0 1 2)", vec![vec![0, -1], vec![1, -1]]),
            ],
        ),
        "weyl_B2" => split(
            2,
            "D8",
            vec![
                ("r", vec![vec![0, -1], vec![1, 0]]),
                ("s", vec![vec![1, 0], vec![0, -1]]),
            ],
        ),
        "perm3" => split(
            3,
            "S3",
            vec![
                ("(0 1)", vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
                ("(0 1 2)", vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]),
            ],
        ),
        "neg3" => split(3, "Z2", vec![("a", vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]])]),
        "cyc3" => split(3, "Z3", vec![("a", vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]])]),
        // normalizer of the maximal torus in SU(2): the generator squares to −1
        "NT_SU2" => Some((
            1,
            "Z4",
            vec![("a", vec![vec![-1]])],
            vec![(vec![rational(1, 2)], "a^2")],
        )),
        "diag2_quot" => Some((
            2,
            "Z4",
            vec![("a", vec![vec![-1, 0], vec![0, 1]])],
            vec![(vec![rational(1, 2), rational(0, 1)], "a^2")],
        )),
        _ => None,
    }
}

pub fn extension(name: &str) -> Result<TorusExtension> {
    let (k, fname, gens, quotient) = definition(name.trim())
        .ok_or_else(|| Error::InvalidExtension(format!("unknown catalog extension '{name}'")))?;
    let f = group(fname)?;
    let lookup = |label: &str| {
        f.element(label)
            .ok_or_else(|| Error::InvalidExtension(format!("no element '{label}' in {fname}")))
    };
    let gens = gens
        .into_iter()
        .map(|(l, m)| Ok((lookup(l)?, m)))
        .collect::<Result<Vec<_>>>()?;
    let quotient = quotient
        .into_iter()
        .map(|(t, l)| Ok((t, lookup(l)?)))
        .collect::<Result<Vec<_>>>()?;
    TorusExtension::from_generators(name, k, f.clone(), &gens, quotient)
}

/// A random unimodular matrix and its inverse, as products of elementary
/// row operations with small multipliers.
pub fn random_unimodular<R: Rng>(rng: &mut R, k: usize) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut p: Vec<Vec<i64>> = (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect();
    let mut q = p.clone();
    if k < 2 {
        if k == 1 && rng.gen_bool(0.5) {
            p[0][0] = -1;
            q[0][0] = -1;
        }
        return (p, q);
    }
    for _ in 0..(2 * k + 2) {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 } * rng.gen_range(1..=2);
        // P ← E P with E = I + c e_ij, and P⁻¹ ← P⁻¹ E⁻¹
        let pj = p[j].clone();
        for (x, v) in p[i].iter_mut().zip(pj) {
            *x += c * v;
        }
        for row in q.iter_mut() {
            let v = row[i];
            row[j] -= c * v;
        }
    }
    (p, q)
}

/// A catalog extension with rank ≤ `max_rank` and `|F| ≤ max_order`,
/// conjugated by a random unimodular change of basis.
pub fn random_extension<R: Rng>(
    rng: &mut R,
    max_rank: usize,
    max_order: usize,
) -> Result<TorusExtension> {
    let candidates: Vec<TorusExtension> = EXTENSIONS
        .iter()
        .map(|n| extension(n))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|e| e.rank() <= max_rank && e.finite().order() <= max_order)
        .collect();
    if candidates.is_empty() {
        return Err(Error::InvalidExtension("no catalog extension fits the bounds".into()));
    }
    let base = &candidates[rng.gen_range(0..candidates.len())];
    let (p, pinv) = random_unimodular(rng, base.rank());
    conjugate(base, &p, &pinv, format!("{}~{}", base.name(), rng.gen::<u16>()))
}

/// The same extension in the basis given by `p` (with inverse `pinv`):
/// `ρ'(f) = P ρ(f) P⁻¹` and central torus parts `s ↦ P s`.
pub fn conjugate(
    base: &TorusExtension,
    p: &[Vec<i64>],
    pinv: &[Vec<i64>],
    name: String,
) -> Result<TorusExtension> {
    let k = base.rank();
    let mm = |a: &[Vec<i64>], b: &[Vec<i64>]| -> Vec<Vec<i64>> {
        (0..k)
            .map(|i| (0..k).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
            .collect()
    };
    let action = (0..base.finite().order())
        .map(|f| mm(&mm(p, base.action_rows(f)), pinv))
        .collect();
    let quotient = base
        .quotient_generators()
        .iter()
        .map(|(s, g)| {
            let ps = (0..k)
                .map(|i| {
                    (0..k).fold(Rational::from_integer(0.into()), |acc, j| {
                        acc + &s[j] * Rational::from_integer(p[i][j].into())
                    })
                })
                .collect();
            (ps, *g)
        })
        .collect();
    TorusExtension::new(name, k, base.finite().clone(), action, quotient)
}
