use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::{rational, ExtElement, Rational, TorusExtension};
use crate::error::{Budget, Error, Result};

#[derive(Clone, Debug)]
pub struct CommutatorWitness {
    pub target: Vec<Rational>,
    pub x: ExtElement,
    pub y: ExtElement,
}

#[derive(Clone, Debug)]
pub struct CoverReport {
    pub denominator: u64,
    pub search_denominator: u64,
    /// Number of denominator-N points on the commutator subtorus.
    pub targets: usize,
    pub witnesses: Vec<CommutatorWitness>,
    /// Targets with no witness found among the searched elements.
    pub missing: Vec<Vec<Rational>>,
}

impl CoverReport {
    /// True when every target has a witness. A false value only means no
    /// witness exists at the searched denominator.
    pub fn covered(&self) -> bool {
        self.missing.is_empty()
    }
}

// Points are stored as numerators over a common denominator `d`.
struct ModModel<'a> {
    ext: &'a TorusExtension,
    d: i64,
    central: Vec<(Vec<i64>, usize)>,
}

impl ModModel<'_> {
    fn apply(&self, f: usize, t: &[i64]) -> Vec<i64> {
        self.ext.action[f]
            .iter()
            .map(|row| row.iter().zip(t).map(|(a, x)| a * x).sum::<i64>().rem_euclid(self.d))
            .collect()
    }

    fn mul(&self, (s, f): &(Vec<i64>, usize), (t, g): &(Vec<i64>, usize)) -> (Vec<i64>, usize) {
        let rt = self.apply(*f, t);
        (
            s.iter().zip(&rt).map(|(a, b)| (a + b).rem_euclid(self.d)).collect(),
            self.ext.finite.mul(*f, *g),
        )
    }

    fn inv(&self, (s, f): &(Vec<i64>, usize)) -> (Vec<i64>, usize) {
        let fi = self.ext.finite.inv(*f);
        (self.apply(fi, s).iter().map(|x| (-x).rem_euclid(self.d)).collect(), fi)
    }

    /// Torus coordinate of `[x, y]`, if the bracket lies in the torus.
    fn bracket_coordinate(&self, x: &(Vec<i64>, usize), y: &(Vec<i64>, usize)) -> Option<Vec<i64>> {
        let c = self.mul(&self.mul(&self.inv(x), &self.inv(y)), &self.mul(x, y));
        let need = self.ext.finite.inv(c.1);
        let i = self.ext.central_by_f[need]?;
        Some(self.mul(&c, &self.central[i]).0)
    }
}

/// Searches, for each denominator-`n` point of the commutator subtorus, a
/// pair `x, y` with torus parts of denominator dividing `m` such that the
/// point equals `[x, y]`. `m` defaults to `n·|F|`.
pub fn single_commutator_cover(
    ext: &TorusExtension,
    n: u64,
    m: Option<u64>,
    budget: &Budget,
) -> Result<CoverReport> {
    if n == 0 || m == Some(0) {
        return Err(Error::parse("denominator", "must be positive"));
    }
    let k = ext.rank();
    let fo = ext.finite().order();
    let m = m.unwrap_or(n * fo as u64);
    let elements = (m as u128).pow(k as u32) * fo as u128;
    let pairs = elements * elements;
    budget.check_count(u64::try_from(pairs).unwrap_or(u64::MAX))?;

    let d = n.lcm(&m).lcm(&ext.central_denominator());
    let di = i64::try_from(d).map_err(|_| Error::parse("denominator", "too large"))?;
    let central = ext
        .central
        .iter()
        .map(|(s, g)| {
            let v = s
                .iter()
                .map(|x| (x * rational(di, 1)).to_integer().to_i64().expect("fits"))
                .collect();
            (v, *g)
        })
        .collect();
    let model = ModModel { ext, d: di, central };

    let sub = ext.commutator_lattices().subtorus;
    let basis = sub.basis();
    let r = basis.cols();
    let ni = n as i64;
    let annihilator: Vec<Vec<i64>> = sub
        .annihilator()
        .generators()
        .columns()
        .iter()
        .map(|w| w.iter().map(|x| x.to_i64().expect("small")).collect())
        .collect();
    // targets keyed by numerators over n
    let mut targets: BTreeMap<Vec<i64>, Option<(usize, usize)>> = BTreeMap::new();
    let cols: Vec<Vec<i64>> = (0..r)
        .map(|j| basis.column(j).iter().map(|x| x.to_i64().expect("small")).collect())
        .collect();
    let count = (n as usize).pow(r as u32);
    budget.check_count(count as u64)?;
    for code in 0..count {
        let mut c = code;
        let mut v = vec![0i64; k];
        for col in &cols {
            let coef = (c % n as usize) as i64;
            c /= n as usize;
            for (vi, b) in v.iter_mut().zip(col) {
                *vi = (*vi + coef * b).rem_euclid(ni);
            }
        }
        targets.insert(v, None);
    }

    let scale = di / ni;
    let step = di / m as i64;
    let decode = |idx: usize| -> (Vec<i64>, usize) {
        let f = idx % fo;
        let mut c = idx / fo;
        let mut t = vec![0i64; k];
        for slot in t.iter_mut() {
            *slot = (c as u64 % m) as i64 * step;
            c /= m as usize;
        }
        (t, f)
    };
    let on_target = |coord: &[i64]| -> Option<Vec<i64>> {
        if coord.iter().any(|x| x % scale != 0) {
            return None;
        }
        let v: Vec<i64> = coord.iter().map(|x| x / scale).collect();
        let on_sub = annihilator
            .iter()
            .all(|w| w.iter().zip(&v).map(|(a, b)| a * b).sum::<i64>().rem_euclid(ni) == 0);
        on_sub.then_some(v)
    };

    let total = elements as usize;
    let block = 64usize;
    let mut remaining = targets.len();
    let mut start = 0;
    while start < total && remaining > 0 {
        let end = (start + block).min(total);
        let found: Vec<BTreeMap<Vec<i64>, (usize, usize)>> = (start..end)
            .into_par_iter()
            .map(|xi| {
                let x = decode(xi);
                let mut local = BTreeMap::new();
                for yi in 0..total {
                    let y = decode(yi);
                    if let Some(v) = model.bracket_coordinate(&x, &y).as_deref().and_then(on_target) {
                        local.entry(v).or_insert((xi, yi));
                    }
                }
                local
            })
            .collect();
        for local in found {
            for (v, w) in local {
                if let Some(slot @ None) = targets.get_mut(&v) {
                    *slot = Some(w);
                    remaining -= 1;
                }
            }
        }
        start = end;
    }

    let to_point = |v: &[i64], den: i64| -> Vec<Rational> { v.iter().map(|&x| rational(x, den)).collect() };
    let to_element = |idx: usize| -> Result<ExtElement> {
        let (t, f) = decode(idx);
        ext.element(to_point(&t, di), f)
    };
    let mut witnesses = Vec::new();
    let mut missing = Vec::new();
    for (v, w) in &targets {
        match w {
            Some((xi, yi)) => witnesses.push(CommutatorWitness {
                target: to_point(v, ni),
                x: to_element(*xi)?,
                y: to_element(*yi)?,
            }),
            None => missing.push(to_point(v, ni)),
        }
    }
    Ok(CoverReport {
        denominator: n,
        search_denominator: m,
        targets: targets.len(),
        witnesses,
        missing,
    })
}
