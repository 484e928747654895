//! Commutative cocycles over the three-patch closed cover of S², their
//! pointwise inverses and clutching loops, evaluated in a torus extension.
//!
//! Each double intersection is an arc with its own parameter in `[0, 1]`;
//! parameter 0 is the front triple point and 1 the back one. An arc value
//! is a piecewise linear path `t ↦ (x(t), f)` with a continuous lift
//! `x(t) ∈ ℚ^k` and a constant finite label `f`. The clutching loop runs
//! over the first arc (`α12·α23`) forward and then over `α13` backwards.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::torus::{format_point, Rational, TorusExtension};

/// A piecewise linear path over `[0, 1]` with constant finite label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlPath {
    times: Vec<Rational>,
    lifts: Vec<Vec<Rational>>,
    label: usize,
}

fn zero() -> Rational {
    Rational::zero()
}

fn one() -> Rational {
    Rational::from_integer(BigInt::from(1))
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn neg(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| -x).collect()
}

fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

impl PlPath {
    /// Breakpoints must have strictly increasing times starting at 0 and
    /// ending at 1, and lifts of equal length.
    pub fn new(breakpoints: Vec<(Rational, Vec<Rational>)>, label: usize) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidPath(m.to_string()));
        if breakpoints.len() < 2 {
            return bad("a path needs at least two breakpoints");
        }
        if breakpoints[0].0 != zero() || breakpoints.last().expect("nonempty").0 != one() {
            return bad("times must start at 0 and end at 1");
        }
        if breakpoints.windows(2).any(|w| w[0].0 >= w[1].0) {
            return bad("times must be strictly increasing");
        }
        let k = breakpoints[0].1.len();
        if breakpoints.iter().any(|(_, v)| v.len() != k) {
            return bad("all lifts must have the same length");
        }
        let (times, lifts) = breakpoints.into_iter().unzip();
        Ok(PlPath { times, lifts, label })
    }

    pub fn constant(lift: Vec<Rational>, label: usize) -> Self {
        PlPath {
            times: vec![zero(), one()],
            lifts: vec![lift.clone(), lift],
            label,
        }
    }

    /// `t ↦ from + t·(to − from)`.
    pub fn linear(from: Vec<Rational>, to: Vec<Rational>, label: usize) -> Self {
        PlPath {
            times: vec![zero(), one()],
            lifts: vec![from, to],
            label,
        }
    }

    pub fn rank(&self) -> usize {
        self.lifts[0].len()
    }

    pub fn label(&self) -> usize {
        self.label
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (&Rational, &Vec<Rational>)> {
        self.times.iter().zip(&self.lifts)
    }

    pub fn start(&self) -> &[Rational] {
        &self.lifts[0]
    }

    pub fn end(&self) -> &[Rational] {
        self.lifts.last().expect("nonempty")
    }

    /// Lift at time `t ∈ [0, 1]` by linear interpolation.
    pub fn lift_at(&self, t: &Rational) -> Vec<Rational> {
        let i = match self.times.binary_search(t) {
            Ok(i) => return self.lifts[i].clone(),
            Err(i) => i.clamp(1, self.times.len() - 1),
        };
        let (t0, t1) = (&self.times[i - 1], &self.times[i]);
        let w = (t - t0) / (t1 - t0);
        self.lifts[i - 1]
            .iter()
            .zip(&self.lifts[i])
            .map(|(a, b)| a + (b - a) * &w)
            .collect()
    }

    fn merged_times(&self, other: &PlPath) -> Vec<Rational> {
        let mut t: Vec<Rational> = self.times.iter().chain(&other.times).cloned().collect();
        t.sort();
        t.dedup();
        t
    }

    fn map_lifts(&self, f: impl Fn(&[Rational]) -> Vec<Rational>, label: usize) -> PlPath {
        PlPath {
            times: self.times.clone(),
            lifts: self.lifts.iter().map(|v| f(v)).collect(),
            label,
        }
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> PlPath {
        PlPath {
            times: self.times.iter().rev().map(|t| one() - t).collect(),
            lifts: self.lifts.iter().rev().cloned().collect(),
            label: self.label,
        }
    }

    /// Adds a constant vector to the lift.
    pub fn shifted(&self, by: &[Rational]) -> PlPath {
        self.map_lifts(|v| add(v, by), self.label)
    }

    /// Runs `self` on `[0, 1/2]` and `other` on `[1/2, 1]`; the lifts must
    /// agree at the junction.
    fn concat(&self, other: &PlPath) -> PlPath {
        let half = Rational::new(1.into(), 2.into());
        let mut times: Vec<Rational> = self.times.iter().map(|t| t * &half).collect();
        let mut lifts = self.lifts.clone();
        for (t, v) in other.times.iter().zip(&other.lifts).skip(1) {
            times.push(&half + t * &half);
            lifts.push(v.clone());
        }
        PlPath {
            times,
            lifts,
            label: self.label,
        }
    }

    pub fn display(&self, ext: &TorusExtension) -> String {
        let pts: Vec<String> = self
            .breakpoints()
            .map(|(t, v)| format!("{t}:{}", format_point(v)))
            .collect();
        format!("[{}] label {}", pts.join(" "), ext.finite().name(self.label))
    }
}

/// Pointwise operations on paths in the split extension.
fn product(ext: &TorusExtension, a: &PlPath, b: &PlPath) -> PlPath {
    let times = a.merged_times(b);
    let lifts = times
        .iter()
        .map(|t| add(&a.lift_at(t), &ext.act(a.label, &b.lift_at(t))))
        .collect();
    PlPath {
        times,
        lifts,
        label: ext.finite().mul(a.label, b.label),
    }
}

fn inverse(ext: &TorusExtension, a: &PlPath) -> PlPath {
    let fi = ext.finite().inv(a.label);
    a.map_lifts(|v| neg(&ext.act(fi, v)), fi)
}

fn commutator(ext: &TorusExtension, a: &PlPath, b: &PlPath) -> PlPath {
    let left = product(ext, &inverse(ext, a), &inverse(ext, b));
    product(ext, &left, &product(ext, a, b))
}

/// Values of three arcs over the double intersections C₁∩C₂, C₁∩C₃, C₂∩C₃.
#[derive(Clone, Debug)]
pub struct PatchCocycle {
    parent: u64,
    pub a12: PlPath,
    pub a13: PlPath,
    pub a23: PlPath,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TriplePoint {
    Front,
    Back,
}

impl TriplePoint {
    fn time(self) -> Rational {
        match self {
            TriplePoint::Front => zero(),
            TriplePoint::Back => one(),
        }
    }
}

impl fmt::Display for TriplePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriplePoint::Front => "front",
            TriplePoint::Back => "back",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub condition: &'static str,
    pub location: TriplePoint,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl PatchCocycle {
    pub fn new(ext: &TorusExtension, a12: PlPath, a13: PlPath, a23: PlPath) -> Result<Self> {
        for (name, p) in [("a12", &a12), ("a13", &a13), ("a23", &a23)] {
            if p.rank() != ext.rank() {
                return Err(Error::InvalidPath(format!(
                    "{name} has lifts of length {} in a rank-{} extension",
                    p.rank(),
                    ext.rank()
                )));
            }
            if p.label >= ext.finite().order() {
                return Err(Error::InvalidPath(format!("{name} has an unknown finite label")));
            }
        }
        Ok(PatchCocycle {
            parent: ext.id(),
            a12,
            a13,
            a23,
        })
    }

    /// The cocycle with every arc constant at the identity.
    pub fn identity(ext: &TorusExtension) -> Self {
        let id = PlPath::constant(vec![zero(); ext.rank()], 0);
        PatchCocycle {
            parent: ext.id(),
            a12: id.clone(),
            a13: id.clone(),
            a23: id,
        }
    }

    fn check_parent(&self, ext: &TorusExtension) -> Result<()> {
        if self.parent == ext.id() {
            Ok(())
        } else {
            Err(Error::MixedParent)
        }
    }
}

/// Checks the cocycle equation `α12·α23 = α13` and pairwise commutation of
/// the three values at both triple points.
pub fn validate(ext: &TorusExtension, c: &PatchCocycle) -> Result<Diagnostics> {
    c.check_parent(ext)?;
    let mut checks = Vec::new();
    for loc in [TriplePoint::Front, TriplePoint::Back] {
        let t = loc.time();
        let v = |p: &PlPath| ext.element(p.lift_at(&t), p.label);
        let (x12, x13, x23) = (v(&c.a12)?, v(&c.a13)?, v(&c.a23)?);
        let lhs = ext.multiply(&x12, &x23)?;
        checks.push(Check {
            condition: "cocycle",
            location: loc,
            passed: lhs == x13,
            detail: format!("a12·a23 = {}, a13 = {}", ext.display(&lhs), ext.display(&x13)),
        });
        for (name, x, y) in [
            ("commute(a12,a23)", &x12, &x23),
            ("commute(a12,a13)", &x12, &x13),
            ("commute(a23,a13)", &x23, &x13),
        ] {
            let comm = ext.commutator(x, y)?;
            checks.push(Check {
                condition: name,
                location: loc,
                passed: comm == ext.identity(),
                detail: format!("commutator = {}", ext.display(&comm)),
            });
        }
    }
    Ok(Diagnostics { checks })
}

/// Pointwise inverse of a commutative cocycle.
pub fn invert(ext: &TorusExtension, c: &PatchCocycle) -> Result<PatchCocycle> {
    let d = validate(ext, c)?;
    if let Some(bad) = d.failures().find(|k| k.condition.starts_with("commute")) {
        return Err(Error::NonCommutativeCocycle(bad.location.to_string()));
    }
    Ok(PatchCocycle {
        parent: c.parent,
        a12: inverse(ext, &c.a12),
        a13: inverse(ext, &c.a13),
        a23: inverse(ext, &c.a23),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Winding {
    /// Class in `π₁(T) = ℤ^k`.
    Class(Vec<BigInt>),
    /// The loop lies in a component other than the identity component.
    NotIdentityComponent { label: String },
}

impl Winding {
    pub fn class(&self) -> Option<&[BigInt]> {
        match self {
            Winding::Class(v) => Some(v),
            Winding::NotIdentityComponent { .. } => None,
        }
    }
}

impl fmt::Display for Winding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Winding::Class(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
            Winding::NotIdentityComponent { label } => {
                write!(f, "not in the identity component (label {label})")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Clutching {
    /// The loop in the split extension, first arc on `[0, 1/2]`.
    pub path: PlPath,
    pub winding: Winding,
}

/// Assembles the clutching loop and reads off its class.
pub fn clutch(ext: &TorusExtension, c: &PatchCocycle) -> Result<Clutching> {
    c.check_parent(ext)?;
    let arc1 = product(ext, &c.a12, &c.a23);
    let arc2 = &c.a13;
    // Move arc2 by a central element so its label matches arc1, then by an
    // integer vector so the lifts meet at the back point.
    let mut aligned = None;
    for (s, g) in ext.central_subgroup() {
        if ext.finite().mul(arc1.label, g) != arc2.label {
            continue;
        }
        let moved = PlPath {
            label: arc1.label,
            ..arc2.shifted(&neg(&s))
        };
        let gap = sub(arc1.end(), moved.end());
        if is_integral(&gap) {
            aligned = Some(moved.shifted(&gap));
            break;
        }
    }
    let arc2 = aligned.ok_or_else(|| {
        Error::NonClosingLoop(format!(
            "arcs disagree at the back point: {} vs {}",
            arc1.display(ext),
            arc2.display(ext)
        ))
    })?;
    let path = arc1.concat(&arc2.reversed());
    let total = sub(path.end(), path.start());
    if !is_integral(&total) {
        return Err(Error::NonClosingLoop(format!(
            "arcs disagree at the front point by {}",
            format_point(&total)
        )));
    }
    let fi = ext.finite().inv(path.label);
    let winding = if ext.central_with_finite_part(fi).is_some() {
        Winding::Class(total.iter().map(|x| x.to_integer()).collect())
    } else {
        Winding::NotIdentityComponent {
            label: ext.finite().name(path.label).to_string(),
        }
    };
    Ok(Clutching { path, winding })
}

/// Patch functions `(h, q̄, 1)` built from a based loop `x` in the torus,
/// and the cocycle of successive commutators `([h,q̄], 1, 1)`.
#[derive(Clone, Debug)]
pub struct QxCocycle {
    /// Successive quotients are pairwise commuting at (front, back).
    pub affinely_commutative: [bool; 2],
    pub cocycle: PatchCocycle,
    pub clutching: Clutching,
    /// Class of `x` in `π₁(T)`.
    pub loop_class: Vec<BigInt>,
}

pub fn build_qx_cocycle(ext: &TorusExtension, q: usize, x: &PlPath) -> Result<QxCocycle> {
    if q >= ext.finite().order() {
        return Err(Error::InvalidExtension(format!("no finite element with index {q}")));
    }
    if x.rank() != ext.rank() {
        return Err(Error::InvalidPath("loop rank differs from the torus rank".into()));
    }
    if x.label != 0 || !is_integral(x.start()) || !is_integral(x.end()) {
        return Err(Error::NotBasedLoop);
    }
    let k = ext.rank();
    let qbar = PlPath::constant(vec![zero(); k], q);
    let one_path = PlPath::constant(vec![zero(); k], 0);
    let mut affine = [true; 2];
    for (slot, loc) in [TriplePoint::Front, TriplePoint::Back].iter().enumerate() {
        let t = loc.time();
        // values of (φ1, φ2, φ3) at the triple point
        let phis = [ext.torus(x.lift_at(&t))?, ext.lift(q), ext.identity()];
        let quotients = [
            ext.multiply(&ext.inverse(&phis[0])?, &phis[1])?,
            ext.multiply(&ext.inverse(&phis[1])?, &phis[2])?,
        ];
        affine[slot] = ext.commutator(&quotients[0], &quotients[1])? == ext.identity();
    }
    let cocycle = PatchCocycle::new(
        ext,
        commutator(ext, x, &qbar),
        one_path.clone(),
        one_path,
    )?;
    let clutching = clutch(ext, &cocycle)?;
    Ok(QxCocycle {
        affinely_commutative: affine,
        cocycle,
        clutching,
        loop_class: sub(x.end(), x.start()).iter().map(|v| v.to_integer()).collect(),
    })
}

/// The circle `t ↦ (t·a, t·b)` in `T × T`, used on the parameter range
/// `[0, endpoint]`.
#[derive(Clone, Debug)]
pub struct CircleArc {
    pub x_direction: Vec<i64>,
    pub y_direction: Vec<i64>,
    pub endpoint: Rational,
}

/// `α12 = p̄x·q̄y`, `α23 = (q̄y)⁻¹`, `α13 = p̄x` over the arc, with each
/// double intersection reparametrized to `[0, 1]`.
pub fn build_alpha_cocycle(
    ext: &TorusExtension,
    p: usize,
    q: usize,
    circle: &CircleArc,
) -> Result<PatchCocycle> {
    let k = ext.rank();
    if circle.x_direction.len() != k || circle.y_direction.len() != k {
        return Err(Error::InvalidPath("circle directions must have the torus rank".into()));
    }
    if circle.endpoint <= zero() || circle.endpoint > one() {
        return Err(Error::InvalidPath("endpoint must lie in (0, 1]".into()));
    }
    let n = ext.finite().order();
    if p >= n || q >= n {
        return Err(Error::InvalidExtension("finite element out of range".into()));
    }
    let scaled = |d: &[i64]| -> Vec<Rational> {
        d.iter()
            .map(|&v| Rational::from_integer(BigInt::from(v)) * &circle.endpoint)
            .collect()
    };
    let x = PlPath::linear(vec![zero(); k], scaled(&circle.x_direction), 0);
    let y = PlPath::linear(vec![zero(); k], scaled(&circle.y_direction), 0);
    let pbar = PlPath::constant(vec![zero(); k], p);
    let qbar = PlPath::constant(vec![zero(); k], q);
    let px = product(ext, &pbar, &x);
    let qy = product(ext, &qbar, &y);
    for t in [zero(), one()] {
        let a = ext.element(px.lift_at(&t), px.label)?;
        let b = ext.element(qy.lift_at(&t), qy.label)?;
        let comm = ext.commutator(&a, &b)?;
        if comm != ext.identity() {
            return Err(Error::EndpointCommutation(ext.display(&comm)));
        }
    }
    PatchCocycle::new(ext, product(ext, &px, &qy), px.clone(), inverse(ext, &qy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::catalog::{extension, EXTENSIONS};
    use crate::torus::rational;
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn circle(x: &[i64], y: &[i64], e: Rational) -> CircleArc {
        CircleArc {
            x_direction: x.to_vec(),
            y_direction: y.to_vec(),
            endpoint: e,
        }
    }

    #[test]
    fn path_validation() {
        let r = |n| rational(n, 1);
        assert!(PlPath::new(vec![(r(0), vec![r(0)])], 0).is_err());
        assert!(PlPath::new(vec![(r(0), vec![r(0)]), (rational(1, 2), vec![r(0)])], 0).is_err());
        assert!(PlPath::new(
            vec![(r(0), vec![r(0)]), (r(1), vec![r(0)]), (r(1), vec![r(0)])],
            0
        )
        .is_err());
        assert!(PlPath::new(vec![(r(0), vec![r(0)]), (r(1), vec![r(0), r(1)])], 0).is_err());
        let p = PlPath::new(
            vec![(r(0), vec![r(0)]), (rational(1, 4), vec![r(1)]), (r(1), vec![r(-2)])],
            0,
        )
        .unwrap();
        assert_eq!(p.lift_at(&rational(1, 8)), vec![rational(1, 2)]);
        assert_eq!(p.lift_at(&rational(1, 2)), vec![r(0)]);
    }

    #[test]
    fn identity_cocycle() {
        let e = extension("O2").unwrap();
        let c = PatchCocycle::identity(&e);
        assert!(validate(&e, &c).unwrap().passed());
        let inv = invert(&e, &c).unwrap();
        assert_eq!(inv.a12, c.a12);
        assert_eq!(clutch(&e, &c).unwrap().winding, Winding::Class(ints(&[0])));
    }

    #[test]
    fn broken_cocycle_reports_front() {
        let e = extension("O2").unwrap();
        let mut c = PatchCocycle::identity(&e);
        c.a12 = PlPath::linear(vec![rational(1, 3)], vec![rational(0, 1)], 0);
        let d = validate(&e, &c).unwrap();
        assert!(!d.passed());
        let locs: Vec<_> = d.failures().map(|f| (f.condition, f.location)).collect();
        assert_eq!(locs, vec![("cocycle", TriplePoint::Front)]);
        assert!(matches!(clutch(&e, &c), Err(Error::NonClosingLoop(_))));
    }

    #[test]
    fn non_commutative_cocycle_is_not_inverted() {
        let e = extension("O2").unwrap();
        // values τ, (1/4, 1) and their product at both ends
        let tau = PlPath::constant(vec![rational(0, 1)], 1);
        let s = PlPath::constant(vec![rational(1, 4)], 0);
        let c = PatchCocycle::new(&e, tau.clone(), product(&e, &tau, &s), s).unwrap();
        let d = validate(&e, &c).unwrap();
        assert!(d.failures().all(|f| f.condition != "cocycle"));
        assert!(!d.passed());
        assert!(matches!(invert(&e, &c), Err(Error::NonCommutativeCocycle(_))));
    }

    #[test]
    fn mixed_parent() {
        let a = extension("O2").unwrap();
        let b = extension("O2").unwrap();
        let c = PatchCocycle::identity(&a);
        assert_eq!(validate(&b, &c).unwrap_err(), Error::MixedParent);
    }

    #[test]
    fn o2_alpha_windings() {
        let e = extension("O2").unwrap();
        // full circle: the arc is t ↦ (t, 0)
        let full = build_alpha_cocycle(&e, 0, 1, &circle(&[1], &[0], rational(1, 1))).unwrap();
        assert!(validate(&e, &full).unwrap().passed());
        assert_eq!(clutch(&e, &full).unwrap().winding, Winding::Class(ints(&[0])));
        let inv = invert(&e, &full).unwrap();
        assert!(validate(&e, &inv).unwrap().passed());
        assert_eq!(clutch(&e, &inv).unwrap().winding, Winding::Class(ints(&[2])));
        // half arc: n·[φ] equals the degree-n class with n = 2
        let half = build_alpha_cocycle(&e, 0, 1, &circle(&[1], &[0], rational(1, 2))).unwrap();
        let w = clutch(&e, &invert(&e, &half).unwrap()).unwrap().winding;
        assert_eq!(w, Winding::Class(ints(&[1])));
        assert_eq!(clutch(&e, &half).unwrap().winding, Winding::Class(ints(&[0])));
        // a third of the circle does not commute at the endpoint
        assert!(matches!(
            build_alpha_cocycle(&e, 0, 1, &circle(&[1], &[0], rational(1, 3))),
            Err(Error::EndpointCommutation(_))
        ));
    }

    #[test]
    fn constant_alpha_is_trivial() {
        let e = extension("O2").unwrap();
        let c = build_alpha_cocycle(&e, 0, 1, &circle(&[0], &[0], rational(1, 1))).unwrap();
        assert_eq!(clutch(&e, &c).unwrap().winding, Winding::Class(ints(&[0])));
        let inv = invert(&e, &c).unwrap();
        assert_eq!(clutch(&e, &inv).unwrap().winding, Winding::Class(ints(&[0])));
    }

    #[test]
    fn diag2_alpha_windings() {
        let e = extension("diag2").unwrap();
        let c = build_alpha_cocycle(&e, 0, 1, &circle(&[1, 0], &[0, 0], rational(1, 1))).unwrap();
        assert!(validate(&e, &c).unwrap().passed());
        assert_eq!(clutch(&e, &c).unwrap().winding, Winding::Class(ints(&[0, 0])));
        let w = clutch(&e, &invert(&e, &c).unwrap()).unwrap().winding;
        assert_eq!(w, Winding::Class(ints(&[2, 0])));
    }

    #[test]
    fn reflection_label_leaves_identity_component() {
        let e = extension("O2").unwrap();
        let c = build_alpha_cocycle(&e, 1, 1, &circle(&[0], &[1], rational(1, 2))).unwrap();
        assert!(validate(&e, &c).unwrap().passed());
        let w = clutch(&e, &invert(&e, &c).unwrap()).unwrap().winding;
        assert!(matches!(w, Winding::NotIdentityComponent { .. }));
    }

    #[test]
    fn quotient_model_clutching() {
        // a² lies in the torus of N(T) ⊂ SU(2)
        let e = extension("NT_SU2").unwrap();
        let a2 = e.finite().element("a^2").unwrap();
        let c = build_alpha_cocycle(&e, 0, a2, &circle(&[1], &[0], rational(1, 1))).unwrap();
        assert!(validate(&e, &c).unwrap().passed());
        assert_eq!(clutch(&e, &c).unwrap().winding, Winding::Class(ints(&[0])));
        let c = build_alpha_cocycle(&e, 0, 1, &circle(&[1], &[0], rational(1, 1))).unwrap();
        let w = clutch(&e, &invert(&e, &c).unwrap()).unwrap().winding;
        assert_eq!(w, Winding::Class(ints(&[2])));
    }

    #[test]
    fn qx_examples() {
        let e = extension("O2").unwrap();
        let x = PlPath::linear(vec![rational(0, 1)], vec![rational(1, 1)], 0);
        let r = build_qx_cocycle(&e, 1, &x).unwrap();
        assert_eq!(r.affinely_commutative, [true, true]);
        assert!(validate(&e, &r.cocycle).unwrap().passed());
        assert_eq!(r.clutching.winding, Winding::Class(ints(&[-2])));
        let constant = PlPath::constant(vec![rational(0, 1)], 0);
        assert_eq!(
            build_qx_cocycle(&e, 1, &constant).unwrap().clutching.winding,
            Winding::Class(ints(&[0]))
        );
        let off = PlPath::constant(vec![rational(1, 2)], 0);
        assert_eq!(build_qx_cocycle(&e, 1, &off).unwrap_err(), Error::NotBasedLoop);
        let d = extension("diag2").unwrap();
        let x = PlPath::linear(vec![rational(0, 1); 2], vec![rational(1, 1), rational(0, 1)], 0);
        let w = build_qx_cocycle(&d, 1, &x).unwrap().clutching.winding;
        assert_eq!(w, Winding::Class(ints(&[-2, 0])));
    }

    /// A random based loop with 1–4 interior breakpoints.
    pub(crate) fn random_loop<R: Rng>(rng: &mut R, k: usize) -> PlPath {
        let interior = rng.gen_range(1..=4);
        let mut times: Vec<i64> = (0..interior).map(|_| rng.gen_range(1..24)).collect();
        times.sort_unstable();
        times.dedup();
        let mut pts = vec![(rational(0, 1), vec![rational(0, 1); k])];
        for t in times {
            let v = (0..k).map(|_| rational(rng.gen_range(-30..30), rng.gen_range(1..7))).collect();
            pts.push((rational(t, 24), v));
        }
        let end = (0..k).map(|_| rational(rng.gen_range(-3..=3), 1)).collect();
        pts.push((rational(1, 1), end));
        PlPath::new(pts, 0).unwrap()
    }

    #[test]
    fn qx_windings_lie_in_psi_images() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in EXTENSIONS {
            let e = extension(name).unwrap();
            for q in 0..e.finite().order() {
                let l = e.psi_star(q);
                for _ in 0..5 {
                    let x = random_loop(&mut rng, e.rank());
                    let r = build_qx_cocycle(&e, q, &x).unwrap();
                    let w = r.clutching.winding.class().unwrap().to_vec();
                    let expected: Vec<BigInt> =
                        l.mul_vec(&r.loop_class).unwrap().iter().map(|v| -v).collect();
                    assert_eq!(w, expected, "{name} q={q}");
                }
            }
        }
    }

    #[test]
    fn inversion_is_an_involution() {
        let e = extension("rot4").unwrap();
        let c = build_alpha_cocycle(&e, 0, 2, &circle(&[1, 0], &[0, 1], rational(1, 2))).unwrap();
        assert!(validate(&e, &c).unwrap().passed());
        let back = invert(&e, &invert(&e, &c).unwrap()).unwrap();
        for (a, b) in [(&c.a12, &back.a12), (&c.a13, &back.a13), (&c.a23, &back.a23)] {
            assert_eq!(a, b);
        }
        let w = clutch(&e, &invert(&e, &c).unwrap()).unwrap().winding;
        assert!(w.class().unwrap().iter().all(|v| v.abs() <= BigInt::from(2)));
    }
}
