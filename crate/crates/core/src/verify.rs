//! The acceptance criteria as library checks, shared by the `verify-all`
//! command and the acceptance test target.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::clutching::{build_alpha_cocycle, build_qx_cocycle, clutch, invert, validate, CircleArc, PlPath};
use crate::coset_poset::coset_poset_homology;
use crate::error::{Budget, Result};
use crate::group::catalog::{group, STANDARD_CORPUS};
use crate::group::{
    abelian_invariants, abelianization, check_pullback, realize_triple, CentralIdentification,
    FiniteGroup, Subgroup,
};
use crate::group_ring::{coinvariants, moore_h2, pi2_e2_connected};
use crate::lattice::{AbelianGroupInvariants, Lattice};
use crate::simplicial::{check_commutator_map, check_projection};
use crate::simplicial::{reduced_homology, Model};
use crate::torus::catalog::{extension, random_extension, EXTENSIONS};
use crate::torus::single_commutator_cover;
use crate::torus::{rational, Rational, TorusExtension};

pub const CRITERIA: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub provenance: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub time_limit: Option<Duration>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64()
        )
    }
}

#[derive(Default)]
struct Log {
    ok: bool,
    details: Vec<String>,
}

impl Log {
    fn new() -> Self {
        Log {
            ok: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        let what = what.into();
        if cond {
            self.details.push(format!("ok: {what}"));
        } else {
            self.ok = false;
            self.details.push(format!("FAILED: {what}"));
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, what: &str) {
        let line = format!("{what}: got {got:?}, expected {want:?}");
        self.check(got == want, line);
    }
}

const TITLES: [(&str, &str, Option<u64>); CRITERIA] = [
    ("coinvariants equal the abelianization", "coinvariants of the augmentation ideal", Some(30)),
    ("Moore complex H2 equals the coinvariants", "Moore complex H2", Some(60)),
    ("pi2 of E(2,G) for connected G", "pi2 for connected compact groups", None),
    ("E(2,G) agrees with the coset poset", "coset poset equivalence", Some(300)),
    ("abelian iff acyclic", "contractibility criterion", None),
    ("psi-lattice suite", "psi lattices of torus extensions", Some(30)),
    ("commutator expansion identity", "bracket expansion in torus extensions", None),
    ("psi_star coherence", "psi on the torus", None),
    ("cocycle suite", "commutative cocycles and clutching", Some(30)),
    ("central product pullback", "commuting tuples of central products", None),
    ("simpliciality of p and the commutator map", "simplicial maps", None),
    ("almost commuting realization", "almost commuting triples", None),
];

/// Runs criterion `id` (1-based).
pub fn run_criterion(id: usize, budget: &Budget) -> CriterionResult {
    let (title, provenance, limit) = TITLES[id - 1];
    let start = Instant::now();
    let mut log = Log::new();
    let outcome = match id {
        1 => coinvariants_match(&mut log, budget),
        2 => moore_complex(&mut log, budget),
        3 => pi2_connected(&mut log),
        4 => coset_oracle(&mut log, budget),
        5 => abelian_iff_acyclic(&mut log, budget),
        6 => psi_lattices(&mut log, budget),
        7 => commutator_expansion(&mut log),
        8 => psi_coherence(&mut log),
        9 => cocycle_suite(&mut log),
        10 => pullback(&mut log, budget),
        11 => simpliciality(&mut log, budget),
        12 => almost_commuting(&mut log, budget),
        _ => unreachable!("criteria are numbered 1..=12"),
    };
    if let Err(e) = outcome {
        log.check(false, format!("error: {e}"));
    }
    let elapsed = start.elapsed();
    let time_limit = limit.map(Duration::from_secs);
    if let Some(l) = time_limit {
        log.check(elapsed < l, format!("runtime under {}s", l.as_secs()));
    }
    CriterionResult {
        id,
        title,
        provenance,
        passed: log.ok,
        details: log.details,
        elapsed,
        time_limit,
    }
}

pub fn run_all(budget: &Budget) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|i| run_criterion(i, budget)).collect()
}

fn corpus(max_order: usize) -> Result<Vec<(&'static str, FiniteGroup)>> {
    let mut out = Vec::new();
    for name in STANDARD_CORPUS {
        let g = group(name)?;
        if g.order() <= max_order {
            out.push((*name, g));
        }
    }
    Ok(out)
}

fn show(h: &[AbelianGroupInvariants]) -> String {
    h.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn coinvariants_match(log: &mut Log, budget: &Budget) -> Result<()> {
    let groups = corpus(24)?;
    budget.check_count(groups.len() as u64)?;
    log.check(groups.len() >= 15, format!("{} groups of order <= 24", groups.len()));
    for (name, g) in &groups {
        let want = AbelianGroupInvariants::finite(&abelianization(g));
        log.eq(coinvariants(g)?.to_string(), want.to_string(), name);
    }
    Ok(())
}

fn moore_complex(log: &mut Log, _budget: &Budget) -> Result<()> {
    for (name, g) in corpus(16)? {
        let h2 = moore_h2(&g)?;
        if let Some(inv) = abelian_invariants(&g) {
            let a = AbelianGroupInvariants::finite(&inv);
            log.eq(h2.to_string(), a.to_string(), &format!("{name} (abelian) H2 = A"));
        }
        log.eq(h2.to_string(), coinvariants(&g)?.to_string(), &format!("{name} H2 = coinvariants"));
    }
    Ok(())
}

fn pi2_connected(log: &mut Log) -> Result<()> {
    let mut case = |factors: &[u64], what: &str| -> Result<()> {
        let got = pi2_e2_connected(factors)?.to_string();
        log.eq(got, AbelianGroupInvariants::finite(factors).to_string(), what);
        Ok(())
    };
    case(&[2], "pi1 = Z/2")?;
    for n in 2..=6u64 {
        case(&[n], &format!("pi1 = Z/{n}"))?;
    }
    case(&[2, 2], "pi1 = Z/2 x Z/2")?;
    Ok(())
}

fn coset_oracle(log: &mut Log, budget: &Budget) -> Result<()> {
    for name in ["S3", "D8", "Q8", "Z6", "Z2xZ2"] {
        let g = group(name)?;
        let e = reduced_homology(&g, Model::Homogeneous, 2, budget)?;
        let p = coset_poset_homology(&g, 2, budget)?;
        if name == "S3" {
            log.eq(e[1].to_string(), "Z^8".to_string(), "S3 simplicial H1");
            log.eq(p[1].to_string(), "Z^8".to_string(), "S3 coset poset H1");
        }
        log.eq(show(&e), show(&p), name);
    }
    Ok(())
}

fn abelian_iff_acyclic(log: &mut Log, budget: &Budget) -> Result<()> {
    for (name, g) in corpus(16)? {
        let e = reduced_homology(&g, Model::Homogeneous, 2, budget)?;
        let p = coset_poset_homology(&g, 2, budget)?;
        let (ea, pa) = (
            e.iter().all(AbelianGroupInvariants::is_trivial),
            p.iter().all(AbelianGroupInvariants::is_trivial),
        );
        log.check(
            ea == g.is_abelian() && pa == g.is_abelian(),
            format!(
                "{name} ({}): E [{}], coset poset [{}]",
                if g.is_abelian() { "abelian" } else { "nonabelian" },
                show(&e),
                show(&p)
            ),
        );
    }
    Ok(())
}

fn psi_lattices(log: &mut Log, budget: &Budget) -> Result<()> {
    let o2 = extension("O2")?;
    let tau = o2.finite().element("a").expect("generator");
    log.eq(o2.psi_star(tau).to_rows(), vec![vec![BigInt::from(2)]], "O2 psi_star(reflection)");
    let l = o2.commutator_lattices();
    log.eq(l.sum.to_string(), "2Z".to_string(), "O2 sum");
    log.eq(l.subtorus.to_string(), "Z".to_string(), "O2 subtorus");
    let nt = extension("NT_SU2")?;
    let l = nt.commutator_lattices();
    log.check(l.subtorus.same_as(&Lattice::full(1)), format!("NT_SU2 subtorus = {}", l.subtorus));
    let cover = single_commutator_cover(&nt, 12, None, budget)?;
    log.check(
        cover.covered(),
        format!("NT_SU2 single commutator cover at N = 12 ({} targets)", cover.targets),
    );
    Ok(())
}

fn random_point<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    (0..k).map(|_| rational(rng.gen_range(0..60), rng.gen_range(1..=12))).collect()
}

fn commutator_expansion(log: &mut Log) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..12 {
        let ext = random_extension(&mut rng, 3, 8)?;
        let n = ext.finite().order();
        let mut bad = 0;
        for _ in 0..1000 {
            let (p, q) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let s = random_point(&mut rng, ext.rank());
            let t = random_point(&mut rng, ext.rank());
            let (lhs, rhs) = ext.commutator_expansion(p, q, &s, &t)?;
            if lhs != rhs {
                bad += 1;
            }
        }
        log.check(
            bad == 0,
            format!("extension {i} ({}, rank {}, |F| = {n}): {bad} of 1000 samples differ", ext.name(), ext.rank()),
        );
    }
    Ok(())
}

/// All points of `(1/d)ℤ^k / ℤ^k`.
fn grid(k: usize, d: i64) -> Vec<Vec<Rational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..d).map(move |i| {
                    let mut p = p.clone();
                    p.push(rational(i, d));
                    p
                })
            })
            .collect();
    }
    out
}

fn psi_coherence(log: &mut Log) -> Result<()> {
    for name in EXTENSIONS {
        let ext = extension(name)?;
        let points = grid(ext.rank(), 12);
        let mut bad = 0usize;
        for q in 0..ext.finite().order() {
            let m = ext.psi_star(q);
            for t in &points {
                let bracket = ext.commutator(&ext.lift(q), &ext.torus(t.clone())?)?;
                let image: Vec<Rational> = m
                    .to_rows()
                    .iter()
                    .map(|row| row.iter().zip(t).map(|(a, x)| Rational::from_integer(a.clone()) * x).sum())
                    .collect();
                if bracket != ext.torus(image)? {
                    bad += 1;
                }
            }
        }
        log.check(bad == 0, format!("{name}: {} points x {} elements, {bad} mismatches", points.len(), ext.finite().order()));
    }
    Ok(())
}

/// Random loop in the torus based at the identity.
pub fn random_based_loop<R: Rng>(rng: &mut R, k: usize) -> PlPath {
    let mut times: Vec<i64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..24)).collect();
    times.sort_unstable();
    times.dedup();
    let mut pts = vec![(rational(0, 1), vec![rational(0, 1); k])];
    for t in times {
        pts.push((rational(t, 24), (0..k).map(|_| rational(rng.gen_range(-20..20), rng.gen_range(1..6))).collect()));
    }
    pts.push((rational(1, 1), (0..k).map(|_| rational(rng.gen_range(-3..=3), 1)).collect()));
    PlPath::new(pts, 0).expect("valid breakpoints")
}

fn alpha_windings(log: &mut Log, ext: &TorusExtension) -> Result<()> {
    let tau = ext.finite().element("a").expect("generator");
    let circle = CircleArc {
        x_direction: vec![1],
        y_direction: vec![0],
        endpoint: rational(1, 1),
    };
    let alpha = build_alpha_cocycle(ext, 0, tau, &circle)?;
    log.check(validate(ext, &alpha)?.passed(), "O2 alpha validates");
    let w = clutch(ext, &alpha)?.winding;
    log.eq(w.class().map(<[BigInt]>::to_vec), Some(vec![BigInt::from(0)]), "winding of alpha");
    let inv = invert(ext, &alpha)?;
    log.check(validate(ext, &inv)?.passed(), "O2 inverse validates");
    let w = clutch(ext, &inv)?.winding;
    let abs = w.class().map(|v| v.iter().map(|x| x.magnitude().clone()).collect::<Vec<_>>());
    log.eq(abs, Some(vec![2u32.into()]), "|winding of alpha inverse|");
    Ok(())
}

fn cocycle_suite(log: &mut Log) -> Result<()> {
    alpha_windings(log, &extension("O2")?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in EXTENSIONS {
        let ext = extension(name)?;
        let images: Vec<Lattice> = (0..ext.finite().order())
            .map(|q| Lattice::image_of(&ext.psi_star(q)))
            .collect();
        let mut bad = 0;
        for _ in 0..20 {
            let x = random_based_loop(&mut rng, ext.rank());
            for (q, image) in images.iter().enumerate() {
                let r = build_qx_cocycle(&ext, q, &x)?;
                match r.clutching.winding.class() {
                    Some(w) if image.contains_vector(w) => {}
                    _ => bad += 1,
                }
            }
        }
        log.check(bad == 0, format!("{name}: qx windings in im psi_star, {bad} failures"));
    }
    Ok(())
}

fn pullback(log: &mut Log, budget: &Budget) -> Result<()> {
    let cases = [
        ("Z4", "Z4", vec![0, 2], vec![0, 2]),
        ("Z2", "Q8", vec![0, 1], vec![0, 1]),
        ("Z4", "Q8", vec![0, 2], vec![0, 1]),
        ("Z4", "D8", vec![0, 2], vec![0, 2]),
    ];
    for (h, k, in_h, in_k) in cases {
        let (hg, kg) = (group(h)?, group(k)?);
        let z = CentralIdentification { in_h, in_k };
        for n in 0..=3 {
            let r = check_pullback(&hg, &kg, &z, n, budget)?;
            log.check(
                r.holds(),
                format!("({h}, {k}, Z/2) n = {n}: {} tuples onto {} with uniform fibers", r.source, r.target),
            );
        }
    }
    Ok(())
}

fn simpliciality(log: &mut Log, budget: &Budget) -> Result<()> {
    for (name, g) in corpus(12)? {
        let p = check_projection(&g, 3, budget)?;
        let c = check_commutator_map(&g, 3, budget)?;
        log.check(
            c.triple_identities > 0 && p.simplices == c.simplices,
            format!(
                "{name}: {} simplices, {} face and {} degeneracy checks each, {} triples",
                p.simplices, p.face_checks, p.degeneracy_checks, c.triple_identities
            ),
        );
    }
    Ok(())
}

fn almost_commuting(log: &mut Log, budget: &Budget) -> Result<()> {
    let q8 = group("Q8")?;
    let minus = q8.element("-1").expect("-1");
    let k = Subgroup::from_elements(&q8, &[0, minus])?;
    for c1 in [0, minus] {
        for c2 in [0, minus] {
            let found = realize_triple(&q8, &k, c1, c2, budget)?;
            let ok = found.as_ref().is_some_and(|t| {
                let (a, b, c) = (t.0[0], t.0[1], t.0[2]);
                q8.commutator(a, b) == 0 && q8.commutator(b, c) == c1 && q8.commutator(a, c) == c2
            });
            log.check(
                ok,
                format!(
                    "c1 = {}, c2 = {}: {}",
                    q8.name(c1),
                    q8.name(c2),
                    found.map_or("none".to_string(), |t| t.display(&q8))
                ),
            );
        }
    }
    Ok(())
}
