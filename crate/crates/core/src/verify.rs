//! Executable checkers for the structural results on superspecial curves.
//!
//! Every checker returns a [`TheoremReport`]. A failure carries the check
//! kind, the prime and the field elements that break the predicate, so it can
//! be replayed with [`Counterexample::replay`] independently of the scan that
//! found it.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::curves::{
    cartier_manin, count_points, even_polynomial, is_superspecial, maximal_count, minimal_count, CartierManinMatrix,
    Extremality, HyperellipticCurve, LegendreCurve, PointCounter,
};
use crate::enumerate::{
    brute_force_census, glue_parameters_checked, square_pair_set, supersingular_legendre_params, superspecial_triples,
    CurveCensus,
};
use crate::error::{Error, Result};
use crate::ff::{Fp2Context, Fp2Element};
use crate::poly::Polynomial;
use crate::richelot::{delta, diagnostics, is_decomposed_compatible, richelot_codomain, splittings, RichelotResult};
use crate::rosenhain::{five_products, nine_differences, orbit_120, RosenhainTriple};

/// Which statement a report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// Nine differences are squares and five products are fourth powers for
    /// every Rosenhain form of a superspecial curve.
    RosenhainSquares,
    /// Superspecial Rosenhain forms are maximal for p = 3 mod 4 and minimal
    /// for p = 1 mod 4.
    ExtremalCount,
    /// No superspecial genus-2 curve exists in characteristic 3.
    P3Nonexistence,
    /// Superspecial y^2 = (x^2-1)(x^2-a)(x^2-b)(x^2-c).
    Genus3,
    /// Superspecial y^2 = (x^2-1)(x^2-a)(x^2-b)(x^2-c)(x^2-d).
    Genus4,
    /// Products D_i D_j of the splitting diagnostics are fourth powers.
    DifferenceProducts,
    /// Extremality of glued curves is decided by the square class of 1 - a.
    GluedExtremality,
    /// Richelot codomains stay superspecial with the same point count.
    RichelotClosure,
    /// y^2 = x^5 - 1 is superspecial iff p = 4 mod 5.
    QuinticCriterion,
    /// Cartier-Manin and point-count supersingularity agree on Legendre curves.
    LegendreCrossCheck,
}

impl Theorem {
    pub const ALL: [Theorem; 10] = [
        Theorem::RosenhainSquares,
        Theorem::ExtremalCount,
        Theorem::P3Nonexistence,
        Theorem::Genus3,
        Theorem::Genus4,
        Theorem::DifferenceProducts,
        Theorem::GluedExtremality,
        Theorem::RichelotClosure,
        Theorem::QuinticCriterion,
        Theorem::LegendreCrossCheck,
    ];

    /// Short selector used on the command line.
    pub fn selector(&self) -> &'static str {
        match self {
            Theorem::RosenhainSquares => "squares",
            Theorem::ExtremalCount => "extremal",
            Theorem::P3Nonexistence => "p3",
            Theorem::Genus3 => "genus3",
            Theorem::Genus4 => "genus4",
            Theorem::DifferenceProducts => "diff-products",
            Theorem::GluedExtremality => "glued",
            Theorem::RichelotClosure => "richelot",
            Theorem::QuinticCriterion => "quintic",
            Theorem::LegendreCrossCheck => "legendre",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.selector())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.selector() == s.trim())
            .ok_or_else(|| Error::Parse(s.to_string()))
    }
}

/// A single predicate, evaluated on a prime and a list of field elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// params: lambda, mu, nu.
    NineSquares,
    /// params: lambda, mu, nu.
    FiveFourthPowers,
    /// params: lambda, mu, nu.
    ExtremalCount,
    /// The square-pair set of F_9 is {2}.
    SquarePairSet,
    /// The brute-force census is empty.
    EmptyCensus,
    /// Fewer than three candidates remain, so no valid triple exists.
    NoDistinctTriple,
    /// params: a, b, c.
    Genus3,
    /// params: a, b, c, d.
    Genus4,
    /// params: a1..a5.
    DifferenceProducts,
    /// params: a, b.
    GluedExtremality,
    /// params: lambda, mu, nu; index: splitting.
    RichelotClosure,
    QuinticCriterion,
    /// params: t.
    LegendreCrossCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: Check,
    pub p: u64,
    pub params: Vec<Fp2Element>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub detail: String,
}

impl Counterexample {
    /// Re-evaluates the predicate; true when it still fails.
    pub fn replay(&self) -> Result<bool> {
        let ctx = Fp2Context::new(self.p)?;
        Ok(evaluate(self.check, &ctx, &self.params, self.index)?.is_failure())
    }
}

fn serialize_ms<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub p: u64,
    /// Instances the statement applied to (for conditional statements, the
    /// superspecial ones).
    pub checked: u64,
    /// Instances examined in total.
    pub scanned: u64,
    pub failures: Vec<Counterexample>,
    #[serde(rename = "elapsed_ms", serialize_with = "serialize_ms")]
    pub elapsed: Duration,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Maximal for p = 3 mod 4, minimal for p = 1 mod 4.
pub fn expected_extremality(p: u64) -> Extremality {
    if p % 4 == 3 {
        Extremality::Maximal
    } else {
        Extremality::Minimal
    }
}

fn expected_count(p: u64, genus: usize) -> u64 {
    match expected_extremality(p) {
        Extremality::Maximal => maximal_count(p, genus),
        _ => minimal_count(p, genus) as u64,
    }
}

fn kind_of(p: u64, genus: usize, n: u64) -> Extremality {
    if n == maximal_count(p, genus) {
        Extremality::Maximal
    } else if n as i64 == minimal_count(p, genus) {
        Extremality::Minimal
    } else {
        Extremality::Neither
    }
}

fn arity(params: &[Fp2Element], n: usize) -> Result<()> {
    if params.len() == n {
        Ok(())
    } else {
        Err(Error::Parse(format!("expected {n} parameters, got {}", params.len())))
    }
}

fn triple(params: &[Fp2Element]) -> Result<RosenhainTriple> {
    arity(params, 3)?;
    RosenhainTriple::new(params[0], params[1], params[2])
}

fn even_model(ctx: &Fp2Context, params: &[Fp2Element]) -> Result<Polynomial> {
    let f = even_polynomial(*ctx, params);
    if !f.is_squarefree() {
        return Err(Error::SingularConfiguration);
    }
    Ok(f)
}

fn list(xs: &[Fp2Element]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Result of one predicate on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The hypothesis does not hold (e.g. the curve is not superspecial).
    Vacuous,
    Holds,
    Fails(String),
}

impl Outcome {
    pub fn is_failure(&self) -> bool {
        matches!(self, Outcome::Fails(_))
    }
}

pub fn evaluate(check: Check, ctx: &Fp2Context, params: &[Fp2Element], index: Option<usize>) -> Result<Outcome> {
    let p = ctx.p();
    let fail = |cond: bool, msg: String| if cond { Outcome::Holds } else { Outcome::Fails(msg) };
    Ok(match check {
        Check::NineSquares => {
            let t = triple(params)?;
            let bad: Vec<Fp2Element> = nine_differences(&t).into_iter().filter(|x| !x.is_square()).collect();
            fail(bad.is_empty(), format!("non-squares: {}", list(&bad)))
        }
        Check::FiveFourthPowers => {
            let t = triple(params)?;
            let bad: Vec<Fp2Element> = five_products(&t).into_iter().filter(|x| !x.is_fourth_power()).collect();
            fail(bad.is_empty(), format!("not fourth powers: {}", list(&bad)))
        }
        Check::ExtremalCount => {
            let t = triple(params)?;
            let n = count_points(&t.curve());
            let want = expected_count(p, 2);
            fail(n == want, format!("point count {n}, expected {want}"))
        }
        Check::SquarePairSet => {
            let s = square_pair_set(ctx);
            fail(s == vec![ctx.from_i64(2)], format!("square-pair set {{{}}}", list(&s)))
        }
        Check::EmptyCensus => {
            let n = brute_force_census(p)?.len();
            fail(n == 0, format!("{n} superspecial curves"))
        }
        Check::NoDistinctTriple => {
            let n = square_pair_set(ctx).len();
            fail(n < 3, format!("{n} candidates"))
        }
        Check::Genus3 => {
            arity(params, 3)?;
            let f = even_model(ctx, params)?;
            if !CartierManinMatrix::from_rhs(&f, 3).is_zero() {
                return Ok(Outcome::Vacuous);
            }
            let bad: Vec<Fp2Element> = params.iter().copied().filter(|x| !x.is_square()).collect();
            let n = PointCounter::new(*ctx).count_rhs(&f);
            let want = expected_count(p, 3);
            if !bad.is_empty() {
                Outcome::Fails(format!("non-squares: {}", list(&bad)))
            } else {
                fail(n == want, format!("point count {n}, expected {want}"))
            }
        }
        Check::Genus4 => {
            arity(params, 4)?;
            let f = even_model(ctx, params)?;
            if !CartierManinMatrix::from_rhs(&f, 4).is_zero() {
                return Ok(Outcome::Vacuous);
            }
            let one = ctx.one();
            let bad: Vec<Fp2Element> = params.iter().copied().filter(|x| !x.is_square()).collect();
            let classes: Vec<bool> = params.iter().map(|&a| (one - a).is_square()).collect();
            let n = PointCounter::new(*ctx).count_rhs(&f);
            let kind = kind_of(p, 4, n);
            let want = match (p % 4 == 3, classes[0]) {
                (true, true) | (false, false) => Extremality::Maximal,
                _ => Extremality::Minimal,
            };
            if !bad.is_empty() {
                Outcome::Fails(format!("non-squares: {}", list(&bad)))
            } else if classes.iter().any(|&c| c != classes[0]) {
                Outcome::Fails(format!("1 - x square classes differ: {classes:?}"))
            } else {
                fail(kind == want, format!("point count {n} ({kind}), expected {want}"))
            }
        }
        Check::DifferenceProducts => {
            arity(params, 5)?;
            let a: [Fp2Element; 5] = params.try_into().expect("arity");
            let d = diagnostics(a);
            let mut problems = Vec::new();
            for (name, v) in [("D1D2", d.d1 * d.d2), ("D2D3", d.d2 * d.d3), ("D3D1", d.d3 * d.d1)] {
                if !v.is_fourth_power() {
                    problems.push(format!("{name} = {v} is not a fourth power"));
                }
                match v.sqrt() {
                    Some(r) if r.is_square() => {}
                    Some(r) => problems.push(format!("sqrt({name}) = {r} is not a square")),
                    None => problems.push(format!("{name} = {v} is not a square")),
                }
            }
            fail(problems.is_empty(), problems.join("; "))
        }
        Check::GluedExtremality => {
            arity(params, 2)?;
            let f = even_model(ctx, params)?;
            if !CartierManinMatrix::from_rhs(&f, 2).is_zero() {
                return Ok(Outcome::Vacuous);
            }
            let n = PointCounter::new(*ctx).count_rhs(&f);
            let kind = kind_of(p, 2, n);
            let one = ctx.one();
            let mut problems = Vec::new();
            for &a in params {
                let square = (one - a).is_square();
                let want = match (p % 4 == 3, square) {
                    (true, true) | (false, false) => Extremality::Maximal,
                    _ => Extremality::Minimal,
                };
                if kind != want {
                    problems.push(format!(
                        "1 - {a} square = {square}: expected {want}, point count {n} ({kind})"
                    ));
                }
            }
            fail(problems.is_empty(), problems.join("; "))
        }
        Check::RichelotClosure => {
            let t = triple(params)?;
            let curve = t.curve();
            let all = splittings(&curve)?;
            let i = index.ok_or_else(|| Error::Parse("missing splitting index".into()))?;
            let s = all.get(i).ok_or_else(|| Error::Parse(format!("splitting index {i}")))?;
            match richelot_codomain(s)? {
                RichelotResult::SplitProduct => {
                    let compatible = is_decomposed_compatible(s);
                    let orbit = orbit_120(&t).len();
                    fail(
                        compatible && orbit < 120,
                        format!("delta = 0 but involution found = {compatible}, orbit size {orbit}"),
                    )
                }
                RichelotResult::Genus2 { curve: cod, .. } => {
                    let counter = PointCounter::new(*ctx);
                    let (n, m) = (counter.count(&curve), counter.count(&cod));
                    let ss = is_superspecial(&cod);
                    fail(
                        ss && n == m && !delta(s).is_zero(),
                        format!("codomain superspecial = {ss}, point counts {n} -> {m}"),
                    )
                }
            }
        }
        Check::QuinticCriterion => {
            let f = Polynomial::from_i64s(*ctx, &[-1, 0, 0, 0, 0, 1]);
            let ss = is_superspecial(&HyperellipticCurve::from_poly(ctx.one(), f)?);
            fail(ss == (p % 5 == 4), format!("superspecial = {ss}, p mod 5 = {}", p % 5))
        }
        Check::LegendreCrossCheck => {
            arity(params, 1)?;
            let e = LegendreCurve::new(params[0])?;
            let curve = e.as_curve();
            let by_matrix = cartier_manin(&curve).is_zero();
            let by_hasse = e.is_supersingular();
            let n = count_points(&curve) as i64;
            let trace = (p * p + 1) as i64 - n;
            let by_count = trace.rem_euclid(p as i64) == 0;
            fail(
                by_matrix == by_count && by_matrix == by_hasse,
                format!("Cartier-Manin {by_matrix}, Hasse {by_hasse}, trace {trace}"),
            )
        }
    })
}

struct Instance {
    params: Vec<Fp2Element>,
    index: Option<usize>,
}

impl Instance {
    fn of(params: Vec<Fp2Element>) -> Self {
        Self { params, index: None }
    }
}

#[derive(Default)]
struct Tally {
    scanned: u64,
    applicable: u64,
    failures: Vec<Counterexample>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.scanned += other.scanned;
        self.applicable += other.applicable;
        self.failures.extend(other.failures);
        self
    }
}

/// Evaluates the checks on every instance in parallel; failures keep the
/// instance order. An instance is applicable when some check is not vacuous.
fn run<I>(ctx: &Fp2Context, checks: &[Check], instances: I) -> Result<Tally>
where
    I: ParallelIterator<Item = Instance>,
{
    let p = ctx.p();
    instances
        .map(|inst| -> Result<Tally> {
            let mut tally = Tally {
                scanned: 1,
                ..Tally::default()
            };
            let mut applicable = false;
            for &check in checks {
                match evaluate(check, ctx, &inst.params, inst.index)? {
                    Outcome::Vacuous => {}
                    Outcome::Holds => applicable = true,
                    Outcome::Fails(detail) => {
                        applicable = true;
                        tally.failures.push(Counterexample {
                            check,
                            p,
                            params: inst.params.clone(),
                            index: inst.index,
                            detail,
                        });
                    }
                }
            }
            tally.applicable = applicable as u64;
            Ok(tally)
        })
        .try_fold(Tally::default, |acc, t| t.map(|t| acc.merge(t)))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

fn report(theorem: Theorem, p: u64, tally: Tally, start: Instant) -> TheoremReport {
    TheoremReport {
        theorem,
        p,
        checked: tally.applicable,
        scanned: tally.scanned,
        failures: tally.failures,
        elapsed: start.elapsed(),
    }
}

fn all_forms(triples: &[RosenhainTriple]) -> Vec<Instance> {
    triples
        .iter()
        .flat_map(orbit_120)
        .map(|t| Instance::of(t.values().to_vec()))
        .collect()
}

/// Nine squares and five fourth powers on every Rosenhain form of the given
/// triples.
pub fn check_rosenhain_squares_on(ctx: &Fp2Context, triples: &[RosenhainTriple]) -> Result<TheoremReport> {
    let start = Instant::now();
    let tally = run(
        ctx,
        &[Check::NineSquares, Check::FiveFourthPowers],
        all_forms(triples).into_par_iter(),
    )?;
    Ok(report(Theorem::RosenhainSquares, ctx.p(), tally, start))
}

pub fn check_rosenhain_squares(census: &CurveCensus) -> Result<TheoremReport> {
    let triples: Vec<RosenhainTriple> = census.entries().iter().map(|e| e.triple).collect();
    check_rosenhain_squares_on(&census.ctx(), &triples)
}

/// Same predicates on every superspecial triple of an exhaustive, unpruned
/// scan (pruning would assume part of the statement).
pub fn check_rosenhain_squares_by_scan(p: u64) -> Result<TheoremReport> {
    let start = Instant::now();
    let ctx = Fp2Context::new(p)?;
    let found = superspecial_triples(&ctx, false);
    let mut r = check_rosenhain_squares_on(&ctx, &found)?;
    r.elapsed = start.elapsed();
    Ok(r)
}

/// Point count of every Rosenhain form of every census entry.
pub fn check_extremal_count(census: &CurveCensus) -> Result<TheoremReport> {
    let start = Instant::now();
    let ctx = census.ctx();
    let triples: Vec<RosenhainTriple> = census.entries().iter().map(|e| e.triple).collect();
    let tally = run(&ctx, &[Check::ExtremalCount], all_forms(&triples).into_par_iter())?;
    Ok(report(Theorem::ExtremalCount, ctx.p(), tally, start))
}

pub fn check_p3_nonexistence() -> Result<TheoremReport> {
    let start = Instant::now();
    let ctx = Fp2Context::new(3)?;
    let checks = [Check::SquarePairSet, Check::NoDistinctTriple, Check::EmptyCensus];
    let instances = checks.map(|_| Instance::of(Vec::new()));
    let tally = checks
        .iter()
        .zip(instances)
        .map(|(&check, inst)| run(&ctx, &[check], vec![inst].into_par_iter()))
        .try_fold(Tally::default(), |acc, t| t.map(|t| acc.merge(t)))?;
    Ok(report(Theorem::P3Nonexistence, 3, tally, start))
}

/// How the parameter space of the genus-3 and genus-4 families is covered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    /// Every unordered parameter set.
    Full,
    /// Uniformly drawn parameter sets from a seeded generator.
    Sampled { budget: u64, seed: u64 },
    /// Only parameter sets whose genus-2 quotient is superspecial, taken from
    /// every Rosenhain form of the genus-2 census. This is
    /// complete for the superspecial instances: y^2 = x(x-1)(x-a)(x-b)(x-c)
    /// is a quotient of the genus-3 curve, and
    /// y^2 = (x-1)(x-a)(x-b)(x-c)(x-d) of the genus-4 curve, and quotients of
    /// superspecial curves are superspecial.
    Targeted,
}

pub const DEFAULT_SAMPLE_SEED: u64 = 0x5eed;
pub const DEFAULT_GENUS3_BUDGET: u64 = 200_000;
pub const DEFAULT_GENUS4_BUDGET: u64 = 50_000;

/// Full scan for p <= 13, sampled beyond.
pub fn default_genus3_mode(p: u64) -> ScanMode {
    if p <= 13 {
        ScanMode::Full
    } else {
        ScanMode::Sampled {
            budget: DEFAULT_GENUS3_BUDGET,
            seed: DEFAULT_SAMPLE_SEED,
        }
    }
}

/// Full scan for p <= 7, sampled beyond.
pub fn default_genus4_mode(p: u64) -> ScanMode {
    if p <= 7 {
        ScanMode::Full
    } else {
        ScanMode::Sampled {
            budget: DEFAULT_GENUS4_BUDGET,
            seed: DEFAULT_SAMPLE_SEED,
        }
    }
}

fn candidates(ctx: &Fp2Context) -> Vec<Fp2Element> {
    ctx.elements().filter(|x| !x.is_zero() && !x.is_one()).collect()
}

/// Increasing k-tuples of indices below n whose first index is `first`, in
/// lexicographic order.
fn subsets_from(first: usize, n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut idx: Vec<usize> = (first..first + k).collect();
    let mut done = k == 0 || first + k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = idx.clone();
        // advance positions 1..k, keeping idx[0] fixed
        let mut i = k;
        while i > 1 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i <= 1 {
            done = true;
        } else {
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
        Some(out)
    })
}

fn dedup_sets(mut sets: Vec<Vec<Fp2Element>>) -> Vec<Vec<Fp2Element>> {
    for s in sets.iter_mut() {
        s.sort();
    }
    sets.retain(|s| s.windows(2).all(|w| w[0] != w[1]) && s.iter().all(|x| !x.is_zero() && !x.is_one()));
    sets.sort();
    sets.dedup();
    sets
}

/// Parameter sets whose genus-2 quotient is superspecial.
fn targeted_sets(ctx: &Fp2Context, genus: usize) -> Result<Vec<Vec<Fp2Element>>> {
    let triples: Vec<RosenhainTriple> = crate::enumerate::census(ctx.p())?
        .entries()
        .iter()
        .flat_map(|e| orbit_120(&e.triple))
        .collect();
    let one = ctx.one();
    let sets = match genus {
        3 => triples.iter().map(|t| t.values().to_vec()).collect(),
        _ => candidates(ctx)
            .into_par_iter()
            .flat_map_iter(|a| {
                let s = a - one;
                triples.iter().map(move |t| {
                    let mut v = vec![a];
                    v.extend(t.values().iter().map(|&x| one + x * s));
                    v
                })
            })
            .collect(),
    };
    Ok(dedup_sets(sets))
}

fn check_even_family(p: u64, genus: usize, mode: ScanMode) -> Result<TheoremReport> {
    let start = Instant::now();
    let ctx = Fp2Context::new(p)?;
    let (theorem, check) = match genus {
        3 => (Theorem::Genus3, Check::Genus3),
        4 => (Theorem::Genus4, Check::Genus4),
        g => return Err(Error::UnsupportedGenus(g)),
    };
    let c = candidates(&ctx);
    let tally = match mode {
        ScanMode::Full => {
            let n = c.len();
            let c = &c;
            run(
                &ctx,
                &[check],
                (0..n).into_par_iter().flat_map_iter(move |i| {
                    subsets_from(i, n, genus).map(move |idx| Instance::of(idx.into_iter().map(|j| c[j]).collect()))
                }),
            )?
        }
        ScanMode::Sampled { budget, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
            let mut sets = Vec::with_capacity(budget as usize);
            while (sets.len() as u64) < budget {
                let mut v: Vec<Fp2Element> = (0..genus).map(|_| c[rng.gen_range(0..c.len())]).collect();
                v.sort();
                if v.windows(2).all(|w| w[0] != w[1]) {
                    sets.push(Instance::of(v));
                }
            }
            run(&ctx, &[check], sets.into_par_iter())?
        }
        ScanMode::Targeted => {
            let sets = targeted_sets(&ctx, genus)?;
            run(&ctx, &[check], sets.into_par_iter().map(Instance::of))?
        }
    };
    Ok(report(theorem, p, tally, start))
}

/// Superspecial y^2 = (x^2-1)(x^2-a)(x^2-b)(x^2-c): a, b, c are squares and
/// the point count is p^2 + 1 +- 6p by p mod 4.
pub fn check_genus3(p: u64, mode: ScanMode) -> Result<TheoremReport> {
    check_even_family(p, 3, mode)
}

/// Superspecial y^2 = (x^2-1)(x^2-a)...(x^2-d): a..d are squares, the
/// 1 - a..1 - d share one square class, and that class with p mod 4 decides
/// maximal versus minimal.
pub fn check_genus4(p: u64, mode: ScanMode) -> Result<TheoremReport> {
    check_even_family(p, 4, mode)
}

/// D1D2, D2D3, D3D1 on every arrangement (a1..a5) of the finite Weierstrass
/// points of every Rosenhain form of the given triples.
pub fn check_difference_products_on(ctx: &Fp2Context, triples: &[RosenhainTriple]) -> Result<TheoremReport> {
    let start = Instant::now();
    let mut instances = Vec::new();
    for t in triples.iter().flat_map(orbit_120) {
        let pts = [ctx.zero(), ctx.one(), t.lambda, t.mu, t.nu];
        for perm in permutations5() {
            instances.push(Instance::of(perm.iter().map(|&i| pts[i]).collect()));
        }
    }
    let tally = run(ctx, &[Check::DifferenceProducts], instances.into_par_iter())?;
    Ok(report(Theorem::DifferenceProducts, ctx.p(), tally, start))
}

pub fn check_difference_products(census: &CurveCensus) -> Result<TheoremReport> {
    let triples: Vec<RosenhainTriple> = census.entries().iter().map(|e| e.triple).collect();
    check_difference_products_on(&census.ctx(), &triples)
}

fn permutations5() -> Vec<[usize; 5]> {
    let mut out = Vec::with_capacity(120);
    for a in 0..5 {
        for b in (0..5).filter(|&b| b != a) {
            for c in (0..5).filter(|&c| c != a && c != b) {
                for d in (0..5).filter(|&d| d != a && d != b && d != c) {
                    let e = 10 - a - b - c - d;
                    out.push([a, b, c, d, e]);
                }
            }
        }
    }
    out
}

/// Every glued curve y^2 = (x^2-1)(x^2-a)(x^2-b) built from an ordered pair
/// of supersingular Legendre parameters.
pub fn check_glued_extremality(p: u64) -> Result<TheoremReport> {
    let start = Instant::now();
    let ctx = Fp2Context::new(p)?;
    let params = supersingular_legendre_params(&ctx);
    let instances: Vec<Instance> = params
        .iter()
        .flat_map(|&t1| params.iter().map(move |&t2| (t1, t2)))
        .filter_map(|(t1, t2)| glue_parameters_checked(t1, t2))
        .map(|(a, b)| Instance::of(vec![a, b]))
        .collect();
    let tally = run(&ctx, &[Check::GluedExtremality], instances.into_par_iter())?;
    Ok(report(Theorem::GluedExtremality, p, tally, start))
}

/// Every splitting of every census entry.
pub fn check_richelot_closure(census: &CurveCensus) -> Result<TheoremReport> {
    let start = Instant::now();
    let ctx = census.ctx();
    let instances: Vec<Instance> = census
        .entries()
        .iter()
        .flat_map(|e| {
            (0..15).map(move |i| Instance {
                params: e.triple.values().to_vec(),
                index: Some(i),
            })
        })
        .collect();
    let tally = run(&ctx, &[Check::RichelotClosure], instances.into_par_iter())?;
    Ok(report(Theorem::RichelotClosure, ctx.p(), tally, start))
}

pub fn check_quintic_criterion(p: u64) -> Result<TheoremReport> {
    let start = Instant::now();
    let ctx = Fp2Context::new(p)?;
    let tally = run(
        &ctx,
        &[Check::QuinticCriterion],
        vec![Instance::of(Vec::new())].into_par_iter(),
    )?;
    Ok(report(Theorem::QuinticCriterion, p, tally, start))
}

/// All Legendre parameters t in F_{p^2} \ {0, 1}.
pub fn check_legendre_cross_check(p: u64) -> Result<TheoremReport> {
    let start = Instant::now();
    let ctx = Fp2Context::new(p)?;
    let instances: Vec<Instance> = candidates(&ctx).into_iter().map(|t| Instance::of(vec![t])).collect();
    let tally = run(&ctx, &[Check::LegendreCrossCheck], instances.into_par_iter())?;
    Ok(report(Theorem::LegendreCrossCheck, p, tally, start))
}

/// Scan settings for [`run_theorem`]; `None` budgets keep the defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanBudgets {
    pub genus3: Option<u64>,
    pub genus4: Option<u64>,
    pub seed: Option<u64>,
    /// Scan only the parameter sets above superspecial genus-2 curves.
    pub targeted: bool,
}

impl ScanBudgets {
    fn mode(&self, budget: Option<u64>, default: ScanMode) -> ScanMode {
        if self.targeted {
            return ScanMode::Targeted;
        }
        match (budget, default) {
            (Some(budget), ScanMode::Sampled { seed, .. }) => ScanMode::Sampled {
                budget,
                seed: self.seed.unwrap_or(seed),
            },
            (None, ScanMode::Sampled { budget, seed }) => ScanMode::Sampled {
                budget,
                seed: self.seed.unwrap_or(seed),
            },
            (_, mode) => mode,
        }
    }
}

/// Runs one checker for one prime, building the census when it needs one.
/// `census` may supply a prebuilt census for p.
pub fn run_theorem(
    theorem: Theorem,
    p: u64,
    census: Option<&CurveCensus>,
    budgets: ScanBudgets,
) -> Result<TheoremReport> {
    let needs_census = matches!(
        theorem,
        Theorem::RosenhainSquares | Theorem::ExtremalCount | Theorem::DifferenceProducts | Theorem::RichelotClosure
    );
    let owned = match census {
        None if needs_census => Some(crate::enumerate::census(p)?),
        _ => None,
    };
    let c = census.or(owned.as_ref());
    match theorem {
        Theorem::RosenhainSquares => check_rosenhain_squares(c.expect("census")),
        Theorem::ExtremalCount => check_extremal_count(c.expect("census")),
        Theorem::DifferenceProducts => check_difference_products(c.expect("census")),
        Theorem::RichelotClosure => check_richelot_closure(c.expect("census")),
        Theorem::P3Nonexistence => {
            if p != 3 {
                Fp2Context::new(p)?;
                return Err(Error::NotApplicable(format!(
                    "the p3 check runs only for p = 3 (got {p})"
                )));
            }
            check_p3_nonexistence()
        }
        Theorem::Genus3 => check_genus3(p, budgets.mode(budgets.genus3, default_genus3_mode(p))),
        Theorem::Genus4 => check_genus4(p, budgets.mode(budgets.genus4, default_genus4_mode(p))),
        Theorem::GluedExtremality => check_glued_extremality(p),
        Theorem::QuinticCriterion => check_quintic_criterion(p),
        Theorem::LegendreCrossCheck => check_legendre_cross_check(p),
    }
}
