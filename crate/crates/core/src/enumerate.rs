//! Censuses of superspecial genus-2 curves over F_{p^2}.
//!
//! The Richelot walk seeds a census with curves glued from pairs of
//! supersingular Legendre curves and closes it under Richelot isogenies;
//! connectivity of the superspecial isogeny graph makes the closure complete.
//! The brute-force census scans Rosenhain triples directly and serves as an
//! independent oracle.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{
    even_polynomial, glue_from_legendre_pair, glue_parameters, hasse_polynomial, is_superspecial,
    rosenhain_is_superspecial, Classification, PointCounter, Root,
};
use crate::error::{Error, Result};
use crate::ff::{Fp2Context, Fp2Element};
use crate::richelot::{richelot_neighbors, RichelotResult};
use crate::rosenhain::{canonical_form_of_roots, canonical_key, CanonicalKey, RosenhainTriple};

/// Largest prime accepted by [`brute_force_census`] unless configured.
pub const DEFAULT_BRUTE_FORCE_MAX: u64 = 13;

/// Smallest prime for which the Richelot walk is run.
pub const RICHELOT_WALK_MIN_P: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Glued from a pair of supersingular Legendre curves.
    Seed,
    /// Found as a Richelot codomain of entry `parent` in BFS layer `step`.
    Richelot {
        parent: usize,
        step: usize,
    },
    BruteForce,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Seed => f.write_str("seed"),
            Provenance::Richelot { step, .. } => write!(f, "richelot:{step}"),
            Provenance::BruteForce => f.write_str("brute"),
        }
    }
}

impl Serialize for Provenance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub key: CanonicalKey,
    /// The Rosenhain form of the key with the trivial twist.
    pub triple: RosenhainTriple,
    pub classification: Classification,
    pub provenance: Provenance,
}

/// Richelot neighborhood of one census entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Neighborhood {
    /// Keys of the genus-2 codomains, one per nondegenerate splitting.
    pub genus2: Vec<CanonicalKey>,
    /// Splittings with delta = 0.
    pub products: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusDiagnostics {
    /// Ordered Legendre pairs whose gluing degenerates (including t1 = t2).
    pub degenerate_pairs: usize,
    /// Glued curves whose Weierstrass points are not all in F_{p^2}.
    pub irrational_seeds: usize,
    /// Glued curves failing the Cartier-Manin test; always zero in practice.
    pub non_superspecial_seeds: usize,
    /// Genus-2 codomains without rational Weierstrass points.
    pub irrational_codomains: usize,
}

/// Superspecial genus-2 curves over F_{p^2} up to isomorphism over the
/// algebraic closure, in insertion order.
#[derive(Clone, Debug)]
pub struct CurveCensus {
    ctx: Fp2Context,
    entries: Vec<CensusEntry>,
    index: HashMap<CanonicalKey, usize>,
    neighborhoods: Vec<Option<Neighborhood>>,
    pub diagnostics: CensusDiagnostics,
}

/// One serialized census row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub p: u64,
    pub key: String,
    pub lambda: String,
    pub mu: String,
    pub nu: String,
    pub classification: String,
    pub point_count: u64,
    pub provenance: String,
}

impl CurveCensus {
    pub fn new(ctx: Fp2Context) -> Self {
        Self {
            ctx,
            entries: Vec::new(),
            index: HashMap::new(),
            neighborhoods: Vec::new(),
            diagnostics: CensusDiagnostics::default(),
        }
    }

    pub fn ctx(&self) -> Fp2Context {
        self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CensusEntry] {
        &self.entries
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<&CensusEntry> {
        self.index.get(key).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.index.contains_key(key)
    }

    pub fn keys(&self) -> BTreeSet<CanonicalKey> {
        self.index.keys().copied().collect()
    }

    /// Neighborhood of entry `i`, once the entry has been expanded.
    pub fn neighborhood(&self, i: usize) -> Option<&Neighborhood> {
        self.neighborhoods.get(i).and_then(Option::as_ref)
    }

    /// Entries sorted by key.
    pub fn sorted_entries(&self) -> Vec<&CensusEntry> {
        let mut v: Vec<&CensusEntry> = self.entries.iter().collect();
        v.sort_by_key(|e| e.key);
        v
    }

    pub fn records(&self) -> Vec<CensusRecord> {
        self.sorted_entries()
            .into_iter()
            .map(|e| CensusRecord {
                p: self.p(),
                key: e.key.to_string(),
                lambda: e.triple.lambda.to_string(),
                mu: e.triple.mu.to_string(),
                nu: e.triple.nu.to_string(),
                classification: e.classification.kind.to_string(),
                point_count: e.classification.point_count,
                provenance: e.provenance.to_string(),
            })
            .collect()
    }

    /// Inserts the key if absent and returns whether it was new.
    fn insert(&mut self, key: CanonicalKey, provenance: Provenance, counter: &PointCounter) -> bool {
        if self.index.contains_key(&key) {
            return false;
        }
        let triple = key.triple();
        let classification = counter.classify(&triple.curve());
        self.index.insert(key, self.entries.len());
        self.entries.push(CensusEntry {
            key,
            triple,
            classification,
            provenance,
        });
        self.neighborhoods.push(None);
        true
    }
}

/// All t in F_{p^2} \ {0, 1} with y^2 = x(x-1)(x-t) supersingular, in key
/// order.
pub fn supersingular_legendre_params(ctx: &Fp2Context) -> Vec<Fp2Element> {
    let h = hasse_polynomial(*ctx);
    ctx.elements()
        .skip(2)
        .filter(|&t| !t.is_one() && h.eval(t).is_zero())
        .collect()
}

/// Glue parameters (a, b) for a Legendre pair when the glued sextic is
/// squarefree.
pub fn glue_parameters_checked(t1: Fp2Element, t2: Fp2Element) -> Option<(Fp2Element, Fp2Element)> {
    let (a, b) = glue_parameters(t1, t2).ok()?;
    even_polynomial(t1.ctx(), &[a, b]).is_squarefree().then_some((a, b))
}

enum SeedOutcome {
    Degenerate,
    Irrational,
    NotSuperspecial,
    Key(CanonicalKey),
}

fn seed_from_pair(t1: Fp2Element, t2: Fp2Element) -> SeedOutcome {
    let Ok(curve) = glue_from_legendre_pair(t1, t2) else {
        return SeedOutcome::Degenerate;
    };
    if !is_superspecial(&curve) {
        return SeedOutcome::NotSuperspecial;
    }
    let Ok(points) = curve.weierstrass_points() else {
        return SeedOutcome::Irrational;
    };
    let roots: [Root; 6] = points.try_into().expect("sextic model");
    match canonical_form_of_roots(&roots, curve.rhs().leading_coefficient()) {
        Ok(form) => SeedOutcome::Key(canonical_key(&form)),
        Err(_) => SeedOutcome::Degenerate,
    }
}

/// Curves glued from every ordered pair of supersingular Legendre
/// parameters. Requires p >= 7.
pub fn seed_census(p: u64) -> Result<CurveCensus> {
    if p < RICHELOT_WALK_MIN_P {
        Fp2Context::new(p)?;
        return Err(Error::PrimeTooSmallForRichelotWalk(p));
    }
    let ctx = Fp2Context::new(p)?;
    let params = supersingular_legendre_params(&ctx);
    let pairs: Vec<(Fp2Element, Fp2Element)> = params
        .iter()
        .flat_map(|&a| params.iter().map(move |&b| (a, b)))
        .collect();
    let outcomes: Vec<SeedOutcome> = pairs.par_iter().map(|&(a, b)| seed_from_pair(a, b)).collect();

    let counter = PointCounter::new(ctx);
    let mut census = CurveCensus::new(ctx);
    for outcome in outcomes {
        match outcome {
            SeedOutcome::Degenerate => census.diagnostics.degenerate_pairs += 1,
            SeedOutcome::Irrational => census.diagnostics.irrational_seeds += 1,
            SeedOutcome::NotSuperspecial => census.diagnostics.non_superspecial_seeds += 1,
            SeedOutcome::Key(key) => {
                census.insert(key, Provenance::Seed, &counter);
            }
        }
    }
    Ok(census)
}

fn neighborhood_of(triple: &RosenhainTriple) -> Result<(Neighborhood, usize)> {
    let mut hood = Neighborhood::default();
    let mut irrational = 0;
    for result in richelot_neighbors(&triple.curve())? {
        match result {
            RichelotResult::SplitProduct => hood.products += 1,
            RichelotResult::Genus2 { form: Some(form), .. } => hood.genus2.push(canonical_key(&form)),
            RichelotResult::Genus2 { form: None, .. } => irrational += 1,
        }
    }
    Ok((hood, irrational))
}

/// Breadth-first closure under Richelot isogenies. Each layer is expanded
/// in parallel and merged in entry order, so the result matches scanning the
/// list front to back and appending new curves as they appear.
pub fn saturate(mut census: CurveCensus) -> Result<CurveCensus> {
    let counter = PointCounter::new(census.ctx);
    let mut frontier: Vec<usize> = (0..census.len())
        .filter(|&i| census.neighborhoods[i].is_none())
        .collect();
    let mut step = 0;
    while !frontier.is_empty() {
        step += 1;
        let expanded: Vec<(Neighborhood, usize)> = frontier
            .par_iter()
            .map(|&i| neighborhood_of(&census.entries[i].triple))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (&parent, (hood, irrational)) in frontier.iter().zip(expanded) {
            census.diagnostics.irrational_codomains += irrational;
            for key in &hood.genus2 {
                if census.insert(*key, Provenance::Richelot { parent, step }, &counter) {
                    next.push(census.len() - 1);
                }
            }
            census.neighborhoods[parent] = Some(hood);
        }
        frontier = next;
    }
    Ok(census)
}

/// seed_census followed by saturate.
pub fn richelot_walk_census(p: u64) -> Result<CurveCensus> {
    saturate(seed_census(p)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForceOptions {
    pub max_p: u64,
    /// Restrict lambda, mu, nu to S = {s : s and 1 - s are squares}.
    pub pruned: bool,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        Self {
            max_p: DEFAULT_BRUTE_FORCE_MAX,
            pruned: true,
        }
    }
}

/// {s in F_{p^2} \ {0, 1} : s and 1 - s are squares}, in key order.
pub fn square_pair_set(ctx: &Fp2Context) -> Vec<Fp2Element> {
    let one = ctx.one();
    ctx.elements()
        .filter(|&s| !s.is_zero() && !s.is_one() && s.is_square() && (one - s).is_square())
        .collect()
}

/// Every superspecial Rosenhain triple over F_{p^2}, keyed.
pub fn brute_force_census(p: u64) -> Result<CurveCensus> {
    brute_force_census_with(p, BruteForceOptions::default())
}

/// Every unordered superspecial Rosenhain triple lambda < mu < nu (key
/// order), optionally restricted to the square-pair set.
pub fn superspecial_triples(ctx: &Fp2Context, pruned: bool) -> Vec<RosenhainTriple> {
    let candidates: Vec<Fp2Element> = if pruned {
        square_pair_set(ctx)
    } else {
        ctx.elements().filter(|s| !s.is_zero() && !s.is_one()).collect()
    };
    let n = candidates.len();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let c = &candidates;
            (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (c[i], c[j], c[k])))
        })
        .filter(|&(l, m, n)| rosenhain_is_superspecial(l, m, n))
        .map(|(l, m, n)| RosenhainTriple::new(l, m, n).expect("distinct"))
        .collect()
}

pub fn brute_force_census_with(p: u64, options: BruteForceOptions) -> Result<CurveCensus> {
    let ctx = Fp2Context::new(p)?;
    if p > options.max_p {
        return Err(Error::BruteForceOutOfRange { p, max: options.max_p });
    }
    let found: BTreeSet<CanonicalKey> = superspecial_triples(&ctx, options.pruned)
        .par_iter()
        .map(canonical_key)
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let counter = PointCounter::new(ctx);
    let mut census = CurveCensus::new(ctx);
    for key in found {
        census.insert(key, Provenance::BruteForce, &counter);
    }
    Ok(census)
}

/// The Richelot walk for p >= 7 and the brute-force census below that.
pub fn census(p: u64) -> Result<CurveCensus> {
    if p >= RICHELOT_WALK_MIN_P {
        richelot_walk_census(p)
    } else {
        brute_force_census(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::Extremality;

    #[test]
    fn legendre_parameters() {
        let k7 = Fp2Context::new(7).unwrap();
        let got = supersingular_legendre_params(&k7);
        assert_eq!(got, vec![k7.from_i64(2), k7.from_i64(4), k7.from_i64(6)]);
        let k3 = Fp2Context::new(3).unwrap();
        assert_eq!(supersingular_legendre_params(&k3), vec![k3.from_i64(2)]);
        for p in [5, 11, 13, 17] {
            let k = Fp2Context::new(p).unwrap();
            let n = supersingular_legendre_params(&k).len();
            // lambda-orbits have size 6, 3 or 2
            assert!(n > 0);
            assert!(n <= ((p - 1) / 2) as usize);
        }
    }

    #[test]
    fn square_pair_set_at_three() {
        let k = Fp2Context::new(3).unwrap();
        assert_eq!(square_pair_set(&k), vec![k.from_i64(2)]);
    }

    #[test]
    fn small_primes_rejected_by_walk() {
        assert_eq!(seed_census(5).unwrap_err(), Error::PrimeTooSmallForRichelotWalk(5));
        assert_eq!(seed_census(9).unwrap_err(), Error::NotPrime(9));
        assert_eq!(
            brute_force_census(17).unwrap_err(),
            Error::BruteForceOutOfRange { p: 17, max: 13 }
        );
    }

    #[test]
    fn characteristic_three_is_empty() {
        assert!(brute_force_census(3).unwrap().is_empty());
        let unpruned = BruteForceOptions {
            pruned: false,
            ..Default::default()
        };
        assert!(brute_force_census_with(3, unpruned).unwrap().is_empty());
    }

    #[test]
    fn walk_matches_brute_force_at_seven() {
        let walk = richelot_walk_census(7).unwrap();
        let brute = brute_force_census(7).unwrap();
        assert!(!walk.is_empty());
        assert_eq!(walk.keys(), brute.keys());
        assert_eq!(walk.diagnostics.non_superspecial_seeds, 0);
        for e in walk.entries() {
            assert!(is_superspecial(&e.triple.curve()));
            assert_eq!(e.classification.kind, Extremality::Maximal);
            assert_eq!(e.classification.point_count, 49 + 1 + 28);
        }
        let again = saturate(walk.clone()).unwrap();
        assert_eq!(again.len(), walk.len());
    }

    #[test]
    fn pruning_agrees_with_full_scan() {
        for p in [5, 7] {
            let full = brute_force_census_with(
                p,
                BruteForceOptions {
                    pruned: false,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(full.keys(), brute_force_census(p).unwrap().keys());
        }
    }

    #[test]
    fn records_are_sorted_and_stable() {
        let a = richelot_walk_census(7).unwrap().records();
        let b = richelot_walk_census(7).unwrap().records();
        assert_eq!(a, b);
        let distinct: BTreeSet<&String> = a.iter().map(|r| &r.key).collect();
        assert_eq!(distinct.len(), a.len());
        assert!(a.iter().all(|r| r.p == 7 && r.classification == "Maximal"));
    }
}
