//! Rosenhain normal forms y^2 = x(x-1)(x-lambda)(x-mu)(x-nu).
//!
//! Choosing an ordered triple (a1, a2, a3) of Weierstrass points and sending
//! them to (0, 1, infinity) by a Moebius map gives one Rosenhain form per
//! choice, so at most 120 of them. The set of all forms is an isomorphism
//! invariant over the algebraic closure; its lexicographic minimum is used as
//! the canonical key of a genus-2 curve.
//!
//! Factors that involve the point at infinity are dropped, both in the cross
//! ratios (which is the projective limit) and in the twist constant
//! kappa = c (a1-a2)(a3-a4)(a3-a5)(a3-a6). Over F_{p^2}, -1 is a square, so
//! the dropped factors never change the square class of kappa.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::curves::{HyperellipticCurve, Root};
use crate::error::{Error, Result};
use crate::ff::{Fp2Context, Fp2Element};

/// Square class of the accumulated twist constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Twist {
    Trivial,
    Nontrivial,
}

impl Twist {
    pub fn of(kappa: Fp2Element) -> Self {
        if kappa.is_square() {
            Twist::Trivial
        } else {
            Twist::Nontrivial
        }
    }
}

/// Rosenhain invariants (lambda, mu, nu) of the curve
/// y^2 = e * x(x-1)(x-lambda)(x-mu)(x-nu), where e is 1 for the trivial twist
/// and the smallest non-square of F_{p^2} otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RosenhainTriple {
    pub lambda: Fp2Element,
    pub mu: Fp2Element,
    pub nu: Fp2Element,
    pub twist: Twist,
}

impl RosenhainTriple {
    pub fn new(lambda: Fp2Element, mu: Fp2Element, nu: Fp2Element) -> Result<Self> {
        let ctx = lambda.ctx();
        let mut all = [ctx.zero(), ctx.one(), lambda, mu, nu];
        all.sort();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::SingularConfiguration);
        }
        Ok(Self {
            lambda,
            mu,
            nu,
            twist: Twist::Trivial,
        })
    }

    pub fn with_twist(self, twist: Twist) -> Self {
        Self { twist, ..self }
    }

    pub fn ctx(&self) -> Fp2Context {
        self.lambda.ctx()
    }

    pub fn values(&self) -> [Fp2Element; 3] {
        [self.lambda, self.mu, self.nu]
    }

    /// Same invariants in increasing key order.
    pub fn sorted(&self) -> Self {
        let mut v = self.values();
        v.sort();
        Self {
            lambda: v[0],
            mu: v[1],
            nu: v[2],
            twist: self.twist,
        }
    }

    pub fn twist_constant(&self) -> Fp2Element {
        match self.twist {
            Twist::Trivial => self.ctx().one(),
            Twist::Nontrivial => self.ctx().non_square(),
        }
    }

    /// Weierstrass points ordered (0, 1, infinity, lambda, mu, nu).
    pub fn roots(&self) -> [Root; 6] {
        let ctx = self.ctx();
        [
            Root::Finite(ctx.zero()),
            Root::Finite(ctx.one()),
            Root::Infinity,
            Root::Finite(self.lambda),
            Root::Finite(self.mu),
            Root::Finite(self.nu),
        ]
    }

    pub fn curve(&self) -> HyperellipticCurve {
        let ctx = self.ctx();
        let roots = [ctx.zero(), ctx.one(), self.lambda, self.mu, self.nu]
            .into_iter()
            .map(Root::Finite)
            .collect();
        HyperellipticCurve::from_roots(self.twist_constant(), roots).expect("validated triple")
    }
}

impl fmt::Display for RosenhainTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {}; {})", self.lambda, self.mu, self.nu)
    }
}

/// Parses "(l; m; n)" in the field-element text encoding.
pub fn parse_triple(ctx: &Fp2Context, text: &str) -> Result<RosenhainTriple> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(text.to_string()))?;
    let parts: Vec<&str> = inner.split(';').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(text.to_string()));
    }
    RosenhainTriple::new(ctx.parse(parts[0])?, ctx.parse(parts[1])?, ctx.parse(parts[2])?)
}

/// Lexicographically smallest sorted triple in the orbit of all Rosenhain
/// forms. Two genus-2 curves are isomorphic over the algebraic closure iff
/// their keys coincide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    values: [Fp2Element; 3],
}

impl CanonicalKey {
    pub fn values(&self) -> [Fp2Element; 3] {
        self.values
    }

    /// The key as a Rosenhain triple with the trivial twist.
    pub fn triple(&self) -> RosenhainTriple {
        RosenhainTriple {
            lambda: self.values[0],
            mu: self.values[1],
            nu: self.values[2],
            twist: Twist::Trivial,
        }
    }

    pub fn p(&self) -> u64 {
        self.values[0].ctx().p()
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.triple())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[inline]
fn diff(a: Root, b: Root) -> Option<Fp2Element> {
    match (a, b) {
        (Root::Finite(x), Root::Finite(y)) => Some(x - y),
        _ => None,
    }
}

#[inline]
fn product(ctx: Fp2Context, factors: &[Option<Fp2Element>]) -> Fp2Element {
    factors.iter().flatten().fold(ctx.one(), |acc, &x| acc * x)
}

/// (x-a1)(a2-a3) / ((x-a3)(a2-a1)), dropping the factors that contain
/// infinity. The five points must be pairwise distinct.
pub fn cross_ratio(ctx: Fp2Context, x: Root, a1: Root, a2: Root, a3: Root) -> Fp2Element {
    let num = product(ctx, &[diff(x, a1), diff(a2, a3)]);
    let den = product(ctx, &[diff(x, a3), diff(a2, a1)]);
    num * den.inv().expect("distinct points")
}

fn check_distinct(roots: &[Root]) -> Result<()> {
    let mut sorted = roots.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::SingularConfiguration);
    }
    Ok(())
}

fn remaining(ordering: [usize; 3]) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for i in 0..6 {
        if !ordering.contains(&i) {
            out[k] = i;
            k += 1;
        }
    }
    out
}

fn transform(ctx: Fp2Context, roots: &[Root; 6], c: Fp2Element, ordering: [usize; 3]) -> (RosenhainTriple, Fp2Element) {
    let [i1, i2, i3] = ordering;
    let (a1, a2, a3) = (roots[i1], roots[i2], roots[i3]);
    let rest = remaining(ordering);
    let [l, m, n] = rest.map(|k| cross_ratio(ctx, roots[k], a1, a2, a3));
    let kappa = c * product(
        ctx,
        &[
            diff(a1, a2),
            diff(a3, roots[rest[0]]),
            diff(a3, roots[rest[1]]),
            diff(a3, roots[rest[2]]),
        ],
    );
    let triple = RosenhainTriple {
        lambda: l,
        mu: m,
        nu: n,
        twist: Twist::of(kappa),
    };
    (triple, kappa)
}

/// Rosenhain form obtained by sending (a1, a2, a3) = roots[ordering] to
/// (0, 1, infinity), together with kappa. The model y^2 = c prod(x - a_i) is
/// F_{p^2}-isomorphic to y^2 = x(x-1)(x-lambda)(x-mu)(x-nu) iff kappa is a
/// square; in general it is isomorphic to y^2 = kappa x(x-1)(x-lambda)(x-mu)(x-nu).
pub fn to_rosenhain(roots: &[Root; 6], c: Fp2Element, ordering: [usize; 3]) -> Result<(RosenhainTriple, Fp2Element)> {
    check_distinct(roots)?;
    if ordering.iter().any(|&i| i >= 6)
        || ordering[0] == ordering[1]
        || ordering[1] == ordering[2]
        || ordering[0] == ordering[2]
    {
        return Err(Error::SingularConfiguration);
    }
    Ok(transform(c.ctx(), roots, c, ordering))
}

/// All 120 ordered choices of three distinct indices out of six.
pub fn orderings() -> impl Iterator<Item = [usize; 3]> {
    (0..6).flat_map(|i| {
        (0..6)
            .filter(move |&j| j != i)
            .flat_map(move |j| (0..6).filter(move |&k| k != i && k != j).map(move |k| [i, j, k]))
    })
}

/// Deduplicated, sorted Rosenhain forms over all 120 orderings. When one
/// triple arises with both twist classes the trivial class is kept.
pub fn orbit_of_roots(roots: &[Root; 6], c: Fp2Element) -> Result<Vec<RosenhainTriple>> {
    check_distinct(roots)?;
    let ctx = c.ctx();
    let mut seen: BTreeMap<[Fp2Element; 3], Twist> = BTreeMap::new();
    for ordering in orderings() {
        let (t, _) = transform(ctx, roots, c, ordering);
        let s = t.sorted();
        seen.entry(s.values())
            .and_modify(|tw| *tw = (*tw).min(s.twist))
            .or_insert(s.twist);
    }
    Ok(seen
        .into_iter()
        .map(|([lambda, mu, nu], twist)| RosenhainTriple { lambda, mu, nu, twist })
        .collect())
}

pub fn orbit_120(t: &RosenhainTriple) -> Vec<RosenhainTriple> {
    orbit_of_roots(&t.roots(), t.twist_constant()).expect("validated triple")
}

pub fn canonical_key(t: &RosenhainTriple) -> CanonicalKey {
    CanonicalKey {
        values: orbit_120(t)[0].values(),
    }
}

/// The canonical key triple of y^2 = c prod(x - a_i), with the twist class
/// that puts that model in the key's Rosenhain form.
pub fn canonical_form_of_roots(roots: &[Root; 6], c: Fp2Element) -> Result<RosenhainTriple> {
    Ok(orbit_of_roots(roots, c)?[0])
}

pub fn canonical_key_of_roots(roots: &[Root; 6]) -> Result<CanonicalKey> {
    let ctx = roots
        .iter()
        .find_map(Root::finite)
        .ok_or(Error::SingularConfiguration)?
        .ctx();
    let orbit = orbit_of_roots(roots, ctx.one())?;
    Ok(CanonicalKey {
        values: orbit[0].values(),
    })
}

/// Canonical key of a genus-2 curve whose Weierstrass points are rational.
pub fn canonical_key_of_curve(curve: &HyperellipticCurve) -> Result<CanonicalKey> {
    if curve.genus() != 2 {
        return Err(Error::UnsupportedGenus(curve.genus()));
    }
    let pts = curve.weierstrass_points()?;
    let roots: [Root; 6] = pts.try_into().map_err(|_| Error::SingularConfiguration)?;
    canonical_key_of_roots(&roots)
}

/// lambda, mu, nu, 1-lambda, 1-mu, 1-nu, lambda-mu, mu-nu, nu-lambda.
pub fn nine_differences(t: &RosenhainTriple) -> [Fp2Element; 9] {
    let one = t.ctx().one();
    let (l, m, n) = (t.lambda, t.mu, t.nu);
    [l, m, n, one - l, one - m, one - n, l - m, m - n, n - l]
}

/// lambda mu nu, (1-lambda)(1-mu)(1-nu), and for each x in {lambda, mu, nu}
/// the product of x - y over the other four finite Weierstrass points.
pub fn five_products(t: &RosenhainTriple) -> [Fp2Element; 5] {
    let one = t.ctx().one();
    let (l, m, n) = (t.lambda, t.mu, t.nu);
    [
        l * m * n,
        (one - l) * (one - m) * (one - n),
        l * (l - one) * (l - m) * (l - n),
        m * (m - one) * (m - l) * (m - n),
        n * (n - one) * (n - l) * (n - m),
    ]
}

/// Every Rosenhain transformation of the form is defined over F_{p^2} when
/// all nine differences are squares.
pub fn all_rosenhain_defined_over(t: &RosenhainTriple) -> bool {
    nine_differences(t).iter().all(Fp2Element::is_square)
}

pub fn five_products_are_fourth_powers(t: &RosenhainTriple) -> bool {
    five_products(t).iter().all(Fp2Element::is_fourth_power)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{count_points, is_superspecial};

    fn ctx(p: u64) -> Fp2Context {
        Fp2Context::new(p).unwrap()
    }

    #[test]
    fn identity_and_swapped_orderings() {
        let k = ctx(13);
        let t = RosenhainTriple::new(k.from_i64(3), k.from_i64(5), k.from_i64(9)).unwrap();
        let (same, kappa) = to_rosenhain(&t.roots(), k.one(), [0, 1, 2]).unwrap();
        assert_eq!(same.values(), t.values());
        assert_eq!(kappa, -k.one());
        assert!(kappa.is_square());

        let (swapped, _) = to_rosenhain(&t.roots(), k.one(), [1, 0, 2]).unwrap();
        let one = k.one();
        assert_eq!(swapped.values(), [one - t.lambda, one - t.mu, one - t.nu]);
    }

    #[test]
    fn kappa_of_finite_configuration() {
        let k = ctx(7);
        let roots = [0, 1, 2, 3, 4, 5].map(|v| Root::Finite(k.from_i64(v)));
        let (_, kappa) = to_rosenhain(&roots, k.one(), [0, 1, 2]).unwrap();
        assert_eq!(kappa, k.from_i64(6));
    }

    #[test]
    fn repeated_roots_are_rejected() {
        let k = ctx(7);
        let mut roots = [0, 1, 2, 3, 4, 5].map(|v| Root::Finite(k.from_i64(v)));
        roots[5] = roots[4];
        assert_eq!(
            to_rosenhain(&roots, k.one(), [0, 1, 2]),
            Err(Error::SingularConfiguration)
        );
        assert!(RosenhainTriple::new(k.from_i64(2), k.from_i64(2), k.from_i64(2)).is_err());
        assert!(RosenhainTriple::new(k.from_i64(1), k.from_i64(2), k.from_i64(3)).is_err());
    }

    #[test]
    fn orbit_sizes_follow_automorphisms() {
        let k = ctx(13);
        // -1 and i = sqrt(-1) = 5 in F_13: the curve x(x^2-1)(x^2+1) = x^5 - x
        let s4 = RosenhainTriple::new(k.from_i64(-1), k.from_i64(5), k.from_i64(-5)).unwrap();
        assert_eq!(orbit_120(&s4).len(), 5);
        // x(x-1)(x+1)(x-2)(x-1/2)
        let half = k.from_i64(2).inv().unwrap();
        let d12 = RosenhainTriple::new(k.from_i64(-1), k.from_i64(2), half).unwrap();
        assert_eq!(orbit_120(&d12).len(), 10);
        let generic = RosenhainTriple::new(k.from_i64(3), k.from_i64(5), k.from_coords(2, 7)).unwrap();
        assert_eq!(orbit_120(&generic).len(), 120);
        for t in [s4, d12, generic] {
            assert!(orbit_120(&t).iter().any(|o| o.values() == t.sorted().values()));
        }
    }

    #[test]
    fn keys_are_idempotent_and_ordering_independent() {
        let k = ctx(11);
        let t = RosenhainTriple::new(k.from_i64(3), k.from_coords(4, 2), k.from_i64(8)).unwrap();
        let key = canonical_key(&t);
        assert_eq!(canonical_key(&key.triple()), key);
        for ordering in orderings() {
            let (form, _) = to_rosenhain(&t.roots(), k.one(), ordering).unwrap();
            assert_eq!(canonical_key(&form), key);
        }
        let mut shuffled = t.roots();
        shuffled.swap(0, 4);
        shuffled.swap(2, 5);
        assert_eq!(canonical_key_of_roots(&shuffled).unwrap(), key);
    }

    #[test]
    fn kappa_gives_twist_class() {
        // y^2 = c prod(x - a_i) and y^2 = kappa * Rosenhain(x) have equal counts
        let k = ctx(7);
        let c = k.from_coords(3, 1);
        let roots = [
            Root::Finite(k.from_i64(2)),
            Root::Infinity,
            Root::Finite(k.from_coords(1, 1)),
            Root::Finite(k.from_i64(5)),
            Root::Finite(k.from_coords(0, 3)),
            Root::Finite(k.from_i64(6)),
        ];
        let curve = HyperellipticCurve::from_roots(c, roots.to_vec()).unwrap();
        let n = count_points(&curve);
        for ordering in orderings() {
            let (t, kappa) = to_rosenhain(&roots, c, ordering).unwrap();
            let form = HyperellipticCurve::from_roots(
                kappa,
                [k.zero(), k.one(), t.lambda, t.mu, t.nu]
                    .into_iter()
                    .map(Root::Finite)
                    .collect(),
            )
            .unwrap();
            assert_eq!(count_points(&form), n, "{ordering:?}");
            let square_form = t.with_twist(Twist::Trivial).curve();
            if kappa.is_square() {
                assert_eq!(count_points(&square_form), n);
            }
        }
    }

    #[test]
    fn defined_over_predicate() {
        let k = ctx(7);
        let t = RosenhainTriple::new(k.from_i64(3), k.from_i64(5), k.from_i64(6)).unwrap();
        // every element of F_7 is a square in F_49
        assert!(all_rosenhain_defined_over(&t));
        for ordering in orderings() {
            let (_, kappa) = to_rosenhain(&t.roots(), k.one(), ordering).unwrap();
            assert!(kappa.is_square());
        }
        let ns = k.non_square();
        let bad = RosenhainTriple::new(ns, k.from_i64(3), k.from_i64(5)).unwrap();
        assert!(!all_rosenhain_defined_over(&bad));
    }

    #[test]
    fn superspecial_forms_at_thirteen_satisfy_predicates() {
        let k = ctx(13);
        // the x^5 - x curve is superspecial for p = 13? test whatever the scan finds
        let s4 = RosenhainTriple::new(k.from_i64(-1), k.from_i64(5), k.from_i64(-5)).unwrap();
        if is_superspecial(&s4.curve()) {
            for form in orbit_120(&s4) {
                assert!(all_rosenhain_defined_over(&form));
                assert!(five_products_are_fourth_powers(&form));
            }
        }
    }

    #[test]
    fn triple_text_format() {
        let k = ctx(7);
        let t = RosenhainTriple::new(k.from_i64(3), k.from_coords(2, 1), k.from_i64(6)).unwrap();
        assert_eq!(t.to_string(), "(3; 2+1*u; 6)");
        assert_eq!(parse_triple(&k, "(3; 2+1*u; 6)").unwrap(), t);
        assert_eq!(parse_triple(&k, "(2; 2; 2)"), Err(Error::SingularConfiguration));
        assert!(parse_triple(&k, "3; 4; 5").is_err());
    }
}
