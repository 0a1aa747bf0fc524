//! Richelot (2,2)-isogenies of genus-2 curves.
//!
//! A quadratic splitting writes the sextic as lc * G1 G2 G3 with monic G_i of
//! degree at most two, one per pair of Weierstrass points (a pair containing
//! infinity gives a linear factor). With H1 = G2' G3 - G2 G3' and cyclic
//! permutations, and delta the determinant of the coefficients of the G_i,
//! the codomain is y^2 = lc * delta^-1 H1 H2 H3 when delta != 0. When
//! delta = 0 the three quadratics lie in a pencil, the isogeny lands on a
//! product of elliptic curves and no genus-2 codomain exists.

use std::fmt;

use crate::curves::{HyperellipticCurve, Root};
use crate::error::{Error, Result};
use crate::ff::{Fp2Context, Fp2Element};
use crate::poly::Polynomial;
use crate::rosenhain::{canonical_form_of_roots, RosenhainTriple};

/// y^2 = c * G1 G2 G3 together with the Weierstrass pairs behind each G_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSplitting {
    pub c: Fp2Element,
    pub g: [Polynomial; 3],
    pub pairs: [[Root; 2]; 3],
}

fn pair_factor(ctx: Fp2Context, pair: [Root; 2]) -> Polynomial {
    let finite: Vec<Fp2Element> = pair.iter().filter_map(Root::finite).collect();
    Polynomial::from_roots(ctx, &finite)
}

impl QuadraticSplitting {
    pub fn from_pairs(c: Fp2Element, pairs: [[Root; 2]; 3]) -> Self {
        let ctx = c.ctx();
        Self {
            c,
            g: pairs.map(|pair| pair_factor(ctx, pair)),
            pairs,
        }
    }

    pub fn ctx(&self) -> Fp2Context {
        self.c.ctx()
    }

    /// c * G1 G2 G3.
    pub fn rhs(&self) -> Polynomial {
        (&(&self.g[0] * &self.g[1]) * &self.g[2]).scale(self.c)
    }
}

impl fmt::Display for QuadraticSplitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * [{}] [{}] [{}]", self.c, self.g[0], self.g[1], self.g[2])
    }
}

/// The 15 ways to pair up six items, as index pairs in a fixed order.
pub fn pairings() -> Vec<[[usize; 2]; 3]> {
    let mut out = Vec::with_capacity(15);
    for j in 1..6 {
        let rest: Vec<usize> = (1..6).filter(|&k| k != j).collect();
        let (a, others) = (rest[0], &rest[1..]);
        for (m, &b) in others.iter().enumerate() {
            let mut last = others.to_vec();
            last.remove(m);
            out.push([[0, j], [a, b], [last[0], last[1]]]);
        }
    }
    out
}

/// All 15 quadratic splittings of a genus-2 curve, in the order of
/// [`pairings`] applied to its Weierstrass points.
pub fn splittings(curve: &HyperellipticCurve) -> Result<Vec<QuadraticSplitting>> {
    if curve.genus() != 2 {
        return Err(Error::UnsupportedGenus(curve.genus()));
    }
    let roots = curve.weierstrass_points()?;
    let lead = curve.rhs().leading_coefficient();
    Ok(splittings_of_roots(&roots, lead))
}

pub fn splittings_of_roots(roots: &[Root], c: Fp2Element) -> Vec<QuadraticSplitting> {
    pairings()
        .into_iter()
        .map(|pairing| QuadraticSplitting::from_pairs(c, pairing.map(|[i, j]| [roots[i], roots[j]])))
        .collect()
}

/// det of the rows (g_{i,2}, g_{i,1}, g_{i,0}).
pub fn delta(s: &QuadraticSplitting) -> Fp2Element {
    let row = |g: &Polynomial| [g.coefficient(2), g.coefficient(1), g.coefficient(0)];
    let [a, b, c] = [row(&s.g[0]), row(&s.g[1]), row(&s.g[2])];
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// G_j' G_k - G_j G_k' for (j, k) = (2, 3), (3, 1), (1, 2).
pub fn h_polynomials(s: &QuadraticSplitting) -> [Polynomial; 3] {
    let h = |j: usize, k: usize| &(&s.g[j].derivative() * &s.g[k]) - &(&s.g[j] * &s.g[k].derivative());
    [h(1, 2), h(2, 0), h(0, 1)]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RichelotResult {
    /// The codomain model y^2 = c delta^-1 H1 H2 H3 and, when its
    /// Weierstrass points are rational, its canonical Rosenhain form with the
    /// twist class of this model.
    Genus2 {
        curve: HyperellipticCurve,
        form: Option<RosenhainTriple>,
    },
    /// delta = 0: the codomain is a product of elliptic curves.
    SplitProduct,
}

impl RichelotResult {
    pub fn form(&self) -> Option<&RosenhainTriple> {
        match self {
            RichelotResult::Genus2 { form, .. } => form.as_ref(),
            RichelotResult::SplitProduct => None,
        }
    }
}

fn roots_of_h(h: &Polynomial) -> Option<Vec<Root>> {
    match h.degree() {
        Some(2) => {
            let r = h.quadratic_roots();
            (r.len() == 2 && r[0] != r[1]).then(|| r.into_iter().map(Root::Finite).collect())
        }
        Some(1) => Some(vec![Root::Finite(h.quadratic_roots()[0]), Root::Infinity]),
        _ => None,
    }
}

pub fn richelot_codomain(s: &QuadraticSplitting) -> Result<RichelotResult> {
    let d = delta(s);
    if d.is_zero() {
        return Ok(RichelotResult::SplitProduct);
    }
    let hs = h_polynomials(s);
    let product = &(&hs[0] * &hs[1]) * &hs[2];
    if !matches!(product.degree(), Some(5 | 6)) || !product.is_squarefree() {
        return Err(Error::UnexpectedDegeneration);
    }
    let c = s.c * d.inv()?;
    let lead = product.leading_coefficient();
    let roots: Option<Vec<Root>> = hs
        .iter()
        .map(roots_of_h)
        .collect::<Option<Vec<_>>>()
        .map(|v| v.concat());
    let Some(roots) = roots else {
        // some Weierstrass point is not rational
        let curve = HyperellipticCurve::from_poly(c, product)?;
        return Ok(RichelotResult::Genus2 { curve, form: None });
    };
    let six: [Root; 6] = roots.try_into().map_err(|_| Error::UnexpectedDegeneration)?;
    let curve = HyperellipticCurve::from_roots(c * lead, six.to_vec()).map_err(|_| Error::UnexpectedDegeneration)?;
    let form = canonical_form_of_roots(&six, c * lead)?;
    Ok(RichelotResult::Genus2 {
        curve,
        form: Some(form),
    })
}

/// Codomains of all 15 splittings of a genus-2 curve.
pub fn richelot_neighbors(curve: &HyperellipticCurve) -> Result<Vec<RichelotResult>> {
    splittings(curve)?.iter().map(richelot_codomain).collect()
}

/// The Moebius involution x -> (alpha x + beta) / (gamma x - alpha) that
/// swaps the two points of every pair of a splitting, if one exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairInvolution {
    pub alpha: Fp2Element,
    pub beta: Fp2Element,
    pub gamma: Fp2Element,
}

impl PairInvolution {
    pub fn apply(&self, x: Root) -> Root {
        match x {
            Root::Infinity => {
                if self.gamma.is_zero() {
                    Root::Infinity
                } else {
                    Root::Finite(self.alpha * self.gamma.inv().unwrap())
                }
            }
            Root::Finite(x) => {
                let den = self.gamma * x - self.alpha;
                if den.is_zero() {
                    Root::Infinity
                } else {
                    Root::Finite((self.alpha * x + self.beta) * den.inv().unwrap())
                }
            }
        }
    }
}

// gamma p q - alpha (p + q) - beta = 0 for a finite pair, gamma p - alpha = 0
// when q is infinity; coefficients on (alpha, beta, gamma)
fn swap_condition(pair: [Root; 2]) -> Option<[Fp2Element; 3]> {
    match pair {
        [Root::Finite(p), Root::Finite(q)] => {
            let one = p.ctx().one();
            Some([-(p + q), -one, p * q])
        }
        [Root::Finite(p), Root::Infinity] | [Root::Infinity, Root::Finite(p)] => {
            let ctx = p.ctx();
            Some([-ctx.one(), ctx.zero(), p])
        }
        _ => None,
    }
}

/// Solves the swap conditions of the first two pairs, then checks the
/// candidate is a genuine involution that also swaps the third pair.
pub fn pair_involution(s: &QuadraticSplitting) -> Option<PairInvolution> {
    let a = swap_condition(s.pairs[0])?;
    let b = swap_condition(s.pairs[1])?;
    let v = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let inv = PairInvolution {
        alpha: v[0],
        beta: v[1],
        gamma: v[2],
    };
    // determinant of [[alpha, beta], [gamma, -alpha]]
    if (inv.alpha * inv.alpha + inv.beta * inv.gamma).is_zero() {
        return None;
    }
    s.pairs
        .iter()
        .all(|&[x, y]| inv.apply(x) == y && inv.apply(y) == x)
        .then_some(inv)
}

/// Both roots of delta = 0 in geometric terms: an involution of the line
/// swaps every pair and permutes the Weierstrass points, so it is a reduced
/// automorphism of the curve.
pub fn is_decomposed_compatible(s: &QuadraticSplitting) -> bool {
    pair_involution(s).is_some()
}

/// D1, D2, D3 for five finite Weierstrass points a1..a5 (the sixth at
/// infinity).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplittingDiagnostics {
    pub d1: Fp2Element,
    pub d2: Fp2Element,
    pub d3: Fp2Element,
}

/// D1 = (a2-a4)(a2-a5)(a3-a4)(a3-a5), D2 = (a1-a4)(a1-a5),
/// D3 = (a1-a2)(a1-a3).
pub fn diagnostics(a: [Fp2Element; 5]) -> SplittingDiagnostics {
    SplittingDiagnostics {
        d1: (a[1] - a[3]) * (a[1] - a[4]) * (a[2] - a[3]) * (a[2] - a[4]),
        d2: (a[0] - a[3]) * (a[0] - a[4]),
        d3: (a[0] - a[1]) * (a[0] - a[2]),
    }
}

/// G1 = x - a1, G2 = (x-a2)(x-a3), G3 = (x-a4)(x-a5); the splitting whose
/// delta equals -(D2 - D3).
pub fn distinguished_splitting(c: Fp2Element, a: [Fp2Element; 5]) -> QuadraticSplitting {
    let r = a.map(Root::Finite);
    QuadraticSplitting::from_pairs(c, [[r[0], Root::Infinity], [r[1], r[2]], [r[3], r[4]]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{cartier_manin, count_points, glue_from_legendre_pair, is_superspecial};
    use crate::rosenhain::{canonical_key, orbit_120};
    use std::collections::BTreeSet;

    fn ctx(p: u64) -> Fp2Context {
        Fp2Context::new(p).unwrap()
    }

    #[test]
    fn fifteen_distinct_pairings() {
        let all = pairings();
        assert_eq!(all.len(), 15);
        let normalized: BTreeSet<Vec<[usize; 2]>> = all
            .iter()
            .map(|p| {
                let mut v = p.to_vec();
                v.sort();
                v
            })
            .collect();
        assert_eq!(normalized.len(), 15);
        for p in &all {
            let mut seen: Vec<usize> = p.iter().flatten().copied().collect();
            seen.sort();
            assert_eq!(seen, vec![0, 1, 2, 3, 4, 5]);
        }
    }

    #[test]
    fn quintic_has_five_linear_factors() {
        let k = ctx(7);
        let curve = HyperellipticCurve::rosenhain(k.from_i64(2), k.from_i64(3), k.from_i64(4)).unwrap();
        let all = splittings(&curve).unwrap();
        assert_eq!(all.len(), 15);
        let mut linear = BTreeSet::new();
        for s in &all {
            let lin: Vec<&Polynomial> = s.g.iter().filter(|g| g.degree() == Some(1)).collect();
            assert_eq!(lin.len(), 1);
            linear.insert(lin[0].to_string());
        }
        assert_eq!(linear.len(), 5);
        for s in &all {
            assert_eq!(s.rhs(), curve.rhs());
        }
    }

    #[test]
    fn delta_example_and_diagnostics() {
        let k = ctx(7);
        let a = [0, 1, 2, 3, 4].map(|v| k.from_i64(v));
        let s = distinguished_splitting(k.one(), a);
        assert_eq!(delta(&s), k.from_i64(4));
        let d = diagnostics(a);
        assert_eq!((d.d1, d.d2, d.d3), (k.from_i64(5), k.from_i64(5), k.from_i64(2)));
        assert_eq!(delta(&s), -(d.d2 - d.d3));

        let swapped = diagnostics([a[0], a[1], a[2], a[4], a[3]]);
        assert_eq!(swapped, d);
    }

    #[test]
    fn delta_matches_diagnostics_everywhere() {
        let k = ctx(11);
        let vals: Vec<Fp2Element> = [0, 1, 3, 7, 9, 10].iter().map(|&v| k.from_i64(v)).collect();
        for perm in [[0, 1, 2, 3, 4], [4, 2, 0, 1, 3], [5, 3, 1, 0, 2], [2, 5, 4, 3, 1]] {
            let a = perm.map(|i| vals[i]);
            let d = diagnostics(a);
            assert_eq!(delta(&distinguished_splitting(k.one(), a)), -(d.d2 - d.d3));
        }
    }

    #[test]
    fn delta_by_second_row_expansion() {
        let k = ctx(13);
        // x^5 - x = x(x-1)(x+1)(x-5)(x+5), S4 symmetry
        let curve = HyperellipticCurve::rosenhain(k.from_i64(-1), k.from_i64(5), k.from_i64(-5)).unwrap();
        for s in splittings(&curve).unwrap() {
            let m: Vec<[Fp2Element; 3]> =
                s.g.iter()
                    .map(|g| [g.coefficient(2), g.coefficient(1), g.coefficient(0)])
                    .collect();
            let minor = |r: usize, c: usize| {
                let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
                let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
                m[rows[0]][cols[0]] * m[rows[1]][cols[1]] - m[rows[0]][cols[1]] * m[rows[1]][cols[0]]
            };
            let expanded = -(m[1][0] * minor(1, 0)) + m[1][1] * minor(1, 1) - m[1][2] * minor(1, 2);
            assert_eq!(delta(&s), expanded);
        }
    }

    #[test]
    fn codomains_of_superspecial_curve_are_superspecial() {
        // find one superspecial Rosenhain curve at p = 11 by scanning
        let k = ctx(11);
        let t = (2..11)
            .flat_map(|l| (l + 1..11).flat_map(move |m| (m + 1..11).map(move |n| (l, m, n))))
            .map(|(l, m, n)| RosenhainTriple::new(k.from_i64(l), k.from_i64(m), k.from_i64(n)).unwrap())
            .find(|t| is_superspecial(&t.curve()))
            .expect("superspecial curve with base-field invariants");
        let n = count_points(&t.curve());
        let mut genus2 = 0;
        for result in richelot_neighbors(&t.curve()).unwrap() {
            if let RichelotResult::Genus2 { curve, form } = result {
                genus2 += 1;
                assert!(cartier_manin(&curve).is_zero());
                assert_eq!(count_points(&curve), n);
                assert!(is_superspecial(&form.unwrap().curve()));
            }
        }
        assert!(genus2 > 0);
    }

    #[test]
    fn codomain_is_isogenous_by_point_count() {
        // isogenous curves have equal counts even off the superspecial locus
        let k = ctx(7);
        let roots = [0, 1, 3, 4, 5, 6].map(|v| Root::Finite(k.from_i64(v)));
        let c = k.from_coords(1, 2);
        let curve = HyperellipticCurve::from_roots(c, roots.to_vec()).unwrap();
        let n = count_points(&curve);
        for s in splittings(&curve).unwrap() {
            match richelot_codomain(&s).unwrap() {
                RichelotResult::Genus2 { curve: cod, .. } => assert_eq!(count_points(&cod), n),
                RichelotResult::SplitProduct => assert!(is_decomposed_compatible(&s)),
            }
        }
    }

    #[test]
    fn glued_curves_have_a_product_splitting() {
        for p in [7u64, 11] {
            let k = ctx(p);
            let params: Vec<Fp2Element> = k
                .elements()
                .filter(|t| !t.is_zero() && !t.is_one())
                .filter(|&t| crate::curves::is_supersingular_legendre(t).unwrap())
                .collect();
            let mut found = 0;
            for &t1 in &params {
                for &t2 in &params {
                    let Ok(curve) = glue_from_legendre_pair(t1, t2) else {
                        continue;
                    };
                    let Ok(explicit) = curve.with_explicit_roots() else {
                        continue;
                    };
                    let all = splittings(&explicit).unwrap();
                    let products: Vec<&QuadraticSplitting> = all.iter().filter(|s| delta(s).is_zero()).collect();
                    assert!(!products.is_empty());
                    for s in &all {
                        assert_eq!(delta(s).is_zero(), is_decomposed_compatible(s));
                        assert_eq!(
                            richelot_codomain(s).unwrap() == RichelotResult::SplitProduct,
                            delta(s).is_zero()
                        );
                    }
                    let key = canonical_key_of_explicit(&explicit);
                    assert!(orbit_120(&key).len() < 120);
                    found += 1;
                }
            }
            assert!(found > 0);
        }
    }

    fn canonical_key_of_explicit(curve: &HyperellipticCurve) -> RosenhainTriple {
        let roots: [Root; 6] = curve.weierstrass_points().unwrap().try_into().unwrap();
        canonical_form_of_roots(&roots, curve.rhs().leading_coefficient()).unwrap()
    }

    #[test]
    fn generic_curve_has_no_product_splitting() {
        let k = ctx(13);
        let t = RosenhainTriple::new(k.from_i64(3), k.from_i64(5), k.from_coords(2, 7)).unwrap();
        assert_eq!(orbit_120(&t).len(), 120);
        for s in splittings(&t.curve()).unwrap() {
            assert!(!delta(&s).is_zero());
            assert!(!is_decomposed_compatible(&s));
        }
        let _ = canonical_key(&t);
    }

    #[test]
    fn involution_swaps_pairs() {
        let k = ctx(13);
        // x -> 5/x swaps (0, inf), (1, 5) and (-1, -5)
        let s = QuadraticSplitting::from_pairs(
            k.one(),
            [
                [Root::Finite(k.zero()), Root::Infinity],
                [Root::Finite(k.from_i64(1)), Root::Finite(k.from_i64(5))],
                [Root::Finite(k.from_i64(-1)), Root::Finite(k.from_i64(-5))],
            ],
        );
        assert!(delta(&s).is_zero());
        let inv = pair_involution(&s).unwrap();
        assert_eq!(inv.apply(Root::Finite(k.from_i64(2))), Root::Finite(k.from_i64(9)));
        assert_eq!(richelot_codomain(&s).unwrap(), RichelotResult::SplitProduct);
    }
}
