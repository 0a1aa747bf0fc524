//! Hyperelliptic curves y^2 = c*f(x) over F_{p^2}, the Cartier-Manin
//! superspeciality test, Legendre elliptic curves and exact point counting.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{Fp2Context, Fp2Element};
use crate::poly::Polynomial;

/// Upper bound on p^2 for which roots of an explicit polynomial model are
/// found by exhaustive evaluation.
const ROOT_SEARCH_LIMIT: u64 = 1 << 24;

/// A point of the projective line: a finite x-coordinate or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Root {
    Finite(Fp2Element),
    Infinity,
}

impl Root {
    pub fn finite(&self) -> Option<Fp2Element> {
        match self {
            Root::Finite(x) => Some(*x),
            Root::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Root::Infinity)
    }
}

impl From<Fp2Element> for Root {
    fn from(x: Fp2Element) -> Self {
        Root::Finite(x)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Finite(x) => write!(f, "{x}"),
            Root::Infinity => write!(f, "inf"),
        }
    }
}

/// How the right-hand side was supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveModel {
    /// Distinct Weierstrass points; at most one may be infinity, which means
    /// the corresponding factor is left out of f.
    Roots(Vec<Root>),
    /// A squarefree polynomial whose roots need not be known.
    Poly(Polynomial),
}

/// y^2 = c * f(x) with f squarefree of degree 2g+1 or 2g+2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticCurve {
    c: Fp2Element,
    model: CurveModel,
    f: Polynomial,
    genus: usize,
}

impl HyperellipticCurve {
    pub fn from_roots(c: Fp2Element, roots: Vec<Root>) -> Result<Self> {
        let ctx = c.ctx();
        if c.is_zero() {
            return Err(Error::SingularCurve);
        }
        let infinities = roots.iter().filter(|r| r.is_infinity()).count();
        let mut finite: Vec<Fp2Element> = roots.iter().filter_map(Root::finite).collect();
        let degree = finite.len();
        if degree < 3 {
            return Err(Error::UnsupportedGenus(0));
        }
        finite.sort();
        if infinities > 1 || finite.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::SingularConfiguration);
        }
        // infinity is a Weierstrass point only for odd-degree models
        if infinities == 1 && degree.is_multiple_of(2) {
            return Err(Error::SingularConfiguration);
        }
        let f = Polynomial::from_roots(ctx, &roots.iter().filter_map(Root::finite).collect::<Vec<_>>());
        Ok(Self {
            c,
            model: CurveModel::Roots(roots),
            f,
            genus: (degree - 1) / 2,
        })
    }

    pub fn from_poly(c: Fp2Element, f: Polynomial) -> Result<Self> {
        if c.is_zero() || !f.is_squarefree() {
            return Err(Error::SingularCurve);
        }
        let degree = f.degree().unwrap_or(0);
        if degree < 3 {
            return Err(Error::UnsupportedGenus(0));
        }
        Ok(Self {
            c,
            model: CurveModel::Poly(f.clone()),
            f,
            genus: (degree - 1) / 2,
        })
    }

    /// y^2 = x(x-1)(x-lambda)(x-mu)(x-nu).
    pub fn rosenhain(lambda: Fp2Element, mu: Fp2Element, nu: Fp2Element) -> Result<Self> {
        let ctx = lambda.ctx();
        Self::from_roots(
            ctx.one(),
            [ctx.zero(), ctx.one(), lambda, mu, nu]
                .into_iter()
                .map(Root::Finite)
                .collect(),
        )
        .map_err(|_| Error::SingularConfiguration)
    }

    /// y^2 = (x^2-1) * prod (x^2 - a_i), split into linear factors when
    /// every a_i has a square root in F_{p^2}.
    pub fn even_model(params: &[Fp2Element]) -> Result<Self> {
        let ctx = params.first().ok_or(Error::UnsupportedGenus(0))?.ctx();
        let mut all = vec![ctx.one()];
        all.extend_from_slice(params);
        let mut sorted = all.clone();
        sorted.sort();
        if sorted.iter().any(|a| a.is_zero()) || sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::SingularConfiguration);
        }
        let sqrts: Option<Vec<Fp2Element>> = all.iter().map(|a| a.sqrt()).collect();
        match sqrts {
            Some(sqrts) => {
                let roots = sqrts
                    .iter()
                    .flat_map(|&s| [Root::Finite(s), Root::Finite(-s)])
                    .collect();
                Self::from_roots(ctx.one(), roots)
            }
            None => Self::from_poly(ctx.one(), even_polynomial(ctx, params)),
        }
    }

    pub fn ctx(&self) -> Fp2Context {
        self.c.ctx()
    }

    pub fn p(&self) -> u64 {
        self.ctx().p()
    }

    pub fn c(&self) -> Fp2Element {
        self.c
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn model(&self) -> &CurveModel {
        &self.model
    }

    /// f, without the twist constant.
    pub fn polynomial(&self) -> &Polynomial {
        &self.f
    }

    /// c * f.
    pub fn rhs(&self) -> Polynomial {
        self.f.scale(self.c)
    }

    /// The 2g+2 Weierstrass x-coordinates, infinity last for odd degree.
    pub fn weierstrass_points(&self) -> Result<Vec<Root>> {
        match &self.model {
            CurveModel::Roots(roots) => {
                let mut out: Vec<Root> = roots.iter().copied().filter(|r| !r.is_infinity()).collect();
                if out.len() % 2 == 1 {
                    out.push(Root::Infinity);
                }
                Ok(out)
            }
            CurveModel::Poly(f) => {
                if self.ctx().order() > ROOT_SEARCH_LIMIT {
                    return Err(Error::RootsNotRational);
                }
                let roots = f.roots_by_search();
                let degree = f.degree().unwrap_or(0);
                if roots.len() != degree {
                    return Err(Error::RootsNotRational);
                }
                let mut out: Vec<Root> = roots.into_iter().map(Root::Finite).collect();
                if degree % 2 == 1 {
                    out.push(Root::Infinity);
                }
                Ok(out)
            }
        }
    }

    /// Same curve with every Weierstrass point listed explicitly.
    pub fn with_explicit_roots(&self) -> Result<Self> {
        let points = self.weierstrass_points()?;
        let lead = self.f.leading_coefficient();
        Self::from_roots(self.c * lead, points)
    }
}

impl fmt::Display for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = ({}) * ({})", self.c, self.f)
    }
}

/// (x^2 - 1) * prod (x^2 - a_i).
pub fn even_polynomial(ctx: Fp2Context, params: &[Fp2Element]) -> Polynomial {
    let factor = |a: Fp2Element| Polynomial::new(ctx, vec![-a, ctx.zero(), ctx.one()]);
    params.iter().fold(factor(ctx.one()), |acc, &a| &acc * &factor(a))
}

/// g x g matrix with entry (i, j) = coefficient of x^(i*p - j) in
/// (c f)^((p-1)/2), for 1 <= i, j <= g.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartierManinMatrix {
    entries: Vec<Vec<Fp2Element>>,
}

impl CartierManinMatrix {
    pub fn from_rhs(rhs: &Polynomial, genus: usize) -> Self {
        let p = rhs.ctx().p();
        let power = rhs.pow((p - 1) / 2);
        let entries = (1..=genus)
            .map(|i| (1..=genus).map(|j| power.coefficient(i * p as usize - j)).collect())
            .collect();
        Self { entries }
    }

    pub fn genus(&self) -> usize {
        self.entries.len()
    }

    /// Zero-based access.
    pub fn get(&self, i: usize, j: usize) -> Fp2Element {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Fp2Element>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_zero())
    }
}

impl fmt::Display for CartierManinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn cartier_manin(curve: &HyperellipticCurve) -> CartierManinMatrix {
    CartierManinMatrix::from_rhs(&curve.rhs(), curve.genus())
}

pub fn is_superspecial(curve: &HyperellipticCurve) -> bool {
    cartier_manin(curve).is_zero()
}

/// Superspeciality of y^2 = x(x-1)(x-lambda)(x-mu)(x-nu) without building a
/// curve value; the caller guarantees distinctness.
pub fn rosenhain_is_superspecial(lambda: Fp2Element, mu: Fp2Element, nu: Fp2Element) -> bool {
    let ctx = lambda.ctx();
    let f = Polynomial::from_roots(ctx, &[ctx.zero(), ctx.one(), lambda, mu, nu]);
    CartierManinMatrix::from_rhs(&f, 2).is_zero()
}

/// E: y^2 = x(x-1)(x-t).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LegendreCurve {
    t: Fp2Element,
}

impl LegendreCurve {
    pub fn new(t: Fp2Element) -> Result<Self> {
        if t.is_zero() || t.is_one() {
            return Err(Error::SingularLegendreParameter);
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> Fp2Element {
        self.t
    }

    /// H_p(t) = sum_{i=0}^{m} binom(m, i)^2 t^i with m = (p-1)/2.
    pub fn hasse_invariant(&self) -> Fp2Element {
        hasse_polynomial(self.t.ctx()).eval(self.t)
    }

    pub fn is_supersingular(&self) -> bool {
        self.hasse_invariant().is_zero()
    }

    pub fn as_curve(&self) -> HyperellipticCurve {
        let ctx = self.t.ctx();
        HyperellipticCurve::from_roots(
            ctx.one(),
            vec![Root::Finite(ctx.zero()), Root::Finite(ctx.one()), Root::Finite(self.t)],
        )
        .expect("t is not 0 or 1")
    }
}

/// The Deuring polynomial sum binom(m, i)^2 T^i, m = (p-1)/2.
pub fn hasse_polynomial(ctx: Fp2Context) -> Polynomial {
    let base = ctx.base();
    let m = ((ctx.p() - 1) / 2) as u32;
    let mut binom = 1u32;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    for i in 0..=m {
        coeffs.push(ctx.element(base.mul(binom, binom), 0));
        if i < m {
            // binom(m, i+1) = binom(m, i) * (m - i) / (i + 1); i + 1 <= m < p
            let inv = base.inv(i + 1).expect("i + 1 < p");
            binom = base.mul(base.mul(binom, m - i), inv);
        }
    }
    Polynomial::new(ctx, coeffs)
}

pub fn is_supersingular_legendre(t: Fp2Element) -> Result<bool> {
    Ok(LegendreCurve::new(t)?.is_supersingular())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Extremality {
    Maximal,
    Minimal,
    Neither,
}

impl fmt::Display for Extremality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Extremality::Maximal => "Maximal",
            Extremality::Minimal => "Minimal",
            Extremality::Neither => "Neither",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub kind: Extremality,
    pub point_count: u64,
}

/// p^2 + 1 + 2 g p.
pub fn maximal_count(p: u64, genus: usize) -> u64 {
    p * p + 1 + 2 * genus as u64 * p
}

/// p^2 + 1 - 2 g p.
pub fn minimal_count(p: u64, genus: usize) -> i64 {
    (p * p + 1) as i64 - 2 * genus as i64 * p as i64
}

pub fn classify_count(p: u64, genus: usize, point_count: u64) -> Classification {
    let kind = if point_count == maximal_count(p, genus) {
        Extremality::Maximal
    } else if point_count as i64 == minimal_count(p, genus) {
        Extremality::Minimal
    } else {
        Extremality::Neither
    };
    Classification { kind, point_count }
}

/// Counts F_{p^2}-points of hyperelliptic curves with a shared quadratic
/// character table for F_p (the character on F_{p^2} factors through the norm).
#[derive(Clone, Debug)]
pub struct PointCounter {
    ctx: Fp2Context,
    legendre: Vec<i8>,
}

impl PointCounter {
    pub fn new(ctx: Fp2Context) -> Self {
        let base = ctx.base();
        let mut legendre = vec![-1i8; ctx.p() as usize];
        legendre[0] = 0;
        for a in 1..base.modulus() {
            legendre[base.mul(a, a) as usize] = 1;
        }
        Self { ctx, legendre }
    }

    #[inline]
    pub fn chi(&self, x: Fp2Element) -> i8 {
        self.legendre[x.norm() as usize]
    }

    /// sum over x of (1 + chi(c f(x))) plus the points at infinity.
    pub fn count_rhs(&self, rhs: &Polynomial) -> u64 {
        debug_assert_eq!(rhs.ctx(), self.ctx);
        let affine: i64 = self.ctx.elements().map(|x| 1 + self.chi(rhs.eval(x)) as i64).sum();
        let degree = rhs.degree().unwrap_or(0);
        let at_infinity = if degree % 2 == 1 {
            1
        } else if self.chi(rhs.leading_coefficient()) == 1 {
            2
        } else {
            0
        };
        (affine + at_infinity) as u64
    }

    pub fn count(&self, curve: &HyperellipticCurve) -> u64 {
        self.count_rhs(&curve.rhs())
    }

    pub fn classify(&self, curve: &HyperellipticCurve) -> Classification {
        classify_count(curve.p(), curve.genus(), self.count(curve))
    }
}

pub fn count_points(curve: &HyperellipticCurve) -> u64 {
    PointCounter::new(curve.ctx()).count(curve)
}

pub fn classify(curve: &HyperellipticCurve) -> Classification {
    PointCounter::new(curve.ctx()).classify(curve)
}

/// (a, b) with b = t1/t2 and a = b (1-t2)/(1-t1).
pub fn glue_parameters(t1: Fp2Element, t2: Fp2Element) -> Result<(Fp2Element, Fp2Element)> {
    LegendreCurve::new(t1)?;
    LegendreCurve::new(t2)?;
    let one = t1.ctx().one();
    let b = t1 * t2.inv()?;
    let a = b * (one - t2) * (one - t1).inv()?;
    if a == b || a.is_zero() || b.is_zero() || a.is_one() || b.is_one() {
        return Err(Error::DegenerateGluing);
    }
    Ok((a, b))
}

/// The genus-2 curve y^2 = (x^2-1)(x^2-a)(x^2-b) whose Jacobian is
/// (2,2)-isogenous to the product of the Legendre curves with parameters t1, t2.
pub fn glue_from_legendre_pair(t1: Fp2Element, t2: Fp2Element) -> Result<HyperellipticCurve> {
    let (a, b) = glue_parameters(t1, t2)?;
    HyperellipticCurve::even_model(&[a, b]).map_err(|_| Error::DegenerateGluing)
}
