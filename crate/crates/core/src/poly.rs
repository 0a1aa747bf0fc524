//! Dense univariate polynomials over F_{p^2}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::ff::{Fp2Context, Fp2Element};

/// Coefficients in ascending degree order with trailing zeros trimmed, so the
/// zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Fp2Element>,
    ctx: Fp2Context,
}

impl Polynomial {
    pub fn new(ctx: Fp2Context, coeffs: Vec<Fp2Element>) -> Self {
        let mut poly = Self { coeffs, ctx };
        poly.trim();
        poly
    }

    pub fn zero(ctx: Fp2Context) -> Self {
        Self {
            coeffs: Vec::new(),
            ctx,
        }
    }

    pub fn one(ctx: Fp2Context) -> Self {
        Self::constant(ctx.one())
    }

    pub fn constant(c: Fp2Element) -> Self {
        Self::new(c.ctx(), vec![c])
    }

    /// The monomial X.
    pub fn x(ctx: Fp2Context) -> Self {
        Self::new(ctx, vec![ctx.zero(), ctx.one()])
    }

    /// X - r.
    pub fn linear(r: Fp2Element) -> Self {
        Self::new(r.ctx(), vec![-r, r.ctx().one()])
    }

    /// Monic product of (X - r) over the given roots.
    pub fn from_roots(ctx: Fp2Context, roots: &[Fp2Element]) -> Self {
        roots.iter().fold(Self::one(ctx), |acc, &r| acc * Self::linear(r))
    }

    /// From small signed integer coefficients (ascending degree).
    pub fn from_i64s(ctx: Fp2Context, coeffs: &[i64]) -> Self {
        Self::new(ctx, coeffs.iter().map(|&c| ctx.from_i64(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> Fp2Context {
        self.ctx
    }

    pub fn coeffs(&self) -> &[Fp2Element] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of X^k, zero beyond the degree.
    pub fn coefficient(&self, k: usize) -> Fp2Element {
        self.coeffs.get(k).copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn leading_coefficient(&self) -> Fp2Element {
        self.coeffs.last().copied().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn eval(&self, x: Fp2Element) -> Fp2Element {
        self.coeffs.iter().rev().fold(self.ctx.zero(), |acc, &c| acc * x + c)
    }

    pub fn scale(&self, s: Fp2Element) -> Self {
        Self::new(self.ctx, self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient().inv() {
            Ok(inv) => self.scale(inv),
            Err(_) => self.clone(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::one(self.ctx);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// k * c_k shifted down one place, with k taken mod p.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| self.ctx.from_i64((k as u64 % self.ctx.p()) as i64) * c)
            .collect();
        Self::new(self.ctx, coeffs)
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead_inv = divisor.leading_coefficient().inv().ok()?;
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return Some((Self::zero(self.ctx), self.clone()));
        }
        let mut quot = vec![self.ctx.zero(); n - dd];
        for i in (0..n - dd).rev() {
            let q = rem[i + dd] * lead_inv;
            quot[i] = q;
            if q.is_zero() {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= q * d;
            }
        }
        rem.truncate(dd);
        Some((Self::new(self.ctx, quot), Self::new(self.ctx, rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// True iff gcd(f, f') is constant. The zero polynomial is not squarefree.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Roots in F_{p^2} of a nonzero polynomial of degree at most two,
    /// listed with multiplicity. A non-split quadratic gives an empty list.
    pub fn quadratic_roots(&self) -> Vec<Fp2Element> {
        match self.degree() {
            None | Some(0) => Vec::new(),
            Some(1) => {
                let root = -self.coefficient(0) * self.coefficient(1).inv().expect("leading");
                vec![root]
            }
            Some(2) => {
                let (c, b, a) = (self.coefficient(0), self.coefficient(1), self.coefficient(2));
                let ctx = self.ctx;
                let disc = b * b - ctx.from_i64(4) * a * c;
                let Some(s) = disc.sqrt() else {
                    return Vec::new();
                };
                let denom = (ctx.from_i64(2) * a).inv().expect("p is odd and a != 0");
                let mut roots = vec![(-b + s) * denom, (-b - s) * denom];
                roots.sort();
                roots
            }
            Some(d) => panic!("quadratic_roots called on a polynomial of degree {d}"),
        }
    }

    /// All roots in F_{p^2} found by evaluating at every element. Only meant
    /// for the small fields used in exhaustive checks.
    pub fn roots_by_search(&self) -> Vec<Fp2Element> {
        self.ctx.elements().filter(|&x| self.eval(x).is_zero()).collect()
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coefficient(k) + rhs.coefficient(k)).collect();
        Polynomial::new(self.ctx, coeffs)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coefficient(k) - rhs.coefficient(k)).collect();
        Polynomial::new(self.ctx, coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.ctx, self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.ctx);
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(self.ctx, out)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(p: u64) -> Fp2Context {
        Fp2Context::new(p).unwrap()
    }

    #[test]
    fn pow_and_mul_examples() {
        let k = ctx(7);
        let f = Polynomial::from_i64s(k, &[-1, 0, 0, 0, 0, 1]);
        assert_eq!(f.pow(0), Polynomial::one(k));
        let k3 = ctx(3);
        let g = Polynomial::from_i64s(k3, &[-1, 0, 0, 0, 0, 1]);
        assert_eq!(g.pow(1), g);
        let prod = &Polynomial::from_i64s(k, &[-1, 1]) * &Polynomial::from_i64s(k, &[1, 1]);
        assert_eq!(prod, Polynomial::from_i64s(k, &[-1, 0, 1]));
        // (x+1)^7 = x^7 + 1 in characteristic 7
        let h = Polynomial::from_i64s(k, &[1, 1]).pow(7);
        assert_eq!(h, Polynomial::from_i64s(k, &[1, 0, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn derivative_examples() {
        let k7 = ctx(7);
        assert!(Polynomial::constant(k7.from_i64(5)).derivative().is_zero());
        assert_eq!(
            Polynomial::from_i64s(k7, &[-1, 0, 1]).derivative(),
            Polynomial::from_i64s(k7, &[0, 2])
        );
        let k3 = ctx(3);
        assert_eq!(
            Polynomial::from_i64s(k3, &[0, 1, 0, 1]).derivative(),
            Polynomial::one(k3)
        );
    }

    #[test]
    fn coefficient_examples() {
        let k = ctx(5);
        let f = Polynomial::from_i64s(k, &[-1, 0, 0, 0, 0, 1]);
        assert!(f.coefficient(5).is_one());
        assert!(f.coefficient(3).is_zero());
        assert!(f.coefficient(50).is_zero());
        assert!(Polynomial::zero(k).coefficient(0).is_zero());
        assert_eq!(Polynomial::zero(k).degree(), None);
    }

    #[test]
    fn quadratic_roots_examples() {
        let k7 = ctx(7);
        assert_eq!(
            Polynomial::from_i64s(k7, &[-1, 0, 1]).quadratic_roots(),
            vec![k7.from_i64(1), k7.from_i64(6)]
        );
        assert_eq!(
            Polynomial::from_i64s(k7, &[-3, 1]).quadratic_roots(),
            vec![k7.from_i64(3)]
        );
        let k3 = ctx(3);
        let g = Polynomial::from_i64s(k3, &[1, 0, 1]);
        let mut oracle = g.roots_by_search();
        oracle.sort();
        assert_eq!(oracle.len(), 2);
        assert_eq!(g.quadratic_roots(), oracle);
    }

    #[test]
    fn quadratic_roots_exhaustive_against_search() {
        let k = ctx(5);
        for a in k.elements().skip(1).step_by(3) {
            for b in k.elements().step_by(2) {
                for c in k.elements().step_by(2) {
                    let g = Polynomial::new(k, vec![c, b, a]);
                    let mut search = g.roots_by_search();
                    let roots = g.quadratic_roots();
                    let mut distinct = roots.clone();
                    distinct.dedup();
                    search.sort();
                    assert_eq!(distinct, search, "{g}");
                }
            }
        }
    }

    #[test]
    fn squarefree_detection() {
        let k = ctx(7);
        let f = Polynomial::from_roots(k, &[k.from_i64(1), k.from_i64(2), k.from_i64(3)]);
        assert!(f.is_squarefree());
        let g = Polynomial::from_roots(k, &[k.from_i64(1), k.from_i64(2), k.from_i64(2)]);
        assert!(!g.is_squarefree());
        // x^7 - 2 = (x - 2)^7 in characteristic 7
        assert!(!Polynomial::from_i64s(k, &[-2, 0, 0, 0, 0, 0, 0, 1]).is_squarefree());
    }

    fn poly_strategy(p: u64, max_len: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((0..p as i64, 0..p as i64), 0..max_len).prop_map(move |cs| {
            let k = ctx(p);
            Polynomial::new(k, cs.into_iter().map(|(a, b)| k.from_coords(a, b)).collect())
        })
    }

    proptest! {
        #[test]
        fn degree_of_product(f in poly_strategy(11, 8), g in poly_strategy(11, 8)) {
            let prod = &f * &g;
            match (f.degree(), g.degree()) {
                (Some(a), Some(b)) => prop_assert_eq!(prod.degree(), Some(a + b)),
                _ => prop_assert!(prod.is_zero()),
            }
        }

        #[test]
        fn pow_commutes_with_evaluation(f in poly_strategy(13, 7), x in (0i64..13, 0i64..13)) {
            let k = ctx(13);
            let x = k.from_coords(x.0, x.1);
            prop_assert_eq!(f.pow(6).eval(x), f.eval(x).pow(6));
        }

        #[test]
        fn division_identity(f in poly_strategy(7, 9), g in poly_strategy(7, 5)) {
            prop_assume!(!g.is_zero());
            let (q, r) = f.div_rem(&g).unwrap();
            prop_assert_eq!(&(&q * &g) + &r, f);
            prop_assert!(r.degree() < g.degree());
        }

        #[test]
        fn quadratic_roots_are_roots(g in poly_strategy(19, 4)) {
            prop_assume!(matches!(g.degree(), Some(1) | Some(2)));
            for r in g.quadratic_roots() {
                prop_assert!(g.eval(r).is_zero());
            }
        }
    }
}
