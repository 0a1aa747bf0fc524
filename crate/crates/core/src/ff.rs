//! Arithmetic in F_p and F_{p^2} for word-sized odd primes.
//!
//! F_{p^2} is realized as F_p[u]/(u^2 - n) where n is the smallest positive
//! quadratic non-residue modulo p. Every element carries its (tiny, `Copy`)
//! field context so the usual operator traits can be implemented; mixing
//! elements of different fields is a logic error caught by debug assertions.
//!
//! Elements are totally ordered by the integer key `c0 + c1 * p`. The order
//! has no algebraic meaning; it only makes canonical choices (square roots,
//! Rosenhain keys) deterministic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Largest supported characteristic is `MAX_PRIME_EXCLUSIVE - 1`.
pub const MAX_PRIME_EXCLUSIVE: u64 = 1 << 20;

/// The prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_PRIME_EXCLUSIVE {
            return Err(Error::PrimeOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.p as u64 - 2))
    }

    /// Legendre symbol in {-1, 0, 1}.
    pub fn legendre(&self, a: u32) -> i8 {
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Smallest positive quadratic non-residue.
    pub fn smallest_nonresidue(&self) -> u32 {
        (2..self.p)
            .find(|&n| self.legendre(n) == -1)
            .expect("every odd prime has a quadratic non-residue")
    }
}

/// Deterministic primality for the supported range (trial division).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The field F_{p^2} = F_p[u]/(u^2 - n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp2Context {
    base: PrimeField,
    nonresidue: u32,
}

impl Fp2Context {
    pub fn new(p: u64) -> Result<Self> {
        let base = PrimeField::new(p)?;
        Ok(Self {
            base,
            nonresidue: base.smallest_nonresidue(),
        })
    }

    #[inline]
    pub fn base(&self) -> PrimeField {
        self.base
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.base.p as u64
    }

    #[inline]
    pub fn nonresidue(&self) -> u32 {
        self.nonresidue
    }

    /// Number of elements, p^2.
    #[inline]
    pub fn order(&self) -> u64 {
        self.p() * self.p()
    }

    /// Builds c0 + c1*u from coordinates that must already be reduced.
    #[inline]
    pub fn element(&self, c0: u32, c1: u32) -> Fp2Element {
        debug_assert!(c0 < self.base.p && c1 < self.base.p);
        Fp2Element { c0, c1, ctx: *self }
    }

    pub fn from_i64(&self, v: i64) -> Fp2Element {
        self.element(self.base.reduce(v), 0)
    }

    pub fn from_coords(&self, c0: i64, c1: i64) -> Fp2Element {
        self.element(self.base.reduce(c0), self.base.reduce(c1))
    }

    #[inline]
    pub fn zero(&self) -> Fp2Element {
        self.element(0, 0)
    }

    #[inline]
    pub fn one(&self) -> Fp2Element {
        self.element(1, 0)
    }

    /// The adjoined square root of the non-residue.
    pub fn u(&self) -> Fp2Element {
        self.element(0, 1)
    }

    /// Inverse of [`Fp2Element::key`].
    pub fn from_key(&self, key: u64) -> Fp2Element {
        debug_assert!(key < self.order());
        self.element((key % self.p()) as u32, (key / self.p()) as u32)
    }

    /// All p^2 elements in key order.
    pub fn elements(&self) -> impl Iterator<Item = Fp2Element> + Clone + '_ {
        let ctx = *self;
        (0..self.order()).map(move |k| ctx.from_key(k))
    }

    /// The smallest non-square of F_{p^2} under the key order.
    pub fn non_square(&self) -> Fp2Element {
        // all of F_p is square in F_{p^2}
        (self.p()..self.order())
            .map(|k| self.from_key(k))
            .find(|x| !x.is_square())
            .expect("F_{p^2}^* has non-squares")
    }

    /// Parses `c0` or `c0+c1*u` (also `c1*u`); integers may be negative and
    /// are reduced modulo p.
    pub fn parse(&self, text: &str) -> Result<Fp2Element> {
        let bad = || Error::Parse(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        let parse_int = |t: &str| -> Result<i64> { t.parse::<i64>().map_err(|_| bad()) };
        let parse_u_term = |t: &str| -> Result<i64> {
            let coeff = t.strip_suffix("*u").or_else(|| t.strip_suffix('u')).ok_or_else(bad)?;
            match coeff {
                "" | "+" => Ok(1),
                "-" => Ok(-1),
                c => parse_int(c),
            }
        };
        if !s.ends_with('u') {
            return Ok(self.from_i64(parse_int(&s)?));
        }
        // split at the last sign that is not the leading one
        let split = s
            .char_indices()
            .skip(1)
            .filter(|&(_, ch)| ch == '+' || ch == '-')
            .map(|(i, _)| i)
            .last();
        match split {
            Some(i) => {
                let c0 = parse_int(&s[..i])?;
                let c1 = parse_u_term(&s[i..])?;
                Ok(self.from_coords(c0, c1))
            }
            None => Ok(self.from_coords(0, parse_u_term(&s)?)),
        }
    }
}

/// An element c0 + c1*u of F_{p^2}.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2Element {
    c0: u32,
    c1: u32,
    ctx: Fp2Context,
}

impl Fp2Element {
    #[inline]
    pub fn c0(&self) -> u32 {
        self.c0
    }

    #[inline]
    pub fn c1(&self) -> u32 {
        self.c1
    }

    #[inline]
    pub fn ctx(&self) -> Fp2Context {
        self.ctx
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.c0 == 1 && self.c1 == 0
    }

    /// Total order key `c0 + c1 * p`.
    #[inline]
    pub fn key(&self) -> u64 {
        self.c0 as u64 + self.c1 as u64 * self.ctx.p()
    }

    /// True iff the element lies in F_p.
    #[inline]
    pub fn is_in_base_field(&self) -> bool {
        self.c1 == 0
    }

    #[inline]
    pub fn square(self) -> Self {
        self * self
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut acc = self.ctx.one();
        let mut base = self;
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    /// c0 - c1*u, which equals x^p.
    #[inline]
    pub fn conjugate(self) -> Self {
        let f = self.ctx.base;
        self.ctx.element(self.c0, f.neg(self.c1))
    }

    pub fn frobenius(self) -> Self {
        self.conjugate()
    }

    /// x * x^p = c0^2 - n c1^2, an element of F_p.
    #[inline]
    pub fn norm(&self) -> u32 {
        let f = self.ctx.base;
        f.sub(
            f.mul(self.c0, self.c0),
            f.mul(self.ctx.nonresidue, f.mul(self.c1, self.c1)),
        )
    }

    pub fn inv(self) -> Result<Self> {
        let f = self.ctx.base;
        let n_inv = f.inv(self.norm())?;
        let c = self.conjugate();
        Ok(self.ctx.element(f.mul(c.c0, n_inv), f.mul(c.c1, n_inv)))
    }

    /// Quadratic character on F_{p^2}: 0 at zero, else +-1.
    ///
    /// x is a square in F_{p^2} iff its norm is a square in F_p, because the
    /// norm map is onto F_p^* and x^((p^2-1)/2) = N(x)^((p-1)/2).
    #[inline]
    pub fn quadratic_character(&self) -> i8 {
        self.ctx.base.legendre(self.norm())
    }

    /// Zero counts as a square.
    #[inline]
    pub fn is_square(&self) -> bool {
        self.quadratic_character() >= 0
    }

    /// x^((p^2-1)/4) == 1; zero counts as a fourth power.
    pub fn is_fourth_power(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        if !self.is_square() {
            return false;
        }
        self.pow((self.ctx.order() - 1) / 4).is_one()
    }

    /// Canonical square root (the smaller of +-r under the key order), or
    /// `None` for non-squares. Tonelli-Shanks in F_{p^2}^*.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(*self);
        }
        if !self.is_square() {
            return None;
        }
        let ctx = self.ctx;
        let order = ctx.order() - 1;
        let s = order.trailing_zeros();
        let q = order >> s;
        let z = ctx.non_square();

        let mut m = s;
        let mut c = z.pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow(q.div_ceil(2));
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t;
            while !t2.is_one() {
                t2 = t2.square();
                i += 1;
            }
            debug_assert!(i < m);
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            r *= b;
            c = b.square();
            t *= c;
            m = i;
        }
        debug_assert_eq!(r.square(), *self);
        let neg = -r;
        Some(if neg.key() < r.key() { neg } else { r })
    }
}

impl Ord for Fp2Element {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.ctx, other.ctx);
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Fp2Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fp2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c1 == 0 {
            write!(f, "{}", self.c0)
        } else {
            write!(f, "{}+{}*u", self.c0, self.c1)
        }
    }
}

impl fmt::Debug for Fp2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self, self.ctx.p())
    }
}

impl serde::Serialize for Fp2Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Add for Fp2Element {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.ctx, rhs.ctx);
        let f = self.ctx.base;
        self.ctx.element(f.add(self.c0, rhs.c0), f.add(self.c1, rhs.c1))
    }
}

impl Sub for Fp2Element {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.ctx, rhs.ctx);
        let f = self.ctx.base;
        self.ctx.element(f.sub(self.c0, rhs.c0), f.sub(self.c1, rhs.c1))
    }
}

impl Neg for Fp2Element {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        let f = self.ctx.base;
        self.ctx.element(f.neg(self.c0), f.neg(self.c1))
    }
}

impl Mul for Fp2Element {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.ctx, rhs.ctx);
        let p = self.ctx.base.p as u64;
        let n = self.ctx.nonresidue as u64;
        let (a0, a1) = (self.c0 as u64, self.c1 as u64);
        let (b0, b1) = (rhs.c0 as u64, rhs.c1 as u64);
        // all partial products are below 2^40, so the sums fit comfortably
        let c0 = (a0 * b0 + n * ((a1 * b1) % p)) % p;
        let c1 = (a0 * b1 + a1 * b0) % p;
        self.ctx.element(c0 as u32, c1 as u32)
    }
}

impl AddAssign for Fp2Element {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp2Element {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for Fp2Element {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> Fp2Context {
        Fp2Context::new(p).unwrap()
    }

    // Oracle: the set of squares found by squaring every element.
    fn squares_by_enumeration(ctx: &Fp2Context) -> std::collections::HashSet<u64> {
        ctx.elements().map(|x| x.square().key()).collect()
    }

    #[test]
    fn rejects_bad_primes() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeField::new(2), Err(Error::EvenCharacteristic));
        assert_eq!(PrimeField::new(1 << 20), Err(Error::PrimeOutOfRange(1 << 20)));
        assert!(PrimeField::new(1_048_573).is_ok());
    }

    #[test]
    fn nonresidue_is_smallest() {
        assert_eq!(f(3).nonresidue(), 2);
        assert_eq!(f(7).nonresidue(), 3);
        assert_eq!(f(13).nonresidue(), 2);
        assert_eq!(f(17).nonresidue(), 3);
    }

    #[test]
    fn small_products_and_inverses() {
        let k = f(7);
        assert_eq!(k.from_i64(3) * k.from_i64(5), k.from_i64(1));
        assert_eq!(k.from_i64(4).inv().unwrap(), k.from_i64(2));
        assert_eq!(k.zero().inv(), Err(Error::DivisionByZero));

        let k3 = f(3);
        assert_eq!(k3.u() * k3.u(), k3.from_i64(k3.nonresidue() as i64));
    }

    #[test]
    fn inverse_of_every_nonzero_element() {
        for p in [3, 5, 7, 11] {
            let k = f(p);
            for x in k.elements().skip(1) {
                assert!((x * x.inv().unwrap()).is_one());
            }
        }
    }

    #[test]
    fn squares_match_enumeration() {
        for p in [3, 5, 7, 11, 13] {
            let k = f(p);
            let sq = squares_by_enumeration(&k);
            let exp = (k.order() - 1) / 2;
            for x in k.elements() {
                assert_eq!(x.is_square(), sq.contains(&x.key()), "{x:?}");
                if !x.is_zero() {
                    assert_eq!(x.is_square(), x.pow(exp).is_one());
                }
            }
        }
    }

    #[test]
    fn fourth_powers_match_enumeration() {
        for p in [3, 5, 7, 11] {
            let k = f(p);
            let fourth: std::collections::HashSet<u64> = k.elements().map(|x| x.square().square().key()).collect();
            for x in k.elements() {
                assert_eq!(x.is_fourth_power(), fourth.contains(&x.key()), "{x:?}");
            }
        }
    }

    #[test]
    fn named_square_examples() {
        let k3 = f(3);
        assert!(k3.from_i64(2).is_square());
        assert!(k3.one().is_square());
        // fourth powers of F_9^* are {1, -1}
        assert!(k3.from_i64(2).is_fourth_power());
        assert!(!k3.u().is_fourth_power());
        // u^2 = -1 in F_9
        let u = k3.u();
        assert!(!u.square().is_one());
        assert!(u.pow(4).is_one());

        let k7 = f(7);
        assert!(k7.from_i64(6).is_square());
        for a in 1..7 {
            assert!(k7.from_i64(a).is_square());
        }
    }

    #[test]
    fn sqrt_examples() {
        let k7 = f(7);
        assert_eq!(k7.from_i64(4).sqrt(), Some(k7.from_i64(2)));
        assert_eq!(k7.zero().sqrt(), Some(k7.zero()));

        let k3 = f(3);
        // oracle: the roots of x^2 = -1 in F_9 by exhaustive search
        let roots: Vec<_> = k3.elements().filter(|x| x.square() == k3.from_i64(2)).collect();
        assert_eq!(roots.len(), 2);
        let expected = *roots.iter().min().unwrap();
        assert_eq!(k3.from_i64(2).sqrt(), Some(expected));
    }

    #[test]
    fn sqrt_exhaustive_small_primes() {
        for p in [3, 5, 7, 11, 13, 17] {
            let k = f(p);
            for x in k.elements() {
                match x.sqrt() {
                    Some(r) => {
                        assert_eq!(r.square(), x);
                        assert!(r.key() <= (-r).key());
                    }
                    None => assert!(!x.is_square()),
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_base_field_exactly() {
        for p in [3, 5, 7, 11] {
            let k = f(p);
            for x in k.elements() {
                assert_eq!(x.pow(p), x.frobenius());
                assert_eq!(x.frobenius() == x, x.is_in_base_field());
            }
        }
    }

    #[test]
    fn text_encoding() {
        let k = f(7);
        assert_eq!(k.from_coords(3, 0).to_string(), "3");
        assert_eq!(k.from_coords(3, 2).to_string(), "3+2*u");
        assert_eq!(k.from_coords(0, 1).to_string(), "0+1*u");
        assert_eq!(k.parse("3+2*u").unwrap(), k.from_coords(3, 2));
        assert_eq!(k.parse("-1").unwrap(), k.from_i64(6));
        assert_eq!(k.parse("u").unwrap(), k.u());
        assert_eq!(k.parse("2-u").unwrap(), k.from_coords(2, -1));
        assert_eq!(k.parse(" 4 + 5*u ").unwrap(), k.from_coords(4, 5));
        assert!(k.parse("").is_err());
        assert!(k.parse("x").is_err());
        assert!(k.parse("1+2*v").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1024))]

        #[test]
        fn text_roundtrip(p_idx in 0usize..5, c0 in 0u32..1000, c1 in 0u32..1000) {
            let p = [3u64, 7, 101, 1009, 65537][p_idx];
            let k = f(p);
            let x = k.from_coords(c0 as i64, c1 as i64);
            prop_assert_eq!(k.parse(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn square_tests_agree(p_idx in 0usize..4, c0 in 0u32..100_000, c1 in 0u32..100_000) {
            let p = [101u64, 1009, 65537, 1_048_573][p_idx];
            let k = f(p);
            let x = k.from_coords(c0 as i64, c1 as i64);
            prop_assume!(!x.is_zero());
            let euler = x.pow((k.order() - 1) / 2).is_one();
            prop_assert_eq!(x.is_square(), euler);
            prop_assert_eq!(x.sqrt().is_some(), euler);
            if let Some(r) = x.sqrt() {
                prop_assert_eq!(r * r, x);
            }
            if x.is_fourth_power() {
                prop_assert!(x.is_square());
            }
            prop_assert!((x * x.inv().unwrap()).is_one());
        }

        #[test]
        fn field_axioms(p_idx in 0usize..3, a in (0i64..2000, 0i64..2000), b in (0i64..2000, 0i64..2000), c in (0i64..2000, 0i64..2000)) {
            let p = [7u64, 101, 1009][p_idx];
            let k = f(p);
            let (a, b, c) = (k.from_coords(a.0, a.1), k.from_coords(b.0, b.1), k.from_coords(c.0, c.1));
            prop_assert_eq!(a * (b + c), a * b + a * c);
            prop_assert_eq!((a * b) * c, a * (b * c));
            prop_assert_eq!(a - b + b, a);
            prop_assert_eq!(a + (-a), k.zero());
        }
    }
}
