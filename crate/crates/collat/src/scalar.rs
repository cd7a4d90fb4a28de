//! Exact scalars: arbitrary-precision rationals and the Gaussian rationals ℚ(i).
//!
//! Every computation in this crate runs over [`GaussianRational`]. There is no
//! floating-point path anywhere; all results are exact field elements.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// An exact rational number in lowest terms with positive denominator.
///
/// Values that fit in machine words are stored inline; anything larger is
/// promoted to an arbitrary-precision representation. Results are demoted
/// back whenever they fit, so the representation of a given value is unique
/// and equality is structural.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    /// num/den with den > 0 and gcd(|num|, den) = 1.
    Small(i64, i64),
    /// Reduced, positive denominator, and out of `Small` range.
    Big(Box<BigRational>),
}

#[inline]
fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

#[inline]
fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Build a rational from an i128 fraction; `den` must be nonzero.
/// The fraction need not be reduced.
fn from_i128_frac(mut num: i128, mut den: i128) -> Rational {
    debug_assert!(den != 0);
    if den < 0 {
        num = -num;
        den = -den;
    }
    if num == 0 {
        return Rational(Repr::Small(0, 1));
    }
    if den == 1 {
        return if let Ok(n) = i64::try_from(num) {
            Rational(Repr::Small(n, 1))
        } else {
            Rational(Repr::Big(Box::new(BigRational::from(BigInt::from(num)))))
        };
    }
    let g = if let (Ok(n), Ok(d)) = (u64::try_from(num.unsigned_abs()), u64::try_from(den as u128))
    {
        gcd_u64(n, d) as i128
    } else {
        gcd_u128(num.unsigned_abs(), den as u128) as i128
    };
    num /= g;
    den /= g;
    if let (Ok(n), Ok(d)) = (i64::try_from(num), i64::try_from(den)) {
        Rational(Repr::Small(n, d))
    } else {
        Rational(Repr::Big(Box::new(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        ))))
    }
}

/// Demote a reduced `BigRational` if it fits in machine words.
fn from_big(b: BigRational) -> Rational {
    if let (Some(n), Some(d)) = (b.numer().to_i64(), b.denom().to_i64()) {
        Rational(Repr::Small(n, d))
    } else {
        Rational(Repr::Big(Box::new(b)))
    }
}

impl Rational {
    pub fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(Repr::Small(n, 1))
    }

    /// `num/den` in lowest terms. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        from_i128_frac(num as i128, den as i128)
    }

    pub fn from_bigint(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        from_big(BigRational::new(num, den))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// The inline (num, den) pair when the value fits machine words.
    pub fn as_small(&self) -> Option<(i64, i64)> {
        match &self.0 {
            Repr::Small(n, d) => Some((*n, *d)),
            Repr::Big(_) => None,
        }
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => {
                if *n > 0 {
                    Some(Rational(Repr::Small(*d, *n)))
                } else if *n == i64::MIN {
                    Some(from_big(self.to_big().recip()))
                } else {
                    Some(Rational(Repr::Small(-*d, -*n)))
                }
            }
            Repr::Big(b) => Some(from_big(b.recip())),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return from_i128_frac(*a as i128 + *c as i128, 1);
                }
                if b == d {
                    return from_i128_frac(*a as i128 + *c as i128, *b as i128);
                }
                let g = gcd_u64(*b as u64, *d as u64) as i128;
                let b1 = *b as i128 / g;
                let d1 = *d as i128 / g;
                // |a·d1|, |c·b1| < 2^126, so the sum cannot overflow i128.
                let num = *a as i128 * d1 + *c as i128 * b1;
                let den = b1 * *d as i128;
                from_i128_frac(num, den)
            }
            _ => from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return from_i128_frac(*a as i128 - *c as i128, 1);
                }
                if b == d {
                    return from_i128_frac(*a as i128 - *c as i128, *b as i128);
                }
                let g = gcd_u64(*b as u64, *d as u64) as i128;
                let b1 = *b as i128 / g;
                let d1 = *d as i128 / g;
                let num = *a as i128 * d1 - *c as i128 * b1;
                let den = b1 * *d as i128;
                from_i128_frac(num, den)
            }
            _ => from_big(self.to_big() - rhs.to_big()),
        }
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Rational::zero();
                }
                if *b == 1 && *d == 1 {
                    return from_i128_frac(*a as i128 * *c as i128, 1);
                }
                // Cross-cancel first so the product is already reduced.
                let g1 = gcd_u64(a.unsigned_abs(), *d as u64) as i128;
                let g2 = gcd_u64(c.unsigned_abs(), *b as u64) as i128;
                let num = (*a as i128 / g1) * (*c as i128 / g2);
                let den = (*b as i128 / g2) * (*d as i128 / g1);
                if let (Ok(n), Ok(dd)) = (i64::try_from(num), i64::try_from(den)) {
                    Rational(Repr::Small(n, dd))
                } else {
                    Rational(Repr::Big(Box::new(BigRational::new(
                        BigInt::from(num),
                        BigInt::from(den),
                    ))))
                }
            }
            _ => from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        let r = rhs.recip().expect("division by zero");
        self * &r
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(n, d) => {
                if *n == i64::MIN {
                    from_big(-self.to_big())
                } else {
                    Rational(Repr::Small(-*n, *d))
                }
            }
            Repr::Big(b) => from_big(-(**b).clone()),
        }
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        // Representations are canonical, so mixed variants are never equal.
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A Gaussian rational `re + im·i` with exact rational components.
///
/// This is the computable subfield of ℂ over which the whole crate works.
#[derive(Clone, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::zero(),
        }
    }

    pub fn one() -> Self {
        GaussianRational {
            re: Rational::one(),
            im: Rational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational {
            re: Rational::from_int(n),
            im: Rational::zero(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        GaussianRational {
            re: r,
            im: Rational::zero(),
        }
    }

    /// `a/b + (c/d)i` from integer parts.
    pub fn from_parts(a: i64, b: i64, c: i64, d: i64) -> Self {
        GaussianRational {
            re: Rational::new(a, b),
            im: Rational::new(c, d),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// |z|² = re² + im², an exact rational.
    pub fn norm_sqr(&self) -> Rational {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm_sqr();
        let r = n.recip()?;
        Some(GaussianRational {
            re: &self.re * &r,
            im: &(-&self.im) * &r,
        })
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        // Real-by-real is by far the most common case in practice.
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational {
                re: &self.re * &rhs.re,
                im: Rational::zero(),
            };
        }
        let ac = &self.re * &rhs.re;
        let bd = &self.im * &rhs.im;
        let ad = &self.re * &rhs.im;
        let bc = &self.im * &rhs.re;
        GaussianRational {
            re: &ac - &bd,
            im: &ad + &bc,
        }
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        let inv = rhs.inverse().expect("division by zero");
        self * &inv
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned_binop {
    ($t:ty, $trait:ident, $method:ident) => {
        impl $trait for $t {
            type Output = $t;
            fn $method(self, rhs: $t) -> $t {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Rational, Add, add);
forward_owned_binop!(Rational, Sub, sub);
forward_owned_binop!(Rational, Mul, mul);
forward_owned_binop!(Rational, Div, div);
forward_owned_binop!(GaussianRational, Add, add);
forward_owned_binop!(GaussianRational, Sub, sub);
forward_owned_binop!(GaussianRational, Mul, mul);
forward_owned_binop!(GaussianRational, Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl PartialOrd for GaussianRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on (re, im). Not a field order; used only to make
/// enumerations and canonical choices deterministic.
impl Ord for GaussianRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let write_im = |f: &mut fmt::Formatter<'_>, im: &Rational| -> fmt::Result {
            if im.is_one() {
                write!(f, "i")
            } else {
                write!(f, "{im}i")
            }
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-")?;
                return write_im(f, &self.im.abs());
            }
            return write_im(f, &self.im);
        }
        write!(f, "{}", self.re)?;
        if self.im.is_negative() {
            write!(f, "-")?;
            write_im(f, &self.im.abs())
        } else {
            write!(f, "+")?;
            write_im(f, &self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error produced when scalar text does not match the grammar
/// `rational ["+"|"-" rational "i"] | rational "i"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScalarError {
    /// Byte offset into the input where the problem was detected.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.pos + 1, self.msg)
    }
}

impl std::error::Error for ParseScalarError {}

struct ScalarParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ScalarParser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseScalarError> {
        Err(ParseScalarError {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat_sign(&mut self) -> bool {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseScalarError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap())
    }

    /// One term: `[digits ["/" digits]] ["i"]` with an already-consumed sign.
    /// A bare `i` is the imaginary unit. Returns (value, is_imaginary).
    fn term(&mut self, negative: bool) -> Result<(Rational, bool), ParseScalarError> {
        if self.peek() == Some(b'i') {
            self.pos += 1;
            let one = if negative {
                Rational::from_int(-1)
            } else {
                Rational::one()
            };
            return Ok((one, true));
        }
        let num_str = self.digits()?;
        let mut num: BigInt = num_str.parse().unwrap();
        if negative {
            num = -num;
        }
        let den: BigInt = if self.peek() == Some(b'/') {
            self.pos += 1;
            let den_str = self.digits()?;
            let d: BigInt = den_str.parse().unwrap();
            if d.is_zero() {
                return self.err("zero denominator");
            }
            d
        } else {
            BigInt::from(1)
        };
        let value = Rational::from_bigint(num, den);
        if self.peek() == Some(b'i') {
            self.pos += 1;
            Ok((value, true))
        } else {
            Ok((value, false))
        }
    }

    fn scalar(&mut self) -> Result<GaussianRational, ParseScalarError> {
        let neg = self.eat_sign();
        let (first, first_imag) = self.term(neg)?;
        match self.peek() {
            None => {
                if first_imag {
                    Ok(GaussianRational::new(Rational::zero(), first))
                } else {
                    Ok(GaussianRational::from_rational(first))
                }
            }
            Some(b'+') | Some(b'-') => {
                if first_imag {
                    return self.err("real part must come before the imaginary part");
                }
                let neg2 = self.eat_sign();
                let (second, second_imag) = self.term(neg2)?;
                if !second_imag {
                    return self.err("second term must be imaginary (suffix `i`)");
                }
                if self.peek().is_some() {
                    return self.err("trailing characters after scalar");
                }
                Ok(GaussianRational::new(first, second))
            }
            Some(c) => self.err(format!("unexpected character `{}`", c as char)),
        }
    }
}

impl FromStr for GaussianRational {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = ScalarParser {
            bytes: s.as_bytes(),
            pos: 0,
        };
        if s.is_empty() {
            return p.err("empty scalar");
        }
        p.scalar()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn g(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> GaussianRational {
        GaussianRational::from_parts(re_n, re_d, im_n, im_d)
    }

    #[test]
    fn rational_normalization() {
        assert_eq!(q(4, 2), q(2, 1));
        assert_eq!(q(-4, -2), q(2, 1));
        assert_eq!(q(4, -2), q(-2, 1));
        assert_eq!(q(0, 5), Rational::zero());
        assert!(q(0, -7) == Rational::zero());
    }

    #[test]
    fn gaussian_arithmetic_basics() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
        let z = g(1, 2, -3, 1);
        let w = z.inverse().unwrap();
        assert!((&z * &w).is_one());
        assert!(GaussianRational::zero().inverse().is_none());
    }

    #[test]
    fn display_matches_grammar_examples() {
        assert_eq!(GaussianRational::from_int(3).to_string(), "3");
        assert_eq!(
            GaussianRational::from_rational(q(-1, 2)).to_string(),
            "-1/2"
        );
        assert_eq!(g(3, 1, 1, 2).to_string(), "3+1/2i");
        assert_eq!(g(0, 1, -1, 1).to_string(), "-i");
        assert_eq!(g(0, 1, 1, 1).to_string(), "i");
        assert_eq!(g(2, 1, -3, 1).to_string(), "2-3i");
    }

    #[test]
    fn parse_grammar_examples() {
        let cases = ["3", "-1/2", "3+1/2i", "-i", "i", "5i", "2-3i", "0", "-2/3i", "3-i"];
        for c in cases {
            let v: GaussianRational = c.parse().unwrap();
            assert_eq!(v.to_string().parse::<GaussianRational>().unwrap(), v);
        }
        assert_eq!("-i".parse::<GaussianRational>().unwrap(), g(0, 1, -1, 1));
        assert_eq!("3-i".parse::<GaussianRational>().unwrap(), g(3, 1, -1, 1));
        assert!("".parse::<GaussianRational>().is_err());
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("i+3".parse::<GaussianRational>().is_err());
        assert!("3+".parse::<GaussianRational>().is_err());
        assert!("3x".parse::<GaussianRational>().is_err());
        assert!("1+2".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn big_promotion_and_demotion() {
        // 2^80 does not fit i64.
        let two = Rational::from_int(2);
        let mut big = Rational::one();
        for _ in 0..80 {
            big = &big * &two;
        }
        assert_eq!(big.to_big(), BigRational::from(BigInt::from(1u8) << 80));
        // Dividing back down must demote to the inline representation.
        let mut back = big.clone();
        for _ in 0..80 {
            back = &back / &two;
        }
        assert!(back.is_one());
        assert_eq!(back, Rational::one());
        // Mixed-representation equality is false only because values differ.
        assert_ne!(big, Rational::one());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (any::<i32>(), 1..1000i64).prop_map(|(n, d)| Rational::new(n as i64, d))
    }

    fn arb_gaussian() -> impl Strategy<Value = GaussianRational> {
        (arb_rational(), arb_rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
    }

    proptest! {
        // Cross-check the two-tier arithmetic against num's BigRational.
        #[test]
        fn agrees_with_bigrational(a in arb_rational(), b in arb_rational()) {
            prop_assert_eq!((&a + &b).to_big(), a.to_big() + b.to_big());
            prop_assert_eq!((&a - &b).to_big(), a.to_big() - b.to_big());
            prop_assert_eq!((&a * &b).to_big(), a.to_big() * b.to_big());
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), a.to_big() / b.to_big());
            }
            prop_assert_eq!(a.cmp(&b), a.to_big().cmp(&b.to_big()));
        }

        // Field axioms hold exactly.
        #[test]
        fn field_axioms(a in arb_gaussian(), b in arb_gaussian(), c in arb_gaussian()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn print_parse_round_trip(a in arb_gaussian()) {
            let s = a.to_string();
            let back: GaussianRational = s.parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
