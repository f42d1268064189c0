//! Exact positive parameters: rationals and real quadratic surds.
//!
//! A surd is stored as `(a + b*sqrt(d)) / c` with `d >= 2` square-free,
//! `b != 0`, `c > 0` and `gcd(a, b, c) = 1`. Comparisons never touch floating
//! point: the sign of `A + B*sqrt(d)` is settled by the signs of `A` and `B`
//! and, when they disagree, one exact squaring.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("theta must be positive, got {0}")]
    NotPositive(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("sqrt of a negative number")]
    NegativeRadicand,
    #[error("malformed number expression {0:?}")]
    Malformed(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    d: BigInt,
    c: BigInt,
}

impl QuadraticSurd {
    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
}

/// A positive real parameter known exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactNumber {
    Rational(BigRational),
    Surd(QuadraticSurd),
}

/// Sign of `a + b*sqrt(d)` for `d >= 0`.
pub fn sign_a_plus_b_sqrt_d(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign();
    let sb = if d.is_zero() { Sign::NoSign } else { b.sign() };
    match (sa, sb) {
        (Sign::NoSign, Sign::NoSign) => Ordering::Equal,
        (Sign::Plus, Sign::Plus | Sign::NoSign) | (Sign::NoSign, Sign::Plus) => Ordering::Greater,
        (Sign::Minus, Sign::Minus | Sign::NoSign) | (Sign::NoSign, Sign::Minus) => Ordering::Less,
        // mixed signs: |a| against |b| sqrt(d)
        (Sign::Plus, Sign::Minus) => (a * a).cmp(&(b * b * d)),
        (Sign::Minus, Sign::Plus) => (b * b * d).cmp(&(a * a)),
    }
}

/// `d = k^2 * r` with `r` square-free; returns `(k, r)`.
fn split_square(d: &BigInt) -> (BigInt, BigInt) {
    let mut rest = d.clone();
    let mut k = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let sq = &p * &p;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            k *= &p;
        }
        p += 1;
    }
    (k, rest)
}

impl ExactNumber {
    pub fn rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self, ExactError> {
        let q = q.into();
        if q.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Self::from_rational(BigRational::new(p.into(), q))
    }

    pub fn integer(n: impl Into<BigInt>) -> Result<Self, ExactError> {
        Self::rational(n, 1)
    }

    pub fn from_rational(r: BigRational) -> Result<Self, ExactError> {
        if !r.is_positive() {
            return Err(ExactError::NotPositive(r.to_string()));
        }
        Ok(ExactNumber::Rational(r))
    }

    /// `(a + b*sqrt(d)) / c`, normalized. Collapses to a rational when the
    /// radical vanishes.
    pub fn surd(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        d: impl Into<BigInt>,
        c: impl Into<BigInt>,
    ) -> Result<Self, ExactError> {
        let (mut a, mut b, d, mut c) = (a.into(), b.into(), d.into(), c.into());
        if c.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        if d.is_negative() {
            return Err(ExactError::NegativeRadicand);
        }
        let (k, d) = split_square(&d);
        if d.is_zero() {
            b = BigInt::zero();
        }
        b *= k;
        if d.is_one() {
            a += &b;
            b = BigInt::zero();
        }
        if b.is_zero() {
            return Self::rational(a, c);
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        a /= &g;
        b /= &g;
        c /= &g;
        if sign_a_plus_b_sqrt_d(&a, &b, &d) != Ordering::Greater {
            return Err(ExactError::NotPositive(
                QuadraticSurd { a, b, d, c }.to_string(),
            ));
        }
        Ok(ExactNumber::Surd(QuadraticSurd { a, b, d, c }))
    }

    pub fn sqrt(d: impl Into<BigInt>) -> Result<Self, ExactError> {
        Self::surd(0, 1, d, 1)
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactNumber::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactNumber::Rational(r) => Some(r),
            ExactNumber::Surd(_) => None,
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        match self {
            ExactNumber::Rational(x) => x.cmp(r),
            ExactNumber::Surd(s) => {
                // (a + b sqrt d)/c - p/q  ~  q a - p c + q b sqrt d
                let (p, q) = (r.numer(), r.denom());
                let lhs = q * &s.a - p * &s.c;
                let rhs = q * &s.b;
                sign_a_plus_b_sqrt_d(&lhs, &rhs, &s.d)
            }
        }
    }

    /// `floor(self)`.
    pub fn floor(&self) -> BigInt {
        match self {
            ExactNumber::Rational(r) => r.floor().to_integer(),
            ExactNumber::Surd(s) => {
                // floor(b sqrt d) from an integer square root, then fold in a/c
                let root = (&s.b * &s.b * &s.d).sqrt();
                let fl = if s.b.is_positive() { root } else { -root - 1 };
                (&s.a + fl).div_floor(&s.c)
            }
        }
    }

    /// Lossy, for display and heuristics only.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactNumber::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            ExactNumber::Surd(s) => {
                let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
                (f(&s.a) + f(&s.b) * f(&s.d).sqrt()) / f(&s.c)
            }
        }
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let radical = if self.b.is_one() {
            format!("sqrt({})", self.d)
        } else if self.b == -BigInt::one() {
            format!("-sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.b, self.d)
        };
        let numer = if self.a.is_zero() {
            radical
        } else if self.b.is_negative() {
            format!("{}{}", self.a, radical)
        } else {
            format!("{}+{}", self.a, radical)
        };
        if self.c.is_one() {
            f.write_str(&numer)
        } else {
            write!(f, "({})/{}", numer, self.c)
        }
    }
}

impl fmt::Display for ExactNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactNumber::Rational(r) => write!(f, "{r}"),
            ExactNumber::Surd(s) => write!(f, "{s}"),
        }
    }
}

/// Accepts `n`, `p/q`, `sqrt(d)`, `b*sqrt(d)`, `a+b*sqrt(d)`, `a-sqrt(d)` and
/// any of those wrapped as `(...)/c`. Whitespace is ignored.
impl FromStr for ExactNumber {
    type Err = ExactError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let malformed = || ExactError::Malformed(input.to_string());
        if s.is_empty() {
            return Err(malformed());
        }
        if !s.contains("sqrt") {
            return match s.split_once('/') {
                Some((p, q)) => {
                    let p: BigInt = p.parse().map_err(|_| malformed())?;
                    let q: BigInt = q.parse().map_err(|_| malformed())?;
                    Self::rational(p, q)
                }
                None => Self::integer(s.parse::<BigInt>().map_err(|_| malformed())?),
            };
        }
        let (numer, c) = match s.strip_prefix('(').and_then(|r| r.rsplit_once(")/")) {
            Some((inner, c)) => (inner, c.parse::<BigInt>().map_err(|_| malformed())?),
            None => (s.as_str(), BigInt::one()),
        };
        let (a, b, d) = parse_surd_numerator(numer).ok_or_else(malformed)?;
        Self::surd(a, b, d, c)
    }
}

/// Parses `[a(+|-)][b*]sqrt(d)` or `[b*]sqrt(d)(+|-)a`.
fn parse_surd_numerator(s: &str) -> Option<(BigInt, BigInt, BigInt)> {
    let start = s.find("sqrt(")?;
    let close = start + s[start..].find(')')?;
    let d: BigInt = s[start + 5..close].parse().ok()?;
    let before = &s[..start];
    let after = &s[close + 1..];

    // split `before` into the rational part and the coefficient of the radical
    let (a_part, coeff) = match before.rfind(['+', '-']) {
        Some(pos) if pos > 0 || !after.is_empty() || before.ends_with('*') => {
            (&before[..pos], &before[pos..])
        }
        _ => ("", before),
    };
    let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
    let b: BigInt = match coeff {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        other => other.parse().ok()?,
    };
    let a_left: BigInt = if a_part.is_empty() {
        BigInt::zero()
    } else {
        a_part.parse().ok()?
    };
    let a_right: BigInt = if after.is_empty() {
        BigInt::zero()
    } else if after.starts_with(['+', '-']) {
        after.trim_start_matches('+').parse().ok()?
    } else {
        return None;
    };
    if !a_part.is_empty() && !after.is_empty() {
        return None;
    }
    Some((a_left + a_right, b, d))
}

/// Precomputed comparison kernel for affine forms `e + f*theta`.
///
/// Holds `theta` both as big integers and, when the coefficients fit, as
/// `i128` so the common case avoids allocation.
#[derive(Clone, Debug)]
pub struct AffineComparator {
    big: BigKernel,
    small: Option<SmallKernel>,
}

#[derive(Clone, Debug)]
enum BigKernel {
    // theta = p / q
    Rational {
        p: BigInt,
        q: BigInt,
    },
    // theta = (a + b sqrt d) / c
    Surd {
        a: BigInt,
        b: BigInt,
        d: BigInt,
        c: BigInt,
    },
}

#[derive(Clone, Copy, Debug)]
enum SmallKernel {
    Rational { p: i128, q: i128 },
    Surd { a: i128, b: i128, d: i128, c: i128 },
}

const SMALL_LIMIT: i128 = 1 << 40;

fn small(x: &BigInt) -> Option<i128> {
    x.to_i128().filter(|v| v.abs() < SMALL_LIMIT)
}

fn small_sign(a: i128, b: i128, d: i128) -> Option<Ordering> {
    Some(match (a.signum(), b.signum()) {
        (0, 0) => Ordering::Equal,
        (1, s) | (0, s) if s >= 0 => Ordering::Greater,
        (-1, s) | (0, s) if s <= 0 => Ordering::Less,
        (1, _) => a.checked_mul(a)?.cmp(&b.checked_mul(b)?.checked_mul(d)?),
        _ => b.checked_mul(b)?.checked_mul(d)?.cmp(&a.checked_mul(a)?),
    })
}

impl AffineComparator {
    pub fn new(theta: &ExactNumber) -> Self {
        match theta {
            ExactNumber::Rational(r) => {
                let (p, q) = (r.numer().clone(), r.denom().clone());
                let small = small(&p)
                    .zip(small(&q))
                    .map(|(p, q)| SmallKernel::Rational { p, q });
                AffineComparator {
                    big: BigKernel::Rational { p, q },
                    small,
                }
            }
            ExactNumber::Surd(s) => {
                let small = match (small(&s.a), small(&s.b), small(&s.d), small(&s.c)) {
                    (Some(a), Some(b), Some(d), Some(c)) => Some(SmallKernel::Surd { a, b, d, c }),
                    _ => None,
                };
                AffineComparator {
                    big: BigKernel::Surd {
                        a: s.a.clone(),
                        b: s.b.clone(),
                        d: s.d.clone(),
                        c: s.c.clone(),
                    },
                    small,
                }
            }
        }
    }

    /// Sign of `e + f*theta`.
    pub fn sign(&self, e: i64, f: i64) -> Ordering {
        if let Some(k) = self.small {
            let (e, f) = (e as i128, f as i128);
            let fast = match k {
                SmallKernel::Rational { p, q } => Some((q * e + f * p).cmp(&0)),
                SmallKernel::Surd { a, b, d, c } => small_sign(c * e + f * a, f * b, d),
            };
            if let Some(ord) = fast {
                return ord;
            }
        }
        let (e, f) = (BigInt::from(e), BigInt::from(f));
        match &self.big {
            BigKernel::Rational { p, q } => (q * e + f * p).sign().cmp_zero(),
            BigKernel::Surd { a, b, d, c } => sign_a_plus_b_sqrt_d(&(c * e + &f * a), &(f * b), d),
        }
    }

    /// Orders `e1 + f1*theta` against `e2 + f2*theta`.
    pub fn compare(&self, e1: i64, f1: i64, e2: i64, f2: i64) -> Ordering {
        // e1 + f1 t  vs  e2 + f2 t   <=>   0 vs (e2 - e1) + (f2 - f1) t
        self.sign(e2 - e1, f2 - f1).reverse()
    }
}

trait SignExt {
    fn cmp_zero(self) -> Ordering;
}

impl SignExt for Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Exact order of `e1 + f1*theta` relative to `e2 + f2*theta`.
pub fn compare_affine(e1: i64, f1: i64, e2: i64, f2: i64, theta: &ExactNumber) -> Ordering {
    AffineComparator::new(theta).compare(e1, f1, e2, f2)
}
