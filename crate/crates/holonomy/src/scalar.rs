//! Exact field scalars.
//!
//! Two coefficient fields are supported: the rationals ([`Rat`], arbitrary
//! precision, always kept in lowest terms with positive denominator) and the
//! Gaussian rationals ([`GaussRat`], pairs `re + im*i` of rationals).  Nothing
//! in this crate ever rounds: every arithmetic operation is exact.
//!
//! The [`Scalar`] trait is what the linear algebra layer is generic over.  It
//! bundles field arithmetic with two service hooks:
//!
//! * `strip_row_content` rescales a sparse row by a nonzero field element so
//!   that its entries become coprime (Gaussian) integers with a canonical
//!   leading sign.  Row scaling leaves kernels and row spans unchanged, and
//!   keeping rows in this normal form is what makes fraction-free elimination
//!   effective against coefficient growth.
//! * `mod_p` reduces an entry into F_p.  For Gaussian rationals the caller
//!   must pick a prime p ≡ 1 (mod 4) and supply a residue r with r² ≡ -1, so
//!   that `i` can be mapped to `r`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::hash::Hash;

/// Error raised when parsing a scalar from its text form fails.
#[derive(Debug, Clone, thiserror::Error)]
#[error("cannot parse {field} scalar from {text:?}: {reason}")]
pub struct ScalarParseError {
    pub field: &'static str,
    pub text: String,
    pub reason: String,
}

/// An exact field element.  See the module docs for the contract.
pub trait Scalar:
    Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static
{
    /// Short name of the field, used in error messages and file headers.
    const FIELD_NAME: &'static str;
    /// Whether the field contains a square root of -1.
    const HAS_I: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` exactly for zero.
    fn inv(&self) -> Option<Self>;
    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv().expect("exact division by zero"))
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self = self.add(rhs);
    }

    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Multiplication by the imaginary unit.  Panics when `HAS_I` is false.
    fn times_i(&self) -> Self;

    /// Rescale a nonzero sparse row in place so entries are coprime integers
    /// (Gaussian integers over ℚ(i)) and the leading entry has canonical sign.
    fn strip_row_content(row: &mut [(u32, Self)]);

    /// Reduce into F_p (p an odd prime).  `sqrt_m1` is the residue used for
    /// `i` and must be present iff `needs_sqrt_m1()`.  Returns `None` when a
    /// denominator vanishes mod p, signalling a bad prime for this matrix.
    fn mod_p(&self, p: u64, sqrt_m1: Option<u64>) -> Option<u64>;
    /// Whether `mod_p` requires a square root of -1 (ℚ(i) needs p ≡ 1 mod 4).
    fn needs_sqrt_m1() -> bool {
        Self::HAS_I
    }

    /// Parse the generator-file text form (`"-3/4"`, and for ℚ(i) also forms
    /// like `"1/2-5/3i"`, `"i"`, `"-2i"`).
    fn parse(text: &str) -> Result<Self, ScalarParseError>;
    /// Render losslessly in the same text form `parse` accepts.
    fn render(&self) -> String;
}

/// Exact rational number (ℚ).
pub type Rat = BigRational;

fn parse_rat(text: &str) -> Result<BigRational, ScalarParseError> {
    let err = |reason: &str| ScalarParseError {
        field: "Q",
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let t = text.trim();
    if t.is_empty() {
        return Err(err("empty string"));
    }
    match t.split_once('/') {
        None => {
            let n: BigInt = t.parse().map_err(|_| err("bad integer"))?;
            Ok(BigRational::from_integer(n))
        }
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
            let d: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
            if d.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

fn render_rat(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `num * den^-1 mod p`, or `None` when `den ≡ 0 (mod p)`.
fn big_mod_p(num: &BigInt, den: &BigInt, p: u64) -> Option<u64> {
    let bp = BigInt::from(p);
    let n = num.mod_floor(&bp).to_u64().expect("residue fits u64");
    let d = den.mod_floor(&bp).to_u64().expect("residue fits u64");
    if d == 0 {
        return None;
    }
    Some(mul_mod(n, inv_mod(d, p), p))
}

/// Modular product on u64 via u128 widening.
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Modular inverse of `a != 0` for prime `p`, by Fermat.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Modular exponentiation on u64.
pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    base %= p;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl Scalar for BigRational {
    const FIELD_NAME: &'static str = "Q";
    const HAS_I: bool = false;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn times_i(&self) -> Self {
        unreachable!("Q has no square root of -1")
    }

    fn strip_row_content(row: &mut [(u32, Self)]) {
        if row.is_empty() {
            return;
        }
        // lcm of denominators and gcd of numerators, so row * (l/g) is a
        // primitive integer vector.
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for (_, x) in row.iter() {
            l = l.lcm(x.denom());
            g = g.gcd(x.numer());
        }
        let mut factor = BigRational::new(l, g);
        // Canonical sign: leading entry positive.
        if (row[0].1.numer().sign() == Sign::Minus) != (factor.numer().sign() == Sign::Minus) {
            factor = -factor;
        }
        for (_, x) in row.iter_mut() {
            *x = &*x * &factor;
        }
    }

    fn mod_p(&self, p: u64, _sqrt_m1: Option<u64>) -> Option<u64> {
        big_mod_p(self.numer(), self.denom(), p)
    }

    fn parse(text: &str) -> Result<Self, ScalarParseError> {
        parse_rat(text)
    }
    fn render(&self) -> String {
        render_rat(self)
    }
}

/// Gaussian rational `re + im*i` (the field ℚ(i)).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }
    pub fn from_re(re: BigRational) -> Self {
        GaussRat {
            re,
            im: <BigRational as Zero>::zero(),
        }
    }
    pub fn i() -> Self {
        GaussRat {
            re: <BigRational as Zero>::zero(),
            im: <BigRational as One>::one(),
        }
    }
    pub fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
    /// Squared modulus `re² + im²` (a rational).
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl Debug for GaussRat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}
impl Display for GaussRat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Gaussian integer helpers for content stripping.  `a` and `b` are (re, im)
/// pairs of plain integers.
fn gauss_int_mul(a: (&BigInt, &BigInt), b: (&BigInt, &BigInt)) -> (BigInt, BigInt) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// Nearest-integer rounding of n/d for d > 0.
fn div_round(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

/// Euclidean gcd in ℤ[i] (unique up to units).
fn gauss_int_gcd(mut a: (BigInt, BigInt), mut b: (BigInt, BigInt)) -> (BigInt, BigInt) {
    while !(b.0.is_zero() && b.1.is_zero()) {
        // q = round(a * conj(b) / |b|²) componentwise, r = a - q b.
        let nb = &b.0 * &b.0 + &b.1 * &b.1;
        let num = gauss_int_mul((&a.0, &a.1), (&b.0, &-b.1.clone()));
        let q = (div_round(&num.0, &nb), div_round(&num.1, &nb));
        let qb = gauss_int_mul((&q.0, &q.1), (&b.0, &b.1));
        let r = (&a.0 - qb.0, &a.1 - qb.1);
        a = b;
        b = r;
    }
    a
}

impl Scalar for GaussRat {
    const FIELD_NAME: &'static str = "Qi";
    const HAS_I: bool = true;

    fn zero() -> Self {
        GaussRat::from_re(<BigRational as Zero>::zero())
    }
    fn one() -> Self {
        GaussRat::from_re(<BigRational as One>::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn is_one(&self) -> bool {
        One::is_one(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, rhs: &Self) -> Self {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
    fn sub(&self, rhs: &Self) -> Self {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
    fn mul(&self, rhs: &Self) -> Self {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
    fn neg(&self) -> Self {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
    fn inv(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            return None;
        }
        let n = self.norm();
        Some(GaussRat::new(&self.re / &n, -&self.im / &n))
    }
    fn from_i64(n: i64) -> Self {
        GaussRat::from_re(<BigRational as Scalar>::from_i64(n))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        GaussRat::from_re(<BigRational as Scalar>::from_ratio(num, den))
    }
    fn times_i(&self) -> Self {
        GaussRat::new(-self.im.clone(), self.re.clone())
    }

    fn strip_row_content(row: &mut [(u32, Self)]) {
        if row.is_empty() {
            return;
        }
        // First make all components integers with joint content 1 over ℤ…
        let mut l = BigInt::one();
        let mut g = BigInt::zero();
        for (_, x) in row.iter() {
            l = l.lcm(x.re.denom()).lcm(x.im.denom());
            g = g.gcd(x.re.numer()).gcd(x.im.numer());
        }
        let factor = BigRational::new(l, g);
        for (_, x) in row.iter_mut() {
            x.re = &x.re * &factor;
            x.im = &x.im * &factor;
        }
        // …then strip the common ℤ[i] divisor (catches factors like 1+i that
        // have no rational content) and rotate by a unit for a canonical lead.
        let mut g = (BigInt::zero(), BigInt::zero());
        for (_, x) in row.iter() {
            g = gauss_int_gcd(g, (x.re.numer().clone(), x.im.numer().clone()));
            if g.0.is_one() && g.1.is_zero() {
                break;
            }
        }
        let gq = GaussRat::new(BigRational::from_integer(g.0), BigRational::from_integer(g.1));
        let ginv = Scalar::inv(&gq).expect("nonzero gcd");
        for (_, x) in row.iter_mut() {
            *x = Scalar::mul(&*x, &ginv);
        }
        // Unique unit with re > 0, im >= 0 on the leading entry.
        let mut unit = GaussRat::one();
        let mut lead = row[0].1.clone();
        for _ in 0..3 {
            if lead.re.is_positive() && !lead.im.is_negative() {
                break;
            }
            lead = lead.times_i();
            unit = unit.times_i();
        }
        if !Scalar::is_one(&unit) {
            for (_, x) in row.iter_mut() {
                *x = Scalar::mul(&*x, &unit);
            }
        }
    }

    fn mod_p(&self, p: u64, sqrt_m1: Option<u64>) -> Option<u64> {
        let r = sqrt_m1.expect("Qi reduction needs sqrt(-1) mod p");
        let re = big_mod_p(self.re.numer(), self.re.denom(), p)?;
        let im = big_mod_p(self.im.numer(), self.im.denom(), p)?;
        Some((re + mul_mod(im, r, p)) % p)
    }

    fn parse(text: &str) -> Result<Self, ScalarParseError> {
        let err = |reason: &str| ScalarParseError {
            field: "Qi",
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err("empty string"));
        }
        // Split into at most two signed terms at top level.
        let mut terms: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (k, c) in t.chars().enumerate() {
            if (c == '+' || c == '-') && k > 0 && !cur.is_empty() {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(c);
        }
        terms.push(cur);
        if terms.len() > 2 {
            return Err(err("more than two terms"));
        }
        let mut re = <BigRational as Zero>::zero();
        let mut im = <BigRational as Zero>::zero();
        let mut seen_re = false;
        let mut seen_im = false;
        for term in terms {
            if let Some(body) = term.strip_suffix('i') {
                if seen_im {
                    return Err(err("two imaginary terms"));
                }
                seen_im = true;
                let body = body.strip_suffix('*').unwrap_or(body);
                im = match body {
                    "" | "+" => <BigRational as One>::one(),
                    "-" => -<BigRational as One>::one(),
                    b => parse_rat(b).map_err(|e| err(&e.reason))?,
                };
            } else {
                if seen_re {
                    return Err(err("two real terms"));
                }
                seen_re = true;
                re = parse_rat(&term).map_err(|e| err(&e.reason))?;
            }
        }
        Ok(GaussRat::new(re, im))
    }

    fn render(&self) -> String {
        if Zero::is_zero(&self.im) {
            return render_rat(&self.re);
        }
        let imag = if One::is_one(&self.im) {
            "i".to_string()
        } else if One::is_one(&-self.im.clone()) {
            "-i".to_string()
        } else {
            format!("{}i", render_rat(&self.im))
        };
        if Zero::is_zero(&self.re) {
            imag
        } else if imag.starts_with('-') {
            format!("{}{}", render_rat(&self.re), imag)
        } else {
            format!("{}+{}", render_rat(&self.re), imag)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rat {
        <Rat as Scalar>::from_ratio(n, d)
    }

    #[test]
    fn rational_parse_render_round_trip() {
        for text in ["0", "7", "-7", "3/4", "-3/4", "22/7"] {
            let x = <Rat as Scalar>::parse(text).unwrap();
            assert_eq!(x.render(), text);
            assert_eq!(<Rat as Scalar>::parse(&x.render()).unwrap(), x);
        }
        assert_eq!(<Rat as Scalar>::parse("6/4").unwrap(), q(3, 2));
        assert!(<Rat as Scalar>::parse("1/0").is_err());
        assert!(<Rat as Scalar>::parse("").is_err());
    }

    #[test]
    fn gauss_arithmetic_and_round_trip() {
        let x = GaussRat::parse("1/2-5/3i").unwrap();
        assert_eq!(x.re, q(1, 2));
        assert_eq!(x.im, q(-5, 3));
        for text in ["i", "-i", "2i", "-3/4i", "1+i", "1/2-5/3i", "3" ] {
            let y = GaussRat::parse(text).unwrap();
            assert_eq!(GaussRat::parse(&y.render()).unwrap(), y, "round trip {text}");
        }
        let i = GaussRat::i();
        assert_eq!(Scalar::mul(&i, &i), Scalar::from_i64(-1));
        let z = GaussRat::parse("3+2i").unwrap();
        let w = Scalar::mul(&z, &Scalar::inv(&z).unwrap());
        assert!(Scalar::is_one(&w));
        assert_eq!(z.times_i(), GaussRat::parse("-2+3i").unwrap());
    }

    #[test]
    fn rational_row_content_stripping() {
        let mut row = vec![(0u32, q(-4, 6)), (3, q(8, 3)), (5, q(-2, 1))];
        <Rat as Scalar>::strip_row_content(&mut row);
        // (-2/3, 8/3, -2) * (-3/2) = (1, -4, 3)
        assert_eq!(row[0].1, q(1, 1));
        assert_eq!(row[1].1, q(-4, 1));
        assert_eq!(row[2].1, q(3, 1));
    }

    #[test]
    fn gauss_row_content_strips_gaussian_primes() {
        // Both entries share the non-rational factor 1+i.
        let e = |re: i64, im: i64| GaussRat::new(q(re, 1), q(im, 1));
        let mut row = vec![(0u32, e(1, 1)), (1, e(0, 2))]; // 1+i, 2i = (1+i)²·(unit)
        GaussRat::strip_row_content(&mut row);
        assert!(Scalar::is_one(&row[0].1), "lead is {:?}", row[0].1);
        assert_eq!(row[1].1, e(1, 1));
    }

    #[test]
    fn modular_reduction_matches_field_ops() {
        let p = 1_000_003u64; // ≡ 3 mod 4, fine for Q
        let x = q(-7, 3);
        let y = q(5, 11);
        let xm = x.mod_p(p, None).unwrap();
        let ym = y.mod_p(p, None).unwrap();
        let s = Scalar::mul(&x, &y).mod_p(p, None).unwrap();
        assert_eq!(mul_mod(xm, ym, p), s);
        // Bad prime: denominator divisible by p.
        let z = BigRational::new(BigInt::from(1), BigInt::from(p));
        assert!(z.mod_p(p, None).is_none());

        // Qi: p ≡ 1 mod 4 with r² ≡ -1.
        let p = 1_000_033u64;
        assert_eq!(p % 4, 1);
        let mut r = 0;
        for g in 2..1000 {
            let c = pow_mod(g, (p - 1) / 4, p);
            if mul_mod(c, c, p) == p - 1 {
                r = c;
                break;
            }
        }
        assert!(r != 0);
        let z = GaussRat::parse("3/2+5i").unwrap();
        let w = GaussRat::parse("-1/3+i").unwrap();
        let zm = z.mod_p(p, Some(r)).unwrap();
        let wm = w.mod_p(p, Some(r)).unwrap();
        assert_eq!(Scalar::mul(&z, &w).mod_p(p, Some(r)).unwrap(), mul_mod(zm, wm, p));
    }
}
