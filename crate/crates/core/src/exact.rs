//! Exact Gaussian-rational arithmetic for the long-arc lattice test.
//!
//! The long-arc translation `d − c` is a positive real multiple of
//! `w = z₊ − z₋`, where `w² = b² − 4/c²` is a Gaussian rational whenever
//! the inputs are. A lattice vector `z = m t_α + n t_β` lies on the line
//! of `w` iff `z² · conj(w²)` is a positive real, and it is no longer than
//! `d − c` iff `|z|² + 4 ≤ |w²|` (since `|d − c|² = |w|² − 4`). Both
//! conditions are decided without rounding.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn from_real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_real(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact binary value of a double pair. Returns `None` for non-finite input.
    pub fn from_complex64(z: Complex64) -> Option<Self> {
        Some(Self::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?))
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        GaussRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational::new(-self.re.clone(), -self.im.clone())
    }
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"-12"`, `"0.375"`, `"1.5e-3"` or `"3/7"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.as_bytes().first()? {
        b'-' => (-1, &mantissa[1..]),
        b'+' => (1, &mantissa[1..]),
        _ => (1, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: String = [int_part, frac_part].concat();
    let mut value = BigRational::from_integer(all.parse::<BigInt>().ok()?);
    let shift = exponent.checked_sub(i32::try_from(frac_part.len()).ok()?)?;
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    Some(if sign < 0 { -value } else { value })
}

/// The five cusp inputs as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCusp {
    pub t_alpha: GaussRational,
    pub t_beta: GaussRational,
    pub x0: BigRational,
    pub y0: BigRational,
    pub c: GaussRational,
}

/// Double-precision image of a [`RationalCusp`].
#[derive(Debug, Clone, Copy)]
pub struct FloatCusp {
    pub t_alpha: Complex64,
    pub t_beta: Complex64,
    pub x0: f64,
    pub y0: f64,
    pub c: Complex64,
}

impl RationalCusp {
    pub fn from_f64(t_alpha: Complex64, t_beta: Complex64, x0: f64, y0: f64, c: Complex64) -> Self {
        let g = |z| GaussRational::from_complex64(z).unwrap_or_else(GaussRational::zero);
        let r = |v| BigRational::from_float(v).unwrap_or_else(BigRational::zero);
        Self { t_alpha: g(t_alpha), t_beta: g(t_beta), x0: r(x0), y0: r(y0), c: g(c) }
    }

    /// Offsets reduced into `[0, 1)`.
    pub fn reduced(mut self) -> Self {
        self.x0 = frac(&self.x0);
        self.y0 = frac(&self.y0);
        self
    }

    pub fn offsets_both_zero(&self) -> bool {
        self.x0.is_zero() && self.y0.is_zero()
    }

    pub fn to_f64(&self) -> FloatCusp {
        FloatCusp {
            t_alpha: self.t_alpha.to_complex64(),
            t_beta: self.t_beta.to_complex64(),
            x0: to_f64(&self.x0),
            y0: to_f64(&self.y0),
            c: self.c.to_complex64(),
        }
    }

    /// `b_{p,q} = (p + x₀) t_α + (q + y₀) t_β`.
    pub fn b(&self, p: i64, q: i64) -> GaussRational {
        let xp = BigRational::from_integer(BigInt::from(p)) + &self.x0;
        let yq = BigRational::from_integer(BigInt::from(q)) + &self.y0;
        &self.t_alpha.scale(&xp) + &self.t_beta.scale(&yq)
    }

    /// `w² = b_{p,q}² − 4/c²`, the squared axis chord `(z₊ − z₋)²`.
    pub fn axis_chord_sq(&self, p: i64, q: i64) -> Option<GaussRational> {
        let b = self.b(p, q);
        let c_sq = &self.c * &self.c;
        let four = BigRational::from_integer(BigInt::from(4));
        Some(&(&b * &b) - &c_sq.inv()?.scale(&four))
    }

    pub fn lattice_vector(&self, m: i64, n: i64) -> GaussRational {
        &self.t_alpha.scale(&BigRational::from_integer(BigInt::from(m)))
            + &self.t_beta.scale(&BigRational::from_integer(BigInt::from(n)))
    }
}

fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

/// Exact verdict on one lattice vector against the long-arc translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactAlignment {
    /// `m t_α + n t_β` is a real multiple of `d − c`.
    pub collinear: bool,
    /// `|m t_α + n t_β| ≤ |d − c|`.
    pub within_length: bool,
}

impl ExactAlignment {
    pub fn is_witness(&self) -> bool {
        self.collinear && self.within_length
    }
}

/// Decides exactly whether `(m, n)` lies on the long-arc segment line of
/// member `(p, q)` and within its length. `None` when `c = 0`.
pub fn check_alignment(rc: &RationalCusp, p: i64, q: i64, m: i64, n: i64) -> Option<ExactAlignment> {
    let w_sq = rc.axis_chord_sq(p, q)?;
    let z = rc.lattice_vector(m, n);
    if z.is_zero() {
        return Some(ExactAlignment { collinear: false, within_length: true });
    }
    let cross = &(&z * &z) * &w_sq.conj();
    let collinear = cross.im.is_zero() && cross.re.is_positive();
    // |z|² + 4 ≤ |w²|  ⟺  (|z|² + 4)² ≤ |w²|²
    let lhs = z.norm_sqr() + BigRational::from_integer(BigInt::from(4));
    let within_length = (&lhs * &lhs).cmp(&w_sq.norm_sqr()) != Ordering::Greater;
    Some(ExactAlignment { collinear, within_length })
}

/// `true` when `|w²| > 4`, i.e. the axis radius exceeds 1 exactly.
pub fn axis_crosses_horosphere(rc: &RationalCusp, p: i64, q: i64) -> Option<bool> {
    let w_sq = rc.axis_chord_sq(p, q)?;
    let sixteen = BigRational::from_integer(BigInt::from(16));
    Some(w_sq.norm_sqr() > sixteen)
}
