//! Exact arithmetic in the cyclotomic fields ℚ(ζ_m).
//!
//! A [`CycScalar`] is a polynomial in ζ_m with rational coefficients, kept
//! reduced modulo the m-th cyclotomic polynomial, so its coefficient vector
//! (of length φ(m)) is canonical. Scalars of different orders can be
//! combined with the operator traits, which lift both operands to the lcm of
//! their orders; the `checked_*` methods refuse mismatched orders instead.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::rc::Rc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("ambient orders {left} and {right} differ")]
    OrderMismatch { left: u32, right: u32 },
    #[error("cannot lift from order {from} to order {to}: {from} does not divide {to}")]
    NotDivisible { from: u32, to: u32 },
    #[error("cyclotomic order must be at least 1")]
    ZeroOrder,
    #[error("cannot parse scalar `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

thread_local! {
    static CYCLO_CACHE: RefCell<HashMap<u32, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Coefficients (low degree first) of Φ_m, cached per thread.
fn cyclo_int(m: u32) -> Rc<Vec<i64>> {
    if let Some(p) = CYCLO_CACHE.with(|c| c.borrow().get(&m).cloned()) {
        return p;
    }
    // x^m - 1 divided by every Φ_d with d | m, d < m.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let div = cyclo_int(d);
            num = div_monic(&num, &div);
        }
    }
    let p = Rc::new(num);
    CYCLO_CACHE.with(|c| c.borrow_mut().insert(m, p.clone()));
    p
}

/// Exact quotient of `num` by the monic polynomial `den`.
fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        q[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    q
}

/// The m-th cyclotomic polynomial, coefficients listed from the constant term up.
pub fn cyclotomic_polynomial(m: u32) -> Result<Vec<BigRational>, CycError> {
    if m == 0 {
        return Err(CycError::ZeroOrder);
    }
    Ok(cyclo_int(m)
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect())
}

/// Euler's totient, which is the degree of Φ_m.
pub fn totient(m: u32) -> usize {
    cyclo_int(m).len() - 1
}

pub fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Reduce a dense polynomial modulo Φ_m in place and truncate to φ(m) terms.
fn reduce(mut poly: Vec<BigRational>, m: u32) -> Vec<BigRational> {
    let phi = cyclo_int(m);
    let d = phi.len() - 1;
    if poly.len() <= d {
        poly.resize(d, BigRational::zero());
        return poly;
    }
    for k in (d..poly.len()).rev() {
        if poly[k].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[k], BigRational::zero());
        for (j, &pj) in phi.iter().enumerate().take(d) {
            if pj != 0 {
                poly[k - d + j] -= &c * BigInt::from(pj);
            }
        }
    }
    poly.truncate(d);
    poly
}

/// An exact element of ℚ(ζ_m).
#[derive(Clone)]
pub struct CycScalar {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CycScalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(k: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    /// The rational number `num/den`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self {
            order: 1,
            coeffs: vec![q],
        }
    }

    /// Build from raw coefficients in powers of ζ_m; reduced modulo Φ_m.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Result<Self, CycError> {
        if order == 0 {
            return Err(CycError::ZeroOrder);
        }
        Ok(Self {
            order,
            coeffs: reduce(coeffs, order),
        })
    }

    /// ζ_m^k, with k taken modulo m.
    pub fn root_of_unity(k: i64, m: u32) -> Result<Self, CycError> {
        if m == 0 {
            return Err(CycError::ZeroOrder);
        }
        let k = k.rem_euclid(m as i64) as usize;
        let mut poly = vec![BigRational::zero(); k + 1];
        poly[k] = BigRational::one();
        Self::from_coeffs(m, poly)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Some(q) when the scalar is the rational number q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Reinterpret in ℚ(ζ_target); requires `order | target`.
    pub fn lift(&self, target: u32) -> Result<Self, CycError> {
        if target == 0 {
            return Err(CycError::ZeroOrder);
        }
        if target % self.order != 0 {
            return Err(CycError::NotDivisible {
                from: self.order,
                to: target,
            });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        if let Some(q) = self.as_rational() {
            let mut c = vec![BigRational::zero(); totient(target)];
            c[0] = q.clone();
            return Ok(Self {
                order: target,
                coeffs: c,
            });
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Self::from_coeffs(target, poly)
    }

    fn lifted_pair(a: &Self, b: &Self) -> (Self, Self) {
        let t = lcm(a.order, b.order);
        (
            a.lift(t).expect("lcm is a common multiple"),
            b.lift(t).expect("lcm is a common multiple"),
        )
    }

    fn add_same(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            order: self.order,
            coeffs,
        }
    }

    fn mul_same(&self, other: &Self) -> Self {
        if let Some(q) = self.as_rational() {
            return other.scale(q);
        }
        if let Some(q) = other.as_rational() {
            return self.scale(q);
        }
        let mut prod = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Self {
            order: self.order,
            coeffs: reduce(prod, self.order),
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycError> {
        self.same_order(other)?;
        Ok(self.add_same(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycError> {
        self.same_order(other)?;
        Ok(self.mul_same(other))
    }

    fn same_order(&self, other: &Self) -> Result<(), CycError> {
        if self.order != other.order {
            Err(CycError::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        } else {
            Ok(())
        }
    }

    /// Multiplicative inverse, by solving (a·x = 1) over the power basis.
    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self {
                order: self.order,
                coeffs: {
                    let mut c = vec![BigRational::zero(); self.coeffs.len()];
                    c[0] = q.recip();
                    c
                },
            });
        }
        let d = self.coeffs.len();
        // Column j holds the coefficients of a·ζ^j.
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        let zeta = Self::root_of_unity(1, self.order)?;
        for _ in 0..d {
            cols.push(cur.coeffs.clone());
            cur = cur.mul_same(&zeta);
        }
        // Augmented system rows: sum_j cols[j][i] x_j = δ_{i0}.
        let mut rows: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut r: Vec<BigRational> = (0..d).map(|j| cols[j][i].clone()).collect();
                r.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                r
            })
            .collect();
        for col in 0..d {
            let piv = (col..d)
                .find(|&r| !rows[r][col].is_zero())
                .ok_or(CycError::DivisionByZero)?;
            rows.swap(col, piv);
            let p = rows[col][col].recip();
            for v in rows[col].iter_mut() {
                *v *= &p;
            }
            for r in 0..d {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    let pivot_row = rows[col].clone();
                    for (v, pv) in rows[r].iter_mut().zip(pivot_row) {
                        *v -= &f * pv;
                    }
                }
            }
        }
        Ok(Self {
            order: self.order,
            coeffs: rows.into_iter().map(|r| r[d].clone()).collect(),
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one().lift(self.order).expect("1 divides every order");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_same(&base);
            }
        }
        acc
    }

    /// Parse the textual form produced by `Display`, e.g. `1/2 - 3*z + z^2`.
    pub fn parse(text: &str, order: u32) -> Result<Self, CycError> {
        parse_scalar(text, order)
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::lifted_pair(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycScalar {}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [m={}]", self, self.order)
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{}", k)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn parse_err(text: &str, reason: impl Into<String>) -> CycError {
    CycError::Parse {
        text: text.to_string(),
        reason: reason.into(),
    }
}

fn parse_rational(text: &str, tok: &str) -> Result<BigRational, CycError> {
    let tok = tok.trim();
    let (n, d) = match tok.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (tok, "1"),
    };
    let n: BigInt = n
        .parse()
        .map_err(|_| parse_err(text, format!("bad number `{tok}`")))?;
    let d: BigInt = d
        .parse()
        .map_err(|_| parse_err(text, format!("bad number `{tok}`")))?;
    if d.is_zero() {
        return Err(parse_err(text, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

fn parse_scalar(text: &str, order: u32) -> Result<CycScalar, CycError> {
    if order == 0 {
        return Err(CycError::ZeroOrder);
    }
    let src = text.trim();
    if src.is_empty() {
        return Err(parse_err(text, "empty input"));
    }
    // Split into signed terms at top-level + and -.
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in src.chars() {
        match ch {
            '+' | '-' => {
                if !cur.trim().is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = ch == '-';
                } else if ch == '-' {
                    neg = !neg;
                }
            }
            c if c.is_whitespace() => cur.push(' '),
            c => cur.push(c),
        }
    }
    if cur.trim().is_empty() {
        return Err(parse_err(text, "dangling sign"));
    }
    terms.push((neg, cur));

    let mut poly: Vec<BigRational> = Vec::new();
    for (neg, term) in terms {
        let term = term.trim();
        let (coef, power) = if let Some(pos) = term.find('z') {
            let (head, tail) = term.split_at(pos);
            let head = head.trim().trim_end_matches('*').trim();
            let coef = if head.is_empty() {
                BigRational::one()
            } else {
                parse_rational(text, head)?
            };
            let tail = tail[1..].trim();
            let power = if tail.is_empty() {
                1usize
            } else {
                let e = tail
                    .strip_prefix('^')
                    .ok_or_else(|| parse_err(text, format!("unexpected `{tail}`")))?;
                e.trim()
                    .parse()
                    .map_err(|_| parse_err(text, format!("bad exponent `{e}`")))?
            };
            (coef, power)
        } else {
            (parse_rational(text, term)?, 0)
        };
        if poly.len() <= power {
            poly.resize(power + 1, BigRational::zero());
        }
        if neg {
            poly[power] -= coef;
        } else {
            poly[power] += coef;
        }
    }
    CycScalar::from_coeffs(order, poly)
}

impl Add<&CycScalar> for &CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        if self.order == rhs.order {
            self.add_same(rhs)
        } else {
            let (a, b) = CycScalar::lifted_pair(self, rhs);
            a.add_same(&b)
        }
    }
}

impl Sub<&CycScalar> for &CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        self + &(-rhs)
    }
}

impl Mul<&CycScalar> for &CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        if self.order == rhs.order {
            self.mul_same(rhs)
        } else if let Some(q) = self.as_rational() {
            rhs.scale(q)
        } else if let Some(q) = rhs.as_rational() {
            self.scale(q)
        } else {
            let (a, b) = CycScalar::lifted_pair(self, rhs);
            a.mul_same(&b)
        }
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycScalar> for CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: &CycScalar) -> CycScalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<CycScalar> for &CycScalar {
            type Output = CycScalar;
            fn $m(self, rhs: CycScalar) -> CycScalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycScalar> for CycScalar {
    fn add_assign(&mut self, rhs: &CycScalar) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CycScalar> for CycScalar {
    fn sub_assign(&mut self, rhs: &CycScalar) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl std::iter::Sum for CycScalar {
    fn sum<I: Iterator<Item = CycScalar>>(iter: I) -> Self {
        iter.fold(CycScalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

impl From<i64> for CycScalar {
    fn from(k: i64) -> Self {
        CycScalar::from_int(k)
    }
}
