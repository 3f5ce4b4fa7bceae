//! Exact arithmetic in the cyclotomic field `Q(zeta_N)`.
//!
//! Elements are stored in the power basis `1, z, ..., z^(phi(N)-1)` with a
//! common positive denominator, reduced modulo the `N`-th cyclotomic
//! polynomial. Two elements with the same `N` are equal iff their stored
//! coefficients are equal. Values known to be roots of unity carry an
//! exponent hint so that products of such values avoid the generic
//! convolution.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Per-modulus tables: the cyclotomic polynomial and `z^k` reduced for every `k < N`.
struct CycloData {
    n: u32,
    phi: usize,
    powers: Vec<Vec<BigInt>>,
}

fn cyclotomic_poly_i64(n: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // x^n - 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_poly_i64(d, memo);
            num = exact_div_monic(&num, &div);
        }
    }
    memo.insert(n, num.clone());
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let nn = rem.len() - 1;
    let mut quot = vec![0i64; nn - dn + 1];
    for i in (0..=nn - dn).rev() {
        let c = rem[i + dn];
        quot[i] = c;
        if c != 0 {
            for j in 0..=dn {
                rem[i + j] -= c * den[j];
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

impl CycloData {
    fn build(n: u32) -> CycloData {
        let mut memo = HashMap::new();
        let poly = cyclotomic_poly_i64(n, &mut memo);
        let phi = poly.len() - 1;
        debug_assert_eq!(phi as u64, euler_phi(n as u64));
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        if phi == 0 {
            unreachable!("cyclotomic polynomial has positive degree");
        }
        for _ in 0..n {
            powers.push(cur.iter().map(|&c| BigInt::from(c)).collect());
            // multiply by x and reduce
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * poly[i];
                }
            }
        }
        CycloData { n, phi, powers }
    }
}

fn cyclo_data(n: u32) -> Arc<CycloData> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<CycloData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(d) = cache.read().expect("cyclotomic cache poisoned").get(&n) {
        return d.clone();
    }
    let built = Arc::new(CycloData::build(n));
    cache.write().expect("cyclotomic cache poisoned").entry(n).or_insert(built).clone()
}

/// An exact element of `Q(zeta_N)`.
#[derive(Clone)]
pub struct CycScalar {
    data: Arc<CycloData>,
    num: Vec<BigInt>,
    den: BigInt,
    root: Option<u32>,
}

impl CycScalar {
    pub fn modulus(&self) -> u32 {
        self.data.n
    }

    /// `zeta_N^(k mod N)`.
    pub fn root_of_unity(n: u32, k: i64) -> Result<CycScalar> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        let data = cyclo_data(n);
        Ok(Self::from_root_data(data, k.rem_euclid(n as i64) as u32))
    }

    fn from_root_data(data: Arc<CycloData>, k: u32) -> CycScalar {
        let num = data.powers[k as usize].clone();
        CycScalar { data, num, den: BigInt::one(), root: Some(k) }
    }

    pub fn from_rational(n: u32, value: BigRational) -> Result<CycScalar> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        let data = cyclo_data(n);
        let mut num = vec![BigInt::zero(); data.phi];
        num[0] = value.numer().clone();
        let mut out = CycScalar { data, num, den: value.denom().clone(), root: None };
        out.normalize();
        Ok(out)
    }

    pub fn from_int(n: u32, value: i64) -> Result<CycScalar> {
        Self::from_rational(n, BigRational::from_integer(BigInt::from(value)))
    }

    pub fn zero(n: u32) -> Result<CycScalar> {
        Self::from_int(n, 0)
    }

    pub fn one(n: u32) -> Result<CycScalar> {
        Self::root_of_unity(n, 0)
    }

    /// Coefficients in the power basis as reduced rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    fn is_minus_one(&self) -> bool {
        self.den.is_one() && self.num[0] == BigInt::from(-1) && self.num[1..].iter().all(Zero::is_zero)
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in &mut self.num {
                *c = -c.clone();
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    return;
                }
            }
        }
        if !g.is_one() {
            self.den = &self.den / &g;
            for c in &mut self.num {
                *c = &*c / &g;
            }
        }
    }

    /// Embeds into `Q(zeta_L)` for a multiple `L` of the current modulus.
    pub fn lift_to(&self, l: u32) -> Result<CycScalar> {
        let n = self.data.n;
        if l == 0 {
            return Err(Error::ZeroModulus);
        }
        if l % n != 0 {
            return Err(Error::DimensionMismatch(format!("cannot embed Q(zeta_{n}) into Q(zeta_{l})")));
        }
        if l == n {
            return Ok(self.clone());
        }
        let target = cyclo_data(l);
        let step = (l / n) as usize;
        if let Some(k) = self.root {
            return Ok(Self::from_root_data(target, k * step as u32));
        }
        let mut num = vec![BigInt::zero(); target.phi];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (acc, b) in num.iter_mut().zip(&target.powers[i * step]) {
                if !b.is_zero() {
                    *acc += c * b;
                }
            }
        }
        let mut out = CycScalar { data: target, num, den: self.den.clone(), root: None };
        out.normalize();
        Ok(out)
    }

    fn coerce(a: &CycScalar, b: &CycScalar) -> (CycScalar, CycScalar) {
        let l = lcm_u64(a.data.n as u64, b.data.n as u64) as u32;
        (a.lift_to(l).expect("lcm is a multiple"), b.lift_to(l).expect("lcm is a multiple"))
    }

    fn add_same(&self, other: &CycScalar) -> CycScalar {
        let num: Vec<BigInt> = if self.den == other.den {
            self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect()
        } else {
            self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den + b * &self.den).collect()
        };
        let den = if self.den == other.den { self.den.clone() } else { &self.den * &other.den };
        let mut out = CycScalar { data: self.data.clone(), num, den, root: None };
        out.normalize();
        out
    }

    fn mul_same(&self, other: &CycScalar) -> CycScalar {
        let data = &self.data;
        if let (Some(a), Some(b)) = (self.root, other.root) {
            return Self::from_root_data(data.clone(), (a + b) % data.n);
        }
        let phi = data.phi;
        let mut conv = vec![BigInt::zero(); 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    conv[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = conv[..phi].to_vec();
        for (k, c) in conv.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            let red = &data.powers[k % data.n as usize];
            for (acc, r) in num.iter_mut().zip(red) {
                if !r.is_zero() {
                    *acc += c * r;
                }
            }
        }
        let mut out = CycScalar { data: data.clone(), num, den: &self.den * &other.den, root: None };
        out.normalize();
        out
    }

    /// The Galois automorphism `zeta -> zeta^a` for `a` coprime to `N`.
    pub fn galois(&self, a: i64) -> Result<CycScalar> {
        let n = self.data.n as i64;
        let a = a.rem_euclid(n);
        if gcd_u64(a as u64, n as u64) != 1 {
            return Err(Error::InvalidParameters(format!("{a} is not a unit modulo {n}")));
        }
        if let Some(k) = self.root {
            return Ok(Self::from_root_data(self.data.clone(), ((k as i64 * a) % n) as u32));
        }
        let mut num = vec![BigInt::zero(); self.data.phi];
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let red = &self.data.powers[((i as i64 * a) % n) as usize];
            for (acc, r) in num.iter_mut().zip(red) {
                if !r.is_zero() {
                    *acc += c * r;
                }
            }
        }
        let mut out = CycScalar { data: self.data.clone(), num, den: self.den.clone(), root: None };
        out.normalize();
        Ok(out)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> CycScalar {
        self.galois(-1).expect("-1 is always a unit")
    }

    pub fn inv(&self) -> Result<CycScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.data.n;
        if let Some(k) = self.root {
            return Ok(Self::from_root_data(self.data.clone(), (n - k) % n));
        }
        // product of the non-trivial conjugates, divided by the norm
        let mut cofactor = CycScalar::one(n)?;
        for a in 2..n.max(2) as i64 {
            if gcd_u64(a as u64, n as u64) == 1 {
                cofactor = cofactor.mul_same(&self.galois(a)?);
            }
        }
        let norm = self.mul_same(&cofactor);
        debug_assert!(norm.num[1..].iter().all(Zero::is_zero));
        let norm_q = BigRational::new(norm.num[0].clone(), norm.den.clone());
        let scale = CycScalar::from_rational(n, norm_q.recip())?;
        Ok(cofactor.mul_same(&scale))
    }

    pub fn pow(&self, e: i64) -> Result<CycScalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycScalar::one(self.data.n)?;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&b);
            }
            b = b.mul_same(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn div(&self, other: &CycScalar) -> Result<CycScalar> {
        Ok(self * &other.inv()?)
    }

    /// The sign represented by an element that must be exactly `+1` or `-1`.
    pub fn as_sign(&self) -> Result<i8> {
        if self.is_one() {
            Ok(1)
        } else if self.is_minus_one() {
            Ok(-1)
        } else {
            Err(Error::NotASign(self.to_string()))
        }
    }

    /// If the value is a known root of unity, its exponent relative to `zeta_N`.
    pub fn root_exponent(&self) -> Option<u32> {
        self.root
    }

    /// Nonzero `(k, coefficient)` terms of the power-basis expansion.
    pub fn terms(&self) -> Vec<(usize, BigRational)> {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, BigRational::new(c.clone(), self.den.clone())))
            .collect()
    }
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.data.n == other.data.n {
            self.den == other.den && self.num == other.num
        } else {
            let (a, b) = CycScalar::coerce(self, other);
            a.den == b.den && a.num == b.num
        }
    }
}

impl Eq for CycScalar {}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &'a CycScalar) -> CycScalar {
        if self.data.n == rhs.data.n {
            self.add_same(rhs)
        } else {
            let (a, b) = CycScalar::coerce(self, rhs);
            a.add_same(&b)
        }
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &'a CycScalar) -> CycScalar {
        if self.data.n == rhs.data.n {
            self.mul_same(rhs)
        } else {
            let (a, b) = CycScalar::coerce(self, rhs);
            a.mul_same(&b)
        }
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        let n = self.data.n;
        let root = match self.root {
            Some(k) if n % 2 == 0 => Some((k + n / 2) % n),
            _ => None,
        };
        CycScalar { data: self.data.clone(), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone(), root }
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &'a CycScalar) -> CycScalar {
        self + &(-rhs)
    }
}

impl Add for CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: CycScalar) -> CycScalar {
        &self + &rhs
    }
}

impl Mul for CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: CycScalar) -> CycScalar {
        &self * &rhs
    }
}

impl Neg for CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        -&self
    }
}

impl Sub for CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: CycScalar) -> CycScalar {
        &self - &rhs
    }
}

impl fmt::Display for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.data.n;
        let parts: Vec<String> = terms
            .iter()
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*z{n}"),
                _ => format!("{c}*z{n}^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycScalar({self})")
    }
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<(usize, String)> =
            self.terms().into_iter().map(|(k, c)| (k, format!("{}/{}", c.numer(), c.denom()))).collect();
        let mut st = serializer.serialize_struct("CycScalar", 2)?;
        st.serialize_field("N", &self.data.n)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "N")]
            n: u32,
            coeffs: Vec<(usize, String)>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut acc = CycScalar::zero(raw.n).map_err(de::Error::custom)?;
        for (k, text) in raw.coeffs {
            if k >= raw.n as usize {
                return Err(de::Error::custom(format!("exponent {k} out of range")));
            }
            let (p, q) = text.split_once('/').ok_or_else(|| de::Error::custom(format!("bad rational {text}")))?;
            let p: BigInt = p.trim().parse().map_err(de::Error::custom)?;
            let q: BigInt = q.trim().parse().map_err(de::Error::custom)?;
            if q.is_zero() {
                return Err(de::Error::custom("zero denominator"));
            }
            let c = CycScalar::from_rational(raw.n, BigRational::new(p, q)).map_err(de::Error::custom)?;
            let z = CycScalar::root_of_unity(raw.n, k as i64).map_err(de::Error::custom)?;
            acc = &acc + &(&c * &z);
        }
        Ok(acc)
    }
}

/// A root of unity `exp/order` (meaning `exp(2 pi i exp/order)`), kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    order: u64,
    exp: u64,
}

impl RootOfUnity {
    pub fn new(order: u64, exp: i64) -> Result<RootOfUnity> {
        if order == 0 {
            return Err(Error::ZeroModulus);
        }
        let e = exp.rem_euclid(order as i64) as u64;
        let g = gcd_u64(e, order);
        if e == 0 {
            return Ok(RootOfUnity { order: 1, exp: 0 });
        }
        Ok(RootOfUnity { order: order / g, exp: e / g })
    }

    pub fn one() -> RootOfUnity {
        RootOfUnity { order: 1, exp: 0 }
    }

    pub fn minus_one() -> RootOfUnity {
        RootOfUnity { order: 2, exp: 1 }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exp(&self) -> u64 {
        self.exp
    }

    /// Exponent relative to `zeta_n`; requires `order | n`.
    pub fn exp_mod(&self, n: u64) -> Result<u64> {
        if n % self.order != 0 {
            return Err(Error::DimensionMismatch(format!("root of order {} does not live in Q(zeta_{n})", self.order)));
        }
        Ok(self.exp * (n / self.order))
    }

    pub fn mul(&self, other: &RootOfUnity) -> RootOfUnity {
        let l = lcm_u64(self.order, other.order);
        let e = self.exp * (l / self.order) + other.exp * (l / other.order);
        RootOfUnity::new(l, (e % l) as i64).expect("nonzero order")
    }

    pub fn inv(&self) -> RootOfUnity {
        RootOfUnity::new(self.order, -(self.exp as i64)).expect("nonzero order")
    }

    pub fn pow(&self, k: i64) -> RootOfUnity {
        let e = (self.exp as i128 * k as i128).rem_euclid(self.order as i128);
        RootOfUnity::new(self.order, e as i64).expect("nonzero order")
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0
    }

    pub fn to_cyc(&self, n: u32) -> Result<CycScalar> {
        let e = self.exp_mod(n as u64)?;
        CycScalar::root_of_unity(n, e as i64)
    }

    /// `+1` or `-1` if this root is a sign.
    pub fn as_sign(&self) -> Result<i8> {
        match (self.order, self.exp) {
            (1, _) => Ok(1),
            (2, 1) => Ok(-1),
            _ => Err(Error::NotASign(format!("exp(2 pi i {}/{})", self.exp, self.order))),
        }
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exp) {
            (1, _) => write!(f, "1"),
            (2, 1) => write!(f, "-1"),
            (o, e) => write!(f, "z{o}^{e}"),
        }
    }
}
