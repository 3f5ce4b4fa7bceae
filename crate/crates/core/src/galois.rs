//! Finite fields `F_{p^K}` with all intermediate subfields.
//!
//! A single top field is built per run; every smaller field of the tower
//! (`F_p ⊆ F_{q'} ⊆ F_q ⊆ F_{q^n} ⊆ F_{q^{2n}}`) is realised as the subfield
//! of the top field fixed by the appropriate power of Frobenius, so the
//! embeddings between levels are inclusions and commute with Frobenius by
//! construction. Elements are packed as `sum c_i p^i` over the power basis
//! of `F_p[x]/(f)`, so the prime field is exactly the indices `0..p`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cyclo::{CycScalar, RootOfUnity};
use crate::error::{Error, Result};

/// Largest field handled with exp/log tables.
pub const TABLE_LIMIT: u64 = 531_441; // 3^12
/// Largest field handled at all.
pub const FIELD_LIMIT: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u64);

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `(p, f)` with `q = p^f`.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return Err(Error::NotPrimePower(q));
    }
    let p = f[0];
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Ok((p, e))
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let quot = r / new_r;
        (t, new_t) = (new_t, t - quot * new_t);
        (r, new_r) = (new_r, r - quot * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

fn pow_u64(b: u64, e: u32) -> Option<u64> {
    b.checked_pow(e)
}

// --- polynomials over F_p, coefficients low to high ---

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let df = f.len() - 1;
    let lead_inv = mod_inverse(f[df], p).expect("nonzero leading coefficient");
    while r.len() > df && !(r.len() == 1 && r[0] == 0) {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        if c != 0 {
            for i in 0..=df {
                let idx = dr - df + i;
                r[idx] = (r[idx] + p * p - c * f[i] % p) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    poly_trim(&mut out);
    out
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !poly_is_zero(&b) {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style test: `gcd(x^(p^i) - x, f) = 1` for `i <= deg/2`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..d / 2 {
        let mut acc = vec![1u64];
        for _ in 0..p {
            acc = poly_mulmod(&acc, &xp, f, p);
        }
        xp = acc;
        let g = poly_gcd(f, &poly_sub(&xp, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// The field `F_{p^K}`.
pub struct GaloisField {
    p: u64,
    degree: u32,
    order: u64,
    modulus: Vec<u64>,
    generator: Elem,
    group_factors: Vec<u64>,
    tables: Option<Tables>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.degree)
    }
}

impl GaloisField {
    pub fn new(p: u64, degree: u32) -> Result<GaloisField> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if degree == 0 {
            return Err(Error::InvalidParameters("field degree must be positive".into()));
        }
        let order = match pow_u64(p, degree) {
            Some(o) if o <= FIELD_LIMIT => o,
            _ => return Err(Error::FieldTooLarge { p, degree }),
        };
        let modulus = Self::find_modulus(p, degree);
        let group_factors = prime_factors(order - 1);
        let mut field = GaloisField { p, degree, order, modulus, generator: Elem(0), group_factors, tables: None };
        field.generator = field.find_generator();
        if order <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    /// The lowest monic irreducible of the given degree, ordered by packed lower coefficients.
    fn find_modulus(p: u64, degree: u32) -> Vec<u64> {
        let count = p.pow(degree);
        for idx in 0..count {
            let mut f = Vec::with_capacity(degree as usize + 1);
            let mut r = idx;
            for _ in 0..degree {
                f.push(r % p);
                r /= p;
            }
            f.push(1);
            if is_irreducible(&f, p) {
                return f;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn find_generator(&self) -> Elem {
        let m = self.order - 1;
        for idx in 1..self.order {
            let g = Elem(idx);
            if self.group_factors.iter().all(|&l| !self.pow_poly(g, m / l).eq(&self.one())) {
                return g;
            }
        }
        unreachable!("the multiplicative group is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let m = (self.order - 1) as usize;
        let mut exp = vec![0u32; m];
        let mut log = vec![u32::MAX; self.order as usize];
        let mut cur = self.one();
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0 as u32;
            log[cur.0 as usize] = k as u32;
            cur = self.mul_poly(cur, self.generator);
        }
        Tables { exp, log }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.p as i64) as u64)
    }

    pub fn digits(&self, x: Elem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.degree as usize);
        let mut r = x.0;
        for _ in 0..self.degree {
            out.push(r % self.p);
            r /= self.p;
        }
        out
    }

    fn pack(&self, digits: &[u64]) -> Elem {
        let mut v = 0u64;
        for &d in digits.iter().rev() {
            v = v * self.p + d;
        }
        Elem(v)
    }

    /// The prime-field value of `x`, if it lies in `F_p`.
    pub fn as_prime(&self, x: Elem) -> Option<u64> {
        (x.0 < self.p).then_some(x.0)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let mut x = a.0;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        let prod = poly_mulmod(&self.digits(a), &self.digits(b), &self.modulus, self.p);
        self.pack(&prod)
    }

    fn pow_poly(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        match &self.tables {
            Some(t) => {
                let m = self.order - 1;
                let k = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % m;
                Elem(t.exp[k as usize] as u64)
            }
            None => self.mul_poly(a, b),
        }
    }

    /// `g^k` for the field generator.
    pub fn exp(&self, k: i64) -> Elem {
        let m = self.order - 1;
        let k = k.rem_euclid(m as i64) as u64;
        match &self.tables {
            Some(t) => Elem(t.exp[k as usize] as u64),
            None => self.pow_poly(self.generator, k),
        }
    }

    pub fn pow(&self, a: Elem, e: i64) -> Result<Elem> {
        if a.0 == 0 {
            return match e {
                0 => Ok(self.one()),
                e if e > 0 => Ok(Elem(0)),
                _ => Err(Error::DivisionByZero),
            };
        }
        let m = (self.order - 1) as i128;
        let e_red = (e as i128).rem_euclid(m) as u64;
        Ok(match &self.tables {
            Some(t) => {
                let k = (t.log[a.0 as usize] as u128 * e_red as u128 % m as u128) as usize;
                Elem(t.exp[k] as u64)
            }
            None => self.pow_poly(a, e_red),
        })
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        self.pow(a, -1)
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Discrete logarithm to base the field generator.
    pub fn dlog(&self, x: Elem) -> Result<u64> {
        if x.0 == 0 {
            return Err(Error::LogOfZero);
        }
        match &self.tables {
            Some(t) => Ok(t.log[x.0 as usize] as u64),
            None => Ok(self.pohlig_hellman(x)),
        }
    }

    fn pohlig_hellman(&self, x: Elem) -> u64 {
        let m = self.order - 1;
        let mut residues = Vec::new();
        for &l in &self.group_factors {
            let mut le = 1u64;
            while m % (le * l) == 0 {
                le *= l;
            }
            // x^(m/le) = gamma^k with gamma = g^(m/le) of order le
            let gamma = self.pow_poly(self.generator, m / le);
            let target = self.pow_poly(x, m / le);
            let gamma_l = self.pow_poly(gamma, le / l); // order l
            let mut k = 0u64;
            let mut lk = 1u64;
            while lk < le {
                // strip known digits, then project to the order-l subgroup
                let shift = self.pow_poly(gamma, (le - k % le) % le);
                let h = self.pow_poly(self.mul_poly(target, shift), le / (lk * l));
                let digit = self.bsgs(gamma_l, h, l);
                k += digit * lk;
                lk *= l;
            }
            residues.push((k, le));
        }
        // CRT
        let mut acc = 0u64;
        let mut modn = 1u64;
        for (r, md) in residues {
            let inv = mod_inverse(modn % md, md).expect("coprime moduli");
            let t = ((r + md - acc % md) % md) as u128 * inv as u128 % md as u128;
            acc += (t as u64) * modn;
            modn *= md;
        }
        acc % m
    }

    fn bsgs(&self, base: Elem, target: Elem, ord: u64) -> u64 {
        let s = (ord as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(s as usize);
        let mut cur = self.one();
        for j in 0..s {
            baby.entry(cur.0).or_insert(j);
            cur = self.mul_poly(cur, base);
        }
        let giant = self.pow_poly(base, (ord - s % ord) % ord);
        let mut y = target;
        for i in 0..=s {
            if let Some(&j) = baby.get(&y.0) {
                return (i * s + j) % ord;
            }
            y = self.mul_poly(y, giant);
        }
        unreachable!("target lies in the subgroup generated by base")
    }

    fn check_subfield(&self, k: u32) -> Result<()> {
        if k == 0 || self.degree % k != 0 {
            return Err(Error::NotSubfield { sub: k, sup: self.degree });
        }
        Ok(())
    }

    /// Size `p^k` of the subfield of degree `k`.
    pub fn subfield_order(&self, k: u32) -> Result<u64> {
        self.check_subfield(k)?;
        Ok(self.p.pow(k))
    }

    /// `x^(p^r)`; `r` may be negative.
    pub fn frobenius_p(&self, x: Elem, r: i64) -> Elem {
        let r = r.rem_euclid(self.degree as i64) as u32;
        if r == 0 || x.0 == 0 {
            return x;
        }
        let e = self.p.pow(r) % (self.order - 1);
        self.pow(x, e as i64).expect("nonzero base")
    }

    /// `x^(p^(r * base))`: the `r`-th power of the `p^base`-Frobenius.
    pub fn frobenius(&self, x: Elem, r: i64, base: u32) -> Elem {
        self.frobenius_p(x, r * base as i64)
    }

    pub fn in_subfield(&self, x: Elem, k: u32) -> bool {
        self.degree % k == 0 && self.frobenius_p(x, k as i64) == x
    }

    /// Generator of the multiplicative group of the degree-`k` subfield.
    pub fn subfield_generator(&self, k: u32) -> Result<Elem> {
        self.check_subfield(k)?;
        let sub = self.p.pow(k) - 1;
        Ok(self.exp(((self.order - 1) / sub) as i64))
    }

    /// Discrete log relative to the subfield generator.
    pub fn subfield_dlog(&self, x: Elem, k: u32) -> Result<u64> {
        self.check_subfield(k)?;
        let l = self.dlog(x)?;
        let step = (self.order - 1) / (self.p.pow(k) - 1);
        if l % step != 0 {
            return Err(Error::NotInSubfield(k));
        }
        Ok(l / step)
    }

    /// Norm from the degree-`from` subfield to the degree-`to` subfield.
    pub fn norm_to(&self, x: Elem, from: u32, to: u32) -> Result<Elem> {
        self.check_subfield(from)?;
        if from % to != 0 {
            return Err(Error::NotSubfield { sub: to, sup: from });
        }
        if !self.in_subfield(x, from) {
            return Err(Error::NotInSubfield(from));
        }
        let mut acc = self.one();
        for i in 0..from / to {
            acc = self.mul(acc, self.frobenius_p(x, (i * to) as i64));
        }
        Ok(acc)
    }

    pub fn trace_to(&self, x: Elem, from: u32, to: u32) -> Result<Elem> {
        self.check_subfield(from)?;
        if from % to != 0 {
            return Err(Error::NotSubfield { sub: to, sup: from });
        }
        if !self.in_subfield(x, from) {
            return Err(Error::NotInSubfield(from));
        }
        let mut acc = self.zero();
        for i in 0..from / to {
            acc = self.add(acc, self.frobenius_p(x, (i * to) as i64));
        }
        Ok(acc)
    }

    /// The solution of `x^e = u` inside the degree-`k` subfield with the smallest
    /// discrete log relative to the subfield generator.
    pub fn solve_power(&self, u: Elem, e: i64, k: u32) -> Result<Elem> {
        self.check_subfield(k)?;
        let m = self.p.pow(k) - 1;
        let no_root = || Error::NoRoot { exponent: e.unsigned_abs(), degree: k };
        if u.0 == 0 {
            return if e > 0 { Ok(self.zero()) } else { Err(no_root()) };
        }
        let l = self.subfield_dlog(u, k).map_err(|_| no_root())?;
        let e_red = (e as i128).rem_euclid(m as i128) as u64;
        let g = num_integer::gcd(e_red, m);
        if l % g != 0 {
            return Err(no_root());
        }
        let mg = m / g;
        let j = if mg == 1 {
            0
        } else {
            let inv = mod_inverse((e_red / g) % mg, mg).ok_or_else(no_root)?;
            ((l / g) as u128 * inv as u128 % mg as u128) as u64
        };
        let gk = self.subfield_generator(k)?;
        self.pow(gk, j as i64)
    }

    /// All elements of the degree-`k` subfield, zero first then by subfield dlog.
    pub fn subfield_elements(&self, k: u32) -> Result<Vec<Elem>> {
        let gk = self.subfield_generator(k)?;
        let m = self.p.pow(k) - 1;
        let mut out = Vec::with_capacity(m as usize + 1);
        out.push(self.zero());
        let mut cur = self.one();
        for _ in 0..m {
            out.push(cur);
            cur = self.mul(cur, gk);
        }
        Ok(out)
    }

    /// An `F_p`-basis of the degree-`k` subfield: powers of its generator.
    pub fn subfield_basis(&self, k: u32) -> Result<Vec<Elem>> {
        let gk = self.subfield_generator(k)?;
        let mut out = Vec::with_capacity(k as usize);
        let mut cur = self.one();
        for _ in 0..k {
            out.push(cur);
            cur = self.mul(cur, gk);
        }
        Ok(out)
    }

    /// Minimal polynomial over `F_p` of `x`, monic, low to high.
    pub fn minimal_polynomial(&self, x: Elem) -> Vec<u64> {
        let mut conj = vec![x];
        let mut y = self.frobenius_p(x, 1);
        while y != x {
            conj.push(y);
            y = self.frobenius_p(y, 1);
        }
        let mut poly = vec![self.one()];
        for c in conj {
            let mut next = vec![self.zero(); poly.len() + 1];
            for (i, &a) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], a);
                next[i] = self.sub(next[i], self.mul(a, c));
            }
            poly = next;
        }
        poly.into_iter().map(|c| self.as_prime(c).expect("minimal polynomial has prime-field coefficients")).collect()
    }
}

/// A multiplicative character of the degree-`level` subfield:
/// `chi(g_level^k) = zeta_(p^level - 1)^(e k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultChar {
    pub level: u32,
    pub modulus: u64,
    pub exponent: u64,
}

impl MultChar {
    pub fn new(field: &GaloisField, level: u32, exponent: i64) -> Result<MultChar> {
        let modulus = field.subfield_order(level)? - 1;
        Ok(MultChar { level, modulus, exponent: exponent.rem_euclid(modulus as i64) as u64 })
    }

    pub fn trivial(field: &GaloisField, level: u32) -> Result<MultChar> {
        Self::new(field, level, 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn inverse(&self) -> MultChar {
        MultChar { exponent: (self.modulus - self.exponent) % self.modulus, ..*self }
    }

    pub fn pow(&self, k: i64) -> MultChar {
        let e = (self.exponent as i128 * k as i128).rem_euclid(self.modulus as i128) as u64;
        MultChar { exponent: e, ..*self }
    }

    /// `chi o (x -> x^k)`.
    pub fn compose_power(&self, k: u64) -> MultChar {
        self.pow(k as i64)
    }

    pub fn eval_root(&self, field: &GaloisField, x: Elem) -> Result<RootOfUnity> {
        let k = field.subfield_dlog(x, self.level)?;
        let e = (self.exponent as u128 * k as u128 % self.modulus as u128) as i64;
        RootOfUnity::new(self.modulus, e)
    }

    pub fn eval(&self, field: &GaloisField, x: Elem, n: u32) -> Result<CycScalar> {
        self.eval_root(field, x)?.to_cyc(n)
    }
}

/// `psi(x) = zeta_p^(Tr(x))` on the degree-`level` subfield.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddChar {
    pub level: u32,
}

impl AddChar {
    pub fn eval_root(&self, field: &GaloisField, x: Elem) -> Result<RootOfUnity> {
        let t = field.trace_to(x, self.level, 1)?;
        let t = field.as_prime(t).expect("absolute trace lies in F_p");
        RootOfUnity::new(field.characteristic(), t as i64)
    }

    pub fn eval(&self, field: &GaloisField, x: Elem, n: u32) -> Result<CycScalar> {
        self.eval_root(field, x)?.to_cyc(n)
    }
}

/// JSON-printable description of one level of a tower.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub name: String,
    pub degree: u32,
    pub order: u64,
    /// Generator as a packed element of the top field.
    pub generator: u64,
    /// Minimal polynomial of the generator over `F_p`, low to high.
    pub min_poly: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSpec {
    pub p: u64,
    pub top_degree: u32,
    pub modulus: Vec<u64>,
    pub generator: u64,
    pub levels: Vec<LevelSpec>,
}

/// A top field plus named levels.
#[derive(Debug, Clone)]
pub struct Tower {
    field: Arc<GaloisField>,
    levels: Vec<(String, u32)>,
}

impl Tower {
    pub fn new(p: u64, levels: &[(&str, u32)]) -> Result<Tower> {
        let top = levels.iter().map(|&(_, d)| d as u64).fold(1u64, num_integer::lcm);
        let field = Arc::new(GaloisField::new(p, top as u32)?);
        Ok(Tower { field, levels: levels.iter().map(|&(n, d)| (n.to_string(), d)).collect() })
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn spec(&self) -> TowerSpec {
        let f = &self.field;
        let mut levels: Vec<LevelSpec> = self
            .levels
            .iter()
            .map(|(name, d)| {
                let g = f.subfield_generator(*d).expect("level divides the top degree");
                LevelSpec {
                    name: name.clone(),
                    degree: *d,
                    order: f.subfield_order(*d).expect("level divides the top degree"),
                    generator: g.0,
                    min_poly: f.minimal_polynomial(g),
                }
            })
            .collect();
        levels.sort_by_key(|l| l.degree);
        TowerSpec {
            p: f.characteristic(),
            top_degree: f.degree(),
            modulus: f.modulus().to_vec(),
            generator: f.generator().0,
            levels,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_field_shapes() {
        let f9 = GaloisField::new(3, 2).unwrap();
        assert_eq!(f9.order(), 9);
        assert!(is_irreducible(f9.modulus(), 3));
        let g = f9.generator();
        // norm of a generator of F_9 down to F_3 is g^4 = -1 = 2
        assert_eq!(f9.norm_to(g, 2, 1).unwrap(), Elem(2));
        assert_eq!(f9.frobenius_p(f9.frobenius_p(g, 1), 1), g);
        assert_eq!(f9.dlog(f9.exp(5)).unwrap(), 5);
        assert_eq!(f9.dlog(f9.one()).unwrap(), 0);
        assert_eq!(f9.dlog(f9.zero()).unwrap_err(), Error::LogOfZero);
    }

    #[test]
    fn f4_frobenius_and_trace() {
        let f4 = GaloisField::new(2, 2).unwrap();
        let w = f4.generator();
        assert_eq!(f4.mul(w, w), f4.frobenius_p(w, 1));
        assert_eq!(f4.trace_to(w, 2, 1).unwrap(), f4.one());
        assert_eq!(f4.minimal_polynomial(w), vec![1, 1, 1]);
    }

    #[test]
    fn solve_power_examples() {
        let f9 = GaloisField::new(3, 2).unwrap();
        let minus_one = f9.from_int(-1);
        let beta = f9.solve_power(minus_one, 2, 2).unwrap();
        assert_eq!(beta, f9.exp(2));
        assert_eq!(f9.solve_power(f9.one(), 2, 2).unwrap(), f9.one());
        assert!(matches!(f9.solve_power(f9.generator(), 2, 2), Err(Error::NoRoot { .. })));
    }

    #[test]
    fn characters() {
        let f3 = GaloisField::new(3, 1).unwrap();
        let quad = MultChar::new(&f3, 1, 1).unwrap();
        assert_eq!(quad.eval_root(&f3, Elem(2)).unwrap(), RootOfUnity::minus_one());
        let triv = MultChar::trivial(&f3, 1).unwrap();
        assert!(triv.eval_root(&f3, Elem(2)).unwrap().is_one());
        let f2 = GaloisField::new(2, 1).unwrap();
        let psi = AddChar { level: 1 };
        assert_eq!(psi.eval_root(&f2, Elem(1)).unwrap(), RootOfUnity::minus_one());
    }

    #[test]
    fn polynomial_mode_matches_tables() {
        // 3^13 is past the table limit
        let big = GaloisField::new(3, 13).unwrap();
        assert!(big.tables.is_none());
        let x = big.exp(123_456);
        assert_eq!(big.dlog(x).unwrap(), 123_456);
        let y = big.exp(-7);
        assert_eq!(big.mul(big.exp(7), y), big.one());
        assert_eq!(big.frobenius_p(x, 13), x);
    }

    #[test]
    fn tower_spec_json() {
        let t = Tower::new(2, &[("F_p", 1), ("F_q", 2), ("F_q^n", 4)]).unwrap();
        let spec = t.spec();
        assert_eq!(spec.top_degree, 4);
        let text = serde_json::to_string(&spec).unwrap();
        let back: TowerSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(spec.levels[1].min_poly.len(), 3);
    }
}
