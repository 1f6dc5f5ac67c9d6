//! The constant field `F_Q`, `Q = q^m = p^(v m)`, as `F_p[y] / (modulus)`.
//!
//! Elements are encoded as the base-p integer of their residue polynomial
//! (low coefficient first). Multiplication goes through exp/log tables built
//! from a primitive element, so field orders are capped at [`MAX_ORDER`].

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest supported constant-field order.
pub const MAX_ORDER: u64 = 1 << 22;

/// Relative precision used when inverting exact series, unless overridden.
pub const DEFAULT_REL_PREC: i64 = 32;

/// An element of the constant field, encoded in base p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ConstElem(pub(crate) u32);

impl ConstElem {
    pub const ZERO: ConstElem = ConstElem(0);
    pub const ONE: ConstElem = ConstElem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Configuration of the coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldParams {
    pub p: u32,
    pub v: u32,
    pub m: u32,
    /// Monic modulus of degree `v * m`, coefficients low to high.
    pub modulus: Vec<u32>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Dense polynomials over F_p, low coefficient first, used only while
/// validating parameters and building tables.
mod fp_poly {
    use alloc::vec;
    use alloc::vec::Vec;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            if c != 0 {
                let shift = top - dm;
                for (k, &mk) in m.iter().enumerate() {
                    r[shift + k] = (r[shift + k] + p - c * mk % p) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&acc, m, p)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|k| {
                let x = a.get(k).copied().unwrap_or(0);
                let y = b.get(k).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    pub fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    }
}

/// Rabin's test: `f` of degree n is irreducible over F_p iff
/// `y^(p^n) = y mod f` and `gcd(y^(p^(n/r)) - y, f) = 1` for primes `r | n`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let y = vec![0u64, 1];
    let frob = |k: usize| {
        let mut t = y.clone();
        for _ in 0..k {
            t = fp_poly::powmod(&t, p, f, p);
        }
        t
    };
    if fp_poly::sub(&frob(n), &y, p) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_factors(n as u64) {
        let t = fp_poly::sub(&frob(n / r as usize), &y, p);
        let g = fp_poly::gcd(&t, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn has_root(f: &[u64], p: u64) -> bool {
    (0..p).any(|x| {
        let mut acc = 0u64;
        for &c in f.iter().rev() {
            acc = (acc * x + c) % p;
        }
        acc == 0
    })
}

/// Conway polynomials for the default configurations.
fn conway(p: u32, degree: u32) -> Option<&'static [u32]> {
    let c: &'static [u32] = match (p, degree) {
        (2, 1) => &[1, 1],
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (2, 6) => &[1, 1, 0, 1, 1, 0, 1],
        (3, 1) => &[1, 1],
        (3, 2) => &[2, 2, 1],
        (3, 4) => &[2, 0, 0, 2, 1],
        (5, 1) => &[3, 1],
        (5, 2) => &[2, 4, 1],
        _ => return None,
    };
    Some(c)
}

impl FieldParams {
    /// Validates the parameters: p prime, `v, m >= 1`, monic irreducible
    /// modulus of degree `v * m`.
    pub fn new(p: u32, v: u32, m: u32, modulus: Vec<u32>) -> Result<FieldParams> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{} is not prime", p)));
        }
        if v == 0 || m == 0 {
            return Err(Error::InvalidField("v and m must be positive".into()));
        }
        let degree = (v * m) as usize;
        if modulus.len() != degree + 1 {
            return Err(Error::InvalidField(format!(
                "modulus must have degree {}",
                degree
            )));
        }
        if modulus[degree] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficients must lie in 0..p".into()));
        }
        let order = (p as u64)
            .checked_pow(degree as u32)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidField(format!("field order exceeds {}", MAX_ORDER)))?;
        let _ = order;
        let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if degree > 1 && has_root(&f, p as u64) {
            return Err(Error::InvalidField("modulus has a root in F_p".into()));
        }
        if !is_irreducible(&f, p as u64) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(FieldParams { p, v, m, modulus })
    }

    /// Shipped configuration for `q = p^v` and constant-field degree `m`:
    /// a Conway polynomial when one is tabulated, otherwise the
    /// lexicographically first monic irreducible polynomial.
    pub fn standard(q: u64, m: u32) -> Result<FieldParams> {
        let (p, v) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{} is not a prime power", q)))?;
        let degree = v * m;
        if let Some(c) = conway(p, degree) {
            return FieldParams::new(p, v, m, c.to_vec());
        }
        let count = (p as u64)
            .checked_pow(degree)
            .filter(|&c| c <= MAX_ORDER)
            .ok_or_else(|| Error::InvalidField("field order too large".into()))?;
        for code in 0..count {
            let mut modulus = Vec::with_capacity(degree as usize + 1);
            let mut c = code;
            for _ in 0..degree {
                modulus.push((c % p as u64) as u32);
                c /= p as u64;
            }
            modulus.push(1);
            if let Ok(fp) = FieldParams::new(p, v, m, modulus) {
                return Ok(fp);
            }
        }
        Err(Error::InvalidField("no irreducible polynomial found".into()))
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.v)
    }

    /// `Q = q^m`, the order of the constant field.
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.v * self.m)
    }

    pub fn degree(&self) -> u32 {
        self.v * self.m
    }
}

/// Returns `(p, v)` with `q = p^v`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut v = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        v += 1;
    }
    (rest == 1).then_some((p as u32, v))
}

/// The coefficient field together with its arithmetic tables.
pub struct Field {
    params: FieldParams,
    q: u64,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    generator: ConstElem,
    rel_prec: i64,
}

pub type FieldRef = Arc<Field>;

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.params.p)
            .field("v", &self.params.v)
            .field("m", &self.params.m)
            .field("modulus", &self.params.modulus)
            .field("rel_prec", &self.rel_prec)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.rel_prec == other.rel_prec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(params: FieldParams) -> Result<FieldRef> {
        Field::with_precision(params, DEFAULT_REL_PREC)
    }

    /// `rel_prec` is the number of units of x-adic precision (relative to the
    /// leading term) kept when inverting an exact series.
    pub fn with_precision(params: FieldParams, rel_prec: i64) -> Result<FieldRef> {
        if rel_prec <= 0 {
            return Err(Error::Parameter("relative precision must be positive".into()));
        }
        let p = params.p as u64;
        let order = params.order();
        let degree = params.degree() as usize;
        let modulus: Vec<u64> = params.modulus.iter().map(|&c| c as u64).collect();
        let decode = |code: u64| -> Vec<u64> {
            let mut v = Vec::with_capacity(degree);
            let mut c = code;
            for _ in 0..degree {
                v.push(c % p);
                c /= p;
            }
            fp_poly::trim(&mut v);
            v
        };
        let encode = |poly: &[u64]| -> u64 {
            poly.iter().rev().fold(0u64, |acc, &c| acc * p + c)
        };
        let group = order - 1;
        let factors = prime_factors(group);
        let is_primitive = |code: u64| -> bool {
            if code == 0 {
                return false;
            }
            let g = decode(code);
            factors
                .iter()
                .all(|&r| fp_poly::powmod(&g, group / r, &modulus, p) != vec![1u64])
        };
        let preferred = if degree > 1 { p } else { 1 };
        let gen_code = if order == 2 {
            1
        } else if is_primitive(preferred) {
            preferred
        } else {
            (2..order)
                .find(|&c| is_primitive(c))
                .ok_or_else(|| Error::InvalidField("no primitive element".into()))?
        };
        let g = decode(gen_code);
        let mut exp = vec![0u32; group as usize];
        let mut log = vec![u32::MAX; order as usize];
        let mut cur = vec![1u64];
        for k in 0..group as usize {
            let code = encode(&cur);
            exp[k] = code as u32;
            log[code as usize] = k as u32;
            cur = fp_poly::mulmod(&cur, &g, &modulus, p);
        }
        let add_table = if order <= 256 && p != 2 {
            let mut t = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    t[(a * order + b) as usize] = digit_add(a, b, p, degree) as u32;
                }
            }
            Some(t)
        } else {
            None
        };
        Ok(Arc::new(Field {
            q: params.q(),
            order: order as u32,
            params,
            exp,
            log,
            add_table,
            generator: ConstElem(gen_code as u32),
            rel_prec,
        }))
    }

    /// The shipped field for `q` with constant-field degree `m`.
    pub fn standard(q: u64, m: u32) -> Result<FieldRef> {
        Field::new(FieldParams::standard(q, m)?)
    }

    /// Same coefficient field, different default relative precision.
    pub fn reprecision(&self, rel_prec: i64) -> Result<FieldRef> {
        Field::with_precision(self.params.clone(), rel_prec)
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    /// The Carlitz parameter `q = p^v`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Order `Q` of the constant field.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn rel_prec(&self) -> i64 {
        self.rel_prec
    }

    pub fn generator(&self) -> ConstElem {
        self.generator
    }

    pub fn zero(&self) -> ConstElem {
        ConstElem::ZERO
    }

    pub fn one(&self) -> ConstElem {
        ConstElem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> ConstElem {
        ConstElem(n.rem_euclid(self.params.p as i64) as u32)
    }

    pub fn add(&self, a: ConstElem, b: ConstElem) -> ConstElem {
        if self.params.p == 2 {
            return ConstElem(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => ConstElem(t[(a.0 * self.order + b.0) as usize]),
            None => ConstElem(digit_add(
                a.0 as u64,
                b.0 as u64,
                self.params.p as u64,
                self.params.degree() as usize,
            ) as u32),
        }
    }

    pub fn neg(&self, a: ConstElem) -> ConstElem {
        if self.params.p == 2 || a.is_zero() {
            return a;
        }
        let p = self.params.p as u64;
        let mut out = 0u64;
        let mut mul = 1u64;
        let mut c = a.0 as u64;
        for _ in 0..self.params.degree() {
            let d = c % p;
            out += ((p - d) % p) * mul;
            mul *= p;
            c /= p;
        }
        ConstElem(out as u32)
    }

    pub fn sub(&self, a: ConstElem, b: ConstElem) -> ConstElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: ConstElem, b: ConstElem) -> ConstElem {
        if a.is_zero() || b.is_zero() {
            return ConstElem::ZERO;
        }
        let g = (self.order - 1) as u64;
        let k = (self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % g;
        ConstElem(self.exp[k as usize])
    }

    pub fn inv(&self, a: ConstElem) -> Option<ConstElem> {
        if a.is_zero() {
            return None;
        }
        let g = (self.order - 1) as u64;
        let k = (g - self.log[a.0 as usize] as u64) % g;
        Some(ConstElem(self.exp[k as usize]))
    }

    /// `a^e` for any integer `e`; `0^e` is 0 for `e > 0` and 1 for `e = 0`.
    pub fn pow(&self, a: ConstElem, e: i64) -> ConstElem {
        if e == 0 {
            return ConstElem::ONE;
        }
        if a.is_zero() {
            return ConstElem::ZERO;
        }
        let g = (self.order - 1) as i128;
        let k = (self.log[a.0 as usize] as i128 * e as i128).rem_euclid(g);
        ConstElem(self.exp[k as usize])
    }

    /// `a^(q^e)`; for negative `e` this is the inverse Frobenius.
    pub fn frob(&self, a: ConstElem, e: i64) -> ConstElem {
        let m = self.params.m as i64;
        let j = e.rem_euclid(m);
        if j == 0 || a.is_zero() {
            return a;
        }
        let g = (self.order - 1) as u128;
        let qj = (self.q as u128).pow(j as u32) % g;
        let k = (self.log[a.0 as usize] as u128 * qj) % g;
        ConstElem(self.exp[k as usize])
    }

    /// `g^j` for the fixed generator g.
    pub fn gen_pow(&self, j: i64) -> ConstElem {
        let g = (self.order - 1) as i64;
        ConstElem(self.exp[j.rem_euclid(g) as usize])
    }

    /// Discrete logarithm to the fixed generator.
    pub fn log(&self, a: ConstElem) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    /// Residue coefficients over F_p, low to high, length `v * m`.
    pub fn coeffs(&self, a: ConstElem) -> Vec<u32> {
        let p = self.params.p;
        let mut c = a.0;
        (0..self.params.degree())
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<ConstElem> {
        let p = self.params.p;
        if coeffs.len() > self.params.degree() as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(Error::Parameter("coefficient vector out of range".into()));
        }
        Ok(ConstElem(coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)))
    }

    /// True when the element lies in the prime subfield F_p.
    pub fn in_prime_field(&self, a: ConstElem) -> bool {
        a.0 < self.params.p
    }

    /// All elements, in code order.
    pub fn elements(&self) -> impl Iterator<Item = ConstElem> {
        (0..self.order).map(ConstElem)
    }

    pub(crate) fn same(a: &FieldRef, b: &FieldRef) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

fn digit_add(a: u64, b: u64, p: u64, degree: usize) -> u64 {
    let (mut x, mut y) = (a, b);
    let mut out = 0u64;
    let mut mul = 1u64;
    for _ in 0..degree {
        out += ((x % p + y % p) % p) * mul;
        x /= p;
        y /= p;
        mul *= p;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_fields_construct() {
        for q in [2u64, 3, 4, 5, 8, 9] {
            for m in [1u32, 2] {
                let f = Field::standard(q, m).unwrap();
                assert_eq!(f.order() as u64, q.pow(m));
            }
        }
        // a configuration without a tabulated Conway polynomial
        let f = Field::standard(7, 2).unwrap();
        assert_eq!(f.order(), 49);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldParams::new(4, 1, 1, vec![1, 1]).is_err());
        // y^2 + 1 = (y + 1)^2 over F_2
        assert!(FieldParams::new(2, 2, 1, vec![1, 0, 1]).is_err());
        // y^4 + y^2 + 1 = (y^2 + y + 1)^2 has no roots but is reducible
        assert!(FieldParams::new(2, 4, 1, vec![1, 0, 1, 0, 1]).is_err());
        assert!(FieldParams::new(3, 1, 1, vec![2, 1]).is_ok());
        assert!(FieldParams::new(3, 1, 1, vec![1, 2]).is_err());
    }

    #[test]
    fn every_element_is_fixed_by_full_frobenius() {
        for (q, m) in [(4u64, 2u32), (9, 1), (3, 2), (8, 1)] {
            let f = Field::standard(q, m).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, f.order() as i64), a);
                assert_eq!(f.frob(f.frob(a, -1), 1), a);
                assert_eq!(f.frob(a, m as i64), a);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        let f = Field::standard(9, 1).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), ConstElem::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), ConstElem::ONE);
            }
            for b in f.elements() {
                for c in f.elements().step_by(3) {
                    let lhs = f.mul(a, f.add(b, c));
                    let rhs = f.add(f.mul(a, b), f.mul(a, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn coefficient_vectors_round_trip() {
        let f = Field::standard(5, 2).unwrap();
        for a in f.elements() {
            let c = f.coeffs(a);
            assert_eq!(c.len(), 2);
            assert_eq!(f.from_coeffs(&c).unwrap(), a);
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
    }
}
