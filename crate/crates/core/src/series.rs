//! Truncated generalized Laurent series over the constant field, with
//! exponents in `Z[1/p]`: elements of the perfection of `F_Q((x))`.
//!
//! Precision model. A series carries an exclusive absolute bound `prec`
//! (`None` means +∞, i.e. the series is exact): every coefficient of an
//! exponent below `prec` is known. Then
//!
//! * `a + b` has precision `min(prec_a, prec_b)`;
//! * `a * b` has precision `min(prec_a + val_b, prec_b + val_a)`;
//! * `1 / a` with `a = c x^v + ...` has precision `prec_a - 2v`, capped at
//!   relative precision `R` (the field's [`Field::rel_prec`], or an explicit
//!   value), i.e. at absolute `-v + R`. Exact input gets exactly `-v + R`;
//! * `τ^e(a)` scales exponents and precision by `q^e`.
//!
//! Zero at finite precision and exact zero are different states; see
//! [`Valuation`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::field::{ConstElem, Field, FieldRef};
use crate::qexp::QExp;

/// The valuation of a series, distinguishing exact zero from zero at precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    /// The exact zero series.
    Infinite,
    /// The least exponent with a nonzero coefficient.
    Exact(QExp),
    /// No nonzero coefficient is known; the valuation is at least this.
    AtLeast(QExp),
}

impl Valuation {
    /// Lower bound usable in estimates; `None` is +∞.
    pub fn lower_bound(self) -> Option<QExp> {
        match self {
            Valuation::Infinite => None,
            Valuation::Exact(v) | Valuation::AtLeast(v) => Some(v),
        }
    }
}

#[derive(Clone)]
pub struct PerfSeries {
    field: FieldRef,
    terms: BTreeMap<QExp, ConstElem>,
    prec: Option<QExp>,
}

fn min_prec(a: Option<QExp>, b: Option<QExp>) -> Option<QExp> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

/// Exponents rescaled to integers over a common p-power denominator.
struct Grid {
    den: i64,
    terms: Vec<(i64, ConstElem)>,
}

impl PerfSeries {
    pub fn zero(field: &FieldRef) -> PerfSeries {
        PerfSeries {
            field: field.clone(),
            terms: BTreeMap::new(),
            prec: None,
        }
    }

    /// Zero known up to (excluding) `prec`: the literal `O(x^prec)`.
    pub fn big_o(field: &FieldRef, prec: QExp) -> PerfSeries {
        PerfSeries {
            field: field.clone(),
            terms: BTreeMap::new(),
            prec: Some(prec),
        }
    }

    pub fn one(field: &FieldRef) -> PerfSeries {
        PerfSeries::constant(field, ConstElem::ONE)
    }

    pub fn constant(field: &FieldRef, c: ConstElem) -> PerfSeries {
        PerfSeries::monomial(field, c, QExp::ZERO)
    }

    pub fn from_int(field: &FieldRef, n: i64) -> PerfSeries {
        PerfSeries::constant(field, field.from_int(n))
    }

    /// `c * x^e`.
    pub fn monomial(field: &FieldRef, c: ConstElem, e: QExp) -> PerfSeries {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        PerfSeries {
            field: field.clone(),
            terms,
            prec: None,
        }
    }

    /// The variable `x`.
    pub fn x(field: &FieldRef) -> PerfSeries {
        PerfSeries::monomial(field, ConstElem::ONE, QExp::ONE)
    }

    /// Builds a series from terms, summing repeated exponents and dropping
    /// zero coefficients and terms at or above `prec`.
    pub fn from_terms<I>(field: &FieldRef, terms: I, prec: Option<QExp>) -> PerfSeries
    where
        I: IntoIterator<Item = (QExp, ConstElem)>,
    {
        let mut map: BTreeMap<QExp, ConstElem> = BTreeMap::new();
        for (e, c) in terms {
            if prec.is_some_and(|p| e >= p) {
                continue;
            }
            let slot = map.entry(e).or_insert(ConstElem::ZERO);
            *slot = field.add(*slot, c);
        }
        map.retain(|_, c| !c.is_zero());
        PerfSeries {
            field: field.clone(),
            terms: map,
            prec,
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// Exclusive precision bound; `None` means exact.
    pub fn prec(&self) -> Option<QExp> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    /// True when no nonzero coefficient is known (exact zero or `O(x^k)`).
    pub fn is_zero_at_prec(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.prec.is_none()
            && self.terms.len() == 1
            && self.terms.get(&QExp::ZERO) == Some(&ConstElem::ONE)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (QExp, ConstElem)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `x^e`; `None` if `e` is at or beyond the precision.
    pub fn coeff(&self, e: QExp) -> Option<ConstElem> {
        if self.prec.is_some_and(|p| e >= p) {
            return None;
        }
        Some(self.terms.get(&e).copied().unwrap_or(ConstElem::ZERO))
    }

    pub fn valuation(&self) -> Valuation {
        match (self.terms.keys().next(), self.prec) {
            (Some(e), _) => Valuation::Exact(*e),
            (None, None) => Valuation::Infinite,
            (None, Some(p)) => Valuation::AtLeast(p),
        }
    }

    /// Lower bound on the valuation; `None` for exact zero.
    pub fn val_lower(&self) -> Option<QExp> {
        self.valuation().lower_bound()
    }

    /// Leading term `(exponent, coefficient)`.
    pub fn lead(&self) -> Option<(QExp, ConstElem)> {
        self.terms.iter().next().map(|(e, c)| (*e, *c))
    }

    /// Drops everything at or above `prec` and lowers the precision bound.
    pub fn truncate(&self, prec: QExp) -> PerfSeries {
        let prec = min_prec(self.prec, Some(prec));
        let bound = prec.unwrap();
        PerfSeries {
            field: self.field.clone(),
            terms: self
                .terms
                .range(..bound)
                .map(|(e, c)| (*e, *c))
                .collect(),
            prec,
        }
    }

    fn check(&self, other: &PerfSeries) -> Result<()> {
        if Field::same(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &PerfSeries) -> Result<PerfSeries> {
        self.check(other)?;
        let prec = min_prec(self.prec, other.prec);
        let f = &self.field;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(*e).or_insert(ConstElem::ZERO);
            *slot = f.add(*slot, *c);
        }
        terms.retain(|e, c| !c.is_zero() && prec.is_none_or(|p| *e < p));
        Ok(PerfSeries {
            field: self.field.clone(),
            terms,
            prec,
        })
    }

    pub fn try_sub(&self, other: &PerfSeries) -> Result<PerfSeries> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> PerfSeries {
        let f = &self.field;
        PerfSeries {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, f.neg(*c))).collect(),
            prec: self.prec,
        }
    }

    /// Multiplication by a constant.
    pub fn scale(&self, c: ConstElem) -> PerfSeries {
        if c.is_zero() {
            return PerfSeries::zero(&self.field);
        }
        let f = &self.field;
        PerfSeries {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(e, a)| (*e, f.mul(*a, c))).collect(),
            prec: self.prec,
        }
    }

    /// Multiplication by `x^e`.
    pub fn shift(&self, e: QExp) -> PerfSeries {
        PerfSeries {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k + e, *c)).collect(),
            prec: self.prec.map(|p| p + e),
        }
    }

    fn grid(&self, den: i64) -> Grid {
        Grid {
            den,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.numer() * (den / e.denom()), *c))
                .collect(),
        }
    }

    fn max_denom(&self) -> i64 {
        self.terms.keys().map(|e| e.denom()).max().unwrap_or(1)
    }

    pub fn try_mul(&self, other: &PerfSeries) -> Result<PerfSeries> {
        self.check(other)?;
        let (va, vb) = match (self.val_lower(), other.val_lower()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(PerfSeries::zero(&self.field)),
        };
        let prec = min_prec(self.prec.map(|p| p + vb), other.prec.map(|p| p + va));
        let den = self.max_denom().max(other.max_denom());
        let ga = self.grid(den);
        let gb = other.grid(den);
        // exponents k/den with k < limit survive
        let limit = prec.map(|p| {
            let scaled = p.ratio() * Ratio::from_integer(den);
            scaled.ceil().to_integer()
        });
        let f = &self.field;
        let mut acc: Vec<(i64, ConstElem)> = Vec::new();
        for &(ka, ca) in &ga.terms {
            for &(kb, cb) in &gb.terms {
                let k = ka + kb;
                if limit.is_some_and(|l| k >= l) {
                    break;
                }
                acc.push((k, f.mul(ca, cb)));
            }
        }
        Ok(PerfSeries::from_grid(f, ga.den.max(gb.den), acc, prec))
    }

    fn from_grid(field: &FieldRef, den: i64, mut acc: Vec<(i64, ConstElem)>, prec: Option<QExp>) -> PerfSeries {
        acc.sort_unstable_by_key(|t| t.0);
        let mut terms = BTreeMap::new();
        let mut iter = acc.into_iter().peekable();
        while let Some((k, mut c)) = iter.next() {
            while let Some(&(k2, c2)) = iter.peek() {
                if k2 != k {
                    break;
                }
                c = field.add(c, c2);
                iter.next();
            }
            if !c.is_zero() {
                terms.insert(QExp::new(k, den), c);
            }
        }
        PerfSeries {
            field: field.clone(),
            terms,
            prec,
        }
    }

    /// Inverse with the field's default relative precision cap.
    pub fn invert(&self) -> Result<PerfSeries> {
        self.invert_rel(self.field.rel_prec())
    }

    /// Inverse keeping at most `rel` units of precision relative to the
    /// leading term. With `a = c x^v (1 + u)` known below `prec_a`, the
    /// result `c^-1 x^-v (1 + u)^-1` is known below
    /// `min(prec_a - 2v, -v + rel)`.
    pub fn invert_rel(&self, rel: i64) -> Result<PerfSeries> {
        let (v, c0) = self.lead().ok_or(Error::NotInvertible)?;
        let f = &self.field;
        let c0_inv = f.inv(c0).expect("leading coefficient is nonzero");
        let mut rel_prec = QExp::int(rel);
        if let Some(p) = self.prec {
            rel_prec = rel_prec.min(p - v);
        }
        // unit part u: exponents shifted by -v, normalized to leading 1
        let unit: Vec<(QExp, ConstElem)> = self
            .terms
            .iter()
            .skip(1)
            .filter(|(e, _)| **e - v < rel_prec)
            .map(|(e, c)| (*e - v, f.mul(*c, c0_inv)))
            .collect();
        let den = unit.iter().map(|(e, _)| e.denom()).max().unwrap_or(1);
        let unit: Vec<(usize, ConstElem)> = unit
            .into_iter()
            .map(|(e, c)| ((e.numer() * (den / e.denom())) as usize, c))
            .collect();
        let steps = (rel_prec.ratio() * Ratio::from_integer(den)).ceil().to_integer();
        let steps = steps.max(0) as usize;
        let mut b: Vec<ConstElem> = Vec::with_capacity(steps);
        for k in 0..steps {
            if k == 0 {
                b.push(ConstElem::ONE);
                continue;
            }
            let mut s = ConstElem::ZERO;
            for &(j, uj) in &unit {
                if j > k {
                    break;
                }
                let bk = b[k - j];
                if !bk.is_zero() {
                    s = f.add(s, f.mul(uj, bk));
                }
            }
            b.push(f.neg(s));
        }
        let out_prec = rel_prec - v;
        let terms = b
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (QExp::new(k as i64, den) - v, f.mul(c, c0_inv)));
        Ok(PerfSeries::from_terms(f, terms, Some(out_prec)))
    }

    /// Exact inverse of a monomial, which needs no precision cap.
    pub fn invert_monomial(&self) -> Option<PerfSeries> {
        if self.terms.len() != 1 || self.prec.is_some() {
            return None;
        }
        let (e, c) = self.lead()?;
        Some(PerfSeries::monomial(&self.field, self.field.inv(c)?, -e))
    }

    pub fn try_div(&self, other: &PerfSeries) -> Result<PerfSeries> {
        self.check(other)?;
        let inv = match other.invert_monomial() {
            Some(m) => m,
            None => other.invert()?,
        };
        self.try_mul(&inv)
    }

    /// `τ^e(a) = a^(q^e)`: exponents and precision scaled by `q^e`,
    /// coefficients moved by the matching power of Frobenius on `F_Q`.
    pub fn frobenius(&self, e: i32) -> PerfSeries {
        if e == 0 {
            return self.clone();
        }
        let q = self.field.q();
        let f = &self.field;
        PerfSeries {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.scale_q(q, e), f.frob(*c, e as i64)))
                .collect(),
            prec: self.prec.map(|p| p.scale_q(q, e)),
        }
    }

    /// `a^n`; negative powers go through [`PerfSeries::invert`].
    pub fn pow(&self, n: i64) -> Result<PerfSeries> {
        if n < 0 {
            let inv = match self.invert_monomial() {
                Some(m) => m,
                None => self.invert()?,
            };
            return inv.pow(-n);
        }
        let mut acc = PerfSeries::one(&self.field);
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Equality up to the smaller of the two precisions.
    pub fn agrees(&self, other: &PerfSeries) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.is_zero_at_prec(),
            Err(_) => false,
        }
    }

    /// Number of exponent units between the lowest known nonzero term of
    /// the operands and the precision at which they were compared; a
    /// measure of how much a successful [`PerfSeries::agrees`] tells.
    pub fn significance(values: &[&PerfSeries]) -> Option<QExp> {
        let prec = values.iter().fold(None, |acc, s| min_prec(acc, s.prec))?;
        let val = values
            .iter()
            .filter_map(|s| s.lead().map(|(e, _)| e))
            .min()?;
        Some(prec - val)
    }

    /// Applies `g` to every coefficient.
    pub fn map_coeffs<F: Fn(ConstElem) -> ConstElem>(&self, g: F) -> PerfSeries {
        PerfSeries::from_terms(
            &self.field,
            self.terms.iter().map(|(e, c)| (*e, g(*c))),
            self.prec,
        )
    }

    fn fmt_coeff(&self, c: ConstElem) -> String {
        if self.field.in_prime_field(c) {
            format!("{}", c.code())
        } else {
            format!("g^{}", self.field.log(c).unwrap())
        }
    }
}

/// Formats `x^e` in the literal syntax.
pub fn fmt_power(e: QExp) -> String {
    if e == QExp::ONE {
        String::from("x")
    } else if e.is_integer() && !e.is_negative() {
        format!("x^{}", e.numer())
    } else {
        format!("x^({})", e)
    }
}

impl fmt::Display for PerfSeries {
    /// Exact series print in descending exponent order, truncated ones in
    /// ascending order followed by their `O(x^k)` term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let term = |e: QExp, c: ConstElem| -> String {
            if e.is_zero() {
                self.fmt_coeff(c)
            } else if c == ConstElem::ONE {
                fmt_power(e)
            } else {
                format!("{}*{}", self.fmt_coeff(c), fmt_power(e))
            }
        };
        if self.prec.is_none() {
            for (e, c) in self.terms.iter().rev() {
                parts.push(term(*e, *c));
            }
        } else {
            for (e, c) in self.terms.iter() {
                parts.push(term(*e, *c));
            }
        }
        if let Some(p) = self.prec {
            let pw = fmt_power(p);
            parts.push(format!("O({})", pw));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for PerfSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PerfSeries({})", self)
    }
}

/// Structural equality: same field, same stored terms, same precision.
/// Use [`PerfSeries::agrees`] for equality up to precision.
impl PartialEq for PerfSeries {
    fn eq(&self, other: &Self) -> bool {
        Field::same(&self.field, &other.field) && self.terms == other.terms && self.prec == other.prec
    }
}

impl Eq for PerfSeries {}

macro_rules! panicking_op {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl<'a> $tr<&'a PerfSeries> for &'a PerfSeries {
            type Output = PerfSeries;
            /// Panics when the operands live over different fields; use the
            /// `try_` method to handle that case.
            fn $method(self, rhs: &'a PerfSeries) -> PerfSeries {
                self.$imp(rhs).expect("series over different fields")
            }
        }
        impl $tr<PerfSeries> for PerfSeries {
            type Output = PerfSeries;
            fn $method(self, rhs: PerfSeries) -> PerfSeries {
                self.$imp(&rhs).expect("series over different fields")
            }
        }
    };
}

panicking_op!(Add, add, try_add);
panicking_op!(Sub, sub, try_sub);
panicking_op!(Mul, mul, try_mul);

impl Neg for &PerfSeries {
    type Output = PerfSeries;
    fn neg(self) -> PerfSeries {
        self.neg_ref()
    }
}

impl Neg for PerfSeries {
    type Output = PerfSeries;
    fn neg(self) -> PerfSeries {
        self.neg_ref()
    }
}
