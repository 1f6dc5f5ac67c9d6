//! Truncated F_q-linear functions.
//!
//! A [`MultiFunction`] stores the coefficients `c_{m,i_1..i_n}` of
//!
//! ```text
//! u = Σ c_{m,i} s_1^(q^i_1) ... s_n^(q^i_n) z^(q^m) / D_m,   m <= min(i)
//! ```
//!
//! against the basis `z^(q^m)/D_m`. In this basis the generators act by
//!
//! * `Δ_j`: multiply slot `(m, i)` by `[i_j]`;
//! * `Δ_z`: multiply slot `(m, i)` by `[m]`;
//! * `d`:   slot `(m, i)` moves to `(m-1, i-1)` with coefficient `c^(1/q)`;
//! * `τ`:   slot `(m, i)` moves to `(m+1, i+1)` with coefficient `c^q [m+1]`,
//!   which follows from `τ(z^(q^m)/D_m) = [m+1] z^(q^(m+1))/D_(m+1)`.
//!
//! Truncation: slot `(m, i)` is known iff `m <= trunc_m` and every
//! `i_k <= trunc_i`. Known slots without a stored value are exactly zero.
//! `d` lowers both truncations by one; `τ` raises both by one (all new
//! slots with `m = 0` or some `i_k = 0` are exactly zero).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::carlitz::{br, FactorialTable};
use crate::error::{Error, Result};
use crate::field::{Field, FieldRef};
use crate::qexp::QExp;
use crate::series::PerfSeries;

/// `(m, [i_1, ..., i_n])`.
pub type Slot = (u32, Vec<u32>);

/// What is known about the terms a truncated function omits.
#[derive(Clone, Debug, PartialEq)]
pub enum Tail {
    /// Every omitted coefficient is zero.
    Polynomial,
    /// Every omitted term has valuation at least this value.
    Bound(Ratio<i128>),
    /// Coefficients obey `val c_{l,j} >= -q^l log_c - (Σ q^(j_k)) log_r`
    /// (the valuation form of `|c| <= C^(q^l) r^(q^j_1 + ... + q^j_n)`).
    Growth { log_c: Ratio<i128>, log_r: Ratio<i128> },
}

fn rq(e: QExp) -> Ratio<i128> {
    Ratio::new(e.numer() as i128, e.denom() as i128)
}

fn floor_exp(t: Ratio<i128>) -> QExp {
    QExp::int(t.floor().to_integer() as i64)
}

#[derive(Clone, Debug)]
pub struct MultiFunction {
    field: FieldRef,
    n: usize,
    trunc_m: i64,
    trunc_i: i64,
    coeffs: BTreeMap<Slot, PerfSeries>,
}

impl PartialEq for MultiFunction {
    fn eq(&self, other: &Self) -> bool {
        Field::same(&self.field, &other.field)
            && self.n == other.n
            && self.trunc_m == other.trunc_m
            && self.trunc_i == other.trunc_i
            && self.coeffs == other.coeffs
    }
}

impl MultiFunction {
    /// The zero function in `n` s-variables with the given truncations.
    /// Truncations below zero mean that nothing is known.
    pub fn zero(field: &FieldRef, n: usize, trunc_m: i64, trunc_i: i64) -> MultiFunction {
        MultiFunction {
            field: field.clone(),
            n,
            trunc_m,
            trunc_i,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trunc_m(&self) -> i64 {
        self.trunc_m
    }

    pub fn trunc_i(&self) -> i64 {
        self.trunc_i
    }

    /// True if `(m, i)` has the shape `m <= min(i)` with `n` indices.
    pub fn is_valid_slot(&self, slot: &Slot) -> bool {
        slot.1.len() == self.n && slot.1.iter().all(|&i| slot.0 <= i)
    }

    pub fn is_known(&self, slot: &Slot) -> bool {
        self.is_valid_slot(slot)
            && (slot.0 as i64) <= self.trunc_m
            && slot.1.iter().all(|&i| (i as i64) <= self.trunc_i)
    }

    /// Sets a coefficient; exact zeros are not stored.
    pub fn set(&mut self, slot: Slot, value: PerfSeries) -> Result<()> {
        if !Field::same(&self.field, value.field()) {
            return Err(Error::FieldMismatch);
        }
        if !self.is_valid_slot(&slot) {
            return Err(Error::Parameter(format!(
                "slot ({}, {:?}) violates m <= min(i) or has the wrong arity",
                slot.0, slot.1
            )));
        }
        if !self.is_known(&slot) {
            return Err(Error::Parameter(format!(
                "slot ({}, {:?}) lies outside the truncation",
                slot.0, slot.1
            )));
        }
        if value.is_exact_zero() {
            self.coeffs.remove(&slot);
        } else {
            self.coeffs.insert(slot, value);
        }
        Ok(())
    }

    /// Coefficient at a slot, or `None` when the slot is not known.
    pub fn get(&self, slot: &Slot) -> Option<PerfSeries> {
        if !self.is_known(slot) {
            return None;
        }
        Some(
            self.coeffs
                .get(slot)
                .cloned()
                .unwrap_or_else(|| PerfSeries::zero(&self.field)),
        )
    }

    /// Stored (nonzero or precision-limited) coefficients.
    pub fn iter(&self) -> impl Iterator<Item = (&Slot, &PerfSeries)> {
        self.coeffs.iter()
    }

    pub fn num_stored(&self) -> usize {
        self.coeffs.len()
    }

    fn from_parts(
        field: &FieldRef,
        n: usize,
        trunc_m: i64,
        trunc_i: i64,
        entries: impl IntoIterator<Item = (Slot, PerfSeries)>,
    ) -> MultiFunction {
        let mut f = MultiFunction::zero(field, n, trunc_m, trunc_i);
        for (slot, v) in entries {
            if f.is_known(&slot) && !v.is_exact_zero() {
                f.coeffs.insert(slot, v);
            }
        }
        f
    }

    /// Restricts to smaller truncations.
    pub fn restrict(&self, trunc_m: i64, trunc_i: i64) -> MultiFunction {
        MultiFunction::from_parts(
            &self.field,
            self.n,
            trunc_m.min(self.trunc_m),
            trunc_i.min(self.trunc_i),
            self.coeffs.iter().map(|(s, v)| (s.clone(), v.clone())),
        )
    }

    fn check(&self, other: &MultiFunction) -> Result<()> {
        if !Field::same(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        if self.n != other.n {
            return Err(Error::Parameter(format!(
                "functions in {} and {} variables",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Sum on the common truncation.
    pub fn try_add(&self, other: &MultiFunction) -> Result<MultiFunction> {
        self.check(other)?;
        let tm = self.trunc_m.min(other.trunc_m);
        let ti = self.trunc_i.min(other.trunc_i);
        let mut out = self.restrict(tm, ti);
        for (slot, v) in &other.coeffs {
            if !out.is_known(slot) {
                continue;
            }
            let sum = match out.coeffs.get(slot) {
                Some(a) => a + v,
                None => v.clone(),
            };
            if sum.is_exact_zero() {
                out.coeffs.remove(slot);
            } else {
                out.coeffs.insert(slot.clone(), sum);
            }
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiFunction) -> Result<MultiFunction> {
        self.try_add(&other.scale(&PerfSeries::from_int(&self.field, -1)))
    }

    /// `λ u`: every coefficient multiplied by the scalar `λ`.
    pub fn scale(&self, lambda: &PerfSeries) -> MultiFunction {
        MultiFunction::from_parts(
            &self.field,
            self.n,
            self.trunc_m,
            self.trunc_i,
            self.coeffs.iter().map(|(s, v)| (s.clone(), v * lambda)),
        )
    }

    /// `τ u = u^q`.
    pub fn apply_tau(&self) -> MultiFunction {
        let f = &self.field;
        MultiFunction::from_parts(
            f,
            self.n,
            self.trunc_m + 1,
            self.trunc_i + 1,
            self.coeffs.iter().map(|((m, i), v)| {
                let slot = (m + 1, i.iter().map(|k| k + 1).collect());
                (slot, &v.frobenius(1) * &br(f, *m as i64 + 1))
            }),
        )
    }

    /// `Δ_j u` for `1 <= j <= n`.
    pub fn apply_delta(&self, j: usize) -> Result<MultiFunction> {
        if j == 0 || j > self.n {
            return Err(Error::Parameter(format!(
                "delta index {} out of range 1..={}",
                j, self.n
            )));
        }
        let f = &self.field;
        Ok(MultiFunction::from_parts(
            f,
            self.n,
            self.trunc_m,
            self.trunc_i,
            self.coeffs
                .iter()
                .map(|(s, v)| (s.clone(), v * &br(f, s.1[j - 1] as i64))),
        ))
    }

    /// The difference operator `Δ = τ d` in the variable z.
    pub fn apply_delta_z(&self) -> MultiFunction {
        let f = &self.field;
        MultiFunction::from_parts(
            f,
            self.n,
            self.trunc_m,
            self.trunc_i,
            self.coeffs
                .iter()
                .map(|(s, v)| (s.clone(), v * &br(f, s.0 as i64))),
        )
    }

    /// The Carlitz derivative `d` in the variable z.
    pub fn apply_d(&self) -> MultiFunction {
        MultiFunction::from_parts(
            &self.field,
            self.n,
            self.trunc_m - 1,
            self.trunc_i - 1,
            self.coeffs.iter().filter(|((m, _), _)| *m > 0).map(|((m, i), v)| {
                let slot = (m - 1, i.iter().map(|k| k - 1).collect());
                (slot, v.frobenius(-1))
            }),
        )
    }

    /// True when every known coefficient is zero at its precision.
    pub fn is_zero_at_prec(&self) -> bool {
        self.coeffs.values().all(|v| v.is_zero_at_prec())
    }

    /// Equality of known coefficients on the common truncation.
    pub fn agrees(&self, other: &MultiFunction) -> bool {
        match self.try_sub(other) {
            Ok(d) => d.is_zero_at_prec(),
            Err(_) => false,
        }
    }

    /// Sums `c s^(q^i) z^(q^m) / D_m` over the stored support. The result's
    /// precision is lowered to a lower bound on the valuation of the omitted
    /// terms, derived from `tail`.
    pub fn evaluate(&self, z: &PerfSeries, s: &[PerfSeries], tail: &Tail) -> Result<PerfSeries> {
        if s.len() != self.n {
            return Err(Error::Parameter(format!(
                "expected {} s-arguments, got {}",
                self.n,
                s.len()
            )));
        }
        let f = &self.field;
        if !Field::same(f, z.field()) || s.iter().any(|t| !Field::same(f, t.field())) {
            return Err(Error::FieldMismatch);
        }
        if z.is_exact_zero() || s.iter().any(|t| t.is_exact_zero()) {
            return Ok(PerfSeries::zero(f));
        }
        let cap = self.trunc_m.max(0) as u32;
        let table = FactorialTable::new(f, cap);
        let mut acc = PerfSeries::zero(f);
        for ((m, i), c) in &self.coeffs {
            let mut term = c * &z.frobenius(*m as i32);
            for (sk, ik) in s.iter().zip(i) {
                term = &term * &sk.frobenius(*ik as i32);
            }
            term = term.try_div(&table.d(*m))?;
            acc = &acc + &term;
        }
        let bound = match tail {
            Tail::Polynomial => None,
            Tail::Bound(t) => Some(*t),
            Tail::Growth { log_c, log_r } => Some(self.growth_tail(z, s, *log_c, *log_r)?),
        };
        Ok(match bound {
            Some(t) => acc.truncate(floor_exp(t)),
            None => acc,
        })
    }

    fn growth_tail(
        &self,
        z: &PerfSeries,
        s: &[PerfSeries],
        log_c: Ratio<i128>,
        log_r: Ratio<i128>,
    ) -> Result<Ratio<i128>> {
        let q = self.field.q() as i128;
        let inv_q1 = Ratio::new(1, q - 1);
        let vz = rq(z.val_lower().expect("nonzero z"));
        let a = vz - log_c - inv_q1;
        let b: Vec<Ratio<i128>> = s
            .iter()
            .map(|t| rq(t.val_lower().expect("nonzero s")) - log_r)
            .collect();
        if a < Ratio::from_integer(0) || b.iter().any(|bk| *bk <= Ratio::from_integer(0)) {
            return Err(Error::Divergent(
                "growth bound does not make omitted terms decrease".into(),
            ));
        }
        let term = |m: u32, j: &[u32]| -> Ratio<i128> {
            let mut t = a * q.pow(m) + inv_q1;
            for (bk, jk) in b.iter().zip(j) {
                t += *bk * q.pow(*jk);
            }
            t
        };
        let tm = (self.trunc_m + 1).max(0) as u32;
        let mut best = term(tm, &vec![tm; self.n]);
        if self.n > 0 {
            let ti = (self.trunc_i + 1).max(0) as u32;
            for k in 0..self.n {
                let mut j = vec![0u32; self.n];
                j[k] = ti;
                let t = term(0, &j);
                if t < best {
                    best = t;
                }
            }
        }
        Ok(best)
    }
}

/// A truncated one-variable F_q-linear series `Σ_(k <= M) a_k t^(q^k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFunction1 {
    coeffs: Vec<PerfSeries>,
}

impl LinearFunction1 {
    /// `coeffs[k]` multiplies `t^(q^k)`; the truncation is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<PerfSeries>) -> LinearFunction1 {
        LinearFunction1 { coeffs }
    }

    pub fn trunc(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[PerfSeries] {
        &self.coeffs
    }

    /// `τ u = u^q`: `a_k ↦ a_(k-1)^q`, with `a_0 = 0`; one more index known.
    pub fn apply_tau(&self) -> LinearFunction1 {
        let Some(first) = self.coeffs.first() else {
            return self.clone();
        };
        let mut out = vec![PerfSeries::zero(first.field())];
        out.extend(self.coeffs.iter().map(|a| a.frobenius(1)));
        LinearFunction1 { coeffs: out }
    }

    /// `Δ u`: `a_k ↦ [k] a_k`.
    pub fn apply_delta(&self) -> LinearFunction1 {
        LinearFunction1 {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| a * &br(a.field(), k as i64))
                .collect(),
        }
    }

    /// `d u = τ^-1 Δ u`: `a_k ↦ ([k+1] a_(k+1))^(1/q)`.
    pub fn apply_d(&self) -> LinearFunction1 {
        LinearFunction1 {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| (a * &br(a.field(), k as i64)).frobenius(-1))
                .collect(),
        }
    }

    pub fn evaluate(&self, t: &PerfSeries, tail: &Tail) -> Result<PerfSeries> {
        let mut acc = PerfSeries::zero(t.field());
        for (k, a) in self.coeffs.iter().enumerate() {
            acc = acc.try_add(&a.try_mul(&t.frobenius(k as i32))?)?;
        }
        Ok(match tail {
            Tail::Bound(b) => acc.truncate(floor_exp(*b)),
            _ => acc,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::carlitz_d;
    use crate::field::ConstElem;

    fn f2() -> FieldRef {
        Field::standard(2, 1).unwrap()
    }

    #[test]
    fn tau_of_z() {
        let f = f2();
        let mut u = MultiFunction::zero(&f, 0, 3, 3);
        u.set((0, vec![]), PerfSeries::one(&f)).unwrap();
        let t = u.apply_tau();
        assert_eq!(t.get(&(1, vec![])).unwrap(), br(&f, 1));
        assert!(t.get(&(0, vec![])).unwrap().is_exact_zero());
        assert_eq!(t.trunc_m(), 4);
        let zero = MultiFunction::zero(&f, 1, 3, 3);
        assert_eq!(zero.apply_tau().num_stored(), 0);
    }

    #[test]
    fn tau_matches_frobenius_on_values() {
        let f = Field::standard(3, 1).unwrap();
        let mut u = MultiFunction::zero(&f, 0, 2, 2);
        u.set((0, vec![]), PerfSeries::x(&f)).unwrap();
        u.set((1, vec![]), PerfSeries::one(&f)).unwrap();
        let z = PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(2));
        let before = u.evaluate(&z, &[], &Tail::Polynomial).unwrap();
        let after = u.apply_tau().evaluate(&z, &[], &Tail::Polynomial).unwrap();
        assert!(after.agrees(&before.frobenius(1)));
    }

    #[test]
    fn delta_actions() {
        let f = f2();
        let mut u = MultiFunction::zero(&f, 1, 3, 3);
        u.set((0, vec![0]), PerfSeries::one(&f)).unwrap();
        assert_eq!(u.apply_delta(1).unwrap().num_stored(), 0);
        let mut w = MultiFunction::zero(&f, 1, 3, 3);
        w.set((0, vec![2]), PerfSeries::one(&f)).unwrap();
        assert_eq!(w.apply_delta(1).unwrap().get(&(0, vec![2])).unwrap(), br(&f, 2));
        assert!(w.apply_delta(2).is_err());
        let lam = PerfSeries::x(&f);
        let lhs = w.scale(&lam).apply_delta(1).unwrap();
        let rhs = w.apply_delta(1).unwrap().scale(&lam);
        assert!(lhs.agrees(&rhs));
    }

    #[test]
    fn d_actions() {
        let f = f2();
        let mut u = MultiFunction::zero(&f, 1, 3, 3);
        let sigma = &PerfSeries::x(&f) + &PerfSeries::one(&f);
        u.set((1, vec![1]), sigma.clone()).unwrap();
        u.set((0, vec![2]), PerfSeries::one(&f)).unwrap();
        let du = u.apply_d();
        assert_eq!(du.get(&(0, vec![0])).unwrap(), sigma.frobenius(-1));
        assert_eq!(du.num_stored(), 1);
        assert_eq!((du.trunc_m(), du.trunc_i()), (2, 2));
        let lam = PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(3));
        assert!(u.scale(&lam).apply_d().agrees(&du.scale(&lam.frobenius(-1))));
    }

    #[test]
    fn evaluation_edges() {
        let f = f2();
        let mut u = MultiFunction::zero(&f, 1, 2, 2);
        u.set((1, vec![2]), PerfSeries::x(&f)).unwrap();
        let s = [PerfSeries::x(&f)];
        assert!(u.evaluate(&PerfSeries::zero(&f), &s, &Tail::Polynomial).unwrap().is_exact_zero());
        let zero = MultiFunction::zero(&f, 1, 2, 2);
        assert!(zero
            .evaluate(&PerfSeries::x(&f), &s, &Tail::Polynomial)
            .unwrap()
            .is_exact_zero());
        // x * x^4 * x^2 / D_1 with D_1 = x^2 + x
        let v = u.evaluate(&PerfSeries::x(&f), &s, &Tail::Polynomial).unwrap();
        let expect = PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(7))
            .try_div(&carlitz_d(&f, 1))
            .unwrap();
        assert!(v.agrees(&expect));
    }

    #[test]
    fn growth_tail_lowers_precision() {
        let f = f2();
        let mut u = MultiFunction::zero(&f, 0, 1, 1);
        u.set((0, vec![]), PerfSeries::one(&f)).unwrap();
        let z = PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(3));
        let tail = Tail::Growth {
            log_c: Ratio::from_integer(0),
            log_r: Ratio::from_integer(0),
        };
        // omitted m = 2: val >= 4 * (3 - 0 - 1) + 1 = 9
        let v = u.evaluate(&z, &[], &tail).unwrap();
        assert_eq!(v.prec(), Some(QExp::int(9)));
        let bad = Tail::Growth {
            log_c: Ratio::from_integer(5),
            log_r: Ratio::from_integer(0),
        };
        assert!(matches!(u.evaluate(&z, &[], &bad), Err(Error::Divergent(_))));
    }

    #[test]
    fn linear_function_generators() {
        let f = Field::standard(3, 1).unwrap();
        let u = LinearFunction1::new(vec![PerfSeries::x(&f), PerfSeries::one(&f), PerfSeries::x(&f)]);
        // Δ = τ d on the common range
        let lhs = u.apply_delta();
        let rhs = u.apply_d().apply_tau();
        for k in 0..=rhs.trunc().min(lhs.trunc()) as usize {
            assert!(lhs.coeffs()[k].agrees(&rhs.coeffs()[k]));
        }
        let t = PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(1));
        let before = u.evaluate(&t, &Tail::Polynomial).unwrap();
        let after = u.apply_tau().evaluate(&t, &Tail::Polynomial).unwrap();
        assert!(after.agrees(&before.frobenius(1)));
    }
}
