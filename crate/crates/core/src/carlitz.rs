//! Brackets `[n] = x^(q^n) - x`, the factorials `D_n`, `L_n`, the two
//! Pochhammer-type symbols and the parameter shifts `T_1`, `T_-1`.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{ConstElem, FieldRef};
use crate::qexp::QExp;
use crate::series::{PerfSeries, Valuation};

/// Index of a bracket: any integer, or ∞ with `[∞] = -x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BracketIndex {
    Finite(i64),
    Infinity,
}

impl fmt::Display for BracketIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketIndex::Finite(n) => write!(f, "{}", n),
            BracketIndex::Infinity => f.write_str("inf"),
        }
    }
}

impl From<i64> for BracketIndex {
    fn from(n: i64) -> Self {
        BracketIndex::Finite(n)
    }
}

/// `x^(q^n)` as an exponent; negative `n` gives `1/q^|n|`.
pub fn q_power(field: &FieldRef, n: i64) -> QExp {
    QExp::ONE.scale_q(field.q(), n as i32)
}

pub fn bracket(field: &FieldRef, i: BracketIndex) -> PerfSeries {
    let minus_one = field.from_int(-1);
    match i {
        BracketIndex::Infinity => PerfSeries::monomial(field, minus_one, QExp::ONE),
        BracketIndex::Finite(0) => PerfSeries::zero(field),
        BracketIndex::Finite(n) => PerfSeries::from_terms(
            field,
            [(q_power(field, n), ConstElem::ONE), (QExp::ONE, minus_one)],
            None,
        ),
    }
}

/// Shorthand for `bracket(field, Finite(n))`.
pub fn br(field: &FieldRef, n: i64) -> PerfSeries {
    bracket(field, BracketIndex::Finite(n))
}

/// `D_n = [n] [n-1]^q ... [1]^(q^(n-1))`, `D_0 = 1`, as the direct product.
pub fn carlitz_d(field: &FieldRef, n: u32) -> PerfSeries {
    (1..=n as i64).fold(PerfSeries::one(field), |acc, k| {
        &acc * &br(field, k).frobenius((n as i64 - k) as i32)
    })
}

/// `L_n = [n] [n-1] ... [1]`, `L_0 = 1`.
pub fn carlitz_l(field: &FieldRef, n: u32) -> PerfSeries {
    (1..=n as i64).fold(PerfSeries::one(field), |acc, k| &acc * &br(field, k))
}

/// Eagerly computed `D_n`, `L_n` for `n <= cap`, shared read-only.
#[derive(Clone, Debug)]
pub struct FactorialTable {
    field: FieldRef,
    d: Vec<PerfSeries>,
    l: Vec<PerfSeries>,
}

impl FactorialTable {
    pub fn new(field: &FieldRef, cap: u32) -> FactorialTable {
        let mut d = Vec::with_capacity(cap as usize + 1);
        let mut l = Vec::with_capacity(cap as usize + 1);
        d.push(PerfSeries::one(field));
        l.push(PerfSeries::one(field));
        for k in 1..=cap as i64 {
            let bk = br(field, k);
            let next_d = &bk * &d[k as usize - 1].frobenius(1);
            let next_l = &bk * &l[k as usize - 1];
            d.push(next_d);
            l.push(next_l);
        }
        FactorialTable {
            field: field.clone(),
            d,
            l,
        }
    }

    pub fn cap(&self) -> u32 {
        (self.d.len() - 1) as u32
    }

    pub fn d(&self, n: u32) -> PerfSeries {
        self.d
            .get(n as usize)
            .cloned()
            .unwrap_or_else(|| carlitz_d(&self.field, n))
    }

    pub fn l(&self, n: u32) -> PerfSeries {
        self.l
            .get(n as usize)
            .cloned()
            .unwrap_or_else(|| carlitz_l(&self.field, n))
    }
}

fn sign(field: &FieldRef, k: i64) -> ConstElem {
    if k.rem_euclid(2) == 0 {
        ConstElem::ONE
    } else {
        field.from_int(-1)
    }
}

/// The integer-parameter symbol `(α)_n`:
/// `D_(n+α-1)^(q^-(α-1))` for `α >= 1`,
/// `(-1)^(n-α) L_(-α-n)^(-q^n)` for `α <= 0, n <= -α`, and 0 otherwise.
pub fn pochhammer_thakur(field: &FieldRef, alpha: i64, n: u32) -> Result<PerfSeries> {
    let n_i = n as i64;
    if alpha >= 1 {
        let d = carlitz_d(field, (n_i + alpha - 1) as u32);
        return Ok(d.frobenius(-(alpha - 1) as i32));
    }
    if n_i > -alpha {
        return Ok(PerfSeries::zero(field));
    }
    let l = carlitz_l(field, (-alpha - n_i) as u32);
    let inv = match l.invert_monomial() {
        Some(m) => m,
        None => l.invert()?,
    };
    Ok(inv.frobenius(n as i32).scale(sign(field, n_i - alpha)))
}

/// How `⟨a⟩_m` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PochhammerMode {
    /// `([0]-a)^(q^m) ([1]-a)^(q^(m-1)) ... ([m-1]-a)^q`.
    Direct,
    /// `⟨a⟩_(k+1) = ([k]-a)^q ⟨a⟩_k^q` from `⟨a⟩_0 = 1`.
    Recurrent,
}

/// The Pochhammer-type symbol `⟨a⟩_m` for a field parameter `a`.
pub fn pochhammer(a: &PerfSeries, m: u32, mode: PochhammerMode) -> PerfSeries {
    let field = a.field();
    match mode {
        PochhammerMode::Direct => (0..m as i64).fold(PerfSeries::one(field), |acc, k| {
            let factor = (&br(field, k) - a).frobenius((m as i64 - k) as i32);
            &acc * &factor
        }),
        PochhammerMode::Recurrent => (0..m as i64).fold(PerfSeries::one(field), |acc, k| {
            let factor = (&br(field, k) - a).frobenius(1);
            &factor * &acc.frobenius(1)
        }),
    }
}

/// `T_1(a) = (a - [1])^(1/q)`.
pub fn shift_up(a: &PerfSeries) -> PerfSeries {
    (a - &br(a.field(), 1)).frobenius(-1)
}

/// `T_-1(a) = a^q + [1]`.
pub fn shift_down(a: &PerfSeries) -> PerfSeries {
    &a.frobenius(1) + &br(a.field(), 1)
}

/// Distance data for a lower parameter `b`: the largest valuation of
/// `b - [ν]` over `ν = 0, 1, ..., ∞`, i.e. `-log_q μ₁`.
///
/// Only finitely many ν need checking: with `w = b + x = b - [∞]` of
/// valuation `V`, every ν with `q^ν > V` gives `b - [ν] = w - x^(q^ν)` of
/// valuation exactly `V`. The scan covers `ν <= max(nu_max, that bound)`.
pub fn bracket_distance(b: &PerfSeries, nu_max: u32) -> Result<QExp> {
    let field = b.field();
    let w = b - &bracket(field, BracketIndex::Infinity);
    let v_inf = match w.valuation() {
        Valuation::Infinite => {
            return Err(Error::Inadmissible {
                tuple: alloc::vec![BracketIndex::Infinity],
            })
        }
        Valuation::AtLeast(_) => {
            return Err(Error::Indeterminate {
                tuple: alloc::vec![BracketIndex::Infinity],
            })
        }
        Valuation::Exact(v) => v,
    };
    let mut worst = v_inf;
    let mut nu: i64 = 0;
    loop {
        let stable = q_power(field, nu) > v_inf;
        if stable && nu > nu_max as i64 {
            break;
        }
        let diff = b - &br(field, nu);
        match diff.valuation() {
            Valuation::Infinite => {
                return Err(Error::Inadmissible {
                    tuple: alloc::vec![BracketIndex::Finite(nu)],
                })
            }
            Valuation::AtLeast(_) => {
                return Err(Error::Indeterminate {
                    tuple: alloc::vec![BracketIndex::Finite(nu)],
                })
            }
            Valuation::Exact(v) => worst = worst.max(v),
        }
        nu += 1;
    }
    Ok(worst)
}
