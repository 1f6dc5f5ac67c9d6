//! The Carlitz ring generated by `τ`, `d`, `Δ_1..Δ_n` over the scalars,
//! with normal forms
//!
//! * standard: `Σ a τ^l d^μ Δ_1^i_1 ... Δ_n^i_n`;
//! * alternative: `Σ a Δ_1^i_1 ... Δ_n^i_n τ^l d^μ`.
//!
//! Relations: `dτ - τd = [1]^(1/q)`, `dΔ_j - Δ_j d = [1]^(1/q) d`,
//! `Δ_j τ - τ Δ_j = [1] τ`, `τλ = λ^q τ`, `dλ = λ^(1/q) d`, `Δ_j λ = λ Δ_j`,
//! and the `Δ_j` commute among themselves.

mod dims;
mod rewrite;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use dims::{
    binomial, count_weighted, fhat_count, gamma_dim, gamma_dim_enumerated, gk_fit,
    qh_lower_bound, qh_lower_count,
};
pub use rewrite::Strategy;

use crate::error::{Error, Result};
use crate::field::{Field, FieldRef};
use crate::funcspace::MultiFunction;
use crate::series::PerfSeries;
use rewrite::Rewriter;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Tau,
    D,
    /// `Δ_j`, `1 <= j <= n`.
    Delta(u32),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::Tau => f.write_str("tau"),
            Gen::D => f.write_str("d"),
            Gen::Delta(j) => write!(f, "delta{}", j),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    Gen(Gen),
    Scalar(PerfSeries),
}

/// A product of factors, read left to right as composition.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorWord {
    pub n: usize,
    pub factors: Vec<Factor>,
}

impl OperatorWord {
    pub fn new(n: usize, factors: Vec<Factor>) -> OperatorWord {
        OperatorWord { n, factors }
    }

    pub fn validate(&self, field: &FieldRef) -> Result<()> {
        for f in &self.factors {
            match f {
                Factor::Gen(Gen::Delta(j)) if *j == 0 || *j as usize > self.n => {
                    return Err(Error::Parameter(format!(
                        "delta{} out of range 1..={}",
                        j, self.n
                    )))
                }
                Factor::Scalar(s) if !Field::same(field, s.field()) => {
                    return Err(Error::FieldMismatch)
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `a τ^l d^μ Δ^i`.
    Standard,
    /// `a Δ^i τ^l d^μ`.
    Alt,
}

/// Exponents `(l, μ, i_1..i_n)` of a normal monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub l: u32,
    pub mu: u32,
    pub i: Vec<u32>,
}

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono {
            l: 0,
            mu: 0,
            i: vec![0; n],
        }
    }

    pub fn degree(&self) -> u32 {
        self.l + self.mu + self.i.iter().sum::<u32>()
    }

    fn word(&self, conv: Convention) -> Vec<Factor> {
        let taus = (0..self.l).map(|_| Factor::Gen(Gen::Tau));
        let ds = (0..self.mu).map(|_| Factor::Gen(Gen::D));
        let deltas = self.i.iter().enumerate().flat_map(|(j, &e)| {
            (0..e).map(move |_| Factor::Gen(Gen::Delta(j as u32 + 1)))
        });
        match conv {
            Convention::Standard => taus.chain(ds).chain(deltas).collect(),
            Convention::Alt => deltas.chain(taus).chain(ds).collect(),
        }
    }
}

/// A ring element in one of the two normal forms; zero coefficients are
/// never stored.
#[derive(Clone, Debug)]
pub struct NormalForm {
    field: FieldRef,
    n: usize,
    conv: Convention,
    terms: BTreeMap<Mono, PerfSeries>,
}

impl PartialEq for NormalForm {
    fn eq(&self, other: &Self) -> bool {
        Field::same(&self.field, &other.field)
            && self.n == other.n
            && self.conv == other.conv
            && self.terms == other.terms
    }
}

/// Rewrites a sum of words into the normal form of `conv`.
pub fn normalize(
    field: &FieldRef,
    n: usize,
    words: &[OperatorWord],
    conv: Convention,
    strategy: Strategy,
) -> Result<NormalForm> {
    for w in words {
        if w.n != n {
            return Err(Error::Parameter(format!(
                "word over {} deltas in a ring with {}",
                w.n, n
            )));
        }
        w.validate(field)?;
    }
    let rw = Rewriter::new(field, conv);
    let normal = rw.run(words.iter().map(|w| w.factors.clone()).collect(), strategy);
    let mut out = NormalForm::zero(field, n, conv);
    for w in normal {
        let mut coeff = PerfSeries::one(field);
        let mut mono = Mono::one(n);
        for f in w {
            match f {
                Factor::Scalar(s) => coeff = s,
                Factor::Gen(Gen::Tau) => mono.l += 1,
                Factor::Gen(Gen::D) => mono.mu += 1,
                Factor::Gen(Gen::Delta(j)) => mono.i[j as usize - 1] += 1,
            }
        }
        out.add_term(mono, coeff);
    }
    Ok(out)
}

impl NormalForm {
    pub fn zero(field: &FieldRef, n: usize, conv: Convention) -> NormalForm {
        NormalForm {
            field: field.clone(),
            n,
            conv,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(field: &FieldRef, n: usize, conv: Convention, lambda: PerfSeries) -> NormalForm {
        let mut out = NormalForm::zero(field, n, conv);
        out.add_term(Mono::one(n), lambda);
        out
    }

    pub fn identity(field: &FieldRef, n: usize, conv: Convention) -> NormalForm {
        NormalForm::scalar(field, n, conv, PerfSeries::one(field))
    }

    /// A single generator; `Delta(j)` must satisfy `1 <= j <= n`.
    pub fn gen(field: &FieldRef, n: usize, conv: Convention, g: Gen) -> Result<NormalForm> {
        normalize(
            field,
            n,
            &[OperatorWord::new(n, vec![Factor::Gen(g)])],
            conv,
            Strategy::Leftmost,
        )
    }

    /// Builds a normal form from explicit terms; zero coefficients are dropped.
    pub fn from_terms(
        field: &FieldRef,
        n: usize,
        conv: Convention,
        terms: impl IntoIterator<Item = (Mono, PerfSeries)>,
    ) -> Result<NormalForm> {
        let mut out = NormalForm::zero(field, n, conv);
        for (m, c) in terms {
            if m.i.len() != n {
                return Err(Error::Parameter(format!(
                    "monomial with {} delta exponents in a ring with {}",
                    m.i.len(),
                    n
                )));
            }
            if !Field::same(field, c.field()) {
                return Err(Error::FieldMismatch);
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, mono: Mono, coeff: PerfSeries) {
        let sum = match self.terms.get(&mono) {
            Some(c) => c + &coeff,
            None => coeff,
        };
        if sum.is_exact_zero() {
            self.terms.remove(&mono);
        } else {
            self.terms.insert(mono, sum);
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> Convention {
        self.conv
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &PerfSeries)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, mono: &Mono) -> Option<&PerfSeries> {
        self.terms.get(mono)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient vanishes at its precision.
    pub fn is_zero_at_prec(&self) -> bool {
        self.terms.values().all(|c| c.is_zero_at_prec())
    }

    /// Each term as a word `a * monomial`.
    pub fn to_words(&self) -> Vec<OperatorWord> {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut f = vec![Factor::Scalar(c.clone())];
                f.extend(m.word(self.conv));
                OperatorWord::new(self.n, f)
            })
            .collect()
    }

    fn check(&self, other: &NormalForm) -> Result<()> {
        if !Field::same(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        if self.n != other.n {
            return Err(Error::Parameter(format!(
                "operators over {} and {} deltas",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &NormalForm) -> Result<NormalForm> {
        self.check(other)?;
        let other = other.to_convention(self.conv)?;
        let mut out = self.clone();
        for (m, c) in other.terms {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> NormalForm {
        NormalForm {
            field: self.field.clone(),
            n: self.n,
            conv: self.conv,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn try_sub(&self, other: &NormalForm) -> Result<NormalForm> {
        self.try_add(&other.neg())
    }

    /// `λ A`: multiplication by a scalar on the left.
    pub fn scale_left(&self, lambda: &PerfSeries) -> NormalForm {
        let mut out = NormalForm::zero(&self.field, self.n, self.conv);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), lambda * c);
        }
        out
    }

    /// The same element written in the other normal form.
    pub fn to_convention(&self, conv: Convention) -> Result<NormalForm> {
        if conv == self.conv {
            return Ok(self.clone());
        }
        normalize(&self.field, self.n, &self.to_words(), conv, Strategy::Leftmost)
    }

    /// Ring product `A B`, in the convention of `A`.
    pub fn op_mul(&self, other: &NormalForm) -> Result<NormalForm> {
        self.op_mul_with(other, Strategy::Leftmost)
    }

    pub fn op_mul_with(&self, other: &NormalForm, strategy: Strategy) -> Result<NormalForm> {
        self.check(other)?;
        let mut words = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in self.to_words() {
            for b in other.to_words() {
                let mut f = a.factors.clone();
                f.extend(b.factors);
                words.push(OperatorWord::new(self.n, f));
            }
        }
        normalize(&self.field, self.n, &words, self.conv, strategy)
    }

    /// True iff every term has `l = μ`, i.e. the operator commutes with
    /// multiplication by scalars.
    pub fn is_linear(&self) -> bool {
        self.terms.keys().all(|m| m.l == m.mu)
    }

    /// `max(l + μ + Σi)` over the terms; `None` for the zero operator.
    pub fn filtration_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    /// Applies the operator to a function: each term acts right to left.
    pub fn op_apply(&self, f: &MultiFunction) -> Result<MultiFunction> {
        if !Field::same(&self.field, f.field()) {
            return Err(Error::FieldMismatch);
        }
        if f.n() != self.n {
            return Err(Error::Parameter(format!(
                "operator over {} deltas applied to a function of {} s-variables",
                self.n,
                f.n()
            )));
        }
        let mut acc: Option<MultiFunction> = None;
        for (m, c) in &self.terms {
            let mut g = f.clone();
            let deltas = |mut g: MultiFunction| -> Result<MultiFunction> {
                for (j, &e) in m.i.iter().enumerate() {
                    for _ in 0..e {
                        g = g.apply_delta(j + 1)?;
                    }
                }
                Ok(g)
            };
            let tau_d = |mut g: MultiFunction| -> MultiFunction {
                for _ in 0..m.mu {
                    g = g.apply_d();
                }
                for _ in 0..m.l {
                    g = g.apply_tau();
                }
                g
            };
            g = match self.conv {
                Convention::Standard => tau_d(deltas(g)?),
                Convention::Alt => deltas(tau_d(g))?,
            };
            let g = g.scale(c);
            acc = Some(match acc {
                None => g,
                Some(a) => a.try_add(&g)?,
            });
        }
        Ok(acc.unwrap_or_else(|| {
            MultiFunction::zero(&self.field, self.n, f.trunc_m(), f.trunc_i())
        }))
    }
}

impl fmt::Display for NormalForm {
    /// Terms joined by `+`, each `(coeff)*gen^k*...`; unit coefficients
    /// are omitted and the zero operator prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mut parts: Vec<alloc::string::String> = Vec::new();
            if !c.is_one() || m.degree() == 0 {
                parts.push(format!("({})", c));
            }
            let mut push = |g: Gen, e: u32| {
                match e {
                    0 => {}
                    1 => parts.push(format!("{}", g)),
                    _ => parts.push(format!("{}^{}", g, e)),
                }
            };
            let deltas: Vec<(Gen, u32)> = m
                .i
                .iter()
                .enumerate()
                .map(|(j, &e)| (Gen::Delta(j as u32 + 1), e))
                .collect();
            match self.conv {
                Convention::Standard => {
                    push(Gen::Tau, m.l);
                    push(Gen::D, m.mu);
                    for (g, e) in deltas {
                        push(g, e);
                    }
                }
                Convention::Alt => {
                    for (g, e) in deltas {
                        push(g, e);
                    }
                    push(Gen::Tau, m.l);
                    push(Gen::D, m.mu);
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::br;
    use crate::field::ConstElem;
    use crate::qexp::QExp;
    use alloc::string::ToString;

    fn g(x: Gen) -> Factor {
        Factor::Gen(x)
    }

    fn word(n: usize, f: Vec<Factor>) -> OperatorWord {
        OperatorWord::new(n, f)
    }

    #[test]
    fn commutation_rules() {
        let f = Field::standard(3, 1).unwrap();
        let conv = Convention::Standard;
        let dt = normalize(&f, 0, &[word(0, vec![g(Gen::D), g(Gen::Tau)])], conv, Strategy::Leftmost).unwrap();
        let root = br(&f, 1).frobenius(-1);
        assert_eq!(dt.coeff(&Mono { l: 1, mu: 1, i: vec![] }), Some(&PerfSeries::one(&f)));
        assert_eq!(dt.coeff(&Mono::one(0)), Some(&root));
        assert_eq!(dt.num_terms(), 2);

        let delta_tau = normalize(&f, 1, &[word(1, vec![g(Gen::Delta(1)), g(Gen::Tau)])], conv, Strategy::Leftmost).unwrap();
        assert_eq!(delta_tau.coeff(&Mono { l: 1, mu: 0, i: vec![0] }), Some(&br(&f, 1)));
        assert_eq!(delta_tau.coeff(&Mono { l: 1, mu: 0, i: vec![1] }), Some(&PerfSeries::one(&f)));

        let lam = PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(3));
        let dl = normalize(&f, 0, &[word(0, vec![g(Gen::D), Factor::Scalar(lam.clone())])], conv, Strategy::Leftmost).unwrap();
        assert_eq!(dl.coeff(&Mono { l: 0, mu: 1, i: vec![] }), Some(&lam.frobenius(-1)));
        let tau = NormalForm::gen(&f, 0, conv, Gen::Tau).unwrap();
        assert_eq!(tau.num_terms(), 1);
        assert_eq!(tau.to_string(), "tau");
    }

    #[test]
    fn products_and_commutators() {
        let f = Field::standard(2, 1).unwrap();
        for conv in [Convention::Standard, Convention::Alt] {
            let d = NormalForm::gen(&f, 1, conv, Gen::D).unwrap();
            let t = NormalForm::gen(&f, 1, conv, Gen::Tau).unwrap();
            let comm = d.op_mul(&t).unwrap().try_sub(&t.op_mul(&d).unwrap()).unwrap();
            let expect = NormalForm::scalar(&f, 1, conv, br(&f, 1).frobenius(-1));
            assert_eq!(comm, expect);
            let id = NormalForm::identity(&f, 1, conv);
            assert_eq!(d.op_mul(&id).unwrap(), d);
        }
    }

    #[test]
    fn conventions_round_trip() {
        let f = Field::standard(3, 1).unwrap();
        let w = word(
            2,
            vec![
                g(Gen::Delta(2)),
                g(Gen::D),
                Factor::Scalar(PerfSeries::x(&f)),
                g(Gen::Tau),
                g(Gen::Delta(1)),
            ],
        );
        let std = normalize(&f, 2, core::slice::from_ref(&w), Convention::Standard, Strategy::Leftmost).unwrap();
        let alt = normalize(&f, 2, &[w], Convention::Alt, Strategy::Rightmost).unwrap();
        assert_eq!(std.to_convention(Convention::Alt).unwrap(), alt);
        assert_eq!(alt.to_convention(Convention::Standard).unwrap(), std);
    }

    #[test]
    fn linearity_and_degree() {
        let f = Field::standard(2, 1).unwrap();
        let conv = Convention::Standard;
        let td = normalize(&f, 0, &[word(0, vec![g(Gen::Tau), g(Gen::D)])], conv, Strategy::Leftmost).unwrap();
        assert!(td.is_linear());
        assert_eq!(td.filtration_degree(), Some(2));
        assert!(!NormalForm::gen(&f, 0, conv, Gen::D).unwrap().is_linear());
        let s = NormalForm::scalar(&f, 0, conv, PerfSeries::x(&f));
        assert!(s.is_linear());
        assert_eq!(s.filtration_degree(), Some(0));
        assert_eq!(NormalForm::zero(&f, 0, conv).filtration_degree(), None);
    }

    #[test]
    fn out_of_range_delta() {
        let f = Field::standard(2, 1).unwrap();
        let r = normalize(&f, 1, &[word(1, vec![g(Gen::Delta(2))])], Convention::Standard, Strategy::Leftmost);
        assert!(r.is_err());
    }

    #[test]
    fn apply_delta_to_slot() {
        let f = Field::standard(2, 1).unwrap();
        let mut u = MultiFunction::zero(&f, 1, 3, 3);
        u.set((0, vec![1]), PerfSeries::one(&f)).unwrap();
        let d1 = NormalForm::gen(&f, 1, Convention::Standard, Gen::Delta(1)).unwrap();
        let r = d1.op_apply(&u).unwrap();
        assert_eq!(r.get(&(0, vec![1])).unwrap(), br(&f, 1));
        let id = NormalForm::identity(&f, 1, Convention::Standard);
        assert_eq!(id.op_apply(&u).unwrap(), u);
    }
}
