//! Cauchy problems `{P(Δ_1..Δ_n) + Q(Δ_1..Δ_n) d} u = 0` with prescribed
//! coefficients `c_{0,i}`.
//!
//! Substituting the expansion of `u` gives, slot by slot,
//! `c_{m,i} P([i]) + c_{m+1,i+1}^(1/q) Q([i]) = 0`, hence the recursion
//! `c_{m+1,i+1} = -c_{m,i}^q (P([i]) / Q([i]))^q`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::carlitz::{bracket, BracketIndex};
use crate::error::{Error, Result};
use crate::field::{Field, FieldRef};
use crate::funcspace::{MultiFunction, Slot};
use crate::opring::{Convention, Mono, NormalForm};
use crate::qexp::QExp;
use crate::series::{PerfSeries, Valuation};

/// Polynomial in `n` commuting indeterminates with series coefficients.
#[derive(Clone, Debug)]
pub struct Poly {
    field: FieldRef,
    n: usize,
    terms: BTreeMap<Vec<u32>, PerfSeries>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        Field::same(&self.field, &other.field) && self.n == other.n && self.terms == other.terms
    }
}

impl Poly {
    pub fn zero(field: &FieldRef, n: usize) -> Poly {
        Poly {
            field: field.clone(),
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &FieldRef, n: usize, c: PerfSeries) -> Poly {
        let mut p = Poly::zero(field, n);
        p.add_term(vec![0; n], c);
        p
    }

    /// The indeterminate `t_j`, `1 <= j <= n`.
    pub fn var(field: &FieldRef, n: usize, j: usize) -> Result<Poly> {
        if j == 0 || j > n {
            return Err(Error::Parameter(format!("variable t{} out of range 1..={}", j, n)));
        }
        let mut e = vec![0; n];
        e[j - 1] = 1;
        let mut p = Poly::zero(field, n);
        p.add_term(e, PerfSeries::one(field));
        Ok(p)
    }

    pub fn from_terms(
        field: &FieldRef,
        n: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, PerfSeries)>,
    ) -> Result<Poly> {
        let mut p = Poly::zero(field, n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::Parameter(format!(
                    "monomial with {} exponents in {} variables",
                    e.len(),
                    n
                )));
            }
            if !Field::same(field, c.field()) {
                return Err(Error::FieldMismatch);
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: PerfSeries) {
        let sum = match self.terms.get(&e) {
            Some(a) => a + &c,
            None => c,
        };
        if sum.is_exact_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &PerfSeries)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(&self.field, self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn eval(&self, t: &[PerfSeries]) -> Result<PerfSeries> {
        if t.len() != self.n {
            return Err(Error::Parameter(format!(
                "{} values for a polynomial in {} variables",
                t.len(),
                self.n
            )));
        }
        let mut acc = PerfSeries::zero(&self.field);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (tk, &ek) in t.iter().zip(e) {
                term = term.try_mul(&tk.pow(ek as i64)?)?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Smallest coefficient valuation (0 for the zero polynomial).
    fn min_coeff_val(&self) -> QExp {
        self.terms
            .values()
            .filter_map(|c| c.val_lower())
            .min()
            .unwrap_or(QExp::ZERO)
    }
}

/// `{P(Δ) + Q(Δ) d} u = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionEquation {
    pub p: Poly,
    pub q: Poly,
}

impl EvolutionEquation {
    pub fn new(p: Poly, q: Poly) -> Result<EvolutionEquation> {
        if !Field::same(&p.field, &q.field) {
            return Err(Error::FieldMismatch);
        }
        if p.n != q.n {
            return Err(Error::Parameter("P and Q in different numbers of variables".into()));
        }
        if p.n == 0 {
            return Err(Error::Parameter("at least one s-variable is required".into()));
        }
        if p.is_zero() || q.is_zero() {
            return Err(Error::Parameter("P and Q must be nonzero".into()));
        }
        Ok(EvolutionEquation { p, q })
    }

    /// The hypergeometric equation in `n >= max(r, s)` variables:
    /// `P = Π (t_i - a_i)`, `Q = -Π (t_j - b_j)`, so that the operator is
    /// `Π (Δ_i - a_i) - Π (Δ_j - b_j) d` and the diagonal coefficients of the
    /// solution with `c_{0,0} = 1` are `Π⟨a_i⟩_m / Π⟨b_j⟩_m`.
    pub fn hypergeometric(
        field: &FieldRef,
        n: usize,
        a: &[PerfSeries],
        b: &[PerfSeries],
    ) -> Result<EvolutionEquation> {
        if n < a.len().max(b.len()) || n == 0 {
            return Err(Error::Parameter(format!(
                "need n >= max(r, s) = {} and n >= 1, got n = {}",
                a.len().max(b.len()),
                n
            )));
        }
        let product = |params: &[PerfSeries]| -> Result<Poly> {
            let mut acc = Poly::constant(field, n, PerfSeries::one(field));
            for (k, c) in params.iter().enumerate() {
                let factor = Poly::var(field, n, k + 1)?.sub(&Poly::constant(field, n, c.clone()));
                acc = acc.mul(&factor);
            }
            Ok(acc)
        };
        EvolutionEquation::new(product(a)?, product(b)?.neg())
    }

    pub fn n(&self) -> usize {
        self.p.n
    }

    pub fn field(&self) -> &FieldRef {
        &self.p.field
    }

    /// `P(Δ) + Q(Δ) d` in the convention `Δ^i τ^l d^μ`, where it is already
    /// normal.
    pub fn operator(&self) -> NormalForm {
        let n = self.n();
        let p_terms = self.p.terms.iter().map(|(e, c)| {
            (Mono { l: 0, mu: 0, i: e.clone() }, c.clone())
        });
        let q_terms = self.q.terms.iter().map(|(e, c)| {
            (Mono { l: 0, mu: 1, i: e.clone() }, c.clone())
        });
        NormalForm::from_terms(self.field(), n, Convention::Alt, p_terms.chain(q_terms))
            .expect("shapes agree by construction")
    }
}

/// Prescribed coefficients `c_{0,i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialData {
    pub n: usize,
    pub values: BTreeMap<Vec<u32>, PerfSeries>,
}

impl InitialData {
    pub fn new(n: usize) -> InitialData {
        InitialData {
            n,
            values: BTreeMap::new(),
        }
    }

    /// `c_{0,0..0} = 1`, all other initial coefficients zero.
    pub fn delta(field: &FieldRef, n: usize) -> InitialData {
        let mut d = InitialData::new(n);
        d.values.insert(vec![0; n], PerfSeries::one(field));
        d
    }

    pub fn set(&mut self, i: Vec<u32>, v: PerfSeries) -> Result<()> {
        if i.len() != self.n {
            return Err(Error::Parameter(format!(
                "initial index of length {} for n = {}",
                i.len(),
                self.n
            )));
        }
        self.values.insert(i, v);
        Ok(())
    }
}

/// Outcome of a successful admissibility check.
#[derive(Clone, Debug, PartialEq)]
pub struct Admissibility {
    /// Largest valuation of `Q([i])` over the checked tuples; the bound of
    /// the check is `μ = q^(-max_valuation)`.
    pub max_valuation: QExp,
    /// A tuple attaining it.
    pub at: Vec<BracketIndex>,
}

fn for_each_tuple(
    n: usize,
    imax: u32,
    f: &mut dyn FnMut(&[BracketIndex]) -> Result<()>,
) -> Result<()> {
    let choices: Vec<BracketIndex> = (0..=imax as i64)
        .map(BracketIndex::Finite)
        .chain(core::iter::once(BracketIndex::Infinity))
        .collect();
    let mut idx = vec![0usize; n];
    loop {
        let tuple: Vec<BracketIndex> = idx.iter().map(|&k| choices[k]).collect();
        f(&tuple)?;
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(());
            }
            idx[pos] += 1;
            if idx[pos] < choices.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Evaluates `Q` at every tuple `([i_1], ..., [i_n])` with
/// `i_k ∈ {0, ..., imax, ∞}`.
pub fn admissibility_check(eq: &EvolutionEquation, imax: u32) -> Result<Admissibility> {
    let field = eq.field().clone();
    let mut best: Option<Admissibility> = None;
    for_each_tuple(eq.n(), imax, &mut |tuple| {
        let args: Vec<PerfSeries> = tuple.iter().map(|&i| bracket(&field, i)).collect();
        let v = eq.q.eval(&args)?;
        match v.valuation() {
            Valuation::Infinite => Err(Error::Inadmissible { tuple: tuple.to_vec() }),
            Valuation::AtLeast(_) => Err(Error::Indeterminate { tuple: tuple.to_vec() }),
            Valuation::Exact(e) => {
                if best.as_ref().is_none_or(|b| e > b.max_valuation) {
                    best = Some(Admissibility {
                        max_valuation: e,
                        at: tuple.to_vec(),
                    });
                }
                Ok(())
            }
        }
    })?;
    Ok(best.expect("at least one tuple is checked"))
}

/// Smallest `I` for which checking `{0..I, ∞}` certifies every index.
///
/// For `i > I` we have `[i] = [∞] + x^(q^i)` and every bracket has
/// valuation at least 1, so replacing such coordinates by `∞` changes
/// `Q([i])` by a term of valuation at least `q^(I+1) + v_c`, with `v_c` the
/// smallest coefficient valuation of `Q` (or 0). Once that exceeds the
/// largest checked valuation, unchecked tuples have the valuation of a
/// checked one.
pub fn recommended_imax(eq: &EvolutionEquation) -> Result<u32> {
    let q = eq.field().q() as i64;
    let vc = eq.q.min_coeff_val().min(QExp::ZERO);
    for imax in 0..40u32 {
        let adm = admissibility_check(eq, imax)?;
        let gap = QExp::int(q.saturating_pow(imax + 1)) + vc;
        if gap > adm.max_valuation {
            return Ok(imax);
        }
    }
    Err(Error::Parameter("no admissibility bound below 40".into()))
}

/// Fills `c_{m,i}` for `m <= truncM`, `i_k <= truncI` from the initial
/// layer by the recursion. Refuses when `Q` vanishes at some checked tuple.
pub fn cauchy_solve(
    eq: &EvolutionEquation,
    init: &InitialData,
    trunc_m: u32,
    trunc_i: u32,
) -> Result<MultiFunction> {
    let n = eq.n();
    if init.n != n {
        return Err(Error::Parameter(format!(
            "initial data for n = {} but equation has n = {}",
            init.n, n
        )));
    }
    admissibility_check(eq, trunc_i)?;
    let field = eq.field().clone();
    let mut u = MultiFunction::zero(&field, n, trunc_m as i64, trunc_i as i64);
    for (i, v) in &init.values {
        if i.iter().all(|&k| k <= trunc_i) {
            u.set((0, i.clone()), v.clone())?;
        }
    }
    let mut ratios: BTreeMap<Vec<u32>, PerfSeries> = BTreeMap::new();
    let minus_one = PerfSeries::from_int(&field, -1);
    for m in 0..trunc_m {
        let layer: Vec<(Slot, PerfSeries)> = u
            .iter()
            .filter(|((mm, i), _)| *mm == m && i.iter().all(|&k| k < trunc_i))
            .map(|(s, v)| (s.clone(), v.clone()))
            .collect();
        for ((_, i), c) in layer {
            let ratio = match ratios.get(&i) {
                Some(r) => r.clone(),
                None => {
                    let args: Vec<PerfSeries> =
                        i.iter().map(|&k| bracket(&field, BracketIndex::Finite(k as i64))).collect();
                    let pv = eq.p.eval(&args)?;
                    let qv = eq.q.eval(&args)?;
                    if qv.is_zero_at_prec() {
                        let tuple = i.iter().map(|&k| BracketIndex::Finite(k as i64)).collect();
                        return Err(if qv.is_exact_zero() {
                            Error::Inadmissible { tuple }
                        } else {
                            Error::Indeterminate { tuple }
                        });
                    }
                    let r = (&minus_one * &pv.try_div(&qv)?).frobenius(1);
                    ratios.insert(i.clone(), r.clone());
                    r
                }
            };
            let next = &c.frobenius(1) * &ratio;
            let slot = (m + 1, i.iter().map(|k| k + 1).collect());
            u.set(slot, next)?;
        }
    }
    Ok(u)
}

/// `{P(Δ) + Q(Δ) d} u`; zero on the known support for a solution.
pub fn residual(eq: &EvolutionEquation, u: &MultiFunction) -> Result<MultiFunction> {
    eq.operator().op_apply(u)
}

/// Result of [`growth_check`], in `log_q` units.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub holds: bool,
    /// Smallest `log_q C_2` that works with the given `log_q r`.
    pub tightest_log_c: Option<Ratio<i128>>,
    /// Smallest `log_q r` that works with the given `log_q C_2`.
    pub tightest_log_r: Option<Ratio<i128>>,
    /// First stored slot violating the bound.
    pub violation: Option<Slot>,
}

/// Checks `val c_{l,j} >= -q^l log_c - (Σ q^(j_k)) log_r` on every stored
/// coefficient.
pub fn growth_check(u: &MultiFunction, log_r: Ratio<i128>, log_c: Ratio<i128>) -> GrowthReport {
    let q = u.field().q() as i128;
    let mut report = GrowthReport {
        holds: true,
        tightest_log_c: None,
        tightest_log_r: None,
        violation: None,
    };
    for ((l, j), c) in u.iter() {
        let Some(v) = c.val_lower() else { continue };
        let v = Ratio::new(v.numer() as i128, v.denom() as i128);
        let ql = Ratio::from_integer(q.pow(*l));
        let s = Ratio::from_integer(j.iter().map(|&k| q.pow(k)).sum::<i128>());
        if v < -ql * log_c - s * log_r && report.violation.is_none() {
            report.holds = false;
            report.violation = Some((*l, j.clone()));
        }
        let need_c = (-v - s * log_r) / ql;
        if report.tightest_log_c.is_none_or(|t| need_c > t) {
            report.tightest_log_c = Some(need_c);
        }
        if s > Ratio::from_integer(0) {
            let need_r = (-v - ql * log_c) / s;
            if report.tightest_log_r.is_none_or(|t| need_r > t) {
                report.tightest_log_r = Some(need_r);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carlitz::br;
    use crate::field::ConstElem;

    fn lin(field: &FieldRef, c: PerfSeries) -> Poly {
        Poly::var(field, 1, 1).unwrap().sub(&Poly::constant(field, 1, c))
    }

    #[test]
    fn constructed_zero_is_found() {
        let f = Field::standard(2, 1).unwrap();
        let eq = EvolutionEquation::new(Poly::constant(&f, 1, PerfSeries::one(&f)), lin(&f, br(&f, 2))).unwrap();
        match admissibility_check(&eq, 3) {
            Err(Error::Inadmissible { tuple }) => assert_eq!(tuple, vec![BracketIndex::Finite(2)]),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn zero_at_infinity() {
        let f = Field::standard(3, 1).unwrap();
        let q = Poly::var(&f, 1, 1).unwrap().add(&Poly::constant(&f, 1, PerfSeries::x(&f)));
        let eq = EvolutionEquation::new(Poly::constant(&f, 1, PerfSeries::one(&f)), q).unwrap();
        match admissibility_check(&eq, 3) {
            Err(Error::Inadmissible { tuple }) => assert_eq!(tuple, vec![BracketIndex::Infinity]),
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn admissible_b_bound() {
        let f = Field::standard(2, 1).unwrap();
        // b = x^3: b - [ν] has valuation 1 for every ν, b + x too
        let b = PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(3));
        let eq = EvolutionEquation::new(Poly::constant(&f, 1, PerfSeries::one(&f)), lin(&f, b.clone())).unwrap();
        let adm = admissibility_check(&eq, 4).unwrap();
        let beta = crate::carlitz::bracket_distance(&b, 4).unwrap();
        assert_eq!(adm.max_valuation, beta);
        assert!(recommended_imax(&eq).is_ok());
    }

    #[test]
    fn first_step_of_recursion() {
        let f = Field::standard(2, 1).unwrap();
        let a = PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(2));
        let b = &PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(3)) + &PerfSeries::one(&f);
        let eq = EvolutionEquation::new(lin(&f, a.clone()), lin(&f, b.clone())).unwrap();
        let u = cauchy_solve(&eq, &InitialData::delta(&f, 1), 2, 2).unwrap();
        let expect = a.try_div(&b).unwrap().frobenius(1);
        assert!(u.get(&(1, vec![1])).unwrap().agrees(&expect));
        assert!(residual(&eq, &u).unwrap().is_zero_at_prec());
    }

    #[test]
    fn zero_data_gives_zero() {
        let f = Field::standard(3, 1).unwrap();
        let eq = EvolutionEquation::hypergeometric(&f, 1, &[PerfSeries::x(&f)], &[PerfSeries::one(&f)]).unwrap();
        let u = cauchy_solve(&eq, &InitialData::new(1), 4, 4).unwrap();
        assert_eq!(u.num_stored(), 0);
        assert!(residual(&eq, &u).unwrap().is_zero_at_prec());
        assert!(growth_check(&u, Ratio::from_integer(0), Ratio::from_integer(0)).holds);
    }

    #[test]
    fn hypergeometric_diagonal() {
        let f = Field::standard(3, 1).unwrap();
        let a = PerfSeries::x(&f);
        let b = PerfSeries::one(&f);
        let eq = EvolutionEquation::hypergeometric(&f, 1, core::slice::from_ref(&a), core::slice::from_ref(&b)).unwrap();
        let u = cauchy_solve(&eq, &InitialData::delta(&f, 1), 3, 3).unwrap();
        for m in 0..=3u32 {
            let pa = crate::carlitz::pochhammer(&a, m, crate::carlitz::PochhammerMode::Direct);
            let pb = crate::carlitz::pochhammer(&b, m, crate::carlitz::PochhammerMode::Direct);
            assert!(u.get(&(m, vec![m])).unwrap().agrees(&pa.try_div(&pb).unwrap()));
        }
        let r = residual(&eq, &u).unwrap();
        assert!(r.is_zero_at_prec());
        assert!(growth_check(&u, Ratio::from_integer(0), Ratio::from_integer(1)).holds);
        let mut bad = u.clone();
        bad.set((2, vec![2]), PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(-100))).unwrap();
        assert!(!growth_check(&bad, Ratio::from_integer(0), Ratio::from_integer(1)).holds);
    }
}
