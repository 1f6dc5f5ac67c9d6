//! Hypergeometric functions with field parameters
//!
//! ```text
//! F(a_1..a_r; b_1..b_s; z) = Σ h_m z^(q^m),   h_m = Π⟨a_i⟩_m / (Π⟨b_j⟩_m D_m),
//! ```
//!
//! Thakur's integer-parameter family, the differential equations both
//! satisfy, the change of variable relating them, and the contiguous
//! relations for the symbol `⟨a⟩_m` and for `₂F₁`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;

use crate::carlitz::{
    br, bracket_distance, carlitz_d, pochhammer, pochhammer_thakur, shift_down, shift_up,
    FactorialTable, PochhammerMode,
};
use crate::error::{Error, Result};
use crate::field::{Field, FieldRef};
use crate::funcspace::MultiFunction;
use crate::opring::{Convention, Factor, Gen, NormalForm, OperatorWord, Strategy};
use crate::qexp::QExp;
use crate::series::PerfSeries;

/// Upper parameters `a_i` and lower parameters `b_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperParams {
    field: FieldRef,
    pub a: Vec<PerfSeries>,
    pub b: Vec<PerfSeries>,
}

impl HyperParams {
    pub fn new(field: &FieldRef, a: Vec<PerfSeries>, b: Vec<PerfSeries>) -> Result<HyperParams> {
        if a.iter().chain(&b).any(|s| !Field::same(field, s.field())) {
            return Err(Error::FieldMismatch);
        }
        Ok(HyperParams {
            field: field.clone(),
            a,
            b,
        })
    }

    /// Parameters `a_i = [-α_i]`, `b_j = [-β_j]`.
    pub fn from_integers(field: &FieldRef, alphas: &[i64], betas: &[i64]) -> HyperParams {
        HyperParams {
            field: field.clone(),
            a: alphas.iter().map(|&al| br(field, -al)).collect(),
            b: betas.iter().map(|&be| br(field, -be)).collect(),
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    /// For each lower parameter, the largest valuation of `b - [ν]` over
    /// `ν = 0, 1, ..., ∞`; fails when some `b_j` equals a bracket.
    pub fn admissibility(&self) -> Result<Vec<QExp>> {
        self.b.iter().map(|b| bracket_distance(b, 0)).collect()
    }
}

/// Truncates to `rel` units above the leading term when that drops terms.
fn capped(s: &PerfSeries, rel: i64) -> PerfSeries {
    let (Some((v, _)), Some((top, _))) = (s.lead(), s.terms().next_back()) else {
        return s.clone();
    };
    let limit = v + QExp::int(rel);
    if top >= limit && s.prec().is_none_or(|p| p > limit) {
        s.truncate(limit)
    } else {
        s.clone()
    }
}

/// `⟨a⟩_0, ..., ⟨a⟩_M` by the recurrence, each known to `rel` units.
fn pochhammer_seq(a: &PerfSeries, top: u32, rel: i64) -> Vec<PerfSeries> {
    let f = a.field();
    let mut out = vec![PerfSeries::one(f)];
    for k in 0..top {
        let factor = capped(&(&br(f, k as i64) - a), rel).frobenius(1);
        let prev = out[k as usize].frobenius(1);
        out.push(capped(&factor.try_mul(&prev).expect("same field"), rel));
    }
    out
}

fn product_seq(params: &[PerfSeries], field: &FieldRef, top: u32, rel: i64) -> Vec<PerfSeries> {
    let mut acc = vec![PerfSeries::one(field); top as usize + 1];
    for p in params {
        for (m, v) in pochhammer_seq(p, top, rel).into_iter().enumerate() {
            acc[m] = capped(&(&acc[m] * &v), rel);
        }
    }
    acc
}

/// `σ_m = Π⟨a_i⟩_m / Π⟨b_j⟩_m` and `h_m = σ_m / D_m` for `m <= M`, without
/// the admissibility check.
fn coeffs_unchecked(params: &HyperParams, top: u32) -> Result<HyperCoeffs> {
    let f = &params.field;
    let rel = f.rel_prec();
    let num = product_seq(&params.a, f, top, rel);
    let den = product_seq(&params.b, f, top, rel);
    let table = FactorialTable::new(f, top);
    let mut out = HyperCoeffs {
        sigma: Vec::new(),
        h: Vec::new(),
    };
    for m in 0..=top {
        let n = &num[m as usize];
        let d = &den[m as usize];
        if n.is_exact_zero() {
            out.sigma.push(PerfSeries::zero(f));
            out.h.push(PerfSeries::zero(f));
            continue;
        }
        if d.is_zero_at_prec() {
            return Err(Error::VanishingDenominator(format!("lower symbols at m = {}", m)));
        }
        out.sigma.push(n.try_div(d)?);
        out.h.push(n.try_div(&(d * &table.d(m)))?);
    }
    Ok(out)
}

/// The coefficients of the series: `h_m` against `z^(q^m)` and
/// `σ_m = h_m D_m` against `z^(q^m)/D_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperCoeffs {
    pub sigma: Vec<PerfSeries>,
    pub h: Vec<PerfSeries>,
}

impl HyperCoeffs {
    pub fn compute(params: &HyperParams, top: u32) -> Result<HyperCoeffs> {
        params.admissibility()?;
        coeffs_unchecked(params, top)
    }

    /// The truncated function as a z-only [`MultiFunction`].
    pub fn to_function(&self, field: &FieldRef) -> MultiFunction {
        let mut u = MultiFunction::zero(field, 0, self.sigma.len() as i64 - 1, 0);
        for (m, s) in self.sigma.iter().enumerate() {
            u.set((m as u32, vec![]), s.clone()).expect("slot within truncation");
        }
        u
    }
}

pub fn hyper_coeff(params: &HyperParams, m: u32) -> Result<PerfSeries> {
    Ok(HyperCoeffs::compute(params, m)?.h.pop().expect("nonempty"))
}

/// Valuation data for the terms `h_m z^(q^m)`.
///
/// With `α_i = min(1, val a_i)` and `β_j` the largest valuation of
/// `b_j - [ν]`, one has `val⟨a_i⟩_m >= α_i (q^(m+1) - q)/(q - 1)`,
/// `val⟨b_j⟩_m <= β_j (q^(m+1) - q)/(q - 1)` and
/// `val D_m = (q^m - 1)/(q - 1)`, so
/// `val(h_m z^(q^m)) >= q^m (val z + κ) - κ` with
/// `κ = (q (Σα - Σβ) - 1)/(q - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceBound {
    pub q: i128,
    pub kappa: Ratio<i128>,
    /// Terms strictly increase in valuation iff `val z > threshold = -κ`.
    pub threshold: Ratio<i128>,
}

fn ratio_of(e: QExp) -> Ratio<i128> {
    Ratio::new(e.numer() as i128, e.denom() as i128)
}

impl ConvergenceBound {
    /// Lower bound for `val(h_m z^(q^m))` given `val z`.
    pub fn term_bound(&self, val_z: Ratio<i128>, m: u32) -> Ratio<i128> {
        (val_z + self.kappa) * self.q.pow(m) - self.kappa
    }

    pub fn accepts(&self, val_z: Ratio<i128>) -> bool {
        val_z > self.threshold
    }
}

pub fn convergence_bound(params: &HyperParams) -> Result<ConvergenceBound> {
    let betas = params.admissibility()?;
    let one = Ratio::from_integer(1);
    let sum_alpha: Ratio<i128> = params
        .a
        .iter()
        .map(|a| a.val_lower().map_or(one, |v| ratio_of(v).min(one)))
        .sum();
    let sum_beta: Ratio<i128> = betas.into_iter().map(ratio_of).sum();
    let q = params.field.q() as i128;
    let kappa = ((sum_alpha - sum_beta) * q - one) / (q - 1);
    Ok(ConvergenceBound {
        q,
        kappa,
        threshold: -kappa,
    })
}

/// True when the series is a polynomial of degree at most `top` in the
/// `z^(q^m)`: some `a_i` equals `[k]` with `k <= top`.
fn terminates_by(params: &HyperParams, top: u32) -> bool {
    params
        .a
        .iter()
        .any(|a| (0..=top as i64).any(|k| (a - &br(&params.field, k)).is_exact_zero()))
}

/// `Σ_(m <= M) h_m z^(q^m)`, with precision lowered to the bound on the
/// first omitted term.
pub fn hyper_eval(params: &HyperParams, z: &PerfSeries, top: u32) -> Result<PerfSeries> {
    let f = &params.field;
    if !Field::same(f, z.field()) {
        return Err(Error::FieldMismatch);
    }
    if z.is_exact_zero() {
        return Ok(PerfSeries::zero(f));
    }
    let bound = convergence_bound(params)?;
    let vz = ratio_of(z.val_lower().expect("nonzero"));
    let polynomial = terminates_by(params, top);
    if !polynomial && !bound.accepts(vz) {
        return Err(Error::Divergent(format!(
            "val z = {} does not exceed the threshold {}",
            vz, bound.threshold
        )));
    }
    let coeffs = HyperCoeffs::compute(params, top)?;
    let mut acc = PerfSeries::zero(f);
    for (m, h) in coeffs.h.iter().enumerate() {
        acc = &acc + &(h * &z.frobenius(m as i32));
    }
    if polynomial {
        return Ok(acc);
    }
    let tail = bound.term_bound(vz, top + 1);
    Ok(acc.truncate(QExp::int(tail.floor().to_integer() as i64)))
}

/// Thakur's coefficient `Π(α_i)_m / (Π(β_j)_m D_m)`.
pub fn thakur_coeff(field: &FieldRef, alphas: &[i64], betas: &[i64], m: u32) -> Result<PerfSeries> {
    let mut num = PerfSeries::one(field);
    for &al in alphas {
        num = &num * &pochhammer_thakur(field, al, m)?;
    }
    let mut den = carlitz_d(field, m);
    for (j, &be) in betas.iter().enumerate() {
        let s = pochhammer_thakur(field, be, m)?;
        if s.is_exact_zero() {
            return Err(Error::VanishingDenominator(format!(
                "(beta_{})_{} = 0 for beta_{} = {}",
                j + 1,
                m,
                j + 1,
                be
            )));
        }
        den = &den * &s;
    }
    if num.is_exact_zero() {
        return Ok(num);
    }
    num.try_div(&den)
}

/// Finds `ρ` with `thakur_coeff_m = h_m ρ^(q^m)` for `m <= M`, where `h_m`
/// are the coefficients for `a_i = [-α_i]`, `b_j = [-β_j]`.
pub fn thakur_correspondence(
    field: &FieldRef,
    alphas: &[i64],
    betas: &[i64],
    top: u32,
) -> Result<PerfSeries> {
    if let Some(be) = betas.iter().find(|&&be| be < 1) {
        return Err(Error::Parameter(format!(
            "lower integer parameters must be positive, got {}",
            be
        )));
    }
    let params = HyperParams::from_integers(field, alphas, betas);
    thakur_correspondence_with(field, alphas, betas, &params, top)
}

/// As [`thakur_correspondence`], against arbitrary parameters `params`.
pub fn thakur_correspondence_with(
    field: &FieldRef,
    alphas: &[i64],
    betas: &[i64],
    params: &HyperParams,
    top: u32,
) -> Result<PerfSeries> {
    let h = HyperCoeffs::compute(params, top)?.h;
    let rho = thakur_coeff(field, alphas, betas, 0)?;
    for (m, hm) in h.iter().enumerate() {
        let lhs = thakur_coeff(field, alphas, betas, m as u32)?;
        let rhs = hm * &rho.frobenius(m as i32);
        let diff = &lhs - &rhs;
        if !diff.is_zero_at_prec() {
            return Err(Error::Inconsistent {
                index: m,
                detail: format!("difference {}", diff),
            });
        }
    }
    Ok(rho)
}

/// Which operator [`hyper_residual`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResidualForm {
    /// `Π(Δ - a_i) - Π(Δ - b_j) d`.
    Product,
    /// `τ(1 - τ)d² + ([-1]^q + a + b)τd - c d - ab` for `₂F₁(a, b; c)`.
    Gauss,
}

fn word(factors: Vec<Factor>) -> OperatorWord {
    OperatorWord::new(0, factors)
}

/// `Π(Δ - a_i) - Π(Δ - b_j) d` in the z-variable, with `Δ = τ d`.
pub fn product_operator(params: &HyperParams) -> Result<NormalForm> {
    let f = &params.field;
    let conv = Convention::Standard;
    let delta = normalize_words(f, vec![word(vec![Factor::Gen(Gen::Tau), Factor::Gen(Gen::D)])])?;
    let chain = |ps: &[PerfSeries]| -> Result<NormalForm> {
        let mut acc = NormalForm::identity(f, 0, conv);
        for p in ps {
            let factor = delta.try_sub(&NormalForm::scalar(f, 0, conv, p.clone()))?;
            acc = acc.op_mul(&factor)?;
        }
        Ok(acc)
    };
    let d = NormalForm::gen(f, 0, conv, Gen::D)?;
    chain(&params.a)?.try_sub(&chain(&params.b)?.op_mul(&d)?)
}

fn normalize_words(field: &FieldRef, words: Vec<OperatorWord>) -> Result<NormalForm> {
    crate::opring::normalize(field, 0, &words, Convention::Standard, Strategy::Leftmost)
}

/// The second-order operator for `₂F₁(a, b; c)`.
pub fn gauss_operator(params: &HyperParams) -> Result<NormalForm> {
    if params.a.len() != 2 || params.b.len() != 1 {
        return Err(Error::Parameter(format!(
            "the second-order form needs r = 2, s = 1, got r = {}, s = {}",
            params.a.len(),
            params.b.len()
        )));
    }
    let f = &params.field;
    let (a, b, c) = (&params.a[0], &params.a[1], &params.b[0]);
    use Factor::{Gen as G, Scalar as S};
    let coeff_td = &(&br(f, -1).frobenius(1) + a) + b;
    normalize_words(
        f,
        vec![
            word(vec![G(Gen::Tau), G(Gen::D), G(Gen::D)]),
            word(vec![S(PerfSeries::from_int(f, -1)), G(Gen::Tau), G(Gen::Tau), G(Gen::D), G(Gen::D)]),
            word(vec![S(coeff_td), G(Gen::Tau), G(Gen::D)]),
            word(vec![S(-c), G(Gen::D)]),
            word(vec![S(-&(a * b))]),
        ],
    )
}

/// Applies the chosen operator to the series truncated at `M`.
pub fn hyper_residual(params: &HyperParams, top: u32, form: ResidualForm) -> Result<MultiFunction> {
    let op = match form {
        ResidualForm::Product => product_operator(params)?,
        ResidualForm::Gauss => gauss_operator(params)?,
    };
    let u = HyperCoeffs::compute(params, top)?.to_function(&params.field);
    op.op_apply(&u)
}

/// The product-form operator with `a_i = [-α_i]`, `b_j = [-β_j]` applied to
/// Thakur's series truncated at `M`.
pub fn thakur_residual(field: &FieldRef, alphas: &[i64], betas: &[i64], top: u32) -> Result<MultiFunction> {
    let params = HyperParams::from_integers(field, alphas, betas);
    let op = product_operator(&params)?;
    let mut u = MultiFunction::zero(field, 0, top as i64, 0);
    for m in 0..=top {
        let c = thakur_coeff(field, alphas, betas, m)?;
        u.set((m, vec![]), &c * &carlitz_d(field, m))?;
    }
    op.op_apply(&u)
}

/// The contiguous relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `⟨T_1 a⟩_m = a^(-q^m) (a - [m]) ⟨a⟩_m`, `a ≠ 0`.
    SymbolShiftUp,
    /// `⟨a⟩_(m+1) = -a^(q^(m+1)) ⟨T_1 a⟩_m^q`.
    SymbolStep,
    /// `⟨T_-1 a⟩_m = -([1] + a^q)^(q^m) ⟨a⟩_(m-1)^q`, `m >= 1`.
    SymbolShiftDown,
    /// `⟨T_-1 a⟩_m = -([1] + a^q)^(q^m) ⟨a⟩_m / ([m-1] - a)^q`, `m >= 1`.
    SymbolShiftDownRatio,
    /// `F(T_1 a, b; c; az) - F(a, T_1 b; c; bz) = (a - b) F(a, b; c; z)`.
    GaussShiftUp,
    /// `F - F^q + (c^q - b^q) F(a, b; T_1 c; z/c)^q
    ///  - (a^q + [1]) F(T_-1 a, b; c; z/(a^q + [1])) = 0`.
    GaussMixed,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::SymbolShiftUp,
        Identity::SymbolStep,
        Identity::SymbolShiftDown,
        Identity::SymbolShiftDownRatio,
        Identity::GaussShiftUp,
        Identity::GaussMixed,
    ];

    /// Short names; the numeric labels are the conventional references.
    pub fn name(self) -> &'static str {
        match self {
            Identity::SymbolShiftUp => "5.3",
            Identity::SymbolStep => "5.4",
            Identity::SymbolShiftDown => "5.5",
            Identity::SymbolShiftDownRatio => "5.6",
            Identity::GaussShiftUp => "5.7",
            Identity::GaussMixed => "5.8",
        }
    }

    pub fn alias(self) -> &'static str {
        match self {
            Identity::SymbolShiftUp => "symbol-shift-up",
            Identity::SymbolStep => "symbol-step",
            Identity::SymbolShiftDown => "symbol-shift-down",
            Identity::SymbolShiftDownRatio => "symbol-shift-down-ratio",
            Identity::GaussShiftUp => "gauss-shift-up",
            Identity::GaussMixed => "gauss-mixed",
        }
    }

    /// Function identities are checked coefficient-wise up to `M`; the
    /// others at a single index `m`.
    pub fn is_function_identity(self) -> bool {
        matches!(self, Identity::GaussShiftUp | Identity::GaussMixed)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Identity> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s || id.alias() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown identity '{}'", s)))
    }
}

/// Outcome of a [`contiguous_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    /// `LHS - RHS`, one entry per checked index.
    pub differences: Vec<PerfSeries>,
    /// Smallest margin between the compared values' leading terms and the
    /// precision of the comparison; `None` when every comparison was exact.
    pub significance: Option<QExp>,
}

impl Verdict {
    fn from_pairs(pairs: Vec<(PerfSeries, PerfSeries)>) -> Verdict {
        let mut sig: Option<QExp> = None;
        let mut diffs = Vec::with_capacity(pairs.len());
        for (l, r) in pairs {
            if let Some(s) = PerfSeries::significance(&[&l, &r]) {
                sig = Some(sig.map_or(s, |t| t.min(s)));
            }
            diffs.push(&l - &r);
        }
        Verdict {
            holds: diffs.iter().all(|d| d.is_zero_at_prec()),
            differences: diffs,
            significance: sig,
        }
    }
}

fn exact_poch(a: &PerfSeries, m: u32) -> PerfSeries {
    pochhammer(a, m, PochhammerMode::Recurrent)
}

fn need_nonzero(v: &PerfSeries, what: &str) -> Result<()> {
    if v.is_zero_at_prec() {
        return Err(Error::Parameter(format!("side condition violated: {} must be nonzero", what)));
    }
    Ok(())
}

/// Checks a contiguous relation. Symbol identities compare at index
/// `m_or_top`, with inverse factors multiplied across so that exact
/// parameters give exact comparisons. Function identities compare the
/// coefficients of `z^(q^m)` for `m <= m_or_top`; the shift-up relation
/// is multiplied by the common nonzero factor `⟨c⟩_m D_m`.
///
/// Parameters: symbol identities use `a = params.a[0]`; the `₂F₁`
/// identities use `params.a = [a, b]`, `params.b = [c]`.
pub fn contiguous_check(id: Identity, params: &HyperParams, m_or_top: u32) -> Result<Verdict> {
    let f = params.field.clone();
    let m = m_or_top;
    let mi = m as i32;
    let a = params
        .a
        .first()
        .ok_or_else(|| Error::Parameter("at least one upper parameter is required".into()))?
        .clone();
    let minus = |s: PerfSeries| -s;
    let pairs = match id {
        Identity::SymbolShiftUp => {
            need_nonzero(&a, "a")?;
            let lhs = &a.frobenius(mi) * &exact_poch(&shift_up(&a), m);
            let rhs = &(&a - &br(&f, m as i64)) * &exact_poch(&a, m);
            vec![(lhs, rhs)]
        }
        Identity::SymbolStep => {
            let lhs = exact_poch(&a, m + 1);
            let rhs = minus(&a.frobenius(mi + 1) * &exact_poch(&shift_up(&a), m).frobenius(1));
            vec![(lhs, rhs)]
        }
        Identity::SymbolShiftDown => {
            if m == 0 {
                return Err(Error::Parameter("side condition violated: m >= 1".into()));
            }
            let w = &br(&f, 1) + &a.frobenius(1);
            let lhs = exact_poch(&shift_down(&a), m);
            let rhs = minus(&w.frobenius(mi) * &exact_poch(&a, m - 1).frobenius(1));
            vec![(lhs, rhs)]
        }
        Identity::SymbolShiftDownRatio => {
            if m == 0 {
                return Err(Error::Parameter("side condition violated: m >= 1".into()));
            }
            let gap = &br(&f, m as i64 - 1) - &a;
            need_nonzero(&gap, "[m-1] - a")?;
            let w = &br(&f, 1) + &a.frobenius(1);
            let lhs = &gap.frobenius(1) * &exact_poch(&shift_down(&a), m);
            let rhs = minus(&w.frobenius(mi) * &exact_poch(&a, m));
            vec![(lhs, rhs)]
        }
        Identity::GaussShiftUp => {
            let (a, b, _c) = gauss_params(params)?;
            (0..=m)
                .map(|k| {
                    let ki = k as i32;
                    let (pa, pb) = (exact_poch(&a, k), exact_poch(&b, k));
                    let first = &(&exact_poch(&shift_up(&a), k) * &pb) * &a.frobenius(ki);
                    let second = &(&pa * &exact_poch(&shift_up(&b), k)) * &b.frobenius(ki);
                    let rhs = &(&a - &b) * &(&pa * &pb);
                    (&first - &second, rhs)
                })
                .collect()
        }
        Identity::GaussMixed => {
            let (a, b, c) = gauss_params(params)?;
            need_nonzero(&c, "c")?;
            let w = &a.frobenius(1) + &br(&f, 1);
            need_nonzero(&w, "a^q + [1]")?;
            let tc = shift_up(&c);
            bracket_distance(&tc, 0)?;
            let base = coeffs_unchecked(params, m)?.h;
            let raised = coeffs_unchecked(&HyperParams::new(&f, vec![a.clone(), b.clone()], vec![tc])?, m)?.h;
            let lowered = coeffs_unchecked(&HyperParams::new(&f, vec![shift_down(&a), b.clone()], vec![c.clone()])?, m)?.h;
            let c_inv = c.pow(-1)?;
            let w_inv = w.pow(-1)?;
            let cb = &c.frobenius(1) - &b.frobenius(1);
            (0..=m as usize)
                .map(|k| {
                    let ki = k as i32;
                    let mut lhs = base[k].clone();
                    let mut rhs = &(&w * &w_inv.frobenius(ki)) * &lowered[k];
                    if k > 0 {
                        rhs = &rhs + &base[k - 1].frobenius(1);
                        let scaled = &(&cb * &c_inv.frobenius(ki)) * &raised[k - 1].frobenius(1);
                        lhs = &lhs + &scaled;
                    }
                    (lhs, rhs)
                })
                .collect()
        }
    };
    Ok(Verdict::from_pairs(pairs))
}

fn gauss_params(params: &HyperParams) -> Result<(PerfSeries, PerfSeries, PerfSeries)> {
    if params.a.len() != 2 || params.b.len() != 1 {
        return Err(Error::Parameter(format!(
            "the Gauss-type identities need two upper and one lower parameter, got {} and {}",
            params.a.len(),
            params.b.len()
        )));
    }
    params.admissibility()?;
    Ok((params.a[0].clone(), params.a[1].clone(), params.b[0].clone()))
}

/// Human-readable summary of a verdict.
pub fn describe(v: &Verdict) -> String {
    match (v.holds, v.significance) {
        (true, None) => "holds exactly".into(),
        (true, Some(s)) => format!("holds to {} units", s),
        (false, _) => "fails".into(),
    }
}
