//! Seeded random values for sweeps and round-trip checks. The same seed
//! always yields the same values.

use carlitz_core::carlitz::{br, bracket_distance, shift_up};
use carlitz_core::funcspace::MultiFunction;
use carlitz_core::hyper::HyperParams;
use carlitz_core::opring::{Convention, Factor, Gen, Mono, NormalForm, OperatorWord};
use carlitz_core::{ConstElem, FieldRef, PerfSeries, QExp};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rand = ChaCha8Rng;

pub fn rng(seed: u64) -> Rand {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn nonzero_const(rng: &mut Rand, field: &FieldRef) -> ConstElem {
    field.gen_pow(rng.gen_range(0..field.order() as i64 - 1))
}

/// An exact series with up to `max_terms` terms, exponents `k / q^j` with
/// `lo <= k <= hi` and `j <= depth`.
pub fn series(rng: &mut Rand, field: &FieldRef, max_terms: usize, lo: i64, hi: i64, depth: u32) -> PerfSeries {
    let q = field.q() as i64;
    let count = rng.gen_range(0..=max_terms);
    let terms: Vec<(QExp, ConstElem)> = (0..count)
        .map(|_| {
            let j = rng.gen_range(0..=depth);
            (QExp::new(rng.gen_range(lo..=hi), q.pow(j)), nonzero_const(rng, field))
        })
        .collect();
    PerfSeries::from_terms(field, terms, None)
}

/// A nonzero exact series.
pub fn nonzero_series(rng: &mut Rand, field: &FieldRef, lo: i64, hi: i64) -> PerfSeries {
    loop {
        let s = series(rng, field, 3, lo, hi, 1);
        if !s.is_exact_zero() {
            return s;
        }
    }
}

fn admissible(b: &PerfSeries) -> bool {
    bracket_distance(b, 0).is_ok()
}

/// `r` upper and `s` lower parameters, the lower ones admissible.
pub fn hyper_params(rng: &mut Rand, field: &FieldRef, r: usize, s: usize) -> HyperParams {
    let a = (0..r).map(|_| series(rng, field, 3, -1, 3, 1)).collect();
    let b = (0..s)
        .map(|_| loop {
            let b = series(rng, field, 3, -1, 3, 1);
            if admissible(&b) {
                break b;
            }
        })
        .collect();
    HyperParams::new(field, a, b).expect("one field")
}

/// Parameters `a, b; c` meeting the side conditions of every contiguous
/// relation up to index `top`: `a ≠ 0`, `a ≠ [k]` for `k < top`,
/// `a^q + [1] ≠ 0`, `c ≠ 0`, and `c`, `T_1 c` admissible.
pub fn gauss_params(rng: &mut Rand, field: &FieldRef, top: u32) -> HyperParams {
    loop {
        let a = nonzero_series(rng, field, -1, 3);
        let b = series(rng, field, 3, -1, 3, 1);
        let c = nonzero_series(rng, field, -1, 3);
        let ok = (0..top as i64).all(|k| !(&br(field, k) - &a).is_exact_zero())
            && !(&a.frobenius(1) + &br(field, 1)).is_exact_zero()
            && admissible(&c)
            && admissible(&shift_up(&c));
        if ok {
            return HyperParams::new(field, vec![a, b], vec![c]).expect("one field");
        }
    }
}

/// A function with coefficients on a random subset of the known slots.
pub fn function(rng: &mut Rand, field: &FieldRef, n: usize, trunc: u32) -> MultiFunction {
    let mut u = MultiFunction::zero(field, n, trunc as i64, trunc as i64);
    let stored = rng.gen_range(0..=6);
    for _ in 0..stored {
        let i: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=trunc)).collect();
        let top = i.iter().copied().min().unwrap_or(trunc);
        let m = rng.gen_range(0..=top);
        let mut v = series(rng, field, 2, -2, 5, 1);
        if rng.gen_bool(0.2) {
            v = &v + &PerfSeries::big_o(field, QExp::int(rng.gen_range(6..9)));
        }
        u.set((m, i), v).expect("slot is known");
    }
    u
}

/// A normal form with up to four terms of degree at most 2 per generator.
pub fn normal_form(rng: &mut Rand, field: &FieldRef, n: usize, conv: Convention) -> NormalForm {
    let count = rng.gen_range(0..=4);
    let terms: Vec<(Mono, PerfSeries)> = (0..count)
        .map(|_| {
            let mono = Mono {
                l: rng.gen_range(0..=2),
                mu: rng.gen_range(0..=2),
                i: (0..n).map(|_| rng.gen_range(0..=1)).collect(),
            };
            (mono, series(rng, field, 2, -2, 4, 1))
        })
        .collect();
    NormalForm::from_terms(field, n, conv, terms).expect("shapes agree")
}

/// A word of up to `max_len` factors.
pub fn word(rng: &mut Rand, field: &FieldRef, n: usize, max_len: usize) -> OperatorWord {
    let len = rng.gen_range(0..=max_len);
    let factors = (0..len)
        .map(|_| match rng.gen_range(0..4) {
            0 => Factor::Gen(Gen::Tau),
            1 => Factor::Gen(Gen::D),
            2 if n > 0 => Factor::Gen(Gen::Delta(rng.gen_range(1..=n as u32))),
            _ => Factor::Scalar(series(rng, field, 2, -2, 4, 1)),
        })
        .collect();
    OperatorWord::new(n, factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use carlitz_core::Field;

    #[test]
    fn seeded_draws_repeat() {
        let f = Field::standard(3, 1).unwrap();
        let a = hyper_params(&mut rng(11), &f, 2, 2);
        let b = hyper_params(&mut rng(11), &f, 2, 2);
        assert_eq!(a, b);
        assert!(a.admissibility().is_ok());
        let g = gauss_params(&mut rng(5), &f, 5);
        assert_eq!(g.a.len(), 2);
    }
}
