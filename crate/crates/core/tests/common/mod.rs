#![allow(dead_code)]

use carlitz_core::funcspace::MultiFunction;
use carlitz_core::{ConstElem, Field, FieldRef, PerfSeries, QExp};
use proptest::prelude::*;

pub fn field(q: u64) -> FieldRef {
    Field::standard(q, 1).unwrap()
}

pub fn elem(f: &FieldRef, code: u32) -> ConstElem {
    f.elements().nth((code % f.order()) as usize).unwrap()
}

pub fn nonzero_elem(f: &FieldRef, code: u32) -> ConstElem {
    f.elements().nth(1 + (code % (f.order() - 1)) as usize).unwrap()
}

/// Raw material for a small series: `(numerator, root depth, coefficient)`.
pub type RawSeries = Vec<(i64, u32, u32)>;

pub fn raw_series(max_terms: usize, lo: i64, hi: i64, depth: u32) -> impl Strategy<Value = RawSeries> {
    prop::collection::vec((lo..=hi, 0..=depth, any::<u32>()), 0..=max_terms)
}

pub fn build(f: &FieldRef, raw: &RawSeries) -> PerfSeries {
    let q = f.q() as i64;
    let terms = raw
        .iter()
        .map(|&(num, k, c)| (QExp::new(num, q.pow(k)), nonzero_elem(f, c)));
    PerfSeries::from_terms(f, terms, None)
}

/// A random function with coefficients from `raws` placed on the valid
/// slots in a fixed enumeration order.
pub fn build_function(f: &FieldRef, n: usize, trunc: u32, raws: &[RawSeries]) -> MultiFunction {
    let mut u = MultiFunction::zero(f, n, trunc as i64, trunc as i64);
    let mut slots = Vec::new();
    let mut idx = vec![0u32; n];
    loop {
        let min = idx.iter().copied().min().unwrap_or(trunc);
        for m in 0..=min.min(trunc) {
            slots.push((m, idx.clone()));
        }
        let mut pos = 0;
        loop {
            if pos == n {
                break;
            }
            idx[pos] += 1;
            if idx[pos] <= trunc {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    for (slot, raw) in slots.into_iter().zip(raws.iter().cycle()) {
        u.set(slot, build(f, raw)).unwrap();
    }
    u
}

/// Parameters built from raw series; `None` when a lower parameter is a
/// bracket.
pub fn hyper_params(
    f: &FieldRef,
    upper: &[RawSeries],
    lower: &[RawSeries],
) -> Option<carlitz_core::hyper::HyperParams> {
    let a = upper.iter().map(|r| build(f, r)).collect();
    let b = lower.iter().map(|r| build(f, r)).collect();
    let p = carlitz_core::hyper::HyperParams::new(f, a, b).ok()?;
    p.admissibility().ok()?;
    Some(p)
}

pub fn raw_params(max: usize) -> impl Strategy<Value = (Vec<RawSeries>, Vec<RawSeries>)> {
    (
        prop::collection::vec(raw_series(3, -1, 3, 1), 0..=max),
        prop::collection::vec(raw_series(3, -1, 3, 1), 0..=max),
    )
}
