//! The rewriting system behind [`super::normalize`].
//!
//! A word is a sequence of factors. A redex is an adjacent pair that is out
//! of order for the target convention: a generator before a scalar, two
//! scalars, or two generators in the wrong order. Each rule replaces the pair
//! by one or two segments; every rule lowers the number of inversions
//! against the target order (and scalar merges shorten the word), so the
//! process terminates. Which redex is contracted next is chosen by the
//! [`Strategy`].

use alloc::vec;
use alloc::vec::Vec;

use super::{Convention, Factor, Gen};
use crate::carlitz::br;
use crate::field::FieldRef;
use crate::series::PerfSeries;

/// Order in which redexes are contracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// Uniform choice among current redexes, from a seeded generator.
    Random(u64),
}

/// SplitMix64; enough for picking redexes reproducibly without std.
pub(crate) struct SplitMix(u64);

impl SplitMix {
    pub(crate) fn new(seed: u64) -> SplitMix {
        SplitMix(seed)
    }

    pub(crate) fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub(crate) fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

pub(crate) struct Rewriter {
    conv: Convention,
    b1: PerfSeries,
    neg_b1: PerfSeries,
    root: PerfSeries,
    neg_root: PerfSeries,
}

fn rank(conv: Convention, g: Gen) -> u32 {
    match (conv, g) {
        (Convention::Standard, Gen::Tau) => 0,
        (Convention::Standard, Gen::D) => 1,
        (Convention::Standard, Gen::Delta(j)) => 2 + j,
        (Convention::Alt, Gen::Delta(j)) => j,
        (Convention::Alt, Gen::Tau) => u32::MAX - 1,
        (Convention::Alt, Gen::D) => u32::MAX,
    }
}

impl Rewriter {
    pub(crate) fn new(field: &FieldRef, conv: Convention) -> Rewriter {
        let b1 = br(field, 1);
        let root = b1.frobenius(-1);
        Rewriter {
            conv,
            neg_b1: -&b1,
            b1,
            neg_root: -&root,
            root,
        }
    }

    pub(crate) fn is_redex(&self, a: &Factor, b: &Factor) -> bool {
        match (a, b) {
            (_, Factor::Scalar(_)) => true,
            (Factor::Scalar(_), Factor::Gen(_)) => false,
            (Factor::Gen(x), Factor::Gen(y)) => rank(self.conv, *x) > rank(self.conv, *y),
        }
    }

    /// Replacement segments for the redex `a b`.
    fn contract(&self, a: &Factor, b: &Factor) -> Vec<Vec<Factor>> {
        use Factor::{Gen as G, Scalar as S};
        use Gen::*;
        match (a, b) {
            (S(x), S(y)) => vec![vec![S(x * y)]],
            (G(Tau), S(y)) => vec![vec![S(y.frobenius(1)), G(Tau)]],
            (G(D), S(y)) => vec![vec![S(y.frobenius(-1)), G(D)]],
            (G(Delta(j)), S(y)) => vec![vec![S(y.clone()), G(Delta(*j))]],
            (G(Delta(j)), G(Delta(k))) => vec![vec![G(Delta(*k)), G(Delta(*j))]],
            (G(D), G(Tau)) => vec![vec![G(Tau), G(D)], vec![S(self.root.clone())]],
            // standard convention
            (G(Delta(j)), G(Tau)) => vec![
                vec![G(Tau), G(Delta(*j))],
                vec![S(self.b1.clone()), G(Tau)],
            ],
            (G(Delta(j)), G(D)) => vec![
                vec![G(D), G(Delta(*j))],
                vec![S(self.neg_root.clone()), G(D)],
            ],
            // alternative convention
            (G(D), G(Delta(j))) => vec![
                vec![G(Delta(*j)), G(D)],
                vec![S(self.root.clone()), G(D)],
            ],
            (G(Tau), G(Delta(j))) => vec![
                vec![G(Delta(*j)), G(Tau)],
                vec![S(self.neg_b1.clone()), G(Tau)],
            ],
            _ => unreachable!("not a redex"),
        }
    }

    fn redexes(&self, w: &[Factor]) -> Vec<usize> {
        (0..w.len().saturating_sub(1))
            .filter(|&k| self.is_redex(&w[k], &w[k + 1]))
            .collect()
    }

    /// Rewrites a sum of words until every word is normal; returns the
    /// normal words.
    pub(crate) fn run(&self, words: Vec<Vec<Factor>>, strategy: Strategy) -> Vec<Vec<Factor>> {
        let mut rng = match strategy {
            Strategy::Random(seed) => Some(SplitMix::new(seed)),
            _ => None,
        };
        let mut stack = words;
        let mut done = Vec::new();
        while let Some(w) = stack.pop() {
            if w.iter().any(|f| matches!(f, Factor::Scalar(s) if s.is_exact_zero())) {
                continue;
            }
            let reds = self.redexes(&w);
            if reds.is_empty() {
                done.push(w);
                continue;
            }
            let k = match (strategy, rng.as_mut()) {
                (Strategy::Leftmost, _) => reds[0],
                (Strategy::Rightmost, _) => reds[reds.len() - 1],
                (_, Some(r)) => reds[r.below(reds.len())],
                (Strategy::Random(_), None) => unreachable!(),
            };
            for seg in self.contract(&w[k], &w[k + 1]) {
                let mut nw = Vec::with_capacity(w.len() + 1);
                nw.extend_from_slice(&w[..k]);
                nw.extend(seg);
                nw.extend_from_slice(&w[k + 2..]);
                stack.push(nw);
            }
        }
        done
    }
}
