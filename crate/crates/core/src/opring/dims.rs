//! Monomial counts for the filtrations and growth-degree estimation.

use alloc::vec::Vec;

/// Number of tuples of non-negative integers `(k_1, ..., k_r)` with
/// `Σ w_t k_t <= budget`.
pub fn count_weighted(weights: &[u64], budget: u64) -> u64 {
    match weights.split_first() {
        None => 1,
        Some((&w, rest)) => (0..=budget / w)
            .map(|k| count_weighted(rest, budget - k * w))
            .sum(),
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, t| acc * (n - t) / (t + 1))
}

/// `dim Γ_ν`: monomials `τ^l d^μ Δ^i` with `l + μ + Σi <= ν`.
pub fn gamma_dim(n: u32, nu: u64) -> u64 {
    binomial(nu + n as u64 + 2, n as u64 + 2)
}

/// `gamma_dim` by direct enumeration.
pub fn gamma_dim_enumerated(n: u32, nu: u64) -> u64 {
    count_weighted(&alloc::vec![1; n as usize + 2], nu)
}

/// `#{(l, i) : 2l + Σi <= ν}`, the monomials `τ^l R^l Δ^i` used to bound
/// the filtration of the quotient module from below.
pub fn qh_lower_count(n: u32, nu: u64) -> u64 {
    let mut w = alloc::vec![1; n as usize + 1];
    w[0] = 2;
    count_weighted(&w, nu)
}

/// The lower bound `C(⌊ν/2⌋ + n + 1, n + 1)` for [`qh_lower_count`].
pub fn qh_lower_bound(n: u32, nu: u64) -> u64 {
    binomial(nu / 2 + n as u64 + 1, n as u64 + 1)
}

/// Monomials `s^(q^i) z^(q^m)` of the function class with `m <= min(i)` and
/// `m + Σi <= ν`.
pub fn fhat_count(n: u32, nu: u64) -> u64 {
    // substitute i_k = m + e_k: weight of m becomes n + 1
    let mut w = alloc::vec![1; n as usize + 1];
    w[0] = n as u64 + 1;
    count_weighted(&w, nu)
}

/// Smallest `d` with `Δ_P^(d+1) vals ≡ 0`, where `Δ_P f(ν) = f(ν+P) - f(ν)`;
/// the zero row must keep at least one entry.
fn step_degree(vals: &[i128], period: usize) -> Option<u32> {
    let mut cur: Vec<i128> = vals.to_vec();
    let mut deg = 0;
    while cur.len() > period {
        let next: Vec<i128> = cur.iter().zip(&cur[period..]).map(|(a, b)| b - a).collect();
        if next.iter().all(|&v| v == 0) {
            return Some(deg);
        }
        cur = next;
        deg += 1;
    }
    None
}

/// Growth degree of a dimension sequence `(ν, dim)` sampled at consecutive ν.
///
/// Counting functions with weights other than 1 are quasi-polynomials, so
/// every period `P` is tried with step-`P` differences and the smallest
/// degree wins. A spurious fit needs a high difference row to vanish by
/// accident, which only produces large degrees.
pub fn gk_fit(dims: &[(u64, u64)]) -> Option<u32> {
    if dims.windows(2).any(|p| p[1].0 != p[0].0 + 1) {
        return None;
    }
    let vals: Vec<i128> = dims.iter().map(|&(_, d)| d as i128).collect();
    (1..vals.len()).filter_map(|p| step_degree(&vals, p)).min()
}
