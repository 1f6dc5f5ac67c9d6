//! Acceptance suite: one PASS/FAIL line per criterion, each under its time
//! limit. Run with `cargo test -p carlitz --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use carlitz::commands::{identity_sweep, roundtrip_sweep};
use carlitz::sampling::{self, Rand};
use carlitz_core::carlitz::{br, carlitz_d, pochhammer, PochhammerMode};
use carlitz_core::cauchy::{cauchy_solve, residual, EvolutionEquation, InitialData};
use carlitz_core::funcspace::{MultiFunction, Tail};
use carlitz_core::hyper::{
    convergence_bound, hyper_eval, hyper_residual, thakur_coeff, thakur_correspondence,
    thakur_residual, HyperCoeffs, HyperParams, Identity, ResidualForm,
};
use carlitz_core::opring::{
    fhat_count, gamma_dim, gamma_dim_enumerated, gk_fit, normalize, qh_lower_bound,
    qh_lower_count, Convention, Factor, Gen, NormalForm, OperatorWord, Strategy,
};
use carlitz_core::{ConstElem, Field, FieldRef, PerfSeries, QExp, Valuation};
use num_rational::Ratio;
use rand::Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(q: u64) -> FieldRef {
    Field::standard(q, 1).expect("standard field")
}

/// `⟨a⟩_m` multiplied out factor by factor.
fn symbol_oracle(a: &PerfSeries, m: u32) -> PerfSeries {
    let f = a.field();
    (0..m).fold(PerfSeries::one(f), |acc, k| {
        &acc * &(&br(f, k as i64) - a).frobenius((m - k) as i32)
    })
}

fn pochhammer_coherence() -> Check {
    let mut rng = sampling::rng(1);
    for q in [2u64, 3, 4] {
        let f = field(q);
        for t in 0..100 {
            let a = sampling::series(&mut rng, &f, 3, -2, 4, 1);
            for m in 0..=6 {
                let direct = pochhammer(&a, m, PochhammerMode::Direct);
                let rec = pochhammer(&a, m, PochhammerMode::Recurrent);
                ensure(direct.is_exact() && direct == rec, || {
                    format!("q={} draw {} m={}: direct {} vs recurrent {}", q, t, m, direct, rec)
                })?;
                ensure(direct == symbol_oracle(&a, m), || format!("q={} draw {} m={}: product", q, t, m))?;
            }
        }
    }
    Ok(())
}

fn factorial_laws() -> Check {
    for q in [2u64, 3, 4] {
        let f = field(q);
        for m in 1..=8u32 {
            let d = carlitz_d(&f, m);
            let step = &br(&f, m as i64) * &carlitz_d(&f, m - 1).frobenius(1);
            ensure(d.is_exact() && d == step, || format!("q={} m={}: D_m recursion", q, m))?;
            let expect = (q.pow(m) as i64 - 1) / (q as i64 - 1);
            ensure(d.valuation() == Valuation::Exact(QExp::int(expect)), || {
                format!("q={} m={}: val D_m = {:?}", q, m, d.valuation())
            })?;
        }
    }
    Ok(())
}

/// Every known slot of a truncation-`trunc` function filled at random.
fn dense_function(rng: &mut Rand, f: &FieldRef, n: usize, trunc: u32) -> MultiFunction {
    let mut u = MultiFunction::zero(f, n, trunc as i64, trunc as i64);
    let mut idx = vec![0u32; n];
    loop {
        let top = idx.iter().copied().min().unwrap_or(trunc);
        for m in 0..=top {
            if rng.gen_bool(0.6) {
                u.set((m, idx.clone()), sampling::series(rng, f, 2, -2, 5, 1)).unwrap();
            }
        }
        let mut pos = 0;
        while pos < n {
            idx[pos] += 1;
            if idx[pos] <= trunc {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == n {
            return u;
        }
    }
}

fn word(n: usize, factors: Vec<Factor>) -> OperatorWord {
    OperatorWord::new(n, factors)
}

fn commutation_relations() -> Check {
    use Factor::{Gen as G, Scalar as S};
    for q in [2u64, 3, 4] {
        let f = field(q);
        let root = br(&f, 1).frobenius(-1);
        let minus = |s: &PerfSeries| -s.clone();
        for n in 0..=2usize {
            let mut relations = vec![vec![
                word(n, vec![G(Gen::D), G(Gen::Tau)]),
                word(n, vec![S(minus(&PerfSeries::one(&f))), G(Gen::Tau), G(Gen::D)]),
                word(n, vec![S(minus(&root))]),
            ]];
            for j in 1..=n as u32 {
                relations.push(vec![
                    word(n, vec![G(Gen::D), G(Gen::Delta(j))]),
                    word(n, vec![S(minus(&PerfSeries::one(&f))), G(Gen::Delta(j)), G(Gen::D)]),
                    word(n, vec![S(minus(&root)), G(Gen::D)]),
                ]);
                relations.push(vec![
                    word(n, vec![G(Gen::Delta(j)), G(Gen::Tau)]),
                    word(n, vec![S(minus(&PerfSeries::one(&f))), G(Gen::Tau), G(Gen::Delta(j))]),
                    word(n, vec![S(minus(&br(&f, 1))), G(Gen::Tau)]),
                ]);
            }
            for conv in [Convention::Standard, Convention::Alt] {
                for (k, rel) in relations.iter().enumerate() {
                    let nf = normalize(&f, n, rel, conv, Strategy::Leftmost).map_err(|e| e.to_string())?;
                    ensure(nf.is_zero(), || format!("q={} n={} relation {}: {}", q, n, k, nf))?;
                }
            }
        }
    }
    let mut rng = sampling::rng(3);
    for t in 0..50 {
        let f = field([2u64, 3][t % 2]);
        let n = 1 + t % 2;
        let u = dense_function(&mut rng, &f, n, 5);
        let root = br(&f, 1).frobenius(-1);
        let du = u.apply_d();
        let lhs = u.apply_tau().apply_d().try_sub(&du.apply_tau()).unwrap();
        ensure(lhs.agrees(&u.scale(&root)), || format!("function {}: d tau - tau d", t))?;
        for j in 1..=n {
            let lhs = u.apply_delta(j).unwrap().apply_d().try_sub(&du.apply_delta(j).unwrap()).unwrap();
            ensure(lhs.agrees(&du.scale(&root)), || format!("function {}: d Delta_{} - Delta_{} d", t, j, j))?;
            let tu = u.apply_tau();
            let lhs = tu.apply_delta(j).unwrap().try_sub(&u.apply_delta(j).unwrap().apply_tau()).unwrap();
            ensure(lhs.agrees(&tu.scale(&br(&f, 1))), || format!("function {}: Delta_{} tau - tau Delta_{}", t, j, j))?;
        }
    }
    Ok(())
}

fn rewriting_confluence() -> Check {
    let mut rng = sampling::rng(4);
    for t in 0..200u64 {
        let f = field([2u64, 3, 4][t as usize % 3]);
        let n = (t as usize / 3) % 3;
        let w = sampling::word(&mut rng, &f, n, 8);
        for conv in [Convention::Standard, Convention::Alt] {
            let norm = |s: Strategy| normalize(&f, n, std::slice::from_ref(&w), conv, s).map_err(|e| e.to_string());
            let left = norm(Strategy::Leftmost)?;
            let right = norm(Strategy::Rightmost)?;
            ensure(left == right, || format!("word {}: {} vs {}", t, left, right))?;
            let again = normalize(&f, n, &left.to_words(), conv, Strategy::Random(t)).map_err(|e| e.to_string())?;
            ensure(again == left, || format!("word {}: not idempotent", t))?;
        }
    }
    Ok(())
}

fn product_params(rng: &mut Rand, t: usize) -> HyperParams {
    let f = field([2u64, 3][t % 2]);
    let r = 1 + rng.gen_range(0..2);
    let s = rng.gen_range(0..=2);
    sampling::hyper_params(rng, &f, r, s)
}

fn cauchy_correctness() -> Check {
    let mut rng = sampling::rng(5);
    for t in 0..25 {
        let p = product_params(&mut rng, t);
        let f = p.field().clone();
        let n = p.a.len().max(p.b.len()).max(1);
        let eq = EvolutionEquation::hypergeometric(&f, n, &p.a, &p.b).map_err(|e| e.to_string())?;
        let u = cauchy_solve(&eq, &InitialData::delta(&f, n), 5, 5).map_err(|e| e.to_string())?;
        ensure(residual(&eq, &u).unwrap().is_zero_at_prec(), || format!("instance {}: residual", t))?;
        for m in 0..=5u32 {
            let sigma = u.get(&(m, vec![m; n])).unwrap();
            let num = p.a.iter().fold(PerfSeries::one(&f), |acc, a| &acc * &symbol_oracle(a, m));
            let den = p.b.iter().fold(PerfSeries::one(&f), |acc, b| &acc * &symbol_oracle(b, m));
            let cross = &(&sigma * &den) - &num;
            ensure(cross.is_zero_at_prec(), || format!("instance {} m={}: sigma_m = {}", t, m, sigma))?;
        }
        let bound = convergence_bound(&p).map_err(|e| e.to_string())?;
        for k in 0..5 {
            let vz = bound.threshold.floor().to_integer() as i64 + 1 + k % 3;
            let z = &PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(vz))
                + &sampling::series(&mut rng, &f, 1, vz + 1, vz + 3, 0);
            let s: Vec<PerfSeries> = (0..n)
                .map(|_| &PerfSeries::one(&f) + &sampling::series(&mut rng, &f, 1, 1, 2, 0))
                .collect();
            let w = s.iter().fold(z.clone(), |acc, v| &acc * v);
            let vw = Ratio::from_integer(w.val_lower().unwrap().floor() as i128);
            let lhs = u.evaluate(&z, &s, &Tail::Bound(bound.term_bound(vw, 6))).map_err(|e| e.to_string())?;
            let rhs = hyper_eval(&p, &w, 5).map_err(|e| e.to_string())?;
            let margin = PerfSeries::significance(&[&lhs, &rhs]);
            ensure(lhs.agrees(&rhs) && margin.is_none_or(|m| m > QExp::ZERO), || {
                format!("instance {} point {}: {} vs {}", t, k, lhs, rhs)
            })?;
        }
    }
    Ok(())
}

const FAMILIES: [(&[i64], &[i64]); 10] = [
    (&[1], &[1]),
    (&[2], &[3]),
    (&[-1], &[2]),
    (&[3], &[1]),
    (&[1, 3], &[2]),
    (&[0, 2], &[1, 1]),
    (&[-2, 1], &[4]),
    (&[2, 2], &[1, 3]),
    (&[5], &[2, 2]),
    (&[1, 1, 2], &[3]),
];

fn hypergeometric_equations() -> Check {
    let mut rng = sampling::rng(6);
    for t in 0..25 {
        let p = product_params(&mut rng, t);
        let r = hyper_residual(&p, 5, ResidualForm::Product).map_err(|e| e.to_string())?;
        ensure(r.is_zero_at_prec(), || format!("product form, draw {}", t))?;
        let f = field([2u64, 3][t % 2]);
        let g = sampling::hyper_params(&mut rng, &f, 2, 1);
        let r = hyper_residual(&g, 5, ResidualForm::Gauss).map_err(|e| e.to_string())?;
        ensure(r.is_zero_at_prec(), || format!("gauss form, draw {}", t))?;
    }
    for (k, (al, be)) in FAMILIES.iter().enumerate() {
        let f = field([2u64, 3][k % 2]);
        let r = thakur_residual(&f, al, be, 5).map_err(|e| e.to_string())?;
        ensure(r.is_zero_at_prec(), || format!("thakur form, family {:?} {:?}", al, be))?;
    }
    Ok(())
}

fn thakur_families() -> Check {
    for q in [2u64, 3] {
        let f = field(q);
        for (al, be) in FAMILIES {
            let rho = thakur_correspondence(&f, al, be, 5).map_err(|e| e.to_string())?;
            let h = HyperCoeffs::compute(&HyperParams::from_integers(&f, al, be), 5)
                .map_err(|e| e.to_string())?
                .h;
            for m in 0..=5u32 {
                let c = thakur_coeff(&f, al, be, m).map_err(|e| e.to_string())?;
                let scaled = &h[m as usize] * &rho.frobenius(m as i32);
                ensure(c.agrees(&scaled), || format!("q={} {:?} {:?} m={}: {} vs {}", q, al, be, m, c, scaled))?;
            }
        }
    }
    Ok(())
}

fn contiguous_relations() -> Check {
    let fields = [field(2), field(3)];
    for id in Identity::ALL {
        let r = identity_sweep(id, 8, 50, 5, &fields).map_err(|e| e.to_string())?;
        ensure(r.passed == r.trials, || format!("{}: {}/{} {:?}", id, r.passed, r.trials, r.failures.first()))?;
    }
    Ok(())
}

fn dimension_counting() -> Check {
    for n in 1..=2u32 {
        let seq = |g: fn(u32, u64) -> u64| (0..=12u64).map(|nu| (nu, g(n, nu))).collect::<Vec<_>>();
        for nu in 0..=12 {
            ensure(gamma_dim(n, nu) == gamma_dim_enumerated(n, nu), || format!("n={} nu={}: gamma", n, nu))?;
            ensure(qh_lower_count(n, nu) >= qh_lower_bound(n, nu), || format!("n={} nu={}: lower bound", n, nu))?;
        }
        let fits = [
            ("gamma", gk_fit(&seq(gamma_dim)), n + 2),
            ("qh", gk_fit(&seq(qh_lower_count)), n + 1),
            ("fhat", gk_fit(&seq(fhat_count)), n + 1),
        ];
        for (name, got, want) in fits {
            ensure(got == Some(want), || format!("n={}: {} degree {:?}, want {}", n, name, got, want))?;
        }
    }
    Ok(())
}

fn linearity_oracle() -> Check {
    let mut rng = sampling::rng(10);
    let mut linear = 0;
    for t in 0..100 {
        let f = field([2u64, 3][t % 2]);
        let a = sampling::normal_form(&mut rng, &f, 1, Convention::Standard);
        let commutes = (0..3).all(|_| {
            let e = rng.gen_range(1..=3);
            let s = &PerfSeries::monomial(&f, ConstElem::ONE, QExp::int(e))
                + &sampling::series(&mut rng, &f, 2, -2, 4, 1);
            let s = if s.is_exact_zero() { PerfSeries::x(&f) } else { s };
            let sop = NormalForm::scalar(&f, 1, Convention::Standard, s);
            a.op_mul(&sop).unwrap().try_sub(&sop.op_mul(&a).unwrap()).unwrap().is_zero()
        });
        ensure(a.is_linear() == commutes, || format!("form {}: {} is_linear = {}", t, a, a.is_linear()))?;
        linear += commutes as u32;
    }
    ensure(linear > 0 && linear < 100, || format!("{} of 100 forms linear", linear))
}

fn cli_determinism() -> Check {
    let (ok, total) = roundtrip_sweep(11, 200).map_err(|e| e.to_string())?;
    ensure(ok == 200 && total == 200, || format!("round trip {}/{}", ok, total))?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_carlitz"))
            .args(["--json", "identity-check", "--id", "5.8", "--seed", "7", "--trials", "10"])
            .output()
            .expect("binary runs")
    };
    let (first, second) = (run(), run());
    ensure(first.status.success(), || String::from_utf8_lossy(&first.stdout).into_owned())?;
    ensure(first.stdout == second.stdout && !first.stdout.is_empty(), || "sweeps differ".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check, u64); 11] = [
        ("pochhammer coherence", pochhammer_coherence, 10),
        ("bracket and factorial laws", factorial_laws, 1),
        ("commutation relations", commutation_relations, 30),
        ("rewriting confluence", rewriting_confluence, 30),
        ("cauchy correctness", cauchy_correctness, 60),
        ("hypergeometric equations", hypergeometric_equations, 60),
        ("thakur correspondence", thakur_families, 10),
        ("contiguous relations", contiguous_relations, 60),
        ("dimension counting", dimension_counting, 5),
        ("linearity criterion", linearity_oracle, 30),
        ("cli round trip and determinism", cli_determinism, 30),
    ];
    let mut failed = 0;
    for (k, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let verdict = match result {
            Ok(()) if took <= Duration::from_secs(*limit) => "PASS".to_string(),
            Ok(()) => format!("FAIL (over the {} s limit)", limit),
            Err(e) => format!("FAIL ({})", e),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {:2} {:32} {:>8.3} s  {}", k + 1, name, took.as_secs_f64(), verdict);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", failed);
        ExitCode::FAILURE
    }
}
