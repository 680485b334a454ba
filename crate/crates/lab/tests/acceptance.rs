//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use dirichlet_lab::par;
use dirichlet_lab_core::experiments::{counterexample_reproduce, CounterexampleParams};
use dirichlet_lab_core::geometry::{is_fat, SampledProfile};
use dirichlet_lab_core::limits::{nt_limit, subsequence_limit};
use dirichlet_lab_core::potential::{
    green_segment, lemma_l_constant, poisson_kernel, BoundaryPart, Piece, SegmentK, WalkConfig, WosDomain,
};
use dirichlet_lab_core::{
    ApproachRegion, Complex64, ComplexPoint, CuspProfile, GeneralDirichletSeries, NtParams, Status,
    SubsequenceSelector, TailKind,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed(budget: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if took > budget {
        o.pass = false;
    }
    o.detail = format!("{} [{:.2}s / {}s]", o.detail, took.as_secs_f64(), budget.as_secs());
    o
}

fn criterion_1() -> Outcome {
    timed(Duration::from_secs(5), || {
        let r = counterexample_reproduce(CounterexampleParams::default()).unwrap();
        let zeros = r.rows.len() == 20
            && r.rows.iter().enumerate().all(|(i, row)| row.k == i + 1 && row.m == 2 * (i + 1));
        let max_zero = r.rows.iter().map(|row| row.s_at_pi.norm()).fold(0.0, f64::max);
        let max_mesh = r.rows.iter().map(|row| row.mesh_max).fold(0.0, f64::max);
        let nt_err = r.nt.limit.map_or(f64::INFINITY, |v| (v - Complex64::new(-0.5, 0.0)).norm());
        outcome(
            zeros && max_zero <= 1e-12 && max_mesh <= 2f64.sqrt() + 1e-12 && nt_err <= 1e-8,
            format!("max|S_2k(i pi)| = {max_zero:.1e}, max mesh |S_2k| = {max_mesh:.15}, |nt - (-1/2)| = {nt_err:.1e}"),
        )
    })
}

/// `Σ_{k≥1} 2^(−k)/k!` summed smallest term first.
fn lacunary_value_at_zero() -> f64 {
    let mut terms = Vec::new();
    let mut t = 1.0;
    for k in 1..60 {
        t *= 0.5 / k as f64;
        terms.push(t);
    }
    terms.iter().rev().sum()
}

fn criterion_2() -> Outcome {
    timed(Duration::from_secs(1), || {
        let f0 = lacunary_value_at_zero();
        let series = GeneralDirichletSeries::factorial_lacunary(170).unwrap();
        let sel = SubsequenceSelector::full(100).unwrap();
        let ratios = series.gap_ratio_sequence(&sel).unwrap();
        let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
        let last = *ratios.last().unwrap();
        let s = ComplexPoint::on_axis(0.0);
        let mut first_bad = None;
        let mut err6 = 0.0;
        for k in 6..=100 {
            let e = (series.partial_sum(k, s).unwrap() - Complex64::new(f0, 0.0)).norm();
            if k == 6 {
                err6 = e;
            }
            if e >= 1e-8 && first_bad.is_none() {
                first_bad = Some(k);
            }
        }
        let entered = (1..=100)
            .find(|&k| (k..=100).all(|j| (series.partial_sum(j, s).unwrap() - Complex64::new(f0, 0.0)).norm() < 1e-8));
        outcome(
            increasing && last > 100.0 && first_bad.is_none(),
            format!(
                "ratios increasing = {increasing}, ratio at k=100 = {last}, |S_6(0) - f(0)| = {err6:.2e}, \
                 error below 1e-8 from k = {entered:?}"
            ),
        )
    })
}

/// `ζ(s)` by Euler–Maclaurin with 20 direct terms and 10 correction terms.
fn zeta_em(s: Complex64) -> Complex64 {
    // B_2j / (2j)!
    const B: [f64; 10] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
        43867.0 / 5109094217170944000.0,
        -174611.0 / 802857662698291200000.0,
    ];
    let n = 20.0f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..20 {
        sum += (-s * (k as f64).ln()).exp();
    }
    let ns = (-s * n.ln()).exp();
    sum += ns * n / (s - 1.0) + ns * 0.5;
    // Rising product s(s+1)…(s+2j−2) times N^(−s−2j+1).
    let mut rising = s;
    let mut power = ns / n;
    for (j, b) in B.iter().enumerate() {
        sum += rising * power * *b;
        let a = s + (2 * j + 1) as f64;
        rising *= a * (a + 1.0);
        power /= n * n;
    }
    sum
}

fn criterion_3() -> Outcome {
    timed(Duration::from_secs(60), || {
        // Sanity of the oracle against ζ(2) = π²/6.
        let oracle_ok = (zeta_em(Complex64::new(2.0, 0.0)).re - PI * PI / 6.0).abs() < 1e-13;
        let series = GeneralDirichletSeries::zeta_shift(1, 1_000_000).unwrap();
        let sel = SubsequenceSelector::full(1_000_000).unwrap();
        let mut pass = oracle_ok;
        let mut parts = Vec::new();
        for t in [0.5, 1.0, 1.5] {
            let truth = zeta_em(Complex64::new(1.0, t));
            let r = subsequence_limit(&series, &sel, t, 1e-4).unwrap();
            let err = r.limit.map(|v| (v - truth).norm());
            let ok = r.status == Status::Converged && err.is_some_and(|e| e < 1e-4 && e <= r.error_estimate.max(1e-4));
            pass &= ok;
            parts.push(format!(
                "t={t}: {:?}, window diameter {:.3e}, err {}",
                r.status,
                r.error_estimate,
                err.map_or("n/a".into(), |e| format!("{e:.2e}"))
            ));
        }
        outcome(pass, parts.join("; "))
    })
}

fn criterion_4() -> Outcome {
    timed(Duration::from_secs(10), || {
        let mut rng = StdRng::seed_from_u64(2024);
        let mut violations = 0;
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let n = rng.random_range(2..=200);
            let mut lam = 0.0;
            let mut exps = Vec::with_capacity(n);
            let mut coeffs = Vec::with_capacity(n);
            for _ in 0..n {
                lam += rng.random_range(1e-3..2.0);
                exps.push(lam);
                let r: f64 = rng.random_range(0.0..10.0);
                coeffs.push(Complex64::from_polar(r, rng.random_range(0.0..TAU)));
            }
            let series = GeneralDirichletSeries::new(exps.clone(), coeffs.clone(), TailKind::Finite).unwrap();
            let m = rng.random_range(1..n);
            let sigma = rng.random_range(0.1..3.0);
            let s = ComplexPoint::new(sigma, rng.random_range(-50.0..50.0));
            let bound = series.tail_bound(m, sigma, sigma / 2.0).unwrap().bound;
            // f − S_m is the tail itself; sum it directly, smallest term first.
            let tail: Complex64 = exps[m..]
                .iter()
                .zip(&coeffs[m..])
                .rev()
                .map(|(&l, &a)| a * (-s.to_complex() * l).exp())
                .sum();
            if tail.norm() > bound {
                violations += 1;
            }
            if bound > 0.0 {
                worst = worst.max(tail.norm() / bound);
            }
        }
        outcome(violations == 0, format!("{violations} violations, max |f - S_m| / bound = {worst:.3}"))
    })
}

fn criterion_5() -> Outcome {
    timed(Duration::from_secs(1), || {
        let expected = [(0.5, false), (1.0, false), (1.01, true), (2.0, true), (3.0, true)];
        let mut pass = true;
        let mut got = Vec::new();
        for (alpha, want) in expected {
            let r = ApproachRegion::power_cusp(0.0, 0.5, 1.0, 1.0, alpha).unwrap();
            let fat = is_fat(&r).unwrap().fat;
            pass &= fat == want;
            got.push(format!("alpha={alpha}: {fat}"));
        }
        let half = is_fat(&ApproachRegion::half_disc(0.0, 0.5).unwrap()).unwrap().fat;
        pass &= half;
        let ys: Vec<f64> = (0..=2000).map(|i| -0.5 + i as f64 / 2000.0).collect();
        let phi: Vec<f64> = ys.iter().map(|y| y.abs()).collect();
        let sampled = ApproachRegion::Fat {
            t0: 0.0,
            a: 0.5,
            b: 1.0,
            profile: CuspProfile::Sampled(SampledProfile::new(ys, phi, 1.0).unwrap()),
        };
        let lin = is_fat(&sampled).unwrap().fat;
        pass &= !lin;
        outcome(pass, format!("{}, half-disc: {half}, sampled |y|: {lin}", got.join(", ")))
    })
}

fn criterion_6() -> Outcome {
    timed(Duration::from_secs(10), || {
        let mut rng = StdRng::seed_from_u64(6);
        let mut worst_harm = 0.0f64;
        for _ in 0..100 {
            let t0 = rng.random_range(-5.0..5.0);
            let s = ComplexPoint::new(rng.random_range(0.05..3.0), rng.random_range(-5.0..5.0));
            let h = 1e-3 * s.sigma;
            let p = |ds: f64, dt: f64| poisson_kernel(t0, s.shifted(ds, dt)).unwrap();
            let lap = p(h, 0.0) + p(-h, 0.0) + p(0.0, h) + p(0.0, -h) - 4.0 * p(0.0, 0.0);
            worst_harm = worst_harm.max(lap.abs() / p(0.0, 0.0));
        }

        let k = SegmentK::new(-1.0, 1.0).unwrap();
        let pole = ComplexPoint::new(-2.0, 0.3);
        let mut worst_decay = 0.0f64;
        for t in [-0.9, -0.3, 0.0, 0.5, 0.99] {
            for side in [1e-8, -1e-8] {
                worst_decay = worst_decay.max(green_segment(&k, pole, ComplexPoint::new(side, t)).unwrap());
            }
        }
        let mut worst_sym = 0.0f64;
        for _ in 0..100 {
            let x = ComplexPoint::new(rng.random_range(-3.0..3.0), rng.random_range(-4.0..4.0));
            let y = ComplexPoint::new(rng.random_range(-3.0..3.0), rng.random_range(-4.0..4.0));
            if k.contains(x) || k.contains(y) || x.sigma.abs() < 1e-3 || y.sigma.abs() < 1e-3 {
                continue;
            }
            let d = (green_segment(&k, x, y).unwrap() - green_segment(&k, y, x).unwrap()).abs();
            worst_sym = worst_sym.max(d);
        }

        let disc = WosDomain::Disc {
            center: ComplexPoint::new(0.0, 0.0),
            radius: 1.0,
        };
        let parts: Vec<BoundaryPart> = (0..4)
            .map(|i| BoundaryPart {
                label: format!("arc{i}"),
                piece: Piece::Arc {
                    from: TAU * i as f64 / 4.0,
                    to: TAU * (i + 1) as f64 / 4.0,
                },
            })
            .collect();
        let cfg = WalkConfig::for_domain(42, 100_000, &disc);
        let z = ComplexPoint::new(0.0, 0.0);
        let hm = par::harmonic_measure(&disc, z, &parts, &cfg).unwrap();
        let again = par::harmonic_measure(&disc, z, &parts, &cfg).unwrap();
        let worst_z = hm
            .frequencies
            .iter()
            .zip(&hm.std_errors)
            .map(|(p, se)| (p - 0.25).abs() / se)
            .fold(0.0, f64::max);
        outcome(
            worst_harm < 1e-6 && worst_decay <= 1e-4 && worst_sym <= 1e-10 && worst_z <= 3.0 && hm == again,
            format!(
                "stencil residual {worst_harm:.1e}, green at dist 1e-8 {worst_decay:.1e}, asymmetry {worst_sym:.1e}, \
                 WoS max |p - 1/4|/se = {worst_z:.2}, reproducible = {}",
                hm == again
            ),
        )
    })
}

fn criterion_7() -> Outcome {
    timed(Duration::from_secs(60), || {
        let g = GeneralDirichletSeries::geometric(60).unwrap();
        let k = SegmentK::new(-1.0, 1.0).unwrap();
        let samples: Vec<ComplexPoint> = (0..40)
            .map(|j| ComplexPoint::new(-0.9 + 0.1 * (j % 10) as f64, -2.0 + 0.3 * (j / 10) as f64 + 0.05))
            .filter(|p| !k.contains(*p))
            .collect();
        let m25: Vec<usize> = (1..=25).collect();
        let m50: Vec<usize> = (1..=50).collect();
        let c25 = lemma_l_constant(&g, &k, -1.0, &m25, &samples, 201).unwrap().c;
        let c50 = lemma_l_constant(&g, &k, -1.0, &m50, &samples, 201).unwrap().c;
        let excess = c50 / c25 - 1.0;
        outcome(
            c25 > 0.0 && excess < 0.05,
            format!("c(m<=25) = {c25:.6}, c(m<=50) = {c50:.6}, excess {:.2}%", 100.0 * excess),
        )
    })
}

fn criterion_8() -> Outcome {
    timed(Duration::from_secs(1), || {
        let series = GeneralDirichletSeries::power_exponents(2.0, 1.0 / 3.0, 60).unwrap();
        let (ratio, flag) = series.high_indices_check().unwrap();
        let sel = SubsequenceSelector::full(60).unwrap();
        let direct = subsequence_limit(&series, &sel, 1.0, 1e-10).unwrap();
        let nt = nt_limit(&series, 1.0, NtParams::default(), 1e-10).unwrap();
        let gap = match (direct.limit, nt.limit) {
            (Some(a), Some(b)) => (a - b).norm(),
            _ => f64::INFINITY,
        };
        outcome(
            ratio == 2.0 && flag && direct.is_converged() && nt.is_converged() && gap <= 1e-8,
            format!(
                "high_indices_check = ({ratio}, {flag}), direct {:?}, nt {:?}, |S - nt| = {gap:.1e}",
                direct.status, nt.status
            ),
        )
    })
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("counterexample reproduction", criterion_1),
        ("gap-condition positive instance", criterion_2),
        ("zeta boundary limits", criterion_3),
        ("tail-bound soundness", criterion_4),
        ("fatness classifier", criterion_5),
        ("potential kit", criterion_6),
        ("empirical uniform-boundedness constant", criterion_7),
        ("high-indices regression", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} ({name}): {}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
