//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

// `!(a > b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use ndcalc::calculus::{
    derivative_fn, exp_coefficients, nd_derivative, nd_integrate, nd_integrate_exact, series_eval,
    NDFunction, ToleranceConfig,
};
use ndcalc::cantor::{
    cantor_forward_rational, cantor_inverse, cantor_member, make_cantor_generator,
};
use ndcalc::functions::{cmodulus_sq, cmul, special, FComplex, Special};
use ndcalc::generators::{make_fig1, make_identity, make_linear, make_power, make_renyi};
use ndcalc::physics::{
    boost, minkowski_norm_sq, oscillator_energy_y, oscillator_state, qho_eigen_residual,
    qho_energy, qho_ground_state, qho_norm, rotate, speed_gap_ln, velocity_of_rapidity,
    OscillatorParams, QhoParams, TwoVector,
};
use ndcalc::stats::{
    chsh_bound, chsh_combination, correlator, entropy, from_escort, kn_average, lhv_max,
    CorrelationSettings,
};
use ndcalc::{Error, Generator};
use num::{BigInt, BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + stream)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn is_cantor(g: &Generator) -> bool {
    g.name().starts_with("cantor")
}

/// Mixed relative error `|a - b| / max(1, |a|, |b|)`.
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Distance between two X-values measured where the generator is well
/// conditioned: on the Y side for continuous generators (their inverses can
/// be non-Lipschitz, e.g. the cube root at 0) and on the X side for the Cantor
/// line (whose float forward map only carries about 34 bits).
fn dist(g: &Generator, a: f64, b: f64) -> f64 {
    if is_cantor(g) {
        return rel(a, b);
    }
    match (g.forward(a), g.forward(b)) {
        (Ok(fa), Ok(fb)) => rel(fa, fb),
        _ => f64::INFINITY,
    }
}

fn float_generators() -> Vec<Generator> {
    vec![
        make_identity(),
        make_power(3.0).unwrap(),
        make_power(5.0).unwrap(),
        make_linear(2.0).unwrap(),
        make_fig1(),
        make_renyi(0.5).unwrap(),
        make_renyi(2.0).unwrap(),
    ]
}

/// Factor that keeps sampled Y-values, their sums and products inside a
/// codomain bounded above.
fn y_scale(g: &Generator, span: f64) -> f64 {
    let hi = g.codomain().hi;
    if hi.is_finite() {
        (hi / span).min(1.0)
    } else {
        1.0
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

// 1

fn cantor_exactness() -> Outcome {
    let mut worst = Duration::ZERO;
    let (inv, t) = timed(|| cantor_inverse(&q(1, 2)).map(|v| v.value()));
    worst = worst.max(t);
    ensure!(inv.as_ref().ok() == Some(&q(1, 3)), "inv 1/2 gave {inv:?}");
    let (fwd, t) = timed(|| cantor_forward_rational(&q(1, 3)));
    worst = worst.max(t);
    ensure!(fwd.as_ref().ok() == Some(&q(1, 2)), "fwd 1/3 gave {fwd:?}");
    let (m1, t) = timed(|| cantor_member(&q(1, 3)));
    worst = worst.max(t);
    ensure!(matches!(m1, Ok(true)), "member(1/3) gave {m1:?}");
    let (m2, t) = timed(|| cantor_member(&q(2, 3)));
    worst = worst.max(t);
    ensure!(matches!(m2, Ok(false)), "member(2/3) gave {m2:?}");
    ensure!(worst < Duration::from_millis(1), "slowest call took {worst:?}");

    // The same values through the binary.
    let bin = env!("CARGO_BIN_EXE_ndcalc");
    for (op, arg, want) in [("inv", "1/2", "1/3"), ("fwd", "1/3", "1/2")] {
        let out = Command::new(bin).args(["cantor", op, arg]).output().map_err(|e| e.to_string())?;
        let got = String::from_utf8_lossy(&out.stdout);
        ensure!(got.trim() == want, "ndcalc cantor {op} {arg} printed {got:?}");
    }
    Ok(format!("exact values, slowest library call {worst:?}"))
}

// 2

fn fractal_integrals() -> Outcome {
    let g = make_cantor_generator(64).map_err(|e| e.to_string())?;
    let one = vec![BigRational::one()];
    let a = nd_integrate_exact(&g, &one, &q(0, 1), &q(1, 3)).map_err(|e| e.to_string())?;
    let b = nd_integrate_exact(&g, &one, &q(1, 3), &q(1, 1)).map_err(|e| e.to_string())?;
    let s = g.add(q(1, 3), q(1, 3)).map_err(|e| e.to_string())?;
    ensure!(a == q(1, 3), "int over [0,1/3] = {a}");
    ensure!(b == q(1, 3), "int over [1/3,1] = {b}");
    ensure!(s == q(1, 1), "(1/3)(+)(1/3) = {s}");
    Ok("1/3, 1/3 and (1/3)(+)(1/3) = 1 exactly".into())
}

// 3

fn exponential() -> Outcome {
    let start = Instant::now();
    let g = make_power(3.0).unwrap();
    let cfg = ToleranceConfig::default();
    let coeffs = exp_coefficients(31);
    let mut worst: f64 = 0.0;
    let mut worst_at = 0.0;
    let mut worst_small: f64 = 0.0;
    for i in 0..100 {
        let x = -2.0 + 4.0 * i as f64 / 99.0;
        let s = series_eval(&g, &coeffs, x, 30, &cfg).map_err(|e| e.to_string())?;
        let c = special(&g, Special::Exp, x).map_err(|e| e.to_string())?;
        let err = (s - c).abs();
        if err > worst {
            worst = err;
            worst_at = x;
        }
        if g.forward(x).unwrap().abs() <= 3.0 {
            worst_small = worst_small.max(err);
        }
    }

    let exp_f = NDFunction::black_box(move |x| special(&make_power(3.0).unwrap(), Special::Exp, x));
    let mut worst_ode: f64 = 0.0;
    for i in 0..100 {
        let x = -2.0 + 4.0 * i as f64 / 99.0;
        let d = nd_derivative(&g, &exp_f, x, &cfg).map_err(|e| e.to_string())?;
        let a = exp_f.eval(&g, x).map_err(|e| e.to_string())?;
        worst_ode = worst_ode.max(dist(&g, d, a));
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "series vs closed form max |err| {worst:.2e} at x = {worst_at:.3} \
         (|f(x)| <= 3 subset: {worst_small:.2e}); derivative ODE {worst_ode:.2e}; {elapsed:?}"
    );
    ensure!(worst <= 1e-10, "{detail}");
    ensure!(worst_ode <= 1e-7, "{detail}");
    ensure!(elapsed < Duration::from_secs(1), "{detail}");
    Ok(detail)
}

// 4

fn spectrum_tables() -> Outcome {
    let cube = make_power(3.0).unwrap();
    let mut worst: f64 = 0.0;
    for n in 0..10 {
        let e = qho_energy(&cube, &QhoParams::new(0.5, 1.0, n).unwrap()).map_err(|e| e.to_string())?;
        worst = worst.max((e - 0.5 * ((2 * n + 1) as f64).cbrt()).abs());
    }
    ensure!(worst <= 1e-12, "cube spectrum error {worst:.2e}");
    for p in [0.5, 2.0, 3.0] {
        let g = make_linear(p).unwrap();
        for (alpha, beta) in [(0.5, 1.0), (0.3, 0.7)] {
            for n in 0..10 {
                let e = qho_energy(&g, &QhoParams::new(alpha, beta, n).unwrap())
                    .map_err(|e| e.to_string())?;
                let want = p * 2.0 * alpha * beta * (n as f64 + 0.5);
                worst = worst.max(rel(e, want));
            }
        }
    }
    ensure!(worst <= 1e-12, "linear spectrum error {worst:.2e}");
    let mut gens = float_generators();
    gens.push(make_cantor_generator(64).unwrap());
    for g in &gens {
        let (alpha, beta) = (0.8, 0.9);
        let e0 = qho_energy(g, &QhoParams::new(alpha, beta, 0).unwrap()).map_err(|e| e.to_string())?;
        let ab = g.mul(alpha, beta).map_err(|e| e.to_string())?;
        ensure!(e0 == ab, "{}: E_0 = {e0} but alpha(*)beta = {ab}", g.name());
    }
    Ok(format!("max error {worst:.2e}; E_0 = alpha(*)beta on {} generators", gens.len()))
}

// 5

/// Textbook Richardson-extrapolated central difference with the library's
/// default step schedule.
fn classical_derivative(f: impl Fn(f64) -> f64, x: f64, cfg: &ToleranceConfig) -> f64 {
    let h0 = cfg.deriv_eps0 * x.abs().max(1.0);
    let mut table: Vec<Vec<f64>> = Vec::new();
    for i in 0..cfg.deriv_levels as usize {
        let h = h0 / 2f64.powi(i as i32);
        let (xp, xm) = (x + h, x - h);
        let mut row = vec![(f(xp) - f(xm)) / (xp - xm)];
        for j in 1..=i {
            let p = 4f64.powi(j as i32);
            row.push((p * row[j - 1] - table[i - 1][j - 1]) / (p - 1.0));
        }
        table.push(row);
    }
    *table.last().unwrap().last().unwrap()
}

fn identity_regression() -> Outcome {
    let g = make_identity();
    let cfg = ToleranceConfig::default();
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    let mut bump = |v: f64| worst = worst.max(v);
    let e = |e: Error| e.to_string();
    for _ in 0..1000 {
        let x: f64 = r.gen_range(-5.0..5.0);
        let y: f64 = r.gen_range(0.1..5.0);
        bump(rel(g.add(x, y).map_err(e)?, x + y));
        bump(rel(g.sub(x, y).map_err(e)?, x - y));
        bump(rel(g.mul(x, y).map_err(e)?, x * y));
        bump(rel(g.div(x, y).map_err(e)?, x / y));
        bump(rel(g.neg(x).map_err(e)?, -x));
        bump(rel(g.opow(x, 3).map_err(e)?, x * x * x));
        for sp in Special::ALL {
            let arg = if sp == Special::Ln { y } else { x };
            bump(rel(special(&g, sp, arg).map_err(e)?, sp.apply(arg)));
        }
        let z = cmul(&g, FComplex::new(x, y), FComplex::new(y, -x)).map_err(e)?;
        bump(rel(z.re, x * y + y * x));
        bump(rel(z.im, y * y - x * x));
        bump(rel(cmodulus_sq(&g, FComplex::new(x, y)).map_err(e)?, x * x + y * y));
        let a = r.gen_range(-3.0..3.0);
        let (xr, yr) = rotate(&g, (x, y), a).map_err(e)?;
        bump(rel(xr, x * a.cos() + y * a.sin()));
        bump(rel(yr, y * a.cos() - x * a.sin()));
        let b = boost(&g, TwoVector { x0: x, x1: y }, a).map_err(e)?;
        bump(rel(b.x0, x * a.cosh() - y * a.sinh()));
        bump(rel(b.x1, y * a.cosh() - x * a.sinh()));
        bump(rel(minkowski_norm_sq(&g, &[x, y]).map_err(e)?, x * x - y * y));
        bump(rel(velocity_of_rapidity(&g, a).map_err(e)?, a.tanh()));
    }

    // Calculus
    let sin_bb = NDFunction::black_box(|x: f64| Ok(x.sin()));
    let sin_conj = NDFunction::conjugate_with_derivative(f64::sin, f64::cos);
    let coeffs = exp_coefficients(31);
    for i in 0..50 {
        let x = -3.0 + 6.0 * i as f64 / 49.0;
        let d = nd_derivative(&g, &sin_bb, x, &cfg).map_err(e)?;
        bump(rel(d, classical_derivative(f64::sin, x, &cfg)));
        bump(rel(nd_derivative(&g, &sin_conj, x, &cfg).map_err(e)?, x.cos()));
        bump(rel(series_eval(&g, &coeffs, x, 30, &cfg).map_err(e)?, x.exp()));
    }
    let tight = ToleranceConfig { quad_tol: 1e-13, ..ToleranceConfig::default() };
    for (a, b) in [(0.0, PI), (-1.0, 2.0), (0.5, 4.0)] {
        let v = nd_integrate(&g, &sin_bb, a, b, &tight).map_err(e)?;
        bump(rel(v, a.cos() - b.cos()));
    }

    // Physics
    let p = OscillatorParams::new(1.3, 0.4, -0.7).unwrap();
    for i in 0..100 {
        let t = i as f64 * 0.1;
        let (x, v) = oscillator_state(&g, &p, t).map_err(e)?;
        let w = 1.3 * t;
        bump(rel(x, 0.4 * w.sin() - 0.7 * w.cos()));
        bump(rel(v, 1.3 * 0.4 * w.cos() + 1.3 * 0.7 * w.sin()));
    }
    let qp = QhoParams::new(0.7, 1.1, 4).unwrap();
    bump(rel(qho_energy(&g, &qp).map_err(e)?, 0.7 * 1.1 * 9.0));
    for x in [-1.0f64, 0.0, 0.3, 2.0] {
        let want = (1.1 / (PI * 0.7)).powf(0.25) * (-1.1 * x * x / 1.4).exp();
        bump(rel(qho_ground_state(&g, &qp, x).map_err(e)?, want));
    }

    // Statistics
    let pk = [0.1, 0.2, 0.3, 0.4];
    let a = [2.0, -1.0, 0.5, 3.0];
    let pv = from_escort(&g, &pk).map_err(e)?;
    let mean: f64 = pk.iter().zip(&a).map(|(p, a)| p * a).sum();
    bump(rel(kn_average(&g, &pv, &a).map_err(e)?, mean));
    let shannon: f64 = -pk.iter().map(|p| p * p.ln()).sum::<f64>();
    bump(rel(entropy(&g, &pv).map_err(e)?, shannon));
    bump(rel(correlator(&g, &pv).map_err(e)?, 0.1 - 0.2 - 0.3 + 0.4));

    ensure!(worst <= 1e-12, "worst deviation {worst:.2e}");
    Ok(format!("worst deviation from classical {worst:.2e}"))
}

// 6

fn float_laws(g: &Generator, r: &mut ChaCha8Rng) -> Result<(f64, usize), String> {
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    let zero: f64 = g.zero().map_err(|e| e.to_string())?;
    let one: f64 = g.one().map_err(|e| e.to_string())?;
    let scale = y_scale(g, 30.0);
    for _ in 0..10_000 {
        let ys: [f64; 3] = std::array::from_fn(|_| scale * 10f64.powf(r.gen_range(-1.0..1.0)));
        let res = (|| -> ndcalc::Result<Vec<(f64, f64)>> {
            let [x, y, z] = [g.inverse(ys[0])?, g.inverse(ys[1])?, g.inverse(ys[2])?];
            Ok(vec![
                (g.add(g.add(x, y)?, z)?, g.add(x, g.add(y, z)?)?),
                (g.mul(g.mul(x, y)?, z)?, g.mul(x, g.mul(y, z)?)?),
                (g.add(x, y)?, g.add(y, x)?),
                (g.mul(x, y)?, g.mul(y, x)?),
                (g.mul(x, g.add(y, z)?)?, g.add(g.mul(x, y)?, g.mul(x, z)?)?),
                (g.add(x, zero)?, x),
                (g.mul(x, one)?, x),
                (g.sub(x, x)?, zero),
                (g.div(x, x)?, one),
            ])
        })();
        match res {
            Ok(pairs) => {
                for (a, b) in pairs {
                    worst = worst.max(dist(g, a, b));
                }
            }
            Err(Error::Domain(_)) => skipped += 1,
            Err(e) => return Err(format!("{}: {e}", g.name())),
        }
    }
    Ok((worst, skipped))
}

fn random_cantor_y(r: &mut ChaCha8Rng) -> BigRational {
    let j = r.gen_range(0..7u32);
    let e = r.gen_range(0..2u32);
    let den = (1i64 << j) * 3i64.pow(e);
    let mut num = r.gen_range(-4 * den..=4 * den);
    if num == 0 {
        num = 1;
    }
    q(num, den)
}

fn cantor_laws(r: &mut ChaCha8Rng) -> Result<usize, String> {
    let g = make_cantor_generator(64).unwrap();
    let e = |e: Error| e.to_string();
    let zero: BigRational = g.zero().map_err(e)?;
    let one: BigRational = g.one().map_err(e)?;
    let mut failures = 0;
    for _ in 0..10_000 {
        let [x, y, z]: [BigRational; 3] = std::array::from_fn(|_| {
            cantor_inverse(&random_cantor_y(r)).expect("bounded period").value()
        });
        let c = |v: &BigRational| v.clone();
        let pairs = vec![
            (g.add(g.add(c(&x), c(&y)).map_err(e)?, c(&z)).map_err(e)?, g.add(c(&x), g.add(c(&y), c(&z)).map_err(e)?).map_err(e)?),
            (g.mul(g.mul(c(&x), c(&y)).map_err(e)?, c(&z)).map_err(e)?, g.mul(c(&x), g.mul(c(&y), c(&z)).map_err(e)?).map_err(e)?),
            (g.add(c(&x), c(&y)).map_err(e)?, g.add(c(&y), c(&x)).map_err(e)?),
            (g.mul(c(&x), c(&y)).map_err(e)?, g.mul(c(&y), c(&x)).map_err(e)?),
            (
                g.mul(c(&x), g.add(c(&y), c(&z)).map_err(e)?).map_err(e)?,
                g.add(g.mul(c(&x), c(&y)).map_err(e)?, g.mul(c(&x), c(&z)).map_err(e)?).map_err(e)?,
            ),
            (g.add(c(&x), c(&zero)).map_err(e)?, c(&x)),
            (g.mul(c(&x), c(&one)).map_err(e)?, c(&x)),
            (g.sub(c(&x), c(&x)).map_err(e)?, c(&zero)),
            (g.div(c(&x), c(&x)).map_err(e)?, c(&one)),
        ];
        failures += pairs.iter().filter(|(a, b)| a != b).count();
    }
    Ok(failures)
}

fn algebraic_laws() -> Outcome {
    let mut r = rng(6);
    let mut report = Vec::new();
    let mut worst: f64 = 0.0;
    for g in float_generators() {
        let (w, skipped) = float_laws(&g, &mut r)?;
        ensure!(skipped < 5_000, "{}: {skipped} of 10^4 triples left the codomain", g.name());
        worst = worst.max(w);
        ensure!(w <= 1e-12, "{}: worst relative error {w:.2e}", g.name());
        if skipped > 0 {
            report.push(format!("{} skipped {skipped}", g.name()));
        }
    }
    let failures = cantor_laws(&mut r)?;
    ensure!(failures == 0, "cantor exact path: {failures} law violations");
    Ok(format!(
        "float worst {worst:.2e}; cantor exact 0 violations; outside codomain: {}",
        if report.is_empty() { "none".into() } else { report.join(", ") }
    ))
}

// 7

fn smooth_pair(g: &Generator) -> (NDFunction, NDFunction) {
    let (ga, gb) = (g.clone(), g.clone());
    let a = NDFunction::black_box(move |x| ga.inverse(2.0 + ga.forward(x)?.sin()));
    let b = NDFunction::black_box(move |x| {
        let y = gb.forward(x)?;
        gb.inverse(1.5 + 0.5 * (0.5 * y).cos())
    });
    (a, b)
}

fn calculus_suite() -> Outcome {
    let gens = vec![
        make_identity(),
        make_power(3.0).unwrap(),
        make_power(5.0).unwrap(),
        make_fig1(),
        make_renyi(0.5).unwrap(),
    ];
    let cfg = ToleranceConfig::default();
    let tight = ToleranceConfig { quad_tol: 1e-13, ..ToleranceConfig::default() };
    let mut r = rng(7);
    let (mut rules, mut ft1, mut ft2, mut conj): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let e = |e: Error| e.to_string();
    for g in &gens {
        let (a, b) = smooth_pair(g);
        let (ga, gb) = (g.clone(), g.clone());
        let (a2, b2) = smooth_pair(g);
        let prod = NDFunction::black_box(move |x| ga.mul(a2.eval(&ga, x)?, b2.eval(&ga, x)?));
        let (a3, b3) = smooth_pair(g);
        let sum = NDFunction::black_box(move |x| gb.add(a3.eval(&gb, x)?, b3.eval(&gb, x)?));
        let (a4, b4) = smooth_pair(g);
        let gc = g.clone();
        let comp = NDFunction::black_box(move |x| a4.eval(&gc, b4.eval(&gc, x)?));
        let (ylo, yhi) = if g.name() == "fig1" { (-1.0, 4.0) } else { (-1.5, 1.5) };
        for _ in 0..100 {
            let x = g.inverse(r.gen_range(ylo..yhi)).map_err(e)?;
            let (ax, bx) = (a.eval(g, x).map_err(e)?, b.eval(g, x).map_err(e)?);
            let da = nd_derivative(g, &a, x, &cfg).map_err(e)?;
            let db = nd_derivative(g, &b, x, &cfg).map_err(e)?;
            let leibniz = g.add(g.mul(da, bx).map_err(e)?, g.mul(ax, db).map_err(e)?).map_err(e)?;
            rules = rules.max(dist(g, nd_derivative(g, &prod, x, &cfg).map_err(e)?, leibniz));
            rules = rules.max(dist(g, nd_derivative(g, &sum, x, &cfg).map_err(e)?, g.add(da, db).map_err(e)?));
            let chain = g.mul(nd_derivative(g, &a, bx, &cfg).map_err(e)?, db).map_err(e)?;
            rules = rules.max(dist(g, nd_derivative(g, &comp, x, &cfg).map_err(e)?, chain));

            let conj_a = NDFunction::conjugate_with_derivative(|y| 2.0 + y.sin(), f64::cos);
            let exact = nd_derivative(g, &conj_a, x, &cfg).map_err(e)?;
            conj = conj.max(dist(g, exact, da));
        }
        let da_fn = derivative_fn(g, &a, &cfg);
        for _ in 0..20 {
            let (mut y0, mut y1) = (r.gen_range(ylo..yhi), r.gen_range(ylo..yhi));
            if y0 > y1 {
                std::mem::swap(&mut y0, &mut y1);
            }
            let (x0, x1) = (g.inverse(y0).map_err(e)?, g.inverse(y1).map_err(e)?);
            let lhs = nd_integrate(g, &da_fn, x0, x1, &cfg).map_err(e)?;
            let rhs = g.sub(a.eval(g, x1).map_err(e)?, a.eval(g, x0).map_err(e)?).map_err(e)?;
            ft1 = ft1.max(dist(g, lhs, rhs));

            let (gi, ai) = (g.clone(), smooth_pair(g).0);
            let upper = NDFunction::black_box(move |x| nd_integrate(&gi, &ai, x0, x, &tight));
            let d = nd_derivative(g, &upper, x1, &tight).map_err(e)?;
            ft2 = ft2.max(dist(g, d, a.eval(g, x1).map_err(e)?));
        }
    }
    let detail = format!(
        "product/sum/chain {rules:.2e}, FT I {ft1:.2e}, FT II {ft2:.2e}, conjugate vs limit {conj:.2e}"
    );
    ensure!(rules <= 1e-8 && ft1 <= 1e-7 && ft2 <= 1e-7 && conj <= 1e-7, "{detail}");
    Ok(detail)
}

// 8

fn function_identities() -> Outcome {
    let mut gens = float_generators();
    gens.push(make_cantor_generator(64).unwrap());
    let mut r = rng(8);
    let mut lines = Vec::new();
    let mut worst_all: f64 = 0.0;
    let e = |e: Error| e.to_string();
    for g in &gens {
        let one: f64 = g.one().map_err(e)?;
        let mut worst: f64 = 0.0;
        let mut skipped = 0;
        let span = 2.0 * y_scale(g, 6.0);
        for _ in 0..500 {
            let (u, v) = (r.gen_range(-span..span), r.gen_range(-span..span));
            let (x, y) = match (g.inverse(u), g.inverse(v)) {
                (Ok(x), Ok(y)) => (x, y),
                _ => {
                    skipped += 1;
                    continue;
                }
            };
            let res = (|| -> ndcalc::Result<Vec<(f64, f64)>> {
                let sp = |s, t| special(g, s, t);
                let sq = |t: f64| g.mul(t, t);
                Ok(vec![
                    (sp(Special::Exp, g.add(x, y)?)?, g.mul(sp(Special::Exp, x)?, sp(Special::Exp, y)?)?),
                    (g.add(sq(sp(Special::Sin, x)?)?, sq(sp(Special::Cos, x)?)?)?, one),
                    (g.sub(sq(sp(Special::Cosh, x)?)?, sq(sp(Special::Sinh, x)?)?)?, one),
                    (
                        sp(Special::Sin, g.add(x, y)?)?,
                        g.add(
                            g.mul(sp(Special::Sin, x)?, sp(Special::Cos, y)?)?,
                            g.mul(sp(Special::Cos, x)?, sp(Special::Sin, y)?)?,
                        )?,
                    ),
                ])
            })();
            match res {
                Ok(pairs) => {
                    for (a, b) in pairs {
                        worst = worst.max(dist(g, a, b));
                    }
                }
                Err(Error::Domain(_)) => skipped += 1,
                Err(err) => return Err(format!("{}: {err}", g.name())),
            }
        }
        ensure!(skipped < 250, "{}: {skipped} of 500 samples left the codomain", g.name());
        ensure!(worst <= 1e-10, "{}: worst error {worst:.2e}", g.name());
        worst_all = worst_all.max(worst);
        if skipped > 0 {
            lines.push(format!("{} skipped {skipped}", g.name()));
        }
    }
    Ok(format!(
        "worst {worst_all:.2e} over {} generators; outside codomain: {}",
        gens.len(),
        if lines.is_empty() { "none".into() } else { lines.join(", ") }
    ))
}

// 9

fn physics_invariants() -> Outcome {
    let gens = vec![
        make_identity(),
        make_power(3.0).unwrap(),
        make_power(5.0).unwrap(),
        make_fig1(),
        make_renyi(0.5).unwrap(),
        make_cantor_generator(64).unwrap(),
    ];
    let mut r = rng(9);
    let e = |e: Error| e.to_string();
    let (mut energy, mut norms, mut groups): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut skipped = 0;
    for g in &gens {
        let omega = g.inverse(1.0).map_err(e)?;
        let p = OscillatorParams::new(omega, g.inverse(0.5).map_err(e)?, g.inverse(1.0).map_err(e)?)
            .map_err(e)?;
        let (x0, v0) = oscillator_state(g, &p, g.zero().map_err(e)?).map_err(e)?;
        let e0 = oscillator_energy_y(g, omega, x0, v0).map_err(e)?;
        for i in 0..1000 {
            let t = g.inverse(2.0 * PI * i as f64 / 999.0).map_err(e)?;
            let (x, v) = oscillator_state(g, &p, t).map_err(e)?;
            energy = energy.max(rel(oscillator_energy_y(g, omega, x, v).map_err(e)?, e0) / e0.min(1.0));
        }

        for _ in 0..500 {
            let v = (g.inverse(r.gen_range(-1.0..1.0)).map_err(e)?, g.inverse(r.gen_range(-1.0..1.0)).map_err(e)?);
            let (a1, a2) = (g.inverse(r.gen_range(-2.0..2.0)).map_err(e)?, g.inverse(r.gen_range(-2.0..2.0)).map_err(e)?);
            let res = (|| -> ndcalc::Result<()> {
                let n = |w: (f64, f64)| g.add(g.mul(w.0, w.0)?, g.mul(w.1, w.1)?);
                let w1 = rotate(g, v, a1)?;
                norms = norms.max(dist(g, n(w1)?, n(v)?));
                let w12 = rotate(g, w1, a2)?;
                let direct = rotate(g, v, g.add(a1, a2)?)?;
                groups = groups.max(dist(g, w12.0, direct.0)).max(dist(g, w12.1, direct.1));
                Ok(())
            })();
            match res {
                Ok(()) => {}
                Err(Error::Domain(_)) => skipped += 1,
                Err(err) => return Err(format!("{}: {err}", g.name())),
            }

            let tv = TwoVector {
                x0: g.inverse(r.gen_range(1.0..1.5)).map_err(e)?,
                x1: g.inverse(r.gen_range(-0.5..0.5)).map_err(e)?,
            };
            let (b1, b2) = (g.inverse(r.gen_range(-0.6..0.6)).map_err(e)?, g.inverse(r.gen_range(-0.6..0.6)).map_err(e)?);
            let res = (|| -> ndcalc::Result<()> {
                let m = |w: TwoVector| minkowski_norm_sq(g, &[w.x0, w.x1]);
                let w1 = boost(g, tv, b1)?;
                norms = norms.max(dist(g, m(w1)?, m(tv)?));
                let w12 = boost(g, w1, b2)?;
                let direct = boost(g, tv, g.add(b1, b2)?)?;
                groups = groups.max(dist(g, w12.x0, direct.x0)).max(dist(g, w12.x1, direct.x1));
                Ok(())
            })();
            match res {
                Ok(()) => {}
                Err(Error::Domain(_)) => skipped += 1,
                Err(err) => return Err(format!("{}: {err}", g.name())),
            }
        }

        let one: f64 = g.one().map_err(e)?;
        for i in 0..=1000 {
            let alpha = 50.0 * i as f64 / 1000.0;
            for a in [alpha, -alpha] {
                let beta = velocity_of_rapidity(g, a).map_err(e)?;
                let gap = speed_gap_ln(g, a).map_err(e)?;
                let size = g.abs(beta).map_err(e)?;
                ensure!(size <= one, "{}: |beta({a})|_f = {size} > 1", g.name());
                ensure!(gap.is_finite() && gap <= 0.0, "{}: ln(1-|tanh|) = {gap} at {a}", g.name());
            }
        }
    }
    let detail = format!(
        "energy {energy:.2e}, norms {norms:.2e}, group laws {groups:.2e}, \
         |beta| < 1 up to alpha = 50; {skipped} samples left the codomain"
    );
    ensure!(energy <= 1e-9 && norms <= 1e-9 && groups <= 1e-9, "{detail}");
    Ok(detail)
}

// 10

fn ground_state() -> Outcome {
    let tight = ToleranceConfig { quad_tol: 1e-12, ..ToleranceConfig::default() };
    let mut worst_norm: f64 = 0.0;
    let mut worst_res: f64 = 0.0;
    for g in [make_identity(), make_power(3.0).unwrap()] {
        for (alpha, beta) in [(1.0, 1.0), (0.5, 1.0), (0.8, 1.7)] {
            let qp = QhoParams::new(alpha, beta, 0).unwrap();
            let n = qho_norm(&g, &qp, 8.0, &tight).map_err(|e| e.to_string())?;
            worst_norm = worst_norm.max((g.forward(n).unwrap() - 1.0).abs());
            let res = qho_eigen_residual(&g, &qp, 2001, 8.0).map_err(|e| e.to_string())?;
            worst_res = worst_res.max(res);
        }
    }
    let detail = format!("norm error {worst_norm:.2e}, eigen residual {worst_res:.2e}");
    ensure!(worst_norm <= 1e-6 && worst_res <= 1e-4, "{detail}");
    Ok(detail)
}

// 11

fn chsh() -> Outcome {
    let e = |e: Error| e.to_string();
    let id = make_identity();
    let cube = make_power(3.0).unwrap();
    let cantor = make_cantor_generator(64).unwrap();
    for g in [&id, &cube] {
        let m: f64 = lhv_max(g).map_err(e)?;
        let b: f64 = chsh_bound(g).map_err(e)?;
        ensure!(m == b, "{}: lhv_max {m} vs bound {b}", g.name());
    }
    ensure!(chsh_bound::<f64>(&id).map_err(e)? == 2.0, "identity bound is not 2");
    ensure!(chsh_bound::<f64>(&cube).map_err(e)? == 2f64.cbrt(), "cube bound is not 2^(1/3)");
    let m: BigRational = lhv_max(&cantor).map_err(e)?;
    let b: BigRational = chsh_bound(&cantor).map_err(e)?;
    ensure!(m == b && b == q(2, 1), "cantor: lhv_max {m} vs bound {b}");

    let mut r = rng(11);
    let mut margin = f64::INFINITY;
    for g in [&id, &cube] {
        let bound: f64 = chsh_bound(g).map_err(e)?;
        for _ in 0..10_000 {
            let raw: Vec<f64> = (0..16).map(|_| -r.gen::<f64>().ln()).collect();
            let total: f64 = raw.iter().sum();
            let mut w: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let rest: f64 = w[1..].iter().sum();
            w[0] = 1.0 - rest;
            let s = CorrelationSettings::from_local_model(g, &w).map_err(e)?;
            let v = chsh_combination(g, &s).map_err(e)?;
            ensure!(v <= bound + 1e-12, "{}: local model reached {v} > {bound}", g.name());
            margin = margin.min(bound - v);
        }
    }
    for _ in 0..10_000 {
        let mut cuts: Vec<i64> = (0..15).map(|_| r.gen_range(0..=1024)).collect();
        cuts.sort_unstable();
        let mut w = Vec::with_capacity(16);
        let mut prev = 0;
        for c in cuts.into_iter().chain([1024]) {
            w.push(q(c - prev, 1024));
            prev = c;
        }
        let s = CorrelationSettings::from_local_model(&cantor, &w).map_err(e)?;
        let v = chsh_combination(&cantor, &s).map_err(e)?;
        ensure!(v <= b, "cantor: local model reached {v}");
    }
    Ok(format!("bounds exact; 3 x 10^4 local models within bound (float margin {margin:.2e})"))
}

// 12

fn correspondence() -> Outcome {
    let g = make_fig1();
    let e = |e: Error| e.to_string();
    let mut worst: f64 = 0.0;
    for lambda in [1e2, 1e3, 1e4] {
        let d = ndcalc::arithmetic::correspondence_defect(&g, 1.0, lambda).map_err(e)?;
        worst = worst.max((d - 6.48 / lambda).abs());
    }
    ensure!(worst <= 1e-12, "defect error {worst:.2e}");
    for i in 0..=1000 {
        let x = -20.0 * i as f64 / 1000.0;
        let v = special(&g, Special::Exp, x).map_err(e)?;
        ensure!(v == x.exp(), "exp_f({x}) = {v}, e^x = {}", x.exp());
    }
    let mut tail: f64 = 0.0;
    for i in 0..=1000 {
        let x = 10.0 + 10.0 * i as f64 / 1000.0;
        let v = special(&g, Special::Exp, x).map_err(e)?;
        let want = (x - 6.48).exp() + 6.48;
        tail = tail.max((v - want).abs() / want);
    }
    ensure!(tail <= 1e-9, "tail relative error {tail:.2e}");
    Ok(format!("defect error {worst:.2e}; left tail exact; right tail {tail:.2e}"))
}

// 13

fn figure_datasets() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_ndcalc");
    let runs: Vec<Vec<&str>> = vec![
        vec!["table", "--count", "1000"],
        vec!["exp", "--count", "1000"],
        vec!["osc", "--gen", "id", "--count", "1000"],
        vec!["osc", "--gen", "power:q=3", "--count", "1000"],
        vec!["osc", "--gen", "power:q=5", "--count", "1000"],
        vec!["osc", "--gen", "cantor", "--count", "1000"],
        vec!["circle", "--radii", "10", "--gen", "cantor", "--count", "1000"],
    ];
    let mut slowest = Duration::ZERO;
    for args in &runs {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let (out, t) = timed(|| Command::new(bin).args(args).output());
            let out = out.map_err(|e| e.to_string())?;
            ensure!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
            ensure!(t < Duration::from_secs(5), "{args:?} took {t:?}");
            slowest = slowest.max(t);
            outputs.push(out.stdout);
        }
        ensure!(outputs[0] == outputs[1], "{args:?} output differs between runs");
        let rows = outputs[0].split(|&b| b == b'\n').filter(|l| !l.is_empty() && l[0] != b'#').count() - 1;
        ensure!(rows >= 1000, "{args:?} produced {rows} rows");
    }
    Ok(format!("{} datasets byte-identical across runs, slowest {slowest:?}", runs.len()))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("Cantor exactness", cantor_exactness),
        ("Fractal integrals", fractal_integrals),
        ("Exponential", exponential),
        ("Spectrum tables", spectrum_tables),
        ("Identity-generator regression", identity_regression),
        ("Algebraic-law suite", algebraic_laws),
        ("Calculus property suite", calculus_suite),
        ("Function identities", function_identities),
        ("Physics invariants", physics_invariants),
        ("Ground-state checks", ground_state),
        ("CHSH", chsh),
        ("Correspondence", correspondence),
        ("Figure datasets", figure_datasets),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok(d) => println!("PASS {:>2} {name}: {d} [{ms:.0} ms]", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {d} [{ms:.0} ms]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
