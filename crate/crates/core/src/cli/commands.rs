use std::f64::consts::PI;
use std::path::PathBuf;

use num::{BigRational, ToPrimitive};

use super::{
    parse_f64, parse_rational, CantorOp, Cell, CliError, CliResult, Command, Common, Dataset,
    Format, Grid, Output,
};
use crate::arithmetic::Generator;
use crate::calculus::ToleranceConfig;
use crate::cantor::{cantor_forward_rational, cantor_inverse, cantor_member};
use crate::error::Error;
use crate::functions::{special, Special};
use crate::generators::GeneratorSpec;
use crate::physics::{
    boost, oscillator_state, qho_energy, qho_norm, rotate, velocity_of_rapidity, OscillatorParams,
    QhoParams, TwoVector,
};
use crate::stats::{chsh_bound, entropy, from_escort, lhv_max};

const NOT_IN_SET: &str = "NOT_IN_SET";

struct Ctx {
    spec: GeneratorSpec,
    g: Generator,
    format: Format,
    cfg: ToleranceConfig,
}

impl Ctx {
    fn new(common: &Common, default_gen: &str) -> CliResult<Self> {
        let text = common.generator.as_deref().unwrap_or(default_gen);
        let spec: GeneratorSpec = text
            .parse()
            .map_err(|e| CliError::Config(format!("bad generator spec {text:?}: {e}")))?;
        let g = spec.build()?;
        let mut cfg = ToleranceConfig::default();
        if let Some(t) = common.tol {
            cfg.quad_tol = t;
            cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(Ctx { spec, g, format: common.format, cfg })
    }

    fn dataset(&self, command: &str, columns: &[&str]) -> Dataset {
        let mut d = Dataset::new(columns);
        d.meta("tool", concat!("ndcalc ", env!("CARGO_PKG_VERSION")));
        d.meta("command", command);
        d.meta("generator", &self.spec);
        d
    }

    fn is_cantor(&self) -> bool {
        matches!(self.spec, GeneratorSpec::Cantor { .. })
    }
}

struct Range {
    from: BigRational,
    to: BigRational,
    count: usize,
}

fn range(grid: &Grid, from: &str, to: &str, count: usize) -> CliResult<Range> {
    let from = parse_rational(grid.from.as_deref().unwrap_or(from))?;
    let to = parse_rational(grid.to.as_deref().unwrap_or(to))?;
    let count = grid.count.unwrap_or(count);
    check_grid(&from, &to, count)?;
    Ok(Range { from, to, count })
}

fn check_grid(from: &BigRational, to: &BigRational, count: usize) -> CliResult<()> {
    if count < 2 {
        return Err(CliError::Config(format!("count must be at least 2, got {count}")));
    }
    if from >= to {
        return Err(CliError::Config(format!("need from < to, got {from} and {to}")));
    }
    Ok(())
}

fn to_f64(r: &BigRational) -> CliResult<f64> {
    r.to_f64()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Config(format!("{r} is out of range")))
}

/// `count` evenly spaced floats, with both ends exact.
fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    let step = (b - a) / (count - 1) as f64;
    (0..count).map(|j| if j == count - 1 { b } else { a + j as f64 * step }).collect()
}

/// X-side points whose images are evenly spaced in `[ya, yb]`.
fn y_uniform(g: &Generator, ya: f64, yb: f64, count: usize) -> CliResult<Vec<f64>> {
    linspace(ya, yb, count).into_iter().map(|y| Ok(g.inverse(y)?)).collect()
}

/// Cell for a float-path value that may legitimately be undefined.
fn partial(v: crate::Result<f64>) -> CliResult<Cell> {
    match v {
        Ok(x) => Ok(Cell::Num(x)),
        Err(Error::Domain(_)) => Ok(Cell::Empty),
        Err(e) => Err(e.into()),
    }
}

pub(super) fn execute(cmd: &Command) -> CliResult<(Output, Option<PathBuf>)> {
    match cmd {
        Command::Table { common, grid } => {
            let ctx = Ctx::new(common, "fig1")?;
            let r = range(grid, "0", "12", 1001)?;
            Ok((table(&ctx, &r)?, common.out.clone()))
        }
        Command::Exp { common, grid } => {
            let ctx = Ctx::new(common, "fig1")?;
            let r = range(grid, "-1", "12", 1001)?;
            Ok((exp(&ctx, &r)?, common.out.clone()))
        }
        Command::Osc { common, grid, omega, c1, c2 } => {
            let ctx = Ctx::new(common, "id")?;
            let p = OscillatorParams::new(parse_f64(omega)?, parse_f64(c1)?, parse_f64(c2)?)?;
            Ok((osc(&ctx, grid, &p)?, common.out.clone()))
        }
        Command::Circle { common, radii, rmax, count } => {
            let ctx = Ctx::new(common, "cantor")?;
            Ok((circle(&ctx, *radii, parse_f64(rmax)?, *count)?, common.out.clone()))
        }
        Command::Boost { common, grid, alpha, x0, x1 } => {
            let ctx = Ctx::new(common, "id")?;
            let v = TwoVector { x0: parse_f64(x0)?, x1: parse_f64(x1)? };
            Ok((boost_cmd(&ctx, grid, alpha.as_deref(), v)?, common.out.clone()))
        }
        Command::Spectrum { common, alpha_beta, alpha, beta, n } => {
            let ctx = Ctx::new(common, "id")?;
            let (a, b) = match alpha_beta {
                Some(ab) => (parse_f64(ab)?, 1.0),
                None => (
                    parse_f64(alpha.as_deref().unwrap_or("1"))?,
                    parse_f64(beta.as_deref().unwrap_or("1"))?,
                ),
            };
            Ok((spectrum(&ctx, a, b, *n)?, common.out.clone()))
        }
        Command::Entropy { common, escort } => {
            let ctx = Ctx::new(common, "id")?;
            Ok((entropy_cmd(&ctx, escort)?, common.out.clone()))
        }
        Command::Chsh { common } => {
            let ctx = Ctx::new(common, "id")?;
            Ok((chsh(&ctx)?, common.out.clone()))
        }
        Command::Cantor { op, values, format } => Ok((cantor(*op, values, *format)?, None)),
    }
}

fn table(ctx: &Ctx, r: &Range) -> CliResult<Output> {
    let mut d = ctx.dataset("table", &["x", "f", "finv"]);
    d.meta("grid", format!("{} to {}, {} points, uniform in x", r.from, r.to, r.count));
    if ctx.is_cantor() {
        // exact rationals end to end
        d.meta("path", "exact");
        let n = BigRational::from_integer((r.count as u64 - 1).into());
        let step = (&r.to - &r.from) / n;
        for j in 0..r.count {
            let x = &r.from + &step * BigRational::from_integer((j as u64).into());
            let f = match cantor_forward_rational(&x) {
                Ok(y) => y.to_string(),
                Err(Error::NotInCantorSet(_)) => NOT_IN_SET.to_string(),
                Err(e) => return Err(e.into()),
            };
            let finv = cantor_inverse(&x)?.value().to_string();
            d.push(vec![Cell::Text(x.to_string()), Cell::Text(f), Cell::Text(finv)]);
        }
    } else {
        d.meta("path", "float");
        for x in linspace(to_f64(&r.from)?, to_f64(&r.to)?, r.count) {
            d.push(vec![Cell::Num(x), partial(ctx.g.forward(x))?, partial(ctx.g.inverse(x))?]);
        }
    }
    Ok(Output::Data(d, ctx.format))
}

fn exp(ctx: &Ctx, r: &Range) -> CliResult<Output> {
    let mut d = ctx.dataset("exp", &["x", "exp", "exp_f"]);
    d.meta("grid", format!("{} to {}, {} points, uniform in x", r.from, r.to, r.count));
    for x in linspace(to_f64(&r.from)?, to_f64(&r.to)?, r.count) {
        let e = partial(special(&ctx.g, Special::Exp, x))?;
        d.push(vec![Cell::Num(x), Cell::Num(x.exp()), e]);
    }
    Ok(Output::Data(d, ctx.format))
}

fn osc(ctx: &Ctx, grid: &Grid, p: &OscillatorParams) -> CliResult<Output> {
    let g = &ctx.g;
    let count = grid.count.unwrap_or(1000);
    // one full period on the Y side unless the user picks the range
    let ya = match &grid.from {
        Some(s) => g.forward(parse_f64(s)?)?,
        None => 0.0,
    };
    let yb = match &grid.to {
        Some(s) => g.forward(parse_f64(s)?)?,
        None => 2.0 * PI / g.forward(p.omega)?,
    };
    check_grid(&BigRational::from_float(ya).unwrap(), &BigRational::from_float(yb).unwrap(), count)?;
    let mut d = ctx.dataset("osc", &["t", "x", "v"]);
    d.meta("params", format!("omega={} c1={} c2={}", p.omega, p.c1, p.c2));
    d.meta("grid", format!("f(t) from {ya:?} to {yb:?}, {count} points"));
    d.meta("sampling", "uniform in f(t), mapped through f^-1");
    for t in y_uniform(g, ya, yb, count)? {
        let (x, v) = oscillator_state(g, p, t)?;
        d.push(vec![Cell::Num(t), Cell::Num(x), Cell::Num(v)]);
    }
    Ok(Output::Data(d, ctx.format))
}

fn circle(ctx: &Ctx, radii: usize, rmax: f64, count: usize) -> CliResult<Output> {
    if radii == 0 || !(rmax > 0.0) {
        return Err(CliError::Config(format!("need radii >= 1 and rmax > 0, got {radii}, {rmax}")));
    }
    if count < 2 {
        return Err(CliError::Config(format!("count must be at least 2, got {count}")));
    }
    let g = &ctx.g;
    let mut d = ctx.dataset("circle", &["radius", "alpha", "x", "y"]);
    d.meta("grid", format!("{radii} radii with f(r) = k*{rmax:?}/{radii}; f(alpha) over [0, 2pi], {count} points"));
    d.meta("sampling", "uniform in f(alpha), mapped through f^-1");
    let alphas = y_uniform(g, 0.0, 2.0 * PI, count)?;
    for k in 1..=radii {
        let r = g.inverse(k as f64 * rmax / radii as f64)?;
        for &a in &alphas {
            let (x, y) = rotate(g, (r, 0.0), a)?;
            d.push(vec![Cell::Num(r), Cell::Num(a), Cell::Num(x), Cell::Num(y)]);
        }
    }
    Ok(Output::Data(d, ctx.format))
}

fn boost_cmd(ctx: &Ctx, grid: &Grid, alpha: Option<&str>, v: TwoVector) -> CliResult<Output> {
    let g = &ctx.g;
    let mut d = ctx.dataset("boost", &["alpha", "beta", "x0", "x1"]);
    d.meta("input", format!("x0={:?} x1={:?}", v.x0, v.x1));
    let alphas = match alpha {
        Some(a) => {
            if grid.from.is_some() || grid.to.is_some() || grid.count.is_some() {
                return Err(CliError::Config("--alpha cannot be combined with a grid".into()));
            }
            vec![parse_f64(a)?]
        }
        None => {
            let r = range(grid, "-3", "3", 101)?;
            let (ya, yb) = (g.forward(to_f64(&r.from)?)?, g.forward(to_f64(&r.to)?)?);
            d.meta("grid", format!("{} to {}, {} points", r.from, r.to, r.count));
            d.meta("sampling", "uniform in f(alpha), mapped through f^-1");
            y_uniform(g, ya, yb, r.count)?
        }
    };
    for a in alphas {
        let b = velocity_of_rapidity(g, a)?;
        let w = boost(g, v, a)?;
        d.push(vec![Cell::Num(a), Cell::Num(b), Cell::Num(w.x0), Cell::Num(w.x1)]);
    }
    Ok(Output::Data(d, ctx.format))
}

fn spectrum(ctx: &Ctx, alpha: f64, beta: f64, n: u32) -> CliResult<Output> {
    let g = &ctx.g;
    let mut d = ctx.dataset("spectrum", &["n", "energy"]);
    d.meta("params", format!("alpha={alpha:?} beta={beta:?}"));
    let base = QhoParams::new(alpha, beta, 0)?;
    let norm = match qho_norm(g, &base, 8.0, &ctx.cfg) {
        Ok(v) => format!("{v:?}"),
        Err(e) => format!("undefined ({e})"),
    };
    d.meta("ground_state_norm", format!("{norm} (cutoff 8, tol {:e})", ctx.cfg.quad_tol));
    for k in 0..=n {
        let e = qho_energy(g, &QhoParams { n: k, ..base.clone() })?;
        d.push(vec![Cell::Int(k as i64), Cell::Num(e)]);
    }
    Ok(Output::Data(d, ctx.format))
}

fn entropy_cmd(ctx: &Ctx, escort: &str) -> CliResult<Output> {
    let g = &ctx.g;
    let ps = escort.split(',').map(parse_f64).collect::<CliResult<Vec<f64>>>()?;
    let pv = from_escort(g, &ps)?;
    let shannon: f64 = ps.iter().filter(|&&p| p > 0.0).map(|p| -p * p.ln()).sum();
    let m = ps.len();
    let mut d = ctx.dataset("entropy", &["outcomes", "shannon", "entropy", "max"]);
    d.meta("escort", escort);
    let s = entropy(g, &pv)?;
    let max = special(g, Special::Ln, g.inverse(m as f64)?)?;
    d.push(vec![Cell::Int(m as i64), Cell::Num(shannon), Cell::Num(s), Cell::Num(max)]);
    Ok(Output::Data(d, ctx.format))
}

fn chsh(ctx: &Ctx) -> CliResult<Output> {
    let g = &ctx.g;
    let mut d = ctx.dataset("chsh", &["lhv_max", "bound"]);
    if g.is_exact() {
        d.meta("path", "exact");
        let m: BigRational = lhv_max(g)?;
        let b: BigRational = chsh_bound(g)?;
        d.push(vec![Cell::Text(m.to_string()), Cell::Text(b.to_string())]);
    } else {
        d.meta("path", "float");
        let m: f64 = lhv_max(g)?;
        let b: f64 = chsh_bound(g)?;
        d.push(vec![Cell::Num(m), Cell::Num(b)]);
    }
    Ok(Output::Data(d, ctx.format))
}

fn cantor(op: CantorOp, values: &[String], format: Option<Format>) -> CliResult<Output> {
    let mut results = Vec::with_capacity(values.len());
    for v in values {
        let x = parse_rational(v)?;
        let out = match op {
            CantorOp::Fwd => match cantor_forward_rational(&x) {
                Ok(y) => y.to_string(),
                Err(Error::NotInCantorSet(_)) => NOT_IN_SET.to_string(),
                Err(e) => return Err(e.into()),
            },
            CantorOp::Inv => cantor_inverse(&x)?.value().to_string(),
            CantorOp::Member => cantor_member(&x)?.to_string(),
        };
        results.push((x.to_string(), out));
    }
    Ok(match format {
        None => Output::Lines(results.into_iter().map(|(_, o)| o).collect()),
        Some(f) => {
            let mut d = Dataset::new(&["input", "output"]);
            d.meta("tool", concat!("ndcalc ", env!("CARGO_PKG_VERSION")));
            d.meta("command", format!("cantor {op:?}").to_lowercase());
            for (i, o) in results {
                d.push(vec![Cell::Text(i), Cell::Text(o)]);
            }
            Output::Data(d, f)
        }
    })
}
