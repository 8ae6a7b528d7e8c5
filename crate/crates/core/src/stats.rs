//! f-probabilities, Kolmogorov-Nagumo averages, f-entropy and the CHSH bound.

use crate::arithmetic::{Generator, Scalar};
use crate::error::{Error, Result};
use crate::functions::{special, Special};

/// Tolerance on `sum f(p_k) = 1` for the float path.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// X-side probabilities whose Y-side images (escort probabilities) sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FProbVector<S = f64> {
    p: Vec<S>,
}

fn check_normalized<S: Scalar>(escort: &[S]) -> Result<()> {
    if escort.is_empty() {
        return Err(Error::Normalization("empty probability vector".into()));
    }
    if let Some(bad) = escort.iter().find(|e| !(**e >= S::zero())) {
        return Err(Error::Normalization(format!("negative escort probability {bad:?}")));
    }
    let total = escort.iter().cloned().fold(S::zero(), |a, b| a + b);
    let ok = if S::EXACT {
        total.is_one()
    } else {
        (total.approx() - 1.0).abs() <= NORMALIZATION_TOL
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Normalization(format!("escort probabilities sum to {total:?}")))
    }
}

impl<S: Scalar> FProbVector<S> {
    /// Validates X-side probabilities by their images.
    pub fn new(g: &Generator, p: Vec<S>) -> Result<Self> {
        let escort = p.iter().map(|pk| g.to_y(pk)).collect::<Result<Vec<S>>>()?;
        check_normalized(&escort)?;
        Ok(FProbVector { p })
    }

    pub fn p(&self) -> &[S] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// `p_k = f^-1(P_k)`.
pub fn from_escort<S: Scalar>(g: &Generator, escort: &[S]) -> Result<FProbVector<S>> {
    check_normalized(escort)?;
    let p = escort.iter().map(|e| g.from_y(e)).collect::<Result<Vec<S>>>()?;
    Ok(FProbVector { p })
}

/// `P_k = f(p_k)`.
pub fn to_escort<S: Scalar>(g: &Generator, pv: &FProbVector<S>) -> Result<Vec<S>> {
    pv.p.iter().map(|pk| g.to_y(pk)).collect()
}

/// `<a>_f = (+)_k p_k (*) a_k = f^-1(sum_k P_k f(a_k))`.
pub fn kn_average<S: Scalar>(g: &Generator, pv: &FProbVector<S>, a: &[S]) -> Result<S> {
    g.from_y(&kn_average_y(g, pv, a)?)
}

fn kn_average_y<S: Scalar>(g: &Generator, pv: &FProbVector<S>, a: &[S]) -> Result<S> {
    if a.len() != pv.len() {
        return Err(Error::Parameter(format!(
            "{} values for {} probabilities",
            a.len(),
            pv.len()
        )));
    }
    let mut acc = S::zero();
    for (pk, ak) in pv.p.iter().zip(a) {
        let term = g.check_y(g.to_y(pk)? * g.to_y(ak)?)?;
        acc = g.check_y(acc + term)?;
    }
    Ok(acc)
}

/// `S_f = (+)_k p_k (*) ln_f(1 (/) p_k)`, evaluated operation by operation. The
/// chain reduces to `f^-1(-sum_k P_k ln P_k)`.
pub fn entropy(g: &Generator, pv: &FProbVector) -> Result<f64> {
    let one: f64 = g.one()?;
    let mut acc: f64 = g.zero()?;
    for &pk in &pv.p {
        if !(g.forward(pk)? > 0.0) {
            return Err(Error::domain(format_args!("entropy needs positive probabilities, got {pk}")));
        }
        let r = g.div(one, pk)?;
        let term = g.mul(pk, special(g, Special::Ln, r)?)?;
        acc = g.add(acc, term)?;
    }
    Ok(acc)
}

/// Outcome pairs `(a, b)` in table order.
pub const OUTCOMES: [(i8, i8); 4] = [(-1, -1), (-1, 1), (1, -1), (1, 1)];

/// Joint outcome distributions for the setting pairs `(A,B)`, `(A,B')`,
/// `(A',B)`, `(A',B')`, each over [`OUTCOMES`].
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSettings<S = f64> {
    pub tables: [FProbVector<S>; 4],
}

/// A deterministic local strategy: outcomes for `A, A', B, B'`.
pub type Strategy = [i8; 4];

/// All 16 deterministic strategies.
pub fn strategies() -> Vec<Strategy> {
    let pm = |bit: usize, i: usize| if i >> bit & 1 == 1 { 1 } else { -1 };
    (0..16).map(|i| [pm(3, i), pm(2, i), pm(1, i), pm(0, i)]).collect()
}

impl<S: Scalar> CorrelationSettings<S> {
    /// Tables induced by a local hidden-variable model: `weights[j]` is the
    /// escort probability of `strategies()[j]`.
    pub fn from_local_model(g: &Generator, weights: &[S]) -> Result<Self> {
        if weights.len() != 16 {
            return Err(Error::Parameter(format!("expected 16 weights, got {}", weights.len())));
        }
        check_normalized(weights)?;
        let strats = strategies();
        let pairs = [(0, 2), (0, 3), (1, 2), (1, 3)];
        let mut tables = Vec::with_capacity(4);
        for (ia, ib) in pairs {
            let mut escort = vec![S::zero(); 4];
            for (w, s) in weights.iter().zip(&strats) {
                let k = OUTCOMES.iter().position(|&o| o == (s[ia], s[ib])).expect("outcomes are +-1");
                escort[k] = escort[k].clone() + w.clone();
            }
            tables.push(escort);
        }
        Self::from_escort_tables(g, tables)
    }

    /// Point-mass model for one deterministic strategy.
    pub fn deterministic(g: &Generator, s: Strategy) -> Result<Self> {
        let j = strategies().iter().position(|t| *t == s).ok_or_else(|| {
            Error::Parameter(format!("outcomes must be +-1, got {s:?}"))
        })?;
        let mut w = vec![S::zero(); 16];
        w[j] = S::one();
        Self::from_local_model(g, &w)
    }

    fn from_escort_tables(g: &Generator, tables: Vec<Vec<S>>) -> Result<Self> {
        let pvs = tables.iter().map(|t| from_escort(g, t)).collect::<Result<Vec<_>>>()?;
        let tables: [FProbVector<S>; 4] = pvs.try_into().expect("four tables");
        Ok(CorrelationSettings { tables })
    }
}

/// `<AB>_f`: KN average of the outcome products `a (*) b`.
pub fn correlator<S: Scalar>(g: &Generator, table: &FProbVector<S>) -> Result<S> {
    g.from_y(&correlator_y(g, table)?)
}

fn correlator_y<S: Scalar>(g: &Generator, table: &FProbVector<S>) -> Result<S> {
    let products = OUTCOMES
        .iter()
        .map(|&(a, b)| {
            let (a, b) = (S::from_i8(a).unwrap(), S::from_i8(b).unwrap());
            g.mul(a, b)
        })
        .collect::<Result<Vec<S>>>()?;
    kn_average_y(g, table, &products)
}

/// `|<AB>_f (+) <AB'>_f (+) <A'B>_f (-) <A'B'>_f|`, with the X-side absolute
/// value `max(v, (-)v)`.
pub fn chsh_combination<S: Scalar>(g: &Generator, s: &CorrelationSettings<S>) -> Result<S> {
    let e = s.tables.iter().map(|t| correlator_y(g, t)).collect::<Result<Vec<S>>>()?;
    let mut acc = g.check_y(e[0].clone() + e[1].clone())?;
    acc = g.check_y(acc + e[2].clone())?;
    acc = g.check_y(acc - e[3].clone())?;
    g.abs(g.from_y(&acc)?)
}

/// `f^-1(2)`.
pub fn chsh_bound<S: Scalar>(g: &Generator) -> Result<S> {
    g.from_y(&S::from_u8(2).unwrap())
}

/// Largest CHSH combination over the 16 deterministic local strategies.
pub fn lhv_max<S: Scalar>(g: &Generator) -> Result<S> {
    let mut best: Option<S> = None;
    for s in strategies() {
        let v = chsh_combination(g, &CorrelationSettings::deterministic(g, s)?)?;
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    Ok(best.expect("16 strategies"))
}
