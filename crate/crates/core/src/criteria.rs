//! Per-site zero-freeness criteria.
//!
//! All checks share one report shape: a non-negative left-hand side compared
//! against a non-negative right-hand side per site, with weak inequality as
//! the satisfaction convention (so `r(x) = 0` passes exactly when the site's
//! dressed activity vanishes).
//!
//! The central quantity is the bond factor
//!
//! ```text
//! m(X) = max{ |W(X)|,  1 + |W(X) − 1| α^S  over ∅ ≠ S ⊆ X∖{x} },
//! ```
//!
//! whose product over all bonds through `x`, weighted by `|z(x)|`, must stay
//! below `r(x)` for the Dobrushin-style criterion.

use crate::error::EvalError;
use crate::model::{CriterionParams, InteractionModel};
use crate::scalar::Scalar;
use crate::sites::{Site, SiteSet};
use num_complex::Complex;
use num_traits::One;

/// Which criterion produced a report; string forms match the CLI names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionKind {
    Dobrushin,
    KpLike,
    KpAuto,
    GmsImproved,
    Galvin,
    BencsBuys,
}

impl CriterionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CriterionKind::Dobrushin => "dobrushin",
            CriterionKind::KpLike => "kp",
            CriterionKind::KpAuto => "kp-auto",
            CriterionKind::GmsImproved => "gms",
            CriterionKind::Galvin => "galvin",
            CriterionKind::BencsBuys => "bencs-buys",
        }
    }
}

/// One site's verdict: `lhs ≤ rhs` (or a strict variant for some hypergraph
/// checks) together with the outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteCheck<F> {
    pub site: Site,
    pub lhs: F,
    pub rhs: F,
    pub satisfied: bool,
}

/// Per-site checks plus the conjunction.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport<F> {
    pub criterion: CriterionKind,
    pub per_site: Vec<SiteCheck<F>>,
    pub overall: bool,
}

impl<F> CriterionReport<F> {
    pub fn from_checks(criterion: CriterionKind, per_site: Vec<SiteCheck<F>>) -> Self {
        let overall = per_site.iter().all(|c| c.satisfied);
        CriterionReport { criterion, per_site, overall }
    }
}

/// The bond factor `m(X)` for a bond `X ∋ root`.
///
/// The inner maximum enumerates all non-empty `S ⊆ X∖{root}` exhaustively;
/// with `α(x) < 1` the product `α^S` is not monotone in `S`, so no shortcut
/// is taken. For the singleton bond the factor degenerates to `|W({root})|`.
pub fn bond_factor<F: Scalar>(
    model: &InteractionModel<F>,
    params: &CriterionParams<F>,
    bond: SiteSet,
    root: Site,
) -> F {
    debug_assert!(bond.contains(root));
    let w = model.w(bond);
    let dev = (w - Complex::one()).norm();
    let mut best = w.norm();
    for s in (bond.remove(root)).subsets().skip(1) {
        best = best.max(F::one() + dev * params.alpha_pow(s));
    }
    best
}

/// `|z(x)| · ∏_{X ∋ x} m(X)` — the Dobrushin-style left-hand side.
///
/// Only stored bonds contribute; implicit unit bonds have factor 1, and an
/// unstored singleton contributes `|W({x})| = 1` as well.
pub fn dobrushin_lhs<F: Scalar>(
    model: &InteractionModel<F>,
    params: &CriterionParams<F>,
    site: Site,
) -> F {
    let mut lhs = model.activity(site).norm();
    for (bond, _) in model.entries_containing(site) {
        lhs = lhs * bond_factor(model, params, bond, site);
    }
    lhs
}

/// Checks `dobrushin_lhs(x) ≤ r(x)` on every site.
pub fn dobrushin_check<F: Scalar>(
    model: &InteractionModel<F>,
    params: &CriterionParams<F>,
) -> CriterionReport<F> {
    assert_eq!(params.len(), model.site_count(), "params must cover every site");
    let per_site = (0..model.site_count())
        .map(|x| {
            let lhs = dobrushin_lhs(model, params, x);
            let rhs = params.r(x);
            SiteCheck { site: x, lhs, rhs, satisfied: lhs <= rhs }
        })
        .collect();
    CriterionReport::from_checks(CriterionKind::Dobrushin, per_site)
}

/// The Kotecký–Preiss-like left-hand side
/// `|z(x) W({x})| · ∏_{X ⊋ {x}} max{|W(X)|, 1} · exp(α(x) + Σ_{X ⊋ {x}} |W(X)−1| max_S α^S)`.
pub fn kp_like_lhs<F: Scalar>(
    model: &InteractionModel<F>,
    params: &CriterionParams<F>,
    site: Site,
) -> F {
    let single = SiteSet::singleton(site);
    let mut product = (model.activity(site) * model.w(single)).norm();
    let mut exponent = params.alpha(site);
    for (bond, w) in model.entries_containing(site) {
        if bond == single {
            continue;
        }
        product = product * w.norm().max(F::one());
        let dev = (w - Complex::one()).norm();
        let mut best_pow = F::zero();
        for s in (bond.remove(site)).subsets().skip(1) {
            best_pow = best_pow.max(params.alpha_pow(s));
        }
        exponent = exponent + dev * best_pow;
    }
    product * exponent.exp()
}

/// Checks `kp_like_lhs(x) ≤ α(x)` on every site.
pub fn kp_like_check<F: Scalar>(
    model: &InteractionModel<F>,
    params: &CriterionParams<F>,
) -> CriterionReport<F> {
    assert_eq!(params.len(), model.site_count(), "params must cover every site");
    let per_site = (0..model.site_count())
        .map(|x| {
            let lhs = kp_like_lhs(model, params, x);
            let rhs = params.alpha(x);
            SiteCheck { site: x, lhs, rhs, satisfied: lhs <= rhs }
        })
        .collect();
    CriterionReport::from_checks(CriterionKind::KpLike, per_site)
}

/// Result of the weight-free criterion: the report, the interaction norm
/// `C̄_W`, and the constant weights `α ≡ 1/C̄_W` it certifies on success.
#[derive(Debug, Clone, PartialEq)]
pub struct KpAutoOutcome<F: Scalar> {
    pub report: CriterionReport<F>,
    pub c_bar: F,
    pub params: CriterionParams<F>,
}

/// `C_W(x) = 1 + Σ_{X ⊋ {x}} |W(X) − 1|`.
pub fn interaction_norm_at<F: Scalar>(model: &InteractionModel<F>, site: Site) -> F {
    let single = SiteSet::singleton(site);
    let mut c = F::one();
    for (bond, w) in model.entries_containing(site) {
        if bond != single {
            c = c + (w - Complex::one()).norm();
        }
    }
    c
}

/// Weight-free variant: per site
/// `|z(x) W({x})| · ∏_{X ⊋ {x}} max{|W(X)|, 1} ≤ 1 / (C̄_W e)`
/// with `C̄_W = max_x C_W(x)`. The derived params (`α ≡ 1/C̄_W`) are always
/// returned; downstream implications only hold when `report.overall`.
pub fn kp_auto<F: Scalar>(model: &InteractionModel<F>) -> KpAutoOutcome<F> {
    let n = model.site_count();
    let c_bar = (0..n)
        .map(|x| interaction_norm_at(model, x))
        .fold(F::one(), F::max);
    let rhs = (c_bar * F::one().exp()).recip();
    let per_site = (0..n)
        .map(|x| {
            let single = SiteSet::singleton(x);
            let mut lhs = (model.activity(x) * model.w(single)).norm();
            for (bond, w) in model.entries_containing(x) {
                if bond != single {
                    lhs = lhs * w.norm().max(F::one());
                }
            }
            SiteCheck { site: x, lhs, rhs, satisfied: lhs <= rhs }
        })
        .collect();
    let report = CriterionReport::from_checks(CriterionKind::KpAuto, per_site);
    let params = CriterionParams::constant_alpha(n, c_bar.recip())
        .expect("1/C̄_W is a valid weight");
    KpAutoOutcome { report, c_bar, params }
}

/// `D_V(x) = Σ_{X ⊋ {x}} |V(X)|`; requires a potential table.
pub fn potential_norm_at<F: Scalar>(
    model: &InteractionModel<F>,
    site: Site,
) -> Result<F, EvalError> {
    let pot = model.potential().ok_or(EvalError::MissingPotential)?;
    let single = SiteSet::singleton(site);
    let mut d = F::zero();
    for (&subset, &v) in pot {
        if subset.contains(site) && subset != single {
            d = d + v.norm();
        }
    }
    Ok(d)
}

/// Potential-based improved check: `2 |z(x) W({x})| exp(D_V(x)) ≤ 1`.
///
/// `W({x})` is recomputed from the potential (`exp(-V({x}))`, defaulting to
/// 1 when no singleton potential is listed), which is also the stored value
/// up to the ingestion consistency tolerance.
pub fn gms_improved_site<F: Scalar>(
    model: &InteractionModel<F>,
    site: Site,
) -> Result<SiteCheck<F>, EvalError> {
    let pot = model.potential().ok_or(EvalError::MissingPotential)?;
    let single = SiteSet::singleton(site);
    let w_single = pot
        .get(&single)
        .map(|&v| (-v).exp())
        .unwrap_or_else(Complex::one);
    let d = potential_norm_at(model, site)?;
    let two = F::one() + F::one();
    let lhs = two * (model.activity(site) * w_single).norm() * d.exp();
    Ok(SiteCheck { site, lhs, rhs: F::one(), satisfied: lhs <= F::one() })
}

/// [`gms_improved_site`] over the whole lattice.
pub fn gms_improved_check<F: Scalar>(
    model: &InteractionModel<F>,
) -> Result<CriterionReport<F>, EvalError> {
    let per_site = (0..model.site_count())
        .map(|x| gms_improved_site(model, x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CriterionReport::from_checks(CriterionKind::GmsImproved, per_site))
}
