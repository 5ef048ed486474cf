//! The hard-core specialization: interactions that are 0 on a family of
//! edges and 1 elsewhere.
//!
//! A hypergraph `ℏ` on the lattice turns the partition function into the
//! independence polynomial — only configurations containing no whole edge
//! contribute, each with weight `z^X`. Contraction and single-edge
//! interpolation mirror the general conditional / interpolated interactions
//! at the level of edge sets, which keeps the recursive evaluation of
//! effective activities purely combinatorial, and degree-based radii give
//! checkable zero-freeness discs for the activities.

use crate::criteria::{CriterionKind, CriterionReport, SiteCheck};
use crate::error::{EvalError, ModelError};
use crate::exact::pairwise_sum;
use crate::model::InteractionModel;
use crate::scalar::{real, Scalar};
use crate::sites::{Site, SiteSet};
use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeSet;

/// A set of non-empty edges over a lattice of `n` sites.
///
/// `annihilated` records that some contraction step swallowed an entire
/// edge (the reduced edge would have been empty). In the weight picture
/// every conditional weight then vanishes, so evaluations on an annihilated
/// hypergraph represent a dead branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: BTreeSet<SiteSet>,
    annihilated: bool,
}

impl Hypergraph {
    pub fn new<I: IntoIterator<Item = SiteSet>>(n: usize, edges: I) -> Result<Self, ModelError> {
        if n > crate::sites::MAX_SITES {
            return Err(ModelError::TooManySites(n));
        }
        let lattice = SiteSet::full(n);
        let mut set = BTreeSet::new();
        for e in edges {
            if e.is_empty() {
                return Err(ModelError::EmptySubset);
            }
            if !e.is_subset_of(lattice) {
                return Err(ModelError::SiteOutOfRange { site: e.max_site().unwrap(), n });
            }
            set.insert(e);
        }
        Ok(Hypergraph { n, edges: set, annihilated: false })
    }

    pub fn site_count(&self) -> usize {
        self.n
    }

    pub fn lattice(&self) -> SiteSet {
        SiteSet::full(self.n)
    }

    /// Edges in ascending canonical order.
    pub fn edges(&self) -> impl Iterator<Item = SiteSet> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, e: SiteSet) -> bool {
        self.edges.contains(&e)
    }

    pub fn is_annihilated(&self) -> bool {
        self.annihilated
    }

    /// `ℏ(x)`: edges through `x`, ascending.
    pub fn incident(&self, site: Site) -> impl Iterator<Item = SiteSet> + '_ {
        self.edges().filter(move |e| e.contains(site))
    }

    pub fn degree(&self, site: Site) -> usize {
        self.incident(site).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|x| self.degree(x)).max().unwrap_or(0)
    }

    /// No edge is completely contained in `config`.
    pub fn is_independent(&self, config: SiteSet) -> bool {
        self.edges.iter().all(|e| !e.is_subset_of(config))
    }

    /// The equivalent interaction model: `W(e) = 0` per edge, everything
    /// else implicit 1.
    pub fn to_interaction<F: Scalar>(
        &self,
        activity: Vec<Complex<F>>,
    ) -> Result<InteractionModel<F>, ModelError> {
        if activity.len() != self.n {
            return Err(ModelError::ActivityLength { got: activity.len(), expected: self.n });
        }
        let mut model = InteractionModel::new(activity)?;
        for e in self.edges() {
            model.set_interaction(e, Complex::zero())?;
        }
        Ok(model)
    }

    /// Contraction by a boundary: `ℏ/B = {e∖B : e ∈ ℏ, e∖B ≠ ∅} ∪ {{y} : y ∈ B}`.
    ///
    /// An edge inside `B` disappears from storage and sets `annihilated`.
    pub fn contract(&self, boundary: SiteSet) -> Hypergraph {
        let mut edges = BTreeSet::new();
        let mut annihilated = self.annihilated;
        for e in self.edges() {
            let reduced = e - boundary;
            if reduced.is_empty() {
                annihilated = true;
            } else {
                edges.insert(reduced);
            }
        }
        edges.extend(boundary.sites().map(SiteSet::singleton));
        Hypergraph { n: self.n, edges, annihilated }
    }

    /// Single-edge interpolation at `root`: keeps `edge`, drops the other
    /// edges through `root`, and re-adds their root-free reductions for the
    /// edges preceding `edge` in canonical order:
    ///
    /// `ℏ_e = {b∖{root} : b ∈ ℏ(root), b ≺ e} ∪ (ℏ ∖ (ℏ(root) ∖ {e}))`.
    ///
    /// If a preceding edge is the bare singleton `{root}` its reduction is
    /// empty; that is recorded via `annihilated` like a contraction would.
    pub fn interpolate_edge(&self, root: Site, edge: SiteSet) -> Result<Hypergraph, EvalError> {
        if !edge.contains(root) || !self.has_edge(edge) {
            return Err(EvalError::EdgeNotIncident { edge, site: root });
        }
        let mut edges = BTreeSet::new();
        let mut annihilated = self.annihilated;
        for e in self.edges() {
            if !e.contains(root) || e == edge {
                edges.insert(e);
            } else if e < edge {
                let reduced = e.remove(root);
                if reduced.is_empty() {
                    annihilated = true;
                } else {
                    edges.insert(reduced);
                }
            }
        }
        Ok(Hypergraph { n: self.n, edges, annihilated })
    }
}

/// `Z(Λ) = Σ_{X ⊆ Λ independent} z^X` by direct enumeration, summed along
/// the same fixed pairwise tree as the generic path.
pub fn independence_polynomial<F: Scalar>(
    h: &Hypergraph,
    activity: &[Complex<F>],
    volume: SiteSet,
) -> Complex<F> {
    assert_eq!(activity.len(), h.site_count(), "one activity per site");
    let evaluator = PolyEvaluator::new(h, volume);
    evaluator.eval(activity)
}

/// Precomputed independence indicator for one volume, reused across
/// activity samples by the polydisc scan.
struct PolyEvaluator {
    /// Volume sites in ascending order; position = compressed bit index.
    sites: Vec<Site>,
    independent: Vec<bool>,
}

impl PolyEvaluator {
    fn new(h: &Hypergraph, volume: SiteSet) -> Self {
        // Only edges inside the volume can be violated by X ⊆ Λ.
        let edges: Vec<SiteSet> = h.edges().filter(|e| e.is_subset_of(volume)).collect();
        let independent = (0u32..1 << volume.len())
            .map(|i| {
                let config = volume.nth_subset(i);
                edges.iter().all(|e| !e.is_subset_of(config))
            })
            .collect();
        PolyEvaluator { sites: volume.sites().collect(), independent }
    }

    fn eval<F: Scalar>(&self, activity: &[Complex<F>]) -> Complex<F> {
        // z^X per compressed index, reusing the value at X minus its top site.
        let count = self.independent.len() as u32;
        let mut zpow: Vec<Complex<F>> = Vec::with_capacity(count as usize);
        zpow.push(Complex::one());
        for i in 1..count {
            let top = 31 - i.leading_zeros();
            let prev = zpow[(i & !(1 << top)) as usize];
            zpow.push(prev * activity[self.sites[top as usize]]);
        }
        pairwise_sum(count, &mut |i| {
            if self.independent[i as usize] {
                zpow[i as usize]
            } else {
                Complex::zero()
            }
        })
    }
}

/// Degree-based activity bound per site: `Δ^d / (Δ+1)^{d+1}` at degree `d`.
pub fn galvin_radius<F: Scalar>(delta: F, degree: usize) -> F {
    delta.powi(degree as i32) / (delta + F::one()).powi(degree as i32 + 1)
}

/// Degree-based activity bound per site for the sharper check:
/// 1 at degree 0, `1/Δ` at degree 1 (both strict), `(Δ−1)^{d−1}/Δ^d` at
/// degree `d ≥ 2` (weak).
pub fn bencs_buys_radius<F: Scalar>(delta: F, degree: usize) -> F {
    match degree {
        0 => F::one(),
        1 => delta.recip(),
        d => (delta - F::one()).powi(d as i32 - 1) / delta.powi(d as i32),
    }
}

/// Per-site check `|z(x)| ≤ Δ^d/(Δ+1)^{d+1}` (weak) plus `d ≤ Δ`, for sites
/// that can be occupied; sites with `{x} ∈ ℏ` pass vacuously.
pub fn galvin_check<F: Scalar>(
    h: &Hypergraph,
    activity: &[Complex<F>],
    delta: F,
) -> CriterionReport<F> {
    assert!(delta >= F::one(), "degree bound must be at least 1");
    per_site_radius_check(h, activity, delta, CriterionKind::Galvin, |d, z_norm| {
        (galvin_radius(delta, d), z_norm <= galvin_radius(delta, d))
    })
}

/// Per-site check with the sharper radii (strict below degree 2, weak
/// above) plus `d ≤ Δ`; sites with `{x} ∈ ℏ` pass vacuously.
pub fn bencs_buys_check<F: Scalar>(
    h: &Hypergraph,
    activity: &[Complex<F>],
    delta: F,
) -> CriterionReport<F> {
    assert!(delta >= F::one() + F::one(), "degree bound must be at least 2");
    per_site_radius_check(h, activity, delta, CriterionKind::BencsBuys, |d, z_norm| {
        let rhs = bencs_buys_radius(delta, d);
        let ok = if d <= 1 { z_norm < rhs } else { z_norm <= rhs };
        (rhs, ok)
    })
}

fn per_site_radius_check<F: Scalar>(
    h: &Hypergraph,
    activity: &[Complex<F>],
    delta: F,
    kind: CriterionKind,
    verdict: impl Fn(usize, F) -> (F, bool),
) -> CriterionReport<F> {
    assert_eq!(activity.len(), h.site_count(), "one activity per site");
    let per_site = (0..h.site_count())
        .map(|x| {
            let d = h.degree(x);
            let lhs = activity[x].norm();
            let (rhs, bound_ok) = verdict(d, lhs);
            let satisfied = if h.has_edge(SiteSet::singleton(x)) {
                true
            } else {
                bound_ok && real::<F>(d as f64) <= delta
            };
            SiteCheck { site: x, lhs, rhs, satisfied }
        })
        .collect();
    CriterionReport::from_checks(kind, per_site)
}

/// One recorded subcall of the hard-core recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardCoreTraceEntry<F: Scalar> {
    pub root: Site,
    pub volume: SiteSet,
    /// All edges through the root have their reduced part inside the volume.
    pub all_incident_inside: bool,
    pub value: Complex<F>,
}

/// Recursive `ẑ(x, Λ)` for the hard-core model:
///
/// ```text
/// ẑ(x, Λ) = z(x) · [{x} ∉ ℏ] · ∏_{e ∈ ℏ(x), e∖{x} ⊆ Λ}
///              ( 1 − ∏_{x' ∈ e∖{x}} ẑ_e(x', Λ∖{x'} | pred)/(1 + ẑ_e(..)) ),
/// ```
///
/// with subcalls evaluated on `interpolate_edge` followed by `contract` by
/// the preceding sites. An annihilated hypergraph returns 0 outright (its
/// conditional weights all vanish).
pub fn hard_core_recursive_zhat<F: Scalar>(
    h: &Hypergraph,
    activity: &[Complex<F>],
    root: Site,
    volume: SiteSet,
) -> Result<Complex<F>, EvalError> {
    let mut trace = Vec::new();
    hard_core_recursive_zhat_traced(h, activity, root, volume, &mut trace)
}

/// As [`hard_core_recursive_zhat`], recording every subcall (top level
/// pushed last).
pub fn hard_core_recursive_zhat_traced<F: Scalar>(
    h: &Hypergraph,
    activity: &[Complex<F>],
    root: Site,
    volume: SiteSet,
    trace: &mut Vec<HardCoreTraceEntry<F>>,
) -> Result<Complex<F>, EvalError> {
    assert_eq!(activity.len(), h.site_count(), "one activity per site");
    if volume.contains(root) {
        return Err(EvalError::SiteInVolume(root));
    }
    recurse(h, activity, root, volume, volume.len() + 2, trace)
}

fn recurse<F: Scalar>(
    h: &Hypergraph,
    activity: &[Complex<F>],
    root: Site,
    volume: SiteSet,
    depth: usize,
    trace: &mut Vec<HardCoreTraceEntry<F>>,
) -> Result<Complex<F>, EvalError> {
    if depth == 0 {
        return Err(EvalError::DepthGuardExceeded);
    }
    let root_single = SiteSet::singleton(root);
    let all_incident_inside = h
        .incident(root)
        .all(|e| (e - root_single).is_subset_of(volume));

    let value = if h.is_annihilated() || h.has_edge(root_single) || activity[root].is_zero() {
        Complex::zero()
    } else {
        let mut factors: Vec<Result<Complex<F>, EvalError>> = Vec::new();
        for edge in h.incident(root) {
            let rest = edge - root_single;
            if !rest.is_subset_of(volume) {
                continue;
            }
            factors.push(edge_factor(h, activity, root, edge, rest, volume, depth, trace));
        }
        if factors.iter().any(|f| matches!(f, Ok(v) if v.is_zero())) {
            Complex::zero()
        } else {
            let mut out = activity[root];
            for f in factors {
                out = out * f?;
            }
            out
        }
    };
    trace.push(HardCoreTraceEntry { root, volume, all_incident_inside, value });
    Ok(value)
}

#[allow(clippy::too_many_arguments)]
fn edge_factor<F: Scalar>(
    h: &Hypergraph,
    activity: &[Complex<F>],
    root: Site,
    edge: SiteSet,
    rest: SiteSet,
    volume: SiteSet,
    depth: usize,
    trace: &mut Vec<HardCoreTraceEntry<F>>,
) -> Result<Complex<F>, EvalError> {
    let interpolated = h.interpolate_edge(root, edge)?;
    let mut inner = Complex::<F>::one();
    for x_prime in rest.sites() {
        let pred = rest.sites_below(x_prime);
        let sub = interpolated.contract(pred);
        let zhat = recurse(&sub, activity, x_prime, volume.remove(x_prime), depth - 1, trace)?;
        let denom = Complex::<F>::one() + zhat;
        if denom.is_zero() {
            return Err(EvalError::VanishingDenominator(format!(
                "1 + ẑ = 0 at site {x_prime}, edge {edge:?}, volume {volume:?}"
            )));
        }
        inner = inner * (zhat / denom);
    }
    Ok(Complex::<F>::one() - inner)
}

/// Which radius family a polydisc scan samples from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanRule {
    Galvin,
    BencsBuys,
}

impl ScanRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanRule::Galvin => "galvin",
            ScanRule::BencsBuys => "bencs-buys",
        }
    }
}

/// Shrink applied where a radius bound is strict, so sampled points stay
/// inside the open region.
pub const STRICT_SHRINK: f64 = 0.999;

/// Additive slack on the scan's theorem-backed lower bound for `min |Z|`.
pub const SCAN_BOUND_SLACK: f64 = 1e-9;

/// The per-site sampling radius for a rule (strict bounds pre-shrunk).
pub fn scan_radius<F: Scalar>(h: &Hypergraph, rule: ScanRule, delta: F, site: Site) -> F {
    let d = h.degree(site);
    match rule {
        ScanRule::Galvin => galvin_radius(delta, d),
        ScanRule::BencsBuys => {
            let r = bencs_buys_radius(delta, d);
            if d <= 1 {
                r * real::<F>(STRICT_SHRINK)
            } else {
                r
            }
        }
    }
}

/// Outcome of a polydisc scan over the full lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport<F: Scalar> {
    pub rule: ScanRule,
    pub delta: F,
    pub samples: usize,
    pub seed: u64,
    pub min_abs_z: F,
    /// Activity vector realizing the minimum.
    pub argmin_activity: Vec<Complex<F>>,
    /// Sample index realizing the minimum.
    pub argmin_sample: usize,
    /// Theorem-backed lower bound on `min |Z|` (0 for the sharper radii,
    /// `(Δ/(Δ+1))^n − slack` for the degree-Δ radii).
    pub lower_bound: F,
    pub ok: bool,
}

/// Samples activities uniformly in the per-site closed discs and tracks the
/// minimum of `|Z(full lattice)|`.
///
/// Deterministic for fixed `(seed, samples)`: each sample draws from its own
/// RNG stream derived from the seed and the sample index, and ties in the
/// minimum resolve to the smaller index. Requires every degree ≤ Δ.
pub fn polydisc_scan<F: Scalar>(
    h: &Hypergraph,
    rule: ScanRule,
    delta: F,
    samples: usize,
    seed: u64,
) -> Result<ScanReport<F>, EvalError> {
    let min_delta = match rule {
        ScanRule::Galvin => F::one(),
        ScanRule::BencsBuys => F::one() + F::one(),
    };
    if delta < min_delta {
        return Err(EvalError::InvalidParameter(format!(
            "rule {} needs Delta >= {min_delta}, got {delta}",
            rule.as_str()
        )));
    }
    if samples == 0 {
        return Err(EvalError::InvalidParameter("samples must be positive".into()));
    }
    for x in 0..h.site_count() {
        let d = h.degree(x);
        if real::<F>(d as f64) > delta {
            return Err(EvalError::DegreeExceeded {
                site: x,
                degree: d,
                max: delta.to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    let n = h.site_count();
    let volume = h.lattice();
    let radii: Vec<F> = (0..n).map(|x| scan_radius(h, rule, delta, x)).collect();
    let evaluator = PolyEvaluator::new(h, volume);

    let (min_abs, argmin_sample) = (0..samples)
        .into_par_iter()
        .map(|i| {
            let z = sample_activities::<F>(&radii, seed, i);
            (evaluator.eval(&z).norm(), i)
        })
        .reduce(
            || (F::infinity(), usize::MAX),
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let lower_bound = match rule {
        ScanRule::Galvin => {
            (delta / (delta + F::one())).powi(n as i32) - real::<F>(SCAN_BOUND_SLACK)
        }
        ScanRule::BencsBuys => F::zero(),
    };
    let ok = match rule {
        ScanRule::Galvin => min_abs >= lower_bound,
        ScanRule::BencsBuys => min_abs > lower_bound,
    };
    Ok(ScanReport {
        rule,
        delta,
        samples,
        seed,
        min_abs_z: min_abs,
        argmin_activity: sample_activities::<F>(&radii, seed, argmin_sample),
        argmin_sample,
        lower_bound,
        ok,
    })
}

/// The activity vector of one scan sample: uniform draws on the closed
/// per-site discs from the stream `(seed, index)`.
fn sample_activities<F: Scalar>(radii: &[F], seed: u64, index: usize) -> Vec<Complex<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    radii
        .iter()
        .map(|&radius| {
            let u: f64 = rng.gen();
            let theta: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            let r = radius * real::<F>(u.sqrt());
            Complex::new(r * real::<F>(theta.cos()), r * real::<F>(theta.sin()))
        })
        .collect()
}
