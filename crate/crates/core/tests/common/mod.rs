#![allow(dead_code)]
//! Shared generators and brute-force oracles for the integration suites.
//!
//! The oracles deliberately follow the defining formulas term by term —
//! exponential enumerations with no sparsity shortcuts — so that agreement
//! with the library is evidence, not circularity.

use latgas::hypergraph::Hypergraph;
use latgas::sites::{Site, SiteSet};
use latgas::{C64, Model64, Params64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn set(sites: &[usize]) -> SiteSet {
    SiteSet::from_sites(sites.iter().copied())
}

/// `|a − b| ≤ tol · (1 + |a| + |b|)`.
pub fn close_c(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm() + b.norm())
}

pub fn close_f(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs() + b.abs())
}

/// `lhs ≤ rhs` up to a relative slack.
pub fn leq_slack(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs <= rhs + tol * (1.0 + lhs.abs() + rhs.abs())
}

/// Uniform draw from the closed complex disc of radius `r`.
pub fn random_in_disc(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    let radius = r * rng.gen::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.gen::<f64>();
    C64::from_polar(radius, theta)
}

/// Uniform non-empty subset of `{0, …, n−1}` with exactly `size` sites.
pub fn random_subset_of_size(rng: &mut ChaCha8Rng, n: usize, size: usize) -> SiteSet {
    assert!(size >= 1 && size <= n);
    let mut out = SiteSet::EMPTY;
    while out.len() < size {
        out = out.insert(rng.gen_range(0..n));
    }
    out
}

/// Adds `entries` distinct non-unit interaction entries on subsets of size
/// 1–4. Roughly one entry in seven is a hard-core zero.
pub fn place_random_interactions(rng: &mut ChaCha8Rng, model: &mut Model64, entries: usize) {
    let n = model.site_count();
    let mut used = std::collections::BTreeSet::new();
    let mut placed = 0;
    while placed < entries {
        let size = rng.gen_range(1..=4.min(n));
        let subset = random_subset_of_size(rng, n, size);
        if !used.insert(subset) {
            continue;
        }
        let w = if rng.gen::<f64>() < 0.15 {
            C64::new(0.0, 0.0)
        } else {
            let w = C64::new(1.0, 0.0) + random_in_disc(rng, 1.5);
            if w == C64::new(1.0, 0.0) {
                C64::new(1.5, 0.0)
            } else {
                w
            }
        };
        model.set_interaction(subset, w).unwrap();
        placed += 1;
    }
}

/// Random model: `entries` interaction entries as in
/// [`place_random_interactions`], activities in the disc of radius `z_max`.
pub fn random_model(rng: &mut ChaCha8Rng, n: usize, entries: usize, z_max: f64) -> Model64 {
    let activity = (0..n).map(|_| random_in_disc(rng, z_max)).collect();
    let mut model = Model64::new(activity).unwrap();
    place_random_interactions(rng, &mut model, entries);
    model
}

/// Random model whose activity at site `x` is drawn from the disc of radius
/// `radii[x]`.
pub fn random_model_in_radii(rng: &mut ChaCha8Rng, radii: &[f64], entries: usize) -> Model64 {
    let activity = radii.iter().map(|&r| random_in_disc(rng, r)).collect();
    let mut model = Model64::new(activity).unwrap();
    place_random_interactions(rng, &mut model, entries);
    model
}

/// Random weights `r(x)` uniform in `(lo, hi)` per site.
pub fn random_r(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Params64 {
    Params64::from_r((0..n).map(|_| rng.gen_range(lo..hi)).collect()).unwrap()
}

/// Same interactions, all activities multiplied by `t`.
pub fn with_scaled_activities(m: &Model64, t: f64) -> Model64 {
    let activity = m.activities().iter().map(|&z| z * t).collect();
    let mut out = Model64::new(activity).unwrap();
    for (subset, w) in m.w_entries() {
        out.set_interaction(subset, w).unwrap();
    }
    out
}

/// Random model plus weights, with the activities scaled down until the
/// per-site criterion check verifies. The scaling always terminates because
/// each left-hand side is linear in `|z(x)|` while the right-hand side is a
/// fixed positive weight.
pub fn criterion_satisfying_model(
    rng: &mut ChaCha8Rng,
    n: usize,
    entries: usize,
) -> (Model64, Params64) {
    let params = random_r(rng, n, 0.01, 0.6);
    let mut model = random_model(rng, n, entries, 1.0);
    for _ in 0..80 {
        if latgas::criteria::dobrushin_check(&model, &params).overall {
            return (model, params);
        }
        model = with_scaled_activities(&model, 0.6);
    }
    panic!("activity scaling failed to reach the criterion region");
}

/// Random potential-based model: `entries` distinct potential subsets
/// (singletons included) with `|V| ≤ v_max`, activities in the `z_max` disc.
pub fn random_potential_model(
    rng: &mut ChaCha8Rng,
    n: usize,
    entries: usize,
    z_max: f64,
    v_max: f64,
) -> Model64 {
    let activity = (0..n).map(|_| random_in_disc(rng, z_max)).collect();
    let mut model = Model64::new(activity).unwrap();
    let mut used = std::collections::BTreeSet::new();
    let mut placed = 0;
    while placed < entries {
        let size = rng.gen_range(1..=3.min(n));
        let subset = random_subset_of_size(rng, n, size);
        if !used.insert(subset) {
            continue;
        }
        let v = random_in_disc(rng, v_max);
        model.set_potential(subset, v).unwrap();
        placed += 1;
    }
    model
}

/// Random hypergraph on `n` sites with every degree at most `delta`,
/// grown by rejection over `tries` candidate edges of size 2–4.
pub fn random_bounded_degree_hypergraph(
    rng: &mut ChaCha8Rng,
    n: usize,
    delta: usize,
    tries: usize,
) -> Hypergraph {
    let mut edges: Vec<SiteSet> = Vec::new();
    let mut degree = vec![0usize; n];
    for _ in 0..tries {
        let size = rng.gen_range(2..=4.min(n));
        let e = random_subset_of_size(rng, n, size);
        if edges.contains(&e) {
            continue;
        }
        if e.sites().all(|s| degree[s] < delta) {
            for s in e.sites() {
                degree[s] += 1;
            }
            edges.push(e);
        }
    }
    Hypergraph::new(n, edges).unwrap()
}

/// Uniform index below `len`.
pub fn random_index(rng: &mut ChaCha8Rng, len: usize) -> usize {
    rng.gen_range(0..len)
}

/// Fair coin.
pub fn random_flag(rng: &mut ChaCha8Rng) -> bool {
    rng.gen::<bool>()
}

/// Uniform draw from `[0, 1)`.
pub fn random_unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen::<f64>()
}

/// Uniform random member of a non-empty site set.
pub fn random_site(rng: &mut ChaCha8Rng, pool: SiteSet) -> Site {
    let idx = rng.gen_range(0..pool.len());
    pool.sites().nth(idx).unwrap()
}

/// Uniform random subset of `pool` (each member kept with probability 1/2).
pub fn random_subset_of(rng: &mut ChaCha8Rng, pool: SiteSet) -> SiteSet {
    let mut out = SiteSet::EMPTY;
    for s in pool.sites() {
        if rng.gen::<bool>() {
            out = out.insert(s);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Brute-force oracles.
// ---------------------------------------------------------------------------

/// Literal conditional interaction: the full `2^{|B|}`-term product over
/// boundary subsets, with the two degenerate overlap cases spelled out.
pub fn naive_w_conditional(m: &Model64, subset: SiteSet, boundary: SiteSet) -> C64 {
    if !subset.is_disjoint(boundary) {
        return if subset.len() == 1 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
    }
    let mut out = C64::new(1.0, 0.0);
    for cover in boundary.subsets() {
        out *= m.w(subset | cover);
    }
    out
}

/// Literal conditional Boltzmann factor: the product of
/// [`naive_w_conditional`] over every non-empty subset of `subset`.
pub fn naive_kappa_conditional(m: &Model64, subset: SiteSet, boundary: SiteSet) -> C64 {
    let mut out = C64::new(1.0, 0.0);
    for s in subset.subsets().skip(1) {
        out *= naive_w_conditional(m, s, boundary);
    }
    out
}

/// Literal partition function: plain sequential sum in ascending subset
/// order (no pairwise tree, no term skipping).
pub fn naive_partition(m: &Model64, pinned: SiteSet, volume: SiteSet, boundary: SiteSet) -> C64 {
    let free = volume - pinned;
    let mut out = C64::new(0.0, 0.0);
    for y in free.subsets() {
        let config = pinned | y;
        out += m.monomial(config) * naive_kappa_conditional(m, config, boundary);
    }
    out
}

/// Literal kernel: the alternating sum over `M ⊆ shift` of naive
/// conditional Boltzmann factors.
pub fn naive_gamma(m: &Model64, root: Site, shift: SiteSet, boundary: SiteSet) -> C64 {
    let single = SiteSet::singleton(root);
    let mut out = C64::new(0.0, 0.0);
    for sub in shift.subsets() {
        let term = naive_kappa_conditional(m, single, boundary | sub);
        if (shift.len() - sub.len()) % 2 == 0 {
            out += term;
        } else {
            out -= term;
        }
    }
    out
}

/// Literal independence polynomial: filtered configuration sum.
pub fn naive_independence_poly(h: &Hypergraph, activity: &[C64], volume: SiteSet) -> C64 {
    let mut out = C64::new(0.0, 0.0);
    for x in volume.subsets() {
        if h.is_independent(x) {
            let mut term = C64::new(1.0, 0.0);
            for s in x.sites() {
                term *= activity[s];
            }
            out += term;
        }
    }
    out
}
