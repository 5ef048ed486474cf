//! Hard-core specialization properties: equivalence with the generic
//! machinery, degree stability of contraction and interpolation, the
//! intermediate bounds realized by the recursion, and scan reproducibility.

mod common;

use common::*;
use latgas::hypergraph::{self, Hypergraph, ScanRule};
use latgas::exact::{self, PartitionQuery};
use latgas::sites::SiteSet;
use latgas::C64;

#[test]
fn polynomial_matches_generic_partition_function() {
    let mut rng = rng(0x46_0001);
    for _ in 0..40 {
        let h = random_bounded_degree_hypergraph(&mut rng, 8, 3, 14);
        let activity: Vec<C64> = (0..8).map(|_| random_in_disc(&mut rng, 1.5)).collect();
        let model = h.to_interaction(activity.clone()).unwrap();
        for _ in 0..8 {
            let volume = random_subset_of(&mut rng, h.lattice());
            let special = hypergraph::independence_polynomial(&h, &activity, volume);
            let generic = exact::partition_function(&model, PartitionQuery::plain(volume));
            assert!(close_c(special, generic, 1e-12));
        }
    }
}

#[test]
fn contraction_never_raises_unblocked_degrees() {
    let mut rng = rng(0x46_0002);
    for _ in 0..100 {
        let h = random_bounded_degree_hypergraph(&mut rng, 9, 3, 16);
        let boundary = random_subset_of(&mut rng, h.lattice());
        let contracted = h.contract(boundary);
        for y in h.lattice().sites() {
            if contracted.has_edge(SiteSet::singleton(y)) {
                continue; // blocked sites carry no degree claim
            }
            assert!(
                contracted.degree(y) <= h.degree(y),
                "site {y}, boundary {boundary:?}: {} > {}",
                contracted.degree(y),
                h.degree(y)
            );
        }
    }
}

#[test]
fn interpolation_then_contraction_never_raises_unblocked_degrees() {
    // The subcall hypergraphs of the recursion: interpolate at an incident
    // edge, then contract by the predecessors of a member site.
    let mut rng = rng(0x46_0003);
    let mut checked = 0;
    for _ in 0..150 {
        let h = random_bounded_degree_hypergraph(&mut rng, 9, 3, 16);
        let lattice = h.lattice();
        let x = random_site(&mut rng, lattice);
        let incident: Vec<SiteSet> = h.incident(x).collect();
        if incident.is_empty() {
            continue;
        }
        let edge = incident[random_index(&mut rng, incident.len())];
        let rest = edge.remove(x);
        if rest.is_empty() {
            continue;
        }
        let x_prime = random_site(&mut rng, rest);
        let sub = h
            .interpolate_edge(x, edge)
            .unwrap()
            .contract(rest.sites_below(x_prime));
        for y in lattice.sites() {
            if sub.has_edge(SiteSet::singleton(y)) {
                continue;
            }
            assert!(sub.degree(y) <= h.degree(y), "site {y}: degree grew in the subcall");
        }
        checked += 1;
    }
    assert!(checked > 80, "only {checked} draws had incident edges");
}

#[test]
fn superset_edges_never_change_the_polynomial() {
    let mut rng = rng(0x46_0004);
    let mut checked = 0;
    for _ in 0..80 {
        let h = random_bounded_degree_hypergraph(&mut rng, 8, 3, 12);
        let edges: Vec<SiteSet> = h.edges().collect();
        if edges.is_empty() {
            continue;
        }
        let base = edges[random_index(&mut rng, edges.len())];
        let outside = h.lattice() - base;
        if outside.is_empty() {
            continue;
        }
        let superset = base.insert(random_site(&mut rng, outside));
        if h.has_edge(superset) {
            continue;
        }
        let enlarged =
            Hypergraph::new(h.site_count(), edges.iter().copied().chain([superset])).unwrap();
        let activity: Vec<C64> = (0..8).map(|_| random_in_disc(&mut rng, 1.5)).collect();
        for _ in 0..5 {
            let volume = random_subset_of(&mut rng, h.lattice());
            let a = hypergraph::independence_polynomial(&h, &activity, volume);
            let b = hypergraph::independence_polynomial(&enlarged, &activity, volume);
            assert_eq!(a, b, "volume {volume:?}");
        }
        checked += 1;
    }
    assert!(checked > 40, "only {checked} draws produced a fresh superset edge");
}

#[test]
fn recursion_matches_polynomial_ratio() {
    let mut rng = rng(0x46_0005);
    let mut checked = 0;
    for _ in 0..60 {
        let h = random_bounded_degree_hypergraph(&mut rng, 8, 3, 12);
        // Small activities keep every denominator in the recursion alive.
        let activity: Vec<C64> = (0..8)
            .map(|_| random_in_disc(&mut rng, 0.12))
            .collect();
        let x = random_site(&mut rng, h.lattice());
        let volume = random_subset_of(&mut rng, h.lattice().remove(x));
        let zhat = hypergraph::hard_core_recursive_zhat(&h, &activity, x, volume)
            .expect("small activities keep the recursion defined");
        let model = h.to_interaction(activity.clone()).unwrap();
        let direct = exact::effective_activity(&model, x, volume, SiteSet::EMPTY)
            .expect("small activities keep Z away from zero");
        assert!(close_c(zhat, direct, 1e-10));
        checked += 1;
    }
    assert!(checked == 60);
}

#[test]
fn passing_instances_realize_the_intermediate_bounds() {
    // On instances inside the sharper radii, subcalls whose hypergraph has
    // an incident edge sticking out of the volume stay below 1/Δ in
    // modulus; subcalls with every incident edge inside stay below 1.
    let mut rng = rng(0x46_0006);
    let delta = 3usize;
    let mut subcalls = 0;
    for _ in 0..40 {
        let h = random_bounded_degree_hypergraph(&mut rng, 9, delta, 14);
        let activity: Vec<C64> = (0..9)
            .map(|x| {
                let radius = hypergraph::scan_radius(&h, ScanRule::BencsBuys, delta as f64, x);
                let shrink = random_unit(&mut rng);
                random_in_disc(&mut rng, radius * shrink)
            })
            .collect();
        assert!(
            hypergraph::bencs_buys_check(&h, &activity, delta as f64).overall,
            "activities drawn inside the radii must pass"
        );
        let x = random_site(&mut rng, h.lattice());
        let volume = h.lattice().remove(x);
        let mut trace = Vec::new();
        hypergraph::hard_core_recursive_zhat_traced(&h, &activity, x, volume, &mut trace)
            .expect("passing instances keep the recursion defined");
        for entry in &trace {
            let bound = if entry.all_incident_inside { 1.0 } else { 1.0 / delta as f64 };
            assert!(
                entry.value.norm() < bound + 1e-12,
                "subcall at {} on {:?}: modulus {} vs bound {bound}",
                entry.root,
                entry.volume,
                entry.value.norm()
            );
        }
        subcalls += trace.len();
    }
    assert!(subcalls > 200, "only {subcalls} recorded subcalls");
}

#[test]
fn scans_are_reproducible_and_respect_the_bounds() {
    let mut rng = rng(0x46_0007);
    for _ in 0..6 {
        let h = random_bounded_degree_hypergraph(&mut rng, 7, 2, 8);
        let first = hypergraph::polydisc_scan::<f64>(&h, ScanRule::Galvin, 2.0, 300, 99).unwrap();
        let second = hypergraph::polydisc_scan::<f64>(&h, ScanRule::Galvin, 2.0, 300, 99).unwrap();
        assert_eq!(first.min_abs_z, second.min_abs_z);
        assert_eq!(first.argmin_sample, second.argmin_sample);
        assert_eq!(first.argmin_activity, second.argmin_activity);
        assert!(first.ok, "the zero-free bound must hold at the safe radius");
        assert!(first.min_abs_z >= first.lower_bound);
    }
}

