//! Cross-checks of the sparse evaluation paths against literal
//! enumeration oracles on randomized models.

mod common;

use common::*;
use latgas::exact::{self, PartitionQuery};
use latgas::ks::{self, KernelQuery};
use latgas::sites::SiteSet;

#[test]
fn conditional_interaction_matches_literal_product() {
    let mut rng = rng(0x5EED_0001);
    for _ in 0..60 {
        let m = random_model(&mut rng, 5, 4, 1.5);
        let lattice = m.lattice();
        for subset in lattice.subsets().skip(1) {
            for boundary in lattice.subsets() {
                let sparse = m.w_conditional(subset, boundary);
                let naive = naive_w_conditional(&m, subset, boundary);
                assert!(
                    close_c(sparse, naive, 1e-12),
                    "W({subset:?} | {boundary:?}): {sparse} vs {naive}"
                );
            }
        }
    }
}

#[test]
fn conditional_boltzmann_matches_literal_product() {
    let mut rng = rng(0x5EED_0002);
    for _ in 0..60 {
        let m = random_model(&mut rng, 5, 4, 1.5);
        let lattice = m.lattice();
        for subset in lattice.subsets() {
            for boundary in lattice.subsets() {
                let sparse = m.kappa_conditional(subset, boundary);
                let naive = naive_kappa_conditional(&m, subset, boundary);
                assert!(
                    close_c(sparse, naive, 1e-12),
                    "kappa({subset:?} | {boundary:?}): {sparse} vs {naive}"
                );
            }
        }
    }
}

#[test]
fn conditional_evaluation_spot_checks_on_larger_lattices() {
    let mut rng = rng(0x5EED_0003);
    for _ in 0..40 {
        let m = random_model(&mut rng, 8, 6, 2.0);
        let lattice = m.lattice();
        for _ in 0..50 {
            let subset = random_subset_of(&mut rng, lattice);
            let boundary = random_subset_of(&mut rng, lattice);
            if !subset.is_empty() {
                assert!(close_c(
                    m.w_conditional(subset, boundary),
                    naive_w_conditional(&m, subset, boundary),
                    1e-12
                ));
            }
            assert!(close_c(
                m.kappa_conditional(subset, boundary),
                naive_kappa_conditional(&m, subset, boundary),
                1e-12
            ));
        }
    }
}

#[test]
fn partition_function_matches_sequential_sum() {
    let mut rng = rng(0x5EED_0004);
    for _ in 0..50 {
        let m = random_model(&mut rng, 6, 5, 2.0);
        let lattice = m.lattice();
        for _ in 0..20 {
            let volume = random_subset_of(&mut rng, lattice);
            let pinned = random_subset_of(&mut rng, volume);
            let boundary = random_subset_of(&mut rng, lattice - volume);
            let lib = exact::partition_function(
                &m,
                PartitionQuery::pinned(pinned, volume).with_boundary(boundary),
            );
            let naive = naive_partition(&m, pinned, volume, boundary);
            assert!(
                close_c(lib, naive, 1e-11),
                "Z({pinned:?}, {volume:?} | {boundary:?}): {lib} vs {naive}"
            );
        }
    }
}

#[test]
fn partition_table_matches_per_volume_evaluation() {
    let mut rng = rng(0x5EED_0005);
    for _ in 0..10 {
        let m = random_model(&mut rng, 6, 4, 1.5);
        let table = exact::partition_table(&m, SiteSet::EMPTY);
        for volume in m.lattice().subsets() {
            let direct = naive_partition(&m, SiteSet::EMPTY, volume, SiteSet::EMPTY);
            assert!(close_c(table[volume.mask() as usize], direct, 1e-11));
        }
    }
}

#[test]
fn kernel_matches_literal_alternating_sum() {
    let mut rng = rng(0x5EED_0006);
    for _ in 0..60 {
        let m = random_model(&mut rng, 6, 5, 1.5);
        let lattice = m.lattice();
        for _ in 0..30 {
            let root = random_site(&mut rng, lattice);
            let shift = random_subset_of(&mut rng, lattice);
            let boundary = random_subset_of(&mut rng, lattice - shift);
            let lib = ks::gamma_mobius(&m, KernelQuery { root, shift, boundary });
            let naive = naive_gamma(&m, root, shift, boundary);
            assert!(
                close_c(lib, naive, 1e-11),
                "gamma({root}, {shift:?} | {boundary:?}): {lib} vs {naive}"
            );
        }
    }
}

#[test]
fn kernel_rows_match_pointwise_kernels() {
    let mut rng = rng(0x5EED_0007);
    for _ in 0..30 {
        let m = random_model(&mut rng, 7, 5, 1.5);
        let lattice = m.lattice();
        let root = random_site(&mut rng, lattice);
        let boundary = random_subset_of(&mut rng, lattice.remove(root));
        let pool = lattice - boundary;
        let row = ks::gamma_row(&m, root, boundary, pool);
        for (i, &g) in row.iter().enumerate() {
            let shift = pool.nth_subset(i as u32);
            let naive = naive_gamma(&m, root, shift, boundary);
            assert!(close_c(g, naive, 1e-11));
        }
    }
}

#[test]
fn independence_polynomial_matches_filtered_sum() {
    let mut rng = rng(0x5EED_0008);
    for _ in 0..40 {
        let n = 8;
        let h = random_bounded_degree_hypergraph(&mut rng, n, 3, 12);
        let activity: Vec<_> = (0..n).map(|_| random_in_disc(&mut rng, 1.2)).collect();
        for _ in 0..10 {
            let volume = random_subset_of(&mut rng, h.lattice());
            let lib = latgas::hypergraph::independence_polynomial(&h, &activity, volume);
            let naive = naive_independence_poly(&h, &activity, volume);
            assert!(close_c(lib, naive, 1e-12));
        }
    }
}

