mod common;

use common::{lattice_faces, oracle_faces, random_pool_subset, random_rotation, random_sphere, rotate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use selfpolar::hull::polytope_facets;
use selfpolar::lattice::{build_lattice, flag_f03};
use selfpolar::{catalog, ToleranceConfig, Vec4};

fn compare(points: &[Vec4], tol: &ToleranceConfig, label: &str) {
    let facets = polytope_facets(points, tol).unwrap_or_else(|e| panic!("{label}: {e}"));
    let lattice = build_lattice(&facets, points, tol).unwrap_or_else(|e| panic!("{label}: {e}"));
    let expected = oracle_faces(points, 1e-9);
    let got = lattice_faces(&lattice);
    for d in 0..4 {
        assert_eq!(got[d], expected[d], "{label}: faces of dimension {d}");
    }
    let f03: usize = expected[3].iter().map(Vec::len).sum();
    assert_eq!(flag_f03(&lattice), f03, "{label}");
}

#[test]
fn catalog_matches_oracle() {
    for name in catalog::NAMES {
        compare(catalog::by_name(name).unwrap().points(), &ToleranceConfig::exact(), name);
    }
}

#[test]
fn catalog_oracle_counts() {
    let expect = [
        ("simplex", [5, 10, 10, 5]),
        ("cross", [8, 24, 32, 16]),
        ("hypercube", [16, 32, 24, 8]),
        ("cell24", [24, 96, 96, 24]),
    ];
    for (name, f) in expect {
        let faces = oracle_faces(catalog::by_name(name).unwrap().points(), 1e-9);
        let counts: Vec<usize> = faces.iter().map(|s| s.len()).collect();
        assert_eq!(counts, f, "{name}");
    }
}

#[test]
fn rotated_catalog_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for name in catalog::NAMES {
        for k in 0..3 {
            let rot = random_rotation(&mut rng);
            let pts = rotate(catalog::by_name(name).unwrap().points(), &rot);
            compare(&pts, &ToleranceConfig::exact(), &format!("{name} rotation {k}"));
        }
    }
}

#[test]
fn random_hulls_match_oracle() {
    for seed in 0..40 {
        let n = 6 + (seed as usize % 10);
        compare(&random_sphere(seed, n), &ToleranceConfig::exact(), &format!("sphere seed {seed}"));
    }
}

#[test]
fn non_simplicial_subsets_match_oracle() {
    let mut checked = 0;
    for seed in 0..200 {
        let n = 8 + (seed as usize % 13);
        let pts = random_pool_subset(seed, n);
        if common::affine_rank(&pts, &(0..n).collect::<Vec<_>>(), 1e-9) < 4 {
            continue;
        }
        compare(&pts, &ToleranceConfig::exact(), &format!("pool seed {seed}"));
        checked += 1;
    }
    assert!(checked >= 150, "{checked}");
}
