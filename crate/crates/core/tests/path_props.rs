mod common;

use common::{grid, image, ring, ring_loop_points};
use dighom::sampling::{random_connected_image, random_loop, rng};
use dighom::{
    concat, cycle_to_loop, enumerate_cubes, homology, homology_class, homotopy_invariance_witness, hurewicz,
    reverse, shortest_path, subdivide, validate_path_homotopy, verify_map_homotopy_prism, Adjacency, Chain,
    DigitalImage, DigitalMap, DigitalPath, HomologyClassCoords, HomologyGroup, MapHomotopy, PathHomotopyGrid, Point,
};
use proptest::prelude::*;

fn p(x: i64, y: i64) -> Point {
    Point::from([x, y])
}

fn add(a: &HomologyClassCoords, b: &HomologyClassCoords, h: &HomologyGroup) -> HomologyClassCoords {
    HomologyClassCoords {
        free_part: a.free_part.iter().zip(&b.free_part).map(|(x, y)| x + y).collect(),
        torsion_part: a
            .torsion_part
            .iter()
            .zip(&b.torsion_part)
            .zip(h.torsion())
            .map(|((x, y), d)| (x + y).rem_euclid(*d))
            .collect(),
    }
}

fn neg(a: &HomologyClassCoords, h: &HomologyGroup) -> HomologyClassCoords {
    HomologyClassCoords {
        free_part: a.free_part.iter().map(|x| -x).collect(),
        torsion_part: a.torsion_part.iter().zip(h.torsion()).map(|(x, d)| (-x).rem_euclid(*d)).collect(),
    }
}

#[test]
fn path_examples() {
    let x = image(1, &[[0, 0], [1, 0], [2, 0]]);
    let ab = DigitalPath::new(&x, &[p(0, 0), p(1, 0)]).unwrap();
    let bc = DigitalPath::new(&x, &[p(1, 0), p(2, 0)]).unwrap();
    let abc = concat(&ab, &bc).unwrap();
    assert_eq!(abc.points(&x), vec![p(0, 0), p(1, 0), p(2, 0)]);
    assert_eq!(reverse(&abc).points(&x), vec![p(2, 0), p(1, 0), p(0, 0)]);
    let abb = DigitalPath::new(&x, &[p(0, 0), p(1, 0), p(1, 0)]).unwrap();
    let s = subdivide(&abb);
    assert_eq!(s, subdivide(&ab));
    assert_eq!(s.boundary().unwrap(), Chain::from_terms(0, [
        (dighom::SingularCube::from_points(&x, 0, &[p(1, 0)]).unwrap(), 1),
        (dighom::SingularCube::from_points(&x, 0, &[p(0, 0)]).unwrap(), -1),
    ]).unwrap());
    assert!(subdivide(&DigitalPath::constant(&x, &p(1, 0)).unwrap()).is_zero());
}

#[test]
fn ring_loop_hurewicz_and_back() {
    let x = ring(1);
    let h = homology(&x, 1).unwrap();
    let f = DigitalPath::new(&x, &ring_loop_points()).unwrap();
    assert!(subdivide(&f).boundary().unwrap().is_zero());
    let c = hurewicz(&f, &h[1]).unwrap();
    assert_eq!(c.free_part[0].abs(), 1);
    assert!(hurewicz(&concat(&f, &reverse(&f)).unwrap(), &h[1]).unwrap().is_zero());
    assert!(hurewicz(&DigitalPath::constant(&x, &p(0, 0)).unwrap(), &h[1]).unwrap().is_zero());
    let z = &h[1].basis()[0];
    let g = cycle_to_loop(&x, z, &p(2, 2)).unwrap();
    assert!(g.is_loop() && g.start() == x.index_of(&p(2, 2)).unwrap());
    assert_eq!(hurewicz(&g, &h[1]).unwrap(), homology_class(z, &h[1]).unwrap());
    let zero = cycle_to_loop(&x, &Chain::zero(1), &p(0, 0)).unwrap();
    assert_eq!(zero.len(), 0);
}

#[test]
fn boundaries_realize_to_null_loops() {
    let x = grid(1, 3, 3);
    let h = homology(&x, 1).unwrap();
    let sq: Vec<_> = enumerate_cubes(&x, 2).unwrap().into_iter().take(7).collect();
    let mut w = Chain::zero(2);
    for (k, t) in sq.into_iter().enumerate() {
        w = w.add_scaled(&Chain::from_cube(t), k as i64 - 3).unwrap();
    }
    let g = cycle_to_loop(&x, &w.boundary().unwrap(), &p(1, 1)).unwrap();
    assert!(hurewicz(&g, &h[1]).unwrap().is_zero());
}

#[test]
fn grid_examples() {
    let x = image(1, &[[0, 0], [1, 0]]);
    let constant = PathHomotopyGrid::new(vec![vec![p(0, 0); 3]; 2], true).unwrap();
    assert!(validate_path_homotopy(&x, &constant).unwrap());
    let y = image(1, &[[0, 0], [1, 0], [2, 0]]);
    let jump = PathHomotopyGrid::new(vec![vec![p(0, 0), p(1, 0)], vec![p(2, 0), p(1, 0)]], false).unwrap();
    assert!(!validate_path_homotopy(&y, &jump).unwrap());
    assert!(PathHomotopyGrid::new(vec![vec![p(0, 0)], vec![]], false).is_err());
}

#[test]
fn two_cube_grids_on_the_ring() {
    let x = ring(1);
    for t in enumerate_cubes(&x, 2).unwrap() {
        let g = PathHomotopyGrid::two_cube_faces(&x, &t).unwrap();
        assert!(validate_path_homotopy(&x, &g).unwrap());
        let w = homotopy_invariance_witness(&x, &g).unwrap();
        let want = subdivide(&g.last_row(&x).unwrap()).sub(&subdivide(&g.first_row(&x).unwrap())).unwrap();
        assert_eq!(w.boundary().unwrap(), want);
    }
}

/// Every 2×1 grid over the 2-point image: the witness identity by exhaustion.
#[test]
fn all_small_grids_on_two_points() {
    let x = image(1, &[[0, 0], [1, 0]]);
    let pts = [p(0, 0), p(1, 0)];
    for code in 0..16usize {
        let cell = |k: usize| pts[(code >> k) & 1].clone();
        let grid = PathHomotopyGrid::new(vec![vec![cell(0), cell(1)], vec![cell(2), cell(3)]], true).unwrap();
        match homotopy_invariance_witness(&x, &grid) {
            Ok(w) => {
                let want = subdivide(&grid.last_row(&x).unwrap()).sub(&subdivide(&grid.first_row(&x).unwrap())).unwrap();
                assert_eq!(w.boundary().unwrap(), want);
            }
            Err(_) => assert!(!validate_path_homotopy(&x, &grid).unwrap()),
        }
    }
}

#[test]
fn prism_examples() {
    let x = image(1, &[[0, 0], [1, 0]]);
    let id = DigitalMap::identity(&x);
    let c = DigitalMap::constant(&x, &x, &p(0, 0)).unwrap();
    let slide = MapHomotopy::new(&x, &x, vec![id.clone(), c]).unwrap();
    let still = MapHomotopy::constant(&x, &x, id).unwrap();
    for n in 0..=2 {
        assert!(verify_map_homotopy_prism(&slide, n).unwrap());
        assert!(verify_map_homotopy_prism(&still, n).unwrap());
    }
}

/// Loops `σ ∗ row ∗ τ` for the two rows of a 2-cube grid, with the grid padded
/// by stationary columns along `σ` and `τ`.
fn conjugated_grid(x: &DigitalImage, g: &PathHomotopyGrid, base: usize) -> PathHomotopyGrid {
    let first = x.index_of(&g.rows()[0][0]).unwrap();
    let last = x.index_of(g.rows()[0].last().unwrap()).unwrap();
    let sigma = shortest_path(x, base, first).unwrap().points(x);
    let tau = shortest_path(x, last, base).unwrap().points(x);
    let rows = g
        .rows()
        .iter()
        .map(|r| {
            let mut row = sigma.clone();
            row.extend(r[1..].iter().cloned());
            row.extend(tau[1..].iter().cloned());
            row
        })
        .collect();
    PathHomotopyGrid::new(rows, true).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hurewicz_is_a_homomorphism(seed in any::<u64>(), l in 1usize..=2) {
        let mut r = rng(seed);
        let x = random_connected_image(&mut r, Adjacency::new(2, l).unwrap(), 12);
        let h = homology(&x, 1).unwrap();
        let base = 0;
        let f = random_loop(&mut r, &x, base, 10);
        let g = random_loop(&mut r, &x, base, 10);
        let (pf, pg) = (hurewicz(&f, &h[1]).unwrap(), hurewicz(&g, &h[1]).unwrap());
        prop_assert_eq!(hurewicz(&concat(&f, &g).unwrap(), &h[1]).unwrap(), add(&pf, &pg, &h[1]));
        prop_assert_eq!(hurewicz(&reverse(&f), &h[1]).unwrap(), neg(&pf, &h[1]));
        prop_assert!(hurewicz(&concat(&f, &reverse(&f)).unwrap(), &h[1]).unwrap().is_zero());
    }

    #[test]
    fn subdivision_is_additive_and_ignores_pauses(seed in any::<u64>(), k in 0usize..20) {
        let mut r = rng(seed);
        let x = random_connected_image(&mut r, Adjacency::new(2, 2).unwrap(), 10);
        let f = random_loop(&mut r, &x, 0, 6);
        let g = random_loop(&mut r, &x, 0, 6);
        prop_assert_eq!(subdivide(&concat(&f, &g).unwrap()), subdivide(&f).add(&subdivide(&g)).unwrap());
        let paused = f.pause_at(k % (f.len() + 1)).unwrap();
        prop_assert_eq!(subdivide(&paused), subdivide(&f));
        prop_assert_eq!(subdivide(&f.without_pauses()), subdivide(&f));
    }

    #[test]
    fn homotopic_loops_share_a_class(seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_connected_image(&mut r, Adjacency::new(2, 1).unwrap(), 10);
        let h = homology(&x, 1).unwrap();
        for t in enumerate_cubes(&x, 2).unwrap().into_iter().take(12) {
            let g = conjugated_grid(&x, &PathHomotopyGrid::two_cube_faces(&x, &t).unwrap(), 0);
            prop_assert!(validate_path_homotopy(&x, &g).unwrap());
            let (top, bottom) = (g.first_row(&x).unwrap(), g.last_row(&x).unwrap());
            prop_assert_eq!(hurewicz(&top, &h[1]).unwrap(), hurewicz(&bottom, &h[1]).unwrap());
        }
    }

    #[test]
    fn generators_are_realized_by_loops(seed in any::<u64>(), l in 1usize..=2) {
        let mut r = rng(seed);
        let x = random_connected_image(&mut r, Adjacency::new(2, l).unwrap(), 14);
        let h = homology(&x, 1).unwrap();
        let base = x.point(x.len() - 1).clone();
        for (k, z) in h[1].basis().iter().enumerate().take(h[1].betti()) {
            let g = cycle_to_loop(&x, z, &base).unwrap();
            let mut unit = vec![0; h[1].generator_count()];
            unit[k] = 1;
            prop_assert_eq!(hurewicz(&g, &h[1]).unwrap().to_vec(), unit);
        }
    }
}
