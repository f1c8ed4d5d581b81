mod common;

use common::{grid, image, Oracle};
use dighom::sampling::{random_image, random_map, random_subset, rng};
use dighom::{
    are_adjacent, closure, components, covers_by_interiors, interior, is_connected, is_continuous, kappa, neighborhood,
    Adjacency, DigitalImage, DigitalMap, Point, PointSet,
};
use proptest::prelude::*;

fn set(pts: &[[i64; 2]]) -> PointSet {
    pts.iter().map(|&p| Point::from(p)).collect()
}

fn rows(x: &DigitalImage, pred: impl Fn(i64) -> bool) -> PointSet {
    x.points().iter().filter(|p| pred(p.coords()[1])).cloned().collect()
}

fn complement(x: &DigitalImage, a: &PointSet) -> PointSet {
    x.point_set().difference(a).cloned().collect()
}

#[test]
fn adjacency_examples() {
    let (o, up, diag) = (Point::from([0, 0]), Point::from([0, 1]), Point::from([1, 1]));
    let (a4, a8) = (Adjacency::new(2, 1).unwrap(), Adjacency::new(2, 2).unwrap());
    assert!(are_adjacent(&o, &up, a4).unwrap());
    assert!(!are_adjacent(&o, &diag, a4).unwrap());
    assert!(are_adjacent(&o, &diag, a8).unwrap());
    assert!(!are_adjacent(&o, &o, a8).unwrap());
    assert_eq!([kappa(2, 1), kappa(2, 2), kappa(3, 1), kappa(3, 2), kappa(3, 3)], [4, 8, 6, 18, 26]);
}

#[test]
fn neighbourhood_examples() {
    let x = grid(1, 3, 3);
    assert_eq!(
        neighborhood(&x, &Point::from([1, 1])).unwrap(),
        set(&[[1, 1], [0, 1], [2, 1], [1, 0], [1, 2]])
    );
    let lone = image(1, &[[0, 0]]);
    assert_eq!(neighborhood(&lone, &Point::from([0, 0])).unwrap(), set(&[[0, 0]]));
    let x8 = grid(2, 3, 3);
    assert_eq!(
        neighborhood(&x8, &Point::from([0, 0])).unwrap(),
        set(&[[0, 0], [1, 0], [0, 1], [1, 1]])
    );
}

#[test]
fn component_examples() {
    let x = image(1, &[[0, 0], [1, 0], [5, 5]]);
    assert_eq!(components(&x), vec![set(&[[0, 0], [1, 0]]), set(&[[5, 5]])]);
    assert!(components(&DigitalImage::empty(Adjacency::new(2, 1).unwrap())).is_empty());
    assert_eq!(components(&common::ring(1)).len(), Oracle::new(&common::ring(1)).component_count());
}

#[test]
fn continuity_examples() {
    let x = image(1, &[[0, 0], [1, 0]]);
    let y = image(1, &[[0, 0], [2, 0]]);
    let f = DigitalMap::from_fn(&x, &y, |p| Point::from([2 * p.coords()[0], 0])).unwrap();
    assert!(!is_continuous(&f, &x, &y).unwrap());
    assert!(is_continuous(&DigitalMap::identity(&x), &x, &x).unwrap());
    assert!(is_continuous(&DigitalMap::constant(&x, &y, &Point::from([2, 0])).unwrap(), &x, &y).unwrap());
}

#[test]
fn cross_interior_and_closure() {
    let x = grid(1, 3, 3);
    let cross = set(&[[1, 0], [0, 1], [1, 1], [2, 1], [1, 2]]);
    assert_eq!(interior(&x, &cross, 1).unwrap(), set(&[[1, 1]]));
    assert_eq!(interior(&x, &cross, 2).unwrap(), PointSet::new());
    assert_eq!(interior(&x, &cross, 0).unwrap(), cross);
    assert_eq!(closure(&x, &cross, 1).unwrap(), x.point_set());
    assert_eq!(closure(&x, &PointSet::new(), 3).unwrap(), PointSet::new());
    // interior is not idempotent
    assert_ne!(interior(&x, &cross, 2).unwrap(), interior(&x, &cross, 1).unwrap());
}

#[test]
fn five_by_five_operators() {
    let x = grid(1, 5, 5);
    assert_eq!(closure(&x, &rows(&x, |y| y == 0), 1).unwrap(), rows(&x, |y| y <= 1));
    let (a, b) = (rows(&x, |y| y <= 3), rows(&x, |y| y >= 1));
    assert_eq!(interior(&x, &a, 1).unwrap(), rows(&x, |y| y <= 2));
    assert_eq!(interior(&x, &b, 1).unwrap(), rows(&x, |y| y >= 2));
    assert!(covers_by_interiors(&x, &a, &b, 1).unwrap());
    assert_eq!(interior(&x, &a, 2).unwrap(), rows(&x, |y| y <= 1));
    assert!(!covers_by_interiors(&x, &a, &b, 2).unwrap());
    assert!(covers_by_interiors(&x, &x.point_set(), &PointSet::new(), 4).unwrap());
}

#[test]
fn full_box_neighbour_counts() {
    for d in 1..=3usize {
        for l in 1..=d {
            let adj = Adjacency::new(d, l).unwrap();
            let pts = (0..3usize.pow(d as u32)).map(|mut k| {
                Point::from(
                    (0..d)
                        .map(|_| {
                            let c = (k % 3) as i64;
                            k /= 3;
                            c
                        })
                        .collect::<Vec<_>>(),
                )
            });
            let x = DigitalImage::new(adj, pts).unwrap();
            let centre = Point::from(vec![1; d]);
            assert_eq!(neighborhood(&x, &centre).unwrap().len() as u64 - 1, kappa(d, l), "d={d} l={l}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric_and_irreflexive(
        d in 1usize..=4,
        l_pick in 0usize..4,
        p in proptest::collection::vec(-2i64..=2, 4),
        q in proptest::collection::vec(-2i64..=2, 4),
    ) {
        let adj = Adjacency::new(d, 1 + l_pick % d).unwrap();
        let (p, q) = (Point::from(p[..d].to_vec()), Point::from(q[..d].to_vec()));
        prop_assert_eq!(are_adjacent(&p, &q, adj).unwrap(), are_adjacent(&q, &p, adj).unwrap());
        prop_assert!(!are_adjacent(&p, &p, adj).unwrap());
    }

    #[test]
    fn interior_closure_laws(seed in any::<u64>(), l in 1usize..=2) {
        let mut r = rng(seed);
        let x = random_image(&mut r, Adjacency::new(2, l).unwrap(), 5, 20);
        let a = random_subset(&mut r, &x, 0.6);
        let extra = random_subset(&mut r, &x, 0.3);
        let b: PointSet = a.union(&extra).cloned().collect();
        let int_a = interior(&x, &a, 1).unwrap();
        let cl_a = closure(&x, &a, 1).unwrap();
        prop_assert!(int_a.is_subset(&a) && a.is_subset(&cl_a));
        prop_assert_eq!(interior(&x, &complement(&x, &a), 1).unwrap(), complement(&x, &cl_a));
        prop_assert_eq!(complement(&x, &int_a), closure(&x, &complement(&x, &a), 1).unwrap());
        prop_assert!(int_a.is_subset(&interior(&x, &b, 1).unwrap()));
        prop_assert!(cl_a.is_subset(&closure(&x, &b, 1).unwrap()));
        for i in 0..4 {
            prop_assert!(closure(&x, &a, i).unwrap().is_subset(&closure(&x, &a, i + 1).unwrap()));
            prop_assert!(interior(&x, &a, i + 1).unwrap().is_subset(&interior(&x, &a, i).unwrap()));
        }
    }

    #[test]
    fn continuous_images_of_connected_sets_are_connected(seed in any::<u64>(), l in 1usize..=2) {
        let mut r = rng(seed);
        let adj = Adjacency::new(2, l).unwrap();
        let x = random_image(&mut r, adj, 4, 12);
        let y = random_image(&mut r, adj, 4, 12);
        let f = random_map(&mut r, &x, &y);
        prop_assert!(is_continuous(&f, &x, &y).unwrap());
        for c in components(&x) {
            let image_set: PointSet = c.iter().map(|p| f.point_image(&x, &y, p).unwrap()).collect();
            prop_assert!(is_connected(&y.subimage(&image_set).unwrap()));
        }
    }

    #[test]
    fn component_count_matches_union_find(seed in any::<u64>(), l in 1usize..=2) {
        let x = random_image(&mut rng(seed), Adjacency::new(2, l).unwrap(), 6, 25);
        prop_assert_eq!(components(&x).len(), Oracle::new(&x).component_count());
    }
}
