mod common;

use common::{coords, on_hull_boundary, point_set};
use dmbst::geometry::EUCLIDEAN_MST_MAX_DEGREE;
use dmbst::oracle::enumerate_spanning_trees;
use dmbst::{angle_at, mst, Metric, Point3, PointSet};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn adjacent_edges_meet_at_sixty_degrees_or_more(raw in coords(2..=12)) {
        let Some(ps) = point_set(&raw, Metric::Euclidean) else { return Ok(()) };
        let t = mst(&ps).unwrap();
        let adj = adjacency(&t);
        for (b, nbrs) in adj.iter().enumerate() {
            for (i, &a) in nbrs.iter().enumerate() {
                for &c in &nbrs[i + 1..] {
                    let angle = angle_at(&ps.point(b), &ps.point(a), &ps.point(c)).unwrap();
                    prop_assert!(angle >= 60.0 - 1e-9, "angle {angle} at {b}");
                }
            }
        }
    }

    #[test]
    fn star_children_lie_on_local_hull(raw in coords(2..=12)) {
        let Some(ps) = point_set(&raw, Metric::Euclidean) else { return Ok(()) };
        let t = mst(&ps).unwrap();
        for s in t.stars() {
            let mut local: Vec<Point3> = vec![ps.point(s.center)];
            local.extend(s.children.iter().map(|&c| ps.point(c)));
            for &c in &s.children {
                prop_assert!(on_hull_boundary(ps.point(c), &local, 1e-9), "child {c} of {}", s.center);
            }
        }
    }

    #[test]
    fn euclidean_degree_is_capped(raw in coords(2..=25)) {
        let Some(ps) = point_set(&raw, Metric::Euclidean) else { return Ok(()) };
        prop_assert!(mst(&ps).unwrap().max_degree() <= EUCLIDEAN_MST_MAX_DEGREE);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn mst_is_a_bottleneck_tree(raw in coords(2..=7), metric in common::metric()) {
        let Some(ps) = point_set(&raw, metric) else { return Ok(()) };
        let best = enumerate_spanning_trees(&ps)
            .unwrap()
            .map(|t| t.bottleneck().unwrap())
            .fold(f64::INFINITY, f64::min);
        prop_assert_eq!(mst(&ps).unwrap().bottleneck().unwrap(), best);
    }
}

fn adjacency(t: &dmbst::Tree) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); t.len()];
    for (a, b) in t.edge_set() {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

#[test]
fn icosahedron_center_has_degree_twelve() {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = vec![Point3::new(0.0, 0.0, 0.0)];
    for a in [-1.0, 1.0] {
        for b in [-phi, phi] {
            pts.push(Point3::new(0.0, a, b));
            pts.push(Point3::new(a, b, 0.0));
            pts.push(Point3::new(b, 0.0, a));
        }
    }
    // scale so the vertices are slightly closer to the center than to each other
    let r = Point3::new(0.0, 1.0, phi).l2_norm();
    let pts: Vec<Point3> = pts.into_iter().map(|p| p * (1.0 / r)).collect();
    let ps = PointSet::new(pts, Metric::Euclidean).unwrap();
    let t = mst(&ps).unwrap();
    assert_eq!(t.max_degree(), 12);
    assert_eq!(t.degrees()[0], 12);
}

#[test]
fn hull_oracle_rejects_interior_points() {
    let tet = [
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 0.0, 0.0),
        Point3::new(0.0, 1.0, 0.0),
        Point3::new(0.0, 0.0, 1.0),
        Point3::new(0.1, 0.1, 0.1),
    ];
    assert!(!on_hull_boundary(tet[4], &tet, 1e-9));
    assert!(on_hull_boundary(tet[1], &tet, 1e-9));
    assert!(on_hull_boundary(Point3::new(0.2, 0.2, 0.0), &tet, 1e-9));
}
