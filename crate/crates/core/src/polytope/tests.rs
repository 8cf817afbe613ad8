use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;
use crate::catalog::{make_t, make_v, make_v_tilde};

fn poly(rows: &[&[i64]]) -> LatticePolytope {
    LatticePolytope::from_rows(rows).unwrap()
}

fn normals(p: &LatticePolytope) -> Vec<(Vec<i64>, i64)> {
    let mut out: Vec<(Vec<i64>, i64)> = p.facets().unwrap().iter().map(|f| (f.normal.to_vec(), f.level)).collect();
    out.sort();
    out
}

fn random_unimodular(n: usize, rng: &mut StdRng) -> UnimodularMap {
    let mut m = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        if i == j {
            continue;
        }
        let c = rng.random_range(-2..=2);
        for col in 0..n {
            let x = m.get(i, col) + c * m.get(j, col);
            m.set(i, col, x);
        }
    }
    if rng.random_bool(0.5) {
        for col in 0..n {
            let x = -m.get(0, col);
            m.set(0, col, x);
        }
    }
    UnimodularMap::new(m).unwrap()
}

fn shuffled(p: &LatticePolytope, rng: &mut StdRng) -> LatticePolytope {
    let mut order: Vec<usize> = (0..p.num_vertices()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    p.permuted(&order).unwrap()
}

#[test]
fn simplex_facets() {
    // <a, p> = <a, q> = 1 for each edge {p, q}: (1,1), (-2,1), (1,-2)
    let t2 = poly(&[&[1, 0], &[0, 1], &[-1, -1]]);
    assert_eq!(normals(&t2), vec![(vec![-2, 1], 1), (vec![1, -2], 1), (vec![1, 1], 1)]);
    assert!(t2.facets().unwrap().iter().all(|f| f.vertices.len() == 2));
}

#[test]
fn cross_polytope_facets() {
    let diamond = poly(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
    assert_eq!(normals(&diamond), vec![(vec![-1, -1], 1), (vec![-1, 1], 1), (vec![1, -1], 1), (vec![1, 1], 1)]);
}

#[test]
fn listed_interior_point_is_rejected() {
    let p = poly(&[&[1, 0], &[0, 1], &[-1, -1], &[0, 0]]);
    assert_eq!(p.facets().unwrap_err(), PolytopeError::NonVertex(3));
    assert!(!p.is_smooth_fano());
}

#[test]
fn boundary_non_vertex_is_rejected() {
    // (1,1) is the midpoint of an edge of the square conv{(2,0),(0,2),...}
    let p = poly(&[&[2, 0], &[0, 2], &[-2, 0], &[0, -2], &[1, 1]]);
    assert_eq!(p.facets().unwrap_err(), PolytopeError::NonVertex(4));
}

#[test]
fn origin_outside_or_on_boundary() {
    let p = poly(&[&[1, 0], &[0, 1], &[1, 1]]);
    assert_eq!(p.facets().unwrap_err(), PolytopeError::OriginNotInterior);
    let q = poly(&[&[1, 0], &[-1, 0], &[0, 1]]);
    assert_eq!(q.facets().unwrap_err(), PolytopeError::OriginNotInterior);
    assert!(!q.is_reflexive());
}

#[test]
fn degenerate_inputs() {
    assert_eq!(LatticePolytope::new(vec![]).unwrap_err(), PolytopeError::Empty);
    let dup = LatticePolytope::from_rows(&[&[1, 0], &[0, 1], &[1, 0]]).unwrap_err();
    assert_eq!(dup, PolytopeError::DuplicateVertex(2));
    let flat = poly(&[&[1, 0, 0], &[0, 1, 0], &[-1, -1, 0], &[1, 1, 0]]);
    assert_eq!(flat.facets().unwrap_err(), PolytopeError::NotFullDimensional);
}

#[test]
fn reflexive_examples() {
    for n in 2..=5 {
        assert!(make_t(n).unwrap().is_reflexive());
    }
    // edges of conv{(1,0),(0,1),(-1,-2)} lie on x+y=1, x-y=1, -3x+y=1
    let p = poly(&[&[1, 0], &[0, 1], &[-1, -2]]);
    assert_eq!(normals(&p), vec![(vec![-3, 1], 1), (vec![1, -1], 1), (vec![1, 1], 1)]);
    assert!(p.is_reflexive());
    assert!(!p.is_smooth_fano());
    let wide = poly(&[&[2, 0], &[-2, 0], &[0, 1], &[0, -1]]);
    assert!(!wide.is_reflexive());
}

#[test]
fn smooth_fano_examples() {
    assert!(make_t(5).unwrap().is_smooth_fano());
    assert!(make_v(4).unwrap().is_smooth_fano());
    assert!(make_v_tilde(2).unwrap().is_smooth_fano());
    let cube = poly(&[
        &[1, 1, 1],
        &[1, 1, -1],
        &[1, -1, 1],
        &[1, -1, -1],
        &[-1, 1, 1],
        &[-1, 1, -1],
        &[-1, -1, 1],
        &[-1, -1, -1],
    ]);
    assert!(cube.is_reflexive());
    assert!(!cube.is_simplicial());
    assert!(!cube.is_smooth_fano());
    assert_eq!(cube.require_smooth_fano().unwrap_err(), PolytopeError::NotSmoothFano);
}

#[test]
fn pseudo_symmetry() {
    assert!(make_v(2).unwrap().is_pseudo_symmetric());
    assert!(!make_t(2).unwrap().is_pseudo_symmetric());
    assert!(make_v_tilde(4).unwrap().is_pseudo_symmetric());
    assert!(make_v(4).unwrap().is_pseudo_symmetric());
}

#[test]
fn canonical_form_is_invariant() {
    let mut rng = StdRng::seed_from_u64(7);
    for p in [make_t(3).unwrap(), make_v(4).unwrap(), make_v_tilde(4).unwrap()] {
        let key = p.canonical_form().unwrap();
        for _ in 0..25 {
            let u = random_unimodular(p.dim(), &mut rng);
            let q = shuffled(&p.transformed(&u).unwrap(), &mut rng);
            assert_eq!(q.canonical_form().unwrap(), key);
        }
    }
}

#[test]
fn canonical_form_separates() {
    let v4 = make_v(4).unwrap();
    let vt4 = make_v_tilde(4).unwrap();
    assert_ne!(v4.canonical_form().unwrap(), vt4.canonical_form().unwrap());
    // same vertex count, different classes
    let del_pezzo = poly(&[&[1, 0], &[0, 1], &[1, 1], &[-1, -1]]);
    let square = poly(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]);
    assert_ne!(del_pezzo.canonical_form().unwrap(), square.canonical_form().unwrap());
}

#[test]
fn canonical_key_round_trips() {
    let p = make_v_tilde(4).unwrap();
    let key = p.canonical_form().unwrap();
    let text = key.to_string();
    assert_eq!(text.parse::<CanonicalKey>().unwrap(), key);
    let rep = key.to_polytope().unwrap();
    assert_eq!(rep.canonical_form().unwrap(), key);
    assert!("3:1,0".parse::<CanonicalKey>().is_err());
}

#[test]
fn canonical_bytes_preserve_order() {
    let keys: Vec<CanonicalKey> =
        [make_t(2), make_v(2), make_v_tilde(2)].into_iter().map(|p| p.unwrap().canonical_form().unwrap()).collect();
    for a in &keys {
        for b in &keys {
            assert_eq!(a.cmp(b), a.to_bytes().cmp(&b.to_bytes()));
        }
    }
}

#[test]
fn equivalence_checks() {
    let t2 = make_t(2).unwrap();
    let swapped = poly(&[&[0, 1], &[1, 0], &[-1, -1]]);
    assert!(t2.are_unimodularly_equivalent(&swapped).unwrap());
    assert!(!t2.are_unimodularly_equivalent(&make_v(2).unwrap()).unwrap());
    let t3 = make_t(3).unwrap();
    assert!(matches!(t2.are_unimodularly_equivalent(&t3), Err(PolytopeError::DimensionPair(2, 3))));
}

#[test]
fn embed_examples() {
    let v4 = make_v(4).unwrap();
    let vt4 = make_v_tilde(4).unwrap();
    let t4 = make_t(4).unwrap();
    assert!(v4.embed_subset(&t4).unwrap().is_none());
    let u = v4.embed_subset(&v4).unwrap().unwrap();
    for v in v4.vertices() {
        assert!(v4.vertex_index(&u.apply(v).unwrap()).is_some());
    }
    let u = vt4.embed_subset(&v4).unwrap().unwrap();
    for v in vt4.vertices() {
        assert!(v4.vertex_index(&u.apply(v).unwrap()).is_some());
    }
    // T^4 sits inside V^4 as {e1, e2, e3, e4, -(e1+e2+e3+e4)}
    assert!(t4.embed_subset(&v4).unwrap().is_some());
    // five vertices of the cross-polytope never sum to zero
    let cross = poly(&[
        &[1, 0, 0, 0],
        &[-1, 0, 0, 0],
        &[0, 1, 0, 0],
        &[0, -1, 0, 0],
        &[0, 0, 1, 0],
        &[0, 0, -1, 0],
        &[0, 0, 0, 1],
        &[0, 0, 0, -1],
    ]);
    assert!(t4.embed_subset(&cross).unwrap().is_none());
}

#[test]
fn free_sums() {
    let t1 = make_t(1).unwrap();
    let square = t1.free_sum(&t1).unwrap();
    assert_eq!(square.vertices(), &[IntVector::from([1, 0]), [-1, 0].into(), [0, 1].into(), [0, -1].into()]);
    let p = make_v(2).unwrap().free_sum(&t1).unwrap();
    assert_eq!((p.dim(), p.num_vertices()), (3, 8));
    assert!(p.is_smooth_fano());
    let bad = poly(&[&[1, 0], &[0, 1], &[-1, -2]]);
    assert!(!bad.free_sum(&t1).unwrap().is_smooth_fano());
}

#[test]
fn proper_faces_of_triangle() {
    let t2 = make_t(2).unwrap();
    assert_eq!(t2.proper_faces().unwrap(), vec![0b001, 0b010, 0b011, 0b100, 0b101, 0b110]);
    assert!(t2.is_face(0b011).unwrap());
    assert!(!t2.is_face(0b111).unwrap());
}

#[test]
fn smooth_extension_matches_full_hull() {
    let t2 = make_t(2).unwrap();
    let q = t2.smooth_extension(&IntVector::from([1, 1])).unwrap().unwrap();
    let fresh = LatticePolytope::new(q.vertices().to_vec()).unwrap();
    assert_eq!(q.facets().unwrap(), fresh.facets().unwrap());
    // conv{(2,1), (0,1)} would be a facet of determinant 2
    assert!(t2.smooth_extension(&IntVector::from([2, 1])).unwrap().is_none());
    // already a vertex
    assert!(t2.smooth_extension(&IntVector::from([1, 0])).unwrap().is_none());
}
