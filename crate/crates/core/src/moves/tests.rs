use super::*;
use crate::catalog::{enumerate_low_dim, make_family, make_isolated_pic3, make_t, make_v, make_v_tilde, FamilyParams};

fn v(x: &[i64]) -> IntVector {
    IntVector::new(x.to_vec())
}

fn del_pezzo() -> LatticePolytope {
    LatticePolytope::from_rows(&[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]]).unwrap()
}

fn key(p: &LatticePolytope) -> CanonicalKey {
    p.canonical_form().unwrap()
}

#[test]
fn blow_up_of_the_plane() {
    let t2 = make_t(2).unwrap();
    let (q, record) = stellar_add(&t2, &[0, 1]).unwrap().unwrap();
    assert_eq!(q, del_pezzo());
    assert_eq!(record.to_string(), "F-add w=(1,1) F={0,1}");
    assert!(stellar_add(&t2, &[0]).unwrap().is_none());
    let (back, rec) = stellar_remove(&q, 3).unwrap().unwrap();
    assert_eq!(key(&back), key(&t2));
    assert_eq!(rec.kind, MoveKind::FRemove);
    assert_eq!(rec.face, Some(vec![0, 1]));
}

#[test]
fn simplex_loses_the_origin() {
    for n in 1..=4 {
        let t = make_t(n).unwrap();
        for i in 0..=n {
            assert!(i_remove(&t, i).unwrap().is_none());
            assert!(stellar_remove(&t, i).unwrap().is_none());
        }
        assert!(i_removal_neighbors(&t).unwrap().is_empty());
    }
}

#[test]
fn v4_has_no_f_moves() {
    assert!(f_neighbors(&make_v(4).unwrap()).unwrap().is_empty());
    assert!(f_neighbors(&make_v_tilde(4).unwrap()).unwrap().is_empty());
}

#[test]
fn t2_has_f_moves() {
    let found = f_neighbors(&make_t(2).unwrap()).unwrap();
    assert!(found.iter().any(|(q, _)| key(q) == key(&del_pezzo())));
    for (q, _) in &found {
        assert_eq!(q.num_vertices(), 4);
    }
}

#[test]
fn removing_the_long_vertex_of_v_tilde() {
    let vt4 = make_v_tilde(4).unwrap();
    let long = vt4.vertex_index(&v(&[1, 1, 1, 1])).unwrap();
    let (cross, _) = i_remove(&vt4, long).unwrap().unwrap();
    assert_eq!(cross.num_vertices(), 8);
    // oracle: subdivide every face of the cross-polytope and look for V~4
    let mut reachable = false;
    for mask in cross.proper_faces().unwrap() {
        if let Some((q, _)) = stellar_add(&cross, &polytope::indices_of(mask)).unwrap() {
            reachable |= key(&q) == key(&vt4);
        }
    }
    assert_eq!(stellar_remove(&vt4, long).unwrap().is_some(), reachable);
}

#[test]
fn v_and_v_tilde_are_one_vertex_apart() {
    let vt4 = make_v_tilde(4).unwrap();
    let v4 = make_v(4).unwrap();
    let (q, record) = i_add(&vt4, &v(&[-1, -1, -1, -1])).unwrap().unwrap();
    assert_eq!(key(&q), key(&v4));
    assert_eq!(record.to_string(), "I-add w=(-1,-1,-1,-1)");
    let long = v4.vertex_index(&v(&[1, 1, 1, 1])).unwrap();
    let (r, _) = i_remove(&v4, long).unwrap().unwrap();
    assert_eq!(key(&r), key(&vt4));
    assert!(!i_removal_neighbors(&v4).unwrap().is_empty());
}

#[test]
fn i_add_examples() {
    let t2 = make_t(2).unwrap();
    let (q, _) = i_add(&t2, &v(&[1, 1])).unwrap().unwrap();
    assert_eq!(q, del_pezzo());
    for p in [make_t(3).unwrap(), make_v(4).unwrap()] {
        let mut w = vec![0; p.dim()];
        w[0] = 2;
        assert!(i_add(&p, &IntVector::new(w)).unwrap().is_none());
    }
}

#[test]
fn isolated_examples_have_no_removals() {
    let p = make_isolated_pic3(2, 2).unwrap();
    for i in 0..p.num_vertices() {
        assert!(i_remove(&p, i).unwrap().is_none());
    }
    let q = make_family(&FamilyParams::new(2, 1, vec![2]).unwrap()).unwrap();
    assert!(i_removal_neighbors(&q).unwrap().is_empty());
}

#[test]
fn isolated_pic3_has_no_additions_in_box() {
    let p = make_isolated_pic3(2, 2).unwrap();
    assert!(i_addition_search(&p, 4).unwrap().is_empty());
}

/// Every point of the box, tried one by one.
fn naive_additions(p: &LatticePolytope, bound: i64) -> Vec<IntVector> {
    let n = p.dim();
    let mut out = Vec::new();
    let mut x = vec![-bound; n];
    loop {
        let w = IntVector::new(x.clone());
        if !w.is_zero() && w.is_primitive() && i_add(p, &w).unwrap().is_some() {
            out.push(w);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < bound {
                x[i] += 1;
                break;
            }
            x[i] = -bound;
        }
    }
}

#[test]
fn box_search_matches_naive_scan() {
    let cases = [
        (make_t(2).unwrap(), 3),
        (make_v(2).unwrap(), 2),
        (del_pezzo(), 3),
        (make_t(3).unwrap(), 2),
        (make_t(1).unwrap().free_sum(&make_t(2).unwrap()).unwrap(), 2),
        (make_v(2).unwrap(), 4),
        (make_t(3).unwrap(), 3),
        (make_isolated_pic3(2, 2).unwrap(), 2),
    ];
    for (p, b) in cases {
        let fast: Vec<IntVector> = i_addition_search(&p, b).unwrap().into_iter().map(|(_, r)| r.witness).collect();
        assert_eq!(fast, naive_additions(&p, b), "{p:?}");
    }
}

#[test]
fn insertions_do_not_depend_on_the_box() {
    // every insertion into T^2 has coordinates at most 1
    let small = i_addition_search(&make_t(2).unwrap(), 1).unwrap();
    let large = i_addition_search(&make_t(2).unwrap(), 1 << 20).unwrap();
    assert_eq!(small.len(), large.len());
}

#[test]
fn box_search_finds_the_blow_up() {
    let found = i_addition_search(&make_t(2).unwrap(), 1).unwrap();
    assert!(found.iter().any(|(_, r)| r.witness == v(&[1, 1])));
}

#[test]
fn shells_partition_the_box() {
    let p = make_t(3).unwrap();
    let mut joined: Vec<IntVector> = i_addition_shell(&p, 0, 1).unwrap().into_iter().map(|(_, r)| r.witness).collect();
    joined.extend(i_addition_shell(&p, 1, 2).unwrap().into_iter().map(|(_, r)| r.witness));
    joined.sort();
    let mut whole: Vec<IntVector> = i_addition_search(&p, 2).unwrap().into_iter().map(|(_, r)| r.witness).collect();
    whole.sort();
    assert_eq!(joined, whole);
}

#[test]
fn move_records_round_trip() {
    for text in ["F-add w=(1,1) F={0,1}", "F-remove w=(0,-1,2) F={3,4}", "I-add w=(1,0)", "I-remove w=(-1)"] {
        let r: MoveRecord = text.parse().unwrap();
        assert_eq!(r.to_string(), text);
    }
    for bad in ["", "X-add w=(1)", "I-add w=1", "F-add w=(1,1) F=0,1", "I-add w=(1) extra"] {
        assert!(bad.parse::<MoveRecord>().is_err(), "{bad}");
    }
}

#[test]
fn records_replay() {
    let t2 = make_t(2).unwrap();
    for (q, record) in f_neighbors(&t2).unwrap() {
        assert_eq!(key(&apply(&t2, &record).unwrap().unwrap()), key(&q));
    }
    let q = del_pezzo();
    for (r, record) in i_removal_neighbors(&q).unwrap() {
        assert_eq!(key(&apply(&q, &record).unwrap().unwrap()), key(&r));
    }
}

#[test]
fn plane_catalog_adjacency() {
    let cat = enumerate_low_dim(2, 2).unwrap();
    let t2 = make_t(2).unwrap();
    let ids = i_neighbors_in_catalog(&t2, &cat).unwrap();
    // the square has no triangle with the origin inside, so only the blow-up remains
    let blow_up = cat.ids()[cat.lookup(&key(&del_pezzo())).unwrap()];
    assert_eq!(ids, vec![blow_up]);
    let outside = LatticePolytope::from_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]]).unwrap();
    assert!(i_neighbors_in_catalog(&outside, &cat).is_err());
}

#[test]
fn f_moves_are_symmetric_in_the_plane() {
    let cat = enumerate_low_dim(2, 2).unwrap();
    let neighbor_keys =
        |p: &LatticePolytope| -> Vec<CanonicalKey> { f_neighbors(p).unwrap().iter().map(|(q, _)| key(q)).collect() };
    for p in cat.entries() {
        for q in neighbor_keys(p) {
            let q = q.to_polytope().unwrap();
            assert!(neighbor_keys(&q).contains(&key(p)));
        }
    }
}
