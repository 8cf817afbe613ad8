use super::*;

fn rows(p: &LatticePolytope) -> Vec<Vec<i64>> {
    p.vertices().iter().map(|v| v.to_vec()).collect()
}

#[test]
fn simplex_vertices() {
    assert_eq!(rows(&make_t(2).unwrap()), vec![vec![1, 0], vec![0, 1], vec![-1, -1]]);
    assert!(make_t(0).is_err());
    for n in 1..=7 {
        let t = make_t(n).unwrap();
        assert_eq!(t.num_vertices(), n + 1);
        assert!(t.is_smooth_fano());
    }
}

#[test]
fn v_constructions() {
    let v2 = make_v(2).unwrap();
    assert_eq!(v2.num_vertices(), 6);
    assert_eq!(make_v_tilde(2).unwrap().num_vertices(), 5);
    for k in 1..=3 {
        let v = make_v(2 * k).unwrap();
        let vt = make_v_tilde(2 * k).unwrap();
        assert_eq!((v.num_vertices(), vt.num_vertices()), (4 * k + 2, 4 * k + 1));
        assert!(v.is_smooth_fano() && vt.is_smooth_fano());
    }
    assert!(make_v(3).is_err());
    assert!(make_v_tilde(0).is_err());
}

#[test]
fn isolated_pic3_coordinates() {
    let p = make_isolated_pic3(2, 2).unwrap();
    let expected = vec![
        vec![1, 0, 0, 0, 0],
        vec![-1, -1, -1, -1, 3],
        vec![0, 1, 0, 0, 0],
        vec![0, 0, 1, 1, 0],
        vec![0, 0, 0, 0, -1],
        vec![0, 0, 0, 0, 1],
        vec![0, 0, 0, 1, 0],
        vec![0, 1, 1, 0, -1],
    ];
    assert_eq!(rows(&p), expected);
    assert!(p.is_smooth_fano());
    assert!(make_isolated_pic3(1, 2).is_err());
    assert!(make_isolated_pic3(2, 1).is_err());
}

#[test]
fn family_without_w_is_the_pic3_construction() {
    for (a, b) in [(2, 2), (3, 2), (2, 3), (4, 3)] {
        let fam = make_family(&FamilyParams::new(a, b, vec![]).unwrap()).unwrap();
        assert_eq!(fam, make_isolated_pic3(a, b).unwrap());
    }
}

#[test]
fn family_dimensions() {
    let p = FamilyParams::new(2, 1, vec![2]).unwrap();
    assert_eq!(p.alpha, vec![vec![Slot::Y(1), Slot::U(1)]]);
    let q = make_family(&p).unwrap();
    assert_eq!((q.dim(), q.num_vertices()), (5, 9));
    for (a, b, l) in [(2, 1, vec![1, 1]), (3, 1, vec![2]), (2, 2, vec![4]), (2, 2, vec![2, 2]), (2, 1, vec![1, 1, 1])] {
        let params = FamilyParams::new(a, b, l).unwrap();
        let p = make_family(&params).unwrap();
        assert_eq!(p.dim(), params.dim());
        assert_eq!(p.num_vertices(), params.dim() + params.k() + 3);
        assert!(p.is_smooth_fano(), "{params}");
    }
}

#[test]
fn family_parameter_checks() {
    assert!(FamilyParams::new(2, 1, vec![]).is_err());
    assert!(FamilyParams::new(1, 2, vec![]).is_err());
    assert!(FamilyParams::new(2, 1, vec![1]).is_err(), "one slot cannot hit y1 and u1");
    assert!(FamilyParams::new(2, 1, vec![0, 2]).is_err());
    assert!(FamilyParams::with_alpha(2, 1, vec![2], vec![vec![Slot::Y(1), Slot::Y(1)]]).is_err());
    assert!(FamilyParams::with_alpha(2, 1, vec![2], vec![vec![Slot::Y(1), Slot::U(2)]]).is_err());
    assert!(FamilyParams::with_alpha(2, 1, vec![2], vec![vec![Slot::U(1), Slot::Y(1)]]).is_ok());
}

#[test]
fn corollary_parameters() {
    let p = isolated_params(5, 3).unwrap();
    assert_eq!((p.a, p.b, p.k()), (2, 2, 0));
    let p = isolated_params(5, 5).unwrap();
    assert_eq!((p.a, p.b, p.l.clone()), (2, 1, vec![1, 1]));
    let p = isolated_params(6, 4).unwrap();
    assert_eq!((p.a, p.b, p.l.clone()), (3, 1, vec![2]));
    for n in 5..=7 {
        for rho in 3..=n {
            let q = make_family(&isolated_params(n, rho).unwrap()).unwrap();
            assert_eq!((q.dim(), q.num_vertices()), (n, n + rho));
            assert!(q.is_smooth_fano());
        }
    }
    assert!(isolated_params(4, 3).is_err());
    assert!(isolated_params(5, 6).is_err());
    assert!(isolated_params(5, 2).is_err());
}

#[test]
fn seven_dimensional_example() {
    let p = make_remark_example_7d().unwrap();
    assert_eq!((p.dim(), p.num_vertices()), (7, 15));
    assert!(p.is_smooth_fano());
    assert!(p.num_vertices() > 2 * p.dim());
}

#[test]
fn enumeration_counts_in_low_dimension() {
    assert_eq!(enumerate_low_dim(1, 1).unwrap().len(), 1);
    assert_eq!(enumerate_low_dim(2, 1).unwrap().len(), 5);
    assert_eq!(enumerate_low_dim(3, 2).unwrap().len(), 18);
}

#[test]
fn enumeration_is_monotone_in_the_box() {
    let small = enumerate_low_dim(3, 1).unwrap();
    let large = enumerate_low_dim(3, 2).unwrap();
    assert!(small.len() <= large.len());
    for k in small.keys() {
        assert!(large.lookup(k).is_some());
    }
}

#[test]
fn escalation_stops_after_two_equal_counts() {
    let e = enumerate_escalating(3, 1, 6, &[]).unwrap();
    let counts: Vec<usize> = e.steps.iter().map(|s| s.count).collect();
    assert_eq!(*counts.last().unwrap(), 18);
    assert_eq!(counts[counts.len() - 2], 18);
    assert!(counts[..counts.len() - 2].iter().all(|&c| c != 18));
    assert_eq!(e.catalog.len(), 18);
}

#[test]
fn text_round_trip() {
    let cat = enumerate_low_dim(2, 1).unwrap();
    let text = cat.to_text();
    let back = Catalog::parse(&text).unwrap();
    assert_eq!(back.len(), 5);
    let mut a = cat.keys().to_vec();
    let mut b = back.keys().to_vec();
    a.sort();
    b.sort();
    assert_eq!(a, b);
    assert_eq!(back.to_text(), text);
}

#[test]
fn serialization_order_and_ids() {
    let cat = Catalog::from_polytopes(2, vec![make_v(2).unwrap(), make_t(2).unwrap()]).unwrap();
    assert_eq!(cat.ids(), &[1, 2]);
    assert_eq!(cat.entries()[0].num_vertices(), 3);
    let text = cat.to_text();
    assert!(text.starts_with("dim 2 vertices 3 id 1\n"));
}

#[test]
fn duplicate_classes_are_merged() {
    let text = "dim 2 vertices 3 id 7\n1 0\n0 1\n-1 -1\n\ndim 2 vertices 3 id 8\n0 1\n1 0\n-1 -1\n";
    let cat = Catalog::parse(text).unwrap();
    assert_eq!(cat.len(), 1);
    assert_eq!(cat.ids(), &[7]);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let repeated = "dim 2 vertices 3 id 1\n1 0\n0 1\n1 0\n";
    match Catalog::parse(repeated) {
        Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
    let bad_row = "dim 2 vertices 3\n1 0\n0 x\n-1 -1\n";
    assert!(matches!(Catalog::parse(bad_row), Err(CatalogError::Parse { line: 3, .. })));
    let short = "dim 2 vertices 3\n1 0\n0 1\n";
    assert!(matches!(Catalog::parse(short), Err(CatalogError::Parse { line: 1, .. })));
    let wrong_width = "# comment\ndim 2 vertices 3\n1 0 0\n";
    assert!(matches!(Catalog::parse(wrong_width), Err(CatalogError::Parse { line: 3, .. })));
    let header = "dimension 2\n";
    assert!(matches!(Catalog::parse(header), Err(CatalogError::Parse { line: 1, .. })));
    let gap = "dim 2 vertices 3\n1 0\n\n0 1\n-1 -1\n";
    assert!(matches!(Catalog::parse(gap), Err(CatalogError::Parse { line: 3, .. })));
    assert!(Catalog::parse("").is_err());
}

#[test]
fn validation_names_the_record() {
    let text = "dim 2 vertices 3 id 1\n1 0\n0 1\n-1 -1\n\ndim 2 vertices 3 id 42\n1 0\n0 1\n-1 -2\n";
    match Catalog::parse(text) {
        Err(CatalogError::Validation { id, line, .. }) => assert_eq!((id, line), (42, 6)),
        other => panic!("{other:?}"),
    }
    let mixed = "dim 2 vertices 3\n1 0\n0 1\n-1 -1\n\ndim 1 vertices 2\n1\n-1\n";
    assert!(matches!(Catalog::parse(mixed), Err(CatalogError::Validation { id: 2, .. })));
}

#[test]
fn records_keep_non_smooth_inputs() {
    let text = "dim 2 vertices 4\n2 0\n-2 0\n0 1\n0 -1\n";
    let recs = parse_records(text).unwrap();
    assert_eq!(recs.len(), 1);
    assert!(!recs[0].polytope.is_smooth_fano());
    assert_eq!(recs[0].id, None);
}
