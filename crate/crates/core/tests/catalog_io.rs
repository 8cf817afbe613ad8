use std::path::PathBuf;

use smooth_fano::catalog::{self, enumerate_low_dim, Catalog, CatalogError};

fn shipped_dim5() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/fano5.txt")
}

#[test]
fn catalogs_survive_a_text_round_trip() {
    for n in 2..=4 {
        let cat = enumerate_low_dim(n, default_bound(n)).unwrap();
        let back = Catalog::parse(&cat.to_text()).unwrap();
        assert_eq!(back.ids(), cat.ids());
        assert_eq!(back.keys(), cat.keys());
    }
}

fn default_bound(n: usize) -> i64 {
    catalog::default_start_bound(n) + 1
}

#[test]
fn records_of_different_dimensions_are_rejected() {
    let text = format!(
        "{}{}",
        catalog::format_record(&catalog::make_t(2).unwrap(), Some(1)),
        catalog::format_record(&catalog::make_t(3).unwrap(), Some(2))
    );
    assert!(Catalog::parse(&text).is_err());
}

#[test]
fn parse_errors_carry_line_numbers() {
    let text = "dim 2 vertices 3\n1 0\n0 1 7\n-1 -1\n";
    match catalog::parse_records(text) {
        Err(CatalogError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn shipped_dimension_five_catalog_is_consistent() {
    let path = shipped_dim5();
    if !path.exists() {
        eprintln!("skipping: {} not present", path.display());
        return;
    }
    let cat = Catalog::read(&path).unwrap();
    assert_eq!(cat.dim(), 5);
    assert_eq!(cat.len(), 866);
    assert!(cat.entries().iter().all(|p| p.is_smooth_fano()));
    let simplex = catalog::make_t(5).unwrap();
    assert_eq!(cat.find(&simplex).unwrap(), Some(0));
}
