use serde_json::Value;
use smooth_fano_web::{analyze_json, construct_text, moves_json};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn constructions_round_trip_through_analysis() {
    for (name, params, vertices) in
        [("T", "3", 4), ("V", "2", 6), ("Vt", "4", 9), ("pic3", "2 2", 8), ("cor45", "6 4", 10)]
    {
        let text = construct_text(name, params).unwrap();
        let doc = parse(&analyze_json(&text).unwrap());
        assert_eq!(doc["vertices"], vertices, "{name} {params}");
        assert_eq!(doc["smooth_fano"], true);
    }
}

#[test]
fn analysis_reports_patterns() {
    let doc = parse(&analyze_json(&construct_text("pic3", "2 2").unwrap()).unwrap());
    assert_eq!(doc["isolated_pattern"], serde_json::json!([2, 2]));
    assert_eq!(doc["relations"].as_array().unwrap().len(), 5);
    assert!(doc["relations"].as_array().unwrap().iter().all(|r| r["degree"].as_i64().unwrap() > 0));
    let simplex = parse(&analyze_json(&construct_text("T", "2").unwrap()).unwrap());
    assert_eq!(simplex["isolated_pattern"], Value::Null);
    assert_eq!(simplex["relations"][0]["text"], "x0 + x1 + x2 = 0");
}

#[test]
fn non_smooth_input_gets_verdicts_only() {
    let doc = parse(&analyze_json("dim 2 vertices 4\n1 0\n0 1\n-1 0\n0 -2\n").unwrap());
    assert_eq!(doc["smooth_fano"], false);
    assert!(doc.get("relations").is_none());
    assert!(moves_json("dim 2 vertices 4\n1 0\n0 1\n-1 0\n0 -2\n", "F", 2).is_err());
}

#[test]
fn plane_moves() {
    let t2 = construct_text("T", "2").unwrap();
    let f = parse(&moves_json(&t2, "F", 0).unwrap());
    // the three blow-ups are equivalent, so one move is listed
    assert_eq!(f.as_array().unwrap().len(), 1);
    assert!(f.as_array().unwrap().iter().all(|m| m["vertices"] == 4));
    let i = parse(&moves_json(&t2, "I", 2).unwrap());
    assert!(i.as_array().unwrap().len() >= 3);
}

#[test]
fn bad_requests() {
    assert!(construct_text("T", "").is_err());
    assert!(construct_text("T", "x").is_err());
    assert!(construct_text("Q", "2").is_err());
    assert!(analyze_json("").is_err());
    let t2 = construct_text("T", "2").unwrap();
    assert!(moves_json(&t2, "G", 1).is_err());
    assert!(moves_json(&t2, "I", 99).is_err());
    assert!(moves_json(&format!("{t2}{t2}"), "F", 1).is_err());
}
