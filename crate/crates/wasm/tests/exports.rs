use cubicpoles_wasm::{ball_mass_curve_json, m_sequence_json, sharpness_json};

#[test]
fn sharpness_view_has_fifteen_thirds() {
    let v: serde_json::Value = serde_json::from_str(&sharpness_json(7).unwrap()).unwrap();
    assert_eq!(v["lines"].as_array().unwrap().len(), 6);
    assert_eq!(v["points"].as_array().unwrap().len(), 15);
    assert!(v["lelong"].as_array().unwrap().iter().all(|x| x == "1/3"));
    assert_eq!(v["all_full_rank"], true);
}

#[test]
fn ball_masses_settle_on_the_exact_value() {
    let v: serde_json::Value = serde_json::from_str(&ball_mass_curve_json(7, 0, 24).unwrap()).unwrap();
    assert_eq!(v["exact"], "1/3");
    let samples = v["samples"].as_array().unwrap();
    let last = samples.last().unwrap()[1].as_f64().unwrap();
    assert_eq!(last, 1.0 / 6.0 + 1.0 / 6.0);
    assert!(ball_mass_curve_json(7, 15, 4).is_err());
}

#[test]
fn m_sequence_of_typed_points() {
    let pts = r#"[["0","0"],["1","0"],["2","0"],["0","1"],["1","1","1"],["5","7"]]"#;
    let v: serde_json::Value = serde_json::from_str(&m_sequence_json(pts).unwrap()).unwrap();
    assert_eq!(v["m1"], 3);
    assert_eq!(v["m2"], 5);
    assert!(v["witnesses"][0]["curve"].is_string());
    assert!(m_sequence_json("[[\"a\",\"1\"]]").is_err());
}
