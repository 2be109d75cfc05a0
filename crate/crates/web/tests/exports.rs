use lambda_griffiths_web::{biorth_gram_json, griffiths_table_json, relation_check_json, MAX_N};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn table_has_triangle_shape() {
    let v = parse(griffiths_table_json("1/2", "1/2", "1/2", "1", 2, false).unwrap());
    assert_eq!(v["points"].as_array().unwrap().len(), 6);
    assert_eq!(v["exact"][0][0], "4");
    assert_eq!(v["approx"][0][0], 4.0);
}

#[test]
fn tilde_table_transposes_under_p1_p3_swap() {
    let a = parse(griffiths_table_json("1/3", "2/5", "3/7", "-1/2", 3, true).unwrap());
    let b = parse(griffiths_table_json("3/7", "2/5", "1/3", "-1/2", 3, true).unwrap());
    let (a, b) = (
        a["exact"].as_array().unwrap(),
        b["exact"].as_array().unwrap(),
    );
    for r in 0..a.len() {
        for c in 0..a.len() {
            assert_eq!(a[r][c], b[c][r]);
        }
    }
}

#[test]
fn corrected_gram_is_diagonal_and_omega_is_not() {
    let v = parse(biorth_gram_json("1/2", "1/3", "1/5", "2", 3, "corrected").unwrap());
    assert_eq!(v["diagonal"], true);
    assert!(v["first_off_diagonal"].is_null());
    assert_eq!(v["exact"][0][0], "10125/32");
    let v = parse(biorth_gram_json("1/2", "1/3", "1/5", "2", 3, "omega").unwrap());
    assert_eq!(v["diagonal"], false);
    assert!(v["first_off_diagonal"]["value"].is_string());
}

#[test]
fn relations_hold_exactly() {
    let v = parse(relation_check_json("2/7", "-3/4", "5/3", "7/2", 4).unwrap());
    let rels = v["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 4);
    for r in rels {
        assert_eq!(r["exact_zero"], true, "{r}");
        assert_eq!(r["checked"], 15 * 15);
    }
}

#[test]
fn bad_input_is_an_error() {
    assert!(griffiths_table_json("1/2", "1/2", "1/2", "0", 2, false).is_err());
    assert!(griffiths_table_json("abc", "1/2", "1/2", "1", 2, false).is_err());
    assert!(biorth_gram_json("1/2", "1/2", "1/2", "1", 2, "flat").is_err());
    assert!(relation_check_json("1/2", "1/2", "1/2", "1", MAX_N + 1).is_err());
}
