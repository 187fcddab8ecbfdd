use wittstone_py::{explain, faithfully_flat, verify, witt_add, witt_mul, witt_polys_json, PyAlgebra, PyTower};

#[test]
fn witt_digits_over_f3_match_z9() {
    // W_2(F_3) = Z/9 with Teichmüller digits: [0] = 0, [1] = 1, [2] = -1 = 8
    let teich = [0u64, 1, 8];
    let value = |d: &[u64]| (teich[d[0] as usize] + 3 * teich[d[1] as usize]) % 9;
    for a0 in 0..3 {
        for a1 in 0..3 {
            for b0 in 0..3 {
                for b1 in 0..3 {
                    let (a, b) = (vec![a0, a1], vec![b0, b1]);
                    assert_eq!(value(&witt_add(3, a.clone(), b.clone()).unwrap()), (value(&a) + value(&b)) % 9);
                    assert_eq!(value(&witt_mul(3, a.clone(), b.clone()).unwrap()), value(&a) * value(&b) % 9);
                }
            }
        }
    }
    assert!(witt_add(4, vec![1], vec![1]).is_err());
    assert!(witt_add(2, vec![1, 0], vec![1]).is_err());
}

#[test]
fn towers_and_algebras() {
    let c = PyTower::cantor(3).unwrap();
    assert_eq!(c.level_sizes(), [1, 2, 4, 8]);
    assert!(c.is_replete());
    assert!(c.duality_round_trip(2, 2, 2).unwrap());
    assert_eq!(c.points_via_duality(2, 2, 2).unwrap(), 4);
    let back = PyTower::from_json(&c.to_json()).unwrap();
    assert_eq!(back.level_sizes(), c.level_sizes());
    assert!(PyTower::from_json("{}").is_err());

    let a = PyAlgebra::functions(3, 2).unwrap();
    assert!(a.is_p_boolean() && a.is_perfect());
    assert_eq!(a.characters().unwrap().len(), 2);
    assert!(PyAlgebra::functions(2, 0).is_err());
}

#[test]
fn flatness_suite_and_explain() {
    assert!(faithfully_flat(2, 2, vec![0, 1, 1]).unwrap());
    assert!(!faithfully_flat(2, 2, vec![1, 1]).unwrap());
    assert!(faithfully_flat(2, 2, vec![2]).is_err());
    let report: serde_json::Value = serde_json::from_str(&verify(Some(r#"{"criteria": [3], "max_level_size": 2}"#)).unwrap()).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert!(verify(Some(r#"{"bogus": 1}"#)).is_err());
    assert!(explain("duality.roundtrip").unwrap().contains("acceptance criterion: 4"));
    assert!(witt_polys_json(2, 2).unwrap().contains("products"));
}
