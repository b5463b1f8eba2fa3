use restriction_core::asymptotics::{fit_points, stepped, write_fit_csv};
use restriction_core::linear::{state_of_art_table, write_table_csv, PriorRegistry};
use restriction_core::params::verify_identities;
use restriction_core::{Exec, Rational};

const TABLE: &str = include_str!("golden/table_5_19.csv");
const FIT: &str = include_str!("golden/fit_100_1000.csv");
const PARAMS: &str = include_str!("golden/params_5_2.json");

fn render<F: FnOnce(&mut Vec<u8>)>(f: F) -> String {
    let mut buf = Vec::new();
    f(&mut buf);
    String::from_utf8(buf).unwrap()
}

#[test]
fn table_csv_matches_golden() {
    for exec in [Exec::Sequential, Exec::Parallel] {
        let rows = state_of_art_table(5, 19, &PriorRegistry::standard(), exec).unwrap();
        assert_eq!(render(|b| write_table_csv(&rows, b).unwrap()), TABLE);
    }
}

#[test]
fn table_golden_agrees_with_hand_values() {
    let hand = [
        (5, "63/100"),
        (7, "429/1018"),
        (9, "7293/23032"),
        (11, "12597/49670"),
        (13, "185725/878068"),
        (14, "1671525/8414731"),
        (15, "2/11"),
        (16, "20036013/116580449"),
        (17, "4/25"),
        (18, "123751845/817128103"),
        (19, "1/7"),
    ];
    for (n, frac) in hand {
        let line = TABLE.lines().find(|l| l.starts_with(&format!("{n},"))).unwrap();
        let cols: Vec<&str> = line.split(',').collect();
        let p: Rational = format!("{}/{}", cols[1], cols[2]).parse().unwrap();
        let expected = &Rational::from(2) + &frac.parse::<Rational>().unwrap();
        assert_eq!(p, expected, "n = {n}");
    }
}

#[test]
fn fit_csv_matches_golden() {
    let rows = fit_points(&stepped(100, 1000, 300), Exec::default()).unwrap();
    assert_eq!(render(|b| write_fit_csv(&rows, b).unwrap()), FIT);
}

#[test]
fn params_json_matches_golden() {
    let report = verify_identities(5, 2).unwrap();
    let golden: serde_json::Value = serde_json::from_str(PARAMS).unwrap();
    assert_eq!(report.to_json(), golden);
    assert_eq!(golden["all_zero"], serde_json::Value::Bool(true));
}
