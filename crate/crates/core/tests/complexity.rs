use jio_stap::complexity::*;
use jio_stap::rank::Selector;

const POINTS: [(u64, u64); 3] = [(4, 2), (16, 4), (64, 8)];

/// Printed polynomials evaluated by hand; selection rules over ranks 3 to 8.
const GOLDEN: [(&str, [(u64, u64); 3]); 8] = [
    ("full-rank", [(43, 106), (739, 1570), (12163, 24706)]),
    ("proposed", [(54, 166), (806, 1972), (12486, 29320)]),
    ("mswf", [(58, 72), (1346, 1422), (37186, 37914)]),
    ("avf", [(125, 180), (4059, 4422), (130679, 133386)]),
    ("multiple-filters", [(2207, 3840), (6383, 14064), (74927, 175920)]),
    ("extended", [(11, 0), (11, 0), (11, 0)]),
    ("stopping-rule", [(71, 126), (311, 1638), (1271, 24966)]),
    ("cv", [(77, 30), (341, 102), (1397, 390)]),
];

fn evaluate(name: &str, jm: u64, d: u64) -> OpCount {
    let sel = |s| cost_rank_selection(s, jm, 3, 8);
    match name {
        "full-rank" => cost_full_rank(jm),
        "proposed" => cost_proposed(jm, d),
        "mswf" => cost_mswf(jm, d),
        "avf" => cost_avf(jm, d),
        "multiple-filters" => sel(Selector::Multiple),
        "extended" => sel(Selector::Extended),
        "stopping-rule" => sel(Selector::Stopping),
        "cv" => sel(Selector::CrossValidation),
        other => panic!("no formula {other}"),
    }
    .unwrap()
}

#[test]
fn every_row_matches_the_golden_integers() {
    for (name, expect) in GOLDEN {
        assert!(FORMULAS.iter().any(|f| f.name == name), "{name} has no formula string");
        for ((jm, d), (a, m)) in POINTS.into_iter().zip(expect) {
            assert_eq!(evaluate(name, jm, d), OpCount::new(a, m), "{name} at JM={jm}, D={d}");
        }
    }
}

#[test]
fn stopping_rule_reading_is_recorded_with_its_formula() {
    let row = FORMULAS.iter().find(|f| f.name == "stopping-rule").unwrap();
    assert_eq!(row.additions, "2(2x-1)Δ + 1");
    // the alternative parenthesization 2(2x-1)(Δ+1) would give 84 here
    assert_eq!(evaluate("stopping-rule", 4, 0).additions, 71);
}

#[test]
fn sweep_csv_covers_every_algorithm() {
    let rows = sweep(4..=64, 4).unwrap();
    assert_eq!(rows.len(), 61 * 4);
    let mut out = Vec::new();
    write_sweep_csv(&rows, &mut out).unwrap();
    let mut rd = csv::Reader::from_reader(out.as_slice());
    let recs: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), rows.len());
    let r = recs.iter().find(|r| &r[0] == "16" && &r[1] == "mswf").unwrap();
    assert_eq!((&r[2], &r[3]), ("1346", "1422"));
}
