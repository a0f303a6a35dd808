use qudit_thresholds::data;
use qudit_thresholds::stabilizer::CodeId;
use qudit_thresholds::wigner::PhasePointIndex;
use qudit_thresholds::witness::{
    derive_witness, load_witness_file, same_witness, save_witness_file, Witness,
};

fn derived(code: CodeId, d: u32, u: &[i64]) -> Witness {
    derive_witness(code, &PhasePointIndex::new(d, u).unwrap()).unwrap()
}

#[test]
fn qutrit_tuple_files_match_derived_witnesses() {
    let expected = [
        ("A1", CodeId::A, [0, 0, 2, 1]),
        ("A2", CodeId::A, [0, 0, 1, 2]),
        ("AT1", CodeId::AT, [0, 0, 2, 1]),
        ("AT2", CodeId::AT, [0, 0, 1, 2]),
        ("B1", CodeId::B, [0, 0, 0, 0]),
        ("B2", CodeId::B, [0, 0, 1, 2]),
        ("B3", CodeId::B, [0, 2, 2, 0]),
    ];
    let shipped = data::qutrit_witnesses().unwrap();
    for ((name, w), (want, code, u)) in shipped.iter().zip(expected) {
        assert_eq!(*name, want);
        assert!(same_witness(w, &derived(code, 3, &u), 1e-12), "{name}");
    }
}

#[test]
fn qubit_files_match_derived_witnesses() {
    for (name, w) in data::qubit_witnesses().unwrap() {
        let code: CodeId = name.parse().unwrap();
        assert!(
            same_witness(&w, &derived(code, 2, &[0, 0, 0]), 1e-12),
            "{name}"
        );
    }
}

#[test]
fn d5_tuple_list_matches_parity_code() {
    let w = data::d5_facet().unwrap();
    assert!(same_witness(
        &w,
        &derived(CodeId::B, 5, &[0, 0, 0, 1, 3, 1]),
        1e-12
    ));
}

#[test]
fn witness_files_survive_disk() {
    let dir = std::env::temp_dir().join(format!("qthresh-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, w) in data::qutrit_witnesses().unwrap() {
        let path = dir.join(format!("{name}.tuples"));
        save_witness_file(&w, &path).unwrap();
        let back = load_witness_file(&path).unwrap();
        assert!(same_witness(&w, &back, 1e-12));
        assert_eq!(back.tuples, w.tuples);
    }
    let d7 = data::d7_witness().unwrap();
    let path = dir.join("d7.tuples");
    save_witness_file(&d7, &path).unwrap();
    assert!(same_witness(&d7, &load_witness_file(&path).unwrap(), 1e-12));
    std::fs::remove_dir_all(&dir).unwrap();
}
