use kummerian::fixtures;
use kummerian::format::{parse, to_file_string, FormatError};
use kummerian_testkit::{random_oriented, rng};

#[test]
fn random_files_round_trip() {
    let mut r = rng(31);
    for _ in 0..500 {
        let text = random_oriented(&mut r, 5, 4, 4, 2);
        let op = parse(&text).unwrap();
        let again = parse(&to_file_string(&op)).unwrap();
        assert_eq!(op, again, "{text}");
    }
}

#[test]
fn corpus_families_round_trip() {
    let op = parse(&fixtures::amalgam(3, 2, 2, Some("1-p"), 4)).unwrap();
    assert_eq!(parse(&to_file_string(&op)).unwrap(), op);
    let op = parse(&fixtures::endgame(3, "(1-p)^p", 5)).unwrap();
    assert_eq!(op.orientation().value(0).as_padic().value(), 235);
}

#[test]
fn unknown_generator_is_named() {
    let err = parse("prime 3\ngenerators x\nrelator x w\n").unwrap_err();
    assert!(matches!(err, FormatError::Syntax { line: 3, .. }), "{err:?}");
    assert!(err.to_string().contains('w'), "{err}");
}
