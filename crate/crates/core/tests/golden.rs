//! Snapshot of the seeded random generator. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test -p supconv-core --test golden`.

use std::path::PathBuf;

use supconv_core::make_random;

#[test]
fn random_k2_n6_seed1() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/random_k2_N6_seed1.json");
    let file = make_random(2, 6, 1, 1.0).unwrap();
    let text = file.to_json() + "\n";
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let golden = std::fs::read_to_string(&path).expect("golden file present");
    assert_eq!(text, golden);
    assert_eq!(file.sha256(), supconv_core::FunctionFile::parse(&golden).unwrap().sha256());
}
