mod common;

use std::fs;

use common::{build, corpus_graph, dir_files, g0};
use sigcube::cube::{read_cube_meta, CuboidFile};
use sigcube::{read_cuboid, write_cube, Error, PrunePolicy, Strategy};

#[test]
fn round_trip_matches_network() {
    let g = g0();
    let cube = build(&g, PrunePolicy::None, Strategy::StepsUp, 1);
    let dir = tempfile::tempdir().unwrap();
    write_cube(&cube, dir.path(), true).unwrap();

    let meta = read_cube_meta(dir.path()).unwrap();
    assert_eq!(meta.dims, ["Gender", "City"]);
    assert_eq!(meta.fingerprint, g.fingerprint());
    assert!(meta.members);

    for (sig, net) in cube.cuboids() {
        let names: Vec<&str> = sig.iter().map(|&d| g.catalog().dims()[d].as_str()).collect();
        let stored = read_cuboid(dir.path(), &names).unwrap();
        assert_eq!(stored, CuboidFile::from_network(net, g.catalog(), true));
    }
    let gc = read_cuboid(dir.path(), &["City", "Gender"]).unwrap();
    assert_eq!(gc.nodes.len(), 4);
    assert_eq!(gc.members.unwrap()["M|NY"], vec![1, 3]);
}

#[test]
fn members_optional() {
    let cube = build(&g0(), PrunePolicy::None, Strategy::StepsUp, 1);
    let dir = tempfile::tempdir().unwrap();
    write_cube(&cube, dir.path(), false).unwrap();
    let f = read_cuboid(dir.path(), &["Gender"]).unwrap();
    assert!(f.members.is_none());
    assert!(!fs::read_to_string(dir.path().join("Gender.cuboid")).unwrap().contains("\nM\t"));
}

#[test]
fn tampered_file_reports_line() {
    let cube = build(&g0(), PrunePolicy::None, Strategy::StepsUp, 1);
    let dir = tempfile::tempdir().unwrap();
    write_cube(&cube, dir.path(), true).unwrap();
    let path = dir.path().join("City.cuboid");
    let mut text = fs::read_to_string(&path).unwrap();
    text = text.replacen("N\tLA\t3", "N\tLA\tthree", 1);
    fs::write(&path, text).unwrap();
    match read_cuboid(dir.path(), &["City"]) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn writing_is_deterministic() {
    for seed in 0..5 {
        let g = corpus_graph(seed);
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        write_cube(&build(&g, PrunePolicy::SsMean, Strategy::StepsUp, 1), a.path(), true).unwrap();
        write_cube(&build(&g, PrunePolicy::SsMean, Strategy::StepsUp, 3), b.path(), true).unwrap();
        assert_eq!(dir_files(a.path(), false), dir_files(b.path(), false));
    }
}

#[test]
fn missing_directory_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = read_cuboid(&dir.path().join("nowhere"), &["A"]).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
