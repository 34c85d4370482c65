//! CLI outputs against files under `tests/golden/`. Set `UPDATE_GOLDEN=1`
//! to rewrite them.

use std::fs;
use std::path::Path;

use simhyp::cli::{run, RunConfig};

fn check(name: &str) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let conf = fs::read_to_string(dir.join(format!("{name}.conf"))).unwrap();
    let actual = run(&RunConfig::parse(&conf).unwrap()).unwrap();
    let path = dir.join(format!("{name}.tsv"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, &actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap();
    assert_eq!(actual, expected, "{name} differs from its golden file");
}

#[test]
fn example_4_9_audit() {
    check("example_4_9");
    let text = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/example_4_9.tsv")).unwrap();
    assert!(text.contains("# oracle_limit\t1/3\n"));
    assert!(text.contains("# first_divergence\t1\n"));
}

#[test]
fn density_by_enumeration() {
    check("density_f2xf3_bfs");
}

#[test]
fn density_by_series() {
    check("density_f2xf3_series");
}

#[test]
fn bass_serre_ball() {
    check("ball_bass_serre");
}
