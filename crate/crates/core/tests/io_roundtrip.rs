use std::io::Write;

use qamlz::dataset::{generate_synthetic, load_events, load_events_all, write_events, GeneratorSpec, BASE_VARIABLES, Process, Tag};
use qamlz::Error;

#[test]
fn written_events_load_back_unchanged() {
    let d = generate_synthetic(&GeneratorSpec::stop_like(), 300, 12).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("events.csv");
    write_events(std::fs::File::create(&path).unwrap(), &d).unwrap();
    assert_eq!(load_events_all(&path).unwrap(), d);
    let sub = load_events(&path, &d.schema[..3]).unwrap();
    assert_eq!(sub, d.select(&d.schema[..3]).unwrap());
}

#[test]
fn three_row_file_with_twelve_variables() {
    let base: Vec<String> = BASE_VARIABLES.iter().map(|s| s.to_string()).collect();
    let d = generate_synthetic(&GeneratorSpec::stop_like(), 3, 1).unwrap().select(&base).unwrap();
    assert_eq!(d.schema.len(), 12);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("three.csv");
    write_events(std::fs::File::create(&path).unwrap(), &d).unwrap();
    let back = load_events(&path, &d.schema).unwrap();
    assert_eq!(back.len(), 3);
    assert_eq!(back.schema, d.schema);
}

#[test]
fn process_column_is_optional() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plain.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "x,tag,weight\n0.5,1,2.0\n-0.5,-1,3.0").unwrap();
    let d = load_events_all(&path).unwrap();
    assert_eq!(d.schema, vec!["x".to_string()]);
    assert_eq!(d.events[0].tag, Tag::Signal);
    assert_eq!(d.events[0].process, Process::Signal);
    assert_eq!(d.events[1].process, Process::Other);
    assert_eq!(d.weight_sum(Tag::Background), 3.0);
}

#[test]
fn malformed_cells_report_row_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "x,tag,weight\n0.5,1,2.0\nabc,-1,3.0").unwrap();
    match load_events_all(&path) {
        Err(Error::Parse { row, column, .. }) => {
            assert_eq!(row, 2);
            assert_eq!(column, "x");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "x,tag,weight\n0.5,2,2.0").unwrap();
    assert!(matches!(load_events_all(&path), Err(Error::Parse { row: 1, .. })));
    assert!(matches!(load_events(&path, &["y".to_string()]), Err(Error::MissingColumn(c)) if c == "y"));
}
