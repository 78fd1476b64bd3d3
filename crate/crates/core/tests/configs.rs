use std::collections::BTreeSet;
use std::path::PathBuf;

use cvhnn::harness::{cell, figure, ExperimentConfig, FIGURES};

fn config_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

#[test]
fn one_config_per_figure_cell() {
    let mut expected = BTreeSet::new();
    for name in FIGURES {
        for c in figure(name).unwrap().cells {
            expected.insert(c.label);
        }
    }
    let mut found = BTreeSet::new();
    for entry in std::fs::read_dir(config_dir()).unwrap() {
        let path = entry.unwrap().path();
        let stem = path.file_stem().unwrap().to_str().unwrap().to_string();
        let cfg = ExperimentConfig::load(&path).unwrap();
        let c = cell(&stem).unwrap_or_else(|| panic!("{stem} is not a figure cell"));
        assert_eq!(cfg.resolve(None, None).unwrap(), c.spec(2000, 7, 100_000), "{stem}");
        found.insert(stem);
    }
    assert_eq!(found, expected);
}
