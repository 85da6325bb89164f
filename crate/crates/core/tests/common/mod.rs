#![allow(dead_code)]

use std::path::PathBuf;

use maniplex::generators::random_maniplex;
use maniplex::io::read_mpx;
use maniplex::Maniplex;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture_paths() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixture_dir())
        .expect("fixtures directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "mpx"))
        .collect();
    paths.sort();
    paths
}

pub fn fixture(name: &str) -> Maniplex {
    let text = std::fs::read_to_string(fixture_dir().join(format!("{name}.mpx"))).expect("fixture file");
    Maniplex::new(read_mpx(&text).expect("valid mpx").graph).expect("valid maniplex")
}

pub fn fixtures() -> Vec<(String, Maniplex)> {
    fixture_paths()
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let m = fixture(&name);
            (name, m)
        })
        .collect()
}

/// Seeded corpus: ranks cycle through 1..=4 with budgets up to 512.
pub fn random_corpus(count: u64) -> Vec<(u64, Maniplex)> {
    (0..count)
        .map(|seed| {
            let rank = 1 + (seed % 4) as usize;
            let budget = [16, 48, 128, 512][(seed / 4 % 4) as usize];
            (seed, random_maniplex(rank, seed, budget).expect("random sample"))
        })
        .collect()
}
