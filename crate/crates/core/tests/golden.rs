use std::path::PathBuf;

use spectral_enclosure::harness::{
    run, ExperimentConfig, RunOptions, CONVERGENCE_HEADER, CSV_SCHEMA, ENCLOSURE_HEADER, RANDOM_HEADER, REPORT_HEADER,
    RESOLVENT_HEADER,
};

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn scratch(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("specenc-golden-{tag}-{}", std::process::id()))
}

#[test]
fn csv_headers_are_pinned() {
    assert_eq!(CSV_SCHEMA, 1);
    assert_eq!(
        ENCLOSURE_HEADER,
        "sample,seed,target_norm,vnorm,eig_re,eig_im,min_c,min_c_disc,min_c_central,best_disc,enclosed"
    );
    assert_eq!(REPORT_HEADER, "name,lhs,rhs_factor,ratio,params,verdict");
    assert_eq!(RESOLVENT_HEADER, "z_re,z_im,x,y,norm,p,pprime");
    assert_eq!(RANDOM_HEADER, "cells,h,sample,seed,vnorm,x,argmax_lambda");
    assert_eq!(CONVERGENCE_HEADER, "size,n_modes,vnorm,c_emp,drift,tracked");
}

#[test]
fn region_figure_matches_golden() {
    let cfg = ExperimentConfig::from_file(&crate_dir().join("configs/region_alpha5.cfg")).unwrap();
    let root = scratch("svg");
    let out = run(&cfg, &RunOptions { root: root.clone(), strict: true }).unwrap();
    let svg = std::fs::read_to_string(out.dir.join("region.svg")).unwrap();
    let golden = std::fs::read_to_string(crate_dir().join("tests/golden/region_alpha5.svg")).unwrap();
    std::fs::remove_dir_all(&root).ok();
    assert_eq!(svg, golden);
}

#[test]
fn shipped_configs_parse() {
    let dir = crate_dir().join("configs");
    let mut count = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cfg") {
            let cfg = ExperimentConfig::from_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(ExperimentConfig::parse(&cfg.echo()).unwrap(), cfg);
            count += 1;
        }
    }
    assert!(count >= 5);
}

#[test]
fn shift_config_reproduces_its_digests() {
    let cfg = ExperimentConfig::from_file(&crate_dir().join("configs/shift_torus1.cfg")).unwrap();
    let a = run(&cfg, &RunOptions { root: scratch("a"), strict: true }).unwrap();
    let b = run(&cfg, &RunOptions { root: scratch("b"), strict: true }).unwrap();
    assert_eq!(a.manifest.files, b.manifest.files);
    assert!(a.manifest.verify(&a.dir).unwrap().is_empty());
    let header = std::fs::read_to_string(a.dir.join("enclosure.csv")).unwrap();
    assert!(header.starts_with(ENCLOSURE_HEADER));
    std::fs::remove_dir_all(scratch("a")).ok();
    std::fs::remove_dir_all(scratch("b")).ok();
}
