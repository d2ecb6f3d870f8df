//! Regenerates the gadget catalog under data/: one configuration file per
//! gadget plus the adjacent expected-spectrum file. Run after changing any
//! gadget constructor:
//!
//!     cargo run -p udwit --example gen_catalog

use std::fs;

use udwit::{
    attach_rhombus, attach_triangle, build_chain, build_spindle, spectrum, Configuration, Point,
    Side,
};

fn edge(labels: (&str, &str)) -> (String, String) {
    (labels.0.to_string(), labels.1.to_string())
}

fn write_entry(dir: &str, name: &str, cfg: &Configuration, pair: (&str, &str)) {
    fs::write(format!("{dir}/{name}.json"), cfg.to_json()).unwrap();
    let sp = spectrum(cfg, pair.0, pair.1).unwrap();
    let expected = serde_json::json!({
        "pair": [pair.0, pair.1],
        "complete": sp.complete,
        "values": sp.render(),
    });
    fs::write(
        format!("{dir}/{name}.spectrum.json"),
        serde_json::to_string_pretty(&expected).unwrap(),
    )
    .unwrap();
    println!("wrote {name}: pair ({}, {}), complete = {}", pair.0, pair.1, sp.complete);
}

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    fs::create_dir_all(dir).unwrap();

    let unit_edge = Configuration::new(
        2,
        vec![
            Point::parse("X", &["0", "0"]).unwrap(),
            Point::parse("Y", &["1", "0"]).unwrap(),
        ],
        vec![edge(("X", "Y"))],
    )
    .unwrap();
    write_entry(dir, "edge", &unit_edge, ("X", "Y"));

    let (triangle, _apex) = attach_triangle(&unit_edge, "X", "Y", Side::Up).unwrap();
    write_entry(dir, "triangle", &triangle, ("X", "Y"));

    let base = Configuration::new(
        2,
        vec![
            Point::parse("B", &["0", "0"]).unwrap(),
            Point::parse("D", &["1", "0"]).unwrap(),
        ],
        vec![edge(("B", "D"))],
    )
    .unwrap();
    let (rhombus, a, c) = attach_rhombus(&base, "B", "D").unwrap();
    write_entry(dir, "rhombus", &rhombus, (&a, &c));

    let bare = Configuration::new(
        2,
        vec![
            Point::parse("X", &["0", "0"]).unwrap(),
            Point::parse("Y", &["3/2", "0"]).unwrap(),
        ],
        vec![],
    )
    .unwrap();
    let (chain2, _links) = build_chain(&bare, "X", "Y", 2).unwrap();
    write_entry(dir, "chain2", &chain2, ("X", "Y"));

    write_entry(dir, "spindle", &build_spindle(), ("P", "A1"));
}
