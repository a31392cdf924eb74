use thom::doc::{Instance, InstanceDocument};
use thom::ideals::PairedIdeals;

const SCHEMA: &str = include_str!("../../../docs/schema.md");

fn json_blocks() -> Vec<&'static str> {
    SCHEMA.split("```json").skip(1).map(|rest| rest.split("```").next().unwrap()).collect()
}

#[test]
fn every_example_parses_and_builds() {
    let blocks = json_blocks();
    assert_eq!(blocks.len(), 6);
    let kinds: Vec<&str> = blocks
        .iter()
        .map(|b| {
            let doc = InstanceDocument::parse(b).unwrap_or_else(|e| panic!("{e}\n{b}"));
            doc.build().unwrap_or_else(|e| panic!("{e}\n{b}"));
            doc.kind()
        })
        .collect();
    assert_eq!(kinds, ["complex", "pair", "tower", "scattered", "set", "pattern"]);
}

#[test]
fn examples_mean_what_the_prose_says() {
    let blocks = json_blocks();
    let Instance::Set(s, ideals) = InstanceDocument::parse(blocks[4]).unwrap().build().unwrap() else { panic!() };
    assert_eq!(ideals, PairedIdeals::vertical());
    // F = 2, 5, 3, 4, 5, …
    for (i, f) in [(1, 2), (2, 5), (3, 3), (4, 4), (5, 5), (9, 9)] {
        assert!(s.contains(i, f) && !s.contains(i, f + 1));
    }
    let Instance::Pair(p) = InstanceDocument::parse(blocks[1]).unwrap().build().unwrap() else { panic!() };
    assert_eq!(p.sub.cells().len(), 2);
}
