//! The bundled corpus: twelve motives spanning the pure cases, dependent
//! entries, signs, fractions and ranks up to 3×3.

pub const BUNDLED: [(&str, &str); 12] = [
    (
        "example_r0d0",
        include_str!("../corpus/example_r0d0.motive"),
    ),
    (
        "example_r1d0",
        include_str!("../corpus/example_r1d0.motive"),
    ),
    (
        "example_r0d1",
        include_str!("../corpus/example_r0d1.motive"),
    ),
    (
        "example_r1d1_u2",
        include_str!("../corpus/example_r1d1_u2.motive"),
    ),
    (
        "example_r1d1_u1",
        include_str!("../corpus/example_r1d1_u1.motive"),
    ),
    (
        "example_r1d1_neg",
        include_str!("../corpus/example_r1d1_neg.motive"),
    ),
    (
        "example_r2d1",
        include_str!("../corpus/example_r2d1.motive"),
    ),
    (
        "example_r1d2_dep",
        include_str!("../corpus/example_r1d2_dep.motive"),
    ),
    (
        "example_r2d2",
        include_str!("../corpus/example_r2d2.motive"),
    ),
    (
        "example_r3d2",
        include_str!("../corpus/example_r3d2.motive"),
    ),
    (
        "example_r2d3",
        include_str!("../corpus/example_r2d3.motive"),
    ),
    (
        "example_r3d3",
        include_str!("../corpus/example_r3d3.motive"),
    ),
];

pub fn get(name: &str) -> Option<&'static str> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, content)| *content)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doc::MotiveDocument;

    #[test]
    fn corpus_parses_and_names_match() {
        assert_eq!(BUNDLED.len(), 12);
        for (name, content) in BUNDLED {
            let doc = MotiveDocument::parse(content).unwrap_or_else(|e| {
                panic!("corpus file {name} does not parse: {e}");
            });
            assert_eq!(doc.name, name);
            doc.to_motive().unwrap();
        }
    }

    #[test]
    fn lookup_by_name() {
        assert!(get("example_r1d0").is_some());
        assert!(get("missing").is_none());
    }
}
