//! Scenarios shipped with the binary, resolvable by name.

pub const BUNDLED: &[(&str, &str)] = &[
    ("generic_cusp", include_str!("../scenarios/generic_cusp.scn")),
    ("poly_swallowtail", include_str!("../scenarios/poly_swallowtail.scn")),
    ("swallowtail6", include_str!("../scenarios/swallowtail6.scn")),
    ("orthogonal_zeta", include_str!("../scenarios/orthogonal_zeta.scn")),
];

/// Text of the bundled scenario `name`, with or without the `.scn` suffix.
pub fn lookup(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".scn").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Scenario;

    #[test]
    fn all_bundled_scenarios_parse() {
        for (name, text) in BUNDLED {
            let sc: Scenario = text.parse().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(sc.name, *name);
            assert!(sc.expect.is_some());
        }
        assert!(lookup("generic_cusp.scn").is_some());
    }
}
