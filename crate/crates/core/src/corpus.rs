//! Bundled geographies and nerves, embedded at build time.

use crate::formats::{FormatError, InputFile};
use crate::geography::Geography;
use crate::program::DecoratedNerve;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub file_name: &'static str,
    pub text: &'static str,
}

macro_rules! entry {
    ($name:literal, $file:literal) => {
        CorpusEntry {
            name: $name,
            file_name: $file,
            text: include_str!(concat!("../corpus/", $file)),
        }
    };
}

static ENTRIES: &[CorpusEntry] = &[
    entry!("dp2", "dp2.geo.json"),
    entry!("dp3", "dp3.nerve.json"),
    entry!("fig3_left", "fig3_left.geo.json"),
    entry!("fig3_right", "fig3_right.geo.json"),
    entry!("fig4_left", "fig4_left.geo.json"),
    entry!("fig4_mid", "fig4_mid.geo.json"),
    entry!("fig4_bottom", "fig4_bottom.geo.json"),
    entry!("fig5_tl", "fig5_tl.geo.json"),
    entry!("fig5_tr", "fig5_tr.geo.json"),
    entry!("fig5_bl", "fig5_bl.geo.json"),
    entry!("fig5_br", "fig5_br.geo.json"),
];

pub fn entries() -> &'static [CorpusEntry] {
    ENTRIES
}

pub fn get(name: &str) -> Option<&'static CorpusEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name || e.file_name == name)
}

impl CorpusEntry {
    pub fn parse(&self) -> InputFile {
        InputFile::parse(self.text).expect("bundled corpus parses")
    }

    pub fn is_nerve(&self) -> bool {
        matches!(self.parse(), InputFile::Nerve(_))
    }

    pub fn provenance(&self) -> Option<String> {
        match self.parse() {
            InputFile::Geography(g) => g.provenance,
            InputFile::Nerve(n) => n.provenance,
        }
    }

    pub fn geography(&self) -> Option<Result<Geography, FormatError>> {
        match self.parse() {
            InputFile::Geography(g) => Some(g.to_geography()),
            InputFile::Nerve(_) => None,
        }
    }

    pub fn nerve(&self) -> Option<Result<DecoratedNerve, FormatError>> {
        match self.parse() {
            InputFile::Nerve(n) => Some(n.to_nerve()),
            InputFile::Geography(_) => None,
        }
    }
}

/// Shorthand for a bundled geography known to be well formed.
pub fn geography(name: &str) -> Geography {
    get(name)
        .and_then(CorpusEntry::geography)
        .unwrap_or_else(|| panic!("no bundled geography {name}"))
        .expect("bundled geography is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_is_canonical() {
        for e in entries() {
            assert_eq!(e.parse().to_json(), e.text, "{}", e.name);
            assert!(e.provenance().is_some(), "{}", e.name);
        }
    }

    #[test]
    fn lookup() {
        assert!(get("dp2").is_some());
        assert!(get("dp3.nerve.json").unwrap().is_nerve());
        assert!(get("nope").is_none());
    }
}
