//! Output formats shared by traces and analysis reports.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    /// Indented text for people.
    #[default]
    Human,
    /// `key=value` lines, one block per section, for scripts and tests.
    Machine,
}

/// Accumulates `key=value` lines.
#[derive(Debug, Default)]
pub struct KeyValues {
    out: String,
}

impl KeyValues {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn put(&mut self, key: impl AsRef<str>, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.out, "{}={}", key.as_ref(), value);
        self
    }

    /// Blank line between blocks.
    pub fn end_block(&mut self) -> &mut Self {
        self.out.push('\n');
        self
    }

    pub fn finish(self) -> String {
        self.out
    }
}
