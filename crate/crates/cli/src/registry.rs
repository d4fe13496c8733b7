//! The command registry: every analysis the binary offers implements
//! [`AnalysisCommand`] and is registered by name here, so the top-level
//! argument parser and the dispatch loop are both driven by the same list.

use cuntz_ideals::Result;

use crate::config::InputFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

pub struct RunContext {
    pub input: Option<InputFile>,
    pub seed: u64,
}

impl RunContext {
    /// The parsed input file; commands that require one call this.
    pub fn input(&self) -> Result<&InputFile> {
        self.input.as_ref().ok_or_else(|| {
            cuntz_ideals::Error::Precondition("this command requires an input file".into())
        })
    }
}

/// What a command produced, in every format it supports; the driver picks
/// the one the user asked for.
pub struct CmdOutput {
    pub text: String,
    pub json: serde_json::Value,
    /// DOT rendering, for commands that have a graph to draw.
    pub dot: Option<String>,
}

pub trait AnalysisCommand {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    /// Whether the command reads an action description file.
    fn needs_input(&self) -> bool {
        true
    }
    fn run(&self, ctx: &RunContext) -> Result<CmdOutput>;
}

pub fn registry() -> Vec<Box<dyn AnalysisCommand>> {
    vec![
        Box::new(crate::commands::Analyze),
        Box::new(crate::commands::Ideals),
        Box::new(crate::commands::KGroups),
        Box::new(crate::commands::SetQuery),
        Box::new(crate::commands::SelfCheck),
    ]
}
