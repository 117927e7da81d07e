//! Scenario-driven batch runs of the g-frame diagnostics.
//!
//! A scenario (TOML) names a model, an algebra, a list of `(p, weight)` pairs
//! and a subset of the tasks in [`scenario::Task`]. [`run_scenario`] executes
//! the tasks in order and [`report::write_outputs`] writes one CSV per task plus
//! `summary.json`. Output files contain no timing information, so repeated runs
//! are byte-identical.

pub mod report;
pub mod scenario;
pub mod tasks;

use std::fmt;

use report::Table;
use scenario::{Scenario, Task};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A task that failed, with the library error message.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskError {
    pub task: Option<Task>,
    pub message: String,
}

impl fmt::Display for TaskError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.task {
            Some(t) => write!(f, "task {} failed: {}", t.name(), self.message),
            None => write!(f, "model construction failed: {}", self.message),
        }
    }
}

impl std::error::Error for TaskError {}

/// Runs every task of the scenario, stopping at the first failure.
pub fn run_scenario(scenario: &Scenario, mut on_done: impl FnMut(Task, &Table)) -> Result<Vec<(Task, Table)>, TaskError> {
    let ctx = tasks::Context::new(scenario).map_err(|e| TaskError { task: None, message: e.to_string() })?;
    let mut out = Vec::with_capacity(scenario.tasks.len());
    for &task in &scenario.tasks {
        let table = ctx.run(task).map_err(|e| TaskError { task: Some(task), message: e.to_string() })?;
        on_done(task, &table);
        out.push((task, table));
    }
    Ok(out)
}
