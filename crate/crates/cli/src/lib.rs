//! Command-line front end for `bfunc-core`: job files in, deterministic
//! JSON reports out.

pub mod fixtures;
pub mod job;
pub mod report;
pub mod tasks;

use job::{InputError, TaskName};
use std::time::Instant;
use tasks::{Outcome, Overrides};

/// Parses and runs one job; returns the task, its outcome, and the report.
pub fn run_source(src: &str, overrides: Overrides) -> Result<(TaskName, Outcome, serde_json::Value), InputError> {
    let start = Instant::now();
    let job = job::parse_job(src)?;
    let task = *job.task.get_ref();
    let outcome = tasks::run(&job, src, overrides)?;
    let report = report::build(task, &outcome, src, start.elapsed());
    Ok((task, outcome, report))
}
