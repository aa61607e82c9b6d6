//! docdrift core library.
//!
//! Keeps customer-facing documentation and the procedures it documents on
//! a single information source, and quantifies the cost when they drift:
//!
//! - [`dita`] — parse and serialize the command-bearing subset of DITA
//!   topics, including `<placeholder>` detection in command text.
//! - [`runbook`] — the runbook file format: ordered steps carrying a
//!   command template, documentation prose, and expected outcomes.
//! - [`docgen`] — generate DITA topics from a runbook and detect drift
//!   between a runbook and existing documentation.
//! - [`doctest`] — extract documented commands, resolve placeholders, run
//!   them through a pluggable runner, and report failures as
//!   documentation-defect candidates.
//! - [`debt`] — documentation-debt analytics over bug-report datasets:
//!   document-type distribution, defect-taxonomy frequencies, cost
//!   metrics, and automation-savings estimates.

pub mod debt;
pub mod dita;
pub mod docgen;
pub mod doctest;
pub mod runbook;

#[cfg(feature = "testkit")]
pub mod testkit;
