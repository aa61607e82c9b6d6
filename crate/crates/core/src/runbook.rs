//! Runbook specifications: the single source both documentation and
//! execution derive from.
//!
//! A runbook is a YAML file (`*.runbook.yaml`) declaring topic metadata,
//! the placeholder variables its commands use, and an ordered list of
//! steps. Each step carries the documentation prose, the command template
//! with `<placeholder>` parameters, and the outcome expected when the
//! command runs against the system under test. The exact file layout is
//! documented in `docs/runbook-format.md`.

use regex::Regex;
use serde::Deserialize;

use crate::dita::{find_placeholders, is_valid_placeholder_name, CommandText};

/// Topic metadata rendered into generated documentation.
///
/// When the runbook file omits the `topic` section, the id and title are
/// derived from the runbook name, so regenerating the same runbook always
/// addresses the same topic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicMeta {
    pub topic_id: String,
    pub title: String,
    pub short_desc: Option<String>,
}

/// A declared placeholder variable. The default, when present, is an
/// example value for documentation rendering only; execution always takes
/// values from explicit bindings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableDecl {
    pub name: String,
    pub default: Option<String>,
}

/// Expected outcome of one executed command. `exit_status` is always
/// checked; output assertions apply to stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub exit_status: i32,
    pub output_contains: Vec<String>,
    pub output_regex: Option<String>,
}

impl Default for Expectation {
    fn default() -> Self {
        Self {
            exit_status: 0,
            output_contains: Vec::new(),
            output_regex: None,
        }
    }
}

/// One runbook step: prose for the documentation, the command template,
/// and the expected outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunbookStep {
    pub id: String,
    pub prose: String,
    pub command_template: CommandText,
    pub expectation: Expectation,
}

/// A parsed runbook. Step order is significant: steps document and execute
/// strictly in sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunbookSpec {
    pub name: String,
    pub topic_meta: TopicMeta,
    pub variables: Vec<VariableDecl>,
    pub steps: Vec<RunbookStep>,
}

impl RunbookSpec {
    pub fn variable(&self, name: &str) -> Option<&VariableDecl> {
        self.variables.iter().find(|v| v.name == name)
    }
}

/// A broken runbook invariant. Violations are data: validation reports all
/// of them at once instead of stopping at the first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A step id occurs more than once.
    DuplicateStepId { step_id: String },
    /// A step's command uses placeholders that no variable declares.
    UndeclaredPlaceholder { step_id: String, names: Vec<String> },
    /// A variable is declared more than once.
    DuplicateVariable { name: String },
    /// A declared variable name does not match `[a-z][a-z0-9_]*`.
    InvalidVariableName { name: String },
    /// A step's `output_regex` does not compile.
    InvalidRegex {
        step_id: String,
        pattern: String,
        message: String,
    },
    /// The topic id resolved to an empty string.
    EmptyTopicId,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::DuplicateStepId { step_id } => {
                write!(f, "duplicate step id {step_id:?}")
            }
            Violation::UndeclaredPlaceholder { step_id, names } => {
                write!(
                    f,
                    "step {step_id:?} uses undeclared placeholder(s): {}",
                    names.join(", ")
                )
            }
            Violation::DuplicateVariable { name } => {
                write!(f, "variable {name:?} declared more than once")
            }
            Violation::InvalidVariableName { name } => {
                write!(f, "variable name {name:?} does not match [a-z][a-z0-9_]*")
            }
            Violation::InvalidRegex {
                step_id,
                pattern,
                message,
            } => write!(
                f,
                "step {step_id:?} output_regex {pattern:?} does not compile: {message}"
            ),
            Violation::EmptyTopicId => write!(f, "topic id is empty"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunbookError {
    #[error("runbook syntax error: {0}")]
    Syntax(#[from] serde_yaml::Error),
    #[error("invalid runbook:{}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("\n  - {v}"))
        .collect::<String>()
}

// Wire format of the runbook file. Kept separate from the domain types so
// parsing stays lenient and validation can report every problem at once.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRunbook {
    name: String,
    #[serde(default)]
    topic: Option<RawTopic>,
    #[serde(default)]
    variables: Vec<RawVariable>,
    #[serde(default)]
    steps: Vec<RawStep>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTopic {
    #[serde(default)]
    id: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    shortdesc: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawVariable {
    Name(String),
    Full {
        name: String,
        #[serde(default)]
        default: Option<String>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    id: String,
    #[serde(default)]
    prose: String,
    command: String,
    #[serde(default)]
    expect: Option<RawExpect>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpect {
    #[serde(default)]
    exit_status: Option<i32>,
    #[serde(default)]
    output_contains: Option<Vec<String>>,
    #[serde(default)]
    output_regex: Option<String>,
}

/// Parses and validates a runbook file. All validation failures are
/// collected into a single [`RunbookError::Invalid`].
pub fn parse_runbook(text: &str) -> Result<RunbookSpec, RunbookError> {
    let raw: RawRunbook = serde_yaml::from_str(text)?;
    let spec = build_spec(raw);
    let violations = validate_runbook(&spec);
    if violations.is_empty() {
        Ok(spec)
    } else {
        Err(RunbookError::Invalid(violations))
    }
}

fn build_spec(raw: RawRunbook) -> RunbookSpec {
    let name = raw.name.trim().to_string();
    let topic_meta = match raw.topic {
        Some(t) => TopicMeta {
            topic_id: t
                .id
                .map(|s| s.trim().to_string())
                .unwrap_or_else(|| derive_topic_id(&name)),
            title: t
                .title
                .map(|s| s.trim().to_string())
                .unwrap_or_else(|| name.clone()),
            short_desc: t.shortdesc.map(|s| s.trim().to_string()),
        },
        None => TopicMeta {
            topic_id: derive_topic_id(&name),
            title: name.clone(),
            short_desc: None,
        },
    };
    let variables = raw
        .variables
        .into_iter()
        .map(|v| match v {
            RawVariable::Name(name) => VariableDecl {
                name: name.trim().to_string(),
                default: None,
            },
            RawVariable::Full { name, default } => VariableDecl {
                name: name.trim().to_string(),
                default,
            },
        })
        .collect();
    let steps = raw
        .steps
        .into_iter()
        .map(|s| RunbookStep {
            id: s.id.trim().to_string(),
            prose: s.prose.trim().to_string(),
            command_template: CommandText::new(&s.command),
            expectation: s
                .expect
                .map(|e| Expectation {
                    exit_status: e.exit_status.unwrap_or(0),
                    output_contains: e.output_contains.unwrap_or_default(),
                    output_regex: e.output_regex,
                })
                .unwrap_or_default(),
        })
        .collect();
    RunbookSpec {
        name,
        topic_meta,
        variables,
        steps,
    }
}

/// Lowercases the runbook name and maps every non `[a-z0-9_]` character to
/// `_`, giving a stable topic id for unnamed topics.
fn derive_topic_id(name: &str) -> String {
    name.to_lowercase()
        .chars()
        .map(|c| {
            if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Checks every runbook invariant and returns all violations found.
/// An empty result means the runbook is valid.
pub fn validate_runbook(spec: &RunbookSpec) -> Vec<Violation> {
    let mut violations = Vec::new();

    if spec.topic_meta.topic_id.is_empty() {
        violations.push(Violation::EmptyTopicId);
    }

    for (idx, var) in spec.variables.iter().enumerate() {
        if !is_valid_placeholder_name(&var.name) {
            violations.push(Violation::InvalidVariableName {
                name: var.name.clone(),
            });
        }
        if spec.variables[..idx].iter().any(|v| v.name == var.name) {
            violations.push(Violation::DuplicateVariable {
                name: var.name.clone(),
            });
        }
    }

    for (idx, step) in spec.steps.iter().enumerate() {
        if spec.steps[..idx].iter().any(|s| s.id == step.id) {
            violations.push(Violation::DuplicateStepId {
                step_id: step.id.clone(),
            });
        }

        let mut undeclared: Vec<String> = Vec::new();
        for occ in find_placeholders(step.command_template.raw()) {
            if spec.variable(&occ.name).is_none() && !undeclared.contains(&occ.name) {
                undeclared.push(occ.name);
            }
        }
        if !undeclared.is_empty() {
            violations.push(Violation::UndeclaredPlaceholder {
                step_id: step.id.clone(),
                names: undeclared,
            });
        }

        if let Some(pattern) = &step.expectation.output_regex {
            if let Err(err) = Regex::new(pattern) {
                violations.push(Violation::InvalidRegex {
                    step_id: step.id.clone(),
                    pattern: pattern.clone(),
                    message: err.to_string(),
                });
            }
        }
    }

    violations
}

#[cfg(test)]
mod tests {
    use super::*;

    const KUBECTL_RUNBOOK: &str = r#"
name: configmap-backup
topic:
  id: configmap_backup
  title: Backup of configuration data
variables:
  - name: customized_configmap_name
    default: cm-prod
  - namespace
steps:
  - id: save-configmap
    prose: Save the customized configmap to a local file.
    command: >-
      kubectl get configmap <customized_configmap_name> -o yaml
      -n <namespace> <customized_configmap_name>-<namespace>.yaml
    expect:
      exit_status: 0
      output_contains: ["configmap"]
"#;

    #[test]
    fn parses_kubectl_fixture() {
        let spec = parse_runbook(KUBECTL_RUNBOOK).unwrap();
        assert_eq!(spec.steps.len(), 1);
        assert_eq!(spec.variables.len(), 2);
        assert_eq!(
            spec.steps[0].command_template.raw(),
            "kubectl get configmap <customized_configmap_name> -o yaml \
             -n <namespace> <customized_configmap_name>-<namespace>.yaml"
        );
        assert_eq!(spec.variables[0].default.as_deref(), Some("cm-prod"));
        assert_eq!(spec.variables[1].default, None);
    }

    #[test]
    fn zero_steps_is_valid() {
        let spec = parse_runbook("name: empty-procedure\n").unwrap();
        assert!(spec.steps.is_empty());
        assert_eq!(spec.topic_meta.topic_id, "empty_procedure");
        assert_eq!(spec.topic_meta.title, "empty-procedure");
    }

    #[test]
    fn undeclared_placeholder_is_reported() {
        let err = parse_runbook(
            "name: n\nsteps:\n  - id: s1\n    command: kubectl get pods -n <cluster>\n",
        )
        .unwrap_err();
        match err {
            RunbookError::Invalid(violations) => {
                assert_eq!(
                    violations,
                    vec![Violation::UndeclaredPlaceholder {
                        step_id: "s1".into(),
                        names: vec!["cluster".into()],
                    }]
                );
            }
            other => panic!("expected Invalid, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_step_id_is_reported() {
        let spec = RunbookSpec {
            name: "n".into(),
            topic_meta: TopicMeta {
                topic_id: "n".into(),
                title: "n".into(),
                short_desc: None,
            },
            variables: vec![],
            steps: vec![
                RunbookStep {
                    id: "a".into(),
                    prose: String::new(),
                    command_template: CommandText::new("ls"),
                    expectation: Expectation::default(),
                },
                RunbookStep {
                    id: "a".into(),
                    prose: String::new(),
                    command_template: CommandText::new("pwd"),
                    expectation: Expectation::default(),
                },
            ],
        };
        assert_eq!(
            validate_runbook(&spec),
            vec![Violation::DuplicateStepId { step_id: "a".into() }]
        );
    }

    #[test]
    fn bad_regex_is_reported() {
        let err = parse_runbook(
            "name: n\nsteps:\n  - id: s1\n    command: ls\n    expect:\n      output_regex: '('\n",
        )
        .unwrap_err();
        assert!(matches!(
            err,
            RunbookError::Invalid(ref v) if matches!(v[0], Violation::InvalidRegex { .. })
        ));
    }

    #[test]
    fn violations_are_collected_together() {
        let err = parse_runbook(
            "name: n\nvariables: [Bad_Name, ns, ns]\nsteps:\n  - id: s1\n    command: echo <other>\n  - id: s1\n    command: pwd\n",
        )
        .unwrap_err();
        let RunbookError::Invalid(violations) = err else {
            panic!("expected Invalid");
        };
        assert_eq!(violations.len(), 4);
    }

    #[test]
    fn syntax_error_is_distinct_from_validation() {
        assert!(matches!(
            parse_runbook(": not yaml: ["),
            Err(RunbookError::Syntax(_))
        ));
    }

    #[test]
    fn parsing_is_deterministic() {
        let a = parse_runbook(KUBECTL_RUNBOOK).unwrap();
        let b = parse_runbook(KUBECTL_RUNBOOK).unwrap();
        assert_eq!(a, b);
    }
}
