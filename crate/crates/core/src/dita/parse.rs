//! DITA topic parser for the supported element subset.
//!
//! Root elements `task` and `concept` are accepted. Inside a task the
//! parser walks `taskbody/steps/step`, reading each step's `cmd` as prose
//! and `codeblock` elements (bare or wrapped in `info`) as commands. Inside
//! a concept every `codeblock` under `conbody` becomes a prose-less step.
//! Any other well-formed element is skipped with a warning instead of
//! failing the parse.

use std::collections::HashMap;
use std::path::Path;

use roxmltree::{Document, Node};

use super::{CommandText, DitaError, DitaTopic, TopicStep};

/// Parse result: the topic plus warnings for skipped elements.
#[derive(Debug, Clone)]
pub struct ParsedTopic {
    pub topic: DitaTopic,
    pub warnings: Vec<String>,
}

/// Parses one `.dita` document into a topic.
pub fn parse_topic(xml_text: &str) -> Result<ParsedTopic, DitaError> {
    let doc = Document::parse(xml_text)?;
    let root = doc.root_element();
    let root_name = root.tag_name().name();
    let body_name = match root_name {
        "task" => "taskbody",
        "concept" => "conbody",
        other => {
            return Err(DitaError::UnsupportedRootElement {
                found: other.to_string(),
            })
        }
    };

    let id = root
        .attribute("id")
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .ok_or(DitaError::MissingTopicId)?
        .to_string();

    let mut warnings = Vec::new();
    let mut title = String::new();
    let mut short_desc = None;
    let mut steps = Vec::new();

    for child in root.children().filter(Node::is_element) {
        match child.tag_name().name() {
            "title" => title = text_content(child, &mut warnings),
            "shortdesc" => short_desc = Some(text_content(child, &mut warnings)),
            name if name == body_name => {
                if root_name == "task" {
                    parse_taskbody(child, &mut steps, &mut warnings);
                } else {
                    parse_conbody(child, &mut steps, &mut warnings);
                }
            }
            _ => warn_skipped(child, &mut warnings),
        }
    }

    Ok(ParsedTopic {
        topic: DitaTopic {
            id,
            title,
            short_desc,
            steps,
        },
        warnings,
    })
}

fn parse_taskbody(body: Node, steps: &mut Vec<TopicStep>, warnings: &mut Vec<String>) {
    for child in body.children().filter(Node::is_element) {
        if child.tag_name().name() != "steps" {
            warn_skipped(child, warnings);
            continue;
        }
        for step_node in child.children().filter(Node::is_element) {
            if step_node.tag_name().name() != "step" {
                warn_skipped(step_node, warnings);
                continue;
            }
            steps.push(parse_step(step_node, warnings));
        }
    }
}

fn parse_step(step_node: Node, warnings: &mut Vec<String>) -> TopicStep {
    let mut step = TopicStep::default();
    for child in step_node.children().filter(Node::is_element) {
        match child.tag_name().name() {
            "cmd" => step.prose = text_content(child, warnings),
            "codeblock" => step
                .code_blocks
                .push(CommandText::new(text_content(child, warnings))),
            "info" => {
                for inner in child.children().filter(Node::is_element) {
                    if inner.tag_name().name() == "codeblock" {
                        step.code_blocks
                            .push(CommandText::new(text_content(inner, warnings)));
                    } else {
                        warn_skipped(inner, warnings);
                    }
                }
            }
            _ => warn_skipped(child, warnings),
        }
    }
    step
}

/// Each codeblock directly under `conbody` becomes its own step.
fn parse_conbody(body: Node, steps: &mut Vec<TopicStep>, warnings: &mut Vec<String>) {
    for child in body.children().filter(Node::is_element) {
        if child.tag_name().name() == "codeblock" {
            steps.push(TopicStep {
                prose: String::new(),
                code_blocks: vec![CommandText::new(text_content(child, warnings))],
            });
        } else {
            warn_skipped(child, warnings);
        }
    }
}

/// Concatenated descendant text, end-trimmed. Nested elements are reported
/// but their text is kept, so inline markup degrades to plain text.
fn text_content(node: Node, warnings: &mut Vec<String>) -> String {
    let mut out = String::new();
    collect_text(node, &mut out, warnings);
    out.trim().to_string()
}

fn collect_text(node: Node, out: &mut String, warnings: &mut Vec<String>) {
    for child in node.children() {
        if child.is_text() {
            out.push_str(child.text().unwrap_or(""));
        } else if child.is_element() {
            warnings.push(format!(
                "inline element <{}> at {} flattened to text",
                child.tag_name().name(),
                position_of(child),
            ));
            collect_text(child, out, warnings);
        }
    }
}

fn warn_skipped(node: Node, warnings: &mut Vec<String>) {
    warnings.push(format!(
        "skipped unsupported element <{}> at {}",
        node.tag_name().name(),
        position_of(node),
    ));
}

fn position_of(node: Node) -> roxmltree::TextPos {
    let doc = node.document();
    doc.text_pos_at(node.range().start)
}

/// Loads every `*.dita` file in a directory (non-recursive), sorted by file
/// name so topic order is stable. Duplicate topic ids across files are
/// rejected.
pub fn load_topics_from_dir(dir: &Path) -> Result<Vec<ParsedTopic>, DitaError> {
    let io_err = |source| DitaError::Io {
        path: dir.display().to_string(),
        source,
    };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io_err)?
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_err)?
        .into_iter()
        .map(|entry| entry.path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "dita"))
        .collect();
    paths.sort();

    let mut seen: HashMap<String, String> = HashMap::new();
    let mut parsed = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(&path).map_err(|source| DitaError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let topic = parse_topic(&text)?;
        let name = path.display().to_string();
        if let Some(first) = seen.insert(topic.topic.id.clone(), name.clone()) {
            return Err(DitaError::DuplicateTopicId {
                id: topic.topic.id,
                first,
                second: name,
            });
        }
        parsed.push(topic);
    }
    Ok(parsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    const KUBECTL_TOPIC: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<task id="configmap_backup">
  <title>Backup of configuration data</title>
  <taskbody>
    <steps>
      <step>
        <cmd>Save the customized configmap to a local file.</cmd>
        <info>
          <codeblock>kubectl get configmap
&lt;customized_configmap_name&gt;
-o yaml -n &lt;namespace&gt;
&lt;customized_configmap_name&gt;-&lt;namespace&gt;.yaml</codeblock>
        </info>
      </step>
    </steps>
  </taskbody>
</task>
"#;

    #[test]
    fn parses_kubectl_fixture_to_single_normalized_command() {
        let parsed = parse_topic(KUBECTL_TOPIC).unwrap();
        let topic = parsed.topic;
        assert_eq!(topic.id, "configmap_backup");
        assert_eq!(topic.steps.len(), 1);
        assert_eq!(topic.steps[0].code_blocks.len(), 1);
        assert_eq!(
            topic.steps[0].code_blocks[0].raw(),
            "kubectl get configmap <customized_configmap_name> -o yaml \
             -n <namespace> <customized_configmap_name>-<namespace>.yaml"
        );
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn empty_body_yields_zero_steps() {
        let parsed =
            parse_topic(r#"<task id="t1"><title>Only a title</title><taskbody/></task>"#).unwrap();
        assert_eq!(parsed.topic.title, "Only a title");
        assert!(parsed.topic.steps.is_empty());
    }

    #[test]
    fn concept_codeblocks_become_steps() {
        let parsed = parse_topic(
            r#"<concept id="c1"><title>T</title><conbody>
                 <codeblock>helm list</codeblock>
                 <codeblock>helm status rel</codeblock>
               </conbody></concept>"#,
        )
        .unwrap();
        assert_eq!(parsed.topic.steps.len(), 2);
        assert_eq!(parsed.topic.steps[1].code_blocks[0].raw(), "helm status rel");
    }

    #[test]
    fn unknown_elements_are_skipped_with_warning() {
        let parsed = parse_topic(
            r#"<task id="t1"><title>T</title><prolog/><taskbody>
                 <context>who cares</context>
                 <steps><step><cmd>run</cmd><codeblock>ls</codeblock></step></steps>
               </taskbody></task>"#,
        )
        .unwrap();
        assert_eq!(parsed.topic.steps.len(), 1);
        assert_eq!(parsed.warnings.len(), 2);
        assert!(parsed.warnings[0].contains("<prolog>"));
        assert!(parsed.warnings[1].contains("<context>"));
    }

    #[test]
    fn malformed_xml_reports_position() {
        let err = parse_topic("<task id=\"x\">\n  <title>oops</titlo>\n</task>").unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("malformed XML"), "{msg}");
        assert!(msg.contains('2'), "expected a line number in {msg:?}");
    }

    #[test]
    fn unsupported_root_is_rejected() {
        let err = parse_topic("<reference id=\"r\"/>").unwrap_err();
        assert!(matches!(
            err,
            DitaError::UnsupportedRootElement { ref found } if found == "reference"
        ));
    }

    #[test]
    fn missing_id_is_rejected() {
        assert!(matches!(
            parse_topic("<task><title>T</title></task>"),
            Err(DitaError::MissingTopicId)
        ));
        assert!(matches!(
            parse_topic("<task id=\"  \"><title>T</title></task>"),
            Err(DitaError::MissingTopicId)
        ));
    }
}
