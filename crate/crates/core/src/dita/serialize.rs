//! Topic serializer.
//!
//! Emits the same element subset the parser accepts, always with a `task`
//! root, so `parse_topic(serialize_topic(t))` reproduces `t`. Placeholder
//! angle brackets inside command text are entity-escaped, which keeps the
//! output well-formed without a dedicated placeholder element.
//!
//! Element texts are written verbatim. The parser end-trims text content,
//! so topics round-trip exactly when their texts carry no leading or
//! trailing whitespace (the parser never produces any other kind).

use super::DitaTopic;

/// Renders a topic as a `.dita` document.
pub fn serialize_topic(topic: &DitaTopic) -> String {
    let mut out = String::with_capacity(256);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!("<task id=\"{}\">\n", escape_attr(&topic.id)));
    out.push_str(&format!("  <title>{}</title>\n", escape_text(&topic.title)));
    if let Some(desc) = &topic.short_desc {
        out.push_str(&format!("  <shortdesc>{}</shortdesc>\n", escape_text(desc)));
    }
    if !topic.steps.is_empty() {
        out.push_str("  <taskbody>\n    <steps>\n");
        for step in &topic.steps {
            out.push_str("      <step>\n");
            out.push_str(&format!("        <cmd>{}</cmd>\n", escape_text(&step.prose)));
            if !step.code_blocks.is_empty() {
                out.push_str("        <info>\n");
                for block in &step.code_blocks {
                    out.push_str(&format!(
                        "          <codeblock>{}</codeblock>\n",
                        escape_text(block.raw())
                    ));
                }
                out.push_str("        </info>\n");
            }
            out.push_str("      </step>\n");
        }
        out.push_str("    </steps>\n  </taskbody>\n");
    }
    out.push_str("</task>\n");
    out
}

fn escape_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            _ => out.push(c),
        }
    }
    out
}

fn escape_attr(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}
