use std::sync::LazyLock;
use std::time::Duration;

use clap::ValueEnum;
use regex::Regex;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

/// What every command produces before rendering.
pub struct Envelope {
    pub query: String,
    pub kind: String,
    pub text: String,
    pub json: Value,
    pub latex: Option<String>,
    pub order: Option<usize>,
    pub elapsed: Duration,
    /// Failed check instances; nonzero makes the exit code 1.
    pub failed: usize,
}

impl Envelope {
    /// Renders the envelope. Text and LaTeX output carry the timing on
    /// stderr so stdout stays reproducible.
    pub fn render(&self, format: Format) -> (String, Option<String>) {
        let timing = format!("# {} in {:.3}s", self.query, self.elapsed.as_secs_f64());
        match format {
            Format::Text => (self.text.clone(), Some(timing)),
            Format::Latex => (
                self.latex.clone().unwrap_or_else(|| latex(&self.text)),
                Some(timing),
            ),
            Format::Json => {
                let mut v = json!({
                    "query": self.query,
                    "kind": self.kind,
                    "result": self.json,
                    "timing_ms": self.elapsed.as_millis() as u64,
                });
                if let Some(n) = self.order {
                    v["order"] = json!(n);
                }
                (serde_json::to_string_pretty(&v).expect("valid json"), None)
            }
        }
    }
}

static INDEX: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\b([emhpsH])\[([0-9,]*)\]").unwrap());
static ALPHABET: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\[([A-Z]+)([0-9]+)\]").unwrap());
static POWER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\^(-?[0-9]+)").unwrap());

/// LaTeX rendering of the canonical text encodings.
pub fn latex(text: &str) -> String {
    let s = INDEX.replace_all(text, "${1}_{${2}}");
    let s = ALPHABET.replace_all(&s, "[${1}_{${2}}]");
    let s = POWER.replace_all(&s, "^{${1}}");
    s.replace('*', " \\cdot ")
}

/// `\frac{..}{..}` for a rational function when its denominator is not 1.
pub fn latex_ratfunc(c: &qtsym::RatFunc) -> String {
    if c.is_polynomial() {
        latex(&c.to_string())
    } else {
        format!(
            "\\frac{{{}}}{{{}}}",
            latex(&c.numer().to_string()),
            latex(&c.denom().to_string())
        )
    }
}
