use std::io::{IsTerminal, Write};

use anyhow::Context;
use serde_json::{json, Value};
use tcdo_core::report::CheckReport;

use crate::{Common, Format};

pub const INDEXING: &str = "v_(m) is the coefficient of z^(-m-1) in Y(v,z); \
    v_(m) shifts conformal weight by wt(v) - m - 1";

pub enum Line {
    Heading(String),
    Check { passed: bool, label: String, detail: String },
    Plain(String),
}

pub struct Outcome {
    pub command: &'static str,
    pub params: Value,
    pub results: Vec<Value>,
    pub pass: bool,
    pub lines: Vec<Line>,
    /// Header row first.
    pub csv: Vec<Vec<String>>,
    pub warnings: Vec<String>,
}

impl Outcome {
    pub fn new(command: &'static str, params: Value) -> Self {
        Outcome {
            command,
            params,
            results: Vec::new(),
            pass: true,
            lines: Vec::new(),
            csv: vec![vec!["report".into(), "label".into(), "passed".into(), "detail".into()]],
            warnings: Vec::new(),
        }
    }

    pub fn add_report(&mut self, report: &CheckReport) {
        self.pass &= report.passed();
        self.lines.push(Line::Heading(report.name.clone()));
        for item in &report.items {
            self.lines.push(Line::Check {
                passed: item.passed,
                label: item.label.clone(),
                detail: item.detail.clone(),
            });
            self.csv.push(vec![
                report.name.clone(),
                item.label.clone(),
                item.passed.to_string(),
                item.detail.clone(),
            ]);
        }
        self.results.push(serde_json::to_value(report).expect("reports serialize"));
    }

    pub fn plain(&mut self, text: impl Into<String>) {
        self.lines.push(Line::Plain(text.into()));
    }
}

fn render_text(o: &Outcome, color: bool) -> String {
    let paint = |ok: bool| -> String {
        let tag = if ok { "PASS" } else { "FAIL" };
        match (color, ok) {
            (false, _) => tag.to_string(),
            (true, true) => format!("\x1b[32m{tag}\x1b[0m"),
            (true, false) => format!("\x1b[31m{tag}\x1b[0m"),
        }
    };
    let mut s = String::new();
    let mut params = o.params.clone();
    let conv = params.as_object_mut().and_then(|m| m.remove("convention"));
    s.push_str(&format!("# {} {params}\n", o.command));
    if let Some(conv) = conv {
        s.push_str(&format!("# indexing: {}\n", conv["indexing"].as_str().unwrap_or_default()));
        if !conv["mu_window"].is_null() {
            s.push_str(&format!("# μ-window: {}\n", conv["mu_window"]));
        }
    }
    for line in &o.lines {
        match line {
            Line::Heading(h) => s.push_str(&format!("\n== {h}\n")),
            Line::Check { passed, label, detail } => {
                s.push_str(&format!("[{}] {label}", paint(*passed)));
                if !detail.is_empty() {
                    s.push_str(&format!("  ({detail})"));
                }
                s.push('\n');
            }
            Line::Plain(p) => {
                s.push_str(p);
                s.push('\n');
            }
        }
    }
    s.push_str(&format!("\noverall: {}\n", paint(o.pass)));
    s
}

fn render_csv(o: &Outcome) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &o.csv {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn render_json(o: &Outcome) -> anyhow::Result<String> {
    let v = json!({
        "command": o.command,
        "params": o.params,
        "results": o.results,
        "pass": o.pass,
    });
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

pub fn emit(o: &Outcome, common: &Common) -> anyhow::Result<()> {
    let color = common.out.is_none() && std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
    let body = match common.format {
        Format::Text => render_text(o, color),
        Format::Csv => render_csv(o)?,
        Format::Json => render_json(o)?,
    };
    match &common.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}
