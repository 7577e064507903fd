//! Textual machine documents.
//!
//! ```text
//! # Basilica
//! alphabet 0 1
//! a: 0 -> 1 . e
//! a: 1 -> 0 . b
//! b: 0 -> 0 . e
//! b: 1 -> 1 . a
//! ```
//!
//! Level-dependent alphabets are written `alphabet-levels (0 1) (0 1 2)`, a
//! subshift as `subshift init a b ; allow ab ba bb`. The consumed count of a
//! rule is the length of its output. A JSON form with the same content is
//! accepted as well.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Sym};
use crate::error::{Error, Result};
use crate::machine::{MachineBuilder, MachineDef};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn column_of(line: &str, part: &str) -> usize {
    let base = line.as_ptr() as usize;
    let p = part.as_ptr() as usize;
    if p >= base && p <= base + line.len() {
        p - base + 1
    } else {
        1
    }
}

fn parse_levels(rest: &str, ln: usize, raw: &str) -> Result<Vec<Vec<String>>> {
    let mut levels = Vec::new();
    let mut s = rest.trim();
    while !s.is_empty() {
        let Some(body) = s.strip_prefix('(') else {
            return Err(syntax(ln, column_of(raw, s), "expected `(`"));
        };
        let Some(end) = body.find(')') else {
            return Err(syntax(ln, column_of(raw, s), "unclosed `(`"));
        };
        levels.push(body[..end].split_whitespace().map(str::to_string).collect());
        s = body[end + 1..].trim_start();
    }
    if levels.is_empty() {
        return Err(syntax(ln, 1, "no levels given"));
    }
    Ok(levels)
}

/// Parses a machine document in either the line format or JSON.
pub fn parse_machine(text: &str) -> Result<MachineDef> {
    if text.trim_start().starts_with('{') {
        return from_json(text);
    }
    let mut builder: Option<MachineBuilder> = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("alphabet-levels") {
            let levels = parse_levels(rest, ln, raw)?;
            let a = Alphabet::levels(&levels).map_err(|e| syntax(ln, 1, e.to_string()))?;
            builder = Some(MachineBuilder::new(a));
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("alphabet ") {
            let syms: Vec<&str> = rest.split_whitespace().collect();
            let a = Alphabet::uniform(&syms).map_err(|e| syntax(ln, column_of(raw, rest), e.to_string()))?;
            builder = Some(MachineBuilder::new(a));
            continue;
        }
        let Some(b) = builder.as_mut() else {
            return Err(syntax(ln, 1, "expected `alphabet` declaration first"));
        };
        if let Some(rest) = trimmed.strip_prefix("subshift ") {
            let (init, allow) = match rest.split_once(';') {
                Some((x, y)) => (x.trim(), y.trim()),
                None => return Err(syntax(ln, column_of(raw, rest), "expected `init ... ; allow ...`")),
            };
            let Some(init) = init.strip_prefix("init") else {
                return Err(syntax(ln, column_of(raw, init), "expected `init`"));
            };
            let Some(allow) = allow.strip_prefix("allow") else {
                return Err(syntax(ln, column_of(raw, allow), "expected `allow`"));
            };
            let initials: Vec<&str> = init.split_whitespace().collect();
            let mut pairs: Vec<(String, String)> = Vec::new();
            for tok in allow.split_whitespace() {
                let syms = b
                    .alphabet()
                    .parse_word(&tok.replace(',', " "))
                    .map_err(|e| syntax(ln, column_of(raw, tok), e.to_string()))?;
                if syms.len() != 2 {
                    return Err(syntax(ln, column_of(raw, tok), "allowed pair must have two symbols"));
                }
                let name = |s: Sym| b.alphabet().name(s).to_string();
                pairs.push((name(syms[0]), name(syms[1])));
            }
            let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
            b.subshift(&initials, &pair_refs)
                .map_err(|e| syntax(ln, column_of(raw, rest), e.to_string()))?;
            continue;
        }
        let Some((name, rest)) = line.split_once(':') else {
            return Err(syntax(ln, column_of(raw, trimmed), "expected `name: window -> output . next`"));
        };
        let Some((window, rhs)) = rest.split_once("->") else {
            return Err(syntax(ln, column_of(raw, rest), "missing `->`"));
        };
        let (output, next) = match rhs.split_once('.') {
            Some((o, n)) => (o, n),
            None => (rhs, ""),
        };
        let window_syms = b
            .alphabet()
            .parse_word(window)
            .map_err(|e| syntax(ln, column_of(raw, window.trim_start()), e.to_string()))?;
        let output_syms = b
            .alphabet()
            .parse_word(output)
            .map_err(|e| syntax(ln, column_of(raw, output.trim_start()), e.to_string()))?;
        let name = name.trim();
        b.rule_syms(name, window_syms, output_syms, next.trim())
            .map_err(|e| syntax(ln, column_of(raw, name), e.to_string()))?;
    }
    match builder {
        Some(b) => b.build(),
        None => Err(syntax(1, 1, "empty document")),
    }
}

fn alphabet_line(a: &Alphabet) -> String {
    let names = |syms: &[Sym]| syms.iter().map(|&s| a.name(s)).collect::<Vec<_>>().join(" ");
    if a.is_uniform() {
        format!("alphabet {}", names(a.level(0)))
    } else {
        let levels: Vec<String> = a.level_sets().iter().map(|l| format!("({})", names(l))).collect();
        format!("alphabet-levels {}", levels.join(" "))
    }
}

/// Canonical line-format document: generators by name, rules by window.
pub fn to_document(m: &MachineDef) -> String {
    let a = m.alphabet();
    let mut out = alphabet_line(a);
    out.push('\n');
    if let Some(sh) = m.subshift() {
        let init: Vec<&str> = sh.initials.iter().map(|&s| a.name(s)).collect();
        let sep = if a.compact() { "" } else { "," };
        let allow: Vec<String> = sh
            .allowed
            .iter()
            .map(|&(x, y)| format!("{}{sep}{}", a.name(x), a.name(y)))
            .collect();
        out.push_str(&format!("subshift init {} ; allow {}\n", init.join(" "), allow.join(" ")));
    }
    let mut gens: Vec<&crate::machine::Generator> = m.generators().iter().collect();
    gens.sort_by(|x, y| x.name.cmp(&y.name));
    for g in gens {
        let mut lines: Vec<(String, String)> = g
            .rules
            .iter()
            .map(|r| {
                let w = m.format_symbols(&r.window);
                (
                    w.clone(),
                    format!("{}: {} -> {} . {}", g.name, w, m.format_symbols(&r.output), m.format_word(&r.next)),
                )
            })
            .collect();
        lines.sort();
        for (_, l) in lines {
            out.push_str(&l);
            out.push('\n');
        }
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonSubshift {
    init: Vec<String>,
    allow: Vec<(String, String)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonRule {
    window: Vec<String>,
    output: Vec<String>,
    #[serde(default)]
    next: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonMachine {
    alphabet: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    subshift: Option<JsonSubshift>,
    generators: BTreeMap<String, Vec<JsonRule>>,
}

pub fn to_json(m: &MachineDef) -> String {
    let a = m.alphabet();
    let names = |w: &[Sym]| w.iter().map(|&s| a.name(s).to_string()).collect::<Vec<_>>();
    let doc = JsonMachine {
        alphabet: a.level_sets().iter().map(|l| names(l)).collect(),
        subshift: m.subshift().map(|sh| JsonSubshift {
            init: names(&sh.initials.iter().copied().collect::<Vec<_>>()),
            allow: sh
                .allowed
                .iter()
                .map(|&(x, y)| (a.name(x).to_string(), a.name(y).to_string()))
                .collect(),
        }),
        generators: m
            .generators()
            .iter()
            .map(|g| {
                let mut rules: Vec<JsonRule> = g
                    .rules
                    .iter()
                    .map(|r| JsonRule {
                        window: names(&r.window),
                        output: names(&r.output),
                        next: m.format_word(&r.next),
                    })
                    .collect();
                rules.sort_by(|x, y| x.window.cmp(&y.window));
                (g.name.clone(), rules)
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn from_json(text: &str) -> Result<MachineDef> {
    let doc: JsonMachine = serde_json::from_str(text).map_err(|e| syntax(e.line(), e.column(), e.to_string()))?;
    let alphabet = if doc.alphabet.len() == 1 {
        Alphabet::uniform(&doc.alphabet[0])?
    } else {
        Alphabet::levels(&doc.alphabet)?
    };
    let mut b = MachineBuilder::new(alphabet);
    if let Some(sh) = &doc.subshift {
        let init: Vec<&str> = sh.init.iter().map(String::as_str).collect();
        let allow: Vec<(&str, &str)> = sh.allow.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
        b.subshift(&init, &allow)?;
    }
    for (name, rules) in &doc.generators {
        for r in rules {
            let sym = |s: &String| {
                b.alphabet()
                    .sym(s)
                    .ok_or_else(|| Error::UnknownSymbol(s.clone()))
            };
            let window = r.window.iter().map(sym).collect::<Result<Vec<_>>>()?;
            let output = r.output.iter().map(sym).collect::<Result<Vec<_>>>()?;
            b.rule_syms(name, window, output, &r.next)?;
        }
    }
    b.build()
}
