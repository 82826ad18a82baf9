//! Line-oriented text format for DFAs and Graphviz export.
//!
//! ```text
//! dfa v1
//! states 3
//! symbols 1 a
//! initial 0
//! finals 1 1
//! delta
//! 1
//! 2
//! 2
//! end
//! ```
//!
//! `#` starts a comment; blank lines are ignored. The delta block holds one
//! row per state with the targets of every symbol in declared order.

use std::fmt::Write as _;

use crate::automata::Dfa;
use crate::error::{Error, Result};
use crate::freeness::find_empty_state;

pub fn serialize_dfa(d: &Dfa) -> String {
    let mut out = String::new();
    let finals = d.finals();
    writeln!(out, "dfa v1").unwrap();
    writeln!(out, "states {}", d.state_count()).unwrap();
    writeln!(out, "symbols {} {}", d.symbol_count(), d.alphabet().join(" ")).unwrap();
    writeln!(out, "initial {}", d.initial()).unwrap();
    write!(out, "finals {}", finals.len()).unwrap();
    for f in &finals {
        write!(out, " {f}").unwrap();
    }
    out.push('\n');
    out.push_str("delta\n");
    for q in 0..d.state_count() {
        let row: Vec<String> = d.row(q).iter().map(|t| t.to_string()).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out.push_str("end\n");
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next significant line as (line number, tokens).
    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let text = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = text.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((i + 1, tokens));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        self.next().ok_or_else(|| Error::Parse {
            line: self.last + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

fn number(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse()
        .or_else(|_| err(line, format!("expected {what}, found {tok:?}")))
}

/// Reads `keyword <count> <items...>` and returns the items.
fn counted<'a>(line: usize, tokens: &[&'a str], keyword: &str) -> Result<Vec<&'a str>> {
    if tokens.first() != Some(&keyword) || tokens.len() < 2 {
        return err(line, format!("expected `{keyword} <count> ...`"));
    }
    let count = number(line, tokens[1], "a count")?;
    let items = &tokens[2..];
    if items.len() != count {
        return err(
            line,
            format!("`{keyword}` declares {count} entries but lists {}", items.len()),
        );
    }
    Ok(items.to_vec())
}

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };

    let (ln, t) = lines.expect("header `dfa v1`")?;
    if t != ["dfa", "v1"] {
        return err(ln, "expected header `dfa v1`");
    }

    let (ln, t) = lines.expect("`states <n>`")?;
    if t.len() != 2 || t[0] != "states" {
        return err(ln, "expected `states <n>`");
    }
    let n = number(ln, t[1], "a state count")?;
    if n == 0 {
        return err(ln, "a DFA needs at least one state");
    }

    let (ln, t) = lines.expect("`symbols <k> <names...>`")?;
    let alphabet: Vec<String> = counted(ln, &t, "symbols")?.iter().map(|s| s.to_string()).collect();
    crate::automata::validate_alphabet(&alphabet).or_else(|e| err(ln, e.to_string()))?;
    let k = alphabet.len();

    let (ln, t) = lines.expect("`initial <q>`")?;
    if t.len() != 2 || t[0] != "initial" {
        return err(ln, "expected `initial <q>`");
    }
    let initial = number(ln, t[1], "a state")?;
    if initial >= n {
        return err(ln, format!("initial state {initial} out of range"));
    }

    let (ln, t) = lines.expect("`finals <m> <states...>`")?;
    let mut finals = Vec::new();
    for tok in counted(ln, &t, "finals")? {
        let f = number(ln, tok, "a state")?;
        if f >= n {
            return err(ln, format!("final state {f} out of range"));
        }
        if finals.contains(&f) {
            return err(ln, format!("final state {f} listed twice"));
        }
        finals.push(f);
    }

    let (ln, t) = lines.expect("`delta`")?;
    if t != ["delta"] {
        return err(ln, "expected `delta`");
    }
    let mut rows = Vec::with_capacity(n);
    for q in 0..n {
        let (ln, t) = lines.next().ok_or_else(|| Error::Parse {
            line: lines.last + 1,
            message: format!("missing transition row for state {q}"),
        })?;
        if t == ["end"] {
            return err(ln, format!("missing transition row for state {q}"));
        }
        if t.len() != k {
            return err(ln, format!("state {q} has {} transitions, expected {k}", t.len()));
        }
        let mut row = Vec::with_capacity(k);
        for tok in t {
            let target = number(ln, tok, "a state")?;
            if target >= n {
                return err(ln, format!("transition of state {q} targets {target}, out of range"));
            }
            row.push(target);
        }
        rows.push(row);
    }

    let (ln, t) = lines.expect("`end`")?;
    if t != ["end"] {
        return err(ln, "expected `end` after the delta rows");
    }
    if let Some((ln, _)) = lines.next() {
        return err(ln, "unexpected content after `end`");
    }
    Dfa::new(alphabet, rows, initial, finals).or_else(|e| err(ln, e.to_string()))
}

/// Graphviz description. Parallel edges are merged into one edge with a
/// comma-separated label; the empty state is drawn dashed.
pub fn export_dot(d: &Dfa) -> String {
    let empty = find_empty_state(d);
    let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  start [shape=point];\n");
    writeln!(out, "  start -> q{};", d.initial()).unwrap();
    for q in 0..d.state_count() {
        let shape = if d.is_final(q) { "doublecircle" } else { "circle" };
        if Some(q) == empty {
            writeln!(
                out,
                "  q{q} [label=\"{q}\", shape={shape}, style=dashed, color=gray];  // empty"
            )
            .unwrap();
        } else {
            writeln!(out, "  q{q} [label=\"{q}\", shape={shape}];").unwrap();
        }
    }
    for q in 0..d.state_count() {
        let mut targets: Vec<(usize, Vec<&str>)> = Vec::new();
        for (a, &t) in d.row(q).iter().enumerate() {
            match targets.iter_mut().find(|(p, _)| *p == t) {
                Some((_, labels)) => labels.push(&d.alphabet()[a]),
                None => targets.push((t, vec![&d.alphabet()[a]])),
            }
        }
        targets.sort_by_key(|&(t, _)| t);
        for (t, labels) in targets {
            writeln!(out, "  q{q} -> q{t} [label=\"{}\"];", labels.join(",")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
