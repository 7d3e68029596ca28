//! A subset of the BIF text format: discrete variables, `table`, `default`
//! and per-configuration rows, `property` lines and C/C++ comments.
//!
//! Blocks may come in any order; the network is sorted topologically
//! (declaration order among unconstrained variables) and cycles are errors.
//! A `table` lists the child outcome slowest and parent configurations
//! fastest, last parent varying fastest, so `table 0.6 0.05 0.4 0.95` for
//! `probability (A | B)` means P(A=a0|B=b0) = 0.6, P(A=a0|B=b1) = 0.05.

use std::collections::{BTreeSet, HashMap};

use super::{model_error_variable, ParseDiagnostic, ParseError, ParseErrorKind, Pos, Severity};
use crate::model::{Network, VariableSpec, NORMALIZATION_TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Word(String),
    Str(String),
    Punct(char),
}

#[derive(Debug, Clone)]
struct Token {
    kind: Kind,
    pos: Pos,
    start: usize,
    end: usize,
}

const PUNCT: &[char] = &['{', '}', '(', ')', '[', ']', ';', ',', '|'];

fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::new(ParseErrorKind::Syntax, pos, msg)
}

fn semantic(pos: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::new(ParseErrorKind::Semantic, pos, msg)
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut line = 1;
    let mut line_start = 0;
    let pos_at = |i: usize, line: usize, line_start: usize| Pos {
        line,
        column: text[line_start..i].chars().count() + 1,
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if text[i..].starts_with("//") {
            i = text[i..].find('\n').map_or(bytes.len(), |n| i + n);
            continue;
        }
        if text[i..].starts_with("/*") {
            let pos = pos_at(i, line, line_start);
            let Some(n) = text[i + 2..].find("*/") else {
                return Err(syntax(pos, "unterminated comment"));
            };
            let end = i + 2 + n + 2;
            for (k, b) in bytes[i..end].iter().enumerate() {
                if *b == b'\n' {
                    line += 1;
                    line_start = i + k + 1;
                }
            }
            i = end;
            continue;
        }
        let pos = pos_at(i, line, line_start);
        let start = i;
        if c == b'"' {
            let mut s = String::new();
            let mut chars = text[i + 1..].char_indices();
            let mut closed = None;
            while let Some((k, ch)) = chars.next() {
                match ch {
                    '"' => {
                        closed = Some(i + 1 + k + 1);
                        break;
                    }
                    '\\' => match chars.next() {
                        Some((_, esc)) => s.push(esc),
                        None => break,
                    },
                    '\n' => return Err(syntax(pos, "newline in string")),
                    _ => s.push(ch),
                }
            }
            let Some(end) = closed else {
                return Err(syntax(pos, "unterminated string"));
            };
            tokens.push(Token {
                kind: Kind::Str(s),
                pos,
                start,
                end,
            });
            i = end;
            continue;
        }
        let ch = text[i..].chars().next().expect("in bounds");
        if PUNCT.contains(&ch) {
            tokens.push(Token {
                kind: Kind::Punct(ch),
                pos,
                start,
                end: i + 1,
            });
            i += 1;
            continue;
        }
        let end = text[i..]
            .char_indices()
            .find(|&(_, ch)| ch.is_whitespace() || ch == '"' || PUNCT.contains(&ch))
            .map_or(text.len(), |(k, _)| i + k);
        tokens.push(Token {
            kind: Kind::Word(text[i..end].to_string()),
            pos,
            start,
            end,
        });
        i = end;
    }
    Ok(tokens)
}

struct Parser<'a> {
    text: &'a str,
    tokens: Vec<Token>,
    at: usize,
}

#[derive(Debug)]
struct VarDecl {
    name: String,
    outcomes: Vec<String>,
    properties: Vec<String>,
    pos: Pos,
}

#[derive(Debug)]
enum Entry {
    Table(Vec<f64>),
    Default(Vec<f64>),
    Row(Vec<(String, Pos)>, Vec<f64>),
}

#[derive(Debug)]
struct ProbBlock {
    child: String,
    parents: Vec<(String, Pos)>,
    entries: Vec<(Entry, Pos)>,
    properties: Vec<String>,
    pos: Pos,
}

impl<'a> Parser<'a> {
    fn eof_pos(&self) -> Pos {
        Pos::of_offset(self.text, self.text.len())
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn next(&mut self, what: &str) -> Result<Token, ParseError> {
        match self.tokens.get(self.at) {
            Some(t) => {
                self.at += 1;
                Ok(t.clone())
            }
            None => Err(syntax(self.eof_pos(), format!("expected {what}, found end of input"))),
        }
    }

    fn peek_punct(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { kind: Kind::Punct(p), .. }) if *p == c)
    }

    fn peek_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Token { kind: Kind::Word(x), .. }) if x == w)
    }

    fn expect_punct(&mut self, c: char) -> Result<Pos, ParseError> {
        let t = self.next(&format!("`{c}`"))?;
        match t.kind {
            Kind::Punct(p) if p == c => Ok(t.pos),
            _ => Err(syntax(t.pos, format!("expected `{c}`, found {}", describe(&t)))),
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<Pos, ParseError> {
        let t = self.next(&format!("`{w}`"))?;
        match &t.kind {
            Kind::Word(x) if x == w => Ok(t.pos),
            _ => Err(syntax(t.pos, format!("expected `{w}`, found {}", describe(&t)))),
        }
    }

    /// An identifier: a bare word or a quoted string.
    fn name(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        let t = self.next(what)?;
        match t.kind {
            Kind::Word(w) | Kind::Str(w) => Ok((w, t.pos)),
            Kind::Punct(_) => Err(syntax(t.pos, format!("expected {what}, found {}", describe(&t)))),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let t = self.next("a probability")?;
        match &t.kind {
            Kind::Word(w) => w
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| syntax(t.pos, format!("`{w}` is not a number"))),
            _ => Err(syntax(t.pos, format!("expected a probability, found {}", describe(&t)))),
        }
    }

    /// Numbers up to `;`, separated by commas or whitespace.
    fn numbers(&mut self) -> Result<Vec<f64>, ParseError> {
        let mut out = Vec::new();
        loop {
            if self.peek_punct(';') {
                self.at += 1;
                return Ok(out);
            }
            if !out.is_empty() && self.peek_punct(',') {
                self.at += 1;
            }
            out.push(self.number()?);
        }
    }

    /// Raw text after `property` up to `;`. A single quoted string is
    /// unquoted.
    fn property(&mut self) -> Result<String, ParseError> {
        let kw = self.expect_word("property")?;
        let first = self.at;
        while !self.peek_punct(';') {
            if self.peek().is_none() {
                return Err(syntax(kw, "unterminated property"));
            }
            self.at += 1;
        }
        let last = self.at;
        self.at += 1;
        if last == first {
            return Ok(String::new());
        }
        if last == first + 1 {
            if let Kind::Str(s) = &self.tokens[first].kind {
                return Ok(s.clone());
            }
        }
        Ok(self.text[self.tokens[first].start..self.tokens[last - 1].end].to_string())
    }

    fn network_block(&mut self) -> Result<(Option<String>, Vec<String>), ParseError> {
        self.expect_word("network")?;
        let name = if self.peek_punct('{') {
            None
        } else {
            Some(self.name("a network name")?.0)
        };
        self.expect_punct('{')?;
        let mut props = Vec::new();
        while !self.peek_punct('}') {
            if self.peek_word("property") {
                props.push(self.property()?);
            } else {
                let t = self.next("`property` or `}`")?;
                return Err(syntax(t.pos, format!("unexpected {} in network block", describe(&t))));
            }
        }
        self.at += 1;
        Ok((name, props))
    }

    fn variable_block(&mut self) -> Result<VarDecl, ParseError> {
        self.expect_word("variable")?;
        let (name, pos) = self.name("a variable name")?;
        self.expect_punct('{')?;
        let mut outcomes = None;
        let mut properties = Vec::new();
        while !self.peek_punct('}') {
            if self.peek_word("property") {
                properties.push(self.property()?);
                continue;
            }
            let type_pos = self.expect_word("type")?;
            let (kind, kind_pos) = self.name("a variable type")?;
            if kind != "discrete" {
                return Err(ParseError::new(
                    ParseErrorKind::Unsupported,
                    kind_pos,
                    format!("variable `{name}` has type `{kind}`; only discrete variables are supported"),
                ));
            }
            if outcomes.is_some() {
                return Err(semantic(type_pos, format!("variable `{name}` declares its type twice")));
            }
            self.expect_punct('[')?;
            let t = self.next("an outcome count")?;
            let count = match &t.kind {
                Kind::Word(w) => w
                    .parse::<usize>()
                    .map_err(|_| syntax(t.pos, format!("`{w}` is not an outcome count")))?,
                _ => return Err(syntax(t.pos, format!("expected an outcome count, found {}", describe(&t)))),
            };
            self.expect_punct(']')?;
            self.expect_punct('{')?;
            let mut list = Vec::new();
            while !self.peek_punct('}') {
                if !list.is_empty() && self.peek_punct(',') {
                    self.at += 1;
                }
                list.push(self.name("an outcome name")?.0);
            }
            self.at += 1;
            self.expect_punct(';')?;
            if list.len() != count {
                return Err(semantic(
                    t.pos,
                    format!("variable `{name}` declares {count} outcomes but lists {}", list.len()),
                ));
            }
            outcomes = Some(list);
        }
        self.at += 1;
        let outcomes =
            outcomes.ok_or_else(|| semantic(pos, format!("variable `{name}` has no type declaration")))?;
        Ok(VarDecl {
            name,
            outcomes,
            properties,
            pos,
        })
    }

    fn probability_block(&mut self) -> Result<ProbBlock, ParseError> {
        let pos = self.expect_word("probability")?;
        self.expect_punct('(')?;
        let (child, _) = self.name("a variable name")?;
        let mut parents = Vec::new();
        if self.peek_punct('|') {
            self.at += 1;
        }
        while !self.peek_punct(')') {
            if !parents.is_empty() && self.peek_punct(',') {
                self.at += 1;
            }
            parents.push(self.name("a parent name")?);
        }
        self.at += 1;
        self.expect_punct('{')?;
        let mut entries = Vec::new();
        let mut properties = Vec::new();
        while !self.peek_punct('}') {
            let Some(t) = self.peek().cloned() else {
                return Err(syntax(self.eof_pos(), "unterminated probability block"));
            };
            match &t.kind {
                Kind::Word(w) if w == "property" => properties.push(self.property()?),
                Kind::Word(w) if w == "table" => {
                    self.at += 1;
                    entries.push((Entry::Table(self.numbers()?), t.pos));
                }
                Kind::Word(w) if w == "default" => {
                    self.at += 1;
                    entries.push((Entry::Default(self.numbers()?), t.pos));
                }
                Kind::Punct('(') => {
                    self.at += 1;
                    let mut key = Vec::new();
                    while !self.peek_punct(')') {
                        if !key.is_empty() && self.peek_punct(',') {
                            self.at += 1;
                        }
                        key.push(self.name("a parent outcome")?);
                    }
                    self.at += 1;
                    entries.push((Entry::Row(key, self.numbers()?), t.pos));
                }
                _ => {
                    return Err(syntax(
                        t.pos,
                        format!("expected `table`, `default`, a row or `property`, found {}", describe(&t)),
                    ))
                }
            }
        }
        self.at += 1;
        Ok(ProbBlock {
            child,
            parents,
            entries,
            properties,
            pos,
        })
    }
}

fn describe(t: &Token) -> String {
    match &t.kind {
        Kind::Word(w) => format!("`{w}`"),
        Kind::Str(s) => format!("\"{s}\""),
        Kind::Punct(c) => format!("`{c}`"),
    }
}

pub fn parse_bif(text: &str) -> Result<Network, ParseError> {
    parse_bif_with_warnings(text).map(|(net, _)| net)
}

/// Like [`parse_bif`], also returning warnings: columns that do not sum to
/// exactly 1, and `default` rows that are never used.
pub fn parse_bif_with_warnings(text: &str) -> Result<(Network, Vec<ParseDiagnostic>), ParseError> {
    let mut p = Parser {
        text,
        tokens: tokenize(text)?,
        at: 0,
    };
    let mut net_name = None;
    let mut net_props = Vec::new();
    let mut decls: Vec<VarDecl> = Vec::new();
    let mut blocks: Vec<ProbBlock> = Vec::new();
    while let Some(t) = p.peek().cloned() {
        match &t.kind {
            Kind::Word(w) if w == "network" => {
                let (name, props) = p.network_block()?;
                net_name = name.or(net_name);
                net_props.extend(props);
            }
            Kind::Word(w) if w == "variable" => decls.push(p.variable_block()?),
            Kind::Word(w) if w == "probability" => blocks.push(p.probability_block()?),
            _ => {
                return Err(syntax(
                    t.pos,
                    format!("expected `network`, `variable` or `probability`, found {}", describe(&t)),
                ))
            }
        }
    }
    build(decls, blocks, net_name, net_props)
}

fn build(
    decls: Vec<VarDecl>,
    blocks: Vec<ProbBlock>,
    name: Option<String>,
    properties: Vec<String>,
) -> Result<(Network, Vec<ParseDiagnostic>), ParseError> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    for (i, d) in decls.iter().enumerate() {
        if ids.insert(&d.name, i).is_some() {
            return Err(semantic(d.pos, format!("variable `{}` is declared twice", d.name)));
        }
    }
    let mut block_of: Vec<Option<usize>> = vec![None; decls.len()];
    let mut parent_ids: Vec<Vec<usize>> = vec![Vec::new(); decls.len()];
    for (b, block) in blocks.iter().enumerate() {
        let Some(&v) = ids.get(block.child.as_str()) else {
            return Err(semantic(block.pos, format!("probability for undeclared variable `{}`", block.child)));
        };
        if block_of[v].replace(b).is_some() {
            return Err(semantic(block.pos, format!("second probability block for `{}`", block.child)));
        }
        for (pname, ppos) in &block.parents {
            let Some(&pid) = ids.get(pname.as_str()) else {
                return Err(semantic(*ppos, format!("unknown parent `{pname}` of `{}`", block.child)));
            };
            if pid == v {
                return Err(semantic(*ppos, format!("`{pname}` is listed as its own parent")));
            }
            if parent_ids[v].contains(&pid) {
                return Err(semantic(*ppos, format!("`{}` lists parent `{pname}` twice", block.child)));
            }
            parent_ids[v].push(pid);
        }
    }
    if let Some(v) = block_of.iter().position(Option::is_none) {
        return Err(semantic(
            decls[v].pos,
            format!("variable `{}` has no probability block", decls[v].name),
        ));
    }

    let order = topological_order(&parent_ids).map_err(|stuck| {
        let names: Vec<&str> = stuck.iter().map(|&v| decls[v].name.as_str()).collect();
        let first = stuck[0];
        semantic(
            blocks[block_of[first].expect("checked above")].pos,
            format!("cycle among variables {}", names.join(", ")),
        )
    })?;
    let mut new_index = vec![0usize; decls.len()];
    for (n, &v) in order.iter().enumerate() {
        new_index[v] = n;
    }

    let mut warnings = Vec::new();
    let mut specs = Vec::with_capacity(decls.len());
    for &v in &order {
        let decl = &decls[v];
        let block = &blocks[block_of[v].expect("checked above")];
        let parent_decls: Vec<&VarDecl> = parent_ids[v].iter().map(|&p| &decls[p]).collect();
        let columns = columns_for(decl, block, &parent_decls, &mut warnings)?;
        let mut spec = VariableSpec::new(
            decl.name.clone(),
            decl.outcomes.clone(),
            parent_ids[v].iter().map(|&p| new_index[p]).collect(),
            columns,
        );
        spec.properties = decl.properties.clone();
        spec.properties.extend(block.properties.iter().cloned());
        specs.push(spec);
    }
    let net = Network::with_properties(name, specs, properties).map_err(|e| {
        let pos = model_error_variable(&e)
            .and_then(|n| ids.get(n))
            .map_or(Pos::START, |&i| decls[i].pos);
        ParseError::from_model(pos, e)
    })?;
    Ok((net, warnings))
}

/// Kahn's algorithm taking the earliest-declared ready variable each step.
/// On a cycle, returns the variables that could not be placed.
fn topological_order(parents: &[Vec<usize>]) -> Result<Vec<usize>, Vec<usize>> {
    let n = parents.len();
    let mut waiting: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut children = vec![Vec::new(); n];
    for (v, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(v);
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| waiting[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in &children[v] {
            waiting[c] -= 1;
            if waiting[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        Err((0..n).filter(|&v| waiting[v] > 0).collect())
    }
}

fn columns_for(
    decl: &VarDecl,
    block: &ProbBlock,
    parents: &[&VarDecl],
    warnings: &mut Vec<ParseDiagnostic>,
) -> Result<Vec<Vec<f64>>, ParseError> {
    let k = decl.outcomes.len();
    let configs: usize = parents.iter().map(|p| p.outcomes.len()).product();
    let mut columns: Vec<Option<Vec<f64>>> = vec![None; configs];
    let mut default = None;
    let mut saw_table = false;
    let mut saw_row = false;
    for (entry, pos) in &block.entries {
        match entry {
            Entry::Table(values) => {
                if values.len() != k * configs {
                    return Err(semantic(
                        *pos,
                        format!(
                            "table for `{}` has {} values; expected {} ({k} outcomes x {configs} parent configurations)",
                            decl.name,
                            values.len(),
                            k * configs
                        ),
                    ));
                }
                for (c, col) in columns.iter_mut().enumerate() {
                    *col = Some((0..k).map(|o| values[o * configs + c]).collect());
                }
                saw_table = true;
            }
            Entry::Default(values) => {
                check_len(decl, values, *pos)?;
                default = Some((values.clone(), *pos));
            }
            Entry::Row(key, values) => {
                check_len(decl, values, *pos)?;
                if key.len() != parents.len() {
                    return Err(semantic(
                        *pos,
                        format!(
                            "row for `{}` names {} parent outcomes; it has {} parents",
                            decl.name,
                            key.len(),
                            parents.len()
                        ),
                    ));
                }
                let mut c = 0;
                for ((o, opos), parent) in key.iter().zip(parents) {
                    let Some(idx) = parent.outcomes.iter().position(|x| x == o) else {
                        return Err(semantic(
                            *opos,
                            format!("`{o}` is not an outcome of `{}`", parent.name),
                        ));
                    };
                    c = c * parent.outcomes.len() + idx;
                }
                if columns[c].is_some() && !saw_table {
                    return Err(semantic(*pos, format!("repeated row for `{}`", decl.name)));
                }
                columns[c] = Some(values.clone());
                saw_row = true;
            }
        }
    }
    if saw_table && saw_row {
        return Err(semantic(block.pos, format!("`{}` mixes `table` and rows", decl.name)));
    }
    let mut default_used = false;
    let mut out = Vec::with_capacity(configs);
    for (c, col) in columns.into_iter().enumerate() {
        let col = match (col, &default) {
            (Some(col), _) => col,
            (None, Some((d, _))) => {
                default_used = true;
                d.clone()
            }
            (None, None) => {
                return Err(semantic(
                    block.pos,
                    format!(
                        "no probabilities for `{}` under parent configuration {}",
                        decl.name,
                        describe_config(c, parents)
                    ),
                ))
            }
        };
        let sum: f64 = col.iter().sum();
        if sum != 1.0 && (sum - 1.0).abs() <= NORMALIZATION_TOLERANCE {
            warnings.push(ParseDiagnostic {
                severity: Severity::Warning,
                line: block.pos.line,
                column: block.pos.column,
                message: format!("column {c} of `{}` sums to {sum}; accepted within tolerance", decl.name),
            });
        }
        out.push(col);
    }
    if let (Some((_, pos)), false) = (&default, default_used) {
        warnings.push(ParseDiagnostic {
            severity: Severity::Warning,
            line: pos.line,
            column: pos.column,
            message: format!("`default` for `{}` is never used", decl.name),
        });
    }
    Ok(out)
}

fn check_len(decl: &VarDecl, values: &[f64], pos: Pos) -> Result<(), ParseError> {
    if values.len() == decl.outcomes.len() {
        Ok(())
    } else {
        Err(semantic(
            pos,
            format!(
                "`{}` has {} outcomes but the row has {} values",
                decl.name,
                decl.outcomes.len(),
                values.len()
            ),
        ))
    }
}

fn describe_config(mut c: usize, parents: &[&VarDecl]) -> String {
    let mut names = vec![""; parents.len()];
    for (j, p) in parents.iter().enumerate().rev() {
        let k = p.outcomes.len();
        names[j] = &p.outcomes[c % k];
        c /= k;
    }
    format!("({})", names.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Assignment, ModelError};

    const DISEASE: &str = r#"
network unknown {
}
variable Disease {
  type discrete [ 2 ] { present, absent };
}
variable Test {
  type discrete [ 2 ] { positive, negative };
}
probability ( Test | Disease ) {
  (present) 0.95, 0.05;
  (absent) 0.1, 0.9;
}
probability ( Disease ) {
  table 0.01, 0.99;
}
"#;

    #[test]
    fn disease_test() {
        let net = parse_bif(DISEASE).unwrap();
        assert_eq!(net.state_count(), Some(4));
        assert_eq!(net.name(), Some("unknown"));
        assert_eq!(net.variable(1).column(0), &[0.95, 0.05]);
        let p = net.state_prob(&Assignment::new(vec![0, 0])).unwrap();
        assert!((p - 0.0095).abs() < 1e-15);
    }

    #[test]
    fn declaration_order_is_sorted() {
        let text = r#"
variable B { type discrete [2] { y, n }; }
variable A { type discrete [2] { y, n }; }
probability ( B | A ) { (y) 0.2, 0.8; (n) 0.6, 0.4; }
probability ( A ) { table 0.3, 0.7; }
"#;
        let net = parse_bif(text).unwrap();
        assert_eq!(net.variable(0).name(), "A");
        assert_eq!(net.variable(1).name(), "B");
        assert_eq!(net.variable(1).parents(), &[0]);
    }

    #[test]
    fn table_layout_with_parents() {
        let rows = r#"
variable F { type discrete [2] { t, f }; }
variable B { type discrete [2] { t, f }; }
variable D { type discrete [2] { t, f }; }
probability ( F ) { table 0.15 0.85 ; }
probability ( B ) { table 0.01 0.99 ; }
probability ( D | B, F ) { (t, t) 0.99, 0.01; (t, f) 0.97, 0.03; (f, t) 0.9, 0.1; (f, f) 0.3, 0.7; }
"#;
        let table = r#"
variable F { type discrete [2] { t, f }; }
variable B { type discrete [2] { t, f }; }
variable D { type discrete [2] { t, f }; }
probability ( F ) { table 0.15 0.85 ; }
probability ( B ) { table 0.01 0.99 ; }
probability ( "D" "B" "F" ) { table 0.99 0.97 0.9 0.3 0.01 0.03 0.1 0.7 ; }
"#;
        assert_eq!(parse_bif(rows).unwrap(), parse_bif(table).unwrap());
    }

    #[test]
    fn comments_properties_and_quotes() {
        let text = r#"
// header comment
network "Dog Problem" { property "credal-set constant-density-bounded 1.1" ; }
/* block
   comment */
variable "light-on" {
  type discrete [2] { "true" "false" };
  property "position = (218, 195)" ;
}
probability ( "light-on" ) { table 0.6 0.4 ; property "note" ; }
"#;
        let net = parse_bif(text).unwrap();
        assert_eq!(net.name(), Some("Dog Problem"));
        assert_eq!(net.properties().len(), 1);
        assert_eq!(net.variable(0).properties(), &["position = (218, 195)".to_string(), "note".to_string()]);
        assert_eq!(net.variable(0).outcomes(), &["true".to_string(), "false".to_string()]);
    }

    #[test]
    fn default_row_fills_missing() {
        let text = r#"
variable A { type discrete [3] { a, b, c }; }
variable B { type discrete [2] { y, n }; }
probability ( A ) { table 0.2 0.3 0.5; }
probability ( B | A ) { (b) 0.9, 0.1; default 0.5, 0.5; }
"#;
        let (net, warnings) = parse_bif_with_warnings(text).unwrap();
        assert_eq!(net.variable(1).column(0), &[0.5, 0.5]);
        assert_eq!(net.variable(1).column(1), &[0.9, 0.1]);
        assert!(warnings.is_empty());
    }

    #[test]
    fn continuous_is_unsupported() {
        let text = "variable X {\n  type continuous;\n}\n";
        let err = parse_bif(text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Unsupported);
        assert_eq!((err.diagnostic.line, err.diagnostic.column), (2, 8));
    }

    #[test]
    fn cycles_are_rejected() {
        let text = r#"
variable A { type discrete [2] { y, n }; }
variable B { type discrete [2] { y, n }; }
probability ( A | B ) { table 0.5 0.5 0.5 0.5; }
probability ( B | A ) { table 0.5 0.5 0.5 0.5; }
"#;
        let err = parse_bif(text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Semantic);
        assert!(err.diagnostic.message.contains("cycle"));
        assert_eq!(err.diagnostic.line, 4);
    }

    #[test]
    fn semantic_errors() {
        let missing = "variable A { type discrete [2] { y, n }; }";
        assert!(parse_bif(missing).unwrap_err().diagnostic.message.contains("no probability block"));
        let count = "variable A { type discrete [3] { y, n }; }";
        assert!(parse_bif(count).is_err());
        let unnormalized = "variable A { type discrete [2] { y, n }; }\nprobability ( A ) { table 0.5 0.3; }";
        let err = parse_bif(unnormalized).unwrap_err();
        assert!(matches!(err.model, Some(ModelError::NotNormalized { .. })));
        assert_eq!(err.diagnostic.line, 1);
        let partial = r#"
variable A { type discrete [2] { y, n }; }
variable B { type discrete [2] { y, n }; }
probability ( A ) { table 0.5 0.5; }
probability ( B | A ) { (y) 0.5, 0.5; }
"#;
        let err = parse_bif(partial).unwrap_err();
        assert!(err.diagnostic.message.contains("(n)"), "{}", err.diagnostic.message);
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse_bif("variable A {\n  type discrete [2] { y, n }\n}").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Syntax);
        assert_eq!(err.diagnostic.line, 3);
        let err = parse_bif("network x { } junk").unwrap_err();
        assert_eq!((err.diagnostic.line, err.diagnostic.column), (1, 15));
        assert!(parse_bif("/* never closed").is_err());
    }

    #[test]
    fn rescale_warning() {
        let text = "variable A { type discrete [3] { a, b, c }; }\nprobability ( A ) { table 0.1 0.2 0.7000000000000002; }";
        let (_, warnings) = parse_bif_with_warnings(text).unwrap();
        assert_eq!(warnings.len(), 1);
        assert_eq!(warnings[0].severity, Severity::Warning);
    }
}
