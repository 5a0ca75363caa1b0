//! The COT representation language.
//!
//! Unicode surface syntax uses subscript signs with a middle dot marking a
//! dotted (essential) subscript: `β·₊ · α₋·₊(σ₋) · α₊·₋(σ₊) · β·₋`. The
//! combining dot above (`₊̇`) is accepted as an alternative dot. The ASCII
//! syntax spells the same string `B.+ * o-.+(s-) * o+.-(s+) * B.-`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cot::{CotNode, CotTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn of(up: bool) -> Self {
        if up {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    fn glyph(self, style: Style) -> char {
        match (self, style) {
            (Sign::Plus, Style::Unicode) => '₊',
            (Sign::Minus, Style::Unicode) => '₋',
            (Sign::Plus, Style::Ascii) => '+',
            (Sign::Minus, Style::Ascii) => '-',
        }
    }
}

/// A COT symbol. Subscript order follows the written form: for `b` and the
/// chain symbols the first sign belongs to the first (branch) child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    /// Center, `σ±`.
    Sigma(Sign),
    /// Saddle with two inessential children, `b±±`.
    B(Sign, Sign),
    /// Chain saddle whose current and onward domains lie on opposite
    /// sides, `a_{s·t}`.
    A(Sign, Sign),
    /// Chain saddle whose current and onward domains lie on the same side,
    /// `α_{s·t}`.
    Alpha(Sign, Sign),
    /// `a·s·t`, two essential children of opposite sides.
    ADotted(Sign, Sign),
    /// `α·s·s`, two essential children on the same side.
    AlphaDotted(Sign),
    /// Boundary of the cut annulus, `β·±`.
    Beta(Sign),
}

impl Symbol {
    /// Children the symbol takes and whether they are cyclically ordered.
    pub fn arity(self) -> (usize, bool) {
        match self {
            Symbol::Sigma(_) | Symbol::Beta(_) => (0, false),
            Symbol::B(s, t) => (2, s == t),
            Symbol::A(..) | Symbol::Alpha(..) | Symbol::ADotted(..) => (2, false),
            Symbol::AlphaDotted(_) => (2, true),
        }
    }

    /// Symbol of the same structure with `H` replaced by `-H`.
    pub fn flipped(self) -> Self {
        match self {
            Symbol::Sigma(s) => Symbol::Sigma(s.flip()),
            Symbol::B(s, t) => Symbol::B(s.flip(), t.flip()),
            Symbol::A(s, t) => Symbol::A(s.flip(), t.flip()),
            Symbol::Alpha(s, t) => Symbol::Alpha(s.flip(), t.flip()),
            Symbol::ADotted(s, t) => Symbol::ADotted(s.flip(), t.flip()),
            Symbol::AlphaDotted(s) => Symbol::AlphaDotted(s.flip()),
            Symbol::Beta(s) => Symbol::Beta(s.flip()),
        }
    }

    pub fn is_leaf(self) -> bool {
        matches!(self, Symbol::Sigma(_) | Symbol::Beta(_))
    }

    pub fn render(self, style: Style) -> String {
        let g = |s: Sign| s.glyph(style);
        let dot = match style {
            Style::Unicode => '·',
            Style::Ascii => '.',
        };
        let (sigma, alpha, beta) = match style {
            Style::Unicode => ('σ', 'α', 'β'),
            Style::Ascii => ('s', 'o', 'B'),
        };
        match self {
            Symbol::Sigma(s) => format!("{sigma}{}", g(s)),
            Symbol::B(s, t) => format!("b{}{}", g(s), g(t)),
            Symbol::A(s, t) => format!("a{}{dot}{}", g(s), g(t)),
            Symbol::Alpha(s, t) => format!("{alpha}{}{dot}{}", g(s), g(t)),
            Symbol::ADotted(s, t) => format!("a{dot}{}{dot}{}", g(s), g(t)),
            Symbol::AlphaDotted(s) => format!("{alpha}{dot}{}{dot}{}", g(s), g(s)),
            Symbol::Beta(s) => format!("{beta}{dot}{}", g(s)),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Style::Unicode))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    #[default]
    Unicode,
    Ascii,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Strict,
    Permissive,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("COT syntax error at token {token}: {message}")]
pub struct ParseError {
    /// Zero-based index of the offending token (or the token count at end
    /// of input).
    pub token: usize,
    pub message: String,
}

fn fail<T>(token: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { token, message: message.into() })
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Sym(Symbol),
    Lambda(Sign),
    Open(char),
    Close(char),
    Sep,
    Comma,
}

#[derive(Clone, Copy)]
struct Unit {
    sign: Sign,
    dotted: bool,
}

const COMBINING_DOT: char = '\u{0307}';

fn sign_char(c: char) -> Option<Sign> {
    match c {
        '₊' | '+' => Some(Sign::Plus),
        '₋' | '-' => Some(Sign::Minus),
        _ => None,
    }
}

fn tokenize(text: &str) -> Result<Vec<Tok>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let simple = match c {
            '(' | '{' => Some(Tok::Open(c)),
            ')' | '}' => Some(Tok::Close(c)),
            ',' => Some(Tok::Comma),
            '·' | '*' => Some(Tok::Sep),
            _ => None,
        };
        if let Some(t) = simple {
            toks.push(t);
            k += 1;
            continue;
        }
        let units_needed = match c {
            'σ' | 's' | 'β' | 'B' | 'λ' | 'l' => 1,
            'b' | 'a' | 'α' | 'o' => 2,
            _ => return fail(toks.len(), format!("unexpected character {c:?}")),
        };
        k += 1;
        let mut units = Vec::with_capacity(2);
        for _ in 0..units_needed {
            let mut dotted = false;
            if matches!(chars.get(k), Some('·' | '.')) && chars.get(k + 1).and_then(|&c| sign_char(c)).is_some() {
                dotted = true;
                k += 1;
            }
            let Some(sign) = chars.get(k).and_then(|&c| sign_char(c)) else {
                return fail(toks.len(), format!("symbol {c:?} is missing a sign"));
            };
            k += 1;
            if chars.get(k) == Some(&COMBINING_DOT) {
                dotted = true;
                k += 1;
            }
            units.push(Unit { sign, dotted });
        }
        toks.push(symbol_token(c, &units).ok_or_else(|| ParseError {
            token: toks.len(),
            message: format!("no COT symbol {c} with these subscripts"),
        })?);
    }
    Ok(toks)
}

fn symbol_token(head: char, u: &[Unit]) -> Option<Tok> {
    let sym = match head {
        'σ' | 's' if !u[0].dotted => Symbol::Sigma(u[0].sign),
        'β' | 'B' if u[0].dotted => Symbol::Beta(u[0].sign),
        'λ' | 'l' if u[0].dotted => return Some(Tok::Lambda(u[0].sign)),
        'b' if !u[0].dotted && !u[1].dotted => Symbol::B(u[0].sign, u[1].sign),
        'a' => match (u[0].dotted, u[1].dotted) {
            (false, true) => Symbol::A(u[0].sign, u[1].sign),
            (true, true) if u[0].sign != u[1].sign => Symbol::ADotted(u[0].sign, u[1].sign),
            _ => return None,
        },
        'α' | 'o' => match (u[0].dotted, u[1].dotted) {
            (false, true) if u[0].sign != u[1].sign => Symbol::Alpha(u[0].sign, u[1].sign),
            (true, true) if u[0].sign == u[1].sign => Symbol::AlphaDotted(u[0].sign),
            _ => return None,
        },
        _ => return None,
    };
    Some(Tok::Sym(sym))
}

struct Parser<T> {
    toks: Vec<Tok>,
    pos: usize,
    mode: Mode,
    nodes: Vec<CotNode<T>>,
}

impl<T> Parser<T> {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Sym(s)) => s.to_string(),
            Some(Tok::Lambda(_)) => "λ".into(),
            Some(Tok::Open(c) | Tok::Close(c)) => format!("'{c}'"),
            Some(Tok::Sep) => "separator".into(),
            Some(Tok::Comma) => "','".into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            fail(self.pos, format!("expected {what}, found {}", self.describe()))
        }
    }

    /// Next symbol, resolving λ to β in permissive mode.
    fn symbol(&mut self, context: &str) -> Result<Symbol, ParseError> {
        match self.peek() {
            Some(Tok::Sym(s)) => {
                self.pos += 1;
                Ok(s)
            }
            Some(Tok::Lambda(s)) if self.mode == Mode::Permissive => {
                self.pos += 1;
                Ok(Symbol::Beta(s))
            }
            Some(Tok::Lambda(_)) => fail(self.pos, "λ is only accepted in permissive mode"),
            _ => fail(self.pos, format!("expected {context}, found {}", self.describe())),
        }
    }

    fn push(&mut self, symbol: Symbol, children: Vec<usize>) -> usize {
        self.nodes.push(CotNode::bare(symbol, children));
        self.nodes.len() - 1
    }

    fn root(&mut self) -> Result<usize, ParseError> {
        let at = self.pos;
        if self.symbol("β·₊")? != Symbol::Beta(Sign::Plus) {
            return fail(at, "a COT must start with β·₊");
        }
        self.expect(Tok::Sep, "separator after β·₊")?;
        let first = self.pos;
        let side = match self.peek() {
            Some(Tok::Sym(Symbol::Alpha(Sign::Minus, Sign::Plus))) => Sign::Minus,
            _ if self.mode == Mode::Strict => {
                return fail(first, format!("first symbol must be α₋·₊, found {}", self.describe()));
            }
            Some(Tok::Sym(Symbol::A(_, t))) => t,
            Some(Tok::Sym(Symbol::Alpha(s, _))) => s,
            _ => Sign::Plus,
        };
        let chain = self.chain(side)?;
        Ok(self.push(Symbol::Beta(Sign::Plus), vec![chain]))
    }

    /// `side` is the side of the current domain's next saddle: `Plus` for
    /// Chain₊ (onward domain above), `Minus` for Chain₋.
    fn chain(&mut self, side: Sign) -> Result<usize, ParseError> {
        let at = self.pos;
        let sym = self.symbol("chain symbol")?;
        let (branch, next) = match sym {
            Symbol::Beta(Sign::Minus) => return Ok(self.push(sym, vec![])),
            Symbol::A(s, t) if t == side => (s, t),
            Symbol::Alpha(s, t) if s == side => (s, t),
            _ => {
                let name = if side == Sign::Plus { "Chain₊" } else { "Chain₋" };
                return fail(at, format!("{sym} cannot appear in {name} position"));
            }
        };
        self.expect(Tok::Open('('), "'('")?;
        let b = self.branch(branch)?;
        self.expect(Tok::Close(')'), "')'")?;
        self.expect(Tok::Sep, "separator")?;
        let rest = self.chain(next)?;
        Ok(self.push(sym, vec![b, rest]))
    }

    fn branch(&mut self, side: Sign) -> Result<usize, ParseError> {
        let at = self.pos;
        let sym = self.symbol("branch symbol")?;
        let bad = |sym: Symbol| {
            let name = if side == Sign::Plus { "Bp" } else { "Bm" };
            fail(at, format!("{sym} cannot appear in {name} position"))
        };
        match sym {
            Symbol::Sigma(s) if s == side => Ok(self.push(sym, vec![])),
            Symbol::B(s, t) if s == side => {
                let cyclic = s == t;
                let (open, close) = if cyclic { ('{', '}') } else { ('(', ')') };
                self.expect(Tok::Open(open), &format!("'{open}'"))?;
                let x = self.branch(s)?;
                self.expect(Tok::Comma, "','")?;
                let y = self.branch(t)?;
                self.expect(Tok::Close(close), &format!("'{close}'"))?;
                Ok(self.push(sym, vec![x, y]))
            }
            Symbol::ADotted(s, t) if self.mode == Mode::Permissive => self.pair(sym, s, t, ('(', ')')),
            Symbol::AlphaDotted(s) if self.mode == Mode::Permissive => self.pair(sym, s, s, ('{', '}')),
            _ => bad(sym),
        }
    }

    fn pair(&mut self, sym: Symbol, s: Sign, t: Sign, (open, close): (char, char)) -> Result<usize, ParseError> {
        self.expect(Tok::Open(open), &format!("'{open}'"))?;
        let x = self.chain(s)?;
        self.expect(Tok::Comma, "','")?;
        let y = self.chain(t)?;
        self.expect(Tok::Close(close), &format!("'{close}'"))?;
        Ok(self.push(sym, vec![x, y]))
    }
}

/// Parses a COT string in either surface syntax. The tree carries structure
/// only.
pub fn parse<T>(text: &str, mode: Mode) -> Result<CotTree<T>, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, mode, nodes: Vec::new() };
    let root = p.root()?;
    if p.pos != p.toks.len() {
        return fail(p.pos, format!("trailing input starting with {}", p.describe()));
    }
    Ok(CotTree::from_nodes(p.nodes, root))
}

/// Canonical text: cyclic children sorted by their emitted text.
pub fn emit<T>(tree: &CotTree<T>, style: Style) -> String {
    let sep = match style {
        Style::Unicode => " · ",
        Style::Ascii => " * ",
    };
    let mut out = tree.nodes[tree.root].symbol.render(style);
    if let Some(&child) = tree.nodes[tree.root].children.first() {
        out.push_str(sep);
        out.push_str(&emit_chain(tree, child, style, sep));
    }
    out
}

fn emit_chain<T>(tree: &CotTree<T>, node: usize, style: Style, sep: &str) -> String {
    let n = &tree.nodes[node];
    match n.symbol {
        Symbol::A(..) | Symbol::Alpha(..) => format!(
            "{}({}){sep}{}",
            n.symbol.render(style),
            emit_branch(tree, n.children[0], style, sep),
            emit_chain(tree, n.children[1], style, sep)
        ),
        _ => emit_branch(tree, node, style, sep),
    }
}

fn emit_branch<T>(tree: &CotTree<T>, node: usize, style: Style, sep: &str) -> String {
    let n = &tree.nodes[node];
    let head = n.symbol.render(style);
    if n.children.is_empty() {
        return head;
    }
    let sub = |c: usize| match n.symbol {
        Symbol::ADotted(..) | Symbol::AlphaDotted(_) => emit_chain(tree, c, style, sep),
        _ => emit_branch(tree, c, style, sep),
    };
    let mut parts: Vec<String> = n.children.iter().map(|&c| sub(c)).collect();
    let (_, cyclic) = n.symbol.arity();
    if cyclic {
        parts.sort();
        format!("{head}{{{}}}", parts.join(", "))
    } else {
        format!("{head}({})", parts.join(", "))
    }
}

/// Structural equality: symbols and shape, cyclic children unordered,
/// values ignored.
pub fn cot_equal<T, U>(a: &CotTree<T>, b: &CotTree<U>) -> bool {
    emit(a, Style::Unicode) == emit(b, Style::Unicode)
}

/// Re-emits a string in canonical form.
pub fn canonicalize(text: &str, mode: Mode, style: Style) -> Result<String, ParseError> {
    Ok(emit(&parse::<f64>(text, mode)?, style))
}
