//! A small DSL for recoloring programs: parses both a semicolon statement
//! form and the bracketed two-row matrix form (operands on top, operations
//! below), executes programs against a coloring with full per-step
//! validation, and renders programs back to the matrix form.
//!
//! Statement grammar (whitespace-insensitive, `#` line comments):
//!
//! ```text
//! swap [a,b](α/β)        exchange α/β on the subchain between a and b
//! swap@ x (α/β)          exchange α/β on the component from endpoint x
//! seqswap@ x (β0,…,βt)   t consecutive swaps (β_{i-1}, β_i) at x
//! recolor u-v: a->b      recolor edge u-v from a to b
//! color u-v: c           color the uncolored edge u-v
//! uncolor u-v            remove the color of edge u-v
//! ```
//!
//! The matrix form pairs an operand row with an operation row:
//!
//! ```text
//! [ P[4,0] 2-3  0-1 ]
//! [ 1/2    2->5 2   ]
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::coloring::{Coloring, EdgeAction};
use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
#[error("parse error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
#[error("step {step}: {message}")]
pub struct ExecError {
    /// 0-based index of the failing statement.
    pub step: usize,
    pub message: String,
}

/// One recoloring operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    SubchainSwap {
        a: usize,
        b: usize,
        alpha: usize,
        beta: usize,
    },
    SwapAt {
        x: usize,
        alpha: usize,
        beta: usize,
    },
    SeqSwap {
        x: usize,
        colors: Vec<usize>,
    },
    Recolor {
        u: usize,
        v: usize,
        from: usize,
        to: usize,
    },
    Color {
        u: usize,
        v: usize,
        color: usize,
    },
    Uncolor {
        u: usize,
        v: usize,
    },
}

impl Statement {
    /// The canonical single-statement text form.
    pub fn to_text(&self) -> String {
        match self {
            Statement::SubchainSwap { a, b, alpha, beta } => {
                format!("swap [{a},{b}]({alpha}/{beta})")
            }
            Statement::SwapAt { x, alpha, beta } => format!("swap@ {x} ({alpha}/{beta})"),
            Statement::SeqSwap { x, colors } => {
                let list: Vec<String> = colors.iter().map(|c| c.to_string()).collect();
                format!("seqswap@ {x} ({})", list.join(","))
            }
            Statement::Recolor { u, v, from, to } => format!("recolor {u}-{v}: {from}->{to}"),
            Statement::Color { u, v, color } => format!("color {u}-{v}: {color}"),
            Statement::Uncolor { u, v } => format!("uncolor {u}-{v}"),
        }
    }

    fn operand_text(&self) -> String {
        match self {
            Statement::SubchainSwap { a, b, .. } => format!("P[{a},{b}]"),
            Statement::SwapAt { x, .. } | Statement::SeqSwap { x, .. } => x.to_string(),
            Statement::Recolor { u, v, .. }
            | Statement::Color { u, v, .. }
            | Statement::Uncolor { u, v } => format!("{u}-{v}"),
        }
    }

    fn operation_text(&self) -> String {
        match self {
            Statement::SubchainSwap { alpha, beta, .. } | Statement::SwapAt { alpha, beta, .. } => {
                format!("{alpha}/{beta}")
            }
            Statement::SeqSwap { colors, .. } => {
                let list: Vec<String> = colors.iter().map(|c| c.to_string()).collect();
                format!("({})", list.join(","))
            }
            Statement::Recolor { from, to, .. } => format!("{from}->{to}"),
            Statement::Color { color, .. } => color.to_string(),
            Statement::Uncolor { .. } => "-".to_string(),
        }
    }
}

/// A statement with its source position. Equality ignores the position, so
/// programs compare by content.
#[derive(Debug, Clone, Eq)]
pub struct Spanned {
    pub node: Statement,
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Spanned {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

/// A parsed recoloring program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptProgram {
    pub statements: Vec<Spanned>,
}

// ---------------------------------------------------------------------------
// lexer

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(usize),
    Ident(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Slash,
    Arrow,
    Dash,
    Colon,
    At,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let bytes = line.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            let (l, col) = (lineno + 1, i + 1);
            let mut push = |tok: Tok| {
                out.push(Token { tok, line: l, col });
            };
            match c {
                ' ' | '\t' | '\r' => {
                    i += 1;
                }
                '0'..='9' => {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    let value: usize = line[start..i].parse().map_err(|_| ParseError {
                        line: l,
                        col,
                        message: format!("integer literal too large: {}", &line[start..i]),
                    })?;
                    push(Tok::Int(value));
                }
                'a'..='z' | 'A'..='Z' | '_' => {
                    let start = i;
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                    {
                        i += 1;
                    }
                    push(Tok::Ident(line[start..i].to_string()));
                }
                '[' => {
                    push(Tok::LBracket);
                    i += 1;
                }
                ']' => {
                    push(Tok::RBracket);
                    i += 1;
                }
                '(' => {
                    push(Tok::LParen);
                    i += 1;
                }
                ')' => {
                    push(Tok::RParen);
                    i += 1;
                }
                ',' => {
                    push(Tok::Comma);
                    i += 1;
                }
                ';' => {
                    push(Tok::Semi);
                    i += 1;
                }
                '/' => {
                    push(Tok::Slash);
                    i += 1;
                }
                ':' => {
                    push(Tok::Colon);
                    i += 1;
                }
                '@' => {
                    push(Tok::At);
                    i += 1;
                }
                '-' => {
                    if i + 1 < bytes.len() && bytes[i + 1] == b'>' {
                        push(Tok::Arrow);
                        i += 2;
                    } else {
                        push(Tok::Dash);
                        i += 1;
                    }
                }
                other => {
                    return Err(ParseError {
                        line: l,
                        col,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// parser (recursive descent, one-token lookahead)

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Operand {
    Subchain(usize, usize),
    Vertex(usize),
    Edge(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Operation {
    Swap(usize, usize),
    Recolor(usize, usize),
    Color(usize),
    Uncolor,
    Seq(Vec<usize>),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self
            .peek()
            .map(|t| (t.line, t.col))
            .or_else(|| self.tokens.last().map(|t| (t.line, t.col + 1)))
            .unwrap_or((1, 1));
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, ParseError> {
        match self.peek() {
            Some(t) if t.tok == want => Ok(self.next().unwrap()),
            _ => Err(self.err_here(format!("expected {what}"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<(usize, usize, usize), ParseError> {
        match self.peek().cloned() {
            Some(Token {
                tok: Tok::Int(v),
                line,
                col,
            }) => {
                self.next();
                Ok((v, line, col))
            }
            _ => Err(self.err_here(format!("expected {what}"))),
        }
    }

    fn color(&mut self) -> Result<usize, ParseError> {
        let (v, line, col) = self.int("color")?;
        if v == 0 {
            return Err(ParseError {
                line,
                col,
                message: "color literals are positive (got 0)".into(),
            });
        }
        Ok(v)
    }

    fn edge(&mut self) -> Result<(usize, usize), ParseError> {
        let (u, ..) = self.int("edge (u-v)")?;
        match self.peek() {
            Some(t) if t.tok == Tok::Dash => {
                self.next();
            }
            _ => return Err(self.err_here("malformed edge token: expected '-'")),
        }
        let (v, ..) = self.int("edge endpoint")?;
        Ok((u, v))
    }

    fn color_list(&mut self) -> Result<Vec<usize>, ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let mut colors = vec![self.color()?];
        loop {
            match self.peek() {
                Some(t) if t.tok == Tok::Comma => {
                    self.next();
                    colors.push(self.color()?);
                }
                Some(t) if t.tok == Tok::RParen => {
                    self.next();
                    return Ok(colors);
                }
                _ => return Err(self.err_here("expected ',' or ')' in color list")),
            }
        }
    }

    fn color_pair(&mut self) -> Result<(usize, usize), ParseError> {
        self.expect(Tok::LParen, "'('")?;
        let a = self.color()?;
        self.expect(Tok::Slash, "'/'")?;
        let b = self.color()?;
        self.expect(Tok::RParen, "')'")?;
        Ok((a, b))
    }

    fn statement(&mut self) -> Result<Spanned, ParseError> {
        let Some(head) = self.peek().cloned() else {
            return Err(self.err_here("expected statement"));
        };
        let (line, col) = (head.line, head.col);
        let Tok::Ident(word) = &head.tok else {
            return Err(self.err_here("expected statement keyword"));
        };
        let node = match word.as_str() {
            "swap" => {
                self.next();
                match self.peek() {
                    Some(t) if t.tok == Tok::At => {
                        self.next();
                        let (x, ..) = self.int("vertex")?;
                        let (alpha, beta) = self.color_pair()?;
                        Statement::SwapAt { x, alpha, beta }
                    }
                    Some(t) if t.tok == Tok::LBracket => {
                        self.next();
                        let (a, ..) = self.int("vertex")?;
                        self.expect(Tok::Comma, "','")?;
                        let (b, ..) = self.int("vertex")?;
                        self.expect(Tok::RBracket, "']'")?;
                        let (alpha, beta) = self.color_pair()?;
                        Statement::SubchainSwap { a, b, alpha, beta }
                    }
                    _ => return Err(self.err_here("expected '@' or '[' after swap")),
                }
            }
            "seqswap" => {
                self.next();
                self.expect(Tok::At, "'@'")?;
                let (x, ..) = self.int("vertex")?;
                let colors = self.color_list()?;
                Statement::SeqSwap { x, colors }
            }
            "recolor" => {
                self.next();
                let (u, v) = self.edge()?;
                self.expect(Tok::Colon, "':'")?;
                let from = self.color()?;
                self.expect(Tok::Arrow, "'->'")?;
                let to = self.color()?;
                Statement::Recolor { u, v, from, to }
            }
            "color" => {
                self.next();
                let (u, v) = self.edge()?;
                self.expect(Tok::Colon, "':'")?;
                let color = self.color()?;
                Statement::Color { u, v, color }
            }
            "uncolor" => {
                self.next();
                let (u, v) = self.edge()?;
                Statement::Uncolor { u, v }
            }
            other => return Err(self.err_here(format!("unknown statement {other:?}"))),
        };
        Ok(Spanned { node, line, col })
    }

    fn operand(&mut self) -> Result<(Operand, usize, usize), ParseError> {
        match self.peek().cloned() {
            Some(Token {
                tok: Tok::Ident(w),
                line,
                col,
            }) if w == "P" => {
                self.next();
                self.expect(Tok::LBracket, "'['")?;
                let (a, ..) = self.int("vertex")?;
                self.expect(Tok::Comma, "','")?;
                let (b, ..) = self.int("vertex")?;
                self.expect(Tok::RBracket, "']'")?;
                Ok((Operand::Subchain(a, b), line, col))
            }
            Some(Token {
                tok: Tok::Int(u),
                line,
                col,
            }) => {
                self.next();
                match self.peek() {
                    Some(t) if t.tok == Tok::Dash => {
                        self.next();
                        let (v, ..) = self.int("edge endpoint")?;
                        Ok((Operand::Edge(u, v), line, col))
                    }
                    _ => Ok((Operand::Vertex(u), line, col)),
                }
            }
            _ => Err(self.err_here("expected operand (P[a,b], vertex, or u-v)")),
        }
    }

    fn operation(&mut self) -> Result<Operation, ParseError> {
        match self.peek().cloned() {
            Some(Token { tok: Tok::Dash, .. }) => {
                self.next();
                Ok(Operation::Uncolor)
            }
            Some(Token {
                tok: Tok::LParen, ..
            }) => Ok(Operation::Seq(self.color_list()?)),
            Some(Token {
                tok: Tok::Int(_), ..
            }) => {
                let a = self.color()?;
                match self.peek() {
                    Some(t) if t.tok == Tok::Slash => {
                        self.next();
                        let b = self.color()?;
                        Ok(Operation::Swap(a, b))
                    }
                    Some(t) if t.tok == Tok::Arrow => {
                        self.next();
                        let b = self.color()?;
                        Ok(Operation::Recolor(a, b))
                    }
                    _ => Ok(Operation::Color(a)),
                }
            }
            _ => Err(self.err_here("expected operation (α/β, a->b, c, -, or (…))")),
        }
    }

    /// `[ operand* ] [ operation* ]` zipped into statements.
    fn matrix_block(&mut self) -> Result<Vec<Spanned>, ParseError> {
        self.expect(Tok::LBracket, "'['")?;
        let mut operands = Vec::new();
        while self.peek().map(|t| &t.tok) != Some(&Tok::RBracket) {
            operands.push(self.operand()?);
        }
        self.expect(Tok::RBracket, "']'")?;
        self.expect(Tok::LBracket, "second matrix row '['")?;
        let mut operations = Vec::new();
        while self.peek().map(|t| &t.tok) != Some(&Tok::RBracket) {
            if operations.len() == operands.len() {
                return Err(self.err_here("operation row longer than operand row"));
            }
            operations.push(self.operation()?);
        }
        let close = self.expect(Tok::RBracket, "']'")?;
        if operations.len() != operands.len() {
            return Err(ParseError {
                line: close.line,
                col: close.col,
                message: format!(
                    "matrix rows differ: {} operands vs {} operations",
                    operands.len(),
                    operations.len()
                ),
            });
        }
        operands
            .into_iter()
            .zip(operations)
            .map(|((operand, line, col), operation)| {
                let node = match (operand, operation) {
                    (Operand::Subchain(a, b), Operation::Swap(alpha, beta)) => {
                        Statement::SubchainSwap { a, b, alpha, beta }
                    }
                    (Operand::Vertex(x), Operation::Swap(alpha, beta)) => {
                        Statement::SwapAt { x, alpha, beta }
                    }
                    (Operand::Vertex(x), Operation::Seq(colors)) => Statement::SeqSwap { x, colors },
                    (Operand::Edge(u, v), Operation::Recolor(from, to)) => {
                        Statement::Recolor { u, v, from, to }
                    }
                    (Operand::Edge(u, v), Operation::Color(color)) => {
                        Statement::Color { u, v, color }
                    }
                    (Operand::Edge(u, v), Operation::Uncolor) => Statement::Uncolor { u, v },
                    (operand, operation) => {
                        return Err(ParseError {
                            line,
                            col,
                            message: format!(
                                "operand {operand:?} does not take operation {operation:?}"
                            ),
                        })
                    }
                };
                Ok(Spanned { node, line, col })
            })
            .collect()
    }

    fn program(&mut self) -> Result<ScriptProgram, ParseError> {
        let mut statements = Vec::new();
        loop {
            while self.peek().map(|t| &t.tok) == Some(&Tok::Semi) {
                self.next();
            }
            let Some(head) = self.peek() else { break };
            if head.tok == Tok::LBracket {
                statements.extend(self.matrix_block()?);
            } else {
                statements.push(self.statement()?);
                match self.peek() {
                    None => {}
                    Some(t) if t.tok == Tok::Semi || t.tok == Tok::LBracket => {}
                    Some(_) => return Err(self.err_here("expected ';' between statements")),
                }
            }
        }
        if statements.is_empty() {
            return Err(ParseError {
                line: 1,
                col: 1,
                message: "empty program".into(),
            });
        }
        Ok(ScriptProgram { statements })
    }
}

/// Parses statement-form or matrix-form text into a program.
pub fn parse_script(text: &str) -> Result<ScriptProgram, ParseError> {
    let tokens = lex(text)?;
    Parser { tokens, pos: 0 }.program()
}

/// Renders a program as the bracketed two-row matrix: operands on top,
/// operations below, columns aligned. The output parses back to an
/// equivalent program.
pub fn render_script(program: &ScriptProgram) -> String {
    let ops: Vec<String> = program
        .statements
        .iter()
        .map(|s| s.node.operand_text())
        .collect();
    let acts: Vec<String> = program
        .statements
        .iter()
        .map(|s| s.node.operation_text())
        .collect();
    let widths: Vec<usize> = ops
        .iter()
        .zip(&acts)
        .map(|(o, a)| o.len().max(a.len()))
        .collect();
    let row = |cells: &[String]| -> String {
        let mut line = String::from("[ ");
        for (cell, w) in cells.iter().zip(&widths) {
            let _ = write!(line, "{cell:<w$} ");
        }
        line.push(']');
        line
    };
    format!("{}\n{}\n", row(&ops), row(&acts))
}

/// One executed step: the statement's canonical text and a stable hash of
/// the coloring after the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTrace {
    pub index: usize,
    pub text: String,
    pub hash: u64,
}

/// The result of a successful execution.
#[derive(Debug, Clone)]
pub struct ExecOutcome {
    pub coloring: Coloring,
    pub trace: Vec<StepTrace>,
}

/// Executes a program against a coloring of `graph`, validating every step
/// (linkage for subchain swaps, endpoint position for swaps, source match
/// and propriety for edge updates). Aborts with the failing step index.
pub fn execute_script(
    program: &ScriptProgram,
    graph: &Arc<Graph>,
    coloring: &Coloring,
) -> Result<ExecOutcome, ExecError> {
    if coloring.graph().as_ref() != graph.as_ref() {
        return Err(ExecError {
            step: 0,
            message: "coloring is bound to a different graph".into(),
        });
    }
    if !coloring.is_proper() {
        return Err(ExecError {
            step: 0,
            message: "input coloring is not proper".into(),
        });
    }
    let n = graph.n();
    let mut current = coloring.clone();
    let mut trace = Vec::with_capacity(program.statements.len());
    for (index, spanned) in program.statements.iter().enumerate() {
        let fail = |message: String| ExecError {
            step: index,
            message,
        };
        let check_vertex = |v: usize| -> Result<(), ExecError> {
            if v >= n {
                Err(ExecError {
                    step: index,
                    message: format!("vertex {v} out of range (n = {n})"),
                })
            } else {
                Ok(())
            }
        };
        match &spanned.node {
            Statement::SubchainSwap { a, b, alpha, beta } => {
                check_vertex(*a)?;
                check_vertex(*b)?;
                current
                    .swap_subchain(*a, *b, *alpha, *beta)
                    .map_err(|e| fail(e.to_string()))?;
            }
            Statement::SwapAt { x, alpha, beta } => {
                check_vertex(*x)?;
                current
                    .swap_at(*x, *alpha, *beta)
                    .map_err(|e| fail(e.to_string()))?;
            }
            Statement::SeqSwap { x, colors } => {
                check_vertex(*x)?;
                current
                    .swap_sequence(*x, colors)
                    .map_err(|e| fail(e.to_string()))?;
            }
            Statement::Recolor { u, v, from, to } => {
                check_vertex(*u)?;
                check_vertex(*v)?;
                current
                    .set_edge_color(*u, *v, EdgeAction::Recolor(*from, *to))
                    .map_err(|e| fail(e.to_string()))?;
            }
            Statement::Color { u, v, color } => {
                check_vertex(*u)?;
                check_vertex(*v)?;
                current
                    .set_edge_color(*u, *v, EdgeAction::Color(*color))
                    .map_err(|e| fail(e.to_string()))?;
            }
            Statement::Uncolor { u, v } => {
                check_vertex(*u)?;
                check_vertex(*v)?;
                current
                    .set_edge_color(*u, *v, EdgeAction::Uncolor)
                    .map_err(|e| fail(e.to_string()))?;
            }
        }
        debug_assert!(current.is_proper());
        trace.push(StepTrace {
            index,
            text: spanned.node.to_text(),
            hash: current.stable_hash(),
        });
    }
    Ok(ExecOutcome {
        coloring: current,
        trace,
    })
}

/// The formal inverse program: swaps self-invert, swap sequences reverse,
/// recolors reverse, color and uncolor exchange. Uncolor's inverse needs
/// the removed color, which is read off a forward replay from `before`
/// (the coloring the program was applied to).
pub fn inverse_script(program: &ScriptProgram, before: &Coloring) -> Result<ScriptProgram, String> {
    let mut current = before.clone();
    let mut inverted: Vec<Spanned> = Vec::with_capacity(program.statements.len());
    for spanned in &program.statements {
        let node = match &spanned.node {
            Statement::SubchainSwap { a, b, alpha, beta } => Statement::SubchainSwap {
                a: *a,
                b: *b,
                alpha: *alpha,
                beta: *beta,
            },
            Statement::SwapAt { x, alpha, beta } => Statement::SwapAt {
                x: *x,
                alpha: *alpha,
                beta: *beta,
            },
            Statement::SeqSwap { x, colors } => {
                let mut rev = colors.clone();
                rev.reverse();
                Statement::SeqSwap { x: *x, colors: rev }
            }
            Statement::Recolor { u, v, from, to } => Statement::Recolor {
                u: *u,
                v: *v,
                from: *to,
                to: *from,
            },
            Statement::Color { u, v, .. } => Statement::Uncolor { u: *u, v: *v },
            Statement::Uncolor { u, v } => {
                let color = current
                    .edge_color(*u, *v)
                    .ok_or_else(|| format!("edge {u}-{v} already uncolored at this step"))?;
                Statement::Color {
                    u: *u,
                    v: *v,
                    color,
                }
            }
        };
        inverted.push(Spanned {
            node,
            line: spanned.line,
            col: spanned.col,
        });
        let single = ScriptProgram {
            statements: vec![spanned.clone()],
        };
        let out = execute_script(&single, current.graph(), &current)
            .map_err(|e| format!("forward replay failed: {e}"))?;
        current = out.coloring;
    }
    inverted.reverse();
    Ok(ScriptProgram {
        statements: inverted,
    })
}
