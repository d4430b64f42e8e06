//! Tolerant Go front end: lexer, recursive-descent parser, and the
//! semantic helpers the checks need (closure capture sets, lock-guard
//! context, name-based type resolution).
//!
//! Parsing is per-file and total over syntactically valid Go: constructs
//! outside the classified subset become [`NodeKind::Other`] nodes with
//! their children still parsed. There is no cross-package or cross-file
//! resolution.

mod ast;
mod lexer;
mod locks;
mod lower;
mod parser;
mod scope;
mod typeenv;

pub(crate) use ast::Rng;

use serde::Serialize;
use std::fmt;

/// A 1-based line/column position plus the 0-based byte offset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SourcePosition {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub byte_offset: usize,
}

/// Half-open byte region of one file with resolved line/column endpoints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Span {
    pub start: SourcePosition,
    pub end: SourcePosition,
}

impl Span {
    pub fn file(&self) -> &str {
        &self.start.file
    }

    pub(crate) fn rng(&self) -> Rng {
        Rng {
            start: self.start.byte_offset,
            end: self.end.byte_offset,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}",
            self.start.file, self.start.line, self.start.column
        )
    }
}

/// Classified node kinds. Anything the checks never look at stays `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodeKind {
    PackageClause,
    Import,
    FuncDecl,
    MethodDecl,
    ClosureLit,
    GoStmt,
    DeferStmt,
    ForRange,
    ForClause,
    Assign,
    ShortVarDecl,
    ReturnStmt,
    NakedReturnStmt,
    CallExpr,
    SelectorExpr,
    IndexExpr,
    ChanSend,
    ChanRecv,
    SelectStmt,
    SelectCase,
    StructType,
    Field,
    Ident,
    CompositeLit,
    IfStmt,
    Block,
    Other,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

/// One node of the lowered syntax tree. Children are ordered by byte
/// position, nested strictly inside the parent span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxNode {
    pub kind: NodeKind,
    pub span: Span,
    pub children: Vec<SyntaxNode>,
    pub text: String,
}

impl SyntaxNode {
    /// Pre-order traversal of this node and everything below it.
    pub fn walk<'a>(&'a self, visit: &mut dyn FnMut(&'a SyntaxNode)) {
        visit(self);
        for child in &self.children {
            child.walk(visit);
        }
    }

    /// All descendants (including self) of the given kind, in byte order.
    pub fn descendants_of_kind(&self, kind: NodeKind) -> Vec<&SyntaxNode> {
        let mut out = Vec::new();
        self.walk(&mut |n| {
            if n.kind == kind {
                out.push(n);
            }
        });
        out
    }
}

/// Method receiver shape of a declared function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Receiver {
    None,
    ValueReceiver(String),
    PointerReceiver(String),
}

impl Receiver {
    pub fn type_name(&self) -> Option<&str> {
        match self {
            Receiver::None => None,
            Receiver::ValueReceiver(t) | Receiver::PointerReceiver(t) => Some(t),
        }
    }
}

/// A top-level function or method of one file.
#[derive(Debug, Clone)]
pub struct FunctionInfo {
    /// Qualified symbol, `pkg.Func` or `pkg.Type.Method`.
    pub name: String,
    pub receiver: Receiver,
    /// Named result variables as (name, type text) pairs; empty when the
    /// results are unnamed.
    pub named_results: Vec<(String, String)>,
    /// Lowered body block.
    pub body: SyntaxNode,
    /// True for `TestXxx` functions found in `*_test.go` files.
    pub is_test: bool,
    /// Byte range of the whole declaration, used to find the typed form.
    pub(crate) decl_rng: Rng,
}

/// A line comment or general comment, kept out of the node tree.
#[derive(Debug, Clone)]
pub struct Comment {
    pub span: Span,
    pub text: String,
}

/// Parsed representation of one Go source file.
#[derive(Debug, Clone)]
pub struct SyntaxTree {
    path: String,
    source: String,
    root: SyntaxNode,
    functions: Vec<FunctionInfo>,
    comments: Vec<Comment>,
    is_test_file: bool,
    pub(crate) file: ast::File,
}

impl SyntaxTree {
    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn root(&self) -> &SyntaxNode {
        &self.root
    }

    pub fn functions(&self) -> &[FunctionInfo] {
        &self.functions
    }

    pub fn comments(&self) -> &[Comment] {
        &self.comments
    }

    /// True when the file name ends in `_test.go`.
    pub fn is_test_file(&self) -> bool {
        self.is_test_file
    }

    pub(crate) fn span_of(&self, rng: Rng) -> Span {
        lexer::span_for(&self.path, &self.source, rng)
    }

    pub(crate) fn text_of(&self, rng: Rng) -> &str {
        &self.source[rng.start.min(self.source.len())..rng.end.min(self.source.len())]
    }
}

/// Token-level parse failure. Structural surprises never error; they
/// produce `Other` nodes instead.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{file}:{line}:{column}: {message}")]
pub struct ParseError {
    pub message: String,
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub byte_offset: usize,
}

/// An identifier used inside a closure but declared in an enclosing
/// scope of the same top-level function.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CaptureEntry {
    pub identifier: String,
    /// Span of the construct whose scope declares the identifier.
    pub declaring_scope: Span,
    /// First use inside the closure body.
    pub first_use: Span,
}

/// By-reference captures of one closure, ordered for determinism.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaptureSet {
    pub entries: std::collections::BTreeSet<CaptureEntry>,
}

impl CaptureSet {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.entries.iter().any(|e| e.identifier == name)
    }

    pub fn get(&self, name: &str) -> Option<&CaptureEntry> {
        self.entries.iter().find(|e| e.identifier == name)
    }
}

/// Acquisition mode of a mutex guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GuardMode {
    Exclusive,
    ReadOnly,
}

/// One mutex guard active at a statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LockGuard {
    /// Source text of the locked expression, e.g. `g.mutex`.
    pub mutex: String,
    pub mode: GuardMode,
    pub acquired_at: Span,
    /// `None` when released by `defer`, which extends the guard to the
    /// end of the function.
    pub released_at: Option<Span>,
}

/// Mutex guards held on the straight-line path to a statement.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LockContext {
    pub guards: Vec<LockGuard>,
    /// Set when a branch on the path manipulates some mutex; downstream
    /// checks degrade confidence instead of trusting the guard list.
    pub ambiguous: bool,
}

impl LockContext {
    pub fn is_empty(&self) -> bool {
        self.guards.is_empty()
    }

    pub fn has_mode(&self, mode: GuardMode) -> bool {
        self.guards.iter().any(|g| g.mode == mode)
    }
}

/// Parse one Go source file into a [`SyntaxTree`].
///
/// Unrecognized statements become `Other` nodes; the parse only fails on
/// token-level problems (bad UTF-8 escapes, unterminated literals).
pub fn parse_source(text: &str, path: &str) -> Result<SyntaxTree, ParseError> {
    let lexed = lexer::lex(text, path)?;
    let file = parser::parse_file(text, &lexed);
    let (root, functions) = lower::lower(text, path, &file);
    let comments = lexed
        .comments
        .iter()
        .map(|c| Comment {
            span: lexer::span_for(path, text, c.rng),
            text: text[c.rng.start..c.rng.end].to_string(),
        })
        .collect();
    Ok(SyntaxTree {
        path: path.to_string(),
        source: text.to_string(),
        root,
        functions,
        comments,
        is_test_file: path.ends_with("_test.go"),
        file,
    })
}

/// Free variables of `closure` that resolve to declarations in enclosing
/// scopes of `enclosing`. Closure parameters, names declared inside the
/// closure before use, and the `x := x` privatization idiom are excluded.
pub fn compute_captures(
    tree: &SyntaxTree,
    closure: &SyntaxNode,
    enclosing: &FunctionInfo,
) -> CaptureSet {
    scope::captures_at(tree, closure.span.rng(), enclosing.decl_rng)
}

/// Mutex guards held on every straight-line path from the innermost
/// enclosing function or closure body to `stmt`.
pub fn resolve_lock_context(
    tree: &SyntaxTree,
    stmt: &SyntaxNode,
    enclosing: &FunctionInfo,
) -> LockContext {
    locks::lock_context_at(tree, stmt.span.rng(), enclosing.decl_rng)
}
