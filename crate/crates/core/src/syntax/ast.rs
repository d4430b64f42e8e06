//! Internal typed AST the semantic passes run on. The public
//! [`super::SyntaxNode`] tree is lowered from this form.

/// Half-open byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub(crate) struct Rng {
    pub start: usize,
    pub end: usize,
}

impl Rng {
    pub fn contains(&self, other: Rng) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct File {
    pub package: Option<(String, Rng)>,
    pub imports: Vec<Rng>,
    pub funcs: Vec<FuncDecl>,
    pub types: Vec<TypeDecl>,
    pub vars: Vec<VarDecl>,
    pub others: Vec<Rng>,
}

#[derive(Debug, Clone)]
pub(crate) struct FuncDecl {
    pub name: String,
    pub name_rng: Rng,
    pub receiver: Option<Param>,
    pub params: Vec<Param>,
    pub results: Vec<Param>,
    pub body: Option<Block>,
    pub rng: Rng,
}

impl FuncDecl {
    pub fn receiver_name(&self) -> Option<&str> {
        self.receiver.as_ref().and_then(|r| r.name.as_deref())
    }

    /// Receiver type name with any leading `*` stripped.
    pub fn receiver_type(&self) -> Option<&str> {
        self.receiver
            .as_ref()
            .map(|r| r.ty.trim_start_matches('*').trim())
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Param {
    pub name: Option<String>,
    pub name_rng: Option<Rng>,
    pub ty: String,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct TypeDecl {
    pub name: String,
    pub is_struct: bool,
    pub fields: Vec<Param>,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct Block {
    pub stmts: Vec<Stmt>,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) enum Stmt {
    Block(Block),
    Short(ShortVar),
    Assign(Assign),
    Var(VarDecl),
    Go(GoStmt),
    Defer(DeferStmt),
    Return(ReturnStmt),
    ForRange(ForRange),
    ForClause(ForClause),
    If(IfStmt),
    Select(SelectStmt),
    Send(SendStmt),
    Expr(Expr),
    Other(OtherStmt),
}

impl Stmt {
    pub fn rng(&self) -> Rng {
        match self {
            Stmt::Block(b) => b.rng,
            Stmt::Short(s) => s.rng,
            Stmt::Assign(a) => a.rng,
            Stmt::Var(v) => v.rng,
            Stmt::Go(g) => g.rng,
            Stmt::Defer(d) => d.rng,
            Stmt::Return(r) => r.rng,
            Stmt::ForRange(f) => f.rng,
            Stmt::ForClause(f) => f.rng,
            Stmt::If(i) => i.rng,
            Stmt::Select(s) => s.rng,
            Stmt::Send(s) => s.rng,
            Stmt::Expr(e) => e.rng(),
            Stmt::Other(o) => o.rng,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct IdentNode {
    pub name: String,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct ShortVar {
    pub names: Vec<IdentNode>,
    pub rhs: Vec<Expr>,
    pub rng: Rng,
}

impl ShortVar {
    /// True for the privatization idiom where `names[i]` re-declares an
    /// identically named identifier, as in `x := x` or `i, tt := i, tt`.
    pub fn is_self_shadow(&self, name: &str) -> bool {
        if self.names.len() != self.rhs.len() {
            return false;
        }
        self.names.iter().zip(&self.rhs).any(|(n, r)| {
            n.name == name && matches!(r, Expr::Ident(id) if id.name == name)
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Assign {
    /// Assignment operator text: `=`, `+=`, ..., or `++`/`--` for
    /// increment statements (which carry an empty `rhs`).
    pub op: String,
    pub lhs: Vec<Expr>,
    pub rhs: Vec<Expr>,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct VarDecl {
    pub names: Vec<IdentNode>,
    pub ty: Option<String>,
    pub init: Vec<Expr>,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct GoStmt {
    pub call: Expr,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct DeferStmt {
    pub call: Expr,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct ReturnStmt {
    pub exprs: Vec<Expr>,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct ForRange {
    pub key: Option<IdentNode>,
    pub value: Option<IdentNode>,
    /// True when the loop variables are declared with `:=`.
    pub define: bool,
    pub subject: Expr,
    pub body: Block,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct ForClause {
    pub init: Option<Box<Stmt>>,
    pub cond: Option<Expr>,
    pub post: Option<Box<Stmt>>,
    pub body: Block,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct IfStmt {
    pub init: Option<Box<Stmt>>,
    pub cond: Expr,
    pub then: Block,
    /// Either a `Block` or another `If`.
    pub els: Option<Box<Stmt>>,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct SelectStmt {
    pub cases: Vec<SelectCase>,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct SelectCase {
    /// Communication statement; `None` for `default:`.
    pub comm: Option<Box<Stmt>>,
    pub body: Vec<Stmt>,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct SendStmt {
    pub channel: Expr,
    pub value: Expr,
    pub rng: Rng,
}

/// Statement shapes the checks never classify (switch, const, goto, ...).
/// Nested statements and expressions are still parsed and walkable.
#[derive(Debug, Clone)]
pub(crate) struct OtherStmt {
    pub stmts: Vec<Stmt>,
    pub exprs: Vec<Expr>,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) struct ClosureNode {
    pub params: Vec<Param>,
    pub results: Vec<Param>,
    pub body: Block,
    pub rng: Rng,
}

#[derive(Debug, Clone)]
pub(crate) enum Expr {
    Ident(IdentNode),
    Selector {
        base: Box<Expr>,
        field: IdentNode,
        rng: Rng,
    },
    Index {
        base: Box<Expr>,
        index: Box<Expr>,
        rng: Rng,
    },
    Call {
        callee: Box<Expr>,
        args: Vec<Expr>,
        rng: Rng,
    },
    Closure(Box<ClosureNode>),
    Composite {
        ty: String,
        elems: Vec<Expr>,
        rng: Rng,
    },
    Unary {
        op: String,
        operand: Box<Expr>,
        rng: Rng,
    },
    Binary {
        op: String,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        rng: Rng,
    },
    /// `<-ch` receive expression.
    Recv {
        channel: Box<Expr>,
        rng: Rng,
    },
    Lit(Rng),
    /// A type used in expression position (`make` argument, conversion).
    TypeExpr {
        text: String,
        rng: Rng,
    },
    Paren {
        inner: Box<Expr>,
        rng: Rng,
    },
    Other {
        children: Vec<Expr>,
        rng: Rng,
    },
}

impl Expr {
    pub fn rng(&self) -> Rng {
        match self {
            Expr::Ident(i) => i.rng,
            Expr::Selector { rng, .. }
            | Expr::Index { rng, .. }
            | Expr::Call { rng, .. }
            | Expr::Composite { rng, .. }
            | Expr::Unary { rng, .. }
            | Expr::Binary { rng, .. }
            | Expr::Recv { rng, .. }
            | Expr::TypeExpr { rng, .. }
            | Expr::Paren { rng, .. }
            | Expr::Other { rng, .. } => *rng,
            Expr::Closure(c) => c.rng,
            Expr::Lit(rng) => *rng,
        }
    }

    pub fn as_ident(&self) -> Option<&IdentNode> {
        match self {
            Expr::Ident(i) => Some(i),
            Expr::Paren { inner, .. } => inner.as_ident(),
            _ => None,
        }
    }

    /// For `a.b.c` returns the flattened dotted path when every element
    /// is an identifier.
    pub fn dotted_path(&self) -> Option<String> {
        match self {
            Expr::Ident(i) => Some(i.name.clone()),
            Expr::Selector { base, field, .. } => {
                base.dotted_path().map(|b| format!("{}.{}", b, field.name))
            }
            Expr::Paren { inner, .. } => inner.dotted_path(),
            _ => None,
        }
    }
}

/// Walk helpers used by the semantic passes.
pub(crate) fn walk_block<'a>(block: &'a Block, f: &mut dyn FnMut(&'a Stmt)) {
    for stmt in &block.stmts {
        walk_stmt(stmt, f);
    }
}

pub(crate) fn walk_stmt<'a>(stmt: &'a Stmt, f: &mut dyn FnMut(&'a Stmt)) {
    f(stmt);
    match stmt {
        Stmt::Block(b) => walk_block(b, f),
        Stmt::ForRange(fr) => walk_block(&fr.body, f),
        Stmt::ForClause(fc) => {
            if let Some(init) = &fc.init {
                walk_stmt(init, f);
            }
            if let Some(post) = &fc.post {
                walk_stmt(post, f);
            }
            walk_block(&fc.body, f);
        }
        Stmt::If(i) => {
            if let Some(init) = &i.init {
                walk_stmt(init, f);
            }
            walk_block(&i.then, f);
            if let Some(els) = &i.els {
                walk_stmt(els, f);
            }
        }
        Stmt::Select(s) => {
            for case in &s.cases {
                if let Some(comm) = &case.comm {
                    walk_stmt(comm, f);
                }
                for st in &case.body {
                    walk_stmt(st, f);
                }
            }
        }
        Stmt::Other(o) => {
            for st in &o.stmts {
                walk_stmt(st, f);
            }
        }
        _ => {}
    }
}

/// Every expression in the statement, including nested closures' bodies'
/// statements' expressions when `into_closures` is set.
pub(crate) fn stmt_exprs(stmt: &Stmt) -> Vec<&Expr> {
    let mut out = Vec::new();
    match stmt {
        Stmt::Short(s) => out.extend(s.rhs.iter()),
        Stmt::Assign(a) => {
            out.extend(a.lhs.iter());
            out.extend(a.rhs.iter());
        }
        Stmt::Var(v) => out.extend(v.init.iter()),
        Stmt::Go(g) => out.push(&g.call),
        Stmt::Defer(d) => out.push(&d.call),
        Stmt::Return(r) => out.extend(r.exprs.iter()),
        Stmt::ForRange(f) => out.push(&f.subject),
        Stmt::ForClause(f) => {
            if let Some(c) = &f.cond {
                out.push(c);
            }
        }
        Stmt::If(i) => out.push(&i.cond),
        Stmt::Send(s) => {
            out.push(&s.channel);
            out.push(&s.value);
        }
        Stmt::Expr(e) => out.push(e),
        Stmt::Other(o) => out.extend(o.exprs.iter()),
        Stmt::Block(_) | Stmt::Select(_) => {}
    }
    out
}

/// Pre-order walk over an expression tree, not descending into closure
/// bodies (those are separate scopes handled by the callers).
pub(crate) fn walk_expr<'a>(expr: &'a Expr, f: &mut dyn FnMut(&'a Expr)) {
    f(expr);
    match expr {
        Expr::Selector { base, .. } => walk_expr(base, f),
        Expr::Index { base, index, .. } => {
            walk_expr(base, f);
            walk_expr(index, f);
        }
        Expr::Call { callee, args, .. } => {
            walk_expr(callee, f);
            for a in args {
                walk_expr(a, f);
            }
        }
        Expr::Composite { elems, .. } => {
            for e in elems {
                walk_expr(e, f);
            }
        }
        Expr::Unary { operand, .. } => walk_expr(operand, f),
        Expr::Binary { lhs, rhs, .. } => {
            walk_expr(lhs, f);
            walk_expr(rhs, f);
        }
        Expr::Recv { channel, .. } => walk_expr(channel, f),
        Expr::Paren { inner, .. } => walk_expr(inner, f),
        Expr::Other { children, .. } => {
            for c in children {
                walk_expr(c, f);
            }
        }
        Expr::Ident(_) | Expr::Closure(_) | Expr::Lit(_) | Expr::TypeExpr { .. } => {}
    }
}

fn expr_closures<'a>(expr: &'a Expr, out: &mut Vec<&'a ClosureNode>) {
    walk_expr(expr, &mut |e| {
        if let Expr::Closure(c) = e {
            out.push(c);
            block_closures(&c.body, out);
        }
    });
}

fn block_closures<'a>(block: &'a Block, out: &mut Vec<&'a ClosureNode>) {
    walk_block(block, &mut |s| {
        for e in stmt_exprs(s) {
            expr_closures(e, out);
        }
    });
}

/// All closures syntactically contained in a statement, including ones
/// nested inside other closures.
pub(crate) fn closures_in_stmt(stmt: &Stmt) -> Vec<&ClosureNode> {
    let mut out = Vec::new();
    walk_stmt(stmt, &mut |s| {
        for e in stmt_exprs(s) {
            expr_closures(e, &mut out);
        }
    });
    out
}

/// All closures in a block, including nested ones.
pub(crate) fn closures_in_block(block: &Block) -> Vec<&ClosureNode> {
    let mut out = Vec::new();
    block_closures(block, &mut out);
    out
}
