//! Lowering from the internal typed AST to the public generic node tree.

use super::ast::{self, Rng};
use super::lexer::span_for;
use super::{FunctionInfo, NodeKind, Receiver, SyntaxNode};

struct Lower<'a> {
    src: &'a str,
    path: &'a str,
}

pub(crate) fn lower(src: &str, path: &str, file: &ast::File) -> (SyntaxNode, Vec<FunctionInfo>) {
    let l = Lower { src, path };
    let mut children = Vec::new();
    if let Some((name, rng)) = &file.package {
        let ident_rng = Rng {
            start: rng.end - name.len(),
            end: rng.end,
        };
        children.push(l.node(
            NodeKind::PackageClause,
            *rng,
            vec![l.node(NodeKind::Ident, ident_rng, Vec::new())],
        ));
    }
    for imp in &file.imports {
        children.push(l.node(NodeKind::Import, *imp, Vec::new()));
    }
    for v in &file.vars {
        children.push(l.lower_var(v));
    }
    for t in &file.types {
        children.push(l.lower_type_decl(t));
    }
    for f in &file.funcs {
        children.push(l.lower_func(f));
    }
    for o in &file.others {
        children.push(l.node(NodeKind::Other, *o, Vec::new()));
    }
    let end = src.len();
    let root = l.node(NodeKind::Other, Rng { start: 0, end }, children);

    let pkg = file
        .package
        .as_ref()
        .map(|(n, _)| n.as_str())
        .unwrap_or("main");
    let is_test_file = path.ends_with("_test.go");
    let functions = file
        .funcs
        .iter()
        .filter(|f| f.body.is_some())
        .map(|f| {
            let receiver = match &f.receiver {
                None => Receiver::None,
                Some(p) => {
                    let ty = p.ty.trim();
                    if let Some(stripped) = ty.strip_prefix('*') {
                        Receiver::PointerReceiver(stripped.trim().to_string())
                    } else {
                        Receiver::ValueReceiver(ty.to_string())
                    }
                }
            };
            let name = match receiver.type_name() {
                Some(t) => format!("{}.{}.{}", pkg, t, f.name),
                None => format!("{}.{}", pkg, f.name),
            };
            FunctionInfo {
                name,
                receiver,
                named_results: f
                    .results
                    .iter()
                    .filter_map(|r| r.name.clone().map(|n| (n, r.ty.clone())))
                    .collect(),
                body: l.lower_block(f.body.as_ref().unwrap()),
                is_test: is_test_file && f.name.starts_with("Test"),
                decl_rng: f.rng,
            }
        })
        .collect();
    (root, functions)
}

impl<'a> Lower<'a> {
    fn node(&self, kind: NodeKind, rng: Rng, mut children: Vec<SyntaxNode>) -> SyntaxNode {
        children.sort_by_key(|c| (c.span.start.byte_offset, c.span.end.byte_offset));
        let span = span_for(self.path, self.src, rng);
        let text = self.src[rng.start.min(self.src.len())..rng.end.min(self.src.len())].to_string();
        SyntaxNode {
            kind,
            span,
            children,
            text,
        }
    }

    fn ident(&self, id: &ast::IdentNode) -> SyntaxNode {
        self.node(NodeKind::Ident, id.rng, Vec::new())
    }

    fn lower_func(&self, f: &ast::FuncDecl) -> SyntaxNode {
        let kind = if f.receiver.is_some() {
            NodeKind::MethodDecl
        } else {
            NodeKind::FuncDecl
        };
        let mut children = Vec::new();
        children.push(self.node(NodeKind::Ident, f.name_rng, Vec::new()));
        if let Some(recv) = &f.receiver {
            children.push(self.lower_param(recv));
        }
        for p in &f.params {
            children.push(self.lower_param(p));
        }
        for r in &f.results {
            if r.name.is_some() {
                children.push(self.lower_param(r));
            }
        }
        if let Some(body) = &f.body {
            children.push(self.lower_block(body));
        }
        self.node(kind, f.rng, children)
    }

    fn lower_param(&self, p: &ast::Param) -> SyntaxNode {
        let children = match p.name_rng {
            Some(rng) => vec![self.node(NodeKind::Ident, rng, Vec::new())],
            None => Vec::new(),
        };
        self.node(NodeKind::Field, p.rng, children)
    }

    fn lower_type_decl(&self, t: &ast::TypeDecl) -> SyntaxNode {
        if !t.is_struct {
            return self.node(NodeKind::Other, t.rng, Vec::new());
        }
        let fields = t.fields.iter().map(|f| self.lower_param(f)).collect();
        self.node(NodeKind::StructType, t.rng, fields)
    }

    fn lower_var(&self, v: &ast::VarDecl) -> SyntaxNode {
        let mut children: Vec<SyntaxNode> = v.names.iter().map(|n| self.ident(n)).collect();
        children.extend(v.init.iter().map(|e| self.lower_expr(e)));
        self.node(NodeKind::Other, v.rng, children)
    }

    fn lower_block(&self, b: &ast::Block) -> SyntaxNode {
        let children = b.stmts.iter().map(|s| self.lower_stmt(s)).collect();
        self.node(NodeKind::Block, b.rng, children)
    }

    fn lower_stmt(&self, s: &ast::Stmt) -> SyntaxNode {
        match s {
            ast::Stmt::Block(b) => self.lower_block(b),
            ast::Stmt::Short(sv) => {
                let mut children: Vec<SyntaxNode> =
                    sv.names.iter().map(|n| self.ident(n)).collect();
                children.extend(sv.rhs.iter().map(|e| self.lower_expr(e)));
                self.node(NodeKind::ShortVarDecl, sv.rng, children)
            }
            ast::Stmt::Assign(a) => {
                let mut children: Vec<SyntaxNode> =
                    a.lhs.iter().map(|e| self.lower_expr(e)).collect();
                children.extend(a.rhs.iter().map(|e| self.lower_expr(e)));
                self.node(NodeKind::Assign, a.rng, children)
            }
            ast::Stmt::Var(v) => self.lower_var(v),
            ast::Stmt::Go(g) => {
                let children = vec![self.lower_expr(&g.call)];
                self.node(NodeKind::GoStmt, g.rng, children)
            }
            ast::Stmt::Defer(d) => {
                let children = vec![self.lower_expr(&d.call)];
                self.node(NodeKind::DeferStmt, d.rng, children)
            }
            ast::Stmt::Return(r) => {
                let kind = if r.exprs.is_empty() {
                    NodeKind::NakedReturnStmt
                } else {
                    NodeKind::ReturnStmt
                };
                let children = r.exprs.iter().map(|e| self.lower_expr(e)).collect();
                self.node(kind, r.rng, children)
            }
            ast::Stmt::ForRange(f) => {
                let mut children = Vec::new();
                if let Some(k) = &f.key {
                    children.push(self.ident(k));
                }
                if let Some(v) = &f.value {
                    children.push(self.ident(v));
                }
                children.push(self.lower_expr(&f.subject));
                children.push(self.lower_block(&f.body));
                self.node(NodeKind::ForRange, f.rng, children)
            }
            ast::Stmt::ForClause(f) => {
                let mut children = Vec::new();
                if let Some(init) = &f.init {
                    children.push(self.lower_stmt(init));
                }
                if let Some(cond) = &f.cond {
                    children.push(self.lower_expr(cond));
                }
                if let Some(post) = &f.post {
                    children.push(self.lower_stmt(post));
                }
                children.push(self.lower_block(&f.body));
                self.node(NodeKind::ForClause, f.rng, children)
            }
            ast::Stmt::If(i) => {
                let mut children = Vec::new();
                if let Some(init) = &i.init {
                    children.push(self.lower_stmt(init));
                }
                children.push(self.lower_expr(&i.cond));
                children.push(self.lower_block(&i.then));
                if let Some(els) = &i.els {
                    children.push(self.lower_stmt(els));
                }
                self.node(NodeKind::IfStmt, i.rng, children)
            }
            ast::Stmt::Select(sel) => {
                let cases = sel
                    .cases
                    .iter()
                    .map(|c| {
                        let mut children = Vec::new();
                        if let Some(comm) = &c.comm {
                            children.push(self.lower_stmt(comm));
                        }
                        children.extend(c.body.iter().map(|st| self.lower_stmt(st)));
                        self.node(NodeKind::SelectCase, c.rng, children)
                    })
                    .collect();
                self.node(NodeKind::SelectStmt, sel.rng, cases)
            }
            ast::Stmt::Send(snd) => {
                let children = vec![self.lower_expr(&snd.channel), self.lower_expr(&snd.value)];
                self.node(NodeKind::ChanSend, snd.rng, children)
            }
            ast::Stmt::Expr(e) => self.lower_expr(e),
            ast::Stmt::Other(o) => {
                let mut children: Vec<SyntaxNode> =
                    o.stmts.iter().map(|st| self.lower_stmt(st)).collect();
                children.extend(o.exprs.iter().map(|e| self.lower_expr(e)));
                self.node(NodeKind::Other, o.rng, children)
            }
        }
    }

    fn lower_expr(&self, e: &ast::Expr) -> SyntaxNode {
        match e {
            ast::Expr::Ident(i) => self.ident(i),
            ast::Expr::Selector { base, field, rng } => {
                let children = vec![self.lower_expr(base), self.ident(field)];
                self.node(NodeKind::SelectorExpr, *rng, children)
            }
            ast::Expr::Index { base, index, rng } => {
                let children = vec![self.lower_expr(base), self.lower_expr(index)];
                self.node(NodeKind::IndexExpr, *rng, children)
            }
            ast::Expr::Call { callee, args, rng } => {
                let mut children = vec![self.lower_expr(callee)];
                children.extend(args.iter().map(|a| self.lower_expr(a)));
                self.node(NodeKind::CallExpr, *rng, children)
            }
            ast::Expr::Closure(c) => {
                let mut children: Vec<SyntaxNode> =
                    c.params.iter().map(|p| self.lower_param(p)).collect();
                for r in &c.results {
                    if r.name.is_some() {
                        children.push(self.lower_param(r));
                    }
                }
                children.push(self.lower_block(&c.body));
                self.node(NodeKind::ClosureLit, c.rng, children)
            }
            ast::Expr::Composite { elems, rng, .. } => {
                let children = elems.iter().map(|el| self.lower_expr(el)).collect();
                self.node(NodeKind::CompositeLit, *rng, children)
            }
            ast::Expr::Unary { operand, rng, .. } => {
                let children = vec![self.lower_expr(operand)];
                self.node(NodeKind::Other, *rng, children)
            }
            ast::Expr::Binary { lhs, rhs, rng, .. } => {
                let children = vec![self.lower_expr(lhs), self.lower_expr(rhs)];
                self.node(NodeKind::Other, *rng, children)
            }
            ast::Expr::Recv { channel, rng } => {
                let children = vec![self.lower_expr(channel)];
                self.node(NodeKind::ChanRecv, *rng, children)
            }
            ast::Expr::Lit(rng) => self.node(NodeKind::Other, *rng, Vec::new()),
            ast::Expr::TypeExpr { rng, .. } => self.node(NodeKind::Other, *rng, Vec::new()),
            ast::Expr::Paren { inner, rng } => {
                let children = vec![self.lower_expr(inner)];
                self.node(NodeKind::Other, *rng, children)
            }
            ast::Expr::Other { children, rng } => {
                let kids = children.iter().map(|c| self.lower_expr(c)).collect();
                self.node(NodeKind::Other, *rng, kids)
            }
        }
    }
}
