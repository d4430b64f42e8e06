//! Tolerant recursive-descent parser for the Go subset the checks
//! classify. Anything else is consumed into `Other` nodes; the parse
//! never fails past the lexer.

use super::ast::*;
use super::lexer::{Lexed, TokKind, Token};

pub(crate) fn parse_file(src: &str, lexed: &Lexed) -> File {
    let mut p = P {
        src,
        toks: &lexed.tokens,
        pos: 0,
        composite_ok: true,
    };
    p.parse_file()
}

struct P<'a> {
    src: &'a str,
    toks: &'a [Token],
    pos: usize,
    composite_ok: bool,
}

const TYPE_START_PUNCT: &[&str] = &["*", "[", "(", "...", "<-"];
const TYPE_START_KW: &[&str] = &["map", "chan", "func", "interface", "struct"];

impl<'a> P<'a> {
    fn cur(&self) -> Token {
        self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn kind(&self) -> TokKind {
        self.cur().kind
    }

    fn text(&self, t: Token) -> &'a str {
        &self.src[t.rng.start..t.rng.end]
    }

    fn cur_text(&self) -> &'a str {
        self.text(self.cur())
    }

    fn at_eof(&self) -> bool {
        self.kind() == TokKind::Eof
    }

    fn nth(&self, n: usize) -> Token {
        self.toks[(self.pos + n).min(self.toks.len() - 1)]
    }

    fn is_punct(&self, s: &str) -> bool {
        self.kind() == TokKind::Punct && self.cur_text() == s
    }

    fn is_kw(&self, s: &str) -> bool {
        self.kind() == TokKind::Kw && self.cur_text() == s
    }

    fn is_semi(&self) -> bool {
        self.kind() == TokKind::Semi
    }

    fn bump(&mut self) -> Token {
        let t = self.cur();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn eat_punct(&mut self, s: &str) -> bool {
        if self.is_punct(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, s: &str) -> bool {
        if self.is_kw(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_semis(&mut self) {
        while self.is_semi() {
            self.bump();
        }
    }

    fn offset(&self) -> usize {
        self.cur().rng.start
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].rng.end
        }
    }

    /// Skip a balanced `(`/`[`/`{` group, assuming the opener is current.
    fn skip_balanced(&mut self) {
        let open = self.cur_text();
        let close = match open {
            "(" => ")",
            "[" => "]",
            "{" => "}",
            _ => {
                self.bump();
                return;
            }
        };
        self.bump();
        let mut depth = 1usize;
        while !self.at_eof() && depth > 0 {
            if self.kind() == TokKind::Punct {
                let t = self.cur_text();
                if t == open {
                    depth += 1;
                } else if t == close {
                    depth -= 1;
                }
            }
            self.bump();
        }
    }

    /// Skip to the next statement boundary at the current brace depth.
    fn recover_to_semi(&mut self) {
        let mut depth = 0usize;
        while !self.at_eof() {
            if self.kind() == TokKind::Semi && depth == 0 {
                return;
            }
            if self.kind() == TokKind::Punct {
                match self.cur_text() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" => depth = depth.saturating_sub(1),
                    "}" => {
                        if depth == 0 {
                            return;
                        }
                        depth -= 1;
                    }
                    _ => {}
                }
            }
            self.bump();
        }
    }

    // ---- file level ----

    fn parse_file(&mut self) -> File {
        let mut file = File::default();
        self.eat_semis();
        if self.is_kw("package") {
            let start = self.offset();
            self.bump();
            if self.kind() == TokKind::Ident {
                let t = self.bump();
                file.package = Some((
                    self.text(t).to_string(),
                    Rng {
                        start,
                        end: t.rng.end,
                    },
                ));
            }
            self.eat_semis();
        }
        while self.is_kw("import") {
            let start = self.offset();
            self.bump();
            if self.is_punct("(") {
                self.bump();
                self.eat_semis();
                while !self.at_eof() && !self.is_punct(")") {
                    let s = self.offset();
                    // optional alias, then path string
                    if self.kind() == TokKind::Ident || self.is_punct(".") {
                        self.bump();
                    }
                    if self.kind() == TokKind::Str {
                        let t = self.bump();
                        file.imports.push(Rng {
                            start: s,
                            end: t.rng.end,
                        });
                    } else {
                        self.bump();
                    }
                    self.eat_semis();
                }
                self.eat_punct(")");
            } else {
                if self.kind() == TokKind::Ident || self.is_punct(".") {
                    self.bump();
                }
                if self.kind() == TokKind::Str {
                    let t = self.bump();
                    file.imports.push(Rng {
                        start,
                        end: t.rng.end,
                    });
                }
            }
            self.eat_semis();
        }
        while !self.at_eof() {
            self.eat_semis();
            if self.at_eof() {
                break;
            }
            if self.is_kw("func") {
                let decl = self.parse_func_decl();
                file.funcs.push(decl);
            } else if self.is_kw("type") {
                self.parse_type_decls(&mut file.types, &mut file.others);
            } else if self.is_kw("var") {
                let mut specs = Vec::new();
                self.parse_var_decl(&mut specs);
                file.vars.extend(specs);
            } else {
                // const or anything else at top level
                let start = self.offset();
                self.recover_to_semi();
                let end = self.prev_end().max(start);
                if end > start {
                    file.others.push(Rng { start, end });
                }
                if self.is_semi() {
                    self.bump();
                } else if self.is_punct("}") || self.is_punct(")") {
                    self.bump();
                }
            }
        }
        file
    }

    fn parse_func_decl(&mut self) -> FuncDecl {
        let start = self.offset();
        self.bump(); // func
        let mut receiver = None;
        if self.is_punct("(") {
            let params = self.parse_param_list();
            receiver = params.into_iter().next();
        }
        let (name, name_rng) = if self.kind() == TokKind::Ident {
            let t = self.bump();
            (self.text(t).to_string(), t.rng)
        } else {
            (String::new(), self.cur().rng)
        };
        // generic type parameters: skip
        if self.is_punct("[") {
            self.skip_balanced();
        }
        let params = if self.is_punct("(") {
            self.parse_param_list()
        } else {
            Vec::new()
        };
        let results = self.parse_results();
        let body = if self.is_punct("{") {
            Some(self.parse_block())
        } else {
            None
        };
        let end = self.prev_end().max(start);
        FuncDecl {
            name,
            name_rng,
            receiver,
            params,
            results,
            body,
            rng: Rng { start, end },
        }
    }

    fn parse_results(&mut self) -> Vec<Param> {
        if self.is_punct("(") {
            self.parse_param_list()
        } else if self.type_starts_here() {
            let (text, rng) = self.parse_type_text();
            vec![Param {
                name: None,
                name_rng: None,
                ty: text,
                rng,
            }]
        } else {
            Vec::new()
        }
    }

    fn type_starts_here(&self) -> bool {
        match self.kind() {
            TokKind::Ident => true,
            TokKind::Kw => TYPE_START_KW.contains(&self.cur_text()),
            TokKind::Punct => TYPE_START_PUNCT.contains(&self.cur_text()),
            _ => false,
        }
    }

    /// Parse a parenthesized parameter list: receiver lists, parameter
    /// lists, and named/unnamed result lists all share this shape.
    fn parse_param_list(&mut self) -> Vec<Param> {
        let mut out = Vec::new();
        if !self.eat_punct("(") {
            return out;
        }
        // pending idents that may turn out to be names or bare types
        let mut pending: Vec<(String, Rng)> = Vec::new();
        let mut any_named = false;
        loop {
            self.eat_semis();
            if self.is_punct(")") || self.at_eof() {
                break;
            }
            if self.kind() == TokKind::Ident && !self.named_item_continues() {
                // bare identifier: name or a plain type, decided later
                let t = self.bump();
                pending.push((self.text(t).to_string(), t.rng));
            } else if self.kind() == TokKind::Ident {
                // `name Type` — flush pending idents as names of this type
                let t = self.bump();
                let name = self.text(t).to_string();
                let (ty, ty_rng) = self.parse_type_text();
                any_named = true;
                for (n, r) in pending.drain(..) {
                    out.push(Param {
                        name: Some(n),
                        name_rng: Some(r),
                        ty: ty.clone(),
                        rng: r,
                    });
                }
                out.push(Param {
                    name: Some(name),
                    name_rng: Some(t.rng),
                    ty,
                    rng: Rng {
                        start: t.rng.start,
                        end: ty_rng.end,
                    },
                });
            } else {
                // unnamed type
                let (ty, rng) = self.parse_type_text();
                for (n, r) in pending.drain(..) {
                    out.push(Param {
                        name: None,
                        name_rng: None,
                        ty: n,
                        rng: r,
                    });
                }
                out.push(Param {
                    name: None,
                    name_rng: None,
                    ty,
                    rng,
                });
            }
            if !self.eat_punct(",") {
                break;
            }
        }
        if !pending.is_empty() {
            if any_named {
                // `(a, b Type)` style already flushed; stragglers are types
                for (n, r) in pending.drain(..) {
                    out.push(Param {
                        name: None,
                        name_rng: None,
                        ty: n,
                        rng: r,
                    });
                }
            } else {
                for (n, r) in pending.drain(..) {
                    out.push(Param {
                        name: None,
                        name_rng: None,
                        ty: n,
                        rng: r,
                    });
                }
            }
        }
        self.eat_punct(")");
        out
    }

    /// After an identifier inside a parameter list: does a type follow
    /// (making the identifier a parameter name)?
    fn named_item_continues(&self) -> bool {
        let next = self.nth(1);
        match next.kind {
            TokKind::Ident => true,
            TokKind::Kw => TYPE_START_KW.contains(&self.text(next)),
            TokKind::Punct => TYPE_START_PUNCT.contains(&self.text(next)),
            _ => false,
        }
    }

    /// Consume a type and return its exact source text.
    fn parse_type_text(&mut self) -> (String, Rng) {
        let start = self.offset();
        self.consume_type();
        let end = self.prev_end().max(start);
        let rng = Rng { start, end };
        (self.src[rng.start..rng.end].to_string(), rng)
    }

    fn consume_type(&mut self) {
        if self.eat_punct("...") {
            self.consume_type();
            return;
        }
        if self.eat_punct("*") {
            self.consume_type();
            return;
        }
        if self.is_punct("(") {
            self.bump();
            self.consume_type();
            self.eat_punct(")");
            return;
        }
        if self.is_punct("[") {
            // slice or array: consume to matching ] then element type
            self.skip_balanced();
            self.consume_type();
            return;
        }
        if self.is_punct("<-") {
            self.bump();
            self.eat_kw("chan");
            self.consume_type();
            return;
        }
        if self.is_kw("chan") {
            self.bump();
            self.eat_punct("<-");
            self.consume_type();
            return;
        }
        if self.is_kw("map") {
            self.bump();
            if self.is_punct("[") {
                self.skip_balanced();
            }
            self.consume_type();
            return;
        }
        if self.is_kw("func") {
            self.bump();
            if self.is_punct("(") {
                self.skip_balanced();
            }
            // optional results
            if self.is_punct("(") {
                self.skip_balanced();
            } else if self.type_starts_here() && !self.is_semi() {
                self.consume_type();
            }
            return;
        }
        if self.is_kw("struct") || self.is_kw("interface") {
            self.bump();
            if self.is_punct("{") {
                self.skip_balanced();
            }
            return;
        }
        if self.kind() == TokKind::Ident {
            self.bump();
            while self.is_punct(".") && self.nth(1).kind == TokKind::Ident {
                self.bump();
                self.bump();
            }
            // generic instantiation
            if self.is_punct("[") {
                self.skip_balanced();
            }
        }
    }

    fn parse_type_decls(&mut self, types: &mut Vec<TypeDecl>, others: &mut Vec<Rng>) {
        let start = self.offset();
        self.bump(); // type
        if self.is_punct("(") {
            self.bump();
            self.eat_semis();
            while !self.at_eof() && !self.is_punct(")") {
                self.parse_type_spec(types, others);
                self.eat_semis();
            }
            self.eat_punct(")");
        } else {
            self.parse_type_spec(types, others);
        }
        let _ = start;
    }

    fn parse_type_spec(&mut self, types: &mut Vec<TypeDecl>, others: &mut Vec<Rng>) {
        let start = self.offset();
        if self.kind() != TokKind::Ident {
            self.recover_to_semi();
            return;
        }
        let name_tok = self.bump();
        let name = self.text(name_tok).to_string();
        if self.is_punct("[") {
            self.skip_balanced(); // type parameters
        }
        self.eat_punct("="); // alias declarations
        if self.is_kw("struct") {
            self.bump();
            let fields = self.parse_struct_fields();
            let end = self.prev_end().max(start);
            types.push(TypeDecl {
                name,
                is_struct: true,
                fields,
                rng: Rng { start, end },
            });
        } else {
            self.consume_type();
            let end = self.prev_end().max(start);
            types.push(TypeDecl {
                name,
                is_struct: false,
                fields: Vec::new(),
                rng: Rng { start, end },
            });
            let _ = others;
        }
    }

    fn parse_struct_fields(&mut self) -> Vec<Param> {
        let mut out = Vec::new();
        if !self.eat_punct("{") {
            return out;
        }
        self.eat_semis();
        while !self.at_eof() && !self.is_punct("}") {
            let mut names: Vec<(String, Rng)> = Vec::new();
            // gather `name, name Type` or detect an embedded type
            loop {
                if self.kind() == TokKind::Ident {
                    let next = self.nth(1);
                    let next_text = self.text(next);
                    if next.kind == TokKind::Punct && next_text == "," {
                        let t = self.bump();
                        names.push((self.text(t).to_string(), t.rng));
                        self.bump(); // comma
                        continue;
                    }
                    if next.kind == TokKind::Punct && (next_text == "." || next_text == "}")
                        || next.kind == TokKind::Semi
                        || next.kind == TokKind::Str
                    {
                        // embedded type like `sync.Mutex` or bare `Foo`
                        let (ty, rng) = self.parse_type_text();
                        out.push(Param {
                            name: None,
                            name_rng: None,
                            ty,
                            rng,
                        });
                        break;
                    }
                    // `name Type`
                    let t = self.bump();
                    names.push((self.text(t).to_string(), t.rng));
                    let (ty, ty_rng) = self.parse_type_text();
                    for (n, r) in names.drain(..) {
                        out.push(Param {
                            name: Some(n),
                            name_rng: Some(r),
                            ty: ty.clone(),
                            rng: Rng {
                                start: r.start,
                                end: ty_rng.end,
                            },
                        });
                    }
                    break;
                } else if self.is_punct("*") {
                    // embedded pointer type
                    let (ty, rng) = self.parse_type_text();
                    out.push(Param {
                        name: None,
                        name_rng: None,
                        ty,
                        rng,
                    });
                    break;
                } else {
                    self.recover_to_semi();
                    break;
                }
            }
            if self.kind() == TokKind::Str {
                self.bump(); // field tag
            }
            self.eat_semis();
        }
        self.eat_punct("}");
        out
    }

    fn parse_var_decl(&mut self, out: &mut Vec<VarDecl>) {
        self.bump(); // var
        if self.is_punct("(") {
            self.bump();
            self.eat_semis();
            while !self.at_eof() && !self.is_punct(")") {
                if let Some(spec) = self.parse_var_spec() {
                    out.push(spec);
                }
                self.eat_semis();
            }
            self.eat_punct(")");
        } else if let Some(spec) = self.parse_var_spec() {
            out.push(spec);
        }
    }

    fn parse_var_spec(&mut self) -> Option<VarDecl> {
        let start = self.offset();
        let mut names = Vec::new();
        loop {
            if self.kind() != TokKind::Ident {
                self.recover_to_semi();
                return None;
            }
            let t = self.bump();
            names.push(IdentNode {
                name: self.text(t).to_string(),
                rng: t.rng,
            });
            if !self.eat_punct(",") {
                break;
            }
        }
        let ty = if !self.is_punct("=") && !self.is_semi() && !self.is_punct(")") {
            Some(self.parse_type_text().0)
        } else {
            None
        };
        let mut init = Vec::new();
        if self.eat_punct("=") {
            init = self.parse_expr_list();
        }
        let end = self.prev_end().max(start);
        Some(VarDecl {
            names,
            ty,
            init,
            rng: Rng { start, end },
        })
    }

    // ---- statements ----

    fn parse_block(&mut self) -> Block {
        let start = self.offset();
        self.eat_punct("{");
        let stmts = self.parse_stmt_list();
        self.eat_punct("}");
        let end = self.prev_end().max(start);
        Block {
            stmts,
            rng: Rng { start, end },
        }
    }

    fn parse_stmt_list(&mut self) -> Vec<Stmt> {
        let mut stmts = Vec::new();
        loop {
            self.eat_semis();
            if self.at_eof() || self.is_punct("}") || self.is_kw("case") || self.is_kw("default") {
                break;
            }
            let before = self.pos;
            if let Some(s) = self.parse_stmt() {
                stmts.push(s);
            }
            if self.pos == before {
                // no progress: swallow one token to avoid looping
                self.bump();
            }
        }
        stmts
    }

    fn parse_stmt(&mut self) -> Option<Stmt> {
        let start = self.offset();
        if self.is_punct("{") {
            return Some(Stmt::Block(self.parse_block()));
        }
        if self.is_kw("var") {
            let mut specs = Vec::new();
            self.parse_var_decl(&mut specs);
            return match specs.len() {
                0 => None,
                1 => Some(Stmt::Var(specs.pop().unwrap())),
                _ => {
                    let end = self.prev_end().max(start);
                    Some(Stmt::Other(OtherStmt {
                        stmts: specs.into_iter().map(Stmt::Var).collect(),
                        exprs: Vec::new(),
                        rng: Rng { start, end },
                    }))
                }
            };
        }
        if self.is_kw("const") || self.is_kw("type") {
            self.bump();
            if self.is_punct("(") {
                self.skip_balanced();
            } else {
                self.recover_to_semi();
            }
            let end = self.prev_end().max(start);
            return Some(Stmt::Other(OtherStmt {
                stmts: Vec::new(),
                exprs: Vec::new(),
                rng: Rng { start, end },
            }));
        }
        if self.is_kw("go") {
            self.bump();
            let call = self.parse_expr();
            let end = self.prev_end().max(start);
            return Some(Stmt::Go(GoStmt {
                call,
                rng: Rng { start, end },
            }));
        }
        if self.is_kw("defer") {
            self.bump();
            let call = self.parse_expr();
            let end = self.prev_end().max(start);
            return Some(Stmt::Defer(DeferStmt {
                call,
                rng: Rng { start, end },
            }));
        }
        if self.is_kw("return") {
            self.bump();
            let exprs = if self.is_semi() || self.is_punct("}") {
                Vec::new()
            } else {
                self.parse_expr_list()
            };
            let end = self.prev_end().max(start);
            return Some(Stmt::Return(ReturnStmt {
                exprs,
                rng: Rng { start, end },
            }));
        }
        if self.is_kw("if") {
            return Some(self.parse_if());
        }
        if self.is_kw("for") {
            return Some(self.parse_for());
        }
        if self.is_kw("select") {
            return Some(self.parse_select());
        }
        if self.is_kw("switch") {
            return Some(self.parse_switch());
        }
        if self.is_kw("break")
            || self.is_kw("continue")
            || self.is_kw("goto")
            || self.is_kw("fallthrough")
        {
            self.bump();
            if self.kind() == TokKind::Ident {
                self.bump();
            }
            let end = self.prev_end().max(start);
            return Some(Stmt::Other(OtherStmt {
                stmts: Vec::new(),
                exprs: Vec::new(),
                rng: Rng { start, end },
            }));
        }
        // label?
        if self.kind() == TokKind::Ident
            && self.nth(1).kind == TokKind::Punct
            && self.text(self.nth(1)) == ":"
        {
            self.bump();
            self.bump();
            self.eat_semis();
            return self.parse_stmt();
        }
        match self.parse_simple_stmt() {
            Simple::Stmt(s) => Some(s),
            Simple::Range { .. } => {
                // `range` outside a for header: treat as opaque
                self.recover_to_semi();
                let end = self.prev_end().max(start);
                Some(Stmt::Other(OtherStmt {
                    stmts: Vec::new(),
                    exprs: Vec::new(),
                    rng: Rng { start, end },
                }))
            }
        }
    }

    fn parse_if(&mut self) -> Stmt {
        let start = self.offset();
        self.bump(); // if
        let saved = self.composite_ok;
        self.composite_ok = false;
        let mut init = None;
        let mut cond_stmt = self.parse_simple_stmt();
        if self.is_semi() {
            self.bump();
            if let Simple::Stmt(s) = cond_stmt {
                init = Some(Box::new(s));
            }
            cond_stmt = self.parse_simple_stmt();
        }
        let cond = match cond_stmt {
            Simple::Stmt(Stmt::Expr(e)) => e,
            Simple::Stmt(other) => {
                // tolerate odd headers by preserving the statement
                init = Some(Box::new(other));
                Expr::Lit(Rng {
                    start: self.offset(),
                    end: self.offset(),
                })
            }
            Simple::Range { .. } => Expr::Lit(Rng {
                start: self.offset(),
                end: self.offset(),
            }),
        };
        self.composite_ok = saved;
        let then = self.parse_block();
        let mut els = None;
        let checkpoint = self.pos;
        self.eat_semis();
        if self.is_kw("else") {
            self.bump();
            if self.is_kw("if") {
                els = Some(Box::new(self.parse_if()));
            } else if self.is_punct("{") {
                els = Some(Box::new(Stmt::Block(self.parse_block())));
            }
        } else {
            self.pos = checkpoint;
        }
        let end = self.prev_end().max(start);
        Stmt::If(IfStmt {
            init,
            cond,
            then,
            els,
            rng: Rng { start, end },
        })
    }

    fn parse_for(&mut self) -> Stmt {
        let start = self.offset();
        self.bump(); // for
        let saved = self.composite_ok;
        self.composite_ok = false;

        // bare `for {`
        if self.is_punct("{") {
            self.composite_ok = saved;
            let body = self.parse_block();
            let end = self.prev_end().max(start);
            return Stmt::ForClause(ForClause {
                init: None,
                cond: None,
                post: None,
                body,
                rng: Rng { start, end },
            });
        }
        // `for range xs {`
        if self.is_kw("range") {
            self.bump();
            let subject = self.parse_expr();
            self.composite_ok = saved;
            let body = self.parse_block();
            let end = self.prev_end().max(start);
            return Stmt::ForRange(ForRange {
                key: None,
                value: None,
                define: false,
                subject,
                body,
                rng: Rng { start, end },
            });
        }
        let first = if self.is_semi() {
            None
        } else {
            Some(self.parse_simple_stmt())
        };
        if let Some(Simple::Range {
            key,
            value,
            define,
            subject,
        }) = first
        {
            self.composite_ok = saved;
            let body = self.parse_block();
            let end = self.prev_end().max(start);
            return Stmt::ForRange(ForRange {
                key,
                value,
                define,
                subject,
                body,
                rng: Rng { start, end },
            });
        }
        let first = first.map(|s| match s {
            Simple::Stmt(st) => st,
            Simple::Range { .. } => unreachable!(),
        });
        if self.is_semi() {
            // three-clause form
            self.bump();
            let cond = if self.is_semi() {
                None
            } else {
                match self.parse_simple_stmt() {
                    Simple::Stmt(Stmt::Expr(e)) => Some(e),
                    _ => None,
                }
            };
            self.eat_semis();
            let post = if self.is_punct("{") {
                None
            } else {
                match self.parse_simple_stmt() {
                    Simple::Stmt(s) => Some(Box::new(s)),
                    Simple::Range { .. } => None,
                }
            };
            self.composite_ok = saved;
            let body = self.parse_block();
            let end = self.prev_end().max(start);
            return Stmt::ForClause(ForClause {
                init: first.map(Box::new),
                cond,
                post,
                body,
                rng: Rng { start, end },
            });
        }
        // condition-only form
        let cond = match first {
            Some(Stmt::Expr(e)) => Some(e),
            _ => None,
        };
        self.composite_ok = saved;
        let body = self.parse_block();
        let end = self.prev_end().max(start);
        Stmt::ForClause(ForClause {
            init: None,
            cond,
            post: None,
            body,
            rng: Rng { start, end },
        })
    }

    fn parse_select(&mut self) -> Stmt {
        let start = self.offset();
        self.bump(); // select
        let mut cases = Vec::new();
        if self.eat_punct("{") {
            self.eat_semis();
            while !self.at_eof() && !self.is_punct("}") {
                let case_start = self.offset();
                let mut comm = None;
                if self.eat_kw("case") {
                    match self.parse_simple_stmt() {
                        Simple::Stmt(s) => comm = Some(Box::new(s)),
                        Simple::Range { .. } => {}
                    }
                    self.eat_punct(":");
                } else if self.eat_kw("default") {
                    self.eat_punct(":");
                } else {
                    self.bump();
                    continue;
                }
                let body = self.parse_stmt_list();
                let end = self.prev_end().max(case_start);
                cases.push(SelectCase {
                    comm,
                    body,
                    rng: Rng {
                        start: case_start,
                        end,
                    },
                });
            }
            self.eat_punct("}");
        }
        let end = self.prev_end().max(start);
        Stmt::Select(SelectStmt {
            cases,
            rng: Rng { start, end },
        })
    }

    /// Switch statements stay unclassified; their headers and case bodies
    /// are still parsed so scopes and expressions resolve.
    fn parse_switch(&mut self) -> Stmt {
        let start = self.offset();
        self.bump(); // switch
        let saved = self.composite_ok;
        self.composite_ok = false;
        let mut stmts = Vec::new();
        let mut exprs = Vec::new();
        while !self.at_eof() && !self.is_punct("{") {
            if self.is_semi() {
                self.bump();
                continue;
            }
            match self.parse_simple_stmt() {
                Simple::Stmt(Stmt::Expr(e)) => exprs.push(e),
                Simple::Stmt(s) => stmts.push(s),
                Simple::Range { .. } => break,
            }
        }
        self.composite_ok = saved;
        if self.eat_punct("{") {
            self.eat_semis();
            while !self.at_eof() && !self.is_punct("}") {
                if self.eat_kw("case") {
                    loop {
                        exprs.push(self.parse_expr());
                        if !self.eat_punct(",") {
                            break;
                        }
                    }
                    self.eat_punct(":");
                } else if self.eat_kw("default") {
                    self.eat_punct(":");
                } else {
                    self.bump();
                    continue;
                }
                stmts.extend(self.parse_stmt_list());
            }
            self.eat_punct("}");
        }
        let end = self.prev_end().max(start);
        Stmt::Other(OtherStmt {
            stmts,
            exprs,
            rng: Rng { start, end },
        })
    }

    fn parse_simple_stmt(&mut self) -> Simple {
        let start = self.offset();
        let mut exprs = vec![self.parse_expr()];
        while self.eat_punct(",") {
            exprs.push(self.parse_expr());
        }
        if self.is_punct(":=") {
            self.bump();
            if self.is_kw("range") {
                self.bump();
                let subject = self.parse_expr();
                let (key, value) = idents_for_range(&exprs);
                return Simple::Range {
                    key,
                    value,
                    define: true,
                    subject,
                };
            }
            let rhs = self.parse_expr_list();
            let names = exprs
                .iter()
                .filter_map(|e| e.as_ident().cloned())
                .collect::<Vec<_>>();
            let end = self.prev_end().max(start);
            return Simple::Stmt(Stmt::Short(ShortVar {
                names,
                rhs,
                rng: Rng { start, end },
            }));
        }
        if self.kind() == TokKind::Punct {
            let op = self.cur_text();
            if op == "="
                || matches!(
                    op,
                    "+=" | "-=" | "*=" | "/=" | "%=" | "&=" | "|=" | "^=" | "<<=" | ">>=" | "&^="
                )
            {
                let op = op.to_string();
                self.bump();
                if op == "=" && self.is_kw("range") {
                    self.bump();
                    let subject = self.parse_expr();
                    let (key, value) = idents_for_range(&exprs);
                    return Simple::Range {
                        key,
                        value,
                        define: false,
                        subject,
                    };
                }
                let rhs = self.parse_expr_list();
                let end = self.prev_end().max(start);
                return Simple::Stmt(Stmt::Assign(Assign {
                    op,
                    lhs: exprs,
                    rhs,
                    rng: Rng { start, end },
                }));
            }
            if op == "++" || op == "--" {
                let op = op.to_string();
                self.bump();
                let end = self.prev_end().max(start);
                return Simple::Stmt(Stmt::Assign(Assign {
                    op,
                    lhs: exprs,
                    rhs: Vec::new(),
                    rng: Rng { start, end },
                }));
            }
            if op == "<-" {
                self.bump();
                let value = self.parse_expr();
                let end = self.prev_end().max(start);
                return Simple::Stmt(Stmt::Send(SendStmt {
                    channel: exprs.remove(0),
                    value,
                    rng: Rng { start, end },
                }));
            }
        }
        if exprs.len() == 1 {
            Simple::Stmt(Stmt::Expr(exprs.remove(0)))
        } else {
            let end = self.prev_end().max(start);
            Simple::Stmt(Stmt::Other(OtherStmt {
                stmts: Vec::new(),
                exprs,
                rng: Rng { start, end },
            }))
        }
    }

    // ---- expressions ----

    fn parse_expr_list(&mut self) -> Vec<Expr> {
        let mut out = vec![self.parse_expr()];
        while self.eat_punct(",") {
            if self.is_punct(")") || self.is_punct("}") || self.is_semi() {
                break; // trailing comma
            }
            out.push(self.parse_expr());
        }
        out
    }

    fn parse_expr(&mut self) -> Expr {
        self.parse_binary(1)
    }

    fn parse_binary(&mut self, min_prec: u8) -> Expr {
        let start = self.offset();
        let mut lhs = self.parse_unary();
        loop {
            let prec = if self.kind() == TokKind::Punct {
                binary_prec(self.cur_text())
            } else {
                0
            };
            if prec == 0 || prec < min_prec {
                return lhs;
            }
            let op = self.cur_text().to_string();
            self.bump();
            let rhs = self.parse_binary(prec + 1);
            let end = self.prev_end().max(start);
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                rng: Rng { start, end },
            };
        }
    }

    fn parse_unary(&mut self) -> Expr {
        let start = self.offset();
        if self.kind() == TokKind::Punct {
            let t = self.cur_text();
            if t == "<-" {
                self.bump();
                // `<-chan T` type in expression position
                if self.is_kw("chan") {
                    self.pos -= 1;
                    return self.parse_type_operand();
                }
                let operand = self.parse_unary();
                let end = self.prev_end().max(start);
                return Expr::Recv {
                    channel: Box::new(operand),
                    rng: Rng { start, end },
                };
            }
            if matches!(t, "+" | "-" | "!" | "^" | "*" | "&") {
                let op = t.to_string();
                self.bump();
                let operand = self.parse_unary();
                let end = self.prev_end().max(start);
                return Expr::Unary {
                    op,
                    operand: Box::new(operand),
                    rng: Rng { start, end },
                };
            }
        }
        self.parse_primary()
    }

    fn parse_primary(&mut self) -> Expr {
        let mut node = self.parse_operand();
        loop {
            if self.is_punct(".") {
                let next = self.nth(1);
                if next.kind == TokKind::Ident {
                    let start = node.rng().start;
                    self.bump();
                    let t = self.bump();
                    node = Expr::Selector {
                        base: Box::new(node),
                        field: IdentNode {
                            name: self.text(t).to_string(),
                            rng: t.rng,
                        },
                        rng: Rng {
                            start,
                            end: t.rng.end,
                        },
                    };
                    continue;
                }
                if next.kind == TokKind::Punct && self.text(next) == "(" {
                    // type assertion `x.(T)` or `x.(type)`
                    let start = node.rng().start;
                    self.bump();
                    self.skip_balanced();
                    let end = self.prev_end().max(start);
                    node = Expr::Other {
                        children: vec![node],
                        rng: Rng { start, end },
                    };
                    continue;
                }
                break;
            }
            if self.is_punct("(") {
                let start = node.rng().start;
                let saved = self.composite_ok;
                self.composite_ok = true;
                self.bump();
                let mut args = Vec::new();
                while !self.at_eof() && !self.is_punct(")") {
                    if self.type_arg_starts_here() {
                        let (text, rng) = self.parse_type_text();
                        args.push(Expr::TypeExpr { text, rng });
                    } else {
                        args.push(self.parse_expr());
                    }
                    self.eat_punct("...");
                    self.eat_semis();
                    if !self.eat_punct(",") {
                        break;
                    }
                    self.eat_semis();
                }
                self.eat_punct(")");
                self.composite_ok = saved;
                let end = self.prev_end().max(start);
                node = Expr::Call {
                    callee: Box::new(node),
                    args,
                    rng: Rng { start, end },
                };
                continue;
            }
            if self.is_punct("[") {
                let start = node.rng().start;
                let saved = self.composite_ok;
                self.composite_ok = true;
                self.bump();
                let mut parts = Vec::new();
                let mut is_slice_expr = false;
                while !self.at_eof() && !self.is_punct("]") {
                    if self.is_punct(":") {
                        is_slice_expr = true;
                        self.bump();
                        continue;
                    }
                    parts.push(self.parse_expr());
                    if self.is_punct(",") {
                        self.bump();
                    }
                }
                self.eat_punct("]");
                self.composite_ok = saved;
                let end = self.prev_end().max(start);
                node = if !is_slice_expr && parts.len() == 1 {
                    Expr::Index {
                        base: Box::new(node),
                        index: Box::new(parts.pop().unwrap()),
                        rng: Rng { start, end },
                    }
                } else {
                    let mut children = vec![node];
                    children.extend(parts);
                    Expr::Other {
                        children,
                        rng: Rng { start, end },
                    }
                };
                continue;
            }
            if self.is_punct("{") && self.composite_ok && is_type_shaped(&node) {
                let start = node.rng().start;
                let ty_rng = node.rng();
                let ty = self.src[ty_rng.start..ty_rng.end].to_string();
                let elems = self.parse_composite_body();
                let end = self.prev_end().max(start);
                node = Expr::Composite {
                    ty,
                    elems,
                    rng: Rng { start, end },
                };
                continue;
            }
            break;
        }
        node
    }

    /// Does a type (not a value expression) start here in call-argument
    /// position? Catches `make(map[k]v)`, `make([]T, n)`, `new(T)` args.
    fn type_arg_starts_here(&self) -> bool {
        match self.kind() {
            TokKind::Kw => TYPE_START_KW.contains(&self.cur_text()),
            TokKind::Punct => self.cur_text() == "[",
            _ => false,
        }
    }

    fn parse_operand(&mut self) -> Expr {
        let start = self.offset();
        match self.kind() {
            TokKind::Int | TokKind::Float | TokKind::Imag | TokKind::Rune | TokKind::Str => {
                let t = self.bump();
                Expr::Lit(t.rng)
            }
            TokKind::Ident => {
                let t = self.bump();
                Expr::Ident(IdentNode {
                    name: self.text(t).to_string(),
                    rng: t.rng,
                })
            }
            TokKind::Punct if self.is_punct("(") => {
                let saved = self.composite_ok;
                self.composite_ok = true;
                self.bump();
                let inner = self.parse_expr();
                self.eat_punct(")");
                self.composite_ok = saved;
                let end = self.prev_end().max(start);
                Expr::Paren {
                    inner: Box::new(inner),
                    rng: Rng { start, end },
                }
            }
            TokKind::Punct if self.is_punct("[") => self.parse_type_operand(),
            TokKind::Kw if self.is_kw("func") => {
                let t_func = self.bump();
                let _ = t_func;
                let params = if self.is_punct("(") {
                    self.parse_param_list()
                } else {
                    Vec::new()
                };
                let results = self.parse_results();
                if self.is_punct("{") {
                    let saved = self.composite_ok;
                    self.composite_ok = true;
                    let body = self.parse_block();
                    self.composite_ok = saved;
                    let end = self.prev_end().max(start);
                    Expr::Closure(Box::new(ClosureNode {
                        params,
                        results,
                        body,
                        rng: Rng { start, end },
                    }))
                } else {
                    let end = self.prev_end().max(start);
                    let rng = Rng { start, end };
                    Expr::TypeExpr {
                        text: self.src[rng.start..rng.end].to_string(),
                        rng,
                    }
                }
            }
            TokKind::Kw
                if self.is_kw("map")
                    || self.is_kw("chan")
                    || self.is_kw("struct")
                    || self.is_kw("interface") =>
            {
                self.parse_type_operand()
            }
            _ => {
                // opaque token (keyword in odd position etc.)
                let t = self.bump();
                Expr::Other {
                    children: Vec::new(),
                    rng: t.rng,
                }
            }
        }
    }

    /// A type in operand position: composite literal type, conversion,
    /// or a bare type expression (e.g. a `make` argument).
    fn parse_type_operand(&mut self) -> Expr {
        let (text, rng) = self.parse_type_text();
        if self.is_punct("{") && self.composite_ok {
            let elems = self.parse_composite_body();
            let end = self.prev_end().max(rng.start);
            return Expr::Composite {
                ty: text,
                elems,
                rng: Rng {
                    start: rng.start,
                    end,
                },
            };
        }
        Expr::TypeExpr { text, rng }
    }

    fn parse_composite_body(&mut self) -> Vec<Expr> {
        let mut elems = Vec::new();
        let saved = self.composite_ok;
        self.composite_ok = true;
        self.eat_punct("{");
        self.eat_semis();
        while !self.at_eof() && !self.is_punct("}") {
            let value = if self.is_punct("{") {
                // nested untyped composite
                let start = self.offset();
                let inner = self.parse_composite_body();
                let end = self.prev_end().max(start);
                Expr::Composite {
                    ty: String::new(),
                    elems: inner,
                    rng: Rng { start, end },
                }
            } else {
                self.parse_expr()
            };
            if self.eat_punct(":") {
                // `value` was a key; the real element follows
                let elem = if self.is_punct("{") {
                    let start = self.offset();
                    let inner = self.parse_composite_body();
                    let end = self.prev_end().max(start);
                    Expr::Composite {
                        ty: String::new(),
                        elems: inner,
                        rng: Rng { start, end },
                    }
                } else {
                    self.parse_expr()
                };
                elems.push(elem);
            } else {
                elems.push(value);
            }
            self.eat_semis();
            if !self.eat_punct(",") {
                self.eat_semis();
                if !self.is_punct("}") && !self.at_eof() {
                    continue;
                }
                break;
            }
            self.eat_semis();
        }
        self.eat_punct("}");
        self.composite_ok = saved;
        elems
    }
}

enum Simple {
    Stmt(Stmt),
    Range {
        key: Option<IdentNode>,
        value: Option<IdentNode>,
        define: bool,
        subject: Expr,
    },
}

fn idents_for_range(exprs: &[Expr]) -> (Option<IdentNode>, Option<IdentNode>) {
    let key = exprs.first().and_then(|e| e.as_ident().cloned());
    let value = exprs.get(1).and_then(|e| e.as_ident().cloned());
    (key, value)
}

fn binary_prec(op: &str) -> u8 {
    match op {
        "||" => 1,
        "&&" => 2,
        "==" | "!=" | "<" | "<=" | ">" | ">=" => 3,
        "+" | "-" | "|" | "^" => 4,
        "*" | "/" | "%" | "<<" | ">>" | "&" | "&^" => 5,
        _ => 0,
    }
}

/// Shapes that can precede a composite-literal brace: `T{}`, `pkg.T{}`,
/// and generic instantiations lowered to index expressions.
fn is_type_shaped(e: &Expr) -> bool {
    match e {
        Expr::Ident(_) => true,
        Expr::Selector { base, .. } => is_type_shaped(base),
        Expr::Index { base, .. } => is_type_shaped(base),
        _ => false,
    }
}
