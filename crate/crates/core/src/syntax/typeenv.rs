//! Name-based type resolution: declared type text, composite-literal and
//! `make`/`new` initializers, propagated through simple same-function
//! assignments. No cross-package inference.

use super::ast::{self, Expr, Stmt};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Default, Clone)]
pub(crate) struct TypeEnv {
    names: BTreeMap<String, String>,
    /// Struct type names declared in this file that contain a by-value
    /// mutex field (directly or embedded).
    pub mutex_structs: BTreeSet<String>,
}

pub(crate) fn is_slice_type(ty: &str) -> bool {
    let t = ty.trim();
    t.starts_with("[]") || t.starts_with("...")
}

pub(crate) fn is_map_type(ty: &str) -> bool {
    ty.trim().starts_with("map[")
}

pub(crate) fn is_value_mutex_type(ty: &str) -> bool {
    matches!(ty.trim(), "sync.Mutex" | "sync.RWMutex")
}

pub(crate) fn is_waitgroup_type(ty: &str) -> bool {
    matches!(ty.trim(), "sync.WaitGroup" | "*sync.WaitGroup" | "&sync.WaitGroup")
}

pub(crate) fn is_error_type(ty: &str) -> bool {
    ty.trim() == "error"
}

impl TypeEnv {
    /// Environment for one function: receiver, parameters, named results,
    /// local declarations, and file-level vars/types as fallback.
    pub fn for_function(file: &ast::File, func: &ast::FuncDecl) -> TypeEnv {
        let mut env = TypeEnv::default();
        for t in &file.types {
            if t.is_struct
                && t.fields.iter().any(|f| is_value_mutex_type(&f.ty))
            {
                env.mutex_structs.insert(t.name.clone());
            }
        }
        for v in &file.vars {
            env.record_var_decl(v);
        }
        if let Some(recv) = &func.receiver {
            if let Some(name) = &recv.name {
                env.insert(name, recv.ty.trim());
            }
        }
        for p in &func.params {
            if let Some(name) = &p.name {
                env.insert(name, p.ty.trim());
            }
        }
        for r in &func.results {
            if let Some(name) = &r.name {
                env.insert(name, r.ty.trim());
            }
        }
        if let Some(body) = &func.body {
            env.scan_block(body);
        }
        env
    }

    pub fn type_of(&self, name: &str) -> Option<&str> {
        self.names.get(name).map(|s| s.as_str())
    }

    /// Error-typedness: declared `error` type, or the conventional result
    /// name `err` (the declared type is invisible for multi-value calls).
    pub fn is_error_var(&self, name: &str) -> bool {
        match self.type_of(name) {
            Some(ty) => is_error_type(ty),
            None => name == "err",
        }
    }

    fn insert(&mut self, name: &str, ty: &str) {
        if name == "_" || ty.is_empty() {
            return;
        }
        self.names.entry(name.to_string()).or_insert_with(|| ty.to_string());
    }

    fn record_var_decl(&mut self, v: &ast::VarDecl) {
        if let Some(ty) = &v.ty {
            for n in &v.names {
                self.insert(&n.name, ty.trim());
            }
            return;
        }
        // single-value initializers only; multi-value calls stay unknown
        if v.names.len() == v.init.len() {
            let inferred: Vec<Option<String>> =
                v.init.iter().map(|e| self.infer(e)).collect();
            for (n, ty) in v.names.iter().zip(inferred) {
                if let Some(ty) = ty {
                    self.insert(&n.name, &ty);
                }
            }
        }
    }

    fn scan_block(&mut self, block: &ast::Block) {
        ast::walk_block(block, &mut |stmt| match stmt {
            Stmt::Var(v) => self.record_var_decl_lazy(v),
            Stmt::Short(s) => {
                if s.names.len() == s.rhs.len() {
                    let inferred: Vec<Option<String>> =
                        s.rhs.iter().map(|e| self.infer(e)).collect();
                    for (n, ty) in s.names.iter().zip(inferred) {
                        if let Some(ty) = ty {
                            self.insert(&n.name, &ty);
                        }
                    }
                }
            }
            Stmt::Assign(a) if a.op == "=" && a.lhs.len() == a.rhs.len() => {
                let pairs: Vec<(Option<String>, Option<String>)> = a
                    .lhs
                    .iter()
                    .zip(&a.rhs)
                    .map(|(l, r)| {
                        (l.as_ident().map(|i| i.name.clone()), self.infer(r))
                    })
                    .collect();
                for (name, ty) in pairs {
                    if let (Some(name), Some(ty)) = (name, ty) {
                        self.insert(&name, &ty);
                    }
                }
            }
            _ => {}
        });
        // closures' bodies share the flat per-function map
        for closure in ast::closures_in_block(block) {
            for p in &closure.params {
                if let Some(name) = &p.name {
                    self.insert(name, p.ty.trim());
                }
            }
        }
    }

    fn record_var_decl_lazy(&mut self, v: &ast::VarDecl) {
        let copy = v.clone();
        self.record_var_decl(&copy);
    }

    /// Infer a type text from an initializer expression.
    fn infer(&self, e: &Expr) -> Option<String> {
        match e {
            Expr::Composite { ty, .. } if !ty.is_empty() => Some(ty.clone()),
            Expr::Unary { op, operand, .. } if op == "&" => {
                self.infer(operand).map(|t| format!("*{}", t))
            }
            Expr::Call { callee, args, .. } => {
                let name = callee.dotted_path()?;
                match name.as_str() {
                    "make" => match args.first()? {
                        Expr::TypeExpr { text, .. } => Some(text.clone()),
                        _ => None,
                    },
                    "new" => match args.first()? {
                        Expr::TypeExpr { text, .. } => Some(format!("*{}", text)),
                        Expr::Ident(i) => Some(format!("*{}", i.name)),
                        _ => None,
                    },
                    _ => None,
                }
            }
            Expr::Ident(i) => self.type_of(&i.name).map(|s| s.to_string()),
            Expr::Paren { inner, .. } => self.infer(inner),
            _ => None,
        }
    }
}
