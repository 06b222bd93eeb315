//! Class expressions: `add([1,4], 5/4/3)`, `rperp(U)`, `lperp(T)`,
//! `inter(X, Y)`, `oplus(X, Y)`, the names `S`, `T`, `U`, `V` and the
//! builtins `proj`, `inj`, `all`.

use std::collections::{BTreeMap, HashMap};

use cotorsion_core::serialcat::{CategoryCtx, Interval};
use cotorsion_core::subcat::Subcategory;
use cotorsion_core::FiniteField;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Literal(Interval),
    Name(String),
    Add(Vec<Expr>),
    RightPerp(Box<Expr>),
    LeftPerp(Box<Expr>),
    Inter(Box<Expr>, Box<Expr>),
    Oplus(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Comma,
    Atom(String),
}

fn tokenize(s: &str) -> CliResult<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | ',' => {
                chars.next();
                out.push(match c {
                    '(' => Token::Open,
                    ')' => Token::Close,
                    _ => Token::Comma,
                });
            }
            '[' => {
                let end = s[i..]
                    .find(']')
                    .ok_or_else(|| CliError::Usage(format!("unclosed '[' in '{s}'")))?;
                out.push(Token::Atom(s[i..=i + end].to_string()));
                while chars.peek().is_some_and(|&(j, _)| j <= i + end) {
                    chars.next();
                }
            }
            c if c.is_ascii_alphanumeric() || c == '/' || c == '_' => {
                let mut atom = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !(c.is_ascii_alphanumeric() || c == '/' || c == '_') {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                }
                out.push(Token::Atom(atom));
            }
            _ => return Err(CliError::Usage(format!("unexpected '{c}' in '{s}'"))),
        }
    }
    Ok(out)
}

pub fn parse_interval(s: &str) -> CliResult<Interval> {
    s.parse().map_err(|e: cotorsion_core::Error| {
        CliError::Usage(format!("bad indecomposable '{s}': {e}"))
    })
}

/// Parses a class expression.
pub fn parse(s: &str) -> CliResult<Expr> {
    let tokens = tokenize(s)?;
    let mut pos = 0;
    let e = parse_expr(&tokens, &mut pos, s)?;
    if pos != tokens.len() {
        return Err(CliError::Usage(format!("trailing input in '{s}'")));
    }
    Ok(e)
}

fn parse_expr(tokens: &[Token], pos: &mut usize, src: &str) -> CliResult<Expr> {
    let bad = |what: &str| CliError::Usage(format!("{what} in '{src}'"));
    let Some(Token::Atom(atom)) = tokens.get(*pos) else {
        return Err(bad("expected a name, function or indecomposable"));
    };
    *pos += 1;
    if atom.starts_with('[') || atom.starts_with(|c: char| c.is_ascii_digit()) {
        return Ok(Expr::Literal(parse_interval(atom)?));
    }
    if tokens.get(*pos) != Some(&Token::Open) {
        return Ok(Expr::Name(atom.clone()));
    }
    *pos += 1;
    let mut args = Vec::new();
    if tokens.get(*pos) != Some(&Token::Close) {
        loop {
            args.push(parse_expr(tokens, pos, src)?);
            match tokens.get(*pos) {
                Some(Token::Comma) => *pos += 1,
                Some(Token::Close) => break,
                _ => return Err(bad("expected ',' or ')'")),
            }
        }
    }
    *pos += 1;
    let arity = |k: usize| -> CliResult<()> {
        if args.len() == k {
            Ok(())
        } else {
            Err(bad(&format!(
                "{atom} takes {k} argument(s), got {}",
                args.len()
            )))
        }
    };
    Ok(match atom.as_str() {
        "add" => Expr::Add(args),
        "rperp" => {
            arity(1)?;
            Expr::RightPerp(Box::new(args.remove(0)))
        }
        "lperp" => {
            arity(1)?;
            Expr::LeftPerp(Box::new(args.remove(0)))
        }
        "inter" | "oplus" => {
            arity(2)?;
            let b = Box::new(args.pop().expect("two arguments"));
            let a = Box::new(args.pop().expect("two arguments"));
            if atom == "inter" {
                Expr::Inter(a, b)
            } else {
                Expr::Oplus(a, b)
            }
        }
        other => return Err(bad(&format!("unknown function '{other}'"))),
    })
}

/// Resolves named definitions against a category, detecting cycles.
pub struct Env<'a, F> {
    ctx: &'a CategoryCtx<F>,
    defs: BTreeMap<&'a str, Expr>,
    done: HashMap<String, Subcategory>,
    active: Vec<String>,
}

impl<'a, F: FiniteField> Env<'a, F> {
    pub fn new(ctx: &'a CategoryCtx<F>, defs: BTreeMap<&'a str, Expr>) -> Self {
        Env {
            ctx,
            defs,
            done: HashMap::new(),
            active: Vec::new(),
        }
    }

    pub fn resolve(&mut self, name: &str) -> CliResult<Subcategory> {
        if let Some(s) = self.done.get(name) {
            return Ok(s.clone());
        }
        if self.active.iter().any(|n| n == name) {
            return Err(CliError::Usage(format!(
                "cyclic class definitions: {} -> {name}",
                self.active.join(" -> ")
            )));
        }
        let e = match self.defs.get(name) {
            Some(e) => e.clone(),
            None => return self.builtin(name),
        };
        self.active.push(name.to_string());
        let s = self.eval(&e)?.named(name);
        self.active.pop();
        self.done.insert(name.to_string(), s.clone());
        Ok(s)
    }

    fn builtin(&self, name: &str) -> CliResult<Subcategory> {
        Ok(match name {
            "proj" => Subcategory::projectives(self.ctx),
            "inj" => Subcategory::injectives(self.ctx),
            "all" => Subcategory::all(self.ctx),
            _ => return Err(CliError::Usage(format!("unknown class '{name}'"))),
        })
    }

    pub fn eval(&mut self, e: &Expr) -> CliResult<Subcategory> {
        let ctx = self.ctx;
        Ok(match e {
            Expr::Literal(x) => Subcategory::new(ctx, x.to_string(), [*x])?,
            Expr::Name(n) => self.resolve(n)?,
            Expr::Add(items) => {
                let mut acc = Subcategory::empty("add");
                for item in items {
                    acc = acc.oplus(&self.eval(item)?);
                }
                acc
            }
            Expr::RightPerp(x) => self.eval(x)?.right_perp(ctx),
            Expr::LeftPerp(x) => self.eval(x)?.left_perp(ctx),
            Expr::Inter(a, b) => self.eval(a)?.inter(&self.eval(b)?),
            Expr::Oplus(a, b) => self.eval(a)?.oplus(&self.eval(b)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    #[test]
    fn parses_nested_expressions() {
        let e = parse("inter(rperp(U), add([1,4], 5/4/3, 2))").unwrap();
        assert_eq!(
            e,
            Expr::Inter(
                Box::new(Expr::RightPerp(Box::new(Expr::Name("U".into())))),
                Box::new(Expr::Add(vec![
                    Expr::Literal(iv("[1,4]")),
                    Expr::Literal(iv("[3,5]")),
                    Expr::Literal(iv("[2,2]")),
                ])),
            )
        );
        assert_eq!(parse("add()").unwrap(), Expr::Add(vec![]));
    }

    #[test]
    fn rejects_malformed_expressions() {
        for bad in [
            "rperp(U",
            "inter(U)",
            "frob(U)",
            "add([1,4]",
            "U V",
            "add(5/3)",
            "rperp(U,V)",
            "#",
        ] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }
}
