//! Recursive-descent parser for quantum-graph expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := rational | graph ('@' name (',' name)*)? | '{' graph-text '}' | '(' expr ')'
//! rational := integer ('/' integer)? | decimal
//! graph  := ('K' | 'C' | 'P' | 'E') '_'? integer
//! ```
//!
//! `*` and `^` are the gluing product and power. A rational literal `r`
//! stands for `r * K0`. `K2@1` puts label 1 on the first vertex of `K2`;
//! `K3@1,2` labels the first two vertices 1 and 2. Braces hold the graph
//! text form, e.g. `{3; 0-1*2,1-2; 1:0}`.

use crate::error::{Error, Result};
use crate::graph::{standard_graph, Multigraph};
use crate::quantum::QuantumGraph;
use crate::rational::{parse_rational, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(Rational),
    Graph(Multigraph),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn eval(&self) -> Result<QuantumGraph> {
        Ok(match self {
            Expr::Number(r) => QuantumGraph::constant(r.clone()),
            Expr::Graph(g) => QuantumGraph::graph(g)?,
            Expr::Neg(e) => e.eval()?.neg(),
            Expr::Add(a, b) => a.eval()?.add(&b.eval()?),
            Expr::Sub(a, b) => a.eval()?.sub(&b.eval()?),
            Expr::Mul(a, b) => a.eval()?.product(&b.eval()?)?,
            Expr::Pow(a, k) => a.eval()?.power(*k)?,
        })
    }
}

pub fn parse_ast(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Parse and evaluate in the quantum-graph ring.
pub fn parse_expr(text: &str) -> Result<QuantumGraph> {
    parse_ast(text)?.eval()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '.' || c == '/');
        if word.is_empty() {
            return Err(self.error("expected exponent"));
        }
        if !word.bytes().all(|b| b.is_ascii_digit()) {
            self.pos = start;
            return Err(self.error(&format!("non-integer exponent `{word}`")));
        }
        let k: u32 = word.parse().map_err(|_| {
            self.pos = start;
            self.error("exponent out of range")
        })?;
        if k == 0 {
            self.pos = start;
            return Err(self.error("exponent must be positive"));
        }
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if f(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some('{') => {
                self.pos += 1;
                let body = self.take_while(|c| c != '}').to_string();
                if !self.eat('}') {
                    return Err(self.error("unterminated graph literal"));
                }
                let g: Multigraph = body.parse().map_err(|e: Error| Error::Syntax {
                    offset: start,
                    message: e.to_string(),
                })?;
                Ok(Expr::Graph(g))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let mut text = self.take_while(|c| c.is_ascii_digit() || c == '.').to_string();
                // a `/` directly followed by a digit continues the literal
                let save = self.pos;
                self.skip_ws();
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.take_while(|c| c.is_ascii_digit());
                    if den.is_empty() {
                        return Err(self.error("expected denominator"));
                    }
                    text = format!("{text}/{den}");
                } else {
                    self.pos = save;
                }
                parse_rational(&text).map(Expr::Number).map_err(|_| Error::Syntax {
                    offset: start,
                    message: format!("bad number `{text}`"),
                })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let token = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
                let mut g = standard_graph(&token)?;
                if self.eat('@') {
                    g = self.attach_labels(g)?;
                }
                Ok(Expr::Graph(g))
            }
            Some(c) => Err(self.error(&format!("unexpected character `{c}`"))),
        }
    }

    fn attach_labels(&mut self, g: Multigraph) -> Result<Multigraph> {
        let mut names = Vec::new();
        loop {
            self.skip_ws();
            let at = self.pos;
            let word = self.take_while(|c| c.is_ascii_digit());
            let name: u32 = word.parse().map_err(|_| {
                self.pos = at;
                self.error("expected label name")
            })?;
            names.push(name);
            let save = self.pos;
            // `,` continues the label list only when a digit follows
            if self.eat(',') {
                self.skip_ws();
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    continue;
                }
            }
            self.pos = save;
            break;
        }
        if names.len() > g.vertex_count() {
            return Err(self.error("more labels than vertices"));
        }
        let edges: Vec<_> = g.edges().map(|((i, j), m)| (i, j, m)).collect();
        let labels: Vec<_> = names.into_iter().enumerate().collect();
        Multigraph::with_multiplicities(g.vertex_count(), &edges, &labels).map_err(|e| Error::Syntax {
            offset: self.pos,
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn g(token: &str) -> QuantumGraph {
        QuantumGraph::graph(&standard_graph(token).unwrap()).unwrap()
    }

    #[test]
    fn half_k2_cubed_minus_c4() {
        let q = parse_expr("1/2*K2^3 - C4").unwrap();
        let expected = g("K2").power(3).unwrap().scale(&ratio(1, 2)).sub(&g("C4"));
        assert_eq!(q, expected);
        assert_eq!(parse_expr(" 1 / 2 * K_2 ^ 3-C_4 ").unwrap(), expected);
    }

    #[test]
    fn unit_and_generator() {
        assert_eq!(parse_expr("K0").unwrap(), QuantumGraph::unit());
        let gen = parse_expr("(K2^4 - C4)^2 + (P3 - 2*K3)^2").unwrap();
        let a = g("K2").power(4).unwrap().sub(&g("C4")).power(2).unwrap();
        let b = g("P3").sub(&g("K3").scale(&int(2))).power(2).unwrap();
        assert_eq!(gen, a.add(&b));
        assert_eq!(gen.len(), 6);
    }

    #[test]
    fn labels_glue() {
        let p = parse_expr("K2@1 * K2@1").unwrap();
        assert!(p.is_labeled());
        assert_eq!(p.unlabel().unwrap(), g("P3"));
        let q = parse_expr("K3@1,2").unwrap();
        assert_eq!(q.terms().next().unwrap().1.labels().count(), 2);
    }

    #[test]
    fn unary_and_precedence() {
        assert_eq!(parse_expr("-K2^2").unwrap(), g("K2").power(2).unwrap().neg());
        assert_eq!(parse_expr("0").unwrap(), QuantumGraph::zero());
        assert_eq!(parse_expr("0.5*K1").unwrap(), g("K1").scale(&ratio(1, 2)));
        assert_eq!(parse_expr("K0 - K1").unwrap(), QuantumGraph::unit().sub(&g("K1")));
    }

    #[test]
    fn brace_literal() {
        let q = parse_expr("{2; 0-1*2}").unwrap();
        assert_eq!(q.terms().next().unwrap().1.edge_total(), 2);
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_expr("K2 + ") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("Z5"), Err(Error::UnknownToken(_))));
        match parse_expr("K2^1.5") {
            Err(Error::Syntax { offset, message }) => {
                assert_eq!(offset, 3);
                assert!(message.contains("non-integer"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("K2^0").is_err());
        assert!(parse_expr("(K2").is_err());
        assert!(parse_expr("K2 K3").is_err());
        assert!(parse_expr("K2@1,1").is_err());
    }

    #[test]
    fn printed_form_parses_back() {
        for text in [
            "1/2*K2^3 - C4",
            "(K2^4 - C4)^2 + (P3 - 2*K3)^2",
            "K2@1 * K2@1 - 3/7*{3; 0-1*2; 2:2}",
            "K0 - K1",
            "0",
            "E3 + K4*P2",
            "K2^3-C4",
        ] {
            let q = parse_expr(text).unwrap();
            assert_eq!(parse_expr(&q.to_string()).unwrap(), q, "{text} -> {q}");
        }
    }
}
