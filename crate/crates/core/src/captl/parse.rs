//! Lexer and recursive-descent parser for requirement documents and single
//! PCTL queries.

use super::{Context, Objective, Requirement, RequirementError};
use crate::pctl::{Direction, Interval, PathFormula, Query, StateFormula};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Num(f64),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

const SYMBOLS: [&str; 16] = ["->", "<=", ">=", "=", ";", ":", "[", "]", "(", ")", ",", "!", "&", "|", "<", ">"];

fn syntax(line: usize, column: usize, message: impl Into<String>) -> RequirementError {
    RequirementError::Syntax { line, column, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Token>, RequirementError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\n' {
                    return Err(syntax(tl, tc, "unterminated string"));
                }
                i += 1;
            }
            if i == chars.len() {
                return Err(syntax(tl, tc, "unterminated string"));
            }
            i += 1;
            Tok::Str(chars[start + 1..i - 1].iter().collect())
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Num(s.parse().map_err(|_| syntax(tl, tc, format!("malformed number `{s}`")))?)
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let sym =
                SYMBOLS.iter().find(|s| rest.starts_with(**s)).ok_or_else(|| syntax(tl, tc, format!("unexpected character `{c}`")))?;
            i += sym.chars().count();
            Tok::Sym(sym)
        };
        col += i - start;
        out.push(Token { tok, line: tl, column: tc });
    }
    out.push(Token { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, RequirementError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error(&self, message: impl Into<String>) -> RequirementError {
        let t = &self.toks[self.pos];
        syntax(t.line, t.column, message)
    }

    fn found(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Num(x) => format!("`{x}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(x) if *x == s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), RequirementError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`, found {}", self.found())))
        }
    }

    fn is_keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == k)
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if self.is_keyword(k) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, k: &str) -> Result<(), RequirementError> {
        if self.eat_keyword(k) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{k}`, found {}", self.found())))
        }
    }

    fn ident(&mut self) -> Result<String, RequirementError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(format!("expected identifier, found {}", self.found()))),
        }
    }

    fn number(&mut self) -> Result<f64, RequirementError> {
        match *self.peek() {
            Tok::Num(x) => {
                self.bump();
                Ok(x)
            }
            _ => Err(self.error(format!("expected number, found {}", self.found()))),
        }
    }

    fn direction(&mut self) -> Result<Direction, RequirementError> {
        if self.eat_keyword("Pmax") {
            Ok(Direction::Max)
        } else if self.eat_keyword("Pmin") {
            Ok(Direction::Min)
        } else {
            Err(self.error(format!("expected `Pmax` or `Pmin`, found {}", self.found())))
        }
    }

    // stateform := or ; or := and { "|" and } ; and := unary { "&" unary }
    fn state_formula(&mut self) -> Result<StateFormula, RequirementError> {
        let mut lhs = self.conjunction()?;
        while self.eat_sym("|") {
            lhs = StateFormula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<StateFormula, RequirementError> {
        let mut lhs = self.unary()?;
        while self.eat_sym("&") {
            lhs = StateFormula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<StateFormula, RequirementError> {
        if self.eat_sym("!") {
            return Ok(StateFormula::negation(self.unary()?));
        }
        if self.eat_sym("(") {
            let f = self.state_formula()?;
            self.expect_sym(")")?;
            return Ok(f);
        }
        if self.eat_keyword("true") {
            return Ok(StateFormula::True);
        }
        match self.peek().clone() {
            Tok::Str(a) => {
                self.bump();
                Ok(StateFormula::Atom(a))
            }
            _ => Err(self.error(format!("expected state formula, found {}", self.found()))),
        }
    }

    /// `F Φ` or `F G Φ`.
    fn objective_path(&mut self) -> Result<PathFormula, RequirementError> {
        self.expect_keyword("F")?;
        if self.eat_keyword("G") {
            Ok(PathFormula::EventuallyAlways(self.state_formula()?))
        } else {
            Ok(PathFormula::Eventually(self.state_formula()?))
        }
    }

    /// Any path formula accepted by single queries.
    fn query_path(&mut self) -> Result<PathFormula, RequirementError> {
        if self.eat_keyword("X") {
            return Ok(PathFormula::Next(self.state_formula()?));
        }
        if self.eat_keyword("G") {
            return Ok(PathFormula::Always(self.state_formula()?));
        }
        if self.is_keyword("F") {
            return self.objective_path();
        }
        let lhs = self.state_formula()?;
        self.expect_keyword("U")?;
        if self.eat_sym("<=") {
            let k = self.number()?;
            if k < 0.0 || k.fract() != 0.0 || k > u32::MAX as f64 {
                return Err(self.error(format!("step bound must be a non-negative integer, got {k}")));
            }
            let rhs = self.state_formula()?;
            return Ok(PathFormula::BoundedUntil(lhs, rhs, k as u32));
        }
        Ok(PathFormula::Until(lhs, self.state_formula()?))
    }

    /// `< c`, `<= c`, `> c`, `>= c` (the last two only when `ordering` is
    /// set) or `in` followed by an interval.
    fn bound(&mut self, ordering: bool) -> Result<Interval, RequirementError> {
        if self.eat_sym("<") {
            return Ok(Interval::below(self.number()?));
        }
        if self.eat_sym("<=") {
            return Ok(Interval::at_most(self.number()?));
        }
        if ordering && self.eat_sym(">") {
            return Ok(Interval::above(self.number()?));
        }
        if ordering && self.eat_sym(">=") {
            return Ok(Interval::at_least(self.number()?));
        }
        if self.eat_keyword("in") {
            let lo_strict = if self.eat_sym("(") {
                true
            } else {
                self.expect_sym("[")?;
                false
            };
            let lo = self.number()?;
            self.expect_sym(",")?;
            let hi = self.number()?;
            let hi_strict = if self.eat_sym(")") {
                true
            } else {
                self.expect_sym("]")?;
                false
            };
            return Ok(Interval::new(lo, lo_strict, hi, hi_strict));
        }
        Err(self.error(format!("expected bound, found {}", self.found())))
    }

    fn requirement(&mut self) -> Result<Requirement, RequirementError> {
        let mut req = Requirement { objectives: Vec::new(), contexts: Vec::new(), initial: String::new() };
        let mut initial_seen = false;
        loop {
            if matches!(self.peek(), Tok::Eof) {
                break;
            }
            if self.eat_keyword("objective") {
                let id = self.ident()?;
                self.expect_sym("=")?;
                let direction = self.direction()?;
                self.expect_sym("[")?;
                let path = self.objective_path()?;
                self.expect_sym("]")?;
                self.expect_sym(";")?;
                req.objectives.push(Objective { id, direction, path });
            } else if self.eat_keyword("context") {
                let id = self.ident()?;
                self.expect_sym(":")?;
                let source = self.ident()?;
                self.expect_sym("->")?;
                let target = self.ident()?;
                self.expect_keyword("when")?;
                self.expect_keyword("Pmax")?;
                let interval = self.bound(false)?;
                self.expect_sym(";")?;
                req.contexts.push(Context { id, source, target, interval });
            } else if self.is_keyword("initial") {
                if initial_seen {
                    return Err(self.error("duplicate initial declaration"));
                }
                self.bump();
                initial_seen = true;
                req.initial = self.ident()?;
                self.expect_sym(";")?;
            } else {
                return Err(self.error(format!("expected `objective`, `context` or `initial`, found {}", self.found())));
            }
        }
        Ok(req)
    }

    fn query(&mut self) -> Result<Query, RequirementError> {
        let direction = self.direction()?;
        let bound = if matches!(self.peek(), Tok::Sym("[")) { None } else { Some(self.bound(true)?) };
        self.expect_sym("[")?;
        let path = self.query_path()?;
        self.expect_sym("]")?;
        if !matches!(self.peek(), Tok::Eof) {
            return Err(self.error(format!("unexpected {} after query", self.found())));
        }
        Ok(Query { direction, bound, path })
    }
}

/// Parses a requirement document and validates its structure.
pub fn parse_requirement(text: &str) -> Result<Requirement, RequirementError> {
    let req = parse_requirement_unchecked(text)?;
    req.validate()?;
    Ok(req)
}

/// Parses a requirement document without structural validation.
pub fn parse_requirement_unchecked(text: &str) -> Result<Requirement, RequirementError> {
    Parser::new(text)?.requirement()
}

/// Parses a single query such as `Pmax<0.95 [ F "goal" ]` or
/// `Pmin [ "a" U<=5 "b" ]`.
pub fn parse_query(text: &str) -> Result<Query, RequirementError> {
    Parser::new(text)?.query()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_not_and_or() {
        let r = parse_requirement(r#"objective q = Pmax [ F !"a" & "b" | "c" ]; initial q;"#).unwrap();
        let expected = StateFormula::or(
            StateFormula::and(StateFormula::negation(StateFormula::atom("a")), StateFormula::atom("b")),
            StateFormula::atom("c"),
        );
        assert_eq!(r.objectives[0].path, PathFormula::Eventually(expected));
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_requirement("objective q0 = Pmax [ F \"a\" ];\ninitial ;").unwrap_err();
        assert_eq!(err, syntax(2, 9, "expected identifier, found `;`"));
    }

    #[test]
    fn interval_forms() {
        let text = r#"objective a = Pmax [ F G "x" ]; objective b = Pmax [ F G "y" ];
            context w1 : a -> b when Pmax in (0.1, 0.2];
            context w2 : a -> b when Pmax <= 0.1;
            initial a;"#;
        let r = parse_requirement_unchecked(text).unwrap();
        assert_eq!(r.contexts[0].interval, Interval::new(0.1, true, 0.2, false));
        assert_eq!(r.contexts[1].interval, Interval::at_most(0.1));
    }

    #[test]
    fn queries() {
        let q = parse_query(r#"Pmax<0.95 [ F "goal" ]"#).unwrap();
        assert_eq!(q.bound, Some(Interval::below(0.95)));
        let q = parse_query(r#"Pmin [ "a" U<=5 "b" ]"#).unwrap();
        assert_eq!(q.path, PathFormula::BoundedUntil(StateFormula::atom("a"), StateFormula::atom("b"), 5));
        let q = parse_query(r#"Pmax>=0.5 [ F G true ]"#).unwrap();
        assert_eq!(q.bound, Some(Interval::at_least(0.5)));
        assert!(matches!(parse_query(r#"Pmax [ X "a" ]"#).unwrap().path, PathFormula::Next(_)));
        assert!(matches!(parse_query(r#"Pmax [ G "a" ]"#).unwrap().path, PathFormula::Always(_)));
        assert!(parse_query(r#"Pmax [ F "a" ] extra"#).is_err());
    }

    #[test]
    fn comments_and_scientific_numbers() {
        let text = "// header\nobjective q = Pmax [ F G \"a\" ]; // trailing\nobjective r = Pmax [ F G \"b\" ];\ncontext w : q -> r when Pmax < 5e-1;\ninitial q;";
        let r = parse_requirement(text).unwrap();
        assert_eq!(r.contexts[0].interval, Interval::below(0.5));
    }

    #[test]
    fn duplicate_initial() {
        assert!(parse_requirement("objective q = Pmax [ F \"a\" ]; initial q; initial q;").is_err());
    }
}
