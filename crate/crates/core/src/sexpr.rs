//! Minimal s-expression reader shared by the expression and k-expression
//! file formats.

use crate::{Error, Result};

/// Nesting beyond this is rejected at parse time. Ample for realistic
/// inputs, and keeps the parser and the recursive consumers of parsed
/// trees within default thread stacks on adversarially deep input.
pub const MAX_DEPTH: usize = 1024;

/// A parsed s-expression: an atom or a parenthesized list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexpr {
    Atom { text: String, line: usize },
    List { items: Vec<Sexpr>, line: usize },
}

impl Sexpr {
    pub fn line(&self) -> usize {
        match self {
            Sexpr::Atom { line, .. } | Sexpr::List { line, .. } => *line,
        }
    }

    pub fn as_atom(&self) -> Result<&str> {
        match self {
            Sexpr::Atom { text, .. } => Ok(text),
            Sexpr::List { line, .. } => Err(Error::parse(*line, "expected an atom, found a list")),
        }
    }
}

#[derive(Debug, Clone)]
enum Token {
    Open(usize),
    Close(usize),
    Atom(String, usize),
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut line = 1;
    let mut atom = String::new();
    let mut atom_line = 1;
    let mut in_comment = false;

    let flush = |atom: &mut String, atom_line: usize, tokens: &mut Vec<Token>| {
        if !atom.is_empty() {
            tokens.push(Token::Atom(std::mem::take(atom), atom_line));
        }
    };

    for c in input.chars() {
        if c == '\n' {
            flush(&mut atom, atom_line, &mut tokens);
            line += 1;
            in_comment = false;
            continue;
        }
        if in_comment {
            continue;
        }
        match c {
            ';' | '#' => {
                flush(&mut atom, atom_line, &mut tokens);
                in_comment = true;
            }
            '(' => {
                flush(&mut atom, atom_line, &mut tokens);
                tokens.push(Token::Open(line));
            }
            ')' => {
                flush(&mut atom, atom_line, &mut tokens);
                tokens.push(Token::Close(line));
            }
            c if c.is_whitespace() => flush(&mut atom, atom_line, &mut tokens),
            c => {
                if atom.is_empty() {
                    atom_line = line;
                }
                atom.push(c);
            }
        }
    }
    flush(&mut atom, atom_line, &mut tokens);
    Ok(tokens)
}

fn parse_one(tokens: &[Token], pos: &mut usize, depth: usize) -> Result<Sexpr> {
    match tokens.get(*pos) {
        None => Err(Error::parse(0, "unexpected end of input")),
        Some(Token::Close(line)) => Err(Error::parse(*line, "unexpected ')'")),
        Some(Token::Atom(text, line)) => {
            *pos += 1;
            Ok(Sexpr::Atom {
                text: text.clone(),
                line: *line,
            })
        }
        Some(Token::Open(line)) => {
            let open_line = *line;
            if depth >= MAX_DEPTH {
                return Err(Error::parse(
                    open_line,
                    format!("expression nested deeper than {MAX_DEPTH}"),
                ));
            }
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(Error::parse(open_line, "unclosed '('")),
                    Some(Token::Close(_)) => {
                        *pos += 1;
                        return Ok(Sexpr::List {
                            items,
                            line: open_line,
                        });
                    }
                    Some(_) => items.push(parse_one(tokens, pos, depth + 1)?),
                }
            }
        }
    }
}

/// Parse exactly one s-expression; trailing content is an error.
pub fn parse(input: &str) -> Result<Sexpr> {
    let tokens = tokenize(input)?;
    let mut pos = 0;
    let expr = parse_one(&tokens, &mut pos, 0)?;
    if pos != tokens.len() {
        let line = match &tokens[pos] {
            Token::Open(l) | Token::Close(l) | Token::Atom(_, l) => *l,
        };
        return Err(Error::parse(line, "trailing content after expression"));
    }
    Ok(expr)
}
