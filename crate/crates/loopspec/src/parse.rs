//! Text syntax for lasso words.
//!
//! ```text
//! words  := loop ('|' loop)*
//! loop   := term+
//! term   := group | symbol
//! group  := '(' symbol+ ')' inv?
//! symbol := ident inv?
//! inv    := "'" | "^-1"
//! ident  := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! Parentheses only group: `(t)(t s)` is the three-letter word `t t s`. An
//! inverted group is reversed with every sign flipped.

use std::collections::BTreeMap;

use crate::word::{LassoWord, Letter};
use crate::LoopspecError;

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

type Symbol = (String, i8, usize);

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LoopspecError> {
        Err(LoopspecError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn inv(&mut self) -> Result<bool, LoopspecError> {
        match self.peek() {
            Some(b'\'') => {
                self.pos += 1;
                Ok(true)
            }
            Some(b'^') => {
                if self.src[self.pos..].starts_with("^-1") {
                    self.pos += 3;
                    Ok(true)
                } else {
                    self.err("expected `^-1`")
                }
            }
            _ => Ok(false),
        }
    }

    fn ident(&mut self) -> Result<(String, usize), LoopspecError> {
        self.skip_ws();
        let start = self.pos;
        match self.bytes.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() => self.pos += 1,
            Some(_) => return self.err("expected an identifier"),
            None => return self.err("unexpected end of input, expected an identifier"),
        }
        while let Some(c) = self.bytes.get(self.pos) {
            if c.is_ascii_alphanumeric() || *c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((self.src[start..self.pos].to_string(), start))
    }

    fn symbol(&mut self) -> Result<Symbol, LoopspecError> {
        let (name, at) = self.ident()?;
        let sign = if self.inv()? { -1 } else { 1 };
        Ok((name, sign, at))
    }

    fn term(&mut self, out: &mut Vec<Symbol>) -> Result<(), LoopspecError> {
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut inner = Vec::new();
            loop {
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    None => return self.err("unclosed `(`"),
                    _ => inner.push(self.symbol()?),
                }
            }
            if inner.is_empty() {
                return self.err("empty group `()`");
            }
            if self.inv()? {
                inner.reverse();
                for s in &mut inner {
                    s.1 = -s.1;
                }
            }
            out.extend(inner);
        } else {
            out.push(self.symbol()?);
        }
        Ok(())
    }

    fn words(&mut self) -> Result<Vec<Vec<Symbol>>, LoopspecError> {
        let mut loops = Vec::new();
        let mut current = Vec::new();
        loop {
            match self.peek() {
                None => break,
                Some(b'|') => {
                    if current.is_empty() {
                        return self.err("empty loop before `|`");
                    }
                    self.pos += 1;
                    loops.push(std::mem::take(&mut current));
                }
                Some(b')') => return self.err("unmatched `)`"),
                Some(b'\'') | Some(b'^') => return self.err("inverse marker without a symbol"),
                _ => self.term(&mut current)?,
            }
        }
        if current.is_empty() {
            return if loops.is_empty() {
                self.err("empty word")
            } else {
                self.err("empty loop after `|`")
            };
        }
        loops.push(current);
        Ok(loops)
    }
}

/// Parses a word and attaches areas from `areas`.
///
/// Every identifier in the text must have a positive area. Unused entries
/// of `areas` are ignored.
pub fn parse_word(text: &str, areas: &BTreeMap<String, f64>) -> Result<LassoWord, LoopspecError> {
    let loops = Parser::new(text).words()?;
    let mut names: Vec<String> = Vec::new();
    let mut area_list = Vec::new();
    let mut letters = Vec::new();
    let mut lengths = Vec::new();
    for lp in loops {
        lengths.push(lp.len());
        for (name, sign, at) in lp {
            let id = match names.iter().position(|n| *n == name) {
                Some(id) => id,
                None => {
                    let a = *areas
                        .get(&name)
                        .ok_or_else(|| LoopspecError::UnknownIdentifier {
                            name: name.clone(),
                            pos: at,
                        })?;
                    names.push(name);
                    area_list.push(a);
                    names.len() - 1
                }
            };
            letters.push(Letter { id, sign });
        }
    }
    LassoWord::new(names, area_list, letters, &lengths)
}

/// Parses `name=value` entries separated by commas, e.g. `t=0.4,s=0.3`.
pub fn parse_area_list(text: &str) -> Result<BTreeMap<String, f64>, LoopspecError> {
    let mut out = BTreeMap::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| LoopspecError::AreaList(format!("`{item}` is not name=value")))?;
        let name = name.trim();
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| LoopspecError::AreaList(format!("`{value}` is not a number")))?;
        if out.insert(name.to_string(), value).is_some() {
            return Err(LoopspecError::AreaList(format!("`{name}` given twice")));
        }
    }
    Ok(out)
}
