//! Word syntax shared by group files, presentations and the CLI.
//!
//! A word is a juxtaposition of factors. A factor is a symbol, a bracketed
//! commutator `[u,v]` or a parenthesised group `{u}`, optionally followed by
//! `^n`/`^-n` (or `⁻¹`). Symbols are one ASCII letter followed by digits or
//! underscores (`a`, `x1`), or a parenthesised name such as `(12)`. The
//! single character `1` denotes the empty word.

use crate::error::{Error, Result};

/// One syllable `symbol^exp`, the symbol still unresolved.
pub type Syllable = (String, i64);

pub fn parse_word(text: &str) -> Result<Vec<Syllable>> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = Parser { chars, pos: 0 };
    let w = p.word(&[])?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(Error::parse(p.pos, format!("unexpected {:?}", p.chars[p.pos])));
    }
    Ok(w)
}

pub fn invert(word: &[Syllable]) -> Vec<Syllable> {
    word.iter().rev().map(|(s, e)| (s.clone(), -e)).collect()
}

/// Parse with an offset added to reported error positions.
pub(crate) fn parse_word_at(text: &str, base: usize) -> Result<Vec<Syllable>> {
    parse_word(text).map_err(|e| match e {
        Error::Parse { offset, message } => Error::Parse {
            offset: offset + base,
            message,
        },
        other => other,
    })
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn word(&mut self, stops: &[char]) -> Result<Vec<Syllable>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(c) if stops.contains(&c) => break,
                Some('1') => {
                    self.pos += 1;
                    let e = self.exponent()?;
                    let _ = e;
                }
                Some(_) => {
                    let f = self.factor()?;
                    let e = self.exponent()?;
                    push_power(&mut out, &f, e);
                }
            }
        }
        Ok(out)
    }

    fn factor(&mut self) -> Result<Vec<Syllable>> {
        let start = self.pos;
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let u = self.word(&[','])?;
                self.expect(',')?;
                let v = self.word(&[']'])?;
                self.expect(']')?;
                let mut w = u.clone();
                w.extend(v.iter().cloned());
                w.extend(invert(&u));
                w.extend(invert(&v));
                Ok(w)
            }
            Some('{') => {
                self.pos += 1;
                let u = self.word(&['}'])?;
                self.expect('}')?;
                Ok(u)
            }
            Some('(') => {
                let mut name = String::from("(");
                self.pos += 1;
                loop {
                    match self.peek() {
                        Some(')') => {
                            name.push(')');
                            self.pos += 1;
                            break;
                        }
                        Some(c) if !c.is_whitespace() && c != '(' => {
                            name.push(c);
                            self.pos += 1;
                        }
                        _ => return Err(Error::parse(start, "unterminated parenthesised symbol")),
                    }
                }
                Ok(vec![(name, 1)])
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                name.push(c);
                self.pos += 1;
                while let Some(d) = self.peek() {
                    if d.is_ascii_digit() || d == '_' {
                        name.push(d);
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Ok(vec![(name, 1)])
            }
            Some(c) => Err(Error::parse(start, format!("unexpected {c:?}"))),
            None => Err(Error::parse(start, "unexpected end of word")),
        }
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.chars[self.pos..].starts_with(&['⁻', '¹']) {
            self.pos += 2;
            return Ok(-1);
        }
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.pos;
        let mut s = String::new();
        if matches!(self.peek(), Some('-') | Some('+')) {
            s.push(self.peek().unwrap());
            self.pos += 1;
        }
        while let Some(d) = self.peek() {
            if d.is_ascii_digit() {
                s.push(d);
                self.pos += 1;
            } else {
                break;
            }
        }
        s.parse()
            .map_err(|_| Error::parse(start, "expected integer exponent"))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected {c:?}")))
        }
    }
}

fn push_power(out: &mut Vec<Syllable>, factor: &[Syllable], exp: i64) {
    if exp >= 0 {
        for _ in 0..exp {
            out.extend(factor.iter().cloned());
        }
    } else {
        let inv = invert(factor);
        for _ in 0..(-exp) {
            out.extend(inv.iter().cloned());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(w: &[Syllable]) -> String {
        w.iter()
            .map(|(s, e)| format!("{s}{e}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[test]
    fn juxtaposition_and_powers() {
        assert_eq!(flat(&parse_word("bab^-1").unwrap()), "b1 a1 b-1");
        assert_eq!(flat(&parse_word("x1^2 x2").unwrap()), "x11 x11 x21");
        assert_eq!(flat(&parse_word("a b b⁻¹").unwrap()), "a1 b1 b-1");
        assert!(parse_word("1").unwrap().is_empty());
    }

    #[test]
    fn commutator_and_cycles() {
        assert_eq!(flat(&parse_word("[x,y]").unwrap()), "x1 y1 x-1 y-1");
        assert_eq!(flat(&parse_word("(12)(123)").unwrap()), "(12)1 (123)1");
        assert_eq!(flat(&parse_word("{ab}^-1").unwrap()), "b-1 a-1");
    }

    #[test]
    fn error_offsets() {
        match parse_word("[x,y").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 4),
            e => panic!("{e}"),
        }
        assert!(parse_word("a^").is_err());
        assert!(parse_word("a$").is_err());
    }
}
