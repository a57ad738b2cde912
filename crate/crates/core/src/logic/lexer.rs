use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    And,
    Or,
    Not,
    Arrow,
    Iff,
    Dot,
    /// `>=^i_z` (strict = false) or `>^i_z` (strict = true); `player` is
    /// 1-based as written.
    Cmp {
        strict: bool,
        player: usize,
        z: String,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    /// 1-based character column.
    pub pos: usize,
}

pub(crate) fn err(pos: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position: pos,
        message: message.into(),
    }
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn lex(text: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let pos = k + 1;
        if c.is_whitespace() {
            k += 1;
            continue;
        }
        let rest: String = chars[k..chars.len().min(k + 3)].iter().collect();
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if c == '>' {
            let strict = !rest.starts_with(">=");
            let mut j = k + if strict { 1 } else { 2 };
            if chars.get(j) != Some(&'^') {
                return Err(err(j + 1, "expected `^<player>_<var>` after comparison"));
            }
            j += 1;
            let start = j;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let player: usize = chars[start..j]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| err(start + 1, "expected a player number"))?;
            if chars.get(j) != Some(&'_') {
                return Err(err(j + 1, "expected `_<var>` after the player number"));
            }
            j += 1;
            let start = j;
            while j < chars.len() && is_ident(chars[j]) {
                j += 1;
            }
            if start == j {
                return Err(err(start + 1, "expected a variable after `_`"));
            }
            let z: String = chars[start..j].iter().collect();
            (Tok::Cmp { strict, player, z }, j - k)
        } else if is_ident(c) {
            let mut j = k;
            while j < chars.len() && is_ident(chars[j]) {
                j += 1;
            }
            (Tok::Ident(chars[k..j].iter().collect()), j - k)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '&' => Tok::And,
                '|' => Tok::Or,
                '!' => Tok::Not,
                '.' => Tok::Dot,
                other => return Err(err(pos, format!("unexpected character `{other}`"))),
            };
            (t, 1)
        };
        out.push(Spanned { tok, pos });
        k += len;
    }
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    at: usize,
    end: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self> {
        let toks = lex(text)?;
        Ok(Cursor {
            toks,
            at: 0,
            end: text.chars().count() + 1,
        })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|s| &s.tok)
    }

    pub fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |s| s.pos)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|s| s.tok.clone());
        self.at += 1;
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok, what: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(err(self.pos(), format!("expected {what}")))
        }
    }

    pub fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(err(self.pos(), "unexpected trailing input"))
        }
    }
}

/// Splits `rat_2` into `("rat", Some(2))` and `rat` into `("rat", None)`.
pub(crate) fn split_indexed<'a>(ident: &'a str, base: &str) -> Option<Option<&'a str>> {
    let rest = ident.strip_prefix(base)?;
    if rest.is_empty() {
        Some(None)
    } else {
        rest.strip_prefix('_').map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_comparisons_and_arrows() {
        let toks: Vec<Tok> = lex("x >=^1_z y -> !(a <-> b)")
            .unwrap()
            .into_iter()
            .map(|s| s.tok)
            .collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("x".into()),
                Tok::Cmp {
                    strict: false,
                    player: 1,
                    z: "z".into()
                },
                Tok::Ident("y".into()),
                Tok::Arrow,
                Tok::Not,
                Tok::LParen,
                Tok::Ident("a".into()),
                Tok::Iff,
                Tok::Ident("b".into()),
                Tok::RParen,
            ]
        );
        assert!(matches!(lex("x >= y"), Err(Error::Parse { position: 5, .. })));
        assert!(matches!(lex("a $ b"), Err(Error::Parse { position: 3, .. })));
    }
}
