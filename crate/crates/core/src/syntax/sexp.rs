//! Minimal s-expression reader with source positions.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom { text: String, line: usize, col: usize },
    List { items: Vec<Sexp>, line: usize, col: usize },
}

impl Sexp {
    pub fn pos(&self) -> (usize, usize) {
        match self {
            Sexp::Atom { line, col, .. } | Sexp::List { line, col, .. } => (*line, *col),
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom { text, .. } => Some(text),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            _ => None,
        }
    }

    /// The head symbol and the remaining items of a list like `(head ...)`.
    pub fn head(&self) -> Option<(&str, &[Sexp])> {
        let items = self.as_list()?;
        let (first, rest) = items.split_first()?;
        Some((first.as_atom()?, rest))
    }

    pub fn error(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.pos();
        Error::Syntax { line, col, msg: msg.into() }
    }
}

/// Reads every top-level expression in `text`. `;` starts a line comment.
pub fn read_all(text: &str) -> Result<Vec<Sexp>> {
    let mut stack: Vec<(Vec<Sexp>, usize, usize)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                chars.next();
                stack.push((Vec::new(), line, col));
                col += 1;
            }
            ')' => {
                chars.next();
                let Some((items, l, c0)) = stack.pop() else {
                    return Err(Error::Syntax { line, col, msg: "unbalanced `)`".into() });
                };
                col += 1;
                let list = Sexp::List { items, line: l, col: c0 };
                match stack.last_mut() {
                    Some((parent, _, _)) => parent.push(list),
                    None => top.push(list),
                }
            }
            _ => {
                let (l, c0) = (line, col);
                let mut text = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    text.push(c);
                    chars.next();
                    col += 1;
                }
                let atom = Sexp::Atom { text, line: l, col: c0 };
                match stack.last_mut() {
                    Some((parent, _, _)) => parent.push(atom),
                    None => top.push(atom),
                }
            }
        }
    }
    if let Some((_, l, c)) = stack.pop() {
        return Err(Error::Syntax { line: l, col: c, msg: "unclosed `(`".into() });
    }
    Ok(top)
}

/// Reads exactly one expression.
pub fn read_one(text: &str) -> Result<Sexp> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(Error::Syntax { line: 1, col: 1, msg: "empty input".into() }),
        _ => Err(all[1].error("expected a single expression")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let s = read_one("(a (b c)\n  d)").unwrap();
        let items = s.as_list().unwrap();
        assert_eq!(items.len(), 3);
        assert_eq!(items[2].pos(), (2, 3));
        assert_eq!(items[1].head().unwrap().0, "b");
    }

    #[test]
    fn comments_are_skipped() {
        let all = read_all("; header\n(x) ; trailing\n(y)").unwrap();
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn unbalanced_input_reports_position() {
        match read_all("(a\n (b)") {
            Err(Error::Syntax { line: 1, col: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match read_all("(a))") {
            Err(Error::Syntax { line: 1, col: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
