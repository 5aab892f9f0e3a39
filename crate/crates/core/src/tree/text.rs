//! Bracket text format: `tree := label [ '(' tree (',' tree)* ')' ]`.
//!
//! Labels are non-empty runs of characters other than `(`, `)`, `,` and
//! whitespace. Whitespace between tokens is ignored. Corpus files hold one
//! tree per line; blank lines and lines starting with `#` are skipped.

use super::{Alphabet, Label, Tree, NIL};
use crate::{Error, Result};

fn is_label_char(c: char) -> bool {
    !matches!(c, '(' | ')' | ',') && !c.is_whitespace()
}

fn parse_error(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: message.into(),
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn label(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest
            .char_indices()
            .find(|&(_, c)| !is_label_char(c))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(match self.peek() {
                Some(c) => parse_error(start, format!("expected a label, found {c:?}")),
                None => parse_error(start, "expected a label, found end of input"),
            });
        }
        self.pos += len;
        Ok(&self.text[start..start + len])
    }
}

/// Parses one tree, interning its labels into `alphabet`. Nodes are numbered
/// in preorder, children in text order.
pub fn parse_tree(text: &str, alphabet: &mut Alphabet) -> Result<Tree> {
    let mut cur = Cursor { text, pos: 0 };
    let mut labels: Vec<Label> = Vec::new();
    let mut parent: Vec<u32> = Vec::new();
    let mut open: Vec<u32> = Vec::new();
    let mut open_offsets: Vec<usize> = Vec::new();

    loop {
        let name = cur.label()?;
        parent.push(open.last().copied().unwrap_or(NIL));
        labels.push(alphabet.intern(name));
        let node = (labels.len() - 1) as u32;

        // After a label: '(' opens its children, otherwise close/continue.
        cur.skip_ws();
        if cur.peek() == Some('(') {
            open.push(node);
            open_offsets.push(cur.pos);
            cur.pos += 1;
            continue;
        }
        loop {
            cur.skip_ws();
            match cur.peek() {
                Some(',') if !open.is_empty() => {
                    cur.pos += 1;
                    break;
                }
                Some(')') if !open.is_empty() => {
                    cur.pos += 1;
                    open.pop();
                    open_offsets.pop();
                }
                None if open.is_empty() => return Ok(Tree::from_preorder(labels, parent)),
                None => {
                    return Err(parse_error(
                        *open_offsets.last().unwrap(),
                        "unbalanced '(' is never closed",
                    ))
                }
                Some(c) if open.is_empty() => {
                    return Err(parse_error(cur.pos, format!("trailing input after the tree: {c:?}")))
                }
                Some(c) => return Err(parse_error(cur.pos, format!("expected ',' or ')', found {c:?}"))),
            }
        }
    }
}

/// Parses a corpus: one tree per line, skipping blank and `#` lines. Errors
/// carry the 1-based line number.
pub fn parse_corpus(text: &str, alphabet: &mut Alphabet) -> Result<Vec<Tree>> {
    let mut trees = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        trees.push(parse_tree(trimmed, alphabet).map_err(|e| e.at_line(i + 1))?);
    }
    Ok(trees)
}

/// Canonical bracket text for `tree`, children in stored order.
pub fn serialize_tree(tree: &Tree, alphabet: &Alphabet) -> String {
    let mut out = String::new();
    // Preorder walk with explicit close markers so deep trees don't recurse.
    enum Step {
        Open(usize, bool),
        Close,
    }
    let mut stack = vec![Step::Open(tree.root(), true)];
    while let Some(step) = stack.pop() {
        match step {
            Step::Close => out.push(')'),
            Step::Open(v, first) => {
                if !first {
                    out.push(',');
                }
                out.push_str(&alphabet.name(tree.label(v)));
                if !tree.is_leaf(v) {
                    out.push('(');
                    stack.push(Step::Close);
                    let kids: Vec<usize> = tree.children(v).collect();
                    for (i, &c) in kids.iter().enumerate().rev() {
                        stack.push(Step::Open(c, i == 0));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::random_tree;

    fn parse(s: &str) -> Tree {
        parse_tree(s, &mut Alphabet::new()).unwrap()
    }

    #[test]
    fn single_node() {
        let t = parse("a");
        assert_eq!(t.len(), 1);
        assert_eq!(t.depth(0), 0);
        assert_eq!(t.parent(0), None);
    }

    #[test]
    fn two_children() {
        let t = parse("a(b,c)");
        assert_eq!(t.len(), 3);
        assert_eq!(
            (0..3).map(|v| t.parent(v)).collect::<Vec<_>>(),
            vec![None, Some(0), Some(0)]
        );
        assert_eq!((0..3).map(|v| t.depth(v)).collect::<Vec<_>>(), vec![0, 1, 1]);
    }

    #[test]
    fn repeated_labels_and_depths() {
        let mut alphabet = Alphabet::new();
        let t = parse_tree("a(b(c),b)", &mut alphabet).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!((0..4).map(|v| t.depth(v)).collect::<Vec<_>>(), vec![0, 1, 2, 1]);
        let kids: Vec<_> = t.children(0).collect();
        assert_eq!(kids, vec![1, 3]);
        assert_eq!(t.label(1), t.label(3));
        assert_eq!(alphabet.name(t.label(3)), "b");
        assert_eq!(serialize_tree(&t, &alphabet), "a(b(c),b)");
    }

    #[test]
    fn whitespace_and_utf8_labels() {
        let mut alphabet = Alphabet::new();
        let t = parse_tree("  root ( αβ , x-1 ( y ) ) ", &mut alphabet).unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(serialize_tree(&t, &alphabet), "root(αβ,x-1(y))");
    }

    #[test]
    fn errors_carry_offsets() {
        let mut a = Alphabet::new();
        let cases = [
            ("", 0),
            ("a(", 2),
            ("a(b", 1),
            ("a()", 2),
            ("a(b,)", 4),
            ("a)b", 1),
            ("a b", 2),
            ("a(b))", 4),
            ("a,b", 1),
        ];
        for (text, offset) in cases {
            match parse_tree(text, &mut a) {
                Err(Error::Parse { offset: got, .. }) => assert_eq!(got, offset, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn corpus_skips_comments_and_reports_lines() {
        let mut a = Alphabet::new();
        let trees = parse_corpus("# header\na(b)\n\n  c\n", &mut a).unwrap();
        assert_eq!(trees.len(), 2);
        match parse_corpus("a\nb(\n", &mut a) {
            Err(Error::Line { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn deep_path_does_not_overflow() {
        let depth = 100_000;
        let mut text = String::new();
        for _ in 0..depth {
            text.push_str("a(");
        }
        text.push('a');
        text.push_str(&")".repeat(depth));
        let mut a = Alphabet::new();
        let t = parse_tree(&text, &mut a).unwrap();
        assert_eq!(t.height(), depth + 1);
        assert_eq!(serialize_tree(&t, &a), text);
    }

    #[test]
    fn random_round_trip() {
        let alphabet = Alphabet::synthetic(5);
        for seed in 0..20 {
            let t = random_tree(50, 5, seed).unwrap();
            let text = serialize_tree(&t, &alphabet);
            let mut again = alphabet.clone();
            let back = parse_tree(&text, &mut again).unwrap();
            assert_eq!(back, t);
            assert_eq!(again.len(), alphabet.len());
        }
    }
}
