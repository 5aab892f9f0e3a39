//! Model files:
//!
//! ```text
//! lambda 0.5
//! bias -0.25
//! 1.5<TAB>a(b,c)
//! -2<TAB>b(a)
//! ```
//!
//! The `bias` line is optional. Blank lines and `#` comments are ignored.

use super::SupportSet;
use crate::kernel::KernelParams;
use crate::tree::{parse_tree, Alphabet};
use crate::{Error, Result};

/// A parsed model file. Input trees to predict on must be parsed with
/// [`Model::alphabet`] so their labels agree with the support trees.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: KernelParams,
    pub support: SupportSet,
    pub alphabet: Alphabet,
}

fn keyed(line: &str, key: &str) -> Option<Result<f64>> {
    let rest = line.strip_prefix(key)?;
    if !rest.starts_with(char::is_whitespace) {
        return None;
    }
    Some(
        rest.trim()
            .parse::<f64>()
            .map_err(|e| Error::Model(format!("bad {key} value {:?}: {e}", rest.trim()))),
    )
}

impl Model {
    pub fn parse(text: &str) -> Result<Model> {
        let mut alphabet = Alphabet::new();
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .peekable();

        let (no, first) = lines.next().ok_or_else(|| Error::Model("empty model file".into()))?;
        let lambda = keyed(first.trim(), "lambda")
            .unwrap_or_else(|| Err(Error::Model("first line must be `lambda <real>`".into())))
            .map_err(|e| e.at_line(no))?;
        let params = KernelParams::new(lambda).map_err(|e| e.at_line(no))?;

        let mut bias = 0.0;
        if let Some(&(no, line)) = lines.peek() {
            if let Some(b) = keyed(line.trim(), "bias") {
                bias = b.map_err(|e| e.at_line(no))?;
                lines.next();
            }
        }

        let mut items = Vec::new();
        for (no, line) in lines {
            let (alpha, tree) = line
                .split_once('\t')
                .ok_or_else(|| Error::Model("expected `<alpha><TAB><tree>`".into()).at_line(no))?;
            let alpha: f64 = alpha
                .trim()
                .parse()
                .map_err(|e| Error::Model(format!("bad alpha {:?}: {e}", alpha.trim())).at_line(no))?;
            let tree = parse_tree(tree, &mut alphabet).map_err(|e| e.at_line(no))?;
            items.push((tree, alpha));
        }
        let support = SupportSet::new(items, bias)?;
        Ok(Model {
            params,
            support,
            alphabet,
        })
    }
}
