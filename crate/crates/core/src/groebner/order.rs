use std::cmp::Ordering;

use crate::poly::Var;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    GrevLex,
    /// Grevlex on the first `k` variables, ties broken by grevlex on the rest.
    Block(usize),
}

/// A monomial order over an explicit variable sequence, most significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub vars: Vec<Var>,
}

impl MonomialOrder {
    pub fn lex(vars: Vec<Var>) -> Self {
        MonomialOrder { kind: OrderKind::Lex, vars }
    }

    pub fn grevlex(vars: Vec<Var>) -> Self {
        MonomialOrder { kind: OrderKind::GrevLex, vars }
    }

    /// Elimination order: `first` block outranks `rest`.
    pub fn block(first: Vec<Var>, rest: Vec<Var>) -> Self {
        let k = first.len();
        let mut vars = first;
        vars.extend(rest);
        MonomialOrder { kind: OrderKind::Block(k), vars }
    }

    pub(crate) fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        match self.kind {
            OrderKind::Lex => a.cmp(b),
            OrderKind::GrevLex => grevlex(a, b),
            OrderKind::Block(k) => grevlex(&a[..k], &b[..k]).then_with(|| grevlex(&a[k..], &b[k..])),
        }
    }
}

fn grevlex(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return b[i].cmp(&a[i]);
            }
        }
        Ordering::Equal
    })
}
