//! Recovery sets and erasure repair by interpolation in one coordinate.

use std::collections::HashMap;

use serde::Serialize;

use crate::code_builder::LrcCode;
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement};

/// For every direction `j` (1-based), positions grouped by all coordinates
/// except `y_j`. `A_{i,j}` is the group of `i` with `i` removed.
#[derive(Clone, Debug)]
pub struct RecoveryIndex {
    t: usize,
    /// `groups[j-1][g]`, sorted positions
    groups: Vec<Vec<Vec<usize>>>,
    /// `group_of[j-1][i]`
    group_of: Vec<Vec<usize>>,
    /// `abscissa[j-1][i] = y_j(P_i)`
    abscissa: Vec<Vec<FieldElement>>,
}

pub fn build_recovery_index(code: &LrcCode) -> Result<RecoveryIndex> {
    let eval = code.evaluation_set();
    let n = eval.len();
    let t = code.t();
    let mut groups = Vec::with_capacity(t);
    let mut group_of = Vec::with_capacity(t);
    let mut abscissa = Vec::with_capacity(t);
    for j in 1..=t {
        let expected = code.d_h()[j - 1] as usize;
        let mut by_key: HashMap<Vec<FieldElement>, usize> = HashMap::new();
        let mut gs: Vec<Vec<usize>> = Vec::new();
        let mut of = vec![0usize; n];
        for (i, slot) in of.iter_mut().enumerate() {
            let mut key = eval.point(i).to_vec();
            key.remove(j);
            let g = *by_key.entry(key).or_insert_with(|| {
                gs.push(Vec::new());
                gs.len() - 1
            });
            gs[g].push(i);
            *slot = g;
        }
        for g in &gs {
            if g.len() != expected {
                return Err(Error::MalformedFiber { position: g[0], direction: j, size: g.len(), expected });
            }
        }
        groups.push(gs);
        group_of.push(of);
        abscissa.push((0..n).map(|i| eval.coordinate(i, j)).collect());
    }
    Ok(RecoveryIndex { t, groups, group_of, abscissa })
}

impl RecoveryIndex {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.group_of.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `A_{i,j}`: the other positions of `i`'s group in direction `j`.
    pub fn set(&self, i: usize, j: usize) -> Vec<usize> {
        self.groups[j - 1][self.group_of[j - 1][i]].iter().copied().filter(|&a| a != i).collect()
    }

    pub fn abscissa(&self, i: usize, j: usize) -> FieldElement {
        self.abscissa[j - 1][i]
    }
}

/// A received word: symbols plus an explicit presence mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub symbols: Vec<FieldElement>,
    pub present: Vec<bool>,
}

impl Word {
    pub fn complete(symbols: Vec<FieldElement>) -> Word {
        let present = vec![true; symbols.len()];
        Word { symbols, present }
    }

    pub fn erase(&mut self, i: usize) {
        self.present[i] = false;
        self.symbols[i] = FieldElement::ZERO;
    }

    pub fn from_options(values: &[Option<FieldElement>]) -> Word {
        Word {
            symbols: values.iter().map(|v| v.unwrap_or(FieldElement::ZERO)).collect(),
            present: values.iter().map(Option::is_some).collect(),
        }
    }

    pub fn erasures(&self) -> Vec<usize> {
        (0..self.present.len()).filter(|&i| !self.present[i]).collect()
    }
}

/// Value at `x` of the polynomial of least degree through `nodes`.
pub fn lagrange_at(field: &Field, nodes: &[(FieldElement, FieldElement)], x: FieldElement) -> Result<FieldElement> {
    for (a, &(xa, _)) in nodes.iter().enumerate() {
        if xa == x || nodes[..a].iter().any(|&(xb, _)| xb == xa) {
            return Err(Error::RepeatedAbscissa(xa.enc()));
        }
    }
    let mut acc = FieldElement::ZERO;
    for (a, &(xa, ya)) in nodes.iter().enumerate() {
        let mut num = FieldElement::ONE;
        let mut den = FieldElement::ONE;
        for (b, &(xb, _)) in nodes.iter().enumerate() {
            if a != b {
                num = field.mul(num, field.sub(x, xb));
                den = field.mul(den, field.sub(xa, xb));
            }
        }
        acc = field.add(acc, field.mul(ya, field.div(num, den)));
    }
    Ok(acc)
}

/// Repairs position `i` from recovery set `j` (1-based).
pub fn recover(code: &LrcCode, index: &RecoveryIndex, word: &Word, i: usize, j: usize) -> Result<FieldElement> {
    if word.symbols.len() != code.n() || word.present.len() != code.n() {
        return Err(Error::LengthMismatch { expected: code.n(), got: word.symbols.len() });
    }
    if j == 0 || j > index.t() {
        return Err(Error::BadParams(format!("recovery set {j} outside 1..={}", index.t())));
    }
    let set = index.set(i, j);
    let need = set.len();
    let nodes: Vec<(FieldElement, FieldElement)> =
        set.iter().filter(|&&a| word.present[a]).map(|&a| (index.abscissa(a, j), word.symbols[a])).collect();
    if nodes.len() < need {
        return Err(Error::NotEnoughSurvivors { have: nodes.len(), need });
    }
    lagrange_at(code.field(), &nodes, index.abscissa(i, j))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetUse {
    pub position: usize,
    pub set: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    #[serde(skip)]
    pub word: Word,
    pub repaired: Vec<usize>,
    pub failed: Vec<usize>,
    pub sets_used: Vec<SetUse>,
}

/// Greedy repair: any erased position with an intact recovery set is fixed,
/// until nothing changes.
pub fn recover_multi(code: &LrcCode, index: &RecoveryIndex, word: &Word) -> Result<RecoveryReport> {
    let mut w = word.clone();
    let mut repaired = Vec::new();
    let mut sets_used = Vec::new();
    loop {
        let mut progress = false;
        for i in w.erasures() {
            for j in 1..=index.t() {
                if index.set(i, j).iter().all(|&a| w.present[a]) {
                    let v = recover(code, index, &w, i, j)?;
                    w.symbols[i] = v;
                    w.present[i] = true;
                    repaired.push(i);
                    sets_used.push(SetUse { position: i, set: j });
                    progress = true;
                    break;
                }
            }
        }
        if !progress {
            break;
        }
    }
    let failed = w.erasures();
    Ok(RecoveryReport { word: w, repaired, failed, sets_used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_builder::build_family_code;
    use crate::family::{Family, FamilyOptions};
    use crate::gf::make_field;

    #[test]
    fn lagrange_basics() {
        let f = make_field(7, 1, None).unwrap();
        let e = FieldElement::from_enc;
        // y = 2x + 1
        let nodes = [(e(1), e(3)), (e(2), e(5))];
        assert_eq!(lagrange_at(&f, &nodes, e(4)).unwrap(), e(2));
        assert_eq!(lagrange_at(&f, &nodes, e(1)).unwrap_err(), Error::RepeatedAbscissa(1));
    }

    #[test]
    fn ones_and_failure_on_t1() {
        let inst = Family::HermitianRational { p: 3, h: 1 }.instance(&FamilyOptions::default()).unwrap();
        let code = build_family_code(&inst, 0).unwrap();
        let idx = build_recovery_index(&code).unwrap();
        let mut msg = vec![FieldElement::ZERO; code.k()];
        msg[0] = FieldElement::ONE;
        let cw = code.encode(&msg).unwrap();
        let mut w = Word::complete(cw.clone());
        w.erase(5);
        assert_eq!(recover(&code, &idx, &w, 5, 1).unwrap(), FieldElement::ONE);
        // erase the target and its whole set
        for a in idx.set(5, 1) {
            w.erase(a);
        }
        let rep = recover_multi(&code, &idx, &w).unwrap();
        assert!(rep.repaired.is_empty());
        assert_eq!(rep.failed.len(), 3);
        assert!(matches!(recover(&code, &idx, &w, 5, 1), Err(Error::NotEnoughSurvivors { have: 0, need: 2 })));
    }
}
