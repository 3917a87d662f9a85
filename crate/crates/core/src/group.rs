//! Finite groups given by multiplication tables.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport, Violation};

/// A finite group on the element ids `0..order`, with `mul[a * order + b] = ab`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    labels: Vec<String>,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
}

/// JSON form: `{"elements": [...], "table": [[...], ...]}` where `table[i][j]`
/// is the label of `elements[i] * elements[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

impl FiniteGroup {
    /// Build from a full multiplication table, checking the group axioms exhaustively.
    pub fn from_table(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Structural("group has no elements".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::Structural("group table is not square".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::Structural("group table refers to unknown element".into()));
        }
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        let mut violations = Vec::new();
        let identity = (0..n).find(|&e| (0..n).all(|a| mul[e * n + a] == a && mul[a * n + e] == a));
        let Some(identity) = identity else {
            violations.push(Violation::new("identity", vec![]));
            return Err(Error::Validation(ValidationReport::from_violations(violations)));
        };
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a * n + b] == identity && mul[b * n + a] == identity) {
                Some(b) => inv[a] = b,
                None => violations.push(Violation::new("inverse", vec![labels[a].clone()])),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a * n + b];
                for c in 0..n {
                    if mul[ab * n + c] != mul[a * n + mul[b * n + c]] {
                        violations.push(Violation::new(
                            "associativity",
                            vec![labels[a].clone(), labels[b].clone(), labels[c].clone()],
                        ));
                    }
                }
            }
        }
        if !violations.is_empty() {
            return Err(Error::Validation(ValidationReport::from_violations(violations)));
        }
        Ok(FiniteGroup { labels, mul, inv, identity })
    }

    pub fn from_descriptor(desc: &GroupDescriptor) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, l) in desc.elements.iter().enumerate() {
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::Structural(format!("duplicate group element {l}")));
            }
        }
        let table = desc
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|l| {
                        index
                            .get(l.as_str())
                            .copied()
                            .ok_or_else(|| Error::Structural(format!("unknown group element {l}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(desc.elements.clone(), table)
    }

    pub fn to_descriptor(&self) -> GroupDescriptor {
        let n = self.order();
        GroupDescriptor {
            elements: self.labels.clone(),
            table: (0..n)
                .map(|a| (0..n).map(|b| self.labels[self.mul(a, b)].clone()).collect())
                .collect(),
        }
    }

    /// Build from a closed, composition-compatible set of elements of some ambient
    /// structure; `op(i, j)` returns the index in `0..labels.len()` of the product.
    pub fn from_closed_op(labels: Vec<String>, op: impl Fn(usize, usize) -> Option<usize>) -> Result<Self> {
        let n = labels.len();
        let mut table = vec![vec![0; n]; n];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                *slot = op(a, b).ok_or_else(|| {
                    Error::Consistency(format!("subset not closed: {} * {}", labels[a], labels[b]))
                })?;
            }
        }
        Self::from_table(labels, table)
    }

    pub fn trivial() -> Self {
        FiniteGroup { labels: vec!["e".into()], mul: vec![0], inv: vec![0], identity: 0 }
    }

    /// Z/n with elements `0..n` labelled by their residue.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let labels = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(labels, table).expect("cyclic group")
    }

    /// The symmetric group on `{1..n}`, elements in lexicographic one-line order,
    /// product `(st)(i) = s(t(i))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index: HashMap<Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(""))
            .collect();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index[&t.iter().map(|&i| s[i]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        Self::from_table(labels, table).expect("symmetric group")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let labels = (0..na * nb)
            .map(|i| format!("({},{})", a.labels[i / nb], b.labels[i % nb]))
            .collect();
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        Self::from_table(labels, table).expect("direct product")
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul_table(&self) -> &[usize] {
        &self.mul
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `gens`, as a sorted element list.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([self.identity]);
        let mut frontier = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(g, x);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Every subgroup, as sorted element lists, ordered by size then elements.
    ///
    /// Built by joining cyclic subgroups until nothing new appears, so it is only
    /// meant for the small groups this crate works with.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let mut all: BTreeSet<Vec<usize>> = (0..self.order())
            .map(|g| self.generated_subgroup(&[g]))
            .collect();
        loop {
            let current: Vec<Vec<usize>> = all.iter().cloned().collect();
            let mut grew = false;
            for i in 0..current.len() {
                for j in i + 1..current.len() {
                    let mut gens = current[i].clone();
                    gens.extend(&current[j]);
                    if all.insert(self.generated_subgroup(&gens)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<Vec<usize>> = all.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// The subgroup on `elements` (which must be closed) as a group in its own right,
    /// with element `i` of the result corresponding to `elements[i]`.
    pub fn subgroup(&self, elements: &[usize]) -> Result<FiniteGroup> {
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let labels = elements.iter().map(|&e| self.labels[e].clone()).collect();
        FiniteGroup::from_closed_op(labels, |a, b| pos.get(&self.mul(elements[a], elements[b])).copied())
    }

    /// Check that `map` (indexed by elements of `self`) is an injective homomorphism into `target`.
    pub fn is_embedding_into(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        let n = self.order();
        if map.len() != n || map.iter().any(|&x| x >= target.order()) {
            return false;
        }
        let distinct: BTreeSet<_> = map.iter().collect();
        if distinct.len() != n {
            return false;
        }
        (0..n).all(|a| (0..n).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_basics() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.label(s3.identity()), "123");
        assert!(!s3.is_abelian());
        // 1 trivial, 3 of order 2, 1 of order 3, whole group
        let sizes: Vec<usize> = s3.subgroups().iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn klein_four_subgroups() {
        let c2 = FiniteGroup::cyclic(2);
        let v4 = FiniteGroup::direct_product(&c2, &c2);
        assert!(v4.is_abelian());
        assert_eq!(v4.subgroups().len(), 5);
    }

    #[test]
    fn bad_table_is_rejected() {
        let err = FiniteGroup::from_table(vec!["a".into(), "b".into()], vec![vec![0, 0], vec![0, 0]]);
        assert!(matches!(err, Err(Error::Validation(_))));
        let err = FiniteGroup::from_table(vec!["a".into()], vec![vec![3]]);
        assert!(matches!(err, Err(Error::Structural(_))));
    }

    #[test]
    fn descriptor_round_trip() {
        let g = FiniteGroup::cyclic(4);
        let back = FiniteGroup::from_descriptor(&g.to_descriptor()).unwrap();
        assert_eq!(g, back);
    }
}
