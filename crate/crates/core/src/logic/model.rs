use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::syntax::Vocabulary;
use super::LogicError;

pub type Element = usize;

/// Row-major index of an argument tuple over a domain of `size` elements.
pub fn tuple_index(size: usize, args: &[Element]) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(size: usize, arity: usize, mut index: usize) -> Vec<Element> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

/// A total function table over the domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTable {
    pub arity: usize,
    /// Values indexed by [`tuple_index`] of the argument tuple.
    pub values: Vec<Element>,
}

impl FunctionTable {
    pub fn get(&self, size: usize, args: &[Element]) -> Element {
        self.values[tuple_index(size, args)]
    }
}

/// A relation over the domain stored as a dense bit table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RelationRepr", try_from = "RelationRepr")]
pub struct RelationTable {
    pub arity: usize,
    size: usize,
    bits: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct RelationRepr {
    arity: usize,
    domain: usize,
    tuples: Vec<Vec<Element>>,
}

impl From<RelationTable> for RelationRepr {
    fn from(r: RelationTable) -> Self {
        RelationRepr { arity: r.arity, domain: r.size, tuples: r.tuples().collect() }
    }
}

impl TryFrom<RelationRepr> for RelationTable {
    type Error = String;

    fn try_from(repr: RelationRepr) -> Result<Self, String> {
        let mut rel = RelationTable::empty(repr.arity, repr.domain);
        for t in repr.tuples {
            if t.len() != repr.arity || t.iter().any(|&e| e >= repr.domain) {
                return Err(format!("tuple {t:?} out of range"));
            }
            rel.insert(&t);
        }
        Ok(rel)
    }
}

impl RelationTable {
    pub fn empty(arity: usize, size: usize) -> Self {
        RelationTable { arity, size, bits: vec![false; size.pow(arity as u32)] }
    }

    pub fn full(arity: usize, size: usize) -> Self {
        RelationTable { arity, size, bits: vec![true; size.pow(arity as u32)] }
    }

    pub fn from_fn(arity: usize, size: usize, f: impl Fn(&[Element]) -> bool) -> Self {
        let bits = (0..size.pow(arity as u32)).map(|i| f(&index_tuple(size, arity, i))).collect();
        RelationTable { arity, size, bits }
    }

    pub fn contains(&self, args: &[Element]) -> bool {
        self.bits[tuple_index(self.size, args)]
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.bits[index]
    }

    /// Returns true when the tuple was not present before.
    pub fn insert(&mut self, args: &[Element]) -> bool {
        let i = tuple_index(self.size, args);
        !std::mem::replace(&mut self.bits[i], true)
    }

    pub fn set_index(&mut self, index: usize, value: bool) {
        self.bits[index] = value;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<Element>> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| index_tuple(self.size, self.arity, i))
    }

    pub fn is_subset(&self, other: &RelationTable) -> bool {
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }
}

/// An interpretation over the domain `{0, .., size - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteModel {
    pub size: usize,
    pub constants: BTreeMap<String, Element>,
    pub functions: BTreeMap<String, FunctionTable>,
    pub relations: BTreeMap<String, RelationTable>,
}

impl FiniteModel {
    pub fn new(size: usize) -> Self {
        FiniteModel {
            size,
            constants: BTreeMap::new(),
            functions: BTreeMap::new(),
            relations: BTreeMap::new(),
        }
    }

    pub fn set_constant(&mut self, name: impl Into<String>, value: Element) {
        self.constants.insert(name.into(), value);
    }

    pub fn set_function(&mut self, name: impl Into<String>, arity: usize, f: impl Fn(&[Element]) -> Element) {
        let values = (0..self.size.pow(arity as u32))
            .map(|i| f(&index_tuple(self.size, arity, i)))
            .collect();
        self.functions.insert(name.into(), FunctionTable { arity, values });
    }

    pub fn set_relation(&mut self, name: impl Into<String>, table: RelationTable) {
        self.relations.insert(name.into(), table);
    }

    pub fn relation(&self, name: &str) -> Option<&RelationTable> {
        self.relations.get(name)
    }

    pub fn holds_atom(&self, relation: &str, args: &[Element]) -> bool {
        self.relations.get(relation).is_some_and(|r| r.contains(args))
    }

    pub fn apply(&self, function: &str, args: &[Element]) -> Option<Element> {
        self.functions.get(function).map(|t| t.get(self.size, args))
    }

    /// Every vocabulary symbol interpreted with the right arity and all tables total.
    pub fn validate(&self, vocab: &Vocabulary) -> Result<(), LogicError> {
        if self.size == 0 {
            return Err(LogicError::EmptyDomain);
        }
        for c in &vocab.constants {
            match self.constants.get(c) {
                Some(&v) if v < self.size => {}
                Some(_) => return Err(LogicError::MalformedModel(format!("constant {c} out of range"))),
                None => return Err(LogicError::Uninterpreted(c.clone())),
            }
        }
        for f in &vocab.functions {
            let table = self.functions.get(&f.name).ok_or_else(|| LogicError::Uninterpreted(f.name.clone()))?;
            if table.arity != f.arity || table.values.len() != self.size.pow(f.arity as u32) {
                return Err(LogicError::MalformedModel(format!("table of {} has wrong shape", f.name)));
            }
            if table.values.iter().any(|&v| v >= self.size) {
                return Err(LogicError::MalformedModel(format!("table of {} leaves the domain", f.name)));
            }
        }
        for r in &vocab.relations {
            let table = self.relations.get(&r.name).ok_or_else(|| LogicError::Uninterpreted(r.name.clone()))?;
            if table.arity != r.arity || table.size != self.size {
                return Err(LogicError::MalformedModel(format!("relation {} has wrong shape", r.name)));
            }
        }
        Ok(())
    }

    /// Keeps only the symbols of `vocab`.
    pub fn restrict_to(&self, vocab: &Vocabulary) -> FiniteModel {
        FiniteModel {
            size: self.size,
            constants: self
                .constants
                .iter()
                .filter(|(k, _)| vocab.is_constant(k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            functions: self
                .functions
                .iter()
                .filter(|(k, _)| vocab.function_arity(k).is_some())
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            relations: self
                .relations
                .iter()
                .filter(|(k, _)| vocab.relation_arity(k).is_some())
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for FiniteModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain size {}", self.size)?;
        for (c, v) in &self.constants {
            writeln!(f, "  {c} = {v}")?;
        }
        for (name, table) in &self.functions {
            if table.arity == 2 {
                writeln!(f, "  {name}:")?;
                write!(f, "    {:>3} |", name)?;
                for j in 0..self.size {
                    write!(f, " {j:>2}")?;
                }
                writeln!(f)?;
                writeln!(f, "    ----+{}", "---".repeat(self.size))?;
                for i in 0..self.size {
                    write!(f, "    {i:>3} |")?;
                    for j in 0..self.size {
                        write!(f, " {:>2}", table.get(self.size, &[i, j]))?;
                    }
                    writeln!(f)?;
                }
            } else {
                writeln!(f, "  {name}/{}: {:?}", table.arity, table.values)?;
            }
        }
        for (name, rel) in &self.relations {
            let tuples: Vec<String> = rel
                .tuples()
                .map(|t| {
                    if t.len() == 1 {
                        t[0].to_string()
                    } else {
                        format!("({})", t.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","))
                    }
                })
                .collect();
            writeln!(f, "  {name} = {{{}}}", tuples.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_index_round_trips() {
        for i in 0..125 {
            assert_eq!(tuple_index(5, &index_tuple(5, 3, i)), i);
        }
    }

    #[test]
    fn relation_json_uses_tuple_lists() {
        let mut r = RelationTable::empty(2, 3);
        r.insert(&[1, 2]);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"arity":2,"domain":3,"tuples":[[1,2]]}"#);
        let back: RelationTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
