//! Ground-atom databases in the line-oriented `.db` format.
//!
//! Each non-blank line holds one atom, `Pred(c1,c2,...)`. Lines whose first
//! non-space characters are `//` are comments. Predicates and constants are
//! case-sensitive.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, LabelId, LabeledHypergraph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub constants: Vec<String>,
}

impl GroundAtom {
    pub fn new<P, I, S>(predicate: P, constants: I) -> Result<Self>
    where
        P: Into<String>,
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atom = Self {
            predicate: predicate.into(),
            constants: constants.into_iter().map(Into::into).collect(),
        };
        atom.validate().map_err(|message| Error::Syntax { line: 0, message })?;
        Ok(atom)
    }

    pub fn arity(&self) -> usize {
        self.constants.len()
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !is_identifier(&self.predicate) {
            return Err(format!("invalid predicate name `{}`", self.predicate));
        }
        if self.constants.is_empty() {
            return Err(format!("predicate `{}` has no arguments", self.predicate));
        }
        if let Some(bad) = self.constants.iter().find(|c| !is_constant(c)) {
            return Err(format!("invalid constant `{bad}`"));
        }
        Ok(())
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.predicate, self.constants.join(","))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_constant(s: &str) -> bool {
    !s.is_empty()
        && s.trim() == s
        && !s.contains(|c: char| matches!(c, '(' | ')' | ',') || c.is_control())
}

/// A set of ground atoms with a fixed arity per predicate.
///
/// Atoms keep their first-insertion order; duplicates are dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationalDatabase {
    atoms: Vec<GroundAtom>,
    arities: BTreeMap<String, usize>,
    seen: HashSet<GroundAtom>,
}

impl RelationalDatabase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_atoms<I: IntoIterator<Item = GroundAtom>>(atoms: I) -> Result<Self> {
        let mut db = Self::new();
        for (i, atom) in atoms.into_iter().enumerate() {
            db.insert_at(atom, i + 1)?;
        }
        Ok(db)
    }

    /// Adds an atom. Returns `false` when an identical atom was already present.
    pub fn insert(&mut self, atom: GroundAtom) -> Result<bool> {
        let line = self.atoms.len() + 1;
        self.insert_at(atom, line)
    }

    fn insert_at(&mut self, atom: GroundAtom, line: usize) -> Result<bool> {
        atom.validate().map_err(|message| Error::Syntax { line, message })?;
        match self.arities.get(&atom.predicate) {
            Some(&expected) if expected != atom.arity() => {
                let found = atom.arity();
                return Err(Error::ArityMismatch {
                    predicate: atom.predicate,
                    line,
                    expected,
                    found,
                });
            }
            Some(_) => {}
            None => {
                self.arities.insert(atom.predicate.clone(), atom.arity());
            }
        }
        if !self.seen.insert(atom.clone()) {
            return Ok(false);
        }
        self.atoms.push(atom);
        Ok(true)
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn arities(&self) -> &BTreeMap<String, usize> {
        &self.arities
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Serializes one atom per line, sorted by predicate and then constants.
    pub fn to_db_string(&self) -> String {
        let mut sorted: Vec<&GroundAtom> = self.atoms.iter().collect();
        sorted.sort();
        let mut out = String::new();
        for atom in sorted {
            out.push_str(&atom.to_string());
            out.push('\n');
        }
        out
    }

    /// Same atom set, ignoring insertion order.
    pub fn same_atoms(&self, other: &Self) -> bool {
        self.seen == other.seen
    }
}

/// Parses `.db` text. Errors carry 1-based line numbers.
pub fn parse_database(text: &str) -> Result<RelationalDatabase> {
    let mut db = RelationalDatabase::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with("//") {
            continue;
        }
        let atom = parse_atom(line).map_err(|message| Error::Syntax {
            line: line_no,
            message,
        })?;
        db.insert_at(atom, line_no)?;
    }
    Ok(db)
}

fn parse_atom(line: &str) -> std::result::Result<GroundAtom, String> {
    let open = line
        .find('(')
        .ok_or_else(|| format!("expected `Pred(c1,...)`, found `{line}`"))?;
    if !line.ends_with(')') {
        return Err(format!("missing closing parenthesis in `{line}`"));
    }
    let predicate = line[..open].trim();
    let body = &line[open + 1..line.len() - 1];
    if body.contains(['(', ')']) {
        return Err(format!("nested parentheses in `{line}`"));
    }
    let constants: Vec<String> = body.split(',').map(|c| c.trim().to_owned()).collect();
    if constants.iter().any(String::is_empty) {
        return Err(format!("empty argument in `{line}`"));
    }
    let atom = GroundAtom {
        predicate: predicate.to_owned(),
        constants,
    };
    atom.validate()?;
    Ok(atom)
}

/// One node per distinct constant, one hyperedge per atom.
///
/// Node and label ids follow first appearance in the database.
pub fn build_hypergraph(db: &RelationalDatabase) -> LabeledHypergraph {
    let mut node_ids: BTreeMap<&str, NodeId> = BTreeMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut label_ids: BTreeMap<&str, LabelId> = BTreeMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::with_capacity(db.len());

    for atom in db.atoms() {
        let label = *label_ids.entry(&atom.predicate).or_insert_with(|| {
            labels.push(atom.predicate.clone());
            LabelId::new(labels.len() - 1)
        });
        let args: Vec<NodeId> = atom
            .constants
            .iter()
            .map(|c| {
                *node_ids.entry(c.as_str()).or_insert_with(|| {
                    names.push(c.clone());
                    NodeId::new(names.len() - 1)
                })
            })
            .collect();
        edges.push(Hyperedge::from_args(label, args));
    }

    LabeledHypergraph::new(names, labels, edges).expect("database atoms form a valid hypergraph")
}

/// Inverse of [`build_hypergraph`]: one atom per hyperedge.
pub fn hypergraph_to_database(h: &LabeledHypergraph) -> RelationalDatabase {
    let atoms = h.edges().iter().map(|e| GroundAtom {
        predicate: h.label_name(e.label()).to_owned(),
        constants: e.args().iter().map(|&n| h.node_name(n).to_owned()).collect(),
    });
    RelationalDatabase::from_atoms(atoms).expect("hyperedges come from valid atoms")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_atoms() {
        let db = parse_database("Teaches(P1,P3)\nReads(P3,B1)").unwrap();
        assert_eq!(db.len(), 2);
        assert_eq!(db.arities().get("Teaches"), Some(&2));
        assert_eq!(db.arities().get("Reads"), Some(&2));
    }

    #[test]
    fn arity_mismatch_reports_line() {
        let err = parse_database("Teaches(P1,P3)\nTeaches(P1)").unwrap_err();
        match err {
            Error::ArityMismatch {
                predicate, line, ..
            } => {
                assert_eq!(predicate, "Teaches");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn empty_input_is_empty_database() {
        assert!(parse_database("").unwrap().is_empty());
        assert!(parse_database("\n  \n// comment only\n").unwrap().is_empty());
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        for (text, line) in [
            ("A(x)\nB x", 2),
            ("A(x,)", 1),
            ("A(x)\n\n1A(x)", 3),
            ("A()", 1),
            ("A(x))", 1),
            ("!A(x)", 1),
        ] {
            match parse_database(text) {
                Err(Error::Syntax { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?}: expected syntax error, got {other:?}"),
            }
        }
    }

    #[test]
    fn whitespace_and_case_are_handled() {
        let db = parse_database("  R( a , B )  \nr(a,b)").unwrap();
        assert_eq!(db.len(), 2);
        assert_eq!(db.atoms()[0].constants, vec!["a", "B"]);
    }

    #[test]
    fn duplicates_collapse() {
        let db = parse_database("R(a,b)\nR(a,b)\nR(b,a)").unwrap();
        assert_eq!(db.len(), 2);
        let h = build_hypergraph(&db);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.node_count(), 2);
    }

    #[test]
    fn self_atom_dedups_within_edge() {
        let h = build_hypergraph(&parse_database("R(a,a)").unwrap());
        assert_eq!(h.node_count(), 1);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edges()[0].nodes().len(), 1);
    }

    #[test]
    fn round_trip_through_hypergraph() {
        let text = "R(a,a)\nT(b,a,c)\nR(c,b)\nR(a,a)\n";
        let db = parse_database(text).unwrap();
        let back = hypergraph_to_database(&build_hypergraph(&db));
        assert!(db.same_atoms(&back));
        assert_eq!(back.to_db_string(), "R(a,a)\nR(c,b)\nT(b,a,c)\n");
    }
}
