//! Set-semantics databases over string values, with CSV ingestion and export.
//!
//! Each relation lives in `<RelationName>.csv`; the first row names the
//! attributes (any column order) and every later row is one tuple.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::query::{Attribute, Query};

/// Values are opaque strings.
pub type Value = Arc<str>;

/// A tuple is stored positionally, aligned with its relation's attribute list.
pub type Tuple = Vec<Value>;

pub fn value(s: &str) -> Value {
    Arc::from(s)
}

pub fn tuple<S: AsRef<str>>(values: impl IntoIterator<Item = S>) -> Tuple {
    values.into_iter().map(|s| value(s.as_ref())).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    attrs: Vec<Attribute>,
    tuples: BTreeSet<Tuple>,
}

impl Relation {
    pub fn new(attrs: Vec<Attribute>) -> Self {
        Relation {
            attrs,
            tuples: BTreeSet::new(),
        }
    }

    pub fn attrs(&self) -> &[Attribute] {
        &self.attrs
    }

    pub fn tuples(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[Value]) -> bool {
        self.tuples.contains(t)
    }

    /// Inserts a tuple; returns false when it was already present.
    ///
    /// Panics if the arity does not match the schema.
    pub fn insert(&mut self, t: Tuple) -> bool {
        assert_eq!(t.len(), self.attrs.len(), "tuple arity does not match relation schema");
        self.tuples.insert(t)
    }

    pub fn position(&self, attr: &str) -> Option<usize> {
        self.attrs.iter().position(|a| a == attr)
    }

    pub fn retain(&mut self, f: impl FnMut(&Tuple) -> bool) {
        self.tuples.retain(f);
    }

    /// Returns the tuple at `index` in sorted order.
    pub fn nth(&self, index: usize) -> Option<&Tuple> {
        self.tuples.iter().nth(index)
    }
}

/// A database instance for one query: relation name → tuple set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Database {
    relations: BTreeMap<String, Relation>,
}

impl Database {
    /// An empty instance with one relation per atom of `query`.
    pub fn empty_for(query: &Query) -> Self {
        Database {
            relations: query
                .relations()
                .iter()
                .map(|r| (r.name.clone(), Relation::new(r.attrs.clone())))
                .collect(),
        }
    }

    /// Builds an instance from per-relation rows given in schema order.
    pub fn from_rows<'a, S: AsRef<str>>(
        query: &Query,
        rows: impl IntoIterator<Item = (&'a str, Vec<Vec<S>>)>,
    ) -> Result<Self> {
        let mut db = Database::empty_for(query);
        for (name, tuples) in rows {
            for t in tuples {
                db.insert(name, tuple(t))?;
            }
        }
        Ok(db)
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn relation_mut(&mut self, name: &str) -> Option<&mut Relation> {
        self.relations.get_mut(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Relation by name; a missing name is reported as a schema mismatch.
    pub fn get(&self, name: &str) -> Result<&Relation> {
        self.relations
            .get(name)
            .ok_or_else(|| Error::SchemaMismatch(format!("no relation `{name}` in database")))
    }

    pub fn insert(&mut self, relation: &str, t: Tuple) -> Result<bool> {
        let rel = self
            .relations
            .get_mut(relation)
            .ok_or_else(|| Error::SchemaMismatch(format!("no relation `{relation}` in database")))?;
        if t.len() != rel.attrs.len() {
            return Err(Error::SchemaMismatch(format!(
                "tuple {:?} has arity {}, `{relation}` has {}",
                t,
                t.len(),
                rel.attrs.len()
            )));
        }
        Ok(rel.insert(t))
    }

    /// `N = |D|`, the total number of tuples.
    pub fn size(&self) -> usize {
        self.relations.values().map(Relation::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    /// Checks that relation names and attribute lists match the query exactly.
    pub fn check_conforms(&self, query: &Query) -> Result<()> {
        if self.relations.len() != query.relations().len() {
            return Err(Error::SchemaMismatch(format!(
                "database has {} relations, query has {}",
                self.relations.len(),
                query.relations().len()
            )));
        }
        for schema in query.relations() {
            let rel = self.get(&schema.name)?;
            if rel.attrs != schema.attrs {
                return Err(Error::SchemaMismatch(format!(
                    "`{}` has attributes {:?}, query expects {:?}",
                    schema.name, rel.attrs, schema.attrs
                )));
            }
        }
        Ok(())
    }

    /// Relation-wise containment; reports the first offending tuple.
    pub fn check_subset_of(&self, other: &Database) -> Result<()> {
        for (name, rel) in &self.relations {
            let theirs = other.get(name)?;
            if let Some(t) = rel.tuples.iter().find(|t| !theirs.contains(t)) {
                return Err(Error::NotASubDatabase {
                    relation: name.clone(),
                    tuple: t.iter().map(|v| v.to_string()).collect(),
                });
            }
        }
        Ok(())
    }

    /// Relation-wise union; both sides must share the same schema.
    pub fn union_with(&mut self, other: &Database) {
        for (name, rel) in &other.relations {
            let mine = self
                .relations
                .entry(name.clone())
                .or_insert_with(|| Relation::new(rel.attrs.clone()));
            mine.tuples.extend(rel.tuples.iter().cloned());
        }
    }

    /// Sub-database holding only the named relations.
    pub fn restrict(&self, names: &[&str]) -> Database {
        Database {
            relations: self
                .relations
                .iter()
                .filter(|(k, _)| names.contains(&k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// An instance with the same schema and no tuples.
    pub fn cleared(&self) -> Database {
        Database {
            relations: self
                .relations
                .iter()
                .map(|(k, v)| (k.clone(), Relation::new(v.attrs.clone())))
                .collect(),
        }
    }

    /// Reads `<dir>/<Relation>.csv` for every relation of `query`.
    pub fn load(query: &Query, dir: &Path) -> Result<Self> {
        let mut db = Database::empty_for(query);
        for schema in query.relations() {
            let path = dir.join(format!("{}.csv", schema.name));
            if !path.is_file() {
                return Err(Error::MissingRelationFile(schema.name.clone()));
            }
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .from_path(&path)
                .map_err(|e| csv_error(&path, e))?;
            let mut records = reader.records();
            let header: Vec<String> = match records.next() {
                Some(r) => r.map_err(|e| csv_error(&path, e))?.iter().map(|s| s.trim().to_string()).collect(),
                None => Vec::new(),
            };
            let header_set: BTreeSet<&str> = header.iter().map(String::as_str).collect();
            if header.len() != schema.attrs.len() || header_set != schema.attr_set() {
                return Err(Error::HeaderMismatch {
                    relation: schema.name.clone(),
                    expected: schema.attrs.clone(),
                    found: header,
                });
            }
            // column index in the file for each schema attribute
            let order: Vec<usize> = schema
                .attrs
                .iter()
                .map(|a| header.iter().position(|h| h == a).expect("header checked"))
                .collect();
            for record in records {
                let record = record.map_err(|e| csv_error(&path, e))?;
                if record.len() != header.len() {
                    let line = record.position().map(|p| p.line()).unwrap_or(0);
                    return Err(Error::RaggedRow { file: path.clone(), line });
                }
                let t: Tuple = order.iter().map(|&i| value(&record[i])).collect();
                db.insert(&schema.name, t)?;
            }
        }
        Ok(db)
    }

    /// Writes one CSV per relation into `dir`, creating it if needed.
    pub fn write_csv_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, rel) in &self.relations {
            let path = dir.join(format!("{name}.csv"));
            let mut writer = csv::Writer::from_path(&path).map_err(|e| csv_error(&path, e))?;
            writer.write_record(&rel.attrs).map_err(|e| csv_error(&path, e))?;
            for t in &rel.tuples {
                writer
                    .write_record(t.iter().map(|v| v.as_bytes()))
                    .map_err(|e| csv_error(&path, e))?;
            }
            writer.flush().map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

impl Serialize for Database {
    /// Serializes as `{relation: [[v1, v2, ...], ...]}`.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.relations.len()))?;
        for (name, rel) in &self.relations {
            let rows: Vec<Vec<&str>> = rel.tuples.iter().map(|t| t.iter().map(|v| &**v).collect()).collect();
            map.serialize_entry(name, &rows)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix() -> Query {
        Query::parse("Q(A,C) :- R1(A,B), R2(B,C)").unwrap()
    }

    #[test]
    fn loads_any_column_order_and_collapses_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("R1.csv"), "B,A\nb1,a1\nb1,a1\nb2,a1\n").unwrap();
        fs::write(dir.path().join("R2.csv"), "B,C\n").unwrap();
        let db = Database::load(&matrix(), dir.path()).unwrap();
        let r1 = db.relation("R1").unwrap();
        assert_eq!(r1.len(), 2);
        assert!(r1.contains(&tuple(["a1", "b1"])));
        assert_eq!(db.size(), 2);
        assert!(db.relation("R2").unwrap().is_empty());
    }

    #[test]
    fn missing_file_and_header_errors() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("R1.csv"), "A,B\n").unwrap();
        assert!(matches!(
            Database::load(&matrix(), dir.path()),
            Err(Error::MissingRelationFile(ref r)) if r == "R2"
        ));
        fs::write(dir.path().join("R2.csv"), "B,D\n").unwrap();
        assert!(matches!(
            Database::load(&matrix(), dir.path()),
            Err(Error::HeaderMismatch { ref relation, .. }) if relation == "R2"
        ));
    }

    #[test]
    fn ragged_rows_report_line() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("R1.csv"), "A,B\na1,b1\na2\n").unwrap();
        fs::write(dir.path().join("R2.csv"), "B,C\n").unwrap();
        match Database::load(&matrix(), dir.path()) {
            Err(Error::RaggedRow { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn quoted_values_round_trip() {
        let q = matrix();
        let mut db = Database::empty_for(&q);
        db.insert("R1", tuple(["a,1", "b \"x\""])).unwrap();
        db.insert("R2", tuple(["b \"x\"", "c\n2"])).unwrap();
        let dir = tempfile::tempdir().unwrap();
        db.write_csv_dir(dir.path()).unwrap();
        assert_eq!(Database::load(&q, dir.path()).unwrap(), db);
    }

    #[test]
    fn subset_check_names_offender() {
        let q = matrix();
        let db = Database::from_rows(&q, [("R1", vec![vec!["a", "b"]])]).unwrap();
        let cand = Database::from_rows(&q, [("R1", vec![vec!["a", "z"]])]).unwrap();
        assert!(matches!(cand.check_subset_of(&db), Err(Error::NotASubDatabase { .. })));
        assert!(db.cleared().check_subset_of(&db).is_ok());
    }
}
