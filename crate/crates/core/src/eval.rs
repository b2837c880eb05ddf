//! Query evaluation by left-to-right hash joins.
//!
//! Intermediate results are projected eagerly onto the attributes that are
//! still needed (the output plus everything later atoms join on), and the
//! final result is deduplicated.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::database::{Database, Tuple, Value};
use crate::error::{Error, Result};
use crate::query::{Attribute, Query};

/// `Q(D)`: tuples over `head(Q)` in head order. A Boolean query yields either
/// the empty set or the set holding the empty tuple.
pub type ResultSet = BTreeSet<Vec<Value>>;

/// One join input: its attribute list and the tuples taking part.
pub(crate) struct JoinInput<'a> {
    pub attrs: &'a [Attribute],
    pub tuples: Vec<&'a Tuple>,
}

/// Positions of `target` attributes inside `attrs`.
pub(crate) fn positions(attrs: &[Attribute], target: &[Attribute]) -> Vec<usize> {
    target
        .iter()
        .map(|a| {
            attrs
                .iter()
                .position(|b| b == a)
                .unwrap_or_else(|| panic!("attribute `{a}` not among {attrs:?}"))
        })
        .collect()
}

pub(crate) fn project(t: &[Value], idx: &[usize]) -> Vec<Value> {
    idx.iter().map(|&i| t[i].clone()).collect()
}

/// Natural join of `inputs` projected onto `output`.
pub(crate) fn join_project(inputs: &[JoinInput<'_>], output: &[Attribute]) -> HashSet<Vec<Value>> {
    let mut cur_attrs: Vec<Attribute> = Vec::new();
    let mut cur_rows: HashSet<Vec<Value>> = HashSet::from([Vec::new()]);

    for (i, input) in inputs.iter().enumerate() {
        if cur_rows.is_empty() {
            return HashSet::new();
        }
        let shared: Vec<Attribute> = input.attrs.iter().filter(|a| cur_attrs.contains(a)).cloned().collect();
        let fresh: Vec<Attribute> = input.attrs.iter().filter(|a| !cur_attrs.contains(a)).cloned().collect();
        let in_shared = positions(input.attrs, &shared);
        let in_fresh = positions(input.attrs, &fresh);
        let cur_shared = positions(&cur_attrs, &shared);

        let mut table: HashMap<Vec<Value>, Vec<Vec<Value>>> = HashMap::new();
        for t in &input.tuples {
            table.entry(project(t, &in_shared)).or_default().push(project(t, &in_fresh));
        }

        let mut needed: BTreeSet<&str> = output.iter().map(String::as_str).collect();
        for later in &inputs[i + 1..] {
            needed.extend(later.attrs.iter().map(String::as_str));
        }
        let combined: Vec<Attribute> = cur_attrs.iter().chain(fresh.iter()).cloned().collect();
        let keep: Vec<usize> = (0..combined.len())
            .filter(|&j| needed.contains(combined[j].as_str()))
            .collect();

        let mut next = HashSet::new();
        for row in &cur_rows {
            if let Some(matches) = table.get(&project(row, &cur_shared)) {
                for extra in matches {
                    let full: Vec<Value> = row.iter().chain(extra.iter()).cloned().collect();
                    next.insert(project(&full, &keep));
                }
            }
        }
        cur_attrs = keep.iter().map(|&j| combined[j].clone()).collect();
        cur_rows = next;
    }

    let out_idx = positions(&cur_attrs, output);
    cur_rows.into_iter().map(|r| project(&r, &out_idx)).collect()
}

fn inputs_for<'a>(query: &'a Query, db: &'a Database) -> Result<Vec<JoinInput<'a>>> {
    query
        .relations()
        .iter()
        .map(|schema| {
            let rel = db.get(&schema.name)?;
            if rel.attrs() != schema.attrs.as_slice() {
                return Err(Error::SchemaMismatch(format!(
                    "`{}` has attributes {:?}, query expects {:?}",
                    schema.name,
                    rel.attrs(),
                    schema.attrs
                )));
            }
            Ok(JoinInput {
                attrs: &schema.attrs,
                tuples: rel.tuples().iter().collect(),
            })
        })
        .collect()
}

/// `π_head(Q)(R_1 ⋈ … ⋈ R_m)` with duplicates removed.
pub fn evaluate(query: &Query, db: &Database) -> Result<ResultSet> {
    db.check_conforms(query)?;
    let inputs = inputs_for(query, db)?;
    Ok(join_project(&inputs, query.head()).into_iter().collect())
}

/// Every full join result, as tuples over `query.attrs()`.
pub fn full_join(query: &Query, db: &Database) -> Result<BTreeSet<Vec<Value>>> {
    db.check_conforms(query)?;
    let inputs = inputs_for(query, db)?;
    Ok(join_project(&inputs, &query.attrs()).into_iter().collect())
}

/// Full join over the query's relations only; `db` may hold more relations.
pub(crate) fn full_join_of(query: &Query, db: &Database) -> Result<BTreeSet<Vec<Value>>> {
    let inputs = inputs_for(query, db)?;
    Ok(join_project(&inputs, &query.attrs()).into_iter().collect())
}

/// Reference evaluator: nested loops over every tuple combination.
pub fn evaluate_nested_loop(query: &Query, db: &Database) -> Result<ResultSet> {
    db.check_conforms(query)?;
    let rels: Vec<(&[Attribute], Vec<&Tuple>)> = query
        .relations()
        .iter()
        .map(|s| Ok((s.attrs.as_slice(), db.get(&s.name)?.tuples().iter().collect())))
        .collect::<Result<_>>()?;
    let mut out = ResultSet::new();
    let mut binding: HashMap<&str, Value> = HashMap::new();
    fn walk<'a>(
        i: usize,
        rels: &[(&'a [Attribute], Vec<&'a Tuple>)],
        head: &[Attribute],
        binding: &mut HashMap<&'a str, Value>,
        out: &mut ResultSet,
    ) {
        if i == rels.len() {
            out.insert(head.iter().map(|a| binding[a.as_str()].clone()).collect());
            return;
        }
        let (attrs, tuples) = &rels[i];
        for t in tuples {
            let consistent = attrs
                .iter()
                .zip(t.iter())
                .all(|(a, v)| binding.get(a.as_str()).is_none_or(|b| b == v));
            if !consistent {
                continue;
            }
            let added: Vec<&str> = attrs
                .iter()
                .filter(|a| !binding.contains_key(a.as_str()))
                .map(String::as_str)
                .collect();
            for (a, v) in attrs.iter().zip(t.iter()) {
                binding.entry(a.as_str()).or_insert_with(|| v.clone());
            }
            walk(i + 1, rels, head, binding, out);
            for a in added {
                binding.remove(a);
            }
        }
    }
    walk(0, &rels, query.head(), &mut binding, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::database::tuple;
    use crate::fixtures;

    #[test]
    fn example_instance_result() {
        let (q, db) = fixtures::example_instance();
        let res = evaluate(&q, &db).unwrap();
        let want: ResultSet = [["a1", "c1", "f1"], ["a2", "c3", "f3"], ["a3", "c3", "f3"]]
            .into_iter()
            .map(tuple)
            .collect();
        assert_eq!(res, want);
        assert_eq!(evaluate_nested_loop(&q, &db).unwrap(), want);
    }

    #[test]
    fn empty_database_gives_empty_result() {
        let (q, db) = fixtures::example_instance();
        assert!(evaluate(&q, &db.cleared()).unwrap().is_empty());
    }

    #[test]
    fn full_single_relation_is_identity() {
        let q = Query::parse("Q(A,B) :- R(A,B)").unwrap();
        let db = Database::from_rows(&q, [("R", vec![vec!["1", "2"], vec!["3", "4"]])]).unwrap();
        let res = evaluate(&q, &db).unwrap();
        assert_eq!(&res, db.relation("R").unwrap().tuples());
    }

    #[test]
    fn head_order_is_respected() {
        let q = Query::parse("Q(C,A) :- R1(A,B), R2(B,C)").unwrap();
        let db = Database::from_rows(&q, [("R1", vec![vec!["a", "b"]]), ("R2", vec![vec!["b", "c"]])]).unwrap();
        assert_eq!(evaluate(&q, &db).unwrap(), ResultSet::from([tuple(["c", "a"])]));
    }

    #[test]
    fn boolean_query_yields_empty_tuple() {
        let q = Query::parse("Q() :- R(A,B), S(B)").unwrap();
        let db = Database::from_rows(&q, [("R", vec![vec!["a", "b"]]), ("S", vec![vec!["b"]])]).unwrap();
        assert_eq!(evaluate(&q, &db).unwrap(), ResultSet::from([Vec::new()]));
        let db2 = Database::from_rows(&q, [("R", vec![vec!["a", "b"]]), ("S", vec![vec!["x"]])]).unwrap();
        assert!(evaluate(&q, &db2).unwrap().is_empty());
    }

    #[test]
    fn disconnected_query_is_cartesian() {
        let q = Query::parse("Q(A,C) :- R(A), S(C)").unwrap();
        let db = Database::from_rows(&q, [("R", vec![vec!["1"], vec!["2"]]), ("S", vec![vec!["x"], vec!["y"]])]).unwrap();
        assert_eq!(evaluate(&q, &db).unwrap().len(), 4);
    }

    #[test]
    fn full_join_covers_all_attributes() {
        let (q, db) = fixtures::example_instance();
        let j = full_join(&q, &db).unwrap();
        // (a1,b1,c1,f1,h1), (a2|a3, b2, c3, f3, h1|h2) and the dangling-free c2 branch is absent
        assert_eq!(j.len(), 5);
        assert!(j.contains(&tuple(["a1", "b1", "c1", "f1", "h1"])));
    }
}
