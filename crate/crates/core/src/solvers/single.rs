use std::collections::BTreeMap;

use crate::database::{Database, Tuple, Value};
use crate::error::{Error, Result};
use crate::eval::{self, join_project, positions, project, JoinInput};
use crate::query::Query;
use crate::witness::Witness;

/// Projects a full join row (over `query.attrs()`) onto each relation.
pub(crate) fn split_row(query: &Query, row: &[Value]) -> Vec<(String, Tuple)> {
    let attrs = query.attrs();
    query
        .relations()
        .iter()
        .map(|r| (r.name.clone(), project(row, &positions(&attrs, &r.attrs))))
        .collect()
}

/// The lexicographically smallest full join row (over `query.attrs()`)
/// projecting to `t`. Only `query`'s relations are read from `db`.
pub(crate) fn smallest_row(query: &Query, db: &Database, t: &[Value]) -> Result<Option<Vec<Value>>> {
    if t.len() != query.head().len() {
        return Err(Error::SchemaMismatch(format!(
            "result tuple has arity {}, head has {}",
            t.len(),
            query.head().len()
        )));
    }
    let mut inputs = Vec::new();
    for schema in query.relations() {
        let rel = db.get(&schema.name)?;
        let fixed: Vec<(usize, &Value)> = schema
            .attrs
            .iter()
            .enumerate()
            .filter_map(|(i, a)| query.head().iter().position(|h| h == a).map(|h| (i, &t[h])))
            .collect();
        inputs.push(JoinInput {
            attrs: &schema.attrs,
            tuples: rel
                .tuples()
                .iter()
                .filter(|tup| fixed.iter().all(|(i, v)| &tup[*i] == *v))
                .collect(),
        });
    }
    Ok(join_project(&inputs, &query.attrs()).into_iter().min())
}

/// For every result, its lexicographically smallest full join row.
pub(crate) fn smallest_rows(query: &Query, db: &Database) -> Result<BTreeMap<Vec<Value>, Vec<Value>>> {
    let head_idx = positions(&query.attrs(), query.head());
    let mut out = BTreeMap::new();
    // rows arrive sorted, so the first per head value is the smallest
    for row in eval::full_join_of(query, db)? {
        out.entry(project(&row, &head_idx)).or_insert(row);
    }
    Ok(out)
}

/// One tuple per relation, taken from one full join result extending `t`.
pub fn witness_for_result(query: &Query, db: &Database, t: &[Value]) -> Result<Witness> {
    db.check_conforms(query)?;
    let row = smallest_row(query, db, t)?
        .ok_or_else(|| Error::ResultNotFound(t.iter().map(|v| v.to_string()).collect()))?;
    let mut w = Witness::empty("single-result", query);
    for (name, tup) in split_row(query, &row) {
        w.db.insert(&name, tup)?;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::database::tuple;
    use crate::fixtures;
    use crate::witness::is_witness;

    #[test]
    fn example_instance_single_result() {
        let (q, db) = fixtures::example_instance();
        let w = witness_for_result(&q, &db, &tuple(["a1", "c1", "f1"])).unwrap();
        assert_eq!(w.db, fixtures::example_single_result_witness(&q).db);
    }

    #[test]
    fn single_relation_full_query() {
        let q = Query::parse("Q(A,B) :- R(A,B)").unwrap();
        let db = Database::from_rows(&q, [("R", vec![vec!["1", "2"], vec!["3", "4"]])]).unwrap();
        let w = witness_for_result(&q, &db, &tuple(["3", "4"])).unwrap();
        assert_eq!(w.size(), 1);
        assert!(w.db.relation("R").unwrap().contains(&tuple(["3", "4"])));
    }

    #[test]
    fn non_result_is_an_error() {
        let (q, db) = fixtures::example_instance();
        assert!(matches!(
            witness_for_result(&q, &db, &tuple(["a1", "c3", "f1"])),
            Err(Error::ResultNotFound(_))
        ));
    }

    #[test]
    fn boolean_query() {
        let q = Query::parse("Q() :- R(A,B), S(B)").unwrap();
        let db = Database::from_rows(
            &q,
            [("R", vec![vec!["a", "b"], vec!["a2", "b"]]), ("S", vec![vec!["b"]])],
        )
        .unwrap();
        let w = witness_for_result(&q, &db, &[]).unwrap();
        assert_eq!(w.size(), 2);
        assert!(is_witness(&q, &db, &w).unwrap());
    }

    #[test]
    fn smallest_rows_agree_with_primitive() {
        let (q, db) = fixtures::example_instance();
        for (head, row) in smallest_rows(&q, &db).unwrap() {
            assert_eq!(smallest_row(&q, &db, &head).unwrap(), Some(row));
        }
    }
}
