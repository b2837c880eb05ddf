//! Hard instances for arbitrary queries, obtained by embedding a set cover
//! instance along a few attributes and padding every other attribute with
//! the dummy value `*`. Optima are left to the oracle.

use serde_json::json;

use crate::database::{Database, Tuple, Value};
use crate::error::{Error, Result};
use crate::generators::{GeneratedInstance, SetCoverInstance};
use crate::query::{Attribute, Query};
use crate::structure::find_free_sequence;

pub const DUMMY: &str = "*";

fn set_value(j: usize) -> String {
    format!("S{}", j + 1)
}

/// Builds a tuple over `attrs`, filling unassigned attributes with `*`.
fn padded(attrs: &[Attribute], assign: &[(&str, String)]) -> Tuple {
    attrs
        .iter()
        .map(|a| {
            let v = assign.iter().find(|(x, _)| x == a).map_or(DUMMY, |(_, v)| v.as_str());
            Value::from(v)
        })
        .collect()
}

/// Embeds along a free sequence `⟨A_1, …, A_k⟩` (found when `seq` is `None`):
/// the endpoints carry elements, the interior attributes carry sets.
pub fn embed_free_sequence(query: &Query, seq: Option<Vec<Attribute>>, sc: &SetCoverInstance) -> Result<GeneratedInstance> {
    let seq = match seq {
        Some(s) => s,
        None => find_free_sequence(query)
            .ok_or(Error::PreconditionViolated("free sequence"))?,
    };
    if seq.len() < 3 {
        return Err(Error::InvalidInstance("a free sequence has at least three attributes".into()));
    }
    let (first, last) = (&seq[0], &seq[seq.len() - 1]);
    let interior = &seq[1..seq.len() - 1];
    let mut db = Database::empty_for(query);
    for rel in query.relations() {
        let inner: Vec<&str> = interior.iter().filter(|a| rel.contains(a)).map(String::as_str).collect();
        let end = [first, last].into_iter().find(|a| rel.contains(a));
        match end {
            Some(end) => {
                for (ui, u) in sc.universe().iter().enumerate() {
                    if inner.is_empty() {
                        db.insert(&rel.name, padded(&rel.attrs, &[(end.as_str(), u.clone())]))?;
                        continue;
                    }
                    for (j, s) in sc.family().iter().enumerate() {
                        // only the first endpoint is restricted to memberships
                        if end == first && !s.contains(&ui) {
                            continue;
                        }
                        let mut assign = vec![(end.as_str(), u.clone())];
                        assign.extend(inner.iter().map(|a| (*a, set_value(j))));
                        db.insert(&rel.name, padded(&rel.attrs, &assign))?;
                    }
                }
            }
            None if !inner.is_empty() => {
                for j in 0..sc.family().len() {
                    let assign: Vec<(&str, String)> = inner.iter().map(|a| (*a, set_value(j))).collect();
                    db.insert(&rel.name, padded(&rel.attrs, &assign))?;
                }
            }
            None => {
                db.insert(&rel.name, padded(&rel.attrs, &[]))?;
            }
        }
    }
    Ok(GeneratedInstance {
        family: "embed-free-sequence".into(),
        query: query.clone(),
        db,
        predicted_optimum: None,
        parameters: json!({ "sequence": seq, "universe": sc.universe(), "family": sc.family() }),
    })
}

/// Embeds the cover construction into a query without head-cluster: for two
/// relations with different heads sharing a non-output attribute `B'`, an
/// output attribute `A'` of the first that the second lacks carries elements
/// and `B'` carries sets.
pub fn embed_cover(query: &Query, sc: &SetCoverInstance) -> Result<GeneratedInstance> {
    let mut pick = None;
    'outer: for ri in query.relations() {
        for rj in query.relations() {
            if ri.name == rj.name || query.head_of(ri) == query.head_of(rj) {
                continue;
            }
            let a = query.head_of(ri).into_iter().find(|a| !rj.contains(a));
            let b = ri.attrs.iter().find(|x| rj.contains(x) && !query.is_head(x));
            if let (Some(a), Some(b)) = (a, b) {
                pick = Some((a, b.clone()));
                break 'outer;
            }
        }
    }
    let (a, b) = pick.ok_or(Error::PreconditionViolated("non-head-cluster"))?;
    let mut db = Database::empty_for(query);
    for rel in query.relations() {
        match (rel.contains(&a), rel.contains(&b)) {
            (true, true) => {
                for (j, s) in sc.family().iter().enumerate() {
                    for &e in s {
                        let assign = [(a.as_str(), sc.universe()[e].clone()), (b.as_str(), set_value(j))];
                        db.insert(&rel.name, padded(&rel.attrs, &assign))?;
                    }
                }
            }
            (true, false) => {
                for u in sc.universe() {
                    db.insert(&rel.name, padded(&rel.attrs, &[(a.as_str(), u.clone())]))?;
                }
            }
            (false, true) => {
                for j in 0..sc.family().len() {
                    db.insert(&rel.name, padded(&rel.attrs, &[(b.as_str(), set_value(j))]))?;
                }
            }
            (false, false) => {
                db.insert(&rel.name, padded(&rel.attrs, &[]))?;
            }
        }
    }
    Ok(GeneratedInstance {
        family: "embed-cover".into(),
        query: query.clone(),
        db,
        predicted_optimum: None,
        parameters: json!({ "element_attribute": a, "set_attribute": b, "universe": sc.universe(), "family": sc.family() }),
    })
}
