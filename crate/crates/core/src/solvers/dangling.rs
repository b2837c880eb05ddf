use std::collections::HashSet;

use crate::database::{Database, Value};
use crate::error::{Error, Result};
use crate::eval::{positions, project};
use crate::query::{Attribute, Query};
use crate::structure::{join_tree, JoinTree};

/// `target ⋉ source` in place.
fn semijoin(db: &mut Database, query: &Query, target: &str, source: &str) -> Result<()> {
    let t_attrs = &query.relation(target).expect("tree node").attrs;
    let s_attrs = &query.relation(source).expect("tree node").attrs;
    let shared: Vec<Attribute> = t_attrs.iter().filter(|a| s_attrs.contains(a)).cloned().collect();
    let s_idx = positions(s_attrs, &shared);
    let t_idx = positions(t_attrs, &shared);
    let keys: HashSet<Vec<Value>> = db.get(source)?.tuples().iter().map(|t| project(t, &s_idx)).collect();
    db.relation_mut(target)
        .expect("checked above")
        .retain(|t| keys.contains(&project(t, &t_idx)));
    Ok(())
}

/// Full reducer over a join tree: leaves-to-root, then root-to-leaves.
pub(crate) fn semijoin_reduce(query: &Query, db: &Database, tree: &JoinTree) -> Result<Database> {
    let mut out = db.clone();
    for ear in &tree.elimination_order {
        if let Some(Some(parent)) = tree.parent.get(ear) {
            semijoin(&mut out, query, parent, ear)?;
        }
    }
    for ear in tree.elimination_order.iter().rev() {
        if let Some(Some(parent)) = tree.parent.get(ear) {
            semijoin(&mut out, query, ear, parent)?;
        }
    }
    Ok(out)
}

/// Keeps exactly the tuples taking part in some join result.
pub fn remove_dangling(query: &Query, db: &Database) -> Result<Database> {
    if !query.is_full() {
        return Err(Error::PreconditionViolated("full acyclic"));
    }
    let tree = join_tree(query).ok_or(Error::PreconditionViolated("full acyclic"))?;
    db.check_conforms(query)?;
    semijoin_reduce(query, db, &tree)
}
