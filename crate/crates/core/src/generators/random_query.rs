use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::query::{Query, RelationSchema};

/// A random self-join-free query with `1..=max_relations` atoms over at most
/// `max_attributes` attributes `X1, X2, …`; atoms have arity 1 to 3 and the
/// head is a random subset of the attributes used.
pub fn random_query(seed: u64, max_relations: usize, max_attributes: usize) -> Query {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_attrs = rng.gen_range(1..=max_attributes.max(1));
    let pool: Vec<String> = (1..=n_attrs).map(|i| format!("X{i}")).collect();
    let n_rels = rng.gen_range(1..=max_relations.max(1));
    let relations: Vec<RelationSchema> = (1..=n_rels)
        .map(|i| {
            let arity = rng.gen_range(1..=n_attrs.min(3));
            let mut attrs: Vec<String> = pool.choose_multiple(&mut rng, arity).cloned().collect();
            attrs.sort();
            RelationSchema::new(format!("R{i}"), attrs)
        })
        .collect();
    let used: BTreeSet<&String> = relations.iter().flat_map(|r| r.attrs.iter()).collect();
    let head: Vec<String> = used.into_iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    Query::new(head, relations).expect("generated query is well formed")
}
