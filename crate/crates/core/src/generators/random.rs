use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::database::{Database, Tuple};
use crate::error::{Error, Result};
use crate::query::Query;

/// Pseudorandom database. `per_relation_size` and `value_pool_sizes` hold
/// either one entry used for everything or one entry per relation
/// (respectively per attribute of `query.attrs()`). Values of attribute `X`
/// are `x1, x2, …` (lowercased name plus index). Relations smaller than
/// requested occur only when the pools admit fewer distinct tuples.
pub fn gen_random_db(
    query: &Query,
    per_relation_size: &[usize],
    value_pool_sizes: &[usize],
    seed: u64,
) -> Result<Database> {
    let rels = query.relations();
    let attrs = query.attrs();
    let pick = |v: &[usize], i: usize, what: &str, len: usize| -> Result<usize> {
        match v.len() {
            1 => Ok(v[0]),
            l if l == len => Ok(v[i]),
            l => Err(Error::InvalidInstance(format!("{l} {what} given, expected 1 or {len}"))),
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut db = Database::empty_for(query);
    for (ri, rel) in rels.iter().enumerate() {
        let want = pick(per_relation_size, ri, "relation sizes", rels.len())?;
        let pools: Vec<usize> = rel
            .attrs
            .iter()
            .map(|a| {
                let ai = attrs.iter().position(|x| x == a).expect("attribute of query");
                pick(value_pool_sizes, ai, "pool sizes", attrs.len())
            })
            .collect::<Result<_>>()?;
        if want > 0 && pools.contains(&0) {
            return Err(Error::InvalidInstance(format!("empty value pool in `{}`", rel.name)));
        }
        let capacity = pools.iter().try_fold(1usize, |acc, &p| acc.checked_mul(p)).unwrap_or(usize::MAX);
        let target = want.min(capacity);
        let mut inserted = 0;
        let mut attempts = 0;
        while inserted < target && attempts < 50 * want + 100 {
            attempts += 1;
            let t: Tuple = rel
                .attrs
                .iter()
                .zip(&pools)
                .map(|(a, &p)| format!("{}{}", a.to_lowercase(), rng.gen_range(1..=p)).into())
                .collect();
            if db.insert(&rel.name, t)? {
                inserted += 1;
            }
        }
    }
    Ok(db)
}
