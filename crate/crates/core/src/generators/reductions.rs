//! Databases built from set cover and label cover instances.

use serde_json::json;

use crate::database::{tuple, Database};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::generators::{GeneratedInstance, LabelCoverInstance, SetCoverInstance};

/// Generators refuse to build databases beyond this many tuples.
pub const MAX_GENERATED_TUPLES: usize = 1_000_000;

fn set_name(j: usize) -> String {
    format!("S{}", j + 1)
}

fn family_json(sc: &SetCoverInstance) -> serde_json::Value {
    json!({
        "universe": sc.universe(),
        "family": sc.family().iter().map(|s| s.iter().map(|&e| sc.universe()[e].clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "min_cover": sc.min_cover(),
    })
}

/// `Q(A) :- R1(A,B), R2(B)` with `R1` the membership pairs and `R2` the sets.
/// Optimum `|U| + k`.
pub fn gen_cover_db(sc: &SetCoverInstance) -> Result<GeneratedInstance> {
    let query = fixtures::q_cover();
    let mut db = Database::empty_for(&query);
    for (j, s) in sc.family().iter().enumerate() {
        db.insert("R2", tuple([set_name(j)]))?;
        for &e in s {
            db.insert("R1", tuple([sc.universe()[e].clone(), set_name(j)]))?;
        }
    }
    let k = sc.min_cover();
    Ok(GeneratedInstance {
        family: "cover".into(),
        query,
        db,
        predicted_optimum: k.map(|k| sc.universe().len() + k),
        parameters: family_json(sc),
    })
}

/// `Q(A,C) :- R1(A,B), R2(B,C)` with `R1` the membership pairs and `R2` every
/// set paired with every element. Optimum `n(k+1)`.
pub fn gen_matrix_db(sc: &SetCoverInstance) -> Result<GeneratedInstance> {
    let query = fixtures::q_matrix();
    let mut db = Database::empty_for(&query);
    for (j, s) in sc.family().iter().enumerate() {
        for &e in s {
            db.insert("R1", tuple([sc.universe()[e].clone(), set_name(j)]))?;
        }
        for u in sc.universe() {
            db.insert("R2", tuple([set_name(j), u.clone()]))?;
        }
    }
    let n = sc.universe().len();
    Ok(GeneratedInstance {
        family: "matrix".into(),
        query,
        db,
        predicted_optimum: sc.min_cover().map(|k| n * (k + 1)),
        parameters: family_json(sc),
    })
}

/// The six-relation triangle-with-apex database. `F` ranges over pairs
/// `(set j, element i)` written `f<j>_<i>`. Optimum `(k+4)n² + kn`.
pub fn gen_pyramid_db(sc: &SetCoverInstance) -> Result<GeneratedInstance> {
    let query = fixtures::q_pyramid();
    let n = sc.universe().len();
    let m = sc.family().len();
    let memberships: usize = sc.family().iter().map(Vec::len).sum();
    let size = 3 * n * n + memberships * n + n * m + n * m * n;
    if size > MAX_GENERATED_TUPLES {
        return Err(Error::InstanceTooLarge {
            size,
            cap: MAX_GENERATED_TUPLES,
        });
    }
    let a = |i: usize| format!("a{}", i + 1);
    let b = |i: usize| format!("b{}", i + 1);
    let c = |i: usize| format!("c{}", i + 1);
    let f = |j: usize, i: usize| format!("f{}_{}", j + 1, i + 1);
    let mut db = Database::empty_for(&query);
    for x in 0..n {
        for y in 0..n {
            db.insert("R1", tuple([a(x), b(y)]))?;
            db.insert("R2", tuple([a(x), c(y)]))?;
            db.insert("R3", tuple([b(x), c(y)]))?;
        }
    }
    for (j, s) in sc.family().iter().enumerate() {
        for &l in s {
            for i in 0..n {
                db.insert("R4", tuple([a(l), f(j, i)]))?;
            }
        }
    }
    for i in 0..n {
        for j in 0..m {
            db.insert("R5", tuple([b(i), f(j, i)]))?;
            for x in 0..n {
                db.insert("R6", tuple([c(x), f(j, i)]))?;
            }
        }
    }
    Ok(GeneratedInstance {
        family: "pyramid".into(),
        query,
        db,
        predicted_optimum: sc.min_cover().map(|k| (k + 4) * n * n + k * n),
        parameters: family_json(sc),
    })
}

/// `Q(A1,A4) :- R1(A1,A2), R2(A2,A3), R3(A3,A4)` from a label cover
/// instance, with `t` copies of every vertex on the outer attributes.
/// Optimum `t·c + n²` for label cover optimum `c`.
pub fn gen_line3_db(lc: &LabelCoverInstance, t: usize) -> Result<GeneratedInstance> {
    if t == 0 {
        return Err(Error::InvalidInstance("index domain must be nonempty".into()));
    }
    let query = fixtures::q_line3();
    let (n, sigma) = (lc.n(), lc.alphabet());
    let size = 2 * n * t * sigma + lc.constraints().values().map(|c| c.len()).sum::<usize>();
    if size > MAX_GENERATED_TUPLES {
        return Err(Error::InstanceTooLarge {
            size,
            cap: MAX_GENERATED_TUPLES,
        });
    }
    let mut db = Database::empty_for(&query);
    for w in 0..n {
        for i in 0..t {
            for x in 0..sigma {
                db.insert("R1", tuple([format!("u{w}_{i}"), format!("u{w}_x{x}")]))?;
                db.insert("R3", tuple([format!("v{w}_y{x}"), format!("v{w}_{i}")]))?;
            }
        }
    }
    for (&(u, v), pairs) in lc.constraints() {
        for &(x, y) in pairs {
            db.insert("R2", tuple([format!("u{u}_x{x}"), format!("v{v}_y{y}")]))?;
        }
    }
    let c = lc.min_cost();
    Ok(GeneratedInstance {
        family: "line3".into(),
        query,
        db,
        predicted_optimum: c.map(|c| t * c + n * n),
        parameters: json!({
            "n": n,
            "alphabet": sigma,
            "t": t,
            "constraints": lc.constraints().iter().map(|(&(u, v), p)| json!({"u": u, "v": v, "pairs": p})).collect::<Vec<_>>(),
            "label_cover_optimum": c,
        }),
    })
}
