//! Seeded search for a five-dimensional left-invariant structure with a
//! nonzero `(0,2)` Nijenhuis part; prints the first hit as model JSON.
//!
//!     cargo run -p contactlab --example search_noncr > crates/core/models/noncr5.json

use contactlab::linalg::{condition_number, max_abs};
use contactlab::model::random_contact_lie;

fn main() {
    for seed in 0..10_000 {
        let Ok(model) = random_contact_lie(5, seed, 20) else {
            continue;
        };
        let n02 = model.nijenhuis_02().max_abs();
        let sj = max_abs(model.script_j());
        let cond = condition_number(model.space().g());
        if n02 < 0.05 || sj < 0.05 || cond > 20.0 || model.structure_constants().max_abs() > 4.0 {
            continue;
        }
        let tight = model
            .nf_checks(1e-12)
            .into_iter()
            .chain(model.nabla_j_checks(1e-12))
            .chain(model.validity(1e-12).checks)
            .all(|c| c.pass);
        if !tight {
            continue;
        }
        eprintln!("seed {seed}: |N02| = {n02:.4}, |L_xi J| = {sj:.4}, cond(g) = {cond:.2}");
        println!("{}", model.with_name("noncr5").to_json());
        return;
    }
    eprintln!("no candidate found");
    std::process::exit(1);
}
