//! The cross-engine verification suites: printed tables against the
//! mutation engine, engine-against-engine agreement, and randomized
//! structural properties.

use std::time::Instant;

use qcc::catalog::{family_quiver, rep_label_sequence, rep_names, rank2_variable_walk};
use qcc::cc::{cc_expand, cc_verify_mutation, kronecker_closed_form};
use qcc::count::{recursion_counts, CountMode, CountTable, KroneckerSide};
use qcc::quiver::{matrix_mutation, RootContext};
use qcc::seed::{variable_by_label, CompatiblePair, QuantumSeed};
use qcc::tpath::{b_from_triangulation, Triangulation};

use qcc::goldens as tables;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    PaperTables,
    Engines,
    Properties,
}

pub struct CheckResult {
    pub name: String,
    pub outcome: Result<(), String>,
    pub millis: u128,
}

type Check = (String, Box<dyn Fn() -> Result<(), String>>);

pub fn run_suite(suite: Suite, budget: u64) -> Vec<CheckResult> {
    let checks: Vec<Check> = match suite {
        Suite::PaperTables => paper_table_checks(),
        Suite::Engines => engine_checks(),
        Suite::Properties => property_checks(budget),
    };
    checks
        .into_iter()
        .map(|(name, f)| {
            let start = Instant::now();
            let outcome = f();
            CheckResult { name, outcome, millis: start.elapsed().as_millis() }
        })
        .collect()
}

fn check(name: &str, f: impl Fn() -> Result<(), String> + 'static) -> Check {
    (name.to_string(), Box::new(f))
}

fn family_pair(family: &'static str) -> Result<CompatiblePair, String> {
    CompatiblePair::from_invertible(family_quiver(family).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())
}

/// The alternating exchange walks reproduce the printed expansions and
/// return to the initial cluster with the expected period.
fn paper_table_checks() -> Vec<Check> {
    let walks: [(&'static str, &'static [tables::Terms]); 3] = [
        ("a2", tables::A2_WALK),
        ("c2", tables::C2_WALK),
        ("g2", tables::G2_WALK),
    ];
    let mut out = Vec::new();
    for (family, data) in walks {
        out.push(check(&format!("{family}-printed-expansions"), move || {
            let pair = family_pair(family)?;
            let mut seed = QuantumSeed::initial(pair.clone());
            for (t, terms) in data.iter().enumerate() {
                let k = t % 2;
                seed = seed.mutated(k).map_err(|e| e.to_string())?;
                let expect = tables::element(pair.form(), terms);
                if seed.var(k) != &expect {
                    return Err(format!("step {} differs from the printed table", t + 1));
                }
            }
            Ok(())
        }));
    }
    out.push(check("rank4-printed-expansions", || {
        let pair = family_pair("rank4")?;
        for &(walk, slot, terms) in tables::RANK4_VARS {
            let var = variable_by_label(&pair, slot, walk).map_err(|e| e.to_string())?;
            if var != tables::element(pair.form(), terms) {
                return Err(format!("variable at walk {walk:?} differs"));
            }
        }
        Ok(())
    }));
    out
}

/// Count-table expansion, mutation walks, closed forms, and the
/// reflection compatibility check agree wherever they overlap.
fn engine_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for family in ["a2", "c2", "g2", "rank4"] {
        out.push(check(&format!("{family}-character-equals-mutation"), move || {
            let quiver = family_quiver(family).map_err(|e| e.to_string())?;
            let pair = family_pair(family)?;
            let ctx = RootContext::new(&quiver);
            for name in rep_names(family, 0).map_err(|e| e.to_string())? {
                let seq = rep_label_sequence(family, &name).map_err(|e| e.to_string())?;
                let counts = recursion_counts(&quiver, &seq).map_err(|e| e.to_string())?;
                let expanded =
                    cc_expand(&ctx, pair.form(), &counts).map_err(|e| e.to_string())?;
                let walked = variable_by_label(&pair, *seq.last().unwrap(), &seq)
                    .map_err(|e| e.to_string())?;
                if expanded != walked {
                    return Err(format!("module {name} disagrees between engines"));
                }
            }
            Ok(())
        }));
    }
    out.push(check("kronecker-closed-forms-equal-mutation", || {
        let pair = family_pair("kronecker")?;
        for n in 0..=4i64 {
            for (side, label) in [
                (KroneckerSide::Preprojective, -n),
                (KroneckerSide::Preinjective, n + 3),
            ] {
                let (walk, slot) = rank2_variable_walk(label);
                let var =
                    variable_by_label(&pair, slot, &walk).map_err(|e| e.to_string())?;
                if kronecker_closed_form(n, side) != var {
                    return Err(format!("series member {label} differs"));
                }
            }
        }
        Ok(())
    }));
    for family in ["a2", "c2", "g2"] {
        out.push(check(&format!("{family}-reflection-compatibility"), move || {
            let quiver = family_quiver(family).map_err(|e| e.to_string())?;
            for name in rep_names(family, 0).map_err(|e| e.to_string())? {
                let seq = rep_label_sequence(family, &name).map_err(|e| e.to_string())?;
                for i in 0..2usize {
                    let counts_n =
                        recursion_counts(&quiver, &seq).map_err(|e| e.to_string())?;
                    let unit: Vec<i64> =
                        (0..2).map(|t| if t == i { 1 } else { 0 }).collect();
                    if counts_n.class == unit {
                        continue; // the simple at i is killed by this reflection
                    }
                    let mutated = quiver.mutated(i);
                    let reflected_seq: Vec<usize> = if seq[0] == i {
                        seq[1..].to_vec()
                    } else {
                        std::iter::once(i).chain(seq.iter().copied()).collect()
                    };
                    let counts_sin = recursion_counts(&mutated, &reflected_seq)
                        .map_err(|e| e.to_string())?;
                    match cc_verify_mutation(&quiver, i, &counts_n, &counts_sin) {
                        Ok(true) => {}
                        Ok(false) => {
                            return Err(format!(
                                "module {name}, direction {}: engines disagree",
                                i + 1
                            ))
                        }
                        Err(e) => return Err(e.to_string()),
                    }
                }
            }
            Ok(())
        }));
    }
    out.push(check("reflection-compatibility-detects-errors", || {
        let quiver = family_quiver("a2").map_err(|e| e.to_string())?;
        let n_table = CountTable::simple(2, 1, CountMode::Normalized);
        let wrong = CountTable::simple(2, 1, CountMode::Normalized);
        match cc_verify_mutation(&quiver, 0, &n_table, &wrong) {
            Ok(false) => Ok(()),
            Ok(true) => Err("a wrong table was accepted".into()),
            Err(e) => Err(e.to_string()),
        }
    }));
    out
}

/// Randomized structural checks; `budget` is the number of random trials
/// per check. A zero budget runs nothing.
fn property_checks(budget: u64) -> Vec<Check> {
    if budget == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    out.push(check("random-walks-stay-laurent-and-reverse", move || {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let families = ["a2", "c2", "g2", "kronecker", "rank4"];
        for trial in 0..budget {
            let family = families[rng.random_range(0..families.len())];
            let pair = family_pair(family)?;
            let initial = QuantumSeed::initial(pair.clone());
            // Non-backtracking walks on wider quivers leave finite type, where
            // variable sizes grow combinatorially with walk length; keep those
            // walks shorter so a trial stays well under a second.
            let cap = if pair.mutable() > 2 { 4 } else { 6 };
            let len = rng.random_range(1..=cap);
            let mut seq = Vec::with_capacity(len);
            let mut last = usize::MAX;
            for _ in 0..len {
                let mut k = rng.random_range(0..pair.mutable());
                while k == last {
                    k = rng.random_range(0..pair.mutable());
                }
                seq.push(k);
                last = k;
            }
            let walked = initial
                .mutated_along(&seq)
                .map_err(|e| format!("trial {trial} ({family}, {seq:?}): {e}"))?;
            let back: Vec<usize> = seq.iter().rev().copied().collect();
            let returned = walked
                .mutated_along(&back)
                .map_err(|e| format!("trial {trial} reverse: {e}"))?;
            if returned.vars() != initial.vars() {
                return Err(format!("trial {trial}: reversed walk does not return"));
            }
        }
        Ok(())
    }));
    out.push(check("random-flips-commute-with-matrix-mutation", move || {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..budget {
            let n = rng.random_range(2..=6usize);
            let mut t = Triangulation::fan(n);
            for _ in 0..20 {
                t = t.flip(rng.random_range(0..n)).map_err(|e| e.to_string())?;
            }
            let k = rng.random_range(0..n);
            let flipped = t.flip(k).map_err(|e| e.to_string())?;
            if b_from_triangulation(&flipped) != matrix_mutation(&b_from_triangulation(&t), k)
            {
                return Err(format!("trial {trial}: flip at {k} does not commute"));
            }
        }
        Ok(())
    }));
    out
}
