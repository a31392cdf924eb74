use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::corpus::Corpus;
use crate::algebra::{Direction, GroupMap, GroupTower};
use crate::axioms::{
    check_controlled_additivity, check_excision_and_dimension, check_exactness, check_strong_excision, collar_excision,
    random_excision, uniqueness_cross_check, validate_cells, ExcisionInstance, Pipeline, TheoryHandle,
    UniquenessInstance, ValidationError,
};
use crate::complexes::standard::{circle, circle_power_map, random_simplicial_complex};
use crate::complexes::{Cell, ChainMap, Pair};
use crate::doc::{Instance, InstanceDocument};
use crate::exec::{self, Strategy};
use crate::ideals::{duality_check, random_set, PairedIdeals};
use crate::kdirect::{check_strictness, chi_check, exchange_iso_check, random_exchange_samples, random_pattern, strictness_witnesses};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Duality,
    Chi,
    Axioms,
    Exchange,
    Uniqueness,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Chi => "chi",
            Suite::Axioms => "axioms",
            Suite::Exchange => "exchange",
            Suite::Uniqueness => "uniqueness",
            Suite::All => "all",
        }
    }

    /// Trials used when `--trials` is not given.
    pub fn default_trials(self) -> Option<usize> {
        match self {
            Suite::Duality => Some(1000),
            Suite::Chi => Some(500),
            Suite::Axioms => Some(20),
            Suite::Exchange => Some(20),
            Suite::Uniqueness => Some(10),
            Suite::All => None,
        }
    }
}

/// Verdict of one named check within a suite.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    pub detail: Value,
    /// Smallest failing input found, rendered for the report.
    pub counterexample: Option<String>,
    pub warning: Option<String>,
}

impl Check {
    fn new(name: &str, passed: bool, trials: usize, detail: Value) -> Check {
        Check { name: name.into(), passed, trials, detail, counterexample: None, warning: None }
    }

    fn error(name: &str, message: String) -> Check {
        Check { counterexample: Some(message.clone()), ..Check::new(name, false, 0, json!({ "error": message })) }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "trials": self.trials,
            "detail": self.detail,
            "counterexample": self.counterexample,
            "warning": self.warning,
        })
    }
}

/// Independent generator for trial `k` of the check `label`.
fn rng_for(seed: u64, label: &str, k: u64) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h);
    rng.set_stream(k);
    rng
}

/// The failing input with the shortest rendering.
fn smallest(failures: impl IntoIterator<Item = String>) -> Option<String> {
    failures.into_iter().min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
}

fn from_failures(name: &str, trials: usize, failures: Vec<String>, detail: Value) -> Check {
    let mut c = Check::new(name, failures.is_empty(), trials, detail);
    c.detail["failures"] = json!(failures.len());
    c.counterexample = smallest(failures);
    c
}

pub fn run(suite: Suite, seed: u64, trials: Option<usize>, corpus: &Corpus) -> Vec<Check> {
    let t = |s: Suite| trials.or(s.default_trials()).unwrap_or(0);
    match suite {
        Suite::Duality => duality(seed, t(suite)),
        Suite::Chi => chi(seed, t(suite), corpus),
        Suite::Axioms => axioms(seed, t(suite), corpus),
        Suite::Exchange => exchange(seed, t(suite)),
        Suite::Uniqueness => uniqueness(seed, t(suite), corpus),
        Suite::All => [Suite::Duality, Suite::Chi, Suite::Axioms, Suite::Exchange, Suite::Uniqueness]
            .into_iter()
            .flat_map(|s| run(s, seed, trials, corpus))
            .collect(),
    }
}

fn instances() -> [(&'static str, PairedIdeals); 2] {
    [("horizontal", PairedIdeals::horizontal()), ("vertical", PairedIdeals::vertical())]
}

pub fn duality(seed: u64, trials: usize) -> Vec<Check> {
    instances()
        .into_iter()
        .map(|(label, pair)| {
            let name = format!("duality/{label}");
            let outcomes = exec::map_range(Strategy::default(), trials, |k| {
                let mut rng = rng_for(seed, &name, k as u64);
                let s = random_set(&mut rng, pair.orientation());
                match duality_check(&s, &pair, 8, &mut rng) {
                    Ok(r) if r.passed() => Ok(r.generators_tested),
                    Ok(r) => Err(format!("{s}: kappa side {}, nubar side {}, witness {:?}", r.kappa_side, r.nubar_side, r.witness_failure)),
                    Err(e) => Err(format!("{s}: {e}")),
                }
            });
            let generators: usize = outcomes.iter().filter_map(|o| o.as_ref().ok()).sum();
            let failures = outcomes.into_iter().filter_map(Result::err).collect();
            from_failures(&name, trials, failures, json!({ "generators_tested": generators }))
        })
        .collect()
}

pub fn chi(seed: u64, trials: usize, corpus: &Corpus) -> Vec<Check> {
    let mut checks: Vec<Check> = instances()
        .into_iter()
        .map(|(label, pair)| {
            let name = format!("chi/{label}");
            let outcomes = exec::map_range(Strategy::default(), trials, |k| {
                let mut rng = rng_for(seed, &name, k as u64);
                let g = random_pattern(&mut rng, &pair);
                match chi_check(&g, &pair) {
                    Ok(r) if r.agrees() => None,
                    Ok(r) => Some(format!("support {}: {r:?}", g.support())),
                    Err(e) => Some(format!("support {}: {e}", g.support())),
                }
            });
            let mut c = from_failures(&name, trials, outcomes.into_iter().flatten().collect(), json!({}));
            if trials == 0 {
                c.warning = Some(format!("{name}: no trials requested, pass is vacuous"));
            }
            c
        })
        .collect();

    checks.push(match check_strictness(&strictness_witnesses()) {
        Ok(r) => {
            let mut c = Check::new("chi/strictness", r.strict, 4, json!({ "membership": r.membership }));
            if !r.strict {
                c.counterexample = Some(format!("membership table {:?}", r.membership));
            }
            c
        }
        Err(e) => Check::error("chi/strictness", e.to_string()),
    });

    let mut failures = Vec::new();
    let mut n = 0;
    for d in corpus.of_kind("pattern") {
        n += 1;
        match d.build() {
            Ok(Instance::Pattern(g, pair)) => match chi_check(&g, &pair) {
                Ok(r) if r.agrees() => {}
                Ok(r) => failures.push(format!("{}: {r:?}", d.name())),
                Err(e) => failures.push(format!("{}: {e}", d.name())),
            },
            Ok(_) => unreachable!("pattern documents build patterns"),
            Err(e) => failures.push(format!("{}: {e}", d.name())),
        }
    }
    checks.push(from_failures("chi/corpus", n, failures, json!({})));
    checks
}

fn corpus_pairs(corpus: &Corpus) -> Result<Vec<(String, Pair)>, String> {
    let mut out = Vec::new();
    for d in corpus.of_kind("pair").chain(corpus.of_kind("complex")) {
        match d.build() {
            Ok(Instance::Pair(p)) => out.push((d.name().to_string(), p)),
            Ok(Instance::Complex(k)) => out.push((d.name().to_string(), Pair::absolute(k))),
            Ok(_) => {}
            Err(e) => return Err(format!("{}: {e}", d.name())),
        }
    }
    Ok(out)
}

/// A square whose 2-cell boundary is not a cycle: `∂∂f = 2w - 2v`.
pub fn corrupted_cells() -> Vec<Cell> {
    vec![
        Cell::vertex("v"),
        Cell::vertex("w"),
        Cell::new("e", 1, &[("w", 1), ("v", -1)]),
        Cell::new("g", 1, &[("w", 1), ("v", -1)]),
        Cell::new("f", 2, &[("e", 1), ("g", 1)]),
    ]
}

pub fn axioms(seed: u64, trials: usize, corpus: &Corpus) -> Vec<Check> {
    let pairs = match corpus_pairs(corpus) {
        Ok(p) => p,
        Err(e) => return vec![Check::error("axioms/corpus", e)],
    };
    let mut checks = Vec::new();

    let exact = exec::map(Strategy::default(), &pairs, |(name, p)| {
        let r = check_exactness(p, p.complex.dim_count() + 1);
        (!r.passed()).then(|| format!("{name}: {}", r.failures().join("; ")))
    });
    checks.push(from_failures("axioms/exactness", pairs.len(), exact.into_iter().flatten().collect(), json!({})));

    let mut inst: Vec<ExcisionInstance> = vec![collar_excision()];
    inst.extend(pairs.iter().map(|(name, p)| ExcisionInstance::trivial(name.clone(), p)));
    let mut rng = rng_for(seed, "axioms/excision", 0);
    inst.extend((0..trials).map(|k| random_excision(&mut rng, format!("random_{k}"), 60)));
    checks.push(match check_excision_and_dimension(&inst) {
        Ok(r) => {
            let mut f = r.failures();
            if !r.dimension {
                f.push("dimension axiom fails on the point".into());
            }
            from_failures("axioms/excision_and_dimension", inst.len(), f, json!({ "dimension": r.dimension }))
        }
        Err(e) => Check::error("axioms/excision_and_dimension", e.to_string()),
    });

    let strong = exec::map(Strategy::default(), &pairs, |(name, p)| match check_strong_excision(p) {
        Ok(r) if r.passed() => None,
        Ok(r) => Some(format!(
            "{name}: {}",
            r.degrees.iter().enumerate().map(|(n, d)| format!("H{n}: {} vs {} iso={}", d.0, d.1, d.2)).collect::<Vec<_>>().join(", ")
        )),
        Err(e) => Some(format!("{name}: {e}")),
    });
    checks.push(from_failures("axioms/strong_excision", pairs.len(), strong.into_iter().flatten().collect(), json!({})));

    let scattered: Vec<&InstanceDocument> = corpus.of_kind("scattered").collect();
    let additivity = exec::map(Strategy::default(), &scattered, |d| {
        let s = match d.build() {
            Ok(Instance::Scattered(s)) => s,
            Ok(_) => unreachable!("scattered documents build scattered instances"),
            Err(e) => return (vec![], Some(format!("{}: {e}", d.name()))),
        };
        let mut rng = rng_for(seed, d.name(), 0);
        let mut stages = Vec::new();
        for n in 0..s.component.dim_count() {
            match check_controlled_additivity(&s, n, &mut rng, 2, 20) {
                Ok(r) if r.passed() => stages.extend(r.samples.iter().map(|k| k.components)),
                Ok(r) => return (vec![], Some(format!("{} degree {n}: {r:?}", d.name()))),
                Err(e) => return (vec![], Some(format!("{} degree {n}: {e}", d.name()))),
            }
        }
        (stages, None)
    });
    let stages: Vec<usize> = additivity.iter().flat_map(|a| a.0.clone()).collect();
    checks.push(from_failures(
        "axioms/controlled_additivity",
        scattered.len(),
        additivity.into_iter().filter_map(|a| a.1).collect(),
        json!({ "stage_sizes": stages }),
    ));

    checks.push(match validate_cells(corrupted_cells()) {
        Err(ValidationError::Invalid(r)) => {
            let cells = r.cells();
            Check::new("axioms/corrupted_rejected", !cells.is_empty(), 1, json!({ "cells": cells, "diagnostics": r.to_string() }))
        }
        Err(ValidationError::Malformed(e)) => Check::error("axioms/corrupted_rejected", format!("rejected without cell diagnostics: {e}")),
        Ok(_) => Check::error("axioms/corrupted_rejected", "complex with nonzero boundary of boundary was accepted".into()),
    });
    checks
}

pub fn exchange(seed: u64, trials: usize) -> Vec<Check> {
    let tower = GroupTower::multiplication(2, Direction::Direct);
    let mut rng = rng_for(seed, "exchange/doubling", 0);
    let samples = random_exchange_samples(&tower, &mut rng, trials);
    vec![match exchange_iso_check(&tower, &samples, 12, &mut rng) {
        Ok(r) => {
            let mut c = Check::new(
                "exchange/doubling",
                r.passed(),
                trials,
                json!({
                    "well_defined": r.well_defined,
                    "injective": r.injective,
                    "inverse_recovered": r.inverse_recovered,
                    "max_shift": r.max_shift,
                    "window": r.window,
                }),
            );
            c.counterexample = smallest(r.failures);
            c
        }
        Err(e) => Check::error("exchange/doubling", e.to_string()),
    }]
}

pub fn uniqueness(seed: u64, trials: usize, corpus: &Corpus) -> Vec<Check> {
    let mut fixed = Vec::new();
    for d in corpus.of_kind("complex") {
        match d.build() {
            Ok(Instance::Complex(k)) => fixed.push(UniquenessInstance {
                name: d.name().to_string(),
                complex: k.clone(),
                maps: vec![("identity".into(), ChainMap::identity(k))],
            }),
            Ok(_) => {}
            Err(e) => return vec![Check::error("uniqueness/corpus", format!("{}: {e}", d.name()))],
        }
    }
    let s = Arc::new(circle());
    fixed.push(UniquenessInstance { name: "circle_double".into(), complex: s.clone(), maps: vec![("double".into(), circle_power_map(&s, 2))] });

    let mut rng = rng_for(seed, "uniqueness/random", 0);
    let random: Vec<UniquenessInstance> = (0..trials)
        .map(|k| {
            let k_complex = Arc::new(random_simplicial_complex(&mut rng, 200));
            UniquenessInstance {
                name: format!("random_{k} ({} cells)", k_complex.len()),
                complex: k_complex.clone(),
                maps: vec![("identity".into(), ChainMap::identity(k_complex))],
            }
        })
        .collect();

    let mut checks: Vec<Check> = [("uniqueness/corpus", fixed), ("uniqueness/random", random)]
        .into_iter()
        .map(|(name, insts)| match uniqueness_cross_check(&insts) {
            Ok(r) => {
                let failures = r
                    .entries
                    .iter()
                    .filter(|e| !e.passed())
                    .map(|e| {
                        let bad: Vec<String> = e
                            .degrees
                            .iter()
                            .filter(|d| !d.agrees())
                            .map(|d| format!("H{}: direct {} telescope {} dual {} steenrod {:?}", d.degree, d.direct, d.telescope, d.dual, d.steenrod.as_ref().map(|g| g.to_string())))
                            .chain(e.naturality.iter().filter(|n| !n.2).map(|n| format!("{} not natural in degree {}", n.0, n.1)))
                            .collect();
                        format!("{}: {}", e.name, bad.join("; "))
                    })
                    .collect();
                let cells: Vec<usize> = r.entries.iter().map(|e| e.cells).collect();
                from_failures(name, insts.len(), failures, json!({ "cells": cells }))
            }
            Err(e) => Check::error(name, e.to_string()),
        })
        .collect();

    let times_two = |p: Pipeline| -> Result<bool, String> {
        let f = circle_power_map(&s, 2);
        let g = TheoryHandle::new(p).induced(&f, 1).map_err(|e| e.to_string())?;
        Ok(g.matrix() == GroupMap::scalar(&g.source, 2).matrix())
    };
    checks.push(match (times_two(Pipeline::DirectCellular), times_two(Pipeline::TelescopeSteenrod)) {
        (Ok(a), Ok(b)) => {
            let mut c = Check::new("uniqueness/degree_two_map", a && b, 1, json!({ "direct": a, "telescope": b }));
            if !(a && b) {
                c.counterexample = Some("degree-2 circle map is not multiplication by 2 on H1".into());
            }
            c
        }
        (Err(e), _) | (_, Err(e)) => Check::error("uniqueness/degree_two_map", e),
    });
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let a = duality(5, 20);
        let b = duality(5, 20);
        assert_eq!(a.iter().map(|c| c.to_json()).collect::<Vec<_>>(), b.iter().map(|c| c.to_json()).collect::<Vec<_>>());
        assert!(a.iter().all(|c| c.passed));
    }

    #[test]
    fn zero_trials_warns() {
        let c = chi(1, 0, &Corpus::bundled());
        assert!(c.iter().all(|c| c.passed));
        assert!(c[0].warning.is_some());
    }

    #[test]
    fn corrupted_square_names_its_face() {
        let c = &axioms(0, 0, &Corpus::bundled());
        let r = c.iter().find(|c| c.name == "axioms/corrupted_rejected").unwrap();
        assert!(r.passed);
        assert_eq!(r.detail["cells"], json!(["f"]));
    }
}
