//! Fixture corpus and the cross-validation harness.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automata::eval_distance;
use crate::control::{decide_control, win_fixpoint, Budgets, Method};
use crate::error::{Error, Result};
use crate::flow::{reach_bfs, Capacity, Configuration};
use crate::gadgets::{
    example1, example2, example3, gen_gadget_k, gen_nfa_reduction, nfa_intersect_bruteforce,
    random_mdp, random_nfa, Nfa,
};
use crate::game::{solve_fixed_n, sweep, win_levels_fixed_n};
use crate::io::{
    read_json, to_json, Check, FixtureReport, MdpFile, NfaFile, Report, SfpFile, Status,
};
use crate::mdp::Mdp;
use crate::sfp::{
    build_simple_sfp_automaton, decide_ideal_inclusion, decide_simple_sfp, layered_max_flow,
    layered_min_cut, SfpInstance,
};
use crate::wqo::DownSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    /// `"yes"` or `"no"` when the answer is known independently.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    /// Largest population tried by sweeps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_n: Option<u64>,
    /// Skip the symbolic fixed point (too large for it).
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub sweep_only: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mdp: Option<MdpFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sfp: Option<SfpFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nfas: Option<Vec<NfaFile>>,
}

impl Fixture {
    fn blank(name: &str, expected: Option<bool>) -> Self {
        Fixture {
            name: name.to_string(),
            expected: expected.map(|e| if e { "yes" } else { "no" }.to_string()),
            max_n: None,
            sweep_only: false,
            mdp: None,
            sfp: None,
            nfas: None,
        }
    }

    pub fn for_mdp(name: &str, m: &Mdp, expected: Option<bool>) -> Self {
        Fixture {
            mdp: Some(MdpFile::from(m)),
            ..Self::blank(name, expected)
        }
    }

    pub fn for_sfp(name: &str, inst: &SfpInstance, expected: Option<bool>) -> Self {
        Fixture {
            sfp: Some(SfpFile::from(inst)),
            ..Self::blank(name, expected)
        }
    }

    pub fn for_nfas(name: &str, nfas: &[Nfa], expected: Option<bool>) -> Self {
        Fixture {
            nfas: Some(nfas.iter().map(NfaFile::from).collect()),
            ..Self::blank(name, expected)
        }
    }

    fn expected(&self) -> Result<Option<bool>> {
        match self.expected.as_deref() {
            None => Ok(None),
            Some("yes") => Ok(Some(true)),
            Some("no") => Ok(Some(false)),
            Some(x) => Err(Error::Format(format!("expected must be yes or no, found `{x}`"))),
        }
    }
}

/// The built-in corpus, generated deterministically from `seed`.
pub fn default_corpus(seed: u64) -> Result<Vec<Fixture>> {
    let mut out = vec![
        Fixture::for_mdp("example1", &example1(), Some(true)),
        Fixture {
            max_n: Some(8),
            sweep_only: true,
            ..Fixture::for_mdp("example2", &example2(), Some(false))
        },
        Fixture::for_mdp("example3", &example3(), Some(true)),
    ];
    for k in 1..=3 {
        out.push(Fixture::for_sfp(&format!("gadget_k{k}"), &gen_gadget_k(k)?, Some(true)));
    }
    let word = |p: &str, w: &[usize]| -> Result<Nfa> {
        Nfa::new(
            (0..=w.len()).map(|i| format!("{p}{i}")).collect(),
            vec!["x".into(), "y".into()],
            vec![0],
            vec![w.len()],
            w.iter().enumerate().map(|(i, &l)| (i, l, i + 1)).collect(),
        )
    };
    let star = |p: &str| Nfa::new(vec![format!("{p}0")], vec!["x".into(), "y".into()], vec![0], vec![0], vec![(0, 0, 0), (0, 1, 0)]);
    out.push(Fixture::for_nfas("nfa_disjoint", &[word("A", &[0])?, word("B", &[1, 1])?], Some(false)));
    out.push(Fixture::for_nfas("nfa_universal", &[star("A")?, star("B")?], Some(true)));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..4 {
        let n = rng.gen_range(2..=4);
        let actions = rng.gen_range(1..=2);
        let m = random_mdp(&mut rng, n, actions)?;
        out.push(Fixture {
            max_n: Some(4),
            ..Fixture::for_mdp(&format!("random_mdp_{i}"), &m, None)
        });
    }
    for i in 0..4 {
        let (na, nb) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = random_nfa(&mut rng, "A", na, 2)?;
        let b = random_nfa(&mut rng, "B", nb, 2)?;
        out.push(Fixture::for_nfas(&format!("random_nfa_{i}"), &[a, b], None));
    }
    Ok(out)
}

/// Writes the built-in corpus as one JSON file per fixture.
pub fn write_corpus(dir: &Path, seed: u64) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Format(format!("{}: {e}", dir.display())))?;
    let mut paths = Vec::new();
    for f in default_corpus(seed)? {
        let p = dir.join(format!("{}.json", f.name));
        std::fs::write(&p, to_json(&f) + "\n").map_err(|e| Error::Format(format!("{}: {e}", p.display())))?;
        paths.push(p);
    }
    Ok(paths)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusConfig {
    pub dir: PathBuf,
    pub seed: u64,
    pub budgets: Budgets,
}

impl CorpusConfig {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CorpusConfig {
            dir: dir.into(),
            seed: 0,
            budgets: Budgets::default(),
        }
    }
}

fn check(name: &str, outcome: Result<std::result::Result<String, String>>) -> Check {
    let (status, details) = match outcome {
        Ok(Ok(d)) => (Status::Pass, d),
        Ok(Err(d)) => (Status::Fail, d),
        Err(e) if e.is_resource() => (Status::Resource, e.to_string()),
        Err(e) => (Status::Fail, e.to_string()),
    };
    Check {
        name: name.to_string(),
        status,
        details,
    }
}

fn agree(what: &str, got: bool, expected: Option<bool>) -> std::result::Result<String, String> {
    match expected {
        Some(e) if e != got => Err(format!("{what} = {got}, expected {e}")),
        _ => Ok(format!("{what} = {got}")),
    }
}

fn mdp_checks(f: &Fixture, m: &Mdp, cfg: &CorpusConfig) -> Result<Vec<Check>> {
    let expected = f.expected()?;
    let max_n = f.max_n.unwrap_or(4);
    let b = &cfg.budgets;
    let mut checks = Vec::new();

    let mut fixpoint = None;
    if !f.sweep_only {
        let fp = win_fixpoint(m, b);
        let verdict = decide_control(m, Method::Fixpoint, b);
        checks.push(check(
            "fixpoint",
            verdict.map(|v| {
                fixpoint = Some(v.answer);
                agree("fixpoint", v.answer, expected)
            }),
        ));
        if m.num_states() <= 5 {
            checks.push(check(
                "levels",
                fp.and_then(|fp| {
                    for n in 0..=3 {
                        let games = win_levels_fixed_n(m, n, fp.index(), b.arena)?;
                        for (i, level) in fp.levels.iter().enumerate() {
                            let symbolic = Configuration::all_with_total(m.num_states(), n)
                                .filter(|c| level.contains(&c.0))
                                .collect();
                            if games[i] != symbolic {
                                return Ok(Err(format!("Win^{i} differs at n = {n}")));
                            }
                        }
                        for w in fp.levels.windows(2) {
                            if !w[1].is_subset(&w[0])? {
                                return Ok(Err("levels are not decreasing".into()));
                            }
                        }
                    }
                    Ok(Ok(format!("{} levels agree for n ≤ 3", fp.levels.len())))
                }),
            ));
        }
    }

    checks.push(check(
        "sweep",
        sweep(m, max_n, b.arena).map(|found| {
            let reference = fixpoint.or(expected);
            match (found, reference) {
                (Some(n), Some(true)) => Err(format!("lost at n = {n} on a yes instance")),
                (None, Some(false)) => Err(format!("no failure up to n = {max_n} on a no instance")),
                (Some(n), _) => Ok(format!("first failure at n = {n}")),
                (None, _) => Ok(format!("won for all n ≤ {max_n}")),
            }
        }),
    ));

    checks.push(check(
        "monotone",
        (1..=max_n.min(5))
            .map(|n| solve_fixed_n(m, n, b.arena))
            .collect::<Result<Vec<bool>>>()
            .map(|wins| {
                if wins.windows(2).any(|w| !w[0] && w[1]) {
                    Err(format!("not monotone: {wins:?}"))
                } else {
                    Ok(format!("{wins:?}"))
                }
            }),
    ));
    Ok(checks)
}

fn random_word<R: Rng>(rng: &mut R, letters: usize) -> Vec<usize> {
    if letters == 0 {
        return Vec::new();
    }
    let len = rng.gen_range(0..=5);
    (0..len).map(|_| rng.gen_range(0..letters)).collect()
}

fn sfp_checks(f: &Fixture, inst: &SfpInstance, cfg: &CorpusConfig) -> Result<Vec<Check>> {
    let expected = f.expected()?;
    let max_n = f.max_n.unwrap_or(6);
    let mut checks = Vec::new();
    let simple = decide_simple_sfp(inst);
    let answer = simple.as_ref().ok().copied();
    checks.push(check("simple-sfp", simple.map(|v| agree("simple-sfp", v, expected))));
    if let Some(answer) = answer {
        checks.push(check(
            "ideal-inclusion",
            decide_ideal_inclusion(inst.source(), inst.capacities(), inst.target())
                .map(|v| agree("ideal-inclusion", v, Some(answer))),
        ));
        let target = DownSet::ideal(inst.target().clone());
        let s = inst.simple_source()?;
        checks.push(check(
            "populations",
            (|| {
                for n in 1..=max_n {
                    let c = Configuration::unit(inst.num_states(), s, n);
                    let ok = reach_bfs(&c, inst.capacities(), &target)?.is_some();
                    if !ok {
                        return Ok(if answer {
                            Err(format!("yes instance fails at n = {n}"))
                        } else {
                            Ok(format!("fails at n = {n}"))
                        });
                    }
                }
                Ok(if answer {
                    Ok(format!("reaches for all n ≤ {max_n}"))
                } else {
                    Err(format!("no instance reaches for all n ≤ {max_n}"))
                })
            })(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    checks.push(check(
        "max-flow",
        build_simple_sfp_automaton(inst).map(|a| {
            for _ in 0..20 {
                let w = random_word(&mut rng, inst.capacities().len());
                let caps: Vec<&Capacity> = w.iter().map(|&i| &inst.capacities()[i]).collect();
                let flow = layered_max_flow(inst.source().entries(), &caps, inst.target().entries());
                let value = eval_distance(&a, &w).expect("word over the alphabet");
                if value != flow {
                    return Err(format!("word {w:?}: automaton {value}, max flow {flow}"));
                }
                if inst.num_states() <= 8 {
                    let cut = layered_min_cut(inst.source().entries(), &caps, inst.target().entries());
                    if cut != flow {
                        return Err(format!("word {w:?}: min cut {cut}, max flow {flow}"));
                    }
                }
            }
            Ok("20 random words agree".to_string())
        }),
    ));
    Ok(checks)
}

fn nfa_checks(f: &Fixture, nfas: &[Nfa]) -> Result<Vec<Check>> {
    let expected = f.expected()?;
    let mut checks = Vec::new();
    let brute = nfa_intersect_bruteforce(nfas)?;
    checks.push(check("bruteforce", Ok(agree("intersection nonempty", brute, expected))));
    let inst = gen_nfa_reduction(nfas)?;
    checks.push(check(
        "reduction",
        decide_simple_sfp(&inst).map(|v| agree("reduction", v, Some(brute))),
    ));
    let target = DownSet::ideal(inst.target().clone());
    let reach = |n: u64| -> Result<bool> {
        let c = Configuration::unit(inst.num_states(), 0, n);
        Ok(reach_bfs(&c, inst.capacities(), &target)?.is_some())
    };
    let k = nfas.len() as u64;
    checks.push(check(
        "certificate",
        (|| {
            if brute {
                for n in 1..=3 {
                    if !reach(n)? {
                        return Ok(Err(format!("nonempty intersection but n = {n} fails")));
                    }
                }
                Ok(Ok("reaches for n ≤ 3".to_string()))
            } else if reach(k)? {
                Ok(Err(format!("empty intersection but n = {k} reaches")))
            } else {
                Ok(Ok(format!("fails at n = {k}")))
            }
        })(),
    ));
    Ok(checks)
}

/// Runs one fixture through every applicable pipeline.
pub fn run_fixture(f: &Fixture, cfg: &CorpusConfig) -> FixtureReport {
    let outcome = (|| -> Result<Vec<Check>> {
        match (&f.mdp, &f.sfp, &f.nfas) {
            (Some(m), None, None) => mdp_checks(f, &m.to_mdp()?, cfg),
            (None, Some(s), None) => sfp_checks(f, &s.to_instance()?, cfg),
            (None, None, Some(n)) => {
                let nfas = n.iter().map(NfaFile::to_nfa).collect::<Result<Vec<_>>>()?;
                nfa_checks(f, &nfas)
            }
            _ => Err(Error::Format("a fixture holds exactly one of mdp, sfp, nfas".into())),
        }
    })();
    FixtureReport {
        name: f.name.clone(),
        checks: outcome.unwrap_or_else(|e| vec![check("load", Err(e))]),
    }
}

/// Runs every `*.json` fixture of the corpus directory, in name order.
pub fn run_corpus(cfg: &CorpusConfig) -> Result<Report> {
    let entries = std::fs::read_dir(&cfg.dir)
        .map_err(|e| Error::Format(format!("{}: {e}", cfg.dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut report = Report::default();
    for p in paths {
        let fr = match read_json::<Fixture>(&p) {
            Ok(f) => run_fixture(&f, cfg),
            Err(e) => FixtureReport {
                name: p.display().to_string(),
                checks: vec![check("load", Err(e))],
            },
        };
        report.fixtures.push(fr);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let a: Vec<String> = default_corpus(7).unwrap().iter().map(to_json).collect();
        let b: Vec<String> = default_corpus(7).unwrap().iter().map(to_json).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_corpus_is_green() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_corpus(&CorpusConfig::new(dir.path())).unwrap();
        assert!(report.fixtures.is_empty());
        assert_eq!(report.disagreements(), 0);
    }

    #[test]
    fn missing_directory_is_an_error() {
        assert!(run_corpus(&CorpusConfig::new("/nonexistent/corpus")).is_err());
    }

    #[test]
    fn corrupted_fixture_is_red() {
        let mut f = Fixture::for_sfp("gadget", &gen_gadget_k(1).unwrap(), Some(false));
        let report = run_fixture(&f, &CorpusConfig::new("."));
        assert!(report.checks.iter().any(|c| c.status == Status::Fail));
        f.expected = Some("yes".into());
        let report = run_fixture(&f, &CorpusConfig::new("."));
        assert!(report.checks.iter().all(|c| c.status == Status::Pass), "{report:?}");
    }
}
