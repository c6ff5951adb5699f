//! JSON file formats.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::automata::DistanceAutomaton;
use crate::control::Verdict;
use crate::error::{Error, Result};
use crate::flow::Capacity;
use crate::gadgets::Nfa;
use crate::mdp::Mdp;
use crate::sfp::SfpInstance;
use crate::wqo::{DownSet, ExtNat, ExtVec, Fin, Omega};

fn position(names: &[String], x: &str) -> Result<usize> {
    names
        .iter()
        .position(|s| s == x)
        .ok_or_else(|| Error::UnknownState(x.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DownSetFile {
    pub dim: usize,
    pub generators: Vec<Vec<ExtNat>>,
}

impl From<&DownSet> for DownSetFile {
    fn from(d: &DownSet) -> Self {
        DownSetFile {
            dim: d.dim(),
            generators: d.generators().iter().map(|g| g.0.clone()).collect(),
        }
    }
}

impl DownSetFile {
    pub fn to_downset(&self) -> Result<DownSet> {
        DownSet::canonicalize(self.dim, self.generators.iter().cloned().map(ExtVec).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub from: String,
    pub to: String,
    pub cap: ExtNat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityFile {
    pub name: String,
    pub edges: Vec<EdgeEntry>,
}

impl CapacityFile {
    pub fn from_capacity(name: &str, c: &Capacity, states: &[String]) -> Self {
        let n = c.states();
        let edges = (0..n)
            .flat_map(|p| c.successors(p).map(move |q| (p, q)))
            .map(|(p, q)| EdgeEntry {
                from: states[p].clone(),
                to: states[q].clone(),
                cap: c.get(p, q),
            })
            .collect();
        CapacityFile {
            name: name.to_string(),
            edges,
        }
    }

    pub fn to_capacity(&self, states: &[String]) -> Result<Capacity> {
        let mut c = Capacity::zero(states.len());
        for e in &self.edges {
            c.set(position(states, &e.from)?, position(states, &e.to)?, e.cap);
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdpTransition {
    pub from: String,
    pub action: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MdpFile {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub transitions: Vec<MdpTransition>,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub sink_completion: bool,
}

impl From<&Mdp> for MdpFile {
    fn from(m: &Mdp) -> Self {
        MdpFile {
            states: m.states().to_vec(),
            actions: m.actions().to_vec(),
            transitions: m
                .transitions()
                .into_iter()
                .map(|(p, a, q)| MdpTransition {
                    from: m.states()[p].clone(),
                    action: m.actions()[a].clone(),
                    to: m.states()[q].clone(),
                })
                .collect(),
            source: m.states()[m.source()].clone(),
            target: m.states()[m.target()].clone(),
            sink_completion: false,
        }
    }
}

impl MdpFile {
    pub fn to_mdp(&self) -> Result<Mdp> {
        let t: Vec<(String, String, String)> = self
            .transitions
            .iter()
            .map(|t| (t.from.clone(), t.action.clone(), t.to.clone()))
            .collect();
        Mdp::new(
            self.states.clone(),
            self.actions.clone(),
            &t,
            &self.source,
            &self.target,
            self.sink_completion,
        )
    }
}

/// Ideal generators as `state → value`; absent states are 0.
pub type IdealMap = BTreeMap<String, ExtNat>;

fn ideal_to_map(v: &ExtVec, states: &[String]) -> IdealMap {
    v.entries()
        .iter()
        .zip(states)
        .filter(|(e, _)| !e.is_zero())
        .map(|(e, s)| (s.clone(), *e))
        .collect()
}

fn ideal_from_map(m: &IdealMap, states: &[String]) -> Result<ExtVec> {
    let mut v = ExtVec::zeros(states.len());
    for (s, &e) in m {
        v.0[position(states, s)?] = e;
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SfpFile {
    pub states: Vec<String>,
    pub capacities: Vec<CapacityFile>,
    pub source_ideal: IdealMap,
    pub target_ideal: IdealMap,
}

impl From<&SfpInstance> for SfpFile {
    fn from(inst: &SfpInstance) -> Self {
        let states = inst.states();
        SfpFile {
            states: states.to_vec(),
            capacities: inst
                .capacity_names()
                .iter()
                .zip(inst.capacities())
                .map(|(n, c)| CapacityFile::from_capacity(n, c, states))
                .collect(),
            source_ideal: ideal_to_map(inst.source(), states),
            target_ideal: ideal_to_map(inst.target(), states),
        }
    }
}

impl SfpFile {
    pub fn to_instance(&self) -> Result<SfpInstance> {
        let caps = self
            .capacities
            .iter()
            .map(|c| Ok((c.name.clone(), c.to_capacity(&self.states)?)))
            .collect::<Result<Vec<_>>>()?;
        SfpInstance::new(
            self.states.clone(),
            caps,
            ideal_from_map(&self.source_ideal, &self.states)?,
            ideal_from_map(&self.target_ideal, &self.states)?,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonTransition {
    pub from: String,
    pub letter: String,
    pub cost: ExtNat,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonFile {
    pub states: Vec<String>,
    pub initial: String,
    pub alphabet: Vec<String>,
    pub transitions: Vec<AutomatonTransition>,
    /// Absent states have no final cost (ω).
    pub final_costs: BTreeMap<String, ExtNat>,
}

impl From<&DistanceAutomaton> for AutomatonFile {
    fn from(a: &DistanceAutomaton) -> Self {
        let st = a.states();
        AutomatonFile {
            states: st.to_vec(),
            initial: st[a.initial()].clone(),
            alphabet: a.alphabet().to_vec(),
            transitions: a
                .transitions()
                .into_iter()
                .map(|(p, l, c, q)| AutomatonTransition {
                    from: st[p].clone(),
                    letter: a.alphabet()[l].clone(),
                    cost: c,
                    to: st[q].clone(),
                })
                .collect(),
            final_costs: a
                .final_costs()
                .iter()
                .zip(st)
                .filter(|(c, _)| !c.is_omega())
                .map(|(c, s)| (s.clone(), *c))
                .collect(),
        }
    }
}

impl AutomatonFile {
    pub fn to_automaton(&self) -> Result<DistanceAutomaton> {
        let mut a = DistanceAutomaton::new(
            self.states.clone(),
            self.alphabet.clone(),
            position(&self.states, &self.initial)?,
        )?;
        for t in &self.transitions {
            let l = a
                .letter_index(&t.letter)
                .ok_or_else(|| Error::Format(format!("unknown letter `{}`", t.letter)))?;
            a.add_transition(position(&self.states, &t.from)?, l, t.cost, position(&self.states, &t.to)?)?;
        }
        for (s, &c) in &self.final_costs {
            a.set_final(position(&self.states, s)?, c);
        }
        Ok(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NfaTransition {
    pub from: String,
    pub letter: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NfaFile {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial: Vec<String>,
    #[serde(rename = "final")]
    pub finals: Vec<String>,
    pub transitions: Vec<NfaTransition>,
}

impl From<&Nfa> for NfaFile {
    fn from(a: &Nfa) -> Self {
        let st = &a.states;
        NfaFile {
            states: st.clone(),
            alphabet: a.alphabet.clone(),
            initial: a.initial.iter().map(|&q| st[q].clone()).collect(),
            finals: a.finals.iter().map(|&q| st[q].clone()).collect(),
            transitions: a
                .transitions
                .iter()
                .map(|&(p, l, q)| NfaTransition {
                    from: st[p].clone(),
                    letter: a.alphabet[l].clone(),
                    to: st[q].clone(),
                })
                .collect(),
        }
    }
}

impl NfaFile {
    pub fn to_nfa(&self) -> Result<Nfa> {
        let st = &self.states;
        let names = |xs: &[String]| xs.iter().map(|x| position(st, x)).collect::<Result<Vec<_>>>();
        let transitions = self
            .transitions
            .iter()
            .map(|t| {
                let l = self
                    .alphabet
                    .iter()
                    .position(|a| *a == t.letter)
                    .ok_or_else(|| Error::Format(format!("unknown letter `{}`", t.letter)))?;
                Ok((position(st, &t.from)?, l, position(st, &t.to)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Nfa::new(
            st.clone(),
            self.alphabet.clone(),
            names(&self.initial)?,
            names(&self.finals)?,
            transitions,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictFile {
    pub answer: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fixpoint_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub win_downset: Option<Vec<IdealMap>>,
    #[serde(default)]
    pub bounded_evidence: bool,
    #[serde(default)]
    pub level_sizes: Vec<usize>,
    pub timings: Timings,
}

impl VerdictFile {
    pub fn new(v: &Verdict, m: &Mdp) -> Self {
        VerdictFile {
            answer: if v.answer { "yes" } else { "no" }.to_string(),
            method: v.method.name().to_string(),
            witness_n: v.witness_n,
            fixpoint_index: v.fixpoint_index,
            win_downset: v
                .win_downset
                .as_ref()
                .map(|d| d.generators().iter().map(|g| ideal_to_map(g, m.states())).collect()),
            bounded_evidence: v.bounded_evidence,
            level_sizes: v.level_sizes.clone(),
            timings: Timings { total_ms: v.millis },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Resource,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub name: String,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub fixtures: Vec<FixtureReport>,
}

impl Report {
    pub fn disagreements(&self) -> usize {
        self.checks().filter(|c| c.status == Status::Fail).count()
    }

    pub fn resource_failures(&self) -> usize {
        self.checks().filter(|c| c.status == Status::Resource).count()
    }

    fn checks(&self) -> impl Iterator<Item = &Check> {
        self.fixtures.iter().flat_map(|f| &f.checks)
    }
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("file types serialize")
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    from_json(&text)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value) + "\n")
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// Parses an extended natural from text: a number, `omega` or `ω`.
pub fn parse_extnat(s: &str) -> Result<ExtNat> {
    match s.trim() {
        "omega" | "ω" | "w" => Ok(Omega),
        t => t
            .parse::<u64>()
            .map(Fin)
            .map_err(|_| Error::Format(format!("not an extended natural: `{s}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{example2, gen_gadget_k};
    use crate::wqo::ev;

    #[test]
    fn mdp_roundtrip_keeps_the_sink() {
        let m = example2();
        let text = to_json(&MdpFile::from(&m));
        assert!(text.contains("⊥"));
        let back: MdpFile = from_json(&text).unwrap();
        assert_eq!(back.to_mdp().unwrap(), m);
    }

    #[test]
    fn sfp_roundtrip() {
        let g = gen_gadget_k(2).unwrap();
        let text = to_json(&SfpFile::from(&g));
        assert!(text.contains("\"omega\""));
        let back: SfpFile = from_json(&text).unwrap();
        assert_eq!(back.to_instance().unwrap(), g);
        assert_eq!(to_json(&SfpFile::from(&gen_gadget_k(2).unwrap())), text);
    }

    #[test]
    fn automaton_roundtrip() {
        let mut a = DistanceAutomaton::with_sizes(2, 1, 0).unwrap();
        a.add_transition(0, 0, Fin(1), 1).unwrap();
        a.add_transition(1, 0, Omega, 0).unwrap();
        a.set_final(1, Fin(0));
        let back: AutomatonFile = from_json(&to_json(&AutomatonFile::from(&a))).unwrap();
        assert_eq!(back.to_automaton().unwrap(), a);
    }

    #[test]
    fn nfa_and_downset_roundtrip() {
        let n = Nfa::new(
            vec!["p".into(), "q".into()],
            vec!["x".into()],
            vec![0],
            vec![1],
            vec![(0, 0, 1)],
        )
        .unwrap();
        let text = to_json(&NfaFile::from(&n));
        assert!(text.contains("\"final\""));
        assert_eq!(from_json::<NfaFile>(&text).unwrap().to_nfa().unwrap(), n);

        let d = DownSet::canonicalize(2, vec![ev(&[Omega, Fin(1)]), ev(&[Fin(2), Omega])]).unwrap();
        let f: DownSetFile = from_json(&to_json(&DownSetFile::from(&d))).unwrap();
        assert_eq!(f.to_downset().unwrap(), d);
    }

    #[test]
    fn bad_input_is_a_format_error() {
        assert!(matches!(from_json::<MdpFile>("{"), Err(Error::Format(_))));
        assert!(matches!(parse_extnat("x"), Err(Error::Format(_))));
        assert_eq!(parse_extnat("omega").unwrap(), Omega);
        assert_eq!(parse_extnat("4").unwrap(), Fin(4));
    }
}
