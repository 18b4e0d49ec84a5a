//! Contraction detection, nucleus computation, and Moore diagrams.
//!
//! The nucleus is computed as the restriction closure of the generators,
//! their inverses, and the identities, then repeatedly augmented with the
//! eventual (post-transient) restriction states of pairwise products until
//! stable. The result is a restriction-closed contracting set, not claimed
//! minimal; `is_minimal_on_cycles` reports which states any contracting set
//! must contain.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::{Element, Machine};

#[derive(Debug, Clone, Copy)]
pub struct NucleusCaps {
    pub max_states: usize,
    pub probe_depth: usize,
}

impl Default for NucleusCaps {
    fn default() -> Self {
        NucleusCaps {
            max_states: 256,
            probe_depth: 12,
        }
    }
}

/// Contraction certificate for one composable pair (g, h): every restriction
/// of g∘h by a path of length >= depth lies in the nucleus, verified
/// exhaustively up to `verified_to`.
#[derive(Debug, Clone)]
pub struct PairCertificate {
    pub g: Element,
    pub h: Element,
    pub depth: usize,
    pub verified_to: usize,
}

#[derive(Debug, Clone)]
pub struct Nucleus {
    /// Identities first (vertex order), then the rest by (name length, name).
    pub states: Vec<Element>,
    pub certificates: Vec<PairCertificate>,
}

impl Nucleus {
    pub fn contains(&self, g: Element) -> bool {
        self.states.contains(&g)
    }
}

/// States of the closure of `root` that recur at arbitrarily large
/// restriction depths: everything reachable from a cycle of the restriction
/// digraph.
fn eventual_states(machine: &Machine, root: Element, cap: usize) -> Result<Vec<Element>> {
    let closed = machine.closure(root, cap)?;
    let states = &closed.states;
    let index: HashMap<Element, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let n = states.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &s) in states.iter().enumerate() {
        let d = machine.domain(s);
        for &e in machine.graph().edges_from(d) {
            let (_, rest) = machine.step(s, e).expect("closure transition");
            succ[i].push(index[&rest]);
        }
    }
    // A state lies on a cycle iff it reaches itself in >= 1 step.
    let mut on_cycle = vec![false; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = succ[i].clone();
        while let Some(j) = stack.pop() {
            if j == i {
                on_cycle[i] = true;
                break;
            }
            if !seen[j] {
                seen[j] = true;
                stack.extend(succ[j].iter().copied());
            }
        }
    }
    // Everything reachable from a cycle state (including it) is eventual.
    let mut eventual = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&i| on_cycle[i]).collect();
    for &i in &stack {
        eventual[i] = true;
    }
    while let Some(i) = stack.pop() {
        for &j in &succ[i] {
            if !eventual[j] {
                eventual[j] = true;
                stack.push(j);
            }
        }
    }
    Ok(states
        .iter()
        .enumerate()
        .filter(|&(i, _)| eventual[i])
        .map(|(_, &s)| s)
        .collect())
}

fn ordered(machine: &Machine, set: &HashSet<Element>) -> Vec<Element> {
    let nv = machine.graph().vertex_count();
    let mut ids: Vec<Element> = set.iter().copied().filter(|&s| s.0 < nv).collect();
    ids.sort_unstable();
    let mut rest: Vec<(usize, String, Element)> = set
        .iter()
        .copied()
        .filter(|&s| s.0 >= nv)
        .map(|s| {
            let name = machine.name(s);
            (name.len(), name, s)
        })
        .collect();
    rest.sort();
    ids.into_iter().chain(rest.into_iter().map(|t| t.2)).collect()
}

pub fn compute_nucleus(machine: &Machine, caps: NucleusCaps) -> Result<Nucleus> {
    let mut set: HashSet<Element> = HashSet::new();
    let mut seeds = Vec::new();
    for v in 0..machine.graph().vertex_count() {
        seeds.push(machine.identity(v));
    }
    for g in machine.generators() {
        seeds.push(g);
        seeds.push(machine.inverse(g)?);
    }
    for s in seeds {
        for t in machine.closure(s, caps.max_states)?.states {
            set.insert(t);
        }
        if set.len() > caps.max_states {
            return Err(Error::NotContractingWithinCap(format!(
                "generator closure exceeds {} states",
                caps.max_states
            )));
        }
    }

    // Augment with eventual restriction states of pairwise products until
    // stable.
    loop {
        let current = ordered(machine, &set);
        let mut added = false;
        for &g in &current {
            for &h in &current {
                if machine.domain(g) != machine.codomain(h) {
                    continue;
                }
                let p = machine.compose(g, h)?;
                for s in eventual_states(machine, p, caps.max_states.max(1024))? {
                    if set.insert(s) {
                        added = true;
                        if set.len() > caps.max_states {
                            return Err(Error::NotContractingWithinCap(format!(
                                "nucleus exceeds {} states",
                                caps.max_states
                            )));
                        }
                    }
                }
            }
        }
        if !added {
            break;
        }
    }

    let states = ordered(machine, &set);

    // Certificates: for each composable pair, the depth past the transient
    // prefix of g∘h, verified out to the probe depth.
    let mut certificates = Vec::new();
    for &g in &states {
        for &h in &states {
            if machine.domain(g) != machine.codomain(h) {
                continue;
            }
            let p = machine.compose(g, h)?;
            let depth = transient_depth(machine, p, &set, caps.max_states.max(1024))?;
            let verified_to =
                verify_certificate(machine, p, &set, depth, caps.probe_depth)?;
            certificates.push(PairCertificate {
                g,
                h,
                depth,
                verified_to,
            });
        }
    }

    Ok(Nucleus {
        states,
        certificates,
    })
}

/// Smallest n such that every restriction of `root` by a path of length >= n
/// lies in `nucleus`. States outside the nucleus must form a DAG.
pub(crate) fn transient_depth(
    machine: &Machine,
    root: Element,
    nucleus: &HashSet<Element>,
    cap: usize,
) -> Result<usize> {
    if nucleus.contains(&root) {
        return Ok(0);
    }
    let closed = machine.closure(root, cap)?;
    let bad: Vec<Element> = closed
        .states
        .iter()
        .copied()
        .filter(|s| !nucleus.contains(s))
        .collect();
    let index: HashMap<Element, usize> = bad.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    // Longest path through the bad sub-digraph starting at root; cycles mean
    // the set does not contract.
    let mut memo: Vec<Option<usize>> = vec![None; bad.len()];
    let mut in_progress = vec![false; bad.len()];
    fn longest(
        machine: &Machine,
        bad: &[Element],
        index: &HashMap<Element, usize>,
        memo: &mut Vec<Option<usize>>,
        in_progress: &mut Vec<bool>,
        i: usize,
    ) -> Result<usize> {
        if let Some(v) = memo[i] {
            return Ok(v);
        }
        if in_progress[i] {
            return Err(Error::NotContractingWithinCap(
                "cycle outside the nucleus".into(),
            ));
        }
        in_progress[i] = true;
        let s = bad[i];
        let d = machine.domain(s);
        let mut best = 1;
        for &e in machine.graph().edges_from(d) {
            let (_, rest) = machine.step(s, e)?;
            if let Some(&j) = index.get(&rest) {
                best = best.max(1 + longest(machine, bad, index, memo, in_progress, j)?);
            }
        }
        in_progress[i] = false;
        memo[i] = Some(best);
        Ok(best)
    }
    let root_ix = index[&root];
    longest(machine, &bad, &index, &mut memo, &mut in_progress, root_ix)
}

/// Checks that levels depth..=probe of the restriction tree of `root` stay in
/// the nucleus; returns the probe depth actually verified.
fn verify_certificate(
    machine: &Machine,
    root: Element,
    nucleus: &HashSet<Element>,
    depth: usize,
    probe: usize,
) -> Result<usize> {
    let mut level: HashSet<Element> = HashSet::new();
    level.insert(root);
    for k in 1..=probe {
        let mut next = HashSet::new();
        for &s in &level {
            let d = machine.domain(s);
            for &e in machine.graph().edges_from(d) {
                let (_, rest) = machine.step(s, e)?;
                next.insert(rest);
            }
        }
        level = next;
        if k >= depth {
            for s in &level {
                if !nucleus.contains(s) {
                    return Err(Error::NotContractingWithinCap(format!(
                        "restriction at depth {} escapes the nucleus",
                        k
                    )));
                }
            }
        }
    }
    Ok(probe)
}

/// Labelled transition diagram of a nucleus: an edge g -> g|_e with label
/// (e, g.e) for every g and every e in d(g)E1.
#[derive(Debug, Clone, PartialEq)]
pub struct MooreDiagram {
    pub nodes: Vec<Element>,
    pub edges: Vec<MooreEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MooreEdge {
    pub from: usize,
    pub edge: usize,
    pub image: usize,
    pub to: usize,
}

pub fn moore_diagram(machine: &Machine, nucleus: &Nucleus) -> MooreDiagram {
    let index: HashMap<Element, usize> = nucleus
        .states
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    let mut edges = Vec::new();
    for (i, &g) in nucleus.states.iter().enumerate() {
        let d = machine.domain(g);
        for &e in machine.graph().edges_from(d) {
            let (img, rest) = machine.step(g, e).expect("nucleus transition");
            let to = *index
                .get(&rest)
                .expect("nucleus is closed under restriction");
            edges.push(MooreEdge {
                from: i,
                edge: e,
                image: img,
                to,
            });
        }
    }
    MooreDiagram {
        nodes: nucleus.states.clone(),
        edges,
    }
}

/// DOT text with one node per state and one labelled edge per transition,
/// in stable order.
pub fn export_moore_dot(machine: &Machine, diagram: &MooreDiagram) -> String {
    let graph = machine.graph();
    let mut out = String::from("digraph moore {\n");
    for &g in &diagram.nodes {
        out.push_str(&format!("\"{}\";\n", machine.name(g)));
    }
    for e in &diagram.edges {
        out.push_str(&format!(
            "\"{}\" -> \"{}\" [label=\"({},{})\"];\n",
            machine.name(diagram.nodes[e.from]),
            machine.name(diagram.nodes[e.to]),
            graph.edge_name(e.edge),
            graph.edge_name(e.image),
        ));
    }
    out.push_str("}\n");
    out
}

/// Structured export mirroring the automaton section of the input document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MooreDoc {
    pub version: u32,
    pub states: Vec<MooreDocState>,
    pub transitions: Vec<MooreDocTransition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MooreDocState {
    pub id: String,
    pub domain: String,
    pub codomain: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MooreDocTransition {
    pub state: String,
    pub edge: String,
    pub image: String,
    pub restriction: String,
}

pub fn export_moore_doc(machine: &Machine, diagram: &MooreDiagram) -> MooreDoc {
    let graph = machine.graph();
    let states = diagram
        .nodes
        .iter()
        .map(|&g| MooreDocState {
            id: machine.name(g),
            domain: graph.vertex_name(machine.domain(g)).to_string(),
            codomain: graph.vertex_name(machine.codomain(g)).to_string(),
        })
        .collect();
    let transitions = diagram
        .edges
        .iter()
        .map(|e| MooreDocTransition {
            state: machine.name(diagram.nodes[e.from]),
            edge: graph.edge_name(e.edge).to_string(),
            image: graph.edge_name(e.image).to_string(),
            restriction: machine.name(diagram.nodes[e.to]),
        })
        .collect();
    MooreDoc {
        version: 1,
        states,
        transitions,
    }
}

pub fn export_moore_json(machine: &Machine, diagram: &MooreDiagram) -> String {
    serde_json::to_string_pretty(&export_moore_doc(machine, diagram)).expect("serializable")
}

pub fn import_moore_json(text: &str) -> Result<MooreDoc> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Marks each nucleus state as cycle-borne (it lies on a restriction cycle,
/// so every contracting set must contain it) or transient.
pub fn is_minimal_on_cycles(machine: &Machine, nucleus: &Nucleus) -> Vec<(Element, bool)> {
    let index: HashMap<Element, usize> = nucleus
        .states
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    let n = nucleus.states.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &g) in nucleus.states.iter().enumerate() {
        for &e in machine.graph().edges_from(machine.domain(g)) {
            let (_, rest) = machine.step(g, e).expect("nucleus transition");
            succ[i].push(index[&rest]);
        }
    }
    nucleus
        .states
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let mut seen = vec![false; n];
            let mut stack = succ[i].clone();
            let mut cyc = false;
            while let Some(j) = stack.pop() {
                if j == i {
                    cyc = true;
                    break;
                }
                if !seen[j] {
                    seen[j] = true;
                    stack.extend(succ[j].iter().copied());
                }
            }
            (g, cyc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::fixtures;
    use std::sync::Arc;

    fn names(machine: &Machine, els: &[Element]) -> Vec<String> {
        els.iter().map(|&e| machine.name(e)).collect()
    }

    #[test]
    fn example3_nucleus_is_six_states() {
        let m = Machine::new(Arc::new(fixtures::example3()));
        let n = compute_nucleus(&m, NucleusCaps::default()).unwrap();
        assert_eq!(
            names(&m, &n.states),
            vec!["id_v", "id_w", "f_a", "f_b", "f_a^-1", "f_b^-1"]
        );
        let d = moore_diagram(&m, &n);
        assert_eq!(d.edges.len(), 12);
    }

    #[test]
    fn katsura_nucleus() {
        let (_, aut) = fixtures::katsura();
        let m = Machine::new(Arc::new(aut));
        let n = compute_nucleus(&m, NucleusCaps::default()).unwrap();
        assert_eq!(
            names(&m, &n.states),
            vec!["id_1", "id_2", "f_a1", "f_a2", "f_a1^-1", "f_a2^-1"]
        );
    }

    #[test]
    fn basilica_nucleus_contracts() {
        let m = Machine::new(Arc::new(fixtures::basilica()));
        let n = compute_nucleus(&m, NucleusCaps::default()).unwrap();
        // id, a, b, a^-1, b^-1 plus the two mixed products on the cycle.
        assert_eq!(n.states.len(), 7);
        for c in &n.certificates {
            assert!(c.verified_to >= c.depth);
        }
    }

    #[test]
    fn identity_only_moore_is_reversed_graph() {
        let aut = crate::automaton::EAutomaton::identities_only(Arc::clone(
            fixtures::example3().graph(),
        ));
        let m = Machine::new(Arc::new(aut));
        let n = compute_nucleus(&m, NucleusCaps::default()).unwrap();
        assert_eq!(names(&m, &n.states), vec!["id_v", "id_w"]);
        let d = moore_diagram(&m, &n);
        // One diagram edge per graph edge, from id_{r(e)} to id_{s(e)}.
        let g = m.graph();
        assert_eq!(d.edges.len(), g.edge_count());
        for e in &d.edges {
            assert_eq!(m.domain(d.nodes[e.from]), g.range(e.edge));
            assert_eq!(m.domain(d.nodes[e.to]), g.source(e.edge));
            assert_eq!(e.edge, e.image);
        }
    }

    #[test]
    fn moore_dot_export() {
        let m = Machine::new(Arc::new(fixtures::example3()));
        let n = compute_nucleus(&m, NucleusCaps::default()).unwrap();
        let dot = export_moore_dot(&m, &moore_diagram(&m, &n));
        assert!(dot.contains("\"f_a\" -> \"id_v\" [label=\"(1,4)\"];"));
        assert!(dot.starts_with("digraph moore {"));
    }

    #[test]
    fn moore_json_round_trip() {
        let m = Machine::new(Arc::new(fixtures::example3()));
        let n = compute_nucleus(&m, NucleusCaps::default()).unwrap();
        let d = moore_diagram(&m, &n);
        let json = export_moore_json(&m, &d);
        let back = import_moore_json(&json).unwrap();
        assert_eq!(back, export_moore_doc(&m, &d));
    }

    #[test]
    fn cycle_borne_reporting() {
        let m = Machine::new(Arc::new(fixtures::example3()));
        let n = compute_nucleus(&m, NucleusCaps::default()).unwrap();
        let report = is_minimal_on_cycles(&m, &n);
        assert!(report.iter().all(|&(_, cyc)| cyc));
        // Artificially augment with a transient product state.
        let ab = m.resolve("a.b").unwrap();
        let mut aug = n.states.clone();
        aug.push(ab);
        let augmented = Nucleus {
            states: aug,
            certificates: Vec::new(),
        };
        let report = is_minimal_on_cycles(&m, &augmented);
        let entry = report.iter().find(|&&(g, _)| g == ab).unwrap();
        assert!(!entry.1);
        assert!(report
            .iter()
            .filter(|&&(g, _)| g != ab)
            .all(|&(_, cyc)| cyc));
    }
}
