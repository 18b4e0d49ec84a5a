//! Automata over a directed graph: an alphabet of states with domain and
//! codomain vertices and a transition table `(a, e) -> (a.e, a|_e)` defined
//! exactly when `r(e)` is the domain of `a`.
//!
//! Validation is exhaustive over the finite table: the bijection axiom (A1),
//! the source axiom (A2), and the fibered-product codomain condition are all
//! checked at load time. Identity states are implicit, one per vertex; input
//! rows for them are accepted but must agree with what (A3) forces.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Path};

/// Restriction target: either the implicit identity at a vertex or a proper
/// state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    Identity(usize),
    State(usize),
}

#[derive(Debug, Clone)]
pub struct AutomatonState {
    pub id: String,
    /// s_A(a): the domain vertex, the root of the tree a acts on.
    pub domain: usize,
    /// r_A(a): the codomain vertex.
    pub codomain: usize,
}

/// A validated automaton over a graph.
#[derive(Debug, Clone)]
pub struct EAutomaton {
    graph: Arc<DirectedGraph>,
    states: Vec<AutomatonState>,
    smap: HashMap<String, usize>,
    /// Per state, indexed like `graph.edges_from(domain)`: (image edge, restriction).
    trans: Vec<Vec<(usize, Restriction)>>,
}

/// One raw transition row, pre-validation.
#[derive(Debug, Clone)]
pub struct RawTransition {
    pub state: String,
    pub edge: String,
    pub image: String,
    pub restriction: String,
}

impl EAutomaton {
    /// Validates a state table against the graph. `states` are (id, domain
    /// vertex, codomain vertex) triples; restriction values may name vertices
    /// (identities) or proper states.
    pub fn new(
        graph: Arc<DirectedGraph>,
        states: Vec<(String, String, String)>,
        rows: Vec<RawTransition>,
    ) -> Result<Self> {
        let mut smap = HashMap::new();
        let mut parsed = Vec::new();
        for (id, dom, cod) in &states {
            if id.is_empty() {
                return Err(Error::Parse("empty state id".into()));
            }
            if graph.vertex_ix(id).is_ok() {
                return Err(Error::IdClash(id.clone()));
            }
            if smap.insert(id.clone(), parsed.len()).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
            parsed.push(AutomatonState {
                id: id.clone(),
                domain: graph.vertex_ix(dom)?,
                codomain: graph.vertex_ix(cod)?,
            });
        }

        let mut trans: Vec<Vec<Option<(usize, Restriction)>>> = parsed
            .iter()
            .map(|st| vec![None; graph.edges_from(st.domain).len()])
            .collect();

        let parse_rest = |text: &str| -> Result<Restriction> {
            if let Some(&ix) = smap.get(text) {
                Ok(Restriction::State(ix))
            } else if let Ok(v) = graph.vertex_ix(text) {
                Ok(Restriction::Identity(v))
            } else {
                Err(Error::UnknownLetter(text.to_string()))
            }
        };

        for row in &rows {
            let e = graph.edge_ix(&row.edge)?;
            if let Some(&a) = smap.get(&row.state) {
                let st = &parsed[a];
                if graph.range(e) != st.domain {
                    return Err(Error::UnexpectedTransition {
                        state: row.state.clone(),
                        edge: row.edge.clone(),
                    });
                }
                let img = graph.edge_ix(&row.image)?;
                let rest = parse_rest(&row.restriction)?;
                let pos = graph.edge_position(e);
                if trans[a][pos].is_some() {
                    return Err(Error::DuplicateId(format!("({}, {})", row.state, row.edge)));
                }
                trans[a][pos] = Some((img, rest));
            } else if let Ok(v) = graph.vertex_ix(&row.state) {
                // Explicit identity row: must agree with (A3).
                if graph.range(e) != v
                    || graph.edge_ix(&row.image)? != e
                    || parse_rest(&row.restriction)? != Restriction::Identity(graph.source(e))
                {
                    return Err(Error::AxiomA2 {
                        state: row.state.clone(),
                        edge: row.edge.clone(),
                        detail: "explicit identity row disagrees with (A3)".into(),
                    });
                }
            } else {
                return Err(Error::UnknownLetter(row.state.clone()));
            }
        }

        let mut table = Vec::with_capacity(parsed.len());
        for (a, st) in parsed.iter().enumerate() {
            let dom_edges = graph.edges_from(st.domain);
            let cod_edges = graph.edges_from(st.codomain);
            let mut filled = Vec::with_capacity(dom_edges.len());
            for (pos, &e) in dom_edges.iter().enumerate() {
                match trans[a][pos] {
                    Some(t) => filled.push(t),
                    None => {
                        return Err(Error::MissingTransition {
                            state: st.id.clone(),
                            edge: graph.edge_name(e).to_string(),
                        })
                    }
                }
            }
            // (A1): e -> a.e must be a bijection of domain E1 onto codomain E1.
            if dom_edges.len() != cod_edges.len() {
                return Err(Error::AxiomA1 {
                    state: st.id.clone(),
                    detail: format!(
                        "|{}E1| = {} but |{}E1| = {}",
                        graph.vertex_name(st.domain),
                        dom_edges.len(),
                        graph.vertex_name(st.codomain),
                        cod_edges.len()
                    ),
                });
            }
            let mut hit = vec![false; graph.edge_count()];
            for (pos, &(img, rest)) in filled.iter().enumerate() {
                let e = dom_edges[pos];
                if graph.range(img) != st.codomain {
                    return Err(Error::AxiomA1 {
                        state: st.id.clone(),
                        detail: format!(
                            "image of `{}` is `{}` with range {}, not the codomain {}",
                            graph.edge_name(e),
                            graph.edge_name(img),
                            graph.vertex_name(graph.range(img)),
                            graph.vertex_name(st.codomain)
                        ),
                    });
                }
                if hit[img] {
                    return Err(Error::AxiomA1 {
                        state: st.id.clone(),
                        detail: format!("edge `{}` hit twice", graph.edge_name(img)),
                    });
                }
                hit[img] = true;
                // (A2): s_A(a|_e) = s_E(e).
                let (rd, rc) = match rest {
                    Restriction::Identity(v) => (v, v),
                    Restriction::State(b) => (parsed[b].domain, parsed[b].codomain),
                };
                if rd != graph.source(e) {
                    return Err(Error::AxiomA2 {
                        state: st.id.clone(),
                        edge: graph.edge_name(e).to_string(),
                        detail: format!(
                            "restriction domain {} but s(e) = {}",
                            graph.vertex_name(rd),
                            graph.vertex_name(graph.source(e))
                        ),
                    });
                }
                // Codomain condition: r_A(a|_e) = s_E(a.e).
                if rc != graph.source(img) {
                    return Err(Error::CodomainMismatch {
                        state: st.id.clone(),
                        edge: graph.edge_name(e).to_string(),
                        detail: format!(
                            "restriction codomain {} but s(a.e) = {}",
                            graph.vertex_name(rc),
                            graph.vertex_name(graph.source(img))
                        ),
                    });
                }
            }
            table.push(filled);
        }

        Ok(EAutomaton {
            graph,
            states: parsed,
            smap,
            trans: table,
        })
    }

    /// The identity-only automaton (the groupoid C(E0)).
    pub fn identities_only(graph: Arc<DirectedGraph>) -> Self {
        EAutomaton {
            graph,
            states: Vec::new(),
            smap: HashMap::new(),
            trans: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Arc<DirectedGraph> {
        &self.graph
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, ix: usize) -> &AutomatonState {
        &self.states[ix]
    }

    pub fn states(&self) -> &[AutomatonState] {
        &self.states
    }

    pub fn state_ix(&self, id: &str) -> Option<usize> {
        self.smap.get(id).copied()
    }

    /// Transition of state `a` on edge `e` (requires r(e) = domain of a).
    pub fn step(&self, a: usize, e: usize) -> Result<(usize, Restriction)> {
        let st = &self.states[a];
        if self.graph.range(e) != st.domain {
            return Err(Error::DomainMismatch(format!(
                "state `{}` has domain {} but r({}) = {}",
                st.id,
                self.graph.vertex_name(st.domain),
                self.graph.edge_name(e),
                self.graph.vertex_name(self.graph.range(e))
            )));
        }
        Ok(self.trans[a][self.graph.edge_position(e)])
    }

    /// Extends the action of a state to a path by the left-to-right
    /// recursion; returns the image path and the final restriction.
    pub fn act_path(&self, a: usize, mu: &Path) -> Result<(Path, Restriction)> {
        let st = &self.states[a];
        if mu.range() != st.domain {
            return Err(Error::DomainMismatch(format!(
                "state `{}` has domain {} but r(mu) = {}",
                st.id,
                self.graph.vertex_name(st.domain),
                self.graph.vertex_name(mu.range())
            )));
        }
        let mut cur = Restriction::State(a);
        let mut out = Path::empty(st.codomain);
        for &e in mu.edges() {
            match cur {
                Restriction::Identity(_) => {
                    out = out.extended(&self.graph, e);
                    cur = Restriction::Identity(self.graph.source(e));
                }
                Restriction::State(b) => {
                    let (img, rest) = self.step(b, e)?;
                    out = out.extended(&self.graph, img);
                    cur = rest;
                }
            }
        }
        Ok((out, cur))
    }
}

/// Builds the graph and automaton of a Katsura action from matrices A and B:
/// edges `e_{i,j,m}` for `0 <= m < a_ij` with range i and source j, and one
/// state `a_i` per vertex acting by the division rule
/// `b_ij + m = l * a_ij + n`, `0 <= n < a_ij` (so n is the remainder and l
/// the quotient of `(b_ij + m) / a_ij`; the restriction is `a_j^l`).
///
/// Only quotients l in {0, 1} can be expressed with one state per vertex,
/// which holds exactly when `b_ij <= a_ij` wherever `a_ij > 0`.
pub fn build_katsura(a: &[Vec<u64>], b: &[Vec<u64>]) -> Result<(Arc<DirectedGraph>, EAutomaton)> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) || b.len() != n || b.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidMatrices("A and B must be square of equal size".into()));
    }
    for i in 0..n {
        if a[i].iter().all(|&x| x == 0) {
            return Err(Error::InvalidMatrices(format!("row {} of A is zero", i + 1)));
        }
        for j in 0..n {
            if a[i][j] == 0 && b[i][j] != 0 {
                return Err(Error::InvalidMatrices(format!(
                    "a_{{{},{}}} = 0 but b_{{{},{}}} != 0",
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                )));
            }
            if a[i][j] > 0 && b[i][j] > a[i][j] {
                return Err(Error::InvalidMatrices(format!(
                    "b_{{{},{}}} > a_{{{},{}}}: restriction exponent exceeds 1, \
                     not expressible with one state per vertex",
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for m in 0..a[i][j] {
                edges.push((
                    format!("e_{{{},{},{}}}", i + 1, j + 1, m),
                    (i + 1).to_string(),
                    (j + 1).to_string(),
                ));
            }
        }
    }
    let graph = Arc::new(DirectedGraph::new(vertices, edges, true)?);

    let states: Vec<(String, String, String)> = (1..=n)
        .map(|i| (format!("a{i}"), i.to_string(), i.to_string()))
        .collect();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for m in 0..a[i][j] {
                let l = (b[i][j] + m) / a[i][j];
                let rem = (b[i][j] + m) % a[i][j];
                let restriction = if l == 0 {
                    (j + 1).to_string()
                } else {
                    format!("a{}", j + 1)
                };
                rows.push(RawTransition {
                    state: format!("a{}", i + 1),
                    edge: format!("e_{{{},{},{}}}", i + 1, j + 1, m),
                    image: format!("e_{{{},{},{}}}", i + 1, j + 1, rem),
                    restriction,
                });
            }
        }
    }
    let automaton = EAutomaton::new(Arc::clone(&graph), states, rows)?;
    Ok((graph, automaton))
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn example3() -> EAutomaton {
        let graph = Arc::new(
            DirectedGraph::new(
                vec!["v".into(), "w".into()],
                vec![
                    ("1".into(), "v".into(), "v".into()),
                    ("2".into(), "v".into(), "w".into()),
                    ("3".into(), "w".into(), "v".into()),
                    ("4".into(), "w".into(), "v".into()),
                ],
                true,
            )
            .unwrap(),
        );
        EAutomaton::new(
            graph,
            vec![
                ("a".into(), "v".into(), "w".into()),
                ("b".into(), "w".into(), "v".into()),
            ],
            vec![
                RawTransition {
                    state: "a".into(),
                    edge: "1".into(),
                    image: "4".into(),
                    restriction: "v".into(),
                },
                RawTransition {
                    state: "a".into(),
                    edge: "2".into(),
                    image: "3".into(),
                    restriction: "b".into(),
                },
                RawTransition {
                    state: "b".into(),
                    edge: "3".into(),
                    image: "1".into(),
                    restriction: "v".into(),
                },
                RawTransition {
                    state: "b".into(),
                    edge: "4".into(),
                    image: "2".into(),
                    restriction: "a".into(),
                },
            ],
        )
        .unwrap()
    }

    pub fn basilica() -> EAutomaton {
        let graph = Arc::new(
            DirectedGraph::new(
                vec!["v".into()],
                vec![
                    ("x".into(), "v".into(), "v".into()),
                    ("y".into(), "v".into(), "v".into()),
                ],
                true,
            )
            .unwrap(),
        );
        EAutomaton::new(
            graph,
            vec![
                ("a".into(), "v".into(), "v".into()),
                ("b".into(), "v".into(), "v".into()),
            ],
            vec![
                RawTransition {
                    state: "a".into(),
                    edge: "x".into(),
                    image: "y".into(),
                    restriction: "b".into(),
                },
                RawTransition {
                    state: "a".into(),
                    edge: "y".into(),
                    image: "x".into(),
                    restriction: "v".into(),
                },
                RawTransition {
                    state: "b".into(),
                    edge: "x".into(),
                    image: "x".into(),
                    restriction: "a".into(),
                },
                RawTransition {
                    state: "b".into(),
                    edge: "y".into(),
                    image: "y".into(),
                    restriction: "v".into(),
                },
            ],
        )
        .unwrap()
    }

    pub fn katsura() -> (Arc<DirectedGraph>, EAutomaton) {
        build_katsura(
            &[vec![2, 1], vec![2, 2]],
            &[vec![1, 0], vec![2, 1]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn example3_loads() {
        let aut = example3();
        assert_eq!(aut.state_count(), 2);
        let g = aut.graph().clone();
        let a = aut.state_ix("a").unwrap();
        let (img, rest) = aut.step(a, g.edge_ix("1").unwrap()).unwrap();
        assert_eq!(g.edge_name(img), "4");
        assert_eq!(rest, Restriction::Identity(0));
    }

    #[test]
    fn act_path_recursion() {
        let aut = example3();
        let g = aut.graph().clone();
        let a = aut.state_ix("a").unwrap();
        let mu = Path::parse(&g, "2.3").unwrap();
        let (img, rest) = aut.act_path(a, &mu).unwrap();
        assert_eq!(img.display(&g), "3.1");
        assert_eq!(rest, Restriction::Identity(g.vertex_ix("v").unwrap()));
        // Identity rows: act via a state whose restriction became identity.
        let (img0, rest0) = aut.act_path(a, &Path::empty(0)).unwrap();
        assert!(img0.is_empty());
        assert_eq!(rest0, Restriction::State(a));
    }

    #[test]
    fn a1_violation_detected() {
        let g = example3().graph().clone();
        let err = EAutomaton::new(
            g,
            vec![("a".into(), "v".into(), "w".into())],
            vec![
                RawTransition {
                    state: "a".into(),
                    edge: "1".into(),
                    image: "4".into(),
                    restriction: "v".into(),
                },
                RawTransition {
                    state: "a".into(),
                    edge: "2".into(),
                    image: "4".into(),
                    restriction: "w".into(),
                },
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::AxiomA1 { .. }));
    }

    #[test]
    fn katsura_matches_worked_transitions() {
        let (g, aut) = katsura();
        let a1 = aut.state_ix("a1").unwrap();
        let a2 = aut.state_ix("a2").unwrap();
        let step = |a: usize, e: &str| {
            let (img, rest) = aut.step(a, g.edge_ix(e).unwrap()).unwrap();
            (g.edge_name(img).to_string(), rest)
        };
        assert_eq!(
            step(a1, "e_{1,1,0}"),
            ("e_{1,1,1}".to_string(), Restriction::Identity(0))
        );
        assert_eq!(
            step(a1, "e_{1,1,1}"),
            ("e_{1,1,0}".to_string(), Restriction::State(a1))
        );
        assert_eq!(
            step(a1, "e_{1,2,0}"),
            ("e_{1,2,0}".to_string(), Restriction::Identity(1))
        );
        assert_eq!(
            step(a2, "e_{2,1,0}"),
            ("e_{2,1,0}".to_string(), Restriction::State(a1))
        );
        assert_eq!(
            step(a2, "e_{2,1,1}"),
            ("e_{2,1,1}".to_string(), Restriction::State(a1))
        );
        assert_eq!(
            step(a2, "e_{2,2,0}"),
            ("e_{2,2,1}".to_string(), Restriction::Identity(1))
        );
        assert_eq!(
            step(a2, "e_{2,2,1}"),
            ("e_{2,2,0}".to_string(), Restriction::State(a2))
        );
        // Vertex matrix of the generated graph equals A.
        let b = g.vertex_matrix();
        assert_eq!(
            (b.get(0, 0), b.get(0, 1), b.get(1, 0), b.get(1, 1)),
            (2, 1, 2, 2)
        );
    }

    #[test]
    fn katsura_zero_b_acts_trivially() {
        let (g, aut) = build_katsura(&[vec![2, 1], vec![2, 2]], &[vec![0, 0], vec![0, 0]]).unwrap();
        for a in 0..aut.state_count() {
            let dom = aut.state(a).domain;
            for &e in g.edges_from(dom) {
                let (img, rest) = aut.step(a, e).unwrap();
                assert_eq!(img, e);
                assert_eq!(rest, Restriction::Identity(g.source(e)));
            }
        }
    }

    #[test]
    fn katsura_invalid_matrices() {
        assert!(build_katsura(&[vec![0, 0], vec![1, 1]], &[vec![0, 0], vec![1, 1]]).is_err());
        assert!(build_katsura(&[vec![1]], &[vec![2]]).is_err());
        assert!(build_katsura(&[vec![0]], &[vec![1]]).is_err());
    }
}
