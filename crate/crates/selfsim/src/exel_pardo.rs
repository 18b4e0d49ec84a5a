//! Adapter turning Exel-Pardo data (a group acting on a graph with a
//! one-cocycle) into an automaton over the transformation groupoid K x E0.
//!
//! Group data may be partial (a truncated table for an infinite group); the
//! axioms are checked exhaustively over the cells that are defined.

use std::sync::Arc;

use crate::automaton::{EAutomaton, RawTransition};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// Finite (possibly truncated) Exel-Pardo data.
///
/// `mul[k][l]` is the product k*l when defined. `sigma_v[k]` and
/// `sigma_e[k]` are the vertex and edge permutations of k, and `phi[k][e]`
/// is the cocycle value.
#[derive(Debug, Clone)]
pub struct ExelPardoData {
    pub elements: Vec<String>,
    pub identity: usize,
    pub mul: Vec<Vec<Option<usize>>>,
    pub sigma_v: Vec<Vec<usize>>,
    pub sigma_e: Vec<Vec<usize>>,
    pub phi: Vec<Vec<usize>>,
}

fn is_permutation(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in map {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Builds the automaton with states (k, v) acting by `(k, v) . e = sigma_k(e)`
/// and restricting to `(phi(k, e), s(e))`. Identity-group states collapse to
/// the implicit vertex identities.
pub fn from_exel_pardo(data: &ExelPardoData, graph: Arc<DirectedGraph>) -> Result<EAutomaton> {
    let nk = data.elements.len();
    let nv = graph.vertex_count();
    let ne = graph.edge_count();
    if data.identity >= nk
        || data.mul.len() != nk
        || data.sigma_v.len() != nk
        || data.sigma_e.len() != nk
        || data.phi.len() != nk
    {
        return Err(Error::Parse("Exel-Pardo tables have inconsistent sizes".into()));
    }

    let e_id = data.identity;
    for k in 0..nk {
        if !is_permutation(&data.sigma_v[k], nv) || !is_permutation(&data.sigma_e[k], ne) {
            return Err(Error::EpAxiom {
                axiom: "sigma_k bijective".into(),
                witness: data.elements[k].clone(),
            });
        }
        if data.phi[k].len() != ne || data.phi[k].iter().any(|&x| x >= nk) {
            return Err(Error::EpAxiom {
                axiom: "phi well-defined".into(),
                witness: data.elements[k].clone(),
            });
        }
    }
    // Identity acts trivially and has trivial cocycle.
    if data.sigma_v[e_id].iter().enumerate().any(|(v, &w)| v != w)
        || data.sigma_e[e_id].iter().enumerate().any(|(e, &f)| e != f)
    {
        return Err(Error::EpAxiom {
            axiom: "sigma_identity trivial".into(),
            witness: data.elements[e_id].clone(),
        });
    }
    if data.phi[e_id].iter().any(|&x| x != e_id) {
        return Err(Error::EpAxiom {
            axiom: "phi(identity, e) = identity".into(),
            witness: data.elements[e_id].clone(),
        });
    }
    // Range and source equivariance: r(sigma_k(e)) = sigma_k(r(e)) and the
    // same for s.
    for k in 0..nk {
        for e in 0..ne {
            let f = data.sigma_e[k][e];
            if graph.range(f) != data.sigma_v[k][graph.range(e)] {
                return Err(Error::EpAxiom {
                    axiom: "r o sigma_k = sigma_k o r".into(),
                    witness: format!("k = {}, e = {}", data.elements[k], graph.edge_name(e)),
                });
            }
            if graph.source(f) != data.sigma_v[k][graph.source(e)] {
                return Err(Error::EpAxiom {
                    axiom: "s o sigma_k = sigma_k o s".into(),
                    witness: format!("k = {}, e = {}", data.elements[k], graph.edge_name(e)),
                });
            }
        }
    }
    // Action property on defined products: sigma_k sigma_l = sigma_{kl}.
    for k in 0..nk {
        for l in 0..nk {
            if let Some(m) = data.mul[k][l] {
                if m >= nk {
                    return Err(Error::Parse("multiplication table out of range".into()));
                }
                for v in 0..nv {
                    if data.sigma_v[k][data.sigma_v[l][v]] != data.sigma_v[m][v] {
                        return Err(Error::EpAxiom {
                            axiom: "sigma_k sigma_l = sigma_{kl} on vertices".into(),
                            witness: format!(
                                "k = {}, l = {}",
                                data.elements[k], data.elements[l]
                            ),
                        });
                    }
                }
                for e in 0..ne {
                    if data.sigma_e[k][data.sigma_e[l][e]] != data.sigma_e[m][e] {
                        return Err(Error::EpAxiom {
                            axiom: "sigma_k sigma_l = sigma_{kl} on edges".into(),
                            witness: format!(
                                "k = {}, l = {}",
                                data.elements[k], data.elements[l]
                            ),
                        });
                    }
                }
                // Cocycle law where both sides are defined.
                for e in 0..ne {
                    let lhs = data.phi[m][e];
                    let a = data.phi[k][data.sigma_e[l][e]];
                    let b = data.phi[l][e];
                    if let Some(rhs) = data.mul[a][b] {
                        if lhs != rhs {
                            return Err(Error::EpAxiom {
                                axiom: "phi(kl, e) = phi(k, sigma_l(e)) phi(l, e)".into(),
                                witness: format!(
                                    "k = {}, l = {}, e = {}",
                                    data.elements[k],
                                    data.elements[l],
                                    graph.edge_name(e)
                                ),
                            });
                        }
                    }
                }
            }
        }
    }
    // Standing assumption: sigma^0_{phi(k, e)} = sigma^0_k.
    for k in 0..nk {
        for e in 0..ne {
            let kk = data.phi[k][e];
            if data.sigma_v[kk] != data.sigma_v[k] {
                return Err(Error::EpAxiom {
                    axiom: "sigma^0_{phi(k,e)} = sigma^0_k".into(),
                    witness: format!("k = {}, e = {}", data.elements[k], graph.edge_name(e)),
                });
            }
        }
    }

    // Emit the automaton over K x E0, skipping identity-group states.
    let state_name = |k: usize, v: usize| format!("{}@{}", data.elements[k], graph.vertex_name(v));
    let mut states = Vec::new();
    for k in 0..nk {
        if k == e_id {
            continue;
        }
        for v in 0..nv {
            states.push((
                state_name(k, v),
                graph.vertex_name(v).to_string(),
                graph.vertex_name(data.sigma_v[k][v]).to_string(),
            ));
        }
    }
    let mut rows = Vec::new();
    for k in 0..nk {
        if k == e_id {
            continue;
        }
        for v in 0..nv {
            for &e in graph.edges_from(v) {
                let img = data.sigma_e[k][e];
                let k2 = data.phi[k][e];
                let s = graph.source(e);
                let restriction = if k2 == e_id {
                    graph.vertex_name(s).to_string()
                } else {
                    state_name(k2, s)
                };
                rows.push(RawTransition {
                    state: state_name(k, v),
                    edge: graph.edge_name(e).to_string(),
                    image: graph.edge_name(img).to_string(),
                    restriction,
                });
            }
        }
    }
    EAutomaton::new(graph, states, rows)
}
