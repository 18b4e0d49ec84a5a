//! Orbit decomposition of the vertex set under the groupoid action and a
//! deterministic transversal of groupoid elements out of each base vertex.

use crate::machine::{Element, Machine};

/// Partition of the vertices into components of the relation "some element
/// has domain here and codomain there", with one base vertex per component
/// and witnesses `k_y` satisfying d(k_y) = base, c(k_y) = y and
/// `k_base = identity`.
#[derive(Debug, Clone)]
pub struct OrbitData {
    pub components: Vec<Vec<usize>>,
    pub comp_of: Vec<usize>,
    pub base: Vec<usize>,
    pub transversal: Vec<Element>,
}

impl OrbitData {
    pub fn component_of(&self, v: usize) -> usize {
        self.comp_of[v]
    }

    pub fn base_of(&self, v: usize) -> usize {
        self.base[self.comp_of[v]]
    }

    pub fn witness(&self, v: usize) -> Element {
        self.transversal[v]
    }
}

/// Components come from generator domain/codomain pairs; the transversal is
/// built breadth-first in generator declaration order, so identical inputs
/// give identical witnesses.
pub fn orbits(machine: &Machine) -> OrbitData {
    let graph = machine.graph();
    let aut = machine.automaton();
    let nv = graph.vertex_count();
    let mut comp_of = vec![usize::MAX; nv];
    let mut components = Vec::new();
    let mut base = Vec::new();
    let mut transversal = vec![Element(usize::MAX); nv];

    for start in 0..nv {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let cix = components.len();
        base.push(start);
        comp_of[start] = cix;
        transversal[start] = machine.identity(start);
        let mut member = vec![start];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for i in 0..aut.state_count() {
                let st = aut.state(i);
                let f = machine.base(i);
                if st.domain == u && comp_of[st.codomain] == usize::MAX {
                    comp_of[st.codomain] = cix;
                    transversal[st.codomain] = machine
                        .compose(f, transversal[u])
                        .expect("transversal step composes");
                    member.push(st.codomain);
                    queue.push_back(st.codomain);
                }
                if st.codomain == u && comp_of[st.domain] == usize::MAX {
                    let finv = machine.inverse(f).expect("generator inverse");
                    comp_of[st.domain] = cix;
                    transversal[st.domain] = machine
                        .compose(finv, transversal[u])
                        .expect("transversal step composes");
                    member.push(st.domain);
                    queue.push_back(st.domain);
                }
            }
        }
        member.sort_unstable();
        components.push(member);
    }

    OrbitData {
        components,
        comp_of,
        base,
        transversal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::fixtures;
    use std::sync::Arc;

    #[test]
    fn example3_single_orbit() {
        let m = Machine::new(Arc::new(fixtures::example3()));
        let o = orbits(&m);
        assert_eq!(o.components, vec![vec![0, 1]]);
        assert_eq!(o.base, vec![0]);
        assert_eq!(o.witness(0), m.identity(0));
        // k_w = f_a (the first generator connecting v to w).
        assert_eq!(o.witness(1), m.base(0));
    }

    #[test]
    fn katsura_singletons() {
        let (_, aut) = fixtures::katsura();
        let m = Machine::new(Arc::new(aut));
        let o = orbits(&m);
        assert_eq!(o.components, vec![vec![0], vec![1]]);
    }

    #[test]
    fn identity_only_components() {
        let aut = crate::automaton::EAutomaton::identities_only(Arc::clone(
            fixtures::example3().graph(),
        ));
        let m = Machine::new(Arc::new(aut));
        let o = orbits(&m);
        assert_eq!(o.components.len(), 2);
    }
}
