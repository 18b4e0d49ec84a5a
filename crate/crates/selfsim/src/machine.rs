//! Groupoid elements generated by an automaton, realised as machine states.
//!
//! Every element the crate hands out is *canonical*: the machine keeps a
//! registry of pairwise non-bisimilar states, and products and inverses are
//! folded into it by closing the new expression under single-edge restriction
//! and running partition refinement against everything already known. Two
//! elements act identically on the path forest iff they are the same
//! [`Element`], so equality of actions is pointer equality and faithfulness
//! is structural.
//!
//! The registry is behind an `RwLock`: building new elements takes the write
//! lock, while the read-only operations used in hot loops (applying an
//! element to a path, walking transitions) only take read locks.

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, RwLock};

use crate::automaton::{EAutomaton, Restriction};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Path};

/// Handle to a canonical machine state. Only meaningful together with the
/// [`Machine`] that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub(crate) usize);

/// Structural origin of a canonical state, used for naming and for
/// normalising expressions (`Inv(Inv(x)) = x` and friends).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Identity(usize),
    Base(usize),
    Inverse(Element),
    Product(Element, Element),
}

#[derive(Debug, Clone)]
struct StateData {
    d: usize,
    c: usize,
    /// Indexed like `graph.edges_from(d)`: (image edge, restriction).
    trans: Vec<(usize, Element)>,
    name: String,
    word: String,
    origin: Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ExprKey {
    Inv(Element),
    Prod(Element, Element),
}

#[derive(Default)]
struct Registry {
    states: Vec<StateData>,
    memo: HashMap<ExprKey, Element>,
}

/// A machine state together with the finite set of states reachable from it
/// by iterated single-edge restriction.
#[derive(Debug, Clone)]
pub struct ClosedMachine {
    pub root: Element,
    /// Breadth-first discovery order from the root; closed under restriction.
    pub states: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EqualityOutcome {
    Equal,
    /// A shortest path on which the two actions differ; empty when the
    /// domain or codomain vertices already disagree.
    Distinct(Path),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderOutcome {
    Finite(usize),
    ExceedsCap,
}

pub struct Machine {
    graph: Arc<DirectedGraph>,
    automaton: Arc<EAutomaton>,
    reg: RwLock<Registry>,
    base_elems: Vec<Element>,
    default_cap: usize,
}

impl Machine {
    pub fn new(automaton: Arc<EAutomaton>) -> Machine {
        let graph = Arc::clone(automaton.graph());
        let mut reg = Registry::default();
        // Identities first, ids 0..|E0|.
        for v in 0..graph.vertex_count() {
            let trans = graph
                .edges_from(v)
                .iter()
                .map(|&e| (e, Element(graph.source(e))))
                .collect();
            reg.states.push(StateData {
                d: v,
                c: v,
                trans,
                name: format!("id_{}", graph.vertex_name(v)),
                word: format!("id:{}", graph.vertex_name(v)),
                origin: Origin::Identity(v),
            });
        }
        let machine = Machine {
            graph,
            automaton,
            reg: RwLock::new(reg),
            base_elems: Vec::new(),
            default_cap: 20_000,
        };
        machine.install_base_states()
    }

    fn install_base_states(mut self) -> Machine {
        let aut = Arc::clone(&self.automaton);
        let graph = Arc::clone(&self.graph);
        let mut temps = Vec::new();
        for i in 0..aut.state_count() {
            let st = aut.state(i);
            let trans = graph
                .edges_from(st.domain)
                .iter()
                .map(|&e| {
                    let (img, rest) = aut.step(i, e).expect("validated table");
                    let child = match rest {
                        Restriction::Identity(v) => TRef::Canon(Element(v)),
                        Restriction::State(j) => TRef::Temp(j),
                    };
                    (img, child)
                })
                .collect();
            temps.push(TempState {
                d: st.domain,
                c: st.codomain,
                trans,
                origin: Origin::Base(i),
                key: None,
                names: Some((format!("f_{}", st.id), st.id.clone())),
            });
        }
        let mut reg = self.reg.write().unwrap();
        let mapping = install_temps(&mut reg, temps);
        drop(reg);
        self.base_elems = mapping;
        self
    }

    pub fn graph(&self) -> &Arc<DirectedGraph> {
        &self.graph
    }

    pub fn automaton(&self) -> &Arc<EAutomaton> {
        &self.automaton
    }

    pub fn set_default_cap(&mut self, cap: usize) {
        self.default_cap = cap;
    }

    pub fn identity(&self, v: usize) -> Element {
        debug_assert!(v < self.graph.vertex_count());
        Element(v)
    }

    pub fn is_identity(&self, g: Element) -> bool {
        g.0 < self.graph.vertex_count()
    }

    /// Identity vertex when `g` is an identity.
    pub fn identity_vertex(&self, g: Element) -> Option<usize> {
        if self.is_identity(g) {
            Some(g.0)
        } else {
            None
        }
    }

    /// Canonical element of a proper automaton state (by declaration index).
    pub fn base(&self, state_ix: usize) -> Element {
        self.base_elems[state_ix]
    }

    /// Generator elements in declaration order.
    pub fn generators(&self) -> Vec<Element> {
        self.base_elems.clone()
    }

    pub fn domain(&self, g: Element) -> usize {
        self.reg.read().unwrap().states[g.0].d
    }

    pub fn codomain(&self, g: Element) -> usize {
        self.reg.read().unwrap().states[g.0].c
    }

    pub fn name(&self, g: Element) -> String {
        self.reg.read().unwrap().states[g.0].name.clone()
    }

    /// Word-grammar form of a defining word for the element.
    pub fn word(&self, g: Element) -> String {
        self.reg.read().unwrap().states[g.0].word.clone()
    }

    pub fn origin(&self, g: Element) -> Origin {
        self.reg.read().unwrap().states[g.0].origin
    }

    pub fn state_count(&self) -> usize {
        self.reg.read().unwrap().states.len()
    }

    /// Single transition: `g` consumes an edge e with r(e) = d(g) and emits
    /// (g.e, g|_e).
    pub fn step(&self, g: Element, e: usize) -> Result<(usize, Element)> {
        let reg = self.reg.read().unwrap();
        let st = &reg.states[g.0];
        if self.graph.range(e) != st.d {
            return Err(Error::DomainMismatch(format!(
                "element `{}` has domain {} but r({}) = {}",
                st.name,
                self.graph.vertex_name(st.d),
                self.graph.edge_name(e),
                self.graph.vertex_name(self.graph.range(e))
            )));
        }
        Ok(st.trans[self.graph.edge_position(e)])
    }

    /// Applies `g` to a path: returns (g . mu, g|_mu). The empty path at
    /// d(g) is allowed and restricts to `g` itself.
    pub fn apply(&self, g: Element, mu: &Path) -> Result<(Path, Element)> {
        let reg = self.reg.read().unwrap();
        let st = &reg.states[g.0];
        if mu.range() != st.d {
            return Err(Error::DomainMismatch(format!(
                "element `{}` has domain {} but r(mu) = {}",
                st.name,
                self.graph.vertex_name(st.d),
                self.graph.vertex_name(mu.range())
            )));
        }
        let mut out = Path::empty(st.c);
        let mut cur = g;
        for &e in mu.edges() {
            let (img, rest) = reg.states[cur.0].trans[self.graph.edge_position(e)];
            out = out.extended(&self.graph, img);
            cur = rest;
        }
        Ok((out, cur))
    }

    /// Product g ∘ h (h applied first), defined iff d(g) = c(h).
    pub fn compose(&self, g: Element, h: Element) -> Result<Element> {
        self.compose_capped(g, h, self.default_cap)
    }

    pub fn compose_capped(&self, g: Element, h: Element, cap: usize) -> Result<Element> {
        {
            let reg = self.reg.read().unwrap();
            if reg.states[g.0].d != reg.states[h.0].c {
                return Err(Error::NonComposable(format!(
                    "d({}) = {} but c({}) = {}",
                    reg.states[g.0].name,
                    self.graph.vertex_name(reg.states[g.0].d),
                    reg.states[h.0].name,
                    self.graph.vertex_name(reg.states[h.0].c)
                )));
            }
            if let Some(el) = lookup(&reg, ExprKey::Prod(g, h)) {
                return Ok(el);
            }
        }
        let mut reg = self.reg.write().unwrap();
        canonize(&self.graph, &mut reg, ExprKey::Prod(g, h), cap)
    }

    pub fn inverse(&self, g: Element) -> Result<Element> {
        self.inverse_capped(g, self.default_cap)
    }

    pub fn inverse_capped(&self, g: Element, cap: usize) -> Result<Element> {
        {
            let reg = self.reg.read().unwrap();
            if let Some(el) = lookup(&reg, ExprKey::Inv(g)) {
                return Ok(el);
            }
        }
        let mut reg = self.reg.write().unwrap();
        canonize(&self.graph, &mut reg, ExprKey::Inv(g), cap)
    }

    /// g^n for n in Z; n = 0 requires d(g) = c(g).
    pub fn power(&self, g: Element, n: i64) -> Result<Element> {
        if n == 0 {
            let (d, c) = (self.domain(g), self.codomain(g));
            if d != c {
                return Err(Error::NotIsotropy(self.name(g)));
            }
            return Ok(self.identity(c));
        }
        let base = if n > 0 { g } else { self.inverse(g)? };
        let mut acc = base;
        for _ in 1..n.unsigned_abs() {
            acc = self.compose(base, acc)?;
        }
        Ok(acc)
    }

    /// Breadth-first closure of `g` under single-edge restriction.
    pub fn closure(&self, g: Element, cap: usize) -> Result<ClosedMachine> {
        let reg = self.reg.read().unwrap();
        let mut seen = HashMap::new();
        let mut states = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(g, ());
        states.push(g);
        queue.push_back(g);
        while let Some(s) = queue.pop_front() {
            for &(_, rest) in &reg.states[s.0].trans {
                if !seen.contains_key(&rest) {
                    if states.len() >= cap {
                        return Err(Error::ClosureCapExceeded(cap));
                    }
                    seen.insert(rest, ());
                    states.push(rest);
                    queue.push_back(rest);
                }
            }
        }
        Ok(ClosedMachine { root: g, states })
    }

    /// Bisimulation equality. Canonical elements are equal iff they are the
    /// same state; otherwise a breadth-first pair search yields a shortest
    /// separating path.
    pub fn equal(&self, g: Element, h: Element) -> EqualityOutcome {
        if g == h {
            return EqualityOutcome::Equal;
        }
        let reg = self.reg.read().unwrap();
        let (dg, cg) = (reg.states[g.0].d, reg.states[g.0].c);
        let (dh, ch) = (reg.states[h.0].d, reg.states[h.0].c);
        if dg != dh || cg != ch {
            return EqualityOutcome::Distinct(Path::empty(dg));
        }
        // BFS over pairs of canonical states; a difference must exist.
        let mut parent: HashMap<(Element, Element), Option<((Element, Element), usize)>> =
            HashMap::new();
        let mut queue = VecDeque::new();
        parent.insert((g, h), None);
        queue.push_back((g, h));
        while let Some((a, b)) = queue.pop_front() {
            let ta = &reg.states[a.0].trans;
            let tb = &reg.states[b.0].trans;
            for (pos, &e) in self.graph.edges_from(reg.states[a.0].d).iter().enumerate() {
                let (ia, ra) = ta[pos];
                let (ib, rb) = tb[pos];
                if ia != ib {
                    // Reconstruct the witness: the path to (a, b) plus e.
                    let mut edges = vec![e];
                    let mut cur = (a, b);
                    while let Some(Some((prev, pe))) = parent.get(&cur) {
                        edges.push(*pe);
                        cur = *prev;
                    }
                    edges.reverse();
                    let path =
                        Path::from_edges(&self.graph, edges).expect("witness is composable");
                    return EqualityOutcome::Distinct(path);
                }
                if ra != rb && !parent.contains_key(&(ra, rb)) {
                    parent.insert((ra, rb), Some(((a, b), e)));
                    queue.push_back((ra, rb));
                }
            }
        }
        // Unreachable for a sound registry: distinct canonical states differ
        // somewhere.
        unreachable!("distinct canonical states admit a separating path");
    }

    /// Smallest n >= 1 with g^n equal to the identity, searched up to `cap`.
    pub fn order(&self, g: Element, cap: usize) -> Result<OrderOutcome> {
        let (d, c) = (self.domain(g), self.codomain(g));
        if d != c {
            return Err(Error::NotIsotropy(self.name(g)));
        }
        let id = self.identity(d);
        let mut p = g;
        for n in 1..=cap {
            if p == id {
                return Ok(OrderOutcome::Finite(n));
            }
            if n < cap {
                p = self.compose(g, p)?;
            }
        }
        Ok(OrderOutcome::ExceedsCap)
    }

    /// Resolves a word of the word grammar into a canonical element.
    pub fn resolve(&self, word: &str) -> Result<Element> {
        let letters = crate::word::parse_word(word)?;
        self.resolve_letters(&letters)
    }

    pub fn resolve_letters(&self, letters: &[crate::word::Letter]) -> Result<Element> {
        use crate::word::Letter;
        let mut acc: Option<Element> = None;
        for letter in letters.iter().rev() {
            let el = match letter {
                Letter::Identity(v) => self.identity(self.graph.vertex_ix(v)?),
                Letter::State(id, inverted) => {
                    let ix = self
                        .automaton
                        .state_ix(id)
                        .ok_or_else(|| Error::UnknownLetter(id.clone()))?;
                    let b = self.base(ix);
                    if *inverted {
                        self.inverse(b)?
                    } else {
                        b
                    }
                }
            };
            acc = Some(match acc {
                None => el,
                Some(rest) => self.compose(el, rest).map_err(|e| match e {
                    Error::NonComposable(d) => Error::NonComposableWord(d),
                    other => other,
                })?,
            });
        }
        acc.ok_or_else(|| Error::NonComposableWord("empty word".into()))
    }
}

fn lookup(reg: &Registry, key: ExprKey) -> Option<Element> {
    match normalize(reg, key) {
        Norm::Canon(el) => Some(el),
        Norm::Key(k) => reg.memo.get(&k).copied(),
    }
}

enum Norm {
    Canon(Element),
    Key(ExprKey),
}

fn normalize(reg: &Registry, key: ExprKey) -> Norm {
    match key {
        ExprKey::Inv(x) => match reg.states[x.0].origin {
            Origin::Identity(_) => Norm::Canon(x),
            Origin::Inverse(y) => Norm::Canon(y),
            _ => Norm::Key(key),
        },
        ExprKey::Prod(x, y) => {
            if matches!(reg.states[x.0].origin, Origin::Identity(_)) {
                Norm::Canon(y)
            } else if matches!(reg.states[y.0].origin, Origin::Identity(_)) {
                Norm::Canon(x)
            } else {
                Norm::Key(key)
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum TRef {
    Canon(Element),
    Temp(usize),
}

struct TempState {
    d: usize,
    c: usize,
    trans: Vec<(usize, TRef)>,
    origin: Origin,
    key: Option<ExprKey>,
    /// Explicit (name, word) for base states; derived from the origin otherwise.
    names: Option<(String, String)>,
}

/// Closes an expression over canonical legs under restriction, producing a
/// finite temp system, then merges it into the registry by refinement.
fn canonize(
    graph: &DirectedGraph,
    reg: &mut Registry,
    key: ExprKey,
    cap: usize,
) -> Result<Element> {
    let root = match normalize(reg, key) {
        Norm::Canon(el) => return Ok(el),
        Norm::Key(k) => k,
    };
    if let Some(&el) = reg.memo.get(&root) {
        return Ok(el);
    }

    let mut temps: Vec<TempState> = Vec::new();
    let mut tmemo: HashMap<ExprKey, usize> = HashMap::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let alloc = |k: ExprKey,
                 reg: &Registry,
                 temps: &mut Vec<TempState>,
                 tmemo: &mut HashMap<ExprKey, usize>,
                 queue: &mut VecDeque<usize>|
     -> Result<usize> {
        if let Some(&t) = tmemo.get(&k) {
            return Ok(t);
        }
        if temps.len() >= cap {
            return Err(Error::ClosureCapExceeded(cap));
        }
        let (d, c, origin) = match k {
            ExprKey::Inv(x) => {
                let s = &reg.states[x.0];
                (s.c, s.d, Origin::Inverse(x))
            }
            ExprKey::Prod(x, y) => {
                let (sx, sy) = (&reg.states[x.0], &reg.states[y.0]);
                debug_assert_eq!(sx.d, sy.c);
                (sy.d, sx.c, Origin::Product(x, y))
            }
        };
        let t = temps.len();
        temps.push(TempState {
            d,
            c,
            trans: Vec::new(),
            origin,
            key: Some(k),
            names: None,
        });
        tmemo.insert(k, t);
        queue.push_back(t);
        Ok(t)
    };

    alloc(root, reg, &mut temps, &mut tmemo, &mut queue)?;

    while let Some(t) = queue.pop_front() {
        let key_t = temps[t].key.expect("closure temps carry keys");
        let mut trans = Vec::new();
        match key_t {
            ExprKey::Inv(x) => {
                let sx = reg.states[x.0].clone();
                // Reverse the bijection e -> x.e.
                let dom_edges = graph.edges_from(sx.d);
                let cod_edges = graph.edges_from(sx.c);
                let mut rev: Vec<Option<(usize, Element)>> = vec![None; cod_edges.len()];
                for (pos, &(img, rest)) in sx.trans.iter().enumerate() {
                    rev[graph.edge_position(img)] = Some((dom_edges[pos], rest));
                }
                for pos in 0..cod_edges.len() {
                    let (e, rest) = rev[pos].expect("(A1) bijection");
                    let child_key = ExprKey::Inv(rest);
                    let child = match normalize(reg, child_key) {
                        Norm::Canon(el) => TRef::Canon(el),
                        Norm::Key(k) => match reg.memo.get(&k) {
                            Some(&el) => TRef::Canon(el),
                            None => {
                                TRef::Temp(alloc(k, reg, &mut temps, &mut tmemo, &mut queue)?)
                            }
                        },
                    };
                    trans.push((e, child));
                }
            }
            ExprKey::Prod(x, y) => {
                let sy = reg.states[y.0].clone();
                let sx = reg.states[x.0].clone();
                for &(m1, r1) in &sy.trans {
                    let (m2, r2) = sx.trans[graph.edge_position(m1)];
                    let child_key = ExprKey::Prod(r2, r1);
                    let child = match normalize(reg, child_key) {
                        Norm::Canon(el) => TRef::Canon(el),
                        Norm::Key(k) => match reg.memo.get(&k) {
                            Some(&el) => TRef::Canon(el),
                            None => {
                                TRef::Temp(alloc(k, reg, &mut temps, &mut tmemo, &mut queue)?)
                            }
                        },
                    };
                    trans.push((m2, child));
                }
            }
        }
        temps[t].trans = trans;
    }

    let mapping = install_temps(reg, temps);
    Ok(mapping[0])
}

/// Partition refinement over the whole registry plus the temp system, then
/// merge: each temp either joins an existing canonical state or becomes a
/// new one. Returns the canonical element of each temp in order.
fn install_temps(reg: &mut Registry, temps: Vec<TempState>) -> Vec<Element> {
    let ncanon = reg.states.len();
    let total = ncanon + temps.len();

    let dc = |i: usize| -> (usize, usize) {
        if i < ncanon {
            (reg.states[i].d, reg.states[i].c)
        } else {
            (temps[i - ncanon].d, temps[i - ncanon].c)
        }
    };

    // Initial partition by (domain, codomain).
    let mut block = vec![0usize; total];
    {
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        for i in 0..total {
            let next = ids.len();
            let b = *ids.entry(dc(i)).or_insert(next);
            block[i] = b;
        }
    }
    let mut nblocks = block.iter().max().map(|m| m + 1).unwrap_or(0);

    loop {
        let mut ids: HashMap<(usize, Vec<(usize, usize)>), usize> = HashMap::new();
        let mut next_block = vec![0usize; total];
        for i in 0..total {
            let sig: Vec<(usize, usize)> = if i < ncanon {
                reg.states[i]
                    .trans
                    .iter()
                    .map(|&(img, rest)| (img, block[rest.0]))
                    .collect()
            } else {
                temps[i - ncanon]
                    .trans
                    .iter()
                    .map(|&(img, child)| {
                        let target = match child {
                            TRef::Canon(el) => el.0,
                            TRef::Temp(t) => ncanon + t,
                        };
                        (img, block[target])
                    })
                    .collect()
            };
            let nid = ids.len();
            let b = *ids.entry((block[i], sig)).or_insert(nid);
            next_block[i] = b;
        }
        let count = ids.len();
        block = next_block;
        if count == nblocks {
            break;
        }
        nblocks = count;
    }

    // Representative canonical state per block.
    let mut canon_of_block: HashMap<usize, Element> = HashMap::new();
    for i in 0..ncanon {
        let prev = canon_of_block.insert(block[i], Element(i));
        debug_assert!(prev.is_none(), "registry states must stay pairwise distinct");
    }

    // First pass: allocate element ids for temps.
    let mut mapping: Vec<Element> = Vec::with_capacity(temps.len());
    let mut new_block_elem: HashMap<usize, Element> = HashMap::new();
    let mut owners: Vec<usize> = Vec::new(); // new canon id -> temp index
    for (t, temp) in temps.iter().enumerate() {
        let b = block[ncanon + t];
        if let Some(&el) = canon_of_block.get(&b) {
            maybe_rename(reg, el, temp);
            mapping.push(el);
        } else if let Some(&el) = new_block_elem.get(&b) {
            mapping.push(el);
        } else {
            let id = reg.states.len();
            reg.states.push(StateData {
                d: temp.d,
                c: temp.c,
                trans: Vec::new(),
                name: String::new(),
                word: String::new(),
                origin: temp.origin,
            });
            owners.push(t);
            new_block_elem.insert(b, Element(id));
            mapping.push(Element(id));
        }
    }

    // Second pass: fill in transitions and names for the new states.
    for (k, &t) in owners.iter().enumerate() {
        let id = ncanon + k;
        let trans: Vec<(usize, Element)> = temps[t]
            .trans
            .iter()
            .map(|&(img, child)| {
                let el = match child {
                    TRef::Canon(el) => el,
                    TRef::Temp(u) => mapping[u],
                };
                (img, el)
            })
            .collect();
        let (name, word) = match &temps[t].names {
            Some(nw) => nw.clone(),
            None => derive_names(reg, temps[t].origin),
        };
        let st = &mut reg.states[id];
        st.trans = trans;
        st.name = name;
        st.word = word;
    }

    // Record memo entries for every temp expression.
    for (t, temp) in temps.iter().enumerate() {
        if let Some(k) = temp.key {
            reg.memo.insert(k, mapping[t]);
        }
    }

    mapping
}

/// Adopt a shorter defining word when a new derivation merges into an
/// existing composite state. Identities and base states keep their names.
fn maybe_rename(reg: &mut Registry, el: Element, temp: &TempState) {
    if matches!(
        reg.states[el.0].origin,
        Origin::Identity(_) | Origin::Base(_)
    ) {
        return;
    }
    let (name, word) = match &temp.names {
        Some(nw) => nw.clone(),
        None => derive_names(reg, temp.origin),
    };
    let cur = &reg.states[el.0].name;
    if name.len() < cur.len() || (name.len() == cur.len() && name < *cur) {
        reg.states[el.0].name = name;
        reg.states[el.0].word = word;
        reg.states[el.0].origin = temp.origin;
    }
}

fn derive_names(reg: &Registry, origin: Origin) -> (String, String) {
    match origin {
        Origin::Identity(_) | Origin::Base(_) => {
            unreachable!("identities and base states are named at installation")
        }
        Origin::Inverse(x) => {
            let nx = &reg.states[x.0].name;
            let wx = &reg.states[x.0].word;
            let name = if nx.contains('.') {
                format!("({nx})^-1")
            } else {
                format!("{nx}^-1")
            };
            let word = if wx.contains('.') {
                format!("({wx})^-1")
            } else {
                format!("{wx}^-1")
            };
            (name, word)
        }
        Origin::Product(x, y) => {
            let (sx, sy) = (&reg.states[x.0], &reg.states[y.0]);
            (
                format!("{}.{}", sx.name, sy.name),
                format!("{}.{}", sx.word, sy.word),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::fixtures;

    fn machine3() -> Machine {
        Machine::new(Arc::new(fixtures::example3()))
    }

    #[test]
    fn resolve_and_domains() {
        let m = machine3();
        let ba = m.resolve("b.a").unwrap();
        assert_eq!(m.domain(ba), 0);
        assert_eq!(m.codomain(ba), 0);
        let err = m.resolve("a.a").unwrap_err();
        assert!(matches!(err, Error::NonComposableWord(_)));
    }

    #[test]
    fn inverse_cancels() {
        let m = machine3();
        let g = m.resolve("a^-1.a").unwrap();
        assert_eq!(g, m.identity(0));
        assert_eq!(m.equal(g, m.identity(0)), EqualityOutcome::Equal);
    }

    #[test]
    fn apply_matches_paper_example() {
        let m = machine3();
        let g = m.graph().clone();
        let ba = m.resolve("b.a").unwrap();
        let (img, rest) = m.apply(ba, &Path::parse(&g, "1").unwrap()).unwrap();
        assert_eq!(img.display(&g), "2");
        let fa = m.base(m.automaton().state_ix("a").unwrap());
        assert_eq!(rest, fa);
        // (f_b f_a)^4 (111) = 112.
        let p4 = m.power(ba, 4).unwrap();
        let (img, _) = m.apply(p4, &Path::parse(&g, "1.1.1").unwrap()).unwrap();
        assert_eq!(img.display(&g), "1.1.2");
        // Identity on the empty path.
        let idv = m.identity(0);
        let (img, rest) = m.apply(idv, &Path::empty(0)).unwrap();
        assert!(img.is_empty());
        assert_eq!(rest, idv);
    }

    #[test]
    fn closure_of_generator() {
        let m = machine3();
        let fa = m.base(0);
        let cl = m.closure(fa, 100).unwrap();
        assert_eq!(cl.states.len(), 4); // f_a, id_v, f_b, id_w
        let idcl = m.closure(m.identity(0), 100).unwrap();
        assert_eq!(idcl.states.len(), 2);
    }

    #[test]
    fn words_power_expansion_equality() {
        let m = machine3();
        let sq = m.resolve("(b.a)^2").unwrap();
        let alt = m.resolve("(a^-1.b^-1)^-2").unwrap();
        assert_eq!(sq, alt);
        assert_eq!(m.equal(sq, alt), EqualityOutcome::Equal);
        let inv1 = m.inverse(m.resolve("b.a").unwrap()).unwrap();
        let inv2 = m.resolve("a^-1.b^-1").unwrap();
        assert_eq!(inv1, inv2);
    }

    #[test]
    fn equal_distinct_witness() {
        let m = machine3();
        let g = m.graph().clone();
        let ba = m.resolve("b.a").unwrap();
        match m.equal(ba, m.identity(0)) {
            EqualityOutcome::Distinct(path) => {
                assert_eq!(path.display(&g), "1");
                let (l, _) = m.apply(ba, &path).unwrap();
                let (r, _) = m.apply(m.identity(0), &path).unwrap();
                assert_ne!(l, r);
            }
            _ => panic!("expected distinct"),
        }
    }

    #[test]
    fn order_of_elements() {
        let m = machine3();
        let ba = m.resolve("b.a").unwrap();
        assert_eq!(m.order(ba, 10).unwrap(), OrderOutcome::ExceedsCap);
        assert_eq!(m.order(m.identity(1), 10).unwrap(), OrderOutcome::Finite(1));
        let fa = m.base(0);
        assert!(matches!(m.order(fa, 5), Err(Error::NotIsotropy(_))));
    }

    #[test]
    fn katsura_closure() {
        let (_, aut) = fixtures::katsura();
        let m = Machine::new(Arc::new(aut));
        let a2 = m.base(m.automaton().state_ix("a2").unwrap());
        let cl = m.closure(a2, 100).unwrap();
        assert_eq!(cl.states.len(), 4); // a2, a1, id_1, id_2
        assert_eq!(m.order(a2, 10).unwrap(), OrderOutcome::ExceedsCap);
    }

    #[test]
    fn restriction_by_empty_path_is_same_state() {
        let m = machine3();
        let ba = m.resolve("b.a").unwrap();
        let (_, rest) = m.apply(ba, &Path::empty(0)).unwrap();
        assert_eq!(rest, ba);
    }
}
