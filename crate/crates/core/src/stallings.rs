//! Stallings foldings.
//!
//! Every edge carries a *tag*: a word in the indices of the generators the
//! graph was folded from. Reading a closed path at the base vertex multiplies
//! the tags, which gives an expression of the path label in those generators.
//! Folding preserves this by a gauge transformation at the vertex that gets
//! merged away.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Letter, Symbol, Word};

/// Expression in generator indices; evaluates through [`SubgroupGraph::evaluate`].
pub type Expr = Word<usize>;

#[derive(Clone, Debug)]
struct Edge<S> {
    from: usize,
    to: usize,
    label: S,
    tag: Expr,
}

/// Folded core graph of a finitely generated subgroup of a free group.
#[derive(Clone, Debug)]
pub struct SubgroupGraph<S> {
    generators: Vec<Word<S>>,
    n_vertices: usize,
    edges: Vec<Edge<S>>,
    // out[v][letter] = edge id; an inverse letter walks an edge backwards
    out: Vec<BTreeMap<Letter<S>, usize>>,
}

/// A vertex where a cyclic word closes up, with the data needed to turn the
/// loop into an element of the subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopWitness<S> {
    pub vertex: usize,
    /// Spanning-tree path from the base vertex to `vertex`.
    pub conjugator: Word<S>,
    /// Expression of `conjugator * w * conjugator^-1` in the generators.
    pub expression: Expr,
}

struct Folder<S> {
    base: usize,
    edges: Vec<Option<Edge<S>>>,
    inc: Vec<Vec<usize>>,
    alive: Vec<bool>,
}

impl<S: Symbol> Folder<S> {
    fn new_vertex(&mut self) -> usize {
        self.inc.push(Vec::new());
        self.alive.push(true);
        self.inc.len() - 1
    }

    fn add_edge(&mut self, from: usize, to: usize, label: S, tag: Expr) {
        let id = self.edges.len();
        self.edges.push(Some(Edge { from, to, label, tag }));
        self.inc[from].push(id);
        if to != from {
            self.inc[to].push(id);
        }
    }

    fn add_path(&mut self, gen_index: usize, word: &Word<S>) {
        let n = word.len();
        if n == 0 {
            return;
        }
        let mut prev = self.base;
        for (i, l) in word.letters().iter().enumerate() {
            let next = if i + 1 == n { self.base } else { self.new_vertex() };
            let traversal = if i == 0 { Word::single(gen_index) } else { Word::identity() };
            if l.inv {
                self.add_edge(next, prev, l.sym.clone(), traversal.inverse());
            } else {
                self.add_edge(prev, next, l.sym.clone(), traversal);
            }
            prev = next;
        }
    }

    fn kill_edge(&mut self, id: usize) {
        if let Some(e) = self.edges[id].take() {
            self.inc[e.from].retain(|&x| x != id);
            self.inc[e.to].retain(|&x| x != id);
        }
    }

    /// Other endpoint and traversal tag when leaving `v` along `key`.
    fn traverse(&self, id: usize, key: &Letter<S>) -> (usize, Expr) {
        let e = self.edges[id].as_ref().expect("live edge");
        if key.inv {
            (e.from, e.tag.inverse())
        } else {
            (e.to, e.tag.clone())
        }
    }

    fn find_conflict(&self, v: usize) -> Option<(Letter<S>, usize, usize)> {
        let mut seen: HashMap<Letter<S>, usize> = HashMap::new();
        for &id in &self.inc[v] {
            let e = self.edges[id].as_ref().expect("live edge");
            let mut keys = Vec::with_capacity(2);
            if e.from == v {
                keys.push(Letter::pos(e.label.clone()));
            }
            if e.to == v {
                keys.push(Letter::neg(e.label.clone()));
            }
            for k in keys {
                if let Some(&other) = seen.get(&k) {
                    return Some((k, other, id));
                }
                seen.insert(k, id);
            }
        }
        None
    }

    fn fold_at(&mut self, key: Letter<S>, e1: usize, e2: usize) -> usize {
        let (mut u1, mut t1) = self.traverse(e1, &key);
        let (mut u2, mut t2) = self.traverse(e2, &key);
        if u1 == u2 {
            self.kill_edge(e2);
            return u1;
        }
        let mut drop = e2;
        if u2 == self.base {
            std::mem::swap(&mut u1, &mut u2);
            std::mem::swap(&mut t1, &mut t2);
            drop = e1;
        }
        // gauge at u2 by gamma makes the dropped edge's traversal tag equal the kept one's
        let gamma = &t2.inverse() * &t1;
        let gamma_inv = gamma.inverse();
        self.kill_edge(drop);
        let incident = std::mem::take(&mut self.inc[u2]);
        for id in incident {
            let e = self.edges[id].as_mut().expect("live edge");
            let mut tag = e.tag.clone();
            if e.from == u2 {
                tag = &gamma_inv * &tag;
                e.from = u1;
            }
            if e.to == u2 {
                tag = &tag * &gamma;
                e.to = u1;
            }
            e.tag = tag;
            if !self.inc[u1].contains(&id) {
                self.inc[u1].push(id);
            }
        }
        self.alive[u2] = false;
        u1
    }

    fn fold_all(&mut self) {
        let mut work: Vec<usize> = (0..self.inc.len()).collect();
        while let Some(v) = work.pop() {
            if !self.alive[v] {
                continue;
            }
            if let Some((key, e1, e2)) = self.find_conflict(v) {
                let merged = self.fold_at(key, e1, e2);
                work.push(merged);
                if self.alive[v] {
                    work.push(v);
                }
            }
        }
    }

    fn prune(&mut self) {
        loop {
            let mut changed = false;
            for v in 0..self.inc.len() {
                if v == self.base || !self.alive[v] {
                    continue;
                }
                let degree: usize = self.inc[v]
                    .iter()
                    .map(|&id| {
                        let e = self.edges[id].as_ref().expect("live edge");
                        if e.from == e.to {
                            2
                        } else {
                            1
                        }
                    })
                    .sum();
                if degree <= 1 {
                    for id in self.inc[v].clone() {
                        self.kill_edge(id);
                    }
                    self.alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
}

impl<S: Symbol> SubgroupGraph<S> {
    /// Folds the subgroup generated by `generators` (reduced first; empty
    /// words are ignored).
    pub fn fold(generators: &[Word<S>]) -> Self {
        let mut f = Folder { base: 0, edges: Vec::new(), inc: vec![Vec::new()], alive: vec![true] };
        for (i, g) in generators.iter().enumerate() {
            f.add_path(i, &g.reduced());
        }
        f.fold_all();
        f.prune();

        // canonical numbering: BFS from the base in letter order
        let mut adj: Vec<BTreeMap<Letter<S>, usize>> = vec![BTreeMap::new(); f.inc.len()];
        for (id, e) in f.edges.iter().enumerate() {
            if let Some(e) = e {
                adj[e.from].insert(Letter::pos(e.label.clone()), id);
                adj[e.to].insert(Letter::neg(e.label.clone()), id);
            }
        }
        let mut order = vec![usize::MAX; f.inc.len()];
        let mut queue = VecDeque::from([f.base]);
        order[f.base] = 0;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for (key, &id) in &adj[v] {
                let e = f.edges[id].as_ref().expect("live edge");
                let u = if key.inv { e.from } else { e.to };
                if order[u] == usize::MAX {
                    order[u] = count;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        let mut edges: Vec<Edge<S>> = f
            .edges
            .into_iter()
            .flatten()
            .map(|e| Edge { from: order[e.from], to: order[e.to], ..e })
            .collect();
        edges.sort_by(|x, y| (x.from, &x.label, x.to).cmp(&(y.from, &y.label, y.to)));
        let mut out = vec![BTreeMap::new(); count];
        for (id, e) in edges.iter().enumerate() {
            out[e.from].insert(Letter::pos(e.label.clone()), id);
            out[e.to].insert(Letter::neg(e.label.clone()), id);
        }
        SubgroupGraph { generators: generators.to_vec(), n_vertices: count, edges, out }
    }

    pub fn generators(&self) -> &[Word<S>] {
        &self.generators
    }

    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Rank of the subgroup, `E - V + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.n_vertices
    }

    fn step(&self, v: usize, l: &Letter<S>) -> Option<(usize, &Expr, bool)> {
        let id = *self.out[v].get(l)?;
        let e = &self.edges[id];
        Some(if l.inv { (e.from, &e.tag, true) } else { (e.to, &e.tag, false) })
    }

    /// Follows `w` from `start`; returns the end vertex and the tag product.
    fn read(&self, start: usize, w: &Word<S>) -> Option<(usize, Expr)> {
        let mut v = start;
        let mut tags: Vec<Letter<usize>> = Vec::new();
        for l in w.letters() {
            let (next, tag, backwards) = self.step(v, l)?;
            if backwards {
                tags.extend(tag.inverse().into_letters());
            } else {
                tags.extend(tag.letters().iter().cloned());
            }
            v = next;
        }
        Some((v, Word::from_letters(tags).reduced()))
    }

    /// Expression of `w` in the generators if `w` lies in the subgroup.
    pub fn contains(&self, w: &Word<S>) -> Option<Expr> {
        match self.read(0, &w.reduced()) {
            Some((0, e)) => Some(e),
            _ => None,
        }
    }

    /// Substitutes generator words into an expression.
    pub fn evaluate(&self, expr: &Expr) -> Word<S> {
        expr.substitute(|&i| self.generators[i].clone())
    }

    /// Spanning-tree paths from the base, and the tree edge set.
    fn spanning_tree(&self) -> (Vec<Word<S>>, Vec<bool>) {
        let mut path: Vec<Option<Word<S>>> = vec![None; self.n_vertices];
        let mut in_tree = vec![false; self.edges.len()];
        path[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for (key, &id) in &self.out[v] {
                let e = &self.edges[id];
                let u = if key.inv { e.from } else { e.to };
                if path[u].is_none() {
                    let p = path[v].as_ref().expect("visited").concat(&Word::from_letters(vec![key.clone()]));
                    path[u] = Some(p);
                    in_tree[id] = true;
                    queue.push_back(u);
                }
            }
        }
        (path.into_iter().map(|p| p.expect("connected graph")).collect(), in_tree)
    }

    /// Free basis read off a spanning tree; it has [`rank`](Self::rank) elements.
    pub fn basis(&self) -> Vec<Word<S>> {
        let (path, in_tree) = self.spanning_tree();
        self.edges
            .iter()
            .zip(in_tree)
            .filter(|(_, t)| !t)
            .map(|(e, _)| {
                path[e.from]
                    .concat(&Word::single(e.label.clone()))
                    .concat(&path[e.to].inverse())
                    .reduced()
            })
            .collect()
    }

    /// True iff some conjugate of `w` lies in the subgroup.
    pub fn cyclic_loop_member(&self, w: &Word<S>) -> Result<bool> {
        Ok(self.cyclic_loop_witness(w)?.is_some())
    }

    /// The first vertex (in canonical order) at which the cyclic core of `w`
    /// reads a closed loop.
    ///
    /// The witness refers to the cyclic core, not to `w` itself.
    pub fn cyclic_loop_witness(&self, w: &Word<S>) -> Result<Option<LoopWitness<S>>> {
        let (core, _) = w.cyclic_reduce();
        if core.is_empty() {
            return Err(Error::EmptyWord);
        }
        let (path, _) = self.spanning_tree();
        for (v, p) in path.iter().enumerate().take(self.n_vertices) {
            if let Some((end, loop_tags)) = self.read(v, &core) {
                if end == v {
                    let (_, to_v) = self.read(0, p).expect("tree path is readable");
                    let expression = &(&to_v * &loop_tags) * &to_v.inverse();
                    return Ok(Some(LoopWitness { vertex: v, conjugator: p.clone(), expression }));
                }
            }
        }
        Ok(None)
    }

    /// Edge list in canonical vertex numbering; equal for equal subgroups.
    pub fn canonical_edges(&self) -> Vec<(usize, S, usize)> {
        self.edges.iter().map(|e| (e.from, e.label.clone(), e.to)).collect()
    }

    /// Labeled-graph isomorphism of two folded graphs (base preserved).
    pub fn same_subgroup(&self, other: &Self) -> bool {
        self.n_vertices == other.n_vertices && self.canonical_edges() == other.canonical_edges()
    }
}

impl<S: Symbol + fmt::Display> SubgroupGraph<S> {
    /// Line-based dump: one `vertex edge-label vertex` triple per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for e in &self.edges {
            s.push_str(&format!("{} {} {}\n", e.from, e.label, e.to));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{w, Generator};

    fn g(gens: &[&str]) -> SubgroupGraph<Generator> {
        SubgroupGraph::fold(&gens.iter().map(|s| w(s)).collect::<Vec<_>>())
    }

    #[test]
    fn single_loop() {
        let h = g(&["a1"]);
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.contains(&w("a1^3")), Some(Word::power_of(0, 3)));
        assert_eq!(h.contains(&w("b1")), None);
    }

    #[test]
    fn wedge_of_two() {
        let h = g(&["a1", "b1"]);
        assert_eq!(h.rank(), 2);
        let mut b = h.basis();
        b.sort();
        assert_eq!(b, vec![w("a1"), w("b1")]);
    }

    #[test]
    fn square_roots_fold() {
        let h = g(&["a1^2"]);
        assert_eq!(h.basis(), vec![w("a1^2")]);
        assert!(h.contains(&w("a1")).is_none());
    }

    #[test]
    fn products_membership() {
        let h = g(&["a1 b1", "a1 b1^-1"]);
        assert_eq!(h.rank(), 2);
        assert!(h.contains(&w("a1")).is_none());
        // no a1 a1 path leaves the base: a1^2 is not a member
        assert!(h.contains(&w("a1^2")).is_none());
        let x = w("a1 b1 a1 b1^-1 b1 a1^-1");
        let e = h.contains(&x).expect("product of generators");
        assert_eq!(h.evaluate(&e), x.reduced());
    }

    #[test]
    fn basis_refolds() {
        let h = g(&["a1 b1", "b1 a1"]);
        let b = h.basis();
        assert_eq!(b.len(), 2);
        assert!(SubgroupGraph::fold(&b).same_subgroup(&h));
    }

    #[test]
    fn cyclic_members() {
        assert!(g(&["a1"]).cyclic_loop_member(&w("b1 a1 b1^-1")).unwrap());
        assert!(!g(&["a1"]).cyclic_loop_member(&w("b1")).unwrap());
        let h = g(&["a1 b1"]);
        let wit = h.cyclic_loop_witness(&w("b1 a1")).unwrap().unwrap();
        let conj = wit.conjugator.concat(&w("b1 a1")).concat(&wit.conjugator.inverse()).reduced();
        assert_eq!(h.evaluate(&wit.expression), conj);
        assert_eq!(g(&["a1"]).cyclic_loop_member(&Word::identity()), Err(Error::EmptyWord));
    }

    #[test]
    fn folding_with_relations_among_generators() {
        // a1 appears twice; the second copy is redundant
        let h = g(&["a1", "a1", "b1 a1 b1^-1"]);
        assert_eq!(h.rank(), 2);
        assert!(h.contains(&w("b1")).is_none());
        let y = w("b1 a1^2 b1^-1 a1");
        let e = h.contains(&y).unwrap();
        assert_eq!(h.evaluate(&e), y);
    }

    #[test]
    fn dump_format() {
        let d = g(&["a1 b1"]).dump();
        assert_eq!(d.lines().count(), 2);
        assert!(d.lines().all(|l| l.split_whitespace().count() == 3));
    }
}
