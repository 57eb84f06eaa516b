//! Folded core graphs of subgroups of `F_k`.
//!
//! A [`StallingsGraph`] is stored in canonical form: vertices are numbered in
//! breadth-first order from the basepoint, visiting neighbours in letter-code
//! order. Two graphs describe the same subgroup exactly when they are equal.
//! Schreier graphs of transitive finite actions use the same representation,
//! so finite-index subgroups compare equal however they were given.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::action::FiniteAction;
use super::automaton::WordAutomaton;
use crate::error::{invalid, Result};
use crate::space::{Letter, Word};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StallingsGraph {
    rank: usize,
    /// `adj[v][code]` is the endpoint of the edge leaving `v` labelled by the letter `code`.
    adj: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeRecord {
    pub from: usize,
    pub label: char,
    pub to: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            // Keep the smaller id so the basepoint 0 stays a root.
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi] = lo;
        }
    }
}

impl StallingsGraph {
    /// Folds the bouquet of `generators` into the core graph of the subgroup they generate.
    pub fn fold(rank: usize, generators: &[Word]) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| !g.fits_rank(rank)) {
            return invalid(format!("generator {g} does not fit rank {rank}"));
        }
        let mut n = 1usize;
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        for g in generators.iter().filter(|g| !g.is_empty()) {
            let mut cur = 0usize;
            for (i, &l) in g.letters().iter().enumerate() {
                let next = if i + 1 == g.len() {
                    0
                } else {
                    n += 1;
                    n - 1
                };
                if l.is_inverse() {
                    edges.push((next, l.generator(), cur));
                } else {
                    edges.push((cur, l.generator(), next));
                }
                cur = next;
            }
        }
        let mut uf = UnionFind((0..n).collect());
        loop {
            for e in edges.iter_mut() {
                *e = (uf.find(e.0), e.1, uf.find(e.2));
            }
            edges.sort_unstable();
            edges.dedup();
            let mut merge = None;
            let mut outgoing: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            let mut incoming: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for &(s, g, t) in &edges {
                if let Some(&t2) = outgoing.get(&(s, g)) {
                    if t2 != t {
                        merge = Some((t, t2));
                        break;
                    }
                }
                if let Some(&s2) = incoming.get(&(t, g)) {
                    if s2 != s {
                        merge = Some((s, s2));
                        break;
                    }
                }
                outgoing.insert((s, g), t);
                incoming.insert((t, g), s);
            }
            match merge {
                Some((a, b)) => uf.union(a, b),
                None => break,
            }
        }
        let mut adj = vec![vec![NONE; 2 * rank]; n];
        for &(s, g, t) in &edges {
            adj[s][2 * g] = t as u32;
            adj[t][2 * g + 1] = s as u32;
        }
        prune_to_core(&mut adj);
        Ok(StallingsGraph::canonical(rank, &adj))
    }

    /// The whole group: one vertex carrying a loop for every generator.
    pub fn full(rank: usize) -> Self {
        let adj = vec![(0..2 * rank).map(|_| 0u32).collect()];
        StallingsGraph { rank, adj }
    }

    /// Schreier graph of a transitive action, based at `point`. Edges are
    /// `p --x--> x^-1 . p`, so reading `w` from `point` ends at `w^-1 . point`.
    pub fn from_action(action: &FiniteAction, point: usize) -> Result<Self> {
        if point >= action.size() {
            return invalid(format!("point {point} outside an action on {} points", action.size()));
        }
        let rank = action.rank();
        let adj: Vec<Vec<u32>> = (0..action.size())
            .map(|p| {
                Letter::alphabet(rank)
                    .map(|l| action.act_letter(l.inverse(), p) as u32)
                    .collect()
            })
            .collect();
        // Reindex so that `point` becomes vertex 0; a transposition is its own inverse.
        let mut perm: Vec<usize> = (0..action.size()).collect();
        perm.swap(0, point);
        let adj: Vec<Vec<u32>> = perm
            .iter()
            .map(|&p| adj[p].iter().map(|&t| perm[t as usize] as u32).collect())
            .collect();
        Ok(StallingsGraph::canonical(rank, &adj))
    }

    fn canonical(rank: usize, adj: &[Vec<u32>]) -> Self {
        let mut new_id = vec![NONE; adj.len()];
        let mut order = vec![0usize];
        new_id[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &t in &adj[v] {
                if t != NONE && new_id[t as usize] == NONE {
                    new_id[t as usize] = order.len() as u32;
                    order.push(t as usize);
                    queue.push_back(t as usize);
                }
            }
        }
        let adj = order
            .iter()
            .map(|&v| adj[v].iter().map(|&t| if t == NONE { NONE } else { new_id[t as usize] }).collect())
            .collect();
        StallingsGraph { rank, adj }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn target(&self, v: usize, l: Letter) -> Option<usize> {
        let t = self.adj[v][l.code()];
        (t != NONE).then_some(t as usize)
    }

    /// Positive edges `(from, generator, to)` in canonical order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (v, row) in self.adj.iter().enumerate() {
            for g in 0..self.rank {
                if row[2 * g] != NONE {
                    out.push((v, g, row[2 * g] as usize));
                }
            }
        }
        out
    }

    pub fn edge_records(&self) -> Vec<EdgeRecord> {
        self.edges()
            .into_iter()
            .map(|(from, g, to)| EdgeRecord { from, label: Letter::new(g, false).to_char(), to })
            .collect()
    }

    pub fn contains(&self, w: &Word) -> bool {
        let mut v = 0usize;
        for &l in w.letters() {
            match self.target(v, l) {
                Some(t) => v = t,
                None => return false,
            }
        }
        v == 0
    }

    /// Every vertex has all `2k` edges, i.e. the subgroup has finite index.
    pub fn is_complete(&self) -> bool {
        self.adj.iter().all(|row| row.iter().all(|&t| t != NONE))
    }

    /// Index in `F_k` when finite.
    pub fn index(&self) -> Option<usize> {
        self.is_complete().then(|| self.vertex_count())
    }

    /// The permutation action on vertices, when the graph is complete.
    /// Vertex 0 is the basepoint and its stabilizer is this subgroup.
    pub fn to_action(&self) -> Option<FiniteAction> {
        if !self.is_complete() {
            return None;
        }
        // x . p = the vertex reached from p along x^-1.
        let images = (0..self.rank)
            .map(|g| (0..self.vertex_count()).map(|p| self.adj[p][2 * g + 1] as usize).collect())
            .collect();
        FiniteAction::new(images).ok()
    }

    /// Breadth-first spanning tree words from the basepoint to every vertex.
    fn tree_paths(&self) -> Vec<Word> {
        let mut paths: Vec<Option<Word>> = vec![None; self.vertex_count()];
        paths[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for l in Letter::alphabet(self.rank) {
                if let Some(t) = self.target(v, l) {
                    if paths[t].is_none() {
                        paths[t] = Some(paths[v].as_ref().unwrap().push(l));
                        queue.push_back(t);
                    }
                }
            }
        }
        paths.into_iter().map(|p| p.expect("graph is connected")).collect()
    }

    /// A free basis read off the spanning tree: one generator per non-tree edge.
    pub fn basis(&self) -> Vec<Word> {
        let paths = self.tree_paths();
        let mut out = Vec::new();
        for (v, g, t) in self.edges() {
            let l = Letter::new(g, false);
            let through = paths[v].push(l);
            if through == paths[t] || paths[t].push(l.inverse()) == paths[v] {
                continue;
            }
            out.push(through.mul(&paths[t].inverse()));
        }
        out
    }

    /// Graph distance (ignoring labels and direction) from every vertex to the basepoint.
    pub fn distances_to_base(&self) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        dist[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &t in &self.adj[v] {
                if t != NONE && dist[t as usize] == usize::MAX {
                    dist[t as usize] = dist[v] + 1;
                    queue.push_back(t as usize);
                }
            }
        }
        dist
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&t| t != NONE).count()
    }

    pub fn is_folded_core(&self) -> bool {
        let folded = (0..self.rank).all(|g| {
            let mut seen = vec![false; self.vertex_count()];
            self.adj.iter().all(|row| {
                let t = row[2 * g];
                t == NONE || !std::mem::replace(&mut seen[t as usize], true)
            })
        });
        folded && (1..self.vertex_count()).all(|v| self.degree(v) >= 2)
    }
}

fn prune_to_core(adj: &mut [Vec<u32>]) {
    loop {
        let mut changed = false;
        for v in 1..adj.len() {
            let deg = adj[v].iter().filter(|&&t| t != NONE).count();
            if deg == 1 {
                let code = adj[v].iter().position(|&t| t != NONE).unwrap();
                let t = adj[v][code] as usize;
                adj[v][code] = NONE;
                adj[t][code ^ 1] = NONE;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Membership automaton over a graph, with graph distances for pruning.
pub struct GraphAutomaton<'a> {
    graph: &'a StallingsGraph,
    dist: Vec<usize>,
}

impl<'a> GraphAutomaton<'a> {
    pub fn new(graph: &'a StallingsGraph) -> Self {
        GraphAutomaton { dist: graph.distances_to_base(), graph }
    }
}

impl WordAutomaton for GraphAutomaton<'_> {
    type State = usize;

    fn rank(&self) -> usize {
        self.graph.rank
    }

    fn start(&self) -> usize {
        0
    }

    fn step(&self, v: &usize, l: Letter) -> Option<usize> {
        self.graph.target(*v, l)
    }

    fn accepts(&self, v: &usize) -> bool {
        *v == 0
    }

    fn may_accept_within(&self, v: &usize, steps: usize) -> bool {
        self.dist[*v] <= steps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::TreeModel;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn fold(gens: &[&str]) -> StallingsGraph {
        StallingsGraph::fold(2, &gens.iter().map(|s| w(s)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cyclic_subgroup_is_a_loop() {
        let g = fold(&["a"]);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edges(), vec![(0, 0, 0)]);
        assert!(g.contains(&w("aaa")) && !g.contains(&w("b")));
    }

    #[test]
    fn full_group_is_a_bouquet() {
        let g = fold(&["a", "b"]);
        assert_eq!(g, StallingsGraph::full(2));
        assert_eq!(g.index(), Some(1));
    }

    #[test]
    fn two_generator_example() {
        let g = fold(&["aa", "ab"]);
        assert_eq!(g.vertex_count(), 2);
        assert!(!g.contains(&w("a")));
        assert!(g.contains(&w("aaab")));
        assert!(g.is_folded_core());
        assert_eq!(g.index(), None);
    }

    /// Brute force: all products of at most `len` generators and inverses.
    fn generated_up_to(gens: &[Word], len: usize) -> Vec<Word> {
        let mut sym: Vec<Word> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
        sym.sort();
        let mut frontier = vec![Word::identity()];
        let mut all = frontier.clone();
        for _ in 0..len {
            let mut next = Vec::new();
            for f in &frontier {
                for s in &sym {
                    next.push(f.mul(s));
                }
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        all.sort();
        all.dedup();
        all
    }

    #[test]
    fn a_is_not_generated_by_aa_and_ab() {
        let gens = [w("aa"), w("ab")];
        let products = generated_up_to(&gens, 4);
        assert!(!products.contains(&w("a")));
        assert!(products.contains(&w("aaab")));
        let g = StallingsGraph::fold(2, &gens).unwrap();
        assert!(products.iter().all(|p| g.contains(p)));
    }

    #[test]
    fn membership_matches_generator_products() {
        let t = TreeModel::new(2).unwrap();
        for gens in [vec!["aa", "ab"], vec!["abA", "bb"], vec!["aab", "bA"]] {
            let gens: Vec<Word> = gens.iter().map(|s| w(s)).collect();
            let g = StallingsGraph::fold(2, &gens).unwrap();
            let products = generated_up_to(&gens, 5);
            for x in t.ball(5) {
                if products.binary_search(&x).is_ok() {
                    assert!(g.contains(&x), "{x} should be in the subgroup");
                }
            }
            assert!(g.is_folded_core());
        }
    }

    #[test]
    fn refolding_a_basis_is_idempotent() {
        for gens in [vec!["aa", "ab"], vec!["abA", "bb", "BaaB"], vec!["ab", "ba"]] {
            let g = fold(&gens);
            let again = StallingsGraph::fold(2, &g.basis()).unwrap();
            assert_eq!(g, again);
        }
    }

    #[test]
    fn conjugation_gives_lollipop() {
        let g = fold(&["bAB"]);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.degree(0), 1);
        assert!(g.contains(&w("baaB")));
    }

    #[test]
    fn schreier_graph_round_trips() {
        let act = FiniteAction::new(vec![vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let g = StallingsGraph::from_action(&act, 0).unwrap();
        assert_eq!(g.index(), Some(3));
        let t = TreeModel::new(2).unwrap();
        for x in t.ball(4) {
            assert_eq!(g.contains(&x), act.act(&x, 0) == 0, "{x}");
        }
        let back = g.to_action().unwrap();
        assert_eq!(StallingsGraph::from_action(&back, 0).unwrap(), g);
        // Folding a basis of the stabilizer recovers the same graph.
        assert_eq!(StallingsGraph::fold(2, &g.basis()).unwrap(), g);
    }
}
