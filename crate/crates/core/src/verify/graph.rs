//! Basepointed labeled graphs for finitely generated subgroups of free
//! groups: wedge construction, folding, rank, and membership.
//!
//! A word with positive letter `g` from `u` to `v` is stored as a `g`-edge
//! `u -> v`; a negative letter is the same edge traversed backwards. Folding
//! repeatedly identifies the far endpoints of equally labeled edges leaving
//! (or entering) a common vertex, driven by a work queue over a union-find
//! partition. The language of reduced basepoint loops — the subgroup — is
//! unchanged by folding, and the folded graph is independent of the
//! identification order up to basepointed isomorphism.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::word::{Gen, Sign, Word};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    pub src: usize,
    pub gen: Gen,
    pub dst: usize,
}

/// Labeled digraph with a distinguished basepoint (vertex 0 after
/// construction and compaction).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgroupGraph {
    base: usize,
    vertex_count: usize,
    edges: Vec<Edge>,
    folded: bool,
}

#[derive(Error, Clone, Copy, PartialEq, Eq, Debug)]
pub enum GraphError {
    #[error("operation requires a folded graph")]
    Unfolded,
}

/// Result of [`build_graph`]: empty generator words carry no subgroup
/// information, so they are dropped and counted rather than rejected.
#[derive(Clone, Debug)]
pub struct WedgeBuild {
    pub graph: SubgroupGraph,
    pub dropped_empty: usize,
}

/// Wedge of loops at the basepoint, one loop per (nonempty) generator word.
pub fn build_graph(words: &[Word]) -> WedgeBuild {
    let mut edges = Vec::new();
    let mut vertex_count = 1usize;
    let mut dropped = 0usize;
    for w in words {
        if w.is_empty() {
            dropped += 1;
            continue;
        }
        let n = w.len();
        let start_id = vertex_count;
        for (j, l) in w.letters().iter().enumerate() {
            let a = if j == 0 { 0 } else { start_id + j - 1 };
            let b = if j + 1 == n { 0 } else { start_id + j };
            match l.sign {
                Sign::Plus => edges.push(Edge {
                    src: a,
                    gen: l.gen.clone(),
                    dst: b,
                }),
                Sign::Minus => edges.push(Edge {
                    src: b,
                    gen: l.gen.clone(),
                    dst: a,
                }),
            }
        }
        vertex_count += n - 1;
    }
    WedgeBuild {
        graph: SubgroupGraph {
            base: 0,
            vertex_count,
            edges,
            folded: false,
        },
        dropped_empty: dropped,
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns (winner, loser); no-op when already merged.
    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return None;
        }
        let (win, lose) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[lose] = win;
        Some((win, lose))
    }
}

impl SubgroupGraph {
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_folded(&self) -> bool {
        self.folded
    }

    /// Folds the graph deterministically.
    pub fn fold(&self) -> SubgroupGraph {
        self.fold_impl(None)
    }

    /// Folds with a seeded random processing order. The folded graph is the
    /// same up to basepointed isomorphism for every seed (see
    /// [`SubgroupGraph::canonical`]).
    pub fn fold_seeded(&self, seed: u64) -> SubgroupGraph {
        self.fold_impl(Some(ChaCha8Rng::seed_from_u64(seed)))
    }

    fn fold_impl(&self, mut rng: Option<ChaCha8Rng>) -> SubgroupGraph {
        let n = self.vertex_count;
        let mut uf = UnionFind::new(n);
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (eid, e) in self.edges.iter().enumerate() {
            incident[e.src].push(eid);
            if e.dst != e.src {
                incident[e.dst].push(eid);
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        let mut queue: VecDeque<usize> = order.into();
        while let Some(v0) = queue.pop_front() {
            let mut v = uf.find(v0);
            if v != v0 {
                continue; // merged away; the winner was re-enqueued
            }
            'rescan: loop {
                v = uf.find(v);
                let mut eids = incident[v].clone();
                if let Some(rng) = rng.as_mut() {
                    eids.shuffle(rng);
                }
                let mut seen: HashMap<(&Gen, bool), usize> = HashMap::new();
                for eid in eids {
                    let e = &self.edges[eid];
                    let s = uf.find(e.src);
                    let d = uf.find(e.dst);
                    for (here, other, outgoing) in [(s, d, true), (d, s, false)] {
                        if here != v {
                            continue;
                        }
                        match seen.get(&(&e.gen, outgoing)) {
                            Some(&prev) if prev != other => {
                                if let Some((win, lose)) = uf.union(prev, other) {
                                    let moved = std::mem::take(&mut incident[lose]);
                                    incident[win].extend(moved);
                                    queue.push_back(win);
                                    queue.push_back(uf.find(v));
                                    continue 'rescan;
                                }
                            }
                            Some(_) => {}
                            None => {
                                seen.insert((&e.gen, outgoing), other);
                            }
                        }
                    }
                }
                break;
            }
        }
        // compact: relabel representatives, dedupe parallel edges
        let mut reps: Vec<usize> = (0..n).filter(|&v| uf.find(v) == v).collect();
        reps.sort_unstable();
        let relabel: HashMap<usize, usize> =
            reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let edges: BTreeSet<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                src: relabel[&uf.find(e.src)],
                gen: e.gen.clone(),
                dst: relabel[&uf.find(e.dst)],
            })
            .collect();
        SubgroupGraph {
            base: relabel[&uf.find(self.base)],
            vertex_count: reps.len(),
            edges: edges.into_iter().collect(),
            folded: true,
        }
    }

    /// First Betti number `edges - vertices + 1`: the rank of the subgroup
    /// the folded graph represents.
    pub fn rank(&self) -> Result<usize, GraphError> {
        if !self.folded {
            return Err(GraphError::Unfolded);
        }
        Ok(self.edges.len() + 1 - self.vertex_count)
    }

    /// Whether `w` traces a basepoint-to-basepoint path; for a folded graph
    /// this decides membership of `w` in the subgroup.
    pub fn member(&self, w: &Word) -> Result<bool, GraphError> {
        if !self.folded {
            return Err(GraphError::Unfolded);
        }
        let mut out: HashMap<(usize, &Gen), usize> = HashMap::new();
        let mut inc: HashMap<(usize, &Gen), usize> = HashMap::new();
        for e in &self.edges {
            out.insert((e.src, &e.gen), e.dst);
            inc.insert((e.dst, &e.gen), e.src);
        }
        let mut cur = self.base;
        for l in w.letters() {
            let next = match l.sign {
                Sign::Plus => out.get(&(cur, &l.gen)),
                Sign::Minus => inc.get(&(cur, &l.gen)),
            };
            match next {
                Some(&v) => cur = v,
                None => return Ok(false),
            }
        }
        Ok(cur == self.base)
    }

    /// Canonical relabeling by breadth-first discovery order from the
    /// basepoint, with edges at each vertex explored in label order. Two
    /// folded graphs are basepoint-isomorphic iff their canonical forms are
    /// structurally equal.
    pub fn canonical(&self) -> SubgroupGraph {
        let mut adj: Vec<Vec<(Gen, bool, usize)>> = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.src].push((e.gen.clone(), true, e.dst));
            adj[e.dst].push((e.gen.clone(), false, e.src));
        }
        for list in &mut adj {
            list.sort();
        }
        let mut relabel: HashMap<usize, usize> = HashMap::new();
        relabel.insert(self.base, 0);
        let mut queue = VecDeque::from([self.base]);
        while let Some(v) = queue.pop_front() {
            for (_, _, t) in &adj[v] {
                if !relabel.contains_key(t) {
                    relabel.insert(*t, relabel.len());
                    queue.push_back(*t);
                }
            }
        }
        let edges: BTreeSet<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                src: relabel[&e.src],
                gen: e.gen.clone(),
                dst: relabel[&e.dst],
            })
            .collect();
        SubgroupGraph {
            base: 0,
            vertex_count: self.vertex_count,
            edges: edges.into_iter().collect(),
            folded: self.folded,
        }
    }
}

/// Whether the words freely generate a subgroup of rank exactly their count,
/// i.e. form a free basis of the subgroup they generate. Lists containing an
/// empty word are never a basis.
pub fn is_free_basis(words: &[Word]) -> bool {
    if words.iter().any(Word::is_empty) {
        return false;
    }
    let build = build_graph(words);
    let folded = build.graph.fold();
    folded.rank().expect("fold() returns a folded graph") == words.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{universal_word, universal_word_tf};
    use crate::word::Letter;

    fn w(text: &[(&str, i64)]) -> Word {
        let mut out = Word::empty();
        for &(n, e) in text {
            out = out.mul(&Word::from_gen(Gen::plain(n)).pow(e));
        }
        out
    }

    #[test]
    fn wedge_shape_of_single_letter_loops() {
        let build = build_graph(&[w(&[("x", 1)]), w(&[("y", 1)])]);
        assert_eq!(build.graph.vertex_count(), 1);
        assert_eq!(build.graph.edges().len(), 2);
        assert_eq!(build.dropped_empty, 0);
    }

    #[test]
    fn wedge_vertex_count_is_one_plus_interior() {
        let build = build_graph(&[w(&[("x", 1), ("y", 1)]), w(&[("y", 1)])]);
        assert_eq!(build.graph.vertex_count(), 2);
        let build = build_graph(&[universal_word(1).unwrap(), universal_word(2).unwrap()]);
        assert_eq!(build.graph.vertex_count(), 1 + 13 + 17);
    }

    #[test]
    fn empty_generator_words_are_dropped() {
        let build = build_graph(&[Word::empty(), w(&[("x", 1)])]);
        assert_eq!(build.dropped_empty, 1);
        assert_eq!(build.graph.edges().len(), 1);
    }

    #[test]
    fn folding_duplicate_generator_gives_rank_one() {
        let folded = build_graph(&[w(&[("x", 1)]), w(&[("x", 1)])]).graph.fold();
        assert_eq!(folded.rank().unwrap(), 1);
    }

    #[test]
    fn folding_keeps_recoverable_generators() {
        let folded = build_graph(&[w(&[("x", 1), ("y", 1)]), w(&[("y", 1)])])
            .graph
            .fold();
        assert_eq!(folded.rank().unwrap(), 2);
    }

    #[test]
    fn folded_hand_example_has_rank_two() {
        // x^2 and x y x^-1: folding merges all three x-successors of the base
        let conj = Word::from_gen(Gen::plain("y")).conj(&Word::from_gen(Gen::plain("x")).inv());
        let folded = build_graph(&[w(&[("x", 2)]), conj]).graph.fold();
        assert_eq!(folded.rank().unwrap(), 2);
        assert_eq!(folded.vertex_count(), 2);
        assert_eq!(folded.edges().len(), 3);
    }

    #[test]
    fn rank_requires_folded_graph() {
        let build = build_graph(&[w(&[("x", 2)])]);
        assert_eq!(build.graph.rank(), Err(GraphError::Unfolded));
    }

    #[test]
    fn membership_examples() {
        let folded = build_graph(&[w(&[("x", 1), ("y", 1)]), w(&[("y", 1)])])
            .graph
            .fold();
        assert!(folded.member(&w(&[("x", 1)])).unwrap());
        let folded = build_graph(&[w(&[("x", 2)])]).graph.fold();
        assert!(!folded.member(&w(&[("x", 1)])).unwrap());
        assert!(folded.member(&w(&[("x", -4)])).unwrap());
        assert!(folded.member(&Word::empty()).unwrap());
    }

    #[test]
    fn membership_in_generator_word_subgroup() {
        let words: Vec<Word> = (1..=5).map(|i| universal_word(i).unwrap()).collect();
        let folded = build_graph(&words).graph.fold();
        let probe = words[2].mul(&words[0].inv()); // a_3 a_1^-1
        assert!(folded.member(&probe).unwrap());
        assert!(!folded.member(&w(&[("x", 1)])).unwrap());
    }

    #[test]
    fn free_basis_checks() {
        // y z, y^2 z^2, y^3 z^3 over {y, z}
        let yz: Vec<Word> = (1..=3)
            .map(|i| {
                Word::from_gen(Gen::plain("y"))
                    .pow(i)
                    .mul(&Word::from_gen(Gen::plain("z")).pow(i))
            })
            .collect();
        assert!(is_free_basis(&yz));
        assert!(!is_free_basis(&[w(&[("x", 1)]), w(&[("x", 2)])]));
        let universal: Vec<Word> = (1..=8).map(|i| universal_word(i).unwrap()).collect();
        assert!(is_free_basis(&universal));
        let tf: Vec<Word> = (1..=8).map(|i| universal_word_tf(i).unwrap()).collect();
        assert!(is_free_basis(&tf));
    }

    #[test]
    fn wedge_of_independent_letters_has_full_rank() {
        for k in 1..=4usize {
            let names = ["x", "y", "z", "w"];
            let words: Vec<Word> = names[..k]
                .iter()
                .map(|n| Word::from_gen(Gen::plain(n)))
                .collect();
            let folded = build_graph(&words).graph.fold();
            assert_eq!(folded.rank().unwrap(), k);
        }
    }

    #[test]
    fn folding_is_confluent_across_orders() {
        let words = vec![
            w(&[("x", 1), ("y", 2), ("x", -1)]),
            w(&[("x", 2)]),
            w(&[("y", 1), ("x", 1), ("y", -1)]),
        ];
        let wedge = build_graph(&words).graph;
        let reference = wedge.fold().canonical();
        for seed in 0..20u64 {
            assert_eq!(wedge.fold_seeded(seed).canonical(), reference);
        }
    }

    #[test]
    fn folding_preserves_loop_language() {
        let words = vec![w(&[("x", 1), ("y", 1)]), w(&[("y", 1)])];
        let folded = build_graph(&words).graph.fold();
        // random products of the generators stay members
        for steps in [vec![0i64, 1], vec![1, 0, -1], vec![-2, 1, 2]] {
            let mut prod = Word::empty();
            for s in steps {
                let idx = (s.unsigned_abs() as usize) % 2;
                let f = if s < 0 {
                    words[idx].inv()
                } else {
                    words[idx].clone()
                };
                prod = prod.mul(&f);
            }
            assert!(folded.member(&prod).unwrap());
        }
    }

    #[test]
    fn self_loop_fold() {
        // x y x^-1 folds to a two-vertex graph with a y self-loop
        let conj = Word::reduce(vec![
            Letter::pos(Gen::plain("x")),
            Letter::pos(Gen::plain("y")),
            Letter::neg(Gen::plain("x")),
        ]);
        let folded = build_graph(std::slice::from_ref(&conj)).graph.fold();
        assert_eq!(folded.vertex_count(), 2);
        assert_eq!(folded.rank().unwrap(), 1);
        assert!(folded.member(&conj.pow(5)).unwrap());
        assert!(!folded.member(&Word::from_gen(Gen::plain("y"))).unwrap());
    }
}
