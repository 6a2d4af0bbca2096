//! Exhaustive, deterministic enumerators used as oracles for the closed forms.
//!
//! Rooted and PPR forests come from a backtracking search over parent
//! arrays that rejects a parent choice as soon as it closes a cycle.
//! Unrooted forests come from a search over edge subsets that keeps the
//! chosen edges acyclic with an undoable union-find. Both searches run in
//! lexicographic order of the canonical encoding, so every stream has a
//! fixed order across runs.
//!
//! Counting can be split over the first branching decision and run on a
//! rayon pool; the result is the same sum as the sequential count.

use rayon::prelude::*;

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::exactmath::Natural;
use crate::model::{PprForest, RootedForest, UnrootedForest, Vertex};

pub const DEFAULT_LIMIT: usize = 8;

const UNSET: usize = usize::MAX;

/// Backtracking search over parent assignments for the `free` vertices.
///
/// Positions not in `free` keep their preset parent. A candidate parent is
/// accepted only if it does not create a cycle, and, when a root budget is
/// set, only if the number of free vertices left as roots can still land
/// inside the budget.
#[derive(Clone, Debug)]
struct ParentSearch {
    first: Vertex,
    parent: Vec<Option<Vertex>>,
    free: Vec<Vertex>,
    options: Vec<Option<Vertex>>,
    cursor: Vec<usize>,
    level: usize,
    new_roots: usize,
    min_roots: usize,
    max_roots: usize,
    even_roots: bool,
    // Option indices allowed at level 0, for splitting the search.
    first_span: (usize, usize),
    started: bool,
    done: bool,
}

impl ParentSearch {
    fn new(
        first: Vertex,
        parent: Vec<Option<Vertex>>,
        free: Vec<Vertex>,
        options: Vec<Option<Vertex>>,
    ) -> Self {
        let levels = free.len();
        let span = (0, options.len());
        ParentSearch {
            first,
            parent,
            cursor: vec![UNSET; levels],
            free,
            options,
            level: 0,
            new_roots: 0,
            min_roots: 0,
            max_roots: usize::MAX,
            even_roots: false,
            first_span: span,
            started: false,
            done: false,
        }
    }

    fn parent_of(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v - self.first]
    }

    fn closes_cycle(&self, v: Vertex, p: Vertex) -> bool {
        let mut at = Some(p);
        while let Some(x) = at {
            if x == v {
                return true;
            }
            at = self.parent_of(x);
        }
        false
    }

    fn accepts(&self, level: usize, option: Option<Vertex>) -> bool {
        let v = self.free[level];
        let remaining = self.free.len() - level - 1;
        match option {
            Some(p) => {
                p != v && self.new_roots + remaining >= self.min_roots && !self.closes_cycle(v, p)
            }
            None => {
                self.new_roots < self.max_roots && self.new_roots + 1 + remaining >= self.min_roots
            }
        }
    }

    fn assign(&mut self, level: usize, index: usize) {
        let option = self.options[index];
        let v = self.free[level];
        self.parent[v - self.first] = option;
        if option.is_none() {
            self.new_roots += 1;
        }
        self.cursor[level] = index;
    }

    fn unassign(&mut self, level: usize) {
        let index = self.cursor[level];
        if index == UNSET {
            return;
        }
        if self.options[index].is_none() {
            self.new_roots -= 1;
        }
        let v = self.free[level];
        self.parent[v - self.first] = None;
        self.cursor[level] = UNSET;
    }

    fn complete_ok(&self) -> bool {
        !self.even_roots || self.new_roots.is_multiple_of(2)
    }

    fn span(&self, level: usize) -> (usize, usize) {
        if level == 0 {
            self.first_span
        } else {
            (0, self.options.len())
        }
    }

    /// Moves to the next complete assignment. Returns `false` once exhausted.
    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        let levels = self.free.len();
        if levels == 0 {
            self.done = true;
            let fresh = !self.started;
            self.started = true;
            return fresh && self.complete_ok();
        }
        if self.started {
            self.level = levels - 1;
        } else {
            self.started = true;
            self.level = 0;
        }
        loop {
            let level = self.level;
            let (lo, hi) = self.span(level);
            let from = match self.cursor[level] {
                UNSET => lo,
                current => current + 1,
            };
            self.unassign(level);
            match (from..hi).find(|&i| self.accepts(level, self.options[i])) {
                Some(index) => {
                    self.assign(level, index);
                    if level + 1 == levels {
                        if self.complete_ok() {
                            return true;
                        }
                    } else {
                        self.level += 1;
                    }
                }
                None => {
                    if level == 0 {
                        self.done = true;
                        return false;
                    }
                    self.level -= 1;
                }
            }
        }
    }

    /// Splits the search into one piece per admissible option at level 0.
    fn split(&self) -> Vec<ParentSearch> {
        if self.free.is_empty() {
            return vec![self.clone()];
        }
        (self.first_span.0..self.first_span.1)
            .map(|i| {
                let mut piece = self.clone();
                piece.first_span = (i, i + 1);
                piece
            })
            .collect()
    }

    fn count(mut self) -> u64 {
        let mut total = 0;
        while self.advance() {
            total += 1;
        }
        total
    }
}

/// Every forest of rooted trees on `[first, first + len)` whose root set is
/// fixed in advance.
#[derive(Clone, Debug)]
pub struct RootedForests {
    search: ParentSearch,
}

impl Iterator for RootedForests {
    type Item = RootedForest;

    fn next(&mut self) -> Option<RootedForest> {
        self.search.advance().then(|| {
            RootedForest::from_parts_unchecked(self.search.first, self.search.parent.clone())
        })
    }
}

/// Lexicographic odometer over the perfect matchings of a sorted list.
/// Digit `i` picks which of the still-unmatched elements is paired with the
/// smallest unmatched one.
#[derive(Clone, Debug)]
struct Matchings {
    items: Vec<Vertex>,
    digits: Vec<usize>,
    fresh: bool,
}

impl Matchings {
    fn new(items: Vec<Vertex>) -> Self {
        debug_assert!(items.len().is_multiple_of(2));
        let digits = vec![0; items.len() / 2];
        Matchings {
            items,
            digits,
            fresh: true,
        }
    }

    fn radix(&self, i: usize) -> usize {
        self.items.len() - 2 * i - 1
    }

    fn next(&mut self) -> Option<Vec<(Vertex, Vertex)>> {
        if self.fresh {
            self.fresh = false;
        } else {
            let mut i = self.digits.len();
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                self.digits[i] += 1;
                if self.digits[i] < self.radix(i) {
                    break;
                }
                self.digits[i] = 0;
            }
        }
        let mut remaining = self.items.clone();
        let pairs = self
            .digits
            .iter()
            .map(|&d| {
                let a = remaining.remove(0);
                let b = remaining.remove(d);
                (a, b)
            })
            .collect();
        Some(pairs)
    }
}

/// Every PPR forest on `[0, n]`, optionally restricted to one pair-count.
#[derive(Clone, Debug)]
pub struct PprForests {
    search: ParentSearch,
    matchings: Option<Matchings>,
}

impl PprForests {
    fn split(&self) -> Vec<PprForests> {
        self.search
            .split()
            .into_iter()
            .map(|search| PprForests {
                search,
                matchings: None,
            })
            .collect()
    }
}

impl Iterator for PprForests {
    type Item = PprForest;

    fn next(&mut self) -> Option<PprForest> {
        loop {
            if let Some(pairs) = self.matchings.as_mut().and_then(Matchings::next) {
                return Some(PprForest::from_parts_unchecked(
                    self.search.parent.clone(),
                    pairs,
                ));
            }
            if !self.search.advance() {
                self.matchings = None;
                return None;
            }
            let roots = (1..self.search.parent.len())
                .filter(|&v| self.search.parent[v].is_none())
                .collect();
            self.matchings = Some(Matchings::new(roots));
        }
    }
}

/// Every acyclic simple graph on `[1, n]`, in lexicographic order of the
/// sorted edge list.
#[derive(Clone, Debug)]
pub struct UnrootedForests {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    sets: DisjointSets,
    chosen: Vec<usize>,
    // Chosen edges below this depth are fixed for a split piece.
    floor: usize,
    started: bool,
    done: bool,
}

impl UnrootedForests {
    fn new(n: usize) -> Self {
        let edges = (1..=n)
            .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
            .collect();
        UnrootedForests {
            n,
            edges,
            sets: DisjointSets::new(n + 1),
            chosen: Vec::new(),
            floor: 0,
            started: false,
            done: false,
        }
    }

    /// The forests whose smallest edge is `edges[first]`.
    fn starting_with(n: usize, first: usize) -> Self {
        let mut piece = UnrootedForests::new(n);
        let (u, v) = piece.edges[first];
        piece.sets.union(u, v);
        piece.chosen.push(first);
        piece.floor = 1;
        piece
    }

    fn current(&self) -> UnrootedForest {
        let edges = self.chosen.iter().map(|&e| self.edges[e]).collect();
        UnrootedForest::from_parts_unchecked(self.n, edges)
    }

    fn step(&mut self) -> bool {
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            return true;
        }
        let mut from = self.chosen.last().map_or(0, |&e| e + 1);
        loop {
            let edges = &self.edges;
            let sets = &self.sets;
            if let Some(e) = (from..edges.len()).find(|&e| !sets.same_set(edges[e].0, edges[e].1)) {
                let (u, v) = self.edges[e];
                self.sets.union(u, v);
                self.chosen.push(e);
                return true;
            }
            if self.chosen.len() == self.floor {
                self.done = true;
                return false;
            }
            let last = self.chosen.pop().expect("non-empty above floor");
            self.sets.undo();
            from = last + 1;
        }
    }

    fn count(mut self) -> u64 {
        let mut total = 0;
        while self.step() {
            total += 1;
        }
        total
    }
}

impl Iterator for UnrootedForests {
    type Item = UnrootedForest;

    fn next(&mut self) -> Option<UnrootedForest> {
        self.step().then(|| self.current())
    }
}

/// Exact number of items in a stream.
pub fn count_stream<I: Iterator>(stream: I) -> Natural {
    Natural::from(stream.count())
}

fn sum_in_pool<T, F>(pieces: Vec<T>, threads: usize, count: F) -> Result<Natural>
where
    T: Send,
    F: Fn(T) -> u64 + Sync + Send,
{
    if threads <= 1 {
        return Ok(Natural::from(pieces.into_iter().map(count).sum::<u64>()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
    let total: u64 = pool.install(|| pieces.into_par_iter().map(count).sum());
    Ok(Natural::from(total))
}

/// Enumerators with a size limit. The limit applies to `n` for unrooted
/// and PPR forests and to `m` for rooted forests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Enumerator {
    limit: usize,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator {
            limit: DEFAULT_LIMIT,
        }
    }
}

impl Enumerator {
    pub fn new(limit: usize) -> Self {
        Enumerator { limit }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn check(&self, requested: usize) -> Result<()> {
        if requested > self.limit {
            return Err(Error::Capacity {
                requested,
                limit: self.limit,
            });
        }
        Ok(())
    }

    pub fn unrooted_forests(&self, n: usize) -> Result<UnrootedForests> {
        self.check(n)?;
        Ok(UnrootedForests::new(n))
    }

    /// Rooted forests on `[1, m]` whose roots are exactly `roots`.
    pub fn rooted_forests(&self, m: usize, roots: &[Vertex]) -> Result<RootedForests> {
        self.check(m)?;
        if roots.is_empty() {
            return Err(Error::Domain("root set must be nonempty".into()));
        }
        if let Some(&bad) = roots.iter().find(|&&r| r == 0 || r > m) {
            return Err(Error::Domain(format!("root {bad} is not in [1, {m}]")));
        }
        let mut is_root = vec![false; m + 1];
        for &r in roots {
            is_root[r] = true;
        }
        let free = (1..=m).filter(|&v| !is_root[v]).collect();
        let options = (1..=m).map(Some).collect();
        let search = ParentSearch::new(1, vec![None; m], free, options);
        Ok(RootedForests { search })
    }

    /// Rooted forests on `[1, n]` with any root set.
    pub fn all_rooted_forests(&self, n: usize) -> Result<RootedForests> {
        self.check(n)?;
        let options = std::iter::once(None).chain((1..=n).map(Some)).collect();
        let search = ParentSearch::new(1, vec![None; n], (1..=n).collect(), options);
        Ok(RootedForests { search })
    }

    /// PPR forests on `[0, n]`, all of them or only those with `j` pairs.
    pub fn ppr_forests(&self, n: usize, j: Option<usize>) -> Result<PprForests> {
        self.check(n)?;
        let options = std::iter::once(None).chain((0..=n).map(Some)).collect();
        let mut search = ParentSearch::new(0, vec![None; n + 1], (1..=n).collect(), options);
        match j {
            Some(j) => {
                if j.checked_mul(2).is_none_or(|roots| roots > n) {
                    return Err(Error::Domain(format!(
                        "pair-count {j} needs more than {n} vertices"
                    )));
                }
                search.min_roots = 2 * j;
                search.max_roots = 2 * j;
            }
            None => search.even_roots = true,
        }
        Ok(PprForests {
            search,
            matchings: None,
        })
    }

    pub fn count_unrooted(&self, n: usize, threads: usize) -> Result<Natural> {
        let whole = self.unrooted_forests(n)?;
        let pieces: Vec<usize> = (0..whole.edges.len()).collect();
        // The empty forest is not in any piece.
        let rest = sum_in_pool(pieces, threads, |e| {
            UnrootedForests::starting_with(n, e).count()
        })?;
        Ok(rest + Natural::one())
    }

    pub fn count_rooted(&self, m: usize, roots: &[Vertex], threads: usize) -> Result<Natural> {
        let whole = self.rooted_forests(m, roots)?;
        sum_in_pool(whole.search.split(), threads, ParentSearch::count)
    }

    pub fn count_all_rooted(&self, n: usize, threads: usize) -> Result<Natural> {
        let whole = self.all_rooted_forests(n)?;
        sum_in_pool(whole.search.split(), threads, ParentSearch::count)
    }

    pub fn count_ppr(&self, n: usize, j: Option<usize>, threads: usize) -> Result<Natural> {
        let whole = self.ppr_forests(n, j)?;
        sum_in_pool(whole.split(), threads, |piece| piece.count() as u64)
    }
}

pub fn enumerate_unrooted_forests(n: usize) -> Result<UnrootedForests> {
    Enumerator::default().unrooted_forests(n)
}

pub fn enumerate_rooted_forests(m: usize, roots: &[Vertex]) -> Result<RootedForests> {
    Enumerator::default().rooted_forests(m, roots)
}

pub fn enumerate_ppr_forests(n: usize, j: Option<usize>) -> Result<PprForests> {
    Enumerator::default().ppr_forests(n, j)
}
