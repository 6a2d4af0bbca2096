//! Rooted forests, partially-paired rooted forests and unrooted forests.
//!
//! All three are stored as flat arrays over contiguous integer labels. A
//! rooted forest is a parent array where `None` marks a root. A PPR forest
//! on `[0, n]` is a rooted forest in which vertex 0 is a root and every other
//! root is matched with exactly one partner root. An unrooted forest is a
//! sorted list of edges on `[1, n]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::SignedCount;

pub type Vertex = usize;

/// The first invariant a candidate structure fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongLength { expected: usize, found: usize },
    ParentOutOfRange { vertex: Vertex, parent: Vertex },
    ZeroNotRoot,
    ZeroInPair,
    PairOutOfRange { vertex: Vertex },
    UnpairedRoot { vertex: Vertex },
    PairedNonRoot { vertex: Vertex },
    DegeneratePair { vertex: Vertex },
    OverlappingPairs { vertex: Vertex },
    Cycle { vertex: Vertex },
    EdgeOutOfRange { u: Vertex, v: Vertex },
    Loop { vertex: Vertex },
    DuplicateEdge { u: Vertex, v: Vertex },
    EdgeCycle { u: Vertex, v: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match *self {
            WrongLength { expected, found } => {
                write!(f, "parent array has {found} entries, expected {expected}")
            }
            ParentOutOfRange { vertex, parent } => {
                write!(f, "parent {parent} of vertex {vertex} is out of range")
            }
            ZeroNotRoot => write!(f, "vertex 0 is not a root"),
            ZeroInPair => write!(f, "vertex 0 appears in a pair"),
            PairOutOfRange { vertex } => write!(f, "paired vertex {vertex} is out of range"),
            UnpairedRoot { vertex } => write!(f, "unpaired non-zero root {vertex}"),
            PairedNonRoot { vertex } => write!(f, "paired vertex {vertex} is not a root"),
            DegeneratePair { vertex } => write!(f, "vertex {vertex} is paired with itself"),
            OverlappingPairs { vertex } => {
                write!(f, "vertex {vertex} appears in more than one pair")
            }
            Cycle { vertex } => write!(f, "parent links through vertex {vertex} form a cycle"),
            EdgeOutOfRange { u, v } => write!(f, "edge {{{u},{v}}} is out of range"),
            Loop { vertex } => write!(f, "loop at vertex {vertex}"),
            DuplicateEdge { u, v } => write!(f, "edge {{{u},{v}}} is repeated"),
            EdgeCycle { u, v } => write!(f, "edge {{{u},{v}}} closes a cycle"),
        }
    }
}

impl std::error::Error for Violation {}

fn push_u32(out: &mut Vec<u8>, value: usize) {
    let value = u32::try_from(value).expect("labels fit in 32 bits");
    out.extend_from_slice(&value.to_be_bytes());
}

fn encode_parent(out: &mut Vec<u8>, parent: Option<Vertex>) {
    // ROOT sorts before every vertex label.
    push_u32(out, parent.map_or(0, |p| p + 1));
}

/// Lowercase hexadecimal rendering of an encoding.
pub fn to_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Finds a vertex whose parent chain loops back on itself.
fn find_cycle(first: Vertex, parent: &[Option<Vertex>]) -> Option<Vertex> {
    const NEW: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;
    let mut state = vec![NEW; parent.len()];
    let mut path = Vec::new();
    for start in 0..parent.len() {
        let mut at = start;
        while state[at] == NEW {
            state[at] = ACTIVE;
            path.push(at);
            match parent[at] {
                Some(p) => at = p - first,
                None => break,
            }
        }
        if state[at] == ACTIVE && parent[at].is_some() {
            return Some(at + first);
        }
        for v in path.drain(..) {
            state[v] = DONE;
        }
    }
    None
}

/// A forest of rooted trees on the labels `first..first + len`, stored as a
/// parent array. Children are always reported in ascending label order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedForest {
    first: Vertex,
    parent: Vec<Option<Vertex>>,
}

impl RootedForest {
    /// `parent[i]` is the parent of vertex `first + i`.
    pub fn new(first: Vertex, parent: Vec<Option<Vertex>>) -> Result<Self, Violation> {
        let last = first + parent.len();
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p < first || p >= last {
                    return Err(Violation::ParentOutOfRange {
                        vertex: first + i,
                        parent: p,
                    });
                }
            }
        }
        if let Some(vertex) = find_cycle(first, &parent) {
            return Err(Violation::Cycle { vertex });
        }
        Ok(RootedForest { first, parent })
    }

    pub(crate) fn from_parts_unchecked(first: Vertex, parent: Vec<Option<Vertex>>) -> Self {
        debug_assert!(RootedForest::new(first, parent.clone()).is_ok());
        RootedForest { first, parent }
    }

    pub fn first(&self) -> Vertex {
        self.first
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        self.first..self.first + self.parent.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices().contains(&v)
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v - self.first]
    }

    /// Parent entries in vertex order.
    pub fn parents(&self) -> &[Option<Vertex>] {
        &self.parent
    }

    pub fn is_root(&self, v: Vertex) -> bool {
        self.parent(v).is_none()
    }

    pub fn roots(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.is_root(v)).collect()
    }

    pub fn root_of(&self, mut v: Vertex) -> Vertex {
        while let Some(p) = self.parent(v) {
            v = p;
        }
        v
    }

    pub fn children(&self, v: Vertex) -> Vec<Vertex> {
        self.vertices()
            .filter(|&c| self.parent(c) == Some(v))
            .collect()
    }

    /// Proper descendants of `v` in ascending order.
    pub fn descendants(&self, v: Vertex) -> Vec<Vertex> {
        let mut children = vec![Vec::new(); self.len()];
        for c in self.vertices() {
            if let Some(p) = self.parent(c) {
                children[p - self.first].push(c);
            }
        }
        let mut found = Vec::new();
        let mut stack = children[v - self.first].clone();
        while let Some(d) = stack.pop() {
            found.push(d);
            stack.extend_from_slice(&children[d - self.first]);
        }
        found.sort_unstable();
        found
    }

    /// A vertex is inversion-initiating when some descendant carries a smaller label.
    pub fn is_inversion_initiating(&self, v: Vertex) -> bool {
        self.descendants(v).first().is_some_and(|&d| d < v)
    }

    pub fn canonical_encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 * (self.len() + 2));
        push_u32(&mut out, self.first);
        push_u32(&mut out, self.len());
        for &p in &self.parent {
            encode_parent(&mut out, p);
        }
        out
    }
}

/// JSON form of a [`RootedForest`]: `parent[i]` is the parent of vertex `first + i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedForestData {
    pub first: Vertex,
    pub parent: Vec<Option<Vertex>>,
}

impl From<&RootedForest> for RootedForestData {
    fn from(f: &RootedForest) -> Self {
        RootedForestData {
            first: f.first,
            parent: f.parent.clone(),
        }
    }
}

impl TryFrom<RootedForestData> for RootedForest {
    type Error = Violation;
    fn try_from(data: RootedForestData) -> Result<Self, Violation> {
        RootedForest::new(data.first, data.parent)
    }
}

impl Serialize for RootedForest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RootedForestData::from(self).serialize(s)
    }
}

/// A tree rooted at 0 together with zero or more unordered pairs of rooted
/// trees, the vertex sets of all trees partitioning `[0, n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PprForest {
    forest: RootedForest,
    // (r, s) with r < s, sorted by r.
    pairs: Vec<(Vertex, Vertex)>,
}

/// Checks every PPR invariant on raw parts and names the first one violated.
pub fn validate_ppr(
    n: usize,
    parent: &[Option<Vertex>],
    pairs: &[(Vertex, Vertex)],
) -> Result<(), Violation> {
    if parent.len() != n + 1 {
        return Err(Violation::WrongLength {
            expected: n + 1,
            found: parent.len(),
        });
    }
    for (vertex, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            if p > n {
                return Err(Violation::ParentOutOfRange { vertex, parent: p });
            }
        }
    }
    for &(r, s) in pairs {
        for vertex in [r, s] {
            if vertex > n {
                return Err(Violation::PairOutOfRange { vertex });
            }
        }
    }
    if parent[0].is_some() {
        return Err(Violation::ZeroNotRoot);
    }
    let mut partner_count = vec![0usize; n + 1];
    for &(r, s) in pairs {
        if r == 0 || s == 0 {
            return Err(Violation::ZeroInPair);
        }
        partner_count[r] += 1;
        partner_count[s] += 1;
    }
    if let Some(vertex) = (1..=n).find(|&v| parent[v].is_none() && partner_count[v] == 0) {
        return Err(Violation::UnpairedRoot { vertex });
    }
    for &(r, s) in pairs {
        for vertex in [r, s] {
            if parent[vertex].is_some() {
                return Err(Violation::PairedNonRoot { vertex });
            }
        }
    }
    for &(r, s) in pairs {
        if r == s {
            return Err(Violation::DegeneratePair { vertex: r });
        }
    }
    if let Some(vertex) = (1..=n).find(|&v| partner_count[v] > 1) {
        return Err(Violation::OverlappingPairs { vertex });
    }
    if let Some(vertex) = find_cycle(0, parent) {
        return Err(Violation::Cycle { vertex });
    }
    Ok(())
}

fn normalize_pairs(pairs: Vec<(Vertex, Vertex)>) -> Vec<(Vertex, Vertex)> {
    let mut pairs: Vec<_> = pairs
        .into_iter()
        .map(|(r, s)| (r.min(s), r.max(s)))
        .collect();
    pairs.sort_unstable();
    pairs
}

impl PprForest {
    /// Builds a PPR forest on `[0, parent.len() - 1]`. Pairs may be given in
    /// any order and orientation.
    pub fn new(
        parent: Vec<Option<Vertex>>,
        pairs: Vec<(Vertex, Vertex)>,
    ) -> Result<Self, Violation> {
        let n = parent.len().checked_sub(1).ok_or(Violation::WrongLength {
            expected: 1,
            found: 0,
        })?;
        validate_ppr(n, &parent, &pairs)?;
        Ok(PprForest {
            forest: RootedForest { first: 0, parent },
            pairs: normalize_pairs(pairs),
        })
    }

    pub(crate) fn from_parts_unchecked(
        parent: Vec<Option<Vertex>>,
        pairs: Vec<(Vertex, Vertex)>,
    ) -> Self {
        let pairs = normalize_pairs(pairs);
        debug_assert_eq!(validate_ppr(parent.len() - 1, &parent, &pairs), Ok(()));
        PprForest {
            forest: RootedForest::from_parts_unchecked(0, parent),
            pairs,
        }
    }

    /// The single PPR forest on `[0, 0]`.
    pub fn empty() -> Self {
        PprForest::from_parts_unchecked(vec![None], Vec::new())
    }

    pub fn n(&self) -> usize {
        self.forest.len() - 1
    }

    pub fn forest(&self) -> &RootedForest {
        &self.forest
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.forest.parent(v)
    }

    pub fn parents(&self) -> &[Option<Vertex>] {
        self.forest.parents()
    }

    pub fn pairs(&self) -> &[(Vertex, Vertex)] {
        &self.pairs
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// `(-1)^pair_count`.
    pub fn weight(&self) -> SignedCount {
        SignedCount::alternating(self.pair_count())
    }

    pub fn children(&self, v: Vertex) -> Vec<Vertex> {
        self.forest.children(v)
    }

    pub fn descendants(&self, v: Vertex) -> Vec<Vertex> {
        self.forest.descendants(v)
    }

    pub fn is_inversion_initiating(&self, v: Vertex) -> bool {
        self.forest.is_inversion_initiating(v)
    }

    pub fn root_of(&self, v: Vertex) -> Vertex {
        self.forest.root_of(v)
    }

    /// The root paired with `root`, if `root` is a paired root.
    pub fn partner(&self, root: Vertex) -> Option<Vertex> {
        self.pairs.iter().find_map(|&(r, s)| match root {
            _ if root == r => Some(s),
            _ if root == s => Some(r),
            _ => None,
        })
    }

    /// Pair-count zero and every child of 0 regular. These correspond to
    /// forests of unrooted trees on `[n]`.
    pub fn is_special(&self) -> bool {
        self.pairs.is_empty()
            && !self
                .children(0)
                .into_iter()
                .any(|c| self.is_inversion_initiating(c))
    }

    /// Injective byte key: `n`, then the parent array in vertex order, then
    /// the pairs sorted by smaller member. All fields are big-endian `u32`,
    /// with ROOT encoded as 0 and parent `p` as `p + 1`.
    pub fn canonical_encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 * (self.n() + 2 + 2 * self.pairs.len()));
        push_u32(&mut out, self.n());
        for &p in self.parents() {
            encode_parent(&mut out, p);
        }
        for &(r, s) in &self.pairs {
            push_u32(&mut out, r);
            push_u32(&mut out, s);
        }
        out
    }

    pub fn canonical_hex(&self) -> String {
        to_hex(&self.canonical_encode())
    }

    /// Deletes vertex 0 from a special forest.
    pub fn to_unrooted(&self) -> Result<UnrootedForest> {
        if !self.is_special() {
            return Err(Error::NotSpecial);
        }
        let edges = (1..=self.n())
            .filter_map(|v| match self.parent(v) {
                Some(p) if p != 0 => Some((p, v)),
                _ => None,
            })
            .collect();
        Ok(UnrootedForest::from_parts_unchecked(self.n(), edges))
    }

    /// Roots each tree of `g` at its smallest vertex and hangs those roots
    /// below vertex 0. The result is always special.
    pub fn from_unrooted(g: &UnrootedForest) -> PprForest {
        let n = g.n();
        let mut adjacency = vec![Vec::new(); n + 1];
        for &(u, v) in g.edges() {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut parent = vec![None; n + 1];
        let mut seen = vec![false; n + 1];
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            // Scanning labels upward makes `start` the minimum of its component.
            seen[start] = true;
            parent[start] = Some(0);
            let mut stack = vec![start];
            while let Some(at) = stack.pop() {
                for &next in &adjacency[at] {
                    if !seen[next] {
                        seen[next] = true;
                        parent[next] = Some(at);
                        stack.push(next);
                    }
                }
            }
        }
        PprForest::from_parts_unchecked(parent, Vec::new())
    }
}

impl fmt::Display for PprForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parent=[")?;
        for (v, p) in self.parents().iter().enumerate() {
            if v > 0 {
                write!(f, ",")?;
            }
            match p {
                Some(p) => write!(f, "{p}")?,
                None => write!(f, "-")?,
            }
        }
        write!(f, "] pairs=[")?;
        for (i, (r, s)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({r},{s})")?;
        }
        write!(f, "]")
    }
}

/// JSON form of a [`PprForest`]: `{"n", "parent", "pairs"}` with `null` for ROOT.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PprForestData {
    pub n: usize,
    pub parent: Vec<Option<Vertex>>,
    pub pairs: Vec<(Vertex, Vertex)>,
}

impl From<&PprForest> for PprForestData {
    fn from(f: &PprForest) -> Self {
        PprForestData {
            n: f.n(),
            parent: f.parents().to_vec(),
            pairs: f.pairs.clone(),
        }
    }
}

impl TryFrom<PprForestData> for PprForest {
    type Error = Violation;
    fn try_from(data: PprForestData) -> Result<Self, Violation> {
        validate_ppr(data.n, &data.parent, &data.pairs)?;
        PprForest::new(data.parent, data.pairs)
    }
}

impl Serialize for PprForest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PprForestData::from(self).serialize(s)
    }
}

/// A simple acyclic graph on `[1, n]`. Edges are stored as `(u, v)` with
/// `u < v`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnrootedForest {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl UnrootedForest {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self, Violation> {
        let mut sets = crate::dsu::DisjointSets::new(n + 1);
        for &(u, v) in &edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Violation::EdgeOutOfRange { u, v });
            }
            if u == v {
                return Err(Violation::Loop { vertex: u });
            }
        }
        let edges = normalize_pairs(edges);
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            let (u, v) = w[0];
            return Err(Violation::DuplicateEdge { u, v });
        }
        for &(u, v) in &edges {
            if !sets.union(u, v) {
                return Err(Violation::EdgeCycle { u, v });
            }
        }
        Ok(UnrootedForest { n, edges })
    }

    pub(crate) fn from_parts_unchecked(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        let edges = normalize_pairs(edges);
        debug_assert!(UnrootedForest::new(n, edges.clone()).is_ok());
        UnrootedForest { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn canonical_encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 * (1 + 2 * self.edges.len()));
        push_u32(&mut out, self.n);
        for &(u, v) in &self.edges {
            push_u32(&mut out, u);
            push_u32(&mut out, v);
        }
        out
    }
}

/// JSON form of an [`UnrootedForest`]: `{"n", "edges"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnrootedForestData {
    pub n: usize,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl From<&UnrootedForest> for UnrootedForestData {
    fn from(g: &UnrootedForest) -> Self {
        UnrootedForestData {
            n: g.n,
            edges: g.edges.clone(),
        }
    }
}

impl TryFrom<UnrootedForestData> for UnrootedForest {
    type Error = Violation;
    fn try_from(data: UnrootedForestData) -> Result<Self, Violation> {
        UnrootedForest::new(data.n, data.edges)
    }
}

impl Serialize for UnrootedForest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        UnrootedForestData::from(self).serialize(s)
    }
}
