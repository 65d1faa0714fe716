//! Rooted trees with a marked descent set.
//!
//! A [`MarkedTree`] is a rooted tree in which every vertex carries a flag
//! saying whether it must be a descent (its label exceeds its parent's) or an
//! ascent. Trees parsed from the compact grammar are numbered in depth-first
//! pre-order from the root; trees built from a parent array keep the numbering
//! they were given.
//!
//! Compact grammar, whitespace insignificant:
//!
//! ```text
//! tree := ('a' | 'd') ( '[' tree (',' tree)* ']' )?
//! ```

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::combinat::factorial;
use crate::error::{Error, Result};

pub type Vertex = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedTree {
    parent: Vec<Option<Vertex>>,
    descent: Vec<bool>,
    children: Vec<Vec<Vertex>>,
    root: Vertex,
}

/// A bijection from the vertices of a tree onto `1..=n`; `labels[v]` is the
/// label of vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<usize>,
}

/// Per-vertex subtree sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookVector(pub Vec<usize>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mark {
    Ascent,
    Descent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeFormat {
    Compact,
    Structured,
}

/// The structured interchange record: `{"parents": [...], "descents": [...]}`
/// with `-1` marking the root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredTree {
    pub parents: Vec<i64>,
    pub descents: Vec<usize>,
}

/// Owned recursive form used when rebuilding trees. `id` is the vertex the
/// node came from, if any.
#[derive(Clone, Debug)]
struct Node {
    id: Option<Vertex>,
    descent: bool,
    children: Vec<Node>,
}

impl MarkedTree {
    /// Builds a tree from a parent array (`None` for the root) and a set of
    /// descent vertices. Children keep increasing index order.
    pub fn from_parents(
        parent: Vec<Option<Vertex>>,
        descents: impl IntoIterator<Item = Vertex>,
    ) -> Result<Self> {
        let size = parent.len();
        if size == 0 {
            return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
        }
        let mut root = None;
        let mut children = vec![Vec::new(); size];
        for (v, p) in parent.iter().enumerate() {
            match *p {
                None if root.is_some() => {
                    return Err(Error::InvalidTree("more than one root".into()))
                }
                None => root = Some(v),
                Some(p) if p >= size => {
                    return Err(Error::InvalidTree(format!(
                        "vertex {v} has parent {p} outside 0..{size}"
                    )))
                }
                Some(p) if p == v => {
                    return Err(Error::InvalidTree(format!("vertex {v} is its own parent")))
                }
                Some(p) => children[p].push(v),
            }
        }
        let root = root.ok_or_else(|| Error::InvalidTree("no root".into()))?;

        let mut seen = 1;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &c in &children[v] {
                seen += 1;
                stack.push(c);
            }
        }
        if seen != size {
            return Err(Error::InvalidTree("parent links contain a cycle".into()));
        }

        let mut descent = vec![false; size];
        for d in descents {
            if d >= size {
                return Err(Error::BadVertex { vertex: d, size });
            }
            descent[d] = true;
        }
        Ok(MarkedTree {
            parent,
            descent,
            children,
            root,
        })
    }

    pub fn single(mark: Mark) -> Self {
        MarkedTree {
            parent: vec![None],
            descent: vec![mark == Mark::Descent],
            children: vec![Vec::new()],
            root: 0,
        }
    }

    /// A path of `len` vertices, root first, every vertex carrying `mark`.
    pub fn chain(len: usize, mark: Mark) -> Self {
        assert!(len > 0, "a chain needs at least one vertex");
        let parent = (0..len).map(|v| v.checked_sub(1)).collect();
        let descents: Vec<_> = if mark == Mark::Descent {
            (0..len).collect()
        } else {
            Vec::new()
        };
        Self::from_parents(parent, descents).expect("chain is a valid tree")
    }

    pub fn size(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn is_descent(&self, v: Vertex) -> bool {
        self.descent[v]
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.children[v].is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.size()
    }

    /// The descent set, ascending.
    pub fn descents(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.descent[v]).collect()
    }

    pub fn descent_count(&self) -> usize {
        self.descent.iter().filter(|&&d| d).count()
    }

    pub fn has_descents(&self) -> bool {
        self.descent.iter().any(|&d| d)
    }

    pub fn leaves(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.is_leaf(v)).collect()
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.size() {
            Ok(())
        } else {
            Err(Error::BadVertex {
                vertex: v,
                size: self.size(),
            })
        }
    }

    /// Vertices in depth-first pre-order from the root, children in stored order.
    pub fn preorder(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.size());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        out
    }

    /// Distance from the root for every vertex.
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.size()];
        for v in self.preorder() {
            for &c in &self.children[v] {
                depth[c] = depth[v] + 1;
            }
        }
        depth
    }

    pub fn hook_lengths(&self) -> HookVector {
        let mut hook = vec![1; self.size()];
        for v in self.preorder().into_iter().rev() {
            if let Some(p) = self.parent[v] {
                hook[p] += hook[v];
            }
        }
        HookVector(hook)
    }

    /// Number of natural labelings (empty descent set), by the hook-length
    /// formula. Descent marks are ignored.
    pub fn natlab(&self) -> BigInt {
        let HookVector(hooks) = self.hook_lengths();
        let denom = hooks.iter().fold(BigInt::from(1), |acc, &h| acc * h);
        factorial(self.size()) / denom
    }

    /// Descent vertices none of whose proper ancestors is a descent, ascending.
    pub fn maximal_descents(&self) -> Vec<Vertex> {
        let mut covered = vec![false; self.size()];
        let mut out = Vec::new();
        for v in self.preorder() {
            let above = self.parent[v].is_some_and(|p| covered[p]);
            if self.descent[v] && !above {
                out.push(v);
            }
            covered[v] = above || self.descent[v];
        }
        out.sort_unstable();
        out
    }

    /// Degree of the descent polynomial: the summed hook lengths of the
    /// maximal descent vertices.
    pub fn degree(&self) -> usize {
        let HookVector(hooks) = self.hook_lengths();
        self.maximal_descents().iter().map(|&v| hooks[v]).sum()
    }

    /// `G(T; n)`: the tree with a chain of `n - size` ascent vertices grafted
    /// above the root. Vertices of `self` keep their indices; chain vertices
    /// follow, numbered bottom-up.
    pub fn extend(&self, n: usize) -> Result<MarkedTree> {
        let s = self.size();
        if n < s {
            return Err(Error::SizeTooSmall {
                n: n as i64,
                min: s,
            });
        }
        let mut parent = self.parent.clone();
        parent.resize(n, None);
        if n > s {
            parent[self.root] = Some(s);
            for v in s..n - 1 {
                parent[v] = Some(v + 1);
            }
        }
        MarkedTree::from_parents(parent, self.descents())
    }

    /// `{v : w(v) > w(parent(v))}`, ascending; the root never appears.
    pub fn descent_set_of(&self, w: &Labeling) -> Result<Vec<Vertex>> {
        if w.len() != self.size() {
            return Err(Error::SizeMismatch {
                expected: self.size(),
                got: w.len(),
            });
        }
        Ok(self
            .vertices()
            .filter(|&v| self.parent[v].is_some_and(|p| w.label(v) > w.label(p)))
            .collect())
    }

    /// A labeling of `G(T; n)` whose descent set is exactly the marked set.
    ///
    /// Descent vertices receive `n, n-1, ...` and the remaining vertices
    /// `1, 2, ...`, both handing out labels from the deepest level upwards and
    /// left to right within a level.
    pub fn witness_labeling(&self, n: usize) -> Result<Labeling> {
        if n <= self.size() {
            return Err(Error::SizeTooSmall {
                n: n as i64,
                min: self.size() + 1,
            });
        }
        let g = self.extend(n)?;
        let mut levels: Vec<Vec<Vertex>> = Vec::new();
        let mut queue = VecDeque::from([(g.root, 0usize)]);
        while let Some((v, depth)) = queue.pop_front() {
            if levels.len() <= depth {
                levels.push(Vec::new());
            }
            levels[depth].push(v);
            queue.extend(g.children[v].iter().map(|&c| (c, depth + 1)));
        }
        let mut labels = vec![0; n];
        let (mut high, mut low) = (n, 1);
        for v in levels.iter().rev().flatten().copied() {
            if g.descent[v] {
                labels[v] = high;
                high -= 1;
            } else {
                labels[v] = low;
                low += 1;
            }
        }
        Ok(Labeling { labels })
    }

    /// Copy of the tree with `v` carrying the requested mark.
    pub fn toggle(&self, v: Vertex, to: Mark) -> Result<MarkedTree> {
        self.check_vertex(v)?;
        let mut out = self.clone();
        out.descent[v] = to == Mark::Descent;
        Ok(out)
    }

    /// Splits at `v` into the subtree rooted at `v` and the remainder; the
    /// remainder is `None` when `v` is the root. Both parts are renumbered in
    /// pre-order and inherit their marks.
    pub fn split(&self, v: Vertex) -> Result<(MarkedTree, Option<MarkedTree>)> {
        self.check_vertex(v)?;
        let sub = MarkedTree::from_node(&self.node(v));
        if v == self.root {
            return Ok((sub, None));
        }
        let rest = self.rebuild(&mut |node, _| if node == v { Some(Vec::new()) } else { None });
        Ok((sub, Some(rest)))
    }

    /// Attaches `sub` as the `position`-th child of `at`. Inverse of [`split`]
    /// for pre-order numbered trees.
    ///
    /// [`split`]: MarkedTree::split
    pub fn graft(&self, at: Vertex, position: usize, sub: &MarkedTree) -> Result<MarkedTree> {
        self.check_vertex(at)?;
        if position > self.children[at].len() {
            return Err(Error::Precondition(format!(
                "vertex {at} has only {} children",
                self.children[at].len()
            )));
        }
        let mut root = self.node(self.root);
        fn insert(node: &mut Node, at: Vertex, position: usize, sub: &Node) -> bool {
            if node.id == Some(at) {
                node.children.insert(position, sub.clone());
                return true;
            }
            node.children.iter_mut().any(|c| insert(c, at, position, sub))
        }
        insert(&mut root, at, position, &sub.node(sub.root));
        Ok(MarkedTree::from_node(&root))
    }

    /// Trees obtained by deleting `v` and attaching its children to its parent.
    ///
    /// A leaf gives the single tree `T \ v`. Otherwise there is one tree per
    /// assignment of marks to the former children: configuration `r` (in
    /// ascending order) marks the `i`-th child of `v` as a descent iff bit `i`
    /// of `r` is set. All other vertices keep their marks.
    pub fn contract_configs(&self, v: Vertex) -> Result<Vec<MarkedTree>> {
        self.check_vertex(v)?;
        if v == self.root {
            return Err(Error::RootVertex(v));
        }
        let kids = self.children[v].len();
        if kids == 0 {
            return Ok(vec![self.rebuild(&mut |node, _| {
                if node == v {
                    Some(Vec::new())
                } else {
                    None
                }
            })]);
        }
        assert!(kids < usize::BITS as usize, "too many children to enumerate");
        Ok((0..1usize << kids)
            .map(|config| {
                self.rebuild(&mut |node, this| {
                    (node == v).then(|| {
                        this.children[v]
                            .iter()
                            .enumerate()
                            .map(|(i, &c)| {
                                let mut n = this.node(c);
                                n.descent = config >> i & 1 == 1;
                                n
                            })
                            .collect()
                    })
                })
            })
            .collect())
    }

    /// New ascent root whose only child is the old root.
    pub fn add_ascent_root(&self) -> MarkedTree {
        MarkedTree::from_node(&Node {
            id: None,
            descent: false,
            children: vec![self.node(self.root)],
        })
    }

    /// Encoding invariant under reordering siblings: the compact form with
    /// every child list sorted by its own key.
    pub fn canonical_key(&self) -> String {
        fn key(t: &MarkedTree, v: Vertex) -> String {
            let mark = if t.descent[v] { 'd' } else { 'a' };
            if t.children[v].is_empty() {
                return mark.to_string();
            }
            let mut kids: Vec<String> = t.children[v].iter().map(|&c| key(t, c)).collect();
            kids.sort_unstable();
            format!("{mark}[{}]", kids.join(","))
        }
        key(self, self.root)
    }

    /// The same shape with children reordered into canonical order and
    /// renumbered in pre-order.
    pub fn canonical(&self) -> MarkedTree {
        self.canonical_key()
            .parse()
            .expect("canonical key is valid compact text")
    }

    pub fn serialize(&self, format: TreeFormat) -> String {
        match format {
            TreeFormat::Compact => self.to_string(),
            TreeFormat::Structured => serde_json::to_string(&self.to_structured())
                .expect("structured tree always serializes"),
        }
    }

    pub fn to_structured(&self) -> StructuredTree {
        StructuredTree {
            parents: self
                .parent
                .iter()
                .map(|p| p.map_or(-1, |p| p as i64))
                .collect(),
            descents: self.descents(),
        }
    }

    pub fn from_structured(s: &StructuredTree) -> Result<MarkedTree> {
        let parent = s
            .parents
            .iter()
            .map(|&p| match p {
                -1 => Ok(None),
                p if p >= 0 => Ok(Some(p as usize)),
                p => Err(Error::InvalidTree(format!("parent index {p} is negative"))),
            })
            .collect::<Result<Vec<_>>>()?;
        MarkedTree::from_parents(parent, s.descents.iter().copied())
    }

    /// Parses either the structured JSON record or compact text.
    pub fn parse_any(text: &str) -> Result<MarkedTree> {
        if text.trim_start().starts_with('{') {
            let s: StructuredTree = serde_json::from_str(text)?;
            MarkedTree::from_structured(&s)
        } else {
            text.parse()
        }
    }

    fn node(&self, v: Vertex) -> Node {
        Node {
            id: Some(v),
            descent: self.descent[v],
            children: self.children[v].iter().map(|&c| self.node(c)).collect(),
        }
    }

    /// Rebuilds the tree, letting `replace` substitute the node list that
    /// takes the place of a vertex (empty to delete it with its subtree).
    fn rebuild(
        &self,
        replace: &mut dyn FnMut(Vertex, &MarkedTree) -> Option<Vec<Node>>,
    ) -> MarkedTree {
        fn walk(
            t: &MarkedTree,
            v: Vertex,
            replace: &mut dyn FnMut(Vertex, &MarkedTree) -> Option<Vec<Node>>,
        ) -> Vec<Node> {
            if let Some(nodes) = replace(v, t) {
                return nodes;
            }
            let children = t.children[v]
                .iter()
                .flat_map(|&c| walk(t, c, replace))
                .collect();
            vec![Node {
                id: Some(v),
                descent: t.descent[v],
                children,
            }]
        }
        let mut top = walk(self, self.root, replace);
        assert_eq!(top.len(), 1, "the root cannot be replaced");
        MarkedTree::from_node(&top.pop().unwrap())
    }

    fn from_node(root: &Node) -> MarkedTree {
        let mut parent = Vec::new();
        let mut descents = Vec::new();
        let mut stack = vec![(root, None)];
        while let Some((node, p)) = stack.pop() {
            let v = parent.len();
            parent.push(p);
            if node.descent {
                descents.push(v);
            }
            stack.extend(node.children.iter().rev().map(|c| (c, Some(v))));
        }
        MarkedTree::from_parents(parent, descents).expect("node trees are well formed")
    }
}

impl Labeling {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        let mut seen = vec![false; n + 1];
        for &l in &labels {
            if l == 0 || l > n || seen[l] {
                return Err(Error::Precondition(format!(
                    "labels must be a permutation of 1..={n}"
                )));
            }
            seen[l] = true;
        }
        Ok(Labeling { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: Vertex) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }
}

impl fmt::Display for MarkedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn write(t: &MarkedTree, v: Vertex, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str(if t.descent[v] { "d" } else { "a" })?;
            if let Some((first, rest)) = t.children[v].split_first() {
                f.write_str("[")?;
                write(t, *first, f)?;
                for &c in rest {
                    f.write_str(",")?;
                    write(t, c, f)?;
                }
                f.write_str("]")?;
            }
            Ok(())
        }
        write(self, self.root, f)
    }
}

impl FromStr for MarkedTree {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut parser = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            parent: Vec::new(),
            descents: Vec::new(),
        };
        parser.skip_ws();
        if parser.pos == parser.bytes.len() {
            return Err(Error::EmptyInput);
        }
        parser.tree(None)?;
        parser.skip_ws();
        if parser.pos != parser.bytes.len() {
            return Err(parser.error("trailing input after tree"));
        }
        MarkedTree::from_parents(parser.parent, parser.descents)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    parent: Vec<Option<Vertex>>,
    descents: Vec<Vertex>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn tree(&mut self, parent: Option<Vertex>) -> Result<()> {
        let v = self.parent.len();
        match self.peek() {
            Some(b'a') => {}
            Some(b'd') => self.descents.push(v),
            Some(_) => return Err(self.error("expected 'a' or 'd'")),
            None => return Err(self.error("unexpected end of input")),
        }
        self.pos += 1;
        self.parent.push(parent);
        if self.peek() == Some(b'[') {
            self.pos += 1;
            loop {
                self.tree(Some(v))?;
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b']') => {
                        self.pos += 1;
                        break;
                    }
                    Some(_) => return Err(self.error("expected ',' or ']'")),
                    None => return Err(self.error("unclosed '['")),
                }
            }
        }
        Ok(())
    }
}

/// Ordered set helper used by tests and reports.
pub fn vertex_set(vs: impl IntoIterator<Item = Vertex>) -> BTreeSet<Vertex> {
    vs.into_iter().collect()
}
