//! Tree certificates, longest paths and the catalog of the 23 trees on eight
//! vertices.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::is_forest;

/// Canonical identity of an unlabeled tree.
///
/// `canon` is the AHU parenthesis string of the tree rooted at its center (a
/// `c` prefix) or at its central edge (`e` prefix, the two halves in sorted
/// order). `degree_seq` is sorted in decreasing order. `t_label` is the catalog
/// number for trees on eight vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeCertificate {
    pub canon: String,
    pub degree_seq: Vec<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_label: Option<u8>,
}

impl TreeCertificate {
    pub fn n(&self) -> usize {
        self.degree_seq.len()
    }

    pub fn is_path(&self) -> bool {
        *self == path_certificate(self.n())
    }

    pub fn is_twin_star(&self) -> bool {
        self.n() >= 4 && self.n().is_multiple_of(2) && *self == twin_star_certificate(self.n() / 2)
    }
}

/// Adjacency lists of a validated tree, 0-based.
pub(crate) struct Tree {
    pub adj: Vec<Vec<usize>>,
}

impl Tree {
    pub(crate) fn new(edges: &[(u8, u8)], n: usize) -> Result<Self> {
        if n == 0 || n > 32 {
            return Err(Error::input(format!("tree on {n} vertices is out of range 1..=32")));
        }
        if edges.len() + 1 != n {
            return Err(Error::input(format!(
                "{} edges cannot form a tree on {n} vertices",
                edges.len()
            )));
        }
        if edges
            .iter()
            .any(|&(a, b)| a == 0 || b == 0 || a as usize > n || b as usize > n)
        {
            return Err(Error::input(format!("edge endpoint outside 1..={n}")));
        }
        if !is_forest(edges, n) {
            return Err(Error::input("edge set contains a cycle"));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a as usize - 1].push(b as usize - 1);
            adj[b as usize - 1].push(a as usize - 1);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Tree { adj })
    }

    pub(crate) fn n(&self) -> usize {
        self.adj.len()
    }

    /// Parent array of a BFS from `root` (`usize::MAX` at the root) and depths.
    fn bfs(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.n();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::from([root]);
        depth[root] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        (parent, depth)
    }

    /// The lexicographically least longest path, 0-based.
    pub(crate) fn diameter_path(&self) -> Vec<usize> {
        let n = self.n();
        let mut best: Option<Vec<usize>> = None;
        for u in 0..n {
            let (parent, depth) = self.bfs(u);
            for (v, &len) in depth.iter().enumerate() {
                if best.as_ref().is_some_and(|b| len + 1 < b.len()) {
                    continue;
                }
                // path from u to v, read from v backwards
                let mut path = Vec::with_capacity(len + 1);
                let mut x = v;
                while x != usize::MAX {
                    path.push(x);
                    x = parent[x];
                }
                path.reverse();
                let better = match &best {
                    None => true,
                    Some(b) => path.len() > b.len() || (path.len() == b.len() && path < *b),
                };
                if better {
                    best = Some(path);
                }
            }
        }
        best.expect("a tree has at least one vertex")
    }

    fn encode(&self, v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = self.adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| self.encode(w, v))
            .collect();
        kids.sort_unstable();
        let mut out = String::with_capacity(2 + kids.iter().map(String::len).sum::<usize>());
        out.push('(');
        for k in kids {
            out.push_str(&k);
        }
        out.push(')');
        out
    }

    pub(crate) fn certificate(&self) -> TreeCertificate {
        let path = self.diameter_path();
        let t = path.len() - 1;
        let canon = if t.is_multiple_of(2) {
            format!("c{}", self.encode(path[t / 2], usize::MAX))
        } else {
            let (a, b) = (path[t / 2], path[t / 2 + 1]);
            let (ea, eb) = (self.encode(a, b), self.encode(b, a));
            let (lo, hi) = if ea <= eb { (ea, eb) } else { (eb, ea) };
            format!("e{lo}{hi}")
        };
        let mut degree_seq: Vec<u8> = self.adj.iter().map(|l| l.len() as u8).collect();
        degree_seq.sort_unstable_by(|a, b| b.cmp(a));
        TreeCertificate {
            canon,
            degree_seq,
            t_label: None,
        }
    }
}

fn certify(edges: &[(u8, u8)], n: usize) -> Result<TreeCertificate> {
    let mut cert = Tree::new(edges, n)?.certificate();
    if n == 8 {
        cert.t_label = Some(catalog_label(&cert));
    }
    Ok(cert)
}

/// Canonical certificate of a tree on `n` vertices labeled `1..=n`.
///
/// For `n = 8` the certificate carries its catalog number.
pub fn classify_tree(edges: &[(u8, u8)], n: usize) -> Result<TreeCertificate> {
    certify(edges, n)
}

/// The lexicographically least longest path of a tree, as 1-based vertices.
/// Each path is compared in both directions.
pub fn diameter_path(edges: &[(u8, u8)], n: usize) -> Result<Vec<u8>> {
    let tree = Tree::new(edges, n)?;
    Ok(tree.diameter_path().into_iter().map(|v| v as u8 + 1).collect())
}

/// Certificate of the path `I_n`.
pub fn path_certificate(n: usize) -> TreeCertificate {
    let edges: Vec<(u8, u8)> = (1..n as u8).map(|i| (i, i + 1)).collect();
    certify(&edges, n).expect("a path is a tree")
}

/// Edges of the twin-star `TS_d` on `2d` vertices: centers 1 and 2, vertex 1
/// carrying `3..=d+1` and vertex 2 carrying `d+2..=2d`.
pub fn twin_star_edges(d: usize) -> Vec<(u8, u8)> {
    let d = d as u8;
    let mut edges = vec![(1, 2)];
    edges.extend((3..=d + 1).map(|v| (1, v)));
    edges.extend((d + 2..=2 * d).map(|v| (2, v)));
    edges
}

/// Certificate of the twin-star `TS_d`.
pub fn twin_star_certificate(d: usize) -> TreeCertificate {
    certify(&twin_star_edges(d), 2 * d).expect("a twin-star is a tree")
}

/// One representative edge list per isomorphism class of trees on `n`
/// vertices, built by attaching a leaf to every vertex of every smaller
/// representative. Sorted by certificate.
pub fn tree_census(n: usize) -> Vec<(TreeCertificate, Vec<(u8, u8)>)> {
    let mut reps = raw_census(n);
    if n == 8 {
        for (cert, _) in &mut reps {
            cert.t_label = Some(catalog_label(cert));
        }
    }
    reps
}

fn raw_census(n: usize) -> Vec<(TreeCertificate, Vec<(u8, u8)>)> {
    assert!((1..=16).contains(&n), "census supports 1..=16 vertices");
    let mut reps: BTreeMap<TreeCertificate, Vec<(u8, u8)>> = BTreeMap::new();
    reps.insert(Tree::new(&[], 1).unwrap().certificate(), Vec::new());
    for m in 2..=n {
        let mut next = BTreeMap::new();
        for edges in reps.values() {
            for v in 1..m as u8 {
                let mut grown = edges.clone();
                grown.push((v, m as u8));
                let cert = Tree::new(&grown, m).unwrap().certificate();
                next.entry(cert).or_insert(grown);
            }
        }
        reps = next;
    }
    reps.into_iter().collect()
}

/// A tree type on eight vertices.
#[derive(Clone, Debug)]
pub struct TreeType {
    pub label: u8,
    /// Whether the label is pinned by a known labeled drawing rather than
    /// assigned by the deterministic fill-in order.
    pub anchored: bool,
    /// The standard labeled representative.
    pub edges: Vec<(u8, u8)>,
    pub certificate: TreeCertificate,
}

/// Labeled representatives with fixed catalog numbers.
const ANCHORS: [(u8, &[(u8, u8)]); 11] = [
    (1, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)]),
    (2, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (6, 8)]),
    (3, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)]),
    (6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7), (5, 8)]),
    (9, &[(1, 2), (2, 3), (3, 5), (4, 5), (5, 6), (5, 7), (5, 8)]),
    (14, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7), (4, 8)]),
    (16, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7), (4, 8)]),
    (17, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7), (3, 8)]),
    (19, &[(1, 2), (2, 4), (2, 7), (3, 4), (4, 5), (4, 8), (5, 6)]),
    (20, &[(1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (4, 7), (4, 8)]),
    (23, &[(1, 2), (2, 3), (3, 4), (4, 5), (2, 6), (3, 7), (4, 8)]),
];

fn diameter_of(edges: &[(u8, u8)]) -> usize {
    Tree::new(edges, 8).unwrap().diameter_path().len() - 1
}

/// The 23 tree types on eight vertices, indexed by `label - 1`.
pub fn tree_catalog() -> &'static [TreeType] {
    static CATALOG: OnceLock<Vec<TreeType>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let census = raw_census(8);
        assert_eq!(census.len(), 23, "trees on eight vertices");
        let mut slots: Vec<Option<TreeType>> = vec![None; 23];
        for (label, edges) in ANCHORS {
            let certificate = Tree::new(edges, 8).unwrap().certificate();
            assert!(
                slots.iter().flatten().all(|t| t.certificate != certificate),
                "two anchors share an isomorphism type"
            );
            slots[label as usize - 1] = Some(TreeType {
                label,
                anchored: true,
                edges: edges.to_vec(),
                certificate,
            });
        }
        let mut rest: Vec<(TreeCertificate, Vec<(u8, u8)>)> = census
            .into_iter()
            .filter(|(c, _)| slots.iter().flatten().all(|t| t.certificate != *c))
            .collect();
        rest.sort_by(|(ca, ea), (cb, eb)| {
            diameter_of(eb)
                .cmp(&diameter_of(ea))
                .then_with(|| ca.degree_seq.cmp(&cb.degree_seq))
                .then_with(|| ca.canon.cmp(&cb.canon))
        });
        let mut rest = rest.into_iter();
        for (i, slot) in slots.iter_mut().enumerate() {
            if slot.is_none() {
                let (certificate, edges) = rest.next().expect("23 types fill 23 labels");
                *slot = Some(TreeType {
                    label: i as u8 + 1,
                    anchored: false,
                    edges,
                    certificate,
                });
            }
        }
        slots
            .into_iter()
            .map(|t| {
                let mut t = t.unwrap();
                t.certificate.t_label = Some(t.label);
                t
            })
            .collect()
    })
}

fn catalog_label(cert: &TreeCertificate) -> u8 {
    tree_catalog()
        .iter()
        .find(|t| t.certificate.canon == cert.canon)
        .map(|t| t.label)
        .expect("every tree on eight vertices is in the catalog")
}

/// The catalog entry for `label` in `1..=23`.
pub fn tree_type(label: u8) -> Result<&'static TreeType> {
    tree_catalog()
        .get((label as usize).wrapping_sub(1))
        .ok_or_else(|| Error::input(format!("tree type {label} outside 1..=23")))
}
