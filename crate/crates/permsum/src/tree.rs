//! Increasing binary trees of permutations and DOT export.
//!
//! The classical bijection: the root of the tree for a sequence of distinct
//! values is the minimum; its left and right subtrees are the trees of the
//! subsequences to the left and right of that minimum. Equivalently, every
//! entry's parent is its nearer smaller neighbor. The product-one insertion
//! chain becomes easy to see in this representation, which is why the CLI
//! exports it.

use crate::perm::Permutation;

/// The increasing binary tree of a permutation, stored as child links
/// indexed by entry value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncreasingBinaryTree {
    root: u32,
    left: Vec<Option<u32>>,
    right: Vec<Option<u32>>,
}

impl IncreasingBinaryTree {
    /// Builds the tree for `p` by recursive minimum splitting.
    pub fn from_permutation(p: &Permutation) -> Self {
        let entries = p.entries();
        let n = entries.len();
        let mut tree = IncreasingBinaryTree {
            root: 0,
            left: vec![None; n + 1],
            right: vec![None; n + 1],
        };
        tree.root = tree.build(entries, 0, n).expect("nonempty permutation");
        tree
    }

    fn build(&mut self, entries: &[u32], lo: usize, hi: usize) -> Option<u32> {
        if lo >= hi {
            return None;
        }
        let (min_idx, &min_val) = entries[lo..hi]
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| v)
            .map(|(i, v)| (lo + i, v))
            .expect("nonempty range");
        self.left[min_val as usize] = self.build(entries, lo, min_idx);
        self.right[min_val as usize] = self.build(entries, min_idx + 1, hi);
        Some(min_val)
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn left_child(&self, v: u32) -> Option<u32> {
        self.left[v as usize]
    }

    pub fn right_child(&self, v: u32) -> Option<u32> {
        self.right[v as usize]
    }

    /// Parent→child edges in preorder, each node's left edge before its
    /// right edge.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut edges = Vec::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            let (l, r) = (self.left[v as usize], self.right[v as usize]);
            if let Some(l) = l {
                edges.push((v, l));
            }
            if let Some(r) = r {
                edges.push((v, r));
            }
            // Right pushed first so the left subtree is walked first.
            if let Some(r) = r {
                stack.push(r);
            }
            if let Some(l) = l {
                stack.push(l);
            }
        }
        edges
    }

    /// The tree in DOT digraph form. `ordering=out` keeps the left/right
    /// child order in rendered layouts; leaf-less nodes still appear.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph increasing_binary_tree {\n");
        out.push_str("  node [shape=circle];\n");
        out.push_str("  ordering = out;\n");
        for v in 1..self.left.len() as u32 {
            out.push_str(&format!("  {v};\n"));
        }
        for (parent, child) in self.edges() {
            out.push_str(&format!("  {parent} -> {child};\n"));
        }
        out.push_str("}\n");
        out
    }
}
