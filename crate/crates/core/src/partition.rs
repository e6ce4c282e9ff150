//! Partitions of element ids and the union-find used to build them.

use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    /// Returns true if the two sets were distinct.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }

    pub fn into_partition(mut self, note: impl Into<String>) -> Partition {
        let roots: Vec<u32> = (0..self.parent.len() as u32)
            .map(|x| self.find(x))
            .collect();
        Partition::from_labels(&roots, note)
    }
}

/// A partition of `0..n`. Blocks are numbered by their smallest member, so
/// two equal partitions always have identical `block_of` vectors.
#[derive(Clone, Debug, Serialize)]
pub struct Partition {
    block_of: Vec<u32>,
    blocks: usize,
    note: String,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.block_of == other.block_of
    }
}

impl Eq for Partition {}

impl Partition {
    pub fn from_labels<L: Hash + Eq + Clone>(labels: &[L], note: impl Into<String>) -> Partition {
        let mut seen: HashMap<L, u32> = HashMap::new();
        let block_of = labels
            .iter()
            .map(|l| {
                let next = seen.len() as u32;
                *seen.entry(l.clone()).or_insert(next)
            })
            .collect();
        Partition {
            block_of,
            blocks: seen.len(),
            note: note.into(),
        }
    }

    pub fn discrete(n: usize, note: impl Into<String>) -> Partition {
        Partition {
            block_of: (0..n as u32).collect(),
            blocks: n,
            note: note.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_count(&self) -> usize {
        self.blocks
    }

    pub fn block_of(&self, x: u32) -> u32 {
        self.block_of[x as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.block_of
    }

    pub fn note(&self) -> &str {
        &self.note
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Partition {
        self.note = note.into();
        self
    }

    /// Members of every block, each sorted, blocks in numbering order.
    pub fn blocks(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b as usize].push(x as u32);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.blocks];
        for &b in &self.block_of {
            out[b as usize] += 1;
        }
        out
    }

    /// Smallest member of each block.
    pub fn representatives(&self) -> Vec<u32> {
        let mut reps = vec![u32::MAX; self.blocks];
        for (x, &b) in self.block_of.iter().enumerate() {
            let r = &mut reps[b as usize];
            *r = (*r).min(x as u32);
        }
        reps
    }

    /// True if every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.len() != coarser.len() {
            return false;
        }
        let mut image: Vec<Option<u32>> = vec![None; self.blocks];
        for (x, &b) in self.block_of.iter().enumerate() {
            let c = coarser.block_of[x];
            match image[b as usize] {
                None => image[b as usize] = Some(c),
                Some(prev) if prev != c => return false,
                _ => {}
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_counts_sets() {
        let mut uf = UnionFind::new(6);
        assert!(uf.union(0, 3));
        assert!(uf.union(3, 5));
        assert!(!uf.union(5, 0));
        assert_eq!(uf.set_count(), 4);
        let p = uf.into_partition("t");
        assert_eq!(p.labels(), &[0, 1, 2, 0, 3, 0]);
        assert_eq!(p.block_sizes(), vec![3, 1, 1, 1]);
        assert_eq!(p.representatives(), vec![0, 1, 2, 4]);
    }

    #[test]
    fn refinement() {
        let fine = Partition::from_labels(&[0, 1, 2, 2], "");
        let coarse = Partition::from_labels(&['a', 'b', 'b', 'b'], "");
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
        assert!(Partition::discrete(4, "").refines(&fine));
    }
}
