//! Lookup structures derived from a codebook: a character trie for longest
//! match and a binary tree for prefix decoding.

use crate::codebook::{CodebookEntry, Codeword};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Symbol {
    Entry(u32),
    Escape,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Slot {
    Empty,
    Node(u32),
    Leaf(Symbol),
}

#[derive(Debug, Clone, Default)]
struct TrieNode {
    children: Vec<(char, u32)>,
    entry: Option<u32>,
}

#[derive(Debug, Clone)]
pub(crate) struct CodebookIndex {
    trie: Vec<TrieNode>,
    tree: Vec<[Slot; 2]>,
}

impl CodebookIndex {
    pub(crate) fn new(entries: &[CodebookEntry], escape: Codeword) -> Self {
        let mut trie = vec![TrieNode::default()];
        for (i, e) in entries.iter().enumerate() {
            let mut node = 0usize;
            for c in e.token.chars() {
                node = match trie[node].children.iter().find(|(k, _)| *k == c) {
                    Some(&(_, child)) => child as usize,
                    None => {
                        let child = trie.len();
                        trie.push(TrieNode::default());
                        trie[node].children.push((c, child as u32));
                        child
                    }
                };
            }
            let keep = match trie[node].entry {
                Some(prev) => entries[prev as usize].level < e.level,
                None => true,
            };
            if keep {
                trie[node].entry = Some(i as u32);
            }
        }
        for n in &mut trie {
            n.children.sort_unstable_by_key(|(c, _)| *c);
        }

        let mut tree = vec![[Slot::Empty; 2]];
        let mut insert = |cw: Codeword, sym: Symbol| {
            let mut node = 0usize;
            for i in 0..cw.len() {
                let b = cw.bit(i) as usize;
                if i + 1 == cw.len() {
                    tree[node][b] = Slot::Leaf(sym);
                } else {
                    node = match tree[node][b] {
                        Slot::Node(n) => n as usize,
                        _ => {
                            let n = tree.len();
                            tree.push([Slot::Empty; 2]);
                            tree[node][b] = Slot::Node(n as u32);
                            n
                        }
                    };
                }
            }
        };
        for (i, e) in entries.iter().enumerate() {
            insert(e.codeword, Symbol::Entry(i as u32));
        }
        insert(escape, Symbol::Escape);

        CodebookIndex { trie, tree }
    }

    /// Longest entry that is a prefix of `text`, with its byte length.
    pub(crate) fn longest_match(&self, text: &str) -> Option<(u32, usize)> {
        let mut node = 0usize;
        let mut best = None;
        for (i, c) in text.char_indices() {
            let children = &self.trie[node].children;
            match children.binary_search_by_key(&c, |(k, _)| *k) {
                Ok(pos) => node = children[pos].1 as usize,
                Err(_) => break,
            }
            if let Some(e) = self.trie[node].entry {
                best = Some((e, i + c.len_utf8()));
            }
        }
        best
    }

    pub(crate) fn step(&self, node: usize, bit: bool) -> Slot {
        self.tree[node][bit as usize]
    }
}
