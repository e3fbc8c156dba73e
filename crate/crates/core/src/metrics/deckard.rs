//! Characteristic vectors over AST node kinds.
//!
//! The basic vector counts each node kind once per occurrence (height-0
//! patterns). The extended mode appends counts of parent/child kind pairs
//! (height-1 patterns) in row-major order.

use serde::{Deserialize, Serialize};

use crate::corpus::{AstNode, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeckardMode {
    #[default]
    Kinds,
    KindsAndPairs,
}

impl DeckardMode {
    pub fn dimension(self) -> usize {
        let k = NodeKind::ALL.len();
        match self {
            DeckardMode::Kinds => k,
            DeckardMode::KindsAndPairs => k + k * k,
        }
    }
}

pub fn deckard_vector(ast: &AstNode, mode: DeckardMode) -> Vec<u32> {
    let k = NodeKind::ALL.len();
    let mut counts = vec![0u32; mode.dimension()];
    ast.walk(&mut |node, parent| {
        counts[node.kind.index()] += 1;
        if let (DeckardMode::KindsAndPairs, Some(parent)) = (mode, parent) {
            counts[k + parent.kind.index() * k + node.kind.index()] += 1;
        }
    });
    counts
}
