//! Versioned JSON snapshot of a stored cluster.

use plucker_dss::{Field, FieldSpec, GfNode, NodeVector};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SNAPSHOT_FORMAT: &str = "plucker-dss-snapshot";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotNode {
    pub id: Vec<u32>,
    pub payload: Vec<u32>,
    pub alive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Snapshot {
    pub format: String,
    pub version: u32,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<String>,
    pub b: usize,
    pub nodes: Vec<SnapshotNode>,
}

impl Snapshot {
    pub fn from_nodes(f: &FieldSpec, b: usize, nodes: &[GfNode]) -> Self {
        Self {
            format: SNAPSHOT_FORMAT.into(),
            version: SNAPSHOT_VERSION,
            field: f.name(),
            modulus: f.modulus().map(|m| format!("0x{m:x}")),
            b,
            nodes: nodes
                .iter()
                .map(|n| SnapshotNode {
                    id: n.id.coords().iter().map(|c| c.value()).collect(),
                    payload: n.payload.iter().map(|c| c.value()).collect(),
                    alive: n.alive,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("snapshot serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let s: Snapshot = serde_json::from_str(text).map_err(|e| CliError::Snapshot(e.to_string()))?;
        if s.format != SNAPSHOT_FORMAT || s.version != SNAPSHOT_VERSION {
            return Err(CliError::Snapshot(format!(
                "unsupported format {:?} version {}",
                s.format, s.version
            )));
        }
        Ok(s)
    }

    /// Rebuilds the field and node states, validating every element.
    pub fn restore(&self) -> CliResult<(FieldSpec, Vec<GfNode>)> {
        let f = FieldSpec::parse(&self.field, self.modulus.as_deref())?;
        let element = |v: u32| f.element(v as u64);
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (i, n) in self.nodes.iter().enumerate() {
            let coords = n.id.iter().map(|&v| element(v)).collect::<Result<Vec<_>, _>>()?;
            if coords.len() != self.b || n.payload.len() + 1 != self.b {
                return Err(CliError::Snapshot(format!("node {i} has the wrong shape for b = {}", self.b)));
            }
            let id = NodeVector::new(&f, coords).map_err(|e| CliError::Snapshot(format!("node {i}: {e}")))?;
            let payload = n.payload.iter().map(|&v| element(v)).collect::<Result<Vec<_>, _>>()?;
            let mut node = GfNode::new(id, payload);
            node.alive = n.alive;
            nodes.push(node);
        }
        Ok((f, nodes))
    }
}
