//! Configuration files.
//!
//! ```toml
//! [system]
//! field = "gf(4)"        # gf(p) for a prime p, or gf(2^m) as gf(4), gf(8), ...
//! modulus = "0x7"        # optional, GF(2^m) only
//! b = 4                  # optional when the assignment file fixes it
//! seed = 1               # optional, default 0
//! node_budget = 100000   # optional cap on generated assignments
//! locality_cap = 2       # optional, default: the assignment's locality, else b
//!
//! [assignment]
//! strategy = "full"      # full | unit | partition | generator | explicit
//! c = 2                  # partition: group size
//! path = "vectors.txt"   # generator / explicit: relative to this file
//! ```
//!
//! Command-line flags override the `[system]` values.

use std::path::{Path, PathBuf};

use plucker_dss::assignment::{
    from_generator_matrix, full_assignment, locality_partition_assignment, parse_matrix, parse_vectors,
    DEFAULT_ENUMERATION_BUDGET,
};
use plucker_dss::{Assignment, FieldSpec, GfAssignment, NodeVector};
use serde::Deserialize;

use crate::error::{read_to_string, CliError, CliResult};

pub const DEFAULT_NODE_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub field: Option<String>,
    pub modulus: Option<String>,
    pub b: Option<usize>,
    pub seed: Option<u64>,
    pub node_budget: Option<usize>,
    pub locality_cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Full,
    Unit,
    Partition,
    Generator,
    Explicit,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentSection {
    #[serde(default)]
    pub strategy: Strategy,
    pub c: Option<usize>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub system: SystemSection,
    #[serde(default)]
    pub assignment: AssignmentSection,
    /// Directory that relative assignment paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl ConfigFile {
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config {
            path: origin.to_string(),
            message: e.to_string().trim_end().to_string(),
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let mut cfg = Self::parse(&read_to_string(path)?, &path.display().to_string())?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }
}

/// Values given on the command line; they win over the file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub field: Option<String>,
    pub modulus: Option<String>,
    pub b: Option<usize>,
    pub seed: Option<u64>,
}

/// A configuration resolved into library objects.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub field: FieldSpec,
    pub b: usize,
    pub seed: u64,
    pub assignment: GfAssignment,
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError::Config {
        path: "<resolved>".into(),
        message: message.into(),
    }
}

pub fn resolve(cfg: &ConfigFile, over: &Overrides) -> CliResult<Loaded> {
    let field_name = over
        .field
        .clone()
        .or_else(|| cfg.system.field.clone())
        .ok_or_else(|| invalid("no field given (set [system] field or pass --field)"))?;
    let modulus = over.modulus.as_deref().or(cfg.system.modulus.as_deref());
    let field = FieldSpec::parse(&field_name, modulus).map_err(|e| invalid(e.to_string()))?;
    let b = over.b.or(cfg.system.b);
    let seed = over.seed.or(cfg.system.seed).unwrap_or(0);
    let budget = cfg.system.node_budget.unwrap_or(DEFAULT_NODE_BUDGET);

    let need_b = || b.ok_or_else(|| invalid("no b given (set [system] b or pass --b)"));
    let read_path = || -> CliResult<String> {
        let rel = cfg
            .assignment
            .path
            .as_ref()
            .ok_or_else(|| invalid("this strategy needs [assignment] path"))?;
        read_to_string(&cfg.base_dir.join(rel))
    };
    let context = |e: plucker_dss::Error| CliError::Core {
        context: "assignment".into(),
        source: e,
    };

    let mut assignment = match cfg.assignment.strategy {
        Strategy::Full => full_assignment(&field, need_b()?, budget).map_err(context)?,
        Strategy::Unit => {
            let b = need_b()?;
            Assignment::explicit((0..b).map(|i| NodeVector::unit(&field, b, i)).collect()).map_err(context)?
        }
        Strategy::Partition => {
            let b = need_b()?;
            let c = cfg
                .assignment
                .c
                .ok_or_else(|| invalid("partition strategy needs [assignment] c"))?;
            let basis: Vec<_> = (0..b).map(|i| NodeVector::unit(&field, b, i)).collect();
            locality_partition_assignment(&field, &basis, c).map_err(context)?
        }
        Strategy::Generator => {
            let g = parse_matrix(&field, &read_path()?).map_err(context)?;
            from_generator_matrix(&field, &g, DEFAULT_ENUMERATION_BUDGET).map_err(context)?
        }
        Strategy::Explicit => {
            let vectors = parse_vectors(&field, &read_path()?).map_err(context)?;
            Assignment::explicit(vectors).map_err(context)?
        }
    };
    let dim = assignment
        .dim()
        .ok_or_else(|| invalid("the assignment has no vectors"))?;
    if assignment.vectors.iter().any(|v| v.dim() != dim) {
        return Err(invalid("assignment vectors differ in length"));
    }
    if let Some(b) = b {
        if b != dim {
            return Err(invalid(format!("b = {b} but the assignment vectors have length {dim}")));
        }
    }
    if assignment.len() > budget {
        return Err(invalid(format!(
            "assignment has {} nodes, over the node budget {budget}",
            assignment.len()
        )));
    }
    if let Some(cap) = cfg.system.locality_cap {
        assignment.claimed_locality = Some(cap);
    }
    Ok(Loaded {
        field,
        b: dim,
        seed,
        assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use plucker_dss::Field;

    #[test]
    fn parses_full_config() {
        let cfg = ConfigFile::parse(
            "[system]\nfield = \"gf(8)\"\nmodulus = \"0xb\"\nb = 3\nseed = 5\n\n[assignment]\nstrategy = \"partition\"\nc = 3\n",
            "t.toml",
        )
        .unwrap();
        let l = resolve(&cfg, &Overrides::default()).unwrap();
        assert_eq!(l.field.order(), 8);
        assert_eq!(l.seed, 5);
        assert_eq!(l.assignment.len(), 73);
        assert_eq!(l.assignment.claimed_locality, Some(3));
    }

    #[test]
    fn errors_name_the_line() {
        let err = ConfigFile::parse("[system]\nfield = \"gf(2)\"\nb = three\n", "bad.toml").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.toml") && msg.contains("line 3"), "{msg}");
        let err = ConfigFile::parse("[system]\ncolour = 1\n", "bad.toml").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn overrides_win() {
        let cfg = ConfigFile::parse("[system]\nfield = \"gf(2)\"\nb = 3\n", "t").unwrap();
        let over = Overrides {
            field: Some("gf(3)".into()),
            b: Some(4),
            seed: Some(9),
            ..Default::default()
        };
        let l = resolve(&cfg, &over).unwrap();
        assert_eq!((l.field.order(), l.b, l.seed, l.assignment.len()), (3, 4, 9, 40));
    }

    #[test]
    fn missing_pieces_are_reported() {
        let cfg = ConfigFile::parse("[system]\nb = 3\n", "t").unwrap();
        assert!(resolve(&cfg, &Overrides::default()).unwrap_err().to_string().contains("no field"));
        let cfg = ConfigFile::parse("[system]\nfield = \"gf(2)\"\n[assignment]\nstrategy = \"partition\"\n", "t").unwrap();
        assert!(resolve(&cfg, &Overrides { b: Some(4), ..Default::default() }).is_err());
        let cfg = ConfigFile::parse("[system]\nfield = \"gf(6)\"\nb = 3\n", "t").unwrap();
        assert!(resolve(&cfg, &Overrides::default()).is_err());
        let cfg = ConfigFile::parse("[system]\nfield = \"gf(2)\"\nb = 20\nnode_budget = 1000\n", "t").unwrap();
        assert!(resolve(&cfg, &Overrides::default()).is_err());
    }
}
