use std::collections::BTreeMap;
use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Pipeline stages, used to attribute restart causes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Partition,
    Placement,
    ParentTree,
    PilePath,
    PileMatch,
    BridgeResolve,
    Assembly,
    FoldCheck,
    HdnCheck,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Partition => "partition",
            Stage::Placement => "placement",
            Stage::ParentTree => "parent-tree",
            Stage::PilePath => "pile-path",
            Stage::PileMatch => "pile-match",
            Stage::BridgeResolve => "bridge-resolve",
            Stage::Assembly => "assembly",
            Stage::FoldCheck => "fold-check",
            Stage::HdnCheck => "hdn-check",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug)]
pub enum Error {
    /// Triangle mesh is not a closed orientable surface.
    NonWatertightMesh(String),
    /// Mesh or model has no volume to voxelize.
    DegenerateInput(String),
    /// Voxel model has an edge- or vertex-only contact; the boundary is not a 2-manifold.
    NonManifold { at: [i64; 3], detail: String },
    /// Empty voxel model or empty graph where content is required.
    EmptyModel,
    /// Panel count is not divisible by the requested pile count.
    NotDivisible { panels: usize, piles: usize },
    /// Pile count exceeds the exhaustive placement limit.
    PlacementLimit(usize),
    /// Grid placement does not connect all piles through positive-weight adjacencies.
    PlacementDisconnected,
    /// A pile could not be bridged to its parent pile.
    PileUnbridgeable { pile: usize },
    /// Assembled hinge set is not a spanning tree.
    Assembly(String),
    /// The whole pipeline ran out of restarts; counts of which stage failed how often.
    SearchExhausted {
        attempts: u32,
        failures: BTreeMap<Stage, u32>,
    },
    /// Hamiltonian search gave up within its budget.
    BudgetExhausted { expansions: u64 },
    /// Constraints passed to a solver are mutually infeasible.
    Infeasible(String),
    /// Text input could not be parsed.
    Parse { line: usize, msg: String },
    /// Duplicate record where exactly one is allowed.
    Duplicate(String),
    /// A verification report came back negative where success was required.
    Verification(String),
    Io(String),
    /// An argument violated a documented precondition.
    Contract(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonWatertightMesh(d) => write!(f, "non-watertight mesh: {d}"),
            Error::DegenerateInput(d) => write!(f, "degenerate input: {d}"),
            Error::NonManifold { at, detail } => {
                write!(f, "non-manifold edge at ({} {} {}): {detail}", at[0], at[1], at[2])
            }
            Error::EmptyModel => write!(f, "empty model"),
            Error::NotDivisible { panels, piles } => {
                write!(f, "panel count not divisible by pile count ({panels} % {piles} != 0)")
            }
            Error::PlacementLimit(k) => {
                write!(f, "pile count beyond exhaustive placement limit ({k} > 8)")
            }
            Error::PlacementDisconnected => write!(f, "pile placement disconnects piles"),
            Error::PileUnbridgeable { pile } => write!(f, "pile {pile} cannot be bridged to its parent"),
            Error::Assembly(d) => write!(f, "assembly error: {d}"),
            Error::SearchExhausted { attempts, failures } => {
                write!(f, "search failed after {attempts} attempts (")?;
                let mut first = true;
                for (stage, n) in failures {
                    if !first {
                        write!(f, ", ")?;
                    }
                    write!(f, "{stage}: {n}")?;
                    first = false;
                }
                write!(f, ")")
            }
            Error::BudgetExhausted { expansions } => {
                write!(f, "search budget exhausted after {expansions} expansions")
            }
            Error::Infeasible(d) => write!(f, "infeasible constraints: {d}"),
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::Duplicate(d) => write!(f, "duplicate record: {d}"),
            Error::Verification(d) => write!(f, "verification failed: {d}"),
            Error::Io(d) => write!(f, "io error: {d}"),
            Error::Contract(d) => write!(f, "contract violation: {d}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
