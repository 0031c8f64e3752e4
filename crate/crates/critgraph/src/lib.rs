//! Verification toolkit for edge-chromatic critical graphs: exact chromatic
//! indices, partial edge colorings with a full Kempe-chain engine,
//! enumeration of multifans / Kierstead paths / short brooms / forks,
//! extensional checks for the structural facts they support, and a small
//! recoloring-script DSL.

pub mod chromatic;
pub mod coloring;
pub mod graph;
pub mod script;
pub mod structures;
pub mod theorems;

pub use chromatic::{
    chromatic_index, classify, critical_edges, enumerate_colorings, find_delta_coloring,
    is_delta_critical, vizing_plus_one_coloring, ColoringEnumeration, EnumerationMode, GraphClass,
};
pub use coloring::{Chain, ChainKind, ColorSet, Coloring, ColoringError, EdgeAction};
pub use graph::{Graph, Graph6Error, GraphError, VertexPartition};
pub use script::{execute_script, parse_script, render_script, ScriptProgram};
pub use structures::{
    broom_profile, enumerate_kierstead_paths, enumerate_short_brooms, find_forks, grow_multifan,
    is_simple_broom, BroomMode, BroomProfile, Fork, KiersteadPath, Multifan, ShortBroom,
};
pub use theorems::{run_checks, Budget, CheckId, Report};
