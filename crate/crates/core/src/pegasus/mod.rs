//! Pegasus hardware graphs and the two scalable parity embeddings.

mod diamond;
mod embedding;
mod graph;

pub use diamond::{cell_node, check_diamond_contract, extract_diamonds, Diamond, Slot};
pub use embedding::{
    build_dense, build_embedding, build_original, chain_strength, embed_problem, find_largest_lhz,
    place_lhz, site_chain, validate_embedding, ChainMap, ChainStrength, Coupling, DerivedTopology,
    EmbeddedProblem, Embedding, EmbeddingStyle, LhzPlacement, PlaquetteSite, Site, SiteKind,
    ValidationReport, Violation,
};
pub use graph::{
    generate_pegasus, parse_defects, NiceCoord, PegasusCoord, PegasusGraph, HORIZONTAL_OFFSETS,
    VERTICAL_OFFSETS,
};
