//! Composition series of induced representations built from strongly
//! positive discrete series and families of segments.

pub mod config;
pub mod decompose;
pub mod error;
pub mod grothendieck;
pub mod halfint;
pub mod mu_star;
pub mod oracle;
pub mod report;
pub mod segment;
pub mod symbols;
pub mod triples;

pub use config::Config;
pub use decompose::{
    decompose, decompose_from_langlands, normalize_family, subquotient_embedding_witness,
    Constituent, Counts, DecompositionResult, LanglandsLabel, Setting,
};
pub use error::{Error, Result};
pub use grothendieck::{FormalSum, InducedTerm, JacquetTerm, Multisegment};
pub use halfint::{HalfInt, Parity};
pub use mu_star::{expand_segment, mu_star_induced, sp_upper_mu_star, FilterMode, MuStarExpansion};
pub use oracle::{count_multiplicity, forced_index_trace, AnchorCondition, CountQuery};
pub use segment::{Segment, Support};
pub use symbols::{CuspidalLabel, CuspidalSymbol, SymbolTable};
pub use triples::{
    enumerate_extensions, is_alternated, reduce_to_alternated, sp_embedding, validate_family,
    AdmissibleTriple, CuspContext, FamilyEntry, JordanBlock, Sign, StronglyPositiveDescriptor,
};
