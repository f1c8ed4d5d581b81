//! Exact cubical singular homology of finite binary digital images.

mod error;
pub mod image;
pub mod par;
pub mod cubes;
pub mod linalg;
pub mod chain;
pub mod complex;
pub mod homology;
pub mod groups;
pub mod paths;
pub mod sampling;
pub mod axioms;
pub mod io;

pub use error::{Error, Result};
pub use image::*;
pub use par::EngineConfig;
pub use cubes::*;
pub use chain::{boundary_chain, Chain, ChainTerm};
pub use complex::{boundary_matrix, boundary_matrix_with, BoundaryMatrix, ChainComplex};
pub use homology::{
    connecting_hom, homology, homology_class, homology_of_complex, homology_with, induced_map,
    relative_homology, relative_homology_with, HomologyClassCoords, HomologyGroup,
};
pub use groups::GroupShape;
pub use linalg::{smith_normal_form, IntMatrix, SnfResult};
pub use paths::{
    concat, cycle_to_loop, homotopy_invariance_witness, hurewicz, reverse, shortest_path, subdivide, validate_path_homotopy,
    verify_map_homotopy_prism, verify_map_homotopy_prism_with, DigitalPath, MapHomotopy, PathHomotopyGrid,
};
pub use axioms::{
    check_additivity, check_dimension_and_functoriality, check_excision, check_homotopy_axiom, check_lemma_cover,
    check_les, AxiomReport, Detail, ExcisionDepth, MapChain, Verdict,
};
