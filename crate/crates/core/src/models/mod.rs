//! QCNN architectures: the baseline convolution-circuit library, pooling
//! and interpolation layers, hybrid Type I/II and regular forward
//! passes, the grid-search menu and the published evaluation tables.

mod baselines;
mod grouped;
mod hybrid;
mod menu;
mod pooling;
mod regular;
mod tables;

pub use baselines::{available_ids, baseline_circuit, BaselineId};
pub use grouped::GroupedState;
pub use hybrid::{HybridLayer, HybridModel, HybridPlan, HybridVariant};
pub use menu::{best_model, grid_search_menu, menu_model, GRID_IMAGE_SIZE};
pub use pooling::{apply_pooling, interpolation_arrows, pooling_block_arrows, pooling_unitary};
pub use regular::{apply_interpolation, ConvRef, RegularModel, RegularPlan, StackLayer};
pub use tables::{reference_table, reference_tables, ReferenceRow, ReferenceTable};
