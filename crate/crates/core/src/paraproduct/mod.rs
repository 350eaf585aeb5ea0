//! Paraproducts, multiplication-inequality probes and the localisation
//! toolkit (extension operator, covers, partitions of unity, commutators).

mod bony;
mod commutator;
mod cover;
mod extension;
mod probes;

pub use bony::{bony_decompose, bony_decompose_inner, BonyTriple};
pub use commutator::{commutator, commutator_epsilon, commutator_probe, CommutatorReport};
pub use cover::{build_cover, bump_profile, cover_radius, partition_of_unity, Cover, PartitionOfUnity};
pub use extension::{blend_cutoff, extension_operator, ExtensionOperator};
pub use probes::{
    corollary_epsilon, p3_epsilon, probe_multiplication, MultiplicationCase, ProbeOutcome, ProbeParams,
};
