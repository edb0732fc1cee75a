//! Degree profiles, the semi-random covering simulator, and the weighted edge law.

pub mod instance;
pub mod profile;
pub mod sampler;
pub mod sim;
pub mod weighted;

pub use instance::{
    calibrated_degrees, calibrated_instance, constant_degree_instance, default_rounds, CoverInstance, RoundItem,
};
pub use profile::{audit, covering_sums, degree_profile, AuditConfig, CoverAudit, DegreeProfile};
pub use sampler::{Conditioned, DiscreteEdge, EdgeSampler, UniformSubset};
pub use sim::{simulate_cover, simulate_replicate, CoverMode, CoverStats};
pub use weighted::{
    sifted_targets, uniform_covering_report, weighted_edge_sampler, CoveringReport, WeightedConfig, WeightedReport,
    WeightedSampler,
};
