//! Estimators that turn sampled graphs into observables: degree tails,
//! crossing probabilities, chemical distances, semi-clusters and box
//! goodness.

mod crossing;
mod degrees;
mod distance;
mod renorm;
mod scaling;

pub use crossing::{
    bisect_critical, crosses, crossing_curve, crossing_indicators, crossing_probability,
    BisectResult, CrossingEstimate,
};
pub use degrees::{
    degree_summary, degree_tail, hill_tail, DegreeSummary, TailFit, DEFAULT_TAIL_FRACTION,
};
pub use distance::{
    chemical_distance_profile, distance_profile, DistanceProfile, Metric, RadiusRow, BAND,
};
pub use renorm::{
    default_kappa0, find_semi_clusters, renorm_goodness, CertificateDetail, RenormCertificate,
    RenormSchedule, SemiCluster,
};
pub use scaling::{box_cluster_scaling, ScalingReport, ScalingRow, PRECONDITION_CROSSING};
