//! Downlink simulator for one cloud-RAN antenna domain.
//!
//! The pipeline of a Monte-Carlo drop is: [`scenario::drop_deployment`] →
//! [`channel::synthesize`] → [`association::associate_users`] →
//! [`clustering::cluster_for`] → zero-forcing or WMMSE precoding →
//! [`metrics::sinr_terms`] → sum-rate and overhead-adjusted sum-rate.
//! [`harness`] runs drops in bulk and writes the results.

pub mod association;
pub mod channel;
pub mod clustering;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod precoding;
pub mod scenario;
pub mod seed;

pub use association::{associate, associate_users, Association};
pub use channel::{path_loss_db, rician_params, synthesize, ChannelSet, Correlations, FadingDraw, PathLossModel};
pub use clustering::{cluster_for, cluster_greedy, cluster_trivial, Clustering, IsolatedRate};
pub use error::{Error, Result};
pub use harness::{
    emit, emit_compare, run_compare, run_drop, run_sweep, DropOutcome, RunOptions, Scheme, SweepPoint,
    SweepResult,
};
pub use linalg::{CMatrix, CVector, C64};
pub use metrics::{adjusted_sum_rate, ecdf, sinr_terms, sum_rate, InterferenceSplit, RateReport};
pub use precoding::{
    wmmse_cb, wmmse_precoder, wmmse_scope, zfbf_all, zfbf_cluster, zfbf_precoder, PrecodeResult,
    WmmseDiagnostics, WmmseOptions,
};
pub use scenario::{
    drop_deployment, load_config, Coordination, Deployment, PrecoderKind, ScenarioConfig, SweepParam,
};
