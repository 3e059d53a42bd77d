//! Single-layer random graphs, inter-layer coupling and edge-list files.
//!
//! All generators are pure functions of their parameters and seed.

mod coupling;
mod generators;
mod graph;
mod io;
mod spec;

pub use coupling::{
    couple_random, couple_to_hubs, fraction_to_count, hub_quotas, sample_hub_links, sample_random_links,
    select_hubs, LinkSpec,
};
pub use generators::{
    gen_barabasi_albert, gen_barabasi_albert_edges, gen_erdos_renyi, gen_erdos_renyi_gnm, gen_watts_strogatz,
};
pub use graph::{Graph, Interlinks, Layer, LayeredNetwork};
pub use io::{
    layered_paths, load_graph, load_interlinks, load_layered, save_graph, save_interlinks, save_layered,
};
pub use spec::NetworkSpec;
