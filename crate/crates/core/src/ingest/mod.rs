//! Transportation networks in TNTP format, turned into path games.

mod paths;
mod tntp;

pub use paths::{bpr_prices, enumerate_paths, k_shortest_paths, EnumerateError, Path, PathGame, DEFAULT_K};
pub use tntp::{
    parse_network, parse_tntp, parse_trips, write_network, write_trips, Link, ParseError, ParseErrorKind, TntpNetwork,
    TripTable, TOTAL_FLOW_TOL,
};
