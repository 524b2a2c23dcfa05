// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Multi-tenant quantum device simulator for SWAP-path crosstalk attacks.
//!
//! Two tenants sharing a device leak into each other through routed gate
//! activity. The crate models that leak and the two attacks built on it:
//!
//! * an active attack, where a long-range CNOT routed through a victim's
//!   qubits degrades the victim's output ([`active`]);
//! * a passive attack, where idle listening qubits record a crosstalk
//!   signature that identifies the victim's size or hidden shift
//!   ([`passive`]).
//!
//! The runnable programs in `examples/` are the main entry points. The
//! `crosstalk-arena` binary exposes the same experiments on the command line.

pub mod active;
pub mod circuits;
pub mod cli;
pub mod experiments;
pub mod noise;
pub mod passive;
pub mod rng;
pub mod router;
pub mod statevector;
pub mod topology;

use thiserror::Error;

pub use active::{classify_severity, SeverityClass};
pub use circuits::{LogicalCircuit, MultiTenantProgram};
pub use noise::CrosstalkModel;
pub use router::{Layout, RoutedCircuit, SwapPath};
pub use topology::{build_heavy_hex, DeviceTopology};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Topology(#[from] topology::TopologyError),
    #[error(transparent)]
    Route(#[from] router::RouteError),
    #[error(transparent)]
    Circuit(#[from] circuits::CircuitError),
    #[error(transparent)]
    Noise(#[from] noise::NoiseError),
    #[error(transparent)]
    Active(#[from] active::ActiveError),
    #[error(transparent)]
    Passive(#[from] passive::PassiveError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
}
