//! Named-data forwarding with content signatures.
//!
//! [`naming`] and [`wire`] define names and the TLV packet codec, [`node`]
//! runs the CS/PIT/FIB forwarding pipeline and [`simnet`] drives whole
//! topologies. [`sigcore`] holds the six signature schemes, [`sigaccel`]
//! the batch, aggregate, online/offline and server-aided techniques, and
//! [`netcoding`] the homomorphic network-coding signatures.

pub mod naming;
pub mod netcoding;
pub mod node;
pub mod sigaccel;
pub mod simnet;
pub mod sigcore;
pub mod tlv;
pub mod wire;
