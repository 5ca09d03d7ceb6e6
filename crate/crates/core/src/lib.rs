//! Exact lattice computations for 2-elementary K3 Picard lattices: root
//! lattices and discriminant forms, short-vector enumeration, Dynkin
//! recognition of fibre configurations, and Mordell-Weil rank bookkeeping
//! for elliptic fibrations.

pub mod exact;
pub mod lattice;
pub mod roots;
pub mod fibration;
pub mod scenarios;
