//! Brute-force counting of admissible block tuples, written against plain
//! integer matrices and modular tuples so it shares no code with the library.

#![allow(dead_code)]

pub mod oracle;
