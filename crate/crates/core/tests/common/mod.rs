#![allow(dead_code)]

pub mod mutation;
pub mod properties;
pub mod witnesses;
