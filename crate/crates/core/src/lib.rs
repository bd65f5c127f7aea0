//! A workbench for the joint logic of problems and propositions.

pub mod calculi;
pub mod catalog;
pub mod metalogic;
pub mod models;
pub mod search;
pub mod syntax;
pub mod translations;
