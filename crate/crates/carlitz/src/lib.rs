pub mod commands;
pub mod formats;
pub mod parse;
pub mod sampling;
