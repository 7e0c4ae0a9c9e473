pub mod commands;
pub mod context;
pub mod manifest;
pub mod verify;
