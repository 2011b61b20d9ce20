pub mod cases;
pub mod cli;
pub mod logic;
pub mod poset;
pub mod term;
pub mod testkit;
