//! Library side of the `eisenkron` command-line tool: run configuration,
//! result records, the invariants cache, verification suites and p-adic
//! file commands.

pub mod cache;
pub mod config;
pub mod expr;
pub mod padic_cmd;
pub mod record;
pub mod suites;
pub mod torsion_arg;

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    /// A numerical routine could not reach the requested accuracy.
    pub const COMPUTE: i32 = 3;
}
