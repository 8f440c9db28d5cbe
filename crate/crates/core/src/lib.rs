//! Dynamic foreign-function calls over typed host vectors with 64-bit
//! lengths.
//!
//! A call names a symbol in a loaded shared library and gives, for every
//! argument, the type the callee expects (`double`, `integer` or `int64`)
//! and whether the callee reads, writes, or does both. The engine converts
//! arguments to the callee type, copies only where needed to keep the
//! caller's vectors intact, passes each buffer by address, and returns the
//! arguments after the call in host types.
//!
//! ```no_run
//! use dotcall64::{CallArgument, CallSpec, Engine, TypedVector};
//!
//! let mut engine = Engine::new();
//! unsafe { engine.load_library("libfixtures.so", None) }?;
//! let spec = CallSpec::parse("get_c", &["double", "integer", "double"])?
//!     .parse_intents(&["r", "r", "w"])?;
//! let out = unsafe {
//!     engine.call64(&spec, vec![
//!         CallArgument::named("input", TypedVector::from_f64(vec![1.0, 2.0, 3.0])),
//!         CallArgument::named("index", TypedVector::from_i32(vec![2])),
//!         CallArgument::named("output", TypedVector::from_f64(vec![0.0])),
//!     ])
//! }?;
//! assert_eq!(out["output"].as_f64(), Some(&[2.0][..]));
//! # Ok::<(), dotcall64::Error>(())
//! ```

pub mod callspec;
pub mod diagnostics;
pub mod dispatch;
pub mod error;
pub mod marshal;
pub mod parcast;
pub mod vector;

pub use callspec::{
    ArgValue, CallArgument, CallSpec, IntentTag, SignatureTag, VectorDescriptor, MAX_ARGUMENTS,
};
pub use diagnostics::{Diagnostic, Level};
pub use dispatch::{
    args, library_exports, platform_path, Engine, EntryPoint, HostVector, LibraryHandle,
    ResolvedSymbol,
};
pub use error::{Error, ErrorKind, Result};
pub use marshal::{CallResult, InstrumentationCounters};
pub use parcast::{clear_thread_count, effective_thread_count, set_thread_count, WorkerConfig};
pub use vector::{ElemType, LongThreshold, TypedVector, INT32_NA, MAX_LENGTH};
