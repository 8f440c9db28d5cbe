//! Benchmark suites: time calls to the fixture no-op and friends, one CSV
//! row per replicate. Statistics are left to whoever reads the CSV.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use dotcall64::{
    CallArgument, CallSpec, ElemType, Engine, IntentTag, SignatureTag, TypedVector,
    VectorDescriptor, WorkerConfig,
};

use crate::CliError;

pub const CSV_HEADER: [&str; 8] = [
    "suite",
    "signature",
    "intent",
    "naok",
    "length",
    "threads",
    "replicate",
    "elapsed_ns",
];

/// Intent column value for rows timed through the plain `.C`-style call.
pub const PLAIN_INTENT: &str = ".C";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Length-one vectors, all signatures, intents and NAOK settings.
    Overhead,
    /// The overhead grid on long vectors.
    Large,
    /// Read-write vectors against write-only descriptors.
    Write,
    /// int64 read-write casts over thread counts and lengths.
    Scaling,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Overhead => "overhead",
            Suite::Large => "large",
            Suite::Write => "write",
            Suite::Scaling => "scaling",
        }
    }

    pub fn default_lengths(self) -> Vec<u64> {
        match self {
            Suite::Overhead => vec![1],
            _ => vec![1 << 24],
        }
    }

    pub fn default_replicates(self) -> usize {
        match self {
            Suite::Overhead => 10_000,
            Suite::Large => 100,
            Suite::Write => 20,
            Suite::Scaling => 5,
        }
    }

    pub fn default_threads(self) -> Vec<usize> {
        match self {
            Suite::Scaling => vec![1, 2, 4, 8],
            _ => vec![dotcall64::effective_thread_count()],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BenchRecord {
    pub suite: String,
    pub signature: String,
    pub intent: String,
    pub naok: bool,
    pub length: u64,
    pub threads: usize,
    pub replicate: usize,
    pub elapsed_ns: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Plain call: arguments in their own type, copied when bound.
    Plain,
    Engine(IntentTag),
    /// Write intent with a descriptor instead of a vector.
    Descriptor,
}

impl Method {
    fn intent_label(self) -> &'static str {
        match self {
            Method::Plain => PLAIN_INTENT,
            Method::Engine(i) => i.as_str(),
            Method::Descriptor => IntentTag::Write.as_str(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub signature: SignatureTag,
    pub method: Method,
    pub naok: bool,
    pub length: u64,
    pub threads: usize,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub suite: Suite,
    pub lengths: Vec<u64>,
    pub replicates: usize,
    pub threads: Vec<usize>,
}

impl BenchOptions {
    pub fn new(suite: Suite) -> Self {
        BenchOptions {
            suite,
            lengths: suite.default_lengths(),
            replicates: suite.default_replicates(),
            threads: suite.default_threads(),
        }
    }

    /// Configurations in row order.
    pub fn grid(&self) -> Vec<BenchConfig> {
        const SIGNATURES: [SignatureTag; 3] =
            [SignatureTag::Double, SignatureTag::Integer, SignatureTag::Int64];
        let mut out = Vec::new();
        match self.suite {
            Suite::Overhead | Suite::Large => {
                let threads = self.threads[0];
                for &length in &self.lengths {
                    for naok in [false, true] {
                        for signature in SIGNATURES {
                            let mut methods = vec![
                                Method::Engine(IntentTag::ReadWrite),
                                Method::Engine(IntentTag::Read),
                            ];
                            if signature != SignatureTag::Int64 {
                                methods.insert(0, Method::Plain);
                            }
                            for method in methods {
                                out.push(BenchConfig { signature, method, naok, length, threads });
                            }
                        }
                    }
                }
            }
            Suite::Write => {
                let threads = self.threads[0];
                for &length in &self.lengths {
                    for signature in SIGNATURES {
                        for method in [Method::Engine(IntentTag::ReadWrite), Method::Descriptor] {
                            out.push(BenchConfig { signature, method, naok: true, length, threads });
                        }
                    }
                }
            }
            Suite::Scaling => {
                for &length in &self.lengths {
                    for &threads in &self.threads {
                        out.push(BenchConfig {
                            signature: SignatureTag::Int64,
                            method: Method::Engine(IntentTag::ReadWrite),
                            naok: true,
                            length,
                            threads,
                        });
                    }
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.lengths.is_empty() || self.threads.is_empty() {
            return Err(CliError::Usage("at least one length and one thread count are required".into()));
        }
        if self.replicates == 0 {
            return Err(CliError::Usage("replicates must be at least 1".into()));
        }
        if self.threads.contains(&0) {
            return Err(CliError::Usage("thread counts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Host-side input for one configuration: zeros of the type a caller would
/// hold, bound to a name as an interpreter variable would be.
fn input_for(config: &BenchConfig) -> Result<CallArgument, CliError> {
    let host = config.signature.host_type();
    if config.method == Method::Descriptor {
        let d = match host {
            ElemType::Int32 => VectorDescriptor::integer(config.length)?,
            _ => VectorDescriptor::numeric(config.length)?,
        };
        return Ok(CallArgument::named("a", d));
    }
    let v = TypedVector::zeros(host, config.length)?.bound();
    Ok(CallArgument::named("a", Arc::new(v)))
}

fn time_one(engine: &Engine, config: &BenchConfig, arg: &CallArgument) -> Result<u64, CliError> {
    let args = vec![arg.clone()];
    let start = Instant::now();
    // SAFETY: BENCHMARK takes one pointer and touches nothing.
    let result = unsafe {
        match config.method {
            Method::Plain => engine.call_c("BENCHMARK", args, config.naok, None),
            Method::Engine(intent) => {
                let spec = CallSpec::new("BENCHMARK", vec![config.signature])
                    .with_intents(vec![intent])
                    .with_naok(config.naok);
                engine.call64(&spec, args)
            }
            Method::Descriptor => {
                let spec = CallSpec::new("BENCHMARK", vec![config.signature])
                    .with_intents(vec![IntentTag::Write])
                    .with_naok(config.naok);
                engine.call64(&spec, args)
            }
        }
    }?;
    let elapsed = start.elapsed();
    drop(result);
    Ok(u64::try_from(elapsed.as_nanos()).unwrap_or(u64::MAX))
}

/// Runs every configuration of the suite against `engine`, which must have
/// a library exporting `BENCHMARK` loaded, handing each row to `sink`.
pub fn run_suite<F>(engine: &mut Engine, options: &BenchOptions, mut sink: F) -> Result<(), CliError>
where
    F: FnMut(BenchRecord) -> Result<(), CliError>,
{
    options.validate()?;
    let base = *engine.workers();
    for config in options.grid() {
        engine.set_workers(base.with_threads(config.threads)?);
        let arg = input_for(&config)?;
        for replicate in 0..options.replicates {
            let elapsed_ns = time_one(engine, &config, &arg)?;
            sink(BenchRecord {
                suite: options.suite.name().to_owned(),
                signature: config.signature.as_str().to_owned(),
                intent: config.method.intent_label().to_owned(),
                naok: config.naok,
                length: config.length,
                threads: config.threads,
                replicate,
                elapsed_ns,
            })?;
        }
    }
    engine.set_workers(base);
    Ok(())
}

/// Runs a suite and writes the CSV, header included, to `out`.
pub fn write_csv<W: Write>(engine: &mut Engine, options: &BenchOptions, out: W) -> Result<usize, CliError> {
    let mut writer = csv::Writer::from_writer(out);
    let mut rows = 0;
    run_suite(engine, options, |record| {
        writer.serialize(record)?;
        rows += 1;
        Ok(())
    })?;
    if rows == 0 {
        writer.write_record(CSV_HEADER)?;
    }
    writer.flush()?;
    Ok(rows)
}

/// Engine with the given library loaded and a serial default worker
/// configuration, as used by the `bench` command.
pub fn engine_for(library: &std::path::Path) -> Result<Engine, CliError> {
    let path = dotcall64::platform_path(library);
    if !path.is_file() {
        return Err(CliError::Usage(format!("no such library: {}", path.display())));
    }
    let mut engine = Engine::new().with_workers(WorkerConfig::default());
    // SAFETY: the benchmark library is trusted input of the harness.
    unsafe { engine.load_library(&path, None) }?;
    Ok(engine)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overhead_grid_size() {
        let grid = BenchOptions::new(Suite::Overhead).grid();
        // 3 signatures x 2 intents x 2 NAOK settings, plus the plain call for
        // the two non-int64 signatures under both NAOK settings.
        assert_eq!(grid.len(), 3 * 2 * 2 + 2 * 2);
        assert!(!grid
            .iter()
            .any(|c| c.method == Method::Plain && c.signature == SignatureTag::Int64));
    }

    #[test]
    fn scaling_grid_size() {
        let mut o = BenchOptions::new(Suite::Scaling);
        o.threads = vec![1, 2, 4];
        o.lengths = vec![1 << 10];
        assert_eq!(o.grid().len(), 3);
    }

    #[test]
    fn write_grid() {
        let grid = BenchOptions::new(Suite::Write).grid();
        assert_eq!(grid.len(), 6);
        assert_eq!(grid.iter().filter(|c| c.method == Method::Descriptor).count(), 3);
    }

    #[test]
    fn invalid_options() {
        let mut o = BenchOptions::new(Suite::Overhead);
        o.replicates = 0;
        assert!(o.validate().is_err());
        let mut o = BenchOptions::new(Suite::Overhead);
        o.threads = vec![0];
        assert!(o.validate().is_err());
    }
}
