//! Library loading, symbol resolution and the call entry point.
//!
//! Callees follow the `.C` convention: every argument is passed as the
//! address of element 0 of its buffer and the function returns nothing.

mod trampoline;

use std::collections::HashMap;
use std::ffi::c_void;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::callspec::{self, ArgValue, CallArgument, CallSpec, IntentTag, SignatureTag, MAX_ARGUMENTS};
use crate::diagnostics::Level;
use crate::error::{Error, Result};
use crate::marshal::{self, CallResult, MarshalContext, PreparedArg};
use crate::parcast::WorkerConfig;
use crate::vector::{ElemType, LongThreshold};

/// Raw code address of a callee.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct EntryPoint(*const c_void);

// SAFETY: an entry point is a code address; sharing it between threads is
// no different from sharing a function pointer.
unsafe impl Send for EntryPoint {}
unsafe impl Sync for EntryPoint {}

impl EntryPoint {
    /// Wraps a function pointer, e.g. `EntryPoint::new(my_fn as *const c_void)`.
    pub fn new(address: *const c_void) -> Self {
        EntryPoint(address)
    }

    pub fn address(self) -> *const c_void {
        self.0
    }
}

impl fmt::Debug for EntryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EntryPoint({:p})", self.0)
    }
}

enum LibrarySource {
    Dynamic(libloading::Library),
    Native(HashMap<String, EntryPoint>),
}

struct LoadedLibrary {
    name: String,
    path: Option<PathBuf>,
    source: LibrarySource,
}

impl LoadedLibrary {
    fn lookup(&self, symbol: &str) -> Option<EntryPoint> {
        match &self.source {
            LibrarySource::Native(map) => map.get(symbol).copied(),
            LibrarySource::Dynamic(lib) => {
                // SAFETY: the address is only turned into a callable inside
                // `invoke`, whose caller vouches for the signature.
                let sym = unsafe { lib.get::<*const c_void>(symbol.as_bytes()) }.ok()?;
                Some(EntryPoint(*sym))
            }
        }
    }
}

/// Identifies a library registered with an [`Engine`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LibraryHandle {
    pub name: String,
    pub path: Option<PathBuf>,
}

/// A symbol found in a loaded library. Borrows the engine so the library
/// cannot be unloaded while the symbol is alive.
#[derive(Debug, Clone)]
pub struct ResolvedSymbol<'lib> {
    name: String,
    library: &'lib str,
    entry: EntryPoint,
    arity: Option<usize>,
}

impl<'lib> ResolvedSymbol<'lib> {
    /// The name actually found, which may carry a trailing underscore.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn library(&self) -> &'lib str {
        self.library
    }

    pub fn entry(&self) -> EntryPoint {
        self.entry
    }

    pub fn arity(&self) -> Option<usize> {
        self.arity
    }

    /// Fixes the number of arguments the symbol will be called with.
    pub fn with_arity(mut self, arity: usize) -> Result<Self> {
        check_arity(arity)?;
        self.arity = Some(arity);
        Ok(self)
    }
}

fn check_arity(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::spec("callee needs at least one argument"))
    } else if n > MAX_ARGUMENTS {
        Err(Error::spec(format!(
            "at most {MAX_ARGUMENTS} arguments are supported, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// Appends the platform shared-object suffix when `path` has no extension.
pub fn platform_path(path: impl AsRef<Path>) -> PathBuf {
    let path = path.as_ref();
    if path.extension().is_some() {
        path.to_path_buf()
    } else {
        let mut s = path.as_os_str().to_owned();
        s.push(std::env::consts::DLL_SUFFIX);
        PathBuf::from(s)
    }
}

/// Exported function names of a shared object file, sorted.
pub fn library_exports(path: impl AsRef<Path>) -> Result<Vec<String>> {
    use object::{Object, ObjectSymbol, SymbolKind};

    let path = platform_path(path);
    let load_err = |message: String| Error::Load {
        path: path.clone(),
        message,
    };
    let data = std::fs::read(&path).map_err(|e| load_err(e.to_string()))?;
    let file = object::File::parse(&*data).map_err(|e| load_err(e.to_string()))?;
    let mut names: Vec<String> = file
        .dynamic_symbols()
        .filter(|s| s.is_definition() && s.is_global() && s.kind() == SymbolKind::Text)
        .filter_map(|s| s.name().ok().map(str::to_owned))
        .filter(|n| !n.is_empty() && n != "_init" && n != "_fini")
        .collect();
    if names.is_empty() {
        // Formats without a dynamic symbol table (PE, Mach-O) list exports here.
        names = file
            .exports()
            .map_err(|e| load_err(e.to_string()))?
            .into_iter()
            .filter_map(|e| std::str::from_utf8(e.name()).ok().map(str::to_owned))
            .map(|n| n.strip_prefix('_').map(str::to_owned).unwrap_or(n))
            .collect();
    }
    names.sort();
    names.dedup();
    Ok(names)
}

/// Calls `sym` with the base addresses of `prepared`.
///
/// # Safety
///
/// The symbol must be a function taking `prepared.len()` pointer arguments
/// and returning nothing, and it must stay within the bounds of each
/// buffer. A callee writing to a buffer prepared under intent `r`
/// corrupts the caller's vector.
pub unsafe fn invoke(sym: &ResolvedSymbol<'_>, prepared: &mut [PreparedArg]) -> Result<()> {
    check_arity(prepared.len())?;
    if let Some(arity) = sym.arity {
        if arity != prepared.len() {
            return Err(Error::spec(format!(
                "`{}` was resolved for {arity} arguments but called with {}",
                sym.name,
                prepared.len()
            )));
        }
    }
    let addresses: Vec<*mut c_void> = prepared.iter_mut().map(PreparedArg::base_address).collect();
    // SAFETY: forwarded to the caller.
    unsafe { trampoline::call_with_addresses(sym.entry.0, &addresses) };
    Ok(())
}

/// Holds loaded libraries and call settings.
///
/// Loading and unloading take `&mut self`; calls take `&self` and run on
/// the calling thread.
pub struct Engine {
    libraries: Vec<LoadedLibrary>,
    workers: WorkerConfig,
    threshold: LongThreshold,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("libraries", &self.library_names().collect::<Vec<_>>())
            .field("workers", &self.workers)
            .field("threshold", &self.threshold)
            .finish()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            libraries: Vec::new(),
            workers: WorkerConfig::default(),
            threshold: LongThreshold::DEFAULT,
        }
    }

    pub fn with_workers(mut self, workers: WorkerConfig) -> Self {
        self.workers = workers;
        self
    }

    pub fn set_workers(&mut self, workers: WorkerConfig) {
        self.workers = workers;
    }

    pub fn workers(&self) -> &WorkerConfig {
        &self.workers
    }

    /// Threshold used for the headers of vectors the engine allocates.
    pub fn with_long_threshold(mut self, threshold: LongThreshold) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn long_threshold(&self) -> LongThreshold {
        self.threshold
    }

    fn check_name_free(&self, name: &str, path: &Path) -> Result<()> {
        if self.libraries.iter().any(|l| l.name == name) {
            return Err(Error::Load {
                path: path.to_path_buf(),
                message: format!("a library named `{name}` is already loaded"),
            });
        }
        Ok(())
    }

    /// Loads a shared library. Without `registry_name` the file stem is used.
    ///
    /// # Safety
    ///
    /// Loading runs the library's initialisers, which can do anything.
    pub unsafe fn load_library(
        &mut self,
        path: impl AsRef<Path>,
        registry_name: Option<&str>,
    ) -> Result<LibraryHandle> {
        let path = platform_path(path);
        let name = match registry_name {
            Some(n) => n.to_owned(),
            None => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        };
        self.check_name_free(&name, &path)?;
        if !path.exists() {
            return Err(Error::Load {
                path,
                message: "no such file".into(),
            });
        }
        // SAFETY: forwarded to the caller.
        let lib = unsafe { libloading::Library::new(&path) }.map_err(|e| Error::Load {
            path: path.clone(),
            message: e.to_string(),
        })?;
        self.libraries.push(LoadedLibrary {
            name: name.clone(),
            path: Some(path.clone()),
            source: LibrarySource::Dynamic(lib),
        });
        Ok(LibraryHandle {
            name,
            path: Some(path),
        })
    }

    /// Registers in-process functions under a library name, so they can be
    /// called exactly like symbols of a loaded library.
    pub fn register_native<S: AsRef<str>>(
        &mut self,
        registry_name: &str,
        symbols: &[(S, EntryPoint)],
    ) -> Result<LibraryHandle> {
        self.check_name_free(registry_name, Path::new(registry_name))?;
        let map = symbols
            .iter()
            .map(|(n, e)| (n.as_ref().to_owned(), *e))
            .collect();
        self.libraries.push(LoadedLibrary {
            name: registry_name.to_owned(),
            path: None,
            source: LibrarySource::Native(map),
        });
        Ok(LibraryHandle {
            name: registry_name.to_owned(),
            path: None,
        })
    }

    pub fn unload(&mut self, registry_name: &str) -> Result<()> {
        let i = self
            .libraries
            .iter()
            .position(|l| l.name == registry_name)
            .ok_or_else(|| Error::spec(format!("no library named `{registry_name}` is loaded")))?;
        self.libraries.remove(i);
        Ok(())
    }

    /// Registered library names in load order.
    pub fn library_names(&self) -> impl Iterator<Item = &str> {
        self.libraries.iter().map(|l| l.name.as_str())
    }

    /// Exported symbols of a registered library.
    pub fn exports(&self, registry_name: &str) -> Result<Vec<String>> {
        let lib = self
            .libraries
            .iter()
            .find(|l| l.name == registry_name)
            .ok_or_else(|| Error::spec(format!("no library named `{registry_name}` is loaded")))?;
        match (&lib.source, &lib.path) {
            (LibrarySource::Native(map), _) => {
                let mut names: Vec<String> = map.keys().cloned().collect();
                names.sort();
                Ok(names)
            }
            (LibrarySource::Dynamic(_), Some(path)) => library_exports(path),
            (LibrarySource::Dynamic(_), None) => Ok(Vec::new()),
        }
    }

    /// Finds `name`, searching only `filter` when given, otherwise every
    /// library in load order. With `fortran_convention` the lowercase name
    /// with a trailing underscore is tried after the plain name.
    pub fn resolve(
        &self,
        name: &str,
        filter: Option<&str>,
        fortran_convention: bool,
    ) -> Result<ResolvedSymbol<'_>> {
        let candidates: Vec<String> = if fortran_convention {
            vec![name.to_owned(), format!("{}_", name.to_lowercase())]
        } else {
            vec![name.to_owned()]
        };
        let searched: Vec<&LoadedLibrary> = self
            .libraries
            .iter()
            .filter(|l| filter.is_none_or(|f| l.name == f))
            .collect();
        for lib in &searched {
            for candidate in &candidates {
                if let Some(entry) = lib.lookup(candidate) {
                    return Ok(ResolvedSymbol {
                        name: candidate.clone(),
                        library: &lib.name,
                        entry,
                        arity: None,
                    });
                }
            }
        }
        let searched = if searched.is_empty() {
            match filter {
                Some(f) => vec![format!("{f} (not loaded)")],
                None => vec!["<no libraries loaded>".to_owned()],
            }
        } else {
            searched.iter().map(|l| l.name.clone()).collect()
        };
        Err(Error::Symbol {
            name: name.to_owned(),
            searched,
        })
    }

    /// Calls a symbol with per-argument signatures and intents.
    ///
    /// Runs validation, symbol resolution, argument preparation, the call
    /// itself and result assembly. Errors concerning a single argument are
    /// tagged with its position.
    ///
    /// # Safety
    ///
    /// See [`invoke`]: the callee's real parameter list must match the
    /// signature, and it must respect buffer lengths and read-only intents.
    pub unsafe fn call64(&self, spec: &CallSpec, args: Vec<CallArgument>) -> Result<CallResult> {
        let plan = callspec::validate(spec, &args)?;
        let sym = self
            .resolve(&spec.symbol, spec.library_filter.as_deref(), spec.fortran_convention)?
            .with_arity(plan.len())?;
        let mut ctx = MarshalContext::new(self.workers, self.threshold, plan.verbosity);

        let mut names = Vec::with_capacity(args.len());
        let mut prepared = Vec::with_capacity(args.len());
        for (i, arg) in args.into_iter().enumerate() {
            names.push(arg.name);
            let p = marshal::prepare_argument(
                arg.value,
                i,
                plan.signature[i],
                plan.intents[i],
                plan.naok,
                &mut ctx,
            )
            .map_err(|e| e.at_argument(i))?;
            prepared.push(p);
        }
        ctx.diagnostics.set_argument(None);
        ctx.diagnostics.emit_with(Level::Debug, || {
            format!("calling `{}` from `{}`", sym.name(), sym.library())
        });

        // SAFETY: forwarded to the caller.
        unsafe { invoke(&sym, &mut prepared)? };

        let values = prepared
            .into_iter()
            .enumerate()
            .map(|(i, p)| marshal::postprocess_argument(p, plan.signature[i], plan.intents[i], &mut ctx))
            .collect();
        Ok(marshal::assemble_result(values, names, ctx))
    }

    /// Plain `.C`-style call used as a reference point in benchmarks: each
    /// argument goes to the callee in its own type, copied unless its
    /// reference status is 0. No 64-bit integer arguments, no descriptors.
    ///
    /// # Safety
    ///
    /// As for [`call64`](Self::call64).
    pub unsafe fn call_c(
        &self,
        symbol: &str,
        args: Vec<CallArgument>,
        naok: bool,
        library_filter: Option<&str>,
    ) -> Result<CallResult> {
        let mut signature = Vec::with_capacity(args.len());
        for (i, a) in args.iter().enumerate() {
            let sig = match &a.value {
                ArgValue::Vector(v) => match v.elem_type() {
                    ElemType::Double => SignatureTag::Double,
                    ElemType::Int32 => SignatureTag::Integer,
                    ElemType::Int64 => {
                        return Err(Error::spec("64-bit integer vectors are not supported").at_argument(i))
                    }
                },
                ArgValue::Descriptor(_) => {
                    return Err(Error::spec("descriptors are not supported by plain calls").at_argument(i))
                }
            };
            signature.push(sig);
        }
        let mut spec = CallSpec::new(symbol, signature)
            .with_intents(vec![IntentTag::Write; args.len()])
            .with_naok(naok);
        spec.library_filter = library_filter.map(str::to_owned);
        // SAFETY: forwarded to the caller.
        unsafe { self.call64(&spec, args) }
    }
}

/// Convenience for building the argument list of [`Engine::call64`].
pub fn args<I, A>(items: I) -> Vec<CallArgument>
where
    I: IntoIterator<Item = A>,
    A: Into<CallArgument>,
{
    items.into_iter().map(Into::into).collect()
}

/// Shared handle to a host vector, as passed in [`CallArgument`]s.
pub type HostVector = Arc<crate::vector::TypedVector>;
