//! Argument preparation before a call and result assembly after it.
//!
//! For every argument the pre-process phase decides what buffer the callee
//! receives:
//!
//! | signature | intent | handoff                                          |
//! |-----------|--------|--------------------------------------------------|
//! | int64     | rw, r  | fresh int64 buffer cast from the host doubles     |
//! | int64     | w      | fresh zero int64 buffer                           |
//! | other     | rw     | private duplicate of the host vector              |
//! | other     | r      | the host vector itself, no copy                   |
//! | other     | w      | the host vector if unbound, else a duplicate      |
//!
//! Descriptors under intent `w` become a fresh zero buffer of the callee
//! type. After the call, int64 buffers under `rw`/`w` are cast back to
//! doubles; under `r` the caller's original vector is returned instead.

use std::ffi::c_void;
use std::ops::Index;
use std::sync::Arc;

use crate::callspec::{ArgValue, IntentTag, SignatureTag};
use crate::diagnostics::{Diagnostic, Diagnostics, Level};
use crate::error::{Error, Result};
use crate::parcast::{self, WorkerConfig};
use crate::vector::{coerce, Buffer, ElemType, LongThreshold, TypedVector};

const TWO_POW_52: u64 = 1 << 52;
const TWO_POW_63: f64 = 9_223_372_036_854_775_808.0;

/// Per-call tally of the work done while marshaling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InstrumentationCounters {
    /// Deep copies of host vectors.
    pub copies: u64,
    /// double to int64 casts.
    pub casts: u64,
    /// int64 to double back-casts.
    pub backcasts: u64,
    /// Missing/infinite value scans.
    pub scans: u64,
    /// Host-level type coercions (integer to double and back).
    pub coercions: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// The callee sees the caller's own buffer.
    Borrowed,
    Duplicated,
    Casted,
    FreshZero,
}

#[derive(Debug)]
enum Handoff {
    Shared(Arc<TypedVector>),
    Owned(TypedVector),
}

impl Handoff {
    fn vector(&self) -> &TypedVector {
        match self {
            Handoff::Shared(v) => v,
            Handoff::Owned(v) => v,
        }
    }
}

/// An argument ready to be passed to the callee.
#[derive(Debug)]
pub struct PreparedArg {
    handoff: Handoff,
    origin: Origin,
    needs_backcast: bool,
    source_index: usize,
    /// Host vector returned unchanged for int64 arguments under intent `r`.
    original: Option<Arc<TypedVector>>,
    /// Stand-in target for zero-length buffers so the address is never dangling.
    scratch: u64,
}

impl PreparedArg {
    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn needs_backcast(&self) -> bool {
        self.needs_backcast
    }

    pub fn source_index(&self) -> usize {
        self.source_index
    }

    /// The buffer the callee will receive.
    pub fn handoff(&self) -> &TypedVector {
        self.handoff.vector()
    }

    /// Address of element 0 of the handoff buffer, or of a one-element
    /// scratch slot when the buffer is empty.
    ///
    /// Borrowed read-only buffers are exposed as mutable addresses because
    /// the C convention has no const; a callee writing through them breaks
    /// its contract.
    pub fn base_address(&mut self) -> *mut c_void {
        if self.handoff.vector().is_empty() {
            self.scratch = 0;
            return (&mut self.scratch as *mut u64).cast();
        }
        match &mut self.handoff {
            Handoff::Shared(v) => v.data().as_ptr() as *mut c_void,
            Handoff::Owned(v) => v.as_mut_ptr(),
        }
    }
}

/// State shared by all arguments of one call.
#[derive(Debug)]
pub struct MarshalContext {
    pub workers: WorkerConfig,
    pub threshold: LongThreshold,
    pub counters: InstrumentationCounters,
    pub diagnostics: Diagnostics,
}

impl MarshalContext {
    pub fn new(workers: WorkerConfig, threshold: LongThreshold, verbosity: u8) -> Self {
        MarshalContext {
            workers,
            threshold,
            counters: InstrumentationCounters::default(),
            diagnostics: Diagnostics::new(verbosity),
        }
    }

    fn coerce(&mut self, v: &Arc<TypedVector>, target: ElemType) -> Result<Arc<TypedVector>> {
        let out = coerce(v, target, &mut self.diagnostics)?;
        if !Arc::ptr_eq(v, &out) {
            self.counters.coercions += 1;
            self.diagnostics.emit_with(Level::Debug, || {
                format!("coerced {} vector to {}", v.elem_type().name(), target.name())
            });
        }
        Ok(out)
    }

    fn duplicate(&mut self, v: &TypedVector) -> Result<TypedVector> {
        let d = v.duplicate()?;
        self.counters.copies += 1;
        self.diagnostics
            .emit_with(Level::Debug, || format!("duplicated {} elements", v.len()));
        Ok(d)
    }

    fn zeros(&self, elem_type: ElemType, length: u64) -> Result<TypedVector> {
        TypedVector::zeros_with(elem_type, length, self.threshold)
    }
}

/// Casts doubles to 64-bit integers, truncating toward zero.
///
/// Integral values with magnitude up to 2^52 convert exactly. Non-finite
/// values or values outside [-2^63, 2^63) fail with the smallest offending
/// index. The output does not depend on the worker count.
pub fn cast_double_to_int64(
    src: &[f64],
    workers: &WorkerConfig,
    diag: &mut Diagnostics,
) -> Result<Vec<i64>> {
    let out = parcast::parallel_map(
        src,
        |x: f64| {
            if (-TWO_POW_63..TWO_POW_63).contains(&x) {
                Ok(x as i64)
            } else {
                Err(x)
            }
        },
        workers,
    )
    .map_err(|(index, value)| Error::Cast {
        index: index as u64,
        value,
    })?;
    if diag.enabled(Level::Tuning) {
        let (n, first) = parcast::parallel_count(src, |x| x.fract() != 0.0, workers);
        if n > 0 {
            diag.emit(
                Level::Tuning,
                format!(
                    "{n} non-integral element(s) truncated in cast to int64 (first at element {})",
                    first.unwrap()
                ),
            );
        }
    }
    Ok(out)
}

/// Casts 64-bit integers to doubles. Magnitudes above 2^52 may round
/// (to nearest, ties to even) and are reported as a tuning diagnostic.
pub fn cast_int64_to_double(
    src: &[i64],
    workers: &WorkerConfig,
    diag: &mut Diagnostics,
) -> Vec<f64> {
    let out = match parcast::parallel_map(src, |x: i64| Ok::<_, ()>(x as f64), workers) {
        Ok(v) => v,
        Err(_) => unreachable!("infallible transform"),
    };
    if diag.enabled(Level::Tuning) {
        let (n, first) = parcast::parallel_count(src, |x| x.unsigned_abs() > TWO_POW_52, workers);
        if n > 0 {
            diag.emit(
                Level::Tuning,
                format!(
                    "{n} element(s) exceed 2^52 in magnitude and may lose precision as double (first at element {})",
                    first.unwrap()
                ),
            );
        }
    }
    out
}

/// Pre-process phase for one argument. Errors are not yet tagged with the
/// argument position; the caller does that.
pub fn prepare_argument(
    value: ArgValue,
    position: usize,
    sig: SignatureTag,
    intent: IntentTag,
    naok: bool,
    ctx: &mut MarshalContext,
) -> Result<PreparedArg> {
    ctx.diagnostics.set_argument(Some(position));
    let prepared = |handoff, origin| PreparedArg {
        handoff,
        origin,
        needs_backcast: sig == SignatureTag::Int64 && intent.writes(),
        source_index: position,
        original: None,
        scratch: 0,
    };

    let host = match value {
        ArgValue::Descriptor(d) if intent == IntentTag::Write => {
            if d.mode() != sig.host_type() {
                ctx.diagnostics.emit_with(Level::Tuning, || {
                    format!(
                        "descriptor mode {} does not match signature {sig}; allocating {}",
                        d.mode().name(),
                        sig.callee_type().name()
                    )
                });
            }
            let v = ctx.zeros(sig.callee_type(), d.length())?;
            ctx.diagnostics.emit_with(Level::Debug, || {
                format!("allocated {} zero elements for write", d.length())
            });
            return Ok(prepared(Handoff::Owned(v), Origin::FreshZero));
        }
        ArgValue::Descriptor(d) => {
            ctx.diagnostics.emit(
                Level::Tuning,
                format!("descriptor under intent {intent} materialized as a zero vector; descriptors only save work under intent w"),
            );
            Arc::new(ctx.zeros(d.mode(), d.length())?)
        }
        ArgValue::Vector(v) => v,
    };

    if !naok {
        ctx.counters.scans += 1;
        if let Some(index) = host.scan_missing_infinite_with(&ctx.workers) {
            return Err(Error::MissingValue { index });
        }
    }

    if sig == SignatureTag::Int64 {
        if intent == IntentTag::Write {
            ctx.diagnostics.emit(
                Level::Tuning,
                "int64 argument with intent w: pass a descriptor instead of a vector",
            );
            let v = ctx.zeros(ElemType::Int64, host.len())?;
            return Ok(prepared(Handoff::Owned(v), Origin::FreshZero));
        }
        let doubles = ctx.coerce(&host, ElemType::Double)?;
        let ints = cast_double_to_int64(
            doubles.as_f64().expect("coerced to double"),
            &ctx.workers,
            &mut ctx.diagnostics,
        )?;
        ctx.counters.casts += 1;
        ctx.diagnostics
            .emit_with(Level::Debug, || format!("cast {} elements to int64", ints.len()));
        let v = TypedVector::from_buffer(Buffer::Int64(ints), ctx.threshold);
        let mut p = prepared(Handoff::Owned(v), Origin::Casted);
        if intent == IntentTag::Read {
            p.original = Some(host);
        }
        return Ok(p);
    }

    let coerced = ctx.coerce(&host, sig.callee_type())?;
    let was_coerced = !Arc::ptr_eq(&host, &coerced);
    drop(host);
    match intent {
        IntentTag::Read => {
            ctx.diagnostics
                .emit(Level::Debug, "passed by reference without copying");
            Ok(prepared(Handoff::Shared(coerced), Origin::Borrowed))
        }
        IntentTag::ReadWrite => {
            let d = ctx.duplicate(&coerced)?;
            Ok(prepared(Handoff::Owned(d), Origin::Duplicated))
        }
        IntentTag::Write => {
            if coerced.ref_status() != 0 && !was_coerced {
                ctx.diagnostics.emit(
                    Level::Tuning,
                    "vector with intent w is bound and must be copied; pass a descriptor instead",
                );
                let d = ctx.duplicate(&coerced)?;
                return Ok(prepared(Handoff::Owned(d), Origin::Duplicated));
            }
            match Arc::try_unwrap(coerced) {
                Ok(v) => {
                    ctx.diagnostics
                        .emit(Level::Debug, "unbound vector written in place");
                    Ok(prepared(Handoff::Owned(v), Origin::Borrowed))
                }
                Err(shared) => {
                    ctx.diagnostics
                        .emit(Level::Debug, "vector is shared elsewhere; duplicated before write");
                    let d = ctx.duplicate(&shared)?;
                    Ok(prepared(Handoff::Owned(d), Origin::Duplicated))
                }
            }
        }
    }
}

/// Post-process phase for one argument: turns the handoff buffer back into
/// a host vector.
pub fn postprocess_argument(
    p: PreparedArg,
    sig: SignatureTag,
    intent: IntentTag,
    ctx: &mut MarshalContext,
) -> Arc<TypedVector> {
    ctx.diagnostics.set_argument(Some(p.source_index));
    if sig == SignatureTag::Int64 {
        if intent == IntentTag::Read {
            if let Some(original) = p.original {
                return original;
            }
        } else if let Handoff::Owned(v) = p.handoff {
            let Buffer::Int64(ints) = v.into_buffer() else {
                unreachable!("int64 handoff holds an int64 buffer")
            };
            let doubles = cast_int64_to_double(&ints, &ctx.workers, &mut ctx.diagnostics);
            ctx.counters.backcasts += 1;
            return Arc::new(TypedVector::from_buffer(
                Buffer::Double(doubles),
                ctx.threshold,
            ));
        }
        unreachable!("int64 arguments are always prepared as owned casts");
    }
    match p.handoff {
        Handoff::Shared(v) => v,
        Handoff::Owned(v) => Arc::new(v),
    }
}

/// Output of a call: one host vector per argument, addressable by
/// position or by the name it was passed under.
#[derive(Debug, Clone)]
pub struct CallResult {
    values: Vec<Arc<TypedVector>>,
    names: Vec<Option<String>>,
    pub counters: InstrumentationCounters,
    pub diagnostics: Vec<Diagnostic>,
}

impl CallResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Arc<TypedVector>> {
        self.names
            .iter()
            .position(|n| n.as_deref() == Some(name))
            .map(|i| &self.values[i])
    }

    pub fn at(&self, position: usize) -> Option<&Arc<TypedVector>> {
        self.values.get(position)
    }

    pub fn name(&self, position: usize) -> Option<&str> {
        self.names.get(position).and_then(|n| n.as_deref())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Option<&str>, &Arc<TypedVector>)> {
        self.names.iter().map(|n| n.as_deref()).zip(&self.values)
    }

    pub fn into_values(self) -> Vec<Arc<TypedVector>> {
        self.values
    }
}

impl Index<usize> for CallResult {
    type Output = TypedVector;

    fn index(&self, position: usize) -> &TypedVector {
        &self.values[position]
    }
}

impl Index<&str> for CallResult {
    type Output = TypedVector;

    fn index(&self, name: &str) -> &TypedVector {
        self.get(name)
            .unwrap_or_else(|| panic!("no result named `{name}`"))
    }
}

pub fn assemble_result(
    values: Vec<Arc<TypedVector>>,
    names: Vec<Option<String>>,
    ctx: MarshalContext,
) -> CallResult {
    debug_assert_eq!(values.len(), names.len());
    CallResult {
        values,
        names,
        counters: ctx.counters,
        diagnostics: ctx.diagnostics.into_messages(),
    }
}
