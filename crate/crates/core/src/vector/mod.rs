//! Typed numeric vectors as seen by the host side of a call.
//!
//! A [`TypedVector`] carries a two-level length header. Vectors up to the
//! long threshold (2^31 - 1 by default) store their length in the signed
//! 32-bit field. Longer vectors store -1 there and keep the real length in
//! an additional 64-bit field, so code that only understands 32-bit
//! lengths sees an obviously invalid value instead of a truncated one.

mod file;

use std::alloc::{self, Layout};
use std::ffi::c_void;
use std::sync::Arc;

use crate::diagnostics::{Diagnostics, Level};
use crate::error::{Error, Result};
use crate::parcast::{self, WorkerConfig};

pub use file::{read_dc64, read_dc64_file, write_dc64, write_dc64_file, DC64_MAGIC, DC64_VERSION};

/// Maximum number of elements in a vector.
pub const MAX_LENGTH: u64 = 1 << 52;
/// Missing-value sentinel for 32-bit integers.
pub const INT32_NA: i32 = i32::MIN;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElemType {
    Double,
    Int32,
    Int64,
}

impl ElemType {
    pub fn name(self) -> &'static str {
        match self {
            ElemType::Double => "double",
            ElemType::Int32 => "integer",
            ElemType::Int64 => "int64",
        }
    }

    pub fn size_of(self) -> usize {
        match self {
            ElemType::Double | ElemType::Int64 => 8,
            ElemType::Int32 => 4,
        }
    }
}

/// Largest length stored directly in the 32-bit header field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LongThreshold(u64);

impl LongThreshold {
    pub const DEFAULT: LongThreshold = LongThreshold(i32::MAX as u64);

    pub fn new(threshold: u64) -> Result<Self> {
        if threshold > i32::MAX as u64 {
            return Err(Error::spec(format!(
                "long threshold {threshold} does not fit the 32-bit length field"
            )));
        }
        Ok(LongThreshold(threshold))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl Default for LongThreshold {
    fn default() -> Self {
        LongThreshold::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorHeader {
    length32: i32,
    long_length: Option<u64>,
}

impl VectorHeader {
    pub fn new(length: u64, threshold: LongThreshold) -> Self {
        if length > threshold.get() {
            VectorHeader {
                length32: -1,
                long_length: Some(length),
            }
        } else {
            VectorHeader {
                length32: length as i32,
                long_length: None,
            }
        }
    }

    pub fn length32(&self) -> i32 {
        self.length32
    }

    pub fn long_length(&self) -> Option<u64> {
        self.long_length
    }

    pub fn is_long(&self) -> bool {
        self.length32 == -1
    }

    /// True length, read from whichever field holds it.
    pub fn length(&self) -> u64 {
        match self.long_length {
            Some(n) if self.length32 == -1 => n,
            _ => self.length32 as u64,
        }
    }
}

/// Element storage of a vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Buffer {
    Double(Vec<f64>),
    Int32(Vec<i32>),
    Int64(Vec<i64>),
}

impl Buffer {
    /// Zero-filled buffer. Allocation failure is reported instead of aborting.
    pub fn zeros(elem_type: ElemType, length: u64) -> Result<Self> {
        check_length(length)?;
        let n = usize::try_from(length).map_err(|_| capacity(length))?;
        Ok(match elem_type {
            ElemType::Double => Buffer::Double(zeroed_vec(n)?),
            ElemType::Int32 => Buffer::Int32(zeroed_vec(n)?),
            ElemType::Int64 => Buffer::Int64(zeroed_vec(n)?),
        })
    }

    pub fn elem_type(&self) -> ElemType {
        match self {
            Buffer::Double(_) => ElemType::Double,
            Buffer::Int32(_) => ElemType::Int32,
            Buffer::Int64(_) => ElemType::Int64,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Buffer::Double(v) => v.len(),
            Buffer::Int32(v) => v.len(),
            Buffer::Int64(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_ptr(&self) -> *const c_void {
        match self {
            Buffer::Double(v) => v.as_ptr().cast(),
            Buffer::Int32(v) => v.as_ptr().cast(),
            Buffer::Int64(v) => v.as_ptr().cast(),
        }
    }

    pub fn as_mut_ptr(&mut self) -> *mut c_void {
        match self {
            Buffer::Double(v) => v.as_mut_ptr().cast(),
            Buffer::Int32(v) => v.as_mut_ptr().cast(),
            Buffer::Int64(v) => v.as_mut_ptr().cast(),
        }
    }

    /// Equality of the raw element bits (distinguishes NaN payloads and -0.0).
    pub fn bitwise_eq(&self, other: &Buffer) -> bool {
        match (self, other) {
            (Buffer::Double(a), Buffer::Double(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
            }
            (Buffer::Int32(a), Buffer::Int32(b)) => a == b,
            (Buffer::Int64(a), Buffer::Int64(b)) => a == b,
            _ => false,
        }
    }

    fn try_clone(&self) -> Result<Buffer> {
        Ok(match self {
            Buffer::Double(v) => Buffer::Double(try_copy(v)?),
            Buffer::Int32(v) => Buffer::Int32(try_copy(v)?),
            Buffer::Int64(v) => Buffer::Int64(try_copy(v)?),
        })
    }
}

fn capacity(requested: u64) -> Error {
    Error::Capacity {
        requested,
        limit: MAX_LENGTH,
    }
}

fn check_length(length: u64) -> Result<()> {
    if length > MAX_LENGTH {
        Err(capacity(length))
    } else {
        Ok(())
    }
}

/// Element types whose all-zero bit pattern is the value zero.
trait Zeroable: Copy {}
impl Zeroable for f64 {}
impl Zeroable for i32 {}
impl Zeroable for i64 {}

fn zeroed_vec<T: Zeroable>(n: usize) -> Result<Vec<T>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let layout = Layout::array::<T>(n).map_err(|_| capacity(n as u64))?;
    // SAFETY: layout has non-zero size; T is valid when all-zero, and the
    // pointer comes from the global allocator with T's layout, as Vec expects.
    unsafe {
        let ptr = alloc::alloc_zeroed(layout) as *mut T;
        if ptr.is_null() {
            return Err(capacity(n as u64));
        }
        Ok(Vec::from_raw_parts(ptr, n, n))
    }
}

fn try_copy<T: Copy>(src: &[T]) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(src.len())
        .map_err(|_| capacity(src.len() as u64))?;
    v.extend_from_slice(src);
    Ok(v)
}

/// An atomic numeric vector with a dual-level length header and a
/// saturating reference status.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedVector {
    header: VectorHeader,
    threshold: LongThreshold,
    data: Buffer,
    ref_status: u8,
}

impl TypedVector {
    /// Zero-initialised vector of `length` elements with reference status 0.
    pub fn zeros(elem_type: ElemType, length: u64) -> Result<Self> {
        TypedVector::zeros_with(elem_type, length, LongThreshold::DEFAULT)
    }

    pub fn zeros_with(elem_type: ElemType, length: u64, threshold: LongThreshold) -> Result<Self> {
        Ok(TypedVector::from_buffer(Buffer::zeros(elem_type, length)?, threshold))
    }

    pub fn from_f64(values: Vec<f64>) -> Self {
        TypedVector::from_buffer(Buffer::Double(values), LongThreshold::DEFAULT)
    }

    pub fn from_i32(values: Vec<i32>) -> Self {
        TypedVector::from_buffer(Buffer::Int32(values), LongThreshold::DEFAULT)
    }

    #[cfg(test)]
    pub(crate) fn from_i64(values: Vec<i64>) -> Self {
        TypedVector::from_buffer(Buffer::Int64(values), LongThreshold::DEFAULT)
    }

    pub(crate) fn from_buffer(data: Buffer, threshold: LongThreshold) -> Self {
        let length = data.len() as u64;
        debug_assert!(length <= MAX_LENGTH);
        TypedVector {
            header: VectorHeader::new(length, threshold),
            threshold,
            data,
            ref_status: 0,
        }
    }

    /// Recomputes the header against a different long threshold.
    pub fn with_long_threshold(mut self, threshold: LongThreshold) -> Self {
        self.threshold = threshold;
        self.header = VectorHeader::new(self.data.len() as u64, threshold);
        self
    }

    /// Marks the vector as bound to a name (see [`bind`](Self::bind)).
    pub fn bound(mut self) -> Self {
        self.bind();
        self
    }

    /// Increments the reference status, saturating at 2.
    pub fn bind(&mut self) {
        self.ref_status = (self.ref_status + 1).min(2);
    }

    pub fn ref_status(&self) -> u8 {
        self.ref_status
    }

    pub fn header(&self) -> &VectorHeader {
        &self.header
    }

    pub fn long_threshold(&self) -> LongThreshold {
        self.threshold
    }

    /// Logical length, independent of which header field stores it.
    pub fn len(&self) -> u64 {
        self.header.length()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elem_type(&self) -> ElemType {
        self.data.elem_type()
    }

    pub fn data(&self) -> &Buffer {
        &self.data
    }

    /// Mutable access to the elements. The length cannot change through this.
    pub fn values_mut(&mut self) -> ValuesMut<'_> {
        match &mut self.data {
            Buffer::Double(v) => ValuesMut::Double(v),
            Buffer::Int32(v) => ValuesMut::Int32(v),
            Buffer::Int64(v) => ValuesMut::Int64(v),
        }
    }

    pub fn as_f64(&self) -> Option<&[f64]> {
        match &self.data {
            Buffer::Double(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_i32(&self) -> Option<&[i32]> {
        match &self.data {
            Buffer::Int32(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<&[i64]> {
        match &self.data {
            Buffer::Int64(v) => Some(v),
            _ => None,
        }
    }

    pub(crate) fn as_mut_ptr(&mut self) -> *mut c_void {
        self.data.as_mut_ptr()
    }

    pub(crate) fn into_buffer(self) -> Buffer {
        self.data
    }

    pub fn bitwise_eq(&self, other: &TypedVector) -> bool {
        self.data.bitwise_eq(&other.data)
    }

    /// Deep copy with a distinct buffer and reference status 0.
    pub fn duplicate(&self) -> Result<TypedVector> {
        Ok(TypedVector {
            header: self.header,
            threshold: self.threshold,
            data: self.data.try_clone()?,
            ref_status: 0,
        })
    }

    /// Smallest index holding a missing or infinite value.
    pub fn scan_missing_infinite(&self) -> Option<u64> {
        self.scan_missing_infinite_with(&WorkerConfig::serial())
    }

    pub fn scan_missing_infinite_with(&self, cfg: &WorkerConfig) -> Option<u64> {
        let hit = match &self.data {
            Buffer::Double(v) => parcast::parallel_find_first(v, |x| !x.is_finite(), cfg),
            Buffer::Int32(v) => parcast::parallel_find_first(v, |&x| x == INT32_NA, cfg),
            Buffer::Int64(_) => None,
        };
        hit.map(|i| i as u64)
    }
}

pub enum ValuesMut<'a> {
    Double(&'a mut [f64]),
    Int32(&'a mut [i32]),
    Int64(&'a mut [i64]),
}

/// True for the 32-bit NA sentinel.
pub fn is_missing_i32(x: i32) -> bool {
    x == INT32_NA
}

/// True for any NaN payload. Infinities are not missing.
pub fn is_missing_f64(x: f64) -> bool {
    x.is_nan()
}

const I32_MIN_VALID: f64 = -(i32::MAX as f64);
const I32_MAX_VALID: f64 = i32::MAX as f64;

/// Converts a host vector to `target`, returning the same `Arc` when no
/// conversion is needed.
///
/// Integer to double is exact, with NA becoming NaN. Double to integer
/// truncates toward zero and maps NaN and infinities to NA; a tuning
/// diagnostic reports any element that changed value. Finite values
/// outside the 32-bit range are an error.
pub fn coerce(
    v: &Arc<TypedVector>,
    target: ElemType,
    diag: &mut Diagnostics,
) -> Result<Arc<TypedVector>> {
    if v.elem_type() == target {
        return Ok(Arc::clone(v));
    }
    let data = match (&v.data, target) {
        (Buffer::Int32(src), ElemType::Double) => Buffer::Double(
            src.iter()
                .map(|&x| if x == INT32_NA { f64::NAN } else { f64::from(x) })
                .collect(),
        ),
        (Buffer::Double(src), ElemType::Int32) => {
            let mut inexact = 0u64;
            let mut first_inexact = None;
            let mut out = Vec::with_capacity(src.len());
            for (i, &x) in src.iter().enumerate() {
                let y = if !x.is_finite() {
                    if !x.is_nan() {
                        inexact += 1;
                        first_inexact.get_or_insert(i);
                    }
                    INT32_NA
                } else {
                    let t = x.trunc();
                    if !(I32_MIN_VALID..=I32_MAX_VALID).contains(&t) {
                        return Err(Error::Range {
                            index: i as u64,
                            value: x,
                        });
                    }
                    if t != x {
                        inexact += 1;
                        first_inexact.get_or_insert(i);
                    }
                    t as i32
                };
                out.push(y);
            }
            if inexact > 0 {
                diag.emit_with(Level::Tuning, || {
                    format!(
                        "{inexact} element(s) changed value when coerced to integer (first at element {})",
                        first_inexact.unwrap()
                    )
                });
            }
            Buffer::Int32(out)
        }
        (Buffer::Int64(src), ElemType::Double) => {
            Buffer::Double(src.iter().map(|&x| x as f64).collect())
        }
        (_, target) => {
            return Err(Error::spec(format!(
                "cannot coerce a {} vector to {}",
                v.elem_type().name(),
                target.name()
            )))
        }
    };
    Ok(Arc::new(TypedVector::from_buffer(data, v.threshold)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(n: u64) -> LongThreshold {
        LongThreshold::new(n).unwrap()
    }

    #[test]
    fn zeros_of_length_eight() {
        let v = TypedVector::zeros(ElemType::Double, 8).unwrap();
        assert_eq!(v.as_f64().unwrap(), &[0.0; 8]);
        assert_eq!(v.ref_status(), 0);
        assert_eq!(v.header().length32(), 8);
        assert_eq!(v.header().long_length(), None);
    }

    #[test]
    fn empty_vector_header() {
        let v = TypedVector::zeros(ElemType::Int32, 0).unwrap();
        assert_eq!(v.header().length32(), 0);
        assert!(v.is_empty());
    }

    #[test]
    fn long_header_above_threshold() {
        let v = TypedVector::zeros_with(ElemType::Double, 1001, t(1000)).unwrap();
        assert_eq!(v.header().length32(), -1);
        assert_eq!(v.header().long_length(), Some(1001));
        assert_eq!(v.len(), 1001);

        let v = TypedVector::zeros_with(ElemType::Double, 1000, t(1000)).unwrap();
        assert_eq!(v.header().length32(), 1000);
    }

    #[test]
    fn header_length_reads_long_field() {
        assert_eq!(TypedVector::from_f64(vec![1.0]).len(), 1);
        let v = TypedVector::zeros_with(ElemType::Int32, 11, t(10)).unwrap();
        assert!(v.header().is_long());
        assert_eq!(v.len(), 11);
    }

    #[test]
    fn header_at_default_threshold_boundary() {
        // Only the header arithmetic; no 2^31-element allocation.
        let h = VectorHeader::new(1 << 31, LongThreshold::DEFAULT);
        assert_eq!(h.length32(), -1);
        assert_eq!(h.length(), 1 << 31);
        let h = VectorHeader::new((1 << 31) - 1, LongThreshold::DEFAULT);
        assert_eq!(h.length32(), i32::MAX);
        assert_eq!(h.length(), (1 << 31) - 1);
    }

    #[test]
    fn capacity_limit() {
        let err = TypedVector::zeros(ElemType::Double, MAX_LENGTH + 1).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Capacity);
        assert!(LongThreshold::new(1 << 31).is_err());
    }

    #[test]
    fn coerce_integer_to_double() {
        let v = Arc::new(TypedVector::from_i32((1..=10).collect()));
        let mut d = Diagnostics::new(2);
        let c = coerce(&v, ElemType::Double, &mut d).unwrap();
        let expect: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(c.as_f64().unwrap(), expect.as_slice());
        assert!(d.messages().is_empty());
    }

    #[test]
    fn coerce_same_type_is_identity() {
        let v = Arc::new(TypedVector::from_f64(vec![1.0, 2.0]));
        let c = coerce(&v, ElemType::Double, &mut Diagnostics::new(0)).unwrap();
        assert!(Arc::ptr_eq(&v, &c));
    }

    #[test]
    fn coerce_double_to_integer() {
        let mut d = Diagnostics::new(1);
        let v = Arc::new(TypedVector::from_f64(vec![9.0]));
        assert_eq!(coerce(&v, ElemType::Int32, &mut d).unwrap().as_i32().unwrap(), &[9]);
        assert!(d.messages().is_empty());

        let v = Arc::new(TypedVector::from_f64(vec![2.7]));
        assert_eq!(coerce(&v, ElemType::Int32, &mut d).unwrap().as_i32().unwrap(), &[2]);
        assert_eq!(d.messages().len(), 1);
    }

    #[test]
    fn coerce_truncation_matches_scalar_reference() {
        // Reference: C's (int) conversion, i.e. truncation toward zero.
        let inputs = [2.7, -2.7, 0.5, -0.5, -0.0, 1e9, -2147483647.9, 2147483647.0];
        let expect = [2, -2, 0, 0, 0, 1_000_000_000, -2147483647, 2147483647];
        let v = Arc::new(TypedVector::from_f64(inputs.to_vec()));
        let c = coerce(&v, ElemType::Int32, &mut Diagnostics::new(0)).unwrap();
        assert_eq!(c.as_i32().unwrap(), &expect);
    }

    #[test]
    fn coerce_missing_and_range() {
        let v = Arc::new(TypedVector::from_f64(vec![f64::NAN, 1.0]));
        let c = coerce(&v, ElemType::Int32, &mut Diagnostics::new(0)).unwrap();
        assert_eq!(c.as_i32().unwrap(), &[INT32_NA, 1]);

        let v = Arc::new(TypedVector::from_f64(vec![0.0, 3e9]));
        let err = coerce(&v, ElemType::Int32, &mut Diagnostics::new(0)).unwrap_err();
        assert!(matches!(err, Error::Range { index: 1, .. }));

        // -2^31 is the NA sentinel, not a valid value.
        let v = Arc::new(TypedVector::from_f64(vec![-2147483648.0]));
        assert!(coerce(&v, ElemType::Int32, &mut Diagnostics::new(0)).is_err());

        let v = Arc::new(TypedVector::from_i32(vec![INT32_NA]));
        let c = coerce(&v, ElemType::Double, &mut Diagnostics::new(0)).unwrap();
        assert!(c.as_f64().unwrap()[0].is_nan());
    }

    #[test]
    fn coerce_to_int64_is_rejected() {
        let v = Arc::new(TypedVector::from_f64(vec![1.0]));
        let err = coerce(&v, ElemType::Int64, &mut Diagnostics::new(0)).unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Spec);
    }

    #[test]
    fn scan_examples() {
        assert_eq!(TypedVector::from_f64(vec![1.0, 2.0, 3.0]).scan_missing_infinite(), None);
        assert_eq!(TypedVector::from_f64(vec![1.0, f64::NAN, 3.0]).scan_missing_infinite(), Some(1));
        assert_eq!(TypedVector::from_f64(vec![1.0, 2.0, f64::NEG_INFINITY]).scan_missing_infinite(), Some(2));
        assert_eq!(TypedVector::from_i32(vec![5, INT32_NA]).scan_missing_infinite(), Some(1));
    }

    #[test]
    fn na_conventions() {
        assert!(is_missing_i32(INT32_NA));
        assert!(is_missing_f64(f64::NAN));
        assert!(is_missing_f64(f64::from_bits(0x7ff8_0000_0000_07a2)));
        assert!(!is_missing_f64(f64::INFINITY));
        assert!(!is_missing_f64(f64::NEG_INFINITY));
    }

    #[test]
    fn duplicate_is_distinct() {
        let v = TypedVector::from_f64(vec![1.0, 2.0, 3.0]).bound();
        let mut d = v.duplicate().unwrap();
        assert!(d.bitwise_eq(&v));
        assert_eq!(d.ref_status(), 0);
        assert_ne!(d.data().as_ptr(), v.data().as_ptr());
        if let ValuesMut::Double(x) = d.values_mut() {
            x[0] = 100.0;
        }
        assert_eq!(v.as_f64().unwrap(), &[1.0, 2.0, 3.0]);

        let e = TypedVector::zeros(ElemType::Double, 0).unwrap();
        assert!(e.duplicate().unwrap().is_empty());
    }

    #[test]
    fn duplicate_large_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let v = TypedVector::from_f64((0..1 << 20).map(|_| rng.gen::<f64>()).collect());
        let d = v.duplicate().unwrap();
        assert!(d.bitwise_eq(&v));
    }

    #[test]
    fn ref_status_saturates() {
        let mut v = TypedVector::from_i32(vec![1]);
        assert_eq!(v.ref_status(), 0);
        v.bind();
        v.bind();
        v.bind();
        assert_eq!(v.ref_status(), 2);
    }

    fn reference_scan_f64(v: &[f64]) -> Option<u64> {
        for (i, x) in v.iter().enumerate() {
            if x.is_nan() || x.is_infinite() {
                return Some(i as u64);
            }
        }
        None
    }

    fn special() -> impl Strategy<Value = f64> {
        prop_oneof![
            8 => -1e6f64..1e6,
            1 => Just(f64::NAN),
            1 => Just(f64::INFINITY),
            1 => Just(f64::NEG_INFINITY),
        ]
    }

    proptest! {
        #[test]
        fn dual_header_rule(len in 0u64..5000, threshold in 0u64..5000) {
            let h = VectorHeader::new(len, t(threshold));
            prop_assert_eq!(h.length32() == -1, len > threshold);
            prop_assert_eq!(h.length(), len);
        }

        #[test]
        fn widening_roundtrip(v in proptest::collection::vec(any::<i32>(), 0..200)) {
            let mut d = Diagnostics::new(0);
            let src = Arc::new(TypedVector::from_i32(v));
            let wide = coerce(&src, ElemType::Double, &mut d).unwrap();
            let back = coerce(&wide, ElemType::Int32, &mut d).unwrap();
            prop_assert_eq!(back.as_i32().unwrap(), src.as_i32().unwrap());
        }

        #[test]
        fn scan_agrees_with_reference(
            v in proptest::collection::vec(special(), 0..300),
            threads in 1usize..6,
        ) {
            let tv = TypedVector::from_f64(v.clone());
            let cfg = WorkerConfig::new(threads, 7).unwrap();
            prop_assert_eq!(tv.scan_missing_infinite_with(&cfg), reference_scan_f64(&v));
        }

        #[test]
        fn duplicate_never_aliases(v in proptest::collection::vec(any::<i32>(), 1..100)) {
            let orig = TypedVector::from_i32(v.clone());
            let mut dup = orig.duplicate().unwrap();
            prop_assert!(dup.bitwise_eq(&orig));
            if let ValuesMut::Int32(x) = dup.values_mut() {
                for e in x.iter_mut() { *e = e.wrapping_add(1); }
            }
            prop_assert_eq!(orig.as_i32().unwrap(), v.as_slice());
        }
    }

    #[test]
    fn scan_agrees_with_reference_on_many_random_vectors() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..100_000 {
            let n = rng.gen_range(0..16);
            let v: Vec<f64> = (0..n)
                .map(|_| match rng.gen_range(0..20) {
                    0 => f64::NAN,
                    1 => f64::INFINITY,
                    2 => f64::NEG_INFINITY,
                    _ => rng.gen_range(-10.0..10.0),
                })
                .collect();
            let expect = reference_scan_f64(&v);
            assert_eq!(TypedVector::from_f64(v).scan_missing_infinite(), expect);
        }
    }
}
