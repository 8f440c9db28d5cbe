//! The DC64 vector file format.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "DC64"
//! 4       1     version (1)
//! 5       1     element type (0 = double, 1 = 32-bit integer)
//! 6       8     element count, u64 little-endian
//! 14      ...   elements, little-endian, no padding
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{check_length, Buffer, ElemType, TypedVector};
use crate::error::{Error, Result};

pub const DC64_MAGIC: &[u8; 4] = b"DC64";
pub const DC64_VERSION: u8 = 1;

const TAG_DOUBLE: u8 = 0;
const TAG_INT32: u8 = 1;

pub fn write_dc64<W: Write>(mut w: W, v: &TypedVector) -> Result<()> {
    let tag = match v.elem_type() {
        ElemType::Double => TAG_DOUBLE,
        ElemType::Int32 => TAG_INT32,
        ElemType::Int64 => {
            return Err(Error::Format(
                "64-bit integer vectors have no file representation".into(),
            ))
        }
    };
    w.write_all(DC64_MAGIC)?;
    w.write_all(&[DC64_VERSION, tag])?;
    w.write_all(&v.len().to_le_bytes())?;
    match v.data() {
        Buffer::Double(xs) => {
            for x in xs {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        Buffer::Int32(xs) => {
            for x in xs {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        Buffer::Int64(_) => unreachable!(),
    }
    w.flush()?;
    Ok(())
}

pub fn read_dc64<R: Read>(mut r: R) -> Result<TypedVector> {
    let mut head = [0u8; 14];
    r.read_exact(&mut head)
        .map_err(|_| Error::Format("truncated header".into()))?;
    if &head[..4] != DC64_MAGIC {
        return Err(Error::Format("bad magic bytes".into()));
    }
    if head[4] != DC64_VERSION {
        return Err(Error::Format(format!("unsupported version {}", head[4])));
    }
    let len = u64::from_le_bytes(head[6..14].try_into().unwrap());
    check_length(len)?;
    let elem_type = match head[5] {
        TAG_DOUBLE => ElemType::Double,
        TAG_INT32 => ElemType::Int32,
        t => return Err(Error::Format(format!("unknown element type tag {t}"))),
    };
    let nbytes = len
        .checked_mul(elem_type.size_of() as u64)
        .ok_or_else(|| Error::Format("length overflow".into()))?;
    let mut raw = Vec::new();
    let got = r.by_ref().take(nbytes).read_to_end(&mut raw)?;
    if got as u64 != nbytes {
        return Err(Error::Format(format!(
            "expected {nbytes} data bytes, found {got}"
        )));
    }
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Format("trailing bytes after data".into()));
    }
    let data = match elem_type {
        ElemType::Double => Buffer::Double(
            raw.chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        ),
        _ => Buffer::Int32(
            raw.chunks_exact(4)
                .map(|c| i32::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        ),
    };
    Ok(TypedVector::from_buffer(data, Default::default()))
}

pub fn write_dc64_file(path: impl AsRef<Path>, v: &TypedVector) -> Result<()> {
    write_dc64(BufWriter::new(File::create(path)?), v)
}

pub fn read_dc64_file(path: impl AsRef<Path>) -> Result<TypedVector> {
    read_dc64(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_byte_layout() {
        let mut out = Vec::new();
        write_dc64(&mut out, &TypedVector::from_i32(vec![1, -2])).unwrap();
        assert_eq!(
            out,
            [
                b'D', b'C', b'6', b'4', 1, 1, 2, 0, 0, 0, 0, 0, 0, 0, //
                1, 0, 0, 0, 0xfe, 0xff, 0xff, 0xff
            ]
        );

        let mut out = Vec::new();
        write_dc64(&mut out, &TypedVector::from_f64(vec![1.0])).unwrap();
        assert_eq!(&out[4..6], &[1, 0]);
        assert_eq!(&out[14..], &1.0f64.to_le_bytes());
    }

    #[test]
    fn rejects_malformed_input() {
        let mut good = Vec::new();
        write_dc64(&mut good, &TypedVector::from_f64(vec![1.0, 2.0])).unwrap();

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(read_dc64(&bad[..]).is_err());

        let mut bad = good.clone();
        bad[4] = 2;
        assert!(read_dc64(&bad[..]).is_err());

        let mut bad = good.clone();
        bad[5] = 7;
        assert!(read_dc64(&bad[..]).is_err());

        assert!(read_dc64(&good[..good.len() - 1]).is_err());
        let mut bad = good.clone();
        bad.push(0);
        assert!(read_dc64(&bad[..]).is_err());
        assert!(read_dc64(&good[..5]).is_err());
    }

    #[test]
    fn int64_vectors_are_not_writable() {
        let mut out = Vec::new();
        assert!(write_dc64(&mut out, &TypedVector::from_i64(vec![1])).is_err());
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.dc64");
        let v = TypedVector::from_i32(vec![3, crate::vector::INT32_NA, -7]);
        write_dc64_file(&path, &v).unwrap();
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 14 + 12);
        assert_eq!(read_dc64_file(&path).unwrap(), v);
        assert!(read_dc64_file(dir.path().join("missing.dc64")).is_err());
    }

    proptest! {
        #[test]
        fn roundtrip_is_bitwise(bits in proptest::collection::vec(any::<u64>(), 0..64)) {
            let v = TypedVector::from_f64(bits.into_iter().map(f64::from_bits).collect());
            let mut out = Vec::new();
            write_dc64(&mut out, &v).unwrap();
            let back = read_dc64(&out[..]).unwrap();
            prop_assert!(back.bitwise_eq(&v));
        }

        #[test]
        fn roundtrip_int32(xs in proptest::collection::vec(any::<i32>(), 0..64)) {
            let v = TypedVector::from_i32(xs);
            let mut out = Vec::new();
            write_dc64(&mut out, &v).unwrap();
            prop_assert_eq!(read_dc64(&out[..]).unwrap(), v);
        }
    }
}
