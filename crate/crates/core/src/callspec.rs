//! Per-argument signature and intent declarations.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::vector::{ElemType, TypedVector, MAX_LENGTH};

/// Upper bound on the number of arguments of a callee.
pub const MAX_ARGUMENTS: usize = 65;

/// Callee-side type of one argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignatureTag {
    Double,
    Integer,
    Int64,
}

impl SignatureTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SignatureTag::Double => "double",
            SignatureTag::Integer => "integer",
            SignatureTag::Int64 => "int64",
        }
    }

    /// Element type the callee sees.
    pub fn callee_type(self) -> ElemType {
        match self {
            SignatureTag::Double => ElemType::Double,
            SignatureTag::Integer => ElemType::Int32,
            SignatureTag::Int64 => ElemType::Int64,
        }
    }

    /// Element type of the host vector carrying this argument. 64-bit
    /// integers travel as doubles on the host side.
    pub fn host_type(self) -> ElemType {
        match self {
            SignatureTag::Integer => ElemType::Int32,
            SignatureTag::Double | SignatureTag::Int64 => ElemType::Double,
        }
    }
}

impl FromStr for SignatureTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(SignatureTag::Double),
            "integer" | "int" => Ok(SignatureTag::Integer),
            "int64" => Ok(SignatureTag::Int64),
            other => Err(Error::spec(format!(
                "unknown signature \"{other}\" (expected double, integer or int64)"
            ))),
        }
    }
}

impl fmt::Display for SignatureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Access mode of one argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum IntentTag {
    #[default]
    ReadWrite,
    Read,
    Write,
}

impl IntentTag {
    pub fn as_str(self) -> &'static str {
        match self {
            IntentTag::ReadWrite => "rw",
            IntentTag::Read => "r",
            IntentTag::Write => "w",
        }
    }

    pub fn writes(self) -> bool {
        matches!(self, IntentTag::ReadWrite | IntentTag::Write)
    }
}

impl FromStr for IntentTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rw" => Ok(IntentTag::ReadWrite),
            "r" => Ok(IntentTag::Read),
            "w" => Ok(IntentTag::Write),
            other => Err(Error::spec(format!(
                "unknown intent \"{other}\" (expected rw, r or w)"
            ))),
        }
    }
}

impl fmt::Display for IntentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Placeholder for a write-only argument: the engine allocates a
/// zero-filled vector of this mode and length at call time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorDescriptor {
    mode: ElemType,
    length: u64,
}

impl VectorDescriptor {
    pub fn new(mode: ElemType, length: u64) -> Result<Self> {
        if mode == ElemType::Int64 {
            return Err(Error::spec(
                "descriptor mode must be double or integer",
            ));
        }
        if length > MAX_LENGTH {
            return Err(Error::Capacity {
                requested: length,
                limit: MAX_LENGTH,
            });
        }
        Ok(VectorDescriptor { mode, length })
    }

    pub fn numeric(length: u64) -> Result<Self> {
        VectorDescriptor::new(ElemType::Double, length)
    }

    pub fn integer(length: u64) -> Result<Self> {
        VectorDescriptor::new(ElemType::Int32, length)
    }

    pub fn mode(&self) -> ElemType {
        self.mode
    }

    pub fn length(&self) -> u64 {
        self.length
    }
}

#[derive(Debug, Clone)]
pub enum ArgValue {
    Vector(Arc<TypedVector>),
    Descriptor(VectorDescriptor),
}

impl From<TypedVector> for ArgValue {
    fn from(v: TypedVector) -> Self {
        ArgValue::Vector(Arc::new(v))
    }
}

impl From<Arc<TypedVector>> for ArgValue {
    fn from(v: Arc<TypedVector>) -> Self {
        ArgValue::Vector(v)
    }
}

impl From<VectorDescriptor> for ArgValue {
    fn from(d: VectorDescriptor) -> Self {
        ArgValue::Descriptor(d)
    }
}

/// One positional argument, optionally named so the result can be looked up by name.
#[derive(Debug, Clone)]
pub struct CallArgument {
    pub name: Option<String>,
    pub value: ArgValue,
}

impl CallArgument {
    pub fn named(name: impl Into<String>, value: impl Into<ArgValue>) -> Self {
        CallArgument {
            name: Some(name.into()),
            value: value.into(),
        }
    }

    pub fn positional(value: impl Into<ArgValue>) -> Self {
        CallArgument {
            name: None,
            value: value.into(),
        }
    }
}

impl<T: Into<ArgValue>> From<T> for CallArgument {
    fn from(value: T) -> Self {
        CallArgument::positional(value)
    }
}

/// Parses a list of signature strings; errors name the zero-based position.
pub fn parse_signature<S: AsRef<str>>(items: &[S]) -> Result<Vec<SignatureTag>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| s.as_ref().trim().parse().map_err(|e: Error| e.at_argument(i)))
        .collect()
}

/// Parses intents, expanding an absent list to read-write for every argument.
pub fn parse_intent<S: AsRef<str>>(items: Option<&[S]>, arg_count: usize) -> Result<Vec<IntentTag>> {
    let Some(items) = items else {
        return Ok(vec![IntentTag::ReadWrite; arg_count]);
    };
    let tags = items
        .iter()
        .enumerate()
        .map(|(i, s)| s.as_ref().trim().parse().map_err(|e: Error| e.at_argument(i)))
        .collect::<Result<Vec<IntentTag>>>()?;
    if tags.len() != arg_count {
        return Err(Error::spec(format!(
            "{} intents given for {arg_count} arguments",
            tags.len()
        )));
    }
    Ok(tags)
}

/// Splits the comma-separated list grammar used on the command line.
pub fn split_list(text: &str) -> Vec<&str> {
    text.split(',').map(str::trim).collect()
}

/// A call request: the symbol and everything about its arguments except the data.
#[derive(Debug, Clone, PartialEq)]
pub struct CallSpec {
    pub symbol: String,
    pub signature: Vec<SignatureTag>,
    /// `None` means read-write for every argument.
    pub intents: Option<Vec<IntentTag>>,
    pub naok: bool,
    /// Restricts symbol lookup to the library registered under this name.
    pub library_filter: Option<String>,
    pub verbosity: u8,
    pub fortran_convention: bool,
}

impl CallSpec {
    pub fn new(symbol: impl Into<String>, signature: Vec<SignatureTag>) -> Self {
        CallSpec {
            symbol: symbol.into(),
            signature,
            intents: None,
            naok: false,
            library_filter: None,
            verbosity: 0,
            fortran_convention: false,
        }
    }

    /// Builds a spec from signature strings, e.g. `["double", "int64"]`.
    pub fn parse<S: AsRef<str>>(symbol: impl Into<String>, signature: &[S]) -> Result<Self> {
        Ok(CallSpec::new(symbol, parse_signature(signature)?))
    }

    pub fn with_intents(mut self, intents: Vec<IntentTag>) -> Self {
        self.intents = Some(intents);
        self
    }

    pub fn parse_intents<S: AsRef<str>>(mut self, intents: &[S]) -> Result<Self> {
        let parsed = intents
            .iter()
            .enumerate()
            .map(|(i, s)| s.as_ref().trim().parse().map_err(|e: Error| e.at_argument(i)))
            .collect::<Result<Vec<IntentTag>>>()?;
        self.intents = Some(parsed);
        Ok(self)
    }

    pub fn with_naok(mut self, naok: bool) -> Self {
        self.naok = naok;
        self
    }

    pub fn with_package(mut self, name: impl Into<String>) -> Self {
        self.library_filter = Some(name.into());
        self
    }

    pub fn with_verbosity(mut self, verbosity: u8) -> Self {
        self.verbosity = verbosity;
        self
    }

    pub fn with_fortran(mut self, fortran: bool) -> Self {
        self.fortran_convention = fortran;
        self
    }
}

/// A spec checked against a concrete argument count.
#[derive(Debug, Clone, PartialEq)]
pub struct CallPlan {
    pub signature: Vec<SignatureTag>,
    pub intents: Vec<IntentTag>,
    pub naok: bool,
    pub verbosity: u8,
}

impl CallPlan {
    pub fn len(&self) -> usize {
        self.signature.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signature.is_empty()
    }
}

/// Checks that signature, intents and arguments agree in number and that
/// the count is within 1..=65.
pub fn validate(spec: &CallSpec, args: &[CallArgument]) -> Result<CallPlan> {
    let n = args.len();
    if spec.symbol.is_empty() {
        return Err(Error::spec("symbol name is empty"));
    }
    if n == 0 {
        return Err(Error::spec("at least one argument is required"));
    }
    if n > MAX_ARGUMENTS {
        return Err(
            Error::spec(format!("at most {MAX_ARGUMENTS} arguments are supported, got {n}"))
                .at_argument(MAX_ARGUMENTS),
        );
    }
    if spec.verbosity > 2 {
        return Err(Error::spec(format!(
            "verbosity must be 0, 1 or 2, got {}",
            spec.verbosity
        )));
    }
    check_count("signature", spec.signature.len(), n)?;
    let intents = match &spec.intents {
        Some(list) => {
            check_count("intent", list.len(), n)?;
            list.clone()
        }
        None => vec![IntentTag::ReadWrite; n],
    };
    Ok(CallPlan {
        signature: spec.signature.clone(),
        intents,
        naok: spec.naok,
        verbosity: spec.verbosity,
    })
}

fn check_count(what: &str, declared: usize, args: usize) -> Result<()> {
    match declared.cmp(&args) {
        std::cmp::Ordering::Less => {
            Err(Error::spec(format!("no {what} declared ({declared} {what}s for {args} arguments)"))
                .at_argument(declared))
        }
        std::cmp::Ordering::Greater => Err(Error::spec(format!(
            "{what} declared without a matching argument ({declared} {what}s for {args} arguments)"
        ))
        .at_argument(args)),
        std::cmp::Ordering::Equal => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ErrorKind;
    use proptest::prelude::*;

    fn args(n: usize) -> Vec<CallArgument> {
        (0..n)
            .map(|_| CallArgument::from(TypedVector::from_f64(vec![0.0])))
            .collect()
    }

    #[test]
    fn parse_get_c_signature() {
        assert_eq!(
            parse_signature(&["double", "integer", "double"]).unwrap(),
            vec![SignatureTag::Double, SignatureTag::Integer, SignatureTag::Double]
        );
        assert_eq!(
            parse_signature(&["double", "int64", "double"]).unwrap(),
            vec![SignatureTag::Double, SignatureTag::Int64, SignatureTag::Double]
        );
    }

    #[test]
    fn int_is_an_alias() {
        assert_eq!(parse_signature(&["int"]).unwrap(), vec![SignatureTag::Integer]);
        assert_eq!(SignatureTag::Integer.to_string(), "integer");
    }

    #[test]
    fn unknown_signature_names_position() {
        let err = parse_signature(&["float"]).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::Spec);
        assert_eq!(err.position(), Some(0));
        assert!(err.to_string().contains("float"));

        let err = parse_signature(&["double", "complex"]).unwrap_err();
        assert_eq!(err.position(), Some(1));
    }

    #[test]
    fn intents() {
        assert_eq!(
            parse_intent(Some(&["r", "r", "w"][..]), 3).unwrap(),
            vec![IntentTag::Read, IntentTag::Read, IntentTag::Write]
        );
        assert_eq!(
            parse_intent::<&str>(None, 2).unwrap(),
            vec![IntentTag::ReadWrite, IntentTag::ReadWrite]
        );
        assert_eq!(parse_intent(Some(&["r"][..]), 2).unwrap_err().kind(), ErrorKind::Spec);
        assert_eq!(parse_intent(Some(&["x"][..]), 1).unwrap_err().position(), Some(0));
    }

    #[test]
    fn validate_counts() {
        let spec = CallSpec::parse("f", &["double"; 3]).unwrap();
        let plan = validate(&spec, &args(3)).unwrap();
        assert_eq!(plan.intents, vec![IntentTag::ReadWrite; 3]);

        let spec = CallSpec::parse("f", &["double"; 66]).unwrap();
        let err = validate(&spec, &args(66)).unwrap_err();
        assert_eq!(err.kind(), ErrorKind::Spec);
        assert_eq!(err.position(), Some(65));
        assert!(err.to_string().contains("65"));

        let spec = CallSpec::parse("f", &["double"; 2]).unwrap();
        let err = validate(&spec, &args(3)).unwrap_err();
        assert_eq!(err.position(), Some(2));

        let spec = CallSpec::parse("f", &["double"; 3]).unwrap();
        let err = validate(&spec, &args(2)).unwrap_err();
        assert_eq!(err.position(), Some(2));

        let spec = CallSpec::parse("f", &["double"; 3])
            .unwrap()
            .with_intents(vec![IntentTag::Read; 2]);
        assert_eq!(validate(&spec, &args(3)).unwrap_err().position(), Some(2));

        let spec = CallSpec::parse("f", &[] as &[&str]).unwrap();
        assert_eq!(validate(&spec, &[]).unwrap_err().kind(), ErrorKind::Spec);

        let spec = CallSpec::parse("f", &["double"]).unwrap().with_verbosity(3);
        assert!(validate(&spec, &args(1)).is_err());

        let spec = CallSpec::parse("f", &["double"; 65]).unwrap();
        assert!(validate(&spec, &args(65)).is_ok());
    }

    #[test]
    fn descriptors() {
        let d = VectorDescriptor::numeric(8).unwrap();
        assert_eq!(d.mode(), ElemType::Double);
        assert_eq!(d.length(), 8);
        assert!(VectorDescriptor::new(ElemType::Int64, 1).is_err());
        assert_eq!(
            VectorDescriptor::integer(MAX_LENGTH + 1).unwrap_err().kind(),
            ErrorKind::Capacity
        );
    }

    #[test]
    fn list_grammar() {
        assert_eq!(split_list("double, int64,double"), vec!["double", "int64", "double"]);
        assert_eq!(parse_signature(&split_list("r,r,w")).unwrap_err().kind(), ErrorKind::Spec);
    }

    fn sig() -> impl Strategy<Value = SignatureTag> {
        prop_oneof![
            Just(SignatureTag::Double),
            Just(SignatureTag::Integer),
            Just(SignatureTag::Int64)
        ]
    }

    fn intent() -> impl Strategy<Value = IntentTag> {
        prop_oneof![Just(IntentTag::ReadWrite), Just(IntentTag::Read), Just(IntentTag::Write)]
    }

    proptest! {
        #[test]
        fn render_roundtrip(tags in proptest::collection::vec(sig(), 0..10), ints in proptest::collection::vec(intent(), 0..10)) {
            let rendered: Vec<String> = tags.iter().map(ToString::to_string).collect();
            prop_assert_eq!(parse_signature(&rendered).unwrap(), tags);
            let rendered: Vec<String> = ints.iter().map(ToString::to_string).collect();
            prop_assert_eq!(parse_intent(Some(&rendered[..]), ints.len()).unwrap(), ints);
        }

        #[test]
        fn parsing_is_total(s in ".{0,12}") {
            // Either a tag or a spec error; never a panic.
            match s.parse::<SignatureTag>() {
                Ok(t) => prop_assert_eq!(t.as_str().parse::<SignatureTag>().unwrap(), t),
                Err(e) => prop_assert_eq!(e.kind(), ErrorKind::Spec),
            }
        }

        #[test]
        fn default_intents_are_read_write(n in 0usize..=65) {
            prop_assert!(parse_intent::<&str>(None, n).unwrap().iter().all(|&i| i == IntentTag::ReadWrite));
        }
    }
}
