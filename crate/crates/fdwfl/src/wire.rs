//! Serde helpers: complex values go over the wire as `[re, im]` pairs.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::Serializer;

pub(crate) fn complex_vec<S: Serializer>(
    v: &[Complex64],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = serializer.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

pub(crate) fn complex_dvector<S: Serializer>(
    v: &DVector<Complex64>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    complex_vec(v.as_slice(), serializer)
}
