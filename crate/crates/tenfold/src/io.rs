//! Model file serialization: a JSON document with `dim`, `bands`,
//! `hoppings` (real/imaginary parts row-major) and an optional `symmetries`
//! object carrying the unitary parts of T, C, and S.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::model::BlochModel;
use crate::symmetry::SymmetrySpec;

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    dim: usize,
    bands: usize,
    hoppings: Vec<HoppingEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symmetries: Option<SymmetriesEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct HoppingEntry {
    #[serde(rename = "R")]
    r: Vec<i64>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct SymmetriesEntry {
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    t: Option<MatrixEntry>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<MatrixEntry>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    s: Option<MatrixEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixEntry {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn matrix_from_parts(re: &[Vec<f64>], im: &[Vec<f64>], bands: usize, what: &str) -> Result<CMat> {
    let check = |part: &[Vec<f64>], name: &str| -> Result<()> {
        if part.len() != bands || part.iter().any(|row| row.len() != bands) {
            return Err(Error::InvalidModel(format!(
                "{what}: `{name}` must be a {bands}x{bands} row-major array"
            )));
        }
        Ok(())
    };
    check(re, "re")?;
    check(im, "im")?;
    let mut m = CMat::zeros((bands, bands));
    for i in 0..bands {
        for j in 0..bands {
            m[[i, j]] = C64::new(re[i][j], im[i][j]);
        }
    }
    Ok(m)
}

fn matrix_to_parts(m: &CMat) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = m.nrows();
    let mut re = vec![vec![0.0; n]; n];
    let mut im = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            re[i][j] = m[[i, j]].re;
            im[i][j] = m[[i, j]].im;
        }
    }
    (re, im)
}

/// Parse a model document; validation (hermiticity closure, unitarity of
/// symmetry matrices) happens during construction.
pub fn parse_model(text: &str) -> Result<(BlochModel, SymmetrySpec)> {
    let file: ModelFile = serde_json::from_str(text)?;
    let mut hoppings = std::collections::BTreeMap::new();
    for entry in &file.hoppings {
        let h = matrix_from_parts(
            &entry.re,
            &entry.im,
            file.bands,
            &format!("hopping R={:?}", entry.r),
        )?;
        if hoppings.insert(entry.r.clone(), h).is_some() {
            return Err(Error::InvalidModel(format!(
                "duplicate hopping entry for R={:?}",
                entry.r
            )));
        }
    }
    let model = BlochModel::new(file.dim, file.bands, hoppings)?;
    let spec = match &file.symmetries {
        None => SymmetrySpec::empty(),
        Some(sym) => {
            let read = |m: &Option<MatrixEntry>, what: &str| -> Result<Option<CMat>> {
                m.as_ref()
                    .map(|e| matrix_from_parts(&e.re, &e.im, file.bands, what))
                    .transpose()
            };
            SymmetrySpec::new(
                read(&sym.t, "symmetries.T")?,
                read(&sym.c, "symmetries.C")?,
                read(&sym.s, "symmetries.S")?,
            )
        }
    };
    spec.validate(model.bands())?;
    Ok((model, spec))
}

pub fn load_model(path: &Path) -> Result<(BlochModel, SymmetrySpec)> {
    parse_model(&std::fs::read_to_string(path)?)
}

/// Render a model (and any symmetry matrices) to the document format.
pub fn model_to_string(model: &BlochModel, spec: &SymmetrySpec) -> String {
    let hoppings = model
        .hoppings()
        .iter()
        .map(|(r, h)| {
            let (re, im) = matrix_to_parts(h);
            HoppingEntry {
                r: r.clone(),
                re,
                im,
            }
        })
        .collect();
    let entry = |m: Option<&CMat>| {
        m.map(|u| {
            let (re, im) = matrix_to_parts(u);
            MatrixEntry { re, im }
        })
    };
    let symmetries = if spec.is_empty() {
        None
    } else {
        Some(SymmetriesEntry {
            t: entry(spec.tr()),
            c: entry(spec.ph()),
            s: entry(spec.chiral()),
        })
    };
    let file = ModelFile {
        dim: model.dim(),
        bands: model.bands(),
        hoppings,
        symmetries,
    };
    serde_json::to_string_pretty(&file).expect("model document serialization cannot fail")
}

pub fn write_model(path: &Path, model: &BlochModel, spec: &SymmetrySpec) -> Result<()> {
    std::fs::write(path, model_to_string(model, spec))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::linalg::max_abs;

    #[test]
    fn builtins_round_trip_exactly() {
        for b in builtin::defaults() {
            let text = model_to_string(b.model(), b.spec());
            let (model, spec) = parse_model(&text).unwrap();
            assert_eq!(model.dim(), b.model().dim());
            assert_eq!(model.bands(), b.model().bands());
            let k: Vec<f64> = (0..model.dim()).map(|i| 0.3 + 0.7 * i as f64).collect();
            let before = b.model().eval(&k).unwrap();
            let after = model.eval(&k).unwrap();
            assert!(max_abs(&(&before - &after)) < 1e-14, "{}", b.name());
            assert_eq!(spec.tr().is_some(), b.spec().tr().is_some());
            assert_eq!(spec.ph().is_some(), b.spec().ph().is_some());
            assert_eq!(spec.chiral().is_some(), b.spec().chiral().is_some());
            for (got, want) in [
                (spec.tr(), b.spec().tr()),
                (spec.ph(), b.spec().ph()),
                (spec.chiral(), b.spec().chiral()),
            ] {
                if let (Some(g), Some(w)) = (got, want) {
                    assert!(max_abs(&(g - w)) < 1e-14);
                }
            }
        }
    }

    #[test]
    fn minimal_document_parses() {
        let text = r#"{
            "dim": 0,
            "bands": 2,
            "hoppings": [
                {"R": [], "re": [[1.0, 0.0], [0.0, -1.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}
            ]
        }"#;
        let (model, spec) = parse_model(text).unwrap();
        assert_eq!((model.dim(), model.bands()), (0, 2));
        assert!(spec.is_empty());
        let h = model.eval(&[]).unwrap();
        assert_eq!(h[[0, 0]], C64::new(1.0, 0.0));
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(parse_model("{"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_model(r#"{"dim": 1, "bands": 2}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn hermiticity_violation_is_rejected_with_the_offending_r() {
        let text = r#"{
            "dim": 1,
            "bands": 1,
            "hoppings": [
                {"R": [1], "re": [[1.0]], "im": [[0.0]]},
                {"R": [-1], "re": [[2.0]], "im": [[0.0]]}
            ]
        }"#;
        match parse_model(text) {
            Err(Error::NonHermitian { r, .. }) => assert!(r == vec![1] || r == vec![-1]),
            other => panic!("expected NonHermitian, got {other:?}"),
        }
    }

    #[test]
    fn missing_conjugate_is_rejected() {
        let text = r#"{
            "dim": 1,
            "bands": 1,
            "hoppings": [{"R": [1], "re": [[1.0]], "im": [[0.0]]}]
        }"#;
        assert!(matches!(
            parse_model(text),
            Err(Error::MissingConjugate { r }) if r == vec![1]
        ));
    }

    #[test]
    fn ragged_and_duplicate_entries_are_rejected() {
        let ragged = r#"{
            "dim": 0,
            "bands": 2,
            "hoppings": [{"R": [], "re": [[1.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}]
        }"#;
        assert!(matches!(parse_model(ragged), Err(Error::InvalidModel(_))));
        let dup = r#"{
            "dim": 0,
            "bands": 1,
            "hoppings": [
                {"R": [], "re": [[1.0]], "im": [[0.0]]},
                {"R": [], "re": [[1.0]], "im": [[0.0]]}
            ]
        }"#;
        assert!(matches!(parse_model(dup), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn non_unitary_symmetry_is_rejected() {
        let text = r#"{
            "dim": 0,
            "bands": 1,
            "hoppings": [{"R": [], "re": [[1.0]], "im": [[0.0]]}],
            "symmetries": {"S": {"re": [[2.0]], "im": [[0.0]]}}
        }"#;
        assert!(matches!(parse_model(text), Err(Error::NonUnitary { .. })));
    }

    #[test]
    fn files_round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ssh.json");
        let b = builtin::ssh(0.5, 1.0);
        write_model(&path, b.model(), b.spec()).unwrap();
        let (model, spec) = load_model(&path).unwrap();
        assert_eq!(model.bands(), 2);
        assert!(spec.chiral().is_some());
        assert!(matches!(
            load_model(&dir.path().join("absent.json")),
            Err(Error::Io(_))
        ));
    }
}
