//! Built-in tight-binding models with their canonical symmetry
//! representations: one realization for each nontrivial invariant the
//! library computes, plus a trivial-class pump model.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use ndarray::array;

use crate::error::{Error, Result};
use crate::linalg::{ceye, CMat, C64};
use crate::model::BlochModel;
use crate::symmetry::SymmetrySpec;

/// A generated model together with its canonical symmetry spec.
#[derive(Debug, Clone)]
pub struct BuiltinModel {
    name: BuiltinName,
    params: Vec<(&'static str, f64)>,
    model: BlochModel,
    spec: SymmetrySpec,
}

impl BuiltinModel {
    pub fn name(&self) -> BuiltinName {
        self.name
    }

    /// (flag name, value) pairs actually used by the generator.
    pub fn params(&self) -> &[(&'static str, f64)] {
        &self.params
    }

    pub fn model(&self) -> &BlochModel {
        &self.model
    }

    pub fn spec(&self) -> &SymmetrySpec {
        &self.spec
    }

    pub fn into_parts(self) -> (BlochModel, SymmetrySpec) {
        (self.model, self.spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinName {
    Ssh,
    Qwz,
    Kitaev,
    Bhz,
    RiceMele,
}

impl BuiltinName {
    pub const ALL: [BuiltinName; 5] = [
        BuiltinName::Ssh,
        BuiltinName::Qwz,
        BuiltinName::Kitaev,
        BuiltinName::Bhz,
        BuiltinName::RiceMele,
    ];
}

impl fmt::Display for BuiltinName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BuiltinName::Ssh => "ssh",
            BuiltinName::Qwz => "qwz",
            BuiltinName::Kitaev => "kitaev",
            BuiltinName::Bhz => "bhz",
            BuiltinName::RiceMele => "rice-mele",
        };
        f.write_str(s)
    }
}

impl FromStr for BuiltinName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ssh" => Ok(BuiltinName::Ssh),
            "qwz" => Ok(BuiltinName::Qwz),
            "kitaev" => Ok(BuiltinName::Kitaev),
            "bhz" => Ok(BuiltinName::Bhz),
            "rice-mele" | "rice_mele" => Ok(BuiltinName::RiceMele),
            other => Err(Error::InvalidModel(format!(
                "unknown builtin '{other}' (expected ssh, qwz, kitaev, bhz, or rice-mele)"
            ))),
        }
    }
}

/// Optional parameter overrides collected from the command line; each
/// builtin reads the subset it understands and applies its defaults to the
/// rest.
#[derive(Debug, Clone, Copy, Default)]
pub struct BuiltinParams {
    pub v: Option<f64>,
    pub w: Option<f64>,
    pub m: Option<f64>,
    pub t: Option<f64>,
    pub delta: Option<f64>,
    pub mu: Option<f64>,
}

pub fn by_name(name: BuiltinName, params: &BuiltinParams) -> BuiltinModel {
    match name {
        BuiltinName::Ssh => ssh(params.v.unwrap_or(0.5), params.w.unwrap_or(1.0)),
        BuiltinName::Qwz => qwz(params.m.unwrap_or(1.0)),
        BuiltinName::Kitaev => kitaev(
            params.t.unwrap_or(1.0),
            params.delta.unwrap_or(1.0),
            params.mu.unwrap_or(1.0),
        ),
        BuiltinName::Bhz => bhz(params.m.unwrap_or(1.0)),
        BuiltinName::RiceMele => rice_mele(
            params.v.unwrap_or(0.5),
            params.w.unwrap_or(1.0),
            params.delta.unwrap_or(0.5),
        ),
    }
}

/// Every builtin at its default parameters.
pub fn defaults() -> Vec<BuiltinModel> {
    BuiltinName::ALL
        .iter()
        .map(|&n| by_name(n, &BuiltinParams::default()))
        .collect()
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

fn pauli_x() -> CMat {
    array![[re(0.0), re(1.0)], [re(1.0), re(0.0)]]
}

fn pauli_y() -> CMat {
    array![[re(0.0), im(-1.0)], [im(1.0), re(0.0)]]
}

fn pauli_z() -> CMat {
    array![[re(1.0), re(0.0)], [re(0.0), re(-1.0)]]
}

/// diag(a, b) for 2x2 blocks.
fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros((4, 4));
    for i in 0..2 {
        for j in 0..2 {
            out[[i, j]] = a[[i, j]];
            out[[i + 2, j + 2]] = b[[i, j]];
        }
    }
    out
}

fn must(model: std::result::Result<BlochModel, Error>) -> BlochModel {
    model.expect("builtin hoppings satisfy the closure invariant by construction")
}

/// SSH chain: H(k) = [[0, v + w e^{ik}], [v + w e^{-ik}, 0]].
/// Chiral class BDI with T = K, C = sigma_z K, S = sigma_z;
/// winding 1 for |v| < |w|.
pub fn ssh(v: f64, w: f64) -> BuiltinModel {
    let mut hop = BTreeMap::new();
    hop.insert(vec![0], pauli_x().mapv(|z| z * v));
    hop.insert(vec![1], array![[re(0.0), re(w)], [re(0.0), re(0.0)]]);
    hop.insert(vec![-1], array![[re(0.0), re(0.0)], [re(w), re(0.0)]]);
    let spec = SymmetrySpec::new(Some(ceye(2)), Some(pauli_z()), Some(pauli_z()));
    BuiltinModel {
        name: BuiltinName::Ssh,
        params: vec![("v", v), ("w", w)],
        model: must(BlochModel::new(1, 2, hop)),
        spec,
    }
}

/// QWZ Chern insulator:
/// H(k) = (m + cos kx + cos ky) sigma_z + sin kx sigma_x + sin ky sigma_y.
/// Class A; Chern number +1 for 0 < m < 2, -1 for -2 < m < 0, else 0.
pub fn qwz(m: f64) -> BuiltinModel {
    let half = |s: &CMat| (pauli_z() - s.mapv(|z| z * C64::new(0.0, 1.0))).mapv(|z| z * 0.5);
    let mut hop = BTreeMap::new();
    hop.insert(vec![0, 0], pauli_z().mapv(|z| z * m));
    let hx = half(&pauli_x());
    let hy = half(&pauli_y());
    hop.insert(vec![-1, 0], crate::linalg::dagger(&hx));
    hop.insert(vec![1, 0], hx);
    hop.insert(vec![0, -1], crate::linalg::dagger(&hy));
    hop.insert(vec![0, 1], hy);
    BuiltinModel {
        name: BuiltinName::Qwz,
        params: vec![("m", m)],
        model: must(BlochModel::new(2, 2, hop)),
        spec: SymmetrySpec::empty(),
    }
}

/// Kitaev chain in BdG form:
/// H(k) = (-mu - 2t cos k) tau_z + 2 delta sin k tau_y.
/// Class D with C = tau_x K; Majorana invariant sign(mu^2 - 4t^2).
pub fn kitaev(t: f64, delta: f64, mu: f64) -> BuiltinModel {
    let mut hop = BTreeMap::new();
    hop.insert(vec![0], pauli_z().mapv(|z| z * -mu));
    hop.insert(vec![1], array![[re(-t), re(-delta)], [re(delta), re(t)]]);
    hop.insert(vec![-1], array![[re(-t), re(delta)], [re(-delta), re(t)]]);
    let spec = SymmetrySpec::new(None, Some(pauli_x()), None);
    BuiltinModel {
        name: BuiltinName::Kitaev,
        params: vec![("t", t), ("delta", delta), ("mu", mu)],
        model: must(BlochModel::new(1, 2, hop)),
        spec,
    }
}

/// BHZ quantum spin Hall model: two time-reversed QWZ copies,
/// H(k) = diag(h(k), h*(-k)) with h the QWZ block. Class AII under
/// T = [[0, I], [-I, 0]] K; Kane-Mele index 1 for 0 < m < 2.
pub fn bhz(m: f64) -> BuiltinModel {
    let i = C64::new(0.0, 1.0);
    let upper_x = (pauli_z() - pauli_x().mapv(|z| z * i)).mapv(|z| z * 0.5);
    let lower_x = (pauli_z() + pauli_x().mapv(|z| z * i)).mapv(|z| z * 0.5);
    let slice_y = (pauli_z() - pauli_y().mapv(|z| z * i)).mapv(|z| z * 0.5);
    let mz = pauli_z().mapv(|z| z * m);

    let mut hop = BTreeMap::new();
    hop.insert(vec![0, 0], block_diag(&mz, &mz));
    let hx = block_diag(&upper_x, &lower_x);
    let hy = block_diag(&slice_y, &slice_y);
    hop.insert(vec![-1, 0], crate::linalg::dagger(&hx));
    hop.insert(vec![1, 0], hx);
    hop.insert(vec![0, -1], crate::linalg::dagger(&hy));
    hop.insert(vec![0, 1], hy);

    let mut u_t = CMat::zeros((4, 4));
    for j in 0..2 {
        u_t[[j, j + 2]] = re(1.0);
        u_t[[j + 2, j]] = re(-1.0);
    }
    let spec = SymmetrySpec::new(Some(u_t), None, None);
    BuiltinModel {
        name: BuiltinName::Bhz,
        params: vec![("m", m)],
        model: must(BlochModel::new(2, 4, hop)),
        spec,
    }
}

/// Rice-Mele chain: the SSH hoppings plus a staggered potential,
/// H(k) = delta sigma_z + (v + w cos k) sigma_x - w sin k sigma_y.
/// Class AI under T = K; delta breaks the chiral symmetry of the SSH
/// limit delta = 0.
pub fn rice_mele(v: f64, w: f64, delta: f64) -> BuiltinModel {
    let mut hop = BTreeMap::new();
    hop.insert(
        vec![0],
        pauli_x().mapv(|z| z * v) + pauli_z().mapv(|z| z * delta),
    );
    hop.insert(vec![1], array![[re(0.0), re(w)], [re(0.0), re(0.0)]]);
    hop.insert(vec![-1], array![[re(0.0), re(0.0)], [re(w), re(0.0)]]);
    let spec = SymmetrySpec::new(Some(ceye(2)), None, None);
    BuiltinModel {
        name: BuiltinName::RiceMele,
        params: vec![("v", v), ("w", w), ("delta", delta)],
        model: must(BlochModel::new(1, 2, hop)),
        spec,
    }
}
