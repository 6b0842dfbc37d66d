//! Shared oracles for the integration tests. Each invariant computed by the
//! library is re-derived here through a structurally different algorithm so
//! that agreement between the two routes is meaningful.
#![allow(dead_code)]

use std::f64::consts::PI;

use ndarray::Array2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tenfold::invariants::chiral_frames;
use tenfold::linalg::{cmat, dagger, det, CMat, RMat, C64};
use tenfold::model::BlochModel;

/// Winding of det q(k) around the origin, counted as signed crossings of the
/// positive real axis on a dense sample. No phase accumulation is involved,
/// so this is independent of the branch-continuation route in the library.
pub fn winding_by_crossings(model: &BlochModel, u_s: &CMat, samples: usize) -> i64 {
    let (v_plus, v_minus) = chiral_frames(u_s).unwrap();
    let dets: Vec<C64> = (0..samples)
        .map(|j| {
            let k = 2.0 * PI * j as f64 / samples as f64;
            let h = model.eval(&[k]).unwrap();
            det(&dagger(&v_plus).dot(&h).dot(&v_minus)).unwrap()
        })
        .collect();
    let mut crossings = 0i64;
    for j in 0..samples {
        let a = dets[j];
        let b = dets[(j + 1) % samples];
        let upward = a.im < 0.0 && b.im >= 0.0;
        let downward = a.im >= 0.0 && b.im < 0.0;
        if upward || downward {
            let t = -a.im / (b.im - a.im);
            let re = a.re + t * (b.re - a.re);
            if re > 0.0 {
                crossings += if upward { 1 } else { -1 };
            }
        }
    }
    crossings
}

fn unit_d_vector(model: &BlochModel, kx: f64, ky: f64) -> [f64; 3] {
    let h = model.eval(&[kx, ky]).unwrap();
    let dx = h[[0, 1]].re;
    let dy = -h[[0, 1]].im;
    let dz = (h[[0, 0]].re - h[[1, 1]].re) / 2.0;
    let norm = (dx * dx + dy * dy + dz * dz).sqrt();
    assert!(norm > 1e-12, "d-vector vanishes at k=({kx}, {ky})");
    [dx / norm, dy / norm, dz / norm]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Signed solid angle of the spherical triangle (a, b, c), by the
/// Van Oosterom-Strackee formula.
fn triangle_solid_angle(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    let cross = [
        b[1] * c[2] - b[2] * c[1],
        b[2] * c[0] - b[0] * c[2],
        b[0] * c[1] - b[1] * c[0],
    ];
    let numer = a[0] * cross[0] + a[1] * cross[1] + a[2] * cross[2];
    let denom = 1.0 + dot3(a, b) + dot3(b, c) + dot3(a, c);
    2.0 * numer.atan2(denom)
}

/// Degree of the unit d-vector map of a gapped two-band 2D Hamiltonian
/// H = d(k).sigma + e(k) I, computed geometrically as the total signed solid
/// angle swept on the sphere, divided by 4 pi. The lower-band Chern number
/// equals minus this degree, which gives a Berry-curvature-free cross-check
/// of the lattice field-strength route.
pub fn two_band_degree(model: &BlochModel, n: usize) -> i64 {
    assert_eq!(model.bands(), 2);
    let step = 2.0 * PI / n as f64;
    let grid: Vec<Vec<[f64; 3]>> = (0..=n)
        .map(|iy| {
            (0..=n)
                .map(|ix| unit_d_vector(model, ix as f64 * step, iy as f64 * step))
                .collect()
        })
        .collect();
    let mut total = 0.0;
    for iy in 0..n {
        for ix in 0..n {
            let n1 = grid[iy][ix];
            let n2 = grid[iy][ix + 1];
            let n3 = grid[iy + 1][ix + 1];
            let n4 = grid[iy + 1][ix];
            total += triangle_solid_angle(n1, n2, n3) + triangle_solid_angle(n1, n3, n4);
        }
    }
    let raw = total / (4.0 * PI);
    let deg = raw.round();
    assert!(
        (raw - deg).abs() < 1e-6,
        "solid angle sum {raw} is not integral"
    );
    deg as i64
}

/// Lower-band Chern number of a two-band model via the solid-angle degree.
pub fn two_band_chern(model: &BlochModel, n: usize) -> i64 {
    -two_band_degree(model, n)
}

/// Majorana sign of a two-band BdG chain with particle-hole matrix tau_x,
/// through the fixed Majorana rotation Omega = (1/sqrt 2) [[1, i], [1, -i]]
/// (which satisfies Omega Omega^T = tau_x). In that basis H(k*) = i A with
/// A real antisymmetric at k* in {0, pi}, and the 2x2 Pfaffian is read off
/// directly, bypassing both the Takagi factorization and the elimination
/// Pfaffian.
pub fn majorana_sign_via_omega(model: &BlochModel) -> i64 {
    assert_eq!(model.bands(), 2);
    let s = 1.0 / 2f64.sqrt();
    let omega = cmat(&[
        &[C64::new(s, 0.0), C64::new(0.0, s)],
        &[C64::new(s, 0.0), C64::new(0.0, -s)],
    ]);
    let mut product = 1.0;
    for k in [0.0, PI] {
        let h = model.eval(&[k]).unwrap();
        let rotated = dagger(&omega).dot(&h).dot(&omega);
        let max_re = rotated.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        assert!(
            max_re < 1e-10,
            "rotated Hamiltonian is not purely imaginary"
        );
        let a = rotated.mapv(|z| z.im);
        assert!(a[[0, 0]].abs() < 1e-10 && a[[1, 1]].abs() < 1e-10);
        product *= a[[0, 1]];
    }
    assert!(product != 0.0);
    if product > 0.0 {
        1
    } else {
        -1
    }
}

/// Kane-Mele index of a spin-decoupled model diag(h(k), h*(-k)) from the
/// Chern number of the upper block alone (the spin-Chern shortcut), valid
/// whenever the two spin sectors do not mix.
pub fn block_diagonal_z2(upper_block: &BlochModel, n: usize) -> i64 {
    two_band_chern(upper_block, n).rem_euclid(2)
}

pub fn random_complex(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    Array2::from_shape_fn((n, n), |_| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let a = random_complex(rng, n);
    (&a + &dagger(&a)).mapv(|z| z * 0.5)
}

pub fn random_antisymmetric(rng: &mut ChaCha8Rng, n: usize) -> RMat {
    let a = Array2::from_shape_fn((n, n), |_| rng.gen_range(-1.0..1.0));
    (&a - &a.t()).mapv(|x| x * 0.5)
}

/// Random real orthogonal matrix from the QR factorization of a Gaussian-ish
/// draw, with the R diagonal sign absorbed so the result is well spread over
/// both determinant signs.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> RMat {
    use ndarray_linalg::QR;
    let a = Array2::from_shape_fn((n, n), |_| rng.gen_range(-1.0..1.0));
    let (q, r) = a.qr().unwrap();
    let mut q = q;
    for j in 0..n {
        if r[[j, j]] < 0.0 {
            for i in 0..n {
                q[[i, j]] = -q[[i, j]];
            }
        }
    }
    q
}
