//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use qellip::{Complex64, Layer, LayerStack64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_e111;

/// Seeded RNG; `QELLIP_SEED` picks a different stream.
pub fn rng() -> ChaCha8Rng {
    let seed = std::env::var("QELLIP_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED);
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Mathieu characteristic equation by continued fractions.

/// `a - q R_1(a)` with `R_j = A_2j / A_2j-2` evaluated from depth downward.
pub fn mathieu_characteristic(a: f64, q: f64) -> f64 {
    let depth = 400;
    let mut r_next = 0.0;
    for j in (2..=depth).rev() {
        let jj = j as f64;
        r_next = q / ((a - 4.0 * jj * jj) - q * r_next);
    }
    let r1 = 2.0 * q / ((a - 4.0) - q * r_next);
    a - q * r1
}

/// Root of the characteristic equation in `[lo, hi]` by bisection.
pub fn mathieu_root(q: f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = mathieu_characteristic(lo, q);
    assert!(f_lo * mathieu_characteristic(hi, q) < 0.0, "bracket does not straddle a root");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let f_mid = mathieu_characteristic(mid, q);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * (1.0 + mid.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Integrates `y'' = -(a - 2q cos 2η) y` from `η = 0` with `y(0) = y0`, `y'(0) = 0` (RK4).
pub fn mathieu_shoot(a: f64, q: f64, y0: f64, eta_end: f64, steps: usize) -> f64 {
    let h = eta_end / steps as f64;
    let f = |eta: f64, y: f64, v: f64| (v, -(a - 2.0 * q * (2.0 * eta).cos()) * y);
    let (mut y, mut v) = (y0, 0.0);
    for i in 0..steps {
        let t = i as f64 * h;
        let (k1y, k1v) = f(t, y, v);
        let (k2y, k2v) = f(t + h / 2.0, y + h / 2.0 * k1y, v + h / 2.0 * k1v);
        let (k3y, k3v) = f(t + h / 2.0, y + h / 2.0 * k2y, v + h / 2.0 * k2v);
        let (k4y, k4v) = f(t + h, y + h * k3y, v + h * k3v);
        y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    y
}

// ---------------------------------------------------------------------------
// Thin-film reflection by explicit summation of multiple reflections.

#[derive(Clone, Copy)]
enum Pol {
    S,
    P,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `n cos θ` with the decaying branch.
fn kz(n: Complex64, invariant: Complex64) -> Complex64 {
    let k = (n * n - invariant * invariant).sqrt();
    if k.im < 0.0 || (k.im == 0.0 && k.re < 0.0) {
        -k
    } else {
        k
    }
}

/// `(r_ij, t_ij)` at one interface, written out per polarization.
fn interface(pol: Pol, ni: Complex64, nj: Complex64, ki: Complex64, kj: Complex64) -> (Complex64, Complex64) {
    match pol {
        Pol::S => ((ki - kj) / (ki + kj), 2.0 * ki / (ki + kj)),
        Pol::P => {
            let (ci, cj) = (ki / ni, kj / nj);
            let den = nj * ci + ni * cj;
            ((nj * ci - ni * cj) / den, 2.0 * ni * ci / den)
        }
    }
}

/// Reflection of the film stack below interface `i`, summing
/// `r_ij + t_ij t_ji R e^{2iβ} Σ_k (r_ji R e^{2iβ})^k` term by term.
fn airy(pol: Pol, indices: &[Complex64], ks: &[Complex64], phases: &[Complex64], i: usize) -> Complex64 {
    let j = i + 1;
    let (r_ij, t_ij) = interface(pol, indices[i], indices[j], ks[i], ks[j]);
    if j == indices.len() - 1 {
        return r_ij;
    }
    let (r_ji, t_ji) = interface(pol, indices[j], indices[i], ks[j], ks[i]);
    let below = airy(pol, indices, ks, phases, j) * phases[j];
    let ratio = r_ji * below;
    let mut term = t_ij * t_ji * below;
    let mut sum = r_ij;
    for _ in 0..1_000_000 {
        sum += term;
        if term.norm() < 1e-18 * (1.0 + sum.norm()) {
            break;
        }
        term *= ratio;
    }
    sum
}

/// `(r_p, r_s)` of the stack from the multiple-reflection series.
pub fn airy_reflection(stack: &LayerStack64) -> (Complex64, Complex64) {
    let mut indices = vec![stack.ambient_index];
    indices.extend(stack.layers.iter().map(|l| l.index));
    indices.push(stack.substrate_index);
    let invariant = stack.ambient_index * stack.angle_of_incidence.sin();
    let ks: Vec<Complex64> = indices.iter().map(|&n| kz(n, invariant)).collect();
    // round-trip phase factor e^{2iβ} of each film, indexed like `indices`
    let mut phases = vec![c(1.0); indices.len()];
    for (idx, layer) in stack.layers.iter().enumerate() {
        let beta = ks[idx + 1] * (2.0 * std::f64::consts::PI * layer.thickness_nm / stack.wavelength_nm);
        phases[idx + 1] = (Complex64::i() * 2.0 * beta).exp();
    }
    (
        airy(Pol::P, &indices, &ks, &phases, 0),
        airy(Pol::S, &indices, &ks, &phases, 0),
    )
}

/// Random 1–4 layer stack; `absorbing` allows extinction in films and substrate.
pub fn random_stack(rng: &mut impl Rng, absorbing: bool) -> LayerStack64 {
    let ext = |rng: &mut dyn rand::RngCore, max: f64| if absorbing { rng.gen_range(0.0..max) } else { 0.0 };
    let count = rng.gen_range(1..=4);
    let layers = (0..count)
        .map(|_| Layer {
            index: Complex64::new(rng.gen_range(1.2..3.5), ext(rng, 0.5)),
            thickness_nm: rng.gen_range(0.0..300.0),
        })
        .collect();
    LayerStack64 {
        ambient_index: c(1.0),
        layers,
        substrate_index: Complex64::new(rng.gen_range(1.3..4.0), ext(rng, 1.0)),
        wavelength_nm: rng.gen_range(300.0..1000.0),
        angle_of_incidence: rng.gen_range(0.0..80f64.to_radians()),
    }
}
