#![allow(dead_code)]

use entloc_core::metrics::pauli;
use entloc_core::qstate::CMatrix;
use entloc_core::DensityMatrix;

fn bloch(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// T_ij = Tr(ρ σ_i ⊗ σ_j), read directly off the density matrix.
pub fn correlations(rho: &CMatrix) -> [[f64; 3]; 3] {
    let mut t = [[0.0; 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (rho * pauli(i + 1).kronecker(&pauli(j + 1))).trace().re;
        }
    }
    t
}

fn correlation(t: &[[f64; 3]; 3], a: (f64, f64), b: (f64, f64)) -> f64 {
    let (u, v) = (bloch(a.0, a.1), bloch(b.0, b.1));
    (0..3).map(|i| (0..3).map(|j| u[i] * t[i][j] * v[j]).sum::<f64>()).sum()
}

/// CHSH value for Alice settings a, a' and Bob settings b, b', each given
/// as Bloch angles (θ, φ).
pub fn chsh(t: &[[f64; 3]; 3], x: &[f64; 8]) -> f64 {
    let (a, a2, b, b2) = ((x[0], x[1]), (x[2], x[3]), (x[4], x[5]), (x[6], x[7]));
    correlation(t, a, b) + correlation(t, a, b2) + correlation(t, a2, b) - correlation(t, a2, b2)
}

/// Maximal |CHSH| found by pattern search over the eight measurement
/// angles from a fixed set of starting points.
pub fn chsh_search(rho: &DensityMatrix) -> f64 {
    let m = correlations(rho.matrix());
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut best = 0.0f64;
    for start in 0..24 {
        let mut x = [0.0; 8];
        for v in x.iter_mut() {
            *v = next() * std::f64::consts::PI * 2.0;
        }
        let sign = if start % 2 == 0 { 1.0 } else { -1.0 };
        let f = |x: &[f64; 8]| sign * chsh(&m, x);
        let mut val = f(&x);
        let mut step = 0.5;
        while step > 1e-9 {
            let mut improved = false;
            for k in 0..8 {
                for d in [step, -step] {
                    let mut y = x;
                    y[k] += d;
                    let v = f(&y);
                    if v > val {
                        x = y;
                        val = v;
                        improved = true;
                    }
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        best = best.max(val);
    }
    best
}
