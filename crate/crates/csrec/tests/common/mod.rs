//! Brute-force oracles in plain `f64` complex arithmetic, sharing no code with
//! the library's solvers.
#![allow(dead_code)]

use num_complex::Complex64 as C;

/// Points of `{m² + m⁻² - z + 1 = 0, m⁶ E(m, z) = 1}` with
/// `E = -(z - 2) m⁴ - (z - 2) m² + 1`, i.e. 6/1 surgery on the trefoil, by
/// Newton from a dense grid of starts. Returned points are distinct, not orbit-reduced.
pub fn trefoil_surgery_points() -> Vec<(C, C)> {
    let f = |m: C, z: C| m * m + (m * m).inv() - z + 1.0;
    let e = |m: C, z: C| -(z - 2.0) * m.powi(4) - (z - 2.0) * m * m + 1.0;
    let g = |m: C, z: C| m.powi(6) * e(m, z) - 1.0;
    let fm = |m: C, _z: C| 2.0 * m - 2.0 * m.powi(-3);
    let fz = |_m: C, _z: C| C::new(-1.0, 0.0);
    let gm = |m: C, z: C| 6.0 * m.powi(5) * e(m, z) + m.powi(6) * (-(z - 2.0) * 4.0 * m.powi(3) - (z - 2.0) * 2.0 * m);
    let gz = |m: C, _z: C| m.powi(6) * (-m.powi(4) - m * m);

    let mut out: Vec<(C, C)> = Vec::new();
    let grid = |lo: f64, hi: f64, k: usize| (0..k).map(move |i| lo + (hi - lo) * i as f64 / (k - 1) as f64);
    for mr in grid(-1.8, 1.8, 15) {
        for mi in grid(-1.8, 1.8, 15) {
            for zr in grid(-3.0, 3.0, 9) {
                for zi in grid(-3.0, 3.0, 9) {
                    let (mut m, mut z) = (C::new(mr, mi), C::new(zr, zi));
                    if m.norm() < 0.2 {
                        continue;
                    }
                    let mut ok = true;
                    for _ in 0..60 {
                        let (a, b, c, d) = (fm(m, z), fz(m, z), gm(m, z), gz(m, z));
                        let det = a * d - b * c;
                        if det.norm() < 1e-300 || !det.is_finite() {
                            ok = false;
                            break;
                        }
                        let (r1, r2) = (f(m, z), g(m, z));
                        m -= (d * r1 - b * r2) / det;
                        z -= (a * r2 - c * r1) / det;
                        if !(m.norm() > 1e-3 && m.norm() < 1e3 && z.norm() < 1e6) {
                            ok = false;
                            break;
                        }
                    }
                    let fresh = !out.iter().any(|(a, b)| (a - m).norm() < 1e-6 && (b - z).norm() < 1e-6);
                    if ok && f(m, z).norm() < 1e-10 && g(m, z).norm() < 1e-10 && fresh {
                        out.push((m, z));
                    }
                }
            }
        }
    }
    out
}

/// Classes of `points` under `m ↦ 1/m`.
pub fn orbit_count(points: &[(C, C)]) -> usize {
    let mut reps: Vec<(C, C)> = Vec::new();
    for &(m, z) in points {
        let seen = reps
            .iter()
            .any(|&(a, b)| (b - z).norm() < 1e-6 && ((a - m).norm() < 1e-6 || (a - m.inv()).norm() < 1e-6));
        if !seen {
            reps.push((m, z));
        }
    }
    reps.len()
}

fn mat_mul(a: [C; 4], b: [C; 4]) -> [C; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// Entries of `ρ(W)ρ(x) - ρ(y)ρ(W)` for `b(p, q)` with `ρ(x) = (1 1; 0 1)`, `ρ(y) = (1 0; ζ 1)`.
fn riley_residual(p: i64, q: i64, zeta: C) -> [C; 4] {
    let one = C::new(1.0, 0.0);
    let zero = C::new(0.0, 0.0);
    let x = [one, one, zero, one];
    let xi = [one, -one, zero, one];
    let y = [one, zero, zeta, one];
    let yi = [one, zero, -zeta, one];
    let mut w = [one, zero, zero, one];
    for i in 1..p {
        let pos = (i * q / p) % 2 == 0;
        let letter = match (i % 2 == 1, pos) {
            (true, true) => x,
            (true, false) => xi,
            (false, true) => y,
            (false, false) => yi,
        };
        w = mat_mul(w, letter);
    }
    let l = mat_mul(w, x);
    let r = mat_mul(y, w);
    [l[0] - r[0], l[1] - r[1], l[2] - r[2], l[3] - r[3]]
}

/// Parabolic representations of `b(p, q)` from a grid of Gauss-Newton starts.
pub fn riley_brute_force(p: i64, q: i64) -> Vec<C> {
    let norm2 = |r: &[C; 4]| r.iter().map(|x| x.norm_sqr()).sum::<f64>();
    let mut out: Vec<C> = Vec::new();
    for i in 0..25 {
        for j in 0..25 {
            let mut zeta = C::new(-3.0 + 0.25 * i as f64, -3.0 + 0.25 * j as f64);
            for _ in 0..80 {
                let h = 1e-7;
                let r = riley_residual(p, q, zeta);
                let rp = riley_residual(p, q, zeta + h);
                let rm = riley_residual(p, q, zeta - h);
                let jac: Vec<C> = (0..4).map(|k| (rp[k] - rm[k]) / (2.0 * h)).collect();
                let num: C = (0..4).map(|k| jac[k].conj() * r[k]).sum();
                let den: f64 = jac.iter().map(|x| x.norm_sqr()).sum();
                if den < 1e-300 {
                    break;
                }
                zeta -= num / den;
                if zeta.norm() > 1e3 {
                    break;
                }
            }
            if norm2(&riley_residual(p, q, zeta)).sqrt() < 1e-12 && !out.iter().any(|z| (z - zeta).norm() < 1e-6) {
                out.push(zeta);
            }
        }
    }
    out
}
