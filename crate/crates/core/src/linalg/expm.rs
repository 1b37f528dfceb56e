//! Matrix exponential by scaling-and-squaring with diagonal Pade
//! approximants, order selection via the usual 1-norm thresholds.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::LinalgError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Inputs with 1-norm above this cap are rejected as [`LinalgError::OverflowRisk`].
pub const EXPM_NORM_CAP: f64 = 128.0;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential, relative accuracy around 1e-13 for well-scaled
/// inputs (`‖m‖₁ ≲ 50`).
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    m.ensure_finite()?;
    let norm = m.norm_one();
    if norm > EXPM_NORM_CAP {
        return Err(LinalgError::OverflowRisk {
            norm,
            cap: EXPM_NORM_CAP,
        });
    }

    if norm <= THETA_9 {
        let coeffs: &[f64] = if norm <= THETA_3 {
            &B3
        } else if norm <= THETA_5 {
            &B5
        } else if norm <= THETA_7 {
            &B7
        } else {
            &B9
        };
        let (u, v) = pade_low(m, coeffs);
        return pade_solve(&u, &v);
    }

    let s = ((norm / THETA_13).log2().ceil()).max(0.0) as u32;
    let scaled = m.scale(Complex64::new((0.5f64).powi(s as i32), 0.0));
    let (u, v) = pade_13(&scaled);
    let mut f = pade_solve(&u, &v)?;
    for _ in 0..s {
        f = f.mul(&f);
    }
    Ok(f)
}

/// U (odd part, pre-multiplied by A) and V (even part) for orders 3..9.
fn pade_low(a: &ComplexMatrix, b: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let a2 = a.mul(a);
    let mut even = ComplexMatrix::identity(n).scale(Complex64::new(b[0], 0.0));
    let mut odd = ComplexMatrix::identity(n).scale(Complex64::new(b[1], 0.0));
    let mut power = ComplexMatrix::identity(n);
    let mut k = 2;
    while k < b.len() {
        power = power.mul(&a2);
        even = even.add(&power.scale(Complex64::new(b[k], 0.0)));
        if k + 1 < b.len() {
            odd = odd.add(&power.scale(Complex64::new(b[k + 1], 0.0)));
        }
        k += 2;
    }
    (a.mul(&odd), even)
}

fn pade_13(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.dim();
    let b = &B13;
    let a2 = a.mul(a);
    let a4 = a2.mul(&a2);
    let a6 = a4.mul(&a2);
    let id = ComplexMatrix::identity(n);

    let w1 = a6
        .scale(re(b[13]))
        .add(&a4.scale(re(b[11])))
        .add(&a2.scale(re(b[9])));
    let w2 = a6
        .scale(re(b[7]))
        .add(&a4.scale(re(b[5])))
        .add(&a2.scale(re(b[3])))
        .add(&id.scale(re(b[1])));
    let u = a.mul(&a6.mul(&w1).add(&w2));

    let z1 = a6
        .scale(re(b[12]))
        .add(&a4.scale(re(b[10])))
        .add(&a2.scale(re(b[8])));
    let v = a6
        .mul(&z1)
        .add(&a6.scale(re(b[6])))
        .add(&a4.scale(re(b[4])))
        .add(&a2.scale(re(b[2])))
        .add(&id.scale(re(b[0])));
    (u, v)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Solve (V - U) F = (V + U).
fn pade_solve(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let denom = v.sub(u);
    let numer = v.add(u);
    lu_solve_matrix(&denom, &numer)
}

/// LU factorization with partial pivoting; solves A X = B column by column.
fn lu_solve_matrix(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let n = a.dim();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut piv = k;
        let mut piv_mag = lu[(k, k)].norm();
        for i in k + 1..n {
            let mag = lu[(i, k)].norm();
            if mag > piv_mag {
                piv_mag = mag;
                piv = i;
            }
        }
        if piv_mag == 0.0 {
            return Err(LinalgError::Singular);
        }
        if piv != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
            }
            perm.swap(k, piv);
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            for j in k + 1..n {
                let sub = factor * lu[(k, j)];
                lu[(i, j)] -= sub;
            }
        }
    }

    let mut x = ComplexMatrix::zeros(n);
    let mut col = vec![ZERO; n];
    for rhs in 0..n {
        for i in 0..n {
            col[i] = b[(perm[i], rhs)];
        }
        // forward substitution (unit lower)
        for i in 1..n {
            let mut s = col[i];
            for j in 0..i {
                s -= lu[(i, j)] * col[j];
            }
            col[i] = s;
        }
        // back substitution
        for i in (0..n).rev() {
            let mut s = col[i];
            for j in i + 1..n {
                s -= lu[(i, j)] * col[j];
            }
            col[i] = s / lu[(i, i)];
        }
        for i in 0..n {
            x[(i, rhs)] = col[i];
        }
    }
    Ok(x)
}
