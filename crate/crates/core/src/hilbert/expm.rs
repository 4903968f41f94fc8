//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! (degree selection after Higham, SIAM J. Matrix Anal. Appl. 26 (2005)).

use num_traits::{One, Zero};

use super::matrix::OperatorMatrix;
use crate::scalar::{cr, Real, C};

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
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
const THETA: [f64; 5] =
    [1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1, 2.097847961257068, 5.371920351148152];

pub(crate) fn expm<T: Real>(a: &OperatorMatrix<T>) -> OperatorMatrix<T> {
    let space = a.space();
    let ident = OperatorMatrix::identity(space);
    let norm = a.norm_one().as_f64();
    if norm == 0.0 {
        return ident;
    }

    let low: [(&[f64], f64); 4] = [(&B3, THETA[0]), (&B5, THETA[1]), (&B7, THETA[2]), (&B9, THETA[3])];
    for (b, theta) in low {
        if norm <= theta {
            let (u, v) = pade_low(a, b, &ident);
            return solve_pade(&u, &v);
        }
    }

    let s = (norm / THETA[4]).log2().ceil().max(0.0) as i32;
    let a = a.scale_real(T::of(0.5f64.powi(s)));
    let (u, v) = pade13(&a, &ident);
    let mut r = solve_pade(&u, &v);
    for _ in 0..s {
        r = r.matmul(&r);
    }
    r
}

fn pade_low<T: Real>(
    a: &OperatorMatrix<T>,
    b: &[f64],
    ident: &OperatorMatrix<T>,
) -> (OperatorMatrix<T>, OperatorMatrix<T>) {
    let a2 = a.matmul(a);
    let mut odd = ident.scale_real(T::of(b[1]));
    let mut even = ident.scale_real(T::of(b[0]));
    let mut pow = a2.clone();
    let mut k = 2;
    while k < b.len() {
        even.add_scaled(cr(T::of(b[k])), &pow);
        odd.add_scaled(cr(T::of(b[k + 1])), &pow);
        k += 2;
        if k < b.len() {
            pow = pow.matmul(&a2);
        }
    }
    (a.matmul(&odd), even)
}

fn pade13<T: Real>(a: &OperatorMatrix<T>, ident: &OperatorMatrix<T>) -> (OperatorMatrix<T>, OperatorMatrix<T>) {
    let b = |i: usize| cr(T::of(B13[i]));
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let mut inner_u = a6.scale(b(13));
    inner_u.add_scaled(b(11), &a4);
    inner_u.add_scaled(b(9), &a2);
    let mut u = a6.matmul(&inner_u);
    u.add_scaled(b(7), &a6);
    u.add_scaled(b(5), &a4);
    u.add_scaled(b(3), &a2);
    u.add_scaled(b(1), ident);
    let u = a.matmul(&u);

    let mut inner_v = a6.scale(b(12));
    inner_v.add_scaled(b(10), &a4);
    inner_v.add_scaled(b(8), &a2);
    let mut v = a6.matmul(&inner_v);
    v.add_scaled(b(6), &a6);
    v.add_scaled(b(4), &a4);
    v.add_scaled(b(2), &a2);
    v.add_scaled(b(0), ident);
    (u, v)
}

/// Solves `(V - U) X = (V + U)`.
fn solve_pade<T: Real>(u: &OperatorMatrix<T>, v: &OperatorMatrix<T>) -> OperatorMatrix<T> {
    let p = v - u;
    let q = v + u;
    solve(&p, &q)
}

/// Dense LU solve with partial pivoting, `A X = B` for square `B`.
pub(crate) fn solve<T: Real>(a: &OperatorMatrix<T>, b: &OperatorMatrix<T>) -> OperatorMatrix<T> {
    let d = a.dim();
    let mut lu: Vec<C<T>> = a.entries().to_vec();
    let mut x: Vec<C<T>> = b.entries().to_vec();

    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&i, &j| lu[i * d + col].norm().partial_cmp(&lu[j * d + col].norm()).unwrap())
            .unwrap();
        if pivot != col {
            for k in 0..d {
                lu.swap(col * d + k, pivot * d + k);
                x.swap(col * d + k, pivot * d + k);
            }
        }
        let diag = lu[col * d + col];
        assert!(!diag.is_zero(), "singular Padé denominator");
        let inv = C::<T>::one() / diag;
        for row in col + 1..d {
            let f = lu[row * d + col] * inv;
            if f.is_zero() {
                continue;
            }
            lu[row * d + col] = f;
            for k in col + 1..d {
                let t = lu[col * d + k];
                lu[row * d + k] -= f * t;
            }
            for k in 0..d {
                let t = x[col * d + k];
                x[row * d + k] -= f * t;
            }
        }
    }
    for col in (0..d).rev() {
        let inv = C::<T>::one() / lu[col * d + col];
        for k in 0..d {
            let mut acc = x[col * d + k];
            for j in col + 1..d {
                acc -= lu[col * d + j] * x[j * d + k];
            }
            x[col * d + k] = acc * inv;
        }
    }
    OperatorMatrix::from_entries(a.space(), x).expect("dimension preserved")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::space::SpaceDescriptor;
    use crate::scalar::c;

    /// Truncated Taylor series with many terms; independent of the Padé path.
    fn taylor(a: &OperatorMatrix<f64>, terms: usize) -> OperatorMatrix<f64> {
        let mut sum = OperatorMatrix::identity(a.space());
        let mut term = OperatorMatrix::identity(a.space());
        for k in 1..terms {
            term = term.matmul(a).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        sum
    }

    fn sample(space: SpaceDescriptor, scale: f64) -> OperatorMatrix<f64> {
        OperatorMatrix::from_fn(space, |i, j| {
            let x = ((i * 7 + j * 13) % 11) as f64 / 11.0 - 0.5;
            let y = ((i * 3 + j * 5) % 7) as f64 / 7.0 - 0.5;
            c(scale * x, scale * y)
        })
    }

    #[test]
    fn matches_taylor_across_degree_branches() {
        let space = SpaceDescriptor::qubits(2).unwrap();
        for scale in [1e-3, 0.05, 0.2, 0.5, 1.0, 3.0] {
            let a = sample(space, scale);
            let err = a.exp().max_abs_diff(&taylor(&a, 80));
            assert!(err < 1e-12 * (1.0 + scale.exp()), "scale {scale}: {err}");
        }
    }

    #[test]
    fn rotation_closed_form() {
        let space = SpaceDescriptor::qubits(1).unwrap();
        let theta = 7.3_f64;
        let x = OperatorMatrix::from_fn(space, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let u = x.exp_i_hermitian(theta / 2.0);
        assert!((u[(0, 0)] - c(f64::cos(theta / 2.0), 0.0)).norm() < 1e-13);
        assert!((u[(0, 1)] - c(0.0, -f64::sin(theta / 2.0))).norm() < 1e-13);
    }

    #[test]
    fn large_norm_uses_squaring() {
        let space = SpaceDescriptor::qubits(3).unwrap();
        let h = sample(space, 4.0);
        let h = &h + &h.adjoint();
        let u = h.exp_i_hermitian(3.0);
        assert!(u.unitarity_defect() < 1e-12);
        let back = u.matmul(&h.exp_i_hermitian(-3.0));
        assert!(back.max_abs_diff(&OperatorMatrix::identity(space)) < 1e-11);
    }

    #[test]
    fn f32_path() {
        let space = SpaceDescriptor::qubits(1).unwrap();
        let x = OperatorMatrix::<f32>::from_fn(space, |i, j| if i != j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let u = x.exp_i_hermitian(0.25);
        assert!((u[(0, 0)].re - 0.25f32.cos()).abs() < 1e-6);
    }
}
