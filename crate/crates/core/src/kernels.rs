//! Tensor-product collocation kernels, monomorphized over the node count per
//! direction `N` and the component count `V` so the inner loops have fixed
//! trip counts.

macro_rules! dispatch {
    ($n:expr, $nv:expr, $f:ident, $g:ident, ($($a:expr),*)) => {
        match ($n, $nv) {
            (2, 1) => $f::<2, 1>($($a),*),
            (3, 1) => $f::<3, 1>($($a),*),
            (4, 1) => $f::<4, 1>($($a),*),
            (5, 1) => $f::<5, 1>($($a),*),
            (2, 4) => $f::<2, 4>($($a),*),
            (3, 4) => $f::<3, 4>($($a),*),
            (4, 4) => $f::<4, 4>($($a),*),
            (5, 4) => $f::<5, 4>($($a),*),
            _ => $g($n, $nv, $($a),*),
        }
    };
}

/// Collocation derivatives along `xi` and `eta` of element-local nodal values
/// laid out `[node * nvar + c]`; `d` is the row-major differentiation matrix.
pub(crate) fn reference_derivatives(n: usize, nvar: usize, d: &[f64], values: &[f64], dxi: &mut [f64], deta: &mut [f64]) {
    dispatch!(n, nvar, ref_deriv, ref_deriv_dyn, (d, values, dxi, deta))
}

#[inline(always)]
fn ref_deriv<const N: usize, const V: usize>(d: &[f64], v: &[f64], dxi: &mut [f64], deta: &mut [f64]) {
    let d = &d[..N * N];
    let v = &v[..N * N * V];
    let dxi = &mut dxi[..N * N * V];
    let deta = &mut deta[..N * N * V];
    for j in 0..N {
        for i in 0..N {
            let mut ax = [0.0; V];
            let mut ay = [0.0; V];
            for l in 0..N {
                let a = d[i * N + l];
                let b = d[j * N + l];
                for c in 0..V {
                    ax[c] += a * v[(j * N + l) * V + c];
                    ay[c] += b * v[(l * N + i) * V + c];
                }
            }
            let o = (j * N + i) * V;
            dxi[o..o + V].copy_from_slice(&ax);
            deta[o..o + V].copy_from_slice(&ay);
        }
    }
}

fn ref_deriv_dyn(n: usize, nv: usize, d: &[f64], v: &[f64], dxi: &mut [f64], deta: &mut [f64]) {
    for j in 0..n {
        for i in 0..n {
            let o = (j * n + i) * nv;
            for c in 0..nv {
                let (mut ax, mut ay) = (0.0, 0.0);
                for l in 0..n {
                    ax += d[i * n + l] * v[(j * n + l) * nv + c];
                    ay += d[j * n + l] * v[(l * n + i) * nv + c];
                }
                dxi[o + c] = ax;
                deta[o + c] = ay;
            }
        }
    }
}

/// Reference divergence `d/dxi F^1 + d/deta F^2` of a contravariant flux laid
/// out `[(node * nvar + c) * 2 + i]`.
pub(crate) fn divergence(n: usize, nvar: usize, d: &[f64], flux: &[f64], out: &mut [f64]) {
    dispatch!(n, nvar, div_impl, div_dyn, (d, flux, out))
}

#[inline(always)]
fn div_impl<const N: usize, const V: usize>(d: &[f64], f: &[f64], out: &mut [f64]) {
    let d = &d[..N * N];
    let f = &f[..2 * N * N * V];
    let out = &mut out[..N * N * V];
    for j in 0..N {
        for i in 0..N {
            let mut acc = [0.0; V];
            for l in 0..N {
                let a = d[i * N + l];
                let b = d[j * N + l];
                for c in 0..V {
                    acc[c] += a * f[((j * N + l) * V + c) * 2] + b * f[((l * N + i) * V + c) * 2 + 1];
                }
            }
            let o = (j * N + i) * V;
            out[o..o + V].copy_from_slice(&acc);
        }
    }
}

fn div_dyn(n: usize, nv: usize, d: &[f64], f: &[f64], out: &mut [f64]) {
    for j in 0..n {
        for i in 0..n {
            for c in 0..nv {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += d[i * n + l] * f[((j * n + l) * nv + c) * 2] + d[j * n + l] * f[((l * n + i) * nv + c) * 2 + 1];
                }
                out[(j * n + i) * nv + c] = acc;
            }
        }
    }
}

/// `grad u = (Ja^1 u_xi + Ja^2 u_eta) / J` nodewise into the `nvar x 2` layout.
pub(crate) fn to_physical(nvar: usize, dxi: &[f64], deta: &[f64], metric: &[[f64; 4]], jac: &[f64], out: &mut [f64]) {
    for (p, (m, j)) in metric.iter().zip(jac).enumerate() {
        let inv = 1.0 / j;
        let a = &dxi[p * nvar..(p + 1) * nvar];
        let b = &deta[p * nvar..(p + 1) * nvar];
        let o = &mut out[2 * p * nvar..2 * (p + 1) * nvar];
        for c in 0..nvar {
            o[2 * c] = (m[0] * a[c] + m[2] * b[c]) * inv;
            o[2 * c + 1] = (m[1] * a[c] + m[3] * b[c]) * inv;
        }
    }
}
