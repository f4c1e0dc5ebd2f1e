//! BR1 auxiliary gradient `q = grad u` with central interface values.

use rayon::prelude::*;

use crate::basis::Basis1D;
use crate::field::NodalField;
use crate::kernels::{reference_derivatives, to_physical};
use crate::mesh::{face_node, CurvilinearMesh, Geometry};

/// Physical gradient per solution point: `data[((e * nn + node) * nvar + c) * 2 + d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    nvar: usize,
    nodes_per_element: usize,
    data: Vec<f64>,
}

impl GradientField {
    pub fn zeros(nvar: usize, nodes_per_element: usize, n_elements: usize) -> Self {
        Self {
            nvar,
            nodes_per_element,
            data: vec![0.0; 2 * nvar * nodes_per_element * n_elements],
        }
    }

    pub fn nvar(&self) -> usize {
        self.nvar
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn element(&self, e: usize) -> &[f64] {
        let s = 2 * self.nvar * self.nodes_per_element;
        &self.data[e * s..(e + 1) * s]
    }

    /// The `nvar x 2` gradient at one node.
    pub fn node(&self, e: usize, node: usize) -> &[f64] {
        let o = 2 * (e * self.nodes_per_element + node) * self.nvar;
        &self.data[o..o + 2 * self.nvar]
    }
}

/// Central interface value `u* = (u- + u+) / 2`.
#[inline]
pub fn interface_solution_average(minus: &[f64], plus: &[f64], out: &mut [f64]) {
    for ((o, a), b) in out.iter_mut().zip(minus).zip(plus) {
        *o = 0.5 * (a + b);
    }
}

/// Interface values `u*` at every face point, laid out `[(face * n + k) * nvar + c]`.
///
/// Interior faces average the two traces. On boundary faces `outer` receives
/// the face index, the point index and the inner trace, and must write the
/// outer trace; the result is again the average.
pub fn interface_values(
    u: &NodalField,
    mesh: &CurvilinearMesh,
    outer: impl Fn(usize, usize, &[f64], &mut [f64]) + Sync,
) -> Vec<f64> {
    let n = mesh.degree() + 1;
    let nvar = u.nvar();
    let mut out = vec![0.0; mesh.faces().len() * n * nvar];
    out.par_chunks_mut(n * nvar)
        .zip(mesh.faces().par_iter())
        .enumerate()
        .for_each(|(f, (dst, face))| {
            let (ms, ps) = (2 * face.direction + 1, 2 * face.direction);
            let mut ghost = [0.0; crate::equations::MAX_NVAR];
            for k in 0..n {
                let o = &mut dst[k * nvar..(k + 1) * nvar];
                match (face.minus, face.plus) {
                    (Some(m), Some(p)) => interface_solution_average(
                        u.node(m, face_node(n, ms, k)),
                        u.node(p, face_node(n, ps, k)),
                        o,
                    ),
                    (Some(m), None) => {
                        let inner = u.node(m, face_node(n, ms, k));
                        outer(f, k, inner, &mut ghost[..nvar]);
                        interface_solution_average(inner, &ghost[..nvar], o);
                    }
                    (None, Some(p)) => {
                        let inner = u.node(p, face_node(n, ps, k));
                        outer(f, k, inner, &mut ghost[..nvar]);
                        interface_solution_average(&ghost[..nvar], inner, o);
                    }
                    (None, None) => unreachable!(),
                }
            }
        });
    out
}

/// BR1 gradient of `u` given interface values from [`interface_values`].
pub fn compute_auxiliary_gradient(
    u: &NodalField,
    mesh: &CurvilinearMesh,
    geometry: &Geometry,
    basis: &Basis1D,
    ustar: &[f64],
) -> GradientField {
    let n = basis.len();
    let nn = n * n;
    let nvar = u.nvar();
    let mut q = GradientField::zeros(nvar, nn, mesh.n_elements());
    let (dgl, dgr) = (basis.dg_left(), basis.dg_right());
    q.data
        .par_chunks_mut(2 * nn * nvar)
        .enumerate()
        .for_each_init(
            || (vec![0.0; nn * nvar], vec![0.0; nn * nvar]),
            |(dxi, deta), (e, out)| {
                let ue = u.element(e);
                reference_derivatives(n, nvar, basis.dmat(), ue, dxi, deta);
                let faces = mesh.element_faces()[e];
                for k in 0..n {
                    let star = |slot: usize, c: usize| ustar[(faces[slot] * n + k) * nvar + c];
                    for c in 0..nvar {
                        // xi-direction: row j = k
                        let jl = ue[face_node(n, 0, k) * nvar + c];
                        let jr = ue[face_node(n, 1, k) * nvar + c];
                        let (sl, sr) = (star(0, c) - jl, star(1, c) - jr);
                        // eta-direction: column i = k
                        let il = ue[face_node(n, 2, k) * nvar + c];
                        let ir = ue[face_node(n, 3, k) * nvar + c];
                        let (tl, tr) = (star(2, c) - il, star(3, c) - ir);
                        for m in 0..n {
                            dxi[(k * n + m) * nvar + c] += sl * dgl[m] + sr * dgr[m];
                            deta[(m * n + k) * nvar + c] += tl * dgl[m] + tr * dgr[m];
                        }
                    }
                }
                to_physical(
                    nvar,
                    dxi,
                    deta,
                    geometry.element_metric(e),
                    geometry.element_jacobian(e),
                    out,
                );
            },
        );
    q
}
