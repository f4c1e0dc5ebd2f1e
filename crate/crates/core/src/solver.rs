//! Single-stage Lax-Wendroff flux reconstruction step.
//!
//! One step runs four element- or face-parallel phases:
//! the BR1 gradient, the local time-derivative ladder that builds the
//! time-averaged fluxes, the interface fluxes, and the corrected update.
//!
//! Time derivatives are kept in scaled form `d_k = dt^k d^k u / dt^k`, so the
//! time average of a quantity with scaled derivatives `D_k` is
//! `sum_k D_k / (k+1)!`. Dropping the `k = N` term of every series gives the
//! embedded lower-order update used for step-size control.

use std::sync::Arc;

use rayon::prelude::*;

use crate::basis::{gll_nodes_weights, Basis1D};
use crate::boundary::{
    boundary_flux_traces, boundary_reference_state, boundary_solution_trace, BoundaryConditions,
    BoundaryTag, FaceTrace,
};
use crate::br1::{compute_auxiliary_gradient, interface_values, GradientField};
use crate::kernels::{divergence, reference_derivatives, to_physical};
use crate::equations::{Equation, MAX_NVAR};
use crate::error::{LwfrError, Result};
use crate::field::NodalField;
use crate::mesh::{face_node, CurvilinearMesh, Geometry};

/// Source term `s(x, y, t, out)` added to the right-hand side.
pub type SourceFn = Arc<dyn Fn(f64, f64, f64, &mut [f64]) + Send + Sync>;

const FACTORIAL: [f64; 7] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0];

/// D2 Rusanov flux on time-averaged data.
///
/// `minus` lies behind the face with respect to the face direction. Fluxes are
/// normal components scaled by the same surface factor as `lambda_scaled`.
#[inline]
pub fn rusanov_timeavg_flux(
    flux_minus: &[f64],
    flux_plus: &[f64],
    u_minus: &[f64],
    u_plus: &[f64],
    lambda_scaled: f64,
    out: &mut [f64],
) {
    for c in 0..out.len() {
        out[c] = 0.5 * (flux_minus[c] + flux_plus[c]) - 0.5 * lambda_scaled * (u_plus[c] - u_minus[c]);
    }
}

/// Central flux for the viscous part.
#[inline]
pub fn central_viscous_flux(flux_minus: &[f64], flux_plus: &[f64], out: &mut [f64]) {
    for c in 0..out.len() {
        out[c] = 0.5 * (flux_minus[c] + flux_plus[c]);
    }
}

/// Symmetric finite-difference stencils for the scaled flux derivatives.
///
/// Entry `k` lists `(m, weight)` pairs: `D_k = sum weight * f(T(m))` with the
/// Taylor state `T(m) = sum_{j <= k} m^j d_j / j!`. Each stencil is accurate
/// enough that the time average keeps order `N + 1`.
pub fn time_stencils(degree: usize) -> Vec<Vec<(i32, f64)>> {
    let first_2 = vec![(1, 0.5), (-1, -0.5)];
    let first_4 = vec![(2, -1.0 / 12.0), (1, 8.0 / 12.0), (-1, -8.0 / 12.0), (-2, 1.0 / 12.0)];
    let second_2 = vec![(1, 1.0), (0, -2.0), (-1, 1.0)];
    let second_4 = vec![
        (2, -1.0 / 12.0),
        (1, 16.0 / 12.0),
        (0, -30.0 / 12.0),
        (-1, 16.0 / 12.0),
        (-2, -1.0 / 12.0),
    ];
    let third = vec![(2, 0.5), (1, -1.0), (-1, 1.0), (-2, -0.5)];
    let fourth = vec![(2, 1.0), (1, -4.0), (0, 6.0), (-1, -4.0), (-2, 1.0)];
    let mut s = vec![vec![(0, 1.0)]];
    match degree {
        1 => s.push(first_2),
        2 => s.extend([first_2, second_2]),
        3 => s.extend([first_4, second_2, third]),
        _ => s.extend([first_4, second_4, third, fourth]),
    }
    s
}

/// Element-local time-averaged quantities of one step.
///
/// Fluxes are contravariant with layout `[(node * nvar + c) * 2 + i]`,
/// solution-like data `[node * nvar + c]`. Every quantity also has its
/// highest-order term stored separately.
#[derive(Debug, Clone)]
pub struct TimeAveragedData {
    nvar: usize,
    nn: usize,
    data: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Advective,
    Viscous,
    AdvectiveTop,
    ViscousTop,
    Solution,
    SolutionTop,
    Source,
    SourceTop,
}

impl TimeAveragedData {
    fn stride(nvar: usize, nn: usize) -> usize {
        12 * nvar * nn
    }

    fn range(&self, e: usize, part: Part) -> std::ops::Range<usize> {
        let f = 2 * self.nvar * self.nn;
        let s = self.nvar * self.nn;
        let (o, len) = match part {
            Part::Advective => (0, f),
            Part::Viscous => (f, f),
            Part::AdvectiveTop => (2 * f, f),
            Part::ViscousTop => (3 * f, f),
            Part::Solution => (4 * f, s),
            Part::SolutionTop => (4 * f + s, s),
            Part::Source => (4 * f + 2 * s, s),
            Part::SourceTop => (4 * f + 3 * s, s),
        };
        let base = e * Self::stride(self.nvar, self.nn) + o;
        base..base + len
    }

    fn part(&self, e: usize, part: Part) -> &[f64] {
        &self.data[self.range(e, part)]
    }

    /// Time-averaged contravariant advective flux of element `e`.
    pub fn advective(&self, e: usize) -> &[f64] {
        self.part(e, Part::Advective)
    }

    /// Time-averaged contravariant viscous flux of element `e`.
    pub fn viscous(&self, e: usize) -> &[f64] {
        self.part(e, Part::Viscous)
    }

    /// Combined flux `F = F^a - F^v` at one node and direction.
    pub fn flux(&self, e: usize, node: usize, c: usize, dir: usize) -> f64 {
        let i = (node * self.nvar + c) * 2 + dir;
        self.advective(e)[i] - self.viscous(e)[i]
    }

    pub fn advective_top(&self, e: usize) -> &[f64] {
        self.part(e, Part::AdvectiveTop)
    }

    pub fn viscous_top(&self, e: usize) -> &[f64] {
        self.part(e, Part::ViscousTop)
    }

    /// Time-averaged solution `U`.
    pub fn solution(&self, e: usize) -> &[f64] {
        self.part(e, Part::Solution)
    }

    pub fn solution_top(&self, e: usize) -> &[f64] {
        self.part(e, Part::SolutionTop)
    }

    /// Time-averaged source term.
    pub fn source(&self, e: usize) -> &[f64] {
        self.part(e, Part::Source)
    }

    pub fn source_top(&self, e: usize) -> &[f64] {
        self.part(e, Part::SourceTop)
    }
}

/// Both updates of one step.
#[derive(Debug, Clone)]
pub struct StepOutput {
    /// Full-order solution at `t + dt`.
    pub solution: NodalField,
    /// Embedded solution from the truncated time averages.
    pub embedded: NodalField,
}

struct Scratch {
    d: Vec<Vec<f64>>,
    g: Vec<Vec<f64>>,
    src: Vec<Vec<f64>>,
    samples: Vec<Vec<f64>>,
    fa0: Vec<f64>,
    fv0: Vec<f64>,
    ca: Vec<f64>,
    cv: Vec<f64>,
    dxi: Vec<f64>,
    deta: Vec<f64>,
}

impl Scratch {
    fn new(levels: usize, nn: usize, nvar: usize) -> Self {
        let s = nn * nvar;
        Self {
            d: vec![vec![0.0; s]; levels],
            g: vec![vec![0.0; 2 * s]; levels],
            src: vec![vec![0.0; s]; levels],
            samples: vec![vec![0.0; s]; levels],
            fa0: vec![0.0; 2 * s],
            fv0: vec![0.0; 2 * s],
            ca: vec![0.0; 2 * s],
            cv: vec![0.0; 2 * s],
            dxi: vec![0.0; s],
            deta: vec![0.0; s],
        }
    }
}

/// Lax-Wendroff flux reconstruction solver for one equation system on one mesh.
pub struct LwfrSolver<E: Equation> {
    eq: E,
    basis: Basis1D,
    mesh: CurvilinearMesh,
    geometry: Geometry,
    boundary: BoundaryConditions,
    source: Option<SourceFn>,
    stencils: Vec<Vec<(i32, f64)>>,
    /// `(m^j / j!)` for `m = -2..=2`, indexed `[m + 2][j]`.
    taylor: [[f64; 6]; 5],
    /// Sample times in `[0, 1]` with weights summing to one.
    time_rule: Vec<(f64, f64)>,
    /// Maps samples at `time_rule` nodes to scaled derivatives `k! b_k`.
    derivative_weights: Vec<Vec<f64>>,
    face_xy: Vec<Vec<[f64; 2]>>,
}

impl<E: Equation> LwfrSolver<E> {
    pub fn new(
        eq: E,
        mesh: CurvilinearMesh,
        basis: Basis1D,
        boundary: BoundaryConditions,
        source: Option<SourceFn>,
    ) -> Result<Self> {
        if mesh.degree() != basis.degree() {
            return Err(LwfrError::Config(format!(
                "mesh built for degree {} but basis has degree {}",
                mesh.degree(),
                basis.degree()
            )));
        }
        if eq.nvar() > MAX_NVAR {
            return Err(LwfrError::Config(format!("at most {MAX_NVAR} components supported")));
        }
        boundary.validate(&eq, mesh.periodic())?;
        let geometry = Geometry::compute(&mesh, &basis)?;
        let degree = basis.degree();
        let n = basis.len();

        let mut taylor = [[0.0; 6]; 5];
        for (mi, row) in taylor.iter_mut().enumerate() {
            let m = mi as f64 - 2.0;
            for (j, v) in row.iter_mut().enumerate() {
                *v = m.powi(j as i32) / FACTORIAL[j];
            }
        }

        let (nodes, weights) = gll_nodes_weights(degree);
        let time_rule: Vec<(f64, f64)> = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        let vander: Vec<Vec<f64>> = time_rule
            .iter()
            .map(|(th, _)| (0..n).map(|k| th.powi(k as i32)).collect())
            .collect();
        let inv = invert(vander);
        let derivative_weights = (0..n)
            .map(|k| (0..n).map(|j| FACTORIAL[k] * inv[k][j]).collect())
            .collect();

        let face_xy = mesh
            .faces()
            .iter()
            .map(|face| {
                let (e, slot) = match face.minus {
                    Some(m) => (m, 2 * face.direction + 1),
                    None => (face.plus.expect("face without elements"), 2 * face.direction),
                };
                (0..n).map(|k| mesh.element_coords(e)[face_node(n, slot, k)]).collect()
            })
            .collect();

        Ok(Self {
            eq,
            stencils: time_stencils(degree),
            basis,
            mesh,
            geometry,
            boundary,
            source,
            taylor,
            time_rule,
            derivative_weights,
            face_xy,
        })
    }

    pub fn equation(&self) -> &E {
        &self.eq
    }

    pub fn basis(&self) -> &Basis1D {
        &self.basis
    }

    pub fn mesh(&self) -> &CurvilinearMesh {
        &self.mesh
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn boundary(&self) -> &BoundaryConditions {
        &self.boundary
    }

    pub fn degree(&self) -> usize {
        self.basis.degree()
    }

    fn face_tag(&self, face: usize) -> &BoundaryTag {
        let side = self.mesh.faces()[face].boundary.expect("exterior face");
        self.boundary.tag(side)
    }

    /// Samples `f(x, y)` at the solution points.
    pub fn project(&self, f: impl FnMut(f64, f64, &mut [f64])) -> NodalField {
        NodalField::from_fn(&self.mesh, self.eq.nvar(), f)
    }

    /// BR1 gradient of `u` at time `t`.
    pub fn gradient(&self, u: &NodalField, t: f64) -> GradientField {
        let ustar = interface_values(u, &self.mesh, |f, k, inner, out| {
            let [x, y] = self.face_xy[f][k];
            boundary_solution_trace(&self.eq, self.face_tag(f), inner, x, y, t, out)
                .expect("boundary tags validated at construction");
        });
        compute_auxiliary_gradient(u, &self.mesh, &self.geometry, &self.basis, &ustar)
    }

    /// Element-local time averages via the approximate Lax-Wendroff procedure.
    pub fn time_averaged_data(&self, u: &NodalField, t: f64, dt: f64) -> Result<TimeAveragedData> {
        let nvar = self.eq.nvar();
        let n = self.basis.len();
        let nn = n * n;
        let q = if self.eq.is_viscous() {
            Some(self.gradient(u, t))
        } else {
            None
        };
        let mut tav = TimeAveragedData {
            nvar,
            nn,
            data: vec![0.0; TimeAveragedData::stride(nvar, nn) * self.mesh.n_elements()],
        };
        let status: Vec<std::result::Result<(), (usize, &'static str)>> = tav
            .data
            .par_chunks_mut(TimeAveragedData::stride(nvar, nn))
            .enumerate()
            .map_init(
                || Scratch::new(n, nn, nvar),
                |sc, (e, out)| {
                    let qe = q.as_ref().map(|q| q.element(e));
                    self.element_ladder(e, u.element(e), qe, t, dt, sc, out)
                },
            )
            .collect();
        for (e, s) in status.into_iter().enumerate() {
            if let Err((node, message)) = s {
                return Err(LwfrError::State {
                    element: e,
                    node,
                    message: message.into(),
                });
            }
        }
        Ok(tav)
    }

    #[allow(clippy::too_many_arguments)]
    fn element_ladder(
        &self,
        e: usize,
        ue: &[f64],
        qe: Option<&[f64]>,
        t: f64,
        dt: f64,
        sc: &mut Scratch,
        out: &mut [f64],
    ) -> std::result::Result<(), (usize, &'static str)> {
        let eq = &self.eq;
        let nvar = eq.nvar();
        let degree = self.basis.degree();
        let n = degree + 1;
        let nn = n * n;
        let s = nn * nvar;
        let f = 2 * s;
        let viscous = qe.is_some();
        let linear = eq.is_linear();
        let metric = self.geometry.element_metric(e);
        let jac = self.geometry.element_jacobian(e);

        out.fill(0.0);
        let (fluxes, rest) = out.split_at_mut(4 * f);
        let (a_sum, rest_f) = fluxes.split_at_mut(f);
        let (v_sum, rest_f) = rest_f.split_at_mut(f);
        let (a_top, v_top) = rest_f.split_at_mut(f);
        let (u_sum, rest) = rest.split_at_mut(s);
        let (u_top, rest) = rest.split_at_mut(s);
        let (s_sum, s_top) = rest.split_at_mut(s);

        sc.d[0].copy_from_slice(ue);
        if let Some(q) = qe {
            sc.g[0].copy_from_slice(q);
        }

        if let Some(src) = &self.source {
            let xy = self.mesh.element_coords(e);
            for (j, &(theta, _)) in self.time_rule.iter().enumerate() {
                for (p, pt) in xy.iter().enumerate() {
                    src(pt[0], pt[1], t + theta * dt, &mut sc.samples[j][p * nvar..(p + 1) * nvar]);
                }
            }
            for k in 0..n {
                let w = &self.derivative_weights[k];
                let dst = &mut sc.src[k];
                dst.fill(0.0);
                for (j, wj) in w.iter().enumerate() {
                    for (o, v) in dst.iter_mut().zip(&sc.samples[j]) {
                        *o += wj * v;
                    }
                }
            }
        }

        let mut st = [0.0; MAX_NVAR];
        let mut gr = [0.0; 2 * MAX_NVAR];
        let mut fa = [0.0; 2 * MAX_NVAR];
        let mut fv = [0.0; 2 * MAX_NVAR];
        let mut acc_a = [0.0; 2 * MAX_NVAR];
        let mut acc_v = [0.0; 2 * MAX_NVAR];

        for k in 0..=degree {
            // physical flux derivative D_k at each node, then contravariant
            for p in 0..nn {
                let r = p * nvar..(p + 1) * nvar;
                let r2 = 2 * p * nvar..2 * (p + 1) * nvar;
                if k == 0 {
                    eq.check_state(&ue[r.clone()]).map_err(|m| (p, m))?;
                    eq.advective_flux(&ue[r.clone()], &mut sc.fa0[r2.clone()]);
                    if let Some(q) = qe {
                        eq.viscous_flux(&ue[r.clone()], &q[r2.clone()], &mut sc.fv0[r2.clone()]);
                    }
                    acc_a[..2 * nvar].copy_from_slice(&sc.fa0[r2.clone()]);
                    acc_v[..2 * nvar].copy_from_slice(&sc.fv0[r2.clone()]);
                } else if linear {
                    eq.advective_flux(&sc.d[k][r.clone()], &mut acc_a[..2 * nvar]);
                    if viscous {
                        eq.viscous_flux(&sc.d[k][r.clone()], &sc.g[k][r2.clone()], &mut acc_v[..2 * nvar]);
                    }
                } else {
                    acc_a[..2 * nvar].fill(0.0);
                    acc_v[..2 * nvar].fill(0.0);
                    for &(m, w) in &self.stencils[k] {
                        if m == 0 {
                            for i in 0..2 * nvar {
                                acc_a[i] += w * sc.fa0[r2.start + i];
                                acc_v[i] += w * sc.fv0[r2.start + i];
                            }
                            continue;
                        }
                        let tc = &self.taylor[(m + 2) as usize];
                        for c in 0..nvar {
                            let mut v = 0.0;
                            for (j, dj) in sc.d[..=k].iter().enumerate() {
                                v += tc[j] * dj[r.start + c];
                            }
                            st[c] = v;
                        }
                        eq.check_state(&st[..nvar]).map_err(|m| (p, m))?;
                        eq.advective_flux(&st[..nvar], &mut fa[..2 * nvar]);
                        for i in 0..2 * nvar {
                            acc_a[i] += w * fa[i];
                        }
                        if viscous {
                            for i in 0..2 * nvar {
                                let mut v = 0.0;
                                for (j, gj) in sc.g[..=k].iter().enumerate() {
                                    v += tc[j] * gj[r2.start + i];
                                }
                                gr[i] = v;
                            }
                            eq.viscous_flux(&st[..nvar], &gr[..2 * nvar], &mut fv[..2 * nvar]);
                            for i in 0..2 * nvar {
                                acc_v[i] += w * fv[i];
                            }
                        }
                    }
                }
                let m = metric[p];
                for c in 0..nvar {
                    let (ax, ay) = (acc_a[2 * c], acc_a[2 * c + 1]);
                    sc.ca[r2.start + 2 * c] = m[0] * ax + m[1] * ay;
                    sc.ca[r2.start + 2 * c + 1] = m[2] * ax + m[3] * ay;
                    if viscous {
                        let (vx, vy) = (acc_v[2 * c], acc_v[2 * c + 1]);
                        sc.cv[r2.start + 2 * c] = m[0] * vx + m[1] * vy;
                        sc.cv[r2.start + 2 * c + 1] = m[2] * vx + m[3] * vy;
                    }
                }
            }

            let wk = 1.0 / FACTORIAL[k + 1];
            for i in 0..f {
                a_sum[i] += wk * sc.ca[i];
            }
            if viscous {
                for i in 0..f {
                    v_sum[i] += wk * sc.cv[i];
                }
            }
            for i in 0..s {
                u_sum[i] += wk * sc.d[k][i];
            }
            if self.source.is_some() {
                for i in 0..s {
                    s_sum[i] += wk * sc.src[k][i];
                }
            }
            if k == degree {
                for i in 0..f {
                    a_top[i] = wk * sc.ca[i];
                }
                if viscous {
                    for i in 0..f {
                        v_top[i] = wk * sc.cv[i];
                    }
                }
                for i in 0..s {
                    u_top[i] = wk * sc.d[k][i];
                }
                if self.source.is_some() {
                    for i in 0..s {
                        s_top[i] = wk * sc.src[k][i];
                    }
                }
                break;
            }

            // next level: d_{k+1} = dt (-(1/J) div C_k + S_k)
            if viscous {
                for i in 0..f {
                    sc.ca[i] -= sc.cv[i];
                }
            }
            let next = &mut sc.d[k + 1];
            divergence(n, nvar, self.basis.dmat(), &sc.ca, next);
            for p in 0..nn {
                let inv = -dt / jac[p];
                for c in 0..nvar {
                    next[p * nvar + c] *= inv;
                }
            }
            if self.source.is_some() {
                for (o, v) in next.iter_mut().zip(&sc.src[k]) {
                    *o += dt * v;
                }
            }
            if viscous {
                reference_derivatives(n, nvar, self.basis.dmat(), &sc.d[k + 1], &mut sc.dxi, &mut sc.deta);
                to_physical(nvar, &sc.dxi, &sc.deta, metric, jac, &mut sc.g[k + 1]);
            }
        }
        Ok(())
    }

    /// Numerical fluxes at every face point for the full and truncated series.
    ///
    /// Layout per face: `n * nvar` full-order values followed by `n * nvar`
    /// embedded values, all along the `+xi_i` direction of the face.
    pub fn interface_fluxes(&self, u: &NodalField, tav: &TimeAveragedData, t: f64, dt: f64) -> Result<Vec<f64>> {
        let nvar = self.eq.nvar();
        let n = self.basis.len();
        let stride = 2 * n * nvar;
        let mut out = vec![0.0; self.mesh.faces().len() * stride];
        let status: Vec<Result<()>> = out
            .par_chunks_mut(stride)
            .enumerate()
            .map(|(f, dst)| self.face_flux(f, u, tav, t, dt, dst))
            .collect();
        status.into_iter().collect::<Result<Vec<()>>>()?;
        Ok(out)
    }

    fn inner_trace(&self, tav: &TimeAveragedData, e: usize, node: usize, dir: usize, low: bool) -> FaceTrace {
        let nvar = self.eq.nvar();
        let mut tr = FaceTrace::default();
        let (a, v, u) = (tav.advective(e), tav.viscous(e), tav.solution(e));
        let (at, vt, ut) = (tav.advective_top(e), tav.viscous_top(e), tav.solution_top(e));
        for c in 0..nvar {
            let i = (node * nvar + c) * 2 + dir;
            let j = node * nvar + c;
            tr.advective[c] = a[i];
            tr.viscous[c] = v[i];
            tr.solution[c] = u[j];
            if low {
                tr.advective[c] -= at[i];
                tr.viscous[c] -= vt[i];
                tr.solution[c] -= ut[j];
            }
        }
        tr
    }

    fn face_flux(&self, f: usize, u: &NodalField, tav: &TimeAveragedData, t: f64, dt: f64, dst: &mut [f64]) -> Result<()> {
        let nvar = self.eq.nvar();
        let n = self.basis.len();
        let face = &self.mesh.faces()[f];
        let dir = face.direction;
        let (ms, ps) = (2 * dir + 1, 2 * dir);
        let normals = self.geometry.face_normals(f);
        let scales = self.geometry.face_scale(f);
        let mut ghost = [0.0; MAX_NVAR];
        let (full, low) = dst.split_at_mut(n * nvar);
        for k in 0..n {
            let normal = normals[k];
            let s = scales[k];
            let ja = [normal[0] * s, normal[1] * s];
            let [x, y] = self.face_xy[f][k];
            // traces and level-n states, minus then plus
            let mut sides = [[FaceTrace::default(); 2]; 2];
            let mut states = [[0.0; MAX_NVAR]; 2];
            let mut inner_side = None;
            for (slot_i, (elem, slot)) in [(face.minus, ms), (face.plus, ps)].into_iter().enumerate() {
                if let Some(e) = elem {
                    let node = face_node(n, slot, k);
                    sides[0][slot_i] = self.inner_trace(tav, e, node, dir, false);
                    sides[1][slot_i] = self.inner_trace(tav, e, node, dir, true);
                    states[slot_i][..nvar].copy_from_slice(u.node(e, node));
                    inner_side = Some(slot_i);
                }
            }
            if face.minus.is_none() || face.plus.is_none() {
                let i = inner_side.expect("face without elements");
                let o = 1 - i;
                let tag = self.face_tag(f);
                for order in 0..2 {
                    sides[order][o] = boundary_flux_traces(
                        &self.eq,
                        tag,
                        &sides[order][i],
                        ja,
                        x,
                        y,
                        t,
                        dt,
                        &self.time_rule,
                        nvar,
                    )?;
                }
                boundary_reference_state(&self.eq, tag, &states[i][..nvar], x, y, t, &mut ghost[..nvar])?;
                states[o] = ghost;
            }
            let lambda = self.eq.wave_speed(&states[0][..nvar], &states[1][..nvar], normal) * s;
            for (order, target) in [(0, &mut *full), (1, &mut *low)] {
                let [m, p] = &sides[order];
                let o = &mut target[k * nvar..(k + 1) * nvar];
                let mut visc = [0.0; MAX_NVAR];
                rusanov_timeavg_flux(&m.advective, &p.advective, &m.solution, &p.solution, lambda, o);
                central_viscous_flux(&m.viscous[..nvar], &p.viscous[..nvar], &mut visc[..nvar]);
                for c in 0..nvar {
                    o[c] -= visc[c];
                }
            }
        }
        Ok(())
    }

    /// Corrected update of every element from the time averages and interface fluxes.
    pub fn lwfr_update(&self, u: &NodalField, tav: &TimeAveragedData, fstar: &[f64], dt: f64) -> Result<StepOutput> {
        let nvar = self.eq.nvar();
        let n = self.basis.len();
        let nn = n * n;
        let mut high = u.clone();
        let mut low = u.clone();
        let status: Vec<std::result::Result<(), (usize, &'static str)>> = high
            .data_mut()
            .par_chunks_mut(nn * nvar)
            .zip(low.data_mut().par_chunks_mut(nn * nvar))
            .enumerate()
            .map_init(
                || (vec![0.0; nn * nvar], vec![0.0; 2 * nn * nvar]),
                |(res, flux), (e, (hi, lo))| {
                    let jac = self.geometry.element_jacobian(e);
                    for (order, target) in [(0usize, hi), (1, lo)] {
                        self.element_residual(e, tav, fstar, order == 1, flux, res);
                        let (sbar, stop) = (tav.source(e), tav.source_top(e));
                        for p in 0..nn {
                            let inv = dt / jac[p];
                            for c in 0..nvar {
                                let i = p * nvar + c;
                                let mut src = sbar[i];
                                if order == 1 {
                                    src -= stop[i];
                                }
                                target[i] += -inv * res[i] + dt * src;
                            }
                        }
                        if order == 0 {
                            for p in 0..nn {
                                self.eq.check_state(&target[p * nvar..(p + 1) * nvar]).map_err(|m| (p, m))?;
                            }
                        }
                    }
                    Ok(())
                },
            )
            .collect();
        for (e, s) in status.into_iter().enumerate() {
            if let Err((node, message)) = s {
                return Err(LwfrError::State {
                    element: e,
                    node,
                    message: message.into(),
                });
            }
        }
        Ok(StepOutput {
            solution: high,
            embedded: low,
        })
    }

    /// `div F + corrections` at every node of element `e`; `flux` is scratch space.
    fn element_residual(&self, e: usize, tav: &TimeAveragedData, fstar: &[f64], low: bool, flux: &mut [f64], res: &mut [f64]) {
        let nvar = self.eq.nvar();
        let n = self.basis.len();
        let (a, v) = (tav.advective(e), tav.viscous(e));
        for ((f, x), y) in flux.iter_mut().zip(a).zip(v) {
            *f = x - y;
        }
        if low {
            for ((f, x), y) in flux.iter_mut().zip(tav.advective_top(e)).zip(tav.viscous_top(e)) {
                *f -= x - y;
            }
        }
        divergence(n, nvar, self.basis.dmat(), flux, res);
        let (dgl, dgr) = (self.basis.dg_left(), self.basis.dg_right());
        let faces = self.mesh.element_faces()[e];
        let stride = 2 * n * nvar;
        let shift = if low { n * nvar } else { 0 };
        for slot in 0..4 {
            let dir = slot / 2;
            let dg = if slot % 2 == 0 { dgl } else { dgr };
            let fs = &fstar[faces[slot] * stride + shift..];
            for k in 0..n {
                let node = face_node(n, slot, k);
                for c in 0..nvar {
                    let jump = fs[k * nvar + c] - flux[(node * nvar + c) * 2 + dir];
                    for (m, g) in dg.iter().enumerate() {
                        let target = if dir == 0 { k * n + m } else { m * n + k };
                        res[target * nvar + c] += jump * g;
                    }
                }
            }
        }
    }

    /// One full step from `t` to `t + dt`. The input is never modified, so a
    /// failed step leaves the caller's state intact.
    pub fn take_step(&self, u: &NodalField, t: f64, dt: f64) -> Result<StepOutput> {
        let tav = self.time_averaged_data(u, t, dt)?;
        let fstar = self.interface_fluxes(u, &tav, t, dt)?;
        self.lwfr_update(u, &tav, &fstar, dt)
    }
}

/// Gauss-Jordan inverse of a small well-conditioned matrix.
fn invert(mut a: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let fct = a[r][col];
                for j in 0..n {
                    a[r][j] -= fct * a[col][j];
                    inv[r][j] -= fct * inv[col][j];
                }
            }
        }
    }
    inv
}
