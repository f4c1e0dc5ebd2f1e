//! Structured curvilinear quadrilateral meshes built from analytic maps.
//!
//! Each element stores its physical coordinates at the tensor GLL points, so
//! the reference map is the degree-`N` Lagrange interpolant of those points.
//! Nodes within an element are ordered `node = j * (N+1) + i` with `i` along
//! `xi` and `j` along `eta`.

use std::f64::consts::PI;
use std::io::Write;

use crate::basis::Basis1D;
use crate::error::{LwfrError, Result};

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Domain {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn area(&self) -> f64 {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
}

/// Which exterior side of the rectangle a boundary face sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundarySide {
    Left,
    Right,
    Bottom,
    Top,
}

impl BoundarySide {
    pub const ALL: [BoundarySide; 4] = [Self::Left, Self::Right, Self::Bottom, Self::Top];

    pub fn name(self) -> &'static str {
        match self {
            Self::Left => "left",
            Self::Right => "right",
            Self::Bottom => "bottom",
            Self::Top => "top",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Reference face side: `L` has outward reference normal `-e_i`, `R` has `+e_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    L,
    R,
}

/// A face of one element: element index, reference direction (0 = xi, 1 = eta), side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceId {
    pub element: usize,
    pub direction: usize,
    pub side: Side,
}

impl FaceId {
    /// Slot in [`CurvilinearMesh::element_faces`]: `2 * direction + (side == R)`.
    pub fn slot(&self) -> usize {
        2 * self.direction + usize::from(self.side == Side::R)
    }
}

/// A mesh face. Points are ordered by increasing tangential node index.
///
/// `minus` is the element whose `R` side lies on the face and `plus` the
/// element whose `L` side does; exactly one of them is missing on a boundary.
/// All structured faces are aligned, so the point orderings always agree.
#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub direction: usize,
    pub minus: Option<usize>,
    pub plus: Option<usize>,
    pub boundary: Option<BoundarySide>,
}

/// How the physical node coordinates are generated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeshKind {
    Cartesian,
    /// `x -> x + a sin(pi x) sin(pi y)` applied to both coordinates.
    Warped { amplitude: f64 },
}

#[derive(Debug, Clone)]
pub struct CurvilinearMesh {
    degree: usize,
    nx: usize,
    ny: usize,
    domain: Domain,
    periodic: [bool; 2],
    kind: MeshKind,
    coords: Vec<[f64; 2]>,
    faces: Vec<Face>,
    element_faces: Vec<[usize; 4]>,
}

impl CurvilinearMesh {
    /// Uniform `nx x ny` tensor mesh of `domain`.
    pub fn cartesian(
        nx: usize,
        ny: usize,
        domain: Domain,
        periodic: [bool; 2],
        basis: &Basis1D,
    ) -> Result<Self> {
        Self::build(nx, ny, domain, periodic, MeshKind::Cartesian, basis)
    }

    /// Cartesian mesh with the sinusoidal warp sampled at the mapped GLL points.
    ///
    /// Fails with a geometry error if the warp folds any element.
    pub fn warped(
        nx: usize,
        ny: usize,
        domain: Domain,
        amplitude: f64,
        periodic: [bool; 2],
        basis: &Basis1D,
    ) -> Result<Self> {
        let mesh = Self::build(nx, ny, domain, periodic, MeshKind::Warped { amplitude }, basis)?;
        Geometry::compute(&mesh, basis)?;
        Ok(mesh)
    }

    pub fn build(
        nx: usize,
        ny: usize,
        domain: Domain,
        periodic: [bool; 2],
        kind: MeshKind,
        basis: &Basis1D,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(LwfrError::Config(format!(
                "mesh needs at least one element per direction, got {nx}x{ny}"
            )));
        }
        if !(domain.x1 > domain.x0 && domain.y1 > domain.y0) {
            return Err(LwfrError::Config(format!("degenerate domain {domain:?}")));
        }
        let n = basis.len();
        let nn = n * n;
        let dx = (domain.x1 - domain.x0) / nx as f64;
        let dy = (domain.y1 - domain.y0) / ny as f64;
        let mut coords = Vec::with_capacity(nx * ny * nn);
        for ey in 0..ny {
            for ex in 0..nx {
                for j in 0..n {
                    for i in 0..n {
                        // integer + offset keeps shared face coordinates bit-identical
                        let sx = ex as f64 + 0.5 * (basis.nodes()[i] + 1.0);
                        let sy = ey as f64 + 0.5 * (basis.nodes()[j] + 1.0);
                        let x = domain.x0 + sx * dx;
                        let y = domain.y0 + sy * dy;
                        coords.push(map_point(kind, x, y));
                    }
                }
            }
        }

        let elem = |ex: usize, ey: usize| ey * nx + ex;
        let mut faces = Vec::new();
        let mut element_faces = vec![[usize::MAX; 4]; nx * ny];

        // xi-faces
        for ey in 0..ny {
            let nfx = if periodic[0] { nx } else { nx + 1 };
            for fx in 0..nfx {
                let minus = if fx > 0 {
                    Some(elem(fx - 1, ey))
                } else if periodic[0] {
                    Some(elem(nx - 1, ey))
                } else {
                    None
                };
                let plus = if fx < nx { Some(elem(fx, ey)) } else { None };
                let boundary = match (minus, plus) {
                    (None, _) => Some(BoundarySide::Left),
                    (_, None) => Some(BoundarySide::Right),
                    _ => None,
                };
                let id = faces.len();
                if let Some(m) = minus {
                    element_faces[m][1] = id;
                }
                if let Some(p) = plus {
                    element_faces[p][0] = id;
                }
                faces.push(Face {
                    direction: 0,
                    minus,
                    plus,
                    boundary,
                });
            }
        }
        // eta-faces
        for fy in 0..(if periodic[1] { ny } else { ny + 1 }) {
            for ex in 0..nx {
                let minus = if fy > 0 {
                    Some(elem(ex, fy - 1))
                } else if periodic[1] {
                    Some(elem(ex, ny - 1))
                } else {
                    None
                };
                let plus = if fy < ny { Some(elem(ex, fy)) } else { None };
                let boundary = match (minus, plus) {
                    (None, _) => Some(BoundarySide::Bottom),
                    (_, None) => Some(BoundarySide::Top),
                    _ => None,
                };
                let id = faces.len();
                if let Some(m) = minus {
                    element_faces[m][3] = id;
                }
                if let Some(p) = plus {
                    element_faces[p][2] = id;
                }
                faces.push(Face {
                    direction: 1,
                    minus,
                    plus,
                    boundary,
                });
            }
        }

        Ok(Self {
            degree: basis.degree(),
            nx,
            ny,
            domain,
            periodic,
            kind,
            coords,
            faces,
            element_faces,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes_per_element(&self) -> usize {
        (self.degree + 1) * (self.degree + 1)
    }

    pub fn n_elements(&self) -> usize {
        self.nx * self.ny
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn periodic(&self) -> [bool; 2] {
        self.periodic
    }

    pub fn kind(&self) -> MeshKind {
        self.kind
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Face indices per element, slots `[xi-L, xi-R, eta-L, eta-R]`.
    pub fn element_faces(&self) -> &[[usize; 4]] {
        &self.element_faces
    }

    pub fn face_of(&self, id: FaceId) -> usize {
        self.element_faces[id.element][id.slot()]
    }

    /// Physical coordinates of all nodes of element `e`.
    pub fn element_coords(&self, e: usize) -> &[[f64; 2]] {
        let nn = self.nodes_per_element();
        &self.coords[e * nn..(e + 1) * nn]
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    /// Mutable access for callers that want to supply their own nodal map.
    pub fn coords_mut(&mut self) -> &mut [[f64; 2]] {
        &mut self.coords
    }

    /// Element node index of tangential point `k` on face slot `slot`.
    pub fn face_node(&self, slot: usize, k: usize) -> usize {
        face_node(self.degree + 1, slot, k)
    }
}

/// Element node index of tangential point `k` on face slot `slot` for `n` nodes per direction.
#[inline]
pub fn face_node(n: usize, slot: usize, k: usize) -> usize {
    match slot {
        0 => k * n,
        1 => k * n + n - 1,
        2 => k,
        _ => (n - 1) * n + k,
    }
}

fn map_point(kind: MeshKind, x: f64, y: f64) -> [f64; 2] {
    match kind {
        MeshKind::Cartesian => [x, y],
        MeshKind::Warped { amplitude } => {
            let d = amplitude * (PI * x).sin() * (PI * y).sin();
            [x + d, y + d]
        }
    }
}

/// Jacobians, metric terms and face data for every element.
#[derive(Debug, Clone)]
pub struct Geometry {
    n: usize,
    jac: Vec<f64>,
    /// `[Ja1_x, Ja1_y, Ja2_x, Ja2_y]` per node.
    metric: Vec<[f64; 4]>,
    /// Unit normal pointing along `+xi_i` per face point.
    face_normals: Vec<Vec<[f64; 2]>>,
    /// `|Ja^i|` per face point.
    face_scale: Vec<Vec<f64>>,
}

impl Geometry {
    /// Metric terms by collocation differentiation of the nodal coordinates.
    ///
    /// In two dimensions `Ja^1 = (y_eta, -x_eta)` and `Ja^2 = (-y_xi, x_xi)`.
    pub fn compute(mesh: &CurvilinearMesh, basis: &Basis1D) -> Result<Self> {
        let n = basis.len();
        let nn = n * n;
        let ne = mesh.n_elements();
        let mut jac = Vec::with_capacity(ne * nn);
        let mut metric = Vec::with_capacity(ne * nn);
        for e in 0..ne {
            let xy = mesh.element_coords(e);
            for j in 0..n {
                for i in 0..n {
                    let mut x_xi = 0.0;
                    let mut y_xi = 0.0;
                    let mut x_eta = 0.0;
                    let mut y_eta = 0.0;
                    for k in 0..n {
                        let dik = basis.d(i, k);
                        let djk = basis.d(j, k);
                        x_xi += dik * xy[j * n + k][0];
                        y_xi += dik * xy[j * n + k][1];
                        x_eta += djk * xy[k * n + i][0];
                        y_eta += djk * xy[k * n + i][1];
                    }
                    let jc = x_xi * y_eta - x_eta * y_xi;
                    if jc.is_nan() || jc <= 0.0 {
                        return Err(LwfrError::Geometry {
                            element: e,
                            message: format!("non-positive Jacobian {jc:.3e} at node ({i}, {j})"),
                        });
                    }
                    jac.push(jc);
                    metric.push([y_eta, -x_eta, -y_xi, x_xi]);
                }
            }
        }

        let mut face_normals = Vec::with_capacity(mesh.faces().len());
        let mut face_scale = Vec::with_capacity(mesh.faces().len());
        for face in mesh.faces() {
            let (e, slot) = match (face.minus, face.plus) {
                (Some(m), _) => (m, 2 * face.direction + 1),
                (None, Some(p)) => (p, 2 * face.direction),
                (None, None) => unreachable!("face without elements"),
            };
            let mut normals = Vec::with_capacity(n);
            let mut scales = Vec::with_capacity(n);
            for k in 0..n {
                let m = metric[e * nn + face_node(n, slot, k)];
                let v = if face.direction == 0 { [m[0], m[1]] } else { [m[2], m[3]] };
                let s = v[0].hypot(v[1]);
                normals.push([v[0] / s, v[1] / s]);
                scales.push(s);
            }
            face_normals.push(normals);
            face_scale.push(scales);
        }

        Ok(Self {
            n,
            jac,
            metric,
            face_normals,
            face_scale,
        })
    }

    pub fn nodes_per_element(&self) -> usize {
        self.n * self.n
    }

    pub fn n_elements(&self) -> usize {
        self.jac.len() / (self.n * self.n)
    }

    pub fn jacobian(&self) -> &[f64] {
        &self.jac
    }

    pub fn element_jacobian(&self, e: usize) -> &[f64] {
        let nn = self.n * self.n;
        &self.jac[e * nn..(e + 1) * nn]
    }

    pub fn metric(&self) -> &[[f64; 4]] {
        &self.metric
    }

    pub fn metric_mut(&mut self) -> &mut [[f64; 4]] {
        &mut self.metric
    }

    pub fn element_metric(&self, e: usize) -> &[[f64; 4]] {
        let nn = self.n * self.n;
        &self.metric[e * nn..(e + 1) * nn]
    }

    pub fn face_normals(&self, face: usize) -> &[[f64; 2]] {
        &self.face_normals[face]
    }

    pub fn face_scale(&self, face: usize) -> &[f64] {
        &self.face_scale[face]
    }

    /// Outward unit normal and surface scaling of one element face at point `k`.
    pub fn outward_normal(&self, id: FaceId, k: usize) -> ([f64; 2], f64) {
        let n = self.n;
        let m = self.metric[id.element * n * n + face_node(n, id.slot(), k)];
        let v = if id.direction == 0 { [m[0], m[1]] } else { [m[2], m[3]] };
        let s = v[0].hypot(v[1]);
        match id.side {
            Side::R => ([v[0] / s, v[1] / s], s),
            Side::L => ([-v[0] / s, -v[1] / s], s),
        }
    }

    /// `sum_p w_p w_q J_pq` over element `e`.
    pub fn element_area(&self, e: usize, basis: &Basis1D) -> f64 {
        let n = self.n;
        let w = basis.weights();
        let jac = self.element_jacobian(e);
        let mut a = 0.0;
        for j in 0..n {
            for i in 0..n {
                a += w[i] * w[j] * jac[j * n + i];
            }
        }
        a
    }

    pub fn min_jacobian(&self) -> f64 {
        self.jac.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Max-norm over all nodes of `d/dxi (Ja^1) + d/deta (Ja^2)`.
    pub fn metric_identity_residual(&self, basis: &Basis1D) -> f64 {
        let n = self.n;
        let nn = n * n;
        let mut worst: f64 = 0.0;
        for e in 0..self.n_elements() {
            let m = &self.metric[e * nn..(e + 1) * nn];
            for j in 0..n {
                for i in 0..n {
                    let mut rx = 0.0;
                    let mut ry = 0.0;
                    for k in 0..n {
                        let a = m[j * n + k];
                        let b = m[k * n + i];
                        rx += basis.d(i, k) * a[0] + basis.d(j, k) * b[2];
                        ry += basis.d(i, k) * a[1] + basis.d(j, k) * b[3];
                    }
                    worst = worst.max(rx.abs()).max(ry.abs());
                }
            }
        }
        worst
    }
}

/// Writes a field dump: a `#` header then one row `e i j x y u...` per solution point.
pub fn write_field_dump<W: Write>(
    mut out: W,
    mesh: &CurvilinearMesh,
    nvar: usize,
    values: &[f64],
    time: f64,
) -> std::io::Result<()> {
    let n = mesh.degree() + 1;
    let nn = n * n;
    write!(out, "# t = {time:.16e}\n# e i j x y")?;
    for c in 0..nvar {
        write!(out, " u{c}")?;
    }
    writeln!(out)?;
    for e in 0..mesh.n_elements() {
        let xy = mesh.element_coords(e);
        for j in 0..n {
            for i in 0..n {
                let node = j * n + i;
                write!(out, "{e} {i} {j} {:.16e} {:.16e}", xy[node][0], xy[node][1])?;
                for c in 0..nvar {
                    write!(out, " {:.16e}", values[(e * nn + node) * nvar + c])?;
                }
                writeln!(out)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const SQUARE: Domain = Domain::new(-1.0, 1.0, -1.0, 1.0);

    #[test]
    fn identity_map_single_element() {
        let b = Basis1D::gll(3).unwrap();
        let mesh = CurvilinearMesh::cartesian(1, 1, SQUARE, [false; 2], &b).unwrap();
        let g = Geometry::compute(&mesh, &b).unwrap();
        for (jc, m) in g.jacobian().iter().zip(g.metric()) {
            assert_abs_diff_eq!(*jc, 1.0, epsilon = 1e-14);
            for (a, e) in m.iter().zip([1.0, 0.0, 0.0, 1.0]) {
                assert_abs_diff_eq!(*a, e, epsilon = 1e-14);
            }
        }
        assert!(g.metric_identity_residual(&b) < 1e-14);
    }

    #[test]
    fn affine_scaling() {
        let b = Basis1D::gll(2).unwrap();
        let mesh = CurvilinearMesh::cartesian(2, 2, Domain::new(0.0, 1.0, 0.0, 1.0), [false; 2], &b).unwrap();
        let g = Geometry::compute(&mesh, &b).unwrap();
        assert!(g.jacobian().iter().all(|j| (j - 1.0 / 16.0).abs() < 1e-15));
        assert!(g.metric_identity_residual(&b) < 1e-14);
        // x = 2 xi, y = 3 eta
        let mut m = CurvilinearMesh::cartesian(1, 1, SQUARE, [false; 2], &b).unwrap();
        for p in m.coords_mut() {
            *p = [2.0 * p[0], 3.0 * p[1]];
        }
        let g = Geometry::compute(&m, &b).unwrap();
        for (jc, mt) in g.jacobian().iter().zip(g.metric()) {
            assert_abs_diff_eq!(*jc, 6.0, epsilon = 1e-13);
            for (a, e) in mt.iter().zip([3.0, 0.0, 0.0, 2.0]) {
                assert_abs_diff_eq!(*a, e, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn zero_amplitude_warp_is_cartesian() {
        let b = Basis1D::gll(3).unwrap();
        let a = CurvilinearMesh::cartesian(3, 2, SQUARE, [true, false], &b).unwrap();
        let w = CurvilinearMesh::warped(3, 2, SQUARE, 0.0, [true, false], &b).unwrap();
        assert_eq!(a.coords(), w.coords());
        assert_eq!(a.faces(), w.faces());
    }

    #[test]
    fn warped_mesh_is_valid_and_conforming() {
        let b = Basis1D::gll(3).unwrap();
        let mesh = CurvilinearMesh::warped(4, 4, SQUARE, 0.05, [false; 2], &b).unwrap();
        let g = Geometry::compute(&mesh, &b).unwrap();
        assert!(g.min_jacobian() > 0.0);
        let n = b.len();
        for face in mesh.faces() {
            if let (Some(m), Some(p)) = (face.minus, face.plus) {
                for k in 0..n {
                    let a = mesh.element_coords(m)[face_node(n, 2 * face.direction + 1, k)];
                    let c = mesh.element_coords(p)[face_node(n, 2 * face.direction, k)];
                    assert_eq!(a, c);
                }
            }
        }
    }

    #[test]
    fn folded_warp_is_geometry_error() {
        let b = Basis1D::gll(3).unwrap();
        let err = CurvilinearMesh::warped(4, 4, SQUARE, 10.0, [false; 2], &b).unwrap_err();
        assert!(matches!(err, LwfrError::Geometry { .. }));
    }

    #[test]
    fn zero_counts_rejected() {
        let b = Basis1D::gll(1).unwrap();
        assert!(CurvilinearMesh::cartesian(0, 3, SQUARE, [false; 2], &b).unwrap_err().is_config());
    }

    #[test]
    fn every_face_slot_filled_once() {
        let b = Basis1D::gll(2).unwrap();
        for periodic in [[false, false], [true, false], [true, true]] {
            let mesh = CurvilinearMesh::cartesian(3, 4, SQUARE, periodic, &b).unwrap();
            let mut count = vec![0; mesh.faces().len()];
            for ef in mesh.element_faces() {
                for &f in ef {
                    assert_ne!(f, usize::MAX);
                    count[f] += 1;
                }
            }
            for (f, face) in mesh.faces().iter().enumerate() {
                let expected = if face.boundary.is_some() { 1 } else { 2 };
                assert_eq!(count[f], expected);
                assert_eq!(face.boundary.is_some(), face.minus.is_none() || face.plus.is_none());
            }
        }
    }

    #[test]
    fn metric_identity_on_warped_meshes() {
        for n in 2..=4 {
            let b = Basis1D::gll(n).unwrap();
            let mesh = CurvilinearMesh::warped(4, 4, SQUARE, 0.05, [true; 2], &b).unwrap();
            let g = Geometry::compute(&mesh, &b).unwrap();
            assert!(g.metric_identity_residual(&b) <= 1e-13);
        }
    }

    #[test]
    fn corrupted_metric_is_detected() {
        let b = Basis1D::gll(3).unwrap();
        let mesh = CurvilinearMesh::cartesian(2, 2, SQUARE, [false; 2], &b).unwrap();
        let mut g = Geometry::compute(&mesh, &b).unwrap();
        let n = b.len();
        let min_row: f64 = (0..n)
            .map(|i| (0..n).map(|j| b.d(i, j).powi(2)).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min);
        g.metric_mut()[5][0] += 1.0;
        assert!(g.metric_identity_residual(&b) >= min_row);
    }

    #[test]
    fn warped_area_matches_domain() {
        let b = Basis1D::gll(4).unwrap();
        let mesh = CurvilinearMesh::warped(6, 6, SQUARE, 0.1, [true; 2], &b).unwrap();
        let g = Geometry::compute(&mesh, &b).unwrap();
        let total: f64 = (0..mesh.n_elements()).map(|e| g.element_area(e, &b)).sum();
        assert!((total / SQUARE.area() - 1.0).abs() < 1e-10, "{total}");
    }

    #[test]
    fn cartesian_area_is_exact() {
        let b = Basis1D::gll(2).unwrap();
        let mesh = CurvilinearMesh::cartesian(3, 5, Domain::new(0.0, 3.0, 1.0, 2.0), [false; 2], &b).unwrap();
        let g = Geometry::compute(&mesh, &b).unwrap();
        for e in 0..mesh.n_elements() {
            assert_abs_diff_eq!(g.element_area(e, &b), 0.2, epsilon = 1e-14);
        }
    }

    #[test]
    fn normals_are_consistent_across_faces() {
        let b = Basis1D::gll(4).unwrap();
        let mesh = CurvilinearMesh::warped(4, 3, SQUARE, 0.05, [false; 2], &b).unwrap();
        let g = Geometry::compute(&mesh, &b).unwrap();
        for face in mesh.faces() {
            if let (Some(m), Some(p)) = (face.minus, face.plus) {
                for k in 0..b.len() {
                    let (nm, sm) = g.outward_normal(
                        FaceId { element: m, direction: face.direction, side: Side::R },
                        k,
                    );
                    let (np, sp) = g.outward_normal(
                        FaceId { element: p, direction: face.direction, side: Side::L },
                        k,
                    );
                    assert_abs_diff_eq!(nm[0], -np[0], epsilon = 1e-12);
                    assert_abs_diff_eq!(nm[1], -np[1], epsilon = 1e-12);
                    assert_abs_diff_eq!(sm, sp, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn field_dump_format() {
        let b = Basis1D::gll(1).unwrap();
        let mesh = CurvilinearMesh::cartesian(1, 1, SQUARE, [false; 2], &b).unwrap();
        let values = [1.0, 2.0, 3.0, 4.0];
        let mut buf = Vec::new();
        write_field_dump(&mut buf, &mesh, 1, &values, 0.5).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with('#'));
        assert_eq!(lines[1], "# e i j x y u0");
        assert_eq!(lines.len(), 6);
        let cols: Vec<&str> = lines[3].split(' ').collect();
        assert_eq!(&cols[..3], &["0", "1", "0"]);
        assert_eq!(cols[3].parse::<f64>().unwrap(), 1.0);
        assert_eq!(cols[5].parse::<f64>().unwrap(), 2.0);
    }
}
