//! Nodal solution storage.

use crate::basis::Basis1D;
use crate::mesh::{CurvilinearMesh, Geometry};

/// `p`-component values at the tensor GLL points of every element.
///
/// Layout: `data[(e * nn + node) * nvar + c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField {
    nvar: usize,
    nodes_per_element: usize,
    data: Vec<f64>,
}

impl NodalField {
    pub fn zeros(nvar: usize, nodes_per_element: usize, n_elements: usize) -> Self {
        Self {
            nvar,
            nodes_per_element,
            data: vec![0.0; nvar * nodes_per_element * n_elements],
        }
    }

    pub fn from_vec(nvar: usize, nodes_per_element: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len() % (nvar * nodes_per_element), 0);
        Self {
            nvar,
            nodes_per_element,
            data,
        }
    }

    /// Samples `f(x, y, out)` at every solution point of `mesh`.
    pub fn from_fn(mesh: &CurvilinearMesh, nvar: usize, mut f: impl FnMut(f64, f64, &mut [f64])) -> Self {
        let mut field = Self::zeros(nvar, mesh.nodes_per_element(), mesh.n_elements());
        for (xy, out) in mesh.coords().iter().zip(field.data.chunks_exact_mut(nvar)) {
            f(xy[0], xy[1], out);
        }
        field
    }

    pub fn nvar(&self) -> usize {
        self.nvar
    }

    pub fn nodes_per_element(&self) -> usize {
        self.nodes_per_element
    }

    pub fn n_elements(&self) -> usize {
        self.data.len() / (self.nvar * self.nodes_per_element)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn element(&self, e: usize) -> &[f64] {
        let s = self.nvar * self.nodes_per_element;
        &self.data[e * s..(e + 1) * s]
    }

    pub fn element_mut(&mut self, e: usize) -> &mut [f64] {
        let s = self.nvar * self.nodes_per_element;
        &mut self.data[e * s..(e + 1) * s]
    }

    pub fn node(&self, e: usize, node: usize) -> &[f64] {
        let o = (e * self.nodes_per_element + node) * self.nvar;
        &self.data[o..o + self.nvar]
    }

    /// `sum_e sum_pq w_p w_q J_pq u_c` for component `c`.
    pub fn integral(&self, c: usize, geometry: &Geometry, basis: &Basis1D) -> f64 {
        let n = basis.len();
        let w = basis.weights();
        let jac = geometry.jacobian();
        let mut total = 0.0;
        for (k, u) in self.data.chunks_exact(self.nvar).enumerate() {
            let node = k % self.nodes_per_element;
            total += w[node % n] * w[node / n] * jac[k] * u[c];
        }
        total
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Domain;

    #[test]
    fn integral_of_constant_is_area() {
        let b = Basis1D::gll(3).unwrap();
        let mesh = CurvilinearMesh::warped(4, 4, Domain::new(-1.0, 1.0, -1.0, 1.0), 0.05, [true; 2], &b).unwrap();
        let g = Geometry::compute(&mesh, &b).unwrap();
        let f = NodalField::from_fn(&mesh, 2, |_, _, out| out.copy_from_slice(&[1.0, 3.0]));
        assert!((f.integral(0, &g, &b) - 4.0).abs() < 1e-12);
        assert!((f.integral(1, &g, &b) - 12.0).abs() < 1e-12);
        assert_eq!(f.n_elements(), 16);
        assert_eq!(f.node(5, 3), &[1.0, 3.0]);
    }
}
