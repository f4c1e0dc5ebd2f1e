//! Warped curvilinear mesh: metric identities, Jacobian and area.

use lwfr::mesh::MeshKind;
use lwfr::{Basis1D, CurvilinearMesh, Domain, Geometry};

fn main() -> lwfr::Result<()> {
    let domain = Domain::new(-1.0, 1.0, -1.0, 1.0);
    for amplitude in [0.0, 0.05, 0.1] {
        let b = Basis1D::gll(3)?;
        let kind = if amplitude == 0.0 { MeshKind::Cartesian } else { MeshKind::Warped { amplitude } };
        let m = CurvilinearMesh::build(8, 8, domain, [true; 2], kind, &b)?;
        let g = Geometry::compute(&m, &b)?;
        let area: f64 = (0..m.n_elements()).map(|e| g.element_area(e, &b)).sum();
        println!(
            "amplitude {amplitude:4}: identity residual {:.2e}, min J {:.4e}, area {area:.14}",
            g.metric_identity_residual(&b),
            g.min_jacobian()
        );
    }
    Ok(())
}
