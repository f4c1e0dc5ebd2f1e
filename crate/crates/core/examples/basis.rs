//! GLL nodes, the differentiation matrix and the Radau correction functions.

use lwfr::Basis1D;

fn main() -> lwfr::Result<()> {
    for degree in 1..=4 {
        let b = Basis1D::gll(degree)?;
        // d/dx x^N is exact on N+1 nodes
        let p: Vec<f64> = b.nodes().iter().map(|x| x.powi(degree as i32)).collect();
        let dp = b.differentiate(&p);
        let err = b
            .nodes()
            .iter()
            .zip(&dp)
            .map(|(x, d)| (d - degree as f64 * x.powi(degree as i32 - 1)).abs())
            .fold(0.0, f64::max);
        println!("N = {degree}");
        println!("  nodes   {:?}", b.nodes());
        println!("  weights {:?} (sum {:.15})", b.weights(), b.weights().iter().sum::<f64>());
        println!("  derivative error of x^{degree}: {err:.2e}");
        println!("  g_L'(nodes) {:?}", b.dg_left());
    }
    Ok(())
}
