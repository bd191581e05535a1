//! Assembles the Taylor-Hood operator set and reports sizes and a few
//! invariants.
//!
//! cargo run --example operator_assembly -- [nx]

use traction_split::fem::{Discretization, FlowForm};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nx: usize = std::env::args().nth(1).map_or(Ok(8), |s| s.parse())?;
    let disc = Discretization::unit_square(nx)?;
    let sp = &disc.spaces;
    let ops = &disc.ops;
    println!(
        "nx = {nx}: {} velocity dofs, {} pressure dofs, {} gauge dofs",
        sp.velocity_dim(),
        sp.pressure_dim(),
        sp.gauge_dim()
    );
    for (name, a) in [
        ("M_u", &ops.m_u),
        ("K_grad", &ops.k_grad),
        ("K_eps", &ops.k_eps),
        ("G", &ops.g),
        ("B", &ops.b),
        ("L_p", &ops.l_p),
        ("M_p", &ops.m_p),
        ("H_p", &ops.h_p),
        ("S", &ops.s),
        ("C_v", &ops.c_v),
    ] {
        let sym = if a.nrows() == a.ncols() {
            format!("asymmetry {:.1e}", a.max_asymmetry())
        } else {
            String::new()
        };
        println!("{name:>7}: {:>6} x {:<6} nnz {:>8}  {sym}", a.nrows(), a.ncols(), a.nnz());
    }

    // The velocity field (x, 0) has unit divergence.
    let mut u = vec![0.0; sp.velocity_dim()];
    for (a, x) in sp.node_coords.iter().enumerate() {
        u[2 * a] = x[0];
    }
    let ones = vec![1.0; sp.pressure_dim()];
    println!("(1, div u) = {:.15}", ops.b.bilinear(&ones, &u)?);
    println!("|div u|^2 = {:.15}", ops.g.bilinear(&u, &u)?);
    for form in [FlowForm::Open, FlowForm::Traction] {
        println!("{form} stiffness energy = {:.15}", ops.form_stiffness(form).bilinear(&u, &u)?);
    }
    Ok(())
}
