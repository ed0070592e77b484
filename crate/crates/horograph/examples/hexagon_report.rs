//! Solve the capped hexagon at a few mesh sizes and print the quantities
//! the library is built to watch: energy, Newton work, loop defect of the
//! conjugate form, and corner flatness.

use horograph::conjugate::{boundary_flatness, conjugate_height};
use horograph::domain::{build_finite, FiniteParams};
use horograph::mesh::{Mesh, MeshParams};
use horograph::solve::{solve, SolveParams};

fn main() {
    let poly = build_finite(&FiniteParams::new(1)).unwrap();
    for h in [0.1, 0.05, 0.025] {
        let mesh = Mesh::build(&poly, &MeshParams::new(h)).unwrap();
        let start = std::time::Instant::now();
        let sol = solve(&mesh, &mesh.dirichlet(4.0), &SolveParams::default()).unwrap();
        let elapsed = start.elapsed().as_secs_f64();
        let diag = conjugate_height(&mesh, &sol.u, 0).unwrap();
        let flat = boundary_flatness(&mesh, &diag);
        let worst = flat.iter().map(|a| a.normalized).fold(0.0f64, f64::max);
        println!(
            "h={h:<6} vertices={:<6} newton={:<3} time={elapsed:<6.2}s energy={:.12}",
            mesh.points.len(),
            sol.newton_iterations,
            sol.energy
        );
        println!(
            "         defect={:.3e} diameter={:.3} boundary range={:.4} worst corner={:.4}",
            diag.loop_defect,
            mesh.diameter(),
            diag.boundary_variation[0],
            worst
        );
    }
}
