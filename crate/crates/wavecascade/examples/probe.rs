use wavecascade::dnop::*;
use wavecascade::params::RegimeParams;
use wavecascade::spectral::{ops, PeriodicGrid, ScalarField};
use std::f64::consts::PI;

fn main() {
    // probe 1: z_operator flat accuracy vs nz
    for nz in [12, 16, 20, 24, 32] {
        let grid = PeriodicGrid::new(32, 8, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(0.3, 1.0, 1.0, 0.0).unwrap();
        let geom = StripGeometry::flat(&grid, p);
        let psi = ScalarField::from_fn(&grid, |x, _| x.cos());
        let z = z_operator(&geom, &psi, &DnBackend::elliptic(nz)).unwrap();
        let want = ops::g0(&psi, &p);
        println!("z flat nz={nz}: {:.3e}", (&z - &want).max_abs());
    }
    // probe 2: shape derivative at rest vs closed form
    for nz in [20, 24, 32] {
        let grid = PeriodicGrid::new(32, 16, 2.0 * PI, 2.0 * PI).unwrap();
        let p = RegimeParams::new(0.25, 0.9, 0.8, 0.0).unwrap();
        let geom = StripGeometry::flat(&grid, p);
        let psi = ScalarField::from_fn(&grid, |x, y| x.sin() + 0.3 * (x + y).cos());
        let h = ScalarField::from_fn(&grid, |x, y| (2.0 * x).cos() + 0.4 * y.sin());
        let got = dn_shape_derivative(&geom, &psi, &h, &DnBackend::elliptic(nz)).unwrap();
        let g0psi = ops::g0(&psi, &p);
        let mut want = ops::g0(&ops::dealias(&h.mul_field(&g0psi)), &p).scale(-p.epsilon);
        let gpsi = ops::grad_gamma(&psi, p.gamma);
        want.axpy(-p.epsilon * p.mu, &ops::dealias(&ops::div_gamma(&gpsi.mul_scalar(&h), p.gamma)));
        println!("dG rest nz={nz}: {:.3e}", (&got - &want).max_abs());
    }
}
