//! Multiply complex numbers in the unit disc with magnitude AND and
//! phase XNOR, and compare with ordinary Cartesian multiplication.

use std::f64::consts::PI;

use nmr_logic::complex_logic::{complex_multiply_via_logic, mnot, ptruth, ComplexSample};

fn main() -> nmr_logic::Result<()> {
    let pairs = [
        (0.5, PI / 3.0, 0.8, 3.0 * PI / 4.0),
        (1.0, PI, 1.0, PI),
        (0.3, 5.5, 0.9, 1.2),
    ];
    for (r1, t1, r2, t2) in pairs {
        let z1 = ComplexSample::new(r1, t1)?;
        let z2 = ComplexSample::new(r2, t2)?;
        let p = complex_multiply_via_logic(z1, z2);
        let (ax, ay) = z1.to_cartesian();
        let (bx, by) = z2.to_cartesian();
        let (x, y) = (ax * bx - ay * by, ax * by + ay * bx);
        let (px, py) = p.to_cartesian();
        println!(
            "({r1}, {t1:.4}) * ({r2}, {t2:.4}) = ({:.6}, {:.6})  cartesian error {:.1e}",
            p.r(),
            p.theta(),
            (px - x).hypot(py - y)
        );
    }

    println!();
    for theta in [0.0, PI / 2.0, PI, 3.0 * PI / 2.0] {
        let z = ComplexSample::new(1.0, theta)?;
        println!(
            "pTruth({theta:.4}) = {:.3}, after mNOT {:.3}",
            ptruth(theta),
            ptruth(mnot(z).theta())
        );
    }
    Ok(())
}
