//! Lowest levels of `−ψ'' + y⁴ ψ = ε ψ` by shooting on the series solution.
//!
//! `cargo run --release --example eigen_quartic -- 40`

use seriesode::spectra::{solve_eigenvalue, EigenProblem, Parity};

fn main() -> seriesode::Result<()> {
    let digits = std::env::args().nth(1).map_or(40, |s| s.parse().expect("digits"));
    for level in 0..2 {
        for parity in [Parity::Even, Parity::Odd] {
            let r = solve_eigenvalue(&EigenProblem::quartic(parity, level, digits))?;
            println!(
                "{parity:>4} #{level}: ε = {}  (y_b = {}, P = {}, {} iterations, {:.2} s)",
                r.epsilon, r.y_boundary, r.precision_digits, r.iterations, r.wall_time_s
            );
        }
    }
    Ok(())
}
