//! Triangular lattice with the Baxter-Wu three-body Hamiltonian, wrapped into
//! a cylinder with zigzag edges.
//!
//! Site `(a, r)` has `a` around the cylinder (period `P`) and layer index
//! `r = 0..=R`. Neighbours of `(a, r)` are `(a, r±1)`, `(a±1, r±1)` and
//! `(a±1, r±2)`; there are no edges inside a layer. The triangles are
//!
//! ```text
//! up(a, r)   = (a, r), (a+1, r+1), (a+1, r+2)
//! down(a, r) = (a, r), (a,   r+1), (a+1, r+2)
//! ```
//!
//! and the three colors are `r mod 3`. Layers 0 and R touch two triangles per
//! site, layers 1 and R−1 four, deeper layers six. Each zigzag edge is a ring
//! of length `2P` built from layers {0, 1} (resp. {R−1, R}); those four
//! layers form the boundary.

use super::{two_color_flips, Color, Family, HamTerm, LatticeError, LatticeSpec, SpecBuilder};

pub fn build_triangular(period: usize, rows: usize) -> Result<LatticeSpec, LatticeError> {
    if period < 3 || rows < 3 {
        return Err(LatticeError::BadDimensions(format!(
            "triangular cylinder needs period >= 3 and rows >= 3, got {period}x{rows}"
        )));
    }
    let (p, r_max) = (period as i32, rows as i32);
    let colors = [Color::Red, Color::Blue, Color::Green];
    let mut b = SpecBuilder::new();
    for r in 0..=r_max {
        for a in 0..p {
            b.add(vec![a, r], colors[(r % 3) as usize]);
        }
    }
    let site = |a: i32, r: i32| b.id(&[a.rem_euclid(p), r]);

    let mut terms = Vec::new();
    for r in 0..=r_max - 2 {
        for a in 0..p {
            terms.push(HamTerm::z_product(
                vec![site(a, r), site(a + 1, r + 1), site(a + 1, r + 2)],
                -1,
            ));
            terms.push(HamTerm::z_product(
                vec![site(a, r), site(a, r + 1), site(a + 1, r + 2)],
                -1,
            ));
        }
    }

    let mut target = Vec::new();
    for lo in [0, r_max - 1] {
        for a in 0..p {
            target.push([site(a, lo), site(a, lo + 1)]);
            target.push([site(a, lo), site(a + 1, lo + 1)]);
        }
    }

    let symmetries = two_color_flips(b.sites());
    let family = Family::Triangular { period, rows };
    Ok(b.finish(
        family,
        terms,
        symmetries,
        |s| {
            let r = s.coord[1];
            r <= 1 || r >= r_max - 1
        },
        target,
        true,
    ))
}
