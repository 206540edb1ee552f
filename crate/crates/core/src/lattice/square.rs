//! Square lattice with the four-CZ plaquette Hamiltonian.
//!
//! `Open` is an `nx × ny` rectangle whose perimeter receives a cluster ring.
//! `PeriodicX` wraps x into a cylinder; its top and bottom rows each receive
//! a ring and every boundary site has exactly two bulk-side plaquettes, which
//! makes it the cleaner geometry for scaling in the boundary length.

use serde::{Deserialize, Serialize};

use super::{Color, Family, HamTerm, LatticeError, LatticeSpec, SpecBuilder, SymmetryGen};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareTermination {
    #[default]
    Open,
    PeriodicX,
}

pub fn build_square(nx: usize, ny: usize) -> Result<LatticeSpec, LatticeError> {
    build_square_with(nx, ny, SquareTermination::Open)
}

pub fn build_square_with(
    nx: usize,
    ny: usize,
    termination: SquareTermination,
) -> Result<LatticeSpec, LatticeError> {
    let periodic = termination == SquareTermination::PeriodicX;
    if nx < 2 || ny < 2 {
        return Err(LatticeError::BadDimensions(format!(
            "square needs nx, ny >= 2, got {nx}x{ny}"
        )));
    }
    if periodic && (nx < 4 || nx % 2 == 1) {
        return Err(LatticeError::BadDimensions(format!(
            "periodic square needs an even circumference >= 4, got {nx}"
        )));
    }
    let (w, h) = (nx as i32, ny as i32);
    let mut b = SpecBuilder::new();
    for y in 0..h {
        for x in 0..w {
            let color = if (x + y) % 2 == 0 {
                Color::Red
            } else {
                Color::Blue
            };
            b.add(vec![x, y], color);
        }
    }
    let site = |x: i32, y: i32| b.id(&[x.rem_euclid(w), y]);

    let plaquette_cols = if periodic { w } else { w - 1 };
    let mut terms = Vec::new();
    for y in 0..h - 1 {
        for x in 0..plaquette_cols {
            let c = [
                site(x, y),
                site(x + 1, y),
                site(x + 1, y + 1),
                site(x, y + 1),
            ];
            terms.push(HamTerm::cz_product(
                vec![[c[0], c[1]], [c[1], c[2]], [c[2], c[3]], [c[3], c[0]]],
                1,
            ));
        }
    }

    let mut target = Vec::new();
    for y in [0, h - 1] {
        for x in 0..plaquette_cols {
            target.push([site(x, y), site(x + 1, y)]);
        }
    }
    if !periodic {
        for x in [0, w - 1] {
            for y in 0..h - 1 {
                target.push([site(x, y), site(x, y + 1)]);
            }
        }
    }

    let symmetries = [(Color::Red, "red"), (Color::Blue, "blue")]
        .iter()
        .map(|(c, label)| SymmetryGen {
            label: label.to_string(),
            support: b
                .sites()
                .iter()
                .filter(|s| s.color == *c)
                .map(|s| s.id)
                .collect(),
        })
        .collect();

    let family = Family::Square {
        nx,
        ny,
        termination,
    };
    Ok(b.finish(
        family,
        terms,
        symmetries,
        |s| {
            let (x, y) = (s.coord[0], s.coord[1]);
            y == 0 || y == h - 1 || (!periodic && (x == 0 || x == w - 1))
        },
        target,
        false,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_plaquette() {
        let s = build_square(2, 2).unwrap();
        assert_eq!(s.num_sites(), 4);
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.boundary.len(), 4);
        assert!(s.bulk.is_empty());
        assert_eq!(s.target_graph.len(), 4);
    }

    #[test]
    fn three_by_three_counts() {
        let s = build_square(3, 3).unwrap();
        assert_eq!(s.num_sites(), 9);
        assert_eq!(s.terms.len(), 4);
        assert_eq!(s.bulk, vec![4]);
        assert_eq!(s.target_graph.len(), 8);
    }

    #[test]
    fn periodic_cylinder_counts() {
        let s = build_square_with(6, 3, SquareTermination::PeriodicX).unwrap();
        assert_eq!(s.terms.len(), 12);
        assert_eq!(s.boundary.len(), 12);
        assert_eq!(s.bulk.len(), 6);
        assert_eq!(s.target_graph.len(), 12);
        assert!(build_square_with(5, 3, SquareTermination::PeriodicX).is_err());
    }

    #[test]
    fn rejects_degenerate() {
        assert!(build_square(1, 4).is_err());
        assert!(build_square(4, 1).is_err());
    }

    #[test]
    fn checkerboard_flips_partition_sites() {
        let s = build_square(4, 5).unwrap();
        let total: usize = s.symmetries.iter().map(|g| g.support.len()).sum();
        assert_eq!(total, 20);
    }
}
