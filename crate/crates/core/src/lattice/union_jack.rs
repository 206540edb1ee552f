//! Union Jack lattice: square cells with a center site joined to the four
//! corners, giving four triangles per cell. Coordinates are doubled so that
//! corners sit at even and centers at odd positions.
//!
//! Centers are green; corners alternate red/blue. Every triangle contains
//! one site of each color, so flipping any two colors commutes with the
//! three-body Ising terms.
//!
//! `Cylinder` wraps x (even number of cells) and has two boundary rings, top
//! and bottom; every corner is then shared by four or eight triangles.
//! `Open` is a square patch; its four patch corners belong to only two
//! triangles each, which leaves a residual `Z` there.

use serde::{Deserialize, Serialize};

use super::{two_color_flips, Color, Family, HamTerm, LatticeError, LatticeSpec, SpecBuilder};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnionJackTermination {
    #[default]
    Cylinder,
    Open,
}

/// Open `n × n`-cell patch.
pub fn build_union_jack(n: usize) -> Result<LatticeSpec, LatticeError> {
    build_union_jack_with(n, n, UnionJackTermination::Open)
}

pub fn build_union_jack_with(
    nx: usize,
    ny: usize,
    termination: UnionJackTermination,
) -> Result<LatticeSpec, LatticeError> {
    let cylinder = termination == UnionJackTermination::Cylinder;
    if nx < 1 || ny < 1 {
        return Err(LatticeError::BadDimensions(format!(
            "union jack needs >= 1 cell, got {nx}x{ny}"
        )));
    }
    if cylinder && (nx < 4 || nx % 2 == 1) {
        return Err(LatticeError::BadDimensions(format!(
            "union jack cylinder needs an even number of cells around, >= 4; got {nx}"
        )));
    }
    let (cw, ch) = (nx as i32, ny as i32);
    let corner_cols = if cylinder { cw } else { cw + 1 };
    let mut b = SpecBuilder::new();
    for j in 0..=ch {
        for i in 0..corner_cols {
            let color = if (i + j) % 2 == 0 {
                Color::Red
            } else {
                Color::Blue
            };
            b.add(vec![2 * i, 2 * j], color);
        }
    }
    for j in 0..ch {
        for i in 0..cw {
            b.add(vec![2 * i + 1, 2 * j + 1], Color::Green);
        }
    }
    let period = 2 * cw;
    let corner = |i: i32, j: i32| {
        let x = if cylinder {
            (2 * i).rem_euclid(period)
        } else {
            2 * i
        };
        b.id(&[x, 2 * j])
    };

    let mut terms = Vec::new();
    for j in 0..ch {
        for i in 0..cw {
            let c = b.id(&[2 * i + 1, 2 * j + 1]);
            let ring = [
                corner(i, j),
                corner(i + 1, j),
                corner(i + 1, j + 1),
                corner(i, j + 1),
            ];
            for e in 0..4 {
                terms.push(HamTerm::z_product(vec![c, ring[e], ring[(e + 1) % 4]], -1));
            }
        }
    }

    let mut target = Vec::new();
    for j in [0, ch] {
        for i in 0..cw {
            target.push([corner(i, j), corner(i + 1, j)]);
        }
    }
    if !cylinder {
        for i in [0, cw] {
            for j in 0..ch {
                target.push([corner(i, j), corner(i, j + 1)]);
            }
        }
    }

    let symmetries = two_color_flips(b.sites());
    let family = Family::UnionJack {
        nx,
        ny,
        termination,
    };
    let (xmax, ymax) = (2 * cw, 2 * ch);
    Ok(b.finish(
        family,
        terms,
        symmetries,
        |s| {
            let (x, y) = (s.coord[0], s.coord[1]);
            s.color != Color::Green && (y == 0 || y == ymax || (!cylinder && (x == 0 || x == xmax)))
        },
        target,
        false,
    ))
}
