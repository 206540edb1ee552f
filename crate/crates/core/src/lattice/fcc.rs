//! Face-centered cubic lattice with the four-body tetrahedral Ising terms.
//!
//! Coordinates are doubled: cube corners have all-even coordinates, face
//! centers two odd ones, so sites are the integer points with an even
//! coordinate sum. Each cube contributes eight tetrahedra, one per corner,
//! formed by the corner and the three face centers of that cube adjacent to
//! it. A tetrahedron meets every coordinate plane in zero or two sites,
//! so the planar flips are symmetries.
//!
//! `SlabX` (default) is periodic in y and z and open in x; the two x faces
//! are the boundary and each receives a square-lattice cluster state on the
//! corner/face-center sites of that face. `Open` is a plain box of cubes,
//! useful for counting; its edges and corners keep single `S` gates, so it
//! does not pump.

use serde::{Deserialize, Serialize};

use super::{Color, Family, HamTerm, LatticeError, LatticeSpec, SpecBuilder, SymmetryGen};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FccTermination {
    #[default]
    SlabX,
    Open,
}

pub fn build_fcc(nx: usize, ny: usize, nz: usize) -> Result<LatticeSpec, LatticeError> {
    build_fcc_with(nx, ny, nz, FccTermination::SlabX)
}

fn sublattice(c: &[i32]) -> Color {
    match (c[0].rem_euclid(2), c[1].rem_euclid(2), c[2].rem_euclid(2)) {
        (0, 0, 0) => Color::Red,
        (0, 1, 1) => Color::Blue,
        (1, 0, 1) => Color::Green,
        _ => Color::Yellow,
    }
}

pub fn build_fcc_with(
    nx: usize,
    ny: usize,
    nz: usize,
    termination: FccTermination,
) -> Result<LatticeSpec, LatticeError> {
    let slab = termination == FccTermination::SlabX;
    if nx < 1 || ny < 1 || nz < 1 {
        return Err(LatticeError::BadDimensions(format!(
            "fcc needs >= 1 cube per axis, got {nx}x{ny}x{nz}"
        )));
    }
    if slab && (ny < 2 || nz < 2) {
        return Err(LatticeError::BadDimensions(format!(
            "fcc slab needs ny, nz >= 2 for its periodic axes, got {ny}x{nz}"
        )));
    }
    let (xm, ym, zm) = (2 * nx as i32, 2 * ny as i32, 2 * nz as i32);
    // number of distinct positions along each axis
    let (yn, zn) = if slab { (ym, zm) } else { (ym + 1, zm + 1) };
    let mut b = SpecBuilder::new();
    for x in 0..=xm {
        for y in 0..yn {
            for z in 0..zn {
                if (x + y + z) % 2 == 0 {
                    let c = vec![x, y, z];
                    let color = sublattice(&c);
                    b.add(c, color);
                }
            }
        }
    }
    let wrap = |v: i32, m: i32| if slab { v.rem_euclid(m) } else { v };
    let site = |x: i32, y: i32, z: i32| b.id(&[x, wrap(y, ym), wrap(z, zm)]);

    let mut terms = Vec::new();
    for cx in 0..nx as i32 {
        for cy in 0..ny as i32 {
            for cz in 0..nz as i32 {
                let (ox, oy, oz) = (2 * cx, 2 * cy, 2 * cz);
                for d in 0..8 {
                    let (dx, dy, dz) = (2 * (d & 1), 2 * ((d >> 1) & 1), 2 * ((d >> 2) & 1));
                    terms.push(HamTerm::z_product(
                        vec![
                            site(ox + dx, oy + dy, oz + dz),
                            site(ox + dx, oy + 1, oz + 1),
                            site(ox + 1, oy + dy, oz + 1),
                            site(ox + 1, oy + 1, oz + dz),
                        ],
                        -1,
                    ));
                }
            }
        }
    }

    let mut symmetries = Vec::new();
    for (axis, name, count) in [
        (0, "(100) x", xm + 1),
        (1, "(010) y", yn),
        (2, "(001) z", zn),
    ] {
        for c in 0..count {
            let support: Vec<usize> = b
                .sites()
                .iter()
                .filter(|s| s.coord[axis] == c)
                .map(|s| s.id)
                .collect();
            if !support.is_empty() {
                symmetries.push(SymmetryGen {
                    label: format!("plane {name}={c}"),
                    support,
                });
            }
        }
    }

    // boundary faces: (axis, value)
    let mut faces = vec![(0, 0), (0, xm)];
    if !slab {
        faces.extend([(1, 0), (1, ym), (2, 0), (2, zm)]);
    }
    let mut target = Vec::new();
    for &(axis, value) in &faces {
        let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
        for s in b.sites().iter().filter(|s| s.coord[axis] == value) {
            for (du, dv) in [(1, 1), (1, -1)] {
                let mut c = s.coord.clone();
                c[u] += du;
                c[v] += dv;
                if slab {
                    c[1] = c[1].rem_euclid(ym);
                    c[2] = c[2].rem_euclid(zm);
                }
                if let Some(t) = b.get(&c) {
                    target.push([s.id, t]);
                }
            }
        }
    }

    let family = Family::Fcc {
        nx,
        ny,
        nz,
        termination,
    };
    Ok(b.finish(
        family,
        terms,
        symmetries,
        |s| faces.iter().any(|&(axis, value)| s.coord[axis] == value),
        target,
        false,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cube_counts() {
        let s = build_fcc_with(1, 1, 1, FccTermination::Open).unwrap();
        let corners = s.sites.iter().filter(|q| q.color == Color::Red).count();
        assert_eq!(corners, 8);
        assert_eq!(s.num_sites(), 14);
        assert_eq!(s.terms.len(), 8);
        for t in &s.terms {
            let sites = t.sites();
            assert_eq!(sites.len(), 4);
            let mut colors: Vec<Color> = sites.iter().map(|&q| s.sites[q].color).collect();
            colors.sort();
            colors.dedup();
            assert_eq!(colors.len(), 4);
        }
    }

    #[test]
    fn tetrahedra_meet_planes_evenly() {
        for s in [
            build_fcc(2, 2, 3).unwrap(),
            build_fcc_with(2, 1, 2, FccTermination::Open).unwrap(),
        ] {
            for g in &s.symmetries {
                for t in &s.terms {
                    let hit = t.sites().iter().filter(|q| g.support.contains(q)).count();
                    assert!(hit == 0 || hit == 2, "{} hits {hit}", g.label);
                }
            }
        }
    }

    #[test]
    fn slab_size() {
        let s = build_fcc(4, 4, 4).unwrap();
        assert_eq!(s.num_sites(), 9 * 32);
        assert_eq!(s.boundary.len(), 64);
        // each boundary face is a rotated square lattice: 4 bonds per corner site
        assert_eq!(s.target_graph.len(), 2 * 16 * 4);
        assert!(build_fcc(2, 1, 2).is_err());
    }
}
