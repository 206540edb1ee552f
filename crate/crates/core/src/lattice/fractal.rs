//! Layered fractal stack driven by a linear cellular automaton `f(x)`.
//!
//! Each layer `k = 0..=L` is a 2D lattice with a blue (`s⁰`) and a red
//! (`s¹`) site per cell. Site coordinates are `(i, j, k, m)`. The layer's
//! fractal cluster state has stabilizers
//!
//! ```text
//! X(x^i y^j) Z(x^i y^j (1 + f y) s)        blue
//! X(x^i y^j s) Z(x^i y^j (1 + f̄ ȳ))        red
//! ```
//!
//! The pump is `Σ V_ijk + V′_ijk` evolved for time π/2 with
//!
//! ```text
//! V_ijk  = CZ(x^i y^j z^k (1 + z),        x^i y^j z^k (1 + f y) s)
//! V′_ijk = CZ(x^i y^j z^(k+1) (1 + f̄ ȳ),  x^i y^j z^k (1 + z) s)
//! ```
//!
//! where `CZ(α, β)` applies CZ between every site of `α` and every site of
//! `β`. The CZ gates cancel in pairs except inside layers 0 and L, which end
//! up holding the cluster state above. `V_ijk` exists for every blue cell and
//! `V′_ijk` for every red cell; partners that fall off the lattice are
//! dropped from both, so cancellation is exact on any finite patch.
//!
//! Geometry in y is either open and staggered (blue rows `0..ny`, red rows
//! `1..=ny`) or periodic with period `ny`. Geometry in x is periodic by
//! default. Blue symmetries are seeded on the first blue row and grow upward
//! with `f`; red symmetries are seeded on the last red row and grow downward
//! with `f̄`. A seed is kept only if the automaton closes consistently on the
//! finite lattice: it must die out after `ny` steps in the open geometry, or
//! return to itself after `ny` steps in the periodic one.

use serde::{Deserialize, Serialize};

use super::{Color, Family, HamTerm, LatticeError, LatticeSpec, SpecBuilder, SymmetryGen};
use crate::f2poly::{ca_expand, F2LaurentPoly, Monomial, PolyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractalOptions {
    pub x_periodic: bool,
    pub y_periodic: bool,
}

impl Default for FractalOptions {
    fn default() -> Self {
        FractalOptions {
            x_periodic: true,
            y_periodic: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VGate {
    V,
    #[serde(rename = "V'")]
    VPrime,
}

/// Which `V`/`V′` gate a CZ-product term realizes, and its anchor `(i, j, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GateOrigin {
    pub gate: VGate,
    pub i: i32,
    pub j: i32,
    pub k: i32,
}

impl VGate {
    /// Blue and red factors `(β, γ·s)` of the gate anchored at the origin.
    pub fn shapes(self, f: &F2LaurentPoly) -> (F2LaurentPoly, F2LaurentPoly) {
        let one = F2LaurentPoly::one();
        let z = F2LaurentPoly::z();
        let y = F2LaurentPoly::y();
        let s = F2LaurentPoly::s();
        match self {
            VGate::V => (&one + &z, &(&one + &(f * &y)) * &s),
            VGate::VPrime => (&(&one + &(&f.conj() * &y.conj())) * &z, &(&one + &z) * &s),
        }
    }
}

pub fn build_honeycomb_stack(
    nx: usize,
    ny: usize,
    layers: usize,
) -> Result<LatticeSpec, LatticeError> {
    build_fractal_stack(&"1 + x".parse().expect("literal"), nx, ny, layers)
}

pub fn build_fractal_stack(
    f: &F2LaurentPoly,
    nx: usize,
    ny: usize,
    layers: usize,
) -> Result<LatticeSpec, LatticeError> {
    build_fractal_stack_with(f, nx, ny, layers, FractalOptions::default())
}

struct Geometry {
    nx: i32,
    ny: i32,
    opts: FractalOptions,
    exps: Vec<i32>,
}

impl Geometry {
    fn blue_rows(&self) -> std::ops::Range<i32> {
        0..self.ny
    }

    fn red_rows(&self) -> std::ops::Range<i32> {
        if self.opts.y_periodic {
            0..self.ny
        } else {
            1..self.ny + 1
        }
    }

    fn wrap_x(&self, i: i32) -> Option<i32> {
        if self.opts.x_periodic {
            Some(i.rem_euclid(self.nx))
        } else {
            (0..self.nx).contains(&i).then_some(i)
        }
    }

    /// Canonical cell for `(i, j)` or `None` if it falls off an open edge.
    fn cell(&self, i: i32, j: i32, red: bool) -> Option<(i32, i32)> {
        let i = self.wrap_x(i)?;
        let j = if self.opts.y_periodic {
            j.rem_euclid(self.ny)
        } else {
            j
        };
        let rows = if red {
            self.red_rows()
        } else {
            self.blue_rows()
        };
        rows.contains(&j).then_some((i, j))
    }

    /// One automaton step on a row of `nx` cells: multiply by `f`, or by
    /// `f̄` when `backward`.
    fn step(&self, row: &[bool], backward: bool) -> Vec<bool> {
        let mut out = vec![false; row.len()];
        for (i, _) in row.iter().enumerate().filter(|(_, b)| **b) {
            for &a in &self.exps {
                let t = if backward { i as i32 - a } else { i as i32 + a };
                if let Some(t) = self.wrap_x(t) {
                    out[t as usize] ^= true;
                }
            }
        }
        out
    }
}

/// Matrix of `power` automaton steps acting on a row (columns are images of
/// unit rows). Exposed for tests and tooling.
pub fn ca_matrix_power(
    f: &F2LaurentPoly,
    nx: usize,
    x_periodic: bool,
    power: usize,
    backward: bool,
) -> Result<Vec<Vec<bool>>, LatticeError> {
    let g = geometry(
        f,
        nx,
        2,
        FractalOptions {
            x_periodic,
            y_periodic: false,
        },
    )?;
    Ok((0..nx)
        .map(|c| {
            let mut row = vec![false; nx];
            row[c] = true;
            for _ in 0..power {
                row = g.step(&row, backward);
            }
            row
        })
        .collect())
}

fn geometry(
    f: &F2LaurentPoly,
    nx: usize,
    ny: usize,
    opts: FractalOptions,
) -> Result<Geometry, LatticeError> {
    if !f.is_x_only() {
        return Err(PolyError::NotUnivariate(f.to_string()).into());
    }
    let reduced = if opts.x_periodic {
        f.reduce_periodic(Some(nx as i32), None)?
    } else {
        f.clone()
    };
    if reduced.is_zero() {
        return Err(LatticeError::BadDimensions(format!(
            "rule `{f}` vanishes on a ring of {nx} cells"
        )));
    }
    let exps: Vec<i32> = reduced.terms().map(|m| m.i).collect();
    Ok(Geometry {
        nx: nx as i32,
        ny: ny as i32,
        opts,
        exps,
    })
}

/// Basis of the seeds `q` whose automaton closes on the finite lattice.
fn valid_seeds(g: &Geometry, backward: bool) -> Vec<Vec<bool>> {
    let n = g.nx as usize;
    // rows of the matrix A with A·e_c = image of the unit seed at column c
    let images: Vec<Vec<bool>> = (0..n)
        .map(|c| {
            let mut row = vec![false; n];
            row[c] = true;
            for _ in 0..g.ny {
                row = g.step(&row, backward);
            }
            if g.opts.y_periodic {
                row[c] ^= true;
            }
            row
        })
        .collect();
    nullspace(&images, n)
}

/// Null space of the linear map sending unit vector `c` to `images[c]`.
fn nullspace(images: &[Vec<bool>], n: usize) -> Vec<Vec<bool>> {
    // augment each image with the unit vector that produced it, then
    // eliminate on the image part; rows whose image vanishes give the kernel
    let mut rows: Vec<(Vec<bool>, Vec<bool>)> = images
        .iter()
        .enumerate()
        .map(|(c, img)| {
            let mut unit = vec![false; n];
            unit[c] = true;
            (img.clone(), unit)
        })
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].0[col]) else {
            continue;
        };
        rows.swap(p, rank);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.0[col] {
                for t in 0..n {
                    row.0[t] ^= pivot.0[t];
                    row.1[t] ^= pivot.1[t];
                }
            }
        }
        rank += 1;
    }
    let mut kernel: Vec<Vec<bool>> = rows[rank..].iter().map(|r| r.1.clone()).collect();
    // reduced echelon form of the kernel basis for stable labels
    let mut k_rank = 0;
    for col in 0..n {
        let Some(p) = (k_rank..kernel.len()).find(|&r| kernel[r][col]) else {
            continue;
        };
        kernel.swap(p, k_rank);
        let pivot = kernel[k_rank].clone();
        for (r, row) in kernel.iter_mut().enumerate() {
            if r != k_rank && row[col] {
                for t in 0..n {
                    row[t] ^= pivot[t];
                }
            }
        }
        k_rank += 1;
    }
    kernel
}

fn row_poly(row: &[bool]) -> F2LaurentPoly {
    F2LaurentPoly::from_monomials(
        row.iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| Monomial::new(i as i32, 0, 0, 0)),
    )
}

pub fn build_fractal_stack_with(
    f: &F2LaurentPoly,
    nx: usize,
    ny: usize,
    layers: usize,
    opts: FractalOptions,
) -> Result<LatticeSpec, LatticeError> {
    let min_ny = if opts.y_periodic { 2 } else { 1 };
    if nx < 2 || ny < min_ny || layers < 1 {
        return Err(LatticeError::BadDimensions(format!(
            "fractal stack needs nx >= 2, ny >= {min_ny}, L >= 1; got {nx}x{ny}, L={layers}"
        )));
    }
    let g = geometry(f, nx, ny, opts)?;
    let span = g.exps.iter().max().unwrap() - g.exps.iter().min().unwrap();
    if span >= g.nx {
        return Err(LatticeError::BadDimensions(format!(
            "rule `{f}` is wider than {nx} cells"
        )));
    }
    let l = layers as i32;
    let mut b = SpecBuilder::new();
    for k in 0..=l {
        for j in g.blue_rows() {
            for i in 0..g.nx {
                b.add(vec![i, j, k, 0], Color::Blue);
            }
        }
        for j in g.red_rows() {
            for i in 0..g.nx {
                b.add(vec![i, j, k, 1], Color::Red);
            }
        }
    }
    let blue = |i: i32, j: i32, k: i32| g.cell(i, j, false).map(|(i, j)| b.id(&[i, j, k, 0]));
    let red = |i: i32, j: i32, k: i32| g.cell(i, j, true).map(|(i, j)| b.id(&[i, j, k, 1]));

    let mut terms = Vec::new();
    let mut push_gate =
        |origin: GateOrigin, blues: Vec<Option<usize>>, reds: Vec<Option<usize>>| {
            let mut pairs = Vec::new();
            for bq in blues.iter().flatten() {
                for rq in reds.iter().flatten() {
                    pairs.push([*bq, *rq]);
                }
            }
            if !pairs.is_empty() {
                terms.push(HamTerm::CzProduct {
                    pairs,
                    angle: std::f64::consts::FRAC_PI_2,
                    sign: 1,
                    origin: Some(origin),
                });
            }
        };
    for k in 0..l {
        for j in g.blue_rows() {
            for i in 0..g.nx {
                let mut reds = vec![red(i, j, k)];
                reds.extend(g.exps.iter().map(|&a| red(i + a, j + 1, k)));
                push_gate(
                    GateOrigin {
                        gate: VGate::V,
                        i,
                        j,
                        k,
                    },
                    vec![blue(i, j, k), blue(i, j, k + 1)],
                    reds,
                );
            }
        }
        for j in g.red_rows() {
            for i in 0..g.nx {
                let mut blues = vec![blue(i, j, k + 1)];
                blues.extend(g.exps.iter().map(|&a| blue(i - a, j - 1, k + 1)));
                push_gate(
                    GateOrigin {
                        gate: VGate::VPrime,
                        i,
                        j,
                        k,
                    },
                    blues,
                    vec![red(i, j, k), red(i, j, k + 1)],
                );
            }
        }
    }

    let mut target = Vec::new();
    for k in [0, l] {
        for j in g.blue_rows() {
            for i in 0..g.nx {
                let bq = blue(i, j, k).expect("blue cell exists");
                let partners = std::iter::once(red(i, j, k))
                    .chain(g.exps.iter().map(|&a| red(i + a, j + 1, k)));
                for rq in partners.flatten() {
                    target.push([bq, rq]);
                }
            }
        }
    }

    let mut symmetries = Vec::new();
    for (backward, tag) in [(false, "blue"), (true, "red")] {
        let seeds = valid_seeds(&g, backward);
        let full = seeds.len() == nx;
        let seeds: Vec<Vec<bool>> = if full {
            (0..nx)
                .map(|c| {
                    let mut r = vec![false; nx];
                    r[c] = true;
                    r
                })
                .collect()
        } else {
            seeds
        };
        for seed in seeds {
            let mut support = Vec::new();
            let mut row = seed.clone();
            let rows: Vec<i32> = if backward {
                g.red_rows().rev().collect()
            } else {
                g.blue_rows().collect()
            };
            for &j in &rows {
                for (i, _) in row.iter().enumerate().filter(|(_, on)| **on) {
                    for k in 0..=l {
                        let q = if backward {
                            red(i as i32, j, k)
                        } else {
                            blue(i as i32, j, k)
                        };
                        support.push(q.expect("row inside lattice"));
                    }
                }
                row = g.step(&row, backward);
            }
            support.sort_unstable();
            symmetries.push(SymmetryGen {
                label: format!("fractal q={} {tag}", row_poly(&seed)),
                support,
            });
        }
    }

    let family = Family::Fractal {
        f: f.to_string(),
        nx,
        ny,
        layers,
        options: opts,
    };
    Ok(b.finish(
        family,
        terms,
        symmetries,
        |s| s.coord[2] == 0 || s.coord[2] == l,
        target,
        false,
    ))
}

/// Symmetry supports of a fractal spec recomputed in the polynomial
/// formalism: blue `q·𝓕·Σ_l z^l`, red `q·y^top·conj(𝓕)·s·Σ_l z^l`, reduced on
/// periodic axes. Open x truncates the automaton at the edges, which the
/// polynomial light cone does not model, so only periodic x is supported. The seed `q` is read back from the generator label.
pub fn fractal_symmetry_polys(spec: &LatticeSpec) -> Result<Vec<F2LaurentPoly>, LatticeError> {
    let Family::Fractal {
        f,
        nx,
        ny,
        layers,
        options,
    } = &spec.family
    else {
        return Err(LatticeError::Malformed("not a fractal lattice".into()));
    };
    if !options.x_periodic {
        return Err(LatticeError::Malformed(
            "polynomial supports are defined for periodic x only".into(),
        ));
    }
    let f: F2LaurentPoly = f.parse()?;
    let xp = Some(*nx as i32);
    let yp = options.y_periodic.then_some(*ny as i32);
    let cone = ca_expand(&f, *ny as u32 - 1, xp)?;
    let mut stack = F2LaurentPoly::zero();
    for k in 0..=*layers as i32 {
        stack.toggle(Monomial::new(0, 0, k, 0));
    }
    let top = if options.y_periodic {
        *ny as i32 - 1
    } else {
        *ny as i32
    };
    spec.symmetries
        .iter()
        .map(|sym| {
            let body = sym
                .label
                .strip_prefix("fractal q=")
                .ok_or_else(|| LatticeError::Malformed(format!("label `{}`", sym.label)))?;
            let (q, tag) = body
                .rsplit_once(' ')
                .ok_or_else(|| LatticeError::Malformed(format!("label `{}`", sym.label)))?;
            let q: F2LaurentPoly = q.parse()?;
            let alpha = match tag {
                "blue" => &(&q * &cone) * &stack,
                "red" => {
                    let shift = F2LaurentPoly::mono(0, top, 0, 1);
                    &(&(&q * &cone.conj()) * &shift) * &stack
                }
                _ => return Err(LatticeError::Malformed(format!("label `{}`", sym.label))),
            };
            Ok(alpha.reduce_periodic(xp, yp)?)
        })
        .collect()
}
