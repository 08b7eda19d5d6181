//! Point-group projection of the photomagnetic susceptibility χ_ijkl.
//!
//! The switching term is W = Σ χ_ijkl E_i E_j* m_k m_l. Averaging χ over a
//! point group leaves only the invariant components; for group 4 the four
//! m_x m_y terms collapse to A·cos 2φ·m_x m_y with A = χ_xxxy + χ_xxyx.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::magnetics::Mat3;
use crate::math::{cos, sin, to_rad};
use crate::{Error, Result, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointGroupName {
    Trivial,
    Four,
    FourMm,
}

impl PointGroupName {
    pub const ALL: [PointGroupName; 3] = [PointGroupName::Trivial, PointGroupName::Four, PointGroupName::FourMm];

    pub fn symbol(self) -> &'static str {
        match self {
            PointGroupName::Trivial => "1",
            PointGroupName::Four => "4",
            PointGroupName::FourMm => "4mm",
        }
    }
}

impl fmt::Display for PointGroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for PointGroupName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PointGroupName::ALL
            .into_iter()
            .find(|g| g.symbol() == s.trim())
            .ok_or_else(|| Error::Domain(alloc::format!("unknown point group {s:?}; supported: 1, 4, 4mm")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointGroup {
    pub name: PointGroupName,
    pub elements: Vec<Mat3>,
}

const IDENTITY: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
const ROT_Z_90: Mat3 = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]];
const MIRROR_X: Mat3 = [[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn determinant(a: &Mat3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

/// Point group by symbol ("1", "4" or "4mm").
pub fn group_elements(name: &str) -> Result<PointGroup> {
    Ok(PointGroup::new(name.parse()?))
}

impl PointGroup {
    pub fn new(name: PointGroupName) -> Self {
        let mut rotations = alloc::vec![IDENTITY];
        for _ in 0..3 {
            let last = rotations[rotations.len() - 1];
            rotations.push(mat_mul(&ROT_Z_90, &last));
        }
        let elements = match name {
            PointGroupName::Trivial => alloc::vec![IDENTITY],
            PointGroupName::Four => rotations,
            PointGroupName::FourMm => {
                // mirror_x composed with the C4 rotations gives the mirrors
                // normal to x, to the two diagonals and to y
                let mirrors: Vec<Mat3> = rotations.iter().map(|r| mat_mul(r, &MIRROR_X)).collect();
                rotations.into_iter().chain(mirrors).collect()
            }
        };
        PointGroup { name, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Rank-4 polar tensor, components indexed (i, j, k, l) over {x, y, z}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiTensor {
    pub components: [[[[f64; 3]; 3]; 3]; 3],
}

/// Parses an index string such as "xxxy".
pub fn parse_indices(s: &str) -> Result<[usize; 4]> {
    let b = s.as_bytes();
    if b.len() != 4 {
        return Err(Error::Domain(alloc::format!("tensor index {s:?} must have four letters")));
    }
    let mut out = [0; 4];
    for (o, c) in out.iter_mut().zip(b) {
        *o = match c {
            b'x' => 0,
            b'y' => 1,
            b'z' => 2,
            _ => return Err(Error::Domain(alloc::format!("tensor index {s:?} must use x, y, z"))),
        };
    }
    Ok(out)
}

pub fn index_name(idx: [usize; 4]) -> [char; 4] {
    idx.map(|i| ['x', 'y', 'z'][i])
}

impl ChiTensor {
    pub const ZERO: ChiTensor = ChiTensor { components: [[[[0.0; 3]; 3]; 3]; 3] };

    pub fn from_fn(mut f: impl FnMut([usize; 4]) -> f64) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        t.components[i][j][k][l] = f([i, j, k, l]);
                    }
                }
            }
        }
        t
    }

    pub fn get(&self, idx: [usize; 4]) -> f64 {
        self.components[idx[0]][idx[1]][idx[2]][idx[3]]
    }

    pub fn set(&mut self, idx: [usize; 4], v: f64) {
        self.components[idx[0]][idx[1]][idx[2]][idx[3]] = v;
    }

    /// Component by name, e.g. `c("xxxy")`. Panics on a malformed name.
    pub fn c(&self, name: &str) -> f64 {
        self.get(parse_indices(name).expect("valid tensor index"))
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|(_, v)| v.is_finite())
    }

    pub fn iter(&self) -> impl Iterator<Item = ([usize; 4], f64)> + '_ {
        (0..81).map(move |n| {
            let idx = [n / 27, (n / 9) % 3, (n / 3) % 3, n % 3];
            (idx, self.get(idx))
        })
    }

    /// χ'_ijkl = g_ia g_jb g_kc g_ld χ_abcd.
    pub fn transformed(&self, g: &Mat3) -> ChiTensor {
        // contract one index at a time: 4·81·3 multiplications
        let mut t = *self;
        for slot in 0..4 {
            let src = t;
            t = ChiTensor::from_fn(|idx| {
                (0..3)
                    .map(|a| {
                        let mut s = idx;
                        s[slot] = a;
                        g[idx[slot]][a] * src.get(s)
                    })
                    .sum()
            });
        }
        t
    }

    pub fn max_abs_diff(&self, o: &ChiTensor) -> f64 {
        self.iter().zip(o.iter()).map(|((_, a), (_, b))| libm::fabs(a - b)).fold(0.0, f64::max)
    }

    /// A = χ_xxxy + χ_xxyx.
    pub fn switching_amplitude(&self) -> f64 {
        self.c("xxxy") + self.c("xxyx")
    }
}

/// Group average of χ; the result is invariant under every element.
pub fn project_tensor(chi: &ChiTensor, group: &PointGroup) -> ChiTensor {
    let n = group.order() as f64;
    let mut acc = ChiTensor::ZERO;
    for g in &group.elements {
        let t = chi.transformed(g);
        for (idx, v) in t.iter() {
            acc.set(idx, acc.get(idx) + v / n);
        }
    }
    acc
}

/// Switching energy per unit |E|² from the four m_x m_y terms, for linear
/// polarization at `phi_deg` from [100].
pub fn switching_energy(chi: &ChiTensor, phi_deg: f64, m: Vec3) -> f64 {
    let e = [cos(to_rad(phi_deg)), sin(to_rad(phi_deg)), 0.0];
    let mm = [m.x, m.y, m.z];
    let mut w = 0.0;
    for i in 0..2 {
        for (k, l) in [(0, 1), (1, 0)] {
            w += chi.components[i][i][k][l] * e[i] * e[i] * mm[k] * mm[l];
        }
    }
    w
}

/// Sign of m_y that lowers the switching energy when m_x > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preference {
    Plus,
    Minus,
    NoPreference,
}

pub fn polarization_preference(chi: &ChiTensor, phi_deg: f64) -> Preference {
    let a = chi.switching_amplitude();
    let c = cos(2.0 * to_rad(phi_deg));
    let k = a * c;
    if a == 0.0 || libm::fabs(c) < 1e-12 {
        Preference::NoPreference
    } else if k < 0.0 {
        Preference::Plus
    } else {
        Preference::Minus
    }
}
