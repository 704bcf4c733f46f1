//! Invariants from the numerical data of a log resolution: divisors `E_i`
//! with `a_i = ord_{E_i}` of the ideal and `k_i = ord_{E_i}` of the relative
//! canonical divisor, together with the faces of the dual complex (sets of
//! divisors with nonempty common intersection).

use std::collections::{BTreeSet, HashSet};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{rational, ExtRational};

pub const BRUTEFORCE_MAX_M: u64 = 60;
pub const BRUTEFORCE_MAX_DIVISORS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("malformed resolution data: {0}")]
    Json(String),
    #[error("divisor id `{0}` appears twice")]
    DuplicateId(String),
    #[error("face mentions unknown divisor `{0}`")]
    UnknownDivisor(String),
    #[error("face {face:?} is missing its subface {missing:?}")]
    NotDownwardClosed {
        face: Vec<String>,
        missing: Vec<String>,
    },
    #[error("no divisor has a >= 1")]
    NoPositiveMultiplicity,
    #[error("no divisor has its center in Z")]
    NoCenterInZ,
    #[error("ambient dimension must be at least 2")]
    AmbientTooSmall,
    #[error("q must be positive")]
    NonPositiveQ,
    #[error("m must be positive")]
    ZeroOrder,
    #[error(
        "brute force is limited to m <= {BRUTEFORCE_MAX_M} and {BRUTEFORCE_MAX_DIVISORS} divisors"
    )]
    TooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Divisor {
    pub id: String,
    pub a: u64,
    pub k: u64,
    #[serde(rename = "center_in_Z", default)]
    pub center_in_z: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResolution {
    ambient_dim: usize,
    divisors: Vec<Divisor>,
    #[serde(default)]
    faces: Vec<Vec<String>>,
}

/// Validated resolution data. Faces are stored as bitmasks over the divisor
/// list and always include every singleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    ambient_dim: usize,
    divisors: Vec<Divisor>,
    faces: BTreeSet<u64>,
}

impl ResolutionData {
    pub fn new(
        ambient_dim: usize,
        divisors: Vec<Divisor>,
        faces: &[Vec<String>],
    ) -> Result<Self, ResolutionError> {
        if divisors.len() > 64 {
            return Err(ResolutionError::Json("at most 64 divisors".into()));
        }
        for (i, d) in divisors.iter().enumerate() {
            if divisors[..i].iter().any(|e| e.id == d.id) {
                return Err(ResolutionError::DuplicateId(d.id.clone()));
            }
        }
        let index = |id: &str| {
            divisors
                .iter()
                .position(|d| d.id == id)
                .ok_or_else(|| ResolutionError::UnknownDivisor(id.to_string()))
        };
        let mut set: BTreeSet<u64> = (0..divisors.len()).map(|i| 1u64 << i).collect();
        for face in faces {
            let mut mask = 0u64;
            for id in face {
                mask |= 1 << index(id)?;
            }
            if mask != 0 {
                set.insert(mask);
            }
        }
        for &face in &set {
            for i in 0..divisors.len() {
                let sub = face & !(1 << i);
                if sub != face && sub != 0 && !set.contains(&sub) {
                    let names = |m: u64| {
                        (0..divisors.len())
                            .filter(|j| m >> j & 1 == 1)
                            .map(|j| divisors[j].id.clone())
                            .collect::<Vec<_>>()
                    };
                    return Err(ResolutionError::NotDownwardClosed {
                        face: names(face),
                        missing: names(sub),
                    });
                }
            }
        }
        Ok(ResolutionData {
            ambient_dim,
            divisors,
            faces: set,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ResolutionError> {
        let raw: RawResolution =
            serde_json::from_str(text).map_err(|e| ResolutionError::Json(e.to_string()))?;
        Self::new(raw.ambient_dim, raw.divisors, &raw.faces)
    }

    pub fn to_json(&self) -> String {
        let faces: Vec<Vec<String>> = self
            .faces
            .iter()
            .filter(|m| m.count_ones() >= 2)
            .map(|&m| {
                (0..self.divisors.len())
                    .filter(|j| m >> j & 1 == 1)
                    .map(|j| self.divisors[j].id.clone())
                    .collect()
            })
            .collect();
        serde_json::to_string(&RawResolution {
            ambient_dim: self.ambient_dim,
            divisors: self.divisors.clone(),
            faces,
        })
        .expect("plain data serializes")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn divisors(&self) -> &[Divisor] {
        &self.divisors
    }

    /// Faces as divisor bitmasks, singletons included.
    pub fn faces(&self) -> impl Iterator<Item = u64> + '_ {
        self.faces.iter().copied()
    }

    pub fn is_face(&self, mask: u64) -> bool {
        mask == 0 || self.faces.contains(&mask)
    }

    /// The standard data for the cusp `x^2 + y^3` in the plane: the strict
    /// transform and the three exceptional curves of the minimal
    /// embedded resolution, the last one meeting each of the others.
    pub fn cusp() -> Self {
        let d = |id: &str, a, k| Divisor {
            id: id.into(),
            a,
            k,
            center_in_z: id != "E0",
        };
        Self::new(
            2,
            vec![d("E0", 1, 0), d("E1", 2, 1), d("E2", 3, 2), d("E3", 6, 4)],
            &[
                vec!["E0".into(), "E3".into()],
                vec!["E1".into(), "E3".into()],
                vec!["E2".into(), "E3".into()],
            ],
        )
        .expect("valid")
    }
}

/// `min (k_i + 1) / a_i` over divisors with `a_i >= 1`.
pub fn lct_from_resolution(data: &ResolutionData) -> Result<BigRational, ResolutionError> {
    data.divisors
        .iter()
        .filter(|d| d.a >= 1)
        .map(|d| rational(d.k as i64 + 1, d.a as i64))
        .min()
        .ok_or(ResolutionError::NoPositiveMultiplicity)
}

/// Codimension of the contact locus `Cont^{>=m}`:
/// `min Σ (k_i + 1) ν_i` over `ν` supported on a face with `Σ a_i ν_i >= m`.
/// `None` when no face can reach `m`.
pub fn contact_codim(data: &ResolutionData, m: u64) -> Result<Option<u64>, ResolutionError> {
    if m == 0 {
        return Err(ResolutionError::ZeroOrder);
    }
    let m = m as usize;
    let mut best: Option<u64> = None;
    for face in data.faces() {
        let items: Vec<(usize, u64)> = data
            .divisors
            .iter()
            .enumerate()
            .filter(|(i, d)| face >> i & 1 == 1 && d.a > 0)
            .map(|(_, d)| (d.a as usize, d.k + 1))
            .collect();
        if items.is_empty() {
            continue;
        }
        // cover[j]: cheapest cost reaching demand at least j
        let mut cover = vec![0u64; m + 1];
        for j in 1..=m {
            cover[j] = items
                .iter()
                .map(|&(a, c)| c + cover[j.saturating_sub(a)])
                .min()
                .unwrap();
        }
        best = Some(best.map_or(cover[m], |b| b.min(cover[m])));
    }
    Ok(best)
}

/// Exhaustive enumeration of `ν` with `ν_i <= m`, pruned only where the
/// demand is already met or the partial cost cannot improve.
pub fn contact_codim_bruteforce(
    data: &ResolutionData,
    m: u64,
) -> Result<Option<u64>, ResolutionError> {
    if m == 0 {
        return Err(ResolutionError::ZeroOrder);
    }
    if m > BRUTEFORCE_MAX_M || data.divisors.len() > BRUTEFORCE_MAX_DIVISORS {
        return Err(ResolutionError::TooLarge);
    }
    let faces: HashSet<u64> = data.faces().collect();
    let divs: Vec<(u64, u64)> = data.divisors.iter().map(|d| (d.a, d.k + 1)).collect();
    let mut best: Option<u64> = None;
    enumerate(&divs, &faces, m, 0, 0, 0, 0, &mut best);
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    divs: &[(u64, u64)],
    faces: &HashSet<u64>,
    m: u64,
    i: usize,
    support: u64,
    reached: u64,
    cost: u64,
    best: &mut Option<u64>,
) {
    if best.is_some_and(|b| cost >= b) {
        return;
    }
    if support != 0 && !faces.contains(&support) {
        return;
    }
    if reached >= m {
        *best = Some(cost);
        return;
    }
    if i == divs.len() {
        return;
    }
    let (a, c) = divs[i];
    for nu in 0..=m {
        let s = if nu > 0 { support | 1 << i } else { support };
        enumerate(
            divs,
            faces,
            m,
            i + 1,
            s,
            reached + a * nu,
            cost + c * nu,
            best,
        );
        if reached + a * nu >= m {
            break;
        }
    }
}

/// `min (k_i + 1) - q·a_i` over divisors with center in `Z`, or `-inf` when
/// that is negative.
pub fn mld_from_resolution(
    data: &ResolutionData,
    q: &BigRational,
) -> Result<ExtRational, ResolutionError> {
    if data.ambient_dim < 2 {
        return Err(ResolutionError::AmbientTooSmall);
    }
    if !q.is_positive() {
        return Err(ResolutionError::NonPositiveQ);
    }
    let mu = data
        .divisors
        .iter()
        .filter(|d| d.center_in_z)
        .map(|d| rational(d.k as i64 + 1, 1) - q * rational(d.a as i64, 1))
        .min()
        .ok_or(ResolutionError::NoCenterInZ)?;
    Ok(if mu < BigRational::zero() {
        ExtRational::NegInfinity
    } else {
        ExtRational::Finite(mu)
    })
}
