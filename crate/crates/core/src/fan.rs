//! Fans of toric varieties and their curve-divisor intersection combinatorics.
//!
//! Only simplicial fans are representable: every cone is listed through its
//! ray indices and the rays of each listed cone must be linearly independent.
//! That is enough for everything downstream, since all fans of interest here
//! are smooth.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{feasible, solve_rational, LinCon, Rel, Solution};
use crate::num::IntScalar;
use crate::{IMat, IVec, Int};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("fan is not valid: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("fan is not smooth at maximal cone {cone:?}")]
    NotSmooth { cone: Vec<usize> },
    #[error("no wall with rays {0:?}")]
    NoSuchWall(Vec<usize>),
    #[error("wall relation has no unique solution (invalid fan)")]
    UnsolvableWall,
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
}

pub type Result<T> = std::result::Result<T, FanError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonPrimitiveRay(usize),
    ZeroRay(usize),
    DuplicateRay(usize, usize),
    RayIndexOutOfRange { cone: usize },
    RepeatedRayInCone { cone: usize },
    DependentCone { cone: usize },
    DuplicateCone(usize, usize),
    ImproperIntersection { cones: (usize, usize) },
}

/// A simplicial fan: primitive ray generators plus maximal cones as ray-index
/// sets. Faces are implicit (every subset of a listed cone is a face).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<IVec>,
    max_cones: Vec<Vec<usize>>,
}

/// Integer divisor supported on the toric boundary, one coefficient per ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusDivisor {
    pub coeffs: IVec,
}

impl TorusDivisor {
    pub fn new(coeffs: IVec) -> Self {
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(IVec::from_i64(coeffs))
    }

    pub fn zero(n: usize) -> Self {
        Self::new(IVec::zeros(n))
    }
}

/// The divisor-class presentation cut out by the exact sequence
/// `0 -> M -> Div_T -> Pic -> 0`: the relation matrix has row `k` equal to
/// the pairings of all rays against the `k`-th basis character.
#[derive(Debug, Clone)]
pub struct PicPresentation {
    /// number of boundary divisors (= number of rays)
    pub generators: usize,
    /// `dim x generators` matrix of relations, row per basis character
    pub relation: IMat,
    pub pic_rank: usize,
    pub invariant_factors: Vec<Int>,
    /// the rows of the relation matrix as divisors; each one is principal
    pub principal_tuple: Vec<TorusDivisor>,
}

/// A codimension-one cone between two maximal cones, with the opposite rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    /// ray indices spanning the wall (size dim - 1, sorted)
    pub rays: Vec<usize>,
    /// indices into the maximal cone list
    pub cones: (usize, usize),
    /// the rays completing the wall to each adjacent maximal cone
    pub opposite: (usize, usize),
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<IVec>, max_cones: Vec<Vec<usize>>) -> Self {
        let mut max_cones = max_cones;
        for cone in &mut max_cones {
            cone.sort_unstable();
        }
        Self {
            dim,
            rays,
            max_cones,
        }
    }

    pub fn from_i64(dim: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Self {
        Self::new(
            dim,
            rays.iter().map(|r| IVec::from_i64(r)).collect(),
            max_cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IVec] {
        &self.rays
    }

    pub fn ray(&self, l: usize) -> &IVec {
        &self.rays[l]
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Matrix whose columns are the rays of the given cone, in index order.
    pub fn cone_matrix(&self, cone: &[usize]) -> IMat {
        IMat::from_col_vecs(&cone.iter().map(|&l| self.rays[l].clone()).collect::<Vec<_>>())
    }

    /// Structural validation; returns all violations rather than aborting.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.is_zero() {
                out.push(Violation::ZeroRay(i));
            } else if !ray.content().is_one() {
                out.push(Violation::NonPrimitiveRay(i));
            }
        }
        for i in 0..self.rays.len() {
            for j in i + 1..self.rays.len() {
                if self.rays[i] == self.rays[j] {
                    out.push(Violation::DuplicateRay(i, j));
                }
            }
        }
        for (ci, cone) in self.max_cones.iter().enumerate() {
            if cone.iter().any(|&l| l >= self.rays.len()) {
                out.push(Violation::RayIndexOutOfRange { cone: ci });
                continue;
            }
            let set: BTreeSet<_> = cone.iter().collect();
            if set.len() != cone.len() {
                out.push(Violation::RepeatedRayInCone { cone: ci });
                continue;
            }
            let m = self.cone_matrix(cone);
            if m.rank() != cone.len() {
                out.push(Violation::DependentCone { cone: ci });
            }
        }
        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                if self.max_cones[i] == self.max_cones[j] {
                    out.push(Violation::DuplicateCone(i, j));
                }
            }
        }
        if out.is_empty() {
            for i in 0..self.max_cones.len() {
                for j in i + 1..self.max_cones.len() {
                    if !self.intersects_properly(i, j) {
                        out.push(Violation::ImproperIntersection { cones: (i, j) });
                    }
                }
            }
        }
        out
    }

    pub fn require_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(FanError::Invalid(violations))
        }
    }

    /// Exact check that two listed cones meet exactly along the cone spanned
    /// by their shared rays.
    fn intersects_properly(&self, ci: usize, cj: usize) -> bool {
        let a = &self.max_cones[ci];
        let b = &self.max_cones[cj];
        let a_set: BTreeSet<usize> = a.iter().copied().collect();
        let b_set: BTreeSet<usize> = b.iter().copied().collect();
        let shared: BTreeSet<usize> = a_set.intersection(&b_set).copied().collect();
        let nvars = a.len() + b.len();
        // x = sum alpha_i u_i = sum beta_j u_j with alpha, beta >= 0; improper
        // intersection means some coordinate off the shared face can be
        // forced strictly positive.
        let mut base: Vec<LinCon<Int>> = Vec::new();
        for d in 0..self.dim {
            let mut coeffs = vec![Ratio::zero(); nvars];
            for (k, &l) in a.iter().enumerate() {
                coeffs[k] = Ratio::from_integer(self.rays[l].get(d).clone());
            }
            for (k, &l) in b.iter().enumerate() {
                coeffs[a.len() + k] =
                    Ratio::zero() - Ratio::from_integer(self.rays[l].get(d).clone());
            }
            base.push(LinCon::new(coeffs, Ratio::zero(), Rel::Eq));
        }
        for v in 0..nvars {
            let mut coeffs = vec![Ratio::zero(); nvars];
            coeffs[v] = Ratio::from_integer(Int::from(-1));
            base.push(LinCon::new(coeffs, Ratio::zero(), Rel::Le));
        }
        for (k, &l) in a.iter().enumerate() {
            if shared.contains(&l) {
                continue;
            }
            let mut sys = base.clone();
            let mut coeffs = vec![Ratio::zero(); nvars];
            coeffs[k] = Ratio::from_integer(Int::from(-1));
            sys.push(LinCon::new(coeffs, Ratio::one(), Rel::Le)); // alpha_k >= 1
            if feasible(&sys, nvars) {
                return false;
            }
        }
        true
    }

    /// All codimension-one subcones of maximal cones, with the list of
    /// (cone index, completing ray) pairs containing each.
    fn wall_incidence(&self) -> BTreeMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut map: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for &skip in cone {
                let wall: Vec<usize> = cone.iter().copied().filter(|&l| l != skip).collect();
                map.entry(wall).or_default().push((ci, skip));
            }
        }
        map
    }

    /// Interior walls, each bounded by exactly two maximal cones.
    pub fn walls(&self) -> Vec<Wall> {
        let mut out = Vec::new();
        for (rays, inc) in self.wall_incidence() {
            if inc.len() == 2 {
                out.push(Wall {
                    rays,
                    cones: (inc[0].0, inc[1].0),
                    opposite: (inc[0].1, inc[1].1),
                });
            }
        }
        out
    }

    pub fn wall_by_rays(&self, rays: &[usize]) -> Result<Wall> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        self.walls()
            .into_iter()
            .find(|w| w.rays == key)
            .ok_or(FanError::NoSuchWall(key))
    }

    /// Completeness test for simplicial fans with full-dimensional maximal
    /// cones: every wall bounds exactly two maximal cones and the wall graph
    /// is connected.
    pub fn is_complete(&self) -> bool {
        if self.max_cones.is_empty() {
            return false;
        }
        if self.max_cones.iter().any(|c| c.len() != self.dim) {
            return false;
        }
        let inc = self.wall_incidence();
        if inc.values().any(|v| v.len() != 2) {
            return false;
        }
        let n = self.max_cones.len();
        let mut adj = vec![Vec::new(); n];
        for v in inc.values() {
            adj[v[0].0].push(v[1].0);
            adj[v[1].0].push(v[0].0);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(c) = stack.pop() {
            for &d in &adj[c] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Smoothness: every maximal cone spans a saturated sublattice with its
    /// rays (for full-dimensional cones, determinant plus or minus one). On
    /// failure the offending cone is returned as witness.
    pub fn is_smooth(&self) -> (bool, Option<Vec<usize>>) {
        for cone in &self.max_cones {
            let m = self.cone_matrix(cone);
            let smooth = if m.rows() == m.cols() {
                m.det().map(|d| d.abs().is_one()).unwrap_or(false)
            } else {
                let (rank, factors) = m.smith_invariants();
                rank == cone.len() && factors.iter().all(|f| f.is_one())
            };
            if !smooth {
                return (false, Some(cone.clone()));
            }
        }
        (true, None)
    }

    pub fn require_smooth(&self) -> Result<()> {
        match self.is_smooth() {
            (true, _) => Ok(()),
            (false, Some(cone)) => Err(FanError::NotSmooth { cone }),
            (false, None) => unreachable!(),
        }
    }

    /// Divisor-class presentation for a complete fan.
    pub fn picard_presentation(&self) -> Result<PicPresentation> {
        if !self.is_complete() {
            return Err(FanError::NotComplete(
                "picard presentation needs a complete fan".into(),
            ));
        }
        let s = self.n_rays();
        let mut relation = IMat::zeros(self.dim, s);
        for k in 0..self.dim {
            for l in 0..s {
                relation.set(k, l, self.rays[l].get(k).clone());
            }
        }
        let (rank, invariant_factors) = relation.smith_invariants();
        let principal_tuple = (0..self.dim)
            .map(|k| TorusDivisor::new(relation.row(k)))
            .collect();
        Ok(PicPresentation {
            generators: s,
            relation,
            pic_rank: s - rank,
            invariant_factors,
            principal_tuple,
        })
    }

    /// Membership of a boundary divisor in the lattice of principal divisors.
    pub fn is_principal(&self, d: &TorusDivisor) -> Result<bool> {
        assert_eq!(d.coeffs.dim(), self.n_rays(), "coefficient per ray");
        // solve <u_l, m> = d_l for an integer character m
        let a = IMat::from_row_vecs(&self.rays);
        Ok(a.solve_integer(&d.coeffs)?.is_some())
    }

    /// Intersection numbers of the invariant curve dual to a wall against all
    /// boundary divisors, from the ray relation
    /// `u_p + u_q = -sum_{l in wall} (C . Z_l) u_l`.
    pub fn wall_curve_intersections(&self, wall: &Wall) -> Result<TorusDivisor> {
        let wall_mat = self.cone_matrix(&wall.rays);
        if !wall.rays.is_empty() {
            let (rank, factors) = wall_mat.smith_invariants();
            if rank != wall.rays.len() || factors.iter().any(|f| !f.is_one()) {
                return Err(FanError::NotSmooth {
                    cone: wall.rays.clone(),
                });
            }
        }
        let (p, q) = wall.opposite;
        let rhs = self.rays[p].add(&self.rays[q]).neg().to_rat();
        let mut coeffs = IVec::zeros(self.n_rays());
        coeffs.set(p, Int::one());
        coeffs.set(q, Int::one());
        if !wall.rays.is_empty() {
            match solve_rational(&wall_mat, &rhs)? {
                Solution::Unique(x) => {
                    let ints = x.to_int().ok_or(FanError::UnsolvableWall)?;
                    for (k, &l) in wall.rays.iter().enumerate() {
                        coeffs.set(l, ints.get(k).clone());
                    }
                }
                _ => return Err(FanError::UnsolvableWall),
            }
        } else if !rhs.is_zero() {
            return Err(FanError::UnsolvableWall);
        }
        let div = TorusDivisor::new(coeffs);
        // balancing identity: sum_l (C . Z_l) u_l = 0
        let mut bal = IVec::zeros(self.dim);
        for l in 0..self.n_rays() {
            bal = bal.add(&self.rays[l].scale(div.coeffs.get(l)));
        }
        if !bal.is_zero() {
            return Err(FanError::UnsolvableWall);
        }
        Ok(div)
    }

    /// Nefness against all invariant wall curves; on failure returns the
    /// first wall with negative intersection. On a smooth complete toric
    /// variety the invariant curves generate the Mori cone, so this is the
    /// full nef criterion.
    pub fn is_nef(&self, d: &TorusDivisor) -> Result<(bool, Option<Wall>)> {
        if !self.is_complete() {
            return Err(FanError::NotComplete("nefness needs a complete fan".into()));
        }
        self.require_smooth()?;
        for wall in self.walls() {
            let curve = self.wall_curve_intersections(&wall)?;
            let pairing = curve.coeffs.dot(&d.coeffs);
            if pairing.is_negative() {
                return Ok((false, Some(wall)));
            }
        }
        Ok((true, None))
    }

    /// Rays in cyclic order for a complete two-dimensional fan, walking the
    /// wall adjacency instead of comparing angles.
    pub fn cyclic_ray_order(&self) -> Result<Vec<usize>> {
        if self.dim != 2 || !self.is_complete() {
            return Err(FanError::NotComplete(
                "cyclic order needs a complete 2d fan".into(),
            ));
        }
        let mut order = vec![self.max_cones[0][0], self.max_cones[0][1]];
        while order.len() < self.n_rays() {
            let last = *order.last().unwrap();
            let prev = order[order.len() - 2];
            let next_cone = self
                .max_cones
                .iter()
                .find(|c| c.contains(&last) && !c.contains(&prev))
                .expect("complete 2d fan: every ray bounds two cones");
            let next = next_cone.iter().copied().find(|&l| l != last).unwrap();
            order.push(next);
        }
        Ok(order)
    }

    /// Boundary self-intersection data of a smooth complete surface fan as a
    /// b-cycle: `b_l = -(Z_l^2)` from the wall relation at ray `l`, returned
    /// in cyclic ray order.
    pub fn surface_b_cycle(&self) -> Result<(Vec<usize>, Vec<Int>)> {
        let order = self.cyclic_ray_order()?;
        let mut b = Vec::with_capacity(order.len());
        for &l in &order {
            let wall = self.wall_by_rays(&[l])?;
            let curve = self.wall_curve_intersections(&wall)?;
            b.push(Int::zero() - curve.coeffs.get(l).clone());
        }
        Ok((order, b))
    }
}

// ---------------------------------------------------------------------------
// stock fans used across scenarios and tests

pub fn projective_line() -> Fan {
    Fan::from_i64(1, &[&[1], &[-1]], &[&[0], &[1]])
}

pub fn projective_plane() -> Fan {
    Fan::from_i64(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1]],
        &[&[0, 1], &[1, 2], &[0, 2]],
    )
}

/// Fan of projective n-space: unit rays plus the negative diagonal; maximal
/// cones drop one ray each.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<IVec> = (0..n).map(|k| IVec::unit(n, k)).collect();
    rays.push(IVec::new(vec![Int::from(-1); n]));
    let cones: Vec<Vec<usize>> = (0..=n)
        .map(|skip| (0..=n).filter(|&l| l != skip).collect())
        .collect();
    Fan::new(n, rays, cones)
}

pub fn p1xp1() -> Fan {
    Fan::from_i64(
        2,
        &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    )
}

pub fn hirzebruch(a: i64) -> Fan {
    Fan::from_i64(
        2,
        &[&[1, 0], &[0, 1], &[-1, a], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    )
}

/// Pairing of a curve class (as intersection numbers) with a divisor.
pub fn intersect<T: IntScalar>(
    curve: &crate::lattice::IntVec<T>,
    divisor: &crate::lattice::IntVec<T>,
) -> T {
    curve.dot(divisor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_textbook_and_broken_fans() {
        assert!(projective_plane().validate().is_empty());
        assert!(projective_line().validate().is_empty());
        assert!(p1xp1().validate().is_empty());

        let dup = Fan::from_i64(2, &[&[1, 0], &[1, 0], &[0, 1]], &[&[0, 2]]);
        assert!(dup
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::DuplicateRay(0, 1))));

        let nonprim = Fan::from_i64(2, &[&[2, 0], &[0, 1]], &[&[0, 1]]);
        assert!(nonprim
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::NonPrimitiveRay(0))));

        // two full cones overlapping but not along a face
        let overlap = Fan::from_i64(
            2,
            &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]],
            &[&[0, 1], &[2, 3]],
        );
        assert!(overlap
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::ImproperIntersection { .. })));
    }

    #[test]
    fn smoothness_with_witness() {
        assert!(projective_plane().is_smooth().0);
        assert!(p1xp1().is_smooth().0);
        assert!(projective_space(3).is_smooth().0);
        let weighted = Fan::from_i64(2, &[&[1, 0], &[1, 2]], &[&[0, 1]]);
        let (ok, witness) = weighted.is_smooth();
        assert!(!ok);
        assert_eq!(witness, Some(vec![0, 1]));
    }

    #[test]
    fn completeness() {
        assert!(projective_plane().is_complete());
        assert!(projective_line().is_complete());
        assert!(hirzebruch(1).is_complete());
        assert!(projective_space(3).is_complete());
        let affine = Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]);
        assert!(!affine.is_complete());
    }

    #[test]
    fn picard_presentations() {
        let p2 = projective_plane().picard_presentation().unwrap();
        assert_eq!(p2.pic_rank, 1);
        assert_eq!(p2.relation.row(0), IVec::from_i64(&[1, 0, -1]));
        assert_eq!(p2.relation.row(1), IVec::from_i64(&[0, 1, -1]));
        assert!(p2.invariant_factors.iter().all(|f| f.is_one()));

        let p1 = projective_line().picard_presentation().unwrap();
        assert_eq!(p1.pic_rank, 1);
        assert_eq!(p1.relation.row(0), IVec::from_i64(&[1, -1]));

        let pp = p1xp1().picard_presentation().unwrap();
        assert_eq!(pp.pic_rank, 2);
        assert_eq!(pp.relation.row(0), IVec::from_i64(&[1, 0, -1, 0]));
        assert_eq!(pp.relation.row(1), IVec::from_i64(&[0, 1, 0, -1]));
    }

    #[test]
    fn principality() {
        let p2 = projective_plane();
        assert!(p2
            .is_principal(&TorusDivisor::from_i64(&[1, 0, -1]))
            .unwrap());
        assert!(!p2.is_principal(&TorusDivisor::from_i64(&[1, 0, 0])).unwrap());
        assert!(p2.is_principal(&TorusDivisor::zero(3)).unwrap());
        // every basis character gives a principal divisor
        let pres = p2.picard_presentation().unwrap();
        for d in &pres.principal_tuple {
            assert!(p2.is_principal(d).unwrap());
        }
    }

    #[test]
    fn wall_curves() {
        let p2 = projective_plane();
        let wall = p2.wall_by_rays(&[0]).unwrap();
        let c = p2.wall_curve_intersections(&wall).unwrap();
        assert_eq!(c.coeffs, IVec::from_i64(&[1, 1, 1]));

        let f1 = hirzebruch(1);
        let wall = f1.wall_by_rays(&[1]).unwrap();
        let c = f1.wall_curve_intersections(&wall).unwrap();
        assert_eq!(c.coeffs, IVec::from_i64(&[1, -1, 1, 0]));

        let p1 = projective_line();
        let wall = p1.wall_by_rays(&[]).unwrap();
        let c = p1.wall_curve_intersections(&wall).unwrap();
        assert_eq!(c.coeffs, IVec::from_i64(&[1, 1]));
    }

    #[test]
    fn balancing_on_all_walls() {
        for fan in [
            projective_plane(),
            p1xp1(),
            hirzebruch(1),
            hirzebruch(2),
            hirzebruch(3),
            projective_space(3),
            projective_line(),
        ] {
            for wall in fan.walls() {
                let c = fan.wall_curve_intersections(&wall).unwrap();
                let mut bal = IVec::zeros(fan.dim());
                for l in 0..fan.n_rays() {
                    bal = bal.add(&fan.ray(l).scale(c.coeffs.get(l)));
                }
                assert!(bal.is_zero());
            }
        }
    }

    #[test]
    fn nefness() {
        let p2 = projective_plane();
        let anti = TorusDivisor::from_i64(&[-1, -1, -1]);
        let (ok, witness) = p2.is_nef(&anti).unwrap();
        assert!(!ok);
        assert!(witness.is_some());

        let h = TorusDivisor::from_i64(&[1, 0, 0]);
        assert!(p2.is_nef(&h).unwrap().0);
        assert!(p2.is_nef(&TorusDivisor::zero(3)).unwrap().0);

        let affine = Fan::from_i64(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]);
        assert!(matches!(
            affine.is_nef(&TorusDivisor::zero(2)),
            Err(FanError::NotComplete(_))
        ));
    }

    #[test]
    fn wall_curves_respect_relabeling() {
        // permutation equivariance on the projective plane
        let base = projective_plane();
        let perm = [2usize, 0, 1];
        let rays: Vec<IVec> = (0..3).map(|l| base.ray(perm[l]).clone()).collect();
        let inv = |l: usize| perm.iter().position(|&p| p == l).unwrap();
        let cones: Vec<Vec<usize>> = base
            .max_cones()
            .iter()
            .map(|c| c.iter().map(|&l| inv(l)).collect())
            .collect();
        let relabeled = Fan::new(2, rays, cones);
        for l in 0..3 {
            let w0 = base.wall_by_rays(&[perm[l]]).unwrap();
            let c0 = base.wall_curve_intersections(&w0).unwrap();
            let w1 = relabeled.wall_by_rays(&[l]).unwrap();
            let c1 = relabeled.wall_curve_intersections(&w1).unwrap();
            for (m, &pm) in perm.iter().enumerate() {
                assert_eq!(c0.coeffs.get(pm), c1.coeffs.get(m));
            }
        }
    }

    #[test]
    fn surface_b_cycles() {
        let (order, b) = projective_plane().surface_b_cycle().unwrap();
        assert_eq!(order.len(), 3);
        assert!(b.iter().all(|v| *v == Int::from(-1)));

        let (order, b) = hirzebruch(2).surface_b_cycle().unwrap();
        assert_eq!(order, vec![0, 1, 2, 3]);
        assert_eq!(
            b,
            vec![Int::from(0), Int::from(2), Int::from(0), Int::from(-2)]
        );
    }
}
