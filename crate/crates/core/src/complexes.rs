//! Weighted dual complexes of special fibers: stars, barycentric
//! subdivision, the discriminant graph inside a simplex, quasi-monomial
//! valuation evaluation, and the integral affine retraction attached to a
//! dominating model.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::{IMat, IVec, Int, RVec, Rat};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("unknown face {0:?}")]
    UnknownFace(Vec<usize>),
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("multiplicity of vertex {0} must be positive")]
    NonPositiveMultiplicity(usize),
    #[error("weights must match the face ({face} entries), got {got}")]
    WeightShape { face: usize, got: usize },
    #[error("weighted point does not satisfy sum a_i w_i = 1 (sum {0})")]
    BadWeightSum(String),
    #[error("negative weight in weighted point")]
    NegativeWeight,
    #[error("support of a quasi-monomial evaluation must be nonempty")]
    EmptySupport,
    #[error("exponents must be nonnegative of matching dimension")]
    BadExponent,
    #[error("pullback data maps the point outside the base complex")]
    InconsistentPullback,
}

pub type Result<T> = std::result::Result<T, ComplexError>;

/// A finite simplicial complex with positive integer multiplicities on the
/// vertices. Faces are stored closed under nonempty subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualComplex {
    names: Vec<String>,
    multiplicities: Vec<Int>,
    faces: BTreeSet<Vec<usize>>,
    labels: BTreeMap<Vec<usize>, String>,
}

fn sorted(face: &[usize]) -> Vec<usize> {
    let mut f = face.to_vec();
    f.sort_unstable();
    f.dedup();
    f
}

impl DualComplex {
    /// Builds the complex from its maximal faces; all subsets are added.
    pub fn new(names: Vec<String>, multiplicities: Vec<Int>, maximal: &[Vec<usize>]) -> Self {
        assert_eq!(names.len(), multiplicities.len());
        let mut faces = BTreeSet::new();
        for f in maximal {
            let f = sorted(f);
            for mask in 1u32..(1 << f.len()) {
                let sub: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                faces.insert(sub);
            }
        }
        Self {
            names,
            multiplicities,
            faces,
            labels: BTreeMap::new(),
        }
    }

    pub fn reduced(names: Vec<String>, maximal: &[Vec<usize>]) -> Self {
        let n = names.len();
        Self::new(names, vec![Int::one(); n], maximal)
    }

    pub fn simplex(m: usize) -> Self {
        let names = (0..=m).map(|i| format!("v{i}")).collect();
        Self::reduced(names, &[(0..=m).collect()])
    }

    pub fn n_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn multiplicity(&self, i: usize) -> &Int {
        &self.multiplicities[i]
    }

    pub fn faces(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter()
    }

    pub fn has_face(&self, face: &[usize]) -> bool {
        self.faces.contains(&sorted(face))
    }

    pub fn set_label(&mut self, face: &[usize], label: impl Into<String>) {
        self.labels.insert(sorted(face), label.into());
    }

    pub fn label(&self, face: &[usize]) -> Option<&str> {
        self.labels.get(&sorted(face)).map(|s| s.as_str())
    }

    pub fn faces_of_dim(&self, d: usize) -> Vec<Vec<usize>> {
        self.faces.iter().filter(|f| f.len() == d + 1).cloned().collect()
    }

    pub fn maximal_faces(&self) -> Vec<Vec<usize>> {
        self.faces
            .iter()
            .filter(|f| {
                !self
                    .faces
                    .iter()
                    .any(|g| g.len() > f.len() && f.iter().all(|v| g.contains(v)))
            })
            .cloned()
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, m) in self.multiplicities.iter().enumerate() {
            if !m.is_positive() {
                return Err(ComplexError::NonPositiveMultiplicity(i));
            }
        }
        for f in &self.faces {
            for &v in f {
                if v >= self.names.len() {
                    return Err(ComplexError::VertexOutOfRange(v));
                }
            }
            // subsets present
            for mask in 1u32..(1 << f.len()) {
                let sub: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                if !self.faces.contains(&sub) {
                    return Err(ComplexError::UnknownFace(sub));
                }
            }
        }
        Ok(())
    }

    /// All faces whose closure contains the given face, i.e. the superset
    /// faces (the face itself included).
    pub fn star(&self, face: &[usize]) -> Result<Vec<Vec<usize>>> {
        let f = sorted(face);
        if !self.faces.contains(&f) {
            return Err(ComplexError::UnknownFace(f));
        }
        Ok(self
            .faces
            .iter()
            .filter(|g| f.iter().all(|v| g.contains(v)))
            .cloned()
            .collect())
    }

    /// Closure of the star: the star plus all faces of its members.
    pub fn closed_star(&self, face: &[usize]) -> Result<Vec<Vec<usize>>> {
        let star = self.star(face)?;
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for g in &star {
            for mask in 1u32..(1 << g.len()) {
                let sub: Vec<usize> = g
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, &v)| v)
                    .collect();
                out.insert(sub);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// First barycentric subdivision. The returned map sends each new vertex
    /// index to the face of `self` whose barycenter it is; new vertices are
    /// ordered by the face ordering of the complex.
    pub fn barycentric_subdivision(&self) -> (DualComplex, Vec<Vec<usize>>) {
        let face_list: Vec<Vec<usize>> = self.faces.iter().cloned().collect();
        let index_of: BTreeMap<&Vec<usize>, usize> =
            face_list.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let names = face_list
            .iter()
            .map(|f| {
                let parts: Vec<&str> = f.iter().map(|&v| self.names[v].as_str()).collect();
                format!("b({})", parts.join(","))
            })
            .collect();
        let multiplicities = face_list
            .iter()
            .map(|f| {
                f.iter()
                    .fold(Int::zero(), |acc, &v| acc + self.multiplicities[v].clone())
            })
            .collect();
        // maximal faces: maximal chains inside maximal faces of self
        let mut maximal = Vec::new();
        for top in self.maximal_faces() {
            let mut chain = Vec::new();
            build_chains(&top, &mut chain, &mut |chain: &[Vec<usize>]| {
                if chain.len() == top.len() {
                    maximal.push(chain.iter().map(|f| index_of[f]).collect::<Vec<usize>>());
                }
            });
        }
        (
            DualComplex::new(names, multiplicities, &maximal),
            face_list,
        )
    }

    /// Check that the complex refines into the given subdivision by starring
    /// the stated face: the new complex must equal this one with `face`'s
    /// stars replaced. Used by scenario validation of resolution steps.
    pub fn star_subdivide(&self, face: &[usize], new_vertex_name: &str, new_multiplicity: Int) -> Self {
        let f = sorted(face);
        let mut names = self.names.clone();
        names.push(new_vertex_name.to_string());
        let mut mult = self.multiplicities.clone();
        mult.push(new_multiplicity);
        let new_v = names.len() - 1;
        let mut maximal = Vec::new();
        for top in self.maximal_faces() {
            if f.iter().all(|v| top.contains(v)) {
                // replace by cones over the boundary pieces missing one vertex of f
                for &skip in &f {
                    let mut cell: Vec<usize> =
                        top.iter().copied().filter(|&v| v != skip).collect();
                    cell.push(new_v);
                    maximal.push(cell);
                }
            } else {
                maximal.push(top);
            }
        }
        DualComplex::new(names, mult, &maximal)
    }
}

fn build_chains<F: FnMut(&[Vec<usize>])>(top: &[usize], chain: &mut Vec<Vec<usize>>, emit: &mut F) {
    // chains of subsets of `top`, each extending the previous
    let last: Option<&Vec<usize>> = chain.last();
    let candidates: Vec<Vec<usize>> = subsets(top)
        .into_iter()
        .filter(|s| match last {
            None => true,
            Some(prev) => s.len() > prev.len() && prev.iter().all(|v| s.contains(v)),
        })
        .collect();
    emit(chain);
    for c in candidates {
        chain.push(c);
        build_chains(top, chain, emit);
        chain.pop();
    }
}

fn subsets(top: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << top.len()) {
        out.push(
            top.iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &v)| v)
                .collect(),
        );
    }
    out
}

/// A point of a face simplex in weight coordinates: nonnegative weights over
/// the face's vertices with `sum a_i w_i = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPoint {
    pub face: Vec<usize>,
    pub weights: RVec,
}

impl WeightedPoint {
    pub fn new(complex: &DualComplex, face: &[usize], weights: RVec) -> Result<Self> {
        let face = sorted(face);
        if !complex.has_face(&face) {
            return Err(ComplexError::UnknownFace(face));
        }
        if weights.dim() != face.len() {
            return Err(ComplexError::WeightShape {
                face: face.len(),
                got: weights.dim(),
            });
        }
        if weights.entries().iter().any(|w| w.is_negative()) {
            return Err(ComplexError::NegativeWeight);
        }
        let sum: Rat = face
            .iter()
            .zip(weights.entries())
            .fold(Rat::zero(), |acc, (&v, w)| {
                acc + Rat::from(complex.multiplicity(v).clone()) * w.clone()
            });
        if !sum.is_one() {
            return Err(ComplexError::BadWeightSum(format!("{sum}")));
        }
        Ok(Self { face, weights })
    }

    pub fn weight_of(&self, vertex: usize) -> Rat {
        match self.face.iter().position(|&v| v == vertex) {
            Some(k) => self.weights.get(k).clone(),
            None => Rat::zero(),
        }
    }

    /// Minimal face actually containing the point (drops zero weights).
    pub fn minimal_face(&self) -> Vec<usize> {
        self.face
            .iter()
            .zip(self.weights.entries())
            .filter(|(_, w)| !w.is_zero())
            .map(|(&v, _)| v)
            .collect()
    }

    /// Point in the open star of `vertex` taken in the first barycentric
    /// subdivision: the weight at the vertex strictly dominates every other
    /// weight of the minimal face.
    pub fn in_star_prime(&self, vertex: usize) -> bool {
        let wv = self.weight_of(vertex);
        if wv.is_zero() {
            return false;
        }
        self.face
            .iter()
            .zip(self.weights.entries())
            .all(|(&u, w)| u == vertex || *w < wv)
    }

    /// Point of the discriminant complement of vertex stars: the maximal
    /// weight is attained at least twice on the minimal face.
    pub fn in_gamma(&self) -> bool {
        let max = self
            .weights
            .entries()
            .iter()
            .cloned()
            .max()
            .expect("nonempty face");
        self.weights.entries().iter().filter(|w| **w == max).count() >= 2
    }
}

/// Open star of an original vertex in the first barycentric subdivision, as
/// a face set of the subdivision: all subdivision faces whose closure
/// contains the vertex's barycenter.
pub fn star_prime(
    subdivision: &DualComplex,
    face_of: &[Vec<usize>],
    vertex: usize,
) -> Result<Vec<Vec<usize>>> {
    let barycenter = face_of
        .iter()
        .position(|f| f.as_slice() == [vertex])
        .ok_or(ComplexError::VertexOutOfRange(vertex))?;
    subdivision.star(&[barycenter])
}

/// The dimension `m-1` polyhedral complex obtained from an `m`-simplex by
/// removing the open stars of the original vertices in the first barycentric
/// subdivision: the subcomplex spanned by barycenters of positive-dimensional
/// faces.
pub fn gamma_graph(m: usize) -> DualComplex {
    assert!(m >= 1);
    let simplex = DualComplex::simplex(m);
    let (subdiv, face_of) = simplex.barycentric_subdivision();
    // keep the chain simplices avoiding the singleton barycenters
    let keep: Vec<usize> = (0..subdiv.n_vertices())
        .filter(|&i| face_of[i].len() >= 2)
        .collect();
    let renumber: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let names = keep.iter().map(|&i| subdiv.vertex_name(i).to_string()).collect();
    let mult = keep.iter().map(|&i| subdiv.multiplicity(i).clone()).collect();
    let maximal: Vec<Vec<usize>> = subdiv
        .maximal_faces()
        .into_iter()
        .filter_map(|f| {
            let g: Vec<usize> = f
                .iter()
                .filter(|&&v| renumber.contains_key(&v))
                .map(|&v| renumber[&v])
                .collect();
            if g.is_empty() {
                None
            } else {
                Some(g)
            }
        })
        .collect();
    DualComplex::new(names, mult, &maximal)
}

/// The minimum of `w . beta` over a nonempty set of exponent vectors: the
/// value of the quasi-monomial valuation with weights `w` on a function with
/// the given support.
pub fn quasi_monomial_value(w: &WeightedPoint, support: &[IVec]) -> Result<Rat> {
    if support.is_empty() {
        return Err(ComplexError::EmptySupport);
    }
    let mut best: Option<Rat> = None;
    for beta in support {
        if beta.dim() != w.face.len() || beta.entries().iter().any(|e| e.is_negative()) {
            return Err(ComplexError::BadExponent);
        }
        let val: Rat = w
            .weights
            .entries()
            .iter()
            .zip(beta.entries())
            .fold(Rat::zero(), |acc, (wi, bi)| {
                acc + wi.clone() * Rat::from(bi.clone())
            });
        best = Some(match best {
            None => val,
            Some(b) => b.min(val),
        });
    }
    Ok(best.unwrap())
}

/// Pullback multiplicities of a dominating model over a base model:
/// `matrix[i][j]` is the multiplicity of the pullback of base component `i`
/// along dominating component `j`.
#[derive(Debug, Clone)]
pub struct PullbackData {
    pub matrix: IMat,
    /// per dominating face: whether the induced map of strata is
    /// bimeromorphic (an analytic input, not computable here)
    pub bimeromorphic: BTreeMap<Vec<usize>, bool>,
}

impl PullbackData {
    pub fn new(matrix: IMat) -> Self {
        Self {
            matrix,
            bimeromorphic: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(IMat::identity(n))
    }

    pub fn flag_bimeromorphic(&mut self, face: &[usize], value: bool) {
        self.bimeromorphic.insert(sorted(face), value);
    }

    /// Composite pullback: `self` under `outer` (base of `outer` = base of
    /// the result).
    pub fn compose(outer: &PullbackData, inner: &PullbackData) -> PullbackData {
        PullbackData::new(outer.matrix.mul(&inner.matrix))
    }
}

/// The integral affine retraction of the dominating complex onto the base:
/// `r(w')_i = sum_j matrix[i][j] w'_j`, landing in the minimal base face.
pub fn model_retraction(
    base: &DualComplex,
    dominating: &DualComplex,
    data: &PullbackData,
    w: &WeightedPoint,
) -> Result<WeightedPoint> {
    assert_eq!(data.matrix.rows(), base.n_vertices());
    assert_eq!(data.matrix.cols(), dominating.n_vertices());
    let mut image = vec![Rat::zero(); base.n_vertices()];
    for (k, &j) in w.face.iter().enumerate() {
        let wj = w.weights.get(k).clone();
        for (i, entry) in image.iter_mut().enumerate() {
            *entry = entry.clone() + Rat::from(data.matrix.get(i, j).clone()) * wj.clone();
        }
    }
    let face: Vec<usize> = (0..base.n_vertices())
        .filter(|&i| !image[i].is_zero())
        .collect();
    if !base.has_face(&face) {
        return Err(ComplexError::InconsistentPullback);
    }
    let weights = RVec::new(face.iter().map(|&i| image[i].clone()).collect());
    WeightedPoint::new(base, &face, weights).map_err(|e| match e {
        ComplexError::BadWeightSum(s) => ComplexError::BadWeightSum(s),
        other => other,
    })
}

/// Faces of the dominating complex that are active for the retraction: the
/// induced linear map is an isomorphism onto the corresponding base face and
/// the stratum map is flagged bimeromorphic.
pub fn active_faces(
    base: &DualComplex,
    dominating: &DualComplex,
    data: &PullbackData,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for face in dominating.faces() {
        // base face: support of the image of the uniform interior point
        let k = face.len();
        let denom: Int = face
            .iter()
            .fold(Int::zero(), |acc, &v| acc + dominating.multiplicity(v).clone());
        let weights = RVec::new(vec![Rat::new(Int::one(), denom.clone()); k]);
        let w = WeightedPoint::new(dominating, face, weights)?;
        let image = match model_retraction(base, dominating, data, &w) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let tau = image.minimal_face();
        if tau.len() != face.len() {
            continue;
        }
        // linear part: restriction of the pullback matrix
        let mut sub = IMat::zeros(tau.len(), face.len());
        for (r, &i) in tau.iter().enumerate() {
            for (c, &j) in face.iter().enumerate() {
                sub.set(r, c, data.matrix.get(i, j).clone());
            }
        }
        let iso = sub.rank() == face.len();
        let flagged = data
            .bimeromorphic
            .get(&sorted(face))
            .copied()
            .unwrap_or(true);
        if iso && flagged {
            out.push(face.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn tetrahedron_boundary() -> DualComplex {
        DualComplex::reduced(
            (1..=4).map(|i| format!("v{i}")).collect(),
            &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        )
    }

    fn four_simplex_boundary() -> DualComplex {
        let maximal: Vec<Vec<usize>> = (0..5)
            .map(|skip| (0..5).filter(|&v| v != skip).collect())
            .collect();
        DualComplex::reduced((1..=5).map(|i| format!("v{i}")).collect(), &maximal)
    }

    #[test]
    fn stars() {
        let t = tetrahedron_boundary();
        t.validate().unwrap();
        let star = t.star(&[0]).unwrap();
        assert_eq!(star.iter().filter(|f| f.len() == 3).count(), 3);
        assert_eq!(star.iter().filter(|f| f.len() == 2).count(), 3);
        assert_eq!(star.iter().filter(|f| f.len() == 1).count(), 1);

        let s4 = four_simplex_boundary();
        let star = s4.star(&[0, 1]).unwrap();
        assert_eq!(star.iter().filter(|f| f.len() == 4).count(), 3);
        assert_eq!(star.iter().filter(|f| f.len() == 3).count(), 3);
        assert_eq!(star.iter().filter(|f| f.len() == 2).count(), 1);

        // star of a maximal face is itself
        let star = t.star(&[0, 1, 2]).unwrap();
        assert_eq!(star, vec![vec![0, 1, 2]]);

        assert!(t.star(&[9]).is_err());
    }

    #[test]
    fn star_monotone() {
        let s4 = four_simplex_boundary();
        for small in s4.faces().cloned().collect::<Vec<_>>() {
            for big in s4.star(&small).unwrap() {
                let inner: BTreeSet<_> = s4.star(&big).unwrap().into_iter().collect();
                let outer: BTreeSet<_> = s4.star(&small).unwrap().into_iter().collect();
                assert!(inner.is_subset(&outer));
            }
        }
    }

    #[test]
    fn subdivision_counts() {
        let (sub, _) = DualComplex::simplex(2).barycentric_subdivision();
        assert_eq!(sub.faces_of_dim(2).len(), 6);

        let (sub, _) = DualComplex::simplex(3).barycentric_subdivision();
        assert_eq!(sub.faces_of_dim(3).len(), 24);
    }

    #[test]
    fn star_prime_classification() {
        // on a face of the tetrahedron boundary, the open star of a vertex in
        // the subdivision covers exactly the strict-maximum region
        let t = tetrahedron_boundary();
        let p = WeightedPoint::new(&t, &[0, 1, 2], RVec::new(vec![rat(1, 2), rat(1, 4), rat(1, 4)]))
            .unwrap();
        assert!(p.in_star_prime(0));
        assert!(!p.in_star_prime(1));
        assert!(!p.in_gamma());

        let tie =
            WeightedPoint::new(&t, &[0, 1, 2], RVec::new(vec![rat(1, 2), rat(1, 2), rat(0, 1)]))
                .unwrap();
        assert!(!tie.in_star_prime(0));
        assert!(tie.in_gamma());
    }

    #[test]
    fn star_prime_face_set() {
        let t = DualComplex::simplex(2);
        let (sub, face_of) = t.barycentric_subdivision();
        let star = star_prime(&sub, &face_of, 0).unwrap();
        // the open star of a corner of a triangle: the barycenter vertex,
        // two subdivision edges into it per incident edge, and two triangles
        assert_eq!(star.iter().filter(|f| f.len() == 1).count(), 1);
        assert_eq!(star.iter().filter(|f| f.len() == 2).count(), 3);
        assert_eq!(star.iter().filter(|f| f.len() == 3).count(), 2);
        // every face of the star contains the vertex barycenter, matching
        // the strict-maximum point characterization at the barycenters
        let b0 = face_of.iter().position(|f| f.as_slice() == [0]).unwrap();
        assert!(star.iter().all(|f| f.contains(&b0)));
    }

    #[test]
    fn gamma_graphs() {
        // m = 1: a single midpoint
        let g1 = gamma_graph(1);
        assert_eq!(g1.n_vertices(), 1);
        assert!(g1.faces_of_dim(1).is_empty());

        // m = 2: three segments meeting at the barycenter
        let g2 = gamma_graph(2);
        assert_eq!(g2.n_vertices(), 4);
        assert_eq!(g2.faces_of_dim(1).len(), 3);
        let center = g2.vertex_index("b(v0,v1,v2)").unwrap();
        for e in g2.faces_of_dim(1) {
            assert!(e.contains(&center));
        }

        // m = 3: barycenters of the 1-, 2- and 3-dimensional faces; each
        // 2-face barycenter joined to the barycenters of its three edges
        let g3 = gamma_graph(3);
        assert_eq!(g3.n_vertices(), 6 + 4 + 1);
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            let f = g3.vertex_index(&format!("b(v{i},v{j},v{k})")).unwrap();
            for (a, b) in [(i, j), (i, k), (j, k)] {
                let e = g3.vertex_index(&format!("b(v{a},v{b})")).unwrap();
                assert!(g3.has_face(&[f, e]), "edge barycenter joined to face barycenter");
            }
        }
    }

    #[test]
    fn gamma_and_stars_partition() {
        // every rational sample point of a 2-simplex is in exactly one of:
        // some open vertex star, or the discriminant graph
        let t = DualComplex::simplex(2);
        let q = 8i64;
        for a in 0..=q {
            for b in 0..=(q - a) {
                let c = q - a - b;
                let w = RVec::new(vec![rat(a, q), rat(b, q), rat(c, q)]);
                let face: Vec<usize> = vec![0, 1, 2];
                let (face, w) = {
                    let kept: Vec<(usize, Rat)> = face
                        .iter()
                        .zip(w.entries())
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(&v, x)| (v, x.clone()))
                        .collect();
                    (
                        kept.iter().map(|(v, _)| *v).collect::<Vec<_>>(),
                        RVec::new(kept.into_iter().map(|(_, x)| x).collect()),
                    )
                };
                let p = WeightedPoint::new(&t, &face, w).unwrap();
                let stars = (0..3).filter(|&v| p.in_star_prime(v)).count();
                assert_eq!(stars == 0, p.in_gamma());
                assert!(stars <= 1);
            }
        }
    }

    #[test]
    fn quasi_monomial_values() {
        let t = DualComplex::simplex(1);
        let w = WeightedPoint::new(&t, &[0, 1], RVec::new(vec![rat(1, 2), rat(1, 2)])).unwrap();
        assert_eq!(
            quasi_monomial_value(&w, &[IVec::from_i64(&[2, 1])]).unwrap(),
            rat(3, 2)
        );

        let w = WeightedPoint::new(&t, &[0, 1], RVec::new(vec![rat(1, 1), rat(0, 1)])).unwrap();
        assert_eq!(
            quasi_monomial_value(&w, &[IVec::from_i64(&[0, 5]), IVec::from_i64(&[3, 0])]).unwrap(),
            rat(0, 1)
        );

        let w = WeightedPoint::new(&t, &[0, 1], RVec::new(vec![rat(1, 3), rat(2, 3)])).unwrap();
        assert_eq!(
            quasi_monomial_value(&w, &[IVec::from_i64(&[1, 1]), IVec::from_i64(&[3, 0])]).unwrap(),
            rat(1, 1)
        );

        assert!(quasi_monomial_value(&w, &[]).is_err());
    }

    #[test]
    fn min_splits_over_support_union() {
        let t = DualComplex::simplex(2);
        let w = WeightedPoint::new(
            &t,
            &[0, 1, 2],
            RVec::new(vec![rat(1, 6), rat(1, 3), rat(1, 2)]),
        )
        .unwrap();
        let s1 = [IVec::from_i64(&[1, 0, 2]), IVec::from_i64(&[0, 3, 0])];
        let s2 = [IVec::from_i64(&[2, 2, 0])];
        let both: Vec<IVec> = s1.iter().chain(s2.iter()).cloned().collect();
        let lhs = quasi_monomial_value(&w, &both).unwrap();
        let rhs = quasi_monomial_value(&w, &s1)
            .unwrap()
            .min(quasi_monomial_value(&w, &s2).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn retraction_identity_and_wing() {
        let t = tetrahedron_boundary();
        let id = PullbackData::identity(4);
        let w = WeightedPoint::new(&t, &[0, 1], RVec::new(vec![rat(1, 3), rat(2, 3)])).unwrap();
        let img = model_retraction(&t, &t, &id, &w).unwrap();
        assert_eq!(img, w);
        let active = active_faces(&t, &t, &id).unwrap();
        assert_eq!(active.len(), t.faces().count());

        // wing vertex over the edge {0, 3}: pullback of component 0 picks up
        // the exceptional with multiplicity one, component 3 does not
        let mut names: Vec<String> = (1..=4).map(|i| format!("v{i}")).collect();
        names.push("q".into());
        let dom = DualComplex::reduced(
            names,
            &[
                vec![0, 1, 2],
                vec![0, 1, 3],
                vec![0, 2, 3],
                vec![1, 2, 3],
                vec![0, 3, 4],
            ],
        );
        let mut m = IMat::zeros(4, 5);
        for i in 0..4 {
            m.set(i, i, Int::one());
        }
        m.set(0, 4, Int::one()); // a_{l,q} = 1
        let data = PullbackData::new(m);
        let vq = WeightedPoint::new(&dom, &[4], RVec::new(vec![rat(1, 1)])).unwrap();
        let img = model_retraction(&t, &dom, &data, &vq).unwrap();
        assert_eq!(img.face, vec![0]);
        assert_eq!(img.weights, RVec::new(vec![rat(1, 1)]));
    }

    #[test]
    fn retraction_preserves_weight_sum_and_composes() {
        let t = tetrahedron_boundary();
        let mut m = IMat::zeros(4, 4);
        for i in 0..4 {
            m.set(i, i, Int::one());
        }
        // a non-identity dominating structure over the same complex
        m.set(0, 1, Int::zero());
        let a = PullbackData::new(m.clone());
        let b = PullbackData::new(m);
        let ab = PullbackData::compose(&a, &b);
        let w = WeightedPoint::new(
            &t,
            &[0, 1, 2],
            RVec::new(vec![rat(1, 2), rat(1, 4), rat(1, 4)]),
        )
        .unwrap();
        let one_step = model_retraction(&t, &t, &b, &w).unwrap();
        let two_step = model_retraction(&t, &t, &a, &one_step).unwrap();
        let direct = model_retraction(&t, &t, &ab, &w).unwrap();
        assert_eq!(two_step, direct);
    }
}
