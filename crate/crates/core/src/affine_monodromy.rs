//! Integral affine charts on stars of codimension-one faces, transition maps
//! between them, and monodromy along loops: both the closed-form matrices and
//! a chart-transport oracle that composes transitions step by step.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::{IMat, IVec, Int, RMat, RVec, Rat};

#[derive(Debug, Error)]
pub enum MonodromyError {
    #[error("chart has no vertex labelled {0}")]
    UnknownLabel(String),
    #[error("charts do not share enough independent vertices to glue")]
    NotEnoughShared,
    #[error("no affine map matches the shared vertices")]
    InconsistentGluing,
    #[error("transition has a non-integral or non-unimodular linear part")]
    NotIntegral,
    #[error("loop is broken: crossing {0} does not continue from the previous chart")]
    BrokenLoop(usize),
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
}

pub type Result<T> = std::result::Result<T, MonodromyError>;

/// Vertex coordinate assignment of the chart on the star of a
/// codimension-one face: the far vertex on one side at `e_1`, the face
/// vertices at `e_2, ..., e_n, 0`, and the far vertex on the other side at
/// `(-1, b_1, ..., b_{n-1})`.
#[derive(Debug, Clone)]
pub struct StarChart {
    pub dim: usize,
    labels: Vec<String>,
    coords: Vec<RVec>,
    pub b: IVec,
}

impl StarChart {
    /// Chart with standard labels `v0, ..., vn, vinf` for a b-vector of
    /// length `n`. Negative entries are allowed; see
    /// [`far_vertex_by_subdivision`] for the subdivision recursion that
    /// justifies the closed form.
    pub fn standard(b: &IVec) -> Self {
        let n = b.dim();
        let labels: Vec<String> = (0..=n)
            .map(|i| format!("v{i}"))
            .chain(std::iter::once("vinf".to_string()))
            .collect();
        Self::with_labels(&labels, b)
    }

    /// Chart with caller-supplied labels: `labels[0]` is the near far-vertex
    /// (at `e_1`), `labels[1..=n]` the face vertices, `labels[n+1]` the far
    /// vertex at `(-1, b_1, ..., b_{n-1})`.
    pub fn with_labels(labels: &[impl AsRef<str>], b: &IVec) -> Self {
        let n = b.dim();
        assert_eq!(labels.len(), n + 2, "n + 2 labelled vertices expected");
        let mut coords = Vec::with_capacity(n + 2);
        coords.push(RVec::new(unit_rat(n, 0)));
        for k in 1..n {
            coords.push(RVec::new(unit_rat(n, k)));
        }
        coords.push(RVec::zeros(n));
        let mut far = vec![Rat::from(Int::from(-1))];
        far.extend((0..n - 1).map(|k| Rat::from(b.get(k).clone())));
        coords.push(RVec::new(far));
        Self {
            dim: n,
            labels: labels.iter().map(|l| l.as_ref().to_string()).collect(),
            coords,
            b: b.clone(),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coord(&self, label: &str) -> Result<&RVec> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|k| &self.coords[k])
            .ok_or_else(|| MonodromyError::UnknownLabel(label.to_string()))
    }

    pub fn has_label(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    /// Asserts the Calabi-Yau degree relation `sum b_i = 2`.
    pub fn is_calabi_yau(&self) -> bool {
        self.b
            .entries()
            .iter()
            .fold(Int::zero(), |acc, v| acc + v.clone())
            == Int::from(2)
    }

    /// Integer matrix whose columns are the chart vectors from `origin` to
    /// the requested vertices; fails when the chart data is not integral.
    pub fn basis_matrix(&self, basis: &[impl AsRef<str>], origin: &str) -> Result<IMat> {
        let o = self.coord(origin)?.clone();
        let mut cols = Vec::with_capacity(basis.len());
        for lab in basis {
            let v = self.coord(lab.as_ref())?.sub(&o);
            cols.push(v.to_int().ok_or(MonodromyError::NotIntegral)?);
        }
        Ok(IMat::from_col_vecs(&cols))
    }
}

fn unit_rat(n: usize, k: usize) -> Vec<Rat> {
    (0..n)
        .map(|i| {
            if i == k {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
        .collect()
}

/// The far-vertex coordinate computed through the blow-up subdivision
/// recursion `N_{s+1} v_{s+1} = N_s v_s + sum_i v_i` instead of the closed
/// form: starts in the regime where all `b_i + s` are positive and walks the
/// recursion back down to `s = 0`.
pub fn far_vertex_by_subdivision(b: &IVec) -> RVec {
    let n = b.dim();
    let min_b = b.entries().iter().min().cloned().unwrap_or_else(Int::zero);
    let s_star: i64 = if min_b.is_positive() {
        0
    } else {
        let m: i64 = format!("{min_b}").parse().expect("small entry");
        1 - m
    };
    let base_sum = {
        // sum of the face vertices e_2 + ... + e_n + 0 = (0, 1, ..., 1)
        let mut v = vec![Rat::one(); n];
        v[0] = Rat::zero();
        RVec::new(v)
    };
    let v_at = |s: i64| -> RVec {
        let cap = Rat::from(Int::from(n as i64 * s + 1));
        let mut v = vec![Rat::from(Int::from(-1)) / cap.clone()];
        for k in 0..n - 1 {
            v.push(Rat::from(b.get(k).clone() + Int::from(s)) / cap.clone());
        }
        RVec::new(v)
    };
    let mut s = s_star;
    let mut v = v_at(s);
    while s > 0 {
        // N_{s-1} v_{s-1} = N_s v_s - sum_i v_i
        let ns = Rat::from(Int::from(n as i64 * s + 1));
        let ns1 = Rat::from(Int::from(n as i64 * (s - 1) + 1));
        v = v.scale(&ns).sub(&base_sum).scale(&(Rat::one() / ns1));
        s -= 1;
    }
    v
}

/// A map `x -> linear x + translation` with unimodular integer linear part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineTransform {
    pub linear: IMat,
    pub translation: RVec,
}

impl AffineTransform {
    pub fn identity(n: usize) -> Self {
        Self {
            linear: IMat::identity(n),
            translation: RVec::zeros(n),
        }
    }

    pub fn linear_only(m: IMat) -> Self {
        let n = m.rows();
        Self {
            linear: m,
            translation: RVec::zeros(n),
        }
    }

    pub fn apply(&self, p: &RVec) -> RVec {
        self.linear.mul_rat_vec(p).add(&self.translation)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            linear: self.linear.mul(&other.linear),
            translation: self
                .linear
                .mul_rat_vec(&other.translation)
                .add(&self.translation),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self
            .linear
            .inverse_unimodular()
            .map_err(|_| MonodromyError::NotUnimodular)?;
        let t = inv.mul_rat_vec(&self.translation);
        Ok(Self {
            linear: inv,
            translation: RVec::zeros(t.dim()).sub(&t),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.is_zero()
    }
}

/// The unique affine map agreeing with both charts on the shared vertices.
/// Requires the shared vertices to affinely span; the linear part must come
/// out integral and unimodular.
pub fn transition_map(
    from: &StarChart,
    to: &StarChart,
    shared: &[impl AsRef<str>],
) -> Result<AffineTransform> {
    let n = from.dim;
    if shared.len() < n + 1 {
        return Err(MonodromyError::NotEnoughShared);
    }
    // unknown row-major [A | t], solved from P^T X^T = Q^T with
    // P = ((coord_from ; 1)) and Q = (coord_to)
    let k = shared.len();
    let mut p = RMat::zeros(k, n + 1);
    let mut q = RMat::zeros(k, n);
    for (r, lab) in shared.iter().enumerate() {
        let a = from.coord(lab.as_ref())?;
        let b = to.coord(lab.as_ref())?;
        for c in 0..n {
            p.set(r, c, a.get(c).clone());
            q.set(r, c, b.get(c).clone());
        }
        p.set(r, n, Rat::one());
    }
    let x = p.solve_unique(&q).ok_or(MonodromyError::InconsistentGluing)?;
    // consistency on every shared vertex is implied by solve_unique (it
    // fails on inconsistent overdetermined systems)
    let mut linear = IMat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let e = x.get(c, r).clone();
            if !e.denom().is_one() {
                return Err(MonodromyError::NotIntegral);
            }
            linear.set(r, c, e.numer().clone());
        }
    }
    if !linear.is_unimodular()? {
        return Err(MonodromyError::NotIntegral);
    }
    let translation = RVec::new((0..n).map(|r| x.get(n, r).clone()).collect());
    Ok(AffineTransform {
        linear,
        translation,
    })
}

/// One chart change along a loop: from chart `from` to chart `to`, glued
/// over the simplex spanned by the shared labels.
#[derive(Debug, Clone)]
pub struct Crossing {
    pub from: usize,
    pub to: usize,
    pub shared: Vec<String>,
}

/// A loop through an atlas of charts: an ordered list of crossings starting
/// and ending in the basepoint chart.
#[derive(Debug, Clone)]
pub struct ChartLoop {
    pub name: String,
    pub crossings: Vec<Crossing>,
}

/// Parallel-transport oracle: composes the transition maps along the loop.
/// The result is expressed in the basepoint chart; translations vanish when
/// the basepoint vertex sits at the chart origin throughout.
pub fn monodromy_transport(atlas: &[StarChart], lp: &ChartLoop) -> Result<AffineTransform> {
    if lp.crossings.is_empty() {
        let n = atlas.first().map(|c| c.dim).unwrap_or(0);
        return Ok(AffineTransform::identity(n));
    }
    let start = lp.crossings[0].from;
    if lp.crossings[lp.crossings.len() - 1].to != start {
        return Err(MonodromyError::BrokenLoop(lp.crossings.len() - 1));
    }
    let mut acc = AffineTransform::identity(atlas[start].dim);
    let mut here = start;
    for (k, crossing) in lp.crossings.iter().enumerate() {
        if crossing.from != here {
            return Err(MonodromyError::BrokenLoop(k));
        }
        let t = transition_map(&atlas[crossing.from], &atlas[crossing.to], &crossing.shared)?;
        acc = t.compose(&acc);
        here = crossing.to;
    }
    Ok(acc)
}

/// Transition factor of the two-dimensional chart change across one boundary
/// curve: `[[b, 1], [-1, 0]]`.
pub fn chart_step_2d(b: &Int) -> IMat {
    IMat::new(
        2,
        2,
        vec![b.clone(), Int::one(), Int::from(-1), Int::zero()],
    )
}

/// Closed-form monodromy of the two-dimensional structure around a vertex
/// with boundary b-cycle `(b_1, ..., b_r)`: the product
/// `M(b_r) ... M(b_1)` with `M(b) = [[b, 1], [-1, 0]]`, with respect to the
/// basis `(far vertex r, far vertex 1)` at the central vertex.
pub fn monodromy_2d(b_cycle: &[Int]) -> IMat {
    let mut acc = IMat::identity(2);
    for b in b_cycle {
        acc = chart_step_2d(b).mul(&acc);
    }
    acc
}

/// The toricity charge `Q = 12 + sum (b_i - 3)`.
pub fn charge(b_cycle: &[Int]) -> Int {
    b_cycle.iter().fold(Int::from(12), |acc, b| {
        acc + b.clone() - Int::from(3)
    })
}

/// Closed-form monodromy of a combined structure around the discriminant
/// inside a codimension-one face: the identity with first column
/// `(1, b_1 - b'_1, ..., b_{n-1} - b'_{n-1})`, with respect to the basis
/// whose first vector points to the near far-vertex.
pub fn monodromy_combination(b: &IVec, b_prime: &IVec) -> IMat {
    assert_eq!(b.dim(), b_prime.dim());
    let n = b.dim();
    let mut m = IMat::identity(n);
    for k in 0..n - 1 {
        m.set(k + 1, 0, b.get(k).clone() - b_prime.get(k).clone());
    }
    m
}

/// `P^{-1} T P` for unimodular `P`.
pub fn conjugate(p: &IMat, t: &IMat) -> Result<IMat> {
    let inv = p
        .inverse_unimodular()
        .map_err(|_| MonodromyError::NotUnimodular)?;
    Ok(inv.mul(t).mul(p))
}

/// Expresses a chart-coordinates monodromy in the basis of chart vectors
/// from `origin` to the `basis` vertices.
pub fn monodromy_in_basis(
    t_chart: &IMat,
    chart: &StarChart,
    basis: &[impl AsRef<str>],
    origin: &str,
) -> Result<IMat> {
    let b = chart.basis_matrix(basis, origin)?;
    conjugate(&b, t_chart)
}

/// Rank-one factorization of a monodromy: `T = Id + scale (f x e)` with
/// `(f x e)[a][b] = f_a e_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factorization {
    /// `T` is the identity: trivial factorization with `f = 0`.
    Zero,
    RankOne { e: IVec, f: IVec },
    NotRankOne,
}

pub fn semisimple_factor(t: &IMat, scale: &Int) -> Factorization {
    let n = t.rows();
    let m = t.sub(&IMat::identity(n));
    if (0..n).all(|r| (0..n).all(|c| m.get(r, c).is_zero())) {
        return Factorization::Zero;
    }
    // every entry must be divisible by the scale
    let mut reduced = IMat::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let (q, rem) = m.get(r, c).div_rem(scale);
            if !rem.is_zero() {
                return Factorization::NotRankOne;
            }
            reduced.set(r, c, q);
        }
    }
    if reduced.rank() != 1 {
        return Factorization::NotRankOne;
    }
    let row = (0..n).map(|r| reduced.row(r)).find(|r| !r.is_zero()).unwrap();
    let e = row.primitive_part().expect("nonzero row");
    // each row is an integer multiple of the primitive generator
    let pivot = (0..n).find(|&c| !e.get(c).is_zero()).unwrap();
    let mut f = IVec::zeros(n);
    for r in 0..n {
        let (q, rem) = reduced.get(r, pivot).div_rem(e.get(pivot));
        if !rem.is_zero() {
            return Factorization::NotRankOne;
        }
        f.set(r, q);
    }
    // exact verification of the outer product
    for r in 0..n {
        for c in 0..n {
            if *reduced.get(r, c) != f.get(r).clone() * e.get(c).clone() {
                return Factorization::NotRankOne;
            }
        }
    }
    Factorization::RankOne { e, f }
}

// ---------------------------------------------------------------------------
// atlas builders for the two loop shapes used everywhere

/// Atlas and loop around a vertex of a two-dimensional structure: one chart
/// per boundary curve, in the cyclic order of the given neighbour labels,
/// with the supplied b-cycle.
pub fn vertex_loop(
    center: &str,
    neighbors: &[impl AsRef<str>],
    b_cycle: &[Int],
    name: &str,
) -> (Vec<StarChart>, ChartLoop) {
    let r = neighbors.len();
    assert!(r >= 3, "need at least three boundary curves");
    assert_eq!(r, b_cycle.len());
    let lab = |i: usize| neighbors[i % r].as_ref().to_string();
    let mut charts = Vec::with_capacity(r);
    for (i, b) in b_cycle.iter().enumerate() {
        // chart on the star of the i-th boundary curve:
        // (prev, cur, center, next) at ((1,0), (0,1), 0, (-1, b_i))
        let prev = lab((i + r - 1) % r);
        let cur = lab(i);
        let next = lab(i + 1);
        let labels = vec![prev, cur, center.to_string(), next];
        charts.push(StarChart::with_labels(
            &labels,
            &IVec::new(vec![b.clone(), Int::from(2) - b.clone()]),
        ));
    }
    let crossings = (0..r)
        .map(|i| Crossing {
            from: i,
            to: (i + 1) % r,
            shared: vec![center.to_string(), lab(i), lab(i + 1)],
        })
        .collect();
    (
        charts,
        ChartLoop {
            name: name.to_string(),
            crossings,
        },
    )
}

/// Atlas and loop for a combined structure around the discriminant inside a
/// codimension-one face: two charts (one per model) glued along the two
/// maximal faces. `tau` lists the face vertices in chart order (the last one
/// is the chart origin); the loop runs `near0 -> near tau -> far -> back`.
pub fn edge_loop(
    tau: &[impl AsRef<str>],
    v0: &str,
    vinf: &str,
    b: &IVec,
    b_prime: &IVec,
    name: &str,
) -> (Vec<StarChart>, ChartLoop) {
    let n = tau.len();
    assert_eq!(b.dim(), n);
    assert_eq!(b_prime.dim(), n);
    let mut labels: Vec<String> = vec![v0.to_string()];
    labels.extend(tau.iter().map(|t| t.as_ref().to_string()));
    labels.push(vinf.to_string());
    let chart_x = StarChart::with_labels(&labels, b);
    let chart_x_prime = StarChart::with_labels(&labels, b_prime);
    // the far face (tau + vinf) glues the charts on the way out, the near
    // face (v0 + tau) on the way back
    let mut far: Vec<String> = tau.iter().map(|t| t.as_ref().to_string()).collect();
    far.push(vinf.to_string());
    let mut near: Vec<String> = vec![v0.to_string()];
    near.extend(tau.iter().map(|t| t.as_ref().to_string()));
    let crossings = vec![
        Crossing {
            from: 0,
            to: 1,
            shared: far,
        },
        Crossing {
            from: 1,
            to: 0,
            shared: near,
        },
    ];
    (
        vec![chart_x, chart_x_prime],
        ChartLoop {
            name: name.to_string(),
            crossings,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn imat(rows: &[&[i64]]) -> IMat {
        IMat::from_rows_i64(rows)
    }

    #[test]
    fn standard_chart_coordinates() {
        let c = StarChart::standard(&IVec::from_i64(&[1, 1]));
        assert_eq!(c.coord("v0").unwrap(), &RVec::from_ints(&[1, 0]));
        assert_eq!(c.coord("v1").unwrap(), &RVec::from_ints(&[0, 1]));
        assert_eq!(c.coord("v2").unwrap(), &RVec::from_ints(&[0, 0]));
        assert_eq!(c.coord("vinf").unwrap(), &RVec::from_ints(&[-1, 1]));
        assert!(c.is_calabi_yau());

        let c = StarChart::standard(&IVec::from_i64(&[-4, 1, 1]));
        assert_eq!(c.coord("vinf").unwrap(), &RVec::from_ints(&[-1, -4, 1]));

        let c = StarChart::standard(&IVec::from_i64(&[2, 0, 0, 0]));
        assert_eq!(c.coord("vinf").unwrap(), &RVec::from_ints(&[-1, 2, 0, 0]));
    }

    #[test]
    fn far_vertex_recursion_matches_closed_form() {
        for b in [
            IVec::from_i64(&[1, 1]),
            IVec::from_i64(&[3, -1]),
            IVec::from_i64(&[-4, 1, 5]),
            IVec::from_i64(&[0, 0, 2]),
        ] {
            let v = far_vertex_by_subdivision(&b);
            let chart = StarChart::standard(&b);
            assert_eq!(&v, chart.coord("vinf").unwrap(), "b = {b:?}");
        }
    }

    #[test]
    fn transitions_2d() {
        // consecutive vertex charts glue by [[b, 1], [-1, 0]]
        for bi in [-1i64, 3] {
            let (charts, _) = vertex_loop(
                "c",
                &["n1", "n2", "n3"],
                &[Int::from(bi), Int::from(0), Int::from(0)],
                "test",
            );
            let t = transition_map(&charts[0], &charts[1], &["c", "n1", "n2"]).unwrap();
            assert_eq!(t.linear, imat(&[&[bi, 1], &[-1, 0]]));
            assert!(t.translation.is_zero());
        }
        // identical charts give the identity
        let c = StarChart::standard(&IVec::from_i64(&[1, 1]));
        let t = transition_map(&c, &c, &["v0", "v1", "v2", "vinf"]).unwrap();
        assert!(t.is_identity());
    }

    #[test]
    fn closed_form_monodromies_2d() {
        let b = |v: &[i64]| v.iter().map(|&x| Int::from(x)).collect::<Vec<_>>();
        assert!(monodromy_2d(&b(&[-1, -1, -1])).is_identity());
        assert_eq!(monodromy_2d(&b(&[3, 3, 3])), imat(&[&[21, 8], &[-8, -3]]));
        assert_eq!(monodromy_2d(&b(&[3, -1, 3])), imat(&[&[-15, -4], &[4, 1]]));
    }

    #[test]
    fn charges() {
        let b = |v: &[i64]| v.iter().map(|&x| Int::from(x)).collect::<Vec<_>>();
        assert_eq!(charge(&b(&[-1, -1, -1])), Int::zero());
        assert_eq!(charge(&b(&[3, 3, 3])), Int::from(12));
        assert_eq!(charge(&b(&[-1, -1, 3])), Int::from(4));
    }

    #[test]
    fn combination_matrices() {
        let t = monodromy_combination(&IVec::from_i64(&[3, -1]), &IVec::from_i64(&[-1, 3]));
        assert_eq!(t, imat(&[&[1, 0], &[4, 1]]));

        let t = monodromy_combination(
            &IVec::from_i64(&[4, -1, -1]),
            &IVec::from_i64(&[-1, -1, 4]),
        );
        assert_eq!(t, imat(&[&[1, 0, 0], &[5, 1, 0], &[0, 0, 1]]));

        let b = IVec::from_i64(&[2, 2, -2]);
        assert!(monodromy_combination(&b, &b).is_identity());
    }

    #[test]
    fn transport_matches_closed_forms() {
        // trivial loop
        let atlas = vec![StarChart::standard(&IVec::from_i64(&[1, 1]))];
        let lp = ChartLoop {
            name: "trivial".into(),
            crossings: vec![],
        };
        assert!(monodromy_transport(&atlas, &lp).unwrap().is_identity());

        // vertex loop with b = (3, 3, 3)
        let b: Vec<Int> = vec![Int::from(3); 3];
        let (atlas, lp) = vertex_loop("c", &["n1", "n2", "n3"], &b, "v");
        let t = monodromy_transport(&atlas, &lp).unwrap();
        assert_eq!(t.linear, monodromy_2d(&b));
        assert!(t.translation.is_zero());

        // edge loop: quintic-style b-difference (5, 0)
        let b = IVec::from_i64(&[4, -1, -1]);
        let bp = IVec::from_i64(&[-1, -1, 4]);
        let (atlas, lp) = edge_loop(&["t1", "t2", "t3"], "z", "w", &b, &bp, "e");
        let t = monodromy_transport(&atlas, &lp).unwrap();
        assert_eq!(t.linear, monodromy_combination(&b, &bp));
        assert!(t.translation.is_zero());
    }

    #[test]
    fn conjugation() {
        let t = imat(&[&[1, 0, 0], &[5, 1, 0], &[0, 0, 1]]);
        assert_eq!(conjugate(&IMat::identity(3), &t).unwrap(), t);

        let p = imat(&[&[1, 0, -1], &[0, 1, 4], &[0, 0, -1]]);
        let conj = conjugate(&p, &t).unwrap();
        assert_eq!(conj, imat(&[&[1, 0, 0], &[5, 1, -5], &[0, 0, 1]]));

        let back = conjugate(&p.inverse_unimodular().unwrap(), &conj).unwrap();
        assert_eq!(back, t);

        let bad = imat(&[&[2, 0], &[0, 1]]);
        assert!(conjugate(&bad, &IMat::identity(2)).is_err());
    }

    #[test]
    fn rank_one_factorizations() {
        let t = imat(&[&[1, 0, 0], &[5, 1, 0], &[0, 0, 1]]);
        match semisimple_factor(&t, &Int::from(5)) {
            Factorization::RankOne { e, f } => {
                assert_eq!(e, IVec::from_i64(&[1, 0, 0]));
                assert_eq!(f, IVec::from_i64(&[0, 1, 0]));
            }
            other => panic!("expected rank one, got {other:?}"),
        }

        assert_eq!(
            semisimple_factor(&IMat::identity(3), &Int::from(5)),
            Factorization::Zero
        );

        let t = imat(&[&[-15, -4], &[4, 1]]);
        assert_eq!(
            semisimple_factor(&t, &Int::one()),
            Factorization::NotRankOne
        );
    }

    /// The dual monodromy of the symplectic side: inverse transpose.
    fn dual_monodromy(t: &IMat) -> IMat {
        t.inverse_unimodular().unwrap().transpose()
    }

    #[test]
    fn duality_is_an_involution_and_respects_products() {
        let a = imat(&[&[21, 8], &[-8, -3]]);
        let b = imat(&[&[1, 0], &[4, 1]]);
        assert_eq!(dual_monodromy(&dual_monodromy(&a)), a);
        // contravariance turns products around and back
        let lhs = dual_monodromy(&a.mul(&b));
        let rhs = dual_monodromy(&a).mul(&dual_monodromy(&b));
        assert_eq!(lhs, rhs);
    }

    proptest! {
        #[test]
        fn transport_oracle_equals_closed_form_2d(
            bs in proptest::collection::vec(-3i64..=4, 3..6)
        ) {
            let b: Vec<Int> = bs.iter().map(|&x| Int::from(x)).collect();
            let names: Vec<String> = (0..b.len()).map(|i| format!("n{i}")).collect();
            let (atlas, lp) = vertex_loop("c", &names, &b, "prop");
            let t = monodromy_transport(&atlas, &lp).unwrap();
            prop_assert_eq!(t.linear, monodromy_2d(&b));
            prop_assert!(t.translation.is_zero());
        }

        #[test]
        fn transport_oracle_equals_closed_form_edge(
            bs in proptest::collection::vec(-3i64..=4, 3),
            bps in proptest::collection::vec(-3i64..=4, 3)
        ) {
            let b = IVec::from_i64(&bs);
            let bp = IVec::from_i64(&bps);
            let (atlas, lp) = edge_loop(&["t1", "t2", "t3"], "z", "w", &b, &bp, "prop");
            let t = monodromy_transport(&atlas, &lp).unwrap();
            prop_assert_eq!(t.linear, monodromy_combination(&b, &bp));
            prop_assert!(t.translation.is_zero());
        }

        #[test]
        fn loop_concatenation_is_matrix_product(
            b1 in proptest::collection::vec(-2i64..=3, 3),
            b2 in proptest::collection::vec(-2i64..=3, 3)
        ) {
            // two edge loops in sequence compose in reverse order
            let b = IVec::from_i64(&b1);
            let mid = IVec::from_i64(&b2);
            let bp = IVec::from_i64(&[1, 1, 0]);
            let t1 = monodromy_combination(&b, &mid);
            let t2 = monodromy_combination(&mid, &bp);
            let total = monodromy_combination(&b, &bp);
            prop_assert_eq!(t2.mul(&t1), total);
        }
    }
}
