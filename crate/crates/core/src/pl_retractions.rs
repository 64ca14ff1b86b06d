//! Evaluable retraction maps on polyhedral pieces. Formulas are exact
//! rational expressions; pieces carry convex-hull regions plus polynomial
//! guards, and evaluation cross-checks every piece containing the point.
//!
//! The quintic formulas are not affine: the slope parameter `t = 2y/(x+y+1)`
//! makes them rational, affine only on sectors through the apex. Evaluation
//! here is closed-form and exact; no finite affine decomposition is claimed.

use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{feasible, LinCon, Rel};
use crate::{rat, Int, RMat, RVec, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlError {
    #[error("point is outside the domain")]
    OutsideDomain,
    #[error("no piece applies at {0:?} (or its formula is undefined there)")]
    NoPieceApplies(String),
    #[error("pieces disagree at {0}: {1} vs {2}")]
    PieceDisagreement(String, String, String),
    #[error("parameter must lie strictly inside the edge")]
    ParameterOnBoundary,
}

pub type Result<T> = std::result::Result<T, PlError>;

// ---------------------------------------------------------------------------
// exact rational expressions

/// Closed-form rational expression in the input coordinates.
#[derive(Debug, Clone)]
pub enum Expr {
    Const(Rat),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

#[allow(clippy::should_implement_trait)] // builder methods, not operator impls
impl Expr {
    pub fn c(v: Rat) -> Self {
        Expr::Const(v)
    }

    pub fn ci(v: i64) -> Self {
        Expr::Const(Rat::from(Int::from(v)))
    }

    pub fn var(k: usize) -> Self {
        Expr::Var(k)
    }

    pub fn add(self, rhs: Expr) -> Self {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: Expr) -> Self {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Expr) -> Self {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn div(self, rhs: Expr) -> Self {
        Expr::Div(Box::new(self), Box::new(rhs))
    }

    /// Exact evaluation; `None` when a denominator vanishes.
    pub fn eval(&self, p: &RVec) -> Option<Rat> {
        match self {
            Expr::Const(v) => Some(v.clone()),
            Expr::Var(k) => Some(p.get(*k).clone()),
            Expr::Add(a, b) => Some(a.eval(p)? + b.eval(p)?),
            Expr::Sub(a, b) => Some(a.eval(p)? - b.eval(p)?),
            Expr::Mul(a, b) => Some(a.eval(p)? * b.eval(p)?),
            Expr::Div(a, b) => {
                let d = b.eval(p)?;
                if d.is_zero() {
                    None
                } else {
                    Some(a.eval(p)? / d)
                }
            }
        }
    }

    /// Substitution of each variable by the corresponding expression.
    pub fn subst(&self, repl: &[Expr]) -> Expr {
        match self {
            Expr::Const(v) => Expr::Const(v.clone()),
            Expr::Var(k) => repl[*k].clone(),
            Expr::Add(a, b) => a.subst(repl).add(b.subst(repl)),
            Expr::Sub(a, b) => a.subst(repl).sub(b.subst(repl)),
            Expr::Mul(a, b) => a.subst(repl).mul(b.subst(repl)),
            Expr::Div(a, b) => a.subst(repl).div(b.subst(repl)),
        }
    }
}

/// Affine self-map of rational space, used for symmetry conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffMap {
    pub mat: RMat,
    pub shift: RVec,
}

impl AffMap {
    pub fn identity(n: usize) -> Self {
        Self {
            mat: RMat::identity(n),
            shift: RVec::zeros(n),
        }
    }

    pub fn new(rows: &[&[Rat]], shift: &[Rat]) -> Self {
        let n = rows.len();
        let mut mat = RMat::zeros(n, rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                mat.set(r, c, v.clone());
            }
        }
        Self {
            mat,
            shift: RVec::new(shift.to_vec()),
        }
    }

    pub fn apply(&self, p: &RVec) -> RVec {
        self.mat.mul_vec(p).add(&self.shift)
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.mul(&other.mat),
            shift: self.mat.mul_vec(&other.shift).add(&self.shift),
        }
    }

    pub fn inverse(&self) -> Self {
        let inv = self.mat.inverse().expect("symmetry maps are invertible");
        let t = inv.mul_vec(&self.shift);
        Self {
            mat: inv,
            shift: RVec::zeros(t.dim()).sub(&t),
        }
    }

    /// The coordinate expressions of the map.
    pub fn exprs(&self) -> Vec<Expr> {
        (0..self.mat.rows())
            .map(|r| {
                let mut e = Expr::c(self.shift.get(r).clone());
                for c in 0..self.mat.cols() {
                    e = e.add(Expr::c(self.mat.get(r, c).clone()).mul(Expr::var(c)));
                }
                e
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// pieces and maps

/// Membership region: an optional convex hull, hull constraints on affine
/// images of the point, plus polynomial guards (each guard expression must
/// evaluate to a nonpositive value).
#[derive(Debug, Clone, Default)]
pub struct Region {
    pub hull: Option<Vec<RVec>>,
    /// the image of the point under each map must lie in the paired hull
    pub mapped_hulls: Vec<(AffMap, Vec<RVec>)>,
    pub guards: Vec<Expr>,
}

impl Region {
    pub fn hull_of(vertices: Vec<RVec>) -> Self {
        Self {
            hull: Some(vertices),
            mapped_hulls: Vec::new(),
            guards: Vec::new(),
        }
    }

    pub fn with_guard(mut self, guard: Expr) -> Self {
        self.guards.push(guard);
        self
    }

    pub fn contains(&self, p: &RVec) -> bool {
        if let Some(hull) = &self.hull {
            if !in_hull(p, hull) {
                return false;
            }
        }
        for (f, hull) in &self.mapped_hulls {
            if !in_hull(&f.apply(p), hull) {
                return false;
            }
        }
        self.guards.iter().all(|g| match g.eval(p) {
            Some(v) => !v.is_positive(),
            None => false,
        })
    }

    /// Pullback of the region along an invertible affine map: `q` is in the
    /// result iff `f(q)` is in `self`.
    pub fn pullback(&self, f: &AffMap) -> Region {
        let f_inv = f.inverse();
        let hull = self
            .hull
            .as_ref()
            .map(|vs| vs.iter().map(|v| f_inv.apply(v)).collect());
        let mapped_hulls = self
            .mapped_hulls
            .iter()
            .map(|(g, h)| (g.compose(f), h.clone()))
            .collect();
        let repl = f.exprs();
        let guards = self.guards.iter().map(|g| g.subst(&repl)).collect();
        Region {
            hull,
            mapped_hulls,
            guards,
        }
    }
}

/// Exact convex hull membership via linear feasibility.
pub fn in_hull(p: &RVec, vertices: &[RVec]) -> bool {
    let k = vertices.len();
    let dim = p.dim();
    let mut cons: Vec<LinCon<Int>> = Vec::new();
    for d in 0..dim {
        let coeffs: Vec<Rat> = vertices.iter().map(|v| v.get(d).clone()).collect();
        cons.push(LinCon::new(
            coeffs,
            Ratio::zero() - p.get(d).clone(),
            Rel::Eq,
        ));
    }
    cons.push(LinCon::new(
        vec![Rat::one(); k],
        Rat::from(Int::from(-1)),
        Rel::Eq,
    ));
    for i in 0..k {
        let mut coeffs = vec![Rat::zero(); k];
        coeffs[i] = Rat::from(Int::from(-1));
        cons.push(LinCon::new(coeffs, Rat::zero(), Rel::Le));
    }
    feasible(&cons, k)
}

#[derive(Debug, Clone)]
pub struct Piece {
    pub name: String,
    pub region: Region,
    pub formula: Vec<Expr>,
}

impl Piece {
    /// Conjugated piece `g^{-1} . formula . g` on the pulled-back region.
    pub fn conjugate(&self, g: &AffMap, name: &str) -> Piece {
        let repl = g.exprs();
        let inner: Vec<Expr> = self.formula.iter().map(|f| f.subst(&repl)).collect();
        let g_inv = g.inverse();
        let formula = (0..g_inv.mat.rows())
            .map(|r| {
                let mut e = Expr::c(g_inv.shift.get(r).clone());
                for (c, part) in inner.iter().enumerate() {
                    e = e.add(Expr::c(g_inv.mat.get(r, c).clone()).mul(part.clone()));
                }
                e
            })
            .collect();
        Piece {
            name: name.to_string(),
            region: self.region.pullback(g),
            formula,
        }
    }

    /// Precomposed piece `formula . f`: guards are pulled back by
    /// substitution, hull constraints become constraints on the image of the
    /// point (so projections are allowed); the plain hull is left for the
    /// caller.
    pub fn precompose(&self, f: &AffMap, name: &str) -> Piece {
        let repl = f.exprs();
        let mut mapped_hulls: Vec<(AffMap, Vec<RVec>)> = self
            .region
            .mapped_hulls
            .iter()
            .map(|(g, h)| (g.compose(f), h.clone()))
            .collect();
        if let Some(h) = &self.region.hull {
            mapped_hulls.push((f.clone(), h.clone()));
        }
        Piece {
            name: name.to_string(),
            region: Region {
                hull: None,
                mapped_hulls,
                guards: self.region.guards.iter().map(|g| g.subst(&repl)).collect(),
            },
            formula: self.formula.iter().map(|e| e.subst(&repl)).collect(),
        }
    }
}

/// A piecewise map given by guarded rational formulas on polyhedral pieces.
/// Evaluation computes every applicable piece and insists the values agree,
/// so seams are verified at each evaluated point.
#[derive(Debug, Clone)]
pub struct PlMap {
    pub name: String,
    pub dim: usize,
    pub domain: Region,
    pub pieces: Vec<Piece>,
    /// vertices the image is expected to reach (surjectivity checks)
    pub target_vertices: Vec<RVec>,
}

impl PlMap {
    /// Copy of the map with the domain cut down to a hull; pieces are left
    /// alone since evaluation intersects them with the domain anyway.
    pub fn restricted(&self, hull: Vec<RVec>) -> PlMap {
        let mut out = self.clone();
        out.domain = Region::hull_of(hull);
        out
    }

    pub fn eval(&self, p: &RVec) -> Result<RVec> {
        if !self.domain.contains(p) {
            return Err(PlError::OutsideDomain);
        }
        let mut value: Option<(String, RVec)> = None;
        for piece in &self.pieces {
            if !piece.region.contains(p) {
                continue;
            }
            let candidate: Option<Vec<Rat>> =
                piece.formula.iter().map(|f| f.eval(p)).collect();
            let candidate = match candidate {
                Some(v) => RVec::new(v),
                None => continue, // formula undefined here; another piece covers it
            };
            match &value {
                None => value = Some((piece.name.clone(), candidate)),
                Some((name, existing)) => {
                    if *existing != candidate {
                        return Err(PlError::PieceDisagreement(
                            format!("{p:?}"),
                            format!("{name}: {existing:?}"),
                            format!("{}: {candidate:?}", piece.name),
                        ));
                    }
                }
            }
        }
        value
            .map(|(_, v)| v)
            .ok_or_else(|| PlError::NoPieceApplies(format!("{p:?}")))
    }
}

// ---------------------------------------------------------------------------
// embedding coordinates of the local model skeleta

/// Coordinates of the local-model skeleton vertices in the chart used by all
/// the retraction formulas.
pub mod local_coords {
    use super::*;

    pub fn v1() -> RVec {
        RVec::from_ints(&[0, 1, 0])
    }
    pub fn v2() -> RVec {
        RVec::from_ints(&[1, 0, 0])
    }
    pub fn v3() -> RVec {
        RVec::from_ints(&[-1, 0, 0])
    }
    pub fn v12() -> RVec {
        RVec::new(vec![rat(1, 2), rat(1, 2), rat(1, 1)])
    }
    pub fn v13() -> RVec {
        RVec::new(vec![rat(-1, 2), rat(1, 2), rat(1, 1)])
    }
    pub fn v23() -> RVec {
        RVec::from_ints(&[0, 0, 1])
    }
    pub fn v123() -> RVec {
        RVec::new(vec![rat(0, 1), rat(1, 3), rat(2, 3)])
    }
    pub fn v123_prime() -> RVec {
        RVec::new(vec![rat(0, 1), rat(1, 3), rat(4, 3)])
    }

    /// All six skeleton vertices in the fixed order
    /// `(v1, v2, v3, v12, v13, v23)`.
    pub fn skeleton_vertices() -> Vec<RVec> {
        vec![v1(), v2(), v3(), v12(), v13(), v23()]
    }

    /// The hull of the retraction formula: `(v1, v2, v3, v13, v23)`.
    pub fn vertex_formula_hull() -> Vec<RVec> {
        vec![v1(), v2(), v3(), v13(), v23()]
    }

    /// The fundamental piece of the combinatorial retraction.
    pub fn combinatorial_hull() -> Vec<RVec> {
        vec![
            v23(),
            RVec::new(vec![rat(-1, 4), rat(1, 4), rat(1, 1)]),
            RVec::new(vec![rat(0, 1), rat(1, 3), rat(1, 1)]),
            RVec::from_ints(&[0, 0, 0]),
            v3(),
            RVec::new(vec![rat(0, 1), rat(1, 3), rat(0, 1)]),
        ]
    }

    /// The extra three-cell collapsed by the vertical projection.
    pub fn extra_cell() -> Vec<RVec> {
        vec![v12(), v13(), v23(), v123_prime()]
    }

    pub fn base_triangle() -> Vec<RVec> {
        vec![v1(), v2(), v3()]
    }
}

/// The order-three rotation of the local coordinates:
/// `v1 -> v2 -> v3 -> v1` downstairs and `v23 -> v13 -> v12 -> v23`
/// upstairs; `z` is fixed.
pub fn rotation() -> AffMap {
    AffMap::new(
        &[
            &[rat(-1, 2), rat(3, 2), rat(0, 1)],
            &[rat(-1, 2), rat(-1, 2), rat(0, 1)],
            &[rat(0, 1), rat(0, 1), rat(1, 1)],
        ],
        &[rat(-1, 2), rat(1, 2), rat(0, 1)],
    )
}

/// The reflection fixing `v1` and swapping `v2, v3` (and `v12, v13`).
pub fn reflection() -> AffMap {
    AffMap::new(
        &[
            &[rat(-1, 1), rat(0, 1), rat(0, 1)],
            &[rat(0, 1), rat(1, 1), rat(0, 1)],
            &[rat(0, 1), rat(0, 1), rat(1, 1)],
        ],
        &[rat(0, 1), rat(0, 1), rat(0, 1)],
    )
}

/// The symmetry group of the triangle acting on the skeleton coordinates
/// (six affine maps).
pub fn triangle_symmetries() -> Vec<AffMap> {
    let s = rotation();
    let m = reflection();
    let s2 = s.compose(&s);
    vec![
        AffMap::identity(3),
        s.clone(),
        s2.clone(),
        m.clone(),
        s.compose(&m),
        s2.compose(&m),
    ]
}

// ---------------------------------------------------------------------------
// the named retraction maps

/// Wing contraction with clamp point `a` in the open edge `(-1, 1)`: the two
/// slant flows meet the clamp piece at the chosen interior point.
pub fn ks_wing_retraction(a: &Rat) -> Result<PlMap> {
    if !(a.clone().abs() < Rat::one()) {
        return Err(PlError::ParameterOnBoundary);
    }
    let wing = vec![
        RVec::from_ints(&[-1, 0]),
        RVec::from_ints(&[1, 0]),
        RVec::from_ints(&[0, 1]),
    ];
    let x = || Expr::var(0);
    let y = || Expr::var(1);
    let pieces = vec![
        Piece {
            name: "left".into(),
            region: Region::hull_of(wing.clone()).with_guard(x().add(y()).sub(Expr::c(a.clone()))),
            formula: vec![x().add(y()), Expr::ci(0)],
        },
        Piece {
            name: "right".into(),
            region: Region::hull_of(wing.clone()).with_guard(Expr::c(a.clone()).sub(x().sub(y()))),
            formula: vec![x().sub(y()), Expr::ci(0)],
        },
        Piece {
            name: "clamp".into(),
            region: Region::hull_of(wing.clone())
                .with_guard(Expr::c(a.clone()).sub(x().add(y())))
                .with_guard(x().sub(y()).sub(Expr::c(a.clone()))),
            formula: vec![Expr::c(a.clone()), Expr::ci(0)],
        },
    ];
    Ok(PlMap {
        name: format!("wing({a})"),
        dim: 2,
        domain: Region::hull_of(wing),
        pieces,
        target_vertices: vec![RVec::from_ints(&[-1, 0]), RVec::from_ints(&[1, 0])],
    })
}

/// Wing contraction of the untouched model: the slant flow parallel to the
/// edge from the apex, with no clamp. Collapses the apex onto the left
/// endpoint and restricts to an affine isomorphism on the right slant edge.
pub fn wing_model_contraction() -> PlMap {
    let wing = vec![
        RVec::from_ints(&[-1, 0]),
        RVec::from_ints(&[1, 0]),
        RVec::from_ints(&[0, 1]),
    ];
    PlMap {
        name: "wing-contraction".into(),
        dim: 2,
        domain: Region::hull_of(wing.clone()),
        pieces: vec![Piece {
            name: "slant".into(),
            region: Region::hull_of(wing),
            formula: vec![Expr::var(0).sub(Expr::var(1)), Expr::ci(0)],
        }],
        target_vertices: vec![RVec::from_ints(&[-1, 0]), RVec::from_ints(&[1, 0])],
    }
}

fn slope_t() -> Expr {
    // t = 2y / (x + y + 1)
    Expr::ci(2)
        .mul(Expr::var(1))
        .div(Expr::var(0).add(Expr::var(1)).add(Expr::ci(1)))
}

/// First-branch formula `(x + (1 - t/2) z, y + (t/2) z, 0)`.
fn branch_flow_formula() -> Vec<Expr> {
    let t_half = slope_t().div(Expr::ci(2));
    vec![
        Expr::var(0).add(Expr::ci(1).sub(t_half.clone()).mul(Expr::var(2))),
        Expr::var(1).add(t_half.mul(Expr::var(2))),
        Expr::ci(0),
    ]
}

/// The guard `x + (1 - t/2) z` cleared of its positive denominator:
/// `(x + z)(x + y + 1) - y z`.
pub fn branch_guard_cleared() -> Expr {
    Expr::var(0)
        .add(Expr::var(2))
        .mul(Expr::var(0).add(Expr::var(1)).add(Expr::ci(1)))
        .sub(Expr::var(1).mul(Expr::var(2)))
}

/// The retraction of the local dominating skeleton onto the base triangle
/// around the vertex `v3`: the rational flow formula. Undefined exactly at
/// `v3` where the slope degenerates.
///
/// The formula is evaluable on the whole skeleton hull; it agrees with the
/// actual retraction on the hull spanned by the base triangle and the two
/// far upper vertices ([`local_coords::vertex_formula_hull`]), and
/// [`PlMap::restricted`] to that hull is what the retraction sweeps verify.
pub fn quintic_vertex_retraction() -> PlMap {
    PlMap {
        name: "quintic-vertex".into(),
        dim: 3,
        domain: Region::hull_of(local_coords::skeleton_vertices()),
        pieces: vec![Piece {
            name: "flow".into(),
            region: Region::hull_of(local_coords::skeleton_vertices()),
            formula: branch_flow_formula(),
        }],
        target_vertices: vec![local_coords::v1(), local_coords::v2()],
    }
}

/// The combinatorial retraction of the whole local skeleton onto the base
/// triangle: the two-branch formula on the fundamental hull, extended by the
/// triangle symmetries, with the identity on the base.
pub fn quintic_combinatorial_retraction() -> PlMap {
    let hull = local_coords::combinatorial_hull();
    let branch1 = Piece {
        name: "flow".into(),
        region: Region::hull_of(hull.clone()).with_guard(branch_guard_cleared()),
        formula: branch_flow_formula(),
    };
    let zero_minus_guard = Expr::ci(0).sub(branch_guard_cleared());
    let branch2 = Piece {
        name: "drop".into(),
        region: Region::hull_of(hull).with_guard(zero_minus_guard),
        formula: vec![
            Expr::ci(0),
            Expr::var(1).div(Expr::var(0).add(Expr::ci(1))),
            Expr::ci(0),
        ],
    };
    let mut pieces = vec![Piece {
        name: "base".into(),
        region: Region::hull_of(local_coords::base_triangle()),
        formula: vec![Expr::var(0), Expr::var(1), Expr::ci(0)],
    }];
    for (k, g) in triangle_symmetries().into_iter().enumerate() {
        pieces.push(branch1.conjugate(&g, &format!("flow/{k}")));
        pieces.push(branch2.conjugate(&g, &format!("drop/{k}")));
    }
    PlMap {
        name: "quintic-combinatorial".into(),
        dim: 3,
        domain: Region::hull_of(local_coords::skeleton_vertices()),
        pieces,
        target_vertices: local_coords::base_triangle(),
    }
}

/// Vertical collapse of the extra three-cell onto the upper triangle.
pub fn collapse_kappa() -> PlMap {
    PlMap {
        name: "kappa".into(),
        dim: 3,
        domain: Region::hull_of(local_coords::extra_cell()),
        pieces: vec![Piece {
            name: "project".into(),
            region: Region::hull_of(local_coords::extra_cell()),
            formula: vec![Expr::var(0), Expr::var(1), Expr::ci(1)],
        }],
        target_vertices: vec![local_coords::v12(), local_coords::v13(), local_coords::v23()],
    }
}

/// The glued retraction of the full local skeleton (including the extra
/// cell) onto the base triangle: the combinatorial retraction on the
/// skeleton, precomposed with the vertical collapse on the extra cell.
pub fn assemble_pi_prime() -> PlMap {
    let rho = quintic_combinatorial_retraction();
    let kappa_map = AffMap::new(
        &[
            &[rat(1, 1), rat(0, 1), rat(0, 1)],
            &[rat(0, 1), rat(1, 1), rat(0, 1)],
            &[rat(0, 1), rat(0, 1), rat(0, 1)],
        ],
        &[rat(0, 1), rat(0, 1), rat(1, 1)],
    ); // (x, y, z) -> (x, y, 1)
    let mut pieces = rho.pieces.clone();
    let extra = local_coords::extra_cell();
    for piece in &rho.pieces {
        let mut composed = piece.precompose(&kappa_map, &format!("{}+collapse", piece.name));
        // restrict to the extra cell: the pulled-back hull is a cylinder
        composed.region.hull = Some(extra.clone());
        pieces.push(composed);
    }
    let mut domain_vertices = local_coords::skeleton_vertices();
    domain_vertices.push(local_coords::v123_prime());
    PlMap {
        name: "pi-prime".into(),
        dim: 3,
        // union of two hulls, expressed as piece-level hulls; the domain
        // accepts a point iff some piece region contains it
        domain: Region::default(),
        pieces,
        target_vertices: local_coords::base_triangle(),
    }
}

// ---------------------------------------------------------------------------
// deterministic verification sweeps

/// Deterministic rational grid over the bounding box of a vertex set: every
/// coordinate is a multiple of `1/denominator`.
pub fn sample_grid(vertices: &[RVec], denominator: i64) -> Vec<RVec> {
    assert!(denominator > 0);
    let dim = vertices[0].dim();
    let mut lows = Vec::with_capacity(dim);
    let mut highs = Vec::with_capacity(dim);
    for d in 0..dim {
        let vals: Vec<Rat> = vertices.iter().map(|v| v.get(d).clone()).collect();
        lows.push(vals.iter().min().unwrap().clone());
        highs.push(vals.iter().max().unwrap().clone());
    }
    let q = Rat::from(Int::from(denominator));
    let mut steps: Vec<Vec<Rat>> = Vec::with_capacity(dim);
    for d in 0..dim {
        let lo = (lows[d].clone() * q.clone()).floor().to_integer();
        let hi = (highs[d].clone() * q.clone()).ceil().to_integer();
        let mut axis = Vec::new();
        let mut k = lo.clone();
        while k <= hi {
            axis.push(Rat::new(k.clone(), Int::from(denominator)));
            k += Int::one();
        }
        steps.push(axis);
    }
    let mut out = vec![RVec::zeros(0)];
    for axis in steps {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for prefix in &out {
            for v in &axis {
                let mut entries = prefix.entries().to_vec();
                entries.push(v.clone());
                next.push(RVec::new(entries));
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone)]
pub struct RetractionReport {
    pub map: String,
    pub samples: usize,
    pub evaluated: usize,
    pub coverage_failures: Vec<String>,
    pub seam_failures: Vec<String>,
    pub idempotence_failures: Vec<String>,
    pub containment_failures: Vec<String>,
    pub missed_vertices: Vec<String>,
}

impl RetractionReport {
    pub fn pass(&self) -> bool {
        self.coverage_failures.is_empty()
            && self.seam_failures.is_empty()
            && self.idempotence_failures.is_empty()
            && self.containment_failures.is_empty()
            && self.missed_vertices.is_empty()
    }
}

/// Sweeps a deterministic rational grid: every in-domain point must evaluate
/// consistently across pieces, the image must stay in the domain with the
/// map the identity on it (idempotence), and the target vertices must be
/// reached. `exclusions` lists points where the formulas are undefined by
/// construction (isolated degeneracies such as the flow apex).
pub fn verify_retraction(
    map: &PlMap,
    grid_vertices: &[RVec],
    denominator: i64,
    exclusions: &[RVec],
) -> RetractionReport {
    let mut report = RetractionReport {
        map: map.name.clone(),
        samples: 0,
        evaluated: 0,
        coverage_failures: Vec::new(),
        seam_failures: Vec::new(),
        idempotence_failures: Vec::new(),
        containment_failures: Vec::new(),
        missed_vertices: Vec::new(),
    };
    let in_domain = |p: &RVec| -> bool {
        if map.domain.hull.is_some() || !map.domain.guards.is_empty() {
            map.domain.contains(p)
        } else {
            map.pieces.iter().any(|piece| piece.region.contains(p))
        }
    };
    let mut reached: BTreeSet<String> = BTreeSet::new();
    for p in sample_grid(grid_vertices, denominator) {
        if !in_domain(&p) || exclusions.contains(&p) {
            continue;
        }
        report.samples += 1;
        match map.eval(&p) {
            Ok(v) => {
                report.evaluated += 1;
                reached.insert(format!("{v:?}"));
                match map.eval(&v) {
                    Ok(vv) => {
                        if vv != v {
                            report.idempotence_failures.push(format!("{p:?}"));
                        }
                    }
                    Err(PlError::OutsideDomain) => {
                        report.containment_failures.push(format!("{p:?}"));
                    }
                    Err(_) => report.idempotence_failures.push(format!("{p:?}")),
                }
            }
            Err(PlError::PieceDisagreement(at, a, b)) => {
                report.seam_failures.push(format!("{at}: {a} vs {b}"));
            }
            Err(PlError::NoPieceApplies(at)) => {
                report.coverage_failures.push(at);
            }
            Err(PlError::OutsideDomain) | Err(PlError::ParameterOnBoundary) => {}
        }
    }
    for v in &map.target_vertices {
        if !reached.contains(&format!("{v:?}")) {
            report.missed_vertices.push(format!("{v:?}"));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(entries: &[(i64, i64)]) -> RVec {
        RVec::from_i64_pairs(entries)
    }

    #[test]
    fn wing_examples() {
        let w = ks_wing_retraction(&rat(0, 1)).unwrap();
        assert_eq!(
            w.eval(&rv(&[(0, 1), (1, 2)])).unwrap(),
            rv(&[(0, 1), (0, 1)])
        );
        assert_eq!(
            w.eval(&rv(&[(3, 4), (1, 8)])).unwrap(),
            rv(&[(5, 8), (0, 1)])
        );
        // apex hits the clamp
        assert_eq!(
            w.eval(&rv(&[(0, 1), (1, 1)])).unwrap(),
            rv(&[(0, 1), (0, 1)])
        );
        // parameter on the boundary rejected
        assert!(ks_wing_retraction(&rat(1, 1)).is_err());
        // the slant pieces fix the wing edges pointwise
        let w = ks_wing_retraction(&rat(1, 3)).unwrap();
        for k in 0..=4i64 {
            let x = rat(2 * k, 4) - rat(1, 1); // -1 .. 1
            let p = RVec::new(vec![x.clone(), Rat::zero()]);
            assert_eq!(w.eval(&p).unwrap(), p);
        }
    }

    #[test]
    fn wing_contraction_at_apex_without_clamp() {
        // untouched-model contraction (x, y) -> (x - y, 0) sends the apex to
        // the left endpoint and fixes the base edge pointwise
        let w = wing_model_contraction();
        assert_eq!(w.eval(&rv(&[(0, 1), (1, 1)])).unwrap(), rv(&[(-1, 1), (0, 1)]));
        for k in -2..=2i64 {
            let p = RVec::new(vec![rat(k, 2), Rat::zero()]);
            assert_eq!(w.eval(&p).unwrap(), p);
        }
        // affine isomorphism from the right slant edge onto the base edge
        let slant = |t: Rat| {
            // (x, 1 - x) for x in [0, 1]
            RVec::new(vec![t.clone(), Rat::one() - t])
        };
        let img = w.eval(&slant(rat(1, 4))).unwrap();
        assert_eq!(img, rv(&[(-1, 2), (0, 1)]));
        let report = verify_retraction(
            &w,
            &[
                RVec::from_ints(&[-1, 0]),
                RVec::from_ints(&[1, 0]),
                RVec::from_ints(&[0, 1]),
            ],
            12,
            &[],
        );
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn vertex_retraction_examples() {
        let m = quintic_vertex_retraction();
        // upper vertices map to the dictated base vertices
        assert_eq!(m.eval(&local_coords::v23()).unwrap(), local_coords::v2());
        assert_eq!(m.eval(&local_coords::v13()).unwrap(), local_coords::v1());
        // interior evaluation
        assert_eq!(
            m.eval(&RVec::new(vec![rat(0, 1), rat(1, 3), rat(1, 1)]))
                .unwrap(),
            RVec::new(vec![rat(3, 4), rat(7, 12), rat(0, 1)])
        );
        // base points are fixed
        let p = rv(&[(-1, 2), (1, 4), (0, 1)]);
        assert_eq!(m.eval(&p).unwrap(), p);
        // the apex is rejected: formula undefined, no other piece
        assert!(matches!(
            m.eval(&local_coords::v3()),
            Err(PlError::NoPieceApplies(_))
        ));
    }

    #[test]
    fn combinatorial_retraction_examples() {
        let m = quintic_combinatorial_retraction();
        assert_eq!(
            m.eval(&local_coords::v23()).unwrap(),
            RVec::from_ints(&[0, 0, 0])
        );
        // base points with nonpositive flow guard are fixed
        let p = rv(&[(-1, 2), (1, 4), (0, 1)]);
        assert_eq!(m.eval(&p).unwrap(), p);
        // a seam point evaluates consistently on both branches
        // (x + (1 - t/2) z = 0 at (0, 1/3, 0) trivially; use an interior one)
        let seam = RVec::new(vec![rat(-1, 2), rat(1, 6), rat(2, 3)]);
        // guard value: (x+z)(x+y+1) - yz = (1/6)(2/3) - (1/6)(2/3) = 0
        assert!(branch_guard_cleared().eval(&seam).unwrap().is_zero());
        m.eval(&seam).unwrap();
    }

    #[test]
    fn kappa_examples() {
        let k = collapse_kappa();
        assert_eq!(
            k.eval(&local_coords::v123_prime()).unwrap(),
            RVec::new(vec![rat(0, 1), rat(1, 3), rat(1, 1)])
        );
        let base = local_coords::v12();
        assert_eq!(k.eval(&base).unwrap(), base);
        // linearity on the segment to v23
        let mid = local_coords::v123_prime()
            .add(&local_coords::v23())
            .scale(&rat(1, 2));
        let img = k.eval(&mid).unwrap();
        let expected = RVec::new(vec![rat(0, 1), rat(1, 6), rat(1, 1)]);
        assert_eq!(img, expected);
    }

    #[test]
    fn symmetries_permute_vertices() {
        let s = rotation();
        assert_eq!(s.apply(&local_coords::v1()), local_coords::v2());
        assert_eq!(s.apply(&local_coords::v2()), local_coords::v3());
        assert_eq!(s.apply(&local_coords::v3()), local_coords::v1());
        assert_eq!(s.apply(&local_coords::v23()), local_coords::v13());
        assert_eq!(s.apply(&local_coords::v13()), local_coords::v12());
        assert_eq!(s.apply(&local_coords::v12()), local_coords::v23());
        let m = reflection();
        assert_eq!(m.apply(&local_coords::v2()), local_coords::v3());
        assert_eq!(m.apply(&local_coords::v13()), local_coords::v12());
        assert_eq!(triangle_symmetries().len(), 6);
    }

    #[test]
    fn wing_verification_sweep() {
        let w = ks_wing_retraction(&rat(0, 1)).unwrap();
        let report = verify_retraction(
            &w,
            &[
                RVec::from_ints(&[-1, 0]),
                RVec::from_ints(&[1, 0]),
                RVec::from_ints(&[0, 1]),
            ],
            12,
            &[],
        );
        assert!(report.pass(), "{report:?}");
        assert!(report.evaluated > 50);
    }

    #[test]
    fn combinatorial_sweep_small_grid() {
        // exactness/coverage smoke test at a coarse grid; the acceptance
        // suite runs the full denominator-12 sweep
        let m = quintic_combinatorial_retraction();
        let report = verify_retraction(&m, &local_coords::skeleton_vertices(), 4, &[]);
        assert!(report.pass(), "{report:?}");
        assert!(report.evaluated > 40);
    }

    #[test]
    fn pi_prime_collapses_extra_cell_consistently() {
        let pi = assemble_pi_prime();
        // the collapsed apex lands where its vertical projection does
        let rho = quintic_combinatorial_retraction();
        let apex = local_coords::v123_prime();
        let projected = RVec::new(vec![rat(0, 1), rat(1, 3), rat(1, 1)]);
        assert_eq!(pi.eval(&apex).unwrap(), rho.eval(&projected).unwrap());
        // identity on the base triangle
        let p = RVec::new(vec![rat(1, 4), rat(1, 2), rat(0, 1)]);
        assert_eq!(pi.eval(&p).unwrap(), p);
    }

    #[test]
    fn top_triangle_maps_onto_discriminant_graph() {
        // the image of the upper triangle is the three-legged graph of the
        // base triangle: barycenter to edge midpoints
        let m = quintic_combinatorial_retraction();
        let tops = [local_coords::v12(), local_coords::v13(), local_coords::v23()];
        let bc = RVec::new(vec![rat(0, 1), rat(1, 3), rat(0, 1)]);
        let mids = [
            RVec::from_ints(&[0, 0, 0]),
            RVec::new(vec![rat(1, 2), rat(1, 2), rat(0, 1)]),
            RVec::new(vec![rat(-1, 2), rat(1, 2), rat(0, 1)]),
        ];
        let on_gamma = |p: &RVec| -> bool {
            mids.iter().any(|m| {
                // p on the segment from bc to m
                let d = m.sub(&bc);
                let q = p.sub(&bc);
                let cross = d.get(0).clone() * q.get(1).clone() - d.get(1).clone() * q.get(0).clone();
                if !cross.is_zero() {
                    return false;
                }
                let t = if !d.get(0).is_zero() {
                    q.get(0).clone() / d.get(0).clone()
                } else if !d.get(1).is_zero() {
                    q.get(1).clone() / d.get(1).clone()
                } else {
                    Rat::zero()
                };
                !t.is_negative() && t <= Rat::one()
            })
        };
        let q = 6i64;
        for a in 0..=q {
            for b in 0..=(q - a) {
                let c = q - a - b;
                let p = tops[0]
                    .scale(&rat(a, q))
                    .add(&tops[1].scale(&rat(b, q)))
                    .add(&tops[2].scale(&rat(c, q)));
                let img = m.eval(&p).unwrap();
                assert!(on_gamma(&img), "{p:?} -> {img:?} not on the graph");
            }
        }
    }

    #[test]
    fn mismatched_clamp_reports_seam_failure() {
        // clamp piece built with a different parameter than the slants
        let mut bad = ks_wing_retraction(&rat(0, 1)).unwrap();
        bad.pieces[2].formula[0] = Expr::c(rat(1, 6));
        let report = verify_retraction(
            &bad,
            &[
                RVec::from_ints(&[-1, 0]),
                RVec::from_ints(&[1, 0]),
                RVec::from_ints(&[0, 1]),
            ],
            12,
            &[],
        );
        assert!(!report.seam_failures.is_empty());
    }
}
