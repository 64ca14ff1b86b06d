//! Fully populated degeneration scenarios: intersection tables per model,
//! monodromy loops with stored reference matrices, toricness strata, and the
//! piecewise retraction data, reproducing every worked example end to end.

pub mod fermat;
pub mod k3;
pub mod local_model;
pub mod quintic;

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::affine_monodromy::{
    edge_loop, monodromy_2d, monodromy_combination, monodromy_in_basis, monodromy_transport,
    vertex_loop, MonodromyError, StarChart,
};
use crate::complexes::DualComplex;
use crate::report::{fmt_matrix, Report};
use crate::{IMat, IVec, Int};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("model has no table row for curve {0:?}")]
    MissingCurve(Vec<usize>),
    #[error("unknown model {0}")]
    UnknownModel(String),
    #[error("unknown loop {0}")]
    UnknownLoop(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error(transparent)]
    Lattice(#[from] crate::lattice::LatticeError),
}

pub type Result<T> = std::result::Result<T, ScenarioError>;

// ---------------------------------------------------------------------------
// models and intersection tables

/// A small resolution of the degeneration, identified by its blow-up order.
/// The intersection table assigns to each stratum curve the vector of its
/// intersection numbers against all components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    /// component indices in blow-up order; the last entry is untouched
    pub order: Vec<usize>,
    pub table: BTreeMap<Vec<usize>, IVec>,
}

impl Model {
    /// Table by the resolution rule: along each stratum curve, the component
    /// blown up last among the curve's members carries `-(k+1)` where `k+1`
    /// is the number of singular points on the curve, every other component
    /// meets the curve once.
    pub fn from_order(name: impl Into<String>, order: Vec<usize>, deep: i64) -> Self {
        let n = order.len();
        let curve_size = n - 2;
        let mut table = BTreeMap::new();
        let rank = |x: usize| order.iter().position(|&o| o == x).unwrap();
        for curve in subsets_of_size(n, curve_size) {
            let latest = *curve.iter().max_by_key(|&&x| rank(x)).unwrap();
            let mut row = IVec::new(vec![Int::from(1); n]);
            row.set(latest, Int::from(-deep));
            table.insert(curve, row);
        }
        Self {
            name: name.into(),
            order,
            table,
        }
    }

    /// The model leaving component `m` untouched: all other components blown
    /// up first, in ascending order.
    pub fn untouched(m: usize, n: usize, deep: i64) -> Self {
        let mut order: Vec<usize> = (0..n).filter(|&x| x != m).collect();
        order.push(m);
        Self::from_order(format!("untouched-v{}", m + 1), order, deep)
    }

    pub fn curve_row(&self, curve: &[usize]) -> Result<&IVec> {
        let mut key = curve.to_vec();
        key.sort_unstable();
        self.table
            .get(&key)
            .ok_or(ScenarioError::MissingCurve(key))
    }

    /// `b = -(C . D_component)` read from the table.
    pub fn b_of(&self, curve: &[usize], component: usize) -> Result<Int> {
        Ok(Int::zero() - self.curve_row(curve)?.get(component).clone())
    }

    /// Every table row pairs to zero against the (reduced) special fiber.
    pub fn rows_balanced(&self) -> bool {
        self.table.values().all(|row| {
            row.entries()
                .iter()
                .fold(Int::zero(), |acc, v| acc + v.clone())
                .is_zero()
        })
    }
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

// ---------------------------------------------------------------------------
// loops

/// A monodromy loop of a scenario, with the stored reference value and the
/// basis/orientation annotation needed to reproduce it exactly.
#[derive(Debug, Clone)]
pub struct LoopSpec {
    pub name: String,
    pub kind: LoopKind,
    /// vertex names of the requested basis
    pub basis: Vec<String>,
    pub origin: String,
    /// orientation annotation: take the inverse of the rule-oriented loop
    pub invert: bool,
    /// change of basis applied last: compute in `pre_basis` first, then
    /// conjugate into `basis` and compare the derived change matrix
    pub conjugation: Option<ConjugationSpec>,
    pub expected: IMat,
    pub annotation: String,
}

#[derive(Debug, Clone)]
pub struct ConjugationSpec {
    pub pre_basis: Vec<String>,
    pub expected_change: IMat,
    pub expected_pre: IMat,
}

#[derive(Debug, Clone)]
pub enum LoopKind {
    /// loop around a vertex inside one model, crossing the boundary curves
    /// to the listed neighbours in cyclic order
    Vertex {
        model: String,
        center: usize,
        cycle: Vec<usize>,
    },
    /// loop around the discriminant inside a codimension-one face, combining
    /// the models governing the two named vertices
    Codim1 {
        face: Vec<usize>,
        pair: (usize, usize),
        models: (String, String),
    },
}

#[derive(Debug, Clone)]
pub struct LoopOutcome {
    pub name: String,
    /// closed-form matrix in the chart basis
    pub closed_form: IMat,
    /// transport-oracle matrix in the chart basis
    pub oracle: IMat,
    pub oracle_agrees: bool,
    /// after basis conversion, orientation annotation and conjugation
    pub final_matrix: IMat,
    pub expected: IMat,
    pub matches_expected: bool,
    pub basis: Vec<String>,
    pub origin: String,
    pub annotation: String,
    /// derived change-of-basis and pre-conjugation matrix, when requested
    pub conjugation: Option<(IMat, IMat)>,
}

/// Evaluates one loop of a scenario: derives the b-data from the model
/// tables, computes the closed form and the transport oracle, and expresses
/// the result in the requested basis.
pub fn run_loop(
    complex: &DualComplex,
    models: &[Model],
    spec: &LoopSpec,
) -> Result<LoopOutcome> {
    let model_by_name = |name: &str| -> Result<&Model> {
        models
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| ScenarioError::UnknownModel(name.to_string()))
    };
    let vname = |v: usize| complex.vertex_name(v).to_string();

    let (chart, closed_form, oracle) = match &spec.kind {
        LoopKind::Vertex {
            model,
            center,
            cycle,
        } => {
            let model = model_by_name(model)?;
            let b: Vec<Int> = cycle
                .iter()
                .map(|&n| model.b_of(&[*center, n], n))
                .collect::<Result<_>>()?;
            let names: Vec<String> = cycle.iter().map(|&n| vname(n)).collect();
            let (atlas, lp) = vertex_loop(&vname(*center), &names, &b, &spec.name);
            let t = monodromy_transport(&atlas, &lp)?;
            let closed = monodromy_2d(&b);
            (atlas.into_iter().next().unwrap(), closed, t)
        }
        LoopKind::Codim1 { face, pair, models } => {
            let x = model_by_name(&models.0)?;
            let x_prime = model_by_name(&models.1)?;
            let mut tau = face.clone();
            tau.sort_unstable();
            let b = IVec::new(
                tau.iter()
                    .map(|&l| x.b_of(&tau, l))
                    .collect::<Result<_>>()?,
            );
            let b_prime = IVec::new(
                tau.iter()
                    .map(|&l| x_prime.b_of(&tau, l))
                    .collect::<Result<_>>()?,
            );
            let _ = pair;
            run_codim1(complex, &tau, &b, &b_prime, &spec.name)?
        }
    };

    let oracle_agrees = oracle.linear == closed_form && oracle.translation.is_zero();

    let final_matrix = express(&chart, &closed_form, spec)?;
    let conjugation = match &spec.conjugation {
        None => None,
        Some(c) => {
            let pre = to_basis(&chart, &closed_form, &c.pre_basis, &spec.origin, spec.invert)?;
            let b_pre = chart.basis_matrix(&c.pre_basis, &spec.origin)?;
            let b_final = chart.basis_matrix(&spec.basis, &spec.origin)?;
            let change = b_pre.inverse_unimodular()?.mul(&b_final);
            Some((change, pre))
        }
    };

    Ok(LoopOutcome {
        name: spec.name.clone(),
        closed_form,
        oracle: oracle.linear,
        oracle_agrees,
        matches_expected: final_matrix == spec.expected,
        final_matrix,
        expected: spec.expected.clone(),
        basis: spec.basis.clone(),
        origin: spec.origin.clone(),
        annotation: spec.annotation.clone(),
        conjugation,
    })
}

/// The two far vertices of a codimension-one face: the vertices completing
/// the face inside the two maximal faces containing it, in ascending order.
pub fn far_vertices(complex: &DualComplex, tau: &[usize]) -> (usize, usize) {
    let others: Vec<usize> = (0..complex.n_vertices())
        .filter(|&v| !tau.contains(&v))
        .filter(|&v| {
            let mut f = tau.to_vec();
            f.push(v);
            complex.has_face(&f)
        })
        .collect();
    assert_eq!(others.len(), 2, "codimension-one face expected");
    (others[0], others[1])
}

/// Core codimension-one loop evaluation for explicit b-vectors: builds the
/// two-chart atlas, runs the transport, and returns the basepoint chart with
/// the closed-form and oracle matrices.
pub fn run_codim1(
    complex: &DualComplex,
    tau: &[usize],
    b: &IVec,
    b_prime: &IVec,
    name: &str,
) -> Result<(StarChart, IMat, crate::affine_monodromy::AffineTransform)> {
    let (i0, iinf) = far_vertices(complex, tau);
    let vname = |v: usize| complex.vertex_name(v).to_string();
    let tau_names: Vec<String> = tau.iter().map(|&v| vname(v)).collect();
    let (atlas, lp) = edge_loop(&tau_names, &vname(i0), &vname(iinf), b, b_prime, name);
    let t = monodromy_transport(&atlas, &lp)?;
    let closed = monodromy_combination(b, b_prime);
    Ok((atlas.into_iter().next().unwrap(), closed, t))
}

pub fn to_basis(
    chart: &StarChart,
    t: &IMat,
    basis: &[String],
    origin: &str,
    invert: bool,
) -> Result<IMat> {
    let m = monodromy_in_basis(t, chart, basis, origin)?;
    Ok(if invert {
        m.inverse_unimodular()?
    } else {
        m
    })
}

fn express(chart: &StarChart, t: &IMat, spec: &LoopSpec) -> Result<IMat> {
    match &spec.conjugation {
        None => to_basis(chart, t, &spec.basis, &spec.origin, spec.invert),
        Some(c) => {
            // compute in the pre-basis, then change basis explicitly: the
            // comparison of the change matrix is part of the record
            let pre = to_basis(chart, t, &c.pre_basis, &spec.origin, spec.invert)?;
            let b_pre = chart.basis_matrix(&c.pre_basis, &spec.origin)?;
            let b_final = chart.basis_matrix(&spec.basis, &spec.origin)?;
            let change = b_pre.inverse_unimodular()?.mul(&b_final);
            Ok(crate::affine_monodromy::conjugate(&change, &pre)?)
        }
    }
}

/// Codimension-one loop evaluated from explicit b-vectors (used by the
/// dispersion construction, whose intermediate models carry no global
/// intersection table).
pub fn run_codim1_outcome(
    complex: &DualComplex,
    tau: &[usize],
    b: &IVec,
    b_prime: &IVec,
    spec: &LoopSpec,
) -> Result<LoopOutcome> {
    let (chart, closed_form, oracle) = run_codim1(complex, tau, b, b_prime, &spec.name)?;
    let oracle_agrees = oracle.linear == closed_form && oracle.translation.is_zero();
    let final_matrix = express(&chart, &closed_form, spec)?;
    Ok(LoopOutcome {
        name: spec.name.clone(),
        closed_form,
        oracle: oracle.linear,
        oracle_agrees,
        matches_expected: final_matrix == spec.expected,
        final_matrix,
        expected: spec.expected.clone(),
        basis: spec.basis.clone(),
        origin: spec.origin.clone(),
        annotation: spec.annotation.clone(),
        conjugation: None,
    })
}

/// What a scenario has established about one stratum: either every
/// hypothesis holds, or the named conormal summands fail nefness (and the
/// fan may be incomplete). The wall-local identities must hold either way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StratumExpectation {
    Certified,
    NotCertified { non_nef: Vec<usize>, incomplete: bool },
}

#[derive(Debug, Clone)]
pub struct StratumEntry {
    pub data: crate::normal_bundle::StratumData,
    pub expectation: StratumExpectation,
}

impl StratumEntry {
    pub fn certified(data: crate::normal_bundle::StratumData) -> Self {
        Self {
            data,
            expectation: StratumExpectation::Certified,
        }
    }

    pub fn singular(data: crate::normal_bundle::StratumData, non_nef: Vec<usize>) -> Self {
        Self {
            data,
            expectation: StratumExpectation::NotCertified {
                non_nef,
                incomplete: false,
            },
        }
    }

    pub fn incomplete(data: crate::normal_bundle::StratumData) -> Self {
        Self {
            data,
            expectation: StratumExpectation::NotCertified {
                non_nef: Vec::new(),
                incomplete: true,
            },
        }
    }
}

/// The full populated data of one built-in scenario.
#[derive(Debug, Clone)]
pub struct ScenarioData {
    pub name: String,
    pub complex: DualComplex,
    pub models: Vec<Model>,
    pub loops: Vec<LoopSpec>,
    pub strata: Vec<StratumEntry>,
    /// clamp parameters per edge, for scenarios carrying wings
    pub edge_params: BTreeMap<Vec<usize>, crate::Rat>,
}

/// Shared report section: table balance, every loop (closed form, oracle,
/// reference value), and the toricness report per stratum.
pub fn base_report(data: &ScenarioData) -> Result<Report> {
    let mut report = Report::new(data.name.clone());
    for model in &data.models {
        report.check(
            format!("{}: intersection table rows sum to zero", model.name),
            model.rows_balanced(),
            "0",
            if model.rows_balanced() { "0" } else { "nonzero" },
            "",
        );
    }
    for spec in &data.loops {
        let outcome = run_loop(&data.complex, &data.models, spec)?;
        report_loop(&mut report, &outcome);
    }
    for entry in &data.strata {
        let tb = crate::normal_bundle::check_toric_along_stratum(&entry.data);
        report_toricity_expected(&mut report, &tb, &entry.expectation);
    }
    Ok(report)
}

/// Stratum records against the scenario's established expectation: the
/// wall-local identities must always hold; nefness and completeness are
/// compared with what the scenario asserts about this stratum.
pub fn report_toricity_expected(
    report: &mut Report,
    tb: &crate::normal_bundle::ToricityReport,
    expectation: &StratumExpectation,
) {
    let name = &tb.stratum;
    let (expect_non_nef, expect_incomplete): (&[usize], bool) = match expectation {
        StratumExpectation::Certified => (&[], false),
        StratumExpectation::NotCertified {
            non_nef,
            incomplete,
        } => (non_nef, *incomplete),
    };
    report.check(
        format!("{name}: stratum fan valid and smooth"),
        tb.fan_violations.is_empty() && tb.smooth,
        "valid, smooth",
        format!(
            "violations {:?}, smooth {}",
            tb.fan_violations, tb.smooth
        ),
        "",
    );
    report.check(
        format!("{name}: completeness"),
        tb.complete != expect_incomplete,
        if expect_incomplete {
            "incomplete (affine chart), as established"
        } else {
            "complete"
        },
        format!("complete: {}", tb.complete),
        "",
    );
    for (j, ok, witness) in &tb.nef {
        let expect_nef = !expect_non_nef.contains(j);
        let as_expected = *ok == expect_nef;
        report.check(
            format!("{name}: conormal summand {j} nefness"),
            as_expected,
            if expect_nef {
                "nef".to_string()
            } else {
                "not nef (discriminant crosses here), as established".to_string()
            },
            match witness {
                None => format!("nef: {ok}"),
                Some(w) => format!("nef: {ok} (witness wall {:?})", w.rays),
            },
            "",
        );
    }
    report.check(
        format!("{name}: grading one on every normal-fan ray"),
        tb.ord_t_ok,
        "1",
        if tb.ord_t_ok { "1" } else { "violated" },
        "",
    );
    report.check(
        format!("{name}: curve relations lift to the normal-bundle lattice"),
        tb.relation_failure.is_none(),
        "all walls",
        match &tb.relation_failure {
            None => "all walls".to_string(),
            Some(w) => format!("fails at wall {:?}", w.rays),
        },
        "",
    );
    report.check(
        format!("{name}: boundary divisor sum identity"),
        tb.w_sum_ok,
        "holds",
        if tb.w_sum_ok { "holds" } else { "violated" },
        "",
    );
    report.check(
        format!("{name}: boundary divisors restrict to principal divisors"),
        tb.w_principal_ok,
        "principal",
        if tb.w_principal_ok {
            "principal"
        } else {
            "not principal"
        },
        "",
    );
    report.check(
        format!("{name}: divisor system transforms by the cone-change matrix"),
        tb.w_transform_failure.is_none(),
        "all adjacent pairs",
        format!("{:?}", tb.w_transform_failure),
        "",
    );
    report.check(
        format!("{name}: cone-change products trivial around cycles"),
        tb.cycles_ok,
        "identity",
        if tb.cycles_ok { "identity" } else { "nontrivial" },
        "",
    );
    let expect_certified = *expectation == StratumExpectation::Certified;
    report.check(
        format!("{name}: toric along the stratum"),
        tb.certified == expect_certified,
        if expect_certified {
            "certified"
        } else {
            "not certified, as established"
        },
        format!("certified: {}", tb.certified),
        "",
    );
}

/// Appends the toricness-hypothesis records for one stratum.
pub fn report_toricity(report: &mut Report, tb: &crate::normal_bundle::ToricityReport) {
    let name = &tb.stratum;
    report.check(
        format!("{name}: stratum fan valid"),
        tb.fan_violations.is_empty(),
        "no violations",
        format!("{:?}", tb.fan_violations),
        "",
    );
    report.check(
        format!("{name}: stratum fan smooth"),
        tb.smooth,
        "smooth",
        match &tb.smooth_witness {
            None => "smooth".to_string(),
            Some(c) => format!("witness cone {c:?}"),
        },
        "",
    );
    if tb.complete {
        for (j, ok, witness) in &tb.nef {
            report.check(
                format!("{name}: conormal summand {j} nef"),
                *ok,
                "nef",
                match witness {
                    None => "nef".to_string(),
                    Some(w) => format!("negative on wall {:?}", w.rays),
                },
                "",
            );
        }
    } else {
        report.check(
            format!("{name}: completeness precondition"),
            false,
            "complete fan",
            "incomplete fan: nefness not certifiable",
            "wall-local identities below still verified",
        );
    }
    report.check(
        format!("{name}: grading one on every normal-fan ray"),
        tb.ord_t_ok,
        "1",
        if tb.ord_t_ok { "1" } else { "violated" },
        "",
    );
    report.check(
        format!("{name}: curve relations lift to the normal-bundle lattice"),
        tb.relation_failure.is_none(),
        "all walls",
        match &tb.relation_failure {
            None => "all walls".to_string(),
            Some(w) => format!("fails at wall {:?}", w.rays),
        },
        "",
    );
    report.check(
        format!("{name}: boundary divisor sum identity"),
        tb.w_sum_ok,
        "holds",
        if tb.w_sum_ok { "holds" } else { "violated" },
        "",
    );
    report.check(
        format!("{name}: boundary divisors restrict to principal divisors"),
        tb.w_principal_ok,
        "principal",
        if tb.w_principal_ok {
            "principal"
        } else {
            "not principal"
        },
        "",
    );
    report.check(
        format!("{name}: divisor system transforms by the cone-change matrix"),
        tb.w_transform_failure.is_none(),
        "all adjacent pairs",
        format!("{:?}", tb.w_transform_failure),
        "",
    );
    report.check(
        format!("{name}: cone-change products trivial around cycles"),
        tb.cycles_ok,
        "identity",
        if tb.cycles_ok { "identity" } else { "nontrivial" },
        "",
    );
    report.check(
        format!("{name}: cutting components Cartier"),
        tb.cartier_ok,
        "true",
        format!("{}", tb.cartier_ok),
        "flag echoed from input",
    );
    report.check(
        format!("{name}: component intersections connected"),
        tb.connected,
        "true",
        format!("{}", tb.connected),
        "flag echoed from input",
    );
    report.info(
        format!("{name}: toric along the stratum"),
        if tb.certified {
            "certified (all hypotheses verified)".to_string()
        } else {
            "not certified".to_string()
        },
    );
}

/// Appends the standard per-loop records to a report.
pub fn report_loop(report: &mut Report, outcome: &LoopOutcome) {
    let basis = outcome.basis.join(",");
    report.check(
        format!("{}: closed form = transport oracle", outcome.name),
        outcome.oracle_agrees,
        fmt_matrix(&outcome.closed_form),
        fmt_matrix(&outcome.oracle),
        "",
    );
    report.check(
        format!(
            "{}: matrix in basis ({basis}) origin {}",
            outcome.name, outcome.origin
        ),
        outcome.matches_expected,
        fmt_matrix(&outcome.expected),
        fmt_matrix(&outcome.final_matrix),
        outcome.annotation.clone(),
    );
    if let Some((change, pre)) = &outcome.conjugation {
        report.info(
            format!("{}: change of basis", outcome.name),
            format!(
                "{} applied to {}",
                fmt_matrix(change),
                fmt_matrix(pre)
            ),
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rule_k3() {
        // blow-up order (1,2,3,4): along each curve the later member
        // carries -3, everything else 1
        let m = Model::from_order("x", vec![0, 1, 2, 3], 3);
        assert!(m.rows_balanced());
        assert_eq!(m.curve_row(&[0, 1]).unwrap(), &IVec::from_i64(&[1, -3, 1, 1]));
        assert_eq!(m.curve_row(&[0, 2]).unwrap(), &IVec::from_i64(&[1, 1, -3, 1]));
        assert_eq!(m.curve_row(&[2, 3]).unwrap(), &IVec::from_i64(&[1, 1, 1, -3]));
    }

    #[test]
    fn table_rule_quintic() {
        let m = Model::from_order("x", vec![0, 1, 2, 3, 4], 4);
        assert!(m.rows_balanced());
        assert_eq!(
            m.curve_row(&[0, 1, 2]).unwrap(),
            &IVec::from_i64(&[1, 1, -4, 1, 1])
        );
        assert_eq!(
            m.curve_row(&[1, 2, 3]).unwrap(),
            &IVec::from_i64(&[1, 1, 1, -4, 1])
        );
        assert_eq!(
            m.curve_row(&[2, 3, 4]).unwrap(),
            &IVec::from_i64(&[1, 1, 1, 1, -4])
        );
        assert_eq!(m.table.len(), 10);
    }

    #[test]
    fn untouched_orders() {
        let m = Model::untouched(1, 4, 3);
        assert_eq!(m.order, vec![0, 2, 3, 1]);
        // the untouched component keeps every exceptional curve of the
        // other member, so it carries the deep intersection number
        assert_eq!(m.b_of(&[0, 1], 1).unwrap(), Int::from(3));
        assert_eq!(m.b_of(&[0, 1], 0).unwrap(), Int::from(-1));
    }
}
