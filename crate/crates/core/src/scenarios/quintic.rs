//! Degeneration of quintic threefolds: the boundary-of-four-simplex dual
//! complex, the small resolutions per blow-up order, the five displayed
//! discriminant monodromies with their product relations and rank-one
//! factorizations, toricness certification of every untouched component, and
//! the glued piecewise retraction with its per-vertex region check.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::fermat::vertex_chart_vs_fan;
use super::{
    base_report, run_loop, ConjugationSpec, LoopKind, LoopSpec, Model, Result, ScenarioData,
    StratumEntry,
};
use crate::affine_monodromy::{semisimple_factor, Factorization};
use crate::complexes::{gamma_graph, DualComplex};
use crate::fan::projective_space;
use crate::normal_bundle::StratumData;
use crate::pl_retractions::{
    assemble_pi_prime, in_hull, local_coords, quintic_combinatorial_retraction,
    quintic_vertex_retraction, sample_grid, triangle_symmetries, verify_retraction, AffMap, PlMap,
};
use crate::report::{fmt_matrix, Report};
use crate::{IMat, Int, RVec, Rat};

pub fn four_simplex_boundary() -> DualComplex {
    let maximal: Vec<Vec<usize>> = (0..5)
        .map(|skip| (0..5).filter(|&v| v != skip).collect())
        .collect();
    DualComplex::reduced((1..=5).map(|i| format!("v{i}")).collect(), &maximal)
}

fn im(rows: &[&[i64]]) -> IMat {
    IMat::from_rows_i64(rows)
}

fn models() -> Vec<Model> {
    (0..5).map(|m| Model::untouched(m, 5, 4)).collect()
}

/// The five displayed discriminant loops around the barycenter vertices of
/// the faces `v2v3v4`, `v1v2v4` and `v2v4v5`.
fn loop_specs() -> Vec<LoopSpec> {
    let b = |s: &str| s.to_string();
    let standard_basis = vec![b("v1"), b("v2"), b("v3")];
    vec![
        LoopSpec {
            name: "gamma_234_34".into(),
            kind: LoopKind::Codim1 {
                face: vec![1, 2, 3],
                pair: (2, 3),
                models: (b("untouched-v3"), b("untouched-v4")),
            },
            basis: standard_basis.clone(),
            origin: "v4".into(),
            invert: false,
            conjugation: None,
            expected: im(&[&[1, 0, 0], &[0, 1, 0], &[5, 0, 1]]),
            annotation: String::new(),
        },
        LoopSpec {
            name: "gamma_234_23".into(),
            kind: LoopKind::Codim1 {
                face: vec![1, 2, 3],
                pair: (1, 2),
                models: (b("untouched-v2"), b("untouched-v3")),
            },
            basis: standard_basis.clone(),
            origin: "v4".into(),
            invert: false,
            conjugation: None,
            expected: im(&[&[1, 0, 0], &[5, 1, 0], &[-5, 0, 1]]),
            annotation: String::new(),
        },
        LoopSpec {
            name: "gamma_234_24".into(),
            kind: LoopKind::Codim1 {
                face: vec![1, 2, 3],
                pair: (1, 3),
                models: (b("untouched-v2"), b("untouched-v4")),
            },
            basis: standard_basis.clone(),
            origin: "v4".into(),
            invert: false,
            conjugation: None,
            expected: im(&[&[1, 0, 0], &[5, 1, 0], &[0, 0, 1]]),
            annotation: String::new(),
        },
        LoopSpec {
            name: "gamma_124_24".into(),
            kind: LoopKind::Codim1 {
                face: vec![0, 1, 3],
                pair: (1, 3),
                models: (b("untouched-v2"), b("untouched-v4")),
            },
            basis: standard_basis.clone(),
            origin: "v4".into(),
            invert: false,
            conjugation: None,
            expected: im(&[&[1, 0, 0], &[0, 1, 5], &[0, 0, 1]]),
            annotation: String::new(),
        },
        LoopSpec {
            name: "gamma_245_24".into(),
            kind: LoopKind::Codim1 {
                face: vec![1, 3, 4],
                pair: (1, 3),
                models: (b("untouched-v2"), b("untouched-v4")),
            },
            basis: standard_basis,
            origin: "v4".into(),
            invert: false,
            conjugation: Some(ConjugationSpec {
                pre_basis: vec![b("v1"), b("v2"), b("v5")],
                expected_change: im(&[&[1, 0, -1], &[0, 1, 4], &[0, 0, -1]]),
                expected_pre: im(&[&[1, 0, 0], &[5, 1, 0], &[0, 0, 1]]),
            }),
            expected: im(&[&[1, 0, 0], &[5, 1, -5], &[0, 0, 1]]),
            annotation: "computed in the face's own basis, then conjugated".into(),
        },
    ]
}

/// Untouched components are projective three-space with a single derived
/// conormal summand; the other strata carry the lambda data derived from the
/// intersection tables.
fn strata() -> Vec<StratumEntry> {
    let mut out: Vec<StratumEntry> = (0..5)
        .map(|m| {
            StratumEntry::certified(
                StratumData::new(
                    format!("component v{} (untouched model)", m + 1),
                    3,
                    projective_space(3),
                    &[],
                    vec![true],
                    true,
                )
                .expect("valid stratum"),
            )
        })
        .collect();
    out.extend(super::local_model::local_strata());
    out
}

/// The discriminant graph: one three-legged star per two-dimensional face.
pub fn gamma_description(report: &mut Report) {
    let per_face = gamma_graph(2);
    let faces = 10; // two-dimensional faces of the boundary complex
    report.check_eq(
        "discriminant legs per two-face",
        &3usize,
        &per_face.faces_of_dim(1).len(),
        "",
    );
    report.info(
        "discriminant graph",
        format!(
            "{} two-faces: {} face barycenters, {} edge barycenters, {} segments",
            faces,
            faces,
            10, // edges of the boundary complex
            faces * 3
        ),
    );
}

/// Region assignment: each vertex star is governed by the model leaving that
/// component untouched; maximal cells are smooth for every model.
#[derive(Debug, Clone)]
pub struct RegionAssignment {
    /// vertex index -> model name
    pub vertex_regions: Vec<(usize, String)>,
    /// maximal cells, all governed by the dominating model
    pub cell_regions: Vec<Vec<usize>>,
}

pub fn region_assignment(complex: &DualComplex) -> RegionAssignment {
    RegionAssignment {
        vertex_regions: (0..complex.n_vertices())
            .map(|m| (m, format!("untouched-v{}", m + 1)))
            .collect(),
        cell_regions: complex.maximal_faces(),
    }
}

/// Combinatorial coverage audit: every vertex carries a star region, every
/// maximal cell an interior region; together with the star/discriminant
/// partition of each face this covers the complement of the discriminant.
pub fn region_coverage_ok(complex: &DualComplex, assignment: &RegionAssignment) -> bool {
    let vertices_covered = (0..complex.n_vertices())
        .all(|m| assignment.vertex_regions.iter().any(|(v, _)| *v == m));
    let cells_covered = complex
        .maximal_faces()
        .iter()
        .all(|c| assignment.cell_regions.contains(c));
    vertices_covered && cells_covered
}

// ---------------------------------------------------------------------------
// region check of the glued retraction

/// Barycentric coordinates of a base-plane point against the local triangle.
fn base_barycentrics(p: &RVec) -> Option<(Rat, Rat, Rat)> {
    if !p.get(2).is_zero() {
        return None;
    }
    let x = p.get(0).clone();
    let y = p.get(1).clone();
    let two = Rat::from(Int::from(2));
    let alpha = y.clone();
    let beta = (Rat::one() - y.clone() + x.clone()) / two.clone();
    let gamma = (Rat::one() - y - x) / two;
    Some((alpha, beta, gamma))
}

/// Open star of the local triangle vertex (1, 2 or 3) in the barycentric
/// subdivision: the corresponding coordinate strictly dominates.
fn in_star_prime_of_base(p: &RVec, m: usize) -> bool {
    match base_barycentrics(p) {
        None => false,
        Some((a, b, c)) => {
            if a.is_negative() || b.is_negative() || c.is_negative() {
                return false;
            }
            let coords = [a, b, c];
            let mine = coords[m].clone();
            coords
                .iter()
                .enumerate()
                .all(|(k, v)| k == m || *v < mine)
        }
    }
}

/// The symmetry moving the given base vertex into the apex slot of the flow
/// formula (vertex 3 of the local triangle).
fn symmetry_to_apex(m: usize) -> AffMap {
    let target = local_coords::v3();
    let sources = [local_coords::v1(), local_coords::v2(), local_coords::v3()];
    triangle_symmetries()
        .into_iter()
        .find(|g| g.apply(&sources[m]) == target)
        .expect("the triangle symmetries act transitively")
}

#[derive(Debug, Clone)]
pub struct RegionCheckOutcome {
    pub vertex: usize,
    pub points_checked: usize,
    pub mismatches: usize,
}

/// Verifies that over the open star of each base vertex, the glued
/// retraction agrees pointwise with the flow formula of the model keeping
/// that vertex untouched, on a rational grid of the requested density.
pub fn region_check(denominator: i64) -> Vec<RegionCheckOutcome> {
    let rho = quintic_combinatorial_retraction();
    let flow = quintic_vertex_retraction();
    let mut out = Vec::new();
    for m in 0..3usize {
        let g = symmetry_to_apex(m);
        let g_inv = g.inverse();
        // the flow formula of the m-th model lives on the pullback of the
        // formula hull
        let hull: Vec<RVec> = local_coords::vertex_formula_hull()
            .iter()
            .map(|v| g_inv.apply(v))
            .collect();
        let mut checked = 0;
        let mut mismatches = 0;
        for p in sample_grid(&local_coords::skeleton_vertices(), denominator) {
            if !in_hull(&p, &hull) {
                continue;
            }
            let image = match rho.eval(&p) {
                Ok(v) => v,
                Err(_) => continue,
            };
            if !in_star_prime_of_base(&image, m) {
                continue;
            }
            // model formula: conjugate the flow by the symmetry
            let model_value = match flow.eval(&g.apply(&p)) {
                Ok(v) => g_inv.apply(&v),
                Err(_) => continue, // apex of the flow: excluded by design
            };
            checked += 1;
            if model_value != image {
                mismatches += 1;
            }
        }
        out.push(RegionCheckOutcome {
            vertex: m,
            points_checked: checked,
            mismatches,
        });
    }
    out
}

// ---------------------------------------------------------------------------
// the scenario

pub struct QuinticOutputs {
    pub data: ScenarioData,
    pub pi_prime: PlMap,
}

pub fn quintic(samples: i64) -> Result<(QuinticOutputs, Report)> {
    let complex = four_simplex_boundary();
    let data = ScenarioData {
        name: "quintic".into(),
        complex,
        models: models(),
        loops: loop_specs(),
        strata: strata(),
        edge_params: BTreeMap::new(),
    };
    let mut report = base_report(&data)?;

    // product relations among the displayed matrices
    let outcome = |name: &str| -> Result<IMat> {
        let spec = data
            .loops
            .iter()
            .find(|l| l.name == name)
            .ok_or_else(|| super::ScenarioError::UnknownLoop(name.into()))?;
        Ok(run_loop(&data.complex, &data.models, spec)?.final_matrix)
    };
    let t_234_34 = outcome("gamma_234_34")?;
    let t_234_23 = outcome("gamma_234_23")?;
    let t_234_24 = outcome("gamma_234_24")?;
    let t_124_24 = outcome("gamma_124_24")?;
    let t_245_24 = outcome("gamma_245_24")?;
    let prod1 = t_234_34.mul(&t_234_23);
    report.check(
        "product relation around the face barycenter",
        prod1 == t_234_24,
        fmt_matrix(&t_234_24),
        fmt_matrix(&prod1),
        "composition of the two face loops",
    );
    let prod2 = t_124_24.mul(&t_245_24);
    report.check(
        "product relation around the edge barycenter",
        prod2 == t_234_24,
        fmt_matrix(&t_234_24),
        fmt_matrix(&prod2),
        "composition of the two edge loops",
    );

    // rank-one factorization with primitive factors, scale five
    for (name, t) in [
        ("gamma_234_34", &t_234_34),
        ("gamma_234_23", &t_234_23),
        ("gamma_234_24", &t_234_24),
        ("gamma_124_24", &t_124_24),
        ("gamma_245_24", &t_245_24),
    ] {
        let diff_rank = t.sub(&IMat::identity(3)).rank();
        match semisimple_factor(t, &Int::from(5)) {
            Factorization::RankOne { e, f } => {
                let prim = e.content().is_one() && f.content().is_one();
                report.check(
                    format!("{name}: rank-one shear with primitive factors"),
                    diff_rank == 1 && prim,
                    "T = Id + 5 (f x e), e and f primitive",
                    format!("rank {diff_rank}, e = {e:?}, f = {f:?}"),
                    "",
                );
            }
            other => {
                report.check(
                    format!("{name}: rank-one shear with primitive factors"),
                    false,
                    "rank-one factorization",
                    format!("{other:?}"),
                    "",
                );
            }
        }
    }

    // discriminant description and region assignment coverage
    gamma_description(&mut report);
    let assignment = region_assignment(&data.complex);
    report.check(
        "region assignment covers the skeleton off the discriminant",
        region_coverage_ok(&data.complex, &assignment),
        "vertex stars plus maximal-cell interiors",
        "covered",
        "faces split into vertex stars and the discriminant",
    );

    // fan structure at every vertex
    for m in 0..5 {
        let ok = vertex_chart_vs_fan(3, m).is_some();
        report.check(
            format!("vertex v{}: star chart matches the component fan", m + 1),
            ok,
            "unimodular comparison with the fan of projective three-space",
            if ok { "matched" } else { "no match" },
            "",
        );
    }

    // glued retraction: sweep and per-vertex region check on the local model
    let pi_prime = assemble_pi_prime();
    let mut grid_vertices = local_coords::skeleton_vertices();
    grid_vertices.push(local_coords::v123_prime());
    let sweep = verify_retraction(&pi_prime, &grid_vertices, samples, &[]);
    report.check(
        "glued retraction sweep",
        sweep.pass(),
        "idempotent, seam-consistent, base fixed",
        format!(
            "{} points evaluated, {} seams, {} idempotence, {} coverage",
            sweep.evaluated,
            sweep.seam_failures.len(),
            sweep.idempotence_failures.len(),
            sweep.coverage_failures.len()
        ),
        "",
    );
    for rc in region_check(samples) {
        report.check(
            format!(
                "region check over the star of base vertex {}",
                rc.vertex + 1
            ),
            rc.mismatches == 0 && rc.points_checked > 0,
            "glued retraction equals the untouched-model flow formula",
            format!("{} points, {} mismatches", rc.points_checked, rc.mismatches),
            "",
        );
    }

    Ok((QuinticOutputs { data, pi_prime }, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quintic_report_passes() {
        let (outputs, report) = quintic(6).unwrap();
        assert!(report.passed(), "{}", report.render_text());
        assert_eq!(outputs.data.loops.len(), 5);
    }

    #[test]
    fn displayed_matrices() {
        let (outputs, _) = quintic(4).unwrap();
        let m = |name: &str| {
            let spec = outputs.data.loops.iter().find(|l| l.name == name).unwrap();
            run_loop(&outputs.data.complex, &outputs.data.models, spec).unwrap()
        };
        let g = m("gamma_234_34");
        assert!(g.matches_expected && g.oracle_agrees);
        let g = m("gamma_245_24");
        assert!(g.matches_expected && g.oracle_agrees);
        let (change, pre) = g.conjugation.unwrap();
        assert_eq!(change, im(&[&[1, 0, -1], &[0, 1, 4], &[0, 0, -1]]));
        assert_eq!(pre, im(&[&[1, 0, 0], &[5, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn region_check_has_content() {
        for rc in region_check(6) {
            assert!(rc.points_checked > 5, "{rc:?}");
            assert_eq!(rc.mismatches, 0, "{rc:?}");
        }
    }
}
