//! Chart atlas on the boundary of the dual simplex: per-vertex linear charts
//! given by coordinate differences, their face-wise affine transitions with
//! corner detection across codimension-one seams, and the comparison of each
//! vertex chart with the fan structure of projective space.

use num_traits::{One, Zero};

use crate::fan::projective_space;
use crate::report::{fmt_matrix, Report};
use crate::{IMat, IVec, Int, RMat, RVec, Rat};

/// Vertices `e_0, ..., e_{n+1}` of the dual simplex, as representatives in
/// the ambient space (coordinates are only ever used through differences, so
/// the diagonal quotient is harmless).
pub fn simplex_vertices(n: usize) -> Vec<RVec> {
    (0..n + 2)
        .map(|i| {
            let mut v = vec![Rat::zero(); n + 2];
            v[i] = Rat::one();
            RVec::new(v)
        })
        .collect()
}

/// The chart at vertex `i`: coordinate differences against a reference
/// vertex, skipping the vertex itself. Linear on the ambient space,
/// injective on the star of `e_i` in the boundary complex.
pub fn chart(n: usize, i: usize) -> impl Fn(&RVec) -> RVec {
    let reference = if i == n + 1 { n } else { n + 1 };
    let components: Vec<usize> = (0..n + 2)
        .filter(|&j| j != i && j != reference)
        .collect();
    move |x: &RVec| {
        RVec::new(
            components
                .iter()
                .map(|&j| x.get(j).clone() - x.get(reference).clone())
                .collect(),
        )
    }
}

/// Barycentric rational samples of the face spanned by the given vertices.
fn face_samples(vertices: &[RVec], denominator: i64) -> Vec<RVec> {
    let k = vertices.len();
    let mut out = Vec::new();
    let mut weights = vec![0i64; k];
    fn rec(
        idx: usize,
        left: i64,
        weights: &mut Vec<i64>,
        vertices: &[RVec],
        q: i64,
        out: &mut Vec<RVec>,
    ) {
        if idx + 1 == weights.len() {
            weights[idx] = left;
            let mut p = RVec::zeros(vertices[0].dim());
            for (w, v) in weights.iter().zip(vertices) {
                p = p.add(&v.scale(&Rat::new(Int::from(*w), Int::from(q))));
            }
            out.push(p);
            return;
        }
        for w in 0..=left {
            weights[idx] = w;
            rec(idx + 1, left - w, weights, vertices, q, out);
        }
    }
    rec(0, denominator, &mut weights, vertices, denominator, &mut out);
    out
}

/// Affine map through matched point pairs; `None` if no single affine map
/// fits all pairs exactly.
fn solve_affine(pairs: &[(RVec, RVec)]) -> Option<(RMat, RVec)> {
    let n = pairs[0].0.dim();
    let m = pairs[0].1.dim();
    let k = pairs.len();
    let mut p = RMat::zeros(k, n + 1);
    let mut q = RMat::zeros(k, m);
    for (r, (a, b)) in pairs.iter().enumerate() {
        for c in 0..n {
            p.set(r, c, a.get(c).clone());
        }
        p.set(r, n, Rat::one());
        for c in 0..m {
            q.set(r, c, b.get(c).clone());
        }
    }
    let x = p.solve_unique(&q)?;
    let mut mat = RMat::zeros(m, n);
    for r in 0..m {
        for c in 0..n {
            mat.set(r, c, x.get(c, r).clone());
        }
    }
    let shift = RVec::new((0..m).map(|r| x.get(n, r).clone()).collect());
    Some((mat, shift))
}

fn apply_affine(f: &(RMat, RVec), p: &RVec) -> RVec {
    f.0.mul_vec(p).add(&f.1)
}

/// The canonical ray assignment at a vertex: neighbours in ascending order
/// are matched with the rays of projective space in list order.
fn fan_rays(n: usize) -> Vec<IVec> {
    projective_space(n).rays().to_vec()
}

/// Full comparison report for the chart atlas in dimension `n` (2 or 3
/// supported by the built-in scenarios; the construction itself is uniform).
pub fn fermat_li_charts(n: usize) -> Report {
    let mut report = Report::new(format!("fermat-li (dimension {n})"));
    let vertices = simplex_vertices(n);
    let n_vert = n + 2;

    // (a) transitions affine on each shared top face, with corners across
    // the codimension-one seams of the overlap
    for i in 0..n_vert {
        for j in i + 1..n_vert {
            let fi = chart(n, i);
            let fj = chart(n, j);
            let shared_faces: Vec<usize> =
                (0..n_vert).filter(|&m| m != i && m != j).collect();
            let mut maps = Vec::new();
            for &m in &shared_faces {
                let face: Vec<usize> = (0..n_vert).filter(|&v| v != m).collect();
                let pairs: Vec<(RVec, RVec)> = face
                    .iter()
                    .map(|&v| (fi(&vertices[v]), fj(&vertices[v])))
                    .collect();
                let aff = solve_affine(&pairs);
                let ok = match &aff {
                    None => false,
                    Some(f) => {
                        let face_vs: Vec<RVec> =
                            face.iter().map(|&v| vertices[v].clone()).collect();
                        face_samples(&face_vs, 4)
                            .iter()
                            .all(|p| apply_affine(f, &fi(p)) == fj(p))
                    }
                };
                report.check(
                    format!("chart {i} to {j}: affine on the face opposite {m}"),
                    ok,
                    "one affine map on the whole face",
                    if ok { "affine" } else { "not affine" },
                    "",
                );
                if let Some(f) = aff {
                    maps.push((m, f));
                }
            }
            // corner across each codimension-one seam of the overlap
            for a in 0..maps.len() {
                for b in a + 1..maps.len() {
                    let (ma, fa) = &maps[a];
                    let (mb, fb) = &maps[b];
                    let seam: Vec<RVec> = (0..n_vert)
                        .filter(|&v| v != *ma && v != *mb)
                        .map(|v| vertices[v].clone())
                        .collect();
                    let agree_on_seam = face_samples(&seam, 3)
                        .iter()
                        .all(|p| apply_affine(fa, &fi(p)) == apply_affine(fb, &fi(p)));
                    let differ = fa != fb;
                    report.check(
                        format!(
                            "charts {i},{j}: corner across the seam between faces {ma} and {mb}"
                        ),
                        agree_on_seam && differ,
                        "maps agree on the seam but differ off it",
                        format!("agree on seam: {agree_on_seam}, maps differ: {differ}"),
                        "",
                    );
                }
            }
        }
    }

    // (b) each vertex chart is the fan structure of projective space up to a
    // unimodular change of coordinates
    for i in 0..n_vert {
        match vertex_chart_vs_fan(n, i) {
            Some(u) => report.check(
                format!("chart at vertex {i} matches the fan structure"),
                true,
                "unimodular comparison",
                fmt_matrix(&u),
                "neighbour directions onto the fan rays",
            ),
            None => report.check(
                format!("chart at vertex {i} matches the fan structure"),
                false,
                "unimodular comparison",
                "no integral unimodular match",
                "",
            ),
        }
    }
    report
}

/// The unimodular matrix carrying the chart directions at vertex `i` onto
/// the projective-space rays (canonical neighbour order), if one exists.
pub fn vertex_chart_vs_fan(n: usize, i: usize) -> Option<IMat> {
    let vertices = simplex_vertices(n);
    let fi = chart(n, i);
    let neighbors: Vec<usize> = (0..n + 2).filter(|&j| j != i).collect();
    let rays = fan_rays(n);
    assert_eq!(neighbors.len(), rays.len());
    // solve U . dir_k = ray_k on an independent subset, verify the rest
    let dirs: Vec<RVec> = neighbors.iter().map(|&j| fi(&vertices[j])).collect();
    let d = RMat::from_col_vecs(&dirs[..n]);
    let r = RMat::from_col_vecs(&rays[..n].iter().map(|v| v.to_rat()).collect::<Vec<_>>());
    let d_inv = d.inverse()?;
    let u_rat = r.mul(&d_inv);
    // integrality and unimodularity
    let mut u = IMat::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let e = u_rat.get(a, b);
            if !e.denom().is_one() {
                return None;
            }
            u.set(a, b, e.numer().clone());
        }
    }
    if !u.is_unimodular().ok()? {
        return None;
    }
    // the remaining rays must match too
    for (k, dir) in dirs.iter().enumerate() {
        let image = u.to_rat().mul_vec(dir);
        if image != rays[k].to_rat() {
            return None;
        }
    }
    Some(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charts_send_vertices_to_rays() {
        let f0 = chart(3, 0);
        let vs = simplex_vertices(3);
        assert_eq!(f0(&vs[1]), RVec::from_ints(&[1, 0, 0]));
        assert_eq!(f0(&vs[4]), RVec::from_ints(&[-1, -1, -1]));
        assert_eq!(f0(&vs[0]), RVec::from_ints(&[0, 0, 0]));
    }

    #[test]
    fn dimension_three_report_passes() {
        let report = fermat_li_charts(3);
        assert!(report.passed(), "{}", report.render_text());
    }

    #[test]
    fn dimension_two_report_passes() {
        let report = fermat_li_charts(2);
        assert!(report.passed(), "{}", report.render_text());
    }

    #[test]
    fn unimodular_comparison_found_for_every_vertex() {
        for i in 0..5 {
            assert!(vertex_chart_vs_fan(3, i).is_some(), "vertex {i}");
        }
    }
}
