use serde::Serialize;

use super::{preserves_eps_global, structured_points, Operator, PreservationConfig};
use crate::cones::{cone_region, member};
use crate::error::{Error, Result};
use crate::geom::euclid;
use crate::orthogonality::{epsilon_x, polyhedral_view};
use crate::report::Check;
use crate::sampling;
use crate::scalar::{rank_svd, Combinations};
use crate::space::{check_dim, sign_completions, Face, PolyhedralSpace, Space};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FacetImage {
    pub facet: usize,
    /// The common codomain label of the sampled images, if there is one.
    pub image: Option<usize>,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FacetImageMap {
    pub entries: Vec<FacetImage>,
    /// How many domain facets land on each codomain label.
    pub hits: Vec<usize>,
    pub surjective: bool,
    pub injective: bool,
    /// Whether `T` preserves `eps`-orthogonality globally, the setting in
    /// which the map is meant to be read.
    pub preserves: bool,
}

fn polyhedral_pair(op: &Operator) -> Result<(PolyhedralSpace<f64>, PolyhedralSpace<f64>)> {
    polyhedral_view(op.domain())
        .zip(polyhedral_view(op.codomain()))
        .ok_or_else(|| Error::UnsupportedSpace("facet maps need polyhedral spaces".into()))
}

/// Samples each cone `A_f` of the domain and records which codomain cone
/// its image falls in.
pub fn facet_image_map(op: &Operator, eps: f64, cfg: &PreservationConfig) -> Result<FacetImageMap> {
    if op.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let (dom, cod) = polyhedral_pair(op)?;
    let mut rng = sampling::rng(cfg.seed);
    let mut hits = vec![0; cod.dual_vertices().len()];
    let mut entries = Vec::new();
    for f in 0..dom.dual_vertices().len() {
        let region = cone_region(&dom, f)?;
        let mut points = vec![region.representative.clone()];
        points.extend((0..cfg.samples.min(64)).map(|_| member(&dom, &region, &mut rng)));
        let mut image: Option<usize> = None;
        let mut consistent = true;
        for p in &points {
            let tx = op.apply(p);
            if cod.norm_unchecked(&tx) <= cfg.tol {
                consistent = false;
                break;
            }
            match cod.extreme_support_labels(&tx)?.as_slice() {
                [g] if image.is_none_or(|h| h == *g) => image = Some(*g),
                _ => {
                    consistent = false;
                    break;
                }
            }
        }
        let image = if consistent { image } else { None };
        if let Some(g) = image {
            hits[g] += 1;
        }
        entries.push(FacetImage { facet: f, image, consistent });
    }
    let surjective = hits.iter().all(|&h| h > 0);
    let injective = entries.iter().all(|e| e.consistent) && hits.iter().all(|&h| h <= 1);
    let preserves = preserves_eps_global(op, eps, cfg)?.holds;
    Ok(FacetImageMap {
        entries,
        hits,
        surjective,
        injective,
        preserves,
    })
}

fn unmet(msg: impl Into<String>) -> Error {
    Error::HypothesisUnmet(msg.into())
}

/// Checks that need `T` to preserve `eps`-orthogonality globally between
/// spaces with equally many facets, at `eps < eps_X`: extreme-support
/// counts, smoothness orders and neighbor counts are all carried over.
pub fn cardinality_checks(op: &Operator, eps: f64, cfg: &PreservationConfig) -> Result<Vec<Check>> {
    let (dom, cod) = polyhedral_pair(op).map_err(|_| unmet("both spaces must be polyhedral"))?;
    if dom.dual_vertices().len() != cod.dual_vertices().len() {
        return Err(unmet(format!(
            "dual vertex counts differ: {} vs {}",
            dom.dual_vertices().len(),
            cod.dual_vertices().len()
        )));
    }
    let ex = epsilon_x(op.domain())?.value;
    if eps >= ex {
        return Err(unmet(format!("eps = {eps} is not below eps_X = {ex}")));
    }
    let global = preserves_eps_global(op, eps, cfg)?;
    if !global.holds {
        return Err(unmet(format!("T does not preserve {eps}-orthogonality (margin {})", global.margin)));
    }

    let mut points = structured_points(op.domain());
    let mut rng = sampling::rng(cfg.seed.wrapping_add(7));
    points.extend((0..cfg.samples).map(|_| sampling::sphere_point(op.domain(), &mut rng)));
    let mut card_bad = None;
    let mut order_bad = None;
    for x in &points {
        let tx = op.apply(x);
        let (sx, stx) = (dom.support_set(x)?, cod.support_set(&tx)?);
        if card_bad.is_none() && sx.extreme_count() != stx.extreme_count() {
            card_bad = Some((x.clone(), sx.extreme_count(), stx.extreme_count()));
        }
        let (ox, otx) = (sx.smoothness_order(dom.tol().to_owned()), stx.smoothness_order(cod.tol().to_owned()));
        if order_bad.is_none() && ox != otx {
            order_bad = Some((x.clone(), ox, otx));
        }
    }
    let mut out = Vec::new();
    let mk = |name: &str, bad: Option<(Vec<f64>, usize, usize)>| match bad {
        None => Check::new(name, true, 0.0),
        Some((x, a, b)) => Check::new(name, false, -1.0).with_witness(serde_json::json!({"x": x, "domain": a, "codomain": b})),
    };
    out.push(mk("ext_cardinality", card_bad));
    out.push(mk("smoothness_order", order_bad));

    let map = facet_image_map(op, eps, cfg)?;
    let mut tau_bad = None;
    for e in &map.entries {
        if let Some(g) = e.image {
            let (a, b) = (dom.neighbors(e.facet).len(), cod.neighbors(g).len());
            if a != b && tau_bad.is_none() {
                tau_bad = Some((e.facet, g, a, b));
            }
        }
    }
    out.push(match tau_bad {
        None => Check::new("neighbor_cardinality", true, 0.0),
        Some((f, g, a, b)) => Check::new("neighbor_cardinality", false, -1.0)
            .with_witness(serde_json::json!({"facet": f, "image": g, "domain": a, "codomain": b})),
    });
    let bij = map.injective && map.surjective;
    out.push(Check::new("facet_map_bijective", bij, if bij { 0.0 } else { -1.0 }));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceCheck {
    pub holds: bool,
    /// Positions in the listing of `Ext J(x)` (dual-vertex labels when the
    /// space is polyhedral).
    pub violating: Option<[usize; 3]>,
    pub count: usize,
}

/// Every three distinct extreme supporting functionals at `x` are
/// linearly independent.
pub fn three_functional_independence(space: &Space, x: &[f64]) -> Result<IndependenceCheck> {
    check_dim(space.dim(), x)?;
    let set = space.support_set(x)?;
    let (funcs, labels): (Vec<Vec<f64>>, Option<Vec<usize>>) = match &set.face {
        Face::Extremes { functionals, labels } => (functionals.iter().map(|f| f.0.clone()).collect(), labels.clone()),
        Face::SignPattern { signs, free } => {
            if free.len() > 12 {
                return Err(Error::UnsupportedSpace("support face too large to enumerate".into()));
            }
            (sign_completions(signs, free).into_iter().map(|f| f.0).collect(), None)
        }
    };
    if funcs.len() < 3 {
        return Err(Error::TooFewFunctionals { found: funcs.len() });
    }
    let name = |i: usize| labels.as_ref().map_or(i, |l| l[i]);
    for c in Combinations::new(funcs.len(), 3) {
        let rows: Vec<Vec<f64>> = c.iter().map(|&i| funcs[i].clone()).collect();
        if rank_svd(&rows, 1e-9) < 3 {
            return Ok(IndependenceCheck {
                holds: false,
                violating: Some([name(c[0]), name(c[1]), name(c[2])]),
                count: funcs.len(),
            });
        }
    }
    Ok(IndependenceCheck {
        holds: true,
        violating: None,
        count: funcs.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexImage {
    pub index: usize,
    /// Vertex that `T v_i` is a positive multiple of.
    pub image: Option<usize>,
    pub scalar: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsecutiveReport {
    pub vertices: Vec<VertexImage>,
    pub onto_vertices: bool,
    pub consecutive: bool,
    pub equal_scalars: bool,
    pub holds: bool,
}

/// Vertex count of a regular polygon centred at 0 with unit circumradius,
/// or `None`.
fn regular_polygon_order(p: &PolyhedralSpace<f64>) -> Option<usize> {
    if p.dim() != 2 {
        return None;
    }
    let v = p.vertices();
    let m = v.len();
    let step = 2.0 * std::f64::consts::PI / m as f64;
    let angle = |i: usize| v[i][1].atan2(v[i][0]);
    let regular = v.iter().all(|w| (euclid(w) - 1.0).abs() < 1e-9)
        && (0..m).all(|i| {
            let d = (angle((i + 1) % m) - angle(i)).rem_euclid(2.0 * std::f64::consts::PI);
            (d - step).abs() < 1e-9
        });
    regular.then_some(m)
}

/// For an operator on a regular `2n`-gon (`n >= 3`) that preserves
/// `eps`-orthogonality with `eps < eps_X`: each vertex goes to a positive
/// multiple of a vertex, neighbors to neighbors, with one common scalar.
pub fn consecutive_vertex_check(op: &Operator, eps: f64, cfg: &PreservationConfig) -> Result<ConsecutiveReport> {
    let (dom, cod) = polyhedral_pair(op).map_err(|_| unmet("domain must be a regular polygon"))?;
    let m = regular_polygon_order(&dom).ok_or_else(|| unmet("domain is not a regular polygon"))?;
    if m < 6 {
        return Err(unmet("the polygon needs at least 6 vertices"));
    }
    let same = cod.vertices().len() == m
        && dom
            .vertices()
            .iter()
            .zip(cod.vertices())
            .all(|(a, b)| a.iter().zip(b.iter()).all(|(p, q)| (p - q).abs() < 1e-9));
    if !same {
        return Err(unmet("codomain must be the same polygon"));
    }
    let ex = epsilon_x(op.domain())?.value;
    if eps >= ex {
        return Err(unmet(format!("eps = {eps} is not below eps_X = {ex}")));
    }
    let global = preserves_eps_global(op, eps, cfg)?;
    if !global.holds {
        return Err(unmet(format!("T does not preserve {eps}-orthogonality (margin {})", global.margin)));
    }
    let vertices: Vec<VertexImage> = dom
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let tv = op.apply(v);
            let k = euclid(&tv);
            let image = cod
                .vertices()
                .iter()
                .position(|w| w.iter().zip(&tv).all(|(a, b)| (a - b / k).abs() < 1e-7));
            VertexImage { index: i, image, scalar: k }
        })
        .collect();
    let onto_vertices = vertices.iter().all(|v| v.image.is_some());
    let consecutive = onto_vertices && {
        let step = |i: usize| (vertices[(i + 1) % m].image.unwrap() + m - vertices[i].image.unwrap()) % m;
        let s0 = step(0);
        (s0 == 1 || s0 == m - 1) && (0..m).all(|i| step(i) == s0)
    };
    let kmax = vertices.iter().map(|v| v.scalar).fold(0.0, f64::max);
    let kmin = vertices.iter().map(|v| v.scalar).fold(f64::INFINITY, f64::min);
    let equal_scalars = kmax - kmin <= 1e-9 * kmax;
    Ok(ConsecutiveReport {
        holds: onto_vertices && consecutive && equal_scalars,
        vertices,
        onto_vertices,
        consecutive,
        equal_scalars,
    })
}
