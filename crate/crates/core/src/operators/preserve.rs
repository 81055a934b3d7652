use std::collections::HashMap;

use rand::Rng;

use super::{Method, Operator, PreservationConfig, Verdict, Witness};
use crate::error::{Error, Result};
use crate::geom::{axpy, dot, lerp, scale};
use crate::linprog::{Cmp, LinearProgram};
use crate::orthogonality::{is_bj_orthogonal, is_eps_orthogonal, polyhedral_view, OrthoConfig};
use crate::sampling::{self, SeededRng};
use crate::space::{check_dim, Face, PolyhedralSpace, Space, SupportSet};

/// Pointwise problems larger than `|Ext J(x)|^2 * facets` fall back to
/// sampling.
const LP_BUDGET: usize = 20_000;
/// Cap on the LP objective; any positive optimum is already a violation.
const T_CAP: f64 = 10.0;
/// Vertex sets above this size are not enumerated as test points.
const MAX_STRUCTURED_VERTICES: usize = 4096;

#[derive(Clone, Debug)]
struct Outcome {
    /// `max` over unit `y` in `x^⊥` of `min_g g(Ty) - eps ||Ty||`.
    worst: f64,
    y: Option<Vec<f64>>,
}

/// Shared state for repeated pointwise checks of one operator. The exact
/// verdict at `x` depends only on the labels of `Ext J(x)` and
/// `Ext J(Tx)`, so LP outcomes are cached per label pair.
pub(super) struct Checker<'a> {
    op: &'a Operator,
    eps: f64,
    cfg: &'a PreservationConfig,
    poly: Option<(PolyhedralSpace<f64>, PolyhedralSpace<f64>)>,
    memo: HashMap<(Vec<usize>, Vec<usize>), Outcome>,
    pub(super) work: usize,
    rng: SeededRng,
}

impl<'a> Checker<'a> {
    pub(super) fn new(op: &'a Operator, eps: f64, cfg: &'a PreservationConfig) -> Result<Self> {
        OrthoConfig {
            epsilon: eps,
            tol: cfg.tol,
            ..Default::default()
        }
        .validate()?;
        if op.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let poly = polyhedral_view(op.domain()).zip(polyhedral_view(op.codomain()));
        Ok(Checker {
            op,
            eps,
            cfg,
            poly,
            memo: HashMap::new(),
            work: 0,
            rng: sampling::rng(cfg.seed),
        })
    }

    fn exact_capable(&self) -> bool {
        self.poly.is_some()
    }

    pub(super) fn at(&mut self, x: &[f64]) -> Result<Verdict> {
        let op = self.op;
        check_dim(op.domain().dim(), x)?;
        let tx = op.apply(x);
        if op.codomain().norm_unchecked(&tx) <= self.cfg.tol * (1.0 + op.domain().norm_unchecked(x)) {
            // 0 is eps-orthogonal to everything
            op.domain().support_set(x)?;
            return Ok(Verdict {
                holds: true,
                witness: None,
                checked: 0,
                method: Method::Exact,
                margin: self.eps,
            });
        }
        if let Some((dom, cod)) = &self.poly {
            let sx = dom.support_set(x)?;
            let stx = cod.support_set(&tx)?;
            if let (Some(lx), Some(ltx)) = (sx.labels(), stx.labels()) {
                if lx.len() * lx.len() * dom.dual_vertices().len() <= LP_BUDGET {
                    let key = (lx.to_vec(), ltx.to_vec());
                    let (outcome, solved) = match self.memo.get(&key) {
                        Some(o) => (o.clone(), 0),
                        None => {
                            let (o, solved) = lp_worst(op, dom, cod, &sx, &stx, self.eps);
                            self.memo.insert(key, o.clone());
                            (o, solved)
                        }
                    };
                    self.work += solved;
                    return self.conclude(x, outcome, solved, Method::Exact);
                }
            }
        }
        let (outcome, drawn) = self.sampled_worst(x, &tx)?;
        self.work += drawn;
        self.conclude(x, outcome, drawn, Method::Sampled)
    }

    fn conclude(&self, x: &[f64], outcome: Outcome, checked: usize, method: Method) -> Result<Verdict> {
        let tol = self.cfg.tol;
        if outcome.worst > 10.0 * tol {
            if let Some(y) = &outcome.y {
                if let Some(w) = verify_witness(self.op, x, y, self.eps, tol)? {
                    return Ok(Verdict {
                        holds: false,
                        witness: Some(w),
                        checked,
                        method,
                        margin: -outcome.worst,
                    });
                }
            }
        }
        Ok(Verdict {
            holds: true,
            witness: None,
            checked,
            method,
            margin: -outcome.worst,
        })
    }

    fn sampled_worst(&mut self, x: &[f64], tx: &[f64]) -> Result<(Outcome, usize)> {
        let op = self.op;
        let n = op.domain().dim();
        let sx = op.domain().support_set(x)?;
        let stx = op.codomain().support_set(tx)?;
        let mut dirs: Vec<Vec<f64>> = Vec::new();
        if let Some(ext) = sx.extremes() {
            for f in ext.iter().take(16) {
                for i in 0..n {
                    let mut e = vec![0.0; n];
                    e[i] = 1.0;
                    dirs.push(project_kernel(f, x, &e, sx.value));
                }
            }
        }
        for _ in 0..self.cfg.samples {
            let f = random_in_face(&sx, &mut self.rng);
            let r = sampling::gaussian(&mut self.rng, n);
            dirs.push(project_kernel(&f, x, &r, sx.value));
        }
        let mut best = Outcome {
            worst: f64::NEG_INFINITY,
            y: None,
        };
        let drawn = dirs.len();
        for y in dirs {
            let ny = op.domain().norm_unchecked(&y);
            if ny <= 1e-12 {
                continue;
            }
            let y = scale(&y, 1.0 / ny);
            let ty = op.apply(&y);
            let (lo, hi) = stx.range(&ty);
            let t = lo.max(-hi) - self.eps * op.codomain().norm_unchecked(&ty);
            if t > best.worst {
                best = Outcome {
                    worst: t,
                    y: Some(if lo >= -hi { y } else { scale(&y, -1.0) }),
                };
            }
        }
        Ok((best, drawn))
    }
}

/// `r` moved along `x` into `ker f`, where `f(x) = fx`.
fn project_kernel(f: &[f64], x: &[f64], r: &[f64], fx: f64) -> Vec<f64> {
    axpy(-dot(f, r) / fx, x, r)
}

/// A random element of `conv J(x)`.
fn random_in_face(set: &SupportSet<f64>, rng: &mut SeededRng) -> Vec<f64> {
    match &set.face {
        Face::Extremes { functionals, .. } => {
            let w: Vec<f64> = functionals.iter().map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let total: f64 = w.iter().sum();
            let mut f = vec![0.0; set.point.len()];
            for (g, wi) in functionals.iter().zip(&w) {
                f = axpy(wi / total, g, &f);
            }
            f
        }
        Face::SignPattern { signs, free } => {
            let mut f: Vec<f64> = signs.iter().map(|&s| s as f64).collect();
            for &i in free {
                f[i] = rng.gen_range(-1.0..=1.0);
            }
            f
        }
    }
}

/// Exact worst case over `x^⊥` for fixed extreme sets, one LP per domain
/// facet `h` and ordered pair `(f_i, f_j)` of `Ext J(x)`: maximize `t` over
/// `y` on the facet with `f_i(y) <= 0 <= f_j(y)` and
/// `(g - eps h_k)(Ty) >= t` for all `g` in `Ext J(Tx)` and dual vertices
/// `h_k` of the codomain. `x^⊥` is the union of these pieces, and the
/// sign flip `y -> -y` covers the other side of the absolute value.
fn lp_worst(
    op: &Operator,
    dom: &PolyhedralSpace<f64>,
    cod: &PolyhedralSpace<f64>,
    sx: &SupportSet<f64>,
    stx: &SupportSet<f64>,
    eps: f64,
) -> (Outcome, usize) {
    let n = dom.dim();
    let ex = sx.extremes().expect("labelled support set");
    let eg = stx.extremes().expect("labelled support set");
    let raw_rows: Vec<Vec<f64>> = eg
        .iter()
        .flat_map(|g| {
            cod.dual_vertices().iter().map(move |h| {
                let d: Vec<f64> = g.iter().zip(h.iter()).map(|(a, b)| a - eps * b).collect();
                d
            })
        })
        .map(|d| op.pull_back(&d))
        .collect();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(raw_rows.len());
    for r in raw_rows {
        if !rows.iter().any(|q| q.iter().zip(&r).all(|(a, b)| (a - b).abs() <= 1e-14)) {
            rows.push(r);
        }
    }
    let mut best = Outcome {
        worst: f64::NEG_INFINITY,
        y: None,
    };
    let mut solved = 0;
    for h in dom.dual_vertices() {
        for fi in ex {
            for fj in ex {
                // h(y) = 1 rules out f_i = h and f_j = -h
                if fi == h || fj.iter().zip(h.iter()).all(|(a, b)| *a == -b) {
                    continue;
                }
                let mut lp = LinearProgram::new();
                for _ in 0..n {
                    lp.var(0.0, f64::NEG_INFINITY, f64::INFINITY);
                }
                lp.var(1.0, f64::NEG_INFINITY, T_CAP);
                lp.constrain(h.0.clone(), Cmp::Eq, 1.0);
                for other in dom.dual_vertices() {
                    if other != h {
                        lp.constrain(other.0.clone(), Cmp::Le, 1.0);
                    }
                }
                if fi == fj {
                    lp.constrain(fi.0.clone(), Cmp::Eq, 0.0);
                } else {
                    lp.constrain(fi.0.clone(), Cmp::Le, 0.0);
                    lp.constrain(fj.0.clone(), Cmp::Ge, 0.0);
                }
                for r in &rows {
                    let mut row = r.clone();
                    row.push(-1.0);
                    lp.constrain(row, Cmp::Ge, 0.0);
                }
                solved += 1;
                if let Some((t, sol)) = lp.maximize() {
                    if t > best.worst {
                        best = Outcome {
                            worst: t,
                            y: Some(sol[..n].to_vec()),
                        };
                    }
                }
            }
        }
    }
    (best, solved)
}

/// Re-checks a candidate with the plain deciders. `y` is first nudged
/// along `x` onto `x^⊥` to absorb solver round-off. Returns the witness
/// when `x ⊥_B y` holds and `Tx` fails `eps`-orthogonality to `Ty` by more
/// than `10 tol`.
pub fn verify_witness(op: &Operator, x: &[f64], y: &[f64], eps: f64, tol: f64) -> Result<Option<Witness>> {
    let sx = op.domain().support_set(x)?;
    check_dim(op.domain().dim(), y)?;
    let (lo, hi) = sx.range(y);
    let shift = if lo > 0.0 {
        lo
    } else if hi < 0.0 {
        hi
    } else {
        0.0
    };
    let y = axpy(-shift / sx.value, x, y);
    let cfg = OrthoConfig {
        epsilon: eps,
        tol,
        ..Default::default()
    };
    if !is_bj_orthogonal(op.domain(), x, &y, &cfg)?.holds {
        return Ok(None);
    }
    let tx = op.apply(x);
    if op.codomain().norm_unchecked(&tx) <= tol {
        return Ok(None);
    }
    let d = is_eps_orthogonal(op.codomain(), &tx, &op.apply(&y), &cfg)?;
    Ok((d.margin < -10.0 * tol).then(|| Witness {
        x: x.to_vec(),
        y,
        margin: d.margin,
    }))
}

/// Does `T` preserve `eps`-orthogonality at `x`, i.e. does `x ⊥_B y` imply
/// `Tx ⊥_B^eps Ty` for every `y`? Exact (by linear programming) when both
/// spaces are polyhedral and `Ext J(x)` is small, sampled otherwise.
pub fn preserves_eps_at(op: &Operator, x: &[f64], eps: f64, cfg: &PreservationConfig) -> Result<Verdict> {
    let mut c = Checker::new(op, eps, cfg)?;
    c.at(x)
}

/// Vertices, facet centroids and edge midpoints of a polyhedral unit ball,
/// or coordinate directions and their pairwise sums otherwise. All are
/// normalized to the unit sphere.
pub fn structured_points(space: &Space) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    match polyhedral_view(space) {
        Some(p) => {
            let verts = p.vertices();
            if verts.len() <= MAX_STRUCTURED_VERTICES {
                out.extend(verts.iter().map(|v| v.0.clone()));
            }
            for f in 0..p.dual_vertices().len() {
                let facet = p.facet(f);
                let mut c = vec![0.0; p.dim()];
                for &v in facet {
                    c = axpy(1.0 / facet.len() as f64, &verts[v], &c);
                }
                out.push(c);
            }
            if verts.len() <= 64 {
                for (a, b) in edges(&p) {
                    out.push(lerp(&verts[a], &verts[b], 0.5));
                }
            }
        }
        None => {
            let n = space.dim();
            for i in 0..n {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                out.push(e.clone());
                for j in (i + 1)..n {
                    for s in [1.0, -1.0] {
                        let mut d = e.clone();
                        d[j] = s;
                        out.push(d);
                    }
                }
            }
        }
    }
    out.into_iter()
        .filter_map(|p| {
            let n = space.norm_unchecked(&p);
            (n > 1e-12).then(|| scale(&p, 1.0 / n))
        })
        .collect()
}

/// Vertex pairs whose shared facets meet in a line.
fn edges(p: &PolyhedralSpace<f64>) -> Vec<(usize, usize)> {
    let n = p.dim();
    let m = p.vertices().len();
    let mut out = Vec::new();
    for a in 0..m {
        for b in (a + 1)..m {
            let shared: Vec<Vec<f64>> = p
                .incidence()
                .iter()
                .enumerate()
                .filter(|(_, inc)| inc.contains(&a) && inc.contains(&b))
                .map(|(f, _)| p.dual_vertices()[f].0.clone())
                .collect();
            if shared.len() + 1 >= n && crate::scalar::rank_svd(&shared, 1e-9) + 1 >= n {
                out.push((a, b));
            }
        }
    }
    out
}

/// For 2-D polyhedral spaces: vertices plus, on every edge, the points
/// where two codomain dual vertices agree on `Tx` and the midpoints of the
/// pieces between them. The pair `(Ext J(x), Ext J(Tx))` is constant on
/// each open piece, so these points see every case.
fn planar_subdivision(op: &Operator, dom: &PolyhedralSpace<f64>, cod: &PolyhedralSpace<f64>) -> Vec<Vec<f64>> {
    let verts = dom.vertices();
    let duals = cod.dual_vertices();
    let mut out: Vec<Vec<f64>> = verts.iter().map(|v| v.0.clone()).collect();
    for f in 0..dom.dual_vertices().len() {
        let facet = dom.facet(f);
        let (a, b) = (&verts[facet[0]], &verts[facet[1]]);
        let ta = op.apply(a);
        let tb = op.apply(b);
        let mut cuts = vec![0.0, 1.0];
        for i in 0..duals.len() {
            for j in (i + 1)..duals.len() {
                let d: Vec<f64> = duals[i].iter().zip(duals[j].iter()).map(|(p, q)| p - q).collect();
                let (da, db) = (dot(&d, &ta), dot(&d, &tb));
                if (da - db).abs() > 1e-15 {
                    let s = da / (da - db);
                    if s > 0.0 && s < 1.0 {
                        cuts.push(s);
                    }
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|p, q| (*p - *q).abs() < 1e-13);
        for w in cuts.windows(2) {
            out.push(lerp(a, b, w[0]));
            out.push(lerp(a, b, 0.5 * (w[0] + w[1])));
        }
    }
    out
}

/// Test points for a global check and whether they are exhaustive.
fn global_points(op: &Operator, exhaustive_ok: bool) -> (Vec<Vec<f64>>, bool) {
    if exhaustive_ok && op.domain().dim() == 2 {
        if let (Some(dom), Some(cod)) = (polyhedral_view(op.domain()), polyhedral_view(op.codomain())) {
            return (planar_subdivision(op, &dom, &cod), true);
        }
    }
    (structured_points(op.domain()), false)
}

/// Preservation at every `x`. Exact for 2-D polyhedral spaces; otherwise
/// structured points and `cfg.samples` random points are checked.
pub fn preserves_eps_global(op: &Operator, eps: f64, cfg: &PreservationConfig) -> Result<Verdict> {
    let mut c = Checker::new(op, eps, cfg)?;
    let (mut points, exhaustive) = global_points(op, c.exact_capable());
    let mut rng = sampling::rng(cfg.seed.wrapping_add(1));
    if !exhaustive {
        points.extend((0..cfg.samples).map(|_| sampling::sphere_point(op.domain(), &mut rng)));
    }
    let mut method = if exhaustive { Method::Exact } else { Method::Sampled };
    let mut margin = f64::INFINITY;
    let mut checked = 0;
    for x in &points {
        let v = c.at(x)?;
        checked += v.checked.max(1);
        method = method.weaker(v.method);
        margin = margin.min(v.margin);
        if !v.holds {
            return Ok(Verdict {
                checked,
                method,
                margin,
                ..v
            });
        }
    }
    Ok(Verdict {
        holds: true,
        witness: None,
        checked,
        method,
        margin,
    })
}

/// Looks for a pair `x ⊥_B y` with `Tx` not `eps`-orthogonal to `Ty`,
/// spending at most `budget` evaluations (one per test point plus one per
/// LP or sampled direction). Structured points come first, then random
/// ones. In 2-D polyhedral spaces the structured points are exhaustive and
/// `None` is definitive.
pub fn witness_search_nonpreservation(op: &Operator, eps: f64, budget: usize, seed: u64) -> Result<Option<Witness>> {
    let cfg = PreservationConfig {
        samples: 64,
        seed,
        ..Default::default()
    };
    let mut c = Checker::new(op, eps, &cfg)?;
    let (points, exhaustive) = global_points(op, c.exact_capable());
    let mut spent = 0usize;
    let visit = |c: &mut Checker, x: &[f64], spent: &mut usize| -> Result<Option<Witness>> {
        let before = c.work;
        let v = c.at(x)?;
        *spent += 1 + c.work - before;
        Ok(v.witness)
    };
    for x in &points {
        if spent >= budget {
            return Ok(None);
        }
        if let Some(w) = visit(&mut c, x, &mut spent)? {
            return Ok(Some(w));
        }
    }
    if exhaustive {
        return Ok(None);
    }
    let mut rng = sampling::rng(seed.wrapping_add(1));
    while spent < budget {
        let x = sampling::sphere_point(op.domain(), &mut rng);
        if let Some(w) = visit(&mut c, &x, &mut spent)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}
