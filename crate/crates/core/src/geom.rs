//! Small dense-geometry helpers on `f64` coordinates.

use nalgebra::DMatrix;

use crate::space::PolyhedralSpace;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn euclid(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| x * k).collect()
}

pub fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal basis of the orthogonal complement of `rows`.
pub fn null_space(rows: &[Vec<f64>], n: usize, tol: f64) -> Vec<Vec<f64>> {
    if rows.is_empty() {
        return (0..n)
            .map(|i| {
                let mut e = vec![0.0; n];
                e[i] = 1.0;
                e
            })
            .collect();
    }
    // pad to a square matrix so the SVD returns a full V
    let m = rows.len().max(n);
    let a = DMatrix::from_fn(m, n, |i, j| if i < rows.len() { rows[i][j] } else { 0.0 });
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let top = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let cutoff = tol.max(16.0 * f64::EPSILON) * top.max(1e-300);
    (0..n)
        .filter(|&k| svd.singular_values[k] <= cutoff)
        .map(|k| vt.row(k).iter().cloned().collect())
        .collect()
}

/// Andrew's monotone chain; returns hull indices counter-clockwise without
/// collinear points.
pub fn convex_hull_2d(pts: &[[f64; 2]], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| {
        pts[a][0]
            .total_cmp(&pts[b][0])
            .then(pts[a][1].total_cmp(&pts[b][1]))
    });
    idx.dedup_by(|a, b| (pts[*a][0] - pts[*b][0]).abs() <= tol && (pts[*a][1] - pts[*b][1]).abs() <= tol);
    if idx.len() < 3 {
        return idx;
    }
    let turn = |o: usize, a: usize, b: usize| {
        (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0])
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let seq: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &p in seq {
            while hull.len() >= start + 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= tol {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Points of `ker g ∩ B` containing every vertex of that slice: the
/// crossings of `ker g` with segments between vertices of `B`.
pub fn kernel_crossings(space: &PolyhedralSpace<f64>, g: &[f64]) -> Vec<Vec<f64>> {
    let tol = *space.tol();
    let verts = space.vertices();
    let vals: Vec<f64> = verts.iter().map(|v| dot(g, v)).collect();
    let mut out = Vec::new();
    for a in 0..verts.len() {
        if vals[a].abs() <= tol {
            out.push(verts[a].0.clone());
            continue;
        }
        for b in (a + 1)..verts.len() {
            if vals[b].abs() <= tol || vals[a].signum() == vals[b].signum() {
                continue;
            }
            let t = vals[a] / (vals[a] - vals[b]);
            out.push(lerp(&verts[a], &verts[b], t));
        }
    }
    out
}

/// `V ∩ B` for the plane `V` through the origin with the given spanning
/// basis, in dimension 3: the polygon's vertices in cyclic order.
pub fn plane_slice(space: &PolyhedralSpace<f64>, basis: &[Vec<f64>; 2]) -> Vec<Vec<f64>> {
    let normal = cross(&basis[0], &basis[1]);
    let nn = euclid(&normal);
    let normal: Vec<f64> = normal.iter().map(|c| c / nn).collect();
    // orthonormal frame of the plane for the hull computation
    let e1 = scale(&basis[0], 1.0 / euclid(&basis[0]));
    let e2 = cross(&normal, &e1).to_vec();
    let pts = kernel_crossings(space, &normal);
    let flat: Vec<[f64; 2]> = pts.iter().map(|p| [dot(p, &e1), dot(p, &e2)]).collect();
    convex_hull_2d(&flat, *space.tol())
        .into_iter()
        .map(|i| pts[i].clone())
        .collect()
}
