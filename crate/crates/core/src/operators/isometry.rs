use super::Operator;
use crate::error::{Error, Result};
use crate::orthogonality::polyhedral_view;
use crate::space::{Exponent, PolyhedralSpace, Space};

/// `Some(k)` when `T = k U` for an isometry `U` between the domain and
/// codomain, `None` otherwise. Equal entries are compared relative to `k`
/// with tolerance `tol`.
pub fn is_scalar_isometry(op: &Operator, tol: f64) -> Result<Option<f64>> {
    let n = op.domain().dim();
    if op.codomain().dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: op.codomain().dim(),
        });
    }
    if op.is_zero() {
        return Ok(None);
    }
    if let (Space::Lp(a), Space::Lp(b)) = (op.domain(), op.codomain()) {
        if a.exponent() == b.exponent() {
            return Ok(match a.exponent() {
                Exponent::Finite(2.0) => orthogonal_multiple(op, tol),
                _ => signed_permutation_multiple(op, tol),
            });
        }
    }
    match (polyhedral_view(op.domain()), polyhedral_view(op.codomain())) {
        (Some(d), Some(c)) => Ok(vertex_bijection(op, &d, &c, tol)),
        _ => Ok(None),
    }
}

fn orthogonal_multiple(op: &Operator, tol: f64) -> Option<f64> {
    let m = op.matrix();
    let g = m.transpose() * m;
    let k2 = g[(0, 0)];
    let n = g.nrows();
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { k2 } else { 0.0 };
            if (g[(i, j)] - want).abs() > tol * k2.max(1e-300) {
                return None;
            }
        }
    }
    Some(k2.sqrt())
}

fn signed_permutation_multiple(op: &Operator, tol: f64) -> Option<f64> {
    let m = op.matrix();
    let n = m.nrows();
    let k = m.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let big = |i: usize, j: usize| (m[(i, j)].abs() - k).abs() <= tol * k;
    let small = |i: usize, j: usize| m[(i, j)].abs() <= tol * k;
    for i in 0..n {
        let row_big = (0..n).filter(|&j| big(i, j)).count();
        let col_big = (0..n).filter(|&j| big(j, i)).count();
        let row_rest = (0..n).all(|j| big(i, j) || small(i, j));
        let col_rest = (0..n).all(|j| big(j, i) || small(j, i));
        if row_big != 1 || col_big != 1 || !row_rest || !col_rest {
            return None;
        }
    }
    Some(k)
}

/// `T/k` maps the vertices of one ball injectively onto the vertices of
/// the other, which for linear maps of polytopes is the same as mapping
/// ball onto ball.
fn vertex_bijection(op: &Operator, d: &PolyhedralSpace<f64>, c: &PolyhedralSpace<f64>, tol: f64) -> Option<f64> {
    if d.vertices().len() != c.vertices().len() || op.rank(1e-9) < d.dim() {
        return None;
    }
    let images: Vec<Vec<f64>> = d.vertices().iter().map(|v| op.apply(v)).collect();
    let k = c.norm_unchecked(&images[0]);
    let mut hit = vec![false; c.vertices().len()];
    for im in &images {
        if (c.norm_unchecked(im) - k).abs() > tol * k {
            return None;
        }
        let idx = c.vertices().iter().position(|w| {
            w.iter().zip(im).all(|(a, b)| (a - b / k).abs() <= tol * (1.0 + a.abs()))
        })?;
        if std::mem::replace(&mut hit[idx], true) {
            return None;
        }
    }
    Some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{preset_space, Preset};

    #[test]
    fn octagon_rotation_scaled() {
        let s = preset_space(&Preset::Regular2nGon(4)).unwrap();
        let (c, h) = (3.0 * 0.5f64.sqrt(), 3.0 * 0.5f64.sqrt());
        let t = Operator::endo(&[vec![c, -h], vec![h, c]], s).unwrap();
        let k = is_scalar_isometry(&t, 1e-9).unwrap().unwrap();
        assert!((k - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lp_cases() {
        let l3 = preset_space(&Preset::Lp(3, Exponent::Finite(3.0))).unwrap();
        let perm = Operator::endo(&[vec![0.0, -2.0, 0.0], vec![2.0, 0.0, 0.0], vec![0.0, 0.0, 2.0]], l3.clone()).unwrap();
        assert_eq!(is_scalar_isometry(&perm, 1e-9).unwrap(), Some(2.0));
        let diag = Operator::endo(&[vec![1.0 - 0.5 / 3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]], l3).unwrap();
        assert_eq!(is_scalar_isometry(&diag, 1e-9).unwrap(), None);
        let l2 = preset_space(&Preset::Lp(2, Exponent::Finite(2.0))).unwrap();
        let rot = Operator::endo(&[vec![0.6, -0.8], vec![0.8, 0.6]], l2).unwrap();
        assert!((is_scalar_isometry(&rot, 1e-9).unwrap().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn octagon_to_square_is_not() {
        let d = preset_space(&Preset::Regular2nGon(4)).unwrap();
        let c = preset_space(&Preset::Linf(2)).unwrap();
        let t = Operator::new(&[vec![1.0, -1.0], vec![1.0, 1.0]], d, c).unwrap();
        assert_eq!(is_scalar_isometry(&t, 1e-9).unwrap(), None);
    }
}
