//! Small exact linear algebra over a tower field: row reduction, rank,
//! kernels, and helpers for symmetric 3x3 quadratic-form matrices.

use crate::field::{Ctx, TowerElem};
use crate::poly::join_ctx;

pub type Mat = Vec<Vec<TowerElem>>;

pub fn mat_ctx(m: &Mat) -> Ctx {
    let mut ctx = m[0][0].ctx().clone();
    for row in m {
        for e in row {
            ctx = join_ctx(&ctx, e.ctx()).expect("towers");
        }
    }
    ctx
}

/// Reduced row echelon form; returns (rref, rank, pivot columns).
pub fn rref(m: &Mat) -> (Mat, usize, Vec<usize>) {
    let ctx = mat_ctx(m);
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Mat = m
        .iter()
        .map(|r| r.iter().map(|e| e.lift_to(&ctx).unwrap()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows).find(|&i| !a[i][c].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("pivot nonzero");
        for j in 0..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..cols {
                    let t = &a[r][j] * &factor;
                    a[i][j] = &a[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, r, pivots)
}

pub fn rank(m: &Mat) -> usize {
    rref(m).1
}

/// Basis of the right kernel.
pub fn kernel(m: &Mat) -> Vec<Vec<TowerElem>> {
    let ctx = mat_ctx(m);
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let (a, _, pivots) = rref(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![TowerElem::zero(&ctx); cols];
        v[fc] = TowerElem::one(&ctx);
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[ri][fc];
        }
        basis.push(v);
    }
    basis
}

pub fn det3(m: &[[TowerElem; 3]; 3]) -> TowerElem {
    let t1 = &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
    let t2 = &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
    let t3 = &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
    &(&t1 - &t2) + &t3
}

pub fn det2(m: &[[TowerElem; 2]; 2]) -> TowerElem {
    &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
}

pub fn sym3_to_mat(m: &[[TowerElem; 3]; 3]) -> Mat {
    m.iter().map(|r| r.to_vec()).collect()
}

/// v^T M w for symmetric 3x3.
pub fn bilin3(m: &[[TowerElem; 3]; 3], v: &[TowerElem; 3], w: &[TowerElem; 3]) -> TowerElem {
    let ctx = join_ctx(
        &mat_ctx(&sym3_to_mat(m)),
        &join_ctx(v[0].ctx(), w[0].ctx()).unwrap(),
    )
    .unwrap();
    let mut acc = TowerElem::zero(&ctx);
    for i in 0..3 {
        for j in 0..3 {
            let t = &(&m[i][j].lift_to(&ctx).unwrap() * &v[i].lift_to(&ctx).unwrap())
                * &w[j].lift_to(&ctx).unwrap();
            acc = &acc + &t;
        }
    }
    acc
}

pub fn eval_form3(m: &[[TowerElem; 3]; 3], v: &[TowerElem; 3]) -> TowerElem {
    bilin3(m, v, v)
}

/// 3x3 matrix-vector product.
pub fn matvec3(m: &[[TowerElem; 3]; 3], v: &[TowerElem; 3]) -> [TowerElem; 3] {
    std::array::from_fn(|i| {
        let mut s = &m[i][0] * &v[0];
        s = &s + &(&m[i][1] * &v[1]);
        &s + &(&m[i][2] * &v[2])
    })
}

pub fn matmul3(a: &[[TowerElem; 3]; 3], b: &[[TowerElem; 3]; 3]) -> [[TowerElem; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = &a[i][0] * &b[0][j];
            s = &s + &(&a[i][1] * &b[1][j]);
            &s + &(&a[i][2] * &b[2][j])
        })
    })
}

pub fn inv3(m: &[[TowerElem; 3]; 3]) -> Option<[[TowerElem; 3]; 3]> {
    let d = det3(m);
    if d.is_zero() {
        return None;
    }
    let di = d.inv().ok()?;
    let cof = |i: usize, j: usize| -> TowerElem {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let minor = &(&m[rows[0]][cols[0]] * &m[rows[1]][cols[1]])
            - &(&m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]);
        if (i + j) % 2 == 0 {
            minor
        } else {
            -&minor
        }
    };
    Some(std::array::from_fn(|i| std::array::from_fn(|j| &cof(j, i) * &di)))
}

/// Cross product: for two points it spans the line through them; for two
/// plane normals it spans their intersection.
pub fn cross3(a: &[TowerElem; 3], b: &[TowerElem; 3]) -> [TowerElem; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

pub fn is_zero_vec(v: &[TowerElem]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// Extend the given independent columns to an invertible 3x3 matrix with
/// standard basis vectors, trying them in a fixed order.
pub fn complete_basis3(ctx: &Ctx, given: &[[TowerElem; 3]]) -> [[TowerElem; 3]; 3] {
    let mut cols: Vec<[TowerElem; 3]> = given.to_vec();
    let std_vecs: [[i64; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for sv in std_vecs {
        if cols.len() == 3 {
            break;
        }
        let cand: [TowerElem; 3] = std::array::from_fn(|i| TowerElem::from_int(ctx, sv[i]));
        let mut trial = cols.clone();
        trial.push(cand);
        let m: Mat = (0..trial[0].len())
            .map(|i| trial.iter().map(|c| c[i].clone()).collect())
            .collect();
        if rank(&m) == trial.len() {
            cols = trial;
        }
    }
    assert_eq!(cols.len(), 3, "could not complete basis");
    let cols: [[TowerElem; 3]; 3] = [cols[0].clone(), cols[1].clone(), cols[2].clone()];
    // columns -> matrix
    std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Tower;

    #[test]
    fn rank_and_kernel() {
        let c = Tower::base();
        let e = |k: i64| TowerElem::from_int(&c, k);
        let m: Mat = vec![
            vec![e(1), e(2), e(3)],
            vec![e(2), e(4), e(6)],
            vec![e(0), e(1), e(1)],
        ];
        assert_eq!(rank(&m), 2);
        let k = kernel(&m);
        assert_eq!(k.len(), 1);
        for row in &m {
            let mut s = TowerElem::zero(&c);
            for (a, b) in row.iter().zip(&k[0]) {
                s = &s + &(a * b);
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn inverse3() {
        let c = Tower::base();
        let e = |k: i64| TowerElem::from_int(&c, k);
        let m = [
            [e(1), e(2), e(0)],
            [e(0), e(1), e(3)],
            [e(1), e(0), e(1)],
        ];
        let mi = inv3(&m).unwrap();
        let prod = matmul3(&m, &mi);
        for (i, row) in prod.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i == j {
                    assert!(v.is_one());
                } else {
                    assert!(v.is_zero());
                }
            }
        }
    }
}
