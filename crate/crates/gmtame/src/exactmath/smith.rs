use super::upoly::UPoly;
use crate::error::{Error, Result};
use num::traits::One;

/// Row-major polynomial matrix used by the Smith normal form.
pub type PolyMat = Vec<Vec<UPoly>>;

pub fn poly_mat_zero(rows: usize, cols: usize) -> PolyMat {
    vec![vec![UPoly::zero(); cols]; rows]
}

pub fn poly_mat_identity(n: usize) -> PolyMat {
    let mut m = poly_mat_zero(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = UPoly::one();
    }
    m
}

pub fn poly_mat_mul(a: &PolyMat, b: &PolyMat) -> PolyMat {
    let rows = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = poly_mat_zero(rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
            }
        }
    }
    out
}

/// Smith normal form data over Q[theta]: diagonal = left * input * right with
/// left, right unimodular, diagonal entries monic, each dividing the next,
/// zeros last.
#[derive(Clone, Debug)]
pub struct SmithData {
    pub diagonal: Vec<UPoly>,
    pub left: PolyMat,
    pub left_inv: PolyMat,
    pub right: PolyMat,
    pub right_inv: PolyMat,
}

pub fn smith_normal_form(a: &PolyMat) -> Result<SmithData> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut s = a.clone();
    let mut left = poly_mat_identity(rows);
    let mut left_inv = poly_mat_identity(rows);
    let mut right = poly_mat_identity(cols);
    let mut right_inv = poly_mat_identity(cols);

    let limit = rows.min(cols);
    for t in 0..limit {
        // pivot: minimal-degree nonzero entry in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s[i][j].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if s[i][j].degree() < s[pi][pj].degree() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break; // trailing submatrix is zero
        };
        swap_rows(&mut s, &mut left, &mut left_inv, t, pi);
        swap_cols(&mut s, &mut right, &mut right_inv, t, pj);

        let mut guard = 0usize;
        loop {
            guard += 1;
            if guard > 10_000 {
                return Err(Error::Internal("smith normal form did not converge".into()));
            }
            // clear column t below diagonal
            let mut dirty = false;
            for i in t + 1..rows {
                if s[i][t].is_zero() {
                    continue;
                }
                let (q, r) = s[i][t].div_rem(&s[t][t]);
                row_sub(&mut s, &mut left, &mut left_inv, i, t, &q);
                if !r.is_zero() {
                    swap_rows(&mut s, &mut left, &mut left_inv, t, i);
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            // clear row t right of diagonal
            for j in t + 1..cols {
                if s[t][j].is_zero() {
                    continue;
                }
                let (q, r) = s[t][j].div_rem(&s[t][t]);
                col_sub(&mut s, &mut right, &mut right_inv, j, t, &q);
                if !r.is_zero() {
                    swap_cols(&mut s, &mut right, &mut right_inv, t, j);
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: fold a non-divisible trailing entry into row t
            let mut fixed = true;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !s[i][j].is_zero() && !s[t][t].divides(&s[i][j]) {
                        row_add(&mut s, &mut left, &mut left_inv, t, i);
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        // normalize the pivot to be monic
        let lc = s[t][t].lead_coeff();
        if !lc.is_one() {
            scale_row(&mut s, &mut left, &mut left_inv, t, &lc.recip());
        }
    }

    let diagonal: Vec<UPoly> = (0..limit).map(|t| s[t][t].clone()).collect();
    Ok(SmithData {
        diagonal,
        left,
        left_inv,
        right,
        right_inv,
    })
}

fn swap_rows(s: &mut PolyMat, l: &mut PolyMat, linv: &mut PolyMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    s.swap(a, b);
    l.swap(a, b);
    for row in linv.iter_mut() {
        row.swap(a, b);
    }
}

fn swap_cols(s: &mut PolyMat, r: &mut PolyMat, rinv: &mut PolyMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in s.iter_mut() {
        row.swap(a, b);
    }
    for row in r.iter_mut() {
        row.swap(a, b);
    }
    rinv.swap(a, b);
}

/// row_i -= q * row_t on s and l; linv absorbs the inverse column operation.
fn row_sub(s: &mut PolyMat, l: &mut PolyMat, linv: &mut PolyMat, i: usize, t: usize, q: &UPoly) {
    if q.is_zero() {
        return;
    }
    for j in 0..s[i].len() {
        s[i][j] = &s[i][j] - &(q * &s[t][j]);
    }
    for j in 0..l[i].len() {
        l[i][j] = &l[i][j] - &(q * &l[t][j]);
    }
    for row in linv.iter_mut() {
        row[t] = &row[t] + &(q * &row[i]);
    }
}

/// row_t += row_i.
fn row_add(s: &mut PolyMat, l: &mut PolyMat, linv: &mut PolyMat, t: usize, i: usize) {
    for j in 0..s[t].len() {
        s[t][j] = &s[t][j] + &s[i][j];
    }
    for j in 0..l[t].len() {
        l[t][j] = &l[t][j] + &l[i][j];
    }
    for row in linv.iter_mut() {
        row[i] = &row[i] - &row[t];
    }
}

fn scale_row(s: &mut PolyMat, l: &mut PolyMat, linv: &mut PolyMat, t: usize, c: &super::Rat) {
    for e in s[t].iter_mut() {
        *e = e.scale(c);
    }
    for e in l[t].iter_mut() {
        *e = e.scale(c);
    }
    let cinv = c.recip();
    for row in linv.iter_mut() {
        row[t] = row[t].scale(&cinv);
    }
}

/// col_j -= q * col_t on s and r; rinv absorbs the inverse row operation.
fn col_sub(s: &mut PolyMat, r: &mut PolyMat, rinv: &mut PolyMat, j: usize, t: usize, q: &UPoly) {
    if q.is_zero() {
        return;
    }
    for row in s.iter_mut() {
        row[j] = &row[j] - &(q * &row[t]);
    }
    for row in r.iter_mut() {
        row[j] = &row[j] - &(q * &row[t]);
    }
    for k in 0..rinv[t].len() {
        let add = q * &rinv[j][k];
        rinv[t][k] = &rinv[t][k] + &add;
    }
}
