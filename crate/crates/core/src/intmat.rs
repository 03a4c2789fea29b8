//! Dense integer matrices: Smith normal form (computed over BigInt), integer solving,
//! kernels and finite abelian quotients.

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Mat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Mat, x: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat(x: &[i128], a: &Mat) -> Vec<i128> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    (0..cols)
        .map(|j| x.iter().zip(a).map(|(p, row)| p * row[j]).sum())
        .collect()
}

type BigMat = Vec<Vec<BigInt>>;

fn big_identity(n: usize) -> BigMat {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

fn to_big(a: &Mat) -> BigMat {
    a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn to_small(a: &BigMat) -> Mat {
    a.iter()
        .map(|r| r.iter().map(|x| x.to_i128().expect("matrix entry fits in i128")).collect())
        .collect()
}

/// Smith normal form `u * a * v = diag(d)` with `v_inv = v^{-1}`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub rows: usize,
    pub cols: usize,
    /// Diagonal entries, length `min(rows, cols)`, nonnegative, each dividing the next.
    pub d: Vec<i128>,
    pub u: Mat,
    pub v: Mat,
    pub v_inv: Mat,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.d.iter().take_while(|&&x| x != 0).count()
    }
}

struct BigSnf {
    d: Vec<BigInt>,
    u: BigMat,
    v: BigMat,
    vi: BigMat,
}

impl BigSnf {
    fn rank(&self) -> usize {
        self.d.iter().take_while(|x| !x.is_zero()).count()
    }
}

struct Work {
    a: BigMat,
    u: BigMat,
    v: BigMat,
    vi: BigMat,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.vi.swap(i, j);
    }
    // row_j += k * row_i
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.a[0].len() {
            let t = &self.a[i][c] * k;
            self.a[j][c] += t;
        }
        for c in 0..self.u[0].len() {
            let t = &self.u[i][c] * k;
            self.u[j][c] += t;
        }
    }
    // col_j += k * col_i
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for row in self.a.iter_mut() {
            let t = &row[i] * k;
            row[j] += t;
        }
        for row in self.v.iter_mut() {
            let t = &row[i] * k;
            row[j] += t;
        }
        for c in 0..self.vi[0].len() {
            let t = &self.vi[j][c] * k;
            self.vi[i][c] -= t;
        }
    }
    fn neg_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        for x in self.u[i].iter_mut() {
            *x = -&*x;
        }
    }
}

fn snf_big(a: BigMat, cols: usize) -> BigSnf {
    let rows = a.len();
    let mut w = Work { a, u: big_identity(rows), v: big_identity(cols), vi: big_identity(cols) };
    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &w.a[i][j];
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.add_row(t, i, &-q);
                    if !w.a[i][t].is_zero() {
                        w.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.add_col(t, j, &-q);
                    if !w.a[t][j].is_zero() {
                        w.swap_cols(t, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let p = w.a[t][t].clone();
            let mut bad = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&w.a[i][j] % &p).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => w.add_row(i, t, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.neg_row(t);
        }
        t += 1;
    }
    let d = (0..n).map(|i| w.a[i][i].clone()).collect();
    BigSnf { d, u: w.u, v: w.v, vi: w.vi }
}

pub fn snf(a: &Mat, cols: usize) -> Snf {
    let s = snf_big(to_big(a), cols);
    Snf {
        rows: a.len(),
        cols,
        d: s.d.iter().map(|x| x.to_i128().expect("invariant factor fits in i128")).collect(),
        u: to_small(&s.u),
        v: to_small(&s.v),
        v_inv: to_small(&s.vi),
    }
}

fn solve_big(a: &Mat, cols: usize, b: &[i128]) -> Option<(Vec<BigInt>, BigSnf)> {
    let s = snf_big(to_big(a), cols);
    let r = s.rank();
    let mut y = vec![BigInt::zero(); cols];
    for (i, row) in s.u.iter().enumerate() {
        let ub: BigInt = row.iter().zip(b).map(|(p, &q)| p * q).sum();
        if i < r {
            let (q, rem) = ub.div_rem(&s.d[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ub.is_zero() {
            return None;
        }
    }
    let x = s.v.iter().map(|row| row.iter().zip(&y).map(|(p, q)| p * q).sum()).collect();
    Some((x, s))
}

/// Solves `a x = b` over the integers. Returns a particular solution and a
/// basis of the integer kernel (as column vectors).
pub fn solve(a: &Mat, cols: usize, b: &[i128]) -> Option<(Vec<i128>, Vec<Vec<i128>>)> {
    let (x, s) = solve_big(a, cols, b)?;
    let r = s.rank();
    let x = x.iter().map(|c| c.to_i128()).collect::<Option<Vec<_>>>()?;
    let kernel = (r..cols)
        .map(|j| s.v.iter().map(|row| row[j].to_i128()).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some((x, kernel))
}

pub fn kernel(a: &Mat, cols: usize) -> Vec<Vec<i128>> {
    let s = snf(a, cols);
    let r = s.rank();
    (r..cols)
        .map(|j| s.v.iter().map(|row| row[j]).collect())
        .collect()
}

/// Solves `a x = b (mod m)`, returning one solution reduced to `[0, m)`.
pub fn solve_mod(a: &Mat, cols: usize, b: &[i128], m: i128) -> Option<Vec<i128>> {
    let rows = a.len();
    let mut ext: Mat = a.clone();
    for (i, row) in ext.iter_mut().enumerate() {
        row.extend((0..rows).map(|j| if i == j { m } else { 0 }));
    }
    let (x, _) = solve_big(&ext, cols + rows, b)?;
    let bm = BigInt::from(m);
    Some(x[..cols].iter().map(|v| v.mod_floor(&bm).to_i128().unwrap()).collect())
}

/// The number of solutions of `a x = 0 (mod m)` with `x` in `(Z/m)^cols`.
pub fn kernel_size_mod(a: &Mat, cols: usize, m: i128) -> u128 {
    let s = snf_big(to_big(a), cols);
    let bm = BigInt::from(m);
    let mut count: u128 = 1;
    for j in 0..cols {
        let dj = if j < s.d.len() { s.d[j].clone() } else { BigInt::zero() };
        count *= dj.gcd(&bm).to_u128().unwrap();
    }
    count
}

/// The finite abelian group `Z^n / <relations>`, presented by its Smith form.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub n: usize,
    /// Nontrivial invariant factors.
    pub divisors: Vec<u64>,
    keep: Vec<usize>,
    v: Mat,
    v_inv: Mat,
}

fn modp(x: i128, d: i128) -> i128 {
    x.rem_euclid(d)
}

// symmetric residue, for pivot selection
fn sym(x: i128, d: i128) -> i128 {
    let r = x.rem_euclid(d);
    if r > d / 2 {
        r - d
    } else {
        r
    }
}

/// Diagonalization of `Z^n / (L + D Z^n)` with all arithmetic modulo `D`.
/// Returns the cyclic orders and column transforms `(v, v^{-1})` mod `D`.
fn snf_mod(relations: &Mat, n: usize, d: i128) -> (Vec<i128>, Mat, Mat) {
    let mut a: Mat = relations.iter().map(|r| r.iter().map(|&x| sym(x, d)).collect()).collect();
    let mut v = identity(n);
    let mut vi = identity(n);
    let rows = a.len();
    let mul = |x: i128, y: i128| -> i128 { (x.rem_euclid(d) * y.rem_euclid(d)).rem_euclid(d) };
    // col_j += k col_i on a, v; row_i -= k row_j on vi
    let col_op = |a: &mut Mat, v: &mut Mat, vi: &mut Mat, i: usize, j: usize, k: i128| {
        if k.rem_euclid(d) == 0 {
            return;
        }
        for row in a.iter_mut() {
            row[j] = sym(row[j] + mul(k, row[i]), d);
        }
        for row in v.iter_mut() {
            row[j] = modp(row[j] + mul(k, row[i]), d);
        }
        for c in 0..n {
            let t = mul(k, vi[j][c]);
            vi[i][c] = modp(vi[i][c] - t, d);
        }
    };
    let swap_cols = |a: &mut Mat, v: &mut Mat, vi: &mut Mat, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };
    let row_op = |a: &mut Mat, i: usize, j: usize, k: i128| {
        // row_j += k row_i
        for c in 0..n {
            let t = mul(k, a[i][c]);
            a[j][c] = sym(a[j][c] + t, d);
        }
    };
    let mut diag = vec![d; n];
    let mut t = 0;
    let mut r0 = 0;
    while t < n {
        let mut best: Option<(usize, usize)> = None;
        for i in r0..rows {
            for j in t..n {
                let x = a[i][j];
                if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(r0, pi);
        swap_cols(&mut a, &mut v, &mut vi, t, pj);
        loop {
            let mut dirty = false;
            for i in r0 + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[r0][t]);
                    row_op(&mut a, r0, i, -q);
                    if a[i][t] != 0 {
                        a.swap(r0, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if a[r0][j] != 0 {
                    let q = a[r0][j].div_euclid(a[r0][t]);
                    col_op(&mut a, &mut v, &mut vi, t, j, -q);
                    if a[r0][j] != 0 {
                        swap_cols(&mut a, &mut v, &mut vi, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        diag[t] = a[r0][t].abs().gcd(&d);
        t += 1;
        r0 += 1;
    }
    // restore the divisibility chain: diag(x, y) ~ diag(gcd, lcm)
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in i + 1..n {
                let (x, y) = (diag[i], diag[j]);
                if y % x == 0 {
                    continue;
                }
                let (g, _, tt) = crate::arith::ext_gcd(x, y);
                col_op(&mut a, &mut v, &mut vi, j, i, 1);
                col_op(&mut a, &mut v, &mut vi, i, j, -(tt * (y / g)));
                diag[i] = g;
                diag[j] = x / g * y;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (diag, v, vi)
}

impl Quotient {
    /// `Z^n / <relations>`; must be finite.
    pub fn new(n: usize, relations: &Mat) -> Result<Quotient> {
        // a multiple of the exponent, from rows that are multiples of unit vectors
        let mut d: i128 = 1;
        for j in 0..n {
            let m = relations
                .iter()
                .filter(|r| r[j] != 0 && r.iter().enumerate().all(|(c, &x)| c == j || x == 0))
                .map(|r| r[j].abs())
                .min();
            match m {
                Some(m) => d = d.lcm(&m),
                None => return Quotient::new_exact(n, relations),
            }
        }
        Quotient::with_exponent(n, relations, d as u64)
    }

    /// `Z^n / <relations>` when `d` kills every class.
    pub fn with_exponent(n: usize, relations: &Mat, d: u64) -> Result<Quotient> {
        let dd = d as i128;
        if dd.checked_mul(dd).is_none() {
            return Err(Error::GroupTooLarge(format!("exponent bound {d}")));
        }
        let (diag, v, v_inv) = snf_mod(relations, n, dd);
        let keep: Vec<usize> = (0..n).filter(|&i| diag[i] != 1).collect();
        Ok(Quotient { n, divisors: keep.iter().map(|&i| diag[i] as u64).collect(), keep, v, v_inv })
    }

    fn new_exact(n: usize, relations: &Mat) -> Result<Quotient> {
        let s = snf_big(to_big(relations), n);
        if s.rank() < n {
            return Err(Error::Malformed("quotient group is infinite".into()));
        }
        let keep: Vec<usize> = (0..n).filter(|&i| !s.d[i].is_one()).collect();
        let divisors = keep
            .iter()
            .map(|&i| s.d[i].to_u64().ok_or_else(|| Error::GroupTooLarge(format!("invariant factor {}", s.d[i]))))
            .collect::<Result<Vec<u64>>>()?;
        // every class is killed by the exponent, so transforms can be reduced by it
        let exp = BigInt::from(divisors.last().copied().unwrap_or(1));
        let reduce = |m: &BigMat| -> Mat {
            m.iter()
                .map(|r| r.iter().map(|x| x.mod_floor(&exp).to_i128().unwrap()).collect())
                .collect()
        };
        Ok(Quotient { n, divisors, keep, v: reduce(&s.v), v_inv: reduce(&s.vi) })
    }

    /// The quotient in cyclic form `Z/d_0 x ... x Z/d_k` for given cyclic orders
    /// plus extra relation rows.
    pub fn from_cyclic(orders: &[u64], extra: &Mat) -> Result<Quotient> {
        let n = orders.len();
        let mut rel: Mat = (0..n)
            .map(|i| (0..n).map(|j| if i == j { orders[i] as i128 } else { 0 }).collect())
            .collect();
        rel.extend(extra.iter().cloned());
        Quotient::new(n, &rel)
    }

    pub fn order(&self) -> u128 {
        self.divisors.iter().map(|&d| d as u128).product()
    }

    pub fn map(&self, x: &[i128]) -> Vec<u64> {
        let y = vec_mat(x, &self.v);
        self.keep
            .iter()
            .zip(&self.divisors)
            .map(|(&i, &d)| y[i].rem_euclid(d as i128) as u64)
            .collect()
    }

    /// A preimage in `Z^n` of the i-th generator.
    pub fn generator(&self, i: usize) -> Vec<i128> {
        self.v_inv[self.keep[i]].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &Mat, cols: usize) {
        let s = snf(a, cols);
        let prod = mat_mul(&mat_mul(&s.u, a), &s.v);
        for i in 0..a.len() {
            for j in 0..cols {
                let want = if i == j { s.d[i] } else { 0 };
                assert_eq!(prod[i][j], want);
            }
        }
        assert_eq!(mat_mul(&s.v, &s.v_inv), identity(cols));
        for w in s.d.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0);
            }
        }
    }

    #[test]
    fn snf_examples() {
        check(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        check(&vec![vec![4, 0], vec![0, 6]], 2);
        check(&vec![vec![0, 0, 3]], 3);
        check(&vec![vec![1, 2], vec![3, 4], vec![5, 6]], 2);
        let s = snf(&vec![vec![4, 0], vec![0, 6]], 2);
        assert_eq!(s.d, vec![2, 12]);
    }

    #[test]
    fn solving() {
        let a = vec![vec![2, 3], vec![4, 5]];
        let (x, k) = solve(&a, 2, &[5, 9]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![5, 9]);
        assert!(k.is_empty());
        assert!(solve(&vec![vec![2, 4]], 2, &[3]).is_none());
        let k = kernel(&vec![vec![1, 1, 1]], 3);
        assert_eq!(k.len(), 2);
        let x = solve_mod(&vec![vec![3]], 1, &[1], 4).unwrap();
        assert_eq!(x, vec![3]);
        assert!(solve_mod(&vec![vec![2]], 1, &[1], 4).is_none());
        assert_eq!(kernel_size_mod(&vec![vec![2]], 1, 4), 2);
    }

    #[test]
    fn quotient_maps() {
        // Z/4 x Z/6 modulo nothing: invariants 2, 12
        let q = Quotient::from_cyclic(&[4, 6], &vec![]).unwrap();
        assert_eq!(q.divisors, vec![2, 12]);
        assert_eq!(q.order(), 24);
        for i in 0..q.divisors.len() {
            let g = q.generator(i);
            let img = q.map(&g);
            for (j, v) in img.iter().enumerate() {
                assert_eq!(*v, u64::from(i == j));
            }
        }
        // Z/4 modulo 2: Z/2
        let q = Quotient::from_cyclic(&[4], &vec![vec![2]]).unwrap();
        assert_eq!(q.divisors, vec![2]);
        assert_eq!(q.map(&[3]), vec![1]);
    }

    proptest::proptest! {
        #[test]
        fn modular_quotient_matches_exact(
            orders in proptest::collection::vec(1i128..40, 1..5),
            extra in proptest::collection::vec(proptest::collection::vec(-50i128..50, 4), 0..4),
        ) {
            let n = orders.len();
            let mut rel: Mat = (0..n).map(|i| (0..n).map(|j| if i == j { orders[i] } else { 0 }).collect()).collect();
            rel.extend(extra.iter().map(|r| r[..n].to_vec()));
            let q = Quotient::new(n, &rel).unwrap();
            let e = Quotient::new_exact(n, &rel).unwrap();
            proptest::prop_assert_eq!(&q.divisors, &e.divisors);
            for r in &rel {
                proptest::prop_assert!(q.map(r).iter().all(|&x| x == 0));
            }
            for i in 0..q.divisors.len() {
                let img = q.map(&q.generator(i));
                for (j, &x) in img.iter().enumerate() {
                    proptest::prop_assert_eq!(x, u64::from(i == j));
                }
            }
        }
    }
}
