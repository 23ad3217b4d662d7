//! Dense linear algebra over F_p for small p. Vectors are rows of u64 in 0..p.

pub type Vector = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u64>>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl Matrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Matrix {
            p,
            rows,
            cols,
            data: vec![vec![0; cols]; rows],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Matrix::zeros(p, n, n);
        for i in 0..n {
            m.data[i][i] = 1 % p;
        }
        m
    }

    pub fn from_rows(p: u64, cols: usize, rows: Vec<Vec<i64>>) -> Self {
        let data: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                r.into_iter()
                    .map(|x| x.rem_euclid(p as i64) as u64)
                    .collect()
            })
            .collect();
        Matrix {
            p,
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i][j]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let p = self.p;
        let mut out = Matrix::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] = (out.data[i][j] + a * other.data[k][j]) % p;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i][j] = (out.data[i][j] + other.data[i][j]) % self.p;
            }
        }
        out
    }

    pub fn scale(&self, k: u64) -> Matrix {
        let mut out = self.clone();
        for row in out.data.iter_mut() {
            for x in row.iter_mut() {
                *x = *x * (k % self.p) % self.p;
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn apply(&self, v: &[u64]) -> Vector {
        self.data
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b % self.p).sum::<u64>() % self.p)
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j][i] = self.data[i][j];
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            let Some(piv) = (r..m.rows).find(|&i| m.data[i][c] != 0) else {
                continue;
            };
            m.data.swap(r, piv);
            let inv = inv_mod(m.data[r][c], p);
            for x in m.data[r].iter_mut() {
                *x = *x * inv % p;
            }
            for i in 0..m.rows {
                if i != r && m.data[i][c] != 0 {
                    let f = m.data[i][c];
                    for j in 0..m.cols {
                        m.data[i][j] = (m.data[i][j] + p * p - f * m.data[r][j]) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Basis of {v : M v = 0}.
    pub fn nullspace(&self) -> Vec<Vector> {
        let p = self.p;
        let (m, pivots) = if self.rows == 0 {
            (self.clone(), vec![])
        } else {
            self.rref()
        };
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - m.data[i][fc]) % p;
                }
                v
            })
            .collect()
    }
}

/// Echelon basis of the span of the given vectors.
pub fn span_basis(p: u64, dim: usize, vs: &[Vector]) -> Vec<Vector> {
    if vs.is_empty() {
        return vec![];
    }
    let m = Matrix {
        p,
        rows: vs.len(),
        cols: dim,
        data: vs.to_vec(),
    };
    let (r, piv) = m.rref();
    r.data.into_iter().take(piv.len()).collect()
}

pub fn rank_of(p: u64, dim: usize, vs: &[Vector]) -> usize {
    span_basis(p, dim, vs).len()
}

/// Basis of the annihilator {w : w·v = 0 for v in span}, as row vectors.
pub fn annihilator(p: u64, dim: usize, span: &[Vector]) -> Vec<Vector> {
    if span.is_empty() {
        return Matrix::identity(p, dim).data;
    }
    Matrix {
        p,
        rows: span.len(),
        cols: dim,
        data: span.to_vec(),
    }
    .nullspace()
}

/// {v : A v ∈ W}.
pub fn preimage(a: &Matrix, w: &[Vector]) -> Vec<Vector> {
    let q = annihilator(a.p, a.rows, w);
    if q.is_empty() {
        return Matrix::identity(a.p, a.cols).data;
    }
    let qm = Matrix {
        p: a.p,
        rows: q.len(),
        cols: a.rows,
        data: q,
    };
    qm.mul(a).nullspace()
}

pub fn intersect(p: u64, dim: usize, u: &[Vector], v: &[Vector]) -> Vec<Vector> {
    let mut ann = annihilator(p, dim, u);
    ann.extend(annihilator(p, dim, v));
    annihilator(p, dim, &span_basis(p, dim, &ann))
}

pub fn sum(p: u64, dim: usize, u: &[Vector], v: &[Vector]) -> Vec<Vector> {
    let mut all = u.to_vec();
    all.extend_from_slice(v);
    span_basis(p, dim, &all)
}

pub fn image(a: &Matrix, basis: &[Vector]) -> Vec<Vector> {
    let imgs: Vec<Vector> = basis.iter().map(|v| a.apply(v)).collect();
    span_basis(a.p, a.rows, &imgs)
}

pub fn contains(p: u64, dim: usize, span: &[Vector], v: &[u64]) -> bool {
    let mut all = span.to_vec();
    all.push(v.to_vec());
    rank_of(p, dim, &all) == rank_of(p, dim, span)
}
