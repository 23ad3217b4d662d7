//! Finite modules ⊕ R/λ^{e_i} over R = Z_ℓ[ζ_ℓ], with the filtration invariants computed
//! from their definitions.
//!
//! Exponents are at most ℓ−2, so every module is killed by ℓ. R/λ^e is realized as Z^{ℓ−1}
//! (coordinates on 1, x, …, x^{ℓ−2}) modulo the lattice λ^e Z[x] + ℓ^N Z[x]; the lattice is put
//! in Hermite normal form over Z, checked to contain ℓZ^{ℓ−1} and to have index ℓ^e, and then
//! reduced mod ℓ. Submodules of S are handled as subspaces of F_ℓ^{(ℓ−1)t} containing the
//! reduced relation space.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Matrix, Vector};

/// Largest ambient dimension accepted by `build`.
pub const MAX_AMBIENT_DIM: usize = 96;
/// Largest module order walked element by element.
pub const MAX_ENUMERATION: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiltrationError {
    #[error("ell must be an odd prime, got {0}")]
    BadEll(u64),
    #[error("exponents must be non-decreasing in 1..={max}, got {got:?}")]
    BadExponents { max: u64, got: Vec<u64> },
    #[error("module too large: ambient dimension {0}")]
    TooLarge(usize),
    #[error("module of order {ell}^{dim} is too large to enumerate")]
    EnumerationCap { ell: u64, dim: usize },
    #[error("relation lattice check failed: {0}")]
    Lattice(String),
    #[error("sigma is only defined for ell = 5")]
    SigmaNeedsFive,
    #[error("sigma is not an automorphism: {0}")]
    SigmaNotAutomorphism(String),
    #[error("sigma violates the twisted commutation relation")]
    SigmaRelation,
}

/// σ = (block permutation) ∘ (multiplication by units d_i) ∘ (x ↦ x³ on coefficients):
/// the summand i goes to summand perm[i], multiplied by units[i].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaSpec {
    pub perm: Vec<usize>,
    /// Coefficients on 1, x, x², x³, reduced mod 5.
    pub units: Vec<Vec<i64>>,
}

impl SigmaSpec {
    /// ζ ↦ ζ³ on every summand.
    pub fn natural(t: usize) -> Self {
        SigmaSpec {
            perm: (0..t).collect(),
            units: vec![vec![1, 0, 0, 0]; t],
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiltrationModule {
    pub ell: u64,
    pub exponents: Vec<u64>,
    /// ℓ^N used for the lattice.
    pub precision: u32,
    /// ℓ − 1, the rank of one summand over Z.
    pub block: usize,
    pub dim: usize,
    /// Echelon basis of the relations reduced mod ℓ.
    pub relations: Vec<Vector>,
    pub lambda: Matrix,
    pub tau: Matrix,
    pub sigma: Option<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankProfile {
    pub t: usize,
    /// s₁..s_{ℓ−2}.
    pub s: Vec<usize>,
    pub rank: usize,
    /// rank λ^{i−1}S/λ^iS for i = 1..ℓ−1.
    pub lambda_i_ranks: Vec<usize>,
    /// s_{ℓ−1}, which must vanish.
    pub s_overflow: usize,
}

// ---- Z[x]/Φ_ℓ helpers (integer coefficients, length ℓ−1) ----

fn poly_mul_int(a: &[i128], b: &[i128], ell: usize) -> Vec<i128> {
    let m = ell - 1;
    let mut prod = vec![0i128; 2 * m];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    // x^{ℓ−1} = −(1 + x + … + x^{ℓ−2}), x^ℓ = 1
    for k in (m..2 * m).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        if k >= ell {
            prod[k - ell] += c;
        } else {
            for j in 0..m {
                prod[j] -= c;
            }
        }
    }
    prod.truncate(m);
    prod
}

fn lambda_power_int(ell: usize, e: u64) -> Vec<i128> {
    let m = ell - 1;
    let mut lam = vec![0i128; m];
    lam[0] = 1;
    lam[1] = -1;
    let mut acc = vec![0i128; m];
    acc[0] = 1;
    for _ in 0..e {
        acc = poly_mul_int(&acc, &lam, ell);
    }
    acc
}

fn monomial_int(ell: usize, k: usize) -> Vec<i128> {
    let m = ell - 1;
    let k = k % ell;
    let mut v = vec![0i128; m];
    if k < m {
        v[k] = 1;
    } else {
        for x in v.iter_mut() {
            *x = -1;
        }
    }
    v
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Row Hermite normal form of a full-rank integer lattice in Z^m: upper triangular,
/// positive diagonal, entries above each pivot reduced into [0, pivot).
pub fn hermite_normal_form(gens: &[Vec<i128>], m: usize) -> Vec<Vec<i128>> {
    let mut rows: Vec<Vec<i128>> = gens.to_vec();
    let mut out: Vec<Vec<i128>> = Vec::new();
    for c in 0..m {
        let mut pivot: Option<Vec<i128>> = None;
        let mut rest = Vec::new();
        for r in rows.into_iter() {
            if r[c] == 0 {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let (g, x, y) = ext_gcd(p[c], r[c]);
                    let (a, b) = (p[c] / g, r[c] / g);
                    let np: Vec<i128> = p.iter().zip(&r).map(|(u, v)| x * u + y * v).collect();
                    let nr: Vec<i128> = p.iter().zip(&r).map(|(u, v)| b * u - a * v).collect();
                    pivot = Some(np);
                    if nr.iter().any(|&z| z != 0) {
                        rest.push(nr);
                    }
                }
            }
        }
        rows = rest;
        if let Some(mut p) = pivot {
            if p[c] < 0 {
                p.iter_mut().for_each(|z| *z = -*z);
            }
            out.push(p);
        }
    }
    for i in 0..out.len() {
        let c = (0..m).find(|&c| out[i][c] != 0).unwrap();
        let d = out[i][c];
        for k in 0..i {
            let q = out[k][c].div_euclid(d);
            if q != 0 {
                let row = out[i].clone();
                for (z, w) in out[k].iter_mut().zip(&row) {
                    *z -= q * w;
                }
            }
        }
    }
    out
}

/// Whether v lies in the lattice spanned by an upper triangular HNF basis.
fn in_hnf_lattice(h: &[Vec<i128>], v: &[i128]) -> bool {
    let mut v = v.to_vec();
    for row in h {
        let c = (0..row.len()).find(|&c| row[c] != 0).unwrap();
        if v[c] % row[c] != 0 {
            return false;
        }
        let q = v[c] / row[c];
        for (z, w) in v.iter_mut().zip(row) {
            *z -= q * w;
        }
    }
    v.iter().all(|&z| z == 0)
}

fn is_small_odd_prime(ell: u64) -> bool {
    ell >= 3
        && ell % 2 == 1
        && (3..ell)
            .take_while(|d| d * d <= ell)
            .all(|d| !ell.is_multiple_of(d))
}

fn mul_matrix_mod(ell: u64, d: &[i64]) -> Matrix {
    // column k = d · x^k
    let l = ell as usize;
    let m = l - 1;
    let dd: Vec<i128> = d.iter().map(|&z| z as i128).collect();
    let mut mat = Matrix::zeros(ell, m, m);
    for k in 0..m {
        let col = poly_mul_int(&dd, &monomial_int(l, k), l);
        for i in 0..m {
            mat.data[i][k] = col[i].rem_euclid(ell as i128) as u64;
        }
    }
    mat
}

fn frobenius3_matrix(ell: u64) -> Matrix {
    let l = ell as usize;
    let m = l - 1;
    let mut mat = Matrix::zeros(ell, m, m);
    for k in 0..m {
        let col = monomial_int(l, 3 * k);
        for i in 0..m {
            mat.data[i][k] = col[i].rem_euclid(ell as i128) as u64;
        }
    }
    mat
}

fn block_diag(ell: u64, blocks: &[Matrix]) -> Matrix {
    let dim: usize = blocks.iter().map(|b| b.rows).sum();
    let mut out = Matrix::zeros(ell, dim, dim);
    let mut off = 0;
    for b in blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                out.data[off + i][off + j] = b.data[i][j];
            }
        }
        off += b.rows;
    }
    out
}

pub fn build(
    ell: u64,
    exponents: &[u64],
    sigma: Option<&SigmaSpec>,
) -> Result<FiltrationModule, FiltrationError> {
    if !is_small_odd_prime(ell) {
        return Err(FiltrationError::BadEll(ell));
    }
    let max_e = ell - 2;
    if exponents.is_empty()
        || exponents.windows(2).any(|w| w[0] > w[1])
        || exponents.iter().any(|&e| e < 1 || e > max_e)
    {
        return Err(FiltrationError::BadExponents {
            max: max_e,
            got: exponents.to_vec(),
        });
    }
    let l = ell as usize;
    let m = l - 1;
    let dim = m * exponents.len();
    if dim > MAX_AMBIENT_DIM {
        return Err(FiltrationError::TooLarge(dim));
    }
    let emax = *exponents.last().unwrap();
    let precision = (emax.div_ceil(ell - 1) + 1) as u32;
    let lp = (ell as i128).pow(precision);

    let mut relations: Vec<Vector> = Vec::new();
    for (i, &e) in exponents.iter().enumerate() {
        let le = lambda_power_int(l, e);
        let mut gens: Vec<Vec<i128>> = (0..m)
            .map(|k| poly_mul_int(&le, &monomial_int(l, k), l))
            .collect();
        for k in 0..m {
            let mut v = vec![0i128; m];
            v[k] = lp;
            gens.push(v);
        }
        let h = hermite_normal_form(&gens, m);
        if h.len() != m {
            return Err(FiltrationError::Lattice(format!("rank {} < {m}", h.len())));
        }
        let index: i128 = (0..m).map(|k| h[k][k]).product();
        if index != (ell as i128).pow(e as u32) {
            return Err(FiltrationError::Lattice(format!(
                "index {index} for exponent {e}"
            )));
        }
        for k in 0..m {
            let mut v = vec![0i128; m];
            v[k] = ell as i128;
            if !in_hnf_lattice(&h, &v) {
                return Err(FiltrationError::Lattice("ell not in lattice".into()));
            }
        }
        for row in h {
            let mut v = vec![0u64; dim];
            for k in 0..m {
                v[i * m + k] = row[k].rem_euclid(ell as i128) as u64;
            }
            relations.push(v);
        }
    }
    let relations = linalg::span_basis(ell, dim, &relations);
    let lam_block = {
        let mut d = vec![0i64; m];
        d[0] = 1;
        d[1] = -1;
        mul_matrix_mod(ell, &d)
    };
    let x_block = {
        let mut d = vec![0i64; m];
        d[1] = 1;
        mul_matrix_mod(ell, &d)
    };
    let t = exponents.len();
    let lambda = block_diag(ell, &vec![lam_block; t]);
    let tau = block_diag(ell, &vec![x_block; t]);
    let mut module = FiltrationModule {
        ell,
        exponents: exponents.to_vec(),
        precision,
        block: m,
        dim,
        relations,
        lambda,
        tau,
        sigma: None,
    };
    if let Some(spec) = sigma {
        if ell != 5 {
            return Err(FiltrationError::SigmaNeedsFive);
        }
        module.sigma = Some(module.sigma_matrix(spec)?);
    }
    Ok(module)
}

impl FiltrationModule {
    fn sigma_matrix(&self, spec: &SigmaSpec) -> Result<Matrix, FiltrationError> {
        let t = self.exponents.len();
        let m = self.block;
        if spec.perm.len() != t || spec.units.len() != t {
            return Err(FiltrationError::SigmaNotAutomorphism("wrong length".into()));
        }
        let mut seen = vec![false; t];
        for (i, &j) in spec.perm.iter().enumerate() {
            if j >= t || seen[j] || self.exponents[i] != self.exponents[j] {
                return Err(FiltrationError::SigmaNotAutomorphism(
                    "permutation must preserve exponents".into(),
                ));
            }
            seen[j] = true;
        }
        let phi = frobenius3_matrix(self.ell);
        let mut s = Matrix::zeros(self.ell, self.dim, self.dim);
        for i in 0..t {
            let blk = mul_matrix_mod(self.ell, &spec.units[i]).mul(&phi);
            let j = spec.perm[i];
            for a in 0..m {
                for b in 0..m {
                    s.data[j * m + a][i * m + b] = blk.data[a][b];
                }
            }
        }
        // σ must preserve the relations and satisfy σ⁴ = 1 on S
        for r in &self.relations {
            if !self.in_relations(&s.apply(r)) {
                return Err(FiltrationError::SigmaNotAutomorphism(
                    "relations not preserved".into(),
                ));
            }
        }
        let s4 = s.pow(4);
        let id = Matrix::identity(self.ell, self.dim);
        if !self.maps_into_relations(&s4.add(&id.scale(self.ell - 1))) {
            return Err(FiltrationError::SigmaNotAutomorphism("sigma^4 != 1".into()));
        }
        // στ = τ³σ
        let lhs = s.mul(&self.tau);
        let rhs = self.tau.pow(3).mul(&s);
        if !self.maps_into_relations(&lhs.add(&rhs.scale(self.ell - 1))) {
            return Err(FiltrationError::SigmaRelation);
        }
        Ok(s)
    }

    fn in_relations(&self, v: &[u64]) -> bool {
        linalg::contains(self.ell, self.dim, &self.relations, v)
    }

    /// Whether A maps all of V into the relation space, i.e. A = 0 on S.
    pub fn maps_into_relations(&self, a: &Matrix) -> bool {
        (0..self.dim).all(|j| {
            let col: Vec<u64> = (0..self.dim).map(|i| a.data[i][j]).collect();
            self.in_relations(&col)
        })
    }

    pub fn t(&self) -> usize {
        self.exponents.len()
    }

    /// Order of S as a power of ℓ.
    pub fn log_order(&self) -> usize {
        self.dim - self.relations.len()
    }

    fn full(&self) -> Vec<Vector> {
        Matrix::identity(self.ell, self.dim).data
    }

    /// λ^i S as a subspace of V containing the relations.
    pub fn lambda_power_sub(&self, i: u32) -> Vec<Vector> {
        let img = linalg::image(&self.lambda.pow(i), &self.full());
        linalg::sum(self.ell, self.dim, &img, &self.relations)
    }

    /// ℓS as a subspace of V.
    pub fn ell_multiple_sub(&self) -> Vec<Vector> {
        let scaled = Matrix::identity(self.ell, self.dim).scale(self.ell);
        let img = linalg::image(&scaled, &self.full());
        linalg::sum(self.ell, self.dim, &img, &self.relations)
    }

    /// {a : A a ∈ W} for W containing the relations.
    fn pre(&self, a: &Matrix, w: &[Vector]) -> Vec<Vector> {
        linalg::preimage(a, w)
    }

    fn dim_of(&self, sub: &[Vector]) -> usize {
        sub.len()
    }

    fn cap(&self, u: &[Vector], v: &[Vector]) -> Vec<Vector> {
        linalg::intersect(self.ell, self.dim, u, v)
    }

    fn plus(&self, u: &[Vector], v: &[Vector]) -> Vec<Vector> {
        linalg::sum(self.ell, self.dim, u, v)
    }

    /// S[λ] as a subspace of V.
    pub fn lambda_torsion(&self) -> Vec<Vector> {
        self.pre(&self.lambda, &self.relations)
    }

    /// Walk all elements of S and count those killed by λ. Only for small modules.
    pub fn enumerate_lambda_torsion(&self) -> Result<u64, FiltrationError> {
        let k = self.log_order();
        let total = self.ell.checked_pow(k as u32).unwrap_or(u64::MAX);
        if total > MAX_ENUMERATION {
            return Err(FiltrationError::EnumerationCap {
                ell: self.ell,
                dim: k,
            });
        }
        // coordinates on a complement of the relations: the non-pivot unit vectors
        let rel = Matrix {
            p: self.ell,
            rows: self.relations.len(),
            cols: self.dim,
            data: self.relations.clone(),
        };
        let pivots = if self.relations.is_empty() {
            vec![]
        } else {
            rel.rref().1
        };
        let free: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let mut count = 0;
        let mut digits = vec![0u64; free.len()];
        for _ in 0..total {
            let mut v = vec![0u64; self.dim];
            for (d, &c) in digits.iter().zip(&free) {
                v[c] = *d;
            }
            if self.in_relations(&self.lambda.apply(&v)) {
                count += 1;
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < self.ell {
                    break;
                }
                *d = 0;
            }
        }
        Ok(count)
    }
}

pub fn brute_rank_profile(s: &FiltrationModule) -> RankProfile {
    let ell = s.ell as u32;
    let base = s.relations.len();
    let tors = s.lambda_torsion();
    let t = s.dim_of(&tors) - base;
    let powers: Vec<Vec<Vector>> = (0..=ell).map(|i| s.lambda_power_sub(i)).collect();
    let mut all_s = Vec::new();
    for i in 1..ell as usize {
        let num = s.plus(&s.cap(&tors, &powers[i - 1]), &powers[i]);
        all_s.push(num.len() - powers[i].len());
    }
    let lambda_i_ranks = (1..ell as usize)
        .map(|i| powers[i - 1].len() - powers[i].len())
        .collect();
    let ls = s.ell_multiple_sub();
    let rank = s.log_order() - (ls.len() - base);
    let s_overflow = all_s[ell as usize - 2];
    all_s.truncate(ell as usize - 2);
    RankProfile {
        t,
        s: all_s,
        rank,
        lambda_i_ranks,
        s_overflow,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

/// The rank formula, Cors 3.2–3.5 style consequences, and the closed form for s_i.
pub fn verify_rank_formula(s: &FiltrationModule) -> Verification {
    let ell = s.ell as usize;
    let p = brute_rank_profile(s);
    let mut diag = Vec::new();
    let mut check = |cond: bool, msg: String| {
        if !cond {
            diag.push(msg);
        }
    };
    let closed: Vec<usize> = (1..=ell - 2)
        .map(|i| s.exponents.iter().filter(|&&e| e as usize == i).count())
        .collect();
    check(
        p.s == closed,
        format!("s = {:?}, closed form {:?}", p.s, closed),
    );
    check(p.t == s.t(), format!("t = {}, expected {}", p.t, s.t()));
    check(p.t == p.s.iter().sum::<usize>(), "t != sum of s_i".into());
    check(
        p.s_overflow == 0,
        format!("s_{} = {}", ell - 1, p.s_overflow),
    );
    let formula = (ell - 1) * p.t
        - (1..=ell - 2)
            .map(|i| (ell - 1 - i) * p.s[i - 1])
            .sum::<usize>();
    check(
        p.rank == formula,
        format!("rank {} vs formula {}", p.rank, formula),
    );
    if p.s[0] == p.t {
        check(p.rank == p.t, "s1 = t but rank != t".into());
        check(
            s.lambda_power_sub(1).len() == s.relations.len(),
            "s1 = t but lambda S != 0".into(),
        );
    }
    let mut rest = p.t;
    for i in 1..ell {
        check(
            p.lambda_i_ranks[i - 1] == rest,
            format!("lambda^{i} rank {} vs {}", p.lambda_i_ranks[i - 1], rest),
        );
        if i <= ell - 2 {
            check(p.s[i - 1] <= rest, format!("s_{i} exceeds remaining rank"));
            rest -= p.s[i - 1].min(rest);
        }
    }
    let ls = s.ell_multiple_sub();
    for i in 1..ell {
        let li = s.lambda_power_sub(i as u32);
        if li.len() == ls.len() {
            for j in i + 1..=ell - 2 {
                check(
                    p.s[j - 1] == 0,
                    format!("lambda^{i} S = ell S but s_{j} != 0"),
                );
            }
        }
    }
    check(
        s.lambda_power_sub(ell as u32 - 1).len() == ls.len(),
        "lambda^(ell-1) S != ell S".into(),
    );
    check(
        2 * p.t - p.s[0] <= p.rank && p.rank <= (ell - 1) * p.t - (ell - 2) * p.s[0],
        "rank outside [2t - s1, (ell-1)t - (ell-2)s1]".into(),
    );
    // annihilator exponent of each summand
    let m = s.block;
    for (i, &e) in s.exponents.iter().enumerate() {
        let mut unit = vec![0u64; s.dim];
        unit[i * m] = 1;
        let killed = |k: u32| s.in_relations(&s.lambda.pow(k).apply(&unit));
        check(
            killed(e as u32) && !killed(e as u32 - 1),
            format!("summand {i} not of exponent {e}"),
        );
    }
    Verification {
        ok: diag.is_empty(),
        diagnostics: diag,
    }
}

/// All non-decreasing exponent sequences of length 1..=max_t with entries in 1..=ℓ−2.
pub fn exponent_multisets(ell: u64, max_t: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    fn rec(cur: &mut Vec<u64>, lo: u64, hi: u64, max_t: usize, out: &mut Vec<Vec<u64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_t {
            return;
        }
        for e in lo..=hi {
            cur.push(e);
            rec(cur, e, hi, max_t, out);
            cur.pop();
        }
    }
    rec(&mut Vec::new(), 1, ell - 2, max_t, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub ell: u64,
    pub max_t: usize,
    pub checked: usize,
    pub failures: Vec<(Vec<u64>, Vec<String>)>,
}

pub fn run_oracle(ell: u64, max_t: usize) -> Result<OracleSummary, FiltrationError> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for ex in exponent_multisets(ell, max_t) {
        let m = build(ell, &ex, None)?;
        let v = verify_rank_formula(&m);
        checked += 1;
        if !v.ok {
            failures.push((ex, v.diagnostics));
        }
    }
    Ok(OracleSummary {
        ell,
        max_t,
        checked,
        failures,
    })
}

/// Ranks of the three eigen-parts of one layer, with the layer's own rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parts {
    pub total: usize,
    pub plus: usize,
    pub minus: usize,
    pub minus_minus: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaDecomposition {
    /// Parts of λ^iS/λ^{i+1}S for i = 0..3.
    pub layers: Vec<Parts>,
    /// Parts of S itself.
    pub whole: Parts,
    /// Kernels of λ on (S/λS)⁺ ⊕ (S/λS)⁻ and on (S/λS)⁻⁻.
    pub ker_theta: [usize; 2],
    /// Kernels of λ on (λS/λ²S)⁻, (λS/λ²S)⁺ and (λS/λ²S)⁻⁻.
    pub ker_alpha: [usize; 3],
    /// Kernel of λ on (λS/λ²S)⁺ ⊕ (λS/λ²S)⁻.
    pub ker_alpha_plus_minus: usize,
    /// Kernels of λ on (λ²S/λ³S)⁺ ⊕ (λ²S/λ³S)⁻ and on (λ²S/λ³S)⁻⁻.
    pub ker_beta: [usize; 2],
    pub profile: RankProfile,
    /// Σ rank (λ^iS/λ^{i+1}S)⁺.
    pub plus_rank_chain: usize,
    /// Whether λ maps (λS/λ²S)⁻ → (λ²S/λ³S)⁺, (λS/λ²S)⁺ → (λ²S/λ³S)⁻ and (λS/λ²S)⁻⁻ → (λ²S/λ³S)⁻⁻.
    pub swapped_alpha_targets: bool,
    /// Whether rank S⁺ equals rank (S/λS)⁺ + t − (θ₁ + θ₂ + α₁ + α₃ + β₂ kernels) − rank (λ³S/λ⁴S)⁻.
    pub alpha_closed_form: bool,
    pub diagnostics: Vec<String>,
}

impl SigmaDecomposition {
    pub fn ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

fn poly_sigma(s: &Matrix, coeffs: &[(u32, i64)]) -> Matrix {
    let p = s.p;
    let mut out = Matrix::zeros(p, s.rows, s.cols);
    for &(k, c) in coeffs {
        out = out.add(&s.pow(k).scale(c.rem_euclid(p as i64) as u64));
    }
    out
}

pub fn sigma_decompose(s: &FiltrationModule) -> Result<SigmaDecomposition, FiltrationError> {
    let sig = s.sigma.as_ref().ok_or(FiltrationError::SigmaNeedsFive)?;
    let p_plus = poly_sigma(sig, &[(1, 1), (0, -1)]);
    let p_minus = poly_sigma(sig, &[(1, 1), (0, 1)]);
    let p_mm = poly_sigma(sig, &[(2, 1), (0, 1)]);
    let pw: Vec<Vec<Vector>> = (0..=5).map(|i| s.lambda_power_sub(i)).collect();
    let parts_of = |a: &[Vector], b: &[Vector]| -> (Parts, [Vec<Vector>; 3]) {
        let pp = s.cap(a, &s.pre(&p_plus, b));
        let pm = s.cap(a, &s.pre(&p_minus, b));
        let pmm = s.cap(a, &s.pre(&p_mm, b));
        (
            Parts {
                total: a.len() - b.len(),
                plus: pp.len() - b.len(),
                minus: pm.len() - b.len(),
                minus_minus: pmm.len() - b.len(),
            },
            [pp, pm, pmm],
        )
    };
    let mut layers = Vec::new();
    let mut subs = Vec::new();
    for i in 0..4 {
        let (pt, sb) = parts_of(&pw[i], &pw[i + 1]);
        layers.push(pt);
        subs.push(sb);
    }
    let (whole, _) = parts_of(&pw[0], &s.relations);
    // kernel of λ: λ^iS/λ^{i+1}S → λ^{i+1}S/λ^{i+2}S restricted to a part
    let ker = |a: &[Vector], i: usize| -> usize {
        let k = s.cap(a, &s.pre(&s.lambda, &pw[i + 2]));
        k.len() - pw[i + 1].len()
    };
    let pm_of = |i: usize| s.plus(&subs[i][0], &subs[i][1]);
    let ker_theta = [ker(&pm_of(0), 0), ker(&subs[0][2], 0)];
    let ker_alpha = [
        ker(&subs[1][1], 1),
        ker(&subs[1][0], 1),
        ker(&subs[1][2], 1),
    ];
    let ker_alpha_plus_minus = ker(&pm_of(1), 1);
    let ker_beta = [ker(&pm_of(2), 2), ker(&subs[2][2], 2)];
    let profile = brute_rank_profile(s);

    let mut diag = Vec::new();
    let mut check = |cond: bool, msg: &str| {
        if !cond {
            diag.push(msg.to_string());
        }
    };
    for (i, l) in layers.iter().enumerate() {
        check(
            l.plus + l.minus + l.minus_minus == l.total,
            &format!("layer {i} parts do not partition"),
        );
    }
    check(
        whole.plus + whole.minus + whole.minus_minus == whole.total,
        "S parts do not partition",
    );
    let (s1, s2, s3) = (profile.s[0], profile.s[1], profile.s[2]);
    check(ker_theta[0] + ker_theta[1] == s1, "theta kernels != s1");
    check(ker_alpha.iter().sum::<usize>() == s2, "alpha kernels != s2");
    check(
        ker_alpha_plus_minus + ker_alpha[2] == s2,
        "layer-1 kernels != s2",
    );
    check(ker_beta[0] + ker_beta[1] == s3, "beta kernels != s3");
    // multiplication by λ sends the ± parts of one layer into the −− part of the next and back
    let lands_in = |from: &[Vector], to: &[Vector], i: usize| -> bool {
        let target = s.plus(to, &pw[i + 2]);
        from.iter()
            .all(|v| linalg::contains(s.ell, s.dim, &target, &s.lambda.apply(v)))
    };
    for i in 0..3 {
        check(
            lands_in(&pm_of(i), &subs[i + 1][2], i),
            &format!("lambda does not map layer {i} +/- into -- of the next"),
        );
        check(
            lands_in(&subs[i][2], &pm_of(i + 1), i),
            &format!("lambda does not map layer {i} -- into +/- of the next"),
        );
    }
    // surjectivity of λ between consecutive layers, part by part
    for i in 0..3 {
        let pm_next = layers[i + 1].plus + layers[i + 1].minus;
        check(
            pm_next + ker(&subs[i][2], i) == layers[i].minus_minus,
            &format!("layer {} +/- rank", i + 1),
        );
        check(
            layers[i + 1].minus_minus + ker(&pm_of(i), i) == layers[i].plus + layers[i].minus,
            &format!("layer {} -- rank", i + 1),
        );
    }
    let swapped_alpha_targets = lands_in(&subs[1][1], &subs[2][0], 1)
        && lands_in(&subs[1][0], &subs[2][1], 1)
        && lands_in(&subs[1][2], &subs[2][2], 1);
    // twisted commutation congruences
    let s2m = sig.pow(2);
    let lam = &s.lambda;
    let congruent = |a: &Matrix, b: &Matrix, level: usize| -> bool {
        let diff = a.add(b);
        (0..s.dim).all(|j| {
            let col: Vec<u64> = (0..s.dim).map(|i| diff.data[i][j]).collect();
            linalg::contains(s.ell, s.dim, &pw[level], &col)
        })
    };
    check(
        congruent(&s2m.mul(lam), &lam.mul(&s2m), 2),
        "sigma^2 lambda != -lambda sigma^2 mod lambda^2",
    );
    let lam2 = lam.pow(2);
    check(
        congruent(&sig.mul(&lam2), &lam2.mul(sig), 3),
        "sigma lambda^2 != -lambda^2 sigma mod lambda^3",
    );
    let lam3 = lam.pow(3);
    check(
        congruent(&s2m.mul(&lam3), &lam3.mul(&s2m), 4),
        "sigma^2 lambda^3 != -lambda^3 sigma^2 mod lambda^4",
    );
    // averaging idempotent (1+σ+σ²+σ³)/4 projects onto S⁺; 4⁻¹ = 4 mod 5
    let avg = poly_sigma(sig, &[(0, 4), (1, 4), (2, 4), (3, 4)]);
    let img = s.plus(&linalg::image(&avg, &s.full()), &s.relations);
    check(
        img.len() - s.relations.len() == whole.plus,
        "averaging image != S+",
    );
    let chain: usize = layers.iter().map(|l| l.plus).sum();
    check(chain == whole.plus, "sum of layer plus parts != rank S+");
    let t = profile.t;
    check(
        whole.plus <= t - s1 + layers[0].plus && t - s1 + layers[0].plus <= 2 * t - s1,
        "rank S+ exceeds t - s1 + rank (S/lambda S)+",
    );
    let closed = (layers[0].plus + t) as i64
        - (ker_theta[0]
            + ker_theta[1]
            + ker_alpha[0]
            + ker_alpha[2]
            + ker_beta[1]
            + layers[3].minus) as i64;
    Ok(SigmaDecomposition {
        layers,
        whole,
        ker_theta,
        ker_alpha,
        ker_alpha_plus_minus,
        ker_beta,
        profile,
        plus_rank_chain: chain,
        swapped_alpha_targets,
        alpha_closed_form: closed == whole.plus as i64,
        diagnostics: diag,
    })
}

fn poly_mul_mod5(a: &[i64], b: &[i64]) -> Vec<i64> {
    let aa: Vec<i128> = a.iter().map(|&z| z as i128).collect();
    let bb: Vec<i128> = b.iter().map(|&z| z as i128).collect();
    poly_mul_int(&aa, &bb, 5)
        .into_iter()
        .map(|z| z.rem_euclid(5) as i64)
        .collect()
}

fn poly_pow_mod5(a: &[i64], mut e: u32) -> Vec<i64> {
    let mut acc = vec![1, 0, 0, 0];
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod5(&acc, &b);
        }
        b = poly_mul_mod5(&b, &b);
        e >>= 1;
    }
    acc
}

/// x ↦ x^{3k} applied k times, on F₅[x]/Φ₅.
fn frob_pow(a: &[i64], k: u32) -> Vec<i64> {
    let mut v = a.to_vec();
    for _ in 0..k {
        let mut out = vec![0i64; 4];
        for (j, &c) in v.iter().enumerate() {
            let mono = monomial_int(5, 3 * j);
            for i in 0..4 {
                out[i] = (out[i] + c * mono[i] as i64).rem_euclid(5);
            }
        }
        v = out;
    }
    v
}

fn random_unit(rng: &mut impl Rng) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..4).map(|_| rng.gen_range(0..5)).collect();
        // a unit iff nonzero mod λ, i.e. its value at x = 1
        if v.iter().sum::<i64>() % 5 != 0 {
            return v;
        }
    }
}

/// Inverse in F₅[x]/Φ₅ = F₅[λ]/λ⁴, whose unit group has order 500.
fn unit_inverse(a: &[i64]) -> Vec<i64> {
    poly_pow_mod5(a, 499)
}

/// ±x^a · w/φ^k(w): these satisfy c·φ^k(c)·… = 1 along the relevant orbit.
fn twisted_unit(rng: &mut impl Rng, k: u32) -> Vec<i64> {
    let w = random_unit(rng);
    let sign = if rng.gen_bool(0.5) { 1 } else { 4 };
    let mut c = vec![0i64; 4];
    c[0] = sign;
    let c = poly_mul_mod5(
        &c,
        &monomial_int(5, rng.gen_range(0..5))
            .iter()
            .map(|&z| z as i64)
            .collect::<Vec<_>>(),
    );
    poly_mul_mod5(&poly_mul_mod5(&c, &w), &unit_inverse(&frob_pow(&w, k)))
}

/// A random σ built from fixed summands and swapped pairs of equal exponent.
pub fn random_sigma_spec(exponents: &[u64], rng: &mut impl Rng) -> SigmaSpec {
    let t = exponents.len();
    let mut perm: Vec<usize> = (0..t).collect();
    let mut units = vec![vec![1, 0, 0, 0]; t];
    let mut i = 0;
    while i < t {
        let swap = i + 1 < t && exponents[i] == exponents[i + 1] && rng.gen_bool(0.5);
        if swap {
            // σ² on summand i is c·φ²(·) with c = d_j·φ(d_i); need c·φ²(c) = 1
            let di = random_unit(rng);
            let c = twisted_unit(rng, 2);
            let dj = poly_mul_mod5(&c, &unit_inverse(&frob_pow(&di, 1)));
            perm[i] = i + 1;
            perm[i + 1] = i;
            units[i] = di;
            units[i + 1] = dj;
            i += 2;
        } else {
            units[i] = twisted_unit(rng, 1);
            i += 1;
        }
    }
    SigmaSpec { perm, units }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn residue_field_module() {
        let m = build(5, &[1], None).unwrap();
        assert_eq!(m.log_order(), 1);
        let p = brute_rank_profile(&m);
        assert_eq!((p.t, p.rank), (1, 1));
    }

    #[test]
    fn lambda_squared_module() {
        let m = build(5, &[2], None).unwrap();
        assert_eq!(m.log_order(), 2);
        let p = brute_rank_profile(&m);
        assert_eq!((p.t, p.s.clone(), p.rank), (1, vec![0, 1, 0], 2));
    }

    #[test]
    fn one_three_shape() {
        let m = build(5, &[1, 3], None).unwrap();
        let p = brute_rank_profile(&m);
        assert_eq!(p.t, 2);
        assert_eq!(p.s, vec![1, 0, 1]);
        assert_eq!(p.rank, 4);
    }

    #[test]
    fn one_two_rank_three() {
        let p = brute_rank_profile(&build(5, &[1, 2], None).unwrap());
        assert_eq!(p.rank, 4 * 2 - 3 - 2);
    }

    #[test]
    fn elementary_case() {
        let p = brute_rank_profile(&build(5, &[1, 1], None).unwrap());
        assert_eq!((p.t, p.s[0], p.rank), (2, 2, 2));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            build(4, &[1], None),
            Err(FiltrationError::BadEll(4))
        ));
        assert!(build(5, &[4], None).is_err());
        assert!(build(5, &[2, 1], None).is_err());
        assert!(build(5, &[], None).is_err());
        assert_eq!(
            build(3, &[1], Some(&SigmaSpec::natural(1))).unwrap_err(),
            FiltrationError::SigmaNeedsFive
        );
    }

    #[test]
    fn hnf_index_matches_norm() {
        for ell in [3usize, 5, 7] {
            for e in 1..ell as u64 - 1 {
                let le = lambda_power_int(ell, e);
                let gens: Vec<Vec<i128>> = (0..ell - 1)
                    .map(|k| poly_mul_int(&le, &monomial_int(ell, k), ell))
                    .collect();
                let h = hermite_normal_form(&gens, ell - 1);
                let idx: i128 = (0..ell - 1).map(|k| h[k][k]).product();
                assert_eq!(idx, (ell as i128).pow(e as u32));
            }
        }
    }

    #[test]
    fn enumeration_agrees_with_linear_algebra() {
        for ex in exponent_multisets(5, 3) {
            let m = build(5, &ex, None).unwrap();
            let Ok(count) = m.enumerate_lambda_torsion() else {
                continue;
            };
            assert_eq!(count, 5u64.pow(brute_rank_profile(&m).t as u32), "{ex:?}");
        }
        for ex in exponent_multisets(7, 2) {
            let m = build(7, &ex, None).unwrap();
            if let Ok(count) = m.enumerate_lambda_torsion() {
                assert_eq!(count, 7u64.pow(ex.len() as u32));
            }
        }
    }

    #[test]
    fn oracle_small_runs_pass() {
        for (ell, t) in [(3, 5), (5, 3), (7, 2)] {
            let s = run_oracle(ell, t).unwrap();
            assert!(s.failures.is_empty(), "{:?}", s.failures);
            assert!(s.checked > 0);
        }
    }

    #[test]
    fn natural_sigma_on_lambda_squared() {
        let m = build(5, &[2], Some(&SigmaSpec::natural(1))).unwrap();
        let d = sigma_decompose(&m).unwrap();
        assert!(d.ok(), "{:?}", d.diagnostics);
        assert_eq!(d.whole.plus + d.whole.minus + d.whole.minus_minus, 2);
    }

    #[test]
    fn trivial_twist_keeps_plus_part_of_residue_field() {
        // on R/λ, σ acts on F₅ trivially
        let m = build(5, &[1, 1], Some(&SigmaSpec::natural(2))).unwrap();
        let d = sigma_decompose(&m).unwrap();
        assert_eq!(d.whole.plus, 2);
        assert_eq!(d.whole.minus + d.whole.minus_minus, 0);
    }

    #[test]
    fn random_sigma_modules_satisfy_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for ex in exponent_multisets(5, 3) {
            for _ in 0..3 {
                let spec = random_sigma_spec(&ex, &mut rng);
                let m = build(5, &ex, Some(&spec)).unwrap();
                let d = sigma_decompose(&m).unwrap();
                assert!(d.ok(), "{ex:?} {spec:?} {:?}", d.diagnostics);
            }
        }
    }

    #[test]
    fn bad_sigma_rejected() {
        // a diagonal twist d gives σ⁴ = N(d), and every unit has norm ≡ 1 mod 5
        for code in 0..625i64 {
            let d: Vec<i64> = (0..4).map(|k| (code / 5i64.pow(k)) % 5).collect();
            if d.iter().sum::<i64>() % 5 == 0 {
                continue;
            }
            let spec = SigmaSpec {
                perm: vec![0],
                units: vec![d],
            };
            assert!(build(5, &[3], Some(&spec)).is_ok());
        }
        let spec = SigmaSpec {
            perm: vec![0],
            units: vec![vec![1, 4, 0, 0]],
        };
        assert!(matches!(
            build(5, &[3], Some(&spec)),
            Err(FiltrationError::SigmaNotAutomorphism(_))
        ));
        let spec = SigmaSpec {
            perm: vec![1, 0],
            units: vec![vec![1, 0, 0, 0]; 2],
        };
        assert!(build(5, &[1, 2], Some(&spec)).is_err());
    }
}
