//! Nilpotent orbits in `s` through signed partitions, the `(r, m)` table, and
//! linear-algebra oracles over `Q` for both symmetric pairs.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{MatQ, Matrix};

/// A Jordan block of size `w` whose generator lies in `V_0` (`sign = 1`) or
/// `V_1` (`sign = -1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    pub w: u32,
    pub sign: i8,
}

impl Block {
    pub fn p(self) -> i64 {
        (self.w / 2) as i64
    }

    pub fn is_odd(self) -> bool {
        self.w % 2 == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPartition {
    blocks: Vec<Block>,
}

impl SignedPartition {
    /// Validates balance of the odd blocks and sorts blocks by size, then
    /// sign, descending.
    pub fn new(mut blocks: Vec<Block>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Invalid("empty partition".into()));
        }
        if blocks.iter().any(|b| b.w == 0 || (b.sign != 1 && b.sign != -1)) {
            return Err(Error::Invalid("blocks need w >= 1 and sign +-1".into()));
        }
        let plus = blocks.iter().filter(|b| b.is_odd() && b.sign == 1).count();
        let minus = blocks.iter().filter(|b| b.is_odd() && b.sign == -1).count();
        if plus != minus {
            return Err(Error::Invalid(format!("unbalanced odd blocks: {plus} positive, {minus} negative")));
        }
        blocks.sort_by(|a, b| b.cmp(a));
        Ok(SignedPartition { blocks })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `n` with `sum w_i = 2n`.
    pub fn n(&self) -> i64 {
        self.blocks.iter().map(|b| b.w as i64).sum::<i64>() / 2
    }

    /// Number of odd blocks with sign `+1`.
    pub fn u(&self) -> i64 {
        self.blocks.iter().filter(|b| b.is_odd() && b.sign == 1).count() as i64
    }

    pub fn is_zero_orbit(&self) -> bool {
        self.blocks.iter().all(|b| b.w == 1)
    }

    pub fn flipped(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| Block { w: b.w, sign: -b.sign }).collect();
        SignedPartition::new(blocks).expect("flipping preserves balance")
    }

    /// Parses `"3+,1-"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let (w, sign) = match part.chars().last() {
                Some('+') => (&part[..part.len() - 1], 1),
                Some('-') => (&part[..part.len() - 1], -1),
                _ => return Err(Error::Invalid(format!("block {part:?} needs a trailing sign"))),
            };
            let w: u32 = w.parse().map_err(|_| Error::Invalid(format!("bad block size in {part:?}")))?;
            blocks.push(Block { w, sign });
        }
        SignedPartition::new(blocks)
    }
}

impl fmt::Display for SignedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| format!("{}{}", b.w, if b.sign == 1 { '+' } else { '-' })).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Partitions of `total` into parts at most `max`, descending, in reverse
/// lexicographic order.
fn partitions(total: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if total == 0 {
        out.push(prefix.clone());
        return;
    }
    for w in (1..=total.min(max)).rev() {
        prefix.push(w);
        partitions(total - w, w, prefix, out);
        prefix.pop();
    }
}

/// Every balanced signed partition of `2n`: partitions in reverse
/// lexicographic order, then sign vectors with `+` before `-`, one
/// representative per multiset.
pub fn enumerate(n: u32) -> Vec<SignedPartition> {
    let mut parts = Vec::new();
    partitions(2 * n, 2 * n, &mut Vec::new(), &mut parts);
    let mut out = Vec::new();
    for part in parts {
        let k = part.len();
        for mask in 0u64..(1u64 << k) {
            let signs: Vec<i8> = (0..k).map(|i| if mask >> (k - 1 - i) & 1 == 1 { -1 } else { 1 }).collect();
            // within a run of equal sizes, signs must be + then -
            if (1..k).any(|i| part[i] == part[i - 1] && signs[i] > signs[i - 1]) {
                continue;
            }
            let blocks = part.iter().zip(&signs).map(|(&w, &sign)| Block { w, sign }).collect();
            if let Ok(sp) = SignedPartition::new(blocks) {
                out.push(sp);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairContribution {
    pub i: usize,
    pub j: usize,
    pub r: i64,
    pub m: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilpotentInvariants {
    pub r: i64,
    pub m: i64,
    pub pairs: Vec<PairContribution>,
}

/// Contribution of one block (`i = j`) or one pair of blocks (`i < j`).
pub fn table_pair(bi: Block, bj: Block) -> (i64, i64) {
    let (pi, pj) = (bi.p(), bj.p());
    let dd = bi.sign * bj.sign;
    match (bi.is_odd(), bj.is_odd()) {
        (false, false) => {
            let r = 2 * pi.min(pj);
            if dd == 1 {
                (r, 2 * pi * pj)
            } else {
                (r, 2 * pi * pj - 2 * pi.min(pj))
            }
        }
        (true, true) => {
            if dd == 1 {
                (2 * pi.min(pj), 2 * pi * pj)
            } else {
                (2 * pi.min(pj) + 2, 2 * pi * pj + 2 * pi.max(pj))
            }
        }
        _ => {
            // even block first
            let (e, o) = if bi.is_odd() { (bj, bi) } else { (bi, bj) };
            let (pe, po) = (e.p(), o.p());
            if e.w < o.w {
                (2 * pe, 2 * pe * po)
            } else if dd == 1 {
                (2 * po + 1, 2 * pe * po + 2 * (pe - po) - 1)
            } else {
                (2 * po + 1, 2 * pe * po)
            }
        }
    }
}

pub fn table_invariants(sp: &SignedPartition) -> NilpotentInvariants {
    let b = sp.blocks();
    let mut pairs = Vec::new();
    for i in 0..b.len() {
        pairs.push(PairContribution { i, j: i, r: b[i].p(), m: b[i].p() * b[i].p() });
        for j in i + 1..b.len() {
            let (r, m) = table_pair(b[i], b[j]);
            pairs.push(PairContribution { i, j, r, m });
        }
    }
    let r = pairs.iter().map(|c| c.r).sum();
    let m = pairs.iter().map(|c| c.m).sum();
    NilpotentInvariants { r, m, pairs }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub partition: String,
    pub n: i64,
    pub r: i64,
    pub m: i64,
    /// `r - n`.
    pub slack_r: i64,
    /// `2(r + m) - (2n^2 + n)`, positive iff the strict inequality holds.
    pub slack_rm_twice: i64,
    pub single_block: bool,
    pub pass: bool,
}

/// `r >= n` and `r + m > n^2 + n/2`; `None` for the zero orbit.
pub fn verify_inequalities(sp: &SignedPartition) -> Option<InequalityReport> {
    if sp.is_zero_orbit() {
        return None;
    }
    let t = table_invariants(sp);
    let n = sp.n();
    let slack_r = t.r - n;
    let slack_rm_twice = 2 * (t.r + t.m) - (2 * n * n + n);
    let single_block = sp.blocks().len() == 1;
    // r = n exactly for the single block of size 2n
    let pass = slack_r >= 0 && slack_rm_twice > 0 && ((slack_r == 0) == single_block);
    Some(InequalityReport { partition: sp.to_string(), n, r: t.r, m: t.m, slack_r, slack_rm_twice, single_block, pass })
}

/// Invariants recomputed from an explicit nilpotent `Y_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleInvariants {
    pub r: i64,
    /// Trace of `X d/dX` on the centralizer: the grading by block shift.
    pub m: i64,
    /// `Tr(ad(-d))` on the centralizer for the centered `sl_2` element `d`,
    /// which is twice the half-trace.
    pub m_centered_twice: i64,
    pub pairs: Vec<PairContribution>,
}

struct BasisVec {
    block: usize,
    k: i64,
    deg: i64,
    weight: i64,
}

fn q(k: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(k))
}

/// Builds `Y_0` as cyclic blocks `z, Y z, ..., Y^{w-1} z` alternating between
/// `V_0` and `V_1`, then solves `[M, Y_0] = 0` for `M` in `s`, restricted to
/// the matrix units between blocks `i` and `j` and graded by shift `k_u - k_v`.
pub fn matrix_oracle(sp: &SignedPartition) -> Result<OracleInvariants> {
    let blocks = sp.blocks();
    let mut basis = Vec::new();
    for (b, blk) in blocks.iter().enumerate() {
        let d0 = if blk.sign == 1 { 0 } else { 1 };
        for k in 0..blk.w as i64 {
            basis.push(BasisVec { block: b, k, deg: (d0 + k) % 2, weight: blk.w as i64 - 1 - 2 * k });
        }
    }
    let v0 = basis.iter().filter(|v| v.deg == 0).count() as i64;
    if v0 != sp.n() {
        return Err(Error::Internal(format!("grading puts {v0} vectors in V_0, expected {}", sp.n())));
    }
    let dim = basis.len();
    let index = |b: usize, k: i64| basis.iter().position(|v| v.block == b && v.k == k);
    let mut y = Matrix::zeros(dim, dim, &q(0));
    for (i, v) in basis.iter().enumerate() {
        if let Some(t) = index(v.block, v.k + 1) {
            y.set(t, i, q(1));
        }
    }
    let mut out = OracleInvariants { r: 0, m: 0, m_centered_twice: 0, pairs: Vec::new() };
    for bi in 0..blocks.len() {
        for bj in bi..blocks.len() {
            // matrix units E_{uv} of s between the two blocks, both directions
            let units: Vec<(usize, usize)> = (0..dim)
                .flat_map(|u| (0..dim).map(move |v| (u, v)))
                .filter(|&(u, v)| {
                    let (a, b) = (basis[u].block, basis[v].block);
                    ((a == bi && b == bj) || (a == bj && b == bi)) && basis[u].deg != basis[v].deg
                })
                .collect();
            // both the shift and the d-weight are preserved by ad(Y_0)
            let grade = |u: usize, v: usize| (basis[u].k - basis[v].k, basis[u].weight - basis[v].weight);
            let mut grades: Vec<(i64, i64)> = units.iter().map(|&(u, v)| grade(u, v)).collect();
            grades.sort();
            grades.dedup();
            let (mut r, mut m) = (0, 0);
            for (s, dw) in grades {
                let cols: Vec<(usize, usize)> = units.iter().copied().filter(|&(u, v)| grade(u, v) == (s, dw)).collect();
                let k = kernel_dim(&y, &cols, dim);
                r += k;
                m += k * s;
                out.m_centered_twice -= k * dw;
            }
            out.pairs.push(PairContribution { i: bi, j: bj, r, m });
            out.r += r;
            out.m += m;
        }
    }
    Ok(out)
}

/// Kernel dimension of `M -> M Y - Y M` on the span of the given matrix
/// units. `Y` is a sum of units, so `[E_uv, Y] = E_{u,pred v} - E_{succ u,v}`.
fn kernel_dim(y: &MatQ, cols: &[(usize, usize)], dim: usize) -> i64 {
    let succ = |u: usize| (0..dim).find(|&t| !y.get(t, u).is_zero());
    let pred = |v: usize| (0..dim).find(|&c| !y.get(v, c).is_zero());
    let mut targets: Vec<(usize, usize)> = Vec::new();
    let mut entries: Vec<(usize, usize, i64)> = Vec::new();
    let slot = |t: (usize, usize), targets: &mut Vec<(usize, usize)>| match targets.iter().position(|&x| x == t) {
        Some(i) => i,
        None => {
            targets.push(t);
            targets.len() - 1
        }
    };
    for (c, &(u, v)) in cols.iter().enumerate() {
        if let Some(pv) = pred(v) {
            entries.push((slot((u, pv), &mut targets), c, 1));
        }
        if let Some(su) = succ(u) {
            entries.push((slot((su, v), &mut targets), c, -1));
        }
    }
    if targets.is_empty() {
        return cols.len() as i64;
    }
    let mut m = Matrix::zeros(targets.len(), cols.len(), &q(0));
    for (r, c, x) in entries {
        let cur = m.get(r, c).clone();
        m.set(r, c, cur + q(x));
    }
    m.kernel().1.len() as i64
}

/// Identities on the `s'` side for a nilpotent `Y_0 = [[0, gamma A], [A, 0]]`
/// with `A` in Jordan form of the given type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeNilpotentReport {
    pub jordan_type: Vec<u32>,
    pub n: i64,
    /// `dim s'_{Y0}` over `F`.
    pub r: i64,
    /// `dim h'_{Y0}` over `F`.
    pub r_h: i64,
    /// `Tr(ad(-d))` on `s'_{Y0}`, twice `m`.
    pub m_twice: i64,
    /// `Tr(ad(-d))` on `h'_{Y0}`, twice `m'`.
    pub m_h_twice: i64,
    pub pass: bool,
}

/// Elements `a + b delta` of `Q(sqrt(D))` as the 2x2 blocks `[[a, D b], [b, a]]`.
const ORACLE_DELTA: i64 = 2;
const ORACLE_GAMMA: i64 = 3;

fn e_block(a: i64, b: i64) -> [[i64; 2]; 2] {
    [[a, ORACLE_DELTA * b], [b, a]]
}

/// Places an `N x N` matrix over `Q(sqrt D)`, given entrywise as `(a, b)`,
/// into `gl_{2N}(Q)`.
fn realize(n: usize, entry: impl Fn(usize, usize) -> (i64, i64)) -> MatQ {
    Matrix::from_fn(2 * n, 2 * n, |r, c| {
        let (a, b) = entry(r / 2, c / 2);
        q(e_block(a, b)[r % 2][c % 2])
    })
}

/// Weights of the centered `d = diag(D, D)` with `D` graded per Jordan block.
fn jordan_weights(jt: &[u32]) -> Vec<i64> {
    let mut out = Vec::new();
    for &s in jt {
        for k in 0..s as i64 {
            out.push(s as i64 - 1 - 2 * k);
        }
    }
    out
}

pub fn prime_oracle(jt: &[u32]) -> Result<PrimeNilpotentReport> {
    let n: usize = jt.iter().map(|&s| s as usize).sum();
    if n == 0 {
        return Err(Error::Invalid("empty Jordan type".into()));
    }
    // A e_k = e_{k+1} inside each block
    let mut a = vec![vec![0i64; n]; n];
    let mut off = 0;
    for &s in jt {
        for k in 0..s as usize - 1 {
            a[off + k + 1][off + k] = 1;
        }
        off += s as usize;
    }
    let w = jordan_weights(jt);
    let big = 2 * n;
    // Y0 = [[0, gamma A], [conj A, 0]] with A over F
    let y = realize(big, |i, j| {
        if i < n && j >= n {
            (ORACLE_GAMMA * a[i][j - n], 0)
        } else if i >= n && j < n {
            (a[i - n][j], 0)
        } else {
            (0, 0)
        }
    });
    let wt = |i: usize| w[i % n];
    let mut report = PrimeNilpotentReport { jordan_type: jt.to_vec(), n: n as i64, r: 0, r_h: 0, m_twice: 0, m_h_twice: 0, pass: false };
    // F-basis of h' (diag(q, conj q)) and s' ([[0, gamma p], [conj p, 0]]),
    // grouped by d-weight w_i - w_j of the unit E_ij
    for side in 0..2 {
        let mut by_weight: std::collections::BTreeMap<i64, Vec<MatQ>> = Default::default();
        for i in 0..n {
            for j in 0..n {
                for comp in 0..2 {
                    let (ca, cb) = if comp == 0 { (1, 0) } else { (0, 1) };
                    let m = realize(big, |r, c| {
                        if side == 0 {
                            if r == i && c == j {
                                (ca, cb)
                            } else if r == i + n && c == j + n {
                                (ca, -cb)
                            } else {
                                (0, 0)
                            }
                        } else if r == i && c == j + n {
                            (ORACLE_GAMMA * ca, ORACLE_GAMMA * cb)
                        } else if r == i + n && c == j {
                            (ca, -cb)
                        } else {
                            (0, 0)
                        }
                    });
                    by_weight.entry(wt(i) - wt(j)).or_default().push(m);
                }
            }
        }
        let (mut r, mut tr) = (0i64, 0i64);
        for (weight, elems) in by_weight {
            let images: Vec<MatQ> = elems.iter().map(|z| &(z * &y) - &(&y * z)).collect();
            let rows = images[0].entries().len();
            let mat = Matrix::from_fn(rows, images.len(), |rr, c| images[c].entries()[rr].clone());
            let k = mat.kernel().1.len() as i64;
            r += k;
            tr += k * -weight;
        }
        if side == 0 {
            report.r_h = r;
            report.m_h_twice = tr;
        } else {
            report.r = r;
            report.m_twice = tr;
        }
    }
    let nn = n as i64;
    // m = (4n^2 - 2r)/4, r + m = n^2 + r/2, r >= 2n, m' < n^2
    let m4 = 2 * report.m_twice;
    report.pass = m4 == 4 * nn * nn - 2 * report.r
        && 4 * report.r + m4 == 4 * nn * nn + 2 * report.r
        && report.r >= 2 * nn
        && report.m_h_twice < 2 * nn * nn
        && report.r == report.r_h
        && report.m_twice == report.m_h_twice;
    Ok(report)
}

/// Partitions of `n`, descending, in reverse lexicographic order.
pub fn jordan_types(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_block() {
        for n in 1..5u32 {
            let sp = SignedPartition::new(vec![Block { w: 2 * n, sign: 1 }]).unwrap();
            let t = table_invariants(&sp);
            assert_eq!((t.r, t.m), (n as i64, (n * n) as i64));
        }
    }

    #[test]
    fn three_one_example() {
        let sp = SignedPartition::parse("3+,1-").unwrap();
        let t = table_invariants(&sp);
        assert_eq!((t.r, t.m), (3, 3));
        let o = matrix_oracle(&sp).unwrap();
        assert_eq!((o.r, o.m), (3, 3));
    }

    #[test]
    fn zero_orbit_oracle() {
        let sp = SignedPartition::parse("1+,1+,1-,1-").unwrap();
        let o = matrix_oracle(&sp).unwrap();
        assert_eq!((o.r, o.m), (8, 0));
    }

    #[test]
    fn unbalanced_is_rejected() {
        assert!(SignedPartition::parse("3+,1+").is_err());
    }

    #[test]
    fn enumeration_is_canonical() {
        let all = enumerate(2);
        let mut dedup = all.clone();
        dedup.dedup();
        assert_eq!(all, dedup);
        assert!(all.iter().all(|sp| sp.n() == 2));
        assert_eq!(all[0].to_string(), "4+");
    }

    #[test]
    fn prime_side_regular() {
        let rep = prime_oracle(&[1]).unwrap();
        assert_eq!((rep.r, rep.m_twice), (2, 0));
        assert!(rep.pass);
        let rep = prime_oracle(&[2]).unwrap();
        assert_eq!(rep.r, 4);
        assert!(rep.pass);
    }

    #[test]
    fn oracle_matches_table_pairwise_small_n() {
        for n in 1..=3 {
            for sp in enumerate(n) {
                let t = table_invariants(&sp);
                let o = matrix_oracle(&sp).unwrap();
                assert_eq!(t.pairs, o.pairs, "{sp}");
            }
        }
    }

    #[test]
    fn flipping_signs_keeps_invariants() {
        for sp in enumerate(3) {
            let (a, b) = (table_invariants(&sp), table_invariants(&sp.flipped()));
            assert_eq!((a.r, a.m), (b.r, b.m), "{sp}");
        }
    }

    #[test]
    fn prime_side_all_small_types() {
        for n in 1..=3 {
            for jt in jordan_types(n) {
                let rep = prime_oracle(&jt).unwrap();
                assert!(rep.pass, "{rep:?}");
            }
        }
    }
}
