//! Constructions of locally repairable codes.
//!
//! Everything here produces [`LinearCode`] values whose parameters meet the
//! redundancy floor `n - k = ceil(k/r) + d - 2` for codes of information
//! locality `r` and distance `d`:
//!
//! * [`pyramid`]: splits one parity of a systematic MDS base across message
//!   blocks; message symbols get locality `r`, distance is preserved.
//! * [`canonical_d4`]: the distance-4 family with `k/r` local parities and
//!   two heavy parities, plus its dedicated two-step erasure decoder.
//! * [`optimal_general`] and [`uniform_locality`]: randomized families built
//!   from points in general position subject to a fixed support-constraint
//!   subspace, verified and retried deterministically by seed.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::code::{binomial, DecodeOutcome, LinearCode};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// How many consecutive seeds a sampling construction tries before failing.
pub const SAMPLE_RETRY_LIMIT: u64 = 64;

/// Exhaustive k-core verification is used up to this length; beyond it a
/// seeded spot check of random k-sets stands in.
const EXHAUSTIVE_CORE_LIMIT: usize = 14;
/// Number of random k-sets examined by the spot check.
const CORE_SPOT_CHECKS: usize = 10_000;
/// Verify MDS bases by checking all k x k minors up to this many subsets.
const MINOR_CHECK_BUDGET: u64 = 10_000;

// ---------------------------------------------------------------------------
// systematic MDS bases
// ---------------------------------------------------------------------------

/// A systematic [k + d - 1, k, d] MDS code, stored as its parity columns.
#[derive(Clone, Debug)]
pub struct MdsBase {
    field: Field,
    k: usize,
    d: usize,
    /// d - 1 parity columns, each of length k and full Hamming weight.
    parities: Vec<Vec<u64>>,
}

impl MdsBase {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.k + self.d - 1
    }

    pub fn parities(&self) -> &[Vec<u64>] {
        &self.parities
    }

    /// The code itself: unit columns followed by the parity columns.
    pub fn code(&self) -> LinearCode {
        let mut points: Vec<Vec<u64>> = (0..self.k)
            .map(|j| (0..self.k).map(|t| (t == j) as u64).collect())
            .collect();
        points.extend(self.parities.iter().cloned());
        LinearCode::new_systematic(self.field.clone(), points, (0..self.k).collect())
            .expect("systematic layout is valid by construction")
    }
}

/// Builds a systematic [k + d - 1, k, d] MDS code by evaluating message
/// polynomials of degree < k at the points 0, 1, ..., k + d - 2 and changing
/// basis so the first k coordinates carry the message.
pub fn systematic_mds(k: usize, d: usize, field: &Field) -> Result<MdsBase> {
    if k == 0 || d == 0 {
        return Err(Error::InvalidParameter("MDS base needs k >= 1 and d >= 1".into()));
    }
    let n = k + d - 1;
    if field.order() < n as u64 {
        return Err(Error::InvalidParameter(format!(
            "field of order {} has fewer than {} evaluation points",
            field.order(),
            n
        )));
    }
    let eval_cols: Vec<Vec<u64>> = (0..n)
        .map(|j| (0..k).map(|i| field.pow(j as u64, i as u64)).collect())
        .collect();
    finish_mds(k, d, field, eval_cols)
}

/// Like [`systematic_mds`] but tolerates one coordinate more than the field
/// has evaluation points: for q = k + d - 2 the final coordinate reads the
/// top polynomial coefficient instead of an evaluation. Used by the
/// distance-4 family, which only requires q >= r + 2.
fn systematic_mds_extended(k: usize, d: usize, field: &Field) -> Result<MdsBase> {
    let n = k + d - 1;
    let q = field.order();
    if q >= n as u64 {
        return systematic_mds(k, d, field);
    }
    if q + 1 < n as u64 {
        return Err(Error::InvalidParameter(format!(
            "field of order {} cannot support an MDS code of length {}",
            q, n
        )));
    }
    let mut eval_cols: Vec<Vec<u64>> = (0..n - 1)
        .map(|j| (0..k).map(|i| field.pow(j as u64, i as u64)).collect())
        .collect();
    let top_coeff: Vec<u64> = (0..k).map(|i| (i == k - 1) as u64).collect();
    eval_cols.push(top_coeff);
    finish_mds(k, d, field, eval_cols)
}

/// Change of basis to systematic form plus the MDS self-check.
fn finish_mds(k: usize, d: usize, field: &Field, cols: Vec<Vec<u64>>) -> Result<MdsBase> {
    let n = k + d - 1;
    let g = Matrix::from_cols(field.clone(), &cols)?;
    let head = g.select_cols(&(0..k).collect::<Vec<_>>())?;
    let inv = head.inverse().map_err(|_| {
        Error::VerificationFailed("leading evaluation columns are not invertible".into())
    })?;
    let sys = inv.matmul(&g)?;
    let parities: Vec<Vec<u64>> = (k..n).map(|j| sys.col(j)).collect();
    let base = MdsBase { field: field.clone(), k, d, parities };
    verify_mds(&base)?;
    Ok(base)
}

/// Belt check: every k columns of an MDS generator must be independent.
/// Falls back to a distance measurement when the minor count is large.
fn verify_mds(base: &MdsBase) -> Result<()> {
    for p in &base.parities {
        if p.contains(&0) {
            return Err(Error::VerificationFailed(
                "MDS parity column with a zero entry".into(),
            ));
        }
    }
    let code = base.code();
    let n = code.n();
    let k = code.k();
    if binomial(n, k) <= MINOR_CHECK_BUDGET {
        for combo in (0..n).combinations(k) {
            if code.rank_of(&combo) != k {
                return Err(Error::VerificationFailed(format!(
                    "columns {:?} of an MDS base are dependent",
                    combo
                )));
            }
        }
    } else if code.min_distance()? != base.d {
        return Err(Error::VerificationFailed("MDS base missed its distance".into()));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// pyramid codes
// ---------------------------------------------------------------------------

/// Builds a systematic [k + ceil(k/r) + d - 2, k, d] pyramid code: the first
/// parity of a [k + d - 1, k, d] MDS base is split across consecutive
/// message blocks of size r (the final block may be short), giving every
/// message symbol locality at most r; the remaining d - 2 parities are kept
/// whole.
pub fn pyramid(k: usize, r: usize, d: usize, field: &Field) -> Result<LinearCode> {
    if r == 0 || r > k {
        return Err(Error::InvalidParameter("pyramid needs 1 <= r <= k".into()));
    }
    if d < 2 {
        return Err(Error::InvalidParameter("pyramid needs d >= 2".into()));
    }
    let base = systematic_mds(k, d, field)?;
    let t = k.div_ceil(r);
    let p0 = &base.parities()[0];
    let mut points: Vec<Vec<u64>> = (0..k)
        .map(|j| (0..k).map(|t| (t == j) as u64).collect())
        .collect();
    for b in 0..t {
        let lo = b * r;
        let hi = ((b + 1) * r).min(k);
        let mut col = vec![0u64; k];
        col[lo..hi].copy_from_slice(&p0[lo..hi]);
        points.push(col);
    }
    points.extend(base.parities()[1..].iter().cloned());
    LinearCode::new_systematic(field.clone(), points, (0..k).collect())
}

// ---------------------------------------------------------------------------
// the distance-4 family
// ---------------------------------------------------------------------------

/// A distance-4 code with message locality r at the redundancy floor:
/// k/r + 2 parities in total. Message blocks y_1, ..., y_t (each of size r)
/// carry one local parity p0 . y_i apiece; two heavy parities read
/// p1 . (y_1 + ... + y_t) and p2 . (y_1 + ... + y_t), where p0, p1, p2 are
/// the parities of an [r + 3, r, 4] MDS block code.
#[derive(Clone, Debug)]
pub struct CanonicalD4 {
    field: Field,
    k: usize,
    r: usize,
    t: usize,
    p0: Vec<u64>,
    p1: Vec<u64>,
    p2: Vec<u64>,
    /// Recombination coefficients, all nonzero, satisfying
    /// p1 = sum_{j < r-1} alpha[j] e_j + alpha[r-1] p2. This identity is
    /// what pushes the heavy parities' locality down to k - t + 1.
    alpha: Vec<u64>,
    code: LinearCode,
}

/// Builds the distance-4 family member for r | k, r < k, over any field
/// with q >= r + 2.
pub fn canonical_d4(k: usize, r: usize, field: &Field) -> Result<CanonicalD4> {
    if r == 0 || r >= k || k % r != 0 {
        return Err(Error::InvalidParameter(
            "distance-4 family needs 1 <= r < k with r | k".into(),
        ));
    }
    if field.order() < r as u64 + 2 {
        return Err(Error::InvalidParameter(format!(
            "field of order {} is too small; need q >= {}",
            field.order(),
            r + 2
        )));
    }
    let base = systematic_mds_extended(r, 4, field)?;
    let p0 = base.parities()[0].clone();
    let p1 = base.parities()[1].clone();
    let p2 = base.parities()[2].clone();
    let t = k / r;

    let mut points: Vec<Vec<u64>> = (0..k)
        .map(|j| (0..k).map(|t| (t == j) as u64).collect())
        .collect();
    for b in 0..t {
        let mut col = vec![0u64; k];
        col[b * r..(b + 1) * r].copy_from_slice(&p0);
        points.push(col);
    }
    for heavy in [&p1, &p2] {
        let mut col = vec![0u64; k];
        for b in 0..t {
            col[b * r..(b + 1) * r].copy_from_slice(heavy);
        }
        points.push(col);
    }
    let code = LinearCode::new_systematic(field.clone(), points, (0..k).collect())?;

    // Express p1 over {e_1, ..., e_{r-1}, p2}; the MDS property of the block
    // code forces every coefficient to be nonzero.
    let a_top = field.div(p1[r - 1], p2[r - 1])?;
    let mut alpha: Vec<u64> = (0..r - 1)
        .map(|j| field.sub(p1[j], field.mul(a_top, p2[j])))
        .collect();
    alpha.push(a_top);
    if alpha.contains(&0) {
        return Err(Error::VerificationFailed(
            "heavy-parity recombination produced a zero coefficient".into(),
        ));
    }
    for j in 0..r {
        let mut expect = field.mul(a_top, p2[j]);
        if j < r - 1 {
            expect = field.add(expect, alpha[j]);
        }
        if expect != p1[j] {
            return Err(Error::VerificationFailed(
                "heavy-parity recombination identity does not hold".into(),
            ));
        }
    }

    Ok(CanonicalD4 { field: field.clone(), k, r, t, p0, p1, p2, alpha, code })
}

impl CanonicalD4 {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of message blocks (= number of local parities).
    pub fn block_count(&self) -> usize {
        self.t
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    /// Block MDS parities (p0, p1, p2).
    pub fn block_parities(&self) -> (&[u64], &[u64], &[u64]) {
        (&self.p0, &self.p1, &self.p2)
    }

    /// Coefficients of p1 over {e_1, ..., e_{r-1}, p2} (all nonzero).
    pub fn recombination(&self) -> &[u64] {
        &self.alpha
    }

    fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        let f = &self.field;
        a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
    }

    /// Two-step erasure decoder. Step 1 repairs every block with a single
    /// erasure through its local parity. Step 2 handles the at most one
    /// remaining dirty block: the block's heavy-parity symbols are derived
    /// from the surviving global sums, and the [r + 3, r, 4] block code is
    /// solved from its surviving coordinates. Any three erasures decode;
    /// heavier patterns may return `Undecodable`. A word inconsistent with
    /// the code on its surviving coordinates is an integrity error.
    pub fn decode_erasures(&self, word: &[Option<u64>]) -> Result<DecodeOutcome> {
        let (k, r, t) = (self.k, self.r, self.t);
        let n = k + t + 2;
        if word.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "word length {} against code length {}",
                word.len(),
                n
            )));
        }
        let q = self.field.order();
        for v in word.iter().flatten() {
            if *v >= q {
                return Err(Error::ValueOutOfRange(*v, q));
            }
        }
        let f = self.field.clone();
        let mut w: Vec<Option<u64>> = word.to_vec();

        // Step 1: local repair of single-erasure blocks.
        for b in 0..t {
            let local = k + b;
            let mut missing: Vec<usize> =
                (b * r..(b + 1) * r).filter(|&i| w[i].is_none()).collect();
            if w[local].is_none() {
                missing.push(local);
            }
            if missing.len() != 1 {
                continue;
            }
            let e = missing[0];
            if e == local {
                let val = self.dot(&self.p0, &block_values(&w, b, r));
                w[local] = Some(val);
            } else {
                let j = e - b * r;
                let mut acc = w[local].expect("only one symbol is missing");
                for (jj, &c) in self.p0.iter().enumerate() {
                    if jj != j {
                        acc = f.sub(acc, f.mul(c, w[b * r + jj].unwrap()));
                    }
                }
                w[e] = Some(f.div(acc, self.p0[j])?);
            }
        }

        // Step 2: at most one block may still be incomplete.
        let dirty: Vec<usize> = (0..t)
            .filter(|&b| {
                (b * r..(b + 1) * r).any(|i| w[i].is_none()) || w[k + b].is_none()
            })
            .collect();
        if dirty.len() > 1 {
            return Ok(DecodeOutcome::Undecodable);
        }
        if let Some(&b) = dirty.first() {
            // Recover this block through the [r+3, r, 4] block code: each
            // surviving coordinate contributes one linear equation in y_b.
            let mut rows: Vec<Vec<u64>> = Vec::new();
            let mut rhs: Vec<u64> = Vec::new();
            for j in 0..r {
                if let Some(v) = w[b * r + j] {
                    rows.push((0..r).map(|x| (x == j) as u64).collect());
                    rhs.push(v);
                }
            }
            if let Some(v) = w[k + b] {
                rows.push(self.p0.clone());
                rhs.push(v);
            }
            for (g, pg) in [(0usize, &self.p1), (1usize, &self.p2)] {
                let Some(total) = w[k + t + g] else { continue };
                // pg . y_b = global sum minus the other blocks' shares.
                let mut val = total;
                for other in 0..t {
                    if other != b {
                        let share = self.dot(pg, &block_values(&w, other, r));
                        val = f.sub(val, share);
                    }
                }
                rows.push(pg.to_vec());
                rhs.push(val);
            }
            if rows.len() < r {
                return Ok(DecodeOutcome::Undecodable);
            }
            let data: Vec<u64> = rows.iter().flatten().copied().collect();
            let m = Matrix::new(f.clone(), rows.len(), r, data)?;
            let Some(y) = m.solve(&rhs)? else {
                return Err(Error::Integrity(
                    "surviving block symbols do not match any codeword".into(),
                ));
            };
            for j in 0..r {
                if w[b * r + j].is_none() {
                    w[b * r + j] = Some(y[j]);
                }
            }
            if w[k + b].is_none() {
                w[k + b] = Some(self.dot(&self.p0, &y));
            }
        }

        // All message symbols are known; re-encode, fill remaining parities,
        // and check the surviving coordinates for consistency.
        let x: Vec<u64> = (0..k)
            .map(|i| w[i].expect("message symbols recovered above"))
            .collect();
        let full = self.code.encode(&x)?;
        for i in 0..n {
            match word[i] {
                Some(v) if v != full[i] => {
                    return Err(Error::Integrity(format!(
                        "surviving coordinate {} does not match the decoded word",
                        i
                    )));
                }
                _ => {}
            }
        }
        Ok(DecodeOutcome::Decoded(full))
    }
}

/// The r known values of block b (panics on a hole; callers ensure none).
fn block_values(w: &[Option<u64>], b: usize, r: usize) -> Vec<u64> {
    (b * r..(b + 1) * r)
        .map(|i| w[i].expect("block is complete"))
        .collect()
}

// ---------------------------------------------------------------------------
// subspaces, k-cores, and general position
// ---------------------------------------------------------------------------

/// A subspace of F_q^n presented by an independent basis (possibly empty).
#[derive(Clone, Debug)]
pub struct Subspace {
    field: Field,
    n: usize,
    basis: Vec<Vec<u64>>,
}

impl Subspace {
    pub fn new(field: Field, n: usize, basis: Vec<Vec<u64>>) -> Result<Subspace> {
        let q = field.order();
        for v in &basis {
            if v.len() != n {
                return Err(Error::DimensionMismatch(
                    "basis vector length differs from ambient length".into(),
                ));
            }
            if let Some(&x) = v.iter().find(|&&x| x >= q) {
                return Err(Error::ValueOutOfRange(x, q));
            }
        }
        if !basis.is_empty() {
            let m = Matrix::from_rows(field.clone(), &basis)?;
            if m.rank() != basis.len() {
                return Err(Error::InvalidParameter("basis vectors are dependent".into()));
            }
        }
        Ok(Subspace { field, n, basis })
    }

    /// The zero subspace of F_q^n.
    pub fn zero(field: Field, n: usize) -> Subspace {
        Subspace { field, n, basis: Vec::new() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient_len(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    fn basis_matrix(&self) -> Matrix {
        if self.basis.is_empty() {
            Matrix::zeros(self.field.clone(), 0, self.n)
        } else {
            Matrix::from_rows(self.field.clone(), &self.basis).expect("validated")
        }
    }

    /// Basis of the orthogonal complement (all vectors annihilating the
    /// subspace coordinatewise).
    pub fn complement_basis(&self) -> Vec<Vec<u64>> {
        self.basis_matrix().kernel_basis()
    }

    /// True iff no nonzero vector of the subspace has its support inside
    /// `inside` (equivalently: the basis restricted to the complement of
    /// `inside` keeps full rank).
    pub fn no_vector_supported_within(&self, inside: &[usize]) -> bool {
        let mut member = vec![false; self.n];
        for &i in inside {
            member[i] = true;
        }
        let outside: Vec<usize> = (0..self.n).filter(|&i| !member[i]).collect();
        let m = self.basis_matrix();
        m.select_cols(&outside).expect("indices in range").rank() == self.dim()
    }
}

/// Whether the k-set S is a k-core for the subspace L: no nonzero vector of
/// L is supported entirely inside S.
pub fn is_k_core(space: &Subspace, s: &[usize], k: usize) -> Result<bool> {
    if s.len() != k {
        return Err(Error::InvalidParameter(format!(
            "k-core test needs |S| = {}, got {}",
            k,
            s.len()
        )));
    }
    let mut seen = vec![false; space.ambient_len()];
    for &i in s {
        if i >= space.ambient_len() {
            return Err(Error::IndexOutOfRange(i, space.ambient_len()));
        }
        if seen[i] {
            return Err(Error::InvalidParameter("duplicate index in S".into()));
        }
        seen[i] = true;
    }
    Ok(space.no_vector_supported_within(s))
}

/// Points sampled in general position subject to a subspace of prescribed
/// dependencies, along with the seed that passed verification.
#[derive(Clone, Debug)]
pub struct GeneralPositionFamily {
    points: Vec<Vec<u64>>,
    seed: u64,
}

impl GeneralPositionFamily {
    pub fn points(&self) -> &[Vec<u64>] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec<u64>> {
        self.points
    }

    /// The seed whose sample passed verification.
    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Draws n points of F_q^k (as the columns of k random rows from the
/// orthogonal complement of `space`) and verifies general position: every
/// vector of `space` annihilates the points, and the points of every k-core
/// have full rank. Verification failures retry with seed + 1, seed + 2, ...
/// up to [`SAMPLE_RETRY_LIMIT`]; the accepted seed is recorded.
pub fn sample_general_position(
    space: &Subspace,
    k: usize,
    seed: u64,
) -> Result<GeneralPositionFamily> {
    if k == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    let comp = space.complement_basis();
    if comp.len() < k {
        return Err(Error::InvalidParameter(format!(
            "complement dimension {} is below the target dimension {}",
            comp.len(),
            k
        )));
    }
    let f = space.field();
    let n = space.ambient_len();
    let q = f.order();
    for attempt in 0..SAMPLE_RETRY_LIMIT {
        let s = seed.wrapping_add(attempt);
        let mut rng = ChaCha12Rng::seed_from_u64(s);
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(k);
        for _ in 0..k {
            let mut acc = vec![0u64; n];
            for basis_vec in &comp {
                let c = rng.gen_range(0..q);
                if c == 0 {
                    continue;
                }
                for (a, &b) in acc.iter_mut().zip(basis_vec) {
                    *a = f.add(*a, f.mul(c, b));
                }
            }
            rows.push(acc);
        }
        let points: Vec<Vec<u64>> =
            (0..n).map(|j| rows.iter().map(|row| row[j]).collect()).collect();
        if verify_general_position(space, &points, k)? {
            return Ok(GeneralPositionFamily { points, seed: s });
        }
    }
    Err(Error::SamplingFailed { retries: SAMPLE_RETRY_LIMIT })
}

/// Checks the two general-position conditions for the given points: each
/// subspace basis vector annihilates them (exact matrix product), and every
/// k-core indexes a full-rank point set (exhaustive up to length 14, then a
/// seeded spot check of 10^4 random k-sets).
pub fn verify_general_position(
    space: &Subspace,
    points: &[Vec<u64>],
    k: usize,
) -> Result<bool> {
    let f = space.field();
    let n = space.ambient_len();
    if points.len() != n {
        return Err(Error::DimensionMismatch("one point per coordinate required".into()));
    }
    for v in space.basis() {
        let mut acc = vec![0u64; k];
        for (i, p) in points.iter().enumerate() {
            if v[i] == 0 {
                continue;
            }
            for t in 0..k {
                acc[t] = f.add(acc[t], f.mul(v[i], p[t]));
            }
        }
        if acc.iter().any(|&x| x != 0) {
            return Ok(false);
        }
    }
    let rank_full = |idx: &[usize]| -> bool {
        let cols: Vec<Vec<u64>> = idx.iter().map(|&i| points[i].clone()).collect();
        Matrix::from_cols(f.clone(), &cols).expect("validated").rank() == k
    };
    if n <= EXHAUSTIVE_CORE_LIMIT {
        for combo in (0..n).combinations(k) {
            if space.no_vector_supported_within(&combo) && !rank_full(&combo) {
                return Ok(false);
            }
        }
    } else {
        // Deterministic spot check; exhaustive verification is out of reach.
        let mut rng = ChaCha12Rng::seed_from_u64(0x6b_c0_7e);
        for _ in 0..CORE_SPOT_CHECKS {
            let mut pool: Vec<usize> = (0..n).collect();
            for i in 0..k {
                let j = rng.gen_range(i..n);
                pool.swap(i, j);
            }
            let mut s: Vec<usize> = pool[..k].to_vec();
            s.sort_unstable();
            if space.no_vector_supported_within(&s) && !rank_full(&s) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// optimal general construction
// ---------------------------------------------------------------------------

/// Builds a systematic [k + k/r + d - 2, k, d] code for r | k, r < k and
/// 2 < d < r + 3 by sampling points in general position subject to a fixed
/// constraint layout: t = k/r consecutive blocks of size r + 1 (one
/// full-support dependency with distinct values per block) plus one
/// dependency tying the d - 2 tail coordinates to the last r - d + 3
/// positions of every block. Message symbols land on the first r positions
/// of each block (the lexicographically least valid basis), the remaining
/// position of each block is a locality-r parity, and the tail coordinates
/// are the heavy parities. Returns the code and the accepted seed.
pub fn optimal_general(
    k: usize,
    r: usize,
    d: usize,
    field: &Field,
    seed: u64,
) -> Result<(LinearCode, u64)> {
    if r == 0 || r >= k || k % r != 0 {
        return Err(Error::InvalidParameter(
            "general construction needs 1 <= r < k with r | k".into(),
        ));
    }
    if d <= 2 {
        return Err(Error::InvalidParameter("general construction needs d > 2".into()));
    }
    if d >= r + 3 {
        return Err(Error::InvalidParameter(
            "general construction needs d < r + 3".into(),
        ));
    }
    if field.order() < r as u64 + 2 {
        return Err(Error::InvalidParameter(format!(
            "field of order {} is too small for {} distinct block values",
            field.order(),
            r + 1
        )));
    }
    let t = k / r;
    let n = k + t + d - 2;
    let overlap = r + 3 - d; // block positions shared with the tail constraint

    let mut v0 = vec![0u64; n];
    for i in t * (r + 1)..n {
        v0[i] = 1;
    }
    let mut constraints = Vec::with_capacity(t + 1);
    for b in 0..t {
        let lo = b * (r + 1);
        let mut v = vec![0u64; n];
        for (off, slot) in (lo..lo + r + 1).enumerate() {
            v[slot] = off as u64 + 1; // distinct nonzero values
        }
        constraints.push(v);
        for slot in lo + r + 1 - overlap..lo + r + 1 {
            v0[slot] = 1;
        }
    }
    constraints.insert(0, v0);
    let space = Subspace::new(field.clone(), n, constraints)?;
    let family = sample_general_position(&space, k, seed)?;

    // Message basis: first r positions of each block.
    let info: Vec<usize> = (0..t).flat_map(|b| b * (r + 1)..b * (r + 1) + r).collect();
    let head = Matrix::from_cols(
        field.clone(),
        &info.iter().map(|&i| family.points()[i].clone()).collect::<Vec<_>>(),
    )?;
    let inv = head
        .inverse()
        .map_err(|_| Error::VerificationFailed("message basis is not invertible".into()))?;
    let points: Vec<Vec<u64>> = family
        .points()
        .iter()
        .map(|p| inv.mul_vec(p).expect("square times k-vector"))
        .collect();
    let code = LinearCode::new_systematic(field.clone(), points, info)?;
    if code.n() <= 24 && code.min_distance()? != d {
        return Err(Error::VerificationFailed(
            "general construction missed its distance".into(),
        ));
    }
    Ok((code, family.seed()))
}

// ---------------------------------------------------------------------------
// uniform locality construction
// ---------------------------------------------------------------------------

/// Builds an [n, k, d] code in which every coordinate (parities included)
/// has locality exactly r, for (r + 1) | n and n - k = ceil(k/r) + d - 2:
/// points in general position subject to one all-ones dependency per
/// consecutive block of size r + 1. Returns the code and the accepted seed.
pub fn uniform_locality(
    n: usize,
    k: usize,
    r: usize,
    d: usize,
    field: &Field,
    seed: u64,
) -> Result<(LinearCode, u64)> {
    if r == 0 || k == 0 {
        return Err(Error::InvalidParameter("need r >= 1 and k >= 1".into()));
    }
    if d < 2 {
        return Err(Error::InvalidParameter("need d >= 2".into()));
    }
    if n % (r + 1) != 0 {
        return Err(Error::InvalidParameter(format!(
            "block size {} must divide the length {}",
            r + 1,
            n
        )));
    }
    if n != k + k.div_ceil(r) + d - 2 {
        return Err(Error::InvalidParameter(format!(
            "length {} is not k + ceil(k/r) + d - 2 = {}",
            n,
            k + k.div_ceil(r) + d - 2
        )));
    }
    let t = n / (r + 1);
    let mut constraints = Vec::with_capacity(t);
    for b in 0..t {
        let mut v = vec![0u64; n];
        for slot in b * (r + 1)..(b + 1) * (r + 1) {
            v[slot] = 1;
        }
        constraints.push(v);
    }
    let space = Subspace::new(field.clone(), n, constraints)?;
    let family = sample_general_position(&space, k, seed)?;
    let seed_used = family.seed();
    let code = LinearCode::new(field.clone(), family.into_points())?;
    if code.n() <= 24 && code.min_distance()? != d {
        return Err(Error::VerificationFailed(
            "uniform-locality construction missed its distance".into(),
        ));
    }
    Ok((code, seed_used))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{DistanceMethod, Locality};

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    #[test]
    fn mds_base_over_gf7() {
        let base = systematic_mds(4, 4, &gf(7)).unwrap();
        assert_eq!(base.n(), 7);
        assert_eq!(base.parities().len(), 3);
        for p in base.parities() {
            assert!(p.iter().all(|&v| v != 0), "MDS parities have full weight");
        }
        let code = base.code();
        assert_eq!(
            code.min_distance_by(DistanceMethod::WeightEnumeration).unwrap(),
            4
        );
    }

    #[test]
    fn mds_base_degenerates_to_repetition() {
        let base = systematic_mds(1, 2, &gf(2)).unwrap();
        let code = base.code();
        assert_eq!((code.n(), code.k()), (2, 1));
        assert_eq!(code.min_distance().unwrap(), 2);
    }

    #[test]
    fn mds_base_needs_enough_evaluation_points() {
        assert!(matches!(
            systematic_mds(4, 4, &gf(5)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn extended_mds_base_reaches_one_past_the_field() {
        // [6, 3, 4] over GF(5): impossible by evaluation alone (needs 6
        // points), fine with the top-coefficient coordinate.
        let base = systematic_mds_extended(3, 4, &gf(5)).unwrap();
        assert_eq!(base.n(), 6);
        let code = base.code();
        assert_eq!(code.min_distance().unwrap(), 4);
    }

    #[test]
    fn pyramid_shape_and_distance() {
        let code = pyramid(4, 2, 4, &gf(7)).unwrap();
        assert_eq!((code.n(), code.k()), (8, 4));
        assert_eq!(code.min_distance().unwrap(), 4);
        let profile = code.locality_profile().unwrap();
        for i in 0..6 {
            assert_eq!(profile.coords[i].locality, Locality::Finite(2));
        }
        for i in 6..8 {
            let l = profile.coords[i].locality.finite().unwrap();
            assert!((3..=4).contains(&l), "heavy parity locality {}", l);
        }
        assert_eq!(profile.information_locality, Locality::Finite(2));
    }

    #[test]
    fn pyramid_with_r_equal_k_is_the_mds_base() {
        let code = pyramid(4, 4, 4, &gf(7)).unwrap();
        let base = systematic_mds(4, 4, &gf(7)).unwrap().code();
        assert_eq!(code.points(), base.points());
    }

    #[test]
    fn pyramid_with_short_final_block() {
        let code = pyramid(5, 2, 3, &gf(11)).unwrap();
        assert_eq!((code.n(), code.k()), (9, 5));
        assert_eq!(code.min_distance().unwrap(), 3);
        // The short block {4} still gets a usable local parity.
        let l = code.locality(4).unwrap();
        assert_eq!(l.locality, Locality::Finite(1));
    }

    #[test]
    fn canonical_d4_shape() {
        let cons = canonical_d4(4, 2, &gf(5)).unwrap();
        let code = cons.code();
        assert_eq!((code.n(), code.k()), (8, 4));
        assert_eq!(code.min_distance().unwrap(), 4);
        let profile = code.locality_profile().unwrap();
        let values: Vec<Locality> = profile.values();
        let expect: Vec<Locality> = [2, 2, 2, 2, 2, 2, 3, 3]
            .iter()
            .map(|&v| Locality::Finite(v))
            .collect();
        assert_eq!(values, expect);
    }

    #[test]
    fn canonical_d4_with_minimal_field() {
        // q = r + 2 exercises the extended MDS base.
        let cons = canonical_d4(6, 3, &gf(5)).unwrap();
        let code = cons.code();
        assert_eq!((code.n(), code.k()), (10, 6));
        assert_eq!(code.min_distance().unwrap(), 4);
        // Heavy parities recombine over k - t + 1 = 5 coordinates.
        assert_eq!(code.locality(8).unwrap().locality, Locality::Finite(5));
        assert_eq!(code.locality(9).unwrap().locality, Locality::Finite(5));
    }

    #[test]
    fn canonical_d4_rejects_bad_parameters() {
        assert!(canonical_d4(4, 3, &gf(5)).is_err()); // r does not divide k
        assert!(canonical_d4(4, 4, &gf(7)).is_err()); // r = k
        assert!(canonical_d4(6, 3, &gf(4)).is_err()); // q < r + 2
    }

    #[test]
    fn recombination_identity_holds() {
        let cons = canonical_d4(6, 2, &gf(7)).unwrap();
        let f = cons.field().clone();
        let (_, p1, p2) = cons.block_parities();
        let alpha = cons.recombination();
        let r = cons.r();
        for j in 0..r {
            let mut expect = f.mul(alpha[r - 1], p2[j]);
            if j < r - 1 {
                expect = f.add(expect, alpha[j]);
            }
            assert_eq!(expect, p1[j]);
        }
        assert!(alpha.iter().all(|&a| a != 0));
    }

    #[test]
    fn d4_decoder_zero_erasures_is_identity() {
        let cons = canonical_d4(4, 2, &gf(5)).unwrap();
        let word = cons.code().encode(&[1, 2, 3, 4]).unwrap();
        let w: Vec<Option<u64>> = word.iter().map(|&v| Some(v)).collect();
        assert_eq!(
            cons.decode_erasures(&w).unwrap(),
            DecodeOutcome::Decoded(word)
        );
    }

    #[test]
    fn d4_decoder_recovers_a_whole_block() {
        let cons = canonical_d4(4, 2, &gf(5)).unwrap();
        let word = cons.code().encode(&[1, 2, 3, 4]).unwrap();
        let mut w: Vec<Option<u64>> = word.iter().map(|&v| Some(v)).collect();
        // Erase block 0 entirely: both message symbols and the local parity.
        w[0] = None;
        w[1] = None;
        w[4] = None;
        assert_eq!(
            cons.decode_erasures(&w).unwrap(),
            DecodeOutcome::Decoded(word)
        );
    }

    #[test]
    fn d4_decoder_matches_generic_decoder_on_all_triples() {
        let cons = canonical_d4(4, 2, &gf(5)).unwrap();
        let code = cons.code();
        let word = code.encode(&[4, 0, 2, 1]).unwrap();
        for triple in (0..code.n()).combinations(3) {
            let mut w: Vec<Option<u64>> = word.iter().map(|&v| Some(v)).collect();
            for &i in &triple {
                w[i] = None;
            }
            let fast = cons.decode_erasures(&w).unwrap();
            let generic = code.decode_erasures(&w).unwrap();
            assert_eq!(fast, DecodeOutcome::Decoded(word.clone()), "{:?}", triple);
            assert_eq!(generic, fast);
        }
    }

    #[test]
    fn d4_decoder_reports_undecodable_and_integrity() {
        let cons = canonical_d4(4, 2, &gf(5)).unwrap();
        let word = cons.code().encode(&[1, 1, 1, 1]).unwrap();
        // Four erasures across two blocks defeat the decoder.
        let mut w: Vec<Option<u64>> = word.iter().map(|&v| Some(v)).collect();
        for i in [0, 1, 2, 3] {
            w[i] = None;
        }
        assert_eq!(cons.decode_erasures(&w).unwrap(), DecodeOutcome::Undecodable);

        let mut bad: Vec<Option<u64>> = word.iter().map(|&v| Some(v)).collect();
        bad[0] = Some((word[0] + 1) % 5);
        assert!(matches!(cons.decode_erasures(&bad), Err(Error::Integrity(_))));
    }

    #[test]
    fn k_core_examples() {
        let f = gf(5);
        let space = Subspace::new(f, 4, vec![vec![1, 1, 1, 0]]).unwrap();
        assert!(!is_k_core(&space, &[0, 1, 2], 3).unwrap());
        assert!(is_k_core(&space, &[0, 1, 3], 3).unwrap());
        assert!(is_k_core(&space, &[0, 1], 3).is_err());
    }

    #[test]
    fn k_core_matches_dual_column_rank() {
        // Dual characterization: S is a core iff the columns of a
        // complement basis indexed by S are independent.
        let f = gf(3);
        let space =
            Subspace::new(f.clone(), 5, vec![vec![1, 2, 0, 1, 0], vec![0, 1, 1, 0, 2]])
                .unwrap();
        let comp = space.complement_basis();
        let comp_m = Matrix::from_rows(f, &comp).unwrap();
        for s in (0..5usize).combinations(3) {
            let direct = is_k_core(&space, &s, 3).unwrap();
            let dual = comp_m.select_cols(&s).unwrap().rank() == s.len();
            assert_eq!(direct, dual, "S = {:?}", s);
        }
    }

    #[test]
    fn general_position_with_no_constraints_is_an_invertible_family() {
        let f = gf(65537);
        let space = Subspace::zero(f.clone(), 3);
        let fam = sample_general_position(&space, 3, 0).unwrap();
        let m = Matrix::from_cols(f, fam.points()).unwrap();
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn general_position_subject_to_one_dependency() {
        let f = gf(65537);
        let space = Subspace::new(f.clone(), 4, vec![vec![1, 1, 1, 0]]).unwrap();
        let fam = sample_general_position(&space, 2, 1).unwrap();
        let pts = fam.points();
        // The prescribed dependency holds exactly.
        for t in 0..2 {
            let sum = f.add(f.add(pts[0][t], pts[1][t]), pts[2][t]);
            assert_eq!(sum, 0);
        }
        // Every 2-core has independent points.
        for s in (0..4usize).combinations(2) {
            if is_k_core(&space, &s, 2).unwrap() {
                let cols: Vec<Vec<u64>> = s.iter().map(|&i| pts[i].clone()).collect();
                assert_eq!(Matrix::from_cols(f.clone(), &cols).unwrap().rank(), 2);
            }
        }
    }

    #[test]
    fn sampling_over_gf2_fails_deterministically_when_impossible() {
        // Four pairwise-independent nonzero columns cannot exist in F_2^2.
        let f = gf(2);
        let space = Subspace::zero(f, 4);
        assert!(matches!(
            sample_general_position(&space, 2, 0),
            Err(Error::SamplingFailed { .. })
        ));
    }

    #[test]
    fn optimal_general_shape() {
        let f = gf(65537);
        let (code, seed) = optimal_general(6, 3, 4, &f, 0).unwrap();
        assert_eq!((code.n(), code.k()), (10, 6));
        assert_eq!(code.min_distance().unwrap(), 4);
        assert!(code.is_systematic());
        // Deterministic for a fixed seed.
        let (again, seed2) = optimal_general(6, 3, 4, &f, 0).unwrap();
        assert_eq!(code.points(), again.points());
        assert_eq!(seed, seed2);
    }

    #[test]
    fn optimal_general_rejects_wide_distance() {
        let f = gf(65537);
        assert!(matches!(
            optimal_general(6, 3, 7, &f, 0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            optimal_general(6, 3, 2, &f, 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn uniform_locality_shape() {
        let f = gf(65537);
        let (code, _) = uniform_locality(8, 5, 3, 3, &f, 0).unwrap();
        assert_eq!((code.n(), code.k()), (8, 5));
        assert_eq!(code.min_distance().unwrap(), 3);
        let profile = code.locality_profile().unwrap();
        assert!(profile
            .coords
            .iter()
            .all(|c| c.locality == Locality::Finite(3)));
    }

    #[test]
    fn uniform_locality_rejects_bad_length() {
        let f = gf(65537);
        assert!(matches!(
            uniform_locality(9, 4, 3, 4, &f, 0),
            Err(Error::InvalidParameter(_))
        ));
    }
}
