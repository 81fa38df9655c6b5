//! Linear codes viewed as ordered sets of points in F_q^k.
//!
//! A code of dimension `k` and length `n` is stored as its `n` generator
//! columns `c_1, ..., c_n` (each a vector in F_q^k); encoding a message `x`
//! yields the word `(c_1 . x, ..., c_n . x)`. This column-centric view makes
//! the combinatorial analyses direct: minimum distance is a statement about
//! rank-deficient column subsets, and the locality of a coordinate is the
//! size of the smallest other-column subset whose span contains it.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// Enumeration budget for a whole-code locality profile (number of subset
/// span checks across all coordinates).
const LOCALITY_PROFILE_BUDGET: u64 = 10_000_000;
/// Enumeration budget for recovery-hypergraph construction: C(n, r+1).
const HYPERGRAPH_BUDGET: u64 = 1_000_000;
/// Subset-rank distance search requires n at most this.
const SUBSET_RANK_MAX_N: usize = 24;
/// Weight-enumeration distance search requires q^k at most this.
const WEIGHT_ENUM_BUDGET: u64 = 1 << 24;

/// A per-coordinate locality value; `Infinite` means the coordinate is not
/// recoverable from the remaining coordinates at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Locality {
    Finite(usize),
    Infinite,
}

impl Locality {
    pub fn is_finite(&self) -> bool {
        matches!(self, Locality::Finite(_))
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            Locality::Finite(v) => Some(*v),
            Locality::Infinite => None,
        }
    }
}

impl std::fmt::Display for Locality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Locality::Finite(v) => write!(f, "{}", v),
            Locality::Infinite => write!(f, "inf"),
        }
    }
}

/// A certified recovery rule: `c_target = sum coefficients[..] * c_indices[..]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoverySet {
    pub indices: Vec<usize>,
    pub coefficients: Vec<u64>,
}

/// Locality of one coordinate plus its witness (absent iff infinite).
#[derive(Clone, Debug)]
pub struct CoordinateLocality {
    pub locality: Locality,
    pub recovery: Option<RecoverySet>,
}

/// Whole-code locality summary.
#[derive(Clone, Debug)]
pub struct LocalityProfile {
    /// Per-coordinate localities, index-aligned with the code.
    pub coords: Vec<CoordinateLocality>,
    /// Maximum over all coordinates.
    pub code_locality: Locality,
    /// Smallest r such that the coordinates of locality <= r span F_q^k.
    pub information_locality: Locality,
}

impl LocalityProfile {
    /// Convenience: the per-coordinate locality values.
    pub fn values(&self) -> Vec<Locality> {
        self.coords.iter().map(|c| c.locality).collect()
    }
}

/// A minimal dependent column set of size at most r+1, together with the
/// coefficients of its (unique up to scale) full-support dependency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    pub vertices: Vec<usize>,
    pub coefficients: Vec<u64>,
}

/// All minimal dependent column sets of size at most r+1. Any coordinate in
/// an edge can be recovered from the at most r other coordinates of that
/// edge, so edges are exactly the local repair groups at locality r.
#[derive(Clone, Debug)]
pub struct RecoveryHypergraph {
    pub r: usize,
    pub n: usize,
    pub edges: Vec<Hyperedge>,
}

impl RecoveryHypergraph {
    /// Vertices contained in no edge.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        let mut touched = vec![false; self.n];
        for e in &self.edges {
            for &v in &e.vertices {
                touched[v] = true;
            }
        }
        (0..self.n).filter(|&v| !touched[v]).collect()
    }
}

/// Which minimum-distance algorithm to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMethod {
    /// Find the smallest erased-column set whose complement loses rank.
    SubsetRank,
    /// Enumerate nonzero codewords (one per projective message class).
    WeightEnumeration,
}

/// Result of an erasure-decoding attempt. `Undecodable` is an answer, not
/// an error: the erasure pattern exceeds what the code can correct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded(Vec<u64>),
    Undecodable,
}

/// A linear [n, k] code over a finite field, stored as generator columns.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCode {
    field: Field,
    k: usize,
    n: usize,
    /// Generator columns; `points[i]` has length k.
    points: Vec<Vec<u64>>,
    /// If set: indices of the columns equal to e_1, ..., e_k, in order.
    systematic_info: Option<Vec<usize>>,
}

impl LinearCode {
    /// Builds a code from generator columns; the columns must span F_q^k.
    pub fn new(field: Field, points: Vec<Vec<u64>>) -> Result<LinearCode> {
        Self::build(field, points, None)
    }

    /// Builds a code and records which columns carry the message symbols.
    pub fn new_systematic(
        field: Field,
        points: Vec<Vec<u64>>,
        info: Vec<usize>,
    ) -> Result<LinearCode> {
        Self::build(field, points, Some(info))
    }

    fn build(field: Field, points: Vec<Vec<u64>>, info: Option<Vec<usize>>) -> Result<LinearCode> {
        let n = points.len();
        if n == 0 {
            return Err(Error::InvalidParameter("a code needs at least one coordinate".into()));
        }
        let k = points[0].len();
        if k == 0 {
            return Err(Error::InvalidParameter("a code needs dimension at least one".into()));
        }
        if points.iter().any(|p| p.len() != k) {
            return Err(Error::DimensionMismatch("generator columns of unequal length".into()));
        }
        let q = field.order();
        for p in &points {
            if let Some(&v) = p.iter().find(|&&v| v >= q) {
                return Err(Error::ValueOutOfRange(v, q));
            }
        }
        let code = LinearCode { field, k, n, points, systematic_info: None };
        if code.generator_matrix().rank() != k {
            return Err(Error::InvalidParameter(
                "generator columns do not span the message space".into(),
            ));
        }
        let code = match info {
            None => code,
            Some(info) => {
                if info.len() != k {
                    return Err(Error::InvalidParameter(
                        "systematic index list must have length k".into(),
                    ));
                }
                for (j, &idx) in info.iter().enumerate() {
                    if idx >= n {
                        return Err(Error::IndexOutOfRange(idx, n));
                    }
                    let unit: Vec<u64> =
                        (0..k).map(|t| if t == j { 1 } else { 0 }).collect();
                    if code.points[idx] != unit {
                        return Err(Error::InvalidParameter(format!(
                            "column {} is not the {}-th unit vector",
                            idx, j
                        )));
                    }
                }
                LinearCode { systematic_info: Some(info), ..code }
            }
        };
        Ok(code)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<u64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[u64] {
        &self.points[i]
    }

    pub fn systematic_info(&self) -> Option<&[usize]> {
        self.systematic_info.as_deref()
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic_info.is_some()
    }

    /// The k x n generator matrix whose columns are the code points.
    pub fn generator_matrix(&self) -> Matrix {
        Matrix::from_cols(self.field.clone(), &self.points).expect("validated at construction")
    }

    /// Encodes a message of length k.
    pub fn encode(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message length {} against dimension {}",
                x.len(),
                self.k
            )));
        }
        let q = self.field.order();
        if let Some(&v) = x.iter().find(|&&v| v >= q) {
            return Err(Error::ValueOutOfRange(v, q));
        }
        Ok(self.points.iter().map(|c| self.dot(c, x)).collect())
    }

    fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        let f = &self.field;
        a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
    }

    /// Matrix whose columns are the selected points.
    fn columns(&self, idx: &[usize]) -> Matrix {
        let cols: Vec<Vec<u64>> = idx.iter().map(|&i| self.points[i].clone()).collect();
        if cols.is_empty() {
            return Matrix::zeros(self.field.clone(), self.k, 0);
        }
        Matrix::from_cols(self.field.clone(), &cols).expect("validated at construction")
    }

    /// Rank of the selected columns.
    pub fn rank_of(&self, idx: &[usize]) -> usize {
        self.columns(idx).rank()
    }

    /// Whether point `target` lies in the span of the selected columns.
    fn span_contains(&self, idx: &[usize], target: usize) -> bool {
        let m = self.columns(idx);
        let with = m
            .augment_col(&self.points[target])
            .expect("point length equals row count");
        // The target adds rank exactly when it is outside the span.
        with.rank() == m.rank()
    }

    /// Minimum distance; picks whichever feasible method looks cheaper.
    pub fn min_distance(&self) -> Result<usize> {
        let subset_ok = self.n <= SUBSET_RANK_MAX_N;
        let weight_cost = checked_q_pow(self.field.order(), self.k);
        let weight_ok = weight_cost.is_some_and(|c| c <= WEIGHT_ENUM_BUDGET);
        match (subset_ok, weight_ok) {
            (false, false) => Err(Error::BudgetExceeded(format!(
                "minimum distance needs n <= {} or q^k <= {}",
                SUBSET_RANK_MAX_N, WEIGHT_ENUM_BUDGET
            ))),
            (true, false) => self.min_distance_by(DistanceMethod::SubsetRank),
            (false, true) => self.min_distance_by(DistanceMethod::WeightEnumeration),
            (true, true) => {
                // Rough cost race: 2^n subset checks vs q^k codeword weights.
                let subset_cost = 1u64 << self.n.min(63);
                if weight_cost.unwrap() <= subset_cost {
                    self.min_distance_by(DistanceMethod::WeightEnumeration)
                } else {
                    self.min_distance_by(DistanceMethod::SubsetRank)
                }
            }
        }
    }

    /// Minimum distance via the chosen method.
    pub fn min_distance_by(&self, method: DistanceMethod) -> Result<usize> {
        match method {
            DistanceMethod::SubsetRank => self.min_distance_subset_rank(),
            DistanceMethod::WeightEnumeration => self.min_distance_weight_enum(),
        }
    }

    /// d = n - max{|S| : rank(S) <= k-1}, located by erasing t columns for
    /// t = 1, 2, ... until the surviving columns lose full rank.
    fn min_distance_subset_rank(&self) -> Result<usize> {
        if self.n > SUBSET_RANK_MAX_N {
            return Err(Error::BudgetExceeded(format!(
                "subset-rank distance needs n <= {}",
                SUBSET_RANK_MAX_N
            )));
        }
        let all: Vec<usize> = (0..self.n).collect();
        for t in 1..=self.n - self.k + 1 {
            for erased in all.iter().copied().combinations(t) {
                let mut keep = Vec::with_capacity(self.n - t);
                let mut e = erased.iter().copied().peekable();
                for i in 0..self.n {
                    if e.peek() == Some(&i) {
                        e.next();
                    } else {
                        keep.push(i);
                    }
                }
                if self.rank_of(&keep) < self.k {
                    return Ok(t);
                }
            }
        }
        unreachable!("erasing n-k+1 columns always leaves fewer than k columns")
    }

    /// Minimum weight over nonzero codewords, one message per projective
    /// class (first nonzero message coordinate fixed to 1).
    fn min_distance_weight_enum(&self) -> Result<usize> {
        let q = self.field.order();
        let total = checked_q_pow(q, self.k)
            .filter(|&c| c <= WEIGHT_ENUM_BUDGET)
            .ok_or_else(|| {
                Error::BudgetExceeded(format!(
                    "weight enumeration needs q^k <= {}",
                    WEIGHT_ENUM_BUDGET
                ))
            })?;
        let _ = total;
        let mut best = self.n;
        let mut x = vec![0u64; self.k];
        for lead in 0..self.k {
            for v in x.iter_mut() {
                *v = 0;
            }
            x[lead] = 1;
            let suffix = self.k - lead - 1;
            let combos = checked_q_pow(q, suffix).expect("bounded by q^k");
            for ctr in 0..combos {
                let mut c = ctr;
                for t in 0..suffix {
                    x[lead + 1 + t] = c % q;
                    c /= q;
                }
                let w = self
                    .points
                    .iter()
                    .filter(|p| self.dot(p, &x) != 0)
                    .count();
                if w < best {
                    best = w;
                    if best == 1 {
                        return Ok(1);
                    }
                }
            }
        }
        Ok(best)
    }

    /// Locality of coordinate `i`: size of the smallest set R of other
    /// coordinates with `c_i` in span(R), plus the recovery certificate.
    /// Ties are broken toward the lexicographically smallest index set.
    pub fn locality(&self, i: usize) -> Result<CoordinateLocality> {
        let mut budget = u64::MAX;
        self.locality_budgeted(i, &mut budget)
    }

    fn locality_budgeted(&self, i: usize, budget: &mut u64) -> Result<CoordinateLocality> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange(i, self.n));
        }
        let others: Vec<usize> = (0..self.n).filter(|&j| j != i).collect();
        if !self.span_contains(&others, i) {
            return Ok(CoordinateLocality { locality: Locality::Infinite, recovery: None });
        }
        for s in 1..=others.len() {
            for combo in others.iter().copied().combinations(s) {
                if *budget == 0 {
                    return Err(Error::BudgetExceeded(
                        "locality profile exceeded its subset-check budget".into(),
                    ));
                }
                *budget -= 1;
                if self.span_contains(&combo, i) {
                    let coeffs = self
                        .columns(&combo)
                        .solve(&self.points[i])
                        .expect("dimensions agree")
                        .expect("target verified in span");
                    return Ok(CoordinateLocality {
                        locality: Locality::Finite(s),
                        recovery: Some(RecoverySet { indices: combo, coefficients: coeffs }),
                    });
                }
            }
        }
        unreachable!("the full complement contains the point")
    }

    /// Localities of every coordinate plus summary values, under a global
    /// enumeration budget.
    pub fn locality_profile(&self) -> Result<LocalityProfile> {
        let mut budget = LOCALITY_PROFILE_BUDGET;
        let mut coords = Vec::with_capacity(self.n);
        for i in 0..self.n {
            coords.push(self.locality_budgeted(i, &mut budget)?);
        }
        let code_locality =
            coords.iter().map(|c| c.locality).max().unwrap_or(Locality::Infinite);
        let information_locality = self.information_locality(&coords);
        Ok(LocalityProfile { coords, code_locality, information_locality })
    }

    /// Smallest r such that the coordinates of locality <= r span F_q^k.
    fn information_locality(&self, coords: &[CoordinateLocality]) -> Locality {
        let mut thresholds: Vec<usize> =
            coords.iter().filter_map(|c| c.locality.finite()).collect();
        thresholds.sort_unstable();
        thresholds.dedup();
        for r in thresholds {
            let sel: Vec<usize> = (0..self.n)
                .filter(|&i| matches!(coords[i].locality, Locality::Finite(v) if v <= r))
                .collect();
            if self.rank_of(&sel) == self.k {
                return Locality::Finite(r);
            }
        }
        Locality::Infinite
    }

    /// All minimal dependent column sets of size at most r+1. A set S is an
    /// edge iff its columns carry a dependency with full support on S and no
    /// proper subset of S carries one (equivalently: the column kernel of S
    /// is one-dimensional with a nowhere-zero basis vector).
    pub fn recovery_hypergraph(&self, r: usize) -> Result<RecoveryHypergraph> {
        if r == 0 {
            return Err(Error::InvalidParameter("locality parameter must be >= 1".into()));
        }
        let max_size = (r + 1).min(self.n);
        if binomial(self.n, max_size) > HYPERGRAPH_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "hypergraph enumeration needs C(n, r+1) <= {}",
                HYPERGRAPH_BUDGET
            )));
        }
        let mut edges = Vec::new();
        for s in 1..=max_size {
            for combo in (0..self.n).combinations(s) {
                let kernel = self.columns(&combo).kernel_basis();
                if kernel.len() != 1 {
                    continue;
                }
                if kernel[0].iter().all(|&v| v != 0) {
                    edges.push(Hyperedge { vertices: combo, coefficients: kernel[0].clone() });
                }
            }
        }
        Ok(RecoveryHypergraph { r, n: self.n, edges })
    }

    /// Basis of the dual code (all length-n vectors v with sum v_i c_i = 0).
    pub fn dual_basis(&self) -> Vec<Vec<u64>> {
        self.generator_matrix().kernel_basis()
    }

    /// Generic erasure decoder: reconstructs the word when every erased
    /// column lies in the span of the surviving columns; reports
    /// `Undecodable` otherwise. A word inconsistent with every codeword on
    /// its surviving coordinates is an integrity error.
    pub fn decode_erasures(&self, word: &[Option<u64>]) -> Result<DecodeOutcome> {
        if word.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "word length {} against code length {}",
                word.len(),
                self.n
            )));
        }
        let q = self.field.order();
        let mut known = Vec::new();
        let mut values = Vec::new();
        for (i, w) in word.iter().enumerate() {
            if let Some(v) = *w {
                if v >= q {
                    return Err(Error::ValueOutOfRange(v, q));
                }
                known.push(i);
                values.push(v);
            }
        }
        let rows: Vec<Vec<u64>> = known.iter().map(|&i| self.points[i].clone()).collect();
        let data: Vec<u64> = rows.iter().flatten().copied().collect();
        let m = Matrix::new(self.field.clone(), known.len(), self.k, data)?;
        let Some(x) = m.solve(&values)? else {
            return Err(Error::Integrity(
                "surviving coordinates do not match any codeword".into(),
            ));
        };
        for i in 0..self.n {
            if word[i].is_none() && !self.span_contains(&known, i) {
                return Ok(DecodeOutcome::Undecodable);
            }
        }
        let full = self.encode(&x)?;
        let out: Vec<u64> =
            (0..self.n).map(|i| word[i].unwrap_or(full[i])).collect();
        Ok(DecodeOutcome::Decoded(out))
    }
}

/// C(n, k) saturating at u64::MAX.
pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u64) {
            Some(v) => v / (i as u64 + 1),
            None => return u64::MAX,
        };
    }
    acc
}

pub(crate) fn checked_q_pow(q: u64, k: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(q)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    fn identity_code(q: u64, k: usize) -> LinearCode {
        let pts: Vec<Vec<u64>> =
            (0..k).map(|j| (0..k).map(|t| (t == j) as u64).collect()).collect();
        LinearCode::new(gf(q), pts).unwrap()
    }

    fn repetition_code(q: u64, n: usize) -> LinearCode {
        LinearCode::new(gf(q), vec![vec![1]; n]).unwrap()
    }

    /// [4,3] single-parity code over GF(q): columns e1, e2, e3, (1,1,1).
    fn single_parity(q: u64) -> LinearCode {
        let pts = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
        ];
        LinearCode::new(gf(q), pts).unwrap()
    }

    /// Systematic [7,4] Hamming code over GF(2).
    fn hamming() -> LinearCode {
        let pts = vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, 1, 1, 1],
            vec![1, 0, 1, 1],
            vec![1, 1, 0, 1],
        ];
        LinearCode::new(gf(2), pts).unwrap()
    }

    #[test]
    fn encode_examples() {
        let id = identity_code(2, 3);
        assert_eq!(id.encode(&[1, 0, 1]).unwrap(), vec![1, 0, 1]);

        let rep = repetition_code(3, 3);
        assert_eq!(rep.encode(&[2]).unwrap(), vec![2, 2, 2]);

        let sp = single_parity(5);
        assert_eq!(sp.encode(&[1, 2, 3]).unwrap(), vec![1, 2, 3, 1]);
        assert!(sp.encode(&[1, 2]).is_err());
    }

    #[test]
    fn rank_deficient_points_are_rejected() {
        let f = gf(2);
        assert!(LinearCode::new(f, vec![vec![1, 0], vec![1, 0]]).is_err());
    }

    #[test]
    fn systematic_info_is_validated() {
        let pts = vec![vec![1, 0], vec![1, 1], vec![0, 1]];
        let f = gf(2);
        assert!(LinearCode::new_systematic(f.clone(), pts.clone(), vec![0, 2]).is_ok());
        assert!(LinearCode::new_systematic(f, pts, vec![0, 1]).is_err());
    }

    #[test]
    fn repetition_distance() {
        assert_eq!(repetition_code(2, 3).min_distance().unwrap(), 3);
    }

    /// Independent oracle: enumerate all 16 Hamming codewords by hand.
    #[test]
    fn hamming_distance_is_three_by_direct_enumeration() {
        let code = hamming();
        let mut oracle_min = usize::MAX;
        for msg in 1u64..16 {
            let x: Vec<u64> = (0..4).map(|b| (msg >> b) & 1).collect();
            let w = code
                .points()
                .iter()
                .filter(|p| p.iter().zip(&x).fold(0, |a, (&c, &m)| a ^ (c & m)) == 1)
                .count();
            oracle_min = oracle_min.min(w);
        }
        assert_eq!(oracle_min, 3);
        assert_eq!(code.min_distance_by(DistanceMethod::SubsetRank).unwrap(), 3);
        assert_eq!(
            code.min_distance_by(DistanceMethod::WeightEnumeration).unwrap(),
            3
        );
    }

    #[test]
    fn identity_code_has_distance_one() {
        assert_eq!(identity_code(5, 4).min_distance().unwrap(), 1);
    }

    #[test]
    fn locality_examples() {
        let rep = repetition_code(2, 3);
        let l = rep.locality(0).unwrap();
        assert_eq!(l.locality, Locality::Finite(1));
        assert_eq!(l.recovery.unwrap().indices, vec![1]);

        let sp = single_parity(5);
        let l = sp.locality(3).unwrap();
        assert_eq!(l.locality, Locality::Finite(3));

        let id = identity_code(2, 3);
        assert_eq!(id.locality(1).unwrap().locality, Locality::Infinite);
    }

    #[test]
    fn locality_certificates_reproduce_the_point() {
        let code = hamming();
        let f = code.field().clone();
        for i in 0..code.n() {
            let l = code.locality(i).unwrap();
            let rs = l.recovery.unwrap();
            let mut acc = vec![0u64; code.k()];
            for (&j, &c) in rs.indices.iter().zip(&rs.coefficients) {
                for t in 0..code.k() {
                    acc[t] = f.add(acc[t], f.mul(c, code.point(j)[t]));
                }
            }
            assert_eq!(acc.as_slice(), code.point(i));
            // Minimality: coefficients of a minimal recovery set are nonzero.
            assert!(rs.coefficients.iter().all(|&c| c != 0));
        }
    }

    #[test]
    fn locality_profile_of_identity_is_all_infinite() {
        let profile = identity_code(3, 3).locality_profile().unwrap();
        assert!(profile.coords.iter().all(|c| c.locality == Locality::Infinite));
        assert_eq!(profile.information_locality, Locality::Infinite);
        assert_eq!(profile.code_locality, Locality::Infinite);
    }

    #[test]
    fn single_parity_profile() {
        let profile = single_parity(5).locality_profile().unwrap();
        assert!(profile.coords.iter().all(|c| c.locality == Locality::Finite(3)));
        assert_eq!(profile.information_locality, Locality::Finite(3));
    }

    #[test]
    fn repetition_hypergraph_has_all_pairs() {
        let rep = repetition_code(2, 3);
        let h = rep.recovery_hypergraph(1).unwrap();
        let vertex_sets: Vec<Vec<usize>> =
            h.edges.iter().map(|e| e.vertices.clone()).collect();
        assert_eq!(vertex_sets, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(h.isolated_vertices().is_empty());
    }

    #[test]
    fn identity_hypergraph_is_empty() {
        let id = identity_code(2, 3);
        let h = id.recovery_hypergraph(2).unwrap();
        assert!(h.edges.is_empty());
        assert_eq!(h.isolated_vertices(), vec![0, 1, 2]);
    }

    #[test]
    fn hyperedges_are_minimal_full_support_dependencies() {
        let code = hamming();
        let f = code.field().clone();
        let h = code.recovery_hypergraph(3).unwrap();
        assert!(!h.edges.is_empty());
        for e in &h.edges {
            // Dependency holds with every coefficient nonzero.
            assert!(e.coefficients.iter().all(|&c| c != 0));
            let mut acc = vec![0u64; code.k()];
            for (&v, &c) in e.vertices.iter().zip(&e.coefficients) {
                for t in 0..code.k() {
                    acc[t] = f.add(acc[t], f.mul(c, code.point(v)[t]));
                }
            }
            assert!(acc.iter().all(|&x| x == 0));
            // Minimality: every proper subset is independent.
            for drop in 0..e.vertices.len() {
                let sub: Vec<usize> = e
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != drop)
                    .map(|(_, &v)| v)
                    .collect();
                assert_eq!(code.rank_of(&sub), sub.len());
            }
        }
    }

    #[test]
    fn dual_basis_examples() {
        assert!(identity_code(2, 3).dual_basis().is_empty());

        let rep = repetition_code(2, 3);
        let dual = rep.dual_basis();
        assert_eq!(dual.len(), 2);
        for v in &dual {
            assert_eq!(v.iter().filter(|&&x| x != 0).count() % 2, 0);
        }

        let sp = single_parity(5);
        let dual = sp.dual_basis();
        assert_eq!(dual, vec![vec![4, 4, 4, 1]]); // (1,1,1,-1) scaled by -1
    }

    #[test]
    fn generic_erasure_decoding() {
        let code = hamming();
        let msg = vec![1, 0, 1, 1];
        let word = code.encode(&msg).unwrap();

        // Two erasures are within reach of d = 3.
        let mut erased: Vec<Option<u64>> = word.iter().map(|&v| Some(v)).collect();
        erased[0] = None;
        erased[5] = None;
        let out = code.decode_erasures(&erased).unwrap();
        assert_eq!(out, DecodeOutcome::Decoded(word.clone()));

        // Erasing an unrecoverable set reports Undecodable.
        let id = identity_code(2, 3);
        let mut w: Vec<Option<u64>> = vec![Some(1), Some(0), Some(1)];
        w[1] = None;
        assert_eq!(id.decode_erasures(&w).unwrap(), DecodeOutcome::Undecodable);

        // A corrupted surviving coordinate is an integrity failure.
        let mut bad: Vec<Option<u64>> = word.iter().map(|&v| Some(v)).collect();
        bad[6] = Some(1 ^ word[6]);
        assert!(matches!(code.decode_erasures(&bad), Err(Error::Integrity(_))));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(8, 3), 56);
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(24, 12), 2_704_156);
    }
}
