//! Generalized pyramid codes: systematic codes whose parity supports are
//! prescribed by a bipartite graph and whose parity points sit in general
//! position with respect to it.
//!
//! For such codes, erasure correctability is purely combinatorial: a
//! pattern is decodable exactly when the erased message positions match
//! into the surviving parities (Hall's condition), and each parity's
//! repair locality equals its degree. The module also makes the span of
//! the parity points executable: which coordinate sets can be eliminated
//! by nonzero combinations, the resulting bound |I| <= |J| - 1, the
//! union-closure of supports over fields with q >= n, and a two-way
//! enumeration of all attainable supports.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::code::{binomial, checked_q_pow, DecodeOutcome, LinearCode, Locality};
use crate::construct::SAMPLE_RETRY_LIMIT;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// Cap on (I, J) pairs examined by the general-position minor sweep.
const MINOR_PAIR_BUDGET: u64 = 1_000_000;
/// Cap on span sizes q^dim enumerated exhaustively.
const SPAN_BUDGET: u64 = 1_000_000;
/// Elimination solves are limited to this many parities.
const ELIMINATION_J_LIMIT: usize = 12;
/// Kernel cosets larger than [`SPAN_BUDGET`] are probed with this many
/// seeded random points instead of enumerated.
const ELIMINATION_RANDOM_TRIES: usize = 64;
/// Cap on (J, I) pairs examined by the elimination-bound sweep.
const ELIMINATION_PAIR_BUDGET: u64 = 1_000_000;

// ---------------------------------------------------------------------------
// support graphs and matchings
// ---------------------------------------------------------------------------

/// Bipartite graph from k message positions to h parity checks; the
/// neighborhood of a parity is its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportGraph {
    k: usize,
    /// neighborhoods[j] = sorted message positions read by parity j.
    neighborhoods: Vec<Vec<usize>>,
    /// parities[i] = sorted parities reading message position i.
    parities: Vec<Vec<usize>>,
}

impl SupportGraph {
    /// Builds the graph from one neighborhood per parity. Neighborhoods
    /// must be nonempty subsets of [0, k); they are stored sorted.
    pub fn new(k: usize, neighborhoods: Vec<Vec<usize>>) -> Result<SupportGraph> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "support graph needs at least one message position".into(),
            ));
        }
        let mut parities = vec![Vec::new(); k];
        let mut cleaned = Vec::with_capacity(neighborhoods.len());
        for (j, raw) in neighborhoods.into_iter().enumerate() {
            if raw.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "parity {} has an empty support",
                    j
                )));
            }
            let mut nb = raw;
            nb.sort_unstable();
            for w in nb.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::InvalidParameter(format!(
                        "parity {} repeats position {}",
                        j, w[0]
                    )));
                }
            }
            for &i in &nb {
                if i >= k {
                    return Err(Error::IndexOutOfRange(i, k));
                }
                parities[i].push(j);
            }
            cleaned.push(nb);
        }
        Ok(SupportGraph { k, neighborhoods: cleaned, parities })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> usize {
        self.neighborhoods.len()
    }

    /// Support of parity j.
    pub fn neighborhood(&self, j: usize) -> &[usize] {
        &self.neighborhoods[j]
    }

    pub fn degree(&self, j: usize) -> usize {
        self.neighborhoods[j].len()
    }

    /// Parities within `within` adjacent to at least one position of `of`.
    pub fn parity_neighbors(&self, of: &[usize], within: &[usize]) -> Vec<usize> {
        let mut touched = vec![false; self.h()];
        for &i in of {
            for &j in &self.parities[i] {
                touched[j] = true;
            }
        }
        within.iter().copied().filter(|&j| touched[j]).sorted().dedup().collect()
    }
}

/// Maximum bipartite matching between the restricted vertex sets, by
/// augmenting paths. Deterministic: left vertices are processed in the
/// given order, neighborhoods in ascending order. Returns (left, right)
/// pairs sorted by left vertex.
pub fn max_matching(
    graph: &SupportGraph,
    left: &[usize],
    right: &[usize],
) -> Vec<(usize, usize)> {
    let mut allowed = vec![false; graph.h()];
    for &j in right {
        assert!(j < graph.h(), "right vertex {} out of range", j);
        allowed[j] = true;
    }
    let mut match_right: Vec<Option<usize>> = vec![None; graph.h()];
    for &i in left {
        assert!(i < graph.k(), "left vertex {} out of range", i);
        let mut seen = vec![false; graph.h()];
        augment(graph, i, &allowed, &mut seen, &mut match_right);
    }
    let mut pairs: Vec<(usize, usize)> = match_right
        .iter()
        .enumerate()
        .filter_map(|(j, m)| m.map(|i| (i, j)))
        .collect();
    pairs.sort_unstable();
    pairs
}

fn augment(
    graph: &SupportGraph,
    i: usize,
    allowed: &[bool],
    seen: &mut [bool],
    match_right: &mut [Option<usize>],
) -> bool {
    for &j in &graph.parities[i] {
        if !allowed[j] || seen[j] {
            continue;
        }
        seen[j] = true;
        if match_right[j].is_none()
            || augment(graph, match_right[j].unwrap(), allowed, seen, match_right)
        {
            match_right[j] = Some(i);
            return true;
        }
    }
    false
}

/// An erasure pattern split into its message and parity parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErasurePattern {
    pub info: Vec<usize>,
    pub parity: Vec<usize>,
}

impl ErasurePattern {
    pub fn new(k: usize, h: usize, info: Vec<usize>, parity: Vec<usize>) -> Result<Self> {
        let info = normalize_indices(info, k)?;
        let parity = normalize_indices(parity, h)?;
        Ok(ErasurePattern { info, parity })
    }

    /// Reads the erased positions out of a word of length k + h.
    pub fn from_word(k: usize, word: &[Option<u64>]) -> Self {
        let info = (0..k.min(word.len())).filter(|&i| word[i].is_none()).collect();
        let parity =
            (k..word.len()).filter(|&i| word[i].is_none()).map(|i| i - k).collect();
        ErasurePattern { info, parity }
    }
}

fn normalize_indices(mut v: Vec<usize>, bound: usize) -> Result<Vec<usize>> {
    v.sort_unstable();
    for w in v.windows(2) {
        if w[0] == w[1] {
            return Err(Error::InvalidParameter(format!("duplicate index {}", w[0])));
        }
    }
    if let Some(&worst) = v.last() {
        if worst >= bound {
            return Err(Error::IndexOutOfRange(worst, bound));
        }
    }
    Ok(v)
}

/// Hall's condition for the pattern: the erased message positions admit a
/// matching into the unerased parities.
pub fn hall_condition(graph: &SupportGraph, pattern: &ErasurePattern) -> bool {
    let erased: Vec<bool> = {
        let mut e = vec![false; graph.h()];
        for &j in &pattern.parity {
            e[j] = true;
        }
        e
    };
    let surviving: Vec<usize> = (0..graph.h()).filter(|&j| !erased[j]).collect();
    max_matching(graph, &pattern.info, &surviving).len() == pattern.info.len()
}

/// The strict Hall condition of elimination theory: every nonempty subset
/// of `positions` has strictly more J-neighbors than elements.
pub fn strict_hall_condition(
    graph: &SupportGraph,
    positions: &[usize],
    parities: &[usize],
) -> bool {
    for size in 1..=positions.len() {
        for subset in positions.iter().copied().combinations(size) {
            if graph.parity_neighbors(&subset, parities).len() <= size {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// the codes themselves
// ---------------------------------------------------------------------------

/// A systematic code on k + h coordinates whose h parity points have
/// supports exactly matching a [`SupportGraph`].
#[derive(Clone, Debug)]
pub struct GpcCode {
    graph: SupportGraph,
    field: Field,
    points: Vec<Vec<u64>>,
    /// Cached verdict of the minor sweep; `None` until verified.
    general_position: Option<bool>,
}

impl GpcCode {
    /// Wraps parity points, insisting that each is nonzero exactly on its
    /// declared neighborhood.
    pub fn new(graph: SupportGraph, field: Field, points: Vec<Vec<u64>>) -> Result<Self> {
        if points.len() != graph.h() {
            return Err(Error::DimensionMismatch(format!(
                "{} parity points against {} graph parities",
                points.len(),
                graph.h()
            )));
        }
        let q = field.order();
        for (j, p) in points.iter().enumerate() {
            if p.len() != graph.k() {
                return Err(Error::DimensionMismatch(format!(
                    "parity point {} has length {}, expected {}",
                    j,
                    p.len(),
                    graph.k()
                )));
            }
            if let Some(&v) = p.iter().find(|&&v| v >= q) {
                return Err(Error::ValueOutOfRange(v, q));
            }
            let mut inside = vec![false; graph.k()];
            for &i in graph.neighborhood(j) {
                inside[i] = true;
            }
            for (i, &v) in p.iter().enumerate() {
                if inside[i] && v == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "parity point {} is zero at position {} inside its support",
                        j, i
                    )));
                }
                if !inside[i] && v != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "parity point {} is nonzero at position {} outside its support",
                        j, i
                    )));
                }
            }
        }
        Ok(GpcCode { graph, field, points, general_position: None })
    }

    /// Rebuilds the graph and parity points from a code whose first k
    /// columns are the units in order.
    pub fn from_systematic_code(code: &LinearCode) -> Result<GpcCode> {
        let k = code.k();
        for j in 0..k {
            let unit: Vec<u64> = (0..k).map(|t| (t == j) as u64).collect();
            if code.point(j) != unit.as_slice() {
                return Err(Error::InvalidParameter(
                    "code does not carry the units as its first k columns".into(),
                ));
            }
        }
        let mut neighborhoods = Vec::new();
        let mut points = Vec::new();
        for i in k..code.n() {
            let p = code.point(i).to_vec();
            let support: Vec<usize> =
                p.iter().enumerate().filter(|(_, &v)| v != 0).map(|(t, _)| t).collect();
            neighborhoods.push(support);
            points.push(p);
        }
        let graph = SupportGraph::new(k, neighborhoods)?;
        GpcCode::new(graph, code.field().clone(), points)
    }

    pub fn graph(&self) -> &SupportGraph {
        &self.graph
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn parity_points(&self) -> &[Vec<u64>] {
        &self.points
    }

    pub fn k(&self) -> usize {
        self.graph.k()
    }

    pub fn h(&self) -> usize {
        self.graph.h()
    }

    pub fn n(&self) -> usize {
        self.k() + self.h()
    }

    /// The cached general-position verdict, if verification has run.
    pub fn general_position_verified(&self) -> Option<bool> {
        self.general_position
    }

    /// Runs [`GpcCode::is_general_position`] and caches the verdict.
    pub fn verify_general_position(&mut self) -> Result<bool> {
        let verdict = self.is_general_position()?;
        self.general_position = Some(verdict);
        Ok(verdict)
    }

    /// Whether every equal-size pair (I, J) of message positions and
    /// parities that admits a perfect matching has an invertible minor
    /// C_{I,J}. Exhaustive over all pairs, within a budget.
    pub fn is_general_position(&self) -> Result<bool> {
        let k = self.k();
        let h = self.h();
        let mut pairs: u64 = 0;
        for s in 1..=k.min(h) {
            pairs = pairs.saturating_add(binomial(k, s).saturating_mul(binomial(h, s)));
        }
        if pairs > MINOR_PAIR_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "general-position sweep needs {} minor pairs, cap is {}",
                pairs, MINOR_PAIR_BUDGET
            )));
        }
        for s in 1..=k.min(h) {
            for i_set in (0..k).combinations(s) {
                for j_set in (0..h).combinations(s) {
                    if max_matching(&self.graph, &i_set, &j_set).len() != s {
                        continue;
                    }
                    if self.minor(&i_set, &j_set).rank() != s {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// C_{I,J}: rows = message positions, columns = parity points.
    fn minor(&self, i_set: &[usize], j_set: &[usize]) -> Matrix {
        let data: Vec<u64> = i_set
            .iter()
            .flat_map(|&i| j_set.iter().map(move |&j| self.points[j][i]))
            .collect();
        Matrix::new(self.field.clone(), i_set.len(), j_set.len(), data)
            .expect("indices validated")
    }

    /// The full code: units first, then the parity points.
    pub fn to_linear_code(&self) -> LinearCode {
        let k = self.k();
        let mut points: Vec<Vec<u64>> = (0..k)
            .map(|j| (0..k).map(|t| (t == j) as u64).collect())
            .collect();
        points.extend(self.points.iter().cloned());
        LinearCode::new_systematic(self.field.clone(), points, (0..k).collect())
            .expect("units make the layout systematic")
    }

    fn parity_value(&self, j: usize, message: &[u64]) -> u64 {
        let f = &self.field;
        self.graph
            .neighborhood(j)
            .iter()
            .fold(0, |acc, &i| f.add(acc, f.mul(self.points[j][i], message[i])))
    }

    /// Erasure decoder: expresses each surviving parity in terms of the
    /// erased message symbols and solves. Returns `Undecodable` when the
    /// system is underdetermined; inconsistent survivors are an integrity
    /// error. For a verified general-position code this succeeds exactly on
    /// the patterns satisfying Hall's condition.
    pub fn correct_erasures(&self, word: &[Option<u64>]) -> Result<DecodeOutcome> {
        let k = self.k();
        let h = self.h();
        let n = k + h;
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
        let f = &self.field;
        let erased: Vec<usize> = (0..k).filter(|&i| word[i].is_none()).collect();

        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut rhs: Vec<u64> = Vec::new();
        for j in 0..h {
            let Some(stored) = word[k + j] else { continue };
            let mut residual = stored;
            let mut row = vec![0u64; erased.len()];
            for &i in self.graph.neighborhood(j) {
                match word[i] {
                    Some(v) => residual = f.sub(residual, f.mul(self.points[j][i], v)),
                    None => {
                        let slot = erased.binary_search(&i).expect("erased is sorted");
                        row[slot] = self.points[j][i];
                    }
                }
            }
            rows.push(row);
            rhs.push(residual);
        }

        let mut message = vec![0u64; k];
        for i in 0..k {
            if let Some(v) = word[i] {
                message[i] = v;
            }
        }
        if erased.is_empty() {
            for (row, &want) in rows.iter().zip(&rhs) {
                debug_assert!(row.is_empty());
                if want != 0 {
                    return Err(Error::Integrity(
                        "surviving parities do not match the message symbols".into(),
                    ));
                }
            }
        } else {
            let data: Vec<u64> = rows.iter().flatten().copied().collect();
            let a = Matrix::new(f.clone(), rows.len(), erased.len(), data)?;
            let coeff_rank = a.rank();
            if a.augment_col(&rhs)?.rank() > coeff_rank {
                return Err(Error::Integrity(
                    "surviving coordinates are inconsistent with every codeword".into(),
                ));
            }
            if coeff_rank < erased.len() {
                return Ok(DecodeOutcome::Undecodable);
            }
            let solution = a.solve(&rhs)?.expect("consistency checked above");
            for (slot, &i) in erased.iter().enumerate() {
                message[i] = solution[slot];
            }
        }

        let mut full = Vec::with_capacity(n);
        full.extend_from_slice(&message);
        for j in 0..h {
            full.push(self.parity_value(j, &message));
        }
        for i in 0..n {
            if let Some(v) = word[i] {
                if v != full[i] {
                    return Err(Error::Integrity(format!(
                        "surviving coordinate {} does not match the decoded word",
                        i
                    )));
                }
            }
        }
        Ok(DecodeOutcome::Decoded(full))
    }

    /// Searches for nonzero coefficients on the parities `j_set` whose
    /// combination vanishes exactly on `i_set` (and nowhere else inside the
    /// union of their supports). The coefficient space is a kernel; it is
    /// enumerated outright when q^dim is small and probed with seeded
    /// random points otherwise. For a code verified to be in general
    /// position, patterns violating the strict Hall condition are refused
    /// without search.
    pub fn can_eliminate(
        &self,
        i_set: &[usize],
        j_set: &[usize],
    ) -> Result<Option<EliminationWitness>> {
        let positions = normalize_indices(i_set.to_vec(), self.k())?;
        let parities = normalize_indices(j_set.to_vec(), self.h())?;
        if parities.is_empty() {
            return Err(Error::InvalidParameter(
                "elimination needs at least one parity".into(),
            ));
        }
        if parities.len() > ELIMINATION_J_LIMIT {
            return Err(Error::BudgetExceeded(format!(
                "elimination solves are capped at {} parities",
                ELIMINATION_J_LIMIT
            )));
        }
        let mut in_union = vec![false; self.k()];
        for &j in &parities {
            for &i in self.graph.neighborhood(j) {
                in_union[i] = true;
            }
        }
        if let Some(&outside) = positions.iter().find(|&&i| !in_union[i]) {
            return Err(Error::InvalidParameter(format!(
                "position {} lies outside the union of the parity supports",
                outside
            )));
        }
        if self.general_position == Some(true)
            && !strict_hall_condition(&self.graph, &positions, &parities)
        {
            return Ok(None);
        }

        let target: Vec<usize> = (0..self.k())
            .filter(|&i| in_union[i] && positions.binary_search(&i).is_err())
            .collect();
        let f = &self.field;
        let q = f.order();
        // Kernel of the |I| x |J| system "combination vanishes on I".
        let data: Vec<u64> = positions
            .iter()
            .flat_map(|&i| parities.iter().map(move |&j| self.points[j][i]))
            .collect();
        let system = Matrix::new(f.clone(), positions.len(), parities.len(), data)?;
        let kernel = system.kernel_basis();
        if kernel.is_empty() {
            return Ok(None);
        }

        let combine = |coeffs: &[u64]| -> Vec<u64> {
            let mut mu = vec![0u64; parities.len()];
            for (c, basis_vec) in coeffs.iter().zip(&kernel) {
                if *c == 0 {
                    continue;
                }
                for (m, &b) in mu.iter_mut().zip(basis_vec) {
                    *m = f.add(*m, f.mul(*c, b));
                }
            }
            mu
        };
        let admissible = |mu: &[u64]| -> bool {
            if mu.contains(&0) {
                return false;
            }
            let mut v = vec![0u64; self.k()];
            for (&m, &j) in mu.iter().zip(&parities) {
                for &i in self.graph.neighborhood(j) {
                    v[i] = f.add(v[i], f.mul(m, self.points[j][i]));
                }
            }
            positions.iter().all(|&i| v[i] == 0)
                && target.iter().all(|&i| v[i] != 0)
        };

        if let Some(total) =
            checked_q_pow(q, kernel.len()).filter(|&t| t <= SPAN_BUDGET)
        {
            let mut coeffs = vec![0u64; kernel.len()];
            for _ in 1..total {
                for slot in coeffs.iter_mut() {
                    *slot += 1;
                    if *slot < q {
                        break;
                    }
                    *slot = 0;
                }
                let mu = combine(&coeffs);
                if admissible(&mu) {
                    return Ok(Some(EliminationWitness {
                        parities,
                        coefficients: mu,
                        eliminated: positions,
                    }));
                }
            }
        } else {
            let mut rng = ChaCha12Rng::seed_from_u64(0x0e11);
            for _ in 0..ELIMINATION_RANDOM_TRIES {
                let coeffs: Vec<u64> =
                    (0..kernel.len()).map(|_| rng.gen_range(0..q)).collect();
                let mu = combine(&coeffs);
                if admissible(&mu) {
                    return Ok(Some(EliminationWitness {
                        parities,
                        coefficients: mu,
                        eliminated: positions,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Exhaustively sweeps every parity subset up to `max_parities` and
    /// every candidate eliminated set inside its support union, recording
    /// each witnessed elimination and any violation of |I| <= |J| - 1.
    pub fn check_elimination_bound(
        &self,
        max_parities: usize,
    ) -> Result<EliminationBoundReport> {
        let mut examined: u64 = 0;
        let mut witnessed: u64 = 0;
        let mut violations = Vec::new();
        for size in 1..=max_parities.min(self.h()) {
            for j_set in (0..self.h()).combinations(size) {
                let mut union: Vec<usize> = j_set
                    .iter()
                    .flat_map(|&j| self.graph.neighborhood(j).iter().copied())
                    .collect();
                union.sort_unstable();
                union.dedup();
                for i_size in 0..=union.len() {
                    for i_set in union.iter().copied().combinations(i_size) {
                        examined += 1;
                        if examined > ELIMINATION_PAIR_BUDGET {
                            return Err(Error::BudgetExceeded(format!(
                                "elimination sweep is capped at {} pairs",
                                ELIMINATION_PAIR_BUDGET
                            )));
                        }
                        if self.can_eliminate(&i_set, &j_set)?.is_some() {
                            witnessed += 1;
                            if i_set.len() + 1 > j_set.len() {
                                violations.push((i_set.clone(), j_set.clone()));
                            }
                        }
                    }
                }
            }
        }
        Ok(EliminationBoundReport {
            examined,
            witnessed,
            general_position: self.general_position,
            pass: violations.is_empty(),
            violations,
        })
    }

    /// Measures each parity's repair locality on the full code and compares
    /// it with the parity's degree.
    pub fn locality_report(&self) -> Result<GpcLocalityReport> {
        let code = self.to_linear_code();
        let k = self.k();
        let mut entries = Vec::with_capacity(self.h());
        for j in 0..self.h() {
            let locality = code.locality(k + j)?.locality;
            entries.push(GpcLocalityEntry { parity: j, degree: self.graph.degree(j), locality });
        }
        let matches_degree = entries
            .iter()
            .all(|e| e.locality == Locality::Finite(e.degree));
        Ok(GpcLocalityReport {
            general_position: self.general_position,
            entries,
            matches_degree,
        })
    }

    /// Computes the set of supports attainable by combinations of the
    /// parity points, two ways: brute-force span enumeration (q^h bounded)
    /// and the combinatorial characterization (support unions minus
    /// strict-Hall-eliminable sets). The two agree whenever q >= n and the
    /// code is in verified general position.
    pub fn enumerate_supports(&self) -> Result<SupportEnumeration> {
        let k = self.k();
        let h = self.h();
        if k > 64 {
            return Err(Error::InvalidParameter(
                "support masks are limited to 64 message positions".into(),
            ));
        }
        let q = self.field.order();
        let Some(total) = checked_q_pow(q, h).filter(|&t| t <= SPAN_BUDGET) else {
            return Err(Error::BudgetExceeded(format!(
                "span enumeration needs q^h <= {}",
                SPAN_BUDGET
            )));
        };
        let f = &self.field;

        let mut by_span: Vec<u64> = Vec::new();
        let mut mu = vec![0u64; h];
        for counter in 0..total {
            if counter > 0 {
                for slot in mu.iter_mut() {
                    *slot += 1;
                    if *slot < q {
                        break;
                    }
                    *slot = 0;
                }
            }
            let mut v = vec![0u64; k];
            for (j, &m) in mu.iter().enumerate() {
                if m == 0 {
                    continue;
                }
                for &i in self.graph.neighborhood(j) {
                    v[i] = f.add(v[i], f.mul(m, self.points[j][i]));
                }
            }
            let mask = v
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, &x)| if x != 0 { m | 1 << i } else { m });
            by_span.push(mask);
        }
        by_span.sort_unstable();
        by_span.dedup();

        let mut by_combinatorics: Vec<u64> = Vec::new();
        for size in 0..=h {
            for j_set in (0..h).combinations(size) {
                let mut union: Vec<usize> = j_set
                    .iter()
                    .flat_map(|&j| self.graph.neighborhood(j).iter().copied())
                    .collect();
                union.sort_unstable();
                union.dedup();
                let union_mask = union.iter().fold(0u64, |m, &i| m | 1 << i);
                for i_size in 0..=union.len() {
                    for i_set in union.iter().copied().combinations(i_size) {
                        if !strict_hall_condition(&self.graph, &i_set, &j_set) {
                            continue;
                        }
                        let mask =
                            i_set.iter().fold(union_mask, |m, &i| m & !(1 << i));
                        by_combinatorics.push(mask);
                    }
                }
            }
        }
        by_combinatorics.sort_unstable();
        by_combinatorics.dedup();

        let comparable =
            q >= (k + h) as u64 && self.general_position == Some(true);
        let agree = by_span == by_combinatorics;
        Ok(SupportEnumeration { by_span, by_combinatorics, comparable, agree })
    }
}

/// Samples parity points uniformly over the vectors with support exactly
/// matching the graph, retrying seed + 1, seed + 2, ... until the
/// general-position sweep verifies. Returns the code and the accepted seed.
pub fn sample_gpc(
    graph: &SupportGraph,
    field: &Field,
    seed: u64,
) -> Result<(GpcCode, u64)> {
    let q = field.order();
    for attempt in 0..SAMPLE_RETRY_LIMIT {
        let s = seed.wrapping_add(attempt);
        let mut rng = ChaCha12Rng::seed_from_u64(s);
        let points: Vec<Vec<u64>> = (0..graph.h())
            .map(|j| {
                let mut col = vec![0u64; graph.k()];
                for &i in graph.neighborhood(j) {
                    col[i] = rng.gen_range(1..q);
                }
                col
            })
            .collect();
        let mut code = GpcCode::new(graph.clone(), field.clone(), points)?;
        if code.verify_general_position()? {
            return Ok((code, s));
        }
    }
    Err(Error::SamplingFailed { retries: SAMPLE_RETRY_LIMIT })
}

/// A successful elimination: nonzero coefficients on `parities` whose
/// combination has support exactly (union of their supports) minus
/// `eliminated`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationWitness {
    pub parities: Vec<usize>,
    pub coefficients: Vec<u64>,
    pub eliminated: Vec<usize>,
}

/// Outcome of the exhaustive elimination sweep.
#[derive(Clone, Debug)]
pub struct EliminationBoundReport {
    pub examined: u64,
    pub witnessed: u64,
    /// (I, J) pairs witnessed with |I| > |J| - 1; possible only off general
    /// position.
    pub violations: Vec<(Vec<usize>, Vec<usize>)>,
    pub general_position: Option<bool>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpcLocalityEntry {
    pub parity: usize,
    pub degree: usize,
    pub locality: Locality,
}

/// Parity locality versus degree.
#[derive(Clone, Debug)]
pub struct GpcLocalityReport {
    pub general_position: Option<bool>,
    pub entries: Vec<GpcLocalityEntry>,
    pub matches_degree: bool,
}

/// Union-closure report for the supports of a span.
#[derive(Clone, Debug)]
pub struct ClosureReport {
    /// Whether closure is guaranteed (q at least the ambient length).
    pub applicable: bool,
    pub dimension: usize,
    /// Sorted bitmasks of every support attained by the span.
    pub supports: Vec<u64>,
    pub closed: bool,
    /// A pair of attained supports whose union is not attained.
    pub violation: Option<(u64, u64)>,
    /// `None` when the guarantee does not apply; the closure verdict otherwise.
    pub pass: Option<bool>,
}

/// Enumerates the span of the given vectors and checks that the set of
/// supports is closed under union. The closure is guaranteed for
/// q >= ambient length; for smaller fields the report is marked
/// inapplicable but still records the observed supports and any violating
/// pair.
pub fn support_closure_check(
    field: &Field,
    ambient: usize,
    vectors: &[Vec<u64>],
) -> Result<ClosureReport> {
    if ambient > 64 {
        return Err(Error::InvalidParameter(
            "support masks are limited to 64 positions".into(),
        ));
    }
    let q = field.order();
    for v in vectors {
        if v.len() != ambient {
            return Err(Error::DimensionMismatch(
                "spanning vector length differs from the ambient length".into(),
            ));
        }
        if let Some(&x) = v.iter().find(|&&x| x >= q) {
            return Err(Error::ValueOutOfRange(x, q));
        }
    }
    let dimension = if vectors.is_empty() {
        0
    } else {
        Matrix::from_rows(field.clone(), vectors)?.rank()
    };
    let Some(total) = checked_q_pow(q, dimension).filter(|&t| t <= SPAN_BUDGET) else {
        return Err(Error::BudgetExceeded(format!(
            "span enumeration needs q^dim <= {}",
            SPAN_BUDGET
        )));
    };
    // A basis of the span keeps the enumeration at q^dim vectors.
    let basis: Vec<Vec<u64>> = if dimension == 0 {
        Vec::new()
    } else {
        let m = Matrix::from_rows(field.clone(), vectors)?;
        let (rref, pivots) = m.rref();
        (0..pivots.len()).map(|r| rref.row(r).to_vec()).collect()
    };

    let mut supports: Vec<u64> = Vec::new();
    let mut coeffs = vec![0u64; dimension];
    for counter in 0..total {
        if counter > 0 {
            for slot in coeffs.iter_mut() {
                *slot += 1;
                if *slot < q {
                    break;
                }
                *slot = 0;
            }
        }
        let mut v = vec![0u64; ambient];
        for (c, b) in coeffs.iter().zip(&basis) {
            if *c == 0 {
                continue;
            }
            for (slot, &x) in v.iter_mut().zip(b) {
                *slot = field.add(*slot, field.mul(*c, x));
            }
        }
        let mask = v
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &x)| if x != 0 { m | 1 << i } else { m });
        supports.push(mask);
    }
    supports.sort_unstable();
    supports.dedup();

    let mut closed = true;
    let mut violation = None;
    'outer: for (a_pos, &a) in supports.iter().enumerate() {
        for &b in &supports[a_pos + 1..] {
            if supports.binary_search(&(a | b)).is_err() {
                closed = false;
                violation = Some((a, b));
                break 'outer;
            }
        }
    }
    let applicable = q >= ambient as u64;
    Ok(ClosureReport {
        applicable,
        dimension,
        supports,
        closed,
        violation,
        pass: applicable.then_some(closed),
    })
}

/// The two-way support enumeration of a GPC's parity span.
#[derive(Clone, Debug)]
pub struct SupportEnumeration {
    pub by_span: Vec<u64>,
    pub by_combinatorics: Vec<u64>,
    /// q >= n and general position verified: the methods must then agree.
    pub comparable: bool,
    pub agree: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    /// The running example: four message positions, parities reading
    /// {0,1}, {2,3}, and everything.
    fn fan_graph() -> SupportGraph {
        SupportGraph::new(4, vec![vec![0, 1], vec![2, 3], vec![0, 1, 2, 3]]).unwrap()
    }

    #[test]
    fn matching_sizes() {
        let complete = SupportGraph::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(max_matching(&complete, &[0, 1], &[0, 1]).len(), 2);
        let star = SupportGraph::new(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(max_matching(&star, &[0, 1], &[0]).len(), 1);
        assert_eq!(max_matching(&star, &[0, 1], &[]).len(), 0);
        assert_eq!(max_matching(&star, &[], &[0]).len(), 0);
    }

    #[test]
    fn matching_uses_augmenting_paths() {
        // Greedy 0->p0 must be unwound to fit all three left vertices.
        let g = SupportGraph::new(3, vec![vec![0, 1], vec![0, 2], vec![0]]).unwrap();
        let m = max_matching(&g, &[0, 1, 2], &[0, 1, 2]);
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn hall_examples() {
        let g = fan_graph();
        let no = ErasurePattern::new(4, 3, vec![0, 1], vec![2]).unwrap();
        assert!(!hall_condition(&g, &no));
        let yes = ErasurePattern::new(4, 3, vec![0, 2], vec![]).unwrap();
        assert!(hall_condition(&g, &yes));
        let empty = ErasurePattern::new(4, 3, vec![], vec![0, 1, 2]).unwrap();
        assert!(hall_condition(&g, &empty));
    }

    #[test]
    fn support_mismatch_is_rejected() {
        let g = fan_graph();
        let f = gf(5);
        // Zero inside a declared support.
        let bad = vec![vec![1, 0, 0, 0], vec![0, 0, 1, 1], vec![1, 2, 3, 4]];
        assert!(matches!(
            GpcCode::new(g.clone(), f.clone(), bad),
            Err(Error::InvalidParameter(_))
        ));
        // Nonzero outside.
        let bad = vec![vec![1, 1, 1, 0], vec![0, 0, 1, 1], vec![1, 2, 3, 4]];
        assert!(matches!(GpcCode::new(g, f, bad), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn the_gf5_example_is_in_general_position() {
        let g = fan_graph();
        let f = gf(5);
        let points = vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![1, 2, 3, 4]];
        let code = GpcCode::new(g, f, points).unwrap();
        assert!(code.is_general_position().unwrap());
    }

    #[test]
    fn a_single_full_parity_is_trivially_general_position() {
        let g = SupportGraph::new(2, vec![vec![0, 1]]).unwrap();
        let code = GpcCode::new(g, gf(5), vec![vec![1, 1]]).unwrap();
        assert!(code.is_general_position().unwrap());
    }

    #[test]
    fn sampling_verifies_and_records_the_seed() {
        let g = fan_graph();
        let (code, seed) = sample_gpc(&g, &gf(65537), 1).unwrap();
        assert_eq!(code.general_position_verified(), Some(true));
        assert!(seed >= 1);
        let (again, seed2) = sample_gpc(&g, &gf(65537), 1).unwrap();
        assert_eq!(code.parity_points(), again.parity_points());
        assert_eq!(seed, seed2);
    }

    #[test]
    fn sampling_over_gf2_cannot_reach_general_position() {
        // All supports force all-ones points, and the {0,1}x{p0,p2} minor
        // is then singular on every draw.
        let g = fan_graph();
        assert!(matches!(
            sample_gpc(&g, &gf(2), 0),
            Err(Error::SamplingFailed { .. })
        ));
    }

    #[test]
    fn erasure_correction_matches_hall_on_named_patterns() {
        let (code, _) = sample_gpc(&fan_graph(), &gf(65537), 1).unwrap();
        let lin = code.to_linear_code();
        let word = lin.encode(&[5, 6, 7, 8]).unwrap();

        let intact: Vec<Option<u64>> = word.iter().map(|&v| Some(v)).collect();
        assert_eq!(
            code.correct_erasures(&intact).unwrap(),
            DecodeOutcome::Decoded(word.clone())
        );

        let mut ok = intact.clone();
        ok[0] = None;
        ok[2] = None;
        assert_eq!(
            code.correct_erasures(&ok).unwrap(),
            DecodeOutcome::Decoded(word.clone())
        );

        // Positions 0 and 1 both lean on the erased full parity.
        let mut stuck = intact.clone();
        stuck[0] = None;
        stuck[1] = None;
        stuck[6] = None;
        assert_eq!(code.correct_erasures(&stuck).unwrap(), DecodeOutcome::Undecodable);

        let mut corrupt = intact;
        corrupt[4] = Some(word[4] + 1);
        assert!(matches!(code.correct_erasures(&corrupt), Err(Error::Integrity(_))));
    }

    #[test]
    fn decode_agrees_with_hall_on_every_pattern_over_gf17() {
        let (code, _) = sample_gpc(&fan_graph(), &gf(17), 0).unwrap();
        let lin = code.to_linear_code();
        let word = lin.encode(&[1, 5, 9, 13]).unwrap();
        let n = code.n();
        for mask in 0u32..1 << n {
            let w: Vec<Option<u64>> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { None } else { Some(word[i]) })
                .collect();
            let pattern = ErasurePattern::from_word(code.k(), &w);
            let expect = hall_condition(code.graph(), &pattern);
            let got = matches!(
                code.correct_erasures(&w).unwrap(),
                DecodeOutcome::Decoded(_)
            );
            assert_eq!(got, expect, "pattern {:?}", pattern);
        }
    }

    #[test]
    fn elimination_witnesses_and_refusals() {
        let (code, _) = sample_gpc(&fan_graph(), &gf(17), 0).unwrap();
        // A single parity eliminates nothing but its complement is itself.
        let w = code.can_eliminate(&[], &[0]).unwrap().unwrap();
        assert_eq!(w.coefficients.len(), 1);
        assert_ne!(w.coefficients[0], 0);
        // Position 0 sees both chosen parities: witnessed.
        let w = code.can_eliminate(&[0], &[0, 2]).unwrap();
        assert!(w.is_some());
        let w = w.unwrap();
        assert_eq!(w.eliminated, vec![0]);
        assert!(w.coefficients.iter().all(|&m| m != 0));
        // {0,1} has only two neighbors among {p0, p2}: impossible.
        assert!(code.can_eliminate(&[0, 1], &[0, 2]).unwrap().is_none());
        // Outside the union of supports: an input error.
        assert!(code.can_eliminate(&[2], &[0]).is_err());
    }

    #[test]
    fn elimination_bound_holds_in_general_position() {
        let (code, _) = sample_gpc(&fan_graph(), &gf(17), 0).unwrap();
        let report = code.check_elimination_bound(3).unwrap();
        assert!(report.pass);
        assert!(report.witnessed > 0);
        assert_eq!(report.general_position, Some(true));
    }

    #[test]
    fn parallel_parities_break_the_elimination_bound() {
        // c1 = 2 c0: combining them kills the whole union {0,1} with only
        // two parities, so |I| = 2 > |J| - 1.
        let g = SupportGraph::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let f = gf(5);
        let mut code = GpcCode::new(g, f, vec![vec![1, 1], vec![2, 2]]).unwrap();
        assert!(!code.verify_general_position().unwrap());
        let report = code.check_elimination_bound(2).unwrap();
        assert!(!report.pass);
        assert_eq!(report.general_position, Some(false));
        assert!(report
            .violations
            .contains(&(vec![0, 1], vec![0, 1])));
    }

    #[test]
    fn locality_equals_degree_in_general_position() {
        let (code, _) = sample_gpc(&fan_graph(), &gf(65537), 1).unwrap();
        let report = code.locality_report().unwrap();
        let degrees: Vec<usize> = report.entries.iter().map(|e| e.degree).collect();
        assert_eq!(degrees, vec![2, 2, 4]);
        assert!(report.matches_degree);
        for e in &report.entries {
            assert_eq!(e.locality, Locality::Finite(e.degree));
        }
    }

    #[test]
    fn degenerate_points_drop_below_degree() {
        let g = SupportGraph::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let code = GpcCode::new(g, gf(5), vec![vec![1, 1], vec![2, 2]]).unwrap();
        let report = code.locality_report().unwrap();
        assert!(!report.matches_degree);
        // The twin parities repair each other with a single read.
        assert_eq!(report.entries[0].locality, Locality::Finite(1));
    }

    #[test]
    fn closure_holds_for_large_fields() {
        let f = gf(7);
        let report = support_closure_check(
            &f,
            6,
            &[vec![1, 1, 1, 0, 0, 0], vec![0, 0, 1, 1, 1, 0]],
        )
        .unwrap();
        assert!(report.applicable);
        assert_eq!(report.dimension, 2);
        assert_eq!(report.pass, Some(true));
        assert!(report.closed);
    }

    #[test]
    fn one_dimensional_spans_are_trivially_closed() {
        let report =
            support_closure_check(&gf(5), 3, &[vec![1, 1, 0]]).unwrap();
        assert_eq!(report.supports, vec![0b000, 0b011]);
        assert_eq!(report.pass, Some(true));
    }

    #[test]
    fn the_binary_parity_check_is_not_closed() {
        let f = gf(2);
        let report =
            support_closure_check(&f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert!(!report.applicable);
        assert_eq!(report.pass, None);
        assert!(!report.closed);
        let (a, b) = report.violation.unwrap();
        assert_eq!(a | b, 0b111);
    }

    #[test]
    fn support_enumeration_agrees_over_gf17() {
        let (code, _) = sample_gpc(&fan_graph(), &gf(17), 0).unwrap();
        let e = code.enumerate_supports().unwrap();
        assert!(e.comparable);
        assert!(e.agree, "span {:?} vs combinatorial {:?}", e.by_span, e.by_combinatorics);
        assert!(e.by_span.contains(&0));
        assert!(e.by_span.contains(&0b1111));
    }

    #[test]
    fn single_parity_supports() {
        let g = SupportGraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        let code = GpcCode::new(g, gf(5), vec![vec![1, 2, 3]]).unwrap();
        let e = code.enumerate_supports().unwrap();
        assert_eq!(e.by_span, vec![0b000, 0b111]);
        assert_eq!(e.by_combinatorics, vec![0b000, 0b111]);
    }

    #[test]
    fn round_trip_through_a_linear_code() {
        let (code, _) = sample_gpc(&fan_graph(), &gf(17), 0).unwrap();
        let lin = code.to_linear_code();
        let back = GpcCode::from_systematic_code(&lin).unwrap();
        assert_eq!(back.graph(), code.graph());
        assert_eq!(back.parity_points(), code.parity_points());
    }
}
