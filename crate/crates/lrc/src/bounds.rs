//! Redundancy bounds for codes with locality, and the machinery that
//! certifies them on concrete codes.
//!
//! The central fact: an [n, k, d] code with information locality r obeys
//! n - k >= ceil(k/r) + d - 2. [`greedy_certificate`] replays the
//! constructive proof on a given code, growing a coordinate set S of rank
//! k - 1 with |S| >= k + ceil(k/r) - 2; since d <= n - |S| for any such set,
//! the trace certifies the bound. The companion checks
//! ([`check_structure`], [`detect_canonical`], [`verify_parity_floor`])
//! examine the rigid shape that codes meeting the bound with equality are
//! forced into: disjoint recovery edges of size exactly r + 1, and — for
//! d < r + 3 — a partition into units, weight-r local parities, and
//! weight-k heavy parities whose locality is floored by
//! [`parity_locality_floor`].


use crate::code::{Hyperedge, LinearCode, Locality};
use crate::error::{Error, Result};

/// Minimum redundancy n - k of any [n, k, d] code with information
/// locality r: ceil(k/r) + d - 2.
pub fn redundancy_bound(k: usize, r: usize, d: usize) -> usize {
    assert!(k >= 1 && r >= 1 && d >= 1, "parameters must be positive");
    k.div_ceil(r) + d - 2
}

/// Whether the code has information locality <= r and meets the redundancy
/// bound for that r with equality.
pub fn is_optimal(code: &LinearCode, r: usize) -> Result<bool> {
    let profile = code.locality_profile()?;
    if !matches!(profile.information_locality, Locality::Finite(l) if l <= r) {
        return Ok(false);
    }
    let d = code.min_distance()?;
    Ok(code.n() - code.k() == redundancy_bound(code.k(), r, d))
}

/// One growth step of the bound-certifying algorithm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyStep {
    /// The coordinate outside S whose hyperedge was used.
    pub coordinate: usize,
    /// Full vertex set of that hyperedge.
    pub edge: Vec<usize>,
    /// Vertices actually added to S (a truncated part of the edge when the
    /// full edge would have pushed the rank to k).
    pub added: Vec<usize>,
    /// s_i = |added|.
    pub size_increase: usize,
    /// t_i = rank gained.
    pub rank_increase: usize,
}

/// Transcript of the greedy set growth, certifying the redundancy bound on
/// one concrete code: the final set has rank k - 1, so d <= n - |S|, while
/// |S| >= k + ceil(k/r) - 2.
#[derive(Clone, Debug)]
pub struct GreedyTrace {
    pub r: usize,
    pub steps: Vec<GreedyStep>,
    /// The grown set S, sorted.
    pub final_set: Vec<usize>,
    pub final_rank: usize,
    /// k + ceil(k/r) - 2, the size the proof guarantees.
    pub lower_bound: usize,
    /// final_rank = k - 1 and |final_set| >= lower_bound.
    pub certified: bool,
}

/// Runs the proof algorithm of the redundancy bound on `code` using its
/// recovery hyperedges for locality r. While rank(S) <= k - 2, a coordinate
/// outside S with an incident hyperedge is chosen, the edge is added (or, if
/// that would reach full rank, its new vertices are added in index order
/// until the rank is k - 1). Among eligible (coordinate, edge) pairs the one
/// maximizing the size-gain/rank-gain ratio wins; ties break to the lowest
/// coordinate, then the lexicographically least edge.
pub fn greedy_certificate(code: &LinearCode, r: usize) -> Result<GreedyTrace> {
    let k = code.k();
    let n = code.n();
    let hypergraph = code.recovery_hypergraph(r)?;
    let mut in_s = vec![false; n];
    let mut s: Vec<usize> = Vec::new();
    let mut steps: Vec<GreedyStep> = Vec::new();

    loop {
        let rank_s = code.rank_of(&s);
        if rank_s + 2 > k {
            break;
        }
        // (s_i, t_i, coordinate, edge, added) of the best candidate so far.
        let mut best: Option<(usize, usize, usize, &Hyperedge, Vec<usize>)> = None;
        for edge in &hypergraph.edges {
            let fresh: Vec<usize> =
                edge.vertices.iter().copied().filter(|&v| !in_s[v]).collect();
            let Some(&coord) = fresh.first() else { continue };
            let mut grown = s.clone();
            grown.extend(&fresh);
            let grown_rank = code.rank_of(&grown);
            let (added, gain) = if grown_rank < k {
                (fresh.clone(), grown_rank - rank_s)
            } else {
                // Adding everything would reach full rank; take vertices in
                // index order until the rank is exactly k - 1.
                let mut part = s.clone();
                let mut added = Vec::new();
                let mut rank = rank_s;
                for &v in &fresh {
                    if rank == k - 1 {
                        break;
                    }
                    part.push(v);
                    added.push(v);
                    rank = code.rank_of(&part);
                }
                (added, k - 1 - rank_s)
            };
            let size = added.len();
            let better = match &best {
                None => true,
                Some((bs, bt, bc, be, _)) => {
                    // Compare size/gain ratios by cross-multiplication
                    // (gain 0 counts as infinite).
                    match (size * bt).cmp(&(bs * gain)) {
                        std::cmp::Ordering::Greater => true,
                        std::cmp::Ordering::Less => false,
                        std::cmp::Ordering::Equal => {
                            (coord, &edge.vertices) < (*bc, &be.vertices)
                        }
                    }
                }
            };
            if better {
                best = Some((size, gain, coord, edge, added));
            }
        }
        let Some((size, gain, coord, edge, added)) = best else {
            return Err(Error::NotApplicable(
                "no coordinate outside the set has a recovery hyperedge".into(),
            ));
        };
        for &v in &added {
            in_s[v] = true;
            s.push(v);
        }
        steps.push(GreedyStep {
            coordinate: coord,
            edge: edge.vertices.clone(),
            added,
            size_increase: size,
            rank_increase: gain,
        });
    }

    let final_rank = code.rank_of(&s);
    s.sort_unstable();
    let lower_bound = k + k.div_ceil(r) - 2;
    let certified = final_rank + 1 == k && s.len() >= lower_bound;
    Ok(GreedyTrace { r, steps, final_set: s, final_rank, lower_bound, certified })
}

/// Shape report for the recovery hypergraph of a code against locality r.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub r: usize,
    pub distance: usize,
    /// r | k, r < k, n = k + k/r + d - 2: scope of the disjointness and
    /// edge-size claims.
    pub optimal_shape: bool,
    /// Additionally d < r + 3: scope of the edge-count and isolated-vertex
    /// claims.
    pub canonical_scope: bool,
    pub edges: Vec<Hyperedge>,
    pub isolated: Vec<usize>,
    pub edges_disjoint: bool,
    /// Every edge has exactly r + 1 vertices.
    pub edges_sized: bool,
    /// k/r, when in canonical scope.
    pub expected_edge_count: Option<usize>,
    /// d - 2, when in canonical scope.
    pub expected_isolated: Option<usize>,
    /// None when outside optimal shape (nothing is claimed); otherwise
    /// whether every in-scope clause holds.
    pub pass: Option<bool>,
}

/// Examines the recovery hypergraph of `code` for locality r: within the
/// optimal shape (r | k, r < k, n = k + k/r + d - 2) all hyperedges must be
/// pairwise disjoint with exactly r + 1 vertices; when additionally
/// d < r + 3, there must be exactly k/r of them and d - 2 isolated
/// vertices. Edges are listed either way.
pub fn check_structure(code: &LinearCode, r: usize) -> Result<StructureReport> {
    let k = code.k();
    let n = code.n();
    let d = code.min_distance()?;
    let hypergraph = code.recovery_hypergraph(r)?;
    let edges = hypergraph.edges.clone();
    let isolated = hypergraph.isolated_vertices();

    let optimal_shape = r >= 1 && r < k && k % r == 0 && n + 2 == k + k / r + d;
    let canonical_scope = optimal_shape && d < r + 3;
    let mut seen = vec![false; n];
    let mut edges_disjoint = true;
    for e in &edges {
        for &v in &e.vertices {
            if seen[v] {
                edges_disjoint = false;
            }
            seen[v] = true;
        }
    }
    let edges_sized = edges.iter().all(|e| e.vertices.len() == r + 1);

    let (expected_edge_count, expected_isolated, pass) = if canonical_scope {
        let ok = edges_disjoint
            && edges_sized
            && edges.len() == k / r
            && isolated.len() == d - 2;
        (Some(k / r), Some(d - 2), Some(ok))
    } else if optimal_shape {
        (None, None, Some(edges_disjoint && edges_sized))
    } else {
        (None, None, None)
    };

    Ok(StructureReport {
        r,
        distance: d,
        optimal_shape,
        canonical_scope,
        edges,
        isolated,
        edges_disjoint,
        edges_sized,
        expected_edge_count,
        expected_isolated,
        pass,
    })
}

/// The forced three-part coordinate partition of an optimal code with
/// d < r + 3: unit vectors, weight-r local parities whose supports
/// partition the message positions, and weight-k heavy parities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPartition {
    pub info: Vec<usize>,
    pub local: Vec<usize>,
    pub heavy: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalOutcome {
    Canonical(CanonicalPartition),
    /// The parameters fit but no valid partition exists — possible only
    /// when the code's information locality exceeds r.
    NotCanonical { reason: String },
}

/// Finds the canonical partition of a systematic code with d < r + 3,
/// r | k, r < k and n = k + k/r + d - 2. Parameter or systematicity
/// violations are errors; a parameter-conforming code that fails the weight
/// classification yields `NotCanonical`.
pub fn detect_canonical(code: &LinearCode, r: usize) -> Result<CanonicalOutcome> {
    let k = code.k();
    let n = code.n();
    if r == 0 || r >= k || k % r != 0 {
        return Err(Error::NotApplicable(
            "canonical detection needs 1 <= r < k with r | k".into(),
        ));
    }
    let d = code.min_distance()?;
    if d >= r + 3 {
        return Err(Error::NotApplicable(format!(
            "distance {} is not below r + 3 = {}",
            d,
            r + 3
        )));
    }
    if n + 2 != k + k / r + d {
        return Err(Error::NotApplicable(format!(
            "length {} is not k + k/r + d - 2 = {}",
            n,
            k + k / r + d - 2
        )));
    }

    // One unit column per message position; prefer the declared systematic
    // set, otherwise take the first matching column for each unit.
    let info: Vec<usize> = if let Some(declared) = code.systematic_info() {
        declared.to_vec()
    } else {
        let mut picks = Vec::with_capacity(k);
        for j in 0..k {
            let unit: Vec<u64> = (0..k).map(|t| (t == j) as u64).collect();
            let found = (0..n)
                .find(|&i| !picks.contains(&i) && code.point(i) == unit.as_slice());
            match found {
                Some(i) => picks.push(i),
                None => {
                    return Err(Error::NotApplicable(
                        "code carries no unit column for every message position".into(),
                    ))
                }
            }
        }
        picks
    };

    let mut local = Vec::new();
    let mut heavy = Vec::new();
    for i in 0..n {
        if info.contains(&i) {
            continue;
        }
        let weight = code.point(i).iter().filter(|&&v| v != 0).count();
        if weight == r {
            local.push(i);
        } else if weight == k {
            heavy.push(i);
        } else {
            return Ok(CanonicalOutcome::NotCanonical {
                reason: format!(
                    "coordinate {} has weight {}, expected {} or {}",
                    i, weight, r, k
                ),
            });
        }
    }
    if local.len() != k / r {
        return Ok(CanonicalOutcome::NotCanonical {
            reason: format!("expected {} local parities, found {}", k / r, local.len()),
        });
    }
    if heavy.len() != d - 2 {
        return Ok(CanonicalOutcome::NotCanonical {
            reason: format!("expected {} heavy parities, found {}", d - 2, heavy.len()),
        });
    }
    let mut covered = vec![false; k];
    for &i in &local {
        for (j, &v) in code.point(i).iter().enumerate() {
            if v != 0 {
                if covered[j] {
                    return Ok(CanonicalOutcome::NotCanonical {
                        reason: "local parity supports overlap".into(),
                    });
                }
                covered[j] = true;
            }
        }
    }
    if !covered.iter().all(|&c| c) {
        return Ok(CanonicalOutcome::NotCanonical {
            reason: "local parity supports do not cover every message position".into(),
        });
    }
    Ok(CanonicalOutcome::Canonical(CanonicalPartition { info, local, heavy }))
}

/// Smallest possible locality of a heavy parity in an optimal code with
/// d < r + 3, r | k, r < k: k - (k/r - 1)(d - 3).
pub fn parity_locality_floor(k: usize, r: usize, d: usize) -> Result<usize> {
    if r == 0 || r >= k || k % r != 0 {
        return Err(Error::InvalidParameter("needs 1 <= r < k with r | k".into()));
    }
    if d < 3 {
        return Err(Error::InvalidParameter(
            "codes of distance below 3 carry no heavy parities".into(),
        ));
    }
    if d >= r + 3 {
        return Err(Error::InvalidParameter(format!(
            "distance {} is not below r + 3 = {}",
            d,
            r + 3
        )));
    }
    Ok(k - (k / r - 1) * (d - 3))
}

/// Locality audit of a canonical code's parity symbols.
#[derive(Clone, Debug)]
pub struct ParityFloorReport {
    pub floor: usize,
    /// (coordinate, locality) for the weight-r local parities.
    pub local: Vec<(usize, Locality)>,
    /// (coordinate, locality) for the weight-k heavy parities.
    pub heavy: Vec<(usize, Locality)>,
    /// All local parities have locality exactly r.
    pub locals_exact: bool,
    /// No heavy parity falls below the floor.
    pub heavies_meet_floor: bool,
    /// Some heavy parity sits exactly on the floor.
    pub floor_attained: bool,
    pub pass: bool,
}

/// Measures every parity locality of a canonical code and compares against
/// the floor: k/r local parities at exactly r, heavy parities at or above
/// k - (k/r - 1)(d - 3).
pub fn verify_parity_floor(code: &LinearCode, r: usize) -> Result<ParityFloorReport> {
    let partition = match detect_canonical(code, r)? {
        CanonicalOutcome::Canonical(p) => p,
        CanonicalOutcome::NotCanonical { reason } => {
            return Err(Error::NotApplicable(format!("code is not canonical: {}", reason)))
        }
    };
    let d = code.min_distance()?;
    if d < 3 {
        return Err(Error::NotApplicable("no heavy parities below distance 3".into()));
    }
    let floor = parity_locality_floor(code.k(), r, d)?;

    let mut local = Vec::new();
    for &i in &partition.local {
        local.push((i, code.locality(i)?.locality));
    }
    let mut heavy = Vec::new();
    for &i in &partition.heavy {
        heavy.push((i, code.locality(i)?.locality));
    }
    let locals_exact = local.iter().all(|&(_, l)| l == Locality::Finite(r));
    let heavies_meet_floor = heavy
        .iter()
        .all(|&(_, l)| !matches!(l, Locality::Finite(v) if v < floor));
    let floor_attained = heavy.iter().any(|&(_, l)| l == Locality::Finite(floor));
    let pass = locals_exact && heavies_meet_floor;
    Ok(ParityFloorReport {
        floor,
        local,
        heavy,
        locals_exact,
        heavies_meet_floor,
        floor_attained,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{canonical_d4, pyramid};
    use crate::field::Field;

    fn gf(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    #[test]
    fn bound_values() {
        assert_eq!(redundancy_bound(4, 2, 4), 4);
        assert_eq!(redundancy_bound(5, 5, 2), 1);
        assert_eq!(redundancy_bound(5, 2, 3), 4);
    }

    #[test]
    fn pyramid_is_optimal_and_a_padded_pyramid_is_not() {
        let code = pyramid(4, 2, 4, &gf(7)).unwrap();
        assert!(is_optimal(&code, 2).unwrap());
        // One duplicated parity column pushes the redundancy past the bound.
        let mut points = code.points().to_vec();
        points.push(points[7].clone());
        let padded = LinearCode::new(gf(7), points).unwrap();
        assert!(!is_optimal(&padded, 2).unwrap());
    }

    #[test]
    fn greedy_trace_on_the_pyramid() {
        let code = pyramid(4, 2, 4, &gf(7)).unwrap();
        let trace = greedy_certificate(&code, 2).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.final_rank, 3);
        assert_eq!(trace.lower_bound, 4);
        assert_eq!(trace.final_set, vec![0, 1, 2, 4]);
        assert!(trace.certified);
        // First step swallows a whole block edge, second truncates.
        assert_eq!(trace.steps[0].edge, vec![0, 1, 4]);
        assert_eq!(trace.steps[0].rank_increase, 2);
        assert_eq!(trace.steps[1].added, vec![2]);
        assert_eq!(trace.steps[1].rank_increase, 1);
        // Fact: rank <= k-1 caps |S| at n - d.
        let d = code.min_distance().unwrap();
        assert!(code.n() - trace.final_set.len() >= d);
    }

    #[test]
    fn greedy_prefers_the_short_block_then_truncates() {
        let code = pyramid(5, 2, 3, &gf(11)).unwrap();
        let trace = greedy_certificate(&code, 2).unwrap();
        // The length-1 block {4} with its parity gives the best ratio 2/1.
        assert_eq!(trace.steps[0].edge, vec![4, 7]);
        assert_eq!(trace.steps.len(), 3);
        assert_eq!(trace.final_set.len(), 6);
        assert_eq!(trace.lower_bound, 6);
        assert!(trace.certified);
        assert_eq!(code.n() - trace.final_set.len(), code.min_distance().unwrap());
    }

    #[test]
    fn greedy_on_k1_terminates_immediately() {
        let f = gf(2);
        let rep = LinearCode::new(f, vec![vec![1], vec![1], vec![1]]).unwrap();
        let trace = greedy_certificate(&rep, 1).unwrap();
        assert!(trace.steps.is_empty());
        assert!(trace.final_set.is_empty());
        assert_eq!(trace.lower_bound, 0);
        assert!(trace.certified);
    }

    #[test]
    fn greedy_needs_covered_coordinates() {
        let f = gf(2);
        let id = LinearCode::new(
            f,
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        )
        .unwrap();
        assert!(matches!(
            greedy_certificate(&id, 1),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn structure_report_in_canonical_scope() {
        let cons = canonical_d4(4, 2, &gf(5)).unwrap();
        let report = check_structure(cons.code(), 2).unwrap();
        assert!(report.optimal_shape && report.canonical_scope);
        assert_eq!(report.pass, Some(true));
        assert_eq!(report.edges.len(), 2);
        assert!(report.edges_disjoint && report.edges_sized);
        assert_eq!(report.isolated, vec![6, 7]);
        assert_eq!(report.expected_edge_count, Some(2));
        assert_eq!(report.expected_isolated, Some(2));
    }

    #[test]
    fn structure_report_outside_canonical_scope_still_lists_edges() {
        // d = 5 = r + 3: the edge-count and isolated-vertex claims are out
        // of scope, the disjointness clauses still hold and are reported.
        let code = pyramid(4, 2, 5, &gf(11)).unwrap();
        let report = check_structure(&code, 2).unwrap();
        assert!(report.optimal_shape);
        assert!(!report.canonical_scope);
        assert_eq!(report.pass, Some(true));
        assert_eq!(report.edges.len(), 2);
        assert_eq!(report.expected_edge_count, None);
        assert_eq!(report.isolated.len(), 3);
    }

    #[test]
    fn structure_report_not_applicable_off_shape() {
        let code = systematic_mds_code();
        let report = check_structure(&code, 2).unwrap();
        assert!(!report.optimal_shape);
        assert_eq!(report.pass, None);
    }

    fn systematic_mds_code() -> LinearCode {
        crate::construct::systematic_mds(4, 4, &gf(7)).unwrap().code()
    }

    #[test]
    fn canonical_partition_of_the_d4_family() {
        let cons = canonical_d4(4, 2, &gf(5)).unwrap();
        match detect_canonical(cons.code(), 2).unwrap() {
            CanonicalOutcome::Canonical(p) => {
                assert_eq!(p.info, vec![0, 1, 2, 3]);
                assert_eq!(p.local, vec![4, 5]);
                assert_eq!(p.heavy, vec![6, 7]);
            }
            CanonicalOutcome::NotCanonical { reason } => panic!("{}", reason),
        }
    }

    #[test]
    fn canonical_detection_rejects_the_identity() {
        let f = gf(5);
        let id = LinearCode::new(
            f,
            (0..4).map(|j| (0..4).map(|t| (t == j) as u64).collect()).collect(),
        )
        .unwrap();
        assert!(matches!(
            detect_canonical(&id, 2),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn conforming_parameters_with_a_bad_partition_are_not_canonical() {
        // [4, 2, 2] over GF(2) with a duplicated unit: parameters match
        // r = 1 (n = k + k/r + d - 2) but information locality is 2, so no
        // partition exists.
        let f = gf(2);
        let code = LinearCode::new(
            f,
            vec![vec![1, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        )
        .unwrap();
        assert_eq!(code.min_distance().unwrap(), 2);
        match detect_canonical(&code, 1).unwrap() {
            CanonicalOutcome::NotCanonical { reason } => {
                assert!(reason.contains("local parities"), "{}", reason);
            }
            CanonicalOutcome::Canonical(_) => panic!("partition should not exist"),
        }
    }

    #[test]
    fn parity_floor_values() {
        assert_eq!(parity_locality_floor(4, 2, 4).unwrap(), 3);
        assert_eq!(parity_locality_floor(6, 3, 4).unwrap(), 5);
        assert_eq!(parity_locality_floor(6, 3, 3).unwrap(), 6);
        assert!(parity_locality_floor(6, 3, 7).is_err());
        assert!(parity_locality_floor(6, 3, 2).is_err());
        assert!(parity_locality_floor(4, 3, 4).is_err());
    }

    #[test]
    fn parity_floor_attained_by_the_d4_family() {
        let cons = canonical_d4(4, 2, &gf(5)).unwrap();
        let report = verify_parity_floor(cons.code(), 2).unwrap();
        assert_eq!(report.floor, 3);
        assert!(report.locals_exact);
        assert!(report.heavies_meet_floor);
        assert!(report.floor_attained);
        assert!(report.pass);
        for &(_, l) in &report.heavy {
            assert_eq!(l, Locality::Finite(3));
        }
    }

    #[test]
    fn parity_floor_holds_on_the_pyramid() {
        let code = pyramid(4, 2, 4, &gf(7)).unwrap();
        let report = verify_parity_floor(&code, 2).unwrap();
        assert_eq!(report.floor, 3);
        assert!(report.pass);
    }
}
