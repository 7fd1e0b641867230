//! Independent verification of recovered embeddings.
//!
//! Everything here recomputes properties from first principles: distances by
//! breadth-first search, label relations by direct word arithmetic. None of
//! it reuses intermediate state from the recovery path, so these checks can
//! vouch for it.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::embedder::{embed_proper_rooted, EmbedError, Embedding, ProperEmbedding};
use crate::graph::{bfs, Graph, VertexId};
use crate::words::Word;

/// Default vertex-count bound for the quadratic and per-root checks.
pub const DEFAULT_PAIRWISE_CAP: usize = 4096;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("graph has {n} vertices, above the cap of {cap} for this check")]
    TooLarge { n: usize, cap: usize },
    #[error("labeling is not proper: {0}")]
    NotProper(String),
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    name: &'static str,
    witness: Option<String>,
}

impl Check {
    fn pass(name: &'static str) -> Check {
        Check { name, witness: None }
    }

    fn fail(name: &'static str, witness: impl Into<String>) -> Check {
        Check { name, witness: Some(witness.into()) }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    /// Counterexample description, when the check failed.
    pub fn witness(&self) -> Option<&str> {
        self.witness.as_deref()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "PASS {}", self.name),
            Some(w) => write!(f, "FAIL {}: {}", self.name, w),
        }
    }
}

/// A bundle of checks; passes when every check does.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Checks that graph distance equals Hamming distance for every vertex pair,
/// by running a breadth-first search from each vertex. Quadratic; refuses
/// graphs above `cap` vertices.
pub fn is_isometric(g: &Graph, e: &Embedding, cap: usize) -> Result<Check, VerifyError> {
    let n = g.vertex_count();
    assert_eq!(e.vertex_count(), n, "labeling must cover the graph");
    if n > cap {
        return Err(VerifyError::TooLarge { n, cap });
    }
    for u in 0..n as VertexId {
        let d = bfs(g, u).expect("graphs are connected by construction");
        for v in 0..n as VertexId {
            let dh = e.label(u).hamming(e.label(v));
            if d.dist(v) as usize != dh {
                return Ok(Check::fail(
                    "isometric",
                    format!(
                        "d({u}, {v}) = {} but labels {} and {} differ in {dh} coordinates",
                        d.dist(v),
                        e.label(u),
                        e.label(v)
                    ),
                ));
            }
        }
    }
    Ok(Check::pass("isometric"))
}

/// Checks that the labeling is proper: labels are pairwise distinct, the
/// label set is closed downward, every edge flips exactly one coordinate,
/// and every one-coordinate flip between present labels is an edge.
pub fn is_proper(g: &Graph, e: &Embedding) -> Check {
    const NAME: &str = "proper";
    let n = g.vertex_count();
    assert_eq!(e.vertex_count(), n, "labeling must cover the graph");

    let mut index: HashMap<&Word, VertexId> = HashMap::with_capacity(n);
    for v in 0..n as VertexId {
        if let Some(prev) = index.insert(e.label(v), v) {
            return Check::fail(NAME, format!("vertices {prev} and {v} both labeled {}", e.label(v)));
        }
    }

    let edge_set: HashSet<(VertexId, VertexId)> = g.edges().iter().copied().collect();
    for &(u, v) in g.edges() {
        let d = e.label(u).hamming(e.label(v));
        if d != 1 {
            return Check::fail(
                NAME,
                format!("edge ({u}, {v}) joins labels {} and {} at Hamming distance {d}", e.label(u), e.label(v)),
            );
        }
    }

    let mut pairs = 0usize;
    for v in 0..n as VertexId {
        for d in e.label(v).downs() {
            let Some(&u) = index.get(&d) else {
                return Check::fail(
                    NAME,
                    format!("label set not closed downward: {} present, {d} missing", e.label(v)),
                );
            };
            if !edge_set.contains(&(u.min(v), u.max(v))) {
                return Check::fail(
                    NAME,
                    format!("labels {} and {d} differ in one coordinate but vertices {v} and {u} are not adjacent", e.label(v)),
                );
            }
            pairs += 1;
        }
    }
    // Every edge is such a pair and vice versa, so the counts agree.
    debug_assert_eq!(pairs, g.edge_count());
    Check::pass(NAME)
}

/// The vertices a proper labeling marks as minimal: those labeled below the
/// meet of all maximal labels. Returned in increasing id order.
pub fn minimal_vertices(g: &Graph, e: &Embedding) -> Result<Vec<VertexId>, VerifyError> {
    let check = is_proper(g, e);
    if let Some(w) = check.witness() {
        return Err(VerifyError::NotProper(w.to_string()));
    }
    let n = g.vertex_count();
    let index: HashMap<&Word, VertexId> =
        (0..n as VertexId).map(|v| (e.label(v), v)).collect();
    let maximal: Vec<&Word> = (0..n as VertexId)
        .map(|v| e.label(v))
        .filter(|w| w.ups().all(|u| !index.contains_key(&u)))
        .collect();
    let xhat = maximal
        .iter()
        .skip(1)
        .fold(maximal[0].clone(), |acc, w| acc.meet(w));
    Ok((0..n as VertexId).filter(|&v| e.label(v).leq(&xhat)).collect())
}

/// The same vertex set computed from the graph metric alone, given only a
/// base vertex that some proper labeling sends to the all-zeros word.
///
/// Maximal vertices are those with no neighbor one level further from the
/// base; a vertex is minimal when it lies on a shortest path from the base
/// to every maximal vertex. Runs a breadth-first search per maximal vertex;
/// refuses graphs above `cap` vertices.
pub fn minimal_vertices_brute(
    g: &Graph,
    base: VertexId,
    cap: usize,
) -> Result<Vec<VertexId>, VerifyError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(VerifyError::TooLarge { n, cap });
    }
    let d0 = bfs(g, base).expect("graphs are connected by construction");
    let maximal: Vec<VertexId> = (0..n as VertexId)
        .filter(|&v| g.neighbors(v).iter().all(|&w| d0.dist(w) <= d0.dist(v)))
        .collect();
    let mut minimal = vec![true; n];
    for &x in &maximal {
        let dx = bfs(g, x).expect("graphs are connected by construction");
        for v in 0..n {
            if d0.dist(v as VertexId) + dx.dist(v as VertexId) != d0.dist(x) {
                minimal[v] = false;
            }
        }
    }
    Ok((0..n as VertexId).filter(|&v| minimal[v as usize]).collect())
}

/// Outcome of [`equivalent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// The labelings agree after renaming coordinates: coordinate `i` of the
    /// first becomes coordinate `pi[i - 1]` of the second.
    Equivalent(Vec<usize>),
    NotEquivalent(String),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }
}

fn columns(e: &Embedding) -> Vec<Vec<VertexId>> {
    let mut cols = vec![Vec::new(); e.width()];
    for v in 0..e.vertex_count() as VertexId {
        for i in e.label(v).support() {
            cols[i - 1].push(v);
        }
    }
    cols
}

/// Decides whether two labelings of the same vertex set agree up to a
/// renaming of coordinates.
///
/// Coordinate `i` is determined by the set of vertices whose label has a one
/// there, so a renaming exists exactly when the two labelings have the same
/// multiset of such vertex sets.
pub fn equivalent(e1: &Embedding, e2: &Embedding) -> Equivalence {
    assert_eq!(
        e1.vertex_count(),
        e2.vertex_count(),
        "labelings must cover the same vertices"
    );
    if e1.width() != e2.width() {
        return Equivalence::NotEquivalent(format!(
            "widths {} and {} differ",
            e1.width(),
            e2.width()
        ));
    }
    let cols1 = columns(e1);
    let cols2 = columns(e2);
    let mut unmatched: HashMap<&[VertexId], Vec<usize>> = HashMap::new();
    for (j, col) in cols2.iter().enumerate() {
        unmatched.entry(col.as_slice()).or_default().push(j);
    }
    let mut pi = vec![0usize; e1.width()];
    for (i, col) in cols1.iter().enumerate() {
        match unmatched.get_mut(col.as_slice()).and_then(Vec::pop) {
            Some(j) => pi[i] = j + 1,
            None => {
                return Equivalence::NotEquivalent(format!(
                    "coordinate {} of the first labeling matches no coordinate of the second",
                    i + 1
                ))
            }
        }
    }
    debug_assert!(
        (0..e1.vertex_count() as VertexId).all(|v| &e1.label(v).permute(&pi) == e2.label(v)),
        "matched columns must reproduce the second labeling"
    );
    Equivalence::Equivalent(pi)
}

/// Reference recovery that knows nothing about where to root: tries every
/// maximum-degree vertex in id order as the zero vertex until the rooted
/// labeling verifies as proper. Worst-case cost is a full labeling per
/// candidate, against the recovery path's single labeling.
pub fn baseline_proper(g: &Graph) -> Result<ProperEmbedding, EmbedError> {
    let (_, dmax) = g.max_degree_vertex();
    for v in 0..g.vertex_count() as VertexId {
        if g.degree(v) != dmax {
            continue;
        }
        let Ok(e) = embed_proper_rooted(g, v) else {
            continue;
        };
        if !is_proper(g, &e).passed() {
            continue;
        }
        let width = e.width();
        return Ok(ProperEmbedding {
            embedding: e,
            minimal_vertex: v,
            shift: Word::zeros(width),
            isometric_root: v,
        });
    }
    Err(EmbedError::NoProperRoot { degree: dmax })
}

/// Audits a labeled instance against the structural laws relating a daisy
/// cube to its generators. `gens` must be the generator antichain the
/// instance was built from. Runs a breadth-first search per maximum-degree
/// vertex; refuses graphs above `cap` vertices.
///
/// The checks, one [`Check`] each:
/// - `proper`: as [`is_proper`].
/// - `down-degree-equals-weight`: a vertex with a weight-`k` label has
///   exactly `k` neighbors of smaller weight.
/// - `adjacent-labels-comparable`: across every edge, one label lies below
///   the other.
/// - `max-degree-flips-cover-used-coordinates`: at every maximum-degree
///   vertex, the coordinates flipped by its incident edges are exactly the
///   coordinates used anywhere in the labeling.
/// - `deep-vertices-have-two-down-neighbors`: from any maximum-degree
///   vertex, every vertex at distance two or more has at least two
///   neighbors on the previous level. This is the law that lets a labeling
///   be recovered by joining two already-labeled neighbors.
/// - `edge-separation`: no edge joins a vertex lying under generator `x`
///   but not under `meet(x, y)` to one lying under `y` but not under
///   `meet(x, y)`, for any two distinct maximal generators.
/// - `neighbors-share-a-generator`: every neighbor of a maximum-degree
///   vertex lies under one of that vertex's own maximal generators.
/// - `generator-support-union-spans-degree`: the supports of the maximal
///   generators above a maximum-degree vertex cover exactly as many
///   coordinates as its degree.
/// - `maximal-labels-match-generators`: the labels with no present upper
///   cover are exactly the maximal generators.
/// - `minimal-count-matches-generator-meet`: the number of minimal vertices
///   is two to the weight of the meet of the maximal generators.
/// - `labels-generated`: every label lies below some maximal generator.
pub fn structural_audit(
    g: &Graph,
    e: &Embedding,
    gens: &crate::daisy::GeneratorSet,
    cap: usize,
) -> Result<VerificationReport, VerifyError> {
    let n = g.vertex_count();
    assert_eq!(e.vertex_count(), n, "labeling must cover the graph");
    if n > cap {
        return Err(VerifyError::TooLarge { n, cap });
    }
    let mut checks = Vec::new();
    checks.push(is_proper(g, e));

    let weight: Vec<usize> = (0..n as VertexId).map(|v| e.label(v).weight()).collect();

    checks.push('down: {
        for v in 0..n as VertexId {
            let downs = g
                .neighbors(v)
                .iter()
                .filter(|&&u| weight[u as usize] < weight[v as usize])
                .count();
            if downs != weight[v as usize] {
                break 'down Check::fail(
                    "down-degree-equals-weight",
                    format!("vertex {v} labeled {} has {downs} lower neighbors", e.label(v)),
                );
            }
        }
        Check::pass("down-degree-equals-weight")
    });

    checks.push('cmp: {
        for &(u, v) in g.edges() {
            if !e.label(u).leq(e.label(v)) && !e.label(v).leq(e.label(u)) {
                break 'cmp Check::fail(
                    "adjacent-labels-comparable",
                    format!("edge ({u}, {v}) joins incomparable labels {} and {}", e.label(u), e.label(v)),
                );
            }
        }
        Check::pass("adjacent-labels-comparable")
    });

    let mut used = Word::zeros(e.width());
    for v in 0..n as VertexId {
        used = used.join(e.label(v));
    }
    let (_, dmax) = g.max_degree_vertex();
    let roots: Vec<VertexId> =
        (0..n as VertexId).filter(|&v| g.degree(v) == dmax).collect();

    checks.push('flips: {
        for &v in &roots {
            let mut flipped = Word::zeros(e.width());
            for &u in g.neighbors(v) {
                flipped = flipped.join(&e.label(u).xor(e.label(v)));
            }
            if flipped != used {
                break 'flips Check::fail(
                    "max-degree-flips-cover-used-coordinates",
                    format!("vertex {v} flips {flipped} but the labeling uses {used}"),
                );
            }
        }
        Check::pass("max-degree-flips-cover-used-coordinates")
    });

    checks.push('two: {
        for &r in &roots {
            let d = bfs(g, r).expect("graphs are connected by construction");
            for v in 0..n as VertexId {
                if d.dist(v) < 2 {
                    continue;
                }
                let below = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| d.dist(u) + 1 == d.dist(v))
                    .count();
                if below < 2 {
                    break 'two Check::fail(
                        "deep-vertices-have-two-down-neighbors",
                        format!("from root {r}, vertex {v} at distance {} has {below} lower neighbors", d.dist(v)),
                    );
                }
            }
        }
        Check::pass("deep-vertices-have-two-down-neighbors")
    });

    checks.push('sep: {
        let xs = gens.antichain();
        for &(u, v) in g.edges() {
            for x in xs {
                for y in xs {
                    if x == y {
                        continue;
                    }
                    let m = x.meet(y);
                    let (lu, lv) = (e.label(u), e.label(v));
                    if lu.leq(x) && !lu.leq(&m) && lv.leq(y) && !lv.leq(&m) {
                        break 'sep Check::fail(
                            "edge-separation",
                            format!("edge ({u}, {v}) crosses from under {x} to under {y} while avoiding their meet {m}"),
                        );
                    }
                }
            }
        }
        Check::pass("edge-separation")
    });

    checks.push('nbr: {
        for &v in &roots {
            let above: Vec<&Word> =
                gens.antichain().iter().filter(|x| e.label(v).leq(x)).collect();
            for &u in g.neighbors(v) {
                if !above.iter().any(|x| e.label(u).leq(x)) {
                    break 'nbr Check::fail(
                        "neighbors-share-a-generator",
                        format!("neighbor {u} of maximum-degree vertex {v} lies under none of its generators"),
                    );
                }
            }
        }
        Check::pass("neighbors-share-a-generator")
    });

    checks.push('sup: {
        for &v in &roots {
            let mut union = Word::zeros(e.width());
            for x in gens.antichain() {
                if e.label(v).leq(x) {
                    union = union.join(x);
                }
            }
            if union.weight() != dmax {
                break 'sup Check::fail(
                    "generator-support-union-spans-degree",
                    format!("generators above vertex {v} cover {} coordinates against degree {dmax}", union.weight()),
                );
            }
        }
        Check::pass("generator-support-union-spans-degree")
    });

    let index: HashMap<&Word, VertexId> =
        (0..n as VertexId).map(|v| (e.label(v), v)).collect();
    let mut maximal: Vec<Word> = (0..n as VertexId)
        .map(|v| e.label(v).clone())
        .filter(|w| w.ups().all(|u| !index.contains_key(&u)))
        .collect();
    maximal.sort();

    checks.push(if maximal == gens.antichain() {
        Check::pass("maximal-labels-match-generators")
    } else {
        Check::fail(
            "maximal-labels-match-generators",
            format!("{} maximal labels against {} maximal generators", maximal.len(), gens.antichain().len()),
        )
    });

    let xhat = gens.meet_all();
    let minimal = (0..n as VertexId).filter(|&v| e.label(v).leq(xhat)).count();
    checks.push(if minimal == 1 << xhat.weight() {
        Check::pass("minimal-count-matches-generator-meet")
    } else {
        Check::fail(
            "minimal-count-matches-generator-meet",
            format!("{minimal} minimal vertices against meet {xhat} of weight {}", xhat.weight()),
        )
    });

    checks.push('gen: {
        for v in 0..n as VertexId {
            if !gens.antichain().iter().any(|x| e.label(v).leq(x)) {
                break 'gen Check::fail(
                    "labels-generated",
                    format!("label {} of vertex {v} lies below no generator", e.label(v)),
                );
            }
        }
        Check::pass("labels-generated")
    });

    Ok(VerificationReport { checks })
}
