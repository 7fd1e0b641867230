//! Construction of daisy cubes from generator words, named instance
//! families, ground-truth stripping, and the `daisy-labels` /
//! `daisy-words` file formats.
//!
//! A daisy cube is the subgraph of a hypercube induced by all words lying
//! below at least one generator word; equivalently, by the downward closure
//! of the generators' maximal elements.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::embedder::Embedding;
use crate::graph::{content_lines, next_line, FormatError, Graph, VertexId};
use crate::words::Word;

/// Default bound on closure size enforced by [`build`].
pub const DEFAULT_CLOSURE_CAP: usize = 1 << 22;

#[derive(Debug, Error)]
pub enum DaisyError {
    #[error("generator set must contain at least one word")]
    EmptyGenerators,
    #[error("generator width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("closure exceeds the cap of {cap} vertices")]
    CapExceeded { cap: usize },
    #[error("family {0} requires a seed")]
    SeedRequired(FamilyName),
    #[error("{0}")]
    Format(#[from] FormatError),
}

/// A set of generator words together with its derived antichain of maximal
/// elements and their meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    width: usize,
    words: Vec<Word>,
    antichain: Vec<Word>,
    meet_all: Word,
}

impl GeneratorSet {
    /// Deduplicates and sorts `words`, derives the antichain of maximal
    /// elements, and records the meet of the antichain.
    pub fn new(words: Vec<Word>) -> Result<GeneratorSet, DaisyError> {
        let Some(first) = words.first() else {
            return Err(DaisyError::EmptyGenerators);
        };
        let width = first.width();
        if let Some(bad) = words.iter().find(|w| w.width() != width) {
            return Err(DaisyError::WidthMismatch(width, bad.width()));
        }
        let mut words = words;
        words.sort();
        words.dedup();
        let antichain = antichain_of(&words);
        let meet_all = antichain
            .iter()
            .skip(1)
            .fold(antichain[0].clone(), |acc, w| acc.meet(w));
        Ok(GeneratorSet { width, words, antichain, meet_all })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// The deduplicated generator words, sorted.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// The maximal generators: an antichain generating the same daisy cube.
    pub fn antichain(&self) -> &[Word] {
        &self.antichain
    }

    /// The meet of all maximal generators. Its weight counts the coordinates
    /// in which every maximal generator is one.
    pub fn meet_all(&self) -> &Word {
        &self.meet_all
    }

    /// The maximal generators lying above `w`.
    pub fn above(&self, w: &Word) -> Vec<Word> {
        self.antichain.iter().filter(|x| w.leq(x)).cloned().collect()
    }
}

/// The maximal elements of `words` (duplicates collapse).
pub fn antichain_of(words: &[Word]) -> Vec<Word> {
    let mut sorted = words.to_vec();
    sorted.sort();
    sorted.dedup();
    sorted
        .iter()
        .filter(|w| !sorted.iter().any(|x| *w != x && w.leq(x)))
        .cloned()
        .collect()
}

/// All words lying below at least one of `words`, sorted.
///
/// Runs by breadth-first descent with deduplication, so the cost is
/// proportional to the closure itself rather than to the full hypercube.
pub fn downward_closure(words: &[Word]) -> Vec<Word> {
    closure_capped(words, usize::MAX).expect("uncapped closure cannot overflow")
}

fn closure_capped(words: &[Word], cap: usize) -> Result<Vec<Word>, DaisyError> {
    let mut seen: HashSet<Word> = HashSet::new();
    let mut stack: Vec<Word> = Vec::new();
    for w in words {
        if seen.insert(w.clone()) {
            stack.push(w.clone());
        }
    }
    while let Some(w) = stack.pop() {
        if seen.len() > cap {
            return Err(DaisyError::CapExceeded { cap });
        }
        for d in w.downs() {
            if seen.insert(d.clone()) {
                stack.push(d);
            }
        }
    }
    if seen.len() > cap {
        return Err(DaisyError::CapExceeded { cap });
    }
    let mut out: Vec<Word> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// A daisy cube carrying its ground-truth labels and generators.
///
/// Vertex ids follow the sorted order of the closure, so the all-zeros word
/// is always vertex 0 and every edge `(u, v)` satisfies `u < v`.
#[derive(Clone, Debug)]
pub struct LabeledDaisyCube {
    pub graph: Graph,
    pub labels: Embedding,
    pub generators: GeneratorSet,
}

impl LabeledDaisyCube {
    /// The vertex carrying `w`, if any.
    pub fn vertex_of(&self, w: &Word) -> Option<VertexId> {
        self.labels.position_of(w)
    }

    /// See [`strip`].
    pub fn strip(&self, seed: u64) -> (Graph, Embedding) {
        strip(&self.graph, &self.labels, seed)
    }
}

/// Builds the daisy cube generated by `gens` with the default closure cap.
pub fn build(gens: &GeneratorSet) -> Result<LabeledDaisyCube, DaisyError> {
    build_with_cap(gens, DEFAULT_CLOSURE_CAP)
}

/// Builds the daisy cube generated by `gens`: vertices are the closure words
/// in sorted order, edges join words at Hamming distance one.
///
/// In a downward-closed word set, two words at Hamming distance one differ by
/// exactly one set bit, so scanning each word's lower covers enumerates every
/// edge exactly once.
pub fn build_with_cap(gens: &GeneratorSet, cap: usize) -> Result<LabeledDaisyCube, DaisyError> {
    let closure = closure_capped(gens.antichain(), cap)?;
    let index: HashMap<&Word, u32> =
        closure.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
    let mut edges = Vec::new();
    for (i, w) in closure.iter().enumerate() {
        for d in w.downs() {
            let j = index[&d];
            // Sorted order puts every lower cover before its parent.
            debug_assert!(j < i as u32);
            edges.push((j, i as u32));
        }
    }
    let graph = Graph::from_edges(closure.len(), edges)
        .expect("a downward closure induces a valid connected graph");
    let labels = Embedding::new(gens.width(), closure);
    Ok(LabeledDaisyCube { graph, labels, generators: gens.clone() })
}

/// The words on shortest paths between `u` and `v` in the hypercube: those
/// between `meet(u, v)` and `join(u, v)`. Contains `2^d` words for words at
/// Hamming distance `d`; intended for distances small enough to enumerate.
pub fn interval(u: &Word, v: &Word) -> Vec<Word> {
    let diff: Vec<usize> = u.xor(v).support().collect();
    assert!(diff.len() <= 30, "interval of dimension {} is too large to enumerate", diff.len());
    let base = u.meet(v);
    let mut out = Vec::with_capacity(1 << diff.len());
    for mask in 0u64..1 << diff.len() {
        let mut w = base.clone();
        for (bit, &coord) in diff.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                w.set(coord, true);
            }
        }
        out.push(w);
    }
    out.sort();
    out
}

/// Named instance families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyName {
    /// The full hypercube: single generator `1^h`.
    Hypercube,
    /// The hypercube minus its all-ones vertex: all weight-`h-1` words.
    QMinus,
    /// Words with no two adjacent ones; generated by the maximal such words.
    Fibonacci,
    /// Words with no two cyclically adjacent ones.
    Lucas,
    /// An antichain reduced from `max(2, h/2)` uniform random words.
    RandomAntichain,
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyName::Hypercube => "hypercube",
            FamilyName::QMinus => "qminus",
            FamilyName::Fibonacci => "fibonacci",
            FamilyName::Lucas => "lucas",
            FamilyName::RandomAntichain => "random-antichain",
        })
    }
}

impl FromStr for FamilyName {
    type Err = String;

    fn from_str(s: &str) -> Result<FamilyName, String> {
        match s {
            "hypercube" => Ok(FamilyName::Hypercube),
            "qminus" => Ok(FamilyName::QMinus),
            "fibonacci" => Ok(FamilyName::Fibonacci),
            "lucas" => Ok(FamilyName::Lucas),
            "random-antichain" => Ok(FamilyName::RandomAntichain),
            other => Err(format!(
                "unknown family {other:?} (expected hypercube, qminus, fibonacci, lucas, or random-antichain)"
            )),
        }
    }
}

/// Generator set for a named family at width `h`.
///
/// Only `random-antichain` consumes the seed; the same seed always produces
/// the same generators.
pub fn family(name: FamilyName, h: usize, seed: Option<u64>) -> Result<GeneratorSet, DaisyError> {
    assert!(h >= 1, "family width must be at least 1");
    let words = match name {
        FamilyName::Hypercube => vec![Word::ones(h)],
        FamilyName::QMinus => {
            if h == 1 {
                vec![Word::zeros(1)]
            } else {
                (1..=h).map(|i| Word::ones(h).xor(&Word::unit(h, i))).collect()
            }
        }
        FamilyName::Fibonacci => maximal_path_independent(h),
        FamilyName::Lucas => maximal_cycle_independent(h),
        FamilyName::RandomAntichain => {
            let seed = seed.ok_or(DaisyError::SeedRequired(name))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = (h / 2).max(2);
            (0..k)
                .map(|_| {
                    let mut w = Word::zeros(h);
                    for i in 1..=h {
                        w.set(i, rng.random_bool(0.5));
                    }
                    w
                })
                .collect()
        }
    };
    GeneratorSet::new(words)
}

/// Maximal words of width `h` with no two adjacent ones: ones form a maximal
/// independent set of the path on `h` vertices. Equivalently, no `11`, no
/// `000`, and no `00` touching either end.
fn maximal_path_independent(h: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut prefix: Vec<bool> = Vec::with_capacity(h);
    fn recurse(h: usize, prefix: &mut Vec<bool>, out: &mut Vec<Word>) {
        if prefix.len() == h {
            let tail_covered = *prefix.last().unwrap()
                || (h >= 2 && prefix[h - 2]);
            if tail_covered {
                let mut w = Word::zeros(h);
                for (i, &b) in prefix.iter().enumerate() {
                    if b {
                        w.set(i + 1, true);
                    }
                }
                out.push(w);
            }
            return;
        }
        let len = prefix.len();
        if len == 0 || !prefix[len - 1] {
            prefix.push(true);
            recurse(h, prefix, out);
            prefix.pop();
        }
        // A zero is allowed unless it would leave the first position, or
        // some middle position, with no one beside it.
        let blocked = (len == 1 && !prefix[0]) || (len >= 2 && !prefix[len - 1] && !prefix[len - 2]);
        if !blocked {
            prefix.push(false);
            recurse(h, prefix, out);
            prefix.pop();
        }
    }
    recurse(h, &mut prefix, &mut out);
    out.sort();
    out
}

/// Maximal words of width `h` with no two cyclically adjacent ones: ones form
/// a maximal independent set of the cycle on `h` vertices.
fn maximal_cycle_independent(h: usize) -> Vec<Word> {
    if h == 1 {
        // The one-vertex cycle is a self-loop: only the empty set is
        // independent, and it is vacuously maximal.
        return vec![Word::zeros(1)];
    }
    // Enumerate words with no linearly adjacent ones, then keep those that
    // respect the wrap-around and whose zeros all have a cyclic one-neighbor.
    let mut out = Vec::new();
    let mut prefix: Vec<bool> = Vec::with_capacity(h);
    fn recurse(h: usize, prefix: &mut Vec<bool>, out: &mut Vec<Word>) {
        if prefix.len() == h {
            if prefix[0] && prefix[h - 1] {
                return;
            }
            let maximal = (0..h).all(|i| {
                prefix[i] || prefix[(i + 1) % h] || prefix[(i + h - 1) % h]
            });
            if maximal {
                let mut w = Word::zeros(h);
                for (i, &b) in prefix.iter().enumerate() {
                    if b {
                        w.set(i + 1, true);
                    }
                }
                out.push(w);
            }
            return;
        }
        if prefix.is_empty() || !prefix[prefix.len() - 1] {
            prefix.push(true);
            recurse(h, prefix, out);
            prefix.pop();
        }
        prefix.push(false);
        recurse(h, prefix, out);
        prefix.pop();
    }
    recurse(h, &mut prefix, &mut out);
    out.sort();
    out
}

/// Renames vertices by `perm` (vertex `v` becomes `perm[v]`), keeping edge
/// order and normalizing each edge's endpoints. Returns the renamed graph and
/// the labels carried along as ground truth.
pub fn relabel(g: &Graph, labels: &Embedding, perm: &[VertexId]) -> (Graph, Embedding) {
    let n = g.vertex_count();
    assert_eq!(labels.vertex_count(), n, "labels must cover the graph");
    assert_eq!(perm.len(), n, "permutation must cover the graph");
    let mut hit = vec![false; n];
    for &p in perm {
        assert!((p as usize) < n && !hit[p as usize], "not a permutation");
        hit[p as usize] = true;
    }

    let edges = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (perm[u as usize], perm[v as usize]);
            (a.min(b), a.max(b))
        })
        .collect();
    let mut new_labels = vec![Word::zeros(labels.width()); n];
    for v in 0..n {
        new_labels[perm[v] as usize] = labels.label(v as VertexId).clone();
    }
    let graph = Graph::from_edges(n, edges).expect("renaming preserves validity");
    (graph, Embedding::new(labels.width(), new_labels))
}

/// Withholds the labels of an instance: renames vertices by a seed-derived
/// permutation and shuffles the edge list, returning the bare graph plus the
/// ground-truth labels under the new names.
///
/// Seed 0 is the identity: same names, same edge order.
pub fn strip(g: &Graph, labels: &Embedding, seed: u64) -> (Graph, Embedding) {
    let n = g.vertex_count();
    if seed == 0 {
        return (g.clone(), labels.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<VertexId> = (0..n as VertexId).collect();
    perm.shuffle(&mut rng);
    let (renamed, truth) = relabel(g, labels, &perm);
    let mut edges = renamed.edges().to_vec();
    edges.shuffle(&mut rng);
    let graph = Graph::from_edges(n, edges).expect("shuffling preserves validity");
    (graph, truth)
}

const LABELS_HEADER: &str = "daisy-labels 1";
const WORDS_HEADER: &str = "daisy-words 1";

/// Reads the `daisy-labels 1` format: header, `<n> <h>`, then one width-`h`
/// word per vertex in id order. Comments (`#`) and blank lines are ignored.
pub fn read_labels(reader: impl BufRead) -> Result<Embedding, FormatError> {
    let (n, h, words) = read_word_table(reader, LABELS_HEADER, "vertex and width counts")?;
    let _ = n;
    Ok(Embedding::new(h, words))
}

/// Writes the `daisy-labels 1` format. Inverse of [`read_labels`].
pub fn write_labels(e: &Embedding, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{LABELS_HEADER}")?;
    writeln!(out, "{} {}", e.vertex_count(), e.width())?;
    for w in e.labels() {
        writeln!(out, "{w}")?;
    }
    Ok(())
}

/// Reads the `daisy-words 1` format: header, `<k> <h>`, then `k` generator
/// words of width `h`.
pub fn read_words(reader: impl BufRead) -> Result<GeneratorSet, DaisyError> {
    let (_, _, words) = read_word_table(reader, WORDS_HEADER, "word and width counts")?;
    GeneratorSet::new(words)
}

/// Writes the `daisy-words 1` format: the deduplicated sorted generators.
pub fn write_words(gens: &GeneratorSet, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{WORDS_HEADER}")?;
    writeln!(out, "{} {}", gens.words().len(), gens.width())?;
    for w in gens.words() {
        writeln!(out, "{w}")?;
    }
    Ok(())
}

fn read_word_table(
    reader: impl BufRead,
    header: &str,
    counts_what: &str,
) -> Result<(usize, usize, Vec<Word>), FormatError> {
    let mut lines = content_lines(reader);
    let (line_no, first) = next_line(&mut lines, "header")?;
    if first.trim() != header {
        return Err(FormatError::at(line_no, format!("expected header {header:?}")));
    }
    let (line_no, counts) = next_line(&mut lines, counts_what)?;
    let mut parts = counts.split_whitespace();
    let parse = |part: Option<&str>| part.and_then(|p| p.parse::<usize>().ok());
    let (Some(n), Some(h), None) = (parse(parts.next()), parse(parts.next()), parts.next()) else {
        return Err(FormatError::at(line_no, "expected two counts"));
    };
    if n == 0 || h == 0 {
        return Err(FormatError::at(line_no, "counts must be at least 1"));
    }
    let mut words = Vec::with_capacity(n);
    for _ in 0..n {
        let (line_no, text) = next_line(&mut lines, "word")?;
        let w = Word::parse(&text).map_err(|e| FormatError::at(line_no, e.to_string()))?;
        if w.width() != h {
            return Err(FormatError::at(
                line_no,
                format!("word width {} disagrees with declared width {h}", w.width()),
            ));
        }
        words.push(w);
    }
    if let Some(extra) = lines.next() {
        let (line_no, _) = extra?;
        return Err(FormatError::at(line_no, "trailing content after word list"));
    }
    Ok((n, h, words))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn ws(strs: &[&str]) -> Vec<Word> {
        strs.iter().map(|s| w(s)).collect()
    }

    fn gens(strs: &[&str]) -> GeneratorSet {
        GeneratorSet::new(ws(strs)).unwrap()
    }

    #[test]
    fn antichain_drops_dominated_words() {
        let a = antichain_of(&ws(&["110", "100", "011"]));
        assert_eq!(a, ws(&["011", "110"]));
        // Duplicates collapse; a lone word is its own antichain.
        assert_eq!(antichain_of(&ws(&["101", "101"])), ws(&["101"]));
    }

    #[test]
    fn generator_set_derives_antichain_and_meet() {
        let g = gens(&["1110", "1101", "1000"]);
        assert_eq!(g.antichain(), &ws(&["1101", "1110"])[..]);
        assert_eq!(g.meet_all(), &w("1100"));
        let fig1 = gens(&["10011", "01011", "00111"]);
        assert_eq!(fig1.meet_all(), &w("00011"));
        assert_eq!(fig1.above(&w("00011")), ws(&["00111", "01011", "10011"]));
        assert_eq!(fig1.above(&w("10000")), ws(&["10011"]));
    }

    #[test]
    fn generator_set_rejects_bad_input() {
        assert!(matches!(GeneratorSet::new(vec![]), Err(DaisyError::EmptyGenerators)));
        assert!(matches!(
            GeneratorSet::new(ws(&["10", "100"])),
            Err(DaisyError::WidthMismatch(2, 3))
        ));
    }

    #[test]
    fn closure_by_descent() {
        let c = downward_closure(&ws(&["110", "011"]));
        assert_eq!(c, ws(&["000", "001", "010", "011", "100", "110"]));
        // Already sorted, zero word first.
        assert_eq!(c[0], Word::zeros(3));
    }

    #[test]
    fn closure_cap_is_enforced() {
        let g = gens(&["1111111111"]);
        assert!(matches!(
            build_with_cap(&g, 1000),
            Err(DaisyError::CapExceeded { cap: 1000 })
        ));
        assert!(build_with_cap(&g, 1024).is_ok());
    }

    #[test]
    fn build_small_cube() {
        let dc = build(&gens(&["111"])).unwrap();
        assert_eq!(dc.graph.vertex_count(), 8);
        assert_eq!(dc.graph.edge_count(), 12);
        assert_eq!(dc.labels.label(0), &w("000"));
        // Edges join words at Hamming distance one, lower id below.
        for &(u, v) in dc.graph.edges() {
            assert!(u < v);
            assert_eq!(dc.labels.label(u).hamming(dc.labels.label(v)), 1);
            assert!(dc.labels.label(u).leq(dc.labels.label(v)));
        }
    }

    #[test]
    fn build_is_insensitive_to_dominated_generators() {
        let a = build(&gens(&["110", "011"])).unwrap();
        let b = build(&gens(&["110", "011", "010", "000"])).unwrap();
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn interval_examples() {
        assert_eq!(interval(&w("000"), &w("101")), ws(&["000", "001", "100", "101"]));
        assert_eq!(interval(&w("110"), &w("110")), ws(&["110"]));
        // From zero, the interval is the principal downset.
        assert_eq!(interval(&Word::zeros(4), &w("1010")).len(), 4);
    }

    #[test]
    fn family_hypercube_and_qminus() {
        let q3 = build(&family(FamilyName::Hypercube, 3, None).unwrap()).unwrap();
        assert_eq!(q3.graph.vertex_count(), 8);
        assert_eq!(q3.graph.edge_count(), 12);

        let qm4 = family(FamilyName::QMinus, 4, None).unwrap();
        assert_eq!(qm4.antichain(), &ws(&["0111", "1011", "1101", "1110"])[..]);
        let dc = build(&qm4).unwrap();
        assert_eq!(dc.graph.vertex_count(), 15);
        assert!(dc.vertex_of(&w("1111")).is_none());

        // Width 1 degenerates to a single vertex.
        let k1 = build(&family(FamilyName::QMinus, 1, None).unwrap()).unwrap();
        assert_eq!(k1.graph.vertex_count(), 1);
    }

    #[test]
    fn family_fibonacci() {
        let f4 = family(FamilyName::Fibonacci, 4, None).unwrap();
        assert_eq!(f4.antichain(), &ws(&["0101", "1001", "1010"])[..]);
        let dc = build(&f4).unwrap();
        assert_eq!(dc.graph.vertex_count(), 8);
        // Vertex counts follow the Fibonacci numbers: F(h+2).
        let fib = |k: usize| -> usize {
            let (mut a, mut b) = (0usize, 1usize);
            for _ in 0..k {
                (a, b) = (b, a + b);
            }
            a
        };
        for h in 1..=10 {
            let dc = build(&family(FamilyName::Fibonacci, h, None).unwrap()).unwrap();
            assert_eq!(dc.graph.vertex_count(), fib(h + 2), "h={h}");
            for v in dc.labels.labels() {
                let sup: Vec<usize> = v.support().collect();
                assert!(sup.windows(2).all(|p| p[1] - p[0] >= 2), "adjacent ones in {v}");
            }
        }
    }

    #[test]
    fn family_lucas() {
        let l4 = family(FamilyName::Lucas, 4, None).unwrap();
        assert_eq!(l4.antichain(), &ws(&["0101", "1010"])[..]);
        // Vertex counts follow the Lucas numbers: 2, 1, 3, 4, 7, 11, ...
        let lucas = |k: usize| -> usize {
            let (mut a, mut b) = (2usize, 1usize);
            for _ in 0..k {
                (a, b) = (b, a + b);
            }
            a
        };
        for h in 1..=10 {
            let dc = build(&family(FamilyName::Lucas, h, None).unwrap()).unwrap();
            assert_eq!(dc.graph.vertex_count(), lucas(h), "h={h}");
            for v in dc.labels.labels() {
                let sup: Vec<usize> = v.support().collect();
                assert!(sup.windows(2).all(|p| p[1] - p[0] >= 2), "adjacent ones in {v}");
                assert!(
                    !(v.width() >= 2 && v.get(1) && v.get(v.width())),
                    "cyclically adjacent ones in {v}"
                );
            }
        }
    }

    #[test]
    fn family_random_antichain_is_seed_deterministic() {
        let a = family(FamilyName::RandomAntichain, 8, Some(42)).unwrap();
        let b = family(FamilyName::RandomAntichain, 8, Some(42)).unwrap();
        assert_eq!(a, b);
        let c = family(FamilyName::RandomAntichain, 8, Some(43)).unwrap();
        assert_ne!(a, c, "distinct seeds should give distinct generators here");
        assert!(matches!(
            family(FamilyName::RandomAntichain, 8, None),
            Err(DaisyError::SeedRequired(_))
        ));
        // The derived antichain really is one.
        for x in a.antichain() {
            for y in a.antichain() {
                assert!(x == y || !x.leq(y));
            }
        }
    }

    #[test]
    fn family_names_round_trip() {
        for name in ["hypercube", "qminus", "fibonacci", "lucas", "random-antichain"] {
            assert_eq!(name.parse::<FamilyName>().unwrap().to_string(), name);
        }
        assert!("petersen".parse::<FamilyName>().is_err());
    }

    #[test]
    fn strip_seed_zero_is_identity() {
        let dc = build(&family(FamilyName::QMinus, 4, None).unwrap()).unwrap();
        let (g, truth) = dc.strip(0);
        assert_eq!(g.edges(), dc.graph.edges());
        assert_eq!(truth, dc.labels);
    }

    #[test]
    fn strip_permutes_but_preserves_structure() {
        let dc = build(&family(FamilyName::QMinus, 4, None).unwrap()).unwrap();
        let (g, truth) = dc.strip(7);
        assert_eq!(g.vertex_count(), dc.graph.vertex_count());
        assert_eq!(g.edge_count(), dc.graph.edge_count());
        // Ground truth still explains every edge.
        for &(u, v) in g.edges() {
            assert_eq!(truth.label(u).hamming(truth.label(v)), 1);
        }
        // Same seed, same output; different seed, different naming.
        let (g2, truth2) = dc.strip(7);
        assert_eq!(g.edges(), g2.edges());
        assert_eq!(truth, truth2);
    }

    #[test]
    fn relabel_applies_an_explicit_permutation() {
        let dc = build(&family(FamilyName::Hypercube, 2, None).unwrap()).unwrap();
        // Reverse the ids.
        let perm: Vec<VertexId> = (0..4).rev().collect();
        let (g, truth) = relabel(&dc.graph, &dc.labels, &perm);
        assert_eq!(truth.label(3), &w("00"));
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn labels_file_round_trip() {
        let dc = build(&family(FamilyName::Fibonacci, 5, None).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_labels(&dc.labels, &mut buf).unwrap();
        let back = read_labels(buf.as_slice()).unwrap();
        assert_eq!(back, dc.labels);
    }

    #[test]
    fn words_file_round_trip() {
        let g = gens(&["10011", "01011", "00111"]);
        let mut buf = Vec::new();
        write_words(&g, &mut buf).unwrap();
        let back = read_words(buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn word_files_reject_malformed_input() {
        let cases: &[&str] = &[
            "daisy-labels 2\n1 1\n0\n",      // wrong version
            "daisy-labels 1\n2 2\n00\n",     // missing word line
            "daisy-labels 1\n1 3\n01\n",     // width disagreement
            "daisy-labels 1\n1 2\n0x\n",     // bad character
            "daisy-labels 1\n0 2\n",         // zero vertices
            "daisy-labels 1\n1 0\n\n",       // zero width
            "daisy-labels 1\n1 1\n0\n1\n",   // trailing content
        ];
        for case in cases {
            assert!(read_labels(case.as_bytes()).is_err(), "accepted: {case:?}");
        }
    }
}
