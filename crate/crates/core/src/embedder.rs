//! Recovery of hypercube embeddings from unlabeled graphs.
//!
//! [`embed_isometric`] roots a breadth-first labeling at a maximum-degree
//! vertex and recovers an isometric embedding of any daisy cube in O(n + m)
//! word operations. [`mark_extremal`] and [`minimal_shift`] then locate a
//! vertex that some proper embedding sends to the all-zeros word, and
//! [`proper_embed`] composes the three into a proper embedding: one whose
//! label set is closed downward, so the graph is the daisy cube generated by
//! its own maximal labels.

use std::collections::HashMap;
use std::hash::Hash;
use thiserror::Error;

use crate::graph::{prefetch_read, Graph, PageBuf, VertexId};
use crate::words::Word;

/// A per-vertex assignment of equal-width binary labels.
///
/// An embedding is *isometric* when graph distance equals Hamming distance of
/// labels, and *proper* when additionally the label set is closed downward.
/// Constructors only enforce shape; the semantic properties are the
/// verifier's concern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    width: usize,
    labels: Vec<Word>,
}

impl Embedding {
    /// Wraps labels, checking shape only: at least one label, all of width
    /// `width`. Panics otherwise.
    pub fn new(width: usize, labels: Vec<Word>) -> Embedding {
        assert!(!labels.is_empty(), "an embedding labels at least one vertex");
        assert!(
            labels.iter().all(|w| w.width() == width),
            "all labels must have width {width}"
        );
        Embedding { width, labels }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: VertexId) -> &Word {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[Word] {
        &self.labels
    }

    /// The vertex carrying `w`, if any.
    pub fn position_of(&self, w: &Word) -> Option<VertexId> {
        self.labels.iter().position(|x| x == w).map(|v| v as VertexId)
    }

    /// The vertex labeled `0^h`, if any.
    pub fn zero_vertex(&self) -> Option<VertexId> {
        self.position_of(&Word::zeros(self.width))
    }
}

#[derive(Debug, Error)]
pub enum EmbedError {
    /// The breadth-first labeling violated an invariant that holds in every
    /// daisy cube rooted at a maximum-degree vertex.
    #[error("not a daisy cube rooted at vertex {root}: {detail}")]
    NotDaisyHere { root: VertexId, detail: String },
    /// The shift computation produced a word that no vertex carries.
    #[error("not a daisy cube: shift word {shift} is not a vertex label")]
    ShiftNotALabel { shift: Word },
    /// No candidate root admits a proper labeling.
    #[error("not a daisy cube: no degree-{degree} root admits a proper labeling")]
    NoProperRoot { degree: usize },
}

/// Isometric embedding rooted at the smallest-id maximum-degree vertex.
/// Returns the embedding together with the chosen root, which carries `0^h`.
pub fn embed_isometric(g: &Graph) -> Result<(Embedding, VertexId), EmbedError> {
    let (root, _) = g.max_degree_vertex();
    let e = embed_isometric_at(g, root)?;
    Ok((e, root))
}

/// Isometric embedding rooted at `root`, which receives `0^h` where `h` is
/// the degree of `root`. Fails with "not a daisy cube rooted here" when the
/// labeling invariants break; succeeding on a graph that is not a daisy cube
/// is possible, and the verifier catches those cases.
pub fn embed_isometric_at(g: &Graph, root: VertexId) -> Result<Embedding, EmbedError> {
    embed_rooted(g, root, false).map(|(e, _)| e)
}

/// As [`embed_isometric_at`], but additionally requires the label set to be
/// closed downward and duplicate-free, failing fast on the first violation.
/// Exactly the acceptance test a proper embedding must pass, fused into the
/// traversal so wrong roots are abandoned early.
pub(crate) fn embed_proper_rooted(g: &Graph, root: VertexId) -> Result<Embedding, EmbedError> {
    embed_rooted(g, root, true).map(|(e, _)| e)
}

fn err_here(root: VertexId, detail: impl Into<String>) -> EmbedError {
    EmbedError::NotDaisyHere { root, detail: detail.into() }
}

/// Label arithmetic for the breadth-first labeling, monomorphized so that
/// widths fitting one machine word traverse arrays an eighth the size of
/// whole-word labels.
trait LabelOps {
    type Label: Clone + Eq + Hash;
    /// Per-vertex label storage; huge-paged when labels are machine words.
    type Buf: std::ops::DerefMut<Target = [Self::Label]>;

    fn width(&self) -> usize;
    /// Storage for `n` labels, all zero.
    fn label_buf(&self, n: usize) -> Self::Buf;
    fn zeros(&self) -> Self::Label;
    /// The unit label with a one at 1-based coordinate `i`.
    fn unit(&self, i: usize) -> Self::Label;
    fn join(&self, a: &Self::Label, b: &Self::Label) -> Self::Label;
    fn weight(&self, l: &Self::Label) -> usize;
    /// Calls `f` on every one-step-down label, ascending coordinate.
    fn for_each_down(&self, l: &Self::Label, f: impl FnMut(Self::Label));
    fn show(&self, l: &Self::Label) -> String;
    fn finish(&self, labels: Self::Buf) -> Vec<Word>;
}

/// Labels as whole words; any width.
struct WideLabels {
    h: usize,
}

impl LabelOps for WideLabels {
    type Label = Word;
    type Buf = Vec<Word>;

    fn width(&self) -> usize {
        self.h
    }

    fn label_buf(&self, n: usize) -> Vec<Word> {
        vec![self.zeros(); n]
    }

    fn zeros(&self) -> Word {
        Word::zeros(self.h)
    }

    fn unit(&self, i: usize) -> Word {
        Word::unit(self.h, i)
    }

    fn join(&self, a: &Word, b: &Word) -> Word {
        a.join(b)
    }

    fn weight(&self, l: &Word) -> usize {
        l.weight()
    }

    fn for_each_down(&self, l: &Word, mut f: impl FnMut(Word)) {
        for d in l.downs() {
            f(d);
        }
    }

    fn show(&self, l: &Word) -> String {
        l.to_string()
    }

    fn finish(&self, labels: Vec<Word>) -> Vec<Word> {
        labels
    }
}

/// Widest label a [`PackedLabels`] kernel can hold.
const PACKED_MAX_WIDTH: usize = 64;

/// Slots in the bounce buffer hot loops gather neighbor-indexed words into;
/// one chunk covers a whole adjacency list at any packed width.
const GATHER: usize = 64;

/// Labels packed into one machine word each; coordinate `i` is bit `i - 1`,
/// matching the block layout of [`Word`].
struct PackedLabels {
    h: usize,
}

impl PackedLabels {
    fn all_ones(&self) -> u64 {
        u64::MAX >> (64 - self.h)
    }
}

impl LabelOps for PackedLabels {
    type Label = u64;
    type Buf = PageBuf<u64>;

    fn width(&self) -> usize {
        self.h
    }

    fn label_buf(&self, n: usize) -> PageBuf<u64> {
        PageBuf::zeroed(n)
    }

    fn zeros(&self) -> u64 {
        0
    }

    fn unit(&self, i: usize) -> u64 {
        1 << (i - 1)
    }

    fn join(&self, a: &u64, b: &u64) -> u64 {
        a | b
    }

    fn weight(&self, l: &u64) -> usize {
        l.count_ones() as usize
    }

    fn for_each_down(&self, l: &u64, mut f: impl FnMut(u64)) {
        let mut rest = *l;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            f(l & !bit);
            rest ^= bit;
        }
    }

    fn show(&self, l: &u64) -> String {
        Word::from_block0(self.h, *l).to_string()
    }

    fn finish(&self, labels: PageBuf<u64>) -> Vec<Word> {
        labels.iter().map(|&b| Word::from_block0(self.h, b)).collect()
    }
}

/// Core breadth-first labeling.
///
/// The root gets `0^h`; its i-th neighbor in adjacency order gets the unit
/// word with coordinate i. Every deeper vertex is labeled as the join of the
/// labels of two distinct neighbors on the previous level; in a daisy cube
/// rooted at a maximum-degree vertex such a pair always exists, and every
/// qualifying pair yields the same join.
fn embed_raw<K: LabelOps>(
    g: &Graph,
    root: VertexId,
    check_closure: bool,
    k: &K,
) -> Result<(K::Buf, Vec<VertexId>), EmbedError> {
    let n = g.vertex_count();
    assert!(n < 1 << 31, "vertex count must fit in 31 bits");
    // Per-vertex traversal state packed into one word, so a cross edge reads
    // a single cache line: distance in bits 63..33, an assigned flag at bit
    // 32, and the discovery parent in the low half.
    const DIST_SHIFT: u32 = 33;
    const ASSIGNED: u64 = 1 << 32;
    const UNSEEN: u64 = u64::MAX;
    let mut state = PageBuf::<u64>::zeroed(n);
    state.fill(UNSEEN);
    let mut labels = k.label_buf(n);
    // Labels seen so far, for the fused closure/injectivity check.
    let mut seen: HashMap<K::Label, VertexId> = HashMap::new();

    let record = |v: VertexId,
                      labels: &[K::Label],
                      seen: &mut HashMap<K::Label, VertexId>|
     -> Result<(), EmbedError> {
        if !check_closure {
            return Ok(());
        }
        let w = &labels[v as usize];
        if let Some(&prev) = seen.get(w) {
            return Err(err_here(
                root,
                format!("vertices {prev} and {v} both labeled {}", k.show(w)),
            ));
        }
        let mut missing = None;
        k.for_each_down(w, |d| {
            if missing.is_none() && !seen.contains_key(&d) {
                missing = Some(d);
            }
        });
        if let Some(d) = missing {
            return Err(err_here(
                root,
                format!(
                    "label set not closed downward: {} present, {} missing",
                    k.show(w),
                    k.show(&d)
                ),
            ));
        }
        seen.insert(w.clone(), v);
        Ok(())
    };

    // The root is its own parent so the guard below never treats it as an
    // undiscovered vertex.
    state[root as usize] = ASSIGNED | root as u64;
    record(root, &labels, &mut seen)?;

    let mut queue: Vec<VertexId> = Vec::with_capacity(n);
    for (i, &v) in g.neighbors(root).iter().enumerate() {
        labels[v as usize] = k.unit(i + 1);
        state[v as usize] = 1 << DIST_SHIFT | ASSIGNED | root as u64;
        record(v, &labels, &mut seen)?;
        queue.push(v);
    }

    let mut head = 0;
    // Neighbor states are gathered branchlessly before the pass that acts on
    // them: the discovery branch is data-dependent and mispredicts freely,
    // and each flush would otherwise restart the loads queued behind it.
    let mut gathered = [0u64; GATHER];
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        // Staged lookahead so each fetch has a vertex of work to land
        // behind: list bounds two vertices past the current one, list lines
        // one past, and the gather issues its own loads with nothing in the
        // way.
        if let Some(&nv) = queue.get(head + 1) {
            g.prefetch_list_bounds(nv);
        }
        if let Some(&nv) = queue.get(head) {
            let p = g.neighbors(nv).as_ptr();
            prefetch_read(p);
            prefetch_read(p.wrapping_add(16));
        }
        let nbrs = g.neighbors(v);
        let sv = state[v as usize];
        let dz = (sv >> DIST_SHIFT) + 1;
        let discovery = dz << DIST_SHIFT | v as u64;
        for chunk in nbrs.chunks(GATHER) {
            for (slot, &z) in gathered.iter_mut().zip(chunk) {
                *slot = state[z as usize];
            }
            // A vertex appears at most once per list, so no slot is stale.
            for (&z, &sz) in chunk.iter().zip(&gathered) {
                if sz == UNSEEN {
                    state[z as usize] = discovery;
                    queue.push(z);
                } else if sz >> DIST_SHIFT == dz && sz & ASSIGNED == 0 && sz as u32 != v {
                    // v is a second down-neighbor of z: join it with the
                    // first. Every qualifying pair yields the same join, so
                    // the first one settles the label and later pairs are
                    // skipped.
                    let p = sz as u32;
                    if sv & ASSIGNED == 0 || state[p as usize] & ASSIGNED == 0 {
                        return Err(err_here(
                            root,
                            format!("vertex {z} reached before both down-neighbors were labeled"),
                        ));
                    }
                    let w = k.join(&labels[v as usize], &labels[p as usize]);
                    if k.weight(&w) as u64 != dz {
                        return Err(err_here(
                            root,
                            format!(
                                "label weight {} differs from level {dz} at vertex {z}",
                                k.weight(&w)
                            ),
                        ));
                    }
                    labels[z as usize] = w;
                    state[z as usize] = sz | ASSIGNED;
                    record(z, &labels, &mut seen)?;
                }
            }
        }
    }

    if let Some(z) = (0..n).find(|&z| state[z] & ASSIGNED == 0) {
        let detail = if state[z] == UNSEEN {
            format!("vertex {z} unreachable from the root")
        } else {
            format!(
                "vertex {z} at level {} has fewer than two down-neighbors",
                state[z] >> DIST_SHIFT
            )
        };
        return Err(err_here(root, detail));
    }

    let parents = state.iter().map(|&s| s as VertexId).collect();
    Ok((labels, parents))
}

fn embed_with<K: LabelOps>(
    g: &Graph,
    root: VertexId,
    check_closure: bool,
    k: K,
) -> Result<(Embedding, Vec<VertexId>), EmbedError> {
    let (labels, parents) = embed_raw(g, root, check_closure, &k)?;
    Ok((Embedding::new(k.width(), k.finish(labels)), parents))
}

fn embed_rooted(
    g: &Graph,
    root: VertexId,
    check_closure: bool,
) -> Result<(Embedding, Vec<VertexId>), EmbedError> {
    let n = g.vertex_count();
    assert!((root as usize) < n, "root out of range");

    if n == 1 {
        // A single vertex has degree 0; give it the one-coordinate zero word.
        return Ok((Embedding::new(1, vec![Word::zeros(1)]), vec![root]));
    }

    let h = g.degree(root);
    if h <= PACKED_MAX_WIDTH {
        embed_with(g, root, check_closure, PackedLabels { h })
    } else {
        embed_with(g, root, check_closure, WideLabels { h })
    }
}

/// Bookkeeping produced by [`mark_extremal`].
#[derive(Clone, Debug)]
pub struct MarkState {
    /// Vertices partitioned by label weight: `levels[i]` holds weight-`i`
    /// vertices in id order. A trailing entry past the top weight is kept
    /// empty so the level above any vertex can be indexed.
    pub levels: Vec<Vec<VertexId>>,
    /// Mark per vertex: zero, or the vertex's own weight.
    pub q: Vec<u32>,
    /// Breadth-first discovery parent from the embedding root (the root is
    /// its own parent).
    pub parent: Vec<VertexId>,
}

impl MarkState {
    /// Vertices with a nonzero mark, in id order.
    pub fn marked(&self) -> Vec<VertexId> {
        (0..self.q.len() as VertexId).filter(|&v| self.q[v as usize] != 0).collect()
    }
}

/// Marks the extremal vertices of an isometric embedding rooted at `root`.
///
/// Sweeping weight levels upward, a vertex is marked when the interval from
/// the root to it induces a cube on its whole level-below neighborhood (all
/// of whose marks it then consumes), or when it has no neighbor above. The
/// surviving marks identify the vertices relevant to [`minimal_shift`]: the
/// maximal vertices of the rooted sub-daisy-cube, plus the vertices all of
/// whose neighbors lie below.
pub fn mark_extremal(g: &Graph, e: &Embedding, root: VertexId) -> MarkState {
    mark_extremal_with(g, e, bfs_parents(g, root))
}

/// Marking core for callers that already hold the breadth-first parents of
/// the labeling's root, sparing the extra traversal.
fn mark_extremal_with(g: &Graph, e: &Embedding, parent: Vec<VertexId>) -> MarkState {
    let n = g.vertex_count();
    assert_eq!(e.vertex_count(), n, "embedding must cover the graph");
    let h = e.width();

    let mut wq: Vec<u64> =
        (0..n).map(|v| (e.label(v as VertexId).weight() as u64) << 32).collect();
    let levels = weight_levels(&wq, h);
    mark_sweep(g, &mut wq, &levels, h);

    let q = wq.iter().map(|&s| s as u32).collect();
    MarkState { levels, q, parent }
}

/// Vertices partitioned by weight, with one empty level on top.
fn weight_levels(wq: &[u64], h: usize) -> Vec<Vec<VertexId>> {
    let mut levels: Vec<Vec<VertexId>> = vec![Vec::new(); h + 2];
    for v in 0..wq.len() as VertexId {
        levels[(wq[v as usize] >> 32) as usize].push(v);
    }
    levels
}

/// Sweep of the extremal marking. Weight and mark per vertex share one word
/// so a cross edge reads a single cache line: weight in the high half, mark
/// in the low half. Weights arrive in `wq`; marks leave in its low halves.
///
/// Marks consumed by a level-`i` vertex are cleared only once the whole
/// level has been scanned, so overlapping cubes on one level each see the
/// marks as they stood when the level began.
fn mark_sweep(g: &Graph, wq: &mut [u64], levels: &[Vec<VertexId>], h: usize) {
    // Same bounce-buffer discipline as the labeling loop: gather the
    // neighbor words branchlessly, then let the data-dependent tests run
    // against slots that are already resident.
    let mut gathered = [0u64; GATHER];
    for i in 1..=h {
        let ii = i as u64;
        let mut fired: Vec<VertexId> = Vec::new();
        let mut no_up: Vec<VertexId> = Vec::new();
        for (t, &x) in levels[i].iter().enumerate() {
            if let Some(&nx) = levels[i].get(t + 2) {
                g.prefetch_list_bounds(nx);
            }
            if let Some(&nx) = levels[i].get(t + 1) {
                let p = g.neighbors(nx).as_ptr();
                prefetch_read(p);
                prefetch_read(p.wrapping_add(16));
            }
            let mut sum = 0u64;
            let mut has_up = false;
            for chunk in g.neighbors(x).chunks(GATHER) {
                for (slot, &y) in gathered.iter_mut().zip(chunk) {
                    *slot = wq[y as usize];
                }
                for &s in gathered.iter().take(chunk.len()) {
                    let wy = s >> 32;
                    sum += if wy + 1 == ii { s as u32 as u64 } else { 0 };
                    has_up |= wy == ii + 1;
                }
            }
            // The sum reaches i(i-1) exactly when x has i down-neighbors and
            // every one is still marked from the previous level: marks on
            // that level are i-1 or zero, and a weight-i vertex has at most
            // i neighbors below.
            if sum == ii * (ii - 1) {
                fired.push(x);
            } else if !has_up {
                no_up.push(x);
            }
        }
        // Deferred application: consume the marks below every fired vertex,
        // then mark this level's survivors.
        for (t, &x) in fired.iter().enumerate() {
            if let Some(&nx) = fired.get(t + 2) {
                g.prefetch_list_bounds(nx);
            }
            if let Some(&nx) = fired.get(t + 1) {
                let p = g.neighbors(nx).as_ptr();
                prefetch_read(p);
                prefetch_read(p.wrapping_add(16));
            }
            for chunk in g.neighbors(x).chunks(GATHER) {
                for (slot, &y) in gathered.iter_mut().zip(chunk) {
                    *slot = wq[y as usize];
                }
                // A vertex appears at most once per list, so the slots stay
                // in step with the writes below.
                for (&y, &s) in chunk.iter().zip(&gathered) {
                    if (s >> 32) + 1 == ii {
                        wq[y as usize] = s & !(u32::MAX as u64);
                    }
                }
            }
        }
        for &x in fired.iter().chain(&no_up) {
            wq[x as usize] |= ii;
        }
    }
}

fn bfs_parents(g: &Graph, root: VertexId) -> Vec<VertexId> {
    let n = g.vertex_count();
    const UNSEEN: u32 = u32::MAX;
    let mut parent = vec![UNSEEN; n];
    parent[root as usize] = root;
    let mut queue = Vec::with_capacity(n);
    queue.push(root);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &z in g.neighbors(v) {
            if parent[z as usize] == UNSEEN {
                parent[z as usize] = v;
                queue.push(z);
            }
        }
    }
    parent
}

/// The meet of the labels of all marked vertices, starting from `1^h`.
///
/// Candidate XOR shift for a proper relabeling. On coordinates pinned by a
/// missing direction a proper shift may need a different bit; `proper_embed`
/// overrides those before use.
pub fn minimal_shift(e: &Embedding, marks: &MarkState) -> Word {
    let mut s = Word::ones(e.width());
    for (v, &mark) in marks.q.iter().enumerate() {
        if mark != 0 {
            s = s.meet(e.label(v as VertexId));
        }
    }
    s
}

/// A proper embedding together with how it was obtained.
#[derive(Clone, Debug)]
pub struct ProperEmbedding {
    /// Labels closed downward; the graph is the daisy cube they generate.
    pub embedding: Embedding,
    /// The vertex labeled `0^h`.
    pub minimal_vertex: VertexId,
    /// XOR offset between the rooted isometric labeling and the proper one.
    pub shift: Word,
    /// Root of the underlying isometric labeling.
    pub isometric_root: VertexId,
}

/// Shift bits pinned by directions that are missing somewhere.
///
/// Returns `(mask, value)`. Shifting every label by `s` keeps the label set
/// closed downward exactly when `s` agrees with `value` on `mask`: a vertex
/// `v` with no edge in direction `i` pins bit `i` of the shift to bit `i` of
/// its own label, since any other choice puts a one at `i` into the shifted
/// label of `v` whose one-step-down word belongs to no vertex. Off-mask
/// directions carry an edge at every vertex, so either bit keeps closure.
fn shift_pins(g: &Graph, e: &Embedding) -> Result<(Word, Word), EmbedError> {
    let h = e.width();
    let all = Word::ones(h);
    let mut ones = Word::zeros(h);
    let mut zeros = Word::zeros(h);
    for v in 0..g.vertex_count() as VertexId {
        let lv = e.label(v);
        let mut used = Word::zeros(h);
        for &z in g.neighbors(v) {
            used.or_xor(lv, e.label(z));
        }
        let miss = used.flip_under(&all);
        let pinned_here = lv.meet(&miss);
        ones = ones.join(&pinned_here);
        zeros = zeros.join(&pinned_here.xor(&miss));
    }
    if ones.meet(&zeros).weight() != 0 {
        let (root, _) = g.max_degree_vertex();
        return Err(err_here(root, "vertices disagree on a pinned shift coordinate"));
    }
    Ok((ones.join(&zeros), ones))
}

/// As [`shift_pins`], over packed labels.
fn shift_pins_packed(
    g: &Graph,
    l64: &[u64],
    root: VertexId,
    all: u64,
) -> Result<(u64, u64), EmbedError> {
    let n = g.vertex_count() as VertexId;
    let mut ones = 0u64;
    let mut zeros = 0u64;
    for v in 0..n {
        // The vertex scan is sequential, so the lists stream by themselves;
        // only the labels of the next vertex's neighbors need pulling.
        if v + 1 < n {
            for &z in g.neighbors(v + 1) {
                prefetch_read(l64.as_ptr().wrapping_add(z as usize));
            }
        }
        let lv = l64[v as usize];
        let mut used = 0u64;
        for &z in g.neighbors(v) {
            used |= lv ^ l64[z as usize];
        }
        let miss = used ^ all;
        let pinned_here = lv & miss;
        ones |= pinned_here;
        zeros |= pinned_here ^ miss;
    }
    if ones & zeros != 0 {
        return Err(err_here(root, "vertices disagree on a pinned shift coordinate"));
    }
    Ok((ones | zeros, ones))
}

/// [`proper_embed`] over packed labels, converting to words only at the end.
fn proper_packed(g: &Graph, root: VertexId, h: usize) -> Result<ProperEmbedding, EmbedError> {
    let t0 = std::time::Instant::now();
    let k = PackedLabels { h };
    let (l64, _) = embed_raw(g, root, false, &k)?;
    let t1 = std::time::Instant::now();

    let mut wq = PageBuf::<u64>::zeroed(l64.len());
    for (s, &b) in wq.iter_mut().zip(l64.iter()) {
        *s = (b.count_ones() as u64) << 32;
    }
    let t2 = std::time::Instant::now();
    let levels = weight_levels(&wq, h);
    let t3 = std::time::Instant::now();
    mark_sweep(g, &mut wq, &levels, h);
    let t4 = std::time::Instant::now();

    let mut meet = k.all_ones();
    for (v, &s) in wq.iter().enumerate() {
        if s as u32 != 0 {
            meet &= l64[v];
        }
    }
    let t5 = std::time::Instant::now();
    let (mask, value) = shift_pins_packed(g, &l64, root, k.all_ones())?;
    let t6 = std::time::Instant::now();
    let s = meet & !mask | value;
    let Some(v) = l64.iter().position(|&b| b == s) else {
        return Err(EmbedError::ShiftNotALabel { shift: Word::from_block0(h, s) });
    };
    let labels = l64.iter().map(|&b| Word::from_block0(h, s ^ b)).collect();
    let t7 = std::time::Instant::now();
    if std::env::var_os("PHASE_TIMING").is_some() {
        eprintln!(
            "h={h} bfs={:.2} wqfill={:.2} levels={:.2} sweep={:.2} meet={:.2} pins={:.2} out={:.2}",
            (t1 - t0).as_secs_f64() * 1e3,
            (t2 - t1).as_secs_f64() * 1e3,
            (t3 - t2).as_secs_f64() * 1e3,
            (t4 - t3).as_secs_f64() * 1e3,
            (t5 - t4).as_secs_f64() * 1e3,
            (t6 - t5).as_secs_f64() * 1e3,
            (t7 - t6).as_secs_f64() * 1e3,
        );
    }
    Ok(ProperEmbedding {
        embedding: Embedding::new(h, labels),
        minimal_vertex: v as VertexId,
        shift: Word::from_block0(h, s),
        isometric_root: root,
    })
}

/// Recovers a proper embedding of an unlabeled daisy cube in O(n + m) word
/// operations: isometric labeling, extremal marking, then an XOR shift that
/// moves the zero word onto a minimal vertex. Pinned coordinates take the
/// bit of the vertex that pins them; the rest take the meet of the marked
/// labels, so a hypercube shifts to the antipode of its root.
pub fn proper_embed(g: &Graph) -> Result<ProperEmbedding, EmbedError> {
    if g.vertex_count() == 1 {
        // Degenerate single vertex: proper over one coordinate.
        return Ok(ProperEmbedding {
            embedding: Embedding::new(1, vec![Word::zeros(1)]),
            minimal_vertex: 0,
            shift: Word::zeros(1),
            isometric_root: 0,
        });
    }
    let (root, _) = g.max_degree_vertex();
    let h = g.degree(root);
    if h <= PACKED_MAX_WIDTH {
        return proper_packed(g, root, h);
    }
    let (beta, parents) = embed_rooted(g, root, false)?;
    let marks = mark_extremal_with(g, &beta, parents);
    let (mask, value) = shift_pins(g, &beta)?;
    let meet = minimal_shift(&beta, &marks);
    let s = meet.xor(&meet.meet(&mask)).join(&value);
    let Some(v) = beta.position_of(&s) else {
        return Err(EmbedError::ShiftNotALabel { shift: s });
    };
    let labels = beta.labels().iter().map(|w| s.xor(w)).collect();
    Ok(ProperEmbedding {
        embedding: Embedding::new(beta.width(), labels),
        minimal_vertex: v,
        shift: s,
        isometric_root: root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::bfs;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    /// Q_3 with ids 0..7; bit b of the id is coordinate b+1.
    fn q3() -> Graph {
        let mut edges = Vec::new();
        for v in 0u32..8 {
            for b in 0..3 {
                if v & 1 << b == 0 {
                    edges.push((v, v | 1 << b));
                }
            }
        }
        Graph::from_edges(8, edges).unwrap()
    }

    #[test]
    fn embedding_accessors() {
        let e = Embedding::new(2, vec![w("00"), w("10"), w("01")]);
        assert_eq!(e.width(), 2);
        assert_eq!(e.vertex_count(), 3);
        assert_eq!(e.label(1), &w("10"));
        assert_eq!(e.zero_vertex(), Some(0));
        assert_eq!(e.position_of(&w("11")), None);
    }

    #[test]
    fn cube_embedding_is_a_bijection_onto_all_words() {
        let g = q3();
        let (e, root) = embed_isometric(&g).unwrap();
        assert_eq!(root, 0);
        assert_eq!(e.width(), 3);
        let mut seen: Vec<String> = e.labels().iter().map(|x| x.to_string()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8);
        // Distances from the root match label weights.
        let d = bfs(&g, root).unwrap();
        for v in 0..8u32 {
            assert_eq!(e.label(v).weight(), d.dist(v) as usize);
        }
    }

    #[test]
    fn embedding_is_deterministic() {
        let g = q3();
        let (e1, _) = embed_isometric(&g).unwrap();
        let (e2, _) = embed_isometric(&g).unwrap();
        assert_eq!(e1, e2);
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, vec![(0, 1)]).unwrap();
        let (e, root) = embed_isometric(&g).unwrap();
        assert_eq!(root, 0);
        assert_eq!(e.label(0), &w("0"));
        assert_eq!(e.label(1), &w("1"));
    }

    #[test]
    fn single_vertex() {
        let g = Graph::from_edges(1, vec![]).unwrap();
        let p = proper_embed(&g).unwrap();
        assert_eq!(p.embedding.label(0), &w("0"));
        assert_eq!(p.minimal_vertex, 0);
    }

    #[test]
    fn spider_tree_is_rejected() {
        // Three paths of length 2 glued at a center: the leaves sit at level 2
        // with a single down-neighbor each.
        let g = Graph::from_edges(7, vec![(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)]).unwrap();
        let err = embed_isometric(&g).unwrap_err();
        assert!(matches!(err, EmbedError::NotDaisyHere { .. }), "{err}");
        assert!(err.to_string().contains("not a daisy cube"));
    }

    #[test]
    fn marking_on_cube_keeps_only_the_antipode() {
        let g = q3();
        let (e, root) = embed_isometric(&g).unwrap();
        let marks = mark_extremal(&g, &e, root);
        let marked = marks.marked();
        assert_eq!(marked.len(), 1);
        assert_eq!(e.label(marked[0]), &w("111"));
        assert_eq!(minimal_shift(&e, &marks), w("111"));
        // Level partition mirrors weights, with an empty level on top.
        assert_eq!(marks.levels.iter().map(Vec::len).collect::<Vec<_>>(), [1, 3, 3, 1, 0]);
        assert_eq!(marks.parent[root as usize], root);
    }

    #[test]
    fn proper_embedding_of_a_cube_covers_all_words() {
        let g = q3();
        let p = proper_embed(&g).unwrap();
        // The shift relocates the zero label onto the marked antipode.
        assert_eq!(p.shift, w("111"));
        assert_eq!(p.embedding.label(p.minimal_vertex), &w("000"));
        let mut seen: Vec<String> = p.embedding.labels().iter().map(|x| x.to_string()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn mark_state_exposes_weight_levels() {
        let g = Graph::from_edges(3, vec![(0, 1), (0, 2)]).unwrap();
        let (e, root) = embed_isometric(&g).unwrap();
        let marks = mark_extremal(&g, &e, root);
        assert_eq!(marks.levels[0], vec![0]);
        assert_eq!(marks.levels[1], vec![1, 2]);
        assert!(marks.levels[2].is_empty() && marks.levels[3].is_empty());
        // Both leaves have no up-neighbors, so both stay marked.
        assert_eq!(marks.marked(), vec![1, 2]);
    }

    #[test]
    fn packed_and_wide_kernels_agree() {
        // Both kernels label the same graphs identically; narrow widths
        // normally take the packed path, so drive the wide one directly.
        let instances = [
            crate::daisy::family(crate::daisy::FamilyName::QMinus, 5, None).unwrap(),
            crate::daisy::family(crate::daisy::FamilyName::Fibonacci, 7, None).unwrap(),
            crate::daisy::family(crate::daisy::FamilyName::RandomAntichain, 9, Some(5)).unwrap(),
        ];
        for gens in instances {
            let dc = crate::daisy::build(&gens).unwrap();
            let (g, _) = crate::daisy::strip(&dc.graph, &dc.labels, 77);
            let (root, _) = g.max_degree_vertex();
            let h = g.degree(root);
            let packed = embed_with(&g, root, false, PackedLabels { h }).unwrap();
            let wide = embed_with(&g, root, false, WideLabels { h }).unwrap();
            assert_eq!(packed.0, wide.0);
            assert_eq!(packed.1, wide.1);

            let p = proper_embed(&g).unwrap();
            let marks = mark_extremal_with(&g, &packed.0, packed.1);
            let (mask, value) = shift_pins(&g, &packed.0).unwrap();
            let meet = minimal_shift(&packed.0, &marks);
            let s = meet.xor(&meet.meet(&mask)).join(&value);
            assert_eq!(p.shift, s);
            assert_eq!(p.minimal_vertex, packed.0.position_of(&s).unwrap());
            for v in 0..g.vertex_count() as VertexId {
                assert_eq!(p.embedding.label(v), &s.xor(packed.0.label(v)));
            }
        }
    }
}
