//! Undirected simple graphs over dense vertex ids, breadth-first distance
//! fields, and the `daisy-graph` file format.

use std::collections::HashSet;
use std::io::{BufRead, Write};
use thiserror::Error;

/// Vertex identifier; vertices of a graph on `n` vertices are `0..n-1`.
pub type VertexId = u32;

/// Hints the processor to pull the cache line holding `p` ahead of its use.
/// Traversals of large graphs visit per-vertex state in data-dependent
/// order; issuing the fetches for a whole adjacency list up front lets the
/// misses overlap instead of stalling one edge at a time. No-op where the
/// target offers no such hint.
#[inline(always)]
pub(crate) fn prefetch_read<T>(p: *const T) {
    #[cfg(target_arch = "x86_64")]
    // SAFETY: prefetch never faults and touches no architectural state; any
    // address, valid or not, is permitted.
    unsafe {
        std::arch::x86_64::_mm_prefetch::<{ std::arch::x86_64::_MM_HINT_T0 }>(p.cast());
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = p;
}

#[cfg(unix)]
pub(crate) use page_mapped::PageBuf;
#[cfg(not(unix))]
pub(crate) use page_plain::PageBuf;

/// Zero-filled element buffer mapped page-aligned outside the allocator
/// heap and tagged for transparent huge pages. Data-dependent traversals
/// over multi-megabyte arrays otherwise spend much of their time walking
/// page tables for allocator-recycled 4 KiB pages, and the huge-page hint
/// only helps mappings that are not yet populated.
#[cfg(unix)]
mod page_mapped {
    use std::ptr::NonNull;

    pub(crate) struct PageBuf<T> {
        ptr: NonNull<T>,
        len: usize,
    }

    impl<T: Copy> PageBuf<T> {
        /// Buffer of `len` elements, every byte zero. Callers pick element
        /// types whose all-zeroes pattern is a valid value.
        pub(crate) fn zeroed(len: usize) -> PageBuf<T> {
            if len == 0 {
                return PageBuf { ptr: NonNull::dangling(), len: 0 };
            }
            let bytes = len * std::mem::size_of::<T>();
            // SAFETY: fresh anonymous private mapping of `bytes` zeroed
            // bytes, exclusively owned and unmapped only in drop.
            unsafe {
                let p = libc::mmap(
                    std::ptr::null_mut(),
                    bytes,
                    libc::PROT_READ | libc::PROT_WRITE,
                    libc::MAP_PRIVATE | libc::MAP_ANONYMOUS,
                    -1,
                    0,
                );
                assert!(p != libc::MAP_FAILED, "cannot map {bytes} bytes");
                #[cfg(target_os = "linux")]
                libc::madvise(p, bytes, libc::MADV_HUGEPAGE);
                PageBuf { ptr: NonNull::new_unchecked(p.cast()), len }
            }
        }
    }

    impl<T> Drop for PageBuf<T> {
        fn drop(&mut self) {
            if self.len > 0 {
                // SAFETY: exactly the mapping created in `zeroed`.
                unsafe {
                    libc::munmap(
                        self.ptr.as_ptr().cast(),
                        self.len * std::mem::size_of::<T>(),
                    );
                }
            }
        }
    }

    impl<T> std::ops::Deref for PageBuf<T> {
        type Target = [T];
        fn deref(&self) -> &[T] {
            // SAFETY: `ptr` holds `len` initialized elements for the
            // lifetime of the buffer.
            unsafe { std::slice::from_raw_parts(self.ptr.as_ptr(), self.len) }
        }
    }

    impl<T> std::ops::DerefMut for PageBuf<T> {
        fn deref_mut(&mut self) -> &mut [T] {
            // SAFETY: as in deref, with exclusive access through `&mut self`.
            unsafe { std::slice::from_raw_parts_mut(self.ptr.as_ptr(), self.len) }
        }
    }

    impl<T: Copy> Clone for PageBuf<T> {
        fn clone(&self) -> PageBuf<T> {
            let mut new = PageBuf::zeroed(self.len);
            new.copy_from_slice(self);
            new
        }
    }

    impl<T: std::fmt::Debug> std::fmt::Debug for PageBuf<T> {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            std::fmt::Debug::fmt(&**self, f)
        }
    }

    // SAFETY: the mapping is exclusively owned and accessed only through
    // the usual shared/exclusive reference rules.
    unsafe impl<T: Send> Send for PageBuf<T> {}
    unsafe impl<T: Sync> Sync for PageBuf<T> {}
}

/// Portable stand-in for the mapped buffer on targets without `mmap`.
#[cfg(not(unix))]
mod page_plain {
    #[derive(Clone)]
    pub(crate) struct PageBuf<T>(Box<[T]>);

    impl<T: Copy + Default> PageBuf<T> {
        pub(crate) fn zeroed(len: usize) -> PageBuf<T> {
            PageBuf(vec![T::default(); len].into_boxed_slice())
        }
    }

    impl<T> std::ops::Deref for PageBuf<T> {
        type Target = [T];
        fn deref(&self) -> &[T] {
            &self.0
        }
    }

    impl<T> std::ops::DerefMut for PageBuf<T> {
        fn deref_mut(&mut self) -> &mut [T] {
            &mut self.0
        }
    }

    impl<T: std::fmt::Debug> std::fmt::Debug for PageBuf<T> {
        fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            std::fmt::Debug::fmt(&**self, f)
        }
    }
}

/// A finite connected simple graph.
///
/// Adjacency lists keep neighbors in the order their edges were supplied,
/// which makes every traversal of a given `Graph` value deterministic. They
/// are stored back to back in one flat array so traversals stream through
/// contiguous memory.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    offsets: PageBuf<usize>,
    flat: PageBuf<VertexId>,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex count must be at least 1")]
    Empty,
    #[error("edge ({0}, {1}) out of range for {2} vertices")]
    EdgeOutOfRange(VertexId, VertexId, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(VertexId, VertexId),
    #[error("graph is not connected (vertex {0} unreachable from vertex {1})")]
    Disconnected(VertexId, VertexId),
    #[error("{0}")]
    Format(#[from] FormatError),
}

/// Malformed `daisy-graph` input.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("unexpected end of input: {0}")]
    UnexpectedEnd(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl FormatError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> FormatError {
        FormatError::Line { line, message: message.into() }
    }
}

impl Graph {
    /// Builds a graph from an explicit edge list.
    ///
    /// Rejects out-of-range endpoints, self-loops, duplicate edges (in either
    /// orientation), and disconnected inputs. Neighbor order follows edge
    /// order: for each edge `(u, v)`, `v` is appended to `u`'s list and `u`
    /// to `v`'s.
    pub fn from_edges(n: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut offsets = PageBuf::<usize>::zeroed(n + 1);
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::EdgeOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor: Vec<usize> = offsets.to_vec();
        let mut flat = PageBuf::<VertexId>::zeroed(2 * edges.len());
        for &(u, v) in &edges {
            flat[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            flat[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        let g = Graph { n, edges, offsets, flat };
        if let Some(unreached) = g.first_unreached(0) {
            return Err(GraphError::Disconnected(unreached, 0));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in input order.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Neighbors of `v` in edge-input order.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.flat[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    /// Prefetches the bounds of the adjacency list of `v`, for traversals
    /// that know which vertex they will scan a few steps ahead.
    pub(crate) fn prefetch_list_bounds(&self, v: VertexId) {
        prefetch_read(self.offsets.as_ptr().wrapping_add(v as usize));
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// The maximum-degree vertex; ties break to the smallest id.
    pub fn max_degree_vertex(&self) -> (VertexId, usize) {
        let mut best = 0u32;
        for v in 1..self.n as u32 {
            if self.degree(v) > self.degree(best) {
                best = v;
            }
        }
        (best, self.degree(best))
    }

    fn first_unreached(&self, root: VertexId) -> Option<VertexId> {
        let mut seen = vec![false; self.n];
        let mut queue = Vec::with_capacity(self.n);
        seen[root as usize] = true;
        queue.push(root);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &z in self.neighbors(v) {
                if !seen[z as usize] {
                    seen[z as usize] = true;
                    queue.push(z);
                }
            }
        }
        seen.iter().position(|&s| !s).map(|v| v as VertexId)
    }
}

/// Breadth-first distances from a fixed root.
#[derive(Clone, Debug)]
pub struct DistanceField {
    root: VertexId,
    dist: Vec<u32>,
}

impl DistanceField {
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn dist(&self, v: VertexId) -> u32 {
        self.dist[v as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.dist
    }
}

/// Breadth-first search from `root`. Reports disconnection explicitly even
/// though [`Graph::from_edges`] already guarantees connectivity.
pub fn bfs(g: &Graph, root: VertexId) -> Result<DistanceField, GraphError> {
    assert!((root as usize) < g.vertex_count(), "root out of range");
    const UNSEEN: u32 = u32::MAX;
    let mut dist = vec![UNSEEN; g.vertex_count()];
    let mut queue = Vec::with_capacity(g.vertex_count());
    dist[root as usize] = 0;
    queue.push(root);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &z in g.neighbors(v) {
            if dist[z as usize] == UNSEEN {
                dist[z as usize] = dist[v as usize] + 1;
                queue.push(z);
            }
        }
    }
    if let Some(v) = dist.iter().position(|&d| d == UNSEEN) {
        return Err(GraphError::Disconnected(v as VertexId, root));
    }
    Ok(DistanceField { root, dist })
}

/// Neighbors of `v` one step closer to the root of `d`.
pub fn down_neighbors(g: &Graph, d: &DistanceField, v: VertexId) -> Vec<VertexId> {
    let dv = d.dist(v);
    g.neighbors(v)
        .iter()
        .copied()
        .filter(|&z| dv > 0 && d.dist(z) == dv - 1)
        .collect()
}

const GRAPH_HEADER: &str = "daisy-graph 1";

/// Reads the `daisy-graph 1` format:
///
/// ```text
/// daisy-graph 1
/// <n> <m>
/// <u> <v>        (m lines, 0 <= u < v < n)
/// ```
///
/// Lines starting with `#` and blank lines are ignored.
pub fn read_graph(reader: impl BufRead) -> Result<Graph, GraphError> {
    let mut lines = content_lines(reader);

    let (line_no, header) = next_line(&mut lines, "header")?;
    if header.trim() != GRAPH_HEADER {
        return Err(FormatError::at(line_no, format!("expected header {GRAPH_HEADER:?}")).into());
    }
    let (line_no, counts) = next_line(&mut lines, "vertex and edge counts")?;
    let (n, m) = parse_pair::<usize, usize>(&counts)
        .ok_or_else(|| FormatError::at(line_no, "expected `<n> <m>`"))?;
    if n == 0 {
        return Err(FormatError::at(line_no, "vertex count must be at least 1").into());
    }

    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, text) = next_line(&mut lines, "edge")?;
        let (u, v) = parse_pair::<VertexId, VertexId>(&text)
            .ok_or_else(|| FormatError::at(line_no, "expected `<u> <v>`"))?;
        if u >= v {
            return Err(FormatError::at(line_no, format!("edge must satisfy u < v, got {u} {v}")).into());
        }
        edges.push((u, v));
    }
    if let Some(extra) = lines.next() {
        let (line_no, _) = extra?;
        return Err(FormatError::at(line_no, "trailing content after edge list").into());
    }
    Graph::from_edges(n, edges)
}

/// Writes the `daisy-graph 1` format. Inverse of [`read_graph`].
pub fn write_graph(g: &Graph, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "{GRAPH_HEADER}")?;
    writeln!(out, "{} {}", g.vertex_count(), g.edge_count())?;
    for &(u, v) in g.edges() {
        debug_assert!(u < v);
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

// Iterator over (1-based line number, content) skipping comments and blanks.
pub(crate) fn content_lines(
    reader: impl BufRead,
) -> impl Iterator<Item = Result<(usize, String), FormatError>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(idx, line)| match line {
            Err(e) => Some(Err(FormatError::Io(e))),
            Ok(text) => {
                let trimmed = text.trim();
                if trimmed.is_empty() || trimmed.starts_with('#') {
                    None
                } else {
                    Some(Ok((idx + 1, trimmed.to_string())))
                }
            }
        })
}

pub(crate) fn next_line(
    lines: &mut impl Iterator<Item = Result<(usize, String), FormatError>>,
    what: &str,
) -> Result<(usize, String), FormatError> {
    lines
        .next()
        .transpose()?
        .ok_or_else(|| FormatError::UnexpectedEnd(format!("missing {what}")))
}

fn parse_pair<A: std::str::FromStr, B: std::str::FromStr>(text: &str) -> Option<(A, B)> {
    let mut parts = text.split_whitespace();
    let a = parts.next()?.parse().ok()?;
    let b = parts.next()?.parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 3-cube: ids are the numeric values of the label read as binary.
    fn q3() -> Graph {
        let mut edges = Vec::new();
        for v in 0u32..8 {
            for b in 0..3 {
                let w = v | 1 << b;
                if w != v {
                    edges.push((v.min(w), v.max(w)));
                }
            }
        }
        Graph::from_edges(8, edges).unwrap()
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert!(matches!(
            Graph::from_edges(2, vec![(0, 2)]),
            Err(GraphError::EdgeOutOfRange(..))
        ));
        assert!(matches!(
            Graph::from_edges(2, vec![(1, 1)]),
            Err(GraphError::SelfLoop(1))
        ));
        assert!(matches!(
            Graph::from_edges(2, vec![(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(..))
        ));
        assert!(matches!(
            Graph::from_edges(3, vec![(0, 1)]),
            Err(GraphError::Disconnected(2, 0))
        ));
        assert!(matches!(Graph::from_edges(0, vec![]), Err(GraphError::Empty)));
    }

    #[test]
    fn single_vertex() {
        let g = Graph::from_edges(1, vec![]).unwrap();
        assert_eq!(g.vertex_count(), 1);
        let d = bfs(&g, 0).unwrap();
        assert_eq!(d.as_slice(), &[0]);
    }

    #[test]
    fn bfs_levels_on_q3() {
        // Distances from 000 partition the cube into levels of sizes 1,3,3,1.
        let d = bfs(&q3(), 0).unwrap();
        let mut sizes = [0usize; 4];
        for v in 0..8 {
            sizes[d.dist(v) as usize] += 1;
        }
        assert_eq!(sizes, [1, 3, 3, 1]);
    }

    #[test]
    fn bfs_triangle_inequality_sampled() {
        let g = q3();
        let fields: Vec<DistanceField> = (0..8).map(|v| bfs(&g, v).unwrap()).collect();
        for a in 0..8u32 {
            for b in 0..8u32 {
                for c in 0..8u32 {
                    assert!(
                        fields[a as usize].dist(c)
                            <= fields[a as usize].dist(b) + fields[b as usize].dist(c)
                    );
                }
            }
        }
    }

    #[test]
    fn down_neighbors_in_q3() {
        // Vertex 011 (id 6 under bit order b1=4, b2=2, b3=1... here id 3 = 011 in
        // low-bit-first ids) sits two steps from 000; its down-neighbors are the
        // two weight-1 subwords.
        let g = q3();
        let d = bfs(&g, 0).unwrap();
        let mut down = down_neighbors(&g, &d, 3);
        down.sort_unstable();
        assert_eq!(down, vec![1, 2]);
        assert_eq!(down_neighbors(&g, &d, 0), Vec::<VertexId>::new());
    }

    #[test]
    fn max_degree_tie_breaks_to_smallest_id() {
        let g = q3();
        assert_eq!(g.max_degree_vertex(), (0, 3));
        // Path 0-1-2: the unique degree-2 vertex wins.
        let p = Graph::from_edges(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.max_degree_vertex(), (1, 2));
    }

    #[test]
    fn graph_file_round_trip() {
        let g = q3();
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let back = read_graph(buf.as_slice()).unwrap();
        assert_eq!(back.vertex_count(), g.vertex_count());
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn read_accepts_comments_and_blank_lines() {
        let text = "# a cube? no, a path\ndaisy-graph 1\n\n2 1\n# the only edge\n0 1\n";
        let g = read_graph(text.as_bytes()).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn read_rejects_malformed_input() {
        let cases = [
            "daisy-graph 2\n1 0\n",          // wrong version
            "daisy-graph 1\n2 1\n1 0\n",     // reversed endpoints
            "daisy-graph 1\n2 2\n0 1\n",     // missing edge line
            "daisy-graph 1\n2 1\n0 1\n0 1\n",// trailing content
            "daisy-graph 1\n0 0\n",          // empty graph
            "daisy-graph 1\ntwo 1\n0 1\n",   // unparsable counts
        ];
        for case in cases {
            assert!(read_graph(case.as_bytes()).is_err(), "accepted: {case:?}");
        }
    }
}
