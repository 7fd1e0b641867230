//! Prints per-width medians and step ratios of the linear recovery on
//! shuffled instances, mirroring the wall-clock acceptance measurement so
//! timing cliffs can be told apart from noise. Debug scaffold, not part of
//! the suite.

use std::hint::black_box;
use std::time::Instant;

use daisy_core::{build, family, proper_embed, relabel, FamilyName, Graph, VertexId};

/// Deterministic shuffle of vertex ids, so layouts carry no construction
/// order.
fn shuffled(g: &Graph, labels: &daisy_core::Embedding, seed: u64) -> Graph {
    let n = g.vertex_count();
    let mut perm: Vec<VertexId> = (0..n as VertexId).collect();
    let mut s = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    for i in (1..n).rev() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        let j = (s % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    relabel(g, labels, &perm).0
}

fn main() {
    let hs: Vec<usize> = (14..=20).collect();
    let graphs: Vec<Graph> = hs
        .iter()
        .map(|&h| {
            let dc = build(&family(FamilyName::QMinus, h, None).unwrap()).unwrap();
            shuffled(&dc.graph, &dc.labels, h as u64)
        })
        .collect();

    for g in &graphs {
        black_box(proper_embed(black_box(g)).unwrap());
    }

    const ROUNDS: usize = 9;
    let batch = |h: usize| -> u32 {
        match h {
            ..=14 => 16,
            15 => 8,
            16 => 4,
            17 => 2,
            _ => 1,
        }
    };
    let mut total = vec![Vec::new(); graphs.len()];
    for _ in 0..ROUNDS {
        for (k, g) in graphs.iter().enumerate() {
            let b = batch(hs[k]);
            black_box(proper_embed(black_box(g)).unwrap());
            let t = Instant::now();
            for _ in 0..b {
                black_box(proper_embed(black_box(g)).unwrap());
            }
            total[k].push(t.elapsed().as_secs_f64() / f64::from(b));
        }
    }
    let med = |v: &mut Vec<f64>| {
        v.sort_by(|a, b| a.total_cmp(b));
        v[v.len() / 2]
    };
    println!(" h   total ms   t-ratio");
    let mut pt = 0.0f64;
    for (k, &h) in hs.iter().enumerate() {
        let t = med(&mut total[k]);
        if k == 0 {
            println!("{h:2} {:9.3}", t * 1e3);
        } else {
            println!("{h:2} {:9.3}   {:7.3}", t * 1e3, t / pt);
        }
        pt = t;
    }
}
