#![allow(dead_code)]

use rgbt::coloring::{EdgeColor, EdgeColoring};
use rgbt::planar::PlaneGraph;

/// Every assignment of `palette` to the edges, filtered by an independent triangle rule.
pub fn brute_tilings(g: &PlaneGraph, palette: &[EdgeColor], ok: impl Fn([EdgeColor; 3]) -> bool) -> Vec<EdgeColoring> {
    let m = g.edge_count();
    let k = palette.len();
    let mut out = Vec::new();
    let total = k.pow(m as u32);
    for code in 0..total {
        let mut x = code;
        let colors: Vec<EdgeColor> = (0..m)
            .map(|_| {
                let c = palette[x % k];
                x /= k;
                c
            })
            .collect();
        let good = g.triangles().iter().all(|t| {
            let c = |i: usize, j: usize| colors[g.edge_between(t[i], t[j]).unwrap()];
            ok([c(0, 1), c(1, 2), c(2, 0)])
        });
        if good {
            out.push(EdgeColoring(colors));
        }
    }
    out
}

pub fn brute_4colorings(g: &PlaneGraph) -> u64 {
    let n = g.n();
    let mut count = 0;
    for code in 0..4u64.pow(n as u32) {
        let f: Vec<u64> = (0..n).map(|v| (code >> (2 * v)) & 3).collect();
        if g.edges().iter().all(|e| f[e.lo()] != f[e.hi()]) {
            count += 1;
        }
    }
    count
}

pub fn rainbow(c: [EdgeColor; 3]) -> bool {
    c[0].is_rgb() && c[1].is_rgb() && c[2].is_rgb() && c[0] != c[1] && c[1] != c[2] && c[0] != c[2]
}

pub fn one_red(c: [EdgeColor; 3]) -> bool {
    c.iter().filter(|&&x| x == EdgeColor::Red).count() == 1
}
