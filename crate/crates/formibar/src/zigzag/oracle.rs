//! Independent barcode computation from generalized ranks.
//!
//! For every level range `[a, b]` the rank of the map from the limit to the
//! colimit of the restricted zigzag counts the bars containing `[a, b]`;
//! inclusion-exclusion then gives multiplicities. Cubic in the number of
//! levels, so only meant for cross-checking.

use super::f2::{nullspace, Bits, Echelon};
use super::{LinearZigzag, ZZInterval, ZigzagSetDiagram};
use crate::error::{Error, Result};

pub const ORACLE_MAX_LEVELS: usize = 64;

fn generalized_rank(m: &LinearZigzag, a: usize, b: usize) -> usize {
    let mut offs = Vec::with_capacity(b - a + 2);
    let mut total = 0;
    for l in a..=b {
        offs.push(total);
        total += m.dims[l];
    }
    let off = |l: usize| offs[l - a];
    // limit: x_dst = map(x_src) for every arrow in range
    let mut rows = Vec::new();
    // colimit relations: e_src,j - map(e_j)
    let mut rel = Echelon::new(total);
    for l in a..b {
        let arr = &m.arrows[l];
        let (src, dst) = if arr.forward { (l, l + 1) } else { (l + 1, l) };
        for i in 0..m.dims[dst] {
            let mut r = Bits::zeros(total);
            r.set(off(dst) + i);
            for (j, col) in arr.cols.iter().enumerate() {
                if col.get(i) {
                    r.flip(off(src) + j);
                }
            }
            rows.push(r);
        }
        for (j, col) in arr.cols.iter().enumerate() {
            let mut r = Bits::zeros(total);
            r.set(off(src) + j);
            r.xor_at(off(dst), col);
            rel.insert(r);
        }
    }
    let base = rel.rank();
    for x in nullspace(&rows, total) {
        let mut v = Bits::zeros(total);
        v.xor_at(off(a), &x.slice(off(a), m.dims[a]));
        rel.insert(v);
    }
    rel.rank() - base
}

/// Barcode of a linear zigzag via generalized ranks.
pub fn rank_oracle_linear(m: &LinearZigzag) -> Result<Vec<ZZInterval>> {
    let n = m.dims.len();
    if n > ORACLE_MAX_LEVELS {
        return Err(Error::SizeBound(format!(
            "rank oracle supports at most {ORACLE_MAX_LEVELS} levels, got {n}"
        )));
    }
    let mut r = vec![vec![0i64; n + 1]; n + 1];
    for a in 0..n {
        for b in a..n {
            r[a][b] = generalized_rank(m, a, b) as i64;
        }
    }
    let get = |a: Option<usize>, b: usize| -> i64 {
        match a {
            Some(a) if b < n => r[a][b],
            _ => 0,
        }
    };
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            let mult = get(Some(a), b) - get(a.checked_sub(1), b) - get(Some(a), b + 1)
                + get(a.checked_sub(1), b + 1);
            debug_assert!(mult >= 0);
            for _ in 0..mult.max(0) {
                out.push(ZZInterval { lo: a, hi: b });
            }
        }
    }
    Ok(out)
}

/// Barcode of the linearized set diagram via generalized ranks.
pub fn rank_oracle_barcode(d: &ZigzagSetDiagram) -> Result<Vec<ZZInterval>> {
    rank_oracle_linear(&d.linearize())
}
