//! Dense bit vectors over F₂ and small elimination helpers.

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Bits {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn unit(len: usize, i: usize) -> Bits {
        let mut b = Bits::zeros(len);
        b.set(i);
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor(&mut self, other: &Bits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Highest set index.
    pub fn top(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(i * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Copy of bits `[from, from+len)`.
    pub fn slice(&self, from: usize, len: usize) -> Bits {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            if self.get(from + i) {
                b.set(i);
            }
        }
        b
    }

    /// Write `src` into positions `[at, at+src.len())` by xor.
    pub fn xor_at(&mut self, at: usize, src: &Bits) {
        for i in src.ones() {
            self.flip(at + i);
        }
    }
}

/// Incremental row echelon form keyed by the highest set bit.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Option<Bits>>,
    rank: usize,
}

impl Echelon {
    pub fn new(len: usize) -> Echelon {
        Echelon {
            rows: vec![None; len],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduce `v` in place; true if it was independent (and is now stored).
    pub fn insert(&mut self, mut v: Bits) -> bool {
        while let Some(p) = v.top() {
            match &self.rows[p] {
                Some(r) => v.xor(r),
                None => {
                    self.rows[p] = Some(v);
                    self.rank += 1;
                    return true;
                }
            }
        }
        false
    }
}

/// A basis of `{x : row·x = 0 for every row}` in `F₂^n`.
pub fn nullspace(rows: &[Bits], n: usize) -> Vec<Bits> {
    // Gauss-Jordan on the rows, pivots chosen by lowest column
    let mut m: Vec<Bits> = rows.iter().filter(|r| !r.is_zero()).cloned().collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..m.len()).find(|&k| m[k].get(c)) else {
            continue;
        };
        m.swap(r, k);
        let pr = m[r].clone();
        for (k, row) in m.iter_mut().enumerate() {
            if k != r && row.get(c) {
                row.xor(&pr);
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; n];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut x = Bits::unit(n, free);
        for (i, &pc) in pivot_cols.iter().enumerate() {
            if m[i].get(free) {
                x.set(pc);
            }
        }
        basis.push(x);
    }
    basis
}
