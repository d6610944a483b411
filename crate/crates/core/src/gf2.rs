//! Dense bit matrices over GF(2), one `u64` per row.

use rand::Rng;

/// Matrix over GF(2) with at most 64 columns. Bit `j` of a row word holds
/// column `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

fn mask(cols: usize) -> u64 {
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

impl BitMatrix {
    /// Panics if `cols > 64`.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= 64, "BitMatrix supports at most 64 columns");
        BitMatrix {
            rows,
            cols,
            data: vec![0; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn random<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let mut m = BitMatrix::zeros(rows, cols);
        let mk = mask(cols);
        for w in m.data.iter_mut() {
            *w = rng.gen::<u64>() & mk;
        }
        m
    }

    /// The `q × q` down-shift by `q - n` levels: only the top `n` input
    /// levels survive, landing on the bottom `n` output levels.
    pub fn down_shift(q: usize, n: usize) -> Self {
        let mut m = BitMatrix::zeros(q, q);
        let d = q - n.min(q);
        for r in d..q {
            m.set(r, r - d, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r] >> c & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        if v {
            self.data[r] |= 1 << c;
        } else {
            self.data[r] &= !(1 << c);
        }
    }

    pub fn mul(&self, o: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, o.rows, "GF(2) product shape mismatch");
        let mut out = BitMatrix::zeros(self.rows, o.cols);
        for (i, &w) in self.data.iter().enumerate() {
            let mut acc = 0u64;
            let mut bits = w;
            while bits != 0 {
                let j = bits.trailing_zeros() as usize;
                acc ^= o.data[j];
                bits &= bits - 1;
            }
            out.data[i] = acc;
        }
        out
    }

    pub fn xor(&self, o: &BitMatrix) -> BitMatrix {
        assert_eq!(self.shape(), o.shape(), "GF(2) sum shape mismatch");
        BitMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// `[self | o]`.
    pub fn hcat(&self, o: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, o.rows, "GF(2) hcat row mismatch");
        let mut out = BitMatrix::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            out.data[i] = self.data[i] | o.data[i] << self.cols;
        }
        out
    }

    /// `self` stacked on top of `o`.
    pub fn vcat(&self, o: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, o.cols, "GF(2) vcat column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        BitMatrix {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    /// The last `k` rows.
    pub fn tail(&self, k: usize) -> BitMatrix {
        let k = k.min(self.rows);
        BitMatrix {
            rows: k,
            cols: self.cols,
            data: self.data[self.rows - k..].to_vec(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let bit = 1u64 << c;
            let Some(p) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r & bit != 0 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn apply(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols, "GF(2) vector length mismatch");
        let xw = x
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &b)| acc | (b as u64) << j);
        self.data
            .iter()
            .map(|w| (w & xw).count_ones() % 2 == 1)
            .collect()
    }

    /// Rows as hex strings, column 0 being the most significant bit.
    pub fn to_hex_rows(&self) -> Vec<String> {
        let width = self.cols.div_ceil(4).max(1);
        self.data
            .iter()
            .map(|&w| {
                let mut v = 0u64;
                for c in 0..self.cols {
                    v = v << 1 | (w >> c & 1);
                }
                format!("{v:0width$x}")
            })
            .collect()
    }

    pub fn from_hex_rows(rows: &[String], cols: usize) -> Option<BitMatrix> {
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, s) in rows.iter().enumerate() {
            let v = u64::from_str_radix(s, 16).ok()?;
            if cols < 64 && v >> cols != 0 {
                return None;
            }
            for c in 0..cols {
                m.set(i, c, v >> (cols - 1 - c) & 1 == 1);
            }
        }
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_basics() {
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        assert_eq!(BitMatrix::zeros(3, 4).rank(), 0);
        let mut m = BitMatrix::zeros(3, 3);
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 1, true);
        m.set(1, 2, true);
        m.set(2, 0, true);
        m.set(2, 2, true);
        // third row is the sum of the first two
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn shift_keeps_top_levels() {
        let s = BitMatrix::down_shift(3, 1);
        assert_eq!(s.apply(&[true, false, false]), vec![false, false, true]);
        assert_eq!(s.apply(&[false, true, true]), vec![false, false, false]);
        assert_eq!(BitMatrix::down_shift(3, 3), BitMatrix::identity(3));
    }

    #[test]
    fn hex_round_trip() {
        let mut m = BitMatrix::zeros(2, 5);
        m.set(0, 0, true);
        m.set(1, 4, true);
        let hex = m.to_hex_rows();
        assert_eq!(hex, vec!["10", "01"]);
        assert_eq!(BitMatrix::from_hex_rows(&hex, 5), Some(m));
    }

    #[test]
    fn product_and_concat() {
        let a = BitMatrix::identity(3);
        let s = BitMatrix::down_shift(3, 2);
        assert_eq!(a.mul(&s), s);
        let h = a.hcat(&s);
        assert_eq!(h.shape(), (3, 6));
        assert_eq!(h.rank(), 3);
        assert_eq!(a.vcat(&s).tail(3), s);
    }
}
