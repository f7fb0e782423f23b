use std::ops::Range;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Prime};

/// `|GL_m(F_p)| = prod_{i<m} (p^m - p^i)`.
pub fn gl_order(m: usize, p: Prime) -> BigUint {
    let q = BigUint::from(p.get());
    let pm = q.pow(m as u32);
    (0..m).fold(BigUint::from(1u32), |acc, i| {
        acc * (&pm - q.pow(i as u32))
    })
}

/// `GL_m(F_p)` as an indexable, lexicographically ordered sequence.
///
/// Elements are ordered by their row-major entry tuples. Because rows are drawn in
/// lexicographic order subject to independence from the rows above them, element
/// `i` can be produced directly ("unranked"), which lets consumers split the group
/// into contiguous index ranges.
#[derive(Clone, Debug)]
pub struct GlEnumeration {
    m: usize,
    p: Prime,
    len: u64,
    /// all of F_p^m, indexed lexicographically (first coordinate most significant)
    vectors: Vec<Vec<u8>>,
    /// completions[j]: number of ways to finish once rows 0..=j are fixed
    completions: Vec<u64>,
}

impl GlEnumeration {
    pub fn new(m: usize, p: Prime, cap: u64) -> Result<Self> {
        let order = gl_order(m, p);
        match order.to_u64() {
            Some(n) if n <= cap => {}
            _ => return Err(Error::cap(order, cap)),
        }
        let q = p.get() as u64;
        let size = q.pow(m as u32) as usize;
        let vectors = (0..size)
            .map(|mut idx| {
                let mut v = vec![0u8; m];
                for x in v.iter_mut().rev() {
                    *x = (idx % q as usize) as u8;
                    idx /= q as usize;
                }
                v
            })
            .collect();
        let pm = q.pow(m as u32);
        let completions = (0..m)
            .map(|j| (j + 1..m).map(|i| pm - q.pow(i as u32)).product())
            .collect();
        Ok(GlEnumeration {
            m,
            p,
            len: order.to_u64().expect("checked above"),
            vectors,
            completions,
        })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> GlIter<'_> {
        self.range(0..self.len)
    }

    pub fn range(&self, range: Range<u64>) -> GlIter<'_> {
        let end = range.end.min(self.len);
        let start = range.start.min(end);
        let mut it = GlIter {
            e: self,
            rows: vec![0; self.m],
            spans: vec![Vec::new(); self.m],
            remaining: end - start,
        };
        if it.remaining > 0 {
            it.seek(start);
        }
        it
    }

    /// Splits `0..len` into `k` contiguous ranges whose concatenation is the whole group.
    pub fn chunks(&self, k: usize) -> Vec<Range<u64>> {
        let k = (k.max(1) as u64).min(self.len.max(1));
        let base = self.len / k;
        let extra = self.len % k;
        let mut start = 0;
        (0..k)
            .map(|i| {
                let size = base + u64::from(i < extra);
                let r = start..start + size;
                start += size;
                r
            })
            .collect()
    }

    /// The element at position `idx` in enumeration order.
    pub fn unrank(&self, idx: u64) -> Option<FpMatrix> {
        if idx >= self.len {
            return None;
        }
        self.range(idx..idx + 1).next()
    }

    fn vector_add_scaled(&self, a: usize, c: u8, b: usize) -> usize {
        let q = self.p.get() as usize;
        let (va, vb) = (&self.vectors[a], &self.vectors[b]);
        va.iter()
            .zip(vb)
            .fold(0, |acc, (&x, &y)| acc * q + self.p.add(x, self.p.mul(c, y)) as usize)
    }

    /// Membership table of `span(base ∪ {v})` given that of `base`.
    fn extend_span(&self, base: &[bool], v: usize) -> Vec<bool> {
        let mut out = vec![false; self.vectors.len()];
        for (s, _) in base.iter().enumerate().filter(|(_, &b)| b) {
            for c in 0..self.p.get() as u8 {
                out[self.vector_add_scaled(s, c, v)] = true;
            }
        }
        out
    }

    fn zero_span(&self) -> Vec<bool> {
        let mut z = vec![false; self.vectors.len()];
        if !z.is_empty() {
            z[0] = true;
        }
        z
    }
}

/// Iterator over a contiguous range of a [`GlEnumeration`].
pub struct GlIter<'a> {
    e: &'a GlEnumeration,
    rows: Vec<usize>,
    /// spans[j]: membership table of the span of rows 0..j
    spans: Vec<Vec<bool>>,
    remaining: u64,
}

impl GlIter<'_> {
    fn seek(&mut self, mut idx: u64) {
        let e = self.e;
        for j in 0..e.m {
            self.spans[j] = if j == 0 {
                e.zero_span()
            } else {
                e.extend_span(&self.spans[j - 1], self.rows[j - 1])
            };
            let want = idx / e.completions[j];
            idx %= e.completions[j];
            let span = &self.spans[j];
            self.rows[j] = (0..e.vectors.len())
                .filter(|&v| !span[v])
                .nth(want as usize)
                .expect("rank within range");
        }
    }

    fn current(&self) -> FpMatrix {
        let m = self.e.m;
        let mut data = Vec::with_capacity(m * m);
        for &r in &self.rows {
            data.extend_from_slice(&self.e.vectors[r]);
        }
        FpMatrix::from_raw(self.e.p, m, m, data)
    }

    /// Moves to the lexicographic successor; false when the group is exhausted.
    fn advance(&mut self) -> bool {
        let e = self.e;
        let n = e.vectors.len();
        let mut j = e.m;
        // find the deepest row that can be bumped
        loop {
            if j == 0 {
                return false;
            }
            j -= 1;
            let span = &self.spans[j];
            if let Some(next) = (self.rows[j] + 1..n).find(|&v| !span[v]) {
                self.rows[j] = next;
                break;
            }
        }
        // reset every row below it to its first admissible vector
        for k in j + 1..e.m {
            self.spans[k] = e.extend_span(&self.spans[k - 1], self.rows[k - 1]);
            let span = &self.spans[k];
            self.rows[k] = (0..n).find(|&v| !span[v]).expect("complement is nonempty");
        }
        true
    }
}

impl Iterator for GlIter<'_> {
    type Item = FpMatrix;

    fn next(&mut self) -> Option<FpMatrix> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.current();
        self.remaining -= 1;
        if self.remaining > 0 {
            let more = self.advance();
            debug_assert!(more);
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

/// A generating set of `GL_m(F_p)`: all elementary transvections plus one diagonal
/// matrix carrying a primitive root.
pub fn gl_generators(m: usize, p: Prime) -> Vec<FpMatrix> {
    let mut gens = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                gens.push(FpMatrix::from_fn(p, m, m, |r, c| {
                    (r == c || (r, c) == (i, j)) as i64
                }));
            }
        }
    }
    let g = p.primitive_root();
    if m > 0 && g != 1 {
        gens.push(FpMatrix::from_fn(p, m, m, |r, c| match (r == c, r) {
            (true, 0) => g as i64,
            (true, _) => 1,
            _ => 0,
        }));
    }
    gens
}
