//! Reflected d-ary Gray code. Words are stored most significant digit first.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Largest table a context may hold.
pub const TABLE_CAP: usize = 1 << 20;

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(())
}

fn pow_checked(d: usize, n: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..n {
        acc = acc.checked_mul(d)?;
    }
    Some(acc)
}

/// `G_n^d(k)`.
pub fn gray_word(d: usize, n: usize, k: usize) -> Result<Vec<usize>> {
    check_d(d)?;
    let total = pow_checked(d, n).ok_or(Error::DimensionCap {
        dim: usize::MAX,
        cap: TABLE_CAP,
    })?;
    if k >= total {
        return Err(Error::IndexOutOfRange {
            path: "gray_word".into(),
            what: "index",
            value: k,
            limit: total,
        });
    }
    let mut out = Vec::with_capacity(n);
    let mut k = k;
    let mut block = total;
    for _ in 0..n {
        block /= d;
        let q = k / block;
        let r = k % block;
        out.push(q);
        // An odd leading digit traverses the remaining suffixes backwards.
        k = if q.is_multiple_of(2) {
            r
        } else {
            block - 1 - r
        };
    }
    Ok(out)
}

/// `G^{-1}_d(w)`; the empty word maps to 0.
pub fn gray_index(d: usize, w: &[usize]) -> Result<usize> {
    check_d(d)?;
    if let Some(&h) = w.iter().find(|&&h| h >= d) {
        return Err(Error::IndexOutOfRange {
            path: "gray_index".into(),
            what: "digit",
            value: h,
            limit: d,
        });
    }
    Ok(gray_index_unchecked(d, w))
}

fn gray_index_unchecked(d: usize, w: &[usize]) -> usize {
    match w.split_first() {
        None => 0,
        Some((&h, t)) => {
            let dm = d.pow(t.len() as u32);
            let rest = gray_index_unchecked(d, t);
            if h % 2 == 0 {
                h * dm + rest
            } else {
                (h + 1) * dm - 1 - rest
            }
        }
    }
}

/// XOR of the digit parities.
pub fn parity(w: &[usize]) -> usize {
    w.iter().fold(0, |acc, &h| acc ^ (h & 1))
}

/// `0^n` when `parity(u) = 0`, else `(d−1)^n`.
pub fn parity_tail(d: usize, u: &[usize], n: usize) -> Vec<usize> {
    if parity(u) == 0 {
        vec![0; n]
    } else {
        vec![d - 1; n]
    }
}

/// Base-d value of a word, used as the computational basis index.
pub fn word_value(d: usize, w: &[usize]) -> usize {
    w.iter().fold(0, |acc, &h| acc * d + h)
}

/// Word of a computational basis index.
pub fn value_word(d: usize, n: usize, mut v: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = v % d;
        v /= d;
    }
    out
}

/// The unique digit change between consecutive Gray words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighbor {
    pub u: Vec<usize>,
    pub v: usize,
    pub eps: i8,
    pub w: Vec<usize>,
}

/// The interval of `d` consecutive modes sharing prefix `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayBlock {
    pub prefix: Vec<usize>,
    pub start: usize,
    pub dir: i8,
}

/// Forward and inverse Gray tables for fixed `(d, n)`.
#[derive(Debug)]
pub struct GrayContext {
    d: usize,
    n: usize,
    words: Vec<u16>,
    inverse: Vec<u32>,
}

impl GrayContext {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        check_d(d)?;
        if d > u16::MAX as usize {
            return Err(Error::DimensionCap {
                dim: d,
                cap: u16::MAX as usize,
            });
        }
        let total = pow_checked(d, n)
            .filter(|&t| t <= TABLE_CAP)
            .ok_or(Error::DimensionCap {
                dim: pow_checked(d, n).unwrap_or(usize::MAX),
                cap: TABLE_CAP,
            })?;
        let mut words = Vec::with_capacity(total * n);
        let mut inverse = vec![0u32; total];
        for k in 0..total {
            let w = gray_word(d, n, k)?;
            inverse[word_value(d, &w)] = k as u32;
            words.extend(w.iter().map(|&h| h as u16));
        }
        Ok(Self {
            d,
            n,
            words,
            inverse,
        })
    }

    /// Shared context from a process-wide cache.
    pub fn shared(d: usize, n: usize) -> Result<Arc<Self>> {
        type Cache = Mutex<HashMap<(usize, usize), Arc<GrayContext>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(ctx) = cache.lock().unwrap().get(&(d, n)) {
            return Ok(ctx.clone());
        }
        let ctx = Arc::new(Self::new(d, n)?);
        cache.lock().unwrap().insert((d, n), ctx.clone());
        Ok(ctx)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.inverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inverse.is_empty()
    }

    pub fn word(&self, k: usize) -> Vec<usize> {
        self.words[k * self.n..(k + 1) * self.n]
            .iter()
            .map(|&h| h as usize)
            .collect()
    }

    /// Computational basis index of the mode `k`.
    pub fn value_of_mode(&self, k: usize) -> usize {
        self.words[k * self.n..(k + 1) * self.n]
            .iter()
            .fold(0, |acc, &h| acc * self.d + h as usize)
    }

    /// Mode of the computational basis index `v`.
    pub fn mode_of_value(&self, v: usize) -> usize {
        self.inverse[v] as usize
    }

    pub fn index(&self, w: &[usize]) -> Result<usize> {
        if w.len() != self.n || w.iter().any(|&h| h >= self.d) {
            return Err(Error::InvalidWord(format!("{w:?}")));
        }
        Ok(self.mode_of_value(word_value(self.d, w)))
    }

    pub fn neighbor_decompose(&self, t: usize) -> Result<Neighbor> {
        if t + 1 >= self.len() {
            return Err(Error::IndexOutOfRange {
                path: "neighbor_decompose".into(),
                what: "mode",
                value: t,
                limit: self.len().saturating_sub(1),
            });
        }
        let a = self.word(t);
        let b = self.word(t + 1);
        let p = (0..self.n).find(|&i| a[i] != b[i]).expect("distinct words");
        debug_assert!((p + 1..self.n).all(|i| a[i] == b[i]));
        let eps = if b[p] > a[p] { 1 } else { -1 };
        Ok(Neighbor {
            u: a[..p].to_vec(),
            v: a[p],
            eps,
            w: a[p + 1..].to_vec(),
        })
    }
}

/// Block of the prefix `u` inside the `(|u|+1)`-digit code.
pub fn block_info(d: usize, u: &[usize]) -> Result<GrayBlock> {
    let start = d * gray_index(d, u)?;
    let dir = if parity(u) == 0 { 1 } else { -1 };
    Ok(GrayBlock {
        prefix: u.to_vec(),
        start,
        dir,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn listing(d: usize, n: usize) -> Vec<String> {
        (0..d.pow(n as u32))
            .map(|k| {
                gray_word(d, n, k)
                    .unwrap()
                    .iter()
                    .map(|h| h.to_string())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn fixed_listings() {
        assert_eq!(
            listing(3, 2),
            ["00", "01", "02", "12", "11", "10", "20", "21", "22"]
        );
        assert_eq!(listing(2, 2), ["00", "01", "11", "10"]);
        for d in 2..6 {
            for n in 0..5 {
                assert!(gray_word(d, n, 0).unwrap().iter().all(|&h| h == 0));
            }
        }
    }

    #[test]
    fn index_examples() {
        assert_eq!(gray_index(3, &[]), Ok(0));
        assert_eq!(gray_index(3, &[1, 2]), Ok(3));
        assert_eq!(gray_word(3, 2, 3).unwrap(), vec![1, 2]);
        assert!(gray_index(3, &[3]).is_err());
        assert!(gray_word(3, 2, 9).is_err());
    }

    #[test]
    fn parity_examples() {
        assert_eq!(parity(&[1, 2]), 1);
        assert_eq!(parity_tail(3, &[1], 2), vec![2, 2]);
        assert_eq!(parity_tail(3, &[], 3), vec![0, 0, 0]);
    }

    #[test]
    fn neighbor_examples() {
        let ctx = GrayContext::new(3, 2).unwrap();
        assert_eq!(
            ctx.neighbor_decompose(2).unwrap(),
            Neighbor {
                u: vec![],
                v: 0,
                eps: 1,
                w: vec![2]
            }
        );
        assert_eq!(
            ctx.neighbor_decompose(0).unwrap(),
            Neighbor {
                u: vec![0],
                v: 0,
                eps: 1,
                w: vec![]
            }
        );
        assert!(ctx.neighbor_decompose(8).is_err());
    }

    #[test]
    fn block_examples() {
        assert_eq!(
            block_info(3, &[]).unwrap(),
            GrayBlock {
                prefix: vec![],
                start: 0,
                dir: 1
            }
        );
        let b = block_info(3, &[1]).unwrap();
        assert_eq!((b.start, b.dir), (3, -1));
        assert_eq!(block_info(3, &[2]).unwrap().dir, 1);
    }

    #[test]
    fn block_info_matches_brute_force() {
        for d in 2..5 {
            for len in 0..4 {
                let ctx = GrayContext::new(d, len + 1).unwrap();
                for v in 0..d.pow(len as u32) {
                    let u = value_word(d, len, v);
                    let modes: Vec<usize> = (0..ctx.len())
                        .filter(|&k| ctx.word(k)[..len] == u[..])
                        .collect();
                    let b = block_info(d, &u).unwrap();
                    assert_eq!(modes, (b.start..b.start + d).collect::<Vec<_>>());
                    let last: Vec<usize> = modes.iter().map(|&k| ctx.word(k)[len]).collect();
                    let fwd: Vec<usize> = (0..d).collect();
                    let bwd: Vec<usize> = (0..d).rev().collect();
                    assert_eq!(last, if b.dir == 1 { fwd } else { bwd });
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            GrayContext::new(2, 21),
            Err(Error::DimensionCap { .. })
        ));
        assert!(GrayContext::new(1, 2).is_err());
    }

    #[test]
    fn shared_contexts_are_reused() {
        let a = GrayContext::shared(3, 3).unwrap();
        let b = GrayContext::shared(3, 3).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
