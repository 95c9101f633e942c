//! Optical gadgets used by the encoder: mode reversals, Gray lifts, the
//! single-qudit Hadamard network, word swaps and digit block swaps.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::LoppCircuit;
use crate::error::{Error, Result};
use crate::graycode::{gray_index, gray_word};

/// Exponent `r` with `m = d^r`.
fn log_d(d: usize, m: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let (mut acc, mut r) = (1usize, 0usize);
    while acc < m {
        acc = acc
            .checked_mul(d)
            .ok_or(Error::ModeCountNotPower { modes: m, d })?;
        r += 1;
    }
    if acc == m {
        Ok(r)
    } else {
        Err(Error::ModeCountNotPower { modes: m, d })
    }
}

fn pow(d: usize, n: usize) -> Result<usize> {
    (0..n)
        .try_fold(1usize, |acc, _| acc.checked_mul(d))
        .ok_or(Error::DimensionCap {
            dim: usize::MAX,
            cap: usize::MAX,
        })
}

fn adjacent_swap(t: usize, m: usize) -> LoppCircuit {
    LoppCircuit::swap().padded(t, m - t - 2)
}

/// `ρ`: reverses the order of `m` modes, as an odd-even transposition network.
pub fn reversal(m: usize) -> LoppCircuit {
    if m < 2 {
        return LoppCircuit::id(m);
    }
    // m rounds of odd-even transposition sort reverse any list of length m.
    let rounds = (0..m)
        .map(|r| {
            let lead = r % 2;
            let pairs = (m - lead) / 2;
            let mut blocks = Vec::with_capacity(pairs + 2);
            if lead == 1 {
                blocks.push(LoppCircuit::wire());
            }
            blocks.extend((0..pairs).map(|_| LoppCircuit::swap()));
            let tail = m - lead - 2 * pairs;
            if tail > 0 {
                blocks.push(LoppCircuit::id(tail));
            }
            LoppCircuit::tensor(blocks)
        })
        .collect();
    LoppCircuit::chain(m, rounds)
}

/// `Rev^q(C)`: `C` for even `q`, `ρ ∘ C ∘ ρ` for odd `q`.
pub fn mirror(d: usize, q: usize, c: &LoppCircuit) -> Result<LoppCircuit> {
    log_d(d, c.modes())?;
    if q.is_multiple_of(2) || c.is_id_tree() {
        return Ok(c.clone());
    }
    let rho = reversal(c.modes());
    Ok(LoppCircuit::chain(
        c.modes(),
        vec![rho.clone(), c.clone(), rho],
    ))
}

/// `AMS_d^p(C)`: `d^p` copies of `C`, mirrored on reversed Gray branches.
pub fn ams(d: usize, p: usize, c: &LoppCircuit) -> Result<LoppCircuit> {
    log_d(d, c.modes())?;
    let mut cur = c.clone();
    for _ in 0..p {
        cur = lift(d, &cur)?;
    }
    Ok(cur)
}

fn lift(d: usize, c: &LoppCircuit) -> Result<LoppCircuit> {
    let even = c.clone();
    let odd = mirror(d, 1, c)?;
    Ok(LoppCircuit::tensor(
        (0..d)
            .map(|q| {
                if q % 2 == 0 {
                    even.clone()
                } else {
                    odd.clone()
                }
            })
            .collect(),
    ))
}

/// `jAMS_d^p(C)`: one copy of `C` on the branch whose new digit is `j`, lifted
/// through `p` further digits.
pub fn jams(d: usize, j: usize, p: usize, c: &LoppCircuit) -> Result<LoppCircuit> {
    log_d(d, c.modes())?;
    if j >= d {
        return Err(Error::IndexOutOfRange {
            path: "jams".into(),
            what: "control value",
            value: j,
            limit: d,
        });
    }
    let m = c.modes();
    let base = LoppCircuit::tensor(
        (0..d)
            .map(|q| {
                if q == j {
                    mirror(d, q, c)
                } else {
                    Ok(LoppCircuit::id(m))
                }
            })
            .collect::<Result<_>>()?,
    );
    ams(d, p, &base)
}

/// `B_d^{(i,i+1)}`: the Hadamard `H^{(i,i+1)}` on `d` modes.
pub fn hadamard_network(d: usize, i: usize) -> Result<LoppCircuit> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if i + 2 > d {
        return Err(Error::IndexOutOfRange {
            path: "hadamard_network".into(),
            what: "level",
            value: i,
            limit: d - 1,
        });
    }
    let ph = LoppCircuit::par(LoppCircuit::wire(), LoppCircuit::phase(-FRAC_PI_2));
    let hbs = LoppCircuit::chain(
        2,
        vec![ph.clone(), LoppCircuit::beam_splitter(FRAC_PI_4), ph],
    );
    Ok(hbs.padded(i, d - i - 2))
}

/// Counters from one word-swap construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WordSwapStats {
    /// Adjacent mode swaps emitted.
    pub swaps: usize,
    /// Deepest recursion level reached; the top call is level 1.
    pub max_depth: usize,
}

/// Mode swap transposing the basis states `w1` and `w2`.
pub fn word_swap(d: usize, w1: &[usize], w2: &[usize]) -> Result<LoppCircuit> {
    word_swap_with_stats(d, w1, w2).map(|(c, _)| c)
}

pub fn word_swap_with_stats(
    d: usize,
    w1: &[usize],
    w2: &[usize],
) -> Result<(LoppCircuit, WordSwapStats)> {
    check_pair(d, w1, w2)?;
    let m = pow(d, w1.len())?;
    let mut b = SwapBuilder::new(d);
    b.build(w1, w2, 1)?;
    let stats = b.stats;
    Ok((b.finish(m), stats))
}

fn check_pair(d: usize, w1: &[usize], w2: &[usize]) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if w1.len() != w2.len() || w1 == w2 || w1.iter().chain(w2).any(|&h| h >= d) {
        return Err(Error::InvalidWord(format!("{w1:?} / {w2:?}")));
    }
    Ok(())
}

/// Lexicographic recursion measure of a word pair.
type Measure = (usize, usize, usize, usize);

struct SwapBuilder {
    d: usize,
    /// Lower mode of each adjacent swap, in application order.
    swaps: Vec<usize>,
    stats: WordSwapStats,
}

impl SwapBuilder {
    fn new(d: usize) -> Self {
        Self {
            d,
            swaps: Vec::new(),
            stats: WordSwapStats::default(),
        }
    }

    fn finish(self, m: usize) -> LoppCircuit {
        LoppCircuit::chain(m, self.swaps.iter().map(|&t| adjacent_swap(t, m)).collect())
    }

    /// Suffix an adjacent pair must carry for the two words to be Gray neighbours.
    /// The transition between sibling blocks `p` and `p+1` happens at the end of
    /// the even block's traversal, whatever the direction of the prefix.
    fn entry_suffix(&self, hi: usize, len: usize) -> Vec<usize> {
        if hi.is_multiple_of(2) {
            vec![0; len]
        } else {
            gray_word(self.d, len, self.d.pow(len as u32) - 1).expect("small suffix")
        }
    }

    fn measure(&self, w1: &[usize], w2: &[usize]) -> Measure {
        let diff: Vec<usize> = (0..w1.len()).filter(|&i| w1[i] != w2[i]).collect();
        if diff.len() != 1 {
            return (diff.len(), 0, 0, 0);
        }
        let pos = diff[0];
        let suf = &w1[pos + 1..];
        let hi = w1[pos].max(w2[pos]);
        let t = self.entry_suffix(hi, suf.len());
        let off: usize = suf.iter().zip(&t).map(|(a, b)| a.abs_diff(*b)).sum();
        (1, suf.len(), w1[pos].abs_diff(w2[pos]), off)
    }

    fn child(&mut self, parent: Measure, a: &[usize], b: &[usize], depth: usize) -> Result<()> {
        assert!(
            self.measure(a, b) < parent,
            "word swap measure must decrease"
        );
        self.build(a, b, depth + 1)
    }

    fn build(&mut self, w1: &[usize], w2: &[usize], depth: usize) -> Result<()> {
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let mu = self.measure(w1, w2);
        let diff: Vec<usize> = (0..w1.len()).filter(|&i| w1[i] != w2[i]).collect();
        match diff.len() {
            0 => Err(Error::InvalidWord(format!("{w1:?} equals {w2:?}"))),
            1 => {
                let pos = diff[0];
                let (p, q) = (w1[pos], w2[pos]);
                let hi = p.max(q);
                let suf = &w1[pos + 1..];
                let target = self.entry_suffix(hi, suf.len());
                if p.abs_diff(q) == 1 && suf == &target[..] {
                    let t1 = gray_index(self.d, w1)?;
                    let t2 = gray_index(self.d, w2)?;
                    assert_eq!(
                        t1.abs_diff(t2),
                        1,
                        "base case words must be Gray neighbours"
                    );
                    self.swaps.push(t1.min(t2));
                    self.stats.swaps += 1;
                    Ok(())
                } else if p.abs_diff(q) == 1 {
                    // Walk one suffix digit toward the entry suffix, then conjugate.
                    let i = (0..suf.len())
                        .rev()
                        .find(|&i| suf[i] != target[i])
                        .expect("suffix differs");
                    let at = pos + 1 + i;
                    let mut w1p = w1.to_vec();
                    let mut w2p = w2.to_vec();
                    let step = if target[i] > suf[i] {
                        suf[i] + 1
                    } else {
                        suf[i] - 1
                    };
                    w1p[at] = step;
                    w2p[at] = step;
                    self.child(mu, w1, &w1p, depth)?;
                    self.child(mu, w2, &w2p, depth)?;
                    self.child(mu, &w1p, &w2p, depth)?;
                    self.child(mu, w2, &w2p, depth)?;
                    self.child(mu, w1, &w1p, depth)
                } else {
                    let mut wmax = w1.to_vec();
                    wmax[pos] = hi;
                    let mut wmin = w1.to_vec();
                    wmin[pos] = p.min(q);
                    let mut wmid = w1.to_vec();
                    wmid[pos] = hi - 1;
                    self.child(mu, &wmax, &wmid, depth)?;
                    self.child(mu, &wmin, &wmid, depth)?;
                    self.child(mu, &wmax, &wmid, depth)
                }
            }
            k => {
                let (p1, p2) = (diff[k - 2], diff[k - 1]);
                // w2' agrees with w1 before p1; w' agrees with w1 except at p2.
                let mut w2p = w1.to_vec();
                w2p[p1..].copy_from_slice(&w2[p1..]);
                let mut wp = w1.to_vec();
                wp[p2] = w2[p2];
                if w2p == w2 {
                    self.child(mu, w1, &wp, depth)?;
                    self.child(mu, &wp, w2, depth)?;
                    self.child(mu, w1, &wp, depth)
                } else {
                    self.child(mu, w2, &w2p, depth)?;
                    self.child(mu, w1, &wp, depth)?;
                    self.child(mu, &wp, &w2p, depth)?;
                    self.child(mu, w1, &wp, depth)?;
                    self.child(mu, w2, &w2p, depth)
                }
            }
        }
    }
}

/// `C*`: the word swap `β q1 q2 α ↔ β p1 p2 α` for every `β ∈ [d]^k`, `α ∈ [d]^ℓ`.
pub fn saturated_word_swap(
    d: usize,
    k: usize,
    l: usize,
    q: [usize; 2],
    p: [usize; 2],
) -> Result<LoppCircuit> {
    let mut b = SwapBuilder::new(d);
    saturate_into(&mut b, k, l, q, p)?;
    Ok(b.finish(pow(d, k + l + 2)?))
}

fn saturate_into(
    b: &mut SwapBuilder,
    k: usize,
    l: usize,
    q: [usize; 2],
    p: [usize; 2],
) -> Result<()> {
    let d = b.d;
    check_pair(d, &q, &p)?;
    let (nb, na) = (pow(d, k)?, pow(d, l)?);
    for beta in 0..nb {
        let bw = crate::graycode::value_word(d, k, beta);
        for alpha in 0..na {
            let aw = crate::graycode::value_word(d, l, alpha);
            let w1: Vec<usize> = bw.iter().chain(&q).chain(&aw).copied().collect();
            let w2: Vec<usize> = bw.iter().chain(&p).chain(&aw).copied().collect();
            b.build(&w1, &w2, 1)?;
        }
    }
    Ok(())
}

/// Exchanges digits `pos` and `pos+1` of an `n`-digit register.
fn digit_swap_into(b: &mut SwapBuilder, n: usize, pos: usize) -> Result<()> {
    let d = b.d;
    for x in 0..d {
        for y in x + 1..d {
            saturate_into(b, pos, n - pos - 2, [x, y], [y, x])?;
        }
    }
    Ok(())
}

/// `σ^d_{a,b,c}`: on `d^{a+b+c}` modes, moves the `c`-digit block ahead of the
/// `b`-digit block in the Gray-coded register.
pub fn mode_block_swap(d: usize, a: usize, b: usize, c: usize) -> Result<LoppCircuit> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let n = a + b + c;
    let m = pow(d, n)?;
    let mut sb = SwapBuilder::new(d);
    // σ_{a,b,c} = σ_{a,b+c−1,1} ∘ σ_{a,b+1,c−1} unrolls to c rounds of
    // σ_{a,b+c−1,1}, each rotating the last digit to position a.
    if b > 0 {
        for _ in 0..c {
            for j in (0..b + c - 1).rev() {
                digit_swap_into(&mut sb, n, a + j)?;
            }
        }
    }
    Ok(sb.finish(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graycode::{value_word, word_value};
    use crate::semantics::{interp_lopp_gray, interp_lopp_sp, Matrix, C64};

    fn perm_of(u: &Matrix) -> Option<Vec<usize>> {
        // Column j holds a single 1 at row perm[j].
        (0..u.dim())
            .map(|j| {
                let rows: Vec<usize> = (0..u.dim())
                    .filter(|&i| u.get(i, j).norm() > 1e-12)
                    .collect();
                (rows.len() == 1 && (u.get(rows[0], j) - C64::new(1.0, 0.0)).norm() < 1e-12)
                    .then(|| rows[0])
            })
            .collect()
    }

    fn words(d: usize, n: usize) -> Vec<Vec<usize>> {
        (0..d.pow(n as u32)).map(|v| value_word(d, n, v)).collect()
    }

    #[test]
    fn reversal_reverses() {
        for m in 0..9 {
            let u = interp_lopp_sp(&reversal(m)).unwrap();
            let want: Vec<usize> = (0..m).rev().collect();
            assert_eq!(perm_of(&u).unwrap(), want);
        }
    }

    #[test]
    fn mirror_conjugates_by_reversal() {
        let c = LoppCircuit::chain(
            3,
            vec![
                LoppCircuit::beam_splitter(0.3).padded(0, 1),
                LoppCircuit::phase(0.9).padded(2, 0),
            ],
        );
        let r = Matrix::permutation(&[2, 1, 0]);
        let u = interp_lopp_sp(&c).unwrap();
        let got = interp_lopp_sp(&mirror(3, 1, &c).unwrap()).unwrap();
        assert!(got.max_diff(&r.mul(&u).mul(&r)).unwrap() < 1e-14);
        assert_eq!(mirror(3, 2, &c).unwrap(), c);
        let twice = mirror(3, 1, &mirror(3, 1, &c).unwrap()).unwrap();
        assert!(interp_lopp_sp(&twice).unwrap().max_diff(&u).unwrap() < 1e-14);
        assert!(matches!(
            mirror(2, 1, &c),
            Err(Error::ModeCountNotPower { .. })
        ));
    }

    #[test]
    fn ams_unfolds() {
        let c = LoppCircuit::beam_splitter(0.2);
        assert_eq!(ams(2, 0, &c).unwrap(), c);
        let r = mirror(2, 1, &c).unwrap();
        assert_eq!(
            ams(2, 1, &c).unwrap(),
            LoppCircuit::tensor(vec![c.clone(), r.clone()])
        );
        let c3 = hadamard_network(3, 0).unwrap();
        let r3 = mirror(3, 1, &c3).unwrap();
        assert_eq!(
            ams(3, 1, &c3).unwrap(),
            LoppCircuit::tensor(vec![c3.clone(), r3, c3.clone()])
        );
        assert_eq!(ams(3, 2, &c3).unwrap().modes(), 27);
    }

    #[test]
    fn jams_unfolds() {
        let c = hadamard_network(3, 1).unwrap();
        let got = jams(3, 1, 0, &c).unwrap();
        let want = LoppCircuit::tensor(vec![
            LoppCircuit::id(3),
            mirror(3, 1, &c).unwrap(),
            LoppCircuit::id(3),
        ]);
        assert_eq!(got, want);
        let b = LoppCircuit::beam_splitter(0.5);
        assert_eq!(
            jams(2, 0, 0, &b).unwrap(),
            LoppCircuit::tensor(vec![b.clone(), LoppCircuit::id(2)])
        );
        assert!(jams(2, 2, 0, &b).is_err());
        assert_eq!(jams(3, 2, 2, &c).unwrap().modes(), 81);
    }

    #[test]
    fn hadamard_network_matches_two_level_hadamard() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let u = interp_lopp_sp(&hadamard_network(2, 0).unwrap()).unwrap();
        let h = Matrix::from_rows(&[
            vec![C64::new(s, 0.0), C64::new(s, 0.0)],
            vec![C64::new(s, 0.0), C64::new(-s, 0.0)],
        ])
        .unwrap();
        assert!(u.max_diff(&h).unwrap() < 1e-15);
        let u = interp_lopp_sp(&hadamard_network(3, 1).unwrap()).unwrap();
        assert!((u.get(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(u.get(0, 1).norm() + u.get(1, 0).norm() < 1e-15);
        assert!((u.get(2, 2) + C64::new(s, 0.0)).norm() < 1e-15);
        assert!(hadamard_network(3, 2).is_err());
    }

    #[test]
    fn word_swap_base_case_is_bare_swap() {
        let c = word_swap(2, &[0], &[1]).unwrap();
        assert_eq!(c, LoppCircuit::swap());
    }

    fn transposition(d: usize, n: usize, w1: &[usize], w2: &[usize]) -> Vec<usize> {
        let (a, b) = (word_value(d, w1), word_value(d, w2));
        (0..d.pow(n as u32))
            .map(|v| {
                if v == a {
                    b
                } else if v == b {
                    a
                } else {
                    v
                }
            })
            .collect()
    }

    #[test]
    fn word_swaps_are_transpositions() {
        for (d, n) in [
            (2, 1),
            (2, 2),
            (2, 3),
            (3, 1),
            (3, 2),
            (3, 3),
            (4, 2),
            (5, 2),
        ] {
            let all = words(d, n);
            for (i, w1) in all.iter().enumerate() {
                for w2 in &all[i + 1..] {
                    let (c, st) = word_swap_with_stats(d, w1, w2).unwrap();
                    let u = interp_lopp_gray(&c, d, n).unwrap();
                    assert_eq!(
                        perm_of(&u).unwrap(),
                        transposition(d, n, w1, w2),
                        "{w1:?} {w2:?}"
                    );
                    assert_eq!(st.swaps, c.gate_count());
                    assert!(
                        st.max_depth <= 3 * n + d,
                        "depth {} for {w1:?} {w2:?}",
                        st.max_depth
                    );
                }
            }
        }
    }

    #[test]
    fn word_swap_rejects_bad_words() {
        assert!(word_swap(3, &[0, 1], &[0, 1]).is_err());
        assert!(word_swap(3, &[0, 1], &[0]).is_err());
        assert!(word_swap(3, &[0, 3], &[0, 1]).is_err());
    }

    #[test]
    fn saturation_swaps_middle_pair_everywhere() {
        let (d, k, l) = (2, 1, 0);
        let c = saturated_word_swap(d, k, l, [0, 1], [1, 0]).unwrap();
        let mut b = SwapBuilder::new(d);
        b.build(&[0, 0, 1], &[0, 1, 0], 1).unwrap();
        b.build(&[1, 0, 1], &[1, 1, 0], 1).unwrap();
        assert_eq!(c, b.finish(8));

        for (d, k, l) in [(2, 1, 1), (3, 1, 0), (3, 0, 1), (2, 2, 0)] {
            let n = k + l + 2;
            let c = saturated_word_swap(d, k, l, [0, 1], [1, 0]).unwrap();
            let perm = perm_of(&interp_lopp_gray(&c, d, n).unwrap()).unwrap();
            for (v, w) in words(d, n).iter().enumerate() {
                let mut img = w.clone();
                if w[k..k + 2] == [0, 1] {
                    img[k..k + 2].copy_from_slice(&[1, 0]);
                } else if w[k..k + 2] == [1, 0] {
                    img[k..k + 2].copy_from_slice(&[0, 1]);
                }
                assert_eq!(perm[v], word_value(d, &img));
            }
        }
    }

    #[test]
    fn block_swaps_permute_digit_blocks() {
        for d in 2usize..4 {
            for a in 0..2 {
                for b in 0..3 {
                    for c in 0..3 {
                        let n = a + b + c;
                        if n == 0 || d.pow(n as u32) > 81 {
                            continue;
                        }
                        let s = mode_block_swap(d, a, b, c).unwrap();
                        assert_eq!(s.modes(), d.pow(n as u32));
                        let perm = perm_of(&interp_lopp_gray(&s, d, n).unwrap()).unwrap();
                        for (v, w) in words(d, n).iter().enumerate() {
                            let img: Vec<usize> = w[..a]
                                .iter()
                                .chain(&w[a + b..])
                                .chain(&w[a..a + b])
                                .copied()
                                .collect();
                            assert_eq!(perm[v], word_value(d, &img), "d={d} a={a} b={b} c={c}");
                        }
                    }
                }
            }
        }
    }
}
