//! Arithmetic in GF(2^w).
//!
//! Elements are little-endian `u64` limbs, bit `i` holding the coefficient of
//! `z^i`. Products use carry-less multiplication (PCLMULQDQ when the CPU has
//! it) with Karatsuba above a small base size, followed by folding modulo a
//! sparse irreducible polynomial.

use crate::bits::{limbs_for, BitWord};
use crate::error::{Error, Result};

use super::irreducible::IRREDUCIBLE;

/// Operand size (in limbs) at or below which products are schoolbook.
const KARATSUBA_BASE: usize = 8;
/// Limbs in the widest supported field.
const MAX_LIMBS: usize = 8192 / 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    width: usize,
    terms: &'static [u32],
}

impl FieldSpec {
    pub fn new(width: usize) -> Result<Self> {
        IRREDUCIBLE
            .binary_search_by_key(&width, |&(w, _)| w)
            .map(|i| FieldSpec {
                width,
                terms: IRREDUCIBLE[i].1,
            })
            .map_err(|_| Error::UnsupportedWidth(width))
    }

    pub fn supported_widths() -> impl Iterator<Item = usize> {
        IRREDUCIBLE.iter().map(|&(w, _)| w)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn limbs(&self) -> usize {
        limbs_for(self.width)
    }

    /// Exponents of the reduction polynomial below `w`; the constant term is
    /// always present.
    pub fn reduction_terms(&self) -> &'static [u32] {
        self.terms
    }

    /// The reduction polynomial as a `w + 1` bit word.
    pub fn modulus(&self) -> BitWord {
        let mut m = BitWord::zeros(self.width + 1);
        m.set(self.width, true);
        for &e in self.terms {
            m.set(e as usize, true);
        }
        m
    }

    pub fn one(&self) -> BitWord {
        let mut one = BitWord::zeros(self.width);
        one.set(0, true);
        one
    }

    pub fn mul(&self, a: &BitWord, b: &BitWord) -> Result<BitWord> {
        a.check_len(self.width)?;
        b.check_len(self.width)?;
        let mut m = Multiplier::new(*self);
        let mut out = vec![0u64; self.limbs()];
        m.mul_into(a.limbs(), b.limbs(), &mut out);
        Ok(BitWord::from_limbs(out, self.width))
    }

    pub fn square(&self, a: &BitWord) -> Result<BitWord> {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &BitWord, mut e: u128) -> Result<BitWord> {
        a.check_len(self.width)?;
        let mut m = Multiplier::new(*self);
        let mut base = a.limbs().to_vec();
        let mut acc = self.one().limbs().to_vec();
        let mut tmp = vec![0u64; self.limbs()];
        while e > 0 {
            if e & 1 == 1 {
                m.mul_into(&acc, &base, &mut tmp);
                acc.copy_from_slice(&tmp);
            }
            m.mul_into(&base, &base, &mut tmp);
            base.copy_from_slice(&tmp);
            e >>= 1;
        }
        Ok(BitWord::from_limbs(acc, self.width))
    }

    /// `a^(2^w - 2)`, which is `a^-1` for `a != 0` and `0` for `a = 0`.
    pub fn inverse(&self, a: &BitWord) -> Result<BitWord> {
        a.check_len(self.width)?;
        let mut m = Multiplier::new(*self);
        let mut sq = a.limbs().to_vec();
        let mut acc = self.one().limbs().to_vec();
        let mut tmp = vec![0u64; self.limbs()];
        for _ in 1..self.width {
            m.mul_into(&sq, &sq, &mut tmp);
            sq.copy_from_slice(&tmp);
            m.mul_into(&acc, &sq, &mut tmp);
            acc.copy_from_slice(&tmp);
        }
        Ok(BitWord::from_limbs(acc, self.width))
    }

    /// Reduces a product of up to `2 * limbs` limbs in place; the result is
    /// left in the low `limbs` limbs.
    fn reduce(&self, p: &mut [u64]) {
        let w = self.width;
        let l = self.limbs();
        if w.is_multiple_of(64) && l > 1 && self.terms.iter().all(|&e| e as usize / 64 + 1 < l) {
            self.reduce_whole_limbs(p);
            return;
        }
        let mut pos = p.len() * 64;
        while pos > w {
            let start = pos.saturating_sub(64).max(w);
            let chunk = get_bits(p, start, pos - start);
            if chunk != 0 {
                xor_bits(p, start, chunk);
                for &e in self.terms {
                    xor_bits(p, start - w + e as usize, chunk);
                }
            }
            // A fold can land back inside [start, pos) only for tiny widths.
            if get_bits(p, start, pos - start) == 0 {
                pos = start;
            }
        }
    }

    /// Fast path for `w` a multiple of 64: the limbs above `w` are folded down
    /// as whole shifted blocks, one block per reduction term.
    fn reduce_whole_limbs(&self, p: &mut [u64]) {
        let l = self.limbs();
        // buf[0] and buf[len + 1] stay zero so both shift halves read in bounds
        let mut buf = [0u64; MAX_LIMBS + 2];
        let mut end = p.len();
        while end > l {
            let len = end - l;
            buf[1..=len].copy_from_slice(&p[l..end]);
            buf[len + 1] = 0;
            p[l..end].fill(0);
            let mut top = l;
            for &e in self.terms {
                let (ws, bs) = (e as usize / 64, e % 64);
                if bs == 0 {
                    for (t, &v) in p[ws..ws + len].iter_mut().zip(&buf[1..=len]) {
                        *t ^= v;
                    }
                    top = top.max(ws + len);
                } else {
                    for k in 0..=len {
                        p[ws + k] ^= (buf[k + 1] << bs) | (buf[k] >> (64 - bs));
                    }
                    top = top.max(ws + len + 1);
                }
            }
            end = top;
        }
    }
}

fn get_bits(a: &[u64], start: usize, width: usize) -> u64 {
    let (wi, bi) = (start / 64, start % 64);
    let mut v = a[wi] >> bi;
    if bi != 0 && wi + 1 < a.len() {
        v |= a[wi + 1] << (64 - bi);
    }
    if width < 64 {
        v &= (1u64 << width) - 1;
    }
    v
}

fn xor_bits(a: &mut [u64], start: usize, v: u64) {
    let (wi, bi) = (start / 64, start % 64);
    a[wi] ^= v << bi;
    if bi != 0 && wi + 1 < a.len() {
        a[wi + 1] ^= v >> (64 - bi);
    }
}

/// Reusable buffers for repeated products in one field.
pub struct Multiplier {
    spec: FieldSpec,
    product: Vec<u64>,
    scratch: Vec<u64>,
}

impl Multiplier {
    pub fn new(spec: FieldSpec) -> Self {
        let l = spec.limbs();
        Multiplier {
            spec,
            product: vec![0; 2 * l],
            scratch: vec![0; 4 * l + 64],
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// `out = a * b` reduced; all three are `limbs` long.
    pub fn mul_into(&mut self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let l = self.spec.limbs();
        debug_assert!(a.len() == l && b.len() == l && out.len() == l);
        if l == 1 {
            let (lo, hi) = clmul64(a[0], b[0]);
            self.product[0] = lo;
            self.product[1] = hi;
        } else {
            clmul_limbs(a, b, &mut self.product, &mut self.scratch);
        }
        self.spec.reduce(&mut self.product);
        out.copy_from_slice(&self.product[..l]);
    }

    /// Reduces a `2 * limbs` product in place and copies the result to `out`.
    pub(crate) fn reduce_into(&self, p: &mut [u64], out: &mut [u64]) {
        self.spec.reduce(p);
        out.copy_from_slice(&p[..self.spec.limbs()]);
    }
}

/// Full carry-less product of equal-length limb slices into `out` (twice as long).
pub(crate) fn clmul_limbs(a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
    debug_assert_eq!(a.len(), b.len());
    debug_assert_eq!(out.len(), 2 * a.len());
    let l = a.len();
    if l <= KARATSUBA_BASE {
        out.fill(0);
        schoolbook(a, b, out);
        return;
    }
    let m = l / 2;
    let h = l - m;
    let (lo, hi) = out.split_at_mut(2 * m);
    clmul_limbs(&a[..m], &b[..m], lo, scratch);
    clmul_limbs(&a[m..], &b[m..], hi, scratch);

    let (sa, rest) = scratch.split_at_mut(h);
    let (sb, rest) = rest.split_at_mut(h);
    let (mid, rest) = rest.split_at_mut(2 * h);
    sa.copy_from_slice(&a[m..]);
    sb.copy_from_slice(&b[m..]);
    for i in 0..m {
        sa[i] ^= a[i];
        sb[i] ^= b[i];
    }
    clmul_limbs(sa, sb, mid, rest);
    for (i, v) in out[..2 * m].iter().enumerate() {
        mid[i] ^= v;
    }
    for (i, v) in out[2 * m..].iter().enumerate() {
        mid[i] ^= v;
    }
    for (i, v) in mid.iter().enumerate() {
        out[m + i] ^= v;
    }
}

/// The leaf structure of [`clmul_limbs`] for one operand size.
///
/// Karatsuba is bilinear, so `sum_i a_i b_i` can be formed by expanding every
/// operand into its leaf operands, summing the leaf products, and running the
/// recombination once at the end.
#[derive(Debug, Clone)]
pub(crate) struct KaratsubaPlan {
    limbs: usize,
    /// (operand offset, product offset, size) per leaf, in recursion order.
    leaves: Vec<(usize, usize, usize)>,
    operand_len: usize,
    product_len: usize,
}

impl KaratsubaPlan {
    pub(crate) fn new(limbs: usize) -> Self {
        fn walk(len: usize, plan: &mut KaratsubaPlan) {
            if len <= KARATSUBA_BASE {
                plan.leaves.push((plan.operand_len, plan.product_len, len));
                plan.operand_len += len;
                plan.product_len += 2 * len;
            } else {
                let m = len / 2;
                walk(m, plan);
                walk(len - m, plan);
                walk(len - m, plan);
            }
        }
        let mut plan = KaratsubaPlan {
            limbs,
            leaves: Vec::new(),
            operand_len: 0,
            product_len: 0,
        };
        walk(limbs, &mut plan);
        plan
    }

    pub(crate) fn operand_len(&self) -> usize {
        self.operand_len
    }

    pub(crate) fn product_len(&self) -> usize {
        self.product_len
    }

    /// Scratch limbs needed by [`expand`](Self::expand) and
    /// [`combine`](Self::combine).
    pub(crate) fn scratch_len(&self) -> usize {
        4 * self.limbs
    }

    /// Writes the leaf operands of `a` into `out` (`operand_len` limbs).
    pub(crate) fn expand(&self, a: &[u64], out: &mut [u64], scratch: &mut [u64]) {
        fn walk<'o>(a: &[u64], out: &'o mut [u64], scratch: &mut [u64]) -> &'o mut [u64] {
            let len = a.len();
            if len <= KARATSUBA_BASE {
                let (head, rest) = out.split_at_mut(len);
                head.copy_from_slice(a);
                return rest;
            }
            let m = len / 2;
            let h = len - m;
            let rest = walk(&a[..m], out, scratch);
            let rest = walk(&a[m..], rest, scratch);
            let (sum, scratch) = scratch.split_at_mut(h);
            sum.copy_from_slice(&a[m..]);
            for (s, x) in sum.iter_mut().zip(&a[..m]) {
                *s ^= x;
            }
            walk(sum, rest, scratch)
        }
        debug_assert_eq!(a.len(), self.limbs);
        walk(a, &mut out[..self.operand_len], scratch);
    }

    /// `acc ^=` the leaf products of two expanded operands.
    pub(crate) fn accumulate(&self, ea: &[u64], eb: &[u64], acc: &mut [u64]) {
        let leaf = leaf_kernel();
        for &(o, p, len) in &self.leaves {
            leaf(&ea[o..o + len], &eb[o..o + len], &mut acc[p..p + 2 * len]);
        }
    }

    /// Recombines summed leaf products into the full product (`2 * limbs`).
    pub(crate) fn combine(&self, acc: &[u64], out: &mut [u64], scratch: &mut [u64]) {
        fn walk<'a>(len: usize, acc: &'a [u64], out: &mut [u64], scratch: &mut [u64]) -> &'a [u64] {
            if len <= KARATSUBA_BASE {
                let (head, rest) = acc.split_at(2 * len);
                out.copy_from_slice(head);
                return rest;
            }
            let m = len / 2;
            let h = len - m;
            let (lo, hi) = out.split_at_mut(2 * m);
            let rest = walk(m, acc, lo, scratch);
            let rest = walk(h, rest, hi, scratch);
            let (mid, scratch) = scratch.split_at_mut(2 * h);
            let rest = walk(h, rest, mid, scratch);
            for (x, v) in mid.iter_mut().zip(out[..2 * m].iter()) {
                *x ^= v;
            }
            for (x, v) in mid.iter_mut().zip(out[2 * m..].iter()) {
                *x ^= v;
            }
            for (o, v) in out[m..].iter_mut().zip(mid.iter()) {
                *o ^= v;
            }
            rest
        }
        walk(
            self.limbs,
            &acc[..self.product_len],
            &mut out[..2 * self.limbs],
            scratch,
        );
    }
}

type LeafFn = fn(&[u64], &[u64], &mut [u64]);

fn leaf_kernel() -> LeafFn {
    #[cfg(target_arch = "x86_64")]
    {
        if x86::wide_available() {
            return |a, b, out| match (<&[u64; 8]>::try_from(a), <&[u64; 8]>::try_from(b)) {
                // SAFETY: the wide kernel's CPU features were detected above.
                (Ok(a), Ok(b)) => unsafe { x86::block8_wide(a, b, out) },
                _ => schoolbook(a, b, out),
            };
        }
    }
    schoolbook
}

fn schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the required CPU feature was detected at runtime.
            unsafe { x86::schoolbook(a, b, out) };
            return;
        }
    }
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let (lo, hi) = clmul64_soft(x, y);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

pub(crate) fn clmul64(a: u64, b: u64) -> (u64, u64) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the required CPU feature was detected at runtime.
            return unsafe { x86::clmul64(a, b) };
        }
    }
    clmul64_soft(a, b)
}

/// Portable carry-less product, four bits of `a` at a time.
pub(crate) fn clmul64_soft(a: u64, b: u64) -> (u64, u64) {
    let b = b as u128;
    let mut table = [0u128; 16];
    for i in 1..16 {
        table[i] = if i & 1 == 1 {
            table[i - 1] ^ b
        } else {
            table[i >> 1] << 1
        };
    }
    let mut acc = 0u128;
    for nib in (0..16).rev() {
        acc = (acc << 4) ^ table[((a >> (4 * nib)) & 0xf) as usize];
    }
    (acc as u64, (acc >> 64) as u64)
}

#[cfg(target_arch = "x86_64")]
mod x86 {
    use std::arch::x86_64::*;

    #[target_feature(enable = "pclmulqdq,sse2,sse4.1")]
    pub(super) unsafe fn clmul64(a: u64, b: u64) -> (u64, u64) {
        let r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(a as i64), _mm_cvtsi64_si128(b as i64), 0);
        (_mm_cvtsi128_si64(r) as u64, _mm_extract_epi64(r, 1) as u64)
    }

    /// `out ^= a * b` for operands of at most eight limbs.
    #[target_feature(enable = "pclmulqdq,sse2,sse4.1")]
    pub(super) unsafe fn schoolbook(a: &[u64], b: &[u64], out: &mut [u64]) {
        if a.len() == super::KARATSUBA_BASE && b.len() == super::KARATSUBA_BASE {
            let a: &[u64; super::KARATSUBA_BASE] = a.try_into().unwrap();
            let b: &[u64; super::KARATSUBA_BASE] = b.try_into().unwrap();
            if wide_available() {
                return block8_wide(a, b, out);
            }
            return block(a, b, out);
        }
        let mut acc = [_mm_setzero_si128(); 2 * super::KARATSUBA_BASE];
        for (i, &x) in a.iter().enumerate() {
            let xv = _mm_cvtsi64_si128(x as i64);
            for (j, &y) in b.iter().enumerate() {
                let yv = _mm_cvtsi64_si128(y as i64);
                acc[i + j] = _mm_xor_si128(acc[i + j], _mm_clmulepi64_si128(xv, yv, 0));
            }
        }
        let n = a.len() + b.len() - 1;
        for (k, v) in acc.iter().enumerate().take(n) {
            out[k] ^= _mm_cvtsi128_si64(*v) as u64;
            out[k + 1] ^= _mm_extract_epi64(*v, 1) as u64;
        }
    }

    pub(super) fn wide_available() -> bool {
        is_x86_feature_detected!("avx512f") && is_x86_feature_detected!("vpclmulqdq")
    }

    /// `out ^= a * b` for eight limbs with 512-bit carry-less multiplies. Each
    /// broadcast pair of `a` meets all four pairs of `b` at once; the lanes
    /// are then shifted into place across the two output registers.
    #[target_feature(enable = "avx512f,vpclmulqdq,pclmulqdq,sse2,sse4.1")]
    pub(super) unsafe fn block8_wide(a: &[u64; 8], b: &[u64; 8], out: &mut [u64]) {
        debug_assert!(out.len() >= 16);
        let zero = _mm512_setzero_si512();
        let bz = _mm512_loadu_si512(b.as_ptr() as *const _);
        let mut lo = zero;
        let mut hi = zero;
        macro_rules! shifted_xor {
            // valignq only reads three bits of its count, so whole-register
            // shifts are spelled out
            ($x:expr, 0) => {
                lo = _mm512_xor_si512(lo, $x)
            };
            ($x:expr, 8) => {
                hi = _mm512_xor_si512(hi, $x)
            };
            ($x:expr, $s:literal) => {{
                let x = $x;
                lo = _mm512_xor_si512(lo, _mm512_alignr_epi64::<{ 8 - $s }>(x, zero));
                hi = _mm512_xor_si512(hi, _mm512_alignr_epi64::<{ 8 - $s }>(zero, x));
            }};
        }
        macro_rules! row {
            ($i:literal, $s0:tt, $s1:tt, $s2:tt) => {{
                let ai = _mm512_broadcast_i32x4(_mm_loadu_si128(
                    a.as_ptr().add(2 * $i) as *const __m128i
                ));
                shifted_xor!(_mm512_clmulepi64_epi128::<0x00>(ai, bz), $s0);
                shifted_xor!(
                    _mm512_xor_si512(
                        _mm512_clmulepi64_epi128::<0x01>(ai, bz),
                        _mm512_clmulepi64_epi128::<0x10>(ai, bz)
                    ),
                    $s1
                );
                shifted_xor!(_mm512_clmulepi64_epi128::<0x11>(ai, bz), $s2);
            }};
        }
        row!(0, 0, 1, 2);
        row!(1, 2, 3, 4);
        row!(2, 4, 5, 6);
        row!(3, 6, 7, 8);
        let o = out.as_mut_ptr() as *mut __m512i;
        _mm512_storeu_si512(o, _mm512_xor_si512(_mm512_loadu_si512(o), lo));
        _mm512_storeu_si512(o.add(1), _mm512_xor_si512(_mm512_loadu_si512(o.add(1)), hi));
    }

    /// Fixed-size case, fully unrolled by the compiler. Limb pairs are packed
    /// so each clmul picks its halves with the immediate selector.
    #[target_feature(enable = "pclmulqdq,sse2,sse4.1")]
    pub(super) unsafe fn block<const N: usize>(a: &[u64; N], b: &[u64; N], out: &mut [u64]) {
        let load =
            |s: &[u64; N], k: usize| _mm_loadu_si128(s.as_ptr().add(2 * k) as *const __m128i);
        // even[k] collects the products landing at limb 2k, odd[k] at 2k+1
        let mut even = [_mm_setzero_si128(); N];
        let mut odd = [_mm_setzero_si128(); N];
        for i in 0..N / 2 {
            let x = load(a, i);
            for j in 0..N / 2 {
                let y = load(b, j);
                let k = i + j;
                even[k] = _mm_xor_si128(even[k], _mm_clmulepi64_si128(x, y, 0x00));
                even[k + 1] = _mm_xor_si128(even[k + 1], _mm_clmulepi64_si128(x, y, 0x11));
                let m = _mm_xor_si128(
                    _mm_clmulepi64_si128(x, y, 0x01),
                    _mm_clmulepi64_si128(x, y, 0x10),
                );
                odd[k] = _mm_xor_si128(odd[k], m);
            }
        }
        // odd[k] spans limbs 2k+1 and 2k+2: fold it into the even accumulators
        for k in 0..N {
            let v = odd[k];
            even[k] = _mm_xor_si128(even[k], _mm_slli_si128(v, 8));
            if k + 1 < N {
                even[k + 1] = _mm_xor_si128(even[k + 1], _mm_srli_si128(v, 8));
            }
        }
        for (k, v) in even.iter().enumerate() {
            let o = _mm_loadu_si128(out.as_ptr().add(2 * k) as *const __m128i);
            _mm_storeu_si128(
                out.as_mut_ptr().add(2 * k) as *mut __m128i,
                _mm_xor_si128(o, *v),
            );
        }
    }
}
