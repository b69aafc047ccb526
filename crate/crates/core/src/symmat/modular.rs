//! Exact characteristic polynomials by multi-modular Hessenberg reduction.
//!
//! The matrix is scaled to an integer matrix `A`, `det(λI − A)` is computed
//! modulo enough 62-bit primes to exceed twice the coefficient bound
//! `(R+1)^N` (`R` the largest absolute row sum), and the coefficients are
//! recovered by Chinese remaindering into the symmetric range.

use super::{fkernel, RationalMatrix, UniPoly};
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Montgomery arithmetic modulo an odd `p < 2^62`.
#[derive(Clone, Copy, Debug)]
struct Mont {
    p: u64,
    /// `-p^{-1} mod 2^64`.
    pinv: u64,
    /// `2^128 mod p`.
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Mont {
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Mont {
            p,
            pinv: inv.wrapping_neg(),
            r2,
        }
    }

    /// `t · 2^{-64} mod p` for `t < p · 2^64`.
    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    /// `Σ a_i b_i`, reducing every four raw products.
    #[inline]
    fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        let mut acc = 0u64;
        let mut ca = a.chunks_exact(4);
        let mut cb = b.chunks_exact(4);
        for (x, y) in (&mut ca).zip(&mut cb) {
            let t = x[0] as u128 * y[0] as u128
                + x[1] as u128 * y[1] as u128
                + x[2] as u128 * y[2] as u128
                + x[3] as u128 * y[3] as u128;
            acc = self.add(acc, self.redc(t));
        }
        for (&x, &y) in ca.remainder().iter().zip(cb.remainder()) {
            acc = self.add(acc, self.mul(x, y));
        }
        acc
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^bits`, descending.
struct PrimeStream {
    next: u64,
}

impl PrimeStream {
    fn below_pow2(bits: u32) -> PrimeStream {
        PrimeStream {
            next: (1u64 << bits) - 1,
        }
    }
}

impl Iterator for PrimeStream {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        while self.next > 3 {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
        None
    }
}

/// `a·f mod p` with `f_shoup = ⌊f·2^64/p⌋` precomputed.
#[inline(always)]
fn mul_shoup(a: u64, f: u64, f_shoup: u64, p: u64) -> u64 {
    let q = ((a as u128 * f_shoup as u128) >> 64) as u64;
    let r = a.wrapping_mul(f).wrapping_sub(q.wrapping_mul(p));
    if r >= p {
        r - p
    } else {
        r
    }
}

#[inline(always)]
fn shoup(f: u64, p: u64) -> u64 {
    (((f as u128) << 64) / p as u128) as u64
}

/// `det(λI − A) mod p` for `A` given by residues in `[0, p)` (row-major, `n×n`).
/// Returns residues, lowest degree first, monic.
fn char_poly_mod(mont: &Mont, mut h: Vec<u64>, n: usize) -> Vec<u64> {
    let p = mont.p;
    // `dot` returns Σ·2^{-64}; multiplying by 2^128 in Montgomery form undoes it.
    let dot = |a: &[u64], b: &[u64]| mont.mul(mont.dot(a, b), mont.r2);
    let inv = |a: u64| mont.from_mont(mont.inv(mont.to_mont(a)));

    let mut u = vec![0u64; n];
    for m in 1..n {
        let col = m - 1;
        let Some(piv) = (m..n).find(|&i| h[i * n + col] != 0) else {
            continue;
        };
        if piv != m {
            for c in 0..n {
                h.swap(piv * n + c, m * n + c);
            }
            for r in 0..n {
                h.swap(r * n + piv, r * n + m);
            }
        }
        let pinv = inv(h[m * n + col]);
        let pinv_s = shoup(pinv, p);
        let mut any = false;
        for i in m + 1..n {
            let f = mul_shoup(h[i * n + col], pinv, pinv_s, p);
            u[i] = f;
            if f == 0 {
                continue;
            }
            any = true;
            let nf = p - f;
            let nf_s = shoup(nf, p);
            let (head, tail) = h.split_at_mut(i * n);
            let pivot_row = &head[m * n + col..m * n + n];
            let row = &mut tail[col..n];
            for (x, &y) in row.iter_mut().zip(pivot_row) {
                *x = mont.add(*x, mul_shoup(y, nf, nf_s, p));
            }
        }
        if any {
            // Column m gains Σ_i u_i · column i.
            let us = &u[m + 1..n];
            for row in h.chunks_exact_mut(n) {
                let extra = dot(us, &row[m + 1..n]);
                row[m] = mont.add(row[m], extra);
            }
        }
        for x in u[m + 1..n].iter_mut() {
            *x = 0;
        }
    }

    // p_{m+1}(λ) = (λ − h_{mm}) p_m(λ) − Σ_{i<m} h_{im} (∏_{j=i+1}^{m} h_{j,j−1}) p_i(λ).
    // `table[k*(n+1) + i]` is the coefficient of λ^k in p_i.
    let w = n + 1;
    let mut table = vec![0u64; w * w];
    table[0] = 1;
    let mut coef = vec![0u64; n];
    for m in 0..n {
        let mut prod = 1u64;
        for i in (0..m).rev() {
            prod = mont_plain_mul(mont, prod, h[(i + 1) * n + i]);
            coef[i] = mont_plain_mul(mont, h[i * n + m], prod);
        }
        let hmm = h[m * n + m];
        let nh = p - hmm;
        let nh = if nh == p { 0 } else { nh };
        let nh_s = shoup(nh, p);
        for k in 0..=m + 1 {
            // λ·p_m − h_mm·p_m − Σ_{i<m} coef_i·p_i, where p_i has no λ^k term for i < k.
            let mut v = if k >= 1 { table[(k - 1) * w + m] } else { 0 };
            if k <= m {
                v = mont.add(v, mul_shoup(table[k * w + m], nh, nh_s, p));
            }
            if k < m {
                let s = dot(&coef[k..m], &table[k * w + k..k * w + m]);
                v = mont.sub(v, s);
            }
            table[k * w + m + 1] = v;
        }
    }
    (0..=n).map(|k| table[k * w + n]).collect()
}

#[inline(always)]
fn mont_plain_mul(mont: &Mont, a: u64, b: u64) -> u64 {
    mont.mul(mont.mul(a, b), mont.r2)
}

/// Incremental Chinese remaindering of coefficient vectors.
struct Crt {
    modulus: BigInt,
    residues: Vec<BigInt>,
}

impl Crt {
    fn new(len: usize) -> Crt {
        Crt {
            modulus: BigInt::one(),
            residues: vec![BigInt::zero(); len],
        }
    }

    fn absorb(&mut self, p: u64, r: &[u64]) {
        let bp = BigInt::from(p);
        let m_mod_p = (&self.modulus % &bp).to_u64().unwrap();
        let m_inv = powmod(m_mod_p, p - 2, p);
        for (x, &ri) in self.residues.iter_mut().zip(r) {
            let x_mod_p = x.mod_floor(&bp).to_u64().unwrap();
            let delta = (ri + p - x_mod_p) % p;
            let t = mulmod(delta, m_inv, p);
            if t != 0 {
                *x += &self.modulus * t;
            }
        }
        self.modulus *= bp;
    }

    fn symmetric(self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.residues
            .into_iter()
            .map(|x| if x > half { x - &self.modulus } else { x })
            .collect()
    }
}

fn bound_bits(n: usize, max_row_sum: &BigInt) -> u64 {
    // Coefficients are bounded by (R+1)^N; leave one bit for the sign.
    (max_row_sum + 1u32).bits() * n as u64 + 2
}

fn char_poly_with<F>(n: usize, max_row_sum: &BigInt, reduce: F) -> Vec<BigInt>
where
    F: Fn(u64) -> Vec<u64>,
{
    if n == 0 {
        return vec![BigInt::one()];
    }
    let need = bound_bits(n, max_row_sum);
    let fast = fkernel::available();
    let mut crt = Crt::new(n + 1);
    for p in PrimeStream::below_pow2(if fast { 49 } else { 62 }) {
        let residues = if fast {
            fkernel::char_poly_mod(p, reduce(p), n)
        } else {
            char_poly_mod(&Mont::new(p), reduce(p), n)
        };
        crt.absorb(p, &residues);
        if crt.modulus.bits() > need {
            break;
        }
    }
    crt.symmetric()
}

/// `det(λI − A)` for a small-integer matrix, lowest degree first.
pub fn int_char_poly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    let max_row_sum = a
        .iter()
        .map(|r| r.iter().map(|v| v.unsigned_abs() as u128).sum::<u128>())
        .max()
        .unwrap_or(0);
    char_poly_with(n, &BigInt::from(max_row_sum), |p| {
        let p = p as i64;
        a.iter()
            .flat_map(|r| r.iter().map(move |&v| v.rem_euclid(p) as u64))
            .collect()
    })
}

/// `det(λI − A)` for an integer matrix with arbitrary entries.
pub fn big_char_poly(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let max_row_sum = a
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).fold(BigInt::zero(), |s, v| s + v))
        .max()
        .unwrap_or_else(BigInt::zero);
    char_poly_with(n, &max_row_sum, |p| {
        let bp = BigInt::from(p);
        a.iter()
            .flat_map(|r| r.iter().map(|v| v.mod_floor(&bp).to_u64().unwrap()))
            .collect()
    })
}

/// Exact `det(λI − M)` for a rational matrix.
pub fn char_poly(m: &RationalMatrix) -> UniPoly {
    let n = m.dim();
    let scale = m
        .entries()
        .iter()
        .fold(BigInt::one(), |l, e| l.lcm(e.denom()));
    let a: Vec<Vec<BigInt>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let e = m.get(r, c);
                    e.numer() * (&scale / e.denom())
                })
                .collect()
        })
        .collect();
    let ints = big_char_poly(&a);
    // c_k(M) = c_k(A) / scale^{N-k}.
    let mut denom = BigInt::one();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for k in (0..=n).rev() {
        coeffs[k] = BigRational::new(ints[k].clone(), denom.clone());
        denom *= &scale;
    }
    UniPoly::from_coeffs(coeffs)
}

/// Expands `∏ (λ − r)^m` for integer roots, lowest degree first.
pub fn int_poly_from_roots<'a>(
    roots: impl IntoIterator<Item = (&'a BigInt, usize)>,
) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for (r, m) in roots {
        for _ in 0..m {
            let mut next = vec![BigInt::zero(); c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                if r.sign() != Sign::NoSign {
                    next[i] -= ci * r;
                }
            }
            c = next;
        }
    }
    c
}
