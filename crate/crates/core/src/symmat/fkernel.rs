//! Hessenberg characteristic polynomial modulo a prime `p < 2^49`, with the
//! residues held in `f64` and products reduced through fused multiply-add.
//! Compiled for AVX2+FMA and selected at run time.

const LANES: usize = 8;

#[derive(Clone, Copy)]
struct Fp {
    p: f64,
    pinv: f64,
}

impl Fp {
    /// `a·b mod p` for `a, b ∈ [0, p)`.
    ///
    /// `a·b = h + l` exactly; rounding `h/p` to the nearest integer leaves a
    /// remainder in `(−p, p)` because `p < 2^49` keeps `|l|` and the quotient
    /// error small.
    #[inline(always)]
    fn mul(self, a: f64, b: f64) -> f64 {
        let h = a * b;
        let l = a.mul_add(b, -h);
        let q = (h * self.pinv).round_ties_even();
        let r = (-q).mul_add(self.p, h) + l;
        if r < 0.0 {
            r + self.p
        } else {
            r
        }
    }

    /// Brings `r ∈ (−2p, 3p)` into `[0, p)`.
    #[inline(always)]
    fn fix(self, r: f64) -> f64 {
        let r = if r < 0.0 { r + self.p } else { r };
        let r = if r < 0.0 { r + self.p } else { r };
        let r = if r >= self.p { r - self.p } else { r };
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    /// `x mod p` for integral `0 ≤ x < 2^53`.
    #[inline(always)]
    fn reduce(self, x: f64) -> f64 {
        let q = (x * self.pinv).floor();
        self.fix((-q).mul_add(self.p, x))
    }

    /// `Σ a_i b_i mod p`.
    #[inline(always)]
    fn dot(self, a: &[f64], b: &[f64]) -> f64 {
        let mut acc = [0.0f64; LANES];
        let mut ca = a.chunks_exact(LANES);
        let mut cb = b.chunks_exact(LANES);
        let mut pending = 0;
        for (x, y) in (&mut ca).zip(&mut cb) {
            for j in 0..LANES {
                acc[j] += self.mul(x[j], y[j]);
            }
            pending += 1;
            // Eight reduced terms per lane stay below 2^52.
            if pending == 7 {
                for v in acc.iter_mut() {
                    *v = self.reduce(*v);
                }
                pending = 0;
            }
        }
        let mut s = 0.0;
        for v in acc {
            s = self.reduce(s + self.reduce(v));
        }
        for (&x, &y) in ca.remainder().iter().zip(cb.remainder()) {
            s = self.reduce(s + self.mul(x, y));
        }
        s
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut base, mut e) = (1u128, a as u128, p - 2);
    let pp = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % pp;
        }
        base = base * base % pp;
        e >>= 1;
    }
    r as u64
}

pub(super) fn available() -> bool {
    #[cfg(target_arch = "x86_64")]
    {
        std::is_x86_feature_detected!("avx2") && std::is_x86_feature_detected!("fma")
    }
    #[cfg(not(target_arch = "x86_64"))]
    {
        false
    }
}

/// Callers must check [`available`] first.
#[cfg(target_arch = "x86_64")]
pub(super) fn char_poly_mod(p: u64, h: Vec<u64>, n: usize) -> Vec<u64> {
    assert!(available());
    if std::is_x86_feature_detected!("avx512f") {
        // SAFETY: the CPU supports AVX-512F, AVX2 and FMA.
        unsafe { char_poly_mod_avx512(p, h, n) }
    } else {
        // SAFETY: the CPU supports AVX2 and FMA, checked above.
        unsafe { char_poly_mod_fma(p, h, n) }
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx512f,avx2,fma")]
unsafe fn char_poly_mod_avx512(pu: u64, h: Vec<u64>, n: usize) -> Vec<u64> {
    kernel(pu, h, n)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2,fma")]
unsafe fn char_poly_mod_fma(pu: u64, h: Vec<u64>, n: usize) -> Vec<u64> {
    kernel(pu, h, n)
}

#[cfg(not(target_arch = "x86_64"))]
pub(super) fn char_poly_mod(_p: u64, _h: Vec<u64>, _n: usize) -> Vec<u64> {
    unreachable!("no FMA kernel on this target")
}

#[inline(always)]
fn kernel(pu: u64, h: Vec<u64>, n: usize) -> Vec<u64> {
    let fp = Fp {
        p: pu as f64,
        pinv: 1.0 / pu as f64,
    };
    let p = fp.p;
    let mut h: Vec<f64> = h.into_iter().map(|v| v as f64).collect();

    let mut u = vec![0.0f64; n];
    for m in 1..n {
        let col = m - 1;
        let Some(piv) = (m..n).find(|&i| h[i * n + col] != 0.0) else {
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
        let pinv = inv_mod(h[m * n + col] as u64, pu) as f64;
        let mut any = false;
        for i in m + 1..n {
            let f = fp.mul(h[i * n + col], pinv);
            u[i] = f;
            any |= f != 0.0;
        }
        if !any {
            continue;
        }
        // Row i loses u_i · row m, then column m gains Σ_i u_i · column i.
        // Each row is finished in one visit.
        let (top, rest) = h.split_at_mut((m + 1) * n);
        let pivot_row = &top[m * n + col..m * n + n];
        let us = &u[m + 1..n];
        for (i, row) in rest.chunks_exact_mut(n).enumerate() {
            let f = us[i];
            if f != 0.0 {
                let nf = p - f;
                for (x, &y) in row[col..].iter_mut().zip(pivot_row) {
                    let s = *x + fp.mul(nf, y);
                    *x = if s >= p { s - p } else { s };
                }
            }
            let s = row[m] + fp.dot(us, &row[m + 1..n]);
            row[m] = if s >= p { s - p } else { s };
        }
        for row in top.chunks_exact_mut(n) {
            let s = row[m] + fp.dot(us, &row[m + 1..n]);
            row[m] = if s >= p { s - p } else { s };
        }
        for x in u[m + 1..n].iter_mut() {
            *x = 0.0;
        }
    }

    let w = n + 1;
    let mut table = vec![0.0f64; w * w];
    table[0] = 1.0;
    let mut coef = vec![0.0f64; n];
    for m in 0..n {
        let mut prod = 1.0;
        for i in (0..m).rev() {
            prod = fp.mul(prod, h[(i + 1) * n + i]);
            coef[i] = fp.mul(h[i * n + m], prod);
        }
        let hmm = h[m * n + m];
        let nh = if hmm == 0.0 { 0.0 } else { p - hmm };
        for k in 0..=m + 1 {
            let mut v = if k >= 1 { table[(k - 1) * w + m] } else { 0.0 };
            if k <= m {
                v = fp.fix(v + fp.mul(table[k * w + m], nh));
            }
            if k < m {
                let s = fp.dot(&coef[k..m], &table[k * w + k..k * w + m]);
                v = fp.fix(v - s);
            }
            table[k * w + m + 1] = v;
        }
    }
    (0..=n).map(|k| table[k * w + n] as u64).collect()
}
