//! Dense polynomials over a prime field `F_p`, coefficients stored low-degree-first.
//!
//! Only what field construction needs: reduction, modular products and powers,
//! and trial-division irreducibility.

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse
    pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Remainder of `a` modulo `f` over `F_p`. `f` must be nonzero.
pub(crate) fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let df = degree(f).expect("division by the zero polynomial");
    let lead_inv = inv_mod(f[df], p) as u64;
    let mut r: Vec<u32> = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < df {
            break;
        }
        let factor = r[dr] as u64 * lead_inv % p as u64;
        let shift = dr - df;
        for (i, &c) in f.iter().enumerate().take(df + 1) {
            let sub = factor * c as u64 % p as u64;
            let cur = r[shift + i] as u64;
            r[shift + i] = ((cur + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn powmod(base: &[u32], mut exp: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut acc = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(&acc, &b, f, p);
        }
        b = mulmod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

/// Irreducibility by trial division against every monic polynomial of degree
/// `1..=deg/2`.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let Some(d) = degree(f) else { return false };
    if d == 0 {
        return false;
    }
    for k in 1..=d / 2 {
        let count = (p as u64).pow(k as u32);
        for idx in 0..count {
            let mut g = vec![0u32; k + 1];
            let mut v = idx;
            for c in g.iter_mut().take(k) {
                *c = (v % p as u64) as u32;
                v /= p as u64;
            }
            g[k] = 1;
            if degree(&rem(f, &g, p)).is_none() {
                return false;
            }
        }
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// True when `x` has multiplicative order exactly `p^deg(f) - 1` modulo `f`.
pub(crate) fn is_primitive(f: &[u32], p: u32) -> bool {
    let Some(d) = degree(f) else { return false };
    if d == 0 || f[0] == 0 {
        return false;
    }
    let order = (p as u64).pow(d as u32) - 1;
    let x = [0u32, 1u32];
    let one = rem(&[1], f, p);
    if powmod(&x, order, f, p) != one {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|r| powmod(&x, order / r, f, p) != one)
}
