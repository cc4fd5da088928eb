//! Dense polynomials over a prime field, just enough to validate moduli.

use alloc::vec;
use alloc::vec::Vec;

fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut b: u32, mut e: u32, p: u32) -> u32 {
    let mut r: u64 = 1;
    let mut base = u64::from(b % p);
    let m = u64::from(p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    b = r as u32;
    b
}

/// Remainder of `a` modulo `m` (`m` nonzero, any leading coefficient).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    trim(&mut a);
    let mut m = m.to_vec();
    trim(&mut m);
    let dm = m.len() - 1;
    let lead_inv = u64::from(inv_mod(m[dm], p));
    while a.len() > dm {
        let top = a.len() - 1;
        let c = u64::from(a[top]) * lead_inv % u64::from(p);
        if c != 0 {
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                let sub = c * u64::from(mi) % u64::from(p);
                a[shift + i] = ((u64::from(a[shift + i]) + u64::from(p) - sub) % u64::from(p)) as u32;
            }
        }
        a.pop();
        trim(&mut a);
    }
    a
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + u64::from(x) * u64::from(y)) % u64::from(p);
        }
    }
    let out: Vec<u32> = out.into_iter().map(|x| x as u32).collect();
    rem(&out, m, p)
}

/// `x^(p^k) mod m`.
fn x_pow_p_pow(k: u32, m: &[u32], p: u32) -> Vec<u32> {
    let mut cur = rem(&[0, 1], m, p);
    for _ in 0..k {
        let mut acc = vec![1u32];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let len = a.len().max(b.len());
    let mut out: Vec<u32> = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: u32) -> Vec<u32> {
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

/// Rabin's irreducibility test for a monic polynomial of degree `h >= 1`.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let h = (m.len() - 1) as u32;
    if h == 1 {
        return true;
    }
    let x = [0u32, 1];
    if sub(&x_pow_p_pow(h, m, p), &x, p).iter().any(|&c| c != 0) {
        return false;
    }
    prime_factors(h).into_iter().all(|r| {
        let t = sub(&x_pow_p_pow(h / r, m, p), &x, p);
        let g = gcd(m, &t, p);
        g.len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent check: no monic factor of degree <= h/2 divides m.
    fn brute_irreducible(m: &[u32], p: u32) -> bool {
        let h = m.len() - 1;
        for d in 1..=h / 2 {
            let count = (p as usize).pow(d as u32);
            for code in 0..count {
                let mut f: Vec<u32> = (0..d).map(|i| ((code / (p as usize).pow(i as u32)) % p as usize) as u32).collect();
                f.push(1);
                if rem(m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for &p in &[2u32, 3, 5] {
            for h in 2..=4usize {
                let count = (p as usize).pow(h as u32);
                for code in 0..count {
                    let mut m: Vec<u32> = (0..h).map(|i| ((code / (p as usize).pow(i as u32)) % p as usize) as u32).collect();
                    m.push(1);
                    assert_eq!(is_irreducible(&m, p), brute_irreducible(&m, p), "p={p} m={m:?}");
                }
            }
        }
    }

    #[test]
    fn gf9_modulus_has_no_roots() {
        // x^2 + 2x + 2 over F_3: evaluate at 0, 1, 2.
        for x in 0..3u32 {
            assert_ne!((x * x + 2 * x + 2) % 3, 0);
        }
        assert!(is_irreducible(&[2, 2, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 2));
    }
}
