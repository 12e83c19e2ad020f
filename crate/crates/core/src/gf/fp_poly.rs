//! Dense polynomials over a prime field GF(p), coefficients stored low degree first.
//!
//! Only what the field constructor needs: multiplication, remainder, gcd and
//! modular exponentiation. Polynomials are kept trimmed (no trailing zeros), the
//! zero polynomial is the empty vector.

pub(crate) type Poly = Vec<u32>;

pub(crate) fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime and a != 0
    pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Poly {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let x = *a.get(i).unwrap_or(&0);
        let y = *b.get(i).unwrap_or(&0);
        out.push((x + p - y) % p);
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let mut out: Poly = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo `m` (m nonzero).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    let p64 = p as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let factor = r[top] as u64 * lead_inv % p64;
        if factor != 0 {
            let shift = top - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = factor * c as u64 % p64;
                r[shift + i] = ((r[shift + i] as u64 + p64 - sub) % p64) as u32;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Poly {
    let mut x: Poly = a.to_vec();
    let mut y: Poly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod(lead, p) as u64;
        for c in x.iter_mut() {
            *c = (*c as u64 * inv % p as u64) as u32;
        }
    }
    x
}

/// `base^e mod m`.
pub(crate) fn pow_rem(base: &[u32], mut e: u128, m: &[u32], p: u32) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc = rem(&acc, m, p);
    acc
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Rabin's irreducibility test for a monic `f` over GF(p).
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() as u32 - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    // frob[i] = x^(p^i) mod f
    let mut frob = vec![rem(&x, f, p)];
    for i in 1..=n as usize {
        let next = pow_rem(&frob[i - 1], p as u128, f, p);
        frob.push(next);
    }
    if sub(&frob[n as usize], &x, p) != Vec::<u32>::new() {
        return false;
    }
    for r in prime_divisors(n) {
        let k = (n / r) as usize;
        let g = gcd(f, &sub(&frob[k], &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
