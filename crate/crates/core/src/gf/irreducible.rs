//! Irreducible moduli for extension fields and the irreducibility test used
//! to validate user-supplied ones.
//!
//! Polynomials over F_p are coefficient vectors in ascending degree order.

/// Built-in moduli: the smallest primitive monic polynomial (lower
/// coefficients read as a base-p integer, `c_{k-1}` most significant) for
/// every `p^k <= 4096` with `k >= 2`. Coefficients ascend, leading 1 included.
pub static BUILTIN_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (3, 2, &[2, 1, 1]),
    (5, 2, &[2, 1, 1]),
    (7, 2, &[3, 1, 1]),
    (11, 2, &[2, 4, 1]),
    (13, 2, &[2, 1, 1]),
    (17, 2, &[3, 1, 1]),
    (19, 2, &[2, 1, 1]),
    (23, 2, &[5, 2, 1]),
    (29, 2, &[2, 5, 1]),
    (31, 2, &[3, 2, 1]),
    (37, 2, &[2, 4, 1]),
    (41, 2, &[6, 3, 1]),
    (43, 2, &[3, 1, 1]),
    (47, 2, &[5, 2, 1]),
    (53, 2, &[2, 4, 1]),
    (59, 2, &[2, 1, 1]),
    (61, 2, &[2, 1, 1]),
    (2, 3, &[1, 0, 1, 1]),
    (3, 3, &[1, 0, 2, 1]),
    (5, 3, &[2, 0, 1, 1]),
    (7, 3, &[2, 1, 1, 1]),
    (11, 3, &[3, 0, 1, 1]),
    (13, 3, &[2, 0, 1, 1]),
    (2, 4, &[1, 0, 0, 1, 1]),
    (3, 4, &[2, 0, 0, 1, 1]),
    (5, 4, &[2, 0, 2, 1, 1]),
    (7, 4, &[3, 0, 1, 1, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 12, &[1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 1, 0, 0, 0, 0, 1]),
    (3, 7, &[1, 2, 1, 0, 0, 0, 0, 1]),
    (5, 5, &[2, 4, 0, 0, 0, 1]),
];

pub fn builtin_modulus(p: u32, k: u32) -> Option<Vec<u32>> {
    BUILTIN_MODULI
        .iter()
        .find(|(bp, bk, _)| *bp == p && *bk == k)
        .map(|(_, _, m)| m.to_vec())
}

fn trim(f: &mut Vec<u32>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(base: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo `m` over F_p. `m` must be nonzero.
fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] as u64 * lead_inv % p as u64;
        let shift = top - dm;
        for (i, &mi) in m.iter().enumerate() {
            let sub = c * mi as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
    rem(&prod, m, p)
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn has_root(f: &[u32], p: u32) -> bool {
    (0..p).any(|c| {
        let mut acc = 0u64;
        for &coef in f.iter().rev() {
            acc = (acc * c as u64 + coef as u64) % p as u64;
        }
        acc == 0
    })
}

/// Decides irreducibility of `f` over F_p.
///
/// Degrees up to 4 use the exhaustive root / quadratic-factor check; higher
/// degrees use Ben-Or's test `gcd(x^(p^i) - x, f) = 1` for `i <= deg/2`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let mut f = f.iter().map(|c| c % p).collect::<Vec<_>>();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let k = f.len() - 1;
    if k == 1 {
        return true;
    }
    if has_root(&f, p) {
        return false;
    }
    match k {
        2 | 3 => true,
        4 => {
            for c0 in 0..p {
                for c1 in 0..p {
                    if rem(&f, &[c0, c1, 1], p).is_empty() {
                        return false;
                    }
                }
            }
            true
        }
        _ => ben_or(&f, p),
    }
}

fn ben_or(f: &[u32], p: u32) -> bool {
    let k = f.len() - 1;
    let x = rem(&[0, 1], f, p);
    let mut frob = x.clone();
    for _ in 0..k / 2 {
        // frob <- frob^p mod f
        let mut acc = vec![1u32];
        let mut base = frob.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, f, p);
            }
            base = mul_mod(&base, &base, f, p);
            e >>= 1;
        }
        frob = acc;
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = gcd(f, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}
