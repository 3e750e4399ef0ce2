//! Polynomials over a prime field F_p (small p), with factorisation into
//! irreducibles by Berlekamp's algorithm.

pub type FpPoly = Vec<u64>;

fn trim(v: &mut FpPoly) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Reduce integer coefficients into F_p.
pub fn reduce(c: &[num_bigint::BigInt], p: u64) -> FpPoly {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let pb = num_bigint::BigInt::from(p);
    let mut v: FpPoly = c.iter().map(|x| x.mod_floor(&pb).to_u64().expect("reduced residue")).collect();
    trim(&mut v);
    v
}

pub fn add(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut v: FpPoly =
        (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect();
    trim(&mut v);
    v
}

pub fn sub(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut v: FpPoly =
        (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect();
    trim(&mut v);
    v
}

pub fn mul(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut c);
    c
}

pub fn divrem(a: &FpPoly, d: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
    assert!(!d.is_empty(), "division by zero polynomial");
    let dd = d.len() - 1;
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let li = inv_mod(d[dd], p);
    let mut q = vec![0u64; r.len() - dd];
    for k in (dd..r.len()).rev() {
        if r[k] == 0 {
            continue;
        }
        let c = mulmod(r[k], li, p);
        q[k - dd] = c;
        for (j, &dj) in d.iter().enumerate() {
            r[k - dd + j] = (r[k - dd + j] + p - mulmod(c, dj, p)) % p;
        }
    }
    trim(&mut q);
    trim(&mut r);
    (q, r)
}

pub fn monic(a: &FpPoly, p: u64) -> FpPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let li = inv_mod(l, p);
            a.iter().map(|&x| mulmod(x, li, p)).collect()
        }
    }
}

pub fn gcd(a: &FpPoly, b: &FpPoly, p: u64) -> FpPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn derivative(a: &FpPoly, p: u64) -> FpPoly {
    let mut v: FpPoly = a.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % p, p)).collect();
    trim(&mut v);
    v
}

pub fn powmod(base: &FpPoly, mut e: u64, m: &FpPoly, p: u64) -> FpPoly {
    let mut r: FpPoly = vec![1];
    let mut b = divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            r = divrem(&mul(&r, &b, p), m, p).1;
        }
        b = divrem(&mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    r
}

/// Splits a squarefree monic polynomial into monic irreducible factors.
fn berlekamp(f: &FpPoly, p: u64) -> Vec<FpPoly> {
    let d = f.len() - 1;
    if d <= 1 {
        return vec![f.clone()];
    }
    // rows of Q - I: x^{ip} mod f minus x^i
    let xp = powmod(&vec![0, 1], p, f, p);
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d);
    let mut cur: FpPoly = vec![1];
    for i in 0..d {
        let mut row = vec![0u64; d];
        for (j, &c) in cur.iter().enumerate() {
            row[j] = c;
        }
        row[i] = (row[i] + p - 1) % p;
        rows.push(row);
        cur = divrem(&mul(&cur, &xp, p), f, p).1;
    }
    // left kernel: vectors v with v·(Q - I) = 0, via column echelon of the transpose
    let kernel = left_kernel(&rows, d, p);
    if kernel.len() == 1 {
        return vec![f.clone()];
    }
    let mut factors = vec![f.clone()];
    for v in kernel.iter() {
        let mut g = v.clone();
        trim(&mut g);
        if g.len() <= 1 {
            continue;
        }
        for s in 0..p {
            let gs = sub(&g, &vec![s], p);
            let mut next = Vec::new();
            for h in factors.drain(..) {
                if h.len() <= 2 {
                    next.push(h);
                    continue;
                }
                let c = gcd(&h, &gs, p);
                if c.len() > 1 && c.len() < h.len() {
                    let q = divrem(&h, &c, p).0;
                    next.push(c);
                    next.push(monic(&q, p));
                } else {
                    next.push(h);
                }
            }
            factors = next;
            if factors.len() == kernel.len() {
                break;
            }
        }
        if factors.len() == kernel.len() {
            break;
        }
    }
    factors
}

fn left_kernel(rows: &[Vec<u64>], d: usize, p: u64) -> Vec<FpPoly> {
    // solve v·A = 0 i.e. Aᵀ vᵀ = 0
    let mut a: Vec<Vec<u64>> = (0..d).map(|j| (0..d).map(|i| rows[i][j]).collect()).collect();
    let mut pivcol = vec![usize::MAX; d];
    let mut r = 0;
    for c in 0..d {
        let Some(pr) = (r..d).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for i in 0..d {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..d {
                    a[i][j] = (a[i][j] + p - mulmod(f, a[r][j], p)) % p;
                }
            }
        }
        pivcol[r] = c;
        r += 1;
    }
    let pivots: Vec<usize> = pivcol[..r].to_vec();
    let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &fc in &free {
        let mut v = vec![0u64; d];
        v[fc] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[i][fc]) % p;
        }
        out.push(v);
    }
    out
}

/// Factorisation into monic irreducibles with multiplicities, sorted by
/// (degree, coefficients).
pub fn factor(f: &FpPoly, p: u64) -> Vec<(FpPoly, u32)> {
    let mut f = f.clone();
    trim(&mut f);
    assert!(!f.is_empty(), "factoring the zero polynomial");
    let f = monic(&f, p);
    let mut irr: Vec<FpPoly> = Vec::new();
    irreducibles(&f, p, &mut irr);
    irr.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    irr.dedup();
    irr.into_iter()
        .map(|h| {
            let mut e = 0;
            let mut g = f.clone();
            loop {
                let (q, r) = divrem(&g, &h, p);
                if !r.is_empty() {
                    break;
                }
                e += 1;
                g = q;
            }
            (h, e)
        })
        .collect()
}

fn irreducibles(f: &FpPoly, p: u64, out: &mut Vec<FpPoly>) {
    if f.len() <= 1 {
        return;
    }
    let df = derivative(f, p);
    if df.is_empty() {
        // f(x) = g(x^p) = g(x)^p
        let g: FpPoly = f.iter().step_by(p as usize).copied().collect();
        irreducibles(&g, p, out);
        return;
    }
    let c = gcd(f, &df, p);
    let sqf = monic(&divrem(f, &c, p).0, p);
    out.extend(berlekamp(&sqf, p));
    irreducibles(&c, p, out);
}
