//! Arithmetic mod a prime: field ops, determinants, Pfaffians, and
//! polynomial interpolation. Everything the randomized decider needs to
//! extract one coefficient of a matching-generating polynomial.

use rand::Rng;

/// 2^61 − 1, the default modulus. Mersenne structure gives a fast reduce.
pub const MERSENNE61: u64 = (1u64 << 61) - 1;

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| -> u64 { ((a as u128 * b as u128) % n as u128) as u64 };
    let powmod = |mut base: u64, mut exp: u64| -> u64 {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The field Z/p for an odd prime p. Elements are canonical u64 in [0, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Odd primes only: the Pfaffian code divides by 2-element pivots and
    /// characteristic 2 would break sign bookkeeping.
    pub fn new(p: u64) -> Result<Self, String> {
        if p == 2 {
            return Err("modulus 2 unsupported, pick an odd prime".to_string());
        }
        if !is_prime_u64(p) {
            return Err(format!("{p} is not prime"));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    pub fn reduce(self, x: u64) -> u64 {
        x % self.p
    }

    pub fn from_i64(self, x: i64) -> u64 {
        let r = x.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b; // a, b < p < 2^63, no overflow
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        if self.p == MERSENNE61 {
            let x = a as u128 * b as u128;
            let mut s = ((x & MERSENNE61 as u128) as u64).wrapping_add((x >> 61) as u64);
            s = (s & MERSENNE61) + (s >> 61);
            if s >= MERSENNE61 {
                s -= MERSENNE61;
            }
            s
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base = self.reduce(base);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "zero has no inverse");
        self.pow(a, self.p - 2)
    }

    pub fn sample(self, rng: &mut impl Rng) -> u64 {
        rng.random_range(0..self.p)
    }
}

/// Determinant by Gaussian elimination with partial pivoting; O(n³).
pub fn det_mod(mut m: Vec<Vec<u64>>, f: PrimeField) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = f.neg(det);
        }
        let pivot = m[col][col];
        det = f.mul(det, pivot);
        let pinv = f.inv(pivot);
        for row in (col + 1)..n {
            let factor = f.mul(m[row][col], pinv);
            if factor == 0 {
                continue;
            }
            for c in col..n {
                let delta = f.mul(factor, m[col][c]);
                m[row][c] = f.sub(m[row][c], delta);
            }
        }
    }
    det
}

/// Pfaffian of a skew-symmetric matrix by repeated Schur complements.
///
/// With the top-left 2×2 pivot block B = [[0, p], [−p, 0]] and the matrix
/// written [[B, C], [−Cᵀ, D]], Pf = p · Pf(D + Cᵀ B⁻¹ C), where the update
/// works out to D[i][l] + (v[i]·u[l] − u[i]·v[l]) / p for u, v the two
/// pivot rows. Row swaps are congruences by a transposition, flipping the
/// sign. O(n³).
pub fn pfaffian_mod(mut a: Vec<Vec<u64>>, f: PrimeField) -> u64 {
    let n = a.len();
    if n % 2 == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut k = 0;
    while k < n {
        let Some(j) = ((k + 1)..n).find(|&j| a[k][j] != 0) else {
            return 0;
        };
        if j != k + 1 {
            a.swap(j, k + 1);
            for row in a.iter_mut() {
                row.swap(j, k + 1);
            }
            result = f.neg(result);
        }
        let pivot = a[k][k + 1];
        result = f.mul(result, pivot);
        let pinv = f.inv(pivot);
        for i in (k + 2)..n {
            let ui = a[k][i];
            let vi = a[k + 1][i];
            if ui == 0 && vi == 0 {
                continue;
            }
            for l in (k + 2)..n {
                let ul = a[k][l];
                let vl = a[k + 1][l];
                let delta = f.mul(f.sub(f.mul(vi, ul), f.mul(ui, vl)), pinv);
                a[i][l] = f.add(a[i][l], delta);
            }
        }
        k += 2;
    }
    result
}

/// Monomial coefficients of the unique polynomial of degree < points.len()
/// through (points[i], values[i]), by Newton's divided differences; O(D²).
pub fn interpolate(points: &[u64], values: &[u64], f: PrimeField) -> Vec<u64> {
    let d = points.len();
    assert_eq!(d, values.len());
    if d == 0 {
        return Vec::new();
    }
    // Divided-difference table, collapsed in place: table[i] ends up as
    // the coefficient of the i-th Newton basis polynomial.
    let mut table: Vec<u64> = values.to_vec();
    for level in 1..d {
        for i in (level..d).rev() {
            let num = f.sub(table[i], table[i - 1]);
            let den = f.sub(points[i], points[i - level]);
            debug_assert_ne!(den, 0, "interpolation points must be distinct mod p");
            table[i] = f.mul(num, f.inv(den));
        }
    }
    // Expand Newton form into monomial coefficients.
    let mut coeffs = vec![0u64; d];
    let mut basis = vec![0u64; d + 1];
    basis[0] = 1;
    let mut basis_len = 1;
    for i in 0..d {
        for (c, b) in coeffs.iter_mut().zip(&basis[..basis_len]) {
            *c = f.add(*c, f.mul(table[i], *b));
        }
        // basis *= (x − points[i])
        let neg_x = f.neg(points[i]);
        for idx in (0..basis_len).rev() {
            let keep = basis[idx];
            basis[idx + 1] = f.add(basis[idx + 1], keep);
            basis[idx] = f.mul(keep, neg_x);
        }
        basis_len += 1;
    }
    coeffs
}
