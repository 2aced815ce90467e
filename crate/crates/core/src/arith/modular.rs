//! Prime-field arithmetic: primality, prime selection, streaming elimination
//! and Chinese remaindering back to exact integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Arithmetic modulo an odd prime below 2^63.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Modulus {
    p: u64,
}

impl Modulus {
    pub fn new(p: u64) -> Self {
        debug_assert!(p > 2 && p < (1 << 63));
        Modulus { p }
    }

    #[inline]
    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p < (1 << 32) {
            (a * b) % self.p
        } else {
            ((a as u128 * b as u128) % self.p as u128) as u64
        }
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        let r = v.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits")
    }
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below 2^31, in decreasing order.
///
/// Used for exact multi-modular computation where the result is recovered
/// by Chinese remaindering under an a-priori magnitude bound.
pub fn crt_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 31) - 1;
    while out.len() < count {
        if is_prime(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Number of primes from [`crt_primes`] whose product exceeds `2 * bound`.
pub fn primes_needed(bound: &BigInt) -> usize {
    let target = bound.abs() * 2u32 + 1u32;
    let mut product = BigInt::one();
    let mut k = 0;
    for p in crt_primes(1 + target.bits() as usize / 30) {
        if product > target {
            break;
        }
        product *= p;
        k += 1;
    }
    k.max(1)
}

/// A uniformly random prime in `[2^(bits-1), 2^bits)`.
pub fn random_prime<R: Rng + ?Sized>(bits: u32, rng: &mut R) -> u64 {
    assert!((31..=62).contains(&bits), "prime bits must lie in 31..=62");
    let lo = 1u64 << (bits - 1);
    let hi = 1u64 << bits;
    loop {
        let c = rng.gen_range(lo..hi) | 1;
        if is_prime(c) {
            return c;
        }
    }
}

/// Upper bound on the probability that `trials` independent random primes
/// of `bits` bits all divide a fixed nonzero integer of at most `minor_bits` bits.
pub fn failure_probability_bound(minor_bits: u64, bits: u32, trials: u32) -> f64 {
    // At most minor_bits / (bits - 1) primes of this size divide the minor;
    // the window holds at least 2^(bits-1) / (bits * ln 2) primes.
    let bad = (minor_bits as f64 / (bits - 1) as f64).ceil().max(1.0);
    let window = 2f64.powi(bits as i32 - 1) / (bits as f64 * std::f64::consts::LN_2);
    (bad / window).min(1.0).powi(trials as i32)
}

/// Row-echelon basis over a prime field, filled one vector at a time.
#[derive(Debug, Clone)]
pub struct ModEchelon {
    modulus: Modulus,
    width: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    pub fn new(modulus: Modulus, width: usize) -> Self {
        ModEchelon {
            modulus,
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Reduces `v` in place against the stored rows.
    pub fn reduce(&self, v: &mut [u64]) {
        let m = self.modulus;
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row).skip(*pivot) {
                    if *r != 0 {
                        *x = m.sub(*x, m.mul(c, *r));
                    }
                }
            }
        }
    }

    /// Inserts `v`; returns true when it was independent of the current rows.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        self.reduce(&mut v);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.modulus.inv(v[pivot]);
        for x in v.iter_mut().skip(pivot) {
            *x = self.modulus.mul(*x, inv);
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Rank of a dense matrix of residues.
pub fn rank_mod(modulus: Modulus, rows: &[Vec<u64>]) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut ech = ModEchelon::new(modulus, width);
    for r in rows {
        ech.insert(r.clone());
        if ech.is_full() {
            break;
        }
    }
    ech.rank()
}

/// Recovers the integer in the symmetric range modulo the product of `primes`.
pub fn crt_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    debug_assert_eq!(residues.len(), primes.len());
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let md = Modulus::new(p);
        let x_mod = md.from_bigint(&x);
        let m_mod = md.from_bigint(&m);
        let t = md.mul(md.sub(r % p, x_mod), md.inv(m_mod));
        x += &m * t;
        m *= p;
    }
    let half = &m >> 1;
    if x > half {
        x - m
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality_small() {
        let by_trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..2000 {
            assert_eq!(is_prime(n), by_trial(n), "n = {n}");
        }
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
    }

    #[test]
    fn random_primes_in_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_prime(31, &mut rng);
            assert!(p > 1 << 30 && p < 1 << 31 && is_prime(p));
        }
    }

    #[test]
    fn crt_roundtrip() {
        let primes = crt_primes(3);
        for v in [0i64, 1, -1, 123_456_789_012_345, -987_654_321_987] {
            let b = BigInt::from(v);
            let res: Vec<u64> = primes.iter().map(|&p| Modulus::new(p).from_bigint(&b)).collect();
            assert_eq!(crt_symmetric(&res, &primes), b);
        }
    }

    #[test]
    fn echelon_rank() {
        let m = Modulus::new(1_000_000_007);
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod(m, &rows), 2);
    }
}
