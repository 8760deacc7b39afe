//! Integer arithmetic: primes, the totient, real and complex Dirichlet
//! characters, prime counting in arithmetic progressions and the
//! logarithmic integral.

use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Largest sieve limit accepted by [`sieve_primes`].
pub const SIEVE_CEILING: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithError {
    #[error("sieve limit {0} exceeds the ceiling of {SIEVE_CEILING}")]
    SieveTooLarge(u64),
    #[error("totient of zero is undefined")]
    ZeroModulus,
    #[error("modulus {0} admits no real primitive character")]
    NoRealPrimitiveCharacter(u64),
    #[error("modulus {modulus} has no primitive root or index {index} is out of range")]
    NoComplexCharacter { modulus: u64, index: u64 },
    #[error("residue {a} is not coprime to modulus {d}")]
    NotCoprime { a: u64, d: u64 },
    #[error("residue {a} is outside 1..{d}")]
    ResidueOutOfRange { a: u64, d: u64 },
    #[error("logarithmic integral requires x > 1, got {0}")]
    LogIntegralDomain(f64),
}

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Number of listed primes `p <= x`.
    pub fn count_le(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    /// Number of listed primes `p <= x` with `p ≡ a (mod d)`. No coprimality
    /// check; see [`prime_count_progression`] for the validated entry point.
    pub fn count_in_residue(&self, a: u64, d: u64, x: u64) -> usize {
        self.primes[..self.count_le(x)]
            .iter()
            .filter(|&&p| p % d == a % d)
            .count()
    }
}

/// Sieve of Eratosthenes. `limit < 2` yields an empty table.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable, ArithError> {
    if limit > SIEVE_CEILING {
        return Err(ArithError::SieveTooLarge(limit));
    }
    if limit < 2 {
        return Ok(PrimeTable {
            limit,
            primes: Vec::new(),
        });
    }
    let n = limit as usize;
    // odd-only sieve: index i represents 2i + 1
    let half = n / 2 + 1;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_prime_count(limit));
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|&(i, &c)| !c && 2 * i < n)
            .map(|(i, _)| (2 * i + 1) as u64),
    );
    Ok(PrimeTable { limit, primes })
}

fn estimate_prime_count(limit: u64) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (1.26 * x / x.ln()) as usize
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient, with φ(1) = 1.
pub fn totient(d: u64) -> Result<u64, ArithError> {
    if d == 0 {
        return Err(ArithError::ZeroModulus);
    }
    Ok(factorize(d)
        .into_iter()
        .fold(d, |acc, (p, _)| acc / p * (p - 1)))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).first() == Some(&(n, 1))
}

#[derive(Debug, Clone, PartialEq)]
enum CharValues {
    /// Exact table over {-1, 0, 1}.
    Real(Vec<i8>),
    Complex(Vec<Complex64>),
}

/// A Dirichlet character, stored as its value table over `0..modulus`.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    modulus: u64,
    values: CharValues,
    is_primitive: bool,
    is_real: bool,
    is_even: bool,
}

impl Character {
    /// The trivial character mod 1, for which `L(s, 1) = ζ(s)`.
    pub fn principal_one() -> Self {
        Character {
            modulus: 1,
            values: CharValues::Real(vec![1]),
            is_primitive: true,
            is_real: true,
            is_even: true,
        }
    }

    /// Builds a real character from an exact table, deriving the flags.
    /// Returns `None` if the table is not a character.
    pub fn from_real_table(table: Vec<i8>) -> Option<Self> {
        let d = table.len() as u64;
        if d == 0 || table.iter().any(|v| !(-1..=1).contains(v)) {
            return None;
        }
        let ch = Character {
            modulus: d,
            is_even: d == 1 || table[(d - 1) as usize] == 1,
            is_primitive: false,
            is_real: true,
            values: CharValues::Real(table),
        };
        if !ch.satisfies_character_axioms() {
            return None;
        }
        let is_primitive = ch.check_primitive();
        Some(Character { is_primitive, ..ch })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_primitive(&self) -> bool {
        self.is_primitive
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn is_even(&self) -> bool {
        self.is_even
    }

    /// True for the trivial character mod 1.
    pub fn is_principal_one(&self) -> bool {
        self.modulus == 1
    }

    /// χ(n) for any integer n (reduced mod d).
    pub fn value(&self, n: i64) -> Complex64 {
        let idx = n.rem_euclid(self.modulus as i64) as usize;
        match &self.values {
            CharValues::Real(t) => Complex64::new(t[idx] as f64, 0.0),
            CharValues::Complex(t) => t[idx],
        }
    }

    /// Exact value for real characters.
    pub fn real_value(&self, n: i64) -> Option<i8> {
        match &self.values {
            CharValues::Real(t) => Some(t[n.rem_euclid(self.modulus as i64) as usize]),
            CharValues::Complex(_) => None,
        }
    }

    /// Value table over `0..modulus`.
    pub fn table(&self) -> Vec<Complex64> {
        (0..self.modulus as i64).map(|n| self.value(n)).collect()
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    /// Zero pattern, unit magnitude and complete multiplicativity over the
    /// full residue table.
    pub fn satisfies_character_axioms(&self) -> bool {
        let d = self.modulus;
        if !Self::close(self.value(1), Complex64::new(1.0, 0.0)) {
            return false;
        }
        for n in 0..d {
            let v = self.value(n as i64);
            let coprime = gcd(n, d) == 1;
            if coprime != ((v.norm() - 1.0).abs() < 1e-12) || (!coprime && v.norm() > 1e-12) {
                return false;
            }
        }
        for m in 0..d {
            for n in m..d {
                let lhs = self.value(((m * n) % d) as i64);
                let rhs = self.value(m as i64) * self.value(n as i64);
                if !Self::close(lhs, rhs) {
                    return false;
                }
            }
        }
        true
    }

    /// Checks that no proper divisor e of d is a period of χ on the units.
    fn check_primitive(&self) -> bool {
        let d = self.modulus;
        if d == 1 {
            return true;
        }
        (1..d).filter(|e| d.is_multiple_of(*e)).all(|e| {
            // χ is induced from modulus e iff χ(n) = 1 for every unit n ≡ 1 (mod e)
            (0..d / e).any(|j| {
                let n = 1 + j * e;
                gcd(n, d) == 1 && !Self::close(self.value(n as i64), Complex64::new(1.0, 0.0))
            })
        })
    }
}

/// Kronecker symbol (D/n) for n ≥ 1.
pub fn kronecker(disc: i64, n: u64) -> i8 {
    let mut n = n;
    let mut result: i8 = 1;
    let a = disc;
    while n.is_multiple_of(2) {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    if n == 1 {
        return result;
    }
    // Jacobi symbol (a/n) for odd n
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        (a, n) = (n, a);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Fundamental discriminants D with |D| = d, even character first.
fn fundamental_discriminants(d: u64) -> Vec<i64> {
    let d_i = d as i64;
    let mut out = Vec::new();
    if d % 2 == 1 {
        if d > 1 && is_squarefree(d) {
            out.push(if d % 4 == 1 { d_i } else { -d_i });
        }
    } else if d.is_multiple_of(8) {
        let m = d / 8;
        if m % 2 == 1 && is_squarefree(m) {
            out.push(d_i);
            out.push(-d_i);
        }
    } else if d.is_multiple_of(4) {
        let m = d / 4;
        if m % 2 == 1 && is_squarefree(m) {
            // D = 4m' with m' ≡ 3 (mod 4)
            out.push(if m % 4 == 3 { d_i } else { -d_i });
        }
    }
    out
}

/// All real primitive characters of modulus `d` (one or two; the even one
/// first when both exist).
pub fn real_primitive_characters(d: u64) -> Result<Vec<Character>, ArithError> {
    if d == 0 {
        return Err(ArithError::ZeroModulus);
    }
    if d == 1 {
        return Ok(vec![Character::principal_one()]);
    }
    let discs = fundamental_discriminants(d);
    if discs.is_empty() {
        return Err(ArithError::NoRealPrimitiveCharacter(d));
    }
    discs
        .into_iter()
        .map(|disc| {
            let table: Vec<i8> = (0..d).map(|n| if n == 0 { 0 } else { kronecker(disc, n) }).collect();
            match Character::from_real_table(table) {
                Some(ch) if ch.is_primitive() => Ok(ch),
                _ => Err(ArithError::NoRealPrimitiveCharacter(d)),
            }
        })
        .collect()
}

/// The real primitive character of modulus `d`. For `d ≡ 0 (mod 8)`, where
/// there are two, the even one is returned.
pub fn real_primitive_character(d: u64) -> Result<Character, ArithError> {
    real_primitive_characters(d).map(|mut v| v.swap_remove(0))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Smallest primitive root of an odd prime.
pub fn primitive_root(p: u64) -> Option<u64> {
    if !is_prime(p) || p == 2 {
        return None;
    }
    let factors = factorize(p - 1);
    (2..p).find(|&g| factors.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1))
}

/// Character mod an odd prime `p` sending the smallest primitive root to
/// `exp(2πi·index/(p−1))`. Index 0 is the principal character mod p.
pub fn prime_character(p: u64, index: u64) -> Result<Character, ArithError> {
    let g = primitive_root(p).ok_or(ArithError::NoComplexCharacter { modulus: p, index })?;
    if index >= p - 1 {
        return Err(ArithError::NoComplexCharacter { modulus: p, index });
    }
    let order = p - 1;
    let mut values = vec![Complex64::new(0.0, 0.0); p as usize];
    let mut x = 1u64;
    for m in 0..order {
        // reduce the exponent exactly before converting to an angle
        let k = (index * m) % order;
        values[x as usize] = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / order as f64);
        x = x * g % p;
    }
    let is_real = (2 * index).is_multiple_of(order);
    let values = if is_real {
        CharValues::Real(values.iter().map(|v| v.re.round() as i8).collect())
    } else {
        CharValues::Complex(values)
    };
    let ch = Character {
        modulus: p,
        values,
        is_primitive: index != 0,
        is_real,
        is_even: false,
    };
    let is_even = (ch.value(-1) - Complex64::new(1.0, 0.0)).norm() < 1e-12;
    Ok(Character { is_even, ..ch })
}

/// π_{a,d}(x): primes `p <= x` with `p ≡ a (mod d)`.
pub fn prime_count_progression(a: u64, d: u64, x: f64) -> Result<u64, ArithError> {
    if a < 1 || a >= d {
        return Err(ArithError::ResidueOutOfRange { a, d });
    }
    if gcd(a, d) != 1 {
        return Err(ArithError::NotCoprime { a, d });
    }
    let bound = if x.is_finite() && x > 0.0 { x.floor() as u64 } else { 0 };
    let table = sieve_primes(bound)?;
    Ok(table.count_in_residue(a, d, bound) as u64)
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Principal-value logarithmic integral ∫₀ˣ dt / log t, via Ramanujan's
/// rapidly convergent series.
pub fn log_integral(x: f64) -> Result<f64, ArithError> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(ArithError::LogIntegralDomain(x));
    }
    let u = x.ln();
    let mut sum = 0.0;
    let mut term = 1.0; // u^n / (n! 2^(n-1)) with alternating sign folded in below
    let mut inner = 0.0;
    for n in 1..400u32 {
        term *= u / n as f64;
        if n > 1 {
            term /= 2.0;
        }
        if (n - 1) % 2 == 0 {
            inner += 1.0 / n as f64;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let contrib = sign * term * inner;
        sum += contrib;
        if contrib.abs() < 1e-17 * sum.abs() && n as f64 > u {
            break;
        }
    }
    Ok(EULER_GAMMA + u.ln() + x.sqrt() * sum)
}
