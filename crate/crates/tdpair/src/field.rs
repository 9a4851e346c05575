//! Exact scalar arithmetic over the rationals and over prime fields.
//!
//! Everything downstream is generic over [`Field`]. There is no tolerance
//! parameter anywhere: every comparison in this crate is field-exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An exact field element.
///
/// Implemented by [`Rat`] (arbitrary-precision rationals) and [`Fp`] (prime
/// field with runtime modulus). Elements are immutable values; all operations
/// are pure and exact.
pub trait Field:
    Sized
    + Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
    + Send
    + Sync
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Field characteristic; `0` for the rationals.
    fn characteristic(&self) -> u64;

    /// The integer `n` mapped into the same field as `self`.
    fn from_int(&self, n: i64) -> Self;

    /// As [`Field::from_int`] for arbitrary-precision integers.
    fn from_bigint(&self, n: &BigInt) -> Self;

    /// All roots of the polynomial (coefficients lowest-degree first, not all
    /// zero) that lie in the field, with multiplicities.
    fn roots(coeffs: &[Self]) -> Vec<(Self, usize)>;
}

/// Horner evaluation of a coefficient slice (lowest degree first).
pub(crate) fn eval_slice<F: Field>(coeffs: &[F], x: &F) -> F {
    let mut acc = F::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

/// Exact division of a coefficient slice by `x - root`; the remainder must be
/// zero.
pub(crate) fn deflate_slice<F: Field>(coeffs: &[F], root: &F) -> Vec<F> {
    let n = coeffs.len();
    assert!(n >= 2, "cannot deflate a constant polynomial");
    let mut quot = vec![F::zero(); n - 1];
    let mut carry = coeffs[n - 1].clone();
    for k in (1..n).rev() {
        quot[k - 1] = carry.clone();
        carry = coeffs[k - 1].clone() + root.clone() * carry;
    }
    assert!(carry.is_zero(), "deflation by a non-root");
    quot
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// Arbitrary-precision rational, kept in lowest terms with positive
/// denominator (enforced by the underlying representation).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn integer(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(Rat(BigRational::new(num, den)))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Parse `"a"` or `"a/b"` with `b != 0`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let mut parts = s.splitn(2, '/');
        let num_s = parts.next().unwrap_or("");
        let num: BigInt = num_s
            .trim()
            .parse()
            .map_err(|_| format!("invalid numerator in {s:?}"))?;
        match parts.next() {
            None => Ok(Rat(BigRational::from_integer(num))),
            Some(den_s) => {
                let den: BigInt = den_s
                    .trim()
                    .parse()
                    .map_err(|_| format!("invalid denominator in {s:?}"))?;
                Rat::from_ratio(num, den).ok_or_else(|| format!("zero denominator in {s:?}"))
            }
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.0.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Zero for Rat {
    fn zero() -> Self {
        Rat(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rat {
    fn one() -> Self {
        Rat(BigRational::one())
    }
}

impl Field for Rat {
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rat(self.0.recip()))
        }
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn from_int(&self, n: i64) -> Self {
        Rat::integer(n)
    }

    fn from_bigint(&self, n: &BigInt) -> Self {
        Rat(BigRational::from_integer(n.clone()))
    }

    fn roots(coeffs: &[Self]) -> Vec<(Self, usize)> {
        rational_roots(coeffs)
    }
}

/// Trial-division factorization of a positive integer.
fn factorize(mut n: BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive());
    let mut out = Vec::new();
    let mut push = |p: &BigInt, e: u32| {
        if e > 0 {
            out.push((p.clone(), e));
        }
    };
    let two = BigInt::from(2);
    let mut e = 0;
    while n.is_even() {
        n /= &two;
        e += 1;
    }
    push(&two, e);
    let mut d = BigInt::from(3);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        push(&d, e);
        d += 2;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n != 0`.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_one() {
        return vec![BigInt::one()];
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs
}

/// Rational roots of a rational polynomial, found via the rational root
/// theorem on the primitive integer form, with multiplicities by deflation.
fn rational_roots(coeffs: &[Rat]) -> Vec<(Rat, usize)> {
    let mut work: Vec<Rat> = coeffs.to_vec();
    while work.last().map_or(false, |c| c.is_zero()) {
        work.pop();
    }
    assert!(!work.is_empty(), "roots of the zero polynomial");
    let mut found: Vec<(Rat, usize)> = Vec::new();

    // roots at zero
    let mut zero_mult = 0;
    while work.len() > 1 && work[0].is_zero() {
        work.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        found.push((Rat::zero(), zero_mult));
    }
    if work.len() < 2 {
        return found;
    }

    // clear denominators to a primitive integer polynomial
    let mut lcm = BigInt::one();
    for c in &work {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = work
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let lead = ints.last().unwrap().clone();
    let cons = ints[0].clone();
    debug_assert!(!cons.is_zero() && !lead.is_zero());

    let mut candidates: Vec<Rat> = Vec::new();
    for p in divisors(&cons) {
        for q in divisors(&lead) {
            if p.gcd(&q).is_one() {
                candidates.push(Rat(BigRational::new(p.clone(), q.clone())));
                candidates.push(Rat(BigRational::new(-p.clone(), q)));
            }
        }
    }

    for cand in candidates {
        if work.len() < 2 {
            break;
        }
        let mut mult = 0;
        while work.len() >= 2 && eval_slice(&work, &cand).is_zero() {
            work = deflate_slice(&work, &cand);
            mult += 1;
        }
        if mult > 0 {
            found.push((cand, mult));
        }
    }
    found
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// Prime-field element with a runtime modulus.
///
/// `Int` values are modulus-free integers produced by `zero()`/`one()` and
/// friends; they adopt a modulus the first time they meet a `Mod` value, so
/// generic code can build identity matrices and monic polynomials without
/// threading a modulus around. Mixing two distinct moduli is a caller bug and
/// panics.
#[derive(Clone, Copy, Debug)]
pub enum Fp {
    Int(i64),
    Mod { v: u64, p: u64 },
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 62), "modulus out of range");
        Fp::Mod {
            v: value.rem_euclid(p as i64) as u64,
            p,
        }
    }

    pub fn from_u64(value: u64, p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 62), "modulus out of range");
        Fp::Mod { v: value % p, p }
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Fp::Int(_) => None,
            Fp::Mod { p, .. } => Some(*p),
        }
    }

    fn ctx(a: &Fp, b: &Fp) -> Option<u64> {
        match (a, b) {
            (Fp::Mod { p: pa, .. }, Fp::Mod { p: pb, .. }) => {
                assert_eq!(pa, pb, "mixed prime-field moduli");
                Some(*pa)
            }
            (Fp::Mod { p, .. }, _) | (_, Fp::Mod { p, .. }) => Some(*p),
            _ => None,
        }
    }

    fn lift(&self, p: u64) -> u64 {
        match self {
            Fp::Int(n) => n.rem_euclid(p as i64) as u64,
            Fp::Mod { v, p: q } => {
                debug_assert_eq!(*q, p);
                *v
            }
        }
    }

    fn int_value(&self) -> i64 {
        match self {
            Fp::Int(n) => *n,
            Fp::Mod { .. } => unreachable!(),
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        match Fp::ctx(self, other) {
            Some(p) => self.lift(p) == other.lift(p),
            None => self.int_value() == other.int_value(),
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fp::Int(n) => write!(f, "{n}"),
            Fp::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        match Fp::ctx(&self, &rhs) {
            Some(p) => Fp::Mod {
                v: (self.lift(p) + rhs.lift(p)) % p,
                p,
            },
            None => Fp::Int(self.int_value().checked_add(rhs.int_value()).unwrap()),
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        match Fp::ctx(&self, &rhs) {
            Some(p) => Fp::Mod {
                v: (p + self.lift(p) - rhs.lift(p)) % p,
                p,
            },
            None => Fp::Int(self.int_value().checked_sub(rhs.int_value()).unwrap()),
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        match Fp::ctx(&self, &rhs) {
            Some(p) => Fp::Mod {
                v: mul_mod(self.lift(p), rhs.lift(p), p),
                p,
            },
            None => Fp::Int(self.int_value().checked_mul(rhs.int_value()).unwrap()),
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        self * rhs.inv().expect("division by zero")
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        match self {
            Fp::Int(n) => Fp::Int(-n),
            Fp::Mod { v, p } => Fp::Mod { v: (p - v) % p, p },
        }
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp::Int(0)
    }
    fn is_zero(&self) -> bool {
        match self {
            Fp::Int(n) => *n == 0,
            Fp::Mod { v, .. } => *v == 0,
        }
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp::Int(1)
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        match self {
            Fp::Int(0) => None,
            Fp::Int(1) => Some(Fp::Int(1)),
            Fp::Int(-1) => Some(Fp::Int(-1)),
            Fp::Int(_) => panic!("inverse of an integer constant without field context"),
            Fp::Mod { v: 0, .. } => None,
            Fp::Mod { v, p } => Some(Fp::Mod {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            }),
        }
    }

    fn characteristic(&self) -> u64 {
        match self {
            Fp::Int(_) => panic!("characteristic of an integer constant without field context"),
            Fp::Mod { p, .. } => *p,
        }
    }

    fn from_int(&self, n: i64) -> Self {
        match self {
            Fp::Int(_) => Fp::Int(n),
            Fp::Mod { p, .. } => Fp::new(n, *p),
        }
    }

    fn from_bigint(&self, n: &BigInt) -> Self {
        match self {
            Fp::Int(_) => Fp::Int(n.to_i64().expect("integer constant out of range")),
            Fp::Mod { p, .. } => {
                let r = n.mod_floor(&BigInt::from(*p));
                Fp::from_u64(r.to_u64().unwrap(), *p)
            }
        }
    }

    fn roots(coeffs: &[Self]) -> Vec<(Self, usize)> {
        let p = coeffs
            .iter()
            .find_map(|c| c.modulus())
            .expect("prime-field roots need at least one modulus-carrying coefficient");
        let mut work: Vec<Fp> = coeffs.iter().map(|c| Fp::from_u64(c.lift(p), p)).collect();
        while work.last().map_or(false, |c| c.is_zero()) {
            work.pop();
        }
        assert!(!work.is_empty(), "roots of the zero polynomial");
        let mut found = Vec::new();
        for lam in 0..p {
            if work.len() < 2 {
                break;
            }
            let cand = Fp::from_u64(lam, p);
            let mut mult = 0;
            while work.len() >= 2 && eval_slice(&work, &cand).is_zero() {
                work = deflate_slice(&work, &cand);
                mult += 1;
            }
            if mult > 0 {
                found.push((cand, mult));
            }
        }
        found
    }
}

/// Deterministic Miller-Rabin for `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_arithmetic_is_exact() {
        let a = Rat::new(1, 3);
        let b = Rat::new(1, 6);
        assert_eq!(a.clone() + b.clone(), Rat::new(1, 2));
        assert_eq!(a.clone() * b.clone(), Rat::new(1, 18));
        assert_eq!(a.clone() + (-a.clone()), Rat::zero());
        assert_eq!(a.clone() * a.inv().unwrap(), Rat::one());
    }

    #[test]
    fn rat_display_lowest_terms() {
        assert_eq!(Rat::new(2, 4).to_string(), "1/2");
        assert_eq!(Rat::new(-6, 3).to_string(), "-2");
        assert_eq!(Rat::parse("7/21").unwrap(), Rat::new(1, 3));
        assert!(Rat::parse("1/0").is_err());
        assert!(Rat::parse("a/3").is_err());
    }

    #[test]
    fn fp_arithmetic() {
        let p = 101;
        let a = Fp::new(45, p);
        let b = Fp::new(-7, p);
        assert_eq!(b, Fp::new(94, p));
        assert_eq!(a * a.inv().unwrap(), Fp::new(1, p));
        assert_eq!(a + (-a), Fp::new(0, p));
        // modulus-free constants join contextual values
        assert_eq!(Fp::one() + a, Fp::new(46, p));
        assert_eq!(Fp::zero() * a, Fp::new(0, p));
    }

    #[test]
    fn rational_roots_of_cubic() {
        // (x - 1)(x - 2)(x - 4) = x^3 - 7x^2 + 14x - 8
        let coeffs = vec![
            Rat::integer(-8),
            Rat::integer(14),
            Rat::integer(-7),
            Rat::integer(1),
        ];
        let mut roots = Rat::roots(&coeffs);
        roots.sort_by_key(|(r, _)| r.numer().clone());
        assert_eq!(
            roots,
            vec![
                (Rat::integer(1), 1),
                (Rat::integer(2), 1),
                (Rat::integer(4), 1)
            ]
        );
    }

    #[test]
    fn rational_roots_with_fraction_and_multiplicity() {
        // (2x - 1)^2 (x + 3) = 4x^3 + 8x^2 - 11x + 3
        let coeffs = vec![
            Rat::integer(3),
            Rat::integer(-11),
            Rat::integer(8),
            Rat::integer(4),
        ];
        let mut roots = Rat::roots(&coeffs);
        roots.sort_by(|(a, _), (b, _)| a.to_string().cmp(&b.to_string()));
        assert!(roots.contains(&(Rat::new(1, 2), 2)));
        assert!(roots.contains(&(Rat::integer(-3), 1)));
    }

    #[test]
    fn fp_roots_by_scan() {
        let p = 13;
        // x^2 - 1 over GF(13): roots 1 and 12
        let coeffs = vec![Fp::new(-1, p), Fp::new(0, p), Fp::new(1, p)];
        let roots = Fp::roots(&coeffs);
        assert_eq!(roots, vec![(Fp::new(1, p), 1), (Fp::new(12, p), 1)]);
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(97));
        assert!(is_prime_u64(101));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
    }
}
