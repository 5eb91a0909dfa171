//! The multiplicative group ℚ* in factored form: elements as sign plus
//! prime-exponent vectors, finitely generated subgroups, membership and
//! quotients.
//!
//! ℚ* itself is not finitely generated; every group computation here runs
//! inside the finite-rank window spanned by a fixed prime set `S` plus the
//! sign, which is tracked as an explicit ℤ/2 summand.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::zlinalg::{solve_integer, GroupPresentation};
use crate::{Error, Int, IntMatrix, Rat, Result};

/// An element of ℚ* as a sign and a finite map prime → exponent.
/// No zero exponents are stored, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QStarElem {
    negative: bool,
    exps: BTreeMap<u64, i64>,
}

impl QStarElem {
    pub fn one() -> Self {
        QStarElem {
            negative: false,
            exps: BTreeMap::new(),
        }
    }

    pub fn minus_one() -> Self {
        QStarElem {
            negative: true,
            exps: BTreeMap::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.exps.is_empty()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// Sign bit for the ℤ/2 slot: 0 for positive, 1 for negative.
    pub fn sign_bit(&self) -> i64 {
        i64::from(self.negative)
    }

    pub fn exponent(&self, p: u64) -> i64 {
        self.exps.get(&p).copied().unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.exps.keys().copied()
    }

    pub fn from_parts(negative: bool, exps: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let exps = exps.into_iter().filter(|(_, e)| *e != 0).collect();
        QStarElem { negative, exps }
    }

    pub fn mul(&self, other: &QStarElem) -> QStarElem {
        let mut exps = self.exps.clone();
        for (&p, &e) in &other.exps {
            let entry = exps.entry(p).or_insert(0);
            *entry += e;
            if *entry == 0 {
                exps.remove(&p);
            }
        }
        QStarElem {
            negative: self.negative != other.negative,
            exps,
        }
    }

    pub fn pow(&self, n: i64) -> QStarElem {
        if n == 0 {
            return QStarElem::one();
        }
        let exps = self.exps.iter().map(|(&p, &e)| (p, e * n)).collect();
        QStarElem {
            negative: self.negative && n.rem_euclid(2) == 1,
            exps,
        }
    }

    pub fn inv(&self) -> QStarElem {
        self.pow(-1)
    }

    /// The rational this element factors; exact by construction.
    pub fn reconstruct(&self) -> Rat {
        let mut numer = Int::one();
        let mut denom = Int::one();
        for (&p, &e) in &self.exps {
            let base = Int::from(p);
            if e > 0 {
                numer *= base.pow(e as u32);
            } else {
                denom *= base.pow((-e) as u32);
            }
        }
        if self.negative {
            numer = -numer;
        }
        Rat::new(numer, denom)
    }
}

impl fmt::Display for QStarElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reconstruct())
    }
}

/// Deterministic Miller–Rabin, exact for all u64 inputs.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mul_mod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow_mod = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, base);
            }
            base = mul_mod(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const TRIAL_DIVISION_BOUND: u64 = 10_000_000;

fn factor_u64(mut n: u64, sink: &mut BTreeMap<u64, i64>, scale: i64) -> Result<()> {
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_BOUND && p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0i64;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            *sink.entry(p).or_insert(0) += e * scale;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if !is_prime_u64(n) {
            return Err(Error::domain(format!(
                "cannot factor {n}: composite with no prime factor ≤ {TRIAL_DIVISION_BOUND}"
            )));
        }
        *sink.entry(n).or_insert(0) += scale;
    }
    Ok(())
}

/// Factor a nonzero rational exactly. Inputs whose numerator or
/// denominator exceeds 64 bits are rejected with a clear error.
pub fn factorize(q: &Rat) -> Result<QStarElem> {
    if q.is_zero() {
        return Err(Error::domain("0 is not an element of Q*"));
    }
    let negative = q.is_negative();
    let numer = q.numer().abs();
    let denom = q.denom().abs();
    let numer = numer.to_u64().ok_or_else(|| {
        Error::domain(format!("numerator {numer} exceeds the 64-bit factor bound"))
    })?;
    let denom = denom.to_u64().ok_or_else(|| {
        Error::domain(format!(
            "denominator {denom} exceeds the 64-bit factor bound"
        ))
    })?;
    let mut exps = BTreeMap::new();
    factor_u64(numer, &mut exps, 1)?;
    factor_u64(denom, &mut exps, -1)?;
    exps.retain(|_, e| *e != 0);
    let elem = QStarElem { negative, exps };
    debug_assert_eq!(&elem.reconstruct(), q);
    Ok(elem)
}

/// Parse `"a"` or `"a/b"` with an optional leading minus. Floats and any
/// other notation are rejected.
pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let err = || Error::domain(format!("`{s}` is not a rational of the form a or a/b"));
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let parse_int = |t: &str, allow_sign: bool| -> Result<Int> {
        let (neg, digits) = match t.strip_prefix('-') {
            Some(rest) if allow_sign => (true, rest),
            Some(_) => return Err(err()),
            None => (false, t),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let mut v = Int::zero();
        for b in digits.bytes() {
            v = v * Int::from(10) + Int::from(b - b'0');
        }
        Ok(if neg { -v } else { v })
    };
    let numer = parse_int(num_str, true)?;
    let denom = match den_str {
        Some(d) => parse_int(d, false)?,
        None => Int::one(),
    };
    if denom.is_zero() {
        return Err(Error::domain(format!("`{s}` has a zero denominator")));
    }
    Ok(Rat::new(numer, denom))
}

pub fn parse_qstar(s: &str) -> Result<QStarElem> {
    factorize(&parse_rational(s)?)
}

/// The finite-rank window ⟨−1⟩ × ⟨p : p ∈ S⟩ into ℚ*: coordinates are one
/// ℤ/2 sign slot followed by the exponents of the primes of `S` in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SUnitLattice {
    primes: Vec<u64>,
}

impl SUnitLattice {
    /// Primes are sorted and deduplicated; compositeness is rejected.
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut primes: Vec<u64> = primes.into_iter().collect();
        primes.sort_unstable();
        primes.dedup();
        for &p in &primes {
            if !is_prime_u64(p) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
        }
        Ok(SUnitLattice { primes })
    }

    /// Smallest window supporting every element of the iterator.
    pub fn spanning<'a>(elems: impl IntoIterator<Item = &'a QStarElem>) -> Self {
        let mut primes: Vec<u64> = elems.into_iter().flat_map(|e| e.primes()).collect();
        primes.sort_unstable();
        primes.dedup();
        SUnitLattice { primes }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Coordinate rank: the sign slot plus one slot per prime.
    pub fn rank(&self) -> usize {
        1 + self.primes.len()
    }

    pub fn supports(&self, x: &QStarElem) -> bool {
        x.primes().all(|p| self.primes.binary_search(&p).is_ok())
    }

    /// (sign-bit, exponent vector) coordinates of `x`.
    pub fn encode(&self, x: &QStarElem) -> Result<Vec<Int>> {
        if !self.supports(x) {
            return Err(Error::domain(format!(
                "{x} has a prime outside the window {:?}",
                self.primes
            )));
        }
        let mut coords = Vec::with_capacity(self.rank());
        coords.push(Int::from(x.sign_bit()));
        for &p in &self.primes {
            coords.push(Int::from(x.exponent(p)));
        }
        Ok(coords)
    }

    /// Inverse of [`encode`](Self::encode); the sign coordinate is read
    /// modulo 2.
    pub fn decode(&self, coords: &[Int]) -> Result<QStarElem> {
        if coords.len() != self.rank() {
            return Err(Error::contract("decode: coordinate length mismatch"));
        }
        let negative = coords[0].mod_floor(&Int::from(2)).is_one();
        let exps = self.primes.iter().zip(&coords[1..]).map(|(&p, e)| {
            let e = e
                .to_i64()
                .expect("window exponents stay in i64 at desk scale");
            (p, e)
        });
        Ok(QStarElem::from_parts(negative, exps))
    }
}

/// Integer coordinates `c` with `∏ gensᵢ^{cᵢ} = x`, or `None` when
/// `x ∉ ⟨gens⟩`. Every hit is re-verified by multiplication.
pub fn subgroup_membership(x: &QStarElem, gens: &[QStarElem]) -> Option<Vec<Int>> {
    let window = SUnitLattice::spanning(gens.iter().chain(std::iter::once(x)));
    let rank = window.rank();
    // One extra column makes the sign equation hold modulo 2.
    let mut cols: Vec<Vec<Int>> = gens
        .iter()
        .map(|g| window.encode(g).expect("window spans gens"))
        .collect();
    let mut sign_fix = vec![Int::zero(); rank];
    sign_fix[0] = Int::from(2);
    cols.push(sign_fix);
    let a = IntMatrix::from_cols(rank, cols).expect("encoded columns share window rank");
    let b = window.encode(x).expect("window spans x");
    let sol = solve_integer(&a, &b).expect("shapes agree by construction")?;
    let coords: Vec<Int> = sol[..gens.len()].to_vec();
    let mut product = QStarElem::one();
    for (g, c) in gens.iter().zip(&coords) {
        let c = c
            .to_i64()
            .expect("membership coordinates stay in i64 at desk scale");
        product = product.mul(&g.pow(c));
    }
    if product == *x {
        Some(coords)
    } else {
        None
    }
}

/// Presentation of `(⟨−1⟩ × ⟨ambient primes⟩) / ⟨rel_gens⟩`.
pub fn quotient_presentation(
    ambient: &SUnitLattice,
    rel_gens: &[QStarElem],
) -> Result<GroupPresentation> {
    let rank = ambient.rank();
    let mut cols = Vec::with_capacity(1 + rel_gens.len());
    let mut sign_doubling = vec![Int::zero(); rank];
    sign_doubling[0] = Int::from(2);
    cols.push(sign_doubling);
    for g in rel_gens {
        cols.push(ambient.encode(g)?);
    }
    GroupPresentation::from_relations(rank, IntMatrix::from_cols(rank, cols)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn q(s: &str) -> QStarElem {
        parse_qstar(s).unwrap()
    }

    #[test]
    fn factorize_one_and_prime() {
        assert_eq!(q("1"), QStarElem::one());
        assert_eq!(q("7"), QStarElem::from_parts(false, [(7, 1)]));
    }

    #[test]
    fn factorize_trial_division_oracle() {
        // −12/5 = −(2²·3)/5 by trial division.
        let e = q("-12/5");
        assert!(e.is_negative());
        assert_eq!(e.exponent(2), 2);
        assert_eq!(e.exponent(3), 1);
        assert_eq!(e.exponent(5), -1);
        assert_eq!(e.reconstruct(), rat(-12, 5));
    }

    #[test]
    fn factorize_zero_is_domain_error() {
        assert!(matches!(factorize(&rat(0, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn factorize_large_prime_factors() {
        // 1000000000000000009 is prime; the residue after trial division is
        // certified by Miller–Rabin.
        let big = Rat::new(
            Int::parse_bytes(b"1000000000000000009", 10).unwrap(),
            Int::one(),
        );
        let e = factorize(&big).unwrap();
        assert_eq!(e.exponent(1_000_000_000_000_000_009), 1);
    }

    #[test]
    fn factorize_rejects_beyond_u64() {
        let huge = Rat::new(Int::from(2).pow(80), Int::one());
        assert!(matches!(factorize(&huge), Err(Error::Domain(_))));
    }

    #[test]
    fn mul_and_pow() {
        assert_eq!(q("2").mul(&q("1/2")), QStarElem::one());
        assert_eq!(q("-2").pow(2), q("4"));
        // Direct arithmetic: (−12/5)·(5/3) = −4.
        assert_eq!(q("-12/5").mul(&q("5/3")), q("-4"));
        assert_eq!(q("-3").pow(-1), q("-1/3"));
        assert_eq!(q("-3").pow(0), QStarElem::one());
    }

    #[test]
    fn membership_powers_of_two() {
        assert_eq!(subgroup_membership(&q("8"), &[q("2")]), Some(vec![int(3)]));
        assert_eq!(subgroup_membership(&q("3"), &[q("2")]), None);
    }

    #[test]
    fn membership_with_signs() {
        // Exponent-vector solve: (−2)¹·3¹ = −6.
        assert_eq!(
            subgroup_membership(&q("-6"), &[q("-2"), q("3")]),
            Some(vec![int(1), int(1)])
        );
        // −4 requires an odd power of −2 contributing the sign; 4 = (−2)².
        assert_eq!(subgroup_membership(&q("4"), &[q("-2")]), Some(vec![int(2)]));
        assert_eq!(subgroup_membership(&q("-4"), &[q("-2")]), None);
    }

    #[test]
    fn quotient_examples() {
        let s2 = SUnitLattice::new([2]).unwrap();
        // Coset-count oracle: ⟨−1, 2⟩/⟨2⟩ = {1, −1}.
        let p = quotient_presentation(&s2, &[q("2")]).unwrap();
        assert_eq!(p.invariant_factors, vec![int(2)]);
        assert_eq!(p.free_rank, 0);

        let p = quotient_presentation(&s2, &[]).unwrap();
        assert_eq!(p.to_string(), "Z/2 ⊕ Z");

        let s23 = SUnitLattice::new([2, 3]).unwrap();
        let p = quotient_presentation(&s23, &[q("6")]).unwrap();
        assert_eq!(p.to_string(), "Z/2 ⊕ Z");
    }

    #[test]
    fn quotient_rejects_unsupported_prime() {
        let s2 = SUnitLattice::new([2]).unwrap();
        assert!(matches!(
            quotient_presentation(&s2, &[q("5")]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn parse_rational_grammar() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-3").unwrap(), rat(-3, 1));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), rat(3, 2));
        for bad in ["", "1.5", "1e3", "+3", "3/-4", "3/0", "a", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "`{bad}` should be rejected");
        }
    }

    #[test]
    fn encode_decode_round_trip() {
        let w = SUnitLattice::new([2, 3, 5]).unwrap();
        for s in ["-12/5", "1", "-1", "8/9"] {
            let e = q(s);
            assert_eq!(w.decode(&w.encode(&e).unwrap()).unwrap(), e);
        }
        assert!(w.encode(&q("7")).is_err());
    }
}
