//! p-adic arithmetic for the shifted-lattice problem.
//!
//! Hilbert symbols use the usual unit/valuation decomposition; the Hasse
//! symbol of a diagonal form is `prod_{i<j} (d_i, d_j)_p`, and a ternary form
//! is isotropic at `p` iff its Hasse symbol equals `(-1, -d)_p`. The
//! [`oracle`] submodule decides the same questions by exhaustive search and
//! is kept independent of the closed forms here.

pub mod local;
pub mod oracle;

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{self, split_power};
use crate::error::{domain, Error, Result};
use crate::polynum::{PolygonalOrder, TripleInvariants};

pub use local::{local_coset_represents, LocalMode, LocalRepresentationOracle};

/// A rational prime, checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if arith::is_prime(p) {
            Ok(Self(p))
        } else {
            Err(Error::NotPrime(p as i128))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A place of Q: a finite prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Place {
    Real,
    Finite(Prime),
}

impl Place {
    pub fn finite(p: u64) -> Result<Self> {
        Prime::new(p).map(Place::Finite)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// `ord_p(n)`; zero has infinite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

pub fn padic_order(n: i128, p: Prime) -> Valuation {
    match arith::valuation(n, p.get()) {
        Some(e) => Valuation::Finite(e),
        None => Valuation::Infinite,
    }
}

/// Legendre symbol `(u | p)` for an odd prime.
pub fn quadratic_residue_symbol(u: i128, p: Prime) -> Result<i8> {
    if p.get() == 2 {
        return domain("the Legendre symbol needs an odd prime");
    }
    Ok(arith::legendre(u, p.get()))
}

// (u - 1) / 2 mod 2 and (u^2 - 1) / 8 mod 2 for odd u.
fn eps(u: i128) -> u32 {
    ((u.rem_euclid(4) - 1) / 2) as u32
}

fn omega(u: i128) -> u32 {
    let r = u.rem_euclid(8);
    u32::from(r == 3 || r == 5)
}

/// Hilbert symbol of two nonzero integers.
pub fn hilbert_symbol_int(x: i128, y: i128, v: Place) -> Result<i8> {
    if x == 0 || y == 0 {
        return domain("Hilbert symbol of zero");
    }
    let p = match v {
        Place::Real => return Ok(if x < 0 && y < 0 { -1 } else { 1 }),
        Place::Finite(p) => p.get(),
    };
    let (alpha, u) = split_power(x, p);
    let (beta, w) = split_power(y, p);
    if p == 2 {
        let e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let mut s: i8 = if (alpha * beta) % 2 == 1 && p % 4 == 3 { -1 } else { 1 };
    if beta % 2 == 1 {
        s *= arith::legendre(u, p);
    }
    if alpha % 2 == 1 {
        s *= arith::legendre(w, p);
    }
    Ok(s)
}

/// Hilbert symbol of two nonzero rationals; `a/b` lies in the square class
/// of `a b`.
pub fn hilbert_symbol(x: Ratio<i64>, y: Ratio<i64>, v: Place) -> Result<i8> {
    let class = |q: Ratio<i64>| *q.numer() as i128 * *q.denom() as i128;
    hilbert_symbol_int(class(x), class(y), v)
}

/// Nonsingular diagonal ternary form over `Q_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicDiagForm {
    pub prime: Prime,
    pub entries: [i128; 3],
}

impl PadicDiagForm {
    pub fn new(prime: Prime, entries: [i128; 3]) -> Result<Self> {
        if entries.contains(&0) {
            return domain("diagonal entries must be nonzero");
        }
        entries
            .iter()
            .try_fold(1i128, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::Overflow("discriminant".into()))?;
        Ok(Self { prime, entries })
    }

    pub fn discriminant(&self) -> i128 {
        self.entries.iter().product()
    }
}

pub fn hasse_symbol(f: &PadicDiagForm) -> i8 {
    let place = Place::Finite(f.prime);
    let d = f.entries;
    let h = |x, y| hilbert_symbol_int(x, y, place).expect("entries are nonzero");
    h(d[0], d[1]) * h(d[0], d[2]) * h(d[1], d[2])
}

/// Isotropy of a ternary form: `c_p(f) = (-1, -d(f))_p`.
pub fn is_isotropic_ternary(f: &PadicDiagForm) -> bool {
    let rhs = hilbert_symbol_int(-1, -f.discriminant(), Place::Finite(f.prime)).expect("nonzero");
    hasse_symbol(f) == rhs
}

/// Distinct primes dividing `2(a-2)(b-2)(c-2)`, ascending.
pub fn bad_primes(t: &TripleInvariants) -> Vec<u64> {
    let mut primes = vec![2u64];
    for lead in t.leads() {
        primes.extend(arith::prime_divisors(lead as u64));
    }
    primes.sort_unstable();
    primes.dedup();
    primes
}

/// Finite primes at which `<a-2, b-2, c-2>` is anisotropic. Only primes
/// dividing `2(a-2)(b-2)(c-2)` can qualify; the form is unimodular elsewhere.
pub fn anisotropic_primes(t: &TripleInvariants) -> Vec<u64> {
    bad_primes(t)
        .into_iter()
        .filter(|&p| {
            let form = PadicDiagForm::new(Prime(p), t.leads()).expect("leads are positive");
            !is_isotropic_ternary(&form)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityProfile {
    pub prime: u64,
    pub n_max: u64,
    /// Largest `ord_p(l_n + v)` seen for `n <= n_max`.
    pub max_observed: u32,
    /// `ord_p(l_n + v)` is bounded over all `n`.
    pub bounded: bool,
    /// The bound itself when `bounded`: then `ord_p(l_n + v) = ord_p(v)`
    /// for every `n`.
    pub bound: Option<u32>,
}

/// Divisibility of the targets at an anisotropic prime.
pub fn divisibility_profile(t: &TripleInvariants, p: Prime, n_max: u64) -> Result<DivisibilityProfile> {
    if !anisotropic_primes(t).contains(&p.get()) {
        return domain(format!("{p} is not an anisotropic prime of the triple"));
    }
    Ok(valuation_profile(t, p, n_max))
}

/// Same scan as [`divisibility_profile`] without the anisotropy precondition.
///
/// Boundedness is decided exactly: with `e = ord_p(l)`, the order of
/// `l n + v` is the constant `ord_p(v)` when `ord_p(v) < e`; otherwise
/// `(l/p^e) n + v/p^e` has a unit coefficient and reaches every power of `p`.
pub fn valuation_profile(t: &TripleInvariants, p: Prime, n_max: u64) -> DivisibilityProfile {
    let max_observed = (0..=n_max)
        .map(|n| arith::valuation(t.target(n), p.get()).unwrap_or(u32::MAX))
        .max()
        .unwrap_or(0);
    let ord_l = arith::valuation(t.l_coeff, p.get()).expect("l_coeff > 0");
    let bound = arith::valuation(t.shift, p.get()).filter(|&s| s < ord_l);
    DivisibilityProfile {
        prime: p.get(),
        n_max,
        max_observed,
        bounded: bound.is_some(),
        bound,
    }
}

/// Congruence obstruction for triples with `a ≡ b ≡ c ≡ 0 (mod 4)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueObstruction {
    pub modulus: u64,
    pub attained: u64,
    pub missed: Vec<u64>,
}

impl ResidueObstruction {
    pub fn excludes(&self, n: u64) -> bool {
        self.missed.binary_search(&(n % self.modulus)).is_ok()
    }
}

/// Residues of `P_m(x) mod modulus` as `x` runs over `0..x_period`.
pub fn polygonal_residues(m: PolygonalOrder, modulus: u64, x_period: u64) -> Vec<bool> {
    let md = modulus as u128;
    let lead = (m.get() - 2) as u128 % (2 * md);
    let lin = (m.get() - 4).rem_euclid(2 * modulus as i64) as u128;
    let mut hit = vec![false; modulus as usize];
    for x in 0..x_period as u128 {
        // (lead x^2 - lin x) / 2, computed mod 2*modulus so the halving is exact
        let twice = (lead * (x * x % (2 * md)) + 2 * md - lin * x % (2 * md)) % (2 * md);
        hit[(twice / 2) as usize] = true;
    }
    hit
}

/// Residues attained by `P_a(x) + P_b(y) + P_c(z)` modulo `modulus`.
pub fn triple_residues(t: &TripleInvariants, modulus: u64) -> Vec<bool> {
    let sets = t.orders().map(|m| polygonal_residues(m, modulus, 2 * modulus));
    let sum = |f: &[bool], g: &[bool]| {
        let mut out = vec![false; modulus as usize];
        for (i, _) in f.iter().enumerate().filter(|(_, &b)| b) {
            for (j, _) in g.iter().enumerate().filter(|(_, &b)| b) {
                out[(i + j) % modulus as usize] = true;
            }
        }
        out
    };
    sum(&sum(&sets[0], &sets[1]), &sets[2])
}

pub fn residue_obstruction(t: &TripleInvariants) -> Option<ResidueObstruction> {
    if !t.all_divisible_by_four() {
        return None;
    }
    let same_mod_8 = t.sorted.iter().all(|m| m % 8 == t.sorted[0] % 8);
    let modulus = if same_mod_8 { 8 } else { 16 };
    let hit = triple_residues(t, modulus);
    let missed: Vec<u64> = (0..modulus).filter(|&r| !hit[r as usize]).collect();
    if missed.is_empty() {
        return None;
    }
    Some(ResidueObstruction {
        modulus,
        attained: modulus - missed.len() as u64,
        missed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynum::triple_invariants;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn prime_and_place_construction() {
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
        assert_eq!(Place::finite(7).unwrap(), Place::Finite(prime(7)));
    }

    #[test]
    fn order_examples() {
        assert_eq!(padic_order(48, prime(2)), Valuation::Finite(4));
        assert_eq!(padic_order(0, prime(7)), Valuation::Infinite);
        assert_eq!(padic_order(8, prime(3)), Valuation::Finite(0));
        assert!(Valuation::Finite(1000) < Valuation::Infinite);
    }

    #[test]
    fn residue_symbol_examples() {
        assert_eq!(quadratic_residue_symbol(2, prime(7)).unwrap(), 1);
        // squares mod 5 are {1, 4}
        assert_eq!(quadratic_residue_symbol(2, prime(5)).unwrap(), -1);
        assert_eq!(quadratic_residue_symbol(10, prime(5)).unwrap(), 0);
        for p in [3, 5, 7, 11, 13] {
            assert_eq!(quadratic_residue_symbol(1, prime(p)).unwrap(), 1);
        }
        assert!(quadratic_residue_symbol(3, prime(2)).is_err());
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol_int(-1, -1, Place::Real).unwrap(), -1);
        assert_eq!(hilbert_symbol_int(-1, -1, Place::finite(2).unwrap()).unwrap(), -1);
        for p in [3, 5, 7] {
            for u in 1..p as i128 {
                for w in 1..p as i128 {
                    assert_eq!(hilbert_symbol_int(u, w, Place::finite(p).unwrap()).unwrap(), 1);
                }
            }
        }
        assert!(hilbert_symbol_int(0, 3, Place::Real).is_err());
        let half = Ratio::new(1, 2);
        assert_eq!(
            hilbert_symbol(half, Ratio::from_integer(3), Place::finite(2).unwrap()).unwrap(),
            hilbert_symbol_int(2, 3, Place::finite(2).unwrap()).unwrap()
        );
    }

    #[test]
    fn hasse_examples() {
        let two = prime(2);
        for p in [2, 3, 5, 7, 11] {
            assert_eq!(hasse_symbol(&PadicDiagForm::new(prime(p), [1, 1, 1]).unwrap()), 1);
        }
        assert_eq!(hasse_symbol(&PadicDiagForm::new(two, [2, 3, 5]).unwrap()), 1);
        assert_eq!(hasse_symbol(&PadicDiagForm::new(two, [1, 2, 3]).unwrap()), -1);
        assert!(PadicDiagForm::new(two, [1, 0, 3]).is_err());
    }

    #[test]
    fn isotropy_examples() {
        for p in [2, 3, 5, 7, 13] {
            assert!(is_isotropic_ternary(&PadicDiagForm::new(prime(p), [1, 1, -1]).unwrap()));
        }
        assert!(!is_isotropic_ternary(&PadicDiagForm::new(prime(2), [1, 1, 1]).unwrap()));
        assert!(!is_isotropic_ternary(&PadicDiagForm::new(prime(2), [1, 2, 3]).unwrap()));
        assert!(is_isotropic_ternary(&PadicDiagForm::new(prime(3), [1, 2, 3]).unwrap()));
    }

    #[test]
    fn anisotropic_prime_examples() {
        assert_eq!(anisotropic_primes(&triple_invariants(3, 4, 5).unwrap()), vec![2]);
        assert_eq!(anisotropic_primes(&triple_invariants(4, 4, 4).unwrap()), vec![2]);
        assert_eq!(anisotropic_primes(&triple_invariants(3, 3, 3).unwrap()), vec![2]);
    }

    #[test]
    fn divisibility_examples() {
        let t = triple_invariants(3, 4, 5).unwrap();
        let two = divisibility_profile(&t, prime(2), 10_000).unwrap();
        assert_eq!((two.max_observed, two.bounded, two.bound), (3, true, Some(3)));
        assert!(divisibility_profile(&t, prime(3), 10_000).is_err());
        let three = valuation_profile(&t, prime(3), 10_000);
        assert_eq!((three.max_observed, three.bounded), (0, true));

        let t = triple_invariants(5, 6, 7).unwrap();
        assert_eq!(t.target(0), 188);
        let two = valuation_profile(&t, prime(2), 10_000);
        assert_eq!((two.max_observed, two.bound), (2, Some(2)));

        // shift 0: ord_2(16 n) is unbounded
        let cube = triple_invariants(4, 4, 4).unwrap();
        let two = divisibility_profile(&cube, prime(2), 1000).unwrap();
        assert!(!two.bounded);
        assert_eq!(two.max_observed, u32::MAX);
    }

    #[test]
    fn obstruction_examples() {
        let cube = residue_obstruction(&triple_invariants(4, 4, 4).unwrap()).unwrap();
        assert_eq!((cube.modulus, cube.attained, cube.missed.clone()), (8, 7, vec![7]));
        let eights = residue_obstruction(&triple_invariants(8, 8, 8).unwrap()).unwrap();
        assert_eq!((eights.modulus, eights.missed.clone()), (8, vec![4]));
        // orders with distinct residues mod 8 reach every class mod 16
        let mixed = triple_invariants(4, 8, 12).unwrap();
        assert!(triple_residues(&mixed, 16).iter().all(|&b| b));
        assert_eq!(residue_obstruction(&mixed), None);
        assert_eq!(residue_obstruction(&triple_invariants(3, 4, 5).unwrap()), None);
    }

    #[test]
    fn polygonal_residues_match_direct_evaluation() {
        for m in 3..20 {
            let order = PolygonalOrder::new(m).unwrap();
            for modulus in [8u64, 16, 27] {
                let hit = polygonal_residues(order, modulus, 2 * modulus);
                let mut brute = vec![false; modulus as usize];
                for x in -200..200 {
                    brute[order.eval(x).unwrap().rem_euclid(modulus as i128) as usize] = true;
                }
                assert_eq!(hit, brute, "m={m} modulus={modulus}");
            }
        }
    }
}
