//! Decision cascade from a triple to the strongest almost-universality
//! verdict the known sufficient conditions support.
//!
//! Every positive verdict carries a chain of [`Check`]s. Each check is a
//! statement about the triple that [`Check::replay`] re-derives from the
//! `localfield`/`exceptional` primitives alone, so a verdict can be audited
//! without trusting the cascade.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{domain, Error, Result};
use crate::exceptional::{
    level_squarefree_divisors, pairwise_gcds_power_of_two, square_class_exclusion, Mod3Exclusion,
};
use crate::localfield::{quadratic_residue_symbol, residue_obstruction, Prime, ResidueObstruction};
use crate::polynum::TripleInvariants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    LocalObstruction,
    AlmostUniversal,
    /// Every sufficiently large `n ≡ residue (mod 3)` is represented.
    AlmostUniversalOnClass { residue: u8 },
    /// Every sufficiently large `n` outside the exceptional square classes
    /// is represented.
    AlmostUniversalOutsideS,
    Inconclusive,
}

/// Which sufficient condition produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statement {
    /// All orders ≡ 0 (mod 4) and some residue class is never attained.
    CongruenceObstruction,
    /// Pairwise gcds are powers of two plus non-residue primes `p` and `q`.
    NonResiduePrimes,
    /// Parity pattern with `a, b, c` distinct mod 3.
    ParityDistinctModThree,
    /// Parity pattern with `a ≡ b ≡ c ≢ 2 (mod 3)`.
    ParityEqualModThree,
    /// Some order not divisible by 4: large `n` outside `S` are represented.
    ExceptionalSquareClasses,
    /// `2^k α + 2, 2^l β + 2, 2^m γ + 2` with equal exponents.
    PowerFamilyEqualExponents,
    /// Power family with `k > l` and `k ≡ l ≡ m (mod 2)`.
    PowerFamilySameParity,
    /// Power family with `3 | γ`, `α ≡ β ≡ 1 (mod 12)`, `k = l > m + 1`, `k ≢ m (mod 2)`.
    PowerFamilyMixedParity,
    FermatOrders,
    MersenneOrders,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityPattern {
    /// `abc` odd.
    AllOdd,
    /// One order ≡ 2 (mod 4), the other two both odd or both ≡ 0 (mod 4).
    OneTwoModFour,
    /// One order ≡ 0 (mod 4), the two odd ones congruent mod 4.
    OneZeroModFour,
}

/// Outcome of the search for the second non-residue prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionIi {
    /// `abc` is odd; no second prime is needed.
    NotApplicable,
    Found { prime: u64 },
    Missing,
}

/// A replayable fact about the triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    ResidueObstruction { modulus: u64, attained: u64 },
    SomeOrderNotDivisibleByFour,
    PairwiseGcdPowerOfTwo,
    /// No odd prime of the level divides any target.
    OddLevelPrimesClean,
    /// `prime` divides exactly one of `a-2, b-2, c-2` and the product of the
    /// other two (doubled when `twice`) is a non-residue mod `prime`.
    NonResidue { prime: u64, twice: bool },
    /// Targets are non-residues mod `prime` (or their halves are, when
    /// `twice`), so they are not squares (not twice squares).
    TargetNonResidue { prime: u64, twice: bool },
    OddOrders,
    Parity { pattern: ParityPattern },
    DistinctModThree,
    EqualModThree { residue: u8 },
    SquaresExcludedModThree,
    SquaresExcludedOnClass { residue: u8 },
    TwiceSquaresExcluded,
    /// `l_n + v ≡ 2 (mod 3)` for every `n`, checked on `l` and `v` directly.
    TargetsTwoModThree,
    /// `ord_2(l_n + v) = ord` for every `n`.
    ConstantOrdTwo { ord: u32 },
}

fn leads_of(t: &TripleInvariants) -> [i128; 3] {
    t.leads()
}

/// Product of the two leads other than the one `p` divides, when exactly one does.
fn complementary_product(t: &TripleInvariants, p: u64) -> Option<i128> {
    let leads = leads_of(t);
    let divisible: Vec<usize> = (0..3).filter(|&i| leads[i] % p as i128 == 0).collect();
    if divisible.len() != 1 {
        return None;
    }
    let i = divisible[0];
    Some(leads[(i + 1) % 3] * leads[(i + 2) % 3])
}

impl Check {
    /// Re-derives the fact from scratch.
    pub fn replay(&self, t: &TripleInvariants) -> bool {
        match *self {
            Check::ResidueObstruction { modulus, attained } => residue_obstruction(t)
                .is_some_and(|o| o.modulus == modulus && o.attained == attained && attained < modulus),
            Check::SomeOrderNotDivisibleByFour => !t.all_divisible_by_four(),
            Check::PairwiseGcdPowerOfTwo => pairwise_gcds_power_of_two(leads_of(t)),
            Check::OddLevelPrimesClean => square_class_exclusion(t).odd_primes_clean,
            Check::NonResidue { prime, twice } => {
                let Ok(p) = Prime::new(prime) else { return false };
                let Some(product) = complementary_product(t, prime) else { return false };
                let value = if twice { 2 * product } else { product };
                prime != 2 && quadratic_residue_symbol(value, p) == Ok(-1)
            }
            Check::TargetNonResidue { prime, twice } => {
                let Ok(p) = Prime::new(prime) else { return false };
                let value = if twice { 2 * t.shift } else { t.shift };
                prime != 2 && t.l_coeff % prime as i128 == 0 && quadratic_residue_symbol(value, p) == Ok(-1)
            }
            Check::OddOrders => t.sorted.iter().all(|m| m % 2 == 1),
            Check::Parity { pattern } => parity_pattern(t.sorted) == Some(pattern),
            Check::DistinctModThree => distinct_mod_three(t.sorted),
            Check::EqualModThree { residue } => {
                t.sorted.iter().all(|m| m.rem_euclid(3) == residue as i64) && residue != 2
            }
            Check::SquaresExcludedModThree => square_class_exclusion(t).mod3 == Mod3Exclusion::Always,
            Check::SquaresExcludedOnClass { residue } => {
                square_class_exclusion(t).mod3 == Mod3Exclusion::OnClass { residue }
            }
            Check::TwiceSquaresExcluded => square_class_exclusion(t).twice_squares_excluded,
            Check::TargetsTwoModThree => t.l_coeff % 3 == 0 && t.shift % 3 == 2,
            Check::ConstantOrdTwo { ord } => square_class_exclusion(t).constant_ord2 == Some(ord),
        }
    }
}

pub fn replay_chain(chain: &[Check], t: &TripleInvariants) -> bool {
    chain.iter().all(|c| c.replay(t))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    pub condition_i_prime: Option<u64>,
    pub condition_ii: Option<ConditionIi>,
    /// Condition-(i) primes that are ≡ ±1 (mod 8), for which 2 is a residue
    /// and the second condition comes for free.
    pub plus_minus_one_mod_8_primes: Vec<u64>,
    pub parity_pattern: Option<ParityPattern>,
    pub obstruction: Option<ResidueObstruction>,
    /// Squarefree `t | N` whose classes `S^t` may still hold exceptions.
    pub exceptional_divisors: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub matched_statement: Statement,
    pub witnesses: Witnesses,
    pub chain: Vec<Check>,
    /// The verdict concerns all sufficiently large `n`; no effective threshold
    /// is known.
    pub asymptotic: bool,
    pub notes: Vec<String>,
}

impl ClassificationResult {
    pub fn replays(&self, t: &TripleInvariants) -> bool {
        replay_chain(&self.chain, t)
    }
}

// Facts established outside this crate's derivations.
const KNOWN_RESULTS: &[([i64; 3], &str)] = &[(
    [3, 4, 5],
    "external: Z.-W. Sun proved P_3(x) + P_4(y) + P_5(z) represents every natural number",
)];

fn known_notes(sorted: [i64; 3]) -> impl Iterator<Item = String> {
    KNOWN_RESULTS
        .iter()
        .filter(move |(t, _)| *t == sorted)
        .map(|(_, note)| note.to_string())
}

pub fn check_gcd_power_of_two(a: i64, b: i64, c: i64) -> Result<bool> {
    let t = TripleInvariants::new(a, b, c)?;
    Ok(pairwise_gcds_power_of_two(t.leads()))
}

fn odd_prime_candidates(t: &TripleInvariants) -> Vec<u64> {
    let mut primes: Vec<u64> = t
        .leads()
        .iter()
        .flat_map(|&l| arith::prime_divisors(l as u64))
        .filter(|&p| p != 2)
        .collect();
    primes.sort_unstable();
    primes.dedup();
    primes
}

fn non_residue_primes(t: &TripleInvariants, twice: bool) -> Vec<u64> {
    odd_prime_candidates(t)
        .into_iter()
        .filter(|&p| Check::NonResidue { prime: p, twice }.replay(t))
        .collect()
}

/// Smallest odd prime `p` dividing one of `a-2, b-2, c-2` with the product
/// of the other two a non-residue mod `p`.
pub fn find_condition_i_prime(a: i64, b: i64, c: i64) -> Result<Option<u64>> {
    let t = TripleInvariants::new(a, b, c)?;
    Ok(non_residue_primes(&t, false).first().copied())
}

/// Same search with the product doubled; vacuous when `abc` is odd.
pub fn find_condition_ii_prime(a: i64, b: i64, c: i64) -> Result<ConditionIi> {
    let t = TripleInvariants::new(a, b, c)?;
    Ok(condition_ii(&t))
}

fn condition_ii(t: &TripleInvariants) -> ConditionIi {
    if t.sorted.iter().all(|m| m % 2 == 1) {
        return ConditionIi::NotApplicable;
    }
    match non_residue_primes(t, true).first() {
        Some(&prime) => ConditionIi::Found { prime },
        None => ConditionIi::Missing,
    }
}

pub fn parity_pattern(orders: [i64; 3]) -> Option<ParityPattern> {
    let r = orders.map(|m| m.rem_euclid(4));
    if r.iter().all(|x| x % 2 == 1) {
        return Some(ParityPattern::AllOdd);
    }
    for i in 0..3 {
        let (x, y) = (r[(i + 1) % 3], r[(i + 2) % 3]);
        if r[i] == 2 && ((x % 2 == 1 && y % 2 == 1) || (x == 0 && y == 0)) {
            return Some(ParityPattern::OneTwoModFour);
        }
        if r[i] == 0 && x % 2 == 1 && x == y {
            return Some(ParityPattern::OneZeroModFour);
        }
    }
    None
}

fn distinct_mod_three(orders: [i64; 3]) -> bool {
    let r = orders.map(|m| m.rem_euclid(3));
    r[0] != r[1] && r[1] != r[2] && r[0] != r[2]
}

fn result(verdict: Verdict, statement: Statement, witnesses: Witnesses, chain: Vec<Check>) -> ClassificationResult {
    ClassificationResult {
        verdict,
        matched_statement: statement,
        witnesses,
        chain,
        asymptotic: !matches!(verdict, Verdict::LocalObstruction | Verdict::Inconclusive),
        notes: Vec::new(),
    }
}

fn classify_invariants(t: &TripleInvariants) -> ClassificationResult {
    let mut notes: Vec<String> = known_notes(t.sorted).collect();
    let mut res = cascade(t, &mut notes);
    res.notes.extend(notes);
    res
}

fn cascade(t: &TripleInvariants, notes: &mut Vec<String>) -> ClassificationResult {
    if let Some(obstruction) = residue_obstruction(t) {
        let chain = vec![Check::ResidueObstruction {
            modulus: obstruction.modulus,
            attained: obstruction.attained,
        }];
        let witnesses = Witnesses {
            obstruction: Some(obstruction),
            ..Witnesses::default()
        };
        return result(Verdict::LocalObstruction, Statement::CongruenceObstruction, witnesses, chain);
    }
    if t.all_divisible_by_four() {
        notes.push("all orders ≡ 0 (mod 4) but no residue class is missed".into());
        return result(Verdict::Inconclusive, Statement::None, Witnesses::default(), vec![]);
    }

    let gcd_ok = pairwise_gcds_power_of_two(t.leads());
    let cond_i = non_residue_primes(t, false);
    let cond_ii = condition_ii(t);
    let pm1: Vec<u64> = cond_i.iter().copied().filter(|p| p % 8 == 1 || p % 8 == 7).collect();
    let pattern = parity_pattern(t.sorted);
    let base = Witnesses {
        condition_i_prime: cond_i.first().copied(),
        condition_ii: Some(cond_ii),
        plus_minus_one_mod_8_primes: pm1.clone(),
        parity_pattern: pattern,
        ..Witnesses::default()
    };

    if gcd_ok {
        if let Some(&p) = cond_i.first() {
            let mut chain = vec![
                Check::SomeOrderNotDivisibleByFour,
                Check::PairwiseGcdPowerOfTwo,
                Check::OddLevelPrimesClean,
                Check::NonResidue { prime: p, twice: false },
                Check::TargetNonResidue { prime: p, twice: false },
            ];
            let second = match cond_ii {
                ConditionIi::NotApplicable => Some(vec![Check::OddOrders, Check::TwiceSquaresExcluded]),
                ConditionIi::Found { prime: q } => Some(vec![
                    Check::NonResidue { prime: q, twice: true },
                    Check::TargetNonResidue { prime: q, twice: true },
                ]),
                ConditionIi::Missing => None,
            };
            if let Some(second) = second {
                chain.extend(second);
                if replay_chain(&chain, t) {
                    if let Some(&q) = pm1.first() {
                        notes.push(format!("{q} ≡ ±1 (mod 8) satisfies the first condition, so 2 is a residue there"));
                    }
                    return result(Verdict::AlmostUniversal, Statement::NonResiduePrimes, base, chain);
                }
                notes.push("non-residue prime conditions matched but the chain did not replay".into());
            }
        }
    }

    if gcd_ok {
        if let Some(pattern) = pattern {
            let res3 = t.sorted.map(|m| m.rem_euclid(3));
            let prefix = [
                Check::SomeOrderNotDivisibleByFour,
                Check::PairwiseGcdPowerOfTwo,
                Check::Parity { pattern },
                Check::OddLevelPrimesClean,
                Check::TwiceSquaresExcluded,
            ];
            if distinct_mod_three(t.sorted) {
                let mut chain = prefix.to_vec();
                chain.extend([Check::DistinctModThree, Check::SquaresExcludedModThree]);
                if replay_chain(&chain, t) {
                    return result(Verdict::AlmostUniversal, Statement::ParityDistinctModThree, base, chain);
                }
                notes.push("parity pattern and distinct residues mod 3 matched but the chain did not replay".into());
            } else if res3[0] == res3[1] && res3[1] == res3[2] && res3[0] != 2 {
                let residue = ((t.sorted[0] + 1).rem_euclid(3)) as u8;
                let mut chain = prefix.to_vec();
                chain.extend([
                    Check::EqualModThree { residue: res3[0] as u8 },
                    Check::SquaresExcludedOnClass { residue },
                ]);
                if replay_chain(&chain, t) {
                    return result(
                        Verdict::AlmostUniversalOnClass { residue },
                        Statement::ParityEqualModThree,
                        base,
                        chain,
                    );
                }
                notes.push("parity pattern and equal residues mod 3 matched but the chain did not replay".into());
            }
        }
    }

    let witnesses = Witnesses {
        exceptional_divisors: level_squarefree_divisors(t),
        ..base
    };
    result(
        Verdict::AlmostUniversalOutsideS,
        Statement::ExceptionalSquareClasses,
        witnesses,
        vec![Check::SomeOrderNotDivisibleByFour],
    )
}

pub fn classify(a: i64, b: i64, c: i64) -> Result<ClassificationResult> {
    Ok(classify_invariants(&TripleInvariants::new(a, b, c)?))
}

/// `classify(m, m+1, m+2)`; when the verdict is not full almost
/// universality, the exceptional classes are narrowed to `t = 2`.
pub fn classify_consecutive(m: i64) -> Result<ClassificationResult> {
    let t = TripleInvariants::new(m, m.checked_add(1).ok_or_else(overflow)?, m.checked_add(2).ok_or_else(overflow)?)?;
    let mut res = classify_invariants(&t);
    if m.rem_euclid(4) == 1 {
        res.notes.push("m ≡ 1 (mod 4): the consecutive triple has the 1, 2, 3 (mod 4) parity pattern".into());
    }
    if res.verdict != Verdict::AlmostUniversal {
        let narrowing = [Check::OddLevelPrimesClean, Check::SquaresExcludedModThree];
        if replay_chain(&narrowing, &t) {
            res.witnesses.exceptional_divisors = vec![2];
            res.chain.extend(narrowing);
            res.notes.push("odd classes excluded by coprimality, t = 1 by residues mod 3".into());
        }
    }
    Ok(res)
}

fn overflow() -> Error {
    Error::Overflow("order out of range".into())
}

/// Orders `2^k α + 2, 2^l β + 2, 2^m γ + 2` for odd, pairwise coprime
/// `α, β, γ` and `k >= l >= m >= 2`.
pub fn classify_power_family(alpha: i64, beta: i64, gamma: i64, k: u32, l: u32, m: u32) -> Result<ClassificationResult> {
    let odd = [alpha, beta, gamma];
    if odd.iter().any(|&x| x <= 0 || x % 2 == 0) {
        return domain("α, β, γ must be positive and odd");
    }
    let pairs = [(alpha, beta), (alpha, gamma), (beta, gamma)];
    if pairs.iter().any(|&(x, y)| arith::gcd(x as i128, y as i128) != 1) {
        return domain("α, β, γ must be pairwise coprime");
    }
    if m < 2 || !(k >= l && l >= m) {
        return domain("exponents must satisfy k >= l >= m >= 2");
    }
    let order = |e: u32, x: i64| {
        1i64.checked_shl(e)
            .filter(|_| e < 62)
            .and_then(|p| p.checked_mul(x))
            .and_then(|v| v.checked_add(2))
            .ok_or_else(overflow)
    };
    let orders = [order(k, alpha)?, order(l, beta)?, order(m, gamma)?];
    let t = TripleInvariants::new(orders[0], orders[1], orders[2])?;

    let distinct3 = distinct_mod_three(odd);
    let statement = if distinct3 && k == l && l == m {
        Statement::PowerFamilyEqualExponents
    } else if distinct3 && k > l && k % 2 == l % 2 && l % 2 == m % 2 {
        Statement::PowerFamilySameParity
    } else if gamma % 3 == 0 && alpha % 12 == 1 && beta % 12 == 1 && k == l && k > m + 1 && k % 2 != m % 2 {
        Statement::PowerFamilyMixedParity
    } else {
        return domain("none of the three exponent/residue conditions holds");
    };

    let ord = square_class_exclusion(&t).constant_ord2;
    let mut chain = vec![Check::SomeOrderNotDivisibleByFour, Check::PairwiseGcdPowerOfTwo, Check::OddLevelPrimesClean];
    if let Some(ord) = ord.filter(|o| o % 2 == 0) {
        chain.push(Check::ConstantOrdTwo { ord });
    }
    chain.extend([Check::TwiceSquaresExcluded, Check::TargetsTwoModThree]);
    let witnesses = Witnesses {
        exceptional_divisors: vec![],
        ..Witnesses::default()
    };
    let mut res = result(Verdict::AlmostUniversal, statement, witnesses, chain);
    res.notes.push(format!("orders ({}, {}, {})", orders[0], orders[1], orders[2]));
    if !res.replays(&t) {
        let failed: Vec<String> = res.chain.iter().filter(|c| !c.replay(&t)).map(|c| format!("{c:?}")).collect();
        res.verdict = Verdict::Inconclusive;
        res.asymptotic = false;
        res.notes.push(format!("hypotheses hold but these exclusions do not: {}", failed.join(", ")));
        res.witnesses.exceptional_divisors = level_squarefree_divisors(&t);
    }
    Ok(res)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialFamily {
    /// `F_k = 2^(2^k) + 1`.
    Fermat,
    /// `M_p = 2^p - 1`.
    Mersenne,
}

/// Orders `F_k + 2` (or `M_p + 2`) for three distinct indices.
pub fn family_orders(kind: SpecialFamily, indices: [u32; 3]) -> Result<[i64; 3]> {
    if indices[0] == indices[1] || indices[1] == indices[2] || indices[0] == indices[2] {
        return domain("indices must be pairwise distinct");
    }
    let number = |i: u32| -> Result<i64> {
        match kind {
            SpecialFamily::Fermat => {
                if i < 1 {
                    return domain("Fermat indices start at 1");
                }
                if i > 5 {
                    return Err(overflow());
                }
                Ok((1i64 << (1u32 << i)) + 1)
            }
            SpecialFamily::Mersenne => {
                if i == 2 || !arith::is_prime(i as u64) {
                    return domain(format!("{i} is not an odd prime"));
                }
                if i > 61 {
                    return Err(overflow());
                }
                Ok((1i64 << i) - 1)
            }
        }
    };
    let nums = [number(indices[0])?, number(indices[1])?, number(indices[2])?];
    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        if arith::gcd(nums[x] as i128, nums[y] as i128) != 1 {
            return domain("family numbers are not pairwise coprime");
        }
    }
    Ok(nums.map(|v| v + 2))
}

/// The residue-class guarantee for Fermat (`n ≡ 2 mod 3`) and Mersenne
/// (`n ≡ 1 mod 3`) orders, replayed from the equal-residues-mod-3 condition.
pub fn fermat_mersenne_guarantee(kind: SpecialFamily, indices: [u32; 3]) -> Result<ClassificationResult> {
    let orders = family_orders(kind, indices)?;
    let t = TripleInvariants::new(orders[0], orders[1], orders[2])?;
    let r = t.sorted.map(|m| m.rem_euclid(3));
    let expected = match kind {
        SpecialFamily::Fermat => 1,
        SpecialFamily::Mersenne => 0,
    };
    if r.iter().any(|&x| x != expected) {
        return domain("orders are not congruent as required mod 3");
    }
    let residue = ((expected + 1) % 3) as u8;
    let chain = vec![
        Check::SomeOrderNotDivisibleByFour,
        Check::PairwiseGcdPowerOfTwo,
        Check::Parity { pattern: ParityPattern::AllOdd },
        Check::OddLevelPrimesClean,
        Check::TwiceSquaresExcluded,
        Check::EqualModThree { residue: expected as u8 },
        Check::SquaresExcludedOnClass { residue },
    ];
    if !replay_chain(&chain, &t) {
        return domain("residue-class hypotheses do not replay");
    }
    let statement = match kind {
        SpecialFamily::Fermat => Statement::FermatOrders,
        SpecialFamily::Mersenne => Statement::MersenneOrders,
    };
    let witnesses = Witnesses {
        parity_pattern: Some(ParityPattern::AllOdd),
        exceptional_divisors: vec![],
        ..Witnesses::default()
    };
    let mut res = result(Verdict::AlmostUniversalOnClass { residue }, statement, witnesses, chain);
    res.notes.push(format!("orders ({}, {}, {})", orders[0], orders[1], orders[2]));
    let full = classify_invariants(&t);
    if full.verdict == Verdict::AlmostUniversal {
        res.notes.push("classify() proves the stronger unrestricted verdict for these orders".into());
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        assert!(check_gcd_power_of_two(3, 5, 9).unwrap());
        assert!(!check_gcd_power_of_two(5, 8, 11).unwrap());
        assert!(check_gcd_power_of_two(3, 3, 3).unwrap());
        assert!(check_gcd_power_of_two(2, 3, 3).is_err());
    }

    #[test]
    fn condition_prime_examples() {
        assert_eq!(find_condition_i_prime(3, 5, 9).unwrap(), Some(7));
        assert_eq!(find_condition_i_prime(3, 4, 7).unwrap(), Some(5));
        assert_eq!(find_condition_i_prime(3, 4, 4).unwrap(), None);
        assert_eq!(find_condition_ii_prime(3, 4, 7).unwrap(), ConditionIi::Missing);
        assert_eq!(find_condition_ii_prime(3, 6, 13).unwrap(), ConditionIi::Found { prime: 11 });
        assert_eq!(find_condition_ii_prime(3, 5, 7).unwrap(), ConditionIi::NotApplicable);
    }

    #[test]
    fn parity_patterns() {
        assert_eq!(parity_pattern([3, 5, 7]), Some(ParityPattern::AllOdd));
        assert_eq!(parity_pattern([5, 6, 7]), Some(ParityPattern::OneTwoModFour));
        assert_eq!(parity_pattern([6, 8, 12]), Some(ParityPattern::OneTwoModFour));
        assert_eq!(parity_pattern([4, 5, 9]), Some(ParityPattern::OneZeroModFour));
        assert_eq!(parity_pattern([3, 4, 5]), None);
        assert_eq!(parity_pattern([6, 6, 7]), None);
    }

    #[test]
    fn classify_examples() {
        let r = classify(3, 5, 9).unwrap();
        assert_eq!(r.verdict, Verdict::AlmostUniversal);
        assert_eq!(r.matched_statement, Statement::NonResiduePrimes);
        assert_eq!(r.witnesses.condition_i_prime, Some(7));
        assert_eq!(r.witnesses.condition_ii, Some(ConditionIi::NotApplicable));

        let r = classify(5, 6, 7).unwrap();
        assert_eq!(r.verdict, Verdict::AlmostUniversal);
        assert_eq!(r.matched_statement, Statement::ParityDistinctModThree);

        let r = classify(4, 4, 4).unwrap();
        assert_eq!(r.verdict, Verdict::LocalObstruction);
        assert_eq!(r.witnesses.obstruction.as_ref().map(|o| (o.modulus, o.attained)), Some((8, 7)));

        let r = classify(3, 4, 5).unwrap();
        assert_eq!(r.verdict, Verdict::AlmostUniversalOutsideS);
        assert_eq!(r.witnesses.exceptional_divisors, vec![1, 2, 3, 6]);
        assert!(r.notes.iter().any(|n| n.contains("Sun")));

        assert!(classify(2, 4, 5).is_err());
    }

    #[test]
    fn equal_mod_three_class() {
        // 3, 3, 3: all odd, all ≡ 0 (mod 3)
        let r = classify(3, 3, 3).unwrap();
        assert_eq!(r.verdict, Verdict::AlmostUniversalOnClass { residue: 1 });
        assert!(r.replays(&TripleInvariants::new(3, 3, 3).unwrap()));
    }

    #[test]
    fn consecutive_examples() {
        assert_eq!(classify_consecutive(5).unwrap().verdict, Verdict::AlmostUniversal);
        assert_eq!(classify_consecutive(9).unwrap().verdict, Verdict::AlmostUniversal);
        let r = classify_consecutive(4).unwrap();
        assert_ne!(r.verdict, Verdict::AlmostUniversal);
        assert_eq!(r.witnesses.exceptional_divisors, vec![2]);
    }

    #[test]
    fn power_family_examples() {
        // (1, 5, 3) with k = l = m = 2 gives orders (6, 22, 14)
        let r = classify_power_family(1, 5, 3, 2, 2, 2).unwrap();
        assert_eq!(r.verdict, Verdict::AlmostUniversal);
        assert_eq!(r.matched_statement, Statement::PowerFamilyEqualExponents);
        assert!(r.chain.contains(&Check::ConstantOrdTwo { ord: 4 }));

        let r = classify_power_family(1, 5, 3, 4, 2, 2).unwrap();
        assert_eq!(r.matched_statement, Statement::PowerFamilySameParity);
        assert_eq!(r.verdict, Verdict::AlmostUniversal);

        // k - m = 1 violates the third condition
        assert!(classify_power_family(1, 13, 3, 3, 3, 2).is_err());
        assert!(classify_power_family(2, 5, 3, 2, 2, 2).is_err());
        assert!(classify_power_family(3, 9, 5, 2, 2, 2).is_err());
    }

    #[test]
    fn fermat_mersenne_examples() {
        assert_eq!(family_orders(SpecialFamily::Fermat, [1, 2, 3]).unwrap(), [7, 19, 259]);
        let r = fermat_mersenne_guarantee(SpecialFamily::Fermat, [1, 2, 3]).unwrap();
        assert_eq!(r.verdict, Verdict::AlmostUniversalOnClass { residue: 2 });
        assert_eq!(family_orders(SpecialFamily::Mersenne, [3, 5, 7]).unwrap(), [9, 33, 129]);
        let r = fermat_mersenne_guarantee(SpecialFamily::Mersenne, [3, 5, 7]).unwrap();
        assert_eq!(r.verdict, Verdict::AlmostUniversalOnClass { residue: 1 });
        assert!(fermat_mersenne_guarantee(SpecialFamily::Fermat, [1, 1, 2]).is_err());
        assert!(fermat_mersenne_guarantee(SpecialFamily::Mersenne, [2, 3, 5]).is_err());
    }
}
