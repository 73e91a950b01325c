//! Empirical side: which `n <= bound` are values of
//! `P_a(x) + P_b(y) + P_c(z)`, and how every gap relates to the exceptional
//! classes and local obstructions.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::{or_shifted_words, BitSet};
use crate::error::{domain, Error, Result};
use crate::exceptional::{exceptional_membership, ExceptionalSet, ExceptionalWitness};
use crate::localfield::{bad_primes, residue_obstruction, LocalRepresentationOracle, Prime};
use crate::polynum::{direct_representation_count, TripleInvariants};

pub const DEFAULT_MEMORY_CAP: u64 = 1 << 30;

// Words per parallel work item: 64 Ki bits stays cache resident.
const CHUNK_WORDS: usize = 1024;
const SPOT_CHECKS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveOptions {
    /// Worker threads; `None` uses every available core.
    pub workers: Option<usize>,
    /// Upper limit in bytes on the sieve's bit sets.
    pub memory_cap: u64,
}

impl Default for SieveOptions {
    fn default() -> Self {
        Self {
            workers: None,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

impl SieveOptions {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers: Some(workers),
            ..Self::default()
        }
    }
}

fn run_in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(0) => domain("worker count must be positive"),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

// dest |= OR over s in shifts of (src << s), split into disjoint word chunks.
fn or_shifts_parallel(dest: &mut BitSet, src: &BitSet, shifts: &[u64]) {
    let len = dest.len();
    let words = dest.words_mut();
    words.par_chunks_mut(CHUNK_WORDS).enumerate().for_each(|(ci, chunk)| {
        let first = ci * CHUNK_WORDS;
        let hi_bit = ((first + chunk.len()) * 64) as u64;
        for &s in shifts {
            if s >= hi_bit.min(len as u64) {
                break;
            }
            or_shifted_words(chunk, first, src, s as i64);
        }
    });
    dest.clear_tail();
}

/// Bit `n` is set iff `n = P_a(x) + P_b(y) + P_c(z)` for some integers.
///
/// The longest value list is marked directly, the other two are added by
/// shifted ORs over disjoint output windows, so the result does not depend
/// on the number of workers.
pub fn represented_sieve(t: &TripleInvariants, bound: u64, options: SieveOptions) -> Result<BitSet> {
    if bound < 1 {
        return domain("bound must be at least 1");
    }
    let len = usize::try_from(bound)
        .ok()
        .and_then(|b| b.checked_add(1))
        .ok_or_else(|| Error::Overflow("bound does not fit in memory".into()))?;
    let requested = BitSet::bytes_for(len).saturating_mul(3);
    if requested > options.memory_cap {
        return Err(Error::ResourceLimit {
            what: format!("sieve to {bound}"),
            requested,
            cap: options.memory_cap,
        });
    }
    let mut lists = t.orders().map(|m| m.distinct_values_up_to(bound));
    lists.sort_by_key(|v| std::cmp::Reverse(v.len()));
    let [first, second, third] = lists;

    run_in_pool(options.workers, move || {
        let mut marks = BitSet::new(len);
        for &v in &first {
            marks.set(v as usize);
        }
        let mut pairs = BitSet::new(len);
        or_shifts_parallel(&mut pairs, &marks, &second);
        drop(marks);
        let mut out = BitSet::new(len);
        or_shifts_parallel(&mut out, &pairs, &third);
        out
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapAnnotation {
    pub n: u64,
    /// `n ∈ S^t` certificates over squarefree `t | N`.
    pub witnesses: Vec<ExceptionalWitness>,
    /// `n` lies in a residue class the triple never attains.
    pub obstructed: bool,
    /// A prime at which `n` is not represented locally. Only computed when
    /// every order is divisible by 4 and `n` is neither in `S` nor obstructed.
    pub local_failure: Option<u64>,
    /// Outside `S`, at or above the threshold and otherwise unexplained.
    pub tension: bool,
}

impl GapAnnotation {
    pub fn in_s(&self) -> bool {
        !self.witnesses.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationReport {
    pub triple: TripleInvariants,
    pub bound: u64,
    pub ignore_below: u64,
    /// Non-represented `n <= bound`, ascending.
    pub gaps: Vec<u64>,
    pub annotations: Vec<GapAnnotation>,
    pub largest_gap: Option<u64>,
    pub represented_count: u64,
    pub tension_count: u64,
    /// Gaps re-verified with the direct count.
    pub spot_checked: Vec<u64>,
    pub elapsed_micros: u64,
}

impl RepresentationReport {
    pub fn tensions(&self) -> impl Iterator<Item = &GapAnnotation> {
        self.annotations.iter().filter(|a| a.tension)
    }
}

fn spot_sample(gaps: &[u64]) -> Vec<u64> {
    if gaps.len() <= SPOT_CHECKS {
        return gaps.to_vec();
    }
    let step = gaps.len() / SPOT_CHECKS;
    let mut sample: Vec<u64> = gaps.iter().step_by(step).copied().take(SPOT_CHECKS - 1).collect();
    sample.push(*gaps.last().expect("nonempty"));
    sample
}

/// Sieves to `bound` and annotates every gap.
pub fn gap_report(t: &TripleInvariants, bound: u64, ignore_below: u64, options: SieveOptions) -> Result<RepresentationReport> {
    let start = Instant::now();
    let sieve = represented_sieve(t, bound, options)?;
    let gaps: Vec<u64> = (0..=bound).filter(|&n| !sieve.get(n as usize)).collect();

    let spot_checked = spot_sample(&gaps);
    for &g in &spot_checked {
        assert_eq!(direct_representation_count(t, g), 0, "sieve reported {g} as a gap but it is represented");
    }

    let exceptional = ExceptionalSet::new(t);
    let obstruction = residue_obstruction(t);
    let all_four = t.all_divisible_by_four();
    let mut oracles: Vec<(u64, LocalRepresentationOracle)> = if all_four {
        bad_primes(t)
            .into_iter()
            .filter_map(|p| Prime::new(p).ok().map(|prime| (p, LocalRepresentationOracle::new(t, prime))))
            .collect()
    } else {
        Vec::new()
    };

    let mut annotations = Vec::with_capacity(gaps.len());
    for &n in &gaps {
        let witnesses = exceptional.witnesses(n);
        let obstructed = obstruction.as_ref().is_some_and(|o| o.excludes(n));
        let mut local_failure = None;
        if all_four && witnesses.is_empty() && !obstructed {
            for (p, oracle) in oracles.iter_mut() {
                if oracle.represents(n) == Ok(false) {
                    local_failure = Some(*p);
                    break;
                }
            }
        }
        let tension = n >= ignore_below && witnesses.is_empty() && !obstructed && local_failure.is_none();
        annotations.push(GapAnnotation {
            n,
            witnesses,
            obstructed,
            local_failure,
            tension,
        });
    }

    let tension_count = annotations.iter().filter(|a| a.tension).count() as u64;
    Ok(RepresentationReport {
        triple: t.clone(),
        bound,
        ignore_below,
        largest_gap: gaps.last().copied(),
        represented_count: sieve.count_ones(),
        tension_count,
        gaps,
        annotations,
        spot_checked,
        elapsed_micros: start.elapsed().as_micros() as u64,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsecutiveCheck {
    pub m: i64,
    pub holds: bool,
    /// Gaps in the window whose target is not `2 r^2`.
    pub offending: Vec<u64>,
    pub gaps_in_window: usize,
}

/// Whether every gap `n` of `(m, m+1, m+2)` with `window_start <= n <= bound`
/// has `l_n + v = 2 r^2`.
pub fn verify_consecutive_finiteness(m: i64, bound: u64, window_start: u64, options: SieveOptions) -> Result<ConsecutiveCheck> {
    if window_start >= bound {
        return domain("window_start must be below bound");
    }
    let overflow = || Error::Overflow("order out of range".into());
    let t = TripleInvariants::new(m, m.checked_add(1).ok_or_else(overflow)?, m.checked_add(2).ok_or_else(overflow)?)?;
    let sieve = represented_sieve(&t, bound, options)?;
    let window: Vec<u64> = (window_start..=bound).filter(|&n| !sieve.get(n as usize)).collect();
    let mut offending = Vec::new();
    for &n in &window {
        if exceptional_membership(&t, 2, n)?.is_none() {
            offending.push(n);
        }
    }
    Ok(ConsecutiveCheck {
        m,
        holds: offending.is_empty(),
        offending,
        gaps_in_window: window.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynum::triple_invariants;

    fn gaps(a: i64, b: i64, c: i64, bound: u64) -> Vec<u64> {
        let s = represented_sieve(&triple_invariants(a, b, c).unwrap(), bound, SieveOptions::default()).unwrap();
        (0..=bound).filter(|&n| !s.get(n as usize)).collect()
    }

    #[test]
    fn sieve_examples() {
        assert!(gaps(3, 4, 5, 1000).is_empty());
        assert!(gaps(3, 3, 3, 1000).is_empty());
        assert_eq!(
            gaps(4, 4, 4, 100),
            vec![7, 15, 23, 28, 31, 39, 47, 55, 60, 63, 71, 79, 87, 92, 95]
        );
    }

    #[test]
    fn sieve_matches_direct_count() {
        for (a, b, c) in [(3, 7, 11), (5, 5, 8), (6, 9, 12), (4, 10, 10)] {
            let t = triple_invariants(a, b, c).unwrap();
            let s = represented_sieve(&t, 700, SieveOptions::with_workers(2)).unwrap();
            for n in 0..=700u64 {
                assert_eq!(s.get(n as usize), direct_representation_count(&t, n) > 0, "{a},{b},{c} n={n}");
            }
        }
    }

    #[test]
    fn memory_cap_refusal() {
        let t = triple_invariants(3, 4, 5).unwrap();
        let opts = SieveOptions { workers: None, memory_cap: 1000 };
        assert!(matches!(represented_sieve(&t, 100_000, opts), Err(Error::ResourceLimit { .. })));
        assert!(represented_sieve(&t, 0, SieveOptions::default()).is_err());
    }

    #[test]
    fn cube_gaps_are_explained() {
        let t = triple_invariants(4, 4, 4).unwrap();
        let report = gap_report(&t, 1000, 0, SieveOptions::default()).unwrap();
        assert_eq!(report.tension_count, 0);
        for a in &report.annotations {
            let mut m = a.n;
            while m % 4 == 0 && m > 0 {
                m /= 4;
            }
            assert_eq!(m % 8, 7);
            assert!(a.obstructed || a.local_failure == Some(2), "{a:?}");
        }
    }

    #[test]
    fn consecutive_window() {
        let check = verify_consecutive_finiteness(3, 20_000, 1000, SieveOptions::default()).unwrap();
        assert!(check.holds, "{:?}", check.offending);
        assert!(verify_consecutive_finiteness(3, 10, 10, SieveOptions::default()).is_err());
    }
}
