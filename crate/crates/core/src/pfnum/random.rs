//! Seeded samplers for anisotropic forms in `I^n`.
//!
//! A sample is the anisotropic part of a sum of random scaled Pfister forms
//! whose scalar and slots come from a random subgroup of the square classes;
//! small subgroups make cancellation, and so the middle dimensions, likely.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qform::{DiagonalForm, PfisterSpec};
use crate::sqclass::{FieldDesc, SquareClass};
use crate::witt::{anisotropic_part, GroupRing};

/// Whether some anisotropic form in `I^n` has dimension `d`.
pub fn dimension_possible(n: usize, d: usize) -> bool {
    let top = 1usize << (n + 1);
    d == 0 || d == 1 << n || d >= top || (1..=n).any(|i| d == top - (1 << i))
}

fn random_subgroup<R: Rng>(field: &FieldDesc, rng: &mut R, min_rank: usize) -> Vec<SquareClass> {
    let mut bits: Vec<u32> = (0..32).filter(|&b| field.class_mask() & (1 << b) != 0).collect();
    let total = bits.len();
    let rank = rng.gen_range(min_rank.min(total)..=total);
    // Random basis: a random invertible change of the coordinate basis,
    // truncated to `rank` vectors.
    bits.shuffle(rng);
    let mut basis: Vec<u32> = bits[..rank].iter().map(|&b| 1 << b).collect();
    for i in 0..rank {
        for &b in &bits[rank..] {
            if rng.gen_bool(0.5) {
                basis[i] ^= 1 << b;
            }
        }
    }
    (0u32..1 << rank)
        .map(|mask| {
            SquareClass(
                basis
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| mask & (1 << j) != 0)
                    .fold(0, |acc, (_, &v)| acc ^ v),
            )
        })
        .collect()
}

/// One random sum of `terms` scaled `n`-fold Pfister forms.
pub fn random_pfister_sum<R: Rng>(
    field: &FieldDesc,
    n: usize,
    terms: usize,
    rng: &mut R,
) -> (Vec<PfisterSpec>, DiagonalForm) {
    let group = random_subgroup(field, rng, n + 1);
    let ring = GroupRing::new(field);
    let specs: Vec<PfisterSpec> = (0..terms)
        .map(|_| {
            let scalar = *group.choose(rng).unwrap();
            let slots = (0..n).map(|_| *group.choose(rng).unwrap()).collect();
            PfisterSpec::new(scalar, slots)
        })
        .collect();
    let v = specs.iter().fold(ring.zero(), |acc, s| acc.add(&ring.from_pfister(s)));
    (specs, anisotropic_part(&ring.to_form(&v)))
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub form: DiagonalForm,
    pub construction: Vec<PfisterSpec>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleStats {
    pub seed: u64,
    pub requested_dim: usize,
    pub window: (usize, usize),
    pub accepted: usize,
    pub rejected: u64,
}

/// Draw `count` forms of dimension in the window for `d`; the window is
/// `[d-2, d]` when no anisotropic `I^n` form has dimension `d`.
pub fn sample_bucket(
    field: &FieldDesc,
    n: usize,
    d: usize,
    count: usize,
    seed: u64,
    max_attempts: u64,
) -> Result<(Vec<Sample>, SampleStats)> {
    if !d.is_multiple_of(2) {
        return Err(Error::OddDimension(d));
    }
    let lo = if dimension_possible(n, d) { d } else { d.saturating_sub(2) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = 1usize << n;
    let base_terms = d.div_ceil(unit).max(1);
    let mut out = Vec::with_capacity(count);
    let mut rejected = 0u64;
    while out.len() < count {
        if rejected >= max_attempts {
            return Err(Error::Precondition(format!(
                "sampler hit {max_attempts} rejections for dimension {d} over {field}"
            )));
        }
        let terms = base_terms + rng.gen_range(0..2);
        let (construction, form) = random_pfister_sum(field, n, terms, &mut rng);
        if form.dim() >= lo && form.dim() <= d && !form.is_zero() {
            out.push(Sample { form, construction });
        } else {
            rejected += 1;
        }
    }
    let stats = SampleStats { seed, requested_dim: d, window: (lo, d), accepted: out.len(), rejected };
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::in_In;

    #[test]
    fn possible_dimensions() {
        let dims: Vec<usize> = (0..=18).filter(|&d| dimension_possible(3, d)).collect();
        assert_eq!(dims, vec![0, 8, 12, 14, 16, 17, 18]);
        let dims: Vec<usize> = (0..=8).filter(|&d| dimension_possible(2, d)).collect();
        assert_eq!(dims, vec![0, 4, 6, 8]);
    }

    #[test]
    fn samples_are_reproducible_and_valid() {
        let k = FieldDesc::f3(4);
        let (a, sa) = sample_bucket(&k, 3, 12, 5, 7, 100_000).unwrap();
        let (b, _) = sample_bucket(&k, 3, 12, 5, 7, 100_000).unwrap();
        assert_eq!(sa.accepted, 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.form, y.form);
            assert_eq!(x.form.dim(), 12);
            assert!(in_In(&x.form, 3));
        }
        let (w, s) = sample_bucket(&k, 3, 10, 3, 1, 100_000).unwrap();
        assert_eq!(s.window, (8, 10));
        assert!(w.iter().all(|x| x.form.dim() == 8));
    }
}
