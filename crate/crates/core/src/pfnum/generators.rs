//! Enumeration of the nonzero Witt classes of `GP_n` forms.
//!
//! `c * <<a_1..a_n>>` is `2^(n-r)` copies of the coset `c*U`, where `U` is
//! the subgroup generated by the `-a_i` and `r = rank U`. Subgroups are
//! walked as reduced echelon bases, cosets by representatives vanishing
//! on the pivot positions.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::{Arc, Mutex, OnceLock};

use smallvec::SmallVec;

use crate::qform::{DiagonalForm, PfisterSpec};
use crate::sqclass::{Base, FieldDesc, Level, SquareClass};
use crate::witt::{value_set, Coeffs, GroupRing, WittVec};

/// Echelon data of one generator: scalar, basis of `U`, fold.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenSpec {
    pub scalar: SquareClass,
    pub basis: SmallVec<[u32; 6]>,
    pub fold: usize,
}

impl GenSpec {
    pub fn to_spec(&self, field: &FieldDesc) -> PfisterSpec {
        let mut slots: Vec<SquareClass> =
            self.basis.iter().map(|&b| field.negate(SquareClass(b))).collect();
        slots.extend(std::iter::repeat_n(field.minus_one(), self.fold - self.basis.len()));
        PfisterSpec::new(self.scalar, slots)
    }
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub vec: WittVec,
    pub spec: GenSpec,
}

/// Parameters of a generator set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GenKey {
    pub field: FieldDesc,
    pub n: usize,
    /// Only `±` Pfister forms.
    pub unscaled: bool,
}

impl GenKey {
    fn space_dim(&self) -> usize {
        match self.field.base {
            Base::C => self.field.nvars,
            _ => self.field.nvars + 1,
        }
    }

    fn shift(&self) -> u32 {
        match self.field.base {
            Base::C => 1,
            _ => 0,
        }
    }

    fn ranks(&self, ring: &GroupRing) -> Vec<usize> {
        let n = self.n;
        let m = self.space_dim();
        let lowest = match ring.coeffs() {
            Coeffs::Mod2 => n,
            Coeffs::Mod4 => n.saturating_sub(1),
            Coeffs::Int => 0,
        };
        (lowest..=n).rev().filter(|&r| r <= m).collect()
    }

    /// Number of (subgroup, coset) pairs visited; an upper bound on the set size.
    pub fn estimate(&self) -> u128 {
        let ring = GroupRing::new(&self.field);
        let m = self.space_dim();
        self.ranks(&ring)
            .into_iter()
            .map(|r| {
                let cosets = if self.unscaled { 2 } else { 1u128 << (m - r) };
                gaussian_binomial(m, r) * cosets
            })
            .sum()
    }
}

/// Number of `r`-dimensional subspaces of `F_2^m`.
pub fn gaussian_binomial(m: usize, r: usize) -> u128 {
    if r > m {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..r {
        num *= (1u128 << (m - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

fn next_combination(x: u32) -> u32 {
    let c = x & x.wrapping_neg();
    let r = x + c;
    (((r ^ x) >> 2) / c) | r
}

/// Deposit the low bits of `value` into the set positions of `mask`.
fn deposit(mut value: u32, mut mask: u32) -> u32 {
    let mut out = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if value & 1 != 0 {
            out |= low;
        }
        value >>= 1;
        mask ^= low;
    }
    out
}

/// Visit every `r`-dimensional subspace of `F_2^m` as a reduced echelon
/// basis (pivot = lowest set bit) together with its pivot mask.
pub fn for_each_subspace<B>(
    m: usize,
    r: usize,
    f: &mut impl FnMut(&[u32], u32) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if r > m {
        return ControlFlow::Continue(());
    }
    if r == 0 {
        return f(&[], 0);
    }
    let full: u32 = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut piv: u32 = (1u32 << r) - 1;
    loop {
        let pivots: SmallVec<[u32; 8]> = (0..m as u32).filter(|&j| piv >> j & 1 != 0).collect();
        let frees: SmallVec<[u32; 8]> = pivots
            .iter()
            .map(|&p| {
                let above = full & !((2u32 << p) - 1);
                above & !piv
            })
            .collect();
        let total: u32 = frees.iter().map(|m| m.count_ones()).sum();
        let mut basis: SmallVec<[u32; 8]> = SmallVec::from_elem(0, r);
        for assign in 0..(1u64 << total) {
            let mut a = assign as u32;
            for i in 0..r {
                let k = frees[i].count_ones();
                basis[i] = (1 << pivots[i]) | deposit(a, frees[i]);
                a = if k >= 32 { 0 } else { a >> k };
            }
            f(&basis, piv)?;
        }
        if r == m {
            break;
        }
        let next = next_combination(piv);
        if next > full || next <= piv {
            break;
        }
        piv = next;
    }
    ControlFlow::Continue(())
}

fn reduce(mut v: u32, basis: &[u32]) -> u32 {
    for &b in basis {
        let p = b.trailing_zeros();
        if v >> p & 1 != 0 {
            v ^= b;
        }
    }
    v
}

fn span(basis: &[u32]) -> SmallVec<[u32; 64]> {
    let mut out: SmallVec<[u32; 64]> = SmallVec::with_capacity(1 << basis.len());
    out.push(0);
    for &b in basis {
        for i in 0..out.len() {
            let x = out[i] ^ b;
            out.push(x);
        }
    }
    out
}

/// Witt vector of `mult` copies of the coset `c*U`, or `None` if it is zero.
fn coset_vec(ring: &GroupRing, key: &GenKey, c: u32, elems: &[u32], mult: usize) -> Option<WittVec> {
    let mut v = ring.zero();
    let shift = key.shift();
    for &u in elems {
        let (i, neg) = ring.index(SquareClass((c ^ u) << shift));
        let (w, b) = (i / 64, 1u64 << (i % 64));
        match &mut v {
            WittVec::Mod2(p) => p[w] |= b,
            WittVec::Mod4(lo, hi) => {
                if mult == 1 {
                    lo[w] |= b;
                    if neg {
                        hi[w] |= b;
                    }
                } else {
                    hi[w] |= b;
                }
            }
            WittVec::Int(x) => x[i] = if neg { -(mult as i32) } else { mult as i32 },
        }
    }
    (!v.is_zero()).then_some(v)
}

/// Stream all generators in a fixed order, in chunks of `chunk` items.
pub fn for_each_chunk<B>(
    key: &GenKey,
    chunk: usize,
    mut consume: impl FnMut(&[Generator]) -> ControlFlow<B>,
) -> Option<B> {
    let ring = GroupRing::new(&key.field);
    let m = key.space_dim();
    let shift = key.shift();
    let n = key.n;
    let has_sign = matches!(key.field.base, Base::F3 | Base::R);
    let mut buf: Vec<Generator> = Vec::with_capacity(chunk.min(1 << 16));
    for r in key.ranks(&ring) {
        let mult = 1usize << (n - r);
        let flow = for_each_subspace(m, r, &mut |basis: &[u32], piv: u32| {
            // -1 ∈ U makes every such form hyperbolic.
            if has_sign && reduce(1, basis) == 0 {
                return ControlFlow::Continue(());
            }
            let elems = span(basis);
            let lifted = basis.iter().fold(0, |acc, &b| acc | b);
            let class_basis: SmallVec<[u32; 6]> = basis.iter().map(|&b| b << shift).collect();
            let free = if m == 32 { !piv } else { ((1u32 << m) - 1) & !piv };
            let reps: SmallVec<[u32; 2]> = if key.unscaled {
                let mut v: SmallVec<[u32; 2]> = SmallVec::new();
                v.push(0);
                if has_sign {
                    v.push(reduce(1, basis));
                }
                v
            } else {
                SmallVec::new()
            };
            let count = if key.unscaled { reps.len() as u64 } else { 1u64 << free.count_ones() };
            for s in 0..count {
                let c = if key.unscaled { reps[s as usize] } else { deposit(s as u32, free) };
                // At level 2, 2<x> = 2<-x>, so twice a coset only depends on
                // its image modulo -1: keep the lift avoiding the unit bit.
                if mult == 2 && key.field.level() == Level::Two && (c | lifted) & 1 != 0 {
                    continue;
                }
                let Some(vec) = coset_vec(&ring, key, c, &elems, mult) else { continue };
                buf.push(Generator {
                    vec,
                    spec: GenSpec {
                        // In unscaled mode a nonzero representative lies in -U.
                        scalar: SquareClass(if key.unscaled && c != 0 { 1 } else { c << shift }),
                        basis: class_basis.clone(),
                        fold: n,
                    },
                });
                if buf.len() >= chunk {
                    consume(&buf)?;
                    buf.clear();
                }
            }
            ControlFlow::Continue(())
        });
        if let ControlFlow::Break(b) = flow {
            return Some(b);
        }
    }
    if !buf.is_empty() {
        if let ControlFlow::Break(b) = consume(&buf) {
            return Some(b);
        }
    }
    None
}

pub fn enumerate(key: &GenKey) -> Vec<Generator> {
    let mut all = Vec::new();
    for_each_chunk::<()>(key, 1 << 16, |c| {
        all.extend_from_slice(c);
        ControlFlow::Continue(())
    });
    all
}

/// Largest generator set kept in memory.
pub const MATERIALIZE_LIMIT: u128 = 600_000;

type Cache = Mutex<HashMap<GenKey, Arc<Vec<Generator>>>>;

/// Cached generator list, or `None` when it is too large to hold.
pub fn materialized(key: &GenKey) -> Option<Arc<Vec<Generator>>> {
    if key.estimate() > MATERIALIZE_LIMIT {
        return None;
    }
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().unwrap().get(key) {
        return Some(g.clone());
    }
    let g = Arc::new(enumerate(key));
    cache.lock().unwrap().insert(*key, g.clone());
    Some(g)
}

/// All nonzero `GP_n` Witt classes with a witness, as forms.
#[allow(non_snake_case)]
pub fn enumerate_GPn_classes(field: &FieldDesc, n: usize) -> Vec<(DiagonalForm, PfisterSpec)> {
    let key = GenKey { field: *field, n, unscaled: false };
    let ring = GroupRing::new(field);
    enumerate(&key)
        .into_iter()
        .map(|g| (ring.to_form(&g.vec), g.spec.to_spec(field)))
        .collect()
}

/// Echelon basis of the span of `elems` (pivot = lowest bit).
fn echelon(elems: &[u32]) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for &x in elems {
        let mut v = x;
        for &b in &basis {
            if v >> b.trailing_zeros() & 1 != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            let p = v.trailing_zeros();
            for b in basis.iter_mut() {
                if *b >> p & 1 != 0 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort_by_key(|b| b.trailing_zeros());
    basis
}

fn try_coset(field: &FieldDesc, n: usize, set: &[SquareClass], mult: usize) -> Option<PfisterSpec> {
    let c = set[0];
    let u: Vec<u32> = set.iter().map(|&x| (x * c).0).collect();
    let basis = echelon(&u);
    let r = basis.len();
    if 1usize << r != set.len() || r > n || mult != 1 << (n - r) {
        return None;
    }
    let spec = GenSpec { scalar: c, basis: basis.into_iter().collect(), fold: n };
    Some(spec.to_spec(field))
}

/// A witness `c<<a_1..a_n>>` for an anisotropic form of dimension `2^n`,
/// if the form is in `GP_n`.
pub fn recognize_gp(form: &DiagonalForm, n: usize) -> Option<PfisterSpec> {
    let field = form.field();
    if form.dim() != 1 << n {
        return None;
    }
    let mults = form.multiplicities();
    let mult = *mults.values().next()?;
    if mults.values().any(|&m| m != mult) {
        return None;
    }
    let classes: Vec<SquareClass> = mults.keys().copied().collect();
    let check = |set: &[SquareClass]| {
        let spec = try_coset(field, n, set, mult)?;
        crate::witt::group_ring_equal(&spec.expand(field), form).then_some(spec)
    };
    if mult == 2 && field.level() == Level::Two {
        // Pairs <x,x> may also be read as <-x,-x>.
        let k = classes.len();
        if k > 20 {
            return None;
        }
        for signs in 0..(1u32 << (k - 1)) {
            let set: Vec<SquareClass> = classes
                .iter()
                .enumerate()
                .map(|(i, &x)| if i > 0 && signs >> (i - 1) & 1 != 0 { field.negate(x) } else { x })
                .collect();
            if let Some(s) = check(&set) {
                return Some(s);
            }
        }
        return None;
    }
    check(&classes)
}

/// `±<<...>>` witness if the class is plus or minus a Pfister form.
pub fn recognize_unscaled(form: &DiagonalForm, n: usize) -> Option<PfisterSpec> {
    let spec = recognize_gp(form, n)?;
    let field = form.field();
    let pi = PfisterSpec::unscaled(spec.slots.clone()).expand(field);
    let d = value_set(&pi);
    if d.contains(&spec.scalar) {
        Some(PfisterSpec::unscaled(spec.slots))
    } else if d.contains(&field.negate(spec.scalar)) {
        Some(PfisterSpec::new(field.minus_one(), spec.slots))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::{anisotropic_part, to_group_ring};
    use std::collections::HashSet;

    #[test]
    fn subspace_counts() {
        for m in 0..=6 {
            for r in 0..=m {
                let mut n = 0u128;
                let mut seen = HashSet::new();
                let _ = for_each_subspace::<()>(m, r, &mut |b, _| {
                    n += 1;
                    let mut s: Vec<u32> = span(b).to_vec();
                    s.sort();
                    assert!(seen.insert(s));
                    ControlFlow::Continue(())
                });
                assert_eq!(n, gaussian_binomial(m, r), "m={m} r={r}");
            }
        }
    }

    /// Brute force over all scalars and slot tuples.
    fn brute(field: &FieldDesc, n: usize) -> HashSet<WittVec> {
        let ring = GroupRing::new(field);
        let classes = field.classes();
        let mut out = HashSet::new();
        let mut idx = vec![0usize; n];
        loop {
            let slots: Vec<SquareClass> = idx.iter().map(|&i| classes[i]).collect();
            for &c in &classes {
                let v = ring.from_pfister(&PfisterSpec::new(c, slots.clone()));
                if !v.is_zero() {
                    out.insert(v);
                }
            }
            let mut k = 0;
            loop {
                if k == n {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < classes.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for base in [Base::F3, Base::R, Base::C, Base::SquareMinusOne] {
            for nv in 0..=2 {
                for n in 1..=3 {
                    let field = FieldDesc { base, nvars: nv };
                    let key = GenKey { field, n, unscaled: false };
                    let gens = enumerate(&key);
                    let set: HashSet<WittVec> = gens.iter().map(|g| g.vec.clone()).collect();
                    assert_eq!(set.len(), gens.len(), "duplicates {base:?} {nv} {n}");
                    assert_eq!(set, brute(&field, n), "{base:?} {nv} {n}");
                    let ring = GroupRing::new(&field);
                    for g in &gens {
                        assert_eq!(ring.from_pfister(&g.spec.to_spec(&field)), g.vec);
                    }
                }
            }
        }
    }

    #[test]
    fn small_examples() {
        let f3 = FieldDesc::f3(0);
        let g = enumerate_GPn_classes(&f3, 1);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].0.entries(), &[SquareClass::ONE, SquareClass::ONE]);
        let c1 = FieldDesc::complex(1);
        let g = enumerate_GPn_classes(&c1, 1);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].0.entries(), &[SquareClass::ONE, SquareClass(2)]);
    }

    #[test]
    fn unscaled_subset() {
        let field = FieldDesc::f3(2);
        let ring = GroupRing::new(&field);
        let key = GenKey { field, n: 2, unscaled: true };
        for g in enumerate(&key) {
            let spec = g.spec.to_spec(&field);
            assert!(spec.scalar == SquareClass::ONE || spec.scalar == SquareClass(1));
            assert_eq!(ring.from_pfister(&spec), g.vec);
        }
    }

    #[test]
    fn recognition() {
        for base in [Base::F3, Base::R, Base::C, Base::SquareMinusOne] {
            let field = FieldDesc { base, nvars: 2 };
            for n in 1..=3 {
                let key = GenKey { field, n, unscaled: false };
                let ring = GroupRing::new(&field);
                for g in enumerate(&key) {
                    let form = ring.to_form(&g.vec);
                    let spec = recognize_gp(&form, n).expect("generator is recognized");
                    assert_eq!(to_group_ring(&spec.expand(&field)).coeffs, g.vec);
                }
            }
            let not = anisotropic_part(&crate::syntax::parse_form("<1,t1,t2,1>", &field).unwrap());
            if not.dim() == 4 {
                assert!(recognize_gp(&not, 2).is_none());
            }
        }
    }
}
