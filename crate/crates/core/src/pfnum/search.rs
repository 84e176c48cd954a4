//! Exact Pfister numbers: constructive upper bounds, then a depth-limited
//! search for anything shorter.
//!
//! Every node of the search lies in `I^n`, so by the Hauptsatz a node is a
//! single generator iff its anisotropic part has dimension `2^n`.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;

use super::bounds::applicable_bound;
use super::certificate::PfisterCertificate;
use super::classify::find_gp2_subform;
use super::generators::{
    for_each_chunk, materialized, recognize_gp, recognize_unscaled, GenKey, GenSpec, Generator,
};
use crate::error::{Error, Result};
use crate::ideals::{in_In, rigid_decompose};
use crate::qform::{DiagonalForm, PfisterSpec};
use crate::sqclass::{Base, FieldDesc, SquareClass};
use crate::witt::{anisotropic_part, group_ring_equal, value_set, GroupRing, WittVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Restrict to `±` Pfister forms (the `P_n` variant).
    pub unscaled: bool,
    /// Defaults to the bound for the form's dimension.
    pub depth_cap: Option<usize>,
    /// Maximum number of search nodes per depth.
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { unscaled: false, depth_cap: None, node_budget: 4_000_000_000 }
    }
}

const CHUNK: usize = 1 << 15;

pub(crate) struct Engine {
    key: GenKey,
    ring: GroupRing,
    gens: Option<Arc<Vec<Generator>>>,
    unscaled_set: Option<HashMap<WittVec, GenSpec>>,
    budget: u64,
    nodes: AtomicU64,
    aborted: AtomicBool,
}

impl Engine {
    pub(crate) fn new(field: &FieldDesc, n: usize, unscaled: bool, budget: u64) -> Engine {
        let key = GenKey { field: *field, n, unscaled };
        let gens = materialized(&key);
        let unscaled_set = if unscaled {
            gens.as_ref().map(|g| g.iter().map(|x| (x.vec.clone(), x.spec.clone())).collect())
        } else {
            None
        };
        Engine {
            key,
            ring: GroupRing::new(field),
            gens,
            unscaled_set,
            budget,
            nodes: AtomicU64::new(0),
            aborted: AtomicBool::new(false),
        }
    }

    fn n(&self) -> usize {
        self.key.n
    }

    fn field(&self) -> &FieldDesc {
        &self.key.field
    }

    fn unit(&self) -> usize {
        1 << self.n()
    }

    pub(crate) fn ring(&self) -> &GroupRing {
        &self.ring
    }

    /// Single-generator test for a node known to lie in `I^n`.
    fn single(&self, v: &WittVec) -> Option<PfisterSpec> {
        if v.aniso_dim() != self.unit() {
            return None;
        }
        if self.key.unscaled {
            if let Some(set) = &self.unscaled_set {
                return set.get(v).map(|s| s.to_spec(self.field()));
            }
            return recognize_unscaled(&self.ring.to_form(v), self.n());
        }
        let spec = recognize_gp(&self.ring.to_form(v), self.n());
        debug_assert!(spec.is_some(), "Hauptsatz: 2^n-dimensional I^n form is in GP_n");
        spec
    }

    fn tick(&self) -> bool {
        let c = self.nodes.fetch_add(1, Ordering::Relaxed);
        if c >= self.budget {
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    fn step(&self, t: &WittVec, g: &Generator, k: usize, start: usize) -> Option<Vec<PfisterSpec>> {
        if !self.tick() {
            return None;
        }
        let d = t.diff_dim(&g.vec);
        if d > (k - 1) * self.unit() || d == 0 {
            return None;
        }
        if k == 2 && !self.key.unscaled && d != self.unit() {
            return None;
        }
        let rest = t.sub(&g.vec);
        let mut tail = self.exists_serial(&rest, k - 1, start)?;
        tail.insert(0, g.spec.to_spec(self.field()));
        Some(tail)
    }

    fn exists_serial(&self, t: &WittVec, k: usize, start: usize) -> Option<Vec<PfisterSpec>> {
        match k {
            0 => t.is_zero().then(Vec::new),
            1 => self.single(t).map(|s| vec![s]),
            _ => {
                if t.aniso_dim() > k * self.unit() {
                    return None;
                }
                match &self.gens {
                    Some(g) => g[start..]
                        .iter()
                        .enumerate()
                        .find_map(|(i, x)| self.step(t, x, k, start + i)),
                    None => for_each_chunk(&self.key, CHUNK, |chunk| {
                        match chunk.iter().find_map(|x| self.step(t, x, k, 0)) {
                            Some(r) => ControlFlow::Break(r),
                            None => ControlFlow::Continue(()),
                        }
                    }),
                }
            }
        }
    }

    /// Some certificate with exactly `k` terms, if one exists.
    pub(crate) fn exists(&self, t: &WittVec, k: usize) -> Result<Option<Vec<PfisterSpec>>> {
        self.nodes.store(0, Ordering::Relaxed);
        self.aborted.store(false, Ordering::Relaxed);
        let found = match k {
            0 | 1 => self.exists_serial(t, k, 0),
            _ if t.aniso_dim() > k * self.unit() => None,
            _ => match &self.gens {
                Some(g) => g
                    .par_iter()
                    .enumerate()
                    .find_map_first(|(i, x)| self.step(t, x, k, i)),
                None => for_each_chunk(&self.key, CHUNK, |chunk| {
                    match chunk.par_iter().find_map_first(|x| self.step(t, x, k, 0)) {
                        Some(r) => ControlFlow::Break(r),
                        None if self.aborted.load(Ordering::Relaxed) => ControlFlow::Break(Vec::new()),
                        None => ControlFlow::Continue(()),
                    }
                }),
            },
        };
        if self.aborted.load(Ordering::Relaxed) {
            return Err(Error::SearchBudgetExceeded { budget: self.budget, depth: k });
        }
        Ok(found)
    }

    /// Every split `t = g + h` into two generators, `g` in enumeration order.
    pub(crate) fn all_pairs(&self, t: &WittVec, limit: usize) -> Vec<(PfisterSpec, PfisterSpec)> {
        let field = *self.field();
        let mut out = Vec::new();
        let mut visit = |chunk: &[Generator]| {
            let found: Vec<_> = chunk
                .par_iter()
                .filter_map(|g| {
                    if t.diff_dim(&g.vec) != self.unit() {
                        return None;
                    }
                    let h = self.single(&t.sub(&g.vec))?;
                    Some((g.spec.to_spec(&field), h))
                })
                .collect();
            out.extend(found);
            if out.len() >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        };
        match &self.gens {
            Some(g) => {
                for c in g.chunks(CHUNK) {
                    if visit(c).is_break() {
                        break;
                    }
                }
            }
            None => {
                for_each_chunk(&self.key, CHUNK, visit);
            }
        }
        out.truncate(limit);
        out
    }
}

fn pair_certificate(phi: &DiagonalForm) -> Vec<PfisterSpec> {
    let f = phi.field();
    phi.entries()
        .chunks(2)
        .map(|p| PfisterSpec::new(p[0], vec![f.negate(p[0] * p[1])]))
        .collect()
}

/// `<a,b,c,abc> = a<<-ab,-ac>>`, leaving `<-abc> ⊥ rest`.
fn lam_chain(phi: &DiagonalForm) -> Vec<PfisterSpec> {
    let f = *phi.field();
    let mut cur = phi.clone();
    let mut out = Vec::new();
    while cur.dim() > 4 {
        let e = cur.entries();
        let (a, b, c) = (e[0], e[1], e[2]);
        out.push(PfisterSpec::new(a, vec![f.negate(a * b), f.negate(a * c)]));
        let mut rest = e[3..].to_vec();
        rest.push(f.negate(a * b * c));
        cur = anisotropic_part(&DiagonalForm::from_unchecked(f, rest));
    }
    if cur.dim() == 4 {
        let e = cur.entries();
        out.push(PfisterSpec::new(e[0], vec![f.negate(e[0] * e[1]), f.negate(e[0] * e[2])]));
    }
    out
}

fn unit_base_certificate(psi: &DiagonalForm, n: usize) -> Result<Vec<PfisterSpec>> {
    let f = *psi.field();
    let d = psi.dim();
    let fail = || Error::InternalContradiction(format!("unit form {psi} is not in I^{n}"));
    match f.base {
        Base::R => {
            if !d.is_multiple_of(1 << n) || psi.entries().iter().any(|&a| a != psi.entries()[0]) {
                return Err(fail());
            }
            let eps = psi.entries()[0];
            Ok(vec![PfisterSpec::new(eps, vec![f.minus_one(); n]); d >> n])
        }
        Base::F3 | Base::SquareMinusOne if n == 1 && d == 2 => {
            Ok(vec![PfisterSpec::new(psi.entries()[0], vec![f.negate(psi.entries()[0] * psi.entries()[1])])])
        }
        _ => Err(fail()),
    }
}

/// Certificate from the rigid recursion `phi = sigma + <<-t>> tau`.
fn rigid_certificate(phi: &DiagonalForm, n: usize, explore: bool) -> Result<Vec<PfisterSpec>> {
    let phi = anisotropic_part(phi);
    if phi.is_zero() {
        return Ok(Vec::new());
    }
    if n == 0 {
        return Ok(phi.entries().iter().map(|&a| PfisterSpec::new(a, vec![])).collect());
    }
    if phi.dim() == 1 << n {
        if let Some(s) = recognize_gp(&phi, n) {
            return Ok(vec![s]);
        }
    }
    let f = *phi.field();
    let e = phi.entries()[0];
    let psi = phi.scale(e);
    let mut choices: Vec<SquareClass> = psi.entries().iter().copied().filter(|a| !a.is_unit()).collect();
    choices.dedup();
    if choices.is_empty() {
        return Ok(unit_base_certificate(&psi, n)?.into_iter().map(|s| s.scaled(e)).collect());
    }
    if !explore {
        choices.truncate(1);
    }
    let mut best: Option<Vec<PfisterSpec>> = None;
    for a in choices {
        let split = rigid_decompose(&psi, a)?;
        let mut terms = rigid_certificate(&split.sigma, n, false)?;
        let neg_t = f.negate(split.t);
        for s in best_upper(&split.tau, n - 1)? {
            terms.push(s.with_slot(neg_t));
        }
        if best.as_ref().is_none_or(|b| terms.len() < b.len()) {
            best = Some(terms);
        }
    }
    Ok(best.unwrap().into_iter().map(|s| s.scaled(e)).collect())
}

/// Shortest certificate among the constructions that need no search.
fn best_upper(phi: &DiagonalForm, n: usize) -> Result<Vec<PfisterSpec>> {
    let phi = anisotropic_part(phi);
    let mut best = rigid_certificate(&phi, n, true)?;
    let alt = match n {
        1 => Some(pair_certificate(&phi)),
        2 => Some(lam_chain(&phi)),
        _ => None,
    };
    if let Some(a) = alt {
        if a.len() < best.len() {
            best = a;
        }
    }
    Ok(best)
}

/// For 16-dimensional `I^3` forms: split off `s<<a,b,-ws>>` along a `GP_2`
/// subform, leaving at most 14 dimensions.
fn gp2_subform_route(phi: &DiagonalForm, engine: &Engine) -> Result<Option<Vec<PfisterSpec>>> {
    let f = *phi.field();
    let Some((sigma, rest)) = find_gp2_subform(phi)? else { return Ok(None) };
    let Some(&w) = rest.entries().first() else { return Ok(None) };
    let s = sigma.scalar;
    let pi1 = sigma.with_slot(f.negate(w * s));
    let ring = engine.ring();
    let remainder = ring.from_form(phi).sub(&ring.from_pfister(&pi1));
    for k in 0..=2 {
        if let Some(mut terms) = engine.exists(&remainder, k)? {
            terms.insert(0, pi1);
            return Ok(Some(terms));
        }
    }
    Ok(None)
}

fn check_terms(phi: &DiagonalForm, terms: &[PfisterSpec], what: &str) -> Result<()> {
    let f = phi.field();
    let ring = GroupRing::new(f);
    let sum = terms.iter().fold(ring.zero(), |acc, t| acc.add(&ring.from_pfister(t)));
    if !group_ring_equal(&ring.to_form(&sum), phi) {
        return Err(Error::InternalContradiction(format!("{what} certificate does not sum to {phi}")));
    }
    Ok(())
}

/// Rewrite each `c<<x_1..x_n>>` as `±` Pfister forms, using at most two.
pub fn to_unscaled(field: &FieldDesc, terms: &[PfisterSpec]) -> Vec<PfisterSpec> {
    let mut out = Vec::new();
    for t in terms {
        let pi = PfisterSpec::unscaled(t.slots.clone()).expand(field);
        let d = value_set(&pi);
        let c = t.scalar;
        if d.contains(&c) {
            out.push(PfisterSpec::unscaled(t.slots.clone()));
        } else if d.contains(&field.negate(c)) {
            out.push(PfisterSpec::new(field.minus_one(), t.slots.clone()));
        } else {
            let (last, init) = t.slots.split_last().expect("n >= 1");
            let mut a = init.to_vec();
            a.push(field.negate(c));
            let mut b = init.to_vec();
            b.push(field.negate(c * *last));
            out.push(PfisterSpec::unscaled(a));
            out.push(PfisterSpec::new(field.minus_one(), b));
        }
    }
    out
}

/// Constructive certificate, verified; used as the starting upper bound.
pub fn upper_certificate(phi: &DiagonalForm, n: usize) -> Result<Vec<PfisterSpec>> {
    let phi = anisotropic_part(phi);
    let best = best_upper(&phi, n)?;
    check_terms(&phi, &best, "constructive")?;
    Ok(best)
}

/// Exact `GP_n` (or `P_n` when `opts.unscaled`) with a certificate.
pub fn pfister_number(
    phi: &DiagonalForm,
    n: usize,
    opts: &SearchOptions,
) -> Result<(usize, PfisterCertificate)> {
    let f = *phi.field();
    let an = anisotropic_part(phi);
    if n == 0 {
        let terms: Vec<PfisterSpec> = an.entries().iter().map(|&a| PfisterSpec::new(a, vec![])).collect();
        return Ok((terms.len(), PfisterCertificate::new(0, phi, terms)));
    }
    if !in_In(phi, n as u32) {
        return Err(Error::NotInIdeal(n as u32));
    }
    if an.is_zero() {
        return Ok((0, PfisterCertificate::new(n, phi, Vec::new())));
    }
    let bound = applicable_bound(n as u32, an.dim() as u64)? as usize;
    let cap = opts.depth_cap.unwrap_or(if opts.unscaled { 2 * bound } else { bound });
    let engine = Engine::new(&f, n, opts.unscaled, opts.node_budget);
    let mut upper = upper_certificate(&an, n)?;
    if n == 3 && an.dim() == 16 && upper.len() > 3 {
        let scaled = Engine::new(&f, n, false, opts.node_budget);
        if let Some(t) = gp2_subform_route(&an, &scaled)? {
            check_terms(&an, &t, "subform")?;
            if t.len() < upper.len() {
                upper = t;
            }
        }
    }
    if opts.unscaled {
        upper = to_unscaled(&f, &upper);
        check_terms(&an, &upper, "unscaled")?;
    }
    let target = engine.ring().from_form(&an);
    let last = upper.len().saturating_sub(1).min(cap);
    for k in 1..=last {
        if let Some(terms) = engine.exists(&target, k)? {
            let cert = PfisterCertificate::new(n, phi, terms);
            if !cert.verify() {
                return Err(Error::InternalContradiction("search certificate fails to verify".into()));
            }
            return Ok((k, cert));
        }
    }
    if upper.len() > cap {
        return Err(Error::DepthCapExceeded { cap });
    }
    let cert = PfisterCertificate::new(n, phi, upper);
    Ok((cert.len(), cert))
}

/// All ways to write `phi` as a sum of two `GP_n` forms (up to `limit`).
pub fn two_term_certificates(
    phi: &DiagonalForm,
    n: usize,
    limit: usize,
) -> Vec<(PfisterSpec, PfisterSpec)> {
    let engine = Engine::new(phi.field(), n, false, u64::MAX);
    let t = engine.ring().from_form(phi);
    engine.all_pairs(&t, limit)
}
