use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cosets, descent_target_inv, witness_box, EIdeal};
use crate::error::{Error, Result};
use crate::ideals::{ClassGroup, HnfTriple, IntegralIdeal};
use crate::quadratic_field::{parse_elem, AlgInt, FieldElem, QuadraticField};

const FORMAT: &str = "euclid-level-assignment";
const VERSION: u32 = 1;

/// Search horizon: `Nm(I^{-1}) <= norm_bound`, witnesses of coordinate
/// height `<= height`, at most `depth` levels above zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub norm_bound: u64,
    pub height: u64,
    pub depth: u32,
}

/// Which ideals take part: inverses of primes (the B-sets) or all of `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchScope {
    PrimeInverses,
    AllE,
}

/// A descent certificate for one nonzero coset `x + C` of `IC/C`:
/// `y ∈ C` with `(x + y)^{-1}·I·C = target^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub coset: FieldElem,
    pub y: AlgInt,
    pub target: IntegralIdeal,
}

/// The computed fragment of the level sets. Ideals are keyed by their
/// integral inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelAssignment {
    d: i64,
    c: IntegralIdeal,
    bounds: SearchBounds,
    scope: SearchScope,
    levels: BTreeMap<IntegralIdeal, u32>,
    witnesses: BTreeMap<IntegralIdeal, Vec<Witness>>,
    unassigned: Vec<IntegralIdeal>,
}

impl LevelAssignment {
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn c(&self) -> &IntegralIdeal {
        &self.c
    }

    pub fn bounds(&self) -> SearchBounds {
        self.bounds
    }

    pub fn scope(&self) -> SearchScope {
        self.scope
    }

    pub fn level(&self, i: &EIdeal) -> Option<u32> {
        self.levels.get(i.inv()).copied()
    }

    pub fn levels(&self) -> impl Iterator<Item = (EIdeal, u32)> + '_ {
        self.levels.iter().map(|(inv, l)| (EIdeal::from_inverse(inv.clone()), *l))
    }

    pub fn witnesses(&self, i: &EIdeal) -> &[Witness] {
        self.witnesses.get(i.inv()).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Candidates inside the horizon that received no level.
    pub fn unassigned(&self) -> impl Iterator<Item = EIdeal> + '_ {
        self.unassigned.iter().cloned().map(EIdeal::from_inverse)
    }

    pub fn is_complete(&self) -> bool {
        self.unassigned.is_empty()
    }

    pub fn max_level(&self) -> u32 {
        self.levels.values().copied().max().unwrap_or(0)
    }

    /// Overwrites a level; intended for tooling and mutation tests, the
    /// result is no longer guaranteed to verify.
    pub fn set_level(&mut self, i: &EIdeal, level: u32) {
        self.levels.insert(i.inv().clone(), level);
    }

    pub fn to_json(&self) -> String {
        let doc = Doc {
            format: FORMAT.into(),
            version: VERSION,
            d: self.d,
            c: triple(&self.c),
            bounds: self.bounds,
            scope: self.scope,
            levels: self.levels.iter().map(|(inv, l)| LevelEntry { ideal: triple(inv), level: *l }).collect(),
            witnesses: self
                .witnesses
                .iter()
                .flat_map(|(inv, ws)| {
                    ws.iter().map(move |w| WitnessEntry {
                        ideal: triple(inv),
                        coset: w.coset.to_spec(),
                        y: FieldElem::integral(w.y.clone()).to_spec(),
                        target: triple(&w.target),
                    })
                })
                .collect(),
            unassigned: self.unassigned.iter().map(triple).collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
        s.push('\n');
        s
    }

    /// Parses and structurally validates a document: every ideal must be a
    /// valid HNF in `Q(√d)` and every witness must belong to a listed ideal.
    /// Re-verifying the descent itself is [`verify_assignment`]'s job.
    pub fn from_json(s: &str) -> Result<LevelAssignment> {
        let doc: Doc = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        if doc.format != FORMAT || doc.version != VERSION {
            return Err(Error::Format(format!("unsupported document {} v{}", doc.format, doc.version)));
        }
        let k = QuadraticField::new(doc.d)?;
        let ideal = |s: &str| -> Result<IntegralIdeal> {
            let t: HnfTriple = s.parse()?;
            k.ideal_from_triple(&t)
        };
        let c = ideal(&doc.c)?;
        let mut levels = BTreeMap::new();
        for e in &doc.levels {
            if levels.insert(ideal(&e.ideal)?, e.level).is_some() {
                return Err(Error::Format(format!("duplicate ideal {}", e.ideal)));
            }
        }
        let mut witnesses: BTreeMap<IntegralIdeal, Vec<Witness>> = BTreeMap::new();
        for w in &doc.witnesses {
            let owner = ideal(&w.ideal)?;
            if !levels.contains_key(&owner) {
                return Err(Error::Format(format!("witness for unlisted ideal {}", w.ideal)));
            }
            let y = parse_elem(&w.y)?;
            if !y.is_integral() {
                return Err(Error::Format(format!("witness y = {} is not integral", w.y)));
            }
            witnesses.entry(owner).or_default().push(Witness {
                coset: parse_elem(&w.coset)?,
                y: y.num,
                target: ideal(&w.target)?,
            });
        }
        let unassigned = doc.unassigned.iter().map(|s| ideal(s)).collect::<Result<Vec<_>>>()?;
        Ok(LevelAssignment { d: doc.d, c, bounds: doc.bounds, scope: doc.scope, levels, witnesses, unassigned })
    }
}

fn triple(i: &IntegralIdeal) -> String {
    format!("{},{},{}", i.a(), i.b(), i.c())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    format: String,
    version: u32,
    d: i64,
    c: String,
    bounds: SearchBounds,
    scope: SearchScope,
    levels: Vec<LevelEntry>,
    witnesses: Vec<WitnessEntry>,
    unassigned: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelEntry {
    ideal: String,
    level: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessEntry {
    ideal: String,
    coset: String,
    y: String,
    target: String,
}

/// Bounded Motzkin construction. Level `i` goes to every candidate all of
/// whose nonzero cosets descend, with some `y` in the witness box, to an
/// ideal already at level `<= i - 1`. Missing levels are inconclusive.
pub fn motzkin_search(
    k: &QuadraticField,
    g: &ClassGroup,
    c: &IntegralIdeal,
    bounds: SearchBounds,
    scope: SearchScope,
) -> Result<LevelAssignment> {
    if !g.generates(g.ideal_class_integral(k, c)) {
        return Err(Error::Hypothesis(format!("[{c}] does not generate the class group")));
    }
    let mut candidates: Vec<IntegralIdeal> = match scope {
        SearchScope::AllE => k.ideals_up_to(bounds.norm_bound).into_iter().filter(|i| !i.is_unit()).collect(),
        SearchScope::PrimeInverses => k.primes_up_to(bounds.norm_bound).into_iter().map(|p| p.ideal().clone()).collect(),
    };
    candidates.sort();
    let ys = witness_box(c, bounds.height);
    let norm_c = c.norm();

    let mut levels = BTreeMap::new();
    levels.insert(IntegralIdeal::unit(), 0u32);
    let mut witnesses = BTreeMap::new();

    for level in 1..=bounds.depth {
        if candidates.is_empty() {
            break;
        }
        let prev = &levels;
        let norms: BTreeSet<BigInt> = prev.keys().map(|i| i.norm()).collect();
        let found: Vec<Option<Vec<Witness>>> = candidates
            .par_iter()
            .map(|inv| descend_all(k, inv, c, &norm_c, &ys, prev, &norms, bounds.norm_bound))
            .collect();
        let mut remaining = Vec::new();
        let mut fresh = Vec::new();
        for (inv, w) in candidates.into_iter().zip(found) {
            match w {
                Some(ws) => fresh.push((inv, ws)),
                None => remaining.push(inv),
            }
        }
        candidates = remaining;
        if fresh.is_empty() {
            break;
        }
        for (inv, ws) in fresh {
            levels.insert(inv.clone(), level);
            witnesses.insert(inv, ws);
        }
    }

    Ok(LevelAssignment { d: k.d(), c: c.clone(), bounds, scope, levels, witnesses, unassigned: candidates })
}

#[allow(clippy::too_many_arguments)]
fn descend_all(
    k: &QuadraticField,
    inv: &IntegralIdeal,
    c: &IntegralIdeal,
    norm_c: &BigInt,
    ys: &[AlgInt],
    prev: &BTreeMap<IntegralIdeal, u32>,
    norms: &BTreeSet<BigInt>,
    bound: u64,
) -> Option<Vec<Witness>> {
    let i = EIdeal::from_inverse(inv.clone());
    let norm_inv = inv.norm();
    let bound = BigInt::from(bound).max(BigInt::from(1));
    let mut out = Vec::new();
    for x in cosets(k, &i, c).into_iter().filter(|r| !r.is_zero) {
        let den2 = &x.value.den * &x.value.den;
        let scale = &den2 * norm_c;
        let mut hit = None;
        for y in ys {
            let num = &x.value.num + &y.scale(&x.value.den);
            let nz = k.norm(&num).abs() * &norm_inv;
            let (q, r) = nz.div_rem(&scale);
            if !r.is_zero() || q > bound || !norms.contains(&q) {
                continue;
            }
            let z = FieldElem::new(num, x.value.den.clone());
            let Ok(target) = descent_target_inv(k, &z, inv, c) else { continue };
            if prev.contains_key(&target) {
                hit = Some(Witness { coset: x.value.clone(), y: y.clone(), target });
                break;
            }
        }
        out.push(hit?);
    }
    Some(out)
}

/// Rechecks every stored witness from scratch; `Err` names the first
/// ideal that fails.
pub fn verify_assignment_detailed(k: &QuadraticField, l: &LevelAssignment) -> std::result::Result<(), String> {
    if k.d() != l.d {
        return Err(format!("assignment is for d = {}, field has d = {}", l.d, k.d()));
    }
    let c = &l.c;
    if l.levels.get(&IntegralIdeal::unit()) != Some(&0) {
        return Err("(1) must have level 0".into());
    }
    for (inv, &level) in &l.levels {
        let i = EIdeal::from_inverse(inv.clone());
        if inv.is_unit() {
            continue;
        }
        if level == 0 {
            return Err(format!("{i}: only (1) may have level 0"));
        }
        let ws = l.witnesses.get(inv).map(Vec::as_slice).unwrap_or(&[]);
        let space = k.coset_space(&i, c);
        let mut covered = BTreeSet::new();
        for w in ws {
            if !c.contains(&w.y) {
                return Err(format!("{i}: witness y = {} is not in C", w.y));
            }
            if !space.contains(&w.coset) {
                return Err(format!("{i}: coset {} is not in IC", w.coset));
            }
            let rep = space.reduce(&w.coset);
            if rep.is_zero {
                return Err(format!("{i}: witness for the zero coset"));
            }
            let z = w.coset.add(&FieldElem::integral(w.y.clone()));
            if z.is_zero() {
                return Err(format!("{i}: x + y = 0"));
            }
            let target = descent_target_inv(k, &z, inv, c).map_err(|e| format!("{i}: {e}"))?;
            if target != w.target {
                return Err(format!("{i}: stored target {} but descent gives {}", w.target, target));
            }
            match l.levels.get(&target) {
                Some(&t) if t < level => {}
                Some(&t) => return Err(format!("{i}: target {target}^-1 has level {t}, not below {level}")),
                None => return Err(format!("{i}: target {target}^-1 is unassigned")),
            }
            covered.insert(rep);
        }
        let nonzero = space.index() - 1;
        if BigInt::from(covered.len()) != nonzero {
            return Err(format!("{i}: {} of {} nonzero cosets carry witnesses", covered.len(), nonzero));
        }
    }
    Ok(())
}

pub fn verify_assignment(k: &QuadraticField, l: &LevelAssignment) -> bool {
    verify_assignment_detailed(k, l).is_ok()
}
