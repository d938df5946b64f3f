//! Finite uncertainty spaces, uncertain variables and sequences.
//!
//! A space is a finite ground set of named atoms together with a
//! non-additive measure stored extensionally over all subsets.  The
//! measure axioms (normality, monotonicity, duality, finite
//! sub-additivity, full-measure almost-sure set) are checked by
//! [`UncertaintySpace::validate`], which reports violations instead of
//! repairing them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Hard ceiling on the number of atoms; the measure table has `2^m` entries.
pub const MAX_ATOMS: usize = 16;

/// Absolute slack used by axiom checks to absorb float rounding.
pub const DEFAULT_AXIOM_SLACK: f64 = 1e-9;

/// Subset of atoms, stored as a bitmask over atom indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Event {
    bits: u16,
}

impl Event {
    pub const EMPTY: Event = Event { bits: 0 };

    /// The full ground set of a space with `atom_count` atoms.
    pub fn full(atom_count: usize) -> Event {
        debug_assert!((1..=MAX_ATOMS).contains(&atom_count));
        Event {
            bits: if atom_count == 16 {
                u16::MAX
            } else {
                (1u16 << atom_count) - 1
            },
        }
    }

    pub fn singleton(index: usize) -> Event {
        debug_assert!(index < MAX_ATOMS);
        Event {
            bits: 1u16 << index,
        }
    }

    pub fn from_indices(indices: &[usize], atom_count: usize) -> Result<Event> {
        let mut bits = 0u16;
        for &i in indices {
            if i >= atom_count {
                return Err(Error::AtomIndexOutOfRange {
                    index: i,
                    atoms: atom_count,
                });
            }
            bits |= 1u16 << i;
        }
        Ok(Event { bits })
    }

    pub fn union(self, other: Event) -> Event {
        Event {
            bits: self.bits | other.bits,
        }
    }

    pub fn intersect(self, other: Event) -> Event {
        Event {
            bits: self.bits & other.bits,
        }
    }

    pub fn complement(self, atom_count: usize) -> Event {
        Event {
            bits: Event::full(atom_count).bits & !self.bits,
        }
    }

    pub fn insert(self, index: usize) -> Event {
        Event {
            bits: self.bits | (1u16 << index),
        }
    }

    pub fn contains(self, index: usize) -> bool {
        self.bits & (1u16 << index) != 0
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_subset_of(self, other: Event) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..MAX_ATOMS).filter(move |&i| self.contains(i))
    }

    fn mask(self) -> usize {
        self.bits as usize
    }

    fn from_mask(mask: usize) -> Event {
        Event { bits: mask as u16 }
    }
}

/// Measure axiom identifiers, in report order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axiom {
    Normality,
    Monotonicity,
    Duality,
    SubAdditivity,
    AlmostSure,
}

impl Axiom {
    pub fn label(self) -> &'static str {
        match self {
            Axiom::Normality => "normality",
            Axiom::Monotonicity => "monotonicity",
            Axiom::Duality => "duality",
            Axiom::SubAdditivity => "sub-additivity",
            Axiom::AlmostSure => "almost-sure set",
        }
    }
}

/// First witness of a failed axiom check.
#[derive(Clone, Debug)]
pub struct AxiomWitness<T> {
    pub first: Event,
    pub second: Option<Event>,
    pub values: Vec<T>,
    pub detail: String,
}

/// Outcome of one axiom check.
#[derive(Clone, Debug)]
pub struct AxiomCheck<T> {
    pub axiom: Axiom,
    pub passed: bool,
    pub worst_deviation: T,
    pub witness: Option<AxiomWitness<T>>,
}

/// Axiom-by-axiom validation report; never repairs the measure.
#[derive(Clone, Debug)]
pub struct ValidationReport<T> {
    pub checks: Vec<AxiomCheck<T>>,
    pub slack: T,
}

impl<T: Real> ValidationReport<T> {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck<T> {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("all axioms present")
    }

    /// One line per axiom, violations first-witnessed.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if c.passed {
                out.push_str(&format!("{}: pass\n", c.axiom.label()));
            } else {
                let detail = c
                    .witness
                    .as_ref()
                    .map(|w| w.detail.clone())
                    .unwrap_or_default();
                out.push_str(&format!("{}: FAIL ({detail})\n", c.axiom.label()));
            }
        }
        out
    }
}

/// Finite uncertainty space with an extensional measure table.
#[derive(Clone, Debug)]
pub struct UncertaintySpace<T> {
    atoms: Vec<String>,
    table: Vec<T>,
    almost_sure: Event,
}

impl<T: Real> UncertaintySpace<T> {
    fn check_atoms(atoms: &[String]) -> Result<()> {
        if atoms.is_empty() || atoms.len() > MAX_ATOMS {
            return Err(Error::AtomCount(atoms.len()));
        }
        for (i, name) in atoms.iter().enumerate() {
            if atoms[..i].contains(name) {
                return Err(Error::DuplicateAtom(name.clone()));
            }
        }
        Ok(())
    }

    fn check_weights(weights: &[T], atoms: usize) -> Result<()> {
        if weights.len() != atoms {
            return Err(Error::AtomMismatch {
                expected: atoms,
                got: weights.len(),
            });
        }
        for (i, w) in weights.iter().enumerate() {
            if !w.is_finite() || *w < T::zero() {
                return Err(Error::NonFinite {
                    index: i,
                    value: w.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    /// Additive (probability-style) measure from non-negative atom weights.
    ///
    /// Weights are normalized to total one.  Each subset is summed
    /// directly and its complement stored as `1 - value`, so duality
    /// holds bit-exactly by construction.
    pub fn additive(atoms: Vec<String>, weights: &[T]) -> Result<Self> {
        Self::check_atoms(&atoms)?;
        Self::check_weights(weights, atoms.len())?;
        let total: T = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
        if total <= T::zero() {
            return Err(Error::InvalidParameter(
                "additive weights must have a positive total".into(),
            ));
        }
        let normalized: Vec<T> = weights.iter().map(|w| *w / total).collect();
        let m = atoms.len();
        let size = 1usize << m;
        let full = Event::full(m).mask();
        let mut table = vec![T::zero(); size];
        for mask in 0..size {
            let comp = full & !mask;
            if mask <= comp {
                let mut sum = T::zero();
                for (i, w) in normalized.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        sum = sum + *w;
                    }
                }
                table[mask] = sum;
            } else {
                table[mask] = T::one() - table[comp];
            }
        }
        Ok(UncertaintySpace {
            almost_sure: Event::full(m),
            atoms,
            table,
        })
    }

    /// Dual-completed possibility measure from non-negative atom weights.
    ///
    /// Weights are normalized to maximum one.  A subset whose weight
    /// maximum stays below one half keeps that maximum; a subset whose
    /// complement does takes the dual value; every other subset gets
    /// one half.  The result is monotone, self-dual and sub-additive.
    pub fn possibility(atoms: Vec<String>, weights: &[T]) -> Result<Self> {
        Self::check_atoms(&atoms)?;
        Self::check_weights(weights, atoms.len())?;
        let top = weights.iter().cloned().fold(T::zero(), T::max);
        if top <= T::zero() {
            return Err(Error::InvalidParameter(
                "possibility weights must have a positive maximum".into(),
            ));
        }
        let normalized: Vec<T> = weights.iter().map(|w| *w / top).collect();
        let m = atoms.len();
        let size = 1usize << m;
        let half = real::<T>(0.5);
        let pos = |mask: usize| -> T {
            let mut p = T::zero();
            for (i, w) in normalized.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    p = p.max(*w);
                }
            }
            p
        };
        let full = Event::full(m).mask();
        let mut table = vec![T::zero(); size];
        for (mask, slot) in table.iter_mut().enumerate() {
            let p = pos(mask);
            let pc = pos(full & !mask);
            *slot = if p < half {
                p
            } else if pc < half {
                T::one() - pc
            } else {
                half
            };
        }
        Ok(UncertaintySpace {
            almost_sure: Event::full(m),
            atoms,
            table,
        })
    }

    /// Raw measure table over all `2^m` subsets, one entry per bitmask.
    ///
    /// No axiom is enforced here; run [`UncertaintySpace::validate`] to
    /// find out what the table satisfies.
    pub fn explicit(atoms: Vec<String>, table: Vec<T>) -> Result<Self> {
        Self::check_atoms(&atoms)?;
        let expected = 1usize << atoms.len();
        if table.len() != expected {
            return Err(Error::MeasureTableSize {
                atoms: atoms.len(),
                expected,
                got: table.len(),
            });
        }
        for (i, v) in table.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    index: i,
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(UncertaintySpace {
            almost_sure: Event::full(atoms.len()),
            atoms,
            table,
        })
    }

    /// Replaces the almost-sure set (defaults to the full ground set).
    pub fn with_almost_sure(mut self, event: Event) -> Result<Self> {
        if !event.is_subset_of(self.full_event()) {
            return Err(Error::AtomIndexOutOfRange {
                index: event.indices().last().unwrap_or(0),
                atoms: self.atom_count(),
            });
        }
        self.almost_sure = event;
        Ok(self)
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    pub fn full_event(&self) -> Event {
        Event::full(self.atom_count())
    }

    pub fn almost_sure(&self) -> Event {
        self.almost_sure
    }

    /// Measure of an event; the event must stay inside the ground set.
    pub fn measure_of(&self, event: Event) -> Result<T> {
        if !event.is_subset_of(self.full_event()) {
            return Err(Error::AtomIndexOutOfRange {
                index: event.indices().last().unwrap_or(0),
                atoms: self.atom_count(),
            });
        }
        Ok(self.table[event.mask()])
    }

    fn event_label(&self, event: Event) -> String {
        if event.is_empty() {
            return "{}".into();
        }
        let names: Vec<&str> = event
            .indices()
            .filter(|&i| i < self.atoms.len())
            .map(|i| self.atoms[i].as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }

    /// Checks every measure axiom with the default slack.
    pub fn validate(&self) -> ValidationReport<T> {
        self.validate_with_slack(real(DEFAULT_AXIOM_SLACK))
    }

    /// Checks every measure axiom, reporting the first witness per axiom.
    ///
    /// Monotonicity is checked over single-atom extensions (equivalent to
    /// the full subset order by chaining) and sub-additivity over all
    /// disjoint pairs, which together with monotonicity covers arbitrary
    /// pairs.
    pub fn validate_with_slack(&self, slack: T) -> ValidationReport<T> {
        let m = self.atom_count();
        let size = 1usize << m;
        let full = Event::full(m).mask();
        let mut checks = Vec::new();

        // Normality: the empty set measures zero, the ground set one.
        {
            let d0 = self.table[0].abs();
            let d1 = (self.table[full] - T::one()).abs();
            let worst = d0.max(d1);
            let passed = worst <= slack;
            let witness = if passed {
                None
            } else {
                let (ev, got, want) = if d0 >= d1 {
                    (Event::EMPTY, self.table[0], T::zero())
                } else {
                    (Event::from_mask(full), self.table[full], T::one())
                };
                Some(AxiomWitness {
                    first: ev,
                    second: None,
                    values: vec![got],
                    detail: format!("M{} = {}, expected {}", self.event_label(ev), got, want),
                })
            };
            checks.push(AxiomCheck {
                axiom: Axiom::Normality,
                passed,
                worst_deviation: worst,
                witness,
            });
        }

        // Monotonicity over single-atom extensions.
        {
            let mut worst = T::zero();
            let mut witness = None;
            'mono: for mask in 0..size {
                for atom in 0..m {
                    if mask & (1 << atom) != 0 {
                        continue;
                    }
                    let larger = mask | (1 << atom);
                    let gap = self.table[mask] - self.table[larger];
                    if gap > worst {
                        worst = gap;
                    }
                    if gap > slack && witness.is_none() {
                        let (e, f) = (Event::from_mask(mask), Event::from_mask(larger));
                        witness = Some(AxiomWitness {
                            first: e,
                            second: Some(f),
                            values: vec![self.table[mask], self.table[larger]],
                            detail: format!(
                                "M{} = {} exceeds M{} = {}",
                                self.event_label(e),
                                self.table[mask],
                                self.event_label(f),
                                self.table[larger]
                            ),
                        });
                        break 'mono;
                    }
                }
            }
            checks.push(AxiomCheck {
                axiom: Axiom::Monotonicity,
                passed: witness.is_none(),
                worst_deviation: worst,
                witness,
            });
        }

        // Duality: complementary events sum to one.
        {
            let mut worst = T::zero();
            let mut witness = None;
            for mask in 0..size {
                let comp = full & !mask;
                if mask > comp {
                    continue;
                }
                let dev = (self.table[mask] + self.table[comp] - T::one()).abs();
                if dev > worst {
                    worst = dev;
                }
                if dev > slack && witness.is_none() {
                    let (e, f) = (Event::from_mask(mask), Event::from_mask(comp));
                    witness = Some(AxiomWitness {
                        first: e,
                        second: Some(f),
                        values: vec![self.table[mask], self.table[comp]],
                        detail: format!(
                            "M{} + M{} = {}",
                            self.event_label(e),
                            self.event_label(f),
                            self.table[mask] + self.table[comp]
                        ),
                    });
                }
            }
            checks.push(AxiomCheck {
                axiom: Axiom::Duality,
                passed: witness.is_none(),
                worst_deviation: worst,
                witness,
            });
        }

        // Sub-additivity over disjoint non-empty pairs.
        {
            let mut worst = T::zero();
            let mut witness = None;
            'sub: for e in 1..size {
                let comp = full & !e;
                let mut f = comp;
                while f != 0 {
                    let gap = self.table[e | f] - (self.table[e] + self.table[f]);
                    if gap > worst {
                        worst = gap;
                    }
                    if gap > slack {
                        let (a, b) = (Event::from_mask(e), Event::from_mask(f));
                        witness = Some(AxiomWitness {
                            first: a,
                            second: Some(b),
                            values: vec![self.table[e | f], self.table[e], self.table[f]],
                            detail: format!(
                                "M{} = {} exceeds M{} + M{} = {}",
                                self.event_label(a.union(b)),
                                self.table[e | f],
                                self.event_label(a),
                                self.event_label(b),
                                self.table[e] + self.table[f]
                            ),
                        });
                        break 'sub;
                    }
                    f = (f - 1) & comp;
                }
            }
            checks.push(AxiomCheck {
                axiom: Axiom::SubAdditivity,
                passed: witness.is_none(),
                worst_deviation: worst,
                witness,
            });
        }

        // The almost-sure set must carry full measure.
        {
            let v = self.table[self.almost_sure.mask()];
            let dev = (v - T::one()).abs();
            let passed = dev <= slack;
            let witness = if passed {
                None
            } else {
                Some(AxiomWitness {
                    first: self.almost_sure,
                    second: None,
                    values: vec![v],
                    detail: format!("M{} = {}", self.event_label(self.almost_sure), v),
                })
            };
            checks.push(AxiomCheck {
                axiom: Axiom::AlmostSure,
                passed,
                worst_deviation: dev,
                witness,
            });
        }

        ValidationReport { checks, slack }
    }
}

/// Uncertain variable: one finite value per atom.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertainVariable<T> {
    values: Vec<T>,
}

impl<T: Real> UncertainVariable<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() || values.len() > MAX_ATOMS {
            return Err(Error::AtomCount(values.len()));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    index: i,
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(UncertainVariable { values })
    }

    pub fn constant(atom_count: usize, value: T) -> Self {
        debug_assert!(value.is_finite());
        UncertainVariable {
            values: vec![value; atom_count],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, atom: usize) -> T {
        self.values[atom]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        UncertainVariable {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

fn check_match<T: Real>(space: &UncertaintySpace<T>, var: &UncertainVariable<T>) -> Result<()> {
    if space.atom_count() != var.len() {
        return Err(Error::AtomMismatch {
            expected: space.atom_count(),
            got: var.len(),
        });
    }
    Ok(())
}

/// Event on which `pred` holds for the variable's value.
pub fn event_where<T: Real>(
    space: &UncertaintySpace<T>,
    var: &UncertainVariable<T>,
    pred: impl Fn(T) -> bool,
) -> Result<Event> {
    check_match(space, var)?;
    let mut ev = Event::EMPTY;
    for i in 0..var.len() {
        if pred(var.value(i)) {
            ev = ev.insert(i);
        }
    }
    Ok(ev)
}

/// Expected value via exact level-set integration.
///
/// The tail measures `r -> M(xi >= r)` and `r -> M(xi <= r)` are step
/// functions on a finite space, so both integrals reduce to sums of
/// rectangle areas between consecutive distinct values.  No quadrature
/// is involved.
pub fn expected_value<T: Real>(
    space: &UncertaintySpace<T>,
    var: &UncertainVariable<T>,
) -> Result<T> {
    check_match(space, var)?;
    let mut distinct: Vec<T> = var.values().to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    distinct.dedup();

    let mut positive = T::zero();
    let mut prev = T::zero();
    for &v in distinct.iter().filter(|&&v| v > T::zero()) {
        let event = event_where(space, var, |x| x >= v)?;
        positive = positive + (v - prev) * space.measure_of(event)?;
        prev = v;
    }

    let mut negative = T::zero();
    let negatives: Vec<T> = distinct.iter().cloned().filter(|&v| v < T::zero()).collect();
    for (j, &u) in negatives.iter().enumerate() {
        let next = if j + 1 < negatives.len() {
            negatives[j + 1]
        } else {
            T::zero()
        };
        let event = event_where(space, var, |x| x <= u)?;
        negative = negative + (next - u) * space.measure_of(event)?;
    }

    Ok(positive - negative)
}

/// Uncertainty distribution `Phi(x) = M(xi <= x)`.
pub fn distribution_at<T: Real>(
    space: &UncertaintySpace<T>,
    var: &UncertainVariable<T>,
    x: T,
) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "distribution point must be finite, got {x}"
        )));
    }
    let event = event_where(space, var, |v| v <= x)?;
    space.measure_of(event)
}

/// Sequence of uncertain variables with a designated limit candidate.
#[derive(Clone, Debug)]
pub struct UncertainSequence<T> {
    space: Arc<UncertaintySpace<T>>,
    terms: Vec<UncertainVariable<T>>,
    limit: UncertainVariable<T>,
}

impl<T: Real> UncertainSequence<T> {
    pub fn new(
        space: Arc<UncertaintySpace<T>>,
        terms: Vec<UncertainVariable<T>>,
        limit: UncertainVariable<T>,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter(
                "sequence needs at least one term".into(),
            ));
        }
        check_match(&space, &limit)?;
        for t in &terms {
            check_match(&space, t)?;
        }
        Ok(UncertainSequence {
            space,
            terms,
            limit,
        })
    }

    pub fn space(&self) -> &Arc<UncertaintySpace<T>> {
        &self.space
    }

    /// Number of materialized terms; indices run `1..=horizon`.
    pub fn horizon(&self) -> usize {
        self.terms.len()
    }

    pub fn term(&self, n: usize) -> Result<&UncertainVariable<T>> {
        if n == 0 || n > self.terms.len() {
            return Err(Error::BeyondHorizon {
                n,
                horizon: self.terms.len(),
            });
        }
        Ok(&self.terms[n - 1])
    }

    pub fn terms(&self) -> &[UncertainVariable<T>] {
        &self.terms
    }

    pub fn limit(&self) -> &UncertainVariable<T> {
        &self.limit
    }
}
