//! Rotation numbers, the translation defect tau, and the semiconjugacy
//! criterion.
//!
//! For the canonical lift (g, 0), the integer parts a_n = [(g,0)^n] are
//! superadditive with defect one, so a_n/n converges and |limit - a_n/n|
//! is at most 1/n. `rot_estimate` returns that certified interval; exact
//! values come from three closed-form paths:
//!
//! - torsion: g of finite order m gives (g,0)^m = (id, T), limit T/m;
//! - secret: a declared order-induced ordering has limit eta(g) in {0, 1};
//! - quotient: lex extensions over a convex kernel reduce to the quotient,
//!   either through the kernel's eta or through the image's torsion.
//!
//! All values are exact rationals; an `Exact` answer is the limit itself,
//! `Certified` is an interval guaranteed to contain it. Equality of two
//! quantities is only ever certified through exact paths on both sides;
//! overlapping intervals are reported as inconclusive, never as equal.
//!
//! Rotation numbers are compared modulo Z (that is the semiconjugacy
//! invariant); tau values are compared as real numbers.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::construct::coset_order;
use crate::error::{Error, Result};
use crate::groups::{Element, Group};
use crate::lift::{cocycle_f, eta_of_secret, power_floor};
use crate::orders::{CircEval, CircularOrder};
use crate::sample::Sampler;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RotationValue {
    /// The limit itself, as a reduced rational.
    Exact(BigRational),
    /// An interval certified to contain the limit.
    Certified {
        center: BigRational,
        radius: BigRational,
    },
}

impl RotationValue {
    pub fn exact_int(v: i64) -> Self {
        RotationValue::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RotationValue::Exact(_))
    }

    pub fn center(&self) -> &BigRational {
        match self {
            RotationValue::Exact(v) => v,
            RotationValue::Certified { center, .. } => center,
        }
    }

    pub fn radius(&self) -> BigRational {
        match self {
            RotationValue::Exact(_) => BigRational::zero(),
            RotationValue::Certified { radius, .. } => radius.clone(),
        }
    }

    /// The same value with its center reduced into [0, 1).
    pub fn mod_z(&self) -> RotationValue {
        match self {
            RotationValue::Exact(v) => RotationValue::Exact(v - v.floor()),
            RotationValue::Certified { center, radius } => RotationValue::Certified {
                center: center - center.floor(),
                radius: radius.clone(),
            },
        }
    }
}

impl fmt::Display for RotationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationValue::Exact(v) => write!(f, "{}", v),
            RotationValue::Certified { center, radius } => {
                write!(f, "{} +/- {}", center, radius)
            }
        }
    }
}

/// Which computation produced a rotation value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotPath {
    Torsion,
    Secret,
    Quotient,
    Estimate,
}

impl RotPath {
    pub fn label(&self) -> &'static str {
        match self {
            RotPath::Torsion => "torsion",
            RotPath::Secret => "secret",
            RotPath::Quotient => "quotient",
            RotPath::Estimate => "estimate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RotationResult {
    pub value: RotationValue,
    pub path: RotPath,
}

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// The n-step certified estimate of the lifted rotation number of (g, 0):
/// center [(g,0)^n]/n, radius exactly 1/n.
pub fn rot_estimate(c: &CircularOrder, g: &Element, n: u64) -> RotationResult {
    assert!(n >= 1, "estimate depth must be positive");
    let pf = power_floor(c, g, n);
    RotationResult {
        value: RotationValue::Certified {
            center: ratio(pf, n),
            radius: ratio(1, n),
        },
        path: RotPath::Estimate,
    }
}

/// The exact lifted rotation number of (g, 0) when a closed-form path
/// applies; the mod-Z reduction is the rotation number of g. Paths are
/// tried in the order torsion, declared secret, convex quotient; they agree
/// wherever several apply. `None` means only estimates are available.
pub fn rot_exact(c: &CircularOrder, g: &Element) -> Option<RotationResult> {
    let group = c.group();
    if let Some(m) = group.order_of(g) {
        let t = power_floor(c, g, m);
        return Some(RotationResult {
            value: RotationValue::Exact(ratio(t, m)),
            path: RotPath::Torsion,
        });
    }
    match c.eval_kind() {
        CircEval::Secret { cone } => {
            let eta = eta_of_secret(cone);
            Some(RotationResult {
                value: RotationValue::Exact(ratio(eta.eta(g), 1)),
                path: RotPath::Secret,
            })
        }
        CircEval::Conjugated { of, by, .. } => rot_exact(of, &group.conj(by, g)),
        CircEval::Pullback { of, phi } => rot_exact(of, &phi.apply(g)),
        CircEval::LexSes {
            ses,
            kernel,
            quotient,
        } => {
            let q = ses.project(g);
            if ses.quotient_group().is_id(&q) {
                // Kernel elements: the cocycle restricted to the kernel is
                // the coboundary of the kernel's eta.
                let eta = u8::from(kernel.sign(&ses.kernel_coords(g)) < 0);
                return Some(RotationResult {
                    value: RotationValue::Exact(ratio(eta, 1)),
                    path: RotPath::Quotient,
                });
            }
            // The cocycle along powers of g is the quotient cocycle along
            // powers of q(g), exactly; so is the limit.
            rot_exact(quotient, &q).map(|r| RotationResult {
                value: r.value,
                path: RotPath::Quotient,
            })
        }
        CircEval::ApproxDn { h_order, zn, .. } => {
            if let Some(j) = group.as_power_of(g, zn) {
                debug_assert!(!j.is_zero(), "identity is torsion");
                let eta = u8::from(h_order.sign(g) < 0);
                return Some(RotationResult {
                    value: RotationValue::Exact(ratio(eta, 1)),
                    path: RotPath::Quotient,
                });
            }
            let m = coset_order(group, g, zn)?.to_u64()?;
            debug_assert!(m >= 2, "kernel membership is handled above");
            // One full period of the cocycle sum: the first m-2 terms agree
            // with the quotient cocycle and the boundary term at the wrap
            // contributes exactly one, whichever side g^m lands on.
            let t = power_floor(c, g, m - 1) + 1;
            Some(RotationResult {
                value: RotationValue::Exact(ratio(t, m)),
                path: RotPath::Quotient,
            })
        }
        _ => None,
    }
}

/// Exact rotation value when available, certified n-step estimate otherwise.
pub fn rot(c: &CircularOrder, g: &Element, n: u64) -> RotationResult {
    rot_exact(c, g).unwrap_or_else(|| rot_estimate(c, g, n))
}

/// The translation defect tau(g, h) for the fixed canonical lifts (g,0),
/// (h,0) and their product (gh, f_c(g,h)). Exact when all three rotation
/// numbers are exact; otherwise certified with radius exactly 3/n.
pub fn tau(c: &CircularOrder, g: &Element, h: &Element, n: u64) -> RotationValue {
    let group = c.group();
    if group.is_id(g) || group.is_id(h) {
        return RotationValue::exact_int(0);
    }
    let gh = group.mul(g, h);
    let f = BigRational::from_integer(BigInt::from(cocycle_f(c, g, h)));
    let parts = (
        rot_exact(c, g),
        rot_exact(c, h),
        rot_exact(c, &gh),
    );
    if let (Some(a), Some(b), Some(ab)) = parts {
        let (a, b, ab) = (exact_value(a), exact_value(b), exact_value(ab));
        return RotationValue::Exact(ab + f - a - b);
    }
    let pf = |x: &Element| ratio(power_floor(c, x, n), n);
    RotationValue::Certified {
        center: pf(&gh) + f - pf(g) - pf(h),
        radius: ratio(3, n),
    }
}

fn exact_value(r: RotationResult) -> BigRational {
    match r.value {
        RotationValue::Exact(v) => v,
        RotationValue::Certified { .. } => unreachable!("exact path returned interval"),
    }
}

/// Distance between two values as classes mod Z: the gap to the nearest
/// integer difference.
pub fn mod_z_distance(a: &BigRational, b: &BigRational) -> BigRational {
    let d = a - b;
    let frac = &d - d.floor();
    let other = BigRational::one() - &frac;
    frac.min(other)
}

/// Outcome of comparing two certified-or-exact values.
#[derive(Clone, Debug)]
pub(crate) enum Cmp {
    ExactEqual,
    ExactDiffer,
    Disjoint,
    /// Interval overlap; carries distance minus combined radius (<= 0).
    Overlap(BigRational),
}

pub(crate) fn compare_values(a: &RotationValue, b: &RotationValue, mod_z: bool) -> Cmp {
    let dist = if mod_z {
        mod_z_distance(a.center(), b.center())
    } else {
        (a.center() - b.center()).abs()
    };
    let radii = a.radius() + b.radius();
    if a.is_exact() && b.is_exact() {
        if dist.is_zero() {
            Cmp::ExactEqual
        } else {
            Cmp::ExactDiffer
        }
    } else if dist > radii {
        Cmp::Disjoint
    } else {
        Cmp::Overlap(dist - radii)
    }
}

/// A concrete disagreement: the quantity, its arguments, and both values.
#[derive(Clone, Debug)]
pub struct Witness {
    pub quantity: &'static str,
    pub elements: Vec<Element>,
    pub left: RotationValue,
    pub right: RotationValue,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.quantity)?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e)?;
        }
        write!(f, "): {} vs {}", self.left, self.right)
    }
}

/// Tri-state semiconjugacy outcome. Equality is only certified when every
/// compared value was exact; refutation requires certifiably disjoint
/// values; anything else is inconclusive with the closest separation seen.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)] // verdicts are built once per decision
pub enum Verdict {
    CertifiedEqual,
    Refuted(Witness),
    Inconclusive { closest_separation: BigRational },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::CertifiedEqual => "certified_equal",
            Verdict::Refuted(_) => "refuted",
            Verdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Accumulates per-witness comparisons into a verdict. Exact disagreements
/// are preferred as witnesses over disjoint intervals: an exact witness
/// does not depend on the estimation depth, so reported counterexamples
/// are reproducible at any resolution. Scanning stops only once an exact
/// disagreement is in hand.
struct VerdictBuilder {
    all_exact: bool,
    closest: Option<BigRational>,
    exact_refutation: Option<Witness>,
    interval_refutation: Option<Witness>,
}

impl VerdictBuilder {
    fn new() -> Self {
        VerdictBuilder {
            all_exact: true,
            closest: None,
            exact_refutation: None,
            interval_refutation: None,
        }
    }

    fn add(&mut self, cmp: Cmp, witness: impl FnOnce() -> Witness) -> bool {
        match cmp {
            Cmp::ExactEqual => {}
            Cmp::ExactDiffer => {
                self.exact_refutation = Some(witness());
                return false;
            }
            Cmp::Disjoint => {
                self.all_exact = false;
                if self.interval_refutation.is_none() {
                    self.interval_refutation = Some(witness());
                }
            }
            Cmp::Overlap(sep) => {
                self.all_exact = false;
                let closer = match &self.closest {
                    Some(best) => sep > *best,
                    None => true,
                };
                if closer {
                    self.closest = Some(sep);
                }
            }
        }
        true
    }

    fn finish(self) -> Verdict {
        if let Some(w) = self.exact_refutation.or(self.interval_refutation) {
            return Verdict::Refuted(w);
        }
        if self.all_exact {
            Verdict::CertifiedEqual
        } else {
            Verdict::Inconclusive {
                closest_separation: self.closest.unwrap_or_else(BigRational::zero),
            }
        }
    }
}

const PAIR_CAP: usize = 10_000;

/// All ordered pairs from ball(radius), or a seeded subset of that square
/// when it exceeds the cap.
pub fn default_pair_sample(
    group: &Group,
    radius: u32,
    seed: u64,
) -> Result<Vec<(Element, Element)>> {
    let ball = group.ball(radius)?;
    let total = ball.len() * ball.len();
    if total <= PAIR_CAP {
        let mut out = Vec::with_capacity(total);
        for a in &ball {
            for b in &ball {
                out.push((a.clone(), b.clone()));
            }
        }
        return Ok(out);
    }
    let mut sampler = Sampler::new(seed);
    let mut out = Vec::with_capacity(PAIR_CAP);
    for _ in 0..PAIR_CAP {
        let a = ball[sampler.index(ball.len())].clone();
        let b = ball[sampler.index(ball.len())].clone();
        out.push((a, b));
    }
    Ok(out)
}

/// Sorts elements by coordinate magnitude (largest coordinate, then total
/// size, then positive before negative), so scans meet small elements
/// first and refutation witnesses come out minimal.
fn magnitude_order(elems: &mut [Element]) {
    elems.sort_by_key(|e| {
        let abs: Vec<BigInt> = e.coords().iter().map(|c| c.abs()).collect();
        let max = abs.iter().max().cloned().unwrap_or_default();
        let sum: BigInt = abs.iter().sum();
        let lex: Vec<(BigInt, bool)> = e
            .coords()
            .iter()
            .map(|c| (c.abs(), c.is_negative()))
            .collect();
        (max, sum, lex)
    });
}

/// Decides whether c lies in the semiconjugacy class of order-induced
/// orderings: every element must have rotation number 0 mod Z and every
/// pair must have tau = 0.
pub fn is_secret(c: &CircularOrder, sample_radius: u32, n: u64) -> Result<Verdict> {
    let zero = RotationValue::exact_int(0);
    let mut builder = VerdictBuilder::new();
    let mut ball = c.group().ball(sample_radius)?;
    magnitude_order(&mut ball);
    for g in &ball {
        let r = rot(c, g, n).value.mod_z();
        let proceed = builder.add(compare_values(&r, &zero, true), || Witness {
            quantity: "rot",
            elements: vec![g.clone()],
            left: r.clone(),
            right: zero.clone(),
        });
        if !proceed {
            return Ok(builder.finish());
        }
    }
    for (g, h) in default_pair_sample(c.group(), sample_radius, 0)? {
        let t = tau(c, &g, &h, n);
        let proceed = builder.add(compare_values(&t, &zero, false), || Witness {
            quantity: "tau",
            elements: vec![g.clone(), h.clone()],
            left: t.clone(),
            right: zero.clone(),
        });
        if !proceed {
            break;
        }
    }
    Ok(builder.finish())
}

/// The operational semiconjugacy criterion: equal rotation numbers on a
/// generating set and equal tau on sampled pairs.
pub fn semiconjugate(
    c: &CircularOrder,
    d: &CircularOrder,
    generators: &[Element],
    pairs: &[(Element, Element)],
    n: u64,
) -> Result<Verdict> {
    if c.group() != d.group() {
        return Err(Error::invalid(
            "semiconjugacy comparison requires orderings of one group",
        ));
    }
    let mut builder = VerdictBuilder::new();
    for g in generators {
        let a = rot(c, g, n).value.mod_z();
        let b = rot(d, g, n).value.mod_z();
        let proceed = builder.add(compare_values(&a, &b, true), || Witness {
            quantity: "rot",
            elements: vec![g.clone()],
            left: a.clone(),
            right: b.clone(),
        });
        if !proceed {
            return Ok(builder.finish());
        }
    }
    for (g, h) in pairs {
        let a = tau(c, g, h, n);
        let b = tau(d, g, h, n);
        let proceed = builder.add(compare_values(&a, &b, false), || Witness {
            quantity: "tau",
            elements: vec![g.clone(), h.clone()],
            left: a.clone(),
            right: b.clone(),
        });
        if !proceed {
            break;
        }
    }
    Ok(builder.finish())
}

/// Per-item outcome counts for the conjugation-invariance check. Exact
/// paths must agree exactly; interval results can only report overlap.
#[derive(Debug)]
pub struct InvarianceReport {
    pub exact_agreements: u64,
    pub overlaps: u64,
    pub violations: Vec<Witness>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that rotation numbers (mod Z) and tau are unchanged when all
/// arguments are conjugated by f.
pub fn check_conjugation_invariance(
    c: &CircularOrder,
    f: &Element,
    elements: &[Element],
    pairs: &[(Element, Element)],
    n: u64,
) -> InvarianceReport {
    let group = c.group();
    let mut report = InvarianceReport {
        exact_agreements: 0,
        overlaps: 0,
        violations: Vec::new(),
    };
    let mut tally = |cmp: Cmp, witness: Witness| match cmp {
        Cmp::ExactEqual => report.exact_agreements += 1,
        Cmp::Overlap(_) => report.overlaps += 1,
        Cmp::ExactDiffer | Cmp::Disjoint => report.violations.push(witness),
    };
    for g in elements {
        let a = rot(c, g, n).value.mod_z();
        let b = rot(c, &group.conj(f, g), n).value.mod_z();
        let cmp = compare_values(&a, &b, true);
        tally(
            cmp,
            Witness {
                quantity: "rot",
                elements: vec![g.clone()],
                left: a,
                right: b,
            },
        );
    }
    for (g, h) in pairs {
        let a = tau(c, g, h, n);
        let b = tau(c, &group.conj(f, g), &group.conj(f, h), n);
        let cmp = compare_values(&a, &b, false);
        tally(
            cmp,
            Witness {
                quantity: "tau",
                elements: vec![g.clone(), h.clone()],
                left: a,
                right: b,
            },
        );
    }
    report
}

/// Screens an ordering before cone recovery: an element whose certified
/// rotation value excludes 0 mod Z proves the ordering is not
/// order-induced.
pub(crate) fn reject_if_nonzero_rot(c: &CircularOrder) -> Result<()> {
    let zero = BigRational::zero();
    for g in c.group().ball(2)? {
        let r = rot(c, &g, 64).value.mod_z();
        let dist = mod_z_distance(r.center(), &zero);
        if dist > r.radius() {
            return Err(Error::NotSecret {
                witness: g.to_string(),
                value: r.to_string(),
            });
        }
    }
    Ok(())
}
