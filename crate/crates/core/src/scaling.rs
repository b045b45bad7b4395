//! Generalized scaling sets, the consistency equation, and the Υ chain.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cylinder::Cylinder;
use crate::error::{Error, Result};
use crate::group::{Point, Prime};
use crate::set::CylinderSet;
use crate::stepfn::{EtaFunction, StepFunction};
use crate::stream::{Enumeration, PieceStream, Source, TailFamily};
use crate::verdict::{decisions, fmt_rational, Verdict, Witness};
use crate::wavelet::{check_translation_congruence, check_wavelet_set, dilation_projection};

pub const MEASURE: &str = "(i) measure 1/(p-1)";
pub const INCLUSION: &str = "(ii) S ⊆ BS";
pub const NEIGHBORHOOD: &str = "(iii) θ-neighborhood";
pub const TRANSLATE_IDENTITY: &str = "(iv) translate identity";

const WITNESS_CELLS: usize = 16;

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `1/(p-1)`.
pub fn gss_measure(prime: Prime) -> BigRational {
    BigRational::one() / rational(prime.get() as i64 - 1)
}

fn region_witness(what: &str, region: &CylinderSet) -> Witness {
    let iv: Vec<String> = region
        .intervals()
        .iter()
        .take(4)
        .map(|(lo, hi)| format!("[{}, {})", fmt_rational(lo), fmt_rational(hi)))
        .collect();
    Witness::new(format!("{what}: λ* {}", iv.join(" ∪ ")))
        .with_cylinders(region.iter().take(WITNESS_CELLS).cloned())
        .with_measure(region.measure())
}

fn enumerate(s: &PieceStream, depth: u32) -> std::result::Result<Enumeration, Verdict> {
    s.enumerate(depth).map_err(|o| {
        Verdict::fail(
            Witness::new(format!("stream pieces overlap: {o}"))
                .with_cylinders([o.first.1, o.second.1, o.common]),
        )
    })
}

/// `Σ_σ f(ω ⊕ 0.σ)`.
pub fn translate_sum(f: &StepFunction<i64>) -> StepFunction<i64> {
    let p = f.prime().get();
    (1..p).fold(f.clone(), |acc, sigma| {
        acc.zip_with(&f.translate_first_digit(sigma), |a, b| a + b)
    })
}

/// A step-function discrepancy: `Pass` when identically zero; for streams
/// with unenumerated measure `tau` the identity is certified as long as
/// `∫|diff| <= slack · tau`.
fn judge_discrepancy(
    diff: &StepFunction<i64>,
    tau: &BigRational,
    slack: i64,
    what: &str,
) -> Verdict {
    let mass = diff.abs_integral();
    if mass.is_zero() {
        return Verdict::certified(tau.clone());
    }
    let bound = tau * rational(slack);
    if mass <= bound {
        return Verdict::certified(tau.clone()).with_note(format!(
            "prefix discrepancy {} within the {} allowed by the unenumerated tail",
            fmt_rational(&mass),
            fmt_rational(&bound)
        ));
    }
    let bad: Vec<(Cylinder, i64)> = diff
        .cells()
        .into_iter()
        .filter(|(_, v)| *v != 0)
        .collect();
    let shown: Vec<String> = bad
        .iter()
        .take(4)
        .map(|(c, v)| format!("{c}: {v:+}"))
        .collect();
    Verdict::fail(
        Witness::new(format!("{what} fails on {}", shown.join(", ")))
            .with_cylinders(bad.iter().take(WITNESS_CELLS).map(|(c, _)| c.clone()))
            .with_measure(mass),
    )
}

/// `η_S` for a stream prefix (exact for finite sets).
pub fn eta(s: &PieceStream, depth: u32) -> std::result::Result<EtaFunction, Verdict> {
    Ok(EtaFunction::of_enumeration(s.prime(), &enumerate(s, depth)?))
}

fn check_measure(s: &PieceStream) -> Verdict {
    let target = gss_measure(s.prime());
    let m = s.total_measure();
    let v = if m == target {
        Verdict::pass()
    } else {
        Verdict::fail(
            Witness::new(format!(
                "measure {} differs from 1/(p-1) = {}",
                fmt_rational(&m),
                fmt_rational(&target)
            ))
            .with_measure(m.clone()),
        )
    };
    v.with_measure("measure", m).with_measure("expected", target)
}

/// `B^{-1} S ⊆ S`, equivalently `S ⊆ BS`.
fn check_inclusion(s: &PieceStream, depth: u32) -> Verdict {
    if let Some(f) = s.as_finite() {
        let outside = f.dilate(-1).subtract(f);
        return if outside.is_empty() {
            Verdict::pass()
        } else {
            Verdict::fail(region_witness("B^-1 S leaves S", &outside))
        };
    }
    let (probe, unexamined, lookahead) = match s.source() {
        Source::Described { finite, tails } => {
            let mut probe = finite.dilate(-1);
            let mut unexamined = BigRational::zero();
            for t in tails.iter().filter(|t| !t.is_dilation_closed()) {
                for j in t.start()..=depth {
                    probe = probe.union(&t.piece(j).dilate(-1));
                }
                unexamined += t.measure_from(depth + 1) / s.prime().power(1);
            }
            let lookahead = tails.iter().map(TailFamily::ratio).max().unwrap_or(1);
            (probe, unexamined, lookahead)
        }
        Source::Generated(_) => {
            let e = match enumerate(s, depth) {
                Ok(e) => e,
                Err(v) => return v,
            };
            (e.union.dilate(-1), e.tail_bound / s.prime().power(1), 1)
        }
    };
    let wider = match enumerate(s, depth + lookahead + 1) {
        Ok(e) => e,
        Err(v) => return v,
    };
    let outside = probe.subtract(&wider.union);
    if outside.is_empty() {
        return Verdict::certified(unexamined);
    }
    let certain = match s.tail_envelope(wider.depth) {
        Some(env) => outside.subtract(&env),
        None => CylinderSet::empty(s.prime()),
    };
    if !certain.is_empty() {
        Verdict::fail(region_witness("B^-1 S leaves S", &certain))
    } else if outside.measure() > wider.tail_bound {
        Verdict::fail(region_witness(
            "B^-1 S leaves the enumerated part of S by more than the remaining measure",
            &outside,
        ))
    } else {
        Verdict::undecided(
            depth,
            format!(
                "B^-1 S meets {} outside the enumerated part",
                fmt_rational(&outside.measure())
            ),
        )
    }
}

/// Whether some `U*_N` lies in `S` up to null sets.
fn check_neighborhood(s: &PieceStream, depth: u32) -> Verdict {
    let verdict = match s.source() {
        Source::Described { finite, tails } => {
            if finite.contains_zero_neighborhood() {
                Verdict::pass()
            } else {
                neighborhood_from_tails(finite, tails)
            }
        }
        Source::Generated(_) => match enumerate(s, depth) {
            Err(v) => v,
            Ok(e) if e.union.contains_zero_neighborhood() => Verdict::pass(),
            Ok(_) => Verdict::undecided(depth, "no θ-neighborhood among the enumerated pieces"),
        },
    };
    verdict.with_decision(decisions::THETA_NEIGHBORHOOD)
}

/// Near θ only tails anchored at θ matter. For `x ∈ D_0` the point
/// `B^{-k} x` lies in such a tail for all large `k` iff, for the residue
/// `c = -k mod r`, `x` is in the projection of the body's annulus `a ≡ c`.
fn neighborhood_from_tails(finite: &CylinderSet, tails: &[TailFamily]) -> Verdict {
    let prime = finite.prime();
    let near: Vec<&TailFamily> = tails
        .iter()
        .filter(|t| t.anchor().is_zero() && !t.body().is_empty())
        .collect();
    let witness_cell = || {
        let depth = finite
            .iter()
            .chain(tails.iter().flat_map(|t| t.body().iter()))
            .filter_map(|c| c.anchor().min_position())
            .max()
            .unwrap_or(0);
        Cylinder::zero_neighborhood(prime, depth.max(0) + 1)
    };
    if near.is_empty() {
        let far = tails.iter().any(|t| !t.body().is_empty());
        let w = if far {
            Witness::new("no piece accumulates at θ")
        } else {
            let cell = witness_cell();
            Witness::new(format!("{cell} is disjoint from S")).with_cylinders([cell])
        };
        return Verdict::fail(w);
    }
    let modulus = near.iter().fold(1i64, |acc, t| acc.lcm(&(t.ratio() as i64)));
    let projections: Vec<_> = near
        .iter()
        .map(|t| (t.ratio() as i64, dilation_projection(t.body())))
        .collect();
    let d0 = CylinderSet::base_annulus(prime);
    for c in 0..modulus {
        let mut cover = CylinderSet::empty(prime);
        for (r, proj) in &projections {
            for (a, piece) in &proj.pieces {
                if a.mod_floor(r) == c.mod_floor(r) {
                    cover = cover.union(piece);
                }
            }
        }
        let gap = d0.subtract(&cover);
        if !gap.is_empty() {
            let k = (-c).mod_floor(&modulus);
            return Verdict::fail(region_witness(
                &format!(
                    "for k ≡ {k} mod {modulus} the points B^-k x, x in this part of D_0, stay outside S"
                ),
                &gap,
            ));
        }
    }
    Verdict::pass()
}

fn check_translate_identity(s: &PieceStream, depth: u32) -> Verdict {
    let e = match eta(s, depth) {
        Ok(e) => e,
        Err(v) => return v,
    };
    let lhs = translate_sum(&e.values);
    let rhs = e.values.compose_i().map(|v| v + 1);
    let diff = lhs.zip_with(&rhs, |a, b| a - b);
    let slack = s.prime().get() as i64 + 1;
    judge_discrepancy(&diff, &e.tail_uncertainty, slack, "Σ_σ η(ω ⊕ 0.σ) = η(Bω) + 1")
        .with_decision(decisions::ETA_PLUS_ONE)
}

/// The four-condition characterization of generalized scaling sets.
pub fn gss_check(s: &PieceStream, depth: u32) -> Verdict {
    Verdict::all(vec![
        (MEASURE.into(), check_measure(s)),
        (INCLUSION.into(), check_inclusion(s, depth)),
        (NEIGHBORHOOD.into(), check_neighborhood(s, depth)),
        (TRANSLATE_IDENTITY.into(), check_translate_identity(s, depth)),
    ])
}

/// `BS \ S`.
pub fn wavelet_from_gss(s: &CylinderSet) -> CylinderSet {
    s.dilate(1).subtract(s)
}

/// `BS \ S` for a stream made of one dilation-closed tail `⨆_{j>=j0} B^{-j} Ω`:
/// the set `B^{1-j0} Ω`.
pub fn wavelet_from_gss_stream(s: &PieceStream) -> Result<CylinderSet> {
    if let Some(f) = s.as_finite() {
        return Ok(wavelet_from_gss(f));
    }
    match s.source() {
        Source::Described { finite, tails }
            if finite.is_empty() && tails.len() == 1 && tails[0].is_dilation_closed() =>
        {
            let t = &tails[0];
            Ok(t.body().dilate(1 - t.start() as i64))
        }
        _ => Err(Error::Unsupported(
            "BS \\ S is only computed for finite sets and single dilation-closed tails".into(),
        )),
    }
}

/// The GSS verdict followed, on success, by the wavelet-set check of `BS \ S`.
pub fn gss_wavelet_report(s: &PieceStream, depth: u32) -> Verdict {
    let gss = gss_check(s, depth);
    let mut parts = vec![("generalized scaling set".to_string(), gss.clone())];
    if gss.is_pass() {
        let w = match wavelet_from_gss_stream(s) {
            Ok(omega) => check_wavelet_set(&PieceStream::finite(omega), depth),
            Err(e) => Verdict::undecided(depth, e.to_string()),
        };
        parts.push(("BS \\ S is a wavelet set".to_string(), w));
    }
    Verdict::all(parts)
}

/// `⋃_{j>=1} B^{-j} Ω` as a stream; fails when the dilates overlap.
pub fn gss_from_wavelet(omega: &CylinderSet) -> Result<PieceStream> {
    PieceStream::described(
        CylinderSet::empty(omega.prime()),
        vec![TailFamily::dilates_of(omega.clone())],
    )
}

/// Closed-form check that `S = ⋃_{j>=1} B^{-j} Ω`: `B^{-1}(Ω ∪ S) = S` and
/// `Ω ∩ S = ∅`.
pub fn closure_verify(s: &CylinderSet, omega: &CylinderSet) -> Verdict {
    let image = omega.union(s).dilate(-1);
    let fixed = if image == *s {
        Verdict::pass()
    } else {
        Verdict::fail(region_witness(
            "B^-1(Ω ∪ S) and S differ on",
            &image.symmetric_difference(s),
        ))
    };
    let common = omega.intersect(s);
    let disjoint = if common.is_empty() {
        Verdict::pass()
    } else {
        Verdict::fail(region_witness("Ω and S overlap on", &common))
    };
    Verdict::all(vec![
        ("B^-1(Ω ∪ S) = S".into(), fixed),
        ("Ω ∩ S = ∅".into(), disjoint),
    ])
}

/// `1 + η_S = η_BS` on `U*`.
pub fn consistency_check(s: &PieceStream, depth: u32) -> Verdict {
    let e = match enumerate(s, depth) {
        Ok(e) => e,
        Err(v) => return v,
    };
    let prime = s.prime();
    let eta_s = EtaFunction::of_enumeration(prime, &e);
    let eta_bs = EtaFunction::of_set(&e.union.dilate(1));
    let diff = eta_s.values.zip_with(&eta_bs.values, |a, b| 1 + a - b);
    let slack = prime.get() as i64 + 1;
    judge_discrepancy(&diff, &e.tail_bound, slack, "1 + η_S = η_BS")
        .with_decision(decisions::CONSISTENCY_NECESSARY_ONLY)
}

/// A θ-neighborhood in `S`, `B^{-1} S ⊆ S` and the consistency equation
/// together make `BS \ S` a wavelet set.
pub fn neighborhood_criterion_check(s: &PieceStream, depth: u32) -> Verdict {
    let mut invariance = check_inclusion(s, depth).with_decision(decisions::INVARIANT_UNDER_INVERSE_DILATION);
    if let Some(f) = s.as_finite() {
        if f.dilate(-1) != *f {
            invariance = invariance.with_note("B^-1 S ≠ S, so the equality reading fails");
        }
    }
    let hypotheses = Verdict::all(vec![
        ("θ-neighborhood in S".into(), check_neighborhood(s, depth)),
        ("B^-1 S ⊆ S".into(), invariance),
        ("consistency".into(), consistency_check(s, depth)),
    ]);
    let conclusion = match wavelet_from_gss_stream(s) {
        Ok(omega) => check_wavelet_set(&PieceStream::finite(omega), depth),
        Err(e) => Verdict::undecided(depth, e.to_string()),
    };
    let alarm = hypotheses.is_pass() && conclusion.is_fail();
    let mut v = Verdict::all(vec![
        ("hypotheses".into(), hypotheses.clone()),
        ("BS \\ S is a wavelet set".into(), conclusion),
    ]);
    if !hypotheses.is_pass() {
        // The conclusion is only claimed under the hypotheses.
        v.status = hypotheses.status.clone();
    }
    if alarm {
        v = v.with_note("internal-consistency alarm: hypotheses pass but the conclusion fails");
    }
    v
}

/// `{ω ∈ U* : I(ω) ∈ t} = ⋃_σ (B^{-1} t ⊕ 0.σ)`.
pub fn i_preimage(t: &CylinderSet) -> CylinderSet {
    let prime = t.prime();
    let shrunk = t.intersect(&CylinderSet::unit(prime)).dilate(-1);
    (0..prime.get()).fold(CylinderSet::empty(prime), |acc, sigma| {
        acc.union(&shrunk.translate(&Point::fractional_digit(prime, sigma)))
    })
}

/// Checks `U* \ 𝒰 = ⋃_{σ=1}^{p-1} ρ(𝒰 ⊕ 0.σ)`.
pub fn upsilon_hypothesis(u: &CylinderSet) -> Result<Verdict> {
    let prime = u.prime();
    let unit = CylinderSet::unit(prime);
    if !u.is_subset(&unit) {
        return Err(Error::Domain(format!(
            "set is not inside U*: {}",
            u.subtract(&unit).iter().next().expect("nonempty")
        )));
    }
    let complement = unit.subtract(u);
    let translates = (1..prime.get()).fold(CylinderSet::empty(prime), |acc, sigma| {
        acc.union(&u.translate(&Point::fractional_digit(prime, sigma)))
    });
    Ok(if translates == complement {
        Verdict::pass()
    } else {
        Verdict::fail(region_witness(
            "U* \\ 𝒰 and ⋃ ρ(𝒰 ⊕ 0.σ) differ on",
            &translates.symmetric_difference(&complement),
        ))
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsilonStep {
    pub index: u32,
    pub set: CylinderSet,
    pub measure_ok: bool,
    /// Congruence of `B^{k+1} Υ_k` to `U*`.
    pub congruence: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsilonChain {
    pub steps: Vec<UpsilonStep>,
}

impl UpsilonChain {
    pub fn all_pass(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.measure_ok && s.congruence.is_pass())
    }

    pub fn verdict(&self) -> Verdict {
        Verdict::all(
            self.steps
                .iter()
                .map(|s| {
                    let mut v = s.congruence.clone();
                    if !s.measure_ok {
                        v = Verdict::fail(
                            Witness::new(format!(
                                "μ(Υ_{}) = {} is not p^-{}",
                                s.index,
                                fmt_rational(&s.set.measure()),
                                s.index + 1
                            ))
                            .with_measure(s.set.measure()),
                        );
                    }
                    (format!("Υ_{}", s.index), v.with_measure("measure", s.set.measure()))
                })
                .collect(),
        )
    }
}

/// `Υ_0 = 𝒰`, `Υ_k = 𝒰 ∩ I^{-1}(Υ_{k-1})`, each with its congruence check.
pub fn upsilon_construct(u: &CylinderSet, n: u32) -> Result<UpsilonChain> {
    let hypothesis = upsilon_hypothesis(u)?;
    if hypothesis.is_fail() {
        let w = &hypothesis.witnesses[0];
        return Err(Error::Hypothesis(w.to_string()));
    }
    let prime = u.prime();
    let mut steps = Vec::new();
    let mut current = u.clone();
    for k in 0..=n {
        if k > 0 {
            current = u.intersect(&i_preimage(&current));
        }
        let lifted = current.dilate(k as i64 + 1);
        steps.push(UpsilonStep {
            index: k,
            set: current.clone(),
            measure_ok: current.measure() == prime.power(-(k as i64) - 1),
            congruence: check_translation_congruence(&PieceStream::finite(lifted), 0),
        });
    }
    Ok(UpsilonChain { steps })
}
