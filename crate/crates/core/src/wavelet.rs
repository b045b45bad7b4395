//! Wavelet-set and multiwavelet-set checks: dilation tiling of `G*` and
//! `H⊥`-translation congruence to `U*`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cylinder::Cylinder;
use crate::set::CylinderSet;
use crate::stepfn::EtaFunction;
use crate::stream::{Enumeration, PieceOrigin, PieceStream, ProjectedTail, Source};
use crate::verdict::{decisions, fmt_rational, Verdict, Witness};

/// Number of cylinders quoted in an uncovered-region witness.
const WITNESS_CELLS: usize = 16;

pub const TILING: &str = "dilation tiling";
pub const CONGRUENCE: &str = "translation congruence";

/// `{B^{-k}(Ω ∩ D_k)}` together with the θ flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DilationProjection {
    pub pieces: BTreeMap<i64, CylinderSet>,
    pub theta_neighborhood: Option<Cylinder>,
}

pub fn dilation_projection(s: &CylinderSet) -> DilationProjection {
    let split = s.annulus_split();
    DilationProjection {
        pieces: split
            .parts
            .into_iter()
            .map(|(k, part)| (k, part.dilate(-k)))
            .collect(),
        theta_neighborhood: split.theta_neighborhood,
    }
}

struct Image {
    image: Cylinder,
    source: Cylinder,
    label: String,
}

/// First pair of overlapping images; after canonical sorting an overlap
/// always shows up between neighbours.
fn first_overlap(images: &mut [Image]) -> Option<(&Image, &Image)> {
    images.sort_by(|a, b| a.image.cmp_canonical(&b.image));
    let i = images
        .windows(2)
        .position(|w| w[0].image.intersects(&w[1].image))?;
    Some((&images[i], &images[i + 1]))
}

fn overlap_witness(what: &str, a: &Image, b: &Image) -> Witness {
    let common = a
        .image
        .intersection(&b.image)
        .expect("overlapping images");
    Witness::new(format!(
        "{what} of {} ({}) and {} ({}) share {}",
        a.source, a.label, b.source, b.label, common
    ))
    .with_cylinders([a.source.clone(), b.source.clone(), common.clone()])
    .with_measure(common.measure())
}

fn region_witness(what: &str, region: &CylinderSet) -> Witness {
    Witness::new(format!("{what}: {}", describe_region(region)))
        .with_cylinders(region.iter().take(WITNESS_CELLS).cloned())
        .with_measure(region.measure())
}

fn describe_region(region: &CylinderSet) -> String {
    let iv = region.intervals();
    let shown: Vec<String> = iv
        .iter()
        .take(4)
        .map(|(lo, hi)| format!("[{}, {})", fmt_rational(lo), fmt_rational(hi)))
        .collect();
    let more = if iv.len() > 4 {
        format!(" and {} more intervals", iv.len() - 4)
    } else {
        String::new()
    };
    format!("λ* {}{more}", shown.join(" ∪ "))
}

fn origin_label(set: Option<usize>, origin: PieceOrigin) -> String {
    match set {
        Some(i) => format!("set {i}, {origin}"),
        None => origin.to_string(),
    }
}

fn enumerate_or_fail(s: &PieceStream, depth: u32) -> Result<Enumeration, Verdict> {
    s.enumerate(depth).map_err(|o| {
        Verdict::fail(
            Witness::new(format!("stream pieces overlap: {o}"))
                .with_cylinders([o.first.1.clone(), o.second.1.clone(), o.common.clone()]),
        )
    })
}

/// `H⊥`-translation congruence to `U*`: ρ restricted to the set must be a
/// bijection onto `U*` up to null sets.
pub fn check_translation_congruence(s: &PieceStream, depth: u32) -> Verdict {
    let e = match enumerate_or_fail(s, depth) {
        Ok(e) => e,
        Err(v) => return v,
    };
    let total = s.total_measure();
    let mut images = Vec::new();
    for (origin, c) in e.cylinders() {
        let (image, mult) = c.rho_image();
        if mult > 1 {
            return Verdict::fail(
                Witness::new(format!(
                    "{c} ({origin}) covers {mult} translates of U* and folds onto it {mult} times"
                ))
                .with_cylinders([c.clone(), image]),
            )
            .with_measure("measure", total);
        }
        images.push(Image {
            image,
            source: c.clone(),
            label: origin.to_string(),
        });
    }
    if let Some((a, b)) = first_overlap(&mut images) {
        return Verdict::fail(overlap_witness("ρ-images", a, b)).with_measure("measure", total);
    }
    let covered = CylinderSet::from_cylinders(s.prime(), images.into_iter().map(|i| i.image))
        .expect("same prime");
    let verdict = if e.is_complete() {
        let gap = CylinderSet::unit(s.prime()).subtract(&covered);
        if gap.is_empty() {
            Verdict::pass()
        } else {
            Verdict::fail(region_witness("U* not covered by ρ-images", &gap))
        }
    } else if total > BigRational::one() {
        Verdict::fail(
            Witness::new("total measure exceeds 1, so later pieces must overlap under ρ")
                .with_measure(total.clone()),
        )
    } else if total < BigRational::one() {
        let gap = CylinderSet::unit(s.prime()).subtract(&covered);
        Verdict::fail(
            Witness::new(format!(
                "total measure {} < 1 leaves part of U* uncovered; the gap lies in {}",
                fmt_rational(&total),
                describe_region(&gap)
            ))
            .with_cylinders(gap.iter().take(WITNESS_CELLS).cloned())
            .with_measure(BigRational::one() - &total),
        )
    } else {
        Verdict::certified(e.tail_bound.clone())
    };
    verdict
        .with_measure("measure", total)
        .with_measure("covered", covered.measure())
}

/// Joint dilation tiling: `{B^n Ω_i}` tiles `G*` iff the projections
/// `B^{-k}(Ω_i ∩ D_k)` tile `D_0`.
pub fn check_dilation_tiling(sets: &[PieceStream], depth: u32) -> Verdict {
    let Some(first) = sets.first() else {
        return Verdict::fail(Witness::new("no sets given; D_0 is not covered"));
    };
    let prime = first.prime();
    let tagged = sets.len() > 1;
    let mut images = Vec::new();
    let mut remaining = Some(BigRational::zero());
    for (i, s) in sets.iter().enumerate() {
        let set_tag = tagged.then_some(i);
        let e = match enumerate_or_fail(s, depth) {
            Ok(e) => e,
            Err(v) => return v,
        };
        for (origin, c) in e.cylinders() {
            let Some(k) = c.annulus() else {
                return Verdict::fail(
                    Witness::new(format!(
                        "{c} ({}) contains θ, so its dilates nest",
                        origin_label(set_tag, origin)
                    ))
                    .with_cylinders([c.clone()]),
                );
            };
            images.push(Image {
                image: c.dilate(-k),
                source: c.clone(),
                label: format!("{}, annulus {k}", origin_label(set_tag, origin)),
            });
        }
        match s.source() {
            Source::Described { tails, .. } => {
                for (family, t) in tails.iter().enumerate() {
                    match t.projected_measure_after(depth) {
                        ProjectedTail::Finite(m) => {
                            if let Some(r) = remaining.as_mut() {
                                *r += m;
                            }
                        }
                        ProjectedTail::Unbounded => {
                            return Verdict::fail(
                                Witness::new(format!(
                                    "every piece of tail {family}{} projects onto the same part of D_0",
                                    set_tag.map(|i| format!(" of set {i}")).unwrap_or_default()
                                ))
                                .with_cylinders(t.body().iter().cloned()),
                            );
                        }
                    }
                }
            }
            Source::Generated(_) => {
                if !e.is_complete() {
                    remaining = None;
                }
            }
        }
    }
    if let Some((a, b)) = first_overlap(&mut images) {
        return Verdict::fail(overlap_witness("projections", a, b));
    }
    let covered =
        CylinderSet::from_cylinders(prime, images.into_iter().map(|i| i.image)).expect("same prime");
    let target = CylinderSet::base_annulus(prime);
    let gap = target.subtract(&covered);
    let verdict = match remaining {
        Some(r) if r.is_zero() => {
            if gap.is_empty() {
                Verdict::pass()
            } else {
                Verdict::fail(region_witness("D_0 not covered by projections", &gap))
            }
        }
        Some(r) => {
            let uncovered = gap.measure();
            if r > uncovered {
                Verdict::fail(
                    Witness::new(format!(
                        "later pieces project onto measure {} but only {} of D_0 is left",
                        fmt_rational(&r),
                        fmt_rational(&uncovered)
                    ))
                    .with_measure(r - &uncovered),
                )
            } else if r < uncovered {
                Verdict::fail(
                    Witness::new(format!(
                        "D_0 keeps an uncovered part of measure at least {} inside {}",
                        fmt_rational(&(&uncovered - &r)),
                        describe_region(&gap)
                    ))
                    .with_cylinders(gap.iter().take(WITNESS_CELLS).cloned())
                    .with_measure(uncovered - r),
                )
            } else {
                Verdict::certified(uncovered)
            }
        }
        None if gap.is_empty() => Verdict::fail(Witness::new(
            "D_0 is already covered but the stream has pieces left",
        )),
        None => Verdict::undecided(
            depth,
            format!("D_0 uncovered part {} not yet accounted for", describe_region(&gap)),
        ),
    };
    verdict.with_measure("covered", covered.measure())
}

pub fn check_wavelet_set(s: &PieceStream, depth: u32) -> Verdict {
    Verdict::all(vec![
        (TILING.into(), check_dilation_tiling(std::slice::from_ref(s), depth)),
        (CONGRUENCE.into(), check_translation_congruence(s, depth)),
    ])
}

pub fn check_multiwavelet_set(sets: &[PieceStream], depth: u32) -> Verdict {
    let mut parts = vec![(TILING.to_string(), check_dilation_tiling(sets, depth))];
    for (i, s) in sets.iter().enumerate() {
        parts.push((format!("{CONGRUENCE} of set {i}"), check_translation_congruence(s, depth)));
    }
    let mut v = Verdict::all(parts);
    if let Some(first) = sets.first() {
        let expected = first.prime().get() as usize - 1;
        if sets.len() != expected {
            v = v
                .with_note(format!(
                    "{} sets given, expected p - 1 = {expected}",
                    sets.len()
                ))
                .with_decision(decisions::MULTIWAVELET_COUNT);
        }
    }
    v
}

/// Values of the translate count `f(ω) = Σ_h 1_S(ω ⊖ h)` on `U*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingReport {
    pub min: i64,
    pub max: i64,
    pub measure: BigRational,
    pub resolution: i64,
    pub exact: bool,
    /// When the translates cover `G*`: whether packing and unit measure agree.
    pub equivalence_holds: Option<bool>,
}

pub fn packing_tiling_check(s: &PieceStream, depth: u32) -> Result<PackingReport, Verdict> {
    let e = enumerate_or_fail(s, depth)?;
    let eta = EtaFunction::of_enumeration(s.prime(), &e);
    let measure = s.total_measure();
    let min = eta.values.min();
    let max = eta.values.max();
    let exact = eta.is_exact();
    let equivalence_holds =
        (exact && min >= 1).then(|| (max == 1) == (measure == BigRational::one()));
    Ok(PackingReport {
        min,
        max,
        measure,
        resolution: eta.values.resolution(),
        exact,
        equivalence_holds,
    })
}
