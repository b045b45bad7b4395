//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::process::ExitCode;

use common::{cyl, gss_candidate, prime, random_set, rng, set};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vilenkin_core::group::classify_fiber;
use vilenkin_core::mask::{
    blocked_set_find, check_mask_hypotheses, phi_hat, validate_blocked_set, Cyclotomic, Mask, Scalar,
};
use vilenkin_core::scaling::{
    closure_verify, gss_check, gss_from_wavelet, translate_sum, upsilon_construct, upsilon_hypothesis,
    wavelet_from_gss, INCLUSION, MEASURE, NEIGHBORHOOD, TRANSLATE_IDENTITY,
};
use vilenkin_core::stepfn::EtaFunction;
use vilenkin_core::wavelet::{
    check_multiwavelet_set, check_translation_congruence, check_wavelet_set, CONGRUENCE, TILING,
};
use vilenkin_core::{CylinderSet, PieceStream, Point, Status, Verdict};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fin(s: &CylinderSet) -> PieceStream {
    PieceStream::finite(s.clone())
}

fn exact_pass(v: &Verdict) -> bool {
    v.status == Status::Pass && v.conditions.iter().all(|c| exact_pass(&c.verdict))
}

fn has_evidence(v: &Verdict) -> bool {
    v.all_witnesses()
        .iter()
        .any(|w| !w.cylinders.is_empty() || !w.points.is_empty())
}

fn shannon() -> Outcome {
    for p in [2u32, 3, 5] {
        let family: Vec<CylinderSet> = (1..p).map(|i| set(p, &[&format!("{i}.")])).collect();
        let streams: Vec<PieceStream> = family.iter().map(fin).collect();
        let v = check_multiwavelet_set(&streams, 0);
        ensure!(exact_pass(&v), "p = {p}: Shannon family is not an exact pass: {v}");
        for i in 1..p {
            let mut perturbed = streams.clone();
            perturbed[i as usize - 1] = fin(&set(p, &[&format!("{i}.0")]));
            let v = check_multiwavelet_set(&perturbed, 0);
            ensure!(v.is_fail() && has_evidence(&v), "p = {p}: perturbing set {i} gave {v}");
        }
    }
    Ok("p = 2, 3, 5 pass exactly; every `i.0` perturbation fails with a witness".into())
}

fn single_wavelet_sets() -> Outcome {
    let v = check_wavelet_set(&fin(&set(2, &["1."])), 0);
    ensure!(exact_pass(&v), "[1,2): {v}");

    let v = check_wavelet_set(&fin(&set(2, &["0.1"])), 0);
    let congruence = v.condition(CONGRUENCE).ok_or("no congruence condition")?;
    ensure!(congruence.is_fail(), "[1/2,1) congruence: {congruence}");
    let gap = congruence.witnesses[0].measure.clone();
    ensure!(gap == Some(rat(1, 2)), "[1/2,1) deficit is {gap:?}, not 1/2");

    let v = check_wavelet_set(&fin(&set(2, &["0."])), 0);
    let tiling = v.condition(TILING).ok_or("no tiling condition")?;
    let flagged = tiling
        .witnesses
        .iter()
        .any(|w| w.cylinders.iter().any(|c| c.contains_theta()));
    ensure!(tiling.is_fail() && flagged, "[0,1) tiling: {tiling}");

    let both = set(2, &["1.", "0.1"]);
    let v = check_wavelet_set(&fin(&both), 0);
    let tiling = v.condition(TILING).ok_or("no tiling condition")?;
    let w = tiling.witnesses.first().ok_or("no overlap witness")?;
    let overlap = w.cylinders.len() == 3
        && both.iter().any(|c| *c == w.cylinders[0])
        && both.iter().any(|c| *c == w.cylinders[1]);
    ensure!(tiling.is_fail() && overlap, "[1,2) ∪ [1/2,1) tiling: {tiling}");
    Ok("[1,2) passes; [1/2,1) deficit 1/2; [0,1) θ flag; [1,2) ∪ [1/2,1) overlap witness".into())
}

fn gss_characterization() -> Outcome {
    let unit2 = set(2, &["0."]);
    let v = gss_check(&fin(&unit2), 0);
    ensure!(exact_pass(&v) && v.conditions.len() == 4, "p = 2 U*: {v}");
    let omega = wavelet_from_gss(&unit2);
    ensure!(omega == set(2, &["1."]), "BS \\ S = {omega:?}");
    ensure!(exact_pass(&check_wavelet_set(&fin(&omega), 0)), "[1,2) is not a wavelet set");
    ensure!(exact_pass(&closure_verify(&unit2, &omega)), "closure of [1,2) is not U*");

    let v = gss_check(&fin(&set(3, &["0."])), 0);
    let measure = v.condition(MEASURE).ok_or("no measure condition")?;
    ensure!(measure.is_fail(), "p = 3 U* passes (i)");
    ensure!(measure.status == Status::Fail, "p = 3 U* (i) is not an exact fail");
    let (m, e) = (&measure.measures["measure"], &measure.measures["expected"]);
    ensure!(*m == rat(1, 1) && *e == rat(1, 2), "measures {m} vs {e}");
    for name in [INCLUSION, NEIGHBORHOOD] {
        let c = v.condition(name).ok_or("missing condition")?;
        ensure!(c.is_pass(), "p = 3 U* fails {name}: {c}");
    }
    // η ≡ 1 makes the translate sum 3 against η(Bω) + 1 = 2 everywhere, so
    // (iv) cannot hold alongside (ii) and (iii) here.
    let identity = v.condition(TRANSLATE_IDENTITY).ok_or("missing condition")?;
    let w = identity.witnesses.first().ok_or("(iv) has no witness")?;
    ensure!(w.measure == Some(rat(1, 1)), "(iv) discrepancy {w}");
    Ok("p = 2 U* passes (i)-(iv), BS \\ S = [1,2), closure holds; p = 3 U* fails (i): 1 vs 1/2".into())
}

fn lemma_stream() -> Outcome {
    let stream = gss_from_wavelet(&set(2, &["1."])).map_err(|e| e.to_string())?;
    let e = stream.enumerate(24).map_err(|o| o.to_string())?;
    let tail = prime(2).power(-24);
    ensure!(e.union.measure() == rat(1, 1) - &tail, "enumerated {}", e.union.measure());
    ensure!(e.tail_bound == tail, "tail bound {}", e.tail_bound);
    let v = gss_check(&stream, 24);
    match &v.status {
        Status::PassCertified { uncovered } if *uncovered <= tail => {}
        other => return Err(format!("gss_check gave {other}")),
    }
    Ok("depth 24: measure 1 - 2^-24, tail 2^-24, pass-certified".into())
}

fn upsilon() -> Outcome {
    let u = set(2, &["0.0"]);
    ensure!(upsilon_hypothesis(&u).map_err(|e| e.to_string())?.is_pass(), "[0,1/2) hypothesis");
    let chain = upsilon_construct(&u, 10).map_err(|e| e.to_string())?;
    for step in &chain.steps {
        ensure!(
            step.set.measure() == prime(2).power(-(step.index as i64) - 1),
            "μ(Υ_{}) = {}",
            step.index,
            step.set.measure()
        );
        ensure!(step.congruence.status == Status::Pass, "B^{}Υ_{} congruence", step.index + 1, step.index);
    }

    let u = set(2, &["0.00", "0.11"]);
    ensure!(upsilon_hypothesis(&u).map_err(|e| e.to_string())?.is_pass(), "[0,1/4) ∪ [3/4,1) hypothesis");
    let chain = upsilon_construct(&u, 1).map_err(|e| e.to_string())?;
    let step = &chain.steps[1];
    ensure!(step.set == set(2, &["0.000", "0.111"]), "Υ_1 = {:?}", step.set);
    ensure!(step.congruence.status == Status::Pass, "B²Υ_1 congruence");

    let u = set(2, &["0.00", "0.10"]);
    let v = upsilon_hypothesis(&u).map_err(|e| e.to_string())?;
    let unit = CylinderSet::unit(prime(2));
    let translate = u.translate(&Point::fractional_digit(prime(2), 1));
    let expected = unit.subtract(&u).symmetric_difference(&translate);
    let w = v.witnesses.first().ok_or("no witness")?;
    let cited = CylinderSet::from_cylinders(prime(2), w.cylinders.iter().cloned()).unwrap();
    ensure!(v.is_fail() && cited == expected, "witness {w}, expected {expected:?}");
    ensure!(w.measure == Some(expected.measure()), "witness measure {:?}", w.measure);
    Ok("Υ_0..Υ_10 exact, Υ_1 = [0,1/8) ∪ [7/8,1), bad 𝒰 fails with the symmetric difference".into())
}

fn rational_mask(n: u32, coeffs: &[(i64, i64)]) -> Mask<Cyclotomic> {
    let p = prime(2);
    let cs = coeffs.iter().map(|&(a, b)| Cyclotomic::from_rational(p, rat(a, b))).collect();
    Mask::new(p, n, cs).unwrap()
}

fn masks() -> Outcome {
    let haar = rational_mask(1, &[(1, 2), (1, 2)]);
    let h = check_mask_hypotheses(&haar);
    ensure!(h.theta_is_one() && h.qmf(), "Haar hypotheses: {}", h.verdict());
    ensure!(blocked_set_find(&haar).generates_mra(), "Haar has a blocked set");
    let phi = phi_hat(&haar, 3).map_err(|e| e.to_string())?;
    ensure!(phi.resolution == 0 && phi.values.len() == 8, "φ̂ table shape");
    for (s, v) in phi.values.iter().enumerate() {
        let expected = if s == 0 { Cyclotomic::one(prime(2)) } else { Cyclotomic::zero(prime(2)) };
        ensure!(*v == expected, "φ̂ on [{s},{}) is {v}", s + 1);
    }

    let diagonal = rational_mask(2, &[(1, 2), (0, 1), (0, 1), (1, 2)]);
    ensure!(check_mask_hypotheses(&diagonal).qmf(), "diagonal mask QMF");
    let report = blocked_set_find(&diagonal);
    ensure!(report.blocked == Some(vec![1]), "blocked set {:?}", report.blocked);
    ensure!(!report.generates_mra(), "diagonal mask generates an MRA");
    let cell = vilenkin_core::Cylinder::from_index(prime(2), &BigUint::from(1u32), 1);
    ensure!(cell == cyl(2, "0.1"), "cell 1 is not [1/2,1)");
    validate_blocked_set(&diagonal, &[1]).map_err(|c| format!("revalidation fails at {c}"))?;
    Ok("Haar: QMF, MRA, φ̂ = 1 on [0,1), 0 on [1,8); diagonal: QMF, blocked [1/2,1) revalidated".into())
}

fn random_cyclotomic(r: &mut ChaCha8Rng, p: u32) -> Cyclotomic {
    let coords = (0..p - 1).map(|_| rat(r.gen_range(-4..=4), r.gen_range(1..=4))).collect();
    Cyclotomic::from_coords(prime(p), coords).unwrap()
}

fn random_mask(r: &mut ChaCha8Rng) -> Mask<Cyclotomic> {
    let p = [2u32, 3, 5][r.gen_range(0..3)];
    let n = r.gen_range(1..=3);
    let len = prime(p).pow_u64(n) as usize;
    let coeffs = (0..len)
        .map(|_| if r.gen_bool(0.5) { random_cyclotomic(r, p) } else { Cyclotomic::zero(prime(p)) })
        .collect();
    Mask::new(prime(p), n, coeffs).unwrap()
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(2024);
    let mut passes = [0usize; 4];
    for i in 0..500 {
        let p = if i % 3 == 0 { 3 } else { 2 };
        let g = if i % 2 == 0 { random_set(&mut r, p, 6, 6) } else { gss_candidate(&mut r, p, 6, 6) };
        let s = fin(&g.to_set());
        for (k, (name, v, o)) in [
            ("wavelet", check_wavelet_set(&s, 0), g.wavelet()),
            ("congruence", check_translation_congruence(&s, 0), g.congruent()),
            ("tiling", vilenkin_core::wavelet::check_dilation_tiling(std::slice::from_ref(&s), 0), g.tiles()),
            ("gss", gss_check(&s, 0), g.gss()),
        ]
        .into_iter()
        .enumerate()
        {
            let decided = matches!(v.status, Status::Pass | Status::Fail);
            ensure!(decided && v.is_pass() == o, "set {i} ({:?}): {name} {} vs oracle {o}", g.cells(), v.status);
            passes[k] += o as usize;
        }
    }
    ensure!(passes.iter().all(|&n| n > 0), "no passing samples in some category: {passes:?}");
    for i in 0..200 {
        let m = random_mask(&mut r);
        ensure!(m.values().values == m.values_naive(), "mask {i} differs from the double sum");
    }
    Ok(format!(
        "500 sets agree (oracle passes: wavelet {}, congruence {}, tiling {}, gss {}); 200 masks match the double sum",
        passes[0], passes[1], passes[2], passes[3]
    ))
}

fn random_unit_point(r: &mut ChaCha8Rng, p: u32, res: i64) -> Point {
    let digits: Vec<(i64, u32)> = (1..=res).map(|j| (j, r.gen_range(0..p))).collect();
    Point::from_digits(prime(p), digits).unwrap()
}

fn identities() -> Outcome {
    let mut r = rng(8);
    for _ in 0..10_000 {
        let p = [2u32, 3, 5][r.gen_range(0..3)];
        let lo = r.gen_range(-6..=0);
        let digits: Vec<(i64, u32)> = (lo..=10).map(|j| (j, r.gen_range(0..p))).collect();
        let omega = Point::from_digits(prime(p), digits).unwrap();
        ensure!(omega.rho().rho() == omega.rho(), "ρ∘ρ ≠ ρ at {omega}");
        let unit = omega.rho();
        let j = r.gen_range(0..=8);
        let iterated = (0..j).try_fold(unit.clone(), |w, _| w.i_map()).map_err(|e| e.to_string())?;
        ensure!(iterated == unit.shift(j).rho(), "I^{j} ≠ ρ∘B^{j} at {unit}");
    }

    for p in [2u32, 3, 5] {
        let pts: Vec<Point> = (0..prime(p).pow_u64(4))
            .map(|s| Point::from_scaled_index(prime(p), &s.into(), 4))
            .collect();
        for a in &pts {
            for b in &pts {
                let same = a.i_map().unwrap() == b.i_map().unwrap();
                let class = classify_fiber(a, b).map_err(|e| e.to_string())?;
                ensure!(class.shares_image() == same, "fiber trichotomy fails at {a}, {b}");
            }
        }
    }

    for i in 0..100 {
        let p = if i % 2 == 0 { 2 } else { 3 };
        let s = random_set(&mut r, p, 3, 4).to_set();
        let lhs = translate_sum(&EtaFunction::of_set(&s).values);
        let rhs = EtaFunction::of_set(&s.dilate(1)).values.compose_i();
        ensure!(lhs == rhs, "η identity fails on set {i}: {s:?}");
        for _ in 0..20 {
            let omega = random_unit_point(&mut r, p as u32, 8);
            let at_b = EtaFunction::of_set(&s.dilate(1)).values.value_at(&omega.shift(1).rho()).to_owned();
            ensure!(*lhs.value_at(&omega) == at_b, "η identity fails at {omega}");
        }
    }
    // The same identity evaluated at ω instead of Bω is false in general.
    let s = set(2, &["0.01"]);
    let literal = EtaFunction::of_set(&s.dilate(1)).values;
    ensure!(translate_sum(&EtaFunction::of_set(&s).values) != literal, "literal form unexpectedly holds");

    for i in 0..50 {
        let m = loop {
            let m = random_mask(&mut r);
            if m.prime().get() < 5 || m.n() < 3 {
                break m;
            }
        };
        let p = m.prime();
        let mut cs = m.coeffs().to_vec();
        let rest = cs[1..].iter().fold(Cyclotomic::zero(p), |acc, c| acc.add(c));
        cs[0] = Cyclotomic::one(p).sub(&rest);
        let m = Mask::new(p, m.n(), cs).unwrap();
        let phi = phi_hat(&m, 2).map_err(|e| e.to_string())?;
        let n = m.n() as i64;
        for d in 0..p.pow_u64(1 + m.n()) {
            let omega = Point::from_scaled_index(p, &d.into(), n);
            let lhs = phi.value_at(&omega.shift(1)).ok_or("Bω outside the region")?;
            let rhs = m.eval(&omega).mul(phi.value_at(&omega).ok_or("ω outside the region")?);
            ensure!(*lhs == rhs, "refinement fails for mask {i} on cell {d}");
        }
    }
    Ok("10^4 points; fibers exhaustive at resolution 4; η translate-sum = η_BS(Bω) on 100 sets; refinement on 50 masks".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("Shannon multiwavelet sets", shannon),
        ("single wavelet sets, p = 2", single_wavelet_sets),
        ("generalized scaling set characterization", gss_characterization),
        ("dilation-closure stream at depth 24", lemma_stream),
        ("Υ_n construction", upsilon),
        ("mask suite", masks),
        ("oracle equivalence", oracle_equivalence),
        ("identity suite", identities),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
