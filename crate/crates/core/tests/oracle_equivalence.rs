mod common;

use common::oracle::Grid;
use common::{gss_candidate, random_set, rng, set};
use vilenkin_core::scaling::gss_check;
use vilenkin_core::verdict::Status;
use vilenkin_core::wavelet::{
    check_dilation_tiling, check_multiwavelet_set, check_translation_congruence, check_wavelet_set,
};
use vilenkin_core::PieceStream;

fn grid_of(p: u64, tokens: &[&str]) -> Grid {
    let s = set(p as u32, tokens);
    let mut g = Grid::empty(p, 3, 3);
    for c in s.cells_at(3) {
        let index: u64 = c.index().try_into().unwrap();
        assert!(g.insert((index, 3)));
    }
    g
}

#[test]
fn oracle_on_known_sets() {
    assert!(grid_of(2, &["1."]).wavelet());
    assert!(!grid_of(2, &["0.1"]).congruent());
    assert!(grid_of(2, &["0.1"]).tiles());
    assert!(!grid_of(2, &["0."]).tiles());
    assert!(!grid_of(2, &["1.", "0.1"]).tiles());
    assert!(grid_of(2, &["0."]).gss());
    assert!(!grid_of(3, &["0."]).gss());
    let shannon: Vec<Grid> = ["1.", "2."].iter().map(|t| grid_of(3, &[t])).collect();
    assert!(Grid::multiwavelet(&shannon));
    assert!(!Grid::multiwavelet(&[grid_of(3, &["1."]), grid_of(3, &["2.0"])]));
}

#[test]
fn cells_round_trip() {
    let mut r = rng(7);
    for _ in 0..50 {
        let g = random_set(&mut r, 3, 3, 3);
        let back = g.to_set();
        assert_eq!(back.measure(), vilenkin_core::Prime::new(3).unwrap().power(-3) * num_rational::BigRational::from_integer(g.count().into()));
    }
}

fn exact(status: &Status) -> bool {
    matches!(status, Status::Pass | Status::Fail)
}

/// Verdicts of the library and the oracle on one random set.
fn agree(g: &Grid) -> Result<(), String> {
    let s = PieceStream::finite(g.to_set());
    let w = check_wavelet_set(&s, 0);
    let c = check_translation_congruence(&s, 0);
    let t = check_dilation_tiling(std::slice::from_ref(&s), 0);
    for (name, v, o) in [
        ("wavelet", &w, g.wavelet()),
        ("congruence", &c, g.congruent()),
        ("tiling", &t, g.tiles()),
    ] {
        if !exact(&v.status) || v.is_pass() != o {
            return Err(format!("{name}: library {} vs oracle {o} on {:?}", v.status, g.cells()));
        }
    }
    Ok(())
}

#[test]
fn wavelet_verdicts_match_oracle() {
    let mut r = rng(11);
    let mut passes = [0usize; 3];
    for i in 0..300 {
        let p = if i % 3 == 0 { 3 } else { 2 };
        let g = random_set(&mut r, p, 6, 6);
        agree(&g).unwrap();
        passes[0] += g.wavelet() as usize;
        passes[1] += g.congruent() as usize;
        passes[2] += g.tiles() as usize;
    }
    assert!(passes.iter().all(|&n| n > 5), "too few passing samples: {passes:?}");
}

#[test]
fn gss_verdicts_match_oracle() {
    let mut r = rng(13);
    let mut passes = 0;
    for i in 0..150 {
        let p = if i % 3 == 0 { 3 } else { 2 };
        let g = gss_candidate(&mut r, p, 6, 6);
        let v = gss_check(&PieceStream::finite(g.to_set()), 0);
        assert!(exact(&v.status), "{}", v.status);
        assert_eq!(v.is_pass(), g.gss(), "{:?}\n{v}", g.cells());
        passes += g.gss() as usize;
    }
    assert!(passes > 5, "too few passing samples: {passes}");
}

#[test]
fn multiwavelet_verdicts_match_oracle() {
    let mut r = rng(17);
    for _ in 0..60 {
        let sets: Vec<Grid> = (0..2).map(|_| random_set(&mut r, 3, 4, 4)).collect();
        let streams: Vec<PieceStream> = sets.iter().map(|g| PieceStream::finite(g.to_set())).collect();
        let v = check_multiwavelet_set(&streams, 0);
        assert_eq!(v.is_pass(), Grid::multiwavelet(&sets), "{v}");
    }
}
