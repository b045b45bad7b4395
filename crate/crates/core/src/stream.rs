//! Infinite descriptions of sets: disjoint piece streams.
//!
//! A [`PieceStream`] is a finite [`CylinderSet`] plus a list of
//! [`TailFamily`] values (or an opaque generator), each piece disjoint from
//! all the others. The exact total measure is known in closed form, so every
//! finite enumeration comes with an exact bound on what is left.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cylinder::Cylinder;
use crate::error::{Error, Result};
use crate::group::{Point, Prime};
use crate::set::CylinderSet;

/// Default enumeration depth for stream checks.
pub const DEFAULT_DEPTH: u32 = 24;

/// `⨆_{j >= start} (B^{-j·ratio} body ⊕ anchor)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailFamily {
    ratio: u32,
    anchor: Point,
    body: CylinderSet,
    start: u32,
}

/// Where a piece of a stream came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceOrigin {
    Finite,
    Tail { family: usize, index: u32 },
    Generated { index: u32 },
}

impl fmt::Display for PieceOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PieceOrigin::Finite => f.write_str("finite part"),
            PieceOrigin::Tail { family, index } => write!(f, "tail {family} piece {index}"),
            PieceOrigin::Generated { index } => write!(f, "generated piece {index}"),
        }
    }
}

/// Two pieces of a stream that meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamOverlap {
    pub first: (PieceOrigin, Cylinder),
    pub second: (PieceOrigin, Cylinder),
    pub common: Cylinder,
}

impl fmt::Display for StreamOverlap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}) meets {} ({}) in {}",
            self.first.1, self.first.0, self.second.1, self.second.0, self.common
        )
    }
}

/// Total projected (annulus-normalized) measure of a tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectedTail {
    Finite(BigRational),
    /// Infinitely many pieces project onto the same positive-measure region,
    /// or a piece contains θ.
    Unbounded,
}

impl TailFamily {
    pub fn new(ratio: u32, anchor: Point, body: CylinderSet, start: u32) -> Result<Self> {
        if ratio == 0 {
            return Err(Error::Domain("tail ratio must be at least 1".into()));
        }
        if !anchor.in_lattice() {
            return Err(Error::Domain(format!(
                "tail anchor {anchor} has digits at positive positions"
            )));
        }
        if anchor.prime() != body.prime() {
            return Err(Error::PrimeMismatch {
                left: anchor.prime(),
                right: body.prime(),
            });
        }
        Ok(TailFamily {
            ratio,
            anchor,
            body,
            start,
        })
    }

    /// The family `⋃_{j>=1} B^{-j} Ω` of generalized scaling sets.
    pub fn dilates_of(omega: CylinderSet) -> Self {
        let anchor = Point::zero(omega.prime());
        TailFamily {
            ratio: 1,
            anchor,
            body: omega,
            start: 1,
        }
    }

    pub fn ratio(&self) -> u32 {
        self.ratio
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn body(&self) -> &CylinderSet {
        &self.body
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn prime(&self) -> Prime {
        self.body.prime()
    }

    /// Ratio 1 and anchor θ: `B^{-1}` maps piece `j` onto piece `j + 1`.
    pub fn is_dilation_closed(&self) -> bool {
        self.ratio == 1 && self.anchor.is_zero()
    }

    pub fn piece(&self, j: u32) -> CylinderSet {
        self.body
            .dilate(-(j as i64) * self.ratio as i64)
            .translate(&self.anchor)
    }

    /// Exact measure of all pieces with index `>= j`.
    pub fn measure_from(&self, j: u32) -> BigRational {
        let p = self.prime();
        let r = self.ratio as i64;
        self.body.measure() * p.power(-(j as i64) * r) / (BigRational::one() - p.power(-r))
    }

    pub fn total_measure(&self) -> BigRational {
        self.measure_from(self.start)
    }

    /// A cylinder containing every piece with index `> depth`, or `None` for
    /// an empty body.
    pub fn envelope_after(&self, depth: u32) -> Option<Cylinder> {
        let bound = self.body.scale_bound()?;
        let j = (depth + 1).max(self.start) as i64;
        Some(Cylinder::around(&self.anchor, j * self.ratio as i64 - bound))
    }

    /// Checks `body ∩ B^{-jr} body = ∅` for every `j` that can matter; by
    /// dilation covariance this decides disjointness of all pieces.
    pub fn self_overlap(&self) -> Option<StreamOverlap> {
        if self.body.is_empty() {
            return None;
        }
        let split = self.body.annulus_split();
        let r = self.ratio as i64;
        let max_j = match split.theta_neighborhood {
            Some(_) => 1,
            None => {
                let lo = *split.parts.keys().next().expect("nonempty body");
                let hi = *split.parts.keys().next_back().expect("nonempty body");
                (hi - lo) / r
            }
        };
        let i0 = self.start;
        for dj in 1..=max_j as u32 {
            let a = self.piece(i0);
            let b = self.piece(i0 + dj);
            if let Some((ca, cb, common)) = first_meeting(&a, &b) {
                return Some(StreamOverlap {
                    first: (PieceOrigin::Tail { family: 0, index: i0 }, ca),
                    second: (PieceOrigin::Tail { family: 0, index: i0 + dj }, cb),
                    common,
                });
            }
        }
        None
    }

    /// Total measure of the projections `B^{-k}(piece ∩ D_k)` over pieces
    /// with index `> depth`.
    pub fn projected_measure_after(&self, depth: u32) -> ProjectedTail {
        if self.body.is_empty() {
            return ProjectedTail::Finite(BigRational::zero());
        }
        if self.anchor.is_zero() {
            return ProjectedTail::Unbounded;
        }
        let p = self.prime();
        let r = self.ratio as i64;
        let bound = self.body.scale_bound().expect("nonempty body");
        let low = self.anchor.min_position().expect("nonzero anchor");
        let anchor_annulus = 1 - low;
        // From index j_far on, every piece lies in the annulus of the anchor.
        let j_far = Integer::div_ceil(&(low + bound), &r).max(0) as u32;
        let first = (depth + 1).max(self.start);
        let mut total = BigRational::zero();
        let mut j = first;
        while j < j_far {
            match projected_measure(&self.piece(j)) {
                Some(m) => total += m,
                None => return ProjectedTail::Unbounded,
            }
            j += 1;
        }
        total += self.measure_from(j) * p.power(-anchor_annulus);
        ProjectedTail::Finite(total)
    }
}

/// `sum_c μ(c) p^{-k(c)}`: the measure after moving each cylinder into `D_0`;
/// `None` when a cylinder contains θ.
pub fn projected_measure(set: &CylinderSet) -> Option<BigRational> {
    let p = set.prime();
    set.iter()
        .map(|c| c.annulus().map(|k| c.measure() * p.power(-k)))
        .sum()
}

fn first_meeting(a: &CylinderSet, b: &CylinderSet) -> Option<(Cylinder, Cylinder, Cylinder)> {
    for ca in a.iter() {
        for cb in b.iter() {
            if let Some(common) = ca.intersection(cb) {
                return Some((ca.clone(), cb.clone(), common));
            }
        }
    }
    None
}

/// Piece generator for streams without a closed-form structure.
#[derive(Clone)]
pub struct Generator {
    total: BigRational,
    label: String,
    piece: Arc<dyn Fn(u32) -> CylinderSet + Send + Sync>,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("label", &self.label)
            .field("total", &self.total)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum Source {
    Described {
        finite: CylinderSet,
        tails: Vec<TailFamily>,
    },
    Generated(Generator),
}

#[derive(Clone, Debug)]
pub struct PieceStream {
    prime: Prime,
    source: Source,
}

/// The first pieces of a stream.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub depth: u32,
    pub pieces: Vec<(PieceOrigin, CylinderSet)>,
    pub union: CylinderSet,
    /// Exact measure of everything not enumerated.
    pub tail_bound: BigRational,
}

impl Enumeration {
    pub fn is_complete(&self) -> bool {
        self.tail_bound.is_zero()
    }

    /// Every enumerated cylinder with its origin.
    pub fn cylinders(&self) -> impl Iterator<Item = (PieceOrigin, &Cylinder)> + '_ {
        self.pieces
            .iter()
            .flat_map(|(o, s)| s.iter().map(move |c| (*o, c)))
    }
}

impl PieceStream {
    pub fn finite(set: CylinderSet) -> Self {
        PieceStream {
            prime: set.prime(),
            source: Source::Described {
                finite: set,
                tails: Vec::new(),
            },
        }
    }

    /// A finite part plus tail families; rejects overlapping pieces.
    pub fn described(finite: CylinderSet, tails: Vec<TailFamily>) -> Result<Self> {
        let prime = finite.prime();
        if let Some(t) = tails.iter().find(|t| t.prime() != prime) {
            return Err(Error::PrimeMismatch {
                left: prime,
                right: t.prime(),
            });
        }
        let stream = PieceStream::described_unchecked(finite, tails);
        if let Some(overlap) = stream.find_overlap() {
            return Err(Error::Overlap(overlap.to_string()));
        }
        Ok(stream)
    }

    /// A described stream whose pieces have not been checked yet.
    pub(crate) fn described_unchecked(finite: CylinderSet, tails: Vec<TailFamily>) -> Self {
        PieceStream {
            prime: finite.prime(),
            source: Source::Described { finite, tails },
        }
    }

    /// Pieces produced on demand; `total` must be the exact measure of the
    /// union. Disjointness is only checked for enumerated prefixes.
    pub fn generated<F>(prime: Prime, total: BigRational, label: &str, piece: F) -> Self
    where
        F: Fn(u32) -> CylinderSet + Send + Sync + 'static,
    {
        PieceStream {
            prime,
            source: Source::Generated(Generator {
                total,
                label: label.to_string(),
                piece: Arc::new(piece),
            }),
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn as_finite(&self) -> Option<&CylinderSet> {
        match &self.source {
            Source::Described { finite, tails } if tails.is_empty() => Some(finite),
            _ => None,
        }
    }

    pub fn finite_part(&self) -> Option<&CylinderSet> {
        match &self.source {
            Source::Described { finite, .. } => Some(finite),
            Source::Generated(_) => None,
        }
    }

    pub fn tails(&self) -> &[TailFamily] {
        match &self.source {
            Source::Described { tails, .. } => tails,
            Source::Generated(_) => &[],
        }
    }

    pub fn is_generated(&self) -> bool {
        matches!(self.source, Source::Generated(_))
    }

    pub fn total_measure(&self) -> BigRational {
        match &self.source {
            Source::Described { finite, tails } => tails
                .iter()
                .fold(finite.measure(), |acc, t| acc + t.total_measure()),
            Source::Generated(g) => g.total.clone(),
        }
    }

    /// Pieces with index `<= depth` (tail pieces `start..=depth`, generated
    /// pieces `0..=depth`, and the finite part).
    pub fn enumerate(&self, depth: u32) -> std::result::Result<Enumeration, StreamOverlap> {
        let mut pieces = Vec::new();
        match &self.source {
            Source::Described { finite, tails } => {
                if !finite.is_empty() {
                    pieces.push((PieceOrigin::Finite, finite.clone()));
                }
                for (family, t) in tails.iter().enumerate() {
                    for index in t.start..=depth {
                        let piece = t.piece(index);
                        if !piece.is_empty() {
                            pieces.push((PieceOrigin::Tail { family, index }, piece));
                        }
                    }
                }
            }
            Source::Generated(g) => {
                for index in 0..=depth {
                    let piece = (g.piece)(index);
                    if !piece.is_empty() {
                        pieces.push((PieceOrigin::Generated { index }, piece));
                    }
                }
            }
        }
        let mut union = CylinderSet::empty(self.prime);
        for (i, (origin, piece)) in pieces.iter().enumerate() {
            if !union.is_disjoint(piece) {
                for (other_origin, other) in &pieces[..i] {
                    if let Some((a, b, common)) = first_meeting(other, piece) {
                        return Err(StreamOverlap {
                            first: (*other_origin, a),
                            second: (*origin, b),
                            common,
                        });
                    }
                }
            }
            union = union.union(piece);
        }
        let tail_bound = self.total_measure() - union.measure();
        Ok(Enumeration {
            depth,
            pieces,
            union,
            tail_bound,
        })
    }

    /// A set containing every piece not enumerated at `depth`; `None` for
    /// generated streams.
    pub fn tail_envelope(&self, depth: u32) -> Option<CylinderSet> {
        match &self.source {
            Source::Described { tails, .. } => Some(
                CylinderSet::from_cylinders(
                    self.prime,
                    tails.iter().filter_map(|t| t.envelope_after(depth)),
                )
                .expect("same prime"),
            ),
            Source::Generated(_) => None,
        }
    }

    /// Depth to which pieces must be compared so that every overlap of a
    /// described stream shows up.
    fn structural_depth(&self) -> u32 {
        let Source::Described { finite, tails } = &self.source else {
            return DEFAULT_DEPTH;
        };
        if tails.is_empty() {
            return 0;
        }
        let mut k: i64 = finite
            .iter()
            .map(|c| c.resolution().abs())
            .max()
            .unwrap_or(0);
        let mut lcm: i64 = 1;
        for t in tails {
            let body = t.body();
            k = k
                .max(body.max_resolution().unwrap_or(0).abs())
                .max(body.min_resolution().unwrap_or(0).abs())
                .max(body.scale_bound().unwrap_or(0).abs())
                .max(t.anchor().min_position().unwrap_or(0).abs());
            lcm = lcm.lcm(&(t.ratio() as i64));
        }
        tails
            .iter()
            .map(|t| {
                let span = Integer::div_ceil(&(2 * k + lcm + 2), &(t.ratio() as i64));
                t.start() + span as u32
            })
            .max()
            .unwrap_or(0)
    }

    /// First overlap among the pieces, if any.
    pub fn find_overlap(&self) -> Option<StreamOverlap> {
        for (family, t) in self.tails().iter().enumerate() {
            if let Some(mut o) = t.self_overlap() {
                for side in [&mut o.first.0, &mut o.second.0] {
                    if let PieceOrigin::Tail { index, .. } = *side {
                        *side = PieceOrigin::Tail { family, index };
                    }
                }
                return Some(o);
            }
        }
        self.enumerate(self.structural_depth()).err()
    }
}

impl From<CylinderSet> for PieceStream {
    fn from(set: CylinderSet) -> Self {
        PieceStream::finite(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn set(prime: u32, tokens: &[&str]) -> CylinderSet {
        CylinderSet::from_cylinders(
            p(prime),
            tokens.iter().map(|t| {
                let (a, f) = Point::parse_token(p(prime), t).unwrap();
                Cylinder::new(a, f as i64).unwrap()
            }),
        )
        .unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn finite_stream_enumerates_itself() {
        let s = set(3, &["1.", "0.2"]);
        let e = PieceStream::finite(s.clone()).enumerate(5).unwrap();
        assert_eq!(e.union, s);
        assert!(e.tail_bound.is_zero());
    }

    #[test]
    fn geometric_measure() {
        let tail = TailFamily::dilates_of(set(3, &["1."]));
        assert_eq!(tail.total_measure(), q(1, 2));
    }

    #[test]
    fn halving_stream_prefix() {
        let stream = PieceStream::described(
            CylinderSet::empty(p(2)),
            vec![TailFamily::dilates_of(set(2, &["1."]))],
        )
        .unwrap();
        let e = stream.enumerate(3).unwrap();
        assert_eq!(e.union.intervals(), vec![(q(1, 8), q(1, 1))]);
        assert_eq!(e.tail_bound, q(1, 8));
        assert_eq!(stream.total_measure(), q(1, 1));
    }

    #[test]
    fn ternary_stream_prefix() {
        let stream = PieceStream::described(
            CylinderSet::empty(p(3)),
            vec![TailFamily::dilates_of(set(3, &["1."]))],
        )
        .unwrap();
        let e = stream.enumerate(4).unwrap();
        assert_eq!(e.union.measure(), (q(1, 1) - q(1, 81)) / q(2, 1));
        assert_eq!(e.tail_bound, q(1, 81) / q(2, 1));
    }

    #[test]
    fn self_overlapping_tail_rejected() {
        // [1/2, 2) overlaps its own half-dilate.
        let tail = TailFamily::dilates_of(set(2, &["0.1", "1."]));
        assert!(tail.self_overlap().is_some());
        let err = PieceStream::described(CylinderSet::empty(p(2)), vec![tail]).unwrap_err();
        assert!(matches!(err, Error::Overlap(_)));
        let theta = TailFamily::dilates_of(CylinderSet::unit(p(2)));
        assert!(theta.self_overlap().is_some());
    }

    #[test]
    fn finite_and_tail_overlap_rejected() {
        let tail = TailFamily::dilates_of(set(2, &["1."]));
        let err = PieceStream::described(set(2, &["0.0001"]), vec![tail]).unwrap_err();
        assert!(matches!(err, Error::Overlap(_)));
    }

    #[test]
    fn disjointness_check_agrees_with_enumeration() {
        // Bodies spanning several annuli, ratio 2.
        let body = set(2, &["0.01", "10."]);
        let tail = TailFamily::new(2, Point::zero(p(2)), body, 0).unwrap();
        let span = 3 * 4;
        let explicit = (0..span)
            .flat_map(|i| (i + 1..span).map(move |j| (i, j)))
            .any(|(i, j)| !tail.piece(i).is_disjoint(&tail.piece(j)));
        assert_eq!(tail.self_overlap().is_some(), explicit);
    }

    #[test]
    fn anchored_tail_envelope_and_projection() {
        let h = Point::from_index(p(2), 3);
        let tail = TailFamily::new(1, h.clone(), set(2, &["1."]), 1).unwrap();
        let env = tail.envelope_after(4).unwrap();
        for j in 5..12 {
            let piece = tail.piece(j);
            assert!(piece.iter().all(|c| env.contains(c)));
        }
        let ProjectedTail::Finite(m) = tail.projected_measure_after(4) else {
            panic!("finite expected")
        };
        let direct: BigRational = (5..60)
            .map(|j| projected_measure(&tail.piece(j)).unwrap())
            .fold(BigRational::zero(), |a, b| a + b);
        assert!(m >= direct);
        assert!(&m - &direct < q(1, 1 << 50));
    }

    #[test]
    fn generated_stream_tail_bound() {
        let stream = PieceStream::generated(p(2), q(1, 1), "halves", |j| {
            CylinderSet::from_cylinder(Cylinder::new(Point::single(Prime::new(2).unwrap(), j as i64 + 1, 1), j as i64 + 1).unwrap())
        });
        let e = stream.enumerate(2).unwrap();
        assert_eq!(e.union.measure(), q(7, 8));
        assert_eq!(e.tail_bound, q(1, 8));
        assert!(stream.tail_envelope(2).is_none());
    }
}
